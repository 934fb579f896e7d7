//! One line per acceptance criterion; exits nonzero if any fails.
//! Set `G3_TIER=fast` to skip the full-tier criterion.

use g3_core::acceptance::{run_criterion, Tier};

fn main() {
    let tier = match std::env::var("G3_TIER").as_deref() {
        Ok("fast") => Tier::Fast,
        _ => Tier::Full,
    };
    let mut failed = 0;
    for id in 1..=9 {
        let r = run_criterion(id, tier);
        println!("{r}");
        failed += usize::from(!r.passed());
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
