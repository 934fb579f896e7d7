//! The acceptance criteria, runnable from tests and the CLI.
//!
//! Each criterion yields one [`CriterionResult`]. Full tier adds the
//! 625-vertex switching graph.

use crate::designs::{builtin, rank8_graph, sqs8, total_graph, whole_graph, QsdParams};
use crate::error::Result;
use crate::feasibility::{converse14_check, enumerate_tables, table_csv, Variant, TABLE_LIMIT};
use crate::graph::Graph;
use crate::oa::{
    build_g, g_family_spectrum, make_field, oa_block_graph, oa_block_spectrum, oa_construct,
    recurrence_a, switching_n, switching_setup,
};
use crate::spectral::{
    integer_spectrum, rank_one_minors, switched_spectrum_formula, verify_three_ev, SpectrumSpec,
};
use crate::wl::{coherent_rank, verify_cc_axioms, wl2_stabilize, CoherentConfig};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Fast,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        write!(f, "{tag} [{}] {}: {}", self.id, self.name, self.detail)
    }
}

pub const NAMES: [&str; 9] = [
    "small-rank-oracles",
    "rank8-symmetric-design",
    "rank9-whole-graph",
    "rank9-total-graph",
    "switching-g-7-16",
    "switching-g-12-25",
    "table-reproduction",
    "converse14-example",
    "property-suites",
];

/// A graph of the acceptance corpus with its expected data.
struct Instance {
    name: &'static str,
    graph: Graph,
    /// `(θ₀, θ₁, θ₂)` for integral members of 𝒢₃.
    theta: Option<(i64, i64, i64)>,
    /// `(s, p)` for the rank-one certificate.
    sp: Option<(i64, i64)>,
    rank: usize,
}

fn corpus(tier: Tier) -> Result<Vec<Instance>> {
    let mut out = vec![
        Instance { name: "petersen", graph: Graph::petersen(), theta: Some((3, 1, -2)), sp: Some((-1, -2)), rank: 3 },
        Instance { name: "K13", graph: Graph::complete_bipartite(1, 3), theta: None, sp: None, rank: 5 },
        Instance { name: "K23", graph: Graph::complete_bipartite(2, 3), theta: None, sp: None, rank: 6 },
        Instance {
            name: "cone(petersen)",
            graph: Graph::petersen().cone(),
            theta: Some((5, 1, -2)),
            sp: Some((-1, -2)),
            rank: 6,
        },
        Instance {
            name: "rank8(2)",
            graph: rank8_graph(&builtin("fano-complement")?)?,
            theta: Some((8, 1, -2)),
            sp: Some((-1, -2)),
            rank: 8,
        },
        Instance {
            name: "W5(all-6-of-8)",
            graph: whole_graph(&builtin("all-6-of-8")?, 5)?,
            theta: Some((21, 5, -2)),
            sp: Some((3, -10)),
            rank: 9,
        },
        Instance { name: "T2(sqs8)", graph: total_graph(&sqs8(), 2)?, theta: Some((14, 2, -2)), sp: Some((0, -4)), rank: 9 },
        Instance { name: "G(7,16)", graph: build_g(7, 16)?, theta: Some((121, 9, -7)), sp: Some((2, -63)), rank: 2048 },
    ];
    if tier == Tier::Full {
        out.push(Instance {
            name: "G(12,25)",
            graph: build_g(12, 25)?,
            theta: Some((313, 13, -12)),
            sp: Some((1, -156)),
            rank: 15625,
        });
    }
    Ok(out)
}

fn result(id: u8, ok: bool, detail: String) -> CriterionResult {
    CriterionResult {
        id,
        name: NAMES[id as usize - 1],
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn from_outcome(id: u8, outcome: Result<(bool, String)>) -> CriterionResult {
    match outcome {
        Ok((ok, detail)) => result(id, ok, detail),
        Err(e) => result(id, false, format!("error: {e}")),
    }
}

fn c1() -> Result<(bool, String)> {
    let cases = [
        ("petersen", Graph::petersen(), 3),
        ("K13", Graph::complete_bipartite(1, 3), 5),
        ("K23", Graph::complete_bipartite(2, 3), 6),
        ("cone(petersen)", Graph::petersen().cone(), 6),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g, want) in cases {
        let got = coherent_rank(&g)?;
        ok &= got == want;
        parts.push(format!("{name}={got}"));
    }
    Ok((ok, parts.join(" ")))
}

fn spectrum_and_rank(
    g: &Graph,
    theta: (i64, i64, i64),
    want: (usize, usize),
) -> Result<(bool, Option<SpectrumSpec>, CoherentConfig)> {
    let spec = integer_spectrum(g, theta.0, theta.1, theta.2)?;
    let spec_ok = spec.map(|s| (s.m1, s.m2)) == Some(want);
    Ok((spec_ok, spec, wl2_stabilize(g)?))
}

fn c2() -> Result<(bool, String)> {
    let g = rank8_graph(&builtin("fano-complement")?)?;
    let (spec_ok, spec, cc) = spectrum_and_rank(&g, (8, 1, -2), (6, 7))?;
    let ok = g.order() == 14 && spec_ok && cc.rank() == 8 && cc.type_matrix() == [vec![2, 2], vec![2, 2]];
    Ok((ok, format!("n={} spectrum={} rank={} type={:?}", g.order(), show(spec), cc.rank(), cc.type_matrix())))
}

fn show(spec: Option<SpectrumSpec>) -> String {
    spec.map_or_else(|| "none".to_string(), |s| s.to_string())
}

fn degree_string(g: &Graph) -> String {
    let mut hist = std::collections::BTreeMap::new();
    for d in g.degrees() {
        *hist.entry(d).or_insert(0usize) += 1;
    }
    hist.iter().rev().map(|(d, c)| format!("{d}^{c}")).collect::<Vec<_>>().join(",")
}

fn c3() -> Result<(bool, String)> {
    let g = whole_graph(&builtin("all-6-of-8")?, 5)?;
    let (spec_ok, spec, cc) = spectrum_and_rank(&g, (21, 5, -2), (7, 28))?;
    let degrees = degree_string(&g);
    // Fibres: 8 points then 28 blocks.
    let ty = cc.type_matrix();
    let ok = spec_ok && degrees == "28^8,18^28" && cc.rank() == 9 && ty == [vec![2, 2], vec![2, 3]];
    Ok((ok, format!("spectrum={} degrees={degrees} rank={} type={ty:?}", show(spec), cc.rank())))
}

fn c4() -> Result<(bool, String)> {
    let g = total_graph(&sqs8(), 2)?;
    let cert = verify_three_ev(&g, 0, -4)?;
    let spec = cert.and_then(|c| c.spec);
    let rank = coherent_rank(&g)?;
    let ok = g.order() == 22 && spec.map(|s| (s.theta0, s.theta1, s.theta2)) == Some((14, 2, -2)) && rank == 9;
    Ok((ok, format!("n={} spectrum={} rank={rank}", g.order(), show(spec))))
}

fn switching(m: usize, n: usize, theta: (i64, i64, i64), want_rank: usize) -> Result<(bool, String)> {
    let start = Instant::now();
    let big_n = switching_n(m as i64, n as i64).expect("switching number exists") as usize;
    let (block, sigma) = switching_setup(m, n, big_n)?;
    let g = block.switch(&sigma)?;
    let predicted = g_family_spectrum(m as i64, n as i64).expect("integral multiplicities");
    let direct = integer_spectrum(&g, theta.0, theta.1, theta.2)?;
    let base = oa_block_spectrum(m as i64, n as i64).expect("integral multiplicities").multiset();
    let formula = switched_spectrum_formula(&block, &sigma, &base)?;
    let rank = coherent_rank(&g)?;
    let spec_ok = direct == Some(predicted) && formula == predicted.multiset();
    let mut detail = format!(
        "n={} N={big_n} spectrum={} formula={} rank={rank} time={:.1}s",
        g.order(),
        show(direct),
        formula,
        start.elapsed().as_secs_f64()
    );
    if rank != want_rank {
        detail += &format!(" rank-deviation: computed {rank}, expected {want_rank}");
    }
    Ok((spec_ok && rank == want_rank, detail))
}

const GOLDEN: [&str; 4] = [
    include_str!("../tests/golden/table2.csv"),
    include_str!("../tests/golden/table3.csv"),
    include_str!("../tests/golden/table4.csv"),
    include_str!("../tests/golden/table5.csv"),
];

fn c7() -> Result<(bool, String)> {
    let start = Instant::now();
    let tables = enumerate_tables(TABLE_LIMIT);
    let mut ok = true;
    let mut parts = Vec::new();
    for ((class, rows), golden) in tables.iter().zip(GOLDEN) {
        let same = table_csv(rows) == golden;
        ok &= same;
        parts.push(format!("class{class}={}{}", rows.len(), if same { "" } else { "(mismatch)" }));
    }
    Ok((ok, format!("{} time={:.1}s", parts.join(" "), start.elapsed().as_secs_f64())))
}

fn c8() -> Result<(bool, String)> {
    let p = QsdParams::new(85, 35, 34, 204, 84, 10, 15);
    let r = converse14_check(&p, 4, -11, Variant::Ii)?;
    let ok = r.passed() && r.theta0 == Some(119) && r.degrees == [(289, 1), (169, 85), (64, 204)];
    Ok((ok, format!("conditions={} theta0={:?} degrees={:?}", r.passed(), r.theta0, r.degrees)))
}

fn c9(tier: Tier) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for inst in corpus(tier)? {
        let cc = wl2_stabilize(&inst.graph)?;
        let report = verify_cc_axioms(&cc);
        if !report.passed() {
            failures.push(format!("{}: axioms {:?}", inst.name, report.failures));
        }
        if cc.rank() != inst.rank {
            failures.push(format!("{}: rank {} != {}", inst.name, cc.rank(), inst.rank));
        }
        let n = inst.graph.order();
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let r = coherent_rank(&inst.graph.permuted(&perm)?)?;
            if r != cc.rank() {
                failures.push(format!("{}: relabeled rank {r}", inst.name));
            }
        }
        if let Some((s, p)) = inst.sp {
            let cert = verify_three_ev(&inst.graph, s, p)?;
            if cert.is_none() || !rank_one_minors(&inst.graph, s, p) {
                failures.push(format!("{}: rank-one certificate", inst.name));
            }
            if matches!(cc.rank(), 4 | 7) {
                failures.push(format!("{}: certified with rank {}", inst.name, cc.rank()));
            }
            if let (Some(t), Some(c)) = (inst.theta, cert) {
                let got = c.spec.map(|sp| (sp.theta0, sp.theta1, sp.theta2));
                if got != Some(t) {
                    failures.push(format!("{}: certified θ {got:?}", inst.name));
                }
            }
        }
    }
    for (m, p, e) in [(2usize, 3u64, 1u32), (3, 2, 2), (7, 2, 4)] {
        let f = make_field(p, e)?;
        let q = f.order() as i64;
        let g = oa_block_graph(&oa_construct(m, &f)?);
        let want = oa_block_spectrum(m as i64, q);
        let got = match want {
            Some(w) => integer_spectrum(&g, w.theta0, w.theta1, w.theta2)?,
            None => None,
        };
        if got.is_none() || got != want {
            failures.push(format!("OA({m},{q}) spectrum"));
        }
    }
    for k in 0..=20 {
        let (a, b) = (recurrence_a(k)? as i128, recurrence_a(k + 1)? as i128);
        let root = b - 2 * a;
        if 3 * (a * a + 2) != root * root || root % 2 == 0 {
            failures.push(format!("odd-square identity at k={k}"));
        }
    }
    let ok = failures.is_empty();
    let detail = if ok { "all properties hold".to_string() } else { failures.join("; ") };
    Ok((ok, detail))
}

/// Runs one criterion (1-based).
pub fn run_criterion(id: u8, tier: Tier) -> CriterionResult {
    match id {
        1 => from_outcome(1, c1()),
        2 => from_outcome(2, c2()),
        3 => from_outcome(3, c3()),
        4 => from_outcome(4, c4()),
        5 => from_outcome(5, switching(7, 16, (121, 9, -7), 2048)),
        6 if tier == Tier::Fast => CriterionResult {
            id: 6,
            name: NAMES[5],
            status: Status::Skipped,
            detail: "full tier only".into(),
        },
        6 => from_outcome(6, switching(12, 25, (313, 13, -12), 15625)),
        7 => from_outcome(7, c7()),
        8 => from_outcome(8, c8()),
        9 => from_outcome(9, c9(tier)),
        _ => panic!("criterion ids run from 1 to 9"),
    }
}

pub fn run_all(tier: Tier) -> Vec<CriterionResult> {
    (1..=9).map(|id| run_criterion(id, tier)).collect()
}
