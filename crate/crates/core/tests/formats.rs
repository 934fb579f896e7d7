use g3_core::designs::{ingest_design, IncidenceStructure};
use g3_core::graph::Graph;
use g3_core::wl::wl2_stabilize;
use proptest::prelude::*;

proptest! {
    #[test]
    fn graph_text_round_trip(n in 1usize..20, bits in proptest::collection::vec(any::<bool>(), 190)) {
        let mut it = bits.into_iter();
        let g = Graph::from_fn(n, |_, _| it.next().unwrap());
        let text = g.to_text();
        prop_assert_eq!(Graph::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn incidence_round_trip(v in 1usize..8, b in 1usize..8, seed in any::<u64>()) {
        // Every block gets point `j % v` so no column is empty.
        let m: Vec<bool> = (0..v * b)
            .map(|i| {
                let (p, j) = (i / b, i % b);
                p == j % v || (seed >> (i % 64)) & 1 == 1
            })
            .collect();
        let inc = IncidenceStructure::new(v, b, m).unwrap();
        prop_assert_eq!(IncidenceStructure::parse(&inc.to_text()).unwrap(), inc);
    }
}

#[test]
fn design_file_ingest() {
    let dir = tempfile_dir();
    let path = dir.join("fano.txt");
    let f = g3_core::designs::fano();
    std::fs::write(&path, f.to_text()).unwrap();
    assert_eq!(ingest_design(&path).unwrap(), f);
    std::fs::write(&path, "2 2\n10\n0x\n").unwrap();
    assert!(ingest_design(&path).is_err());
    std::fs::remove_dir_all(dir).unwrap();
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("g3-formats-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn closure_serialization_is_deterministic() {
    let g = Graph::petersen().cone();
    let a = wl2_stabilize(&g).unwrap().to_text(true);
    let b = wl2_stabilize(&g).unwrap().to_text(true);
    assert_eq!(a, b);
    assert!(a.starts_with("rank 6\n"));
}
