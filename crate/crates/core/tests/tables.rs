use g3_core::feasibility::{enumerate_tables, search, table_csv, ClassTag, TABLE_LIMIT};

const GOLDEN: [&str; 4] = [
    include_str!("golden/table2.csv"),
    include_str!("golden/table3.csv"),
    include_str!("golden/table4.csv"),
    include_str!("golden/table5.csv"),
];

#[test]
fn tables_match_golden_files() {
    let tables = enumerate_tables(TABLE_LIMIT);
    for ((class, rows), golden) in tables.iter().zip(GOLDEN) {
        assert_eq!(table_csv(rows), golden, "class {class}");
    }
}

#[test]
fn cubic_class_scans_are_empty() {
    assert!(search(ClassTag::C3b, 50).is_empty());
    assert!(search(ClassTag::C4a, 30).is_empty());
}

#[test]
fn small_search_finds_six_of_eight() {
    let rows = search(ClassTag::C3a, 10);
    assert!(rows.iter().any(|r| r.csv() == "8,6,15,28,21,4,5,21,5,-2,Y,builtin:all-6-of-8"));
}
