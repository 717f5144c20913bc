use voa_modular::verify::run_all;

#[test]
fn acceptance() {
    let results = run_all(true);
    assert_eq!(results.len(), 15);
    for r in &results {
        println!("{:>2} {} {}: {}", r.id, if r.passed { "PASS" } else { "FAIL" }, r.title, r.detail);
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}
