use std::io::Write;

use torical::checks;

#[test]
fn acceptance() {
    let results = checks::run_all();
    // Straight to the stdout handle so the lines survive the harness capture.
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for r in &results {
        writeln!(out, "{}", r.line()).unwrap();
    }
    drop(out);
    assert_eq!(results.len(), 12);
    let failed: Vec<usize> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
