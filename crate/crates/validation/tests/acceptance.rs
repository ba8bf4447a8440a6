//! Prints one line per criterion (`-- --nocapture`) and fails if any fails.

#[test]
fn acceptance_criteria() {
    let results = itqsl_validation::evaluate_all();
    for c in &results {
        println!("{}", c.line());
    }
    let failed: Vec<&str> = results.iter().filter(|c| !c.outcome.pass).map(|c| c.name).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
