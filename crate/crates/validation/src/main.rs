use std::process::ExitCode;

fn main() -> ExitCode {
    let results = itqsl_validation::evaluate_all();
    for c in &results {
        println!("{}", c.line());
    }
    let failed = results.iter().filter(|c| !c.outcome.pass).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
