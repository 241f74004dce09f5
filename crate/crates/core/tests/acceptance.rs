//! Runs every acceptance criterion at its stated tolerance and prints one
//! line per criterion. Set MKDV_CRITERIA=1,4,9 to run a subset.

use mkdv::verify::{run_criterion, suite_ids};

fn main() {
    let selected = std::env::var("MKDV_CRITERIA").unwrap_or_else(|_| "all".into());
    let ids = suite_ids(&selected).expect("MKDV_CRITERIA must be 'all' or a list of criterion numbers");
    println!("running {} acceptance criteria", ids.len());
    let mut failed = Vec::new();
    for id in ids {
        let r = run_criterion(id, 0);
        println!("{}", r.summary_line());
        for m in r.measurements.iter().filter(|m| !m.passed) {
            println!("       failed check: {} = {:e} (tolerance {:e})", m.label, m.measured, m.tolerance);
        }
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
