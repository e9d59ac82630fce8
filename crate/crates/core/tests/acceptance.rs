//! Runs every acceptance criterion and prints one PASS/FAIL line each.

use qperm::acceptance::*;

fn main() {
    let criteria: [fn() -> CriterionReport; 11] = [
        criterion_01,
        criterion_02,
        criterion_03,
        criterion_04,
        criterion_05,
        criterion_06,
        criterion_07,
        criterion_08,
        criterion_09,
        criterion_10,
        criterion_11,
    ];
    let mut failed = 0;
    for criterion in criteria {
        let report = criterion();
        println!("{report}");
        failed += usize::from(!report.passed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
