//! Run the built-in self-test from library code.

use dicing::verify::selftest;

fn main() -> std::process::ExitCode {
    let report = selftest::run();
    for c in &report.checks {
        println!("{:<30} {}  {}", c.name, if c.passed { "ok  " } else { "FAIL" }, c.detail);
    }
    if report.all_passed() {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}
