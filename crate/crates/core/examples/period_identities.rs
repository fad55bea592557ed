//! Exact big-integer checks behind the full-scale period estimate.

use dicing::verify::check_prop1_arithmetic;

fn main() {
    let report = check_prop1_arithmetic();
    for c in &report.checks {
        println!("[{}] {}: {}", if c.holds { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    println!(
        "congruence fails with exponent 24 and holds with 124: {}",
        report.printed_exponent_is_typo
    );
    println!(
        "combiner period n (2^128 - 1) / 3 has {} bits:\n  {}",
        report.combiner_period.bits(),
        report.combiner_period
    );
}
