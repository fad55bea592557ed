//! Brute-force the periods of the scaled-down generator and compare them
//! with the closed form.
//!
//! ```text
//! cargo run --release --example mini_period -- 7 5 12
//! ```

use dicing::verify::{mini_period_experiment, MiniParams};

fn main() {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let configs = if args.len() == 3 {
        vec![(args[0], args[1], args[2])]
    } else {
        vec![(3, 2, 4), (5, 3, 8), (7, 5, 7), (7, 5, 8), (7, 5, 12)]
    };
    println!("degrees     dice period  step counts            gcd  omega period (measured / formula)  u period");
    for (d1, d2, d3) in configs {
        let params = match MiniParams::new(d1, d2, d3) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("({d1},{d2},{d3}): {e}");
                continue;
            }
        };
        let r = mini_period_experiment(&params);
        println!(
            "({d1},{d2},{d3}){:<4} {:>11}  {:<22} {:>3}  {:>12} / {:<12} {:>5}  {:>8}",
            "",
            r.measured_controller_period,
            format!("{:?}", r.step_counts),
            r.gcd_divisor,
            r.measured_omega_period,
            r.formula_period,
            if r.matches { "ok" } else { "MISMATCH" },
            r.measured_u_period,
        );
    }
}
