//! The reduced variants and the 256-bit projector variant side by side.

use dicing::verify::statistical_suite;
use dicing::{Dicing, Variant};

fn main() {
    let key = [7u8; 16];
    let iv = [9u8; 32];
    for variant in Variant::ALL {
        let mut cipher = Dicing::new(&key, &iv, variant).expect("valid sizes");
        let head = cipher.keystream(16);
        let rest = cipher.keystream(1 << 20);
        let report = statistical_suite(&rest).expect("1 MiB stream");
        let steps: Vec<u32> = {
            let mut st = *cipher.state();
            (0..12).map(|_| st.clock().a).collect()
        };
        println!(
            "{:<9} z1 = {}  next steps a = {:?}  stats {}",
            variant.name(),
            hex::encode(head),
            steps,
            if report.all_passed() { "pass" } else { "FAIL" }
        );
    }
}
