//! Randomness batteries, avalanche and step uniformity on live keystream.

use dicing::init::ivsetup;
use dicing::keyschedule::KeyMaterial;
use dicing::verify::{
    avalanche_test, full_scale_step_distribution, linear_complexity, statistical_suite,
    MIN_STREAM_BYTES,
};
use dicing::{Dicing, EngineState, InitVector, Variant};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let key = [0x11u8; 16];
    let iv = [0x22u8; 32];
    let stream = Dicing::new(&key, &iv, Variant::Standard)
        .expect("valid sizes")
        .keystream(MIN_STREAM_BYTES);
    let report = statistical_suite(&stream).expect("1 MiB stream");
    for o in &report.outcomes {
        println!(
            "{:<16} statistic {:>12.4}  p {:.4}  {}",
            o.name,
            o.statistic,
            o.p_value,
            if o.passed { "pass" } else { "FAIL" }
        );
    }

    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let a = avalanche_test(&mut rng, 200, Variant::Standard);
    println!("avalanche: mean {:.4} over {} IV-bit flips", a.mean, a.trials);

    let km = KeyMaterial::new(&key).expect("16-byte key");
    let mut st = EngineState::new(&ivsetup(&km, &InitVector(iv)), Variant::Standard);
    let d = full_scale_step_distribution(&mut st, 1_000_000);
    println!("step sizes: chi2 {:.2} ({:+.2} sigma), counts {:?}", d.chi2, d.sigmas, d.counts);

    let bits: Vec<bool> = stream[..256].iter().flat_map(|b| (0..8).map(move |i| b >> i & 1 == 1)).collect();
    println!("linear complexity of first 2048 bits: {}", linear_complexity(&bits));
}
