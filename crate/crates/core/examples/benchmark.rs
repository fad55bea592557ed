//! Setup costs and keystream throughput. Build with --release.

use dicing::cli::run_bench;

fn main() {
    let mb = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(256);
    let r = run_bench(mb);
    println!("keysetup  {:?}", r.keysetup);
    println!("ivsetup   {:?}", r.ivsetup);
    println!(
        "keystream {:.1} MB/s, {:.1} cycles/byte at {:.2} GHz",
        r.bytes_per_second() / 1e6,
        r.cycles_per_byte(),
        r.cpu_hz_estimate / 1e9
    );
}
