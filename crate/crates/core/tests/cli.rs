use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dicing::keyschedule::{KeyMaterial, SBox};
use dicing::verify::selftest::{self, KAT_IV, KAT_KEY, KAT_STREAM};
use dicing::{Dicing, Variant};

const KEY: &str = "000102030405060708090a0b0c0d0e0f";
const IV: &str = "202122232425262728292a2b2c2d2e2f303132333435363738393a3b3c3d3e3f";

fn dicing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicing"))
        .args(args)
        .output()
        .expect("spawn dicing")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn keystream_hex_is_default_and_matches_library() {
    let o = dicing(&["keystream", "--key", KEY, "--iv", IV, "--len", "32"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), hex::encode(KAT_STREAM));
    let o2 = dicing(&["keystream", "--key", KEY, "--iv", IV, "--len", "32", "--hex"]);
    assert_eq!(o.stdout, o2.stdout);
}

#[test]
fn keystream_raw_bytes() {
    let o = dicing(&["keystream", "--key", KEY, "--iv", IV, "--len", "100", "--raw"]);
    assert!(o.status.success());
    let want = Dicing::new(&KAT_KEY, &KAT_IV, Variant::Standard).unwrap().keystream(100);
    assert_eq!(o.stdout, want);
}

#[test]
fn keystream_modes() {
    for v in Variant::ALL {
        let o = dicing(&["keystream", "--key", KEY, "--iv", IV, "--len", "40", "--raw", "--mode", v.name()]);
        assert!(o.status.success(), "{v}");
        assert_eq!(o.stdout, Dicing::new(&KAT_KEY, &KAT_IV, v).unwrap().keystream(40));
    }
    let o = dicing(&["keystream", "--key", KEY, "--iv", IV, "--len", "4", "--mode", "r9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn zero_length_keystream_is_empty() {
    let o = dicing(&["keystream", "--key", KEY, "--iv", IV, "--len", "0"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn short_iv_is_zero_padded() {
    let o = dicing(&["keystream", "--key", KEY, "--iv", "2021", "--len", "16", "--raw"]);
    assert!(o.status.success());
    let mut iv = [0u8; 32];
    iv[..2].copy_from_slice(&[0x20, 0x21]);
    assert_eq!(o.stdout, Dicing::new(&KAT_KEY, &iv, Variant::Standard).unwrap().keystream(16));
}

#[test]
fn keystream_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ks.bin");
    let o = dicing(&["keystream", "--key", KEY, "--iv", IV, "--len", "64", "--raw", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap().len(), 64);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["keystream", "--key", KEY, "--len", "4"],
        vec!["keystream", "--key", "00ff", "--iv", IV, "--len", "4"],
        vec!["keystream", "--key", "zz", "--iv", IV, "--len", "4"],
        vec!["keystream", "--key", KEY, "--iv", &"00".repeat(33), "--len", "4"],
        vec!["keystream", "--key", KEY, "--iv", IV, "--len", "4", "--hex", "--raw"],
        vec!["bench", "--mb", "0"],
        vec!["frobnicate"],
    ] {
        let o = dicing(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    let o = dicing(&["--help"]);
    assert!(o.status.success());
    for sub in ["keystream", "encrypt", "decrypt", "selftest", "bench", "constants"] {
        assert!(stdout(&o).contains(sub), "{sub}");
    }
}

fn roundtrip(dir: &Path, size: usize, key: &str) {
    let plain: Vec<u8> = (0..size).map(|i| (i * 31 + 7) as u8).collect();
    let p = dir.join(format!("plain{size}"));
    let c = dir.join(format!("cipher{size}"));
    let d = dir.join(format!("decrypted{size}"));
    fs::write(&p, &plain).unwrap();
    let enc = dicing(&["encrypt", "--key", key, "--iv", IV, "--in", p.to_str().unwrap(), "--out", c.to_str().unwrap()]);
    assert!(enc.status.success(), "{}", String::from_utf8_lossy(&enc.stderr));
    let cipher = fs::read(&c).unwrap();
    assert_eq!(cipher.len(), size);
    if size > 0 {
        assert_ne!(cipher, plain);
    }
    let dec = dicing(&["decrypt", "--key", key, "--iv", IV, "--in", c.to_str().unwrap(), "--out", d.to_str().unwrap()]);
    assert!(dec.status.success());
    assert_eq!(fs::read(&d).unwrap(), plain, "size {size}");
}

#[test]
fn encrypt_decrypt_roundtrip_sizes() {
    let dir = tempfile::tempdir().unwrap();
    for size in [0, 1, 15, 16, 17, 1_000_000] {
        roundtrip(dir.path(), size, KEY);
    }
    roundtrip(dir.path(), 4097, &"a5".repeat(32));
}

#[test]
fn missing_input_is_an_io_error_and_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = dicing(&["encrypt", "--key", KEY, "--iv", IV, "--in", dir.path().join("nope").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn constants_output() {
    let o = dicing(&["constants"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("9a044dcc2c81f9286587c050282541e1049495a3c69e39a5bf93b992b5618ef3"));
    assert!(s.contains("p1 exponents: 127 92 89 44 41 3 0"));
    assert!(s.contains("p  exponents: 8 6 5 1 0"));
    assert!(s.contains("sha256"));
}

#[test]
fn selftest_passes() {
    let o = dicing(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("[FAIL]"));
}

#[test]
fn corrupted_sbox_fails_named_check() {
    let km = KeyMaterial::new(&KAT_KEY).unwrap();
    let mut table = *km.sbox().table();
    table.swap(0, 1);
    let report = selftest::run_with_key_material(km.with_sbox(SBox::from_table(table)));
    assert!(!report.all_passed());
    let failed = report.failed();
    assert!(failed.contains(&"S-box table"), "{failed:?}");
    assert!(failed.contains(&"known-answer vector"), "{failed:?}");
}

#[test]
fn bench_reports_three_lines() {
    let o = dicing(&["bench", "--mb", "1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    for label in ["Keysetup", "IVsetup", "Keystream rate"] {
        assert!(s.contains(label), "{label}");
    }
}

#[test]
fn hex_output_decodes_to_raw_output() {
    let h = dicing(&["keystream", "--key", KEY, "--iv", IV, "--len", "1000", "--mode", "r3"]);
    let r = dicing(&["keystream", "--key", KEY, "--iv", IV, "--len", "1000", "--mode", "r3", "--raw"]);
    let text = stdout(&h);
    assert!(text.trim().chars().all(|c| c.is_ascii_digit() || ('a'..='f').contains(&c)));
    assert_eq!(hex::decode(text.trim()).unwrap(), r.stdout);
}

#[test]
fn constants_reparse_and_are_stable() {
    let a = stdout(&dicing(&["constants"]));
    let b = stdout(&dicing(&["constants"]));
    assert_eq!(a, b);
    let field = |label: &str| {
        a.lines()
            .find_map(|l| l.trim().strip_prefix(label))
            .map(|v| hex::decode(v.trim()).unwrap())
            .unwrap()
    };
    let le = field("little-endian hex:");
    let mut be = field("big-endian hex:");
    be.reverse();
    assert_eq!(le, dicing::init::CONSTANT_C.to_vec());
    assert_eq!(be, le);
    let p1: Vec<u32> = a
        .lines()
        .find_map(|l| l.strip_prefix("p1 exponents:"))
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(p1, dicing::gf2x::expand_polynomial(&dicing::gf2x::POLY_P1));
}

/// Peak resident set of a running child, polled from /proc until it exits.
fn peak_rss_kib(child: &mut std::process::Child) -> Option<u64> {
    let status_path = format!("/proc/{}/status", child.id());
    let mut peak = None;
    loop {
        if let Ok(s) = fs::read_to_string(&status_path) {
            if let Some(kib) = s
                .lines()
                .find_map(|l| l.strip_prefix("VmHWM:"))
                .and_then(|v| v.trim().trim_end_matches("kB").trim().parse::<u64>().ok())
            {
                peak = Some(peak.map_or(kib, |p: u64| p.max(kib)));
            }
        }
        if child.try_wait().unwrap().is_some() {
            return peak;
        }
        std::thread::sleep(std::time::Duration::from_millis(20));
    }
}

#[test]
fn one_gigabyte_file_in_bounded_memory() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("zeros");
    let output = dir.path().join("out");
    // sparse file of zeros
    fs::File::create(&input).unwrap().set_len(1 << 30).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_dicing"))
        .args(["encrypt", "--key", KEY, "--iv", IV, "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()])
        .spawn()
        .unwrap();
    let peak = peak_rss_kib(&mut child);
    assert!(child.wait().unwrap().success());
    if let Some(kib) = peak {
        assert!(kib < 256 * 1024, "peak RSS {kib} KiB");
    }
    // XOR with zeros is the keystream itself
    let mut head = vec![0u8; 4096];
    use std::io::Read;
    fs::File::open(&output).unwrap().read_exact(&mut head).unwrap();
    assert_eq!(head, Dicing::new(&KAT_KEY, &KAT_IV, Variant::Standard).unwrap().keystream(4096));
    assert_eq!(fs::metadata(&output).unwrap().len(), 1 << 30);
}

#[test]
fn bench_throughput_is_stable() {
    let rates: Vec<f64> = (0..3).map(|_| dicing::cli::run_bench(32).bytes_per_second()).collect();
    let mut sorted = rates.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[1];
    assert!(rates.iter().all(|r| (r - median).abs() <= 0.2 * median), "{rates:?}");
}
