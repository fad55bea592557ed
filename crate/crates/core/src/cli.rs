//! The `dicing` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 self-test failure, 3 I/O error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::engine::{Dicing, Variant};
use crate::gf2x::{Wide, FIELD_E1, FIELD_E2, FIELD_E3, FIELD_E4, FIELD_HAT, FIELD_K};
use crate::init::{ivsetup, InitVector, CONSTANT_C};
use crate::keyschedule::{sbox0_table, KeyMaterial};
use crate::verify::selftest;

#[derive(Debug, Parser)]
#[command(name = "dicing", version, about = "DICING stream cipher")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit keystream bytes.
    Keystream(KeystreamArgs),
    /// XOR a file with the keystream.
    Encrypt(CryptArgs),
    /// Same operation as encrypt.
    Decrypt(CryptArgs),
    /// Run the built-in verification checks.
    Selftest,
    /// Measure setup times and keystream throughput.
    Bench(BenchArgs),
    /// Print the embedded constants and polynomial exponents.
    Constants,
}

#[derive(Debug, Args)]
pub struct KeyArgs {
    /// Key as 32 or 64 hex digits.
    #[arg(long)]
    pub key: String,
    /// IV as up to 64 hex digits; shorter values are zero-padded on the right.
    #[arg(long)]
    pub iv: String,
    #[arg(long, default_value = "standard")]
    pub mode: Variant,
}

#[derive(Debug, Args)]
pub struct KeystreamArgs {
    #[command(flatten)]
    pub key: KeyArgs,
    #[arg(long)]
    pub len: u64,
    /// Lowercase hex output (the default).
    #[arg(long, conflicts_with = "raw")]
    pub hex: bool,
    /// Raw binary output.
    #[arg(long)]
    pub raw: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CryptArgs {
    #[command(flatten)]
    pub key: KeyArgs,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Megabytes of keystream to generate.
    #[arg(long)]
    pub mb: u64,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    SelfTest(Vec<&'static str>),
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::SelfTest(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::SelfTest(names) => write!(f, "self-test failed: {}", names.join(", ")),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Parses a 16- or 32-byte key.
pub fn parse_key(hex_key: &str) -> Result<Vec<u8>, CliError> {
    let key = hex::decode(hex_key).map_err(|e| CliError::Usage(format!("--key: {e}")))?;
    match key.len() {
        16 | 32 => Ok(key),
        n => Err(CliError::Usage(format!("--key: {n} bytes, expected 16 or 32"))),
    }
}

/// Parses an IV of at most 32 bytes, zero-padded on the right.
pub fn parse_iv(hex_iv: &str) -> Result<InitVector, CliError> {
    let bytes = hex::decode(hex_iv).map_err(|e| CliError::Usage(format!("--iv: {e}")))?;
    if bytes.len() > 32 {
        return Err(CliError::Usage(format!("--iv: {} bytes, at most 32", bytes.len())));
    }
    let mut iv = [0u8; 32];
    iv[..bytes.len()].copy_from_slice(&bytes);
    Ok(InitVector(iv))
}

fn build_cipher(args: &KeyArgs) -> Result<Dicing, CliError> {
    let key = parse_key(&args.key)?;
    let iv = parse_iv(&args.iv)?;
    let km = KeyMaterial::new(&key).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Dicing::with_key_material(Arc::new(km), &iv, args.mode))
}

/// Writes through a temporary file next to `path`, renamed into place only
/// once `fill` succeeds.
fn write_atomically(
    path: &Path,
    fill: impl FnOnce(&mut BufWriter<&mut NamedTempFile>) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err(path))?;
    {
        let mut w = BufWriter::new(&mut tmp);
        fill(&mut w)?;
        w.flush().map_err(io_err(path))?;
    }
    tmp.persist(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

fn emit_keystream(
    cipher: &mut Dicing,
    len: u64,
    hex_out: bool,
    w: &mut dyn Write,
    path: &Path,
) -> Result<(), CliError> {
    let mut remaining = len;
    let mut buf = vec![0u8; 1 << 16];
    while remaining > 0 {
        let n = remaining.min(buf.len() as u64) as usize;
        cipher.fill(&mut buf[..n]);
        if hex_out {
            w.write_all(hex::encode(&buf[..n]).as_bytes())
        } else {
            w.write_all(&buf[..n])
        }
        .map_err(io_err(path))?;
        remaining -= n as u64;
    }
    if hex_out && len > 0 {
        w.write_all(b"\n").map_err(io_err(path))?;
    }
    Ok(())
}

fn cmd_keystream(args: &KeystreamArgs) -> Result<(), CliError> {
    let mut cipher = build_cipher(&args.key)?;
    let hex_out = !args.raw;
    match &args.out {
        Some(path) => write_atomically(path, |w| emit_keystream(&mut cipher, args.len, hex_out, w, path)),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit_keystream(&mut cipher, args.len, hex_out, &mut lock, Path::new("<stdout>"))?;
            lock.flush().map_err(io_err(Path::new("<stdout>")))
        }
    }
}

/// XORs `input` with the keystream into `output`, 64 KiB at a time.
pub fn crypt_file(cipher: &mut Dicing, input: &Path, output: &Path) -> Result<(), CliError> {
    let file = File::open(input).map_err(io_err(input))?;
    let mut reader = BufReader::new(file);
    write_atomically(output, |w| {
        let mut buf = vec![0u8; 1 << 16];
        loop {
            let n = reader.read(&mut buf).map_err(io_err(input))?;
            if n == 0 {
                return Ok(());
            }
            cipher.apply_keystream(&mut buf[..n]);
            w.write_all(&buf[..n]).map_err(io_err(output))?;
        }
    })
}

fn cmd_crypt(args: &CryptArgs) -> Result<(), CliError> {
    let mut cipher = build_cipher(&args.key)?;
    crypt_file(&mut cipher, &args.input, &args.out)
}

fn cmd_selftest() -> Result<(), CliError> {
    let report = selftest::run();
    for c in &report.checks {
        println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if report.all_passed() {
        println!("all {} checks passed", report.checks.len());
        Ok(())
    } else {
        Err(CliError::SelfTest(report.failed()))
    }
}

/// Timestamp-counter ticks per second, which track the nominal clock.
#[cfg(target_arch = "x86_64")]
fn estimate_cpu_hz() -> f64 {
    use std::arch::x86_64::_rdtsc;
    let start = Instant::now();
    // SAFETY: rdtsc has no preconditions on x86_64
    let t0 = unsafe { _rdtsc() };
    while start.elapsed() < Duration::from_millis(50) {
        std::hint::spin_loop();
    }
    let t1 = unsafe { _rdtsc() };
    (t1 - t0) as f64 / start.elapsed().as_secs_f64()
}

/// Dependent additions per second; roughly one per cycle on current cores.
#[cfg(not(target_arch = "x86_64"))]
fn estimate_cpu_hz() -> f64 {
    let iters = 200_000_000u64;
    let start = Instant::now();
    let mut x = std::hint::black_box(1u64);
    for _ in 0..iters {
        x = std::hint::black_box(x.wrapping_add(0x9e37_79b9));
    }
    std::hint::black_box(x);
    iters as f64 / start.elapsed().as_secs_f64()
}

/// Timings of one benchmark run.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub keysetup: Duration,
    pub ivsetup: Duration,
    pub bytes: u64,
    pub keystream: Duration,
    pub cpu_hz_estimate: f64,
}

impl BenchReport {
    pub fn bytes_per_second(&self) -> f64 {
        self.bytes as f64 / self.keystream.as_secs_f64()
    }

    pub fn cycles_per_byte(&self) -> f64 {
        self.cpu_hz_estimate / self.bytes_per_second()
    }

    pub fn cycles(&self, d: Duration) -> f64 {
        d.as_secs_f64() * self.cpu_hz_estimate
    }
}

pub fn run_bench(megabytes: u64) -> BenchReport {
    let key: [u8; 16] = std::array::from_fn(|i| i as u8);
    let iv = InitVector(std::array::from_fn(|i| (i * 3) as u8));
    let reps = 200u32;

    let start = Instant::now();
    let mut km = None;
    for _ in 0..reps {
        km = Some(std::hint::black_box(KeyMaterial::new(&key).expect("16-byte key")));
    }
    let keysetup = start.elapsed() / reps;
    let km = Arc::new(km.expect("at least one repetition"));

    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(ivsetup(&km, &iv));
    }
    let ivsetup_time = start.elapsed() / reps;

    let mut cipher = Dicing::with_key_material(km, &iv, Variant::Standard);
    let bytes = megabytes << 20;
    let mut buf = vec![0u8; 1 << 16];
    let start = Instant::now();
    let mut left = bytes;
    while left > 0 {
        let n = left.min(buf.len() as u64) as usize;
        cipher.fill(&mut buf[..n]);
        std::hint::black_box(&buf);
        left -= n as u64;
    }
    let keystream = start.elapsed();

    BenchReport {
        keysetup,
        ivsetup: ivsetup_time,
        bytes,
        keystream,
        cpu_hz_estimate: estimate_cpu_hz(),
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    if args.mb == 0 {
        return Err(CliError::Usage("--mb must be at least 1".into()));
    }
    let r = run_bench(args.mb);
    println!("clock estimate   {:.2} GHz", r.cpu_hz_estimate / 1e9);
    println!(
        "Keysetup         {:>10.2} us  ~{:.0} cycles (estimate)",
        r.keysetup.as_secs_f64() * 1e6,
        r.cycles(r.keysetup)
    );
    println!(
        "IVsetup          {:>10.2} us  ~{:.0} cycles (estimate)",
        r.ivsetup.as_secs_f64() * 1e6,
        r.cycles(r.ivsetup)
    );
    println!(
        "Keystream rate   {:>10.1} MB/s  ~{:.1} cycles/byte, ~{:.0} cycles/block (estimate)",
        r.bytes_per_second() / 1e6,
        r.cycles_per_byte(),
        16.0 * r.cycles_per_byte()
    );
    Ok(())
}

/// Text printed by `dicing constants`.
pub fn constants_report() -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let mut be = CONSTANT_C;
    be.reverse();
    let _ = writeln!(s, "c = floor(e * 57!)");
    let _ = writeln!(s, "  big-endian hex:    {}", hex::encode(be));
    let _ = writeln!(s, "  little-endian hex: {}", hex::encode(CONSTANT_C));
    let fields = [
        ("p ", &*FIELD_K),
        ("p1", &*FIELD_E1),
        ("p2", &*FIELD_E2),
        ("p3", &*FIELD_E3),
        ("p4", &*FIELD_E4),
        ("p^", &*FIELD_HAT),
    ];
    for (label, f) in fields {
        let exps: Vec<String> = f.exponents().iter().map(u32::to_string).collect();
        let _ = writeln!(s, "{label} exponents: {}", exps.join(" "));
    }
    let mut h = Sha256::new();
    h.update(sbox0_table());
    for f in [&*FIELD_E1, &*FIELD_E2, &*FIELD_E3, &*FIELD_E4, &*FIELD_HAT] {
        // x^(d-1) * x^k for every step width covers each reduction
        let top = f.elem_truncated(Wide::ONE.shl(f.degree() - 1));
        for k in 1..=16 {
            h.update(top.mul_x_pow(k).bits().to_le_bytes());
        }
    }
    let _ = writeln!(s, "key-independent table digest (sha256): {}", hex::encode(h.finalize()));
    s
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Keystream(a) => cmd_keystream(a),
        Command::Encrypt(a) | Command::Decrypt(a) => cmd_crypt(a),
        Command::Selftest => cmd_selftest(),
        Command::Bench(a) => cmd_bench(a),
        Command::Constants => {
            print!("{}", constants_report());
            Ok(())
        }
    }
}

/// Parses arguments and runs; usage errors exit with 1.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dicing: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
