//! Statistical batteries for keystream output.
//!
//! Thresholds are fixed constants: each sits near a 1e-4 tail of the null
//! distribution at the 1 MiB stream size used by the acceptance run.

use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

use crate::engine::{Dicing, EngineState, Variant};
use crate::error::{Error, Result};

pub const MIN_STREAM_BYTES: usize = 1 << 20;

pub const MONOBIT_MAX_DEVIATION: f64 = 1e-3;
pub const BYTE_CHI2_MAX: f64 = 340.0;
pub const RUNS_MAX_Z: f64 = 4.0;
pub const SERIAL_MAX_SIGMA: f64 = 5.0;
pub const STEP_MAX_SIGMA: f64 = 5.0;
pub const AVALANCHE_BAND: (f64, f64) = (0.47, 0.53);

#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome {
    pub name: &'static str,
    pub statistic: f64,
    pub p_value: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatReport {
    pub bytes: usize,
    pub outcomes: Vec<TestOutcome>,
}

impl StatReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect()
    }
}

fn chi2_upper_tail(stat: f64, df: f64) -> f64 {
    ChiSquared::new(df).map_or(f64::NAN, |d| d.sf(stat))
}

fn chi_square(counts: &[u64], expected: f64) -> f64 {
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

fn monobit(stream: &[u8]) -> TestOutcome {
    let n = (stream.len() * 8) as f64;
    let ones: u64 = stream.iter().map(|b| b.count_ones() as u64).sum();
    let frac = ones as f64 / n;
    let s = 2.0 * ones as f64 - n;
    TestOutcome {
        name: "monobit",
        statistic: frac,
        p_value: erfc(s.abs() / (2.0 * n).sqrt()),
        passed: (frac - 0.5).abs() < MONOBIT_MAX_DEVIATION,
    }
}

fn byte_chi_square(stream: &[u8]) -> TestOutcome {
    let mut counts = [0u64; 256];
    for &b in stream {
        counts[b as usize] += 1;
    }
    let stat = chi_square(&counts, stream.len() as f64 / 256.0);
    TestOutcome {
        name: "byte chi-square",
        statistic: stat,
        p_value: chi2_upper_tail(stat, 255.0),
        passed: stat < BYTE_CHI2_MAX,
    }
}

fn runs(stream: &[u8]) -> TestOutcome {
    let n = (stream.len() * 8) as f64;
    let ones: u64 = stream.iter().map(|b| b.count_ones() as u64).sum();
    let pi = ones as f64 / n;
    // transitions inside each byte, then across byte boundaries
    let mut transitions: u64 = stream
        .iter()
        .map(|&b| ((b ^ (b >> 1)) & 0x7f).count_ones() as u64)
        .sum();
    transitions += stream
        .windows(2)
        .filter(|w| (w[0] >> 7) != (w[1] & 1))
        .count() as u64;
    let observed = transitions as f64 + 1.0;
    let spread = pi * (1.0 - pi);
    let z = (observed - 2.0 * n * spread) / (2.0 * n.sqrt() * spread);
    TestOutcome {
        name: "runs",
        statistic: z,
        p_value: erfc(z.abs() / std::f64::consts::SQRT_2),
        passed: z.is_finite() && z.abs() < RUNS_MAX_Z,
    }
}

fn serial16(stream: &[u8]) -> TestOutcome {
    let mut counts = vec![0u64; 1 << 16];
    let pairs = stream.chunks_exact(2);
    let n = pairs.len();
    for p in pairs {
        counts[u16::from_le_bytes([p[0], p[1]]) as usize] += 1;
    }
    let df = 65535.0;
    let stat = chi_square(&counts, n as f64 / 65536.0);
    let sigmas = (stat - df) / (2.0 * df).sqrt();
    TestOutcome {
        name: "serial 16-bit",
        statistic: stat,
        p_value: chi2_upper_tail(stat, df),
        passed: sigmas.abs() < SERIAL_MAX_SIGMA,
    }
}

/// Monobit, byte chi-square, runs, and 16-bit serial tests.
pub fn statistical_suite(stream: &[u8]) -> Result<StatReport> {
    if stream.len() < MIN_STREAM_BYTES {
        return Err(Error::StreamTooShort {
            got: stream.len(),
            need: MIN_STREAM_BYTES,
        });
    }
    Ok(StatReport {
        bytes: stream.len(),
        outcomes: vec![monobit(stream), byte_chi_square(stream), runs(stream), serial16(stream)],
    })
}

/// Fraction of differing bits between two equal-length strings.
pub fn flip_fraction(a: &[u8], b: &[u8]) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff: u32 = a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum();
    diff as f64 / (8 * a.len()) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvalancheReport {
    pub trials: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub passed: bool,
}

/// Flips one random IV bit per trial and measures how much of the first
/// 128 keystream bytes changes. Keys alternate between 128 and 256 bits.
pub fn avalanche_test<R: Rng>(rng: &mut R, trials: usize, variant: Variant) -> AvalancheReport {
    let mut fractions = Vec::with_capacity(trials);
    for trial in 0..trials {
        let key: Vec<u8> = (0..if trial % 2 == 0 { 16 } else { 32 }).map(|_| rng.gen()).collect();
        let iv: [u8; 32] = rng.gen();
        let mut flipped = iv;
        let bit = rng.gen_range(0..256);
        flipped[bit / 8] ^= 1 << (bit % 8);
        let a = Dicing::new(&key, &iv, variant).expect("valid sizes").keystream(128);
        let b = Dicing::new(&key, &flipped, variant).expect("valid sizes").keystream(128);
        fractions.push(flip_fraction(&a, &b));
    }
    let mean = fractions.iter().sum::<f64>() / trials.max(1) as f64;
    AvalancheReport {
        trials,
        mean,
        min: fractions.iter().copied().fold(f64::INFINITY, f64::min),
        max: fractions.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        passed: trials > 0 && (AVALANCHE_BAND.0..=AVALANCHE_BAND.1).contains(&mean),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepDistribution {
    /// `counts[a - 1]`.
    pub counts: [u64; 16],
    pub chi2: f64,
    pub sigmas: f64,
    pub passed: bool,
}

/// Uniformity of step values `a` in `1..=16`.
pub fn step_uniformity(counts: [u64; 16]) -> StepDistribution {
    let total: u64 = counts.iter().sum();
    let chi2 = chi_square(&counts, total as f64 / 16.0);
    let sigmas = (chi2 - 15.0) / 30f64.sqrt();
    StepDistribution {
        counts,
        chi2,
        sigmas,
        passed: total > 0 && sigmas.abs() < STEP_MAX_SIGMA,
    }
}

/// Counts the step values `a` the real engine uses over `n_cycles`.
pub fn full_scale_step_distribution(state: &mut EngineState, n_cycles: u64) -> StepDistribution {
    let mut counts = [0u64; 16];
    for _ in 0..n_cycles {
        let steps = state.clock();
        counts[steps.a as usize - 1] += 1;
    }
    step_uniformity(counts)
}

/// Length of the shortest LFSR generating `bits` (Berlekamp-Massey over GF(2)).
pub fn linear_complexity(bits: &[bool]) -> usize {
    let n = bits.len();
    let mut c = vec![false; n + 1];
    let mut b = vec![false; n + 1];
    c[0] = true;
    b[0] = true;
    let (mut l, mut m) = (0usize, -1isize);
    for i in 0..n {
        let mut d = bits[i];
        for j in 1..=l {
            d ^= c[j] & bits[i - j];
        }
        if d {
            let t = c.clone();
            let shift = (i as isize - m) as usize;
            for j in 0..=n - shift {
                c[j + shift] ^= b[j];
            }
            if 2 * l <= i {
                l = i + 1 - l;
                m = i as isize;
                b = t;
            }
        }
    }
    l
}
