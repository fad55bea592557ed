//! Exact big-integer checks of the full-scale period argument.
//!
//! With `n = (2^127 - 1)(2^126 - 1)` controller cycles, every step value
//! `c` in `2..=16` occurs `2^249 - 2^123 - 2^122` times and `c = 1` once
//! more, so the combiner exponent after one controller period is
//! `m = 136 (2^249 - 2^123 - 2^122) + 1`.

use num_bigint::BigUint;
use num_traits::One;

use crate::arith::{gcd, mersenne};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop1Report {
    pub checks: Vec<IdentityCheck>,
    /// Whether the congruence fails with the printed exponent `2^24`
    /// while it holds with `2^124`.
    pub printed_exponent_is_typo: bool,
    /// `n (2^128 - 1) / 3`, the combiner period.
    pub combiner_period: BigUint,
}

impl Prop1Report {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e as usize
}

/// `a ≡ 1 - 85 * 2^k (mod modulus)`, evaluated without negative numbers.
fn congruent_to_one_minus(a: &BigUint, k: u32, modulus: &BigUint) -> bool {
    let sub = (BigUint::from(85u32) * pow2(k)) % modulus;
    (a + &sub) % modulus == BigUint::one() % modulus
}

pub fn check_prop1_arithmetic() -> Prop1Report {
    let n = mersenne(127) * mersenne(126);
    let per_value = pow2(249) - pow2(123) - pow2(122);
    let m = &per_value * 136u32 + 1u32;
    let order = mersenne(128);

    let mut checks = Vec::new();

    let total = &per_value * 16u32 + 1u32;
    checks.push(IdentityCheck {
        name: "occurrence counts sum to n",
        holds: total == n,
        detail: "16 (2^249 - 2^123 - 2^122) + 1 = (2^127 - 1)(2^126 - 1)".into(),
    });

    let step_sum: BigUint = (1..=16u32).map(|c| &per_value * c).sum::<BigUint>() + 1u32;
    checks.push(IdentityCheck {
        name: "step sum m",
        holds: step_sum == m,
        detail: "sum_c c * count(c) = 136 (2^249 - 2^123 - 2^122) + 1".into(),
    });

    checks.push(IdentityCheck {
        name: "m mod 2^128 - 1",
        holds: congruent_to_one_minus(&m, 124, &order),
        detail: "m ≡ 1 - 5 * 17 * 2^124 (mod 2^128 - 1)".into(),
    });

    let g = gcd(&order, &(BigUint::from(85u32) * pow2(124) - 1u32));
    checks.push(IdentityCheck {
        name: "gcd divisor",
        holds: g == BigUint::from(3u32),
        detail: format!("gcd(2^128 - 1, 5 * 17 * 2^124 - 1) = {g}"),
    });

    checks.push(IdentityCheck {
        name: "controller periods coprime",
        holds: gcd(&mersenne(127), &mersenne(126)).is_one(),
        detail: "gcd(2^127 - 1, 2^126 - 1) = 1".into(),
    });

    let printed_holds = congruent_to_one_minus(&m, 24, &order);
    let printed_exponent_is_typo = !printed_holds && checks[2].holds;

    Prop1Report {
        checks,
        printed_exponent_is_typo,
        combiner_period: n * order / 3u32,
    }
}
