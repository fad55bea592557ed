//! Desk-scale checks of the generator's structural claims: scaled-down
//! period experiments, exact big-integer identities, field primitivity, and
//! statistical batteries.

mod mini;
mod prop1;
pub mod selftest;
mod stats;

pub use mini::{mini_period_experiment, MiniParams, PeriodReport};
pub use prop1::{check_prop1_arithmetic, IdentityCheck, Prop1Report};
pub use stats::{
    avalanche_test, full_scale_step_distribution, linear_complexity, statistical_suite,
    step_uniformity, AvalancheReport, StatReport, StepDistribution, TestOutcome,
    MIN_STREAM_BYTES,
};

use num_bigint::BigUint;

use crate::error::Result;
use crate::gf2x::{self, FieldSpec, FIELD_E1, FIELD_E2, FIELD_E3, FIELD_E4, FIELD_K};

/// Prime factorization of `2^126 - 1`.
pub const FACTORS_2_126_MINUS_1: &[(u64, u32)] = &[
    (3, 3),
    (7, 2),
    (19, 1),
    (43, 1),
    (73, 1),
    (127, 1),
    (337, 1),
    (5419, 1),
    (92737, 1),
    (649657, 1),
    (77158673929, 1),
];

/// Prime factorization of `2^128 - 1` (the Fermat primes and the factors of F5, F6).
pub const FACTORS_2_128_MINUS_1: &[(u64, u32)] = &[
    (3, 1),
    (5, 1),
    (17, 1),
    (257, 1),
    (641, 1),
    (65537, 1),
    (274177, 1),
    (6700417, 1),
    (67280421310721, 1),
];

pub fn to_factor_list(factors: &[(u64, u32)]) -> Vec<(BigUint, u32)> {
    factors.iter().map(|&(p, e)| (BigUint::from(p), e)).collect()
}

/// Primitivity of one field, with the factorization that was used.
#[derive(Debug, Clone)]
pub struct PrimitivityCheck {
    pub field: String,
    pub primitive: bool,
}

/// Checks `x` is primitive in the four projector fields.
pub fn check_projector_fields() -> Result<Vec<PrimitivityCheck>> {
    let cases: [(&FieldSpec, Vec<(BigUint, u32)>); 4] = [
        (&FIELD_E1, vec![(crate::arith::mersenne(127), 1)]),
        (&FIELD_E2, to_factor_list(FACTORS_2_126_MINUS_1)),
        (&FIELD_E3, to_factor_list(FACTORS_2_128_MINUS_1)),
        (&FIELD_E4, to_factor_list(FACTORS_2_128_MINUS_1)),
    ];
    cases
        .iter()
        .map(|(f, factors)| {
            Ok(PrimitivityCheck {
                field: f.name().to_string(),
                primitive: gf2x::verify_primitive(f, factors)?,
            })
        })
        .collect()
}

/// Byte-field facts: irreducibility of its modulus and the order of `x`.
pub fn check_byte_field() -> Result<(bool, u64)> {
    Ok((
        gf2x::is_irreducible_by_trial_division(&FIELD_K)?,
        gf2x::order_of_x(&FIELD_K)?,
    ))
}

/// `floor(e * 57!)` from interval bounds on `e`, independent of the exact
/// series used by [`crate::init::compute_c`].
///
/// `e` is enclosed by `sum_{k<=N} 1/k!` and that sum plus `2/(N+1)!`, both
/// rounded outward to `precision_bits` fractional bits. Returns `None` if
/// the enclosure is too wide to pin the floor.
pub fn constant_c_interval(precision_bits: u32) -> Option<BigUint> {
    use num_traits::One;
    let scale = BigUint::one() << precision_bits as usize;
    let terms = 120u32;
    // lower: sum of floor(scale / k!), upper adds 1 ulp per term plus the tail bound
    let mut fact = BigUint::one();
    let mut lower = BigUint::from(0u32);
    let mut upper = BigUint::from(0u32);
    for k in 0..=terms {
        if k > 0 {
            fact *= k;
        }
        let q = &scale / &fact;
        upper += &q + 1u32;
        lower += q;
    }
    fact *= terms + 1;
    upper += (&scale * 2u32) / &fact + 1u32;

    let f57 = (1..=57u32).fold(BigUint::one(), |acc, k| acc * k);
    let lo = (&lower * &f57) >> precision_bits as usize;
    let hi = (&upper * &f57) >> precision_bits as usize;
    (lo == hi).then_some(lo)
}
