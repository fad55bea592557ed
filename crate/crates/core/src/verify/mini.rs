//! A parameter-reduced generator whose periods can be measured by brute
//! force and compared with the closed form derived from the step counts.
//!
//! Scaling rule: controller fields of degrees `d1`, `d2` step by `x^4`; each
//! dice is the low 4 bits of its controller; the combiner steps are
//! `a = 1 + (D & 3)` and `b = 1 + (D >> 2)` over a degree-`d3` field.

use num_bigint::BigUint;

use crate::arith::{divisors_u64, factor_u64, gcd_u64};
use crate::error::{Error, Result};
use crate::gf2x::{self, FieldElem, FieldSpec};

const MAX_CONTROLLER_PERIOD: u64 = 10_000_000;

/// Primitive moduli for controller fields (tail exponents, leading term implicit).
const CONTROLLER_TAILS: [&[u32]; 11] = [
    &[1, 0],
    &[1, 0],
    &[1, 0],
    &[2, 0],
    &[1, 0],
    &[1, 0],
    &[4, 3, 2, 0],
    &[4, 0],
    &[3, 0],
    &[2, 0],
    &[6, 4, 1, 0],
];

/// A second family of primitive moduli, used for combiner fields.
const COMBINER_TAILS: [&[u32]; 11] = [
    &[1, 0],
    &[2, 0],
    &[3, 0],
    &[3, 0],
    &[5, 0],
    &[3, 0],
    &[6, 5, 1, 0],
    &[5, 0],
    &[7, 0],
    &[9, 0],
    &[11, 8, 6, 0],
];

fn table_field(name: &str, degree: u32, tails: &[&[u32]; 11]) -> Result<FieldSpec> {
    if !(2..=12).contains(&degree) {
        return Err(Error::MiniParams(format!("degree {degree} outside 2..=12")));
    }
    let mut exps = vec![degree];
    exps.extend_from_slice(tails[degree as usize - 2]);
    FieldSpec::from_exponents(format!("{name}{degree}"), &exps, true)
}

/// Reduced-scale parameters.
#[derive(Debug)]
pub struct MiniParams {
    pub controller1: FieldSpec,
    pub controller2: FieldSpec,
    pub combiner: FieldSpec,
    pub controller_step: u32,
}

impl MiniParams {
    /// Picks tabulated primitive moduli for the given degrees.
    pub fn new(d1: u32, d2: u32, d3: u32) -> Result<Self> {
        Self::with_fields(
            table_field("ctl", d1, &CONTROLLER_TAILS)?,
            table_field("ctl", d2, &CONTROLLER_TAILS)?,
            table_field("comb", d3, &COMBINER_TAILS)?,
        )
    }

    pub fn with_fields(c1: FieldSpec, c2: FieldSpec, comb: FieldSpec) -> Result<Self> {
        let (d1, d2) = (c1.degree() as u64, c2.degree() as u64);
        if gcd_u64(d1, d2) != 1 {
            return Err(Error::MiniParams(format!("controller degrees {d1}, {d2} not coprime")));
        }
        if d1 > 32 || d2 > 32 || comb.degree() > 16 {
            return Err(Error::MiniParams("degrees too large".into()));
        }
        if ((1u64 << d1) - 1) * ((1u64 << d2) - 1) > MAX_CONTROLLER_PERIOD {
            return Err(Error::MiniParams("controller period above 10^7".into()));
        }
        for f in [&c1, &c2, &comb] {
            let factors = factor_u64((1u64 << f.degree()) - 1);
            if !gf2x::verify_primitive(f, &factors)? {
                return Err(Error::MiniParams(format!("{} is not primitive", f.name())));
            }
        }
        Ok(MiniParams {
            controller1: c1,
            controller2: c2,
            combiner: comb,
            controller_step: 4,
        })
    }

    pub fn degrees(&self) -> (u32, u32, u32) {
        (
            self.controller1.degree(),
            self.controller2.degree(),
            self.combiner.degree(),
        )
    }

    /// `(2^d1 - 1)(2^d2 - 1)`.
    pub fn expected_controller_period(&self) -> u64 {
        let (d1, d2, _) = self.degrees();
        ((1u64 << d1) - 1) * ((1u64 << d2) - 1)
    }
}

/// Measured and predicted periods of one mini run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodReport {
    pub degrees: (u32, u32, u32),
    /// Return time of the joint controller state.
    pub controller_orbit: u64,
    /// Least period of the dice sequence `D_t`.
    pub measured_controller_period: u64,
    /// `step_counts[c - 1]`: occurrences of `a = c` over one controller period.
    pub step_counts: [u64; 4],
    /// Sum of `a` over one controller period, reduced mod `2^d3 - 1`.
    pub m_mod: BigUint,
    /// `n (2^d3 - 1) / gcd(2^d3 - 1, m)`.
    pub formula_period: u64,
    /// The divisor `gcd(2^d3 - 1, m)`.
    pub gcd_divisor: u64,
    /// Least period of the `omega` sequence, by brute force.
    pub measured_omega_period: u64,
    /// Least period of the `tau` sequence and its closed form.
    pub measured_tau_period: u64,
    pub tau_formula_period: u64,
    /// Least period of the memorizer `u_t = u_{t-1} ^ omega_t`.
    pub measured_u_period: u64,
    pub matches: bool,
}

/// Least `p` dividing `len` with `seq[t] == seq[t + p mod len]` for all `t`.
fn least_period<T: PartialEq>(seq: &[T]) -> u64 {
    let len = seq.len();
    divisors_u64(len as u64)
        .into_iter()
        .find(|&p| {
            let p = p as usize;
            (0..len).all(|t| seq[t] == seq[(t + p) % len])
        })
        .expect("len itself is a period")
}

struct MiniState<'f> {
    alpha: FieldElem<'f>,
    beta: FieldElem<'f>,
    omega: FieldElem<'f>,
    tau: FieldElem<'f>,
}

impl MiniState<'_> {
    fn dice(&self) -> u8 {
        (self.alpha.low_byte() ^ self.beta.low_byte()) & 0x0f
    }

    /// Same cycle order as the full engine: dice from the previous controller
    /// state, combiner first, controller after.
    fn clock(&mut self, step: u32) -> (u32, u32) {
        let d = self.dice();
        let (a, b) = (1 + (d & 3) as u32, 1 + (d >> 2) as u32);
        self.omega = self.omega.mul_x_pow(a);
        self.tau = self.tau.mul_x_pow(b);
        self.alpha = self.alpha.mul_x_pow(step);
        self.beta = self.beta.mul_x_pow(step);
        (a, b)
    }
}

fn closed_form(n: u64, step_sum: u64, degree: u32) -> (u64, u64) {
    let order = (1u64 << degree) - 1;
    let g = gcd_u64(order, step_sum % order);
    (n * (order / g), g)
}

/// Runs the reduced generator from all-ones states and compares measured
/// periods with the closed form.
pub fn mini_period_experiment(params: &MiniParams) -> PeriodReport {
    let start = MiniState {
        alpha: params.controller1.one(),
        beta: params.controller2.one(),
        omega: params.combiner.one(),
        tau: params.combiner.one(),
    };
    let step = params.controller_step;

    // controller orbit and the dice sequence over it
    let mut dice = Vec::new();
    let mut st = MiniState { ..start };
    loop {
        dice.push(st.dice());
        st.alpha = st.alpha.mul_x_pow(step);
        st.beta = st.beta.mul_x_pow(step);
        if st.alpha == start.alpha && st.beta == start.beta {
            break;
        }
    }
    let controller_orbit = dice.len() as u64;
    let n = least_period(&dice);

    let mut step_counts = [0u64; 4];
    let (mut sum_a, mut sum_b) = (0u64, 0u64);
    for &d in &dice[..n as usize] {
        step_counts[(d & 3) as usize] += 1;
        sum_a += 1 + (d & 3) as u64;
        sum_b += 1 + (d >> 2) as u64;
    }
    let d3 = params.combiner.degree();
    let (formula_period, gcd_divisor) = closed_form(n, sum_a, d3);
    let (tau_formula_period, _) = closed_form(n, sum_b, d3);

    // joint orbit of controller and combiner
    let mut omegas = Vec::new();
    let mut taus = Vec::new();
    let mut st = MiniState { ..start };
    loop {
        st.clock(step);
        omegas.push(st.omega.bits().low_u128() as u32);
        taus.push(st.tau.bits().low_u128() as u32);
        if st.alpha == start.alpha
            && st.beta == start.beta
            && st.omega == start.omega
            && st.tau == start.tau
        {
            break;
        }
    }
    let measured_omega_period = least_period(&omegas);
    let measured_tau_period = least_period(&taus);

    // u accumulates omega; over one joint orbit it shifts by the XOR of all
    // omegas, so its orbit is one or two joint orbits long
    let shift = omegas.iter().fold(0u32, |acc, &w| acc ^ w);
    let laps = if shift == 0 { 1 } else { 2 };
    let mut us = Vec::with_capacity(omegas.len() * laps);
    let mut u = 0u32;
    for _ in 0..laps {
        for &w in &omegas {
            u ^= w;
            us.push(u);
        }
    }
    debug_assert_eq!(u, 0);
    let measured_u_period = least_period(&us);

    let matches = n == params.expected_controller_period()
        && measured_omega_period == formula_period
        && measured_tau_period == tau_formula_period;

    PeriodReport {
        degrees: params.degrees(),
        controller_orbit,
        measured_controller_period: n,
        step_counts,
        m_mod: BigUint::from(sum_a % ((1u64 << d3) - 1)),
        formula_period,
        gcd_divisor,
        measured_omega_period,
        measured_tau_period,
        tau_formula_period,
        measured_u_period,
        matches,
    }
}
