//! The running keystream generator.
//!
//! One cycle reads the dice byte from the controller state of the previous
//! cycle, steps the combiner projectors by `x^a` and `x^b`, folds their new
//! states into the memorizers `u` and `v`, and only then advances the
//! controller projectors by `x^8`. The output block of cycle `t >= 1` is
//! computed from `u_t` and `v_t`.
//!
//! The reduced variants trade state for speed:
//!
//! * [`Variant::R1`] drops the second controller projector and uses the
//!   combiner `Q(u) ^ v`.
//! * [`Variant::R2`] keeps both controllers and picks `Q(u) ^ v` or
//!   `Q(v) ^ u` on the constant coefficient of the first controller.
//! * [`Variant::R3`] drops both controllers; the dice byte is the XOR of the
//!   top bytes of the two combiner states. It combines like `R1`.
//! * [`Variant::BigProjector`] replaces the two 128-bit combiner projectors
//!   by one projector over a degree-256 field. Only the step `a` is used;
//!   the low half of its state feeds `u`, the high half feeds `v`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::Result;
use crate::gf2x::{FieldElem, Wide, FIELD_HAT};
use crate::init::{ivsetup, InitVector, InitializedState};
use crate::keyschedule::KeyMaterial;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Variant {
    #[default]
    Standard,
    R1,
    R2,
    R3,
    BigProjector,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Standard,
        Variant::R1,
        Variant::R2,
        Variant::R3,
        Variant::BigProjector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::R1 => "r1",
            Variant::R2 => "r2",
            Variant::R3 => "r3",
            Variant::BigProjector => "big",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown mode `{s}` (expected standard, r1, r2, r3 or big)"))
    }
}

/// Combiner step exponents for one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepSizes {
    pub a: u32,
    pub b: u32,
}

/// `a = 1 + (D & 15)`, `b = 1 + (D >> 4)`.
pub fn step_sizes(dice: u8) -> StepSizes {
    StepSizes {
        a: 1 + (dice & 15) as u32,
        b: 1 + (dice >> 4) as u32,
    }
}

/// Transpose of a 4x4 byte matrix stored row-major.
pub fn transpose16(block: &[u8; 16]) -> [u8; 16] {
    std::array::from_fn(|i| block[4 * (i % 4) + i / 4])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Combiner {
    Pair {
        omega: FieldElem<'static>,
        tau: FieldElem<'static>,
    },
    Wide {
        sigma: FieldElem<'static>,
    },
}

/// Complete generator state at cycle `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineState {
    variant: Variant,
    alpha: Option<FieldElem<'static>>,
    beta: Option<FieldElem<'static>>,
    combiner: Combiner,
    u: [u8; 16],
    v: [u8; 16],
    eta: [u8; 16],
    t: u64,
}

fn xor16(a: &[u8; 16], b: &[u8; 16]) -> [u8; 16] {
    std::array::from_fn(|i| a[i] ^ b[i])
}

fn xor_into(acc: &mut [u8; 16], bits: u128) {
    *acc = (u128::from_le_bytes(*acc) ^ bits).to_le_bytes();
}

impl EngineState {
    pub fn new(init: &InitializedState, variant: Variant) -> Self {
        let (alpha, beta) = match variant {
            Variant::Standard | Variant::R2 | Variant::BigProjector => {
                (Some(init.alpha0), Some(init.beta0))
            }
            Variant::R1 => (Some(init.alpha0), None),
            Variant::R3 => (None, None),
        };
        let combiner = match variant {
            Variant::BigProjector => {
                let mut bytes = [0u8; 32];
                bytes[..16].copy_from_slice(&init.omega0.to_bytes());
                bytes[16..].copy_from_slice(&init.tau0.to_bytes());
                Combiner::Wide {
                    sigma: FIELD_HAT.elem_truncated(Wide::from_le_bytes(&bytes)),
                }
            }
            _ => Combiner::Pair {
                omega: init.omega0,
                tau: init.tau0,
            },
        };
        EngineState {
            variant,
            alpha,
            beta,
            combiner,
            u: init.u0,
            v: init.v0,
            eta: init.eta,
            t: 0,
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn alpha(&self) -> Option<FieldElem<'static>> {
        self.alpha
    }

    pub fn beta(&self) -> Option<FieldElem<'static>> {
        self.beta
    }

    /// The two combiner projector states. For the wide variant these are the
    /// low and high halves of its single state, as plain bit vectors.
    pub fn combiner_halves(&self) -> (Wide, Wide) {
        match self.combiner {
            Combiner::Pair { omega, tau } => (omega.bits(), tau.bits()),
            Combiner::Wide { sigma } => {
                let b = sigma.bits().to_le_bytes();
                (Wide::from_le_bytes(&b[..16]), Wide::from_le_bytes(&b[16..]))
            }
        }
    }

    pub fn omega(&self) -> Option<FieldElem<'static>> {
        match self.combiner {
            Combiner::Pair { omega, .. } => Some(omega),
            Combiner::Wide { .. } => None,
        }
    }

    pub fn tau(&self) -> Option<FieldElem<'static>> {
        match self.combiner {
            Combiner::Pair { tau, .. } => Some(tau),
            Combiner::Wide { .. } => None,
        }
    }

    pub fn sigma(&self) -> Option<FieldElem<'static>> {
        match self.combiner {
            Combiner::Wide { sigma } => Some(sigma),
            Combiner::Pair { .. } => None,
        }
    }

    pub fn u(&self) -> &[u8; 16] {
        &self.u
    }

    pub fn v(&self) -> &[u8; 16] {
        &self.v
    }

    pub fn eta(&self) -> &[u8; 16] {
        &self.eta
    }

    /// The dice byte that will drive the next cycle.
    pub fn dice_byte(&self) -> u8 {
        match self.variant {
            Variant::R3 => {
                let (omega, tau) = self.combiner_halves();
                omega.to_le_bytes()[15] ^ tau.to_le_bytes()[15]
            }
            _ => {
                let d1 = self.alpha.map_or(0, |a| a.low_byte());
                let d2 = self.beta.map_or(0, |b| b.low_byte());
                d1 ^ d2
            }
        }
    }

    /// Advances one cycle and returns the step sizes that were used.
    pub fn clock(&mut self) -> StepSizes {
        let steps = step_sizes(self.dice_byte());
        match &mut self.combiner {
            Combiner::Pair { omega, tau } => {
                *omega = omega.mul_x_pow(steps.a);
                *tau = tau.mul_x_pow(steps.b);
                xor_into(&mut self.u, omega.bits().low_u128());
                xor_into(&mut self.v, tau.bits().low_u128());
            }
            Combiner::Wide { sigma } => {
                *sigma = sigma.mul_x_pow(steps.a);
                let bits = sigma.bits();
                xor_into(&mut self.u, bits.low_u128());
                xor_into(&mut self.v, bits.shr(128).low_u128());
            }
        }
        if let Some(alpha) = &mut self.alpha {
            *alpha = alpha.mul_x_pow(8);
        }
        if let Some(beta) = &mut self.beta {
            *beta = beta.mul_x_pow(8);
        }
        self.t += 1;
        steps
    }

    /// Output function applied to the current `u`, `v`.
    pub fn combine(&self, km: &KeyMaterial) -> [u8; 16] {
        match self.variant {
            Variant::Standard | Variant::BigProjector => {
                let inner = xor16(&km.q_block(&self.u), &self.v);
                xor16(&km.q_block(&transpose16(&inner)), &self.eta)
            }
            Variant::R1 | Variant::R3 => xor16(&km.q_block(&self.u), &self.v),
            Variant::R2 => {
                let alpha0 = self.alpha.expect("R2 keeps the first controller").bits().bit(0);
                if alpha0 {
                    xor16(&km.q_block(&self.v), &self.u)
                } else {
                    xor16(&km.q_block(&self.u), &self.v)
                }
            }
        }
    }

    /// Clocks once and returns `z_t`.
    pub fn next_block(&mut self, km: &KeyMaterial) -> [u8; 16] {
        self.clock();
        self.combine(km)
    }
}

/// A keyed, IV-loaded generator that hands out keystream bytes.
#[derive(Clone)]
pub struct Dicing {
    km: Arc<KeyMaterial>,
    state: EngineState,
    buf: [u8; 16],
    buf_pos: usize,
}

impl Dicing {
    /// Runs key setup and IV setup. The key is 16 or 32 bytes, the IV 32.
    pub fn new(key: &[u8], iv: &[u8], variant: Variant) -> Result<Self> {
        let km = Arc::new(KeyMaterial::new(key)?);
        let iv = InitVector::try_from(iv)?;
        Ok(Self::with_key_material(km, &iv, variant))
    }

    /// IV setup over shared key material.
    pub fn with_key_material(km: Arc<KeyMaterial>, iv: &InitVector, variant: Variant) -> Self {
        let init = ivsetup(&km, iv);
        Self::from_state(km, EngineState::new(&init, variant))
    }

    pub fn from_state(km: Arc<KeyMaterial>, state: EngineState) -> Self {
        Dicing {
            km,
            state,
            buf: [0; 16],
            buf_pos: 16,
        }
    }

    pub fn key_material(&self) -> &Arc<KeyMaterial> {
        &self.km
    }

    pub fn state(&self) -> &EngineState {
        &self.state
    }

    /// Next whole block, discarding any partially consumed block.
    pub fn next_block(&mut self) -> [u8; 16] {
        self.buf_pos = 16;
        self.state.next_block(&self.km)
    }

    /// Fills `out` with the next keystream bytes.
    pub fn fill(&mut self, out: &mut [u8]) {
        let mut out = out;
        if self.buf_pos < 16 {
            let n = out.len().min(16 - self.buf_pos);
            out[..n].copy_from_slice(&self.buf[self.buf_pos..self.buf_pos + n]);
            self.buf_pos += n;
            out = &mut out[n..];
        }
        let mut chunks = out.chunks_exact_mut(16);
        for chunk in &mut chunks {
            chunk.copy_from_slice(&self.state.next_block(&self.km));
        }
        let rest = chunks.into_remainder();
        if !rest.is_empty() {
            self.buf = self.state.next_block(&self.km);
            rest.copy_from_slice(&self.buf[..rest.len()]);
            self.buf_pos = rest.len();
        }
    }

    pub fn keystream(&mut self, n: usize) -> Vec<u8> {
        let mut out = vec![0u8; n];
        self.fill(&mut out);
        out
    }

    /// XORs keystream into `data`; encryption and decryption alike.
    pub fn apply_keystream(&mut self, data: &mut [u8]) {
        let mut ks = [0u8; 4096];
        for chunk in data.chunks_mut(ks.len()) {
            let ks = &mut ks[..chunk.len()];
            self.fill(ks);
            for (d, k) in chunk.iter_mut().zip(ks.iter()) {
                *d ^= k;
            }
        }
    }
}

impl fmt::Debug for Dicing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dicing")
            .field("variant", &self.state.variant)
            .field("t", &self.state.t)
            .finish_non_exhaustive()
    }
}
