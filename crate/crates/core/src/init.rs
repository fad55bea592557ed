//! IV setup: the byte permutation, the keyed mixing chain, and the loading of
//! the engine state.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::gf2x::{FieldElem, Wide, FIELD_E1, FIELD_E2, FIELD_E3, FIELD_E4};
use crate::keyschedule::KeyMaterial;

/// `floor(e * 57!)`, little-endian.
pub const CONSTANT_C: [u8; 32] = [
    0x9a, 0x04, 0x4d, 0xcc, 0x2c, 0x81, 0xf9, 0x28, 0x65, 0x87, 0xc0, 0x50, 0x28, 0x25, 0x41, 0xe1,
    0x04, 0x94, 0x95, 0xa3, 0xc6, 0x9e, 0x39, 0xa5, 0xbf, 0x93, 0xb9, 0x92, 0xb5, 0x61, 0x8e, 0xf3,
];

/// `floor(e * 57!)` as the exact sum of `57!/k!` for `k = 0..=57`. The
/// remaining terms of the series add up to less than `1/57`.
pub fn compute_c() -> BigUint {
    let mut term = BigUint::one(); // 57!/57!
    let mut sum = BigUint::one();
    for k in (1..=57u32).rev() {
        term *= k; // now 57!/(k-1)!
        sum += &term;
    }
    sum
}

/// A 32-byte initial value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InitVector(pub [u8; 32]);

impl TryFrom<&[u8]> for InitVector {
    type Error = Error;
    fn try_from(bytes: &[u8]) -> Result<Self> {
        bytes
            .try_into()
            .map(InitVector)
            .map_err(|_| Error::InvalidIvLength(bytes.len()))
    }
}

/// `out[i] = in[4i mod 31]` for `i < 31`; byte 31 stays put.
pub fn phi(zeta: &[u8; 32]) -> [u8; 32] {
    let mut out = [0u8; 32];
    for (i, o) in out.iter_mut().take(31).enumerate() {
        *o = zeta[(4 * i) % 31];
    }
    out[31] = zeta[31];
    out
}

/// `Q(phi(zeta))`.
pub fn mix(km: &KeyMaterial, zeta: &[u8; 32]) -> [u8; 32] {
    let mut out = phi(zeta);
    km.q_apply(&mut out);
    out
}

fn xor32(a: &[u8; 32], b: &[u8; 32]) -> [u8; 32] {
    std::array::from_fn(|i| a[i] ^ b[i])
}

/// `mix(mix(mix(zeta) ^ K̂) ^ Ǩ)`.
pub fn keyed_mix(km: &KeyMaterial, zeta: &[u8; 32]) -> [u8; 32] {
    let first = mix(km, zeta);
    let second = mix(km, &xor32(&first, km.k_hat()));
    mix(km, &xor32(&second, km.k_check()))
}

/// The four chained strings `xi_0 = G(IV ^ c)`, `xi_i = G(xi_{i-1} ^ c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XiChain(pub [[u8; 32]; 4]);

impl XiChain {
    pub fn derive(km: &KeyMaterial, iv: &InitVector) -> Self {
        let mut chain = [[0u8; 32]; 4];
        let mut prev = iv.0;
        for xi in chain.iter_mut() {
            *xi = keyed_mix(km, &xor32(&prev, &CONSTANT_C));
            prev = *xi;
        }
        XiChain(chain)
    }
}

/// Engine state right after IV setup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InitializedState {
    pub eta: [u8; 16],
    pub u0: [u8; 16],
    pub v0: [u8; 16],
    pub alpha0: FieldElem<'static>,
    pub beta0: FieldElem<'static>,
    pub omega0: FieldElem<'static>,
    pub tau0: FieldElem<'static>,
    /// Set when `xi_3` was zero and the combiner was loaded from `K̂`.
    pub used_fallback: bool,
}

impl InitializedState {
    /// Loads state from an already computed chain.
    pub fn from_chain(km: &KeyMaterial, chain: &XiChain) -> Self {
        let [xi0, xi1, xi2, xi3] = &chain.0;
        let eta = std::array::from_fn(|i| xi0[i] ^ xi0[16 + i]);
        let u0 = xi1[..16].try_into().unwrap();
        let v0 = xi1[16..].try_into().unwrap();

        // xi_2 bits 0..=126 and 128..=253; bits 127, 254, 255 are dropped
        let lo = Wide::from_le_bytes(&xi2[..16]);
        let hi = Wide::from_le_bytes(&xi2[16..]);
        let alpha0 = FIELD_E1.elem_truncated(lo);
        let beta0 = FIELD_E2.elem_truncated(hi);

        let used_fallback = xi3.iter().all(|&b| b == 0);
        let source = if used_fallback { km.k_hat() } else { xi3 };
        let omega0 = FIELD_E3.elem_truncated(Wide::from_le_bytes(&source[..16]));
        let tau0 = FIELD_E4.elem_truncated(Wide::from_le_bytes(&source[16..]));

        InitializedState {
            eta,
            u0,
            v0,
            alpha0,
            beta0,
            omega0,
            tau0,
            used_fallback,
        }
    }
}

pub fn ivsetup(km: &KeyMaterial, iv: &InitVector) -> InitializedState {
    InitializedState::from_chain(km, &XiChain::derive(km, iv))
}
