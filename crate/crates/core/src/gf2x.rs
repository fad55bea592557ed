//! Binary extension fields `F[x]/p(x)` of degree up to 256.
//!
//! Bit convention used everywhere in this crate: bit `i` of a byte string is
//! bit `i % 8` (least significant first) of byte `i / 8`, and bit `j` of a
//! field element is the coefficient of `x^j`. Multiplying by `x^k` is then a
//! left shift of the bit string followed by a reduction.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitAnd, BitXor, BitXorAssign};
use std::sync::LazyLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::arith;
use crate::error::{Error, Result};

/// A 256-bit little-endian bit vector, the storage for every field element.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Wide([u64; 4]);

impl Wide {
    pub const ZERO: Wide = Wide([0; 4]);
    pub const ONE: Wide = Wide([1, 0, 0, 0]);
    pub const BITS: u32 = 256;

    pub const fn from_limbs(limbs: [u64; 4]) -> Self {
        Wide(limbs)
    }

    pub fn limbs(&self) -> [u64; 4] {
        self.0
    }

    pub fn from_u128(v: u128) -> Self {
        Wide([v as u64, (v >> 64) as u64, 0, 0])
    }

    /// Low 128 bits.
    pub fn low_u128(&self) -> u128 {
        self.0[0] as u128 | (self.0[1] as u128) << 64
    }

    /// All bits below `n` set.
    pub fn low_mask(n: u32) -> Self {
        assert!(n <= Self::BITS);
        let mut out = [0u64; 4];
        for (i, limb) in out.iter_mut().enumerate() {
            let lo = 64 * i as u32;
            if n >= lo + 64 {
                *limb = u64::MAX;
            } else if n > lo {
                *limb = (1u64 << (n - lo)) - 1;
            }
        }
        Wide(out)
    }

    pub fn bit(&self, i: u32) -> bool {
        i < Self::BITS && (self.0[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    pub fn set_bit(&mut self, i: u32, on: bool) {
        let (limb, off) = ((i / 64) as usize, i % 64);
        if on {
            self.0[limb] |= 1 << off;
        } else {
            self.0[limb] &= !(1 << off);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    /// Index of the highest set bit.
    pub fn degree(&self) -> Option<u32> {
        (0..4)
            .rev()
            .find(|&i| self.0[i] != 0)
            .map(|i| 64 * i as u32 + 63 - self.0[i].leading_zeros())
    }

    pub fn count_ones(&self) -> u32 {
        self.0.iter().map(|l| l.count_ones()).sum()
    }

    /// Left shift; bits pushed past position 255 are dropped.
    pub fn shl(&self, k: u32) -> Self {
        if k >= Self::BITS {
            return Self::ZERO;
        }
        let (limbs, bits) = ((k / 64) as usize, k % 64);
        let mut out = [0u64; 4];
        for i in (limbs..4).rev() {
            let src = i - limbs;
            out[i] = self.0[src] << bits;
            if bits != 0 && src > 0 {
                out[i] |= self.0[src - 1] >> (64 - bits);
            }
        }
        Wide(out)
    }

    pub fn shr(&self, k: u32) -> Self {
        if k >= Self::BITS {
            return Self::ZERO;
        }
        let (limbs, bits) = ((k / 64) as usize, k % 64);
        let mut out = [0u64; 4];
        for (i, o) in out.iter_mut().enumerate().take(4 - limbs) {
            let src = i + limbs;
            *o = self.0[src] >> bits;
            if bits != 0 && src + 1 < 4 {
                *o |= self.0[src + 1] << (64 - bits);
            }
        }
        Wide(out)
    }

    /// `len` (at most 32) bits starting at bit `pos`, as an integer.
    pub fn bits_at(&self, pos: u32, len: u32) -> u32 {
        debug_assert!(len <= 32 && pos + len <= Self::BITS);
        let (limb, off) = ((pos / 64) as usize, pos % 64);
        let mut v = self.0[limb] >> off;
        if off + len > 64 {
            v |= self.0[limb + 1] << (64 - off);
        }
        (v & ((1u64 << len) - 1)) as u32
    }

    /// Reads up to 32 little-endian bytes.
    pub fn from_le_bytes(bytes: &[u8]) -> Self {
        assert!(bytes.len() <= 32, "at most 32 bytes fit in a Wide");
        let mut buf = [0u8; 32];
        buf[..bytes.len()].copy_from_slice(bytes);
        let mut out = [0u64; 4];
        for (limb, chunk) in out.iter_mut().zip(buf.chunks_exact(8)) {
            *limb = u64::from_le_bytes(chunk.try_into().unwrap());
        }
        Wide(out)
    }

    pub fn to_le_bytes(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        for (chunk, limb) in out.chunks_exact_mut(8).zip(self.0) {
            chunk.copy_from_slice(&limb.to_le_bytes());
        }
        out
    }

    pub fn to_biguint(&self) -> BigUint {
        BigUint::from_bytes_le(&self.to_le_bytes())
    }
}

impl BitXor for Wide {
    type Output = Wide;
    fn bitxor(self, rhs: Wide) -> Wide {
        Wide([
            self.0[0] ^ rhs.0[0],
            self.0[1] ^ rhs.0[1],
            self.0[2] ^ rhs.0[2],
            self.0[3] ^ rhs.0[3],
        ])
    }
}

impl BitXorAssign for Wide {
    fn bitxor_assign(&mut self, rhs: Wide) {
        *self = *self ^ rhs;
    }
}

impl BitAnd for Wide {
    type Output = Wide;
    fn bitand(self, rhs: Wide) -> Wide {
        Wide([
            self.0[0] & rhs.0[0],
            self.0[1] & rhs.0[1],
            self.0[2] & rhs.0[2],
            self.0[3] & rhs.0[3],
        ])
    }
}

impl fmt::Debug for Wide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "0x{:016x}{:016x}{:016x}{:016x}",
            self.0[3], self.0[2], self.0[1], self.0[0]
        )
    }
}

/// A reduction polynomial written the way it is published: a leading
/// monomial plus a product of sparse factors, e.g.
/// `x^127 + (x^89 + x^41 + 1)(x^3 + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyForm {
    pub leading: u32,
    pub factors: &'static [&'static [u32]],
}

/// Expands a [`PolyForm`] over GF(2) and returns its exponents, highest first.
pub fn expand_polynomial(form: &PolyForm) -> Vec<u32> {
    let mut product: BTreeSet<u32> = BTreeSet::from([0]);
    for factor in form.factors {
        let mut next = BTreeSet::new();
        for &p in &product {
            for &q in factor.iter() {
                // coefficients live in GF(2): equal terms cancel
                if !next.insert(p + q) {
                    next.remove(&(p + q));
                }
            }
        }
        product = next;
    }
    if !product.insert(form.leading) {
        product.remove(&form.leading);
    }
    product.into_iter().rev().collect()
}

/// `p(x) = x^8 + x^6 + x^5 + x + 1`, the byte field used by the S-box.
pub const POLY_P: PolyForm = PolyForm {
    leading: 8,
    factors: &[&[6, 5, 1, 0]],
};
/// `p1(x) = x^127 + (x^89 + x^41 + 1)(x^3 + 1)`.
pub const POLY_P1: PolyForm = PolyForm {
    leading: 127,
    factors: &[&[89, 41, 0], &[3, 0]],
};
/// `p2(x) = x^126 + (x^83 + x^35 + 1)(x^7 + 1)`.
pub const POLY_P2: PolyForm = PolyForm {
    leading: 126,
    factors: &[&[83, 35, 0], &[7, 0]],
};
/// `p3(x) = x^128 + (x^96 + x^67 + x^32 + 1)(x^3 + 1)`.
pub const POLY_P3: PolyForm = PolyForm {
    leading: 128,
    factors: &[&[96, 67, 32, 0], &[3, 0]],
};
/// `p4(x) = x^128 + (x^96 + x^64 + x^37 + 1)(x^7 + x^5 + 1)`.
pub const POLY_P4: PolyForm = PolyForm {
    leading: 128,
    factors: &[&[96, 64, 37, 0], &[7, 5, 0]],
};
/// Degree-256 modulus of the single wide combiner projector.
pub const POLY_HAT: PolyForm = PolyForm {
    leading: 256,
    factors: &[&[224, 192, 161, 128, 96, 67, 32, 0], &[6, 0]],
};

/// Byte-indexed products `h * tail(x)`; valid when `deg(tail) + 16 < degree`
/// so that folding up to 16 overflow bits never needs a second pass.
struct ReductionTables {
    lo: [Wide; 256],
    hi: [Wide; 256],
}

/// A binary field `F[x]/p(x)`; `p` is monic and its leading term is implicit.
pub struct FieldSpec {
    name: String,
    degree: u32,
    tail: Wide,
    mask: Wide,
    primitive_claimed: bool,
    tables: Option<Box<ReductionTables>>,
}

impl FieldSpec {
    pub fn new(name: impl Into<String>, form: &PolyForm, primitive_claimed: bool) -> Result<Self> {
        let exps = expand_polynomial(form);
        Self::from_exponents(name, &exps, primitive_claimed)
    }

    /// Builds a field from the full exponent list of its modulus.
    pub fn from_exponents(
        name: impl Into<String>,
        exponents: &[u32],
        primitive_claimed: bool,
    ) -> Result<Self> {
        let name = name.into();
        let degree = exponents.iter().copied().max().unwrap_or(0);
        if degree == 0 || degree > Wide::BITS {
            return Err(Error::InvalidModulus(format!("{name}: degree {degree} not in 1..=256")));
        }
        let mut tail = Wide::ZERO;
        for &e in exponents.iter().filter(|&&e| e != degree) {
            if tail.bit(e) {
                return Err(Error::InvalidModulus(format!("{name}: repeated exponent {e}")));
            }
            tail.set_bit(e, true);
        }
        if !tail.bit(0) {
            return Err(Error::InvalidModulus(format!("{name}: constant term must be 1")));
        }
        let tail_degree = tail.degree().unwrap_or(0);
        let tables = (tail_degree + 16 < degree).then(|| {
            let mut t = Box::new(ReductionTables {
                lo: [Wide::ZERO; 256],
                hi: [Wide::ZERO; 256],
            });
            for h in 0..256u32 {
                for i in (0..8).filter(|i| (h >> i) & 1 == 1) {
                    t.lo[h as usize] ^= tail.shl(i);
                    t.hi[h as usize] ^= tail.shl(i + 8);
                }
            }
            t
        });
        Ok(FieldSpec {
            name,
            degree,
            tail,
            mask: Wide::low_mask(degree),
            primitive_claimed,
            tables,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn primitive_claimed(&self) -> bool {
        self.primitive_claimed
    }

    /// `p(x) - x^degree`.
    pub fn tail(&self) -> Wide {
        self.tail
    }

    /// Exponents of the modulus, highest first.
    pub fn exponents(&self) -> Vec<u32> {
        let mut out = vec![self.degree];
        out.extend((0..self.degree).rev().filter(|&i| self.tail.bit(i)));
        out
    }

    /// Bytes needed to encode one element.
    pub fn byte_len(&self) -> usize {
        self.degree.div_ceil(8) as usize
    }

    pub fn has_reduction_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// 2^degree - 1, the order of the multiplicative group.
    pub fn group_order(&self) -> BigUint {
        arith::mersenne(self.degree)
    }

    pub fn zero(&self) -> FieldElem<'_> {
        FieldElem { bits: Wide::ZERO, field: self }
    }

    pub fn one(&self) -> FieldElem<'_> {
        FieldElem { bits: Wide::ONE, field: self }
    }

    /// The generator candidate `x`.
    pub fn x(&self) -> FieldElem<'_> {
        self.one().mul_x_pow(1)
    }

    pub fn elem(&self, bits: Wide) -> Result<FieldElem<'_>> {
        if !(bits & !self.mask).is_zero() {
            return Err(Error::BitsAboveDegree { degree: self.degree });
        }
        Ok(FieldElem { bits, field: self })
    }

    /// Keeps the coefficients below the degree and drops the rest.
    pub fn elem_truncated(&self, bits: Wide) -> FieldElem<'_> {
        FieldElem {
            bits: bits & self.mask,
            field: self,
        }
    }

    pub fn elem_from_bytes(&self, bytes: &[u8]) -> Result<FieldElem<'_>> {
        if bytes.len() != self.byte_len() {
            return Err(Error::ElementLength {
                degree: self.degree,
                expected: self.byte_len(),
                got: bytes.len(),
            });
        }
        self.elem(Wide::from_le_bytes(bytes))
    }
}

impl std::ops::Not for Wide {
    type Output = Wide;
    fn not(self) -> Wide {
        Wide([!self.0[0], !self.0[1], !self.0[2], !self.0[3]])
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.tail == other.tail
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("name", &self.name)
            .field("exponents", &self.exponents())
            .field("primitive_claimed", &self.primitive_claimed)
            .finish()
    }
}

/// An element of a [`FieldSpec`]; coefficients at or above the degree are
/// always zero.
#[derive(Clone, Copy)]
pub struct FieldElem<'f> {
    bits: Wide,
    field: &'f FieldSpec,
}

impl<'f> FieldElem<'f> {
    pub fn bits(&self) -> Wide {
        self.bits
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    /// Coefficients of `x^0..x^7`.
    pub fn low_byte(&self) -> u8 {
        self.bits.0[0] as u8
    }

    /// Little-endian encoding, `ceil(degree / 8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits.to_le_bytes()[..self.field.byte_len()].to_vec()
    }

    /// `x^k * self`, for `1 <= k <= 16`.
    pub fn mul_x_pow(self, k: u32) -> Self {
        assert!((1..=16).contains(&k), "step exponent {k} outside 1..=16");
        let f = self.field;
        let bits = match &f.tables {
            Some(t) => {
                let over = self.bits.bits_at(f.degree - k, k) as usize;
                (self.bits.shl(k) & f.mask) ^ t.lo[over & 0xff] ^ t.hi[over >> 8]
            }
            None => {
                let mut b = self.bits;
                for _ in 0..k {
                    let carry = b.bit(f.degree - 1);
                    b = b.shl(1) & f.mask;
                    if carry {
                        b ^= f.tail;
                    }
                }
                b
            }
        };
        debug_assert!((bits & !f.mask).is_zero());
        FieldElem { bits, field: f }
    }

    /// Schoolbook product followed by long division by the modulus.
    pub fn naive_mul(&self, other: &FieldElem<'_>) -> Self {
        assert_eq!(self.field, other.field, "operands from different fields");
        let d = self.field.degree;
        let mut prod = [0u64; 8];
        for i in (0..d).filter(|&i| other.bits.bit(i)) {
            xor_shifted(&mut prod, &self.bits, i);
        }
        let mut modulus = self.field.tail;
        let top_in_range = d < Wide::BITS;
        if top_in_range {
            modulus.set_bit(d, true);
        }
        for i in (d..2 * d).rev() {
            if (prod[(i / 64) as usize] >> (i % 64)) & 1 == 1 {
                xor_shifted(&mut prod, &modulus, i - d);
                if !top_in_range {
                    // degree 256: the leading term sits outside `modulus`
                    prod[(i / 64) as usize] ^= 1 << (i % 64);
                }
            }
        }
        debug_assert!(prod[4..].iter().all(|&l| l == 0));
        let bits = Wide([prod[0], prod[1], prod[2], prod[3]]);
        debug_assert!((bits & !self.field.mask).is_zero());
        FieldElem { bits, field: self.field }
    }

    /// Square-and-multiply over [`naive_mul`](Self::naive_mul).
    pub fn pow(&self, n: &BigUint) -> Self {
        let mut acc = self.field.one();
        for i in (0..n.bits()).rev() {
            acc = acc.naive_mul(&acc);
            if n.bit(i) {
                acc = acc.naive_mul(self);
            }
        }
        acc
    }
}

fn xor_shifted(dst: &mut [u64; 8], src: &Wide, shift: u32) {
    let (limbs, bits) = ((shift / 64) as usize, shift % 64);
    for (i, &l) in src.0.iter().enumerate() {
        if l == 0 {
            continue;
        }
        dst[i + limbs] ^= l << bits;
        if bits != 0 && i + limbs + 1 < 8 {
            dst[i + limbs + 1] ^= l >> (64 - bits);
        }
    }
}

impl PartialEq for FieldElem<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.bits == other.bits
    }
}

impl Eq for FieldElem<'_> {}

impl BitXor for FieldElem<'_> {
    type Output = Self;
    fn bitxor(self, rhs: Self) -> Self {
        assert_eq!(self.field, rhs.field, "operands from different fields");
        FieldElem {
            bits: self.bits ^ rhs.bits,
            field: self.field,
        }
    }
}

impl fmt::Debug for FieldElem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({:?})", self.field.name, self.bits)
    }
}

/// Checks that `x` generates the full multiplicative group.
///
/// `factorization` lists the primes of `2^degree - 1` with multiplicities.
/// Returns [`Error::BadFactorization`] if the list does not multiply out to
/// `2^degree - 1` or contains a composite, and `Ok(false)` if the list is
/// sound but `x` has smaller order.
pub fn verify_primitive(spec: &FieldSpec, factorization: &[(BigUint, u32)]) -> Result<bool> {
    let order = spec.group_order();
    let product = factorization
        .iter()
        .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
    if product != order {
        return Err(Error::BadFactorization(format!(
            "factors multiply to {product}, expected 2^{} - 1 = {order}",
            spec.degree
        )));
    }
    if let Some((p, _)) = factorization.iter().find(|(p, _)| !arith::is_probable_prime(p)) {
        return Err(Error::BadFactorization(format!("{p} is not prime")));
    }
    let x = spec.x();
    if x.pow(&order) != spec.one() {
        return Ok(false);
    }
    Ok(factorization
        .iter()
        .all(|(q, _)| x.pow(&(&order / q)) != spec.one()))
}

/// Exhaustive irreducibility test: no polynomial of degree `1..=d/2` divides
/// the modulus. Only for small degrees.
pub fn is_irreducible_by_trial_division(spec: &FieldSpec) -> Result<bool> {
    let d = spec.degree;
    if d > 30 {
        return Err(Error::DegreeTooLarge(d));
    }
    let modulus = spec.tail.0[0] | 1 << d;
    for divisor in 2u64..(1 << (d / 2 + 1)) {
        if poly_rem_u64(modulus, divisor) == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn poly_rem_u64(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= db {
        a ^= b << (63 - a.leading_zeros() - db);
    }
    a
}

/// Multiplicative order of `x`, by walking its powers. Small degrees only.
pub fn order_of_x(spec: &FieldSpec) -> Result<u64> {
    if spec.degree > 32 {
        return Err(Error::DegreeTooLarge(spec.degree));
    }
    let one = spec.one();
    let mut e = spec.x();
    let mut n = 1u64;
    while e != one {
        e = e.mul_x_pow(1);
        n += 1;
        if e.is_zero() {
            return Err(Error::InvalidModulus(format!("{}: x is a zero divisor", spec.name)));
        }
    }
    Ok(n)
}

pub static FIELD_K: LazyLock<FieldSpec> =
    LazyLock::new(|| FieldSpec::new("K", &POLY_P, false).expect("valid modulus"));
pub static FIELD_E1: LazyLock<FieldSpec> =
    LazyLock::new(|| FieldSpec::new("E1", &POLY_P1, true).expect("valid modulus"));
pub static FIELD_E2: LazyLock<FieldSpec> =
    LazyLock::new(|| FieldSpec::new("E2", &POLY_P2, true).expect("valid modulus"));
pub static FIELD_E3: LazyLock<FieldSpec> =
    LazyLock::new(|| FieldSpec::new("E3", &POLY_P3, true).expect("valid modulus"));
pub static FIELD_E4: LazyLock<FieldSpec> =
    LazyLock::new(|| FieldSpec::new("E4", &POLY_P4, true).expect("valid modulus"));
pub static FIELD_HAT: LazyLock<FieldSpec> =
    LazyLock::new(|| FieldSpec::new("E256", &POLY_HAT, true).expect("valid modulus"));
