//! Key setup: the key-defined S-box, the diffusion layer `L`, and the
//! whitening strings `K̂` and `Ǩ`.

use std::fmt;
use std::sync::LazyLock;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gf2x::{Wide, FIELD_K};

/// An 8-bit vector over GF(2); bit `i` is the least significant first.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct BitVec8(pub u8);

impl BitVec8 {
    /// Moves bit `i` to bit `(i + n) mod 8`.
    pub fn rotl(self, n: u32) -> Self {
        BitVec8(self.0.rotate_left(n))
    }
}

impl fmt::Debug for BitVec8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec8({:#010b})", self.0)
    }
}

/// An 8x8 matrix over GF(2). Bit `j` of `rows[i]` is entry `(i, j)`; it acts
/// on a byte `x` as the column vector `(bit 0, ..., bit 7)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitMatrix8 {
    rows: [u8; 8],
}

impl BitMatrix8 {
    pub const IDENTITY: BitMatrix8 = BitMatrix8 {
        rows: [1, 2, 4, 8, 16, 32, 64, 128],
    };
    pub const ZERO: BitMatrix8 = BitMatrix8 { rows: [0; 8] };

    pub const fn from_rows(rows: [u8; 8]) -> Self {
        BitMatrix8 { rows }
    }

    pub fn rows(&self) -> [u8; 8] {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    /// `y_i = XOR_j M[i][j] x_j`.
    pub fn apply(&self, x: u8) -> u8 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |y, (i, row)| y | (((row & x).count_ones() as u8) & 1) << i)
    }

    pub fn mul(&self, rhs: &BitMatrix8) -> BitMatrix8 {
        let mut rows = [0u8; 8];
        for (i, out) in rows.iter_mut().enumerate() {
            for k in (0..8).filter(|&k| self.get(i, k)) {
                *out ^= rhs.rows[k];
            }
        }
        BitMatrix8 { rows }
    }

    /// Entrywise sum, i.e. the map `x -> self(x) ^ rhs(x)`.
    pub fn add(&self, rhs: &BitMatrix8) -> BitMatrix8 {
        let mut rows = self.rows;
        for (r, o) in rows.iter_mut().zip(rhs.rows) {
            *r ^= o;
        }
        BitMatrix8 { rows }
    }

    /// Gaussian elimination over GF(2).
    pub fn is_invertible(&self) -> bool {
        let mut rows = self.rows;
        for col in 0..8 {
            let Some(pivot) = (col..8).find(|&r| (rows[r] >> col) & 1 == 1) else {
                return false;
            };
            rows.swap(col, pivot);
            for r in 0..8 {
                if r != col && (rows[r] >> col) & 1 == 1 {
                    rows[r] ^= rows[col];
                }
            }
        }
        true
    }
}

impl fmt::Debug for BitMatrix8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rows.iter().map(|r| format!("{r:08b}")))
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeySize {
    Bits128,
    Bits256,
}

impl KeySize {
    pub fn from_len(len: usize) -> Result<Self> {
        match len {
            16 => Ok(KeySize::Bits128),
            32 => Ok(KeySize::Bits256),
            n => Err(Error::UnsupportedKeySize(n)),
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            KeySize::Bits128 => 128,
            KeySize::Bits256 => 256,
        }
    }
}

/// `λ`: the key itself for 128-bit keys, the XOR of its halves for 256-bit keys.
pub fn derive_lambda(key: &[u8]) -> Result<[u8; 16]> {
    let mut lambda = [0u8; 16];
    match KeySize::from_len(key.len())? {
        KeySize::Bits128 => lambda.copy_from_slice(key),
        KeySize::Bits256 => {
            for (i, l) in lambda.iter_mut().enumerate() {
                *l = key[i] ^ key[16 + i];
            }
        }
    }
    Ok(lambda)
}

/// Diagonal of the 8x8 bit matrix of `rho`: bit `i` of byte `i`.
pub fn build_v(rho: &[u8; 8]) -> BitVec8 {
    BitVec8((0..8).fold(0u8, |v, i| v | (rho[i] & (1 << i))))
}

/// `T_u * T_l`, with the off-diagonal entries of both unit-triangular factors
/// read from `rho` (entry `(i, j)` is bit `j` of byte `i`).
pub fn build_m(rho: &[u8; 8]) -> BitMatrix8 {
    let mut upper = [0u8; 8];
    let mut lower = [0u8; 8];
    for i in 0..8 {
        let above = !((2u16 << i) - 1) as u8;
        let below = ((1u16 << i) - 1) as u8;
        upper[i] = (rho[i] & above) | 1 << i;
        lower[i] = (rho[i] & below) | 1 << i;
    }
    BitMatrix8::from_rows(upper).mul(&BitMatrix8::from_rows(lower))
}

static SBOX0: LazyLock<[u8; 256]> = LazyLock::new(|| {
    let k = &*FIELD_K;
    let five = k.elem(Wide::from_u128(5)).expect("5 is in K");
    let e = BigUint::from(127u32);
    let mut table = [0u8; 256];
    for (x, out) in table.iter_mut().enumerate() {
        let base = k.elem(Wide::from_u128((x ^ 3) as u128)).expect("byte is in K");
        *out = five.naive_mul(&base.pow(&e)).low_byte();
    }
    table
});

/// The base S-box `5 * (x ^ 3)^127` in `K = F[x]/(x^8 + x^6 + x^5 + x + 1)`.
pub fn sbox0(x: u8) -> u8 {
    SBOX0[x as usize]
}

pub fn sbox0_table() -> &'static [u8; 256] {
    &SBOX0
}

/// A byte substitution table.
#[derive(Clone, PartialEq, Eq)]
pub struct SBox([u8; 256]);

impl SBox {
    pub fn from_table(table: [u8; 256]) -> Self {
        SBox(table)
    }

    /// `x -> S_0(x ^ v2) ^ v1`.
    pub fn keyed(v1: BitVec8, v2: BitVec8) -> Self {
        let mut t = [0u8; 256];
        for (x, out) in t.iter_mut().enumerate() {
            *out = sbox0(x as u8 ^ v2.0) ^ v1.0;
        }
        SBox(t)
    }

    pub fn apply(&self, x: u8) -> u8 {
        self.0[x as usize]
    }

    pub fn table(&self) -> &[u8; 256] {
        &self.0
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = [false; 256];
        self.0.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }
}

impl fmt::Debug for SBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SBox({})", hex::encode(self.0))
    }
}

/// Which of `A`, `B`, `A ^ B` sits at a position of the 4x4 layer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LEntry {
    A,
    B,
    AB,
}

/// Block pattern of `L`; `L_PATTERN[i][j]` maps input byte `j` into output byte `i`.
pub const L_PATTERN: [[LEntry; 4]; 4] = {
    use LEntry::*;
    [[A, B, A, AB], [B, A, AB, A], [A, AB, A, B], [AB, A, B, A]]
};

/// The word-wise diffusion layer, a 4x4 block matrix over `{A, B, A ^ B}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LMap {
    pub a: BitMatrix8,
    pub b: BitMatrix8,
}

impl LMap {
    pub fn block(&self, entry: LEntry) -> BitMatrix8 {
        match entry {
            LEntry::A => self.a,
            LEntry::B => self.b,
            LEntry::AB => self.a.add(&self.b),
        }
    }

    /// Applies `L` to one word `s0..s3`, evaluating every block matrix.
    pub fn apply_word(&self, word: [u8; 4]) -> [u8; 4] {
        let mut out = [0u8; 4];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, &s) in word.iter().enumerate() {
                *o ^= self.block(L_PATTERN[i][j]).apply(s);
            }
        }
        out
    }

    /// Bit-level 32x32 form; row `8i + r` is output bit `r` of byte `i`, as a
    /// mask over input bits.
    pub fn dense(&self) -> [u32; 32] {
        let mut m = [0u32; 32];
        for (i, pattern) in L_PATTERN.iter().enumerate() {
            for (j, &entry) in pattern.iter().enumerate() {
                let blk = self.block(entry);
                for r in 0..8 {
                    m[8 * i + r] |= (blk.rows()[r] as u32) << (8 * j);
                }
            }
        }
        m
    }

    /// Rank of the 32x32 form is full.
    pub fn is_invertible(&self) -> bool {
        let mut rows = self.dense();
        let mut rank = 0;
        for col in 0..32 {
            let Some(p) = (rank..32).find(|&r| (rows[r] >> col) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            for r in 0..32 {
                if r != rank && (rows[r] >> col) & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rank == 32
    }
}

/// Everything derived from the secret key alone.
#[derive(Clone)]
pub struct KeyMaterial {
    key_size: KeySize,
    lambda: [u8; 16],
    sbox: SBox,
    lmap: LMap,
    v1: BitVec8,
    v2: BitVec8,
    k_hat: [u8; 32],
    k_check: [u8; 32],
    /// `qt[j][x]`: contribution of input byte `j` with value `x` to an output
    /// word after S and L, packed little-endian.
    qt: Box<[[u32; 256]; 4]>,
}

impl KeyMaterial {
    pub fn new(key: &[u8]) -> Result<Self> {
        let key_size = KeySize::from_len(key.len())?;
        let lambda = derive_lambda(key)?;
        let lo: [u8; 8] = lambda[..8].try_into().unwrap();
        let hi: [u8; 8] = lambda[8..].try_into().unwrap();
        let lmap = LMap {
            a: build_m(&lo),
            b: build_m(&hi),
        };
        let (v_lo, v_hi) = (build_v(&lo), build_v(&hi));
        let v1 = BitVec8(v_lo.0 ^ v_hi.0);
        let v2 = BitVec8(v_lo.0 ^ v_hi.rotl(1).0);

        let mut k_hat = [0u8; 32];
        match key_size {
            KeySize::Bits256 => k_hat.copy_from_slice(key),
            KeySize::Bits128 => {
                k_hat[..16].copy_from_slice(key);
                for (d, s) in k_hat[16..].iter_mut().zip(key) {
                    *d = !s;
                }
            }
        }
        let mut k_check = [0u8; 32];
        for i in 0..16 {
            k_check[i] = !k_hat[16 + i];
            k_check[16 + i] = !k_hat[i];
        }

        Ok(Self::assemble(key_size, lambda, SBox::keyed(v1, v2), lmap, v1, v2, k_hat, k_check))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        key_size: KeySize,
        lambda: [u8; 16],
        sbox: SBox,
        lmap: LMap,
        v1: BitVec8,
        v2: BitVec8,
        k_hat: [u8; 32],
        k_check: [u8; 32],
    ) -> Self {
        let mut qt = Box::new([[0u32; 256]; 4]);
        for (j, table) in qt.iter_mut().enumerate() {
            let column: Vec<BitMatrix8> = (0..4).map(|i| lmap.block(L_PATTERN[i][j])).collect();
            for (x, slot) in table.iter_mut().enumerate() {
                let s = sbox.apply(x as u8);
                let bytes = [
                    column[0].apply(s),
                    column[1].apply(s),
                    column[2].apply(s),
                    column[3].apply(s),
                ];
                *slot = u32::from_le_bytes(bytes);
            }
        }
        KeyMaterial {
            key_size,
            lambda,
            sbox,
            lmap,
            v1,
            v2,
            k_hat,
            k_check,
            qt,
        }
    }

    /// Replaces the S-box (and the tables built from it). Used to check that
    /// the self-test catches a damaged table.
    #[doc(hidden)]
    pub fn with_sbox(self, sbox: SBox) -> Self {
        Self::assemble(
            self.key_size,
            self.lambda,
            sbox,
            self.lmap,
            self.v1,
            self.v2,
            self.k_hat,
            self.k_check,
        )
    }

    pub fn key_size(&self) -> KeySize {
        self.key_size
    }

    pub fn lambda(&self) -> &[u8; 16] {
        &self.lambda
    }

    pub fn sbox(&self) -> &SBox {
        &self.sbox
    }

    pub fn lmap(&self) -> &LMap {
        &self.lmap
    }

    pub fn v1(&self) -> BitVec8 {
        self.v1
    }

    pub fn v2(&self) -> BitVec8 {
        self.v2
    }

    /// `K̂`: the 256-bit key, or a 128-bit key followed by its complement.
    pub fn k_hat(&self) -> &[u8; 32] {
        &self.k_hat
    }

    /// `Ǩ`: complement of the second half of `K̂`, then of the first half.
    pub fn k_check(&self) -> &[u8; 32] {
        &self.k_check
    }

    #[inline]
    fn q_word(&self, w: &[u8]) -> u32 {
        self.qt[0][w[0] as usize]
            ^ self.qt[1][w[1] as usize]
            ^ self.qt[2][w[2] as usize]
            ^ self.qt[3][w[3] as usize]
    }

    /// `Q = L . S` in place, word by word.
    ///
    /// Panics if the length is not a multiple of 4.
    pub fn q_apply(&self, data: &mut [u8]) {
        assert!(data.len().is_multiple_of(4), "Q needs whole 4-byte words, got {} bytes", data.len());
        for w in data.chunks_exact_mut(4) {
            let q = self.q_word(w);
            w.copy_from_slice(&q.to_le_bytes());
        }
    }

    #[inline]
    pub fn q_block(&self, block: &[u8; 16]) -> [u8; 16] {
        let mut out = *block;
        self.q_apply(&mut out);
        out
    }
}

impl fmt::Debug for KeyMaterial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // no key-derived bytes in debug output
        f.debug_struct("KeyMaterial")
            .field("key_size", &self.key_size)
            .finish_non_exhaustive()
    }
}
