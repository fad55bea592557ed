//! Definitional implementation used as an oracle: bit-serial field steps,
//! dense boolean matrices, no tables. Shares no code with the library.

#![allow(dead_code, clippy::needless_range_loop)]

/// A field as a list of modulus exponents (leading one first).
#[derive(Clone, Copy)]
pub struct RefField {
    pub degree: usize,
    pub low_terms: &'static [usize],
}

pub const P1: RefField = RefField { degree: 127, low_terms: &[92, 89, 44, 41, 3, 0] };
pub const P2: RefField = RefField { degree: 126, low_terms: &[90, 83, 42, 35, 7, 0] };
pub const P3: RefField = RefField { degree: 128, low_terms: &[99, 96, 70, 67, 35, 32, 3, 0] };
pub const P4: RefField = RefField {
    degree: 128,
    low_terms: &[103, 101, 96, 71, 69, 64, 44, 42, 37, 7, 5, 0],
};
pub const PHAT: RefField = RefField {
    degree: 256,
    low_terms: &[230, 224, 198, 192, 167, 161, 134, 128, 102, 96, 73, 67, 38, 32, 6, 0],
};

/// Element as a bit vector, index = power of x.
pub type Bits = Vec<bool>;

pub fn bits_from_bytes(bytes: &[u8], n: usize) -> Bits {
    (0..n).map(|i| (bytes[i / 8] >> (i % 8)) & 1 == 1).collect()
}

pub fn bytes_from_bits(bits: &[bool], nbytes: usize) -> Vec<u8> {
    let mut out = vec![0u8; nbytes];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            out[i / 8] |= 1 << (i % 8);
        }
    }
    out
}

/// Multiplies by x once, k times.
pub fn ref_mul_x_pow(f: &RefField, e: &Bits, k: u32) -> Bits {
    let mut e = e.clone();
    for _ in 0..k {
        let carry = e[f.degree - 1];
        for i in (1..f.degree).rev() {
            e[i] = e[i - 1];
        }
        e[0] = false;
        if carry {
            for &t in f.low_terms {
                e[t] = !e[t];
            }
        }
    }
    e
}

/// GF(2^8) product mod x^8 + x^6 + x^5 + x + 1, Russian-peasant style.
pub fn gf8_mul(mut a: u8, mut b: u8) -> u8 {
    let mut r = 0u8;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        let carry = a & 0x80 != 0;
        a <<= 1;
        if carry {
            a ^= 0x63;
        }
        b >>= 1;
    }
    r
}

pub fn ref_sbox0(x: u8) -> u8 {
    let base = x ^ 3;
    let mut acc = 1u8;
    for _ in 0..127 {
        acc = gf8_mul(acc, base);
    }
    gf8_mul(5, acc)
}

pub type Mat8 = [[bool; 8]; 8];

fn rho_bit(rho: &[u8], idx: usize) -> bool {
    (rho[idx / 8] >> (idx % 8)) & 1 == 1
}

pub fn ref_matrix(rho: &[u8]) -> Mat8 {
    let mut tu = [[false; 8]; 8];
    let mut tl = [[false; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            tu[i][j] = match i.cmp(&j) {
                std::cmp::Ordering::Less => rho_bit(rho, 8 * i + j),
                std::cmp::Ordering::Equal => true,
                std::cmp::Ordering::Greater => false,
            };
            tl[i][j] = match i.cmp(&j) {
                std::cmp::Ordering::Greater => rho_bit(rho, 8 * i + j),
                std::cmp::Ordering::Equal => true,
                std::cmp::Ordering::Less => false,
            };
        }
    }
    let mut m = [[false; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            let mut acc = false;
            for k in 0..8 {
                acc ^= tu[i][k] & tl[k][j];
            }
            m[i][j] = acc;
        }
    }
    m
}

pub fn ref_vector(rho: &[u8]) -> u8 {
    (0..8).fold(0u8, |v, i| v | (rho_bit(rho, 8 * i + i) as u8) << i)
}

pub fn mat_apply(m: &Mat8, x: u8) -> u8 {
    let mut y = 0u8;
    for i in 0..8 {
        let mut acc = false;
        for j in 0..8 {
            acc ^= m[i][j] & ((x >> j) & 1 == 1);
        }
        y |= (acc as u8) << i;
    }
    y
}

pub struct RefKey {
    pub a: Mat8,
    pub b: Mat8,
    pub v1: u8,
    pub v2: u8,
    pub sbox: [u8; 256],
    /// 32x32 GF(2) matrix of L over input bits (byte j bit c = column 8j + c).
    pub l_dense: [[bool; 32]; 32],
    pub k_hat: [u8; 32],
    pub k_check: [u8; 32],
}

impl RefKey {
    pub fn new(key: &[u8]) -> Self {
        let lambda: Vec<u8> = if key.len() == 32 {
            (0..16).map(|i| key[i] ^ key[16 + i]).collect()
        } else {
            key.to_vec()
        };
        let (l1, l2) = (&lambda[..8], &lambda[8..]);
        let a = ref_matrix(l1);
        let b = ref_matrix(l2);
        let (va, vb) = (ref_vector(l1), ref_vector(l2));
        let v1 = va ^ vb;
        let v2 = va ^ vb.rotate_left(1);
        let mut sbox = [0u8; 256];
        for x in 0..256 {
            sbox[x] = ref_sbox0(x as u8 ^ v2) ^ v1;
        }
        // block pattern [[A,B,A,A+B],[B,A,A+B,A],[A,A+B,A,B],[A+B,A,B,A]]
        let sel = [[1, 2, 1, 3], [2, 1, 3, 1], [1, 3, 1, 2], [3, 1, 2, 1]];
        let mut l_dense = [[false; 32]; 32];
        for bi in 0..4 {
            for bj in 0..4 {
                for r in 0..8 {
                    for c in 0..8 {
                        let ea = a[r][c];
                        let eb = b[r][c];
                        l_dense[8 * bi + r][8 * bj + c] = match sel[bi][bj] {
                            1 => ea,
                            2 => eb,
                            _ => ea ^ eb,
                        };
                    }
                }
            }
        }
        let mut k_hat = [0u8; 32];
        if key.len() == 32 {
            k_hat.copy_from_slice(key);
        } else {
            for i in 0..16 {
                k_hat[i] = key[i];
                k_hat[16 + i] = !key[i];
            }
        }
        let mut k_check = [0u8; 32];
        for i in 0..16 {
            k_check[i] = !k_hat[16 + i];
            k_check[16 + i] = !k_hat[i];
        }
        RefKey { a, b, v1, v2, sbox, l_dense, k_hat, k_check }
    }

    pub fn l_word(&self, w: &[u8]) -> [u8; 4] {
        let input = bits_from_bytes(w, 32);
        let mut out = [false; 32];
        for r in 0..32 {
            for c in 0..32 {
                out[r] ^= self.l_dense[r][c] & input[c];
            }
        }
        let b = bytes_from_bits(&out, 4);
        [b[0], b[1], b[2], b[3]]
    }

    pub fn q(&self, data: &[u8]) -> Vec<u8> {
        let subst: Vec<u8> = data.iter().map(|&x| self.sbox[x as usize]).collect();
        subst.chunks(4).flat_map(|w| self.l_word(w)).collect()
    }
}

pub fn ref_phi(z: &[u8]) -> Vec<u8> {
    (0..32).map(|i| if i == 31 { z[31] } else { z[(4 * i) % 31] }).collect()
}

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

pub fn ref_f(k: &RefKey, z: &[u8]) -> Vec<u8> {
    k.q(&ref_phi(z))
}

pub fn ref_g(k: &RefKey, z: &[u8]) -> Vec<u8> {
    let s1 = ref_f(k, z);
    let s2 = ref_f(k, &xor(&s1, &k.k_hat));
    ref_f(k, &xor(&s2, &k.k_check))
}

/// floor(e * 57!) little-endian, as written out in decimal arithmetic below.
pub fn ref_constant_c() -> Vec<u8> {
    // sum_{k=0}^{57} 57!/k! with little-endian base-256 digit vectors
    let mut term = vec![1u32];
    let mut sum = vec![1u32];
    fn mul_small(v: &mut Vec<u32>, m: u32) {
        let mut carry = 0u32;
        for d in v.iter_mut() {
            let t = *d * m + carry;
            *d = t & 0xff;
            carry = t >> 8;
        }
        while carry > 0 {
            v.push(carry & 0xff);
            carry >>= 8;
        }
    }
    fn add(a: &mut Vec<u32>, b: &[u32]) {
        if a.len() < b.len() {
            a.resize(b.len(), 0);
        }
        let mut carry = 0;
        for i in 0..a.len() {
            let t = a[i] + b.get(i).copied().unwrap_or(0) + carry;
            a[i] = t & 0xff;
            carry = t >> 8;
        }
        if carry > 0 {
            a.push(carry);
        }
    }
    for k in (1..=57u32).rev() {
        mul_small(&mut term, k);
        add(&mut sum, &term);
    }
    sum.into_iter().map(|d| d as u8).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RefMode {
    Standard,
    R1,
    R2,
    R3,
    Big,
}

#[derive(Clone)]
pub struct RefState {
    pub alpha: Bits,
    pub beta: Bits,
    pub omega: Bits,
    pub tau: Bits,
    pub sigma: Bits,
    pub u: Vec<u8>,
    pub v: Vec<u8>,
    pub eta: Vec<u8>,
    pub mode: RefMode,
}

pub fn ref_chain(k: &RefKey, iv: &[u8]) -> [Vec<u8>; 4] {
    let c = ref_constant_c();
    let x0 = ref_g(k, &xor(iv, &c));
    let x1 = ref_g(k, &xor(&x0, &c));
    let x2 = ref_g(k, &xor(&x1, &c));
    let x3 = ref_g(k, &xor(&x2, &c));
    [x0, x1, x2, x3]
}

pub fn ref_load(k: &RefKey, chain: &[Vec<u8>; 4], mode: RefMode) -> RefState {
    let [x0, x1, x2, x3] = chain;
    let eta = xor(&x0[..16], &x0[16..]);
    let all_bits = bits_from_bytes(x2, 256);
    let alpha = all_bits[..127].to_vec();
    let beta = all_bits[128..254].to_vec();
    let src = if x3.iter().all(|&b| b == 0) { k.k_hat.to_vec() } else { x3.clone() };
    let omega = bits_from_bytes(&src[..16], 128);
    let tau = bits_from_bytes(&src[16..], 128);
    let sigma = bits_from_bytes(&src, 256);
    RefState {
        alpha,
        beta,
        omega,
        tau,
        sigma,
        u: x1[..16].to_vec(),
        v: x1[16..].to_vec(),
        eta,
        mode,
    }
}

pub fn ref_setup(key: &[u8], iv: &[u8], mode: RefMode) -> (RefKey, RefState) {
    let k = RefKey::new(key);
    let chain = ref_chain(&k, iv);
    let st = ref_load(&k, &chain, mode);
    (k, st)
}

fn low_byte(bits: &[bool]) -> u8 {
    bytes_from_bits(&bits[..8], 1)[0]
}

impl RefState {
    pub fn dice(&self) -> u8 {
        match self.mode {
            RefMode::Standard | RefMode::R2 | RefMode::Big => low_byte(&self.alpha) ^ low_byte(&self.beta),
            RefMode::R1 => low_byte(&self.alpha),
            RefMode::R3 => {
                let o = bytes_from_bits(&self.omega, 16);
                let t = bytes_from_bits(&self.tau, 16);
                o[15] ^ t[15]
            }
        }
    }

    pub fn clock(&mut self) -> (u32, u32) {
        let d = self.dice();
        let a = 1 + (d & 15) as u32;
        let b = 1 + (d >> 4) as u32;
        if self.mode == RefMode::Big {
            self.sigma = ref_mul_x_pow(&PHAT, &self.sigma, a);
            let s = bytes_from_bits(&self.sigma, 32);
            self.u = xor(&self.u, &s[..16]);
            self.v = xor(&self.v, &s[16..]);
        } else {
            self.omega = ref_mul_x_pow(&P3, &self.omega, a);
            self.tau = ref_mul_x_pow(&P4, &self.tau, b);
            self.u = xor(&self.u, &bytes_from_bits(&self.omega, 16));
            self.v = xor(&self.v, &bytes_from_bits(&self.tau, 16));
        }
        self.alpha = ref_mul_x_pow(&P1, &self.alpha, 8);
        self.beta = ref_mul_x_pow(&P2, &self.beta, 8);
        (a, b)
    }

    pub fn output(&self, k: &RefKey) -> Vec<u8> {
        match self.mode {
            RefMode::Standard | RefMode::Big => {
                let inner = xor(&k.q(&self.u), &self.v);
                let t: Vec<u8> = (0..16).map(|i| inner[4 * (i % 4) + i / 4]).collect();
                xor(&k.q(&t), &self.eta)
            }
            RefMode::R1 | RefMode::R3 => xor(&k.q(&self.u), &self.v),
            RefMode::R2 => {
                if self.alpha[0] {
                    xor(&k.q(&self.v), &self.u)
                } else {
                    xor(&k.q(&self.u), &self.v)
                }
            }
        }
    }
}

pub fn ref_keystream(key: &[u8], iv: &[u8], mode: RefMode, blocks: usize) -> Vec<u8> {
    let (k, mut st) = ref_setup(key, iv, mode);
    let mut out = Vec::new();
    for _ in 0..blocks {
        st.clock();
        out.extend(st.output(&k));
    }
    out
}
