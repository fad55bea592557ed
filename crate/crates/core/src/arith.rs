//! Big-integer helpers: Mersenne numbers, Miller-Rabin, small factorizations.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// `2^n - 1`.
pub fn mersenne(n: u32) -> BigUint {
    (BigUint::one() << n as usize) - 1u32
}

const WITNESSES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Miller-Rabin with the first 24 prime bases. Deterministic below 3.3e24,
/// error probability under 4^-24 above that.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &WITNESSES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s as usize;
    'witness: for &a in &WITNESSES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization for word-sized integers.
pub fn factor_u64(mut n: u64) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((BigUint::from(p), e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((BigUint::from(n), 1));
    }
    out
}

pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Positive divisors of `n` in increasing order.
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64(n) {
        let p = p.to_u64().expect("factor of a u64");
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for &d in &divs {
            let mut q = d;
            for _ in 0..=e {
                next.push(q);
                q *= p;
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mersenne_primes() {
        for n in [2u32, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127] {
            assert!(is_probable_prime(&mersenne(n)), "2^{n}-1");
        }
        for n in [4u32, 11, 23, 29, 126, 128] {
            assert!(!is_probable_prime(&mersenne(n)), "2^{n}-1");
        }
    }

    #[test]
    fn small_primes_and_composites() {
        let primes: Vec<u32> = (0..200u32)
            .filter(|&n| is_probable_prime(&BigUint::from(n)))
            .collect();
        let sieve: Vec<u32> = (2..200u32)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(primes, sieve);
        // Carmichael numbers
        for c in [561u64, 1105, 1729, 3_215_031_751] {
            assert!(!is_probable_prime(&BigUint::from(c)));
        }
    }

    #[test]
    fn factor_and_divisors() {
        let f = factor_u64(3937);
        assert_eq!(f, vec![(BigUint::from(31u32), 1), (BigUint::from(127u32), 1)]);
        assert_eq!(divisors_u64(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors_u64(1), vec![1]);
    }
}
