//! Exact integer primitives.
//!
//! Nothing in this module touches floating point. Square certificates reach
//! n⁴ scale, so the wide helpers work on `u128` and report overflow instead of
//! wrapping.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Floor square root, `r² ≤ x < (r+1)²`, by integer Newton iteration.
pub fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    // 2^ceil(bits/2) is an upper bound for the root; Newton then decreases monotonically.
    let bits = 128 - x.leading_zeros();
    let mut r = 1u128 << bits.div_ceil(2);
    loop {
        let next = (r + x / r) >> 1;
        if next >= r {
            return r;
        }
        r = next;
    }
}

pub fn isqrt_u64(x: u64) -> u64 {
    isqrt(x as u128) as u64
}

/// Returns the root when `x` is a perfect square.
pub fn is_square(x: u128) -> Option<u128> {
    // Squares are 0, 1, 4 or 9 mod 16.
    if !matches!(x & 15, 0 | 1 | 4 | 9) {
        return None;
    }
    let r = isqrt(x);
    (r * r == x).then_some(r)
}

pub fn checked_square(x: u128, what: &'static str) -> Result<u128> {
    x.checked_mul(x).ok_or(Error::Overflow(what))
}

pub fn checked_mul(a: u128, b: u128, what: &'static str) -> Result<u128> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

pub fn checked_add(a: u128, b: u128, what: &'static str) -> Result<u128> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

/// Prime factorization of a positive integer, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, a)| a as u64 + 1).product()
    }

    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, a)| (p as u128).pow(a))
            .product()
    }
}

const TRIAL_LIMIT: u64 = 1 << 12;

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidInput("factorize requires n >= 1".into()));
    }
    let mut primes = Vec::new();
    let mut m = n;
    if m % 2 == 0 {
        let k = m.trailing_zeros();
        m >>= k;
        primes.push((2, k));
    }
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= m {
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            primes.push((p, k));
        }
        p += 2;
    }
    if m > 1 {
        let mut large = Vec::new();
        split_large(m, &mut large);
        large.sort_unstable();
        for q in large {
            match primes.last_mut() {
                Some((last, k)) if *last == q => *k += 1,
                _ => primes.push((q, 1)),
            }
        }
    }
    Ok(Factorization { n, factors: primes })
}

fn split_large(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.push(m);
        return;
    }
    let r = isqrt_u64(m);
    if r * r == m {
        split_large(r, out);
        split_large(r, out);
        return;
    }
    let d = pollard_brent(m);
    split_large(d, out);
    split_large(m / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial factor of an odd composite `n` that is not a perfect square.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = y;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r <<= 1;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Every divisor of `f.n`, ascending.
pub fn divisors(f: &Factorization) -> Vec<u64> {
    divisors_with_omega(f).into_iter().map(|(d, _)| d).collect()
}

/// Every divisor paired with its number of distinct prime factors, ascending by divisor.
pub fn divisors_with_omega(f: &Factorization) -> Vec<(u64, u32)> {
    let mut out = vec![(1u64, 0u32)];
    for &(p, a) in &f.factors {
        let base = out.len();
        let mut pk = 1u64;
        for _ in 0..a {
            pk *= p;
            for i in 0..base {
                let (d, w) = out[i];
                out.push((d * pk, w + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

/// All `(U, V)` with `U ≤ V`, both odd, coprime and `U² + V² = t`.
pub fn two_square_decompositions(t: u64, require_gt1: bool) -> Result<Vec<(u64, u64)>> {
    if t == 0 || t % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "two-square decomposition needs a positive even total, got {t}"
        )));
    }
    let t = t as u128;
    let mut out = Vec::new();
    let mut u = 1u128;
    while 2 * u * u <= t {
        if let Some(v) = is_square(t - u * u) {
            if v % 2 == 1
                && gcd_u128(u, v) == 1
                && (!require_gt1 || u > 1)
            {
                out.push((u as u64, v as u64));
            }
        }
        u += 2;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(12, 8), 4);
        assert_eq!(gcd(2, 1), 1);
        assert_eq!(gcd(0, 0), 0);
        assert_eq!(gcd(7, 0), 7);
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(133_956), 366);
        assert_eq!(isqrt(0), 0);
        assert_eq!(124 * 124, 15_376);
        assert_eq!(isqrt(15_624), 124);
        assert_eq!(isqrt(u128::MAX), u64::MAX as u128);
    }

    #[test]
    fn is_square_examples() {
        assert_eq!(is_square(14_884), Some(122));
        assert_eq!(is_square(1), Some(1));
        assert_eq!(is_square(887_364), Some(942));
        assert_eq!(is_square(2), None);
        assert_eq!(is_square(0), Some(0));
    }

    #[test]
    fn isqrt_random_million() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        for _ in 0..1_000_000 {
            let x: u128 = rng.gen::<u128>() >> rng.gen_range(0..128);
            let r = isqrt(x);
            assert!(r * r <= x);
            let s = r + 1;
            assert!(s.checked_mul(s).is_none_or(|s2| s2 > x));
        }
    }

    #[test]
    fn is_square_at_u63_boundary() {
        let top = (1u128 << 63) - 1;
        for r in [top, top - 1, 1 << 62, 3_037_000_499, 1] {
            assert_eq!(is_square(r * r), Some(r));
            assert_eq!(is_square(r * r + 1), None);
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(85).unwrap().factors, vec![(5, 1), (17, 1)]);
        assert_eq!(
            factorize(495).unwrap().factors,
            vec![(3, 2), (5, 1), (11, 1)]
        );
        assert!(factorize(1).unwrap().factors.is_empty());
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_large_semiprimes() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 4_294_967_279u64;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors, vec![(q, 1), (p, 1)]);
        let f = factorize(p * p).unwrap();
        assert_eq!(f.factors, vec![(p, 2)]);
        let big_prime = 18_446_744_073_709_551_557u64;
        assert_eq!(factorize(big_prime).unwrap().factors, vec![(big_prime, 1)]);
    }

    #[test]
    fn factorize_exhaustive_to_1e5() {
        for n in 1..=100_000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.product(), n as u128, "n={n}");
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.factors.iter().all(|&(p, a)| a >= 1 && is_prime(p)));
        }
    }

    #[test]
    fn divisors_examples() {
        // trial-division oracle
        let brute = |n: u64| (1..=n).filter(|d| n % d == 0).collect::<Vec<_>>();
        assert_eq!(divisors(&factorize(117).unwrap()), brute(117));
        assert_eq!(brute(117), vec![1, 3, 9, 13, 39, 117]);
        assert_eq!(divisors(&factorize(85).unwrap()), vec![1, 5, 17, 85]);
        assert_eq!(divisors(&factorize(97).unwrap()), vec![1, 97]);
        for n in 1..2000 {
            assert_eq!(divisors(&factorize(n).unwrap()), brute(n));
        }
    }

    #[test]
    fn two_square_examples() {
        assert_eq!(
            two_square_decompositions(130, true).unwrap(),
            vec![(3, 11), (7, 9)]
        );
        assert_eq!(two_square_decompositions(2, false).unwrap(), vec![(1, 1)]);
        assert!(two_square_decompositions(8, false).unwrap().is_empty());
        assert!(two_square_decompositions(8, true).unwrap().is_empty());
        assert!(two_square_decompositions(7, false).is_err());
        // brute-force oracle on 130 with the relaxed flag
        let mut brute = Vec::new();
        for u in (1..=11u64).step_by(2) {
            for v in (u..=11).step_by(2) {
                if u * u + v * v == 130 && gcd(u, v) == 1 {
                    brute.push((u, v));
                }
            }
        }
        assert_eq!(two_square_decompositions(130, false).unwrap(), brute);
    }

    proptest! {
        #[test]
        fn factorize_random_u64(n in 1u64..) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.product(), n as u128);
            prop_assert!(f.factors.iter().all(|&(p, _)| is_prime(p)));
        }

        #[test]
        fn divisor_count_matches(n in 1u64..1_000_000) {
            let f = factorize(n).unwrap();
            let ds = divisors(&f);
            prop_assert_eq!(ds.len() as u64, f.divisor_count());
            prop_assert!(ds.iter().all(|d| n % d == 0));
        }

        #[test]
        fn two_square_elements_valid(half in 1u64..200_000, strict: bool) {
            let t = 2 * half;
            for (u, v) in two_square_decompositions(t, strict).unwrap() {
                prop_assert_eq!(u * u + v * v, t);
                prop_assert!(u % 2 == 1 && v % 2 == 1 && u <= v);
                prop_assert_eq!(gcd(u, v), 1);
                prop_assert!(!strict || u > 1);
            }
        }
    }
}
