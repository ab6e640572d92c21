//! Exact integer and rational helpers: continued fractions, square-free
//! parts, trial-division primality and the Chinese remainder theorem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Continued-fraction convergents of `x` with denominator at most `max_den`.
///
/// The expansion runs on the exact binary value of `x`, so the
/// convergents are not polluted by rounding in the recurrence.
pub fn convergents(x: f64, max_den: u64) -> Vec<(i128, u64)> {
    let mut out = Vec::new();
    let Some(mut r) = BigRational::from_float(x) else {
        return out;
    };
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    loop {
        let a = r.floor();
        let Some(ai) = a.to_integer().to_i128() else {
            break;
        };
        let next = ai
            .checked_mul(h)
            .and_then(|v| v.checked_add(h_prev))
            .zip(ai.checked_mul(k).and_then(|v| v.checked_add(k_prev)));
        let Some((h_next, k_next)) = next else {
            break;
        };
        if k_next > i128::from(max_den) {
            break;
        }
        out.push((h_next, k_next as u64));
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        let frac = &r - &a;
        if frac.is_zero() {
            break;
        }
        r = frac.recip();
    }
    out
}

/// Smallest-denominator convergent `a/b` of `x` with `|x - a/b| <= tol`.
pub fn rationalize(x: f64, max_den: u64, tol: f64) -> Option<(i128, u64)> {
    convergents(x, max_den)
        .into_iter()
        .find(|&(a, b)| (x - a as f64 / b as f64).abs() <= tol)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_checked(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / a.gcd(&b)).checked_mul(b)
}

/// Writes `n = g^2 * delta` with `delta` square-free; returns `(delta, g)`.
pub fn squarefree_decomposition(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 0);
    }
    let mut rest = n;
    let mut delta = 1u64;
    let mut g = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        g *= p.pow(e / 2);
        if e % 2 == 1 {
            delta *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    delta *= rest;
    (delta, g)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Unique `x` in `[0, prod m)` with `x = r_i mod m_i`, moduli pairwise coprime.
pub fn crt(residues: &[BigInt], moduli: &[BigInt]) -> Option<BigInt> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, mi) in residues.iter().zip(moduli) {
        let e = m.extended_gcd(mi);
        if !e.gcd.is_one() {
            return None;
        }
        // x + m * t = r (mod mi)  =>  t = (r - x) * m^{-1} (mod mi)
        let t = ((r - &x) * e.x).mod_floor(mi);
        x += &m * t;
        m *= mi;
        x = x.mod_floor(&m);
    }
    Some(x)
}

/// Exact integer square root of a nonnegative big integer, if perfect.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergents_of_simple_fractions() {
        assert_eq!(rationalize(0.75, 100, 1e-12), Some((3, 4)));
        assert_eq!(rationalize(-2.5, 100, 1e-12), Some((-5, 2)));
        assert_eq!(rationalize(6.0, 100, 1e-12), Some((6, 1)));
        assert_eq!(rationalize(1.0 / 3.0, 100, 1e-12), Some((1, 3)));
    }

    #[test]
    fn irrational_has_no_small_denominator() {
        let x = 2f64.sqrt();
        assert_eq!(rationalize(x, 1_000_000, 1e-14), None);
        let cs = convergents(x, 100);
        assert_eq!(cs.last(), Some(&(99, 70)));
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_decomposition(12), (3, 2));
        assert_eq!(squarefree_decomposition(36), (1, 6));
        assert_eq!(squarefree_decomposition(5), (5, 1));
        assert_eq!(squarefree_decomposition(1), (1, 1));
        assert_eq!(squarefree_decomposition(200), (2, 10));
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn crt_small() {
        let r: Vec<BigInt> = [1, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        let m: Vec<BigInt> = [3, 5, 7].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(crt(&r, &m), Some(BigInt::from(85)));
        let bad: Vec<BigInt> = [3, 6].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(crt(&r[..2], &bad), None);
    }

    #[test]
    fn lcm_overflow_detected() {
        assert_eq!(lcm_checked(4, 6), Some(12));
        assert_eq!(lcm_checked(u64::MAX, u64::MAX - 1), None);
    }
}
