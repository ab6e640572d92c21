//! Univariate polynomials with big-integer coefficients, lowest degree first.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::rational::exact_sqrt;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl Serialize for IntPoly {
    /// Coefficients as decimal strings, lowest degree first, so values
    /// beyond 2^53 survive JSON consumers.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn eval(&self, y: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * y + c)
    }

    pub fn eval_f64(&self, y: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * y + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Pseudo-remainder `lc(d)^k * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo_rem by zero polynomial");
        let lc = d.leading().expect("nonzero").clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().expect("nonzero").clone();
            let shift = dr - dd;
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc).collect();
            for (i, c) in d.coeffs.iter().enumerate() {
                next[i + shift] -= c * &lr;
            }
            r = Self::new(next);
        }
        r
    }

    /// Exact quotient when `d` divides `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let lc = d.leading()?.clone();
        let mut r = self.coeffs.clone();
        let Some(dn) = self.degree() else {
            return Some(Self::zero());
        };
        if dn < dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); dn - dd + 1];
        for i in (0..=dn - dd).rev() {
            let top = &r[i + dd];
            if !(top % &lc).is_zero() {
                return None;
            }
            let f = top / &lc;
            for (j, c) in d.coeffs.iter().enumerate() {
                r[i + j] -= c * &f;
            }
            q[i] = f;
        }
        r.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    /// Greatest common divisor over the rationals, normalized to a
    /// primitive integer polynomial with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// Squarefree means `gcd(f, f')` is a nonzero constant.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `s` with `s * s == self`, leading coefficient positive, if one exists.
    pub fn exact_sqrt(&self) -> Option<Self> {
        let Some(deg) = self.degree() else {
            return Some(Self::zero());
        };
        if deg % 2 == 1 {
            return None;
        }
        let m = deg / 2;
        let lead = exact_sqrt(self.leading()?)?;
        let mut s = vec![BigInt::zero(); m + 1];
        s[m] = lead.clone();
        let two_lead = &lead * 2;
        // Match coefficients from the top down: coefficient of y^(m+k)
        // determines s[k] for k = m-1 .. 0.
        for k in (0..m).rev() {
            let target = self.coeff(m + k);
            let mut acc = BigInt::zero();
            for i in (k + 1)..=m {
                let j = m + k - i;
                if j > k && j <= m {
                    acc += &s[i] * &s[j];
                }
            }
            let rem: BigInt = target - acc;
            if !Zero::is_zero(&(&rem % &two_lead)) {
                return None;
            }
            s[k] = rem / &two_lead;
        }
        let s = Self::new(s);
        (&s * &s == *self).then_some(s)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `det(yI - A)` by Berkowitz's division-free recurrence.
///
/// Works over any commutative ring; returns coefficients lowest degree
/// first. The leading principal `k x k` block's polynomial is obtained
/// from the `(k-1) x (k-1)` one by a Toeplitz product built from
/// `a_kk`, the new row/column and powers of the previous block.
pub fn berkowitz<T>(a: &[Vec<T>]) -> Vec<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    let n = a.len();
    // Highest degree first while building.
    let mut p: Vec<T> = vec![T::one()];
    for k in 1..=n {
        let idx = k - 1;
        let akk = a[idx][idx].clone();
        let row: Vec<T> = (0..idx).map(|j| a[idx][j].clone()).collect();
        let mut col: Vec<T> = (0..idx).map(|i| a[i][idx].clone()).collect();
        let mut t = Vec::with_capacity(k + 1);
        t.push(T::one());
        t.push(-akk);
        // -r A^j c for j = 0 .. k-2.
        for _ in 0..idx {
            let dot = row
                .iter()
                .zip(&col)
                .fold(T::zero(), |acc, (r, c)| acc + r.clone() * c.clone());
            t.push(-dot);
            col = (0..idx)
                .map(|i| (0..idx).fold(T::zero(), |acc, j| acc + a[i][j].clone() * col[j].clone()))
                .collect();
        }
        let mut next = vec![T::zero(); k + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for j in 0..=i.min(k - 1) {
                if i - j < t.len() {
                    *slot = slot.clone() + t[i - j].clone() * p[j].clone();
                }
            }
        }
        p = next;
    }
    p.reverse();
    p
}

pub fn char_poly_int(a: &[Vec<BigInt>]) -> IntPoly {
    IntPoly::new(berkowitz(a))
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn char_poly_of_small_graphs() {
        let k2 = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(char_poly_int(&k2), IntPoly::from_i64(&[-1, 0, 1]));
        let p3 = int_matrix(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]);
        assert_eq!(char_poly_int(&p3), IntPoly::from_i64(&[0, -2, 0, 1]));
        assert_eq!(char_poly_int(&[]), IntPoly::one());
    }

    #[test]
    fn char_poly_of_fork() {
        // Path 1-2-3 with 3 joined to 4 and 5.
        let a = int_matrix(&[
            &[0, 1, 0, 0, 0],
            &[1, 0, 1, 0, 0],
            &[0, 1, 0, 1, 1],
            &[0, 0, 1, 0, 0],
            &[0, 0, 1, 0, 0],
        ]);
        assert_eq!(char_poly_int(&a), IntPoly::from_i64(&[0, 2, 0, -4, 0, 1]));
    }

    #[test]
    fn berkowitz_f64_matches_trace_and_det() {
        let a = vec![vec![2.0, 1.0, 0.5], vec![1.0, -1.0, 3.0], vec![0.5, 3.0, 0.0]];
        let p = berkowitz(&a);
        assert_eq!(p[3], 1.0);
        assert!((p[2] + 1.0).abs() < 1e-12);
        let det = 2.0 * (0.0 - 9.0) - 1.0 * (0.0 - 1.5) + 0.5 * (3.0 + 0.5);
        assert!((p[0] + det).abs() < 1e-12);
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = IntPoly::from_i64(&[-1, 0, 1]); // (y-1)(y+1)
        let g = IntPoly::from_i64(&[2, -3, 1]); // (y-1)(y-2)
        assert_eq!(f.gcd(&g), IntPoly::from_i64(&[-1, 1]));
        assert!(f.is_squarefree());
        let sq = &f * &f;
        assert!(!sq.is_squarefree());
        assert_eq!(sq.exact_sqrt(), Some(f.clone()));
        assert_eq!(g.exact_sqrt(), None);
        assert_eq!(sq.div_exact(&f), Some(f.clone()));
        assert_eq!(g.div_exact(&IntPoly::from_i64(&[0, 1])), None);
    }

    #[test]
    fn bareiss_matches_expansion() {
        let m = int_matrix(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(bareiss_det(&m), BigInt::from(4));
        let z = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(bareiss_det(&z), BigInt::from(-1));
    }
}
