//! Small dense helpers shared across modules.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// JSON form of a complex number, `{"re": .., "im": ..}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexValue {
    fn from(z: C64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for C64 {
    fn from(z: ComplexValue) -> Self {
        C64::new(z.re, z.im)
    }
}

/// Rows of `{re, im}` objects.
pub fn complex_rows(m: &CMatrix) -> Vec<Vec<ComplexValue>> {
    m.row_iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect()
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_c(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

pub fn kron_c(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `max |U U* - I|`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u * u.adjoint();
    max_abs_c(&(prod - CMatrix::identity(n, n)))
}

/// Principal submatrix on the listed rows and columns.
pub fn restrict<T: nalgebra::Scalar>(m: &DMatrix<T>, idx: &[usize]) -> DMatrix<T> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])].clone())
}

/// Dense `exp(-i t A)` by scaling and squaring a truncated Taylor series.
///
/// Used where no spectral decomposition is at hand (non-commuting double
/// covers) and as an independent oracle for [`crate::spectral`].
pub fn expm_minus_i(a: &DMatrix<f64>, t: f64) -> CMatrix {
    let n = a.nrows();
    let norm = a
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        * t.abs();
    let mut squarings = 0u32;
    let mut scaled = norm;
    while scaled > 0.25 {
        scaled *= 0.5;
        squarings += 1;
    }
    let factor = C64::new(0.0, -t / f64::from(2u32).powi(squarings as i32));
    let x = complexify(a) * factor;
    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=24 {
        term = &term * &x / C64::new(k as f64, 0.0);
        result += &term;
        if max_abs_c(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
