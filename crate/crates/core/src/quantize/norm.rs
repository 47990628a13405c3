//! Spectral norms and normalized traces of Toeplitz products.

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};

use super::operator::{gram, FloatOperator, FuzzyOperator};
use super::toeplitz::toeplitz;
use crate::error::{Error, Result};
use crate::harmonics::SpherePoly;
use crate::scalar::Real;

// Relative to the largest entry. Large-k Beta values carry ~1e-13 relative error,
// which a cancelled difference such as k[T f, T g] − iT({f, g}) amplifies by ~k².
const HERMITIAN_TOL: f64 = 1e-7;

/// G^{1/2} A G^{−1/2}: the matrix of A in the orthonormal basis.
pub fn orthonormal_matrix(a: &FloatOperator) -> DMatrix<Complex64> {
    let g: Vec<f64> = gram::<f64>(a.level()).into_iter().map(f64::sqrt).collect();
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, j| a.get(i, j) * (g[i] / g[j]))
}

/// The Hermitian matrix H with A = H or A = iH, or an error if A is neither
/// self-adjoint nor skew-adjoint for the Gram inner product.
fn hermitian_part(a: &FloatOperator) -> Result<DMatrix<Complex64>> {
    let s = orthonormal_matrix(a);
    let scale = s.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let herm = (&s - s.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if herm <= HERMITIAN_TOL * scale {
        return Ok((&s + s.adjoint()).scale(0.5));
    }
    let anti = (&s + s.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if anti <= HERMITIAN_TOL * scale {
        let h = s.map(|z| z * Complex64::new(0.0, -1.0));
        return Ok((&h + h.adjoint()).scale(0.5));
    }
    Err(Error::NotNormalizable)
}

/// Eigenvalues of H where A = H or A = iH (ascending).
pub fn spectrum(a: &FloatOperator) -> Result<Vec<f64>> {
    let h = hermitian_part(a)?;
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Operator norm on V_k for Gram-Hermitian or Gram-skew-Hermitian A.
pub fn op_norm(a: &FloatOperator) -> Result<f64> {
    Ok(spectrum(a)?.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// tr(T_k(f₁) ⋯ T_k(f_n)).
pub fn trace_product<T: Real>(k: u32, fs: &[SpherePoly]) -> Result<Complex<T>> {
    let (first, rest) = fs
        .split_first()
        .ok_or_else(|| Error::Config("trace of an empty product".into()))?;
    let mut acc: FuzzyOperator<T> = toeplitz(k, first)?;
    let Some((last, middle)) = rest.split_last() else {
        return Ok(acc.trace());
    };
    for f in middle {
        acc = acc.try_matmul(&toeplitz(k, f)?)?;
    }
    acc.trace_product(&toeplitz(k, last)?)
}
