//! Geometric quantization dΦ_k through the Tuynman-corrected Toeplitz map.

use num_complex::Complex;

use super::operator::FuzzyOperator;
use super::toeplitz::toeplitz;
use crate::error::Result;
use crate::harmonics::{HarmonicBasis, HarmonicCoeffs, SpherePoly};
use crate::scalar::{gi, Real};

/// Symbol k·f + Δf/2 = Σ_l (k + l(l+1)) f_l.
pub fn tuynman_symbol(k: u32, f: &SpherePoly) -> SpherePoly {
    let basis = HarmonicBasis::get(f.degree());
    let c = basis.decompose(f).expect("basis sized to the input degree");
    basis
        .recompose(&tuynman_coeffs(k, &c))
        .expect("same truncation")
}

pub fn tuynman_coeffs(k: u32, c: &HarmonicCoeffs) -> HarmonicCoeffs {
    let mut out = HarmonicCoeffs::zero(c.lmax);
    for (idx, v) in c.iter() {
        let w = k as i64 + (idx.l * (idx.l + 1)) as i64;
        out.set(*idx, v * gi(w, 0));
    }
    out
}

/// dΦ_k(f) = i k T_k(f + Δf/(2k)).
pub fn d_phi<T: Real>(k: u32, f: &SpherePoly) -> Result<FuzzyOperator<T>> {
    let t = toeplitz::<T>(k, &tuynman_symbol(k, f))?;
    Ok(t.scale(&Complex::i()))
}

/// Trace-free part dΦ_k(f) − tr(dΦ_k f)/(k+1) · I, valued in su(k+1) for real f.
pub fn d_phi_bar<T: Real>(k: u32, f: &SpherePoly) -> Result<FuzzyOperator<T>> {
    Ok(remove_trace(&d_phi(k, f)?))
}

pub fn remove_trace<T: Real>(a: &FuzzyOperator<T>) -> FuzzyOperator<T> {
    let n = T::from_i64(a.dim() as i64);
    let shift = a.trace().unscale(n);
    let mut out = a.clone();
    for j in 0..a.dim() {
        let v = out.get(j, j).clone() - shift.clone();
        out.set(j, j, v);
    }
    out
}

/// Q_k(f) = dΦ_k(f)/k.
pub fn q_k<T: Real>(k: u32, f: &SpherePoly) -> Result<FuzzyOperator<T>> {
    let d = d_phi::<T>(k, f)?;
    Ok(d.scale(&Complex::new(T::one() / T::from_i64(k as i64), T::zero())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::operator::ExactOperator;
    use crate::quantize::spin::{iota_su2, spin_rep, Su2Element};
    use num_rational::BigRational;
    use num_traits::Zero;

    #[test]
    fn constant_symbol() {
        for k in 1..=6 {
            let d: ExactOperator = d_phi(k, &SpherePoly::one()).unwrap();
            assert_eq!(d, ExactOperator::identity(k).scale(&gi(0, k as i64)));
            let db: ExactOperator = d_phi_bar(k, &SpherePoly::one()).unwrap();
            assert!(db.is_zero());
        }
    }

    #[test]
    fn quantizes_su2_exactly() {
        for k in 1..=8 {
            for xi in Su2Element::basis() {
                let d: ExactOperator = d_phi(k, &iota_su2(&xi)).unwrap();
                assert_eq!(d, spin_rep::<BigRational>(k, xi.matrix()).unwrap());
            }
        }
    }

    #[test]
    fn level_two_spectrum() {
        let d: ExactOperator = d_phi(2, &SpherePoly::z()).unwrap();
        let diag: Vec<_> = (0..3).map(|j| d.get(j, j).clone()).collect();
        assert_eq!(diag, vec![gi(0, 2), gi(0, 0), gi(0, -2)]);
    }

    #[test]
    fn real_symbols_land_in_su() {
        let f = &SpherePoly::z().pow(2) + &(&SpherePoly::x() * &SpherePoly::y());
        let d: ExactOperator = d_phi_bar(5, &f).unwrap();
        assert!(d.trace().is_zero());
        assert!(d.is_gram_anti_hermitian());
        let q: ExactOperator = q_k(5, &f).unwrap();
        assert_eq!(q.scale(&gi(5, 0)), d_phi(5, &f).unwrap());
    }
}
