//! The antipodal involution on operators: θ(A) = U · conj(A) · U⁻¹ with
//! U = π_k(u) the image of u = [[0, −1], [1, 0]].

use super::operator::{gram, FuzzyOperator};
use super::spin::{spin_group, twist_element};
use crate::error::Result;
use crate::scalar::Real;

/// U with U e_j = (−1)^j e_{k−j}.
pub fn twist_matrix<T: Real>(k: u32) -> Result<FuzzyOperator<T>> {
    spin_group(k, &twist_element())
}

/// U is a signed permutation, so U⁻¹ = Uᵀ.
fn conjugate_by_twist<T: Real>(a: &FuzzyOperator<T>) -> Result<FuzzyOperator<T>> {
    let u = twist_matrix::<T>(a.level())?;
    u.try_matmul(a)?.try_matmul(&u.transpose())
}

/// Antilinear involution θ(A) = U conj(A) U⁻¹. The Gram matrix is real and
/// symmetric under j ↔ k − j, so entrywise conjugation in the monomial basis
/// agrees with conjugation in the orthonormal one.
pub fn theta<T: Real>(a: &FuzzyOperator<T>) -> Result<FuzzyOperator<T>> {
    conjugate_by_twist(&a.conj())
}

/// Complex-linear extension of θ from su(k+1) to gl(k+1):
/// θ_C(M) = −U G⁻¹ Mᵀ G U⁻¹. Equals θ on G-anti-Hermitian M.
pub fn theta_complex<T: Real>(m: &FuzzyOperator<T>) -> Result<FuzzyOperator<T>> {
    let g = gram::<T>(m.level());
    let gt = FuzzyOperator::from_fn(m.level(), |i, j| {
        -m.get(j, i).clone().scale(g[j].clone()).unscale(g[i].clone())
    });
    conjugate_by_twist(&gt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::geometric::d_phi_bar;
    use crate::quantize::operator::ExactOperator;
    use crate::quantize::spin::{spin_rep, Su2Element};
    use crate::harmonics::SpherePoly;
    use crate::scalar::gi;
    use num_rational::BigRational;

    #[test]
    fn twist_matrix_shape() {
        for k in 1..=6u32 {
            let u: ExactOperator = twist_matrix(k).unwrap();
            for j in 0..=k as usize {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                assert_eq!(*u.get(k as usize - j, j), gi(sign, 0));
            }
        }
    }

    #[test]
    fn su2_is_fixed() {
        for k in 1..=6 {
            for xi in Su2Element::basis() {
                let r: ExactOperator = spin_rep(k, xi.matrix()).unwrap();
                assert_eq!(theta(&r).unwrap(), r);
                assert_eq!(theta_complex(&r).unwrap(), r);
            }
        }
    }

    #[test]
    fn involution() {
        let f = &SpherePoly::z().pow(2) + &SpherePoly::x();
        let a: ExactOperator = d_phi_bar(4, &f).unwrap();
        assert_eq!(theta(&theta(&a).unwrap()).unwrap(), a);
        assert_eq!(theta_complex(&a).unwrap(), theta(&a).unwrap());
        let m = ExactOperator::from_fn(3, |i, j| gi(i as i64, j as i64 - 1));
        assert_eq!(theta_complex(&theta_complex(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn intertwines_antipodal_map() {
        let f = &(&SpherePoly::x() * &SpherePoly::z()) + &SpherePoly::y().pow(3);
        for k in 1..=5 {
            let lhs = theta(&d_phi_bar::<BigRational>(k, &f).unwrap()).unwrap();
            let rhs = d_phi_bar::<BigRational>(k, &f.antipodal()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
