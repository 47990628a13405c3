//! su(2), its spin-k/2 representations on degree-k binary forms, and the
//! embedding ι of su(2) into degree-1 functions on the sphere.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::conventions::IOTA_DOUBLED;
use super::operator::{check_level, FuzzyOperator};
use crate::error::{Error, Result};
use crate::harmonics::SpherePoly;
use crate::scalar::{gi, rat, Gaussian, Real};

/// 2×2 complex matrix [[a, b], [c, d]].
pub type Mat2 = [[Gaussian; 2]; 2];

pub fn mat2(a: Gaussian, b: Gaussian, c: Gaussian, d: Gaussian) -> Mat2 {
    [[a, b], [c, d]]
}

pub fn mat2_zero() -> Mat2 {
    mat2(Gaussian::zero(), Gaussian::zero(), Gaussian::zero(), Gaussian::zero())
}

pub fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    mat2(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

pub fn mat2_add(x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &x[i][j] + &y[i][j];
    mat2(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

pub fn mat2_scale(x: &Mat2, s: &Gaussian) -> Mat2 {
    let e = |i: usize, j: usize| &x[i][j] * s;
    mat2(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

pub fn mat2_commutator(x: &Mat2, y: &Mat2) -> Mat2 {
    mat2_add(&mat2_mul(x, y), &mat2_scale(&mat2_mul(y, x), &-Gaussian::one()))
}

pub fn mat2_trace(x: &Mat2) -> Gaussian {
    &x[0][0] + &x[1][1]
}

pub fn mat2_conj(x: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| x[i][j].conj();
    mat2(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

/// Killing-type form κ_su(2)(ξ, η) = tr(ξη); κ(h, h) = −2.
pub fn kappa_su2(x: &Mat2, y: &Mat2) -> Gaussian {
    mat2_trace(&mat2_mul(x, y))
}

/// A traceless anti-Hermitian 2×2 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Su2Element(Mat2);

impl Su2Element {
    pub fn new(m: Mat2) -> Result<Self> {
        if !mat2_trace(&m).is_zero() {
            return Err(Error::NotSu2("trace is nonzero"));
        }
        for i in 0..2 {
            for j in 0..2 {
                if m[i][j] != -m[j][i].conj() {
                    return Err(Error::NotSu2("not anti-Hermitian"));
                }
            }
        }
        Ok(Self(m))
    }

    /// h = diag(i, −i).
    pub fn h() -> Self {
        Self(mat2(gi(0, 1), gi(0, 0), gi(0, 0), gi(0, -1)))
    }

    /// [[0, 1], [−1, 0]].
    pub fn e() -> Self {
        Self(mat2(gi(0, 0), gi(1, 0), gi(-1, 0), gi(0, 0)))
    }

    /// [[0, i], [i, 0]].
    pub fn f() -> Self {
        Self(mat2(gi(0, 0), gi(0, 1), gi(0, 1), gi(0, 0)))
    }

    pub fn basis() -> [Self; 3] {
        [Self::h(), Self::e(), Self::f()]
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Self(mat2_commutator(&self.0, &other.0))
    }

    /// Real linear combination Σ c_a ξ_a over the basis (h, e, f).
    pub fn from_coords(c: [i64; 3]) -> Self {
        let b = Self::basis();
        let mut m = mat2_zero();
        for (ci, bi) in c.iter().zip(&b) {
            m = mat2_add(&m, &mat2_scale(&bi.0, &gi(*ci, 0)));
        }
        Self(m)
    }
}

/// π_k(ξ): ξ acting as a derivation on X1^{k−j} X2^j, extended complex-linearly
/// to all of gl(2).
pub fn spin_rep<T: Real>(k: u32, xi: &Mat2) -> Result<FuzzyOperator<T>> {
    check_level(k)?;
    let [[a, b], [c, d]] = xi;
    let mut out = FuzzyOperator::<T>::zeros(k);
    let kk = k as i64;
    for j in 0..=k as usize {
        let jj = j as i64;
        let diag = a * gi(kk - jj, 0) + d * gi(jj, 0);
        out.set(j, j, T::from_gaussian(&diag));
        if j < k as usize {
            out.set(j + 1, j, T::from_gaussian(&(c * gi(kk - jj, 0))));
        }
        if j > 0 {
            out.set(j - 1, j, T::from_gaussian(&(b * gi(jj, 0))));
        }
    }
    Ok(out)
}

/// Action of a group element g on degree-k binary forms:
/// X1^{k−j} X2^j ↦ (a X1 + c X2)^{k−j} (b X1 + d X2)^j.
pub fn spin_group<T: Real>(k: u32, g: &Mat2) -> Result<FuzzyOperator<T>> {
    check_level(k)?;
    let [[a, b], [c, d]] = g;
    let n = k as usize + 1;
    let poly_mul = |p: &[Gaussian], q: &[Gaussian]| {
        let mut r = vec![Gaussian::zero(); p.len() + q.len() - 1];
        for (i, x) in p.iter().enumerate() {
            for (j, y) in q.iter().enumerate() {
                r[i + j] += x * y;
            }
        }
        r
    };
    let mut out = FuzzyOperator::<T>::zeros(k);
    for j in 0..n {
        // coefficients in t = X2/X1
        let mut p = vec![Gaussian::one()];
        for _ in 0..(n - 1 - j) {
            p = poly_mul(&p, &[a.clone(), c.clone()]);
        }
        for _ in 0..j {
            p = poly_mul(&p, &[b.clone(), d.clone()]);
        }
        for (i, v) in p.iter().enumerate() {
            out.set(i, j, T::from_gaussian(v));
        }
    }
    Ok(out)
}

/// ι(ξ) ∈ span{x, y, z}, complex-linear on gl(2) and zero on the identity.
pub fn iota(xi: &Mat2) -> SpherePoly {
    let entries = [&xi[0][0], &xi[0][1], &xi[1][0], &xi[1][1]];
    let mut out = SpherePoly::zero();
    for (axis, row) in IOTA_DOUBLED.iter().enumerate() {
        let mut coeff = Gaussian::zero();
        for ((re, im), e) in row.iter().zip(entries) {
            coeff += e * Complex::new(rat(*re, 2), rat(*im, 2));
        }
        out = &out + &SpherePoly::coord(axis).scale(&coeff);
    }
    out
}

pub fn iota_su2(xi: &Su2Element) -> SpherePoly {
    iota(xi.matrix())
}

/// The twist element u = exp(−½πiσ_y) = [[0, −1], [1, 0]].
pub fn twist_element() -> Mat2 {
    mat2(gi(0, 0), gi(-1, 0), gi(1, 0), gi(0, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::operator::ExactOperator;
    use crate::scalar::real;
    use num_rational::BigRational;

    #[test]
    fn basis_is_su2() {
        for b in Su2Element::basis() {
            assert!(Su2Element::new(b.matrix().clone()).is_ok());
        }
        assert!(Su2Element::new(mat2(gi(1, 0), gi(0, 0), gi(0, 0), gi(-1, 0))).is_err());
        assert!(Su2Element::new(mat2(gi(0, 1), gi(0, 0), gi(0, 0), gi(0, 1))).is_err());
        assert_eq!(kappa_su2(Su2Element::h().matrix(), Su2Element::h().matrix()), gi(-2, 0));
    }

    #[test]
    fn defining_representation() {
        for xi in Su2Element::basis() {
            let r: ExactOperator = spin_rep(1, xi.matrix()).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(*r.get(i, j), xi.matrix()[i][j]);
                }
            }
        }
    }

    #[test]
    fn homomorphism() {
        let b = Su2Element::basis();
        for k in 1..=6 {
            for x in &b {
                for y in &b {
                    let lhs = spin_rep::<BigRational>(k, x.matrix())
                        .unwrap()
                        .commutator(&spin_rep(k, y.matrix()).unwrap())
                        .unwrap();
                    let rhs = spin_rep::<BigRational>(k, x.bracket(y).matrix()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn h_spectrum_and_trace() {
        for k in 1..=12u32 {
            let r: ExactOperator = spin_rep(k, Su2Element::h().matrix()).unwrap();
            for j in 0..=k as usize {
                assert_eq!(*r.get(j, j), gi(0, k as i64 - 2 * j as i64));
            }
            let kk = k as i64;
            assert_eq!(r.trace_product(&r).unwrap(), real(rat(-kk * (kk + 1) * (kk + 2), 3)));
        }
    }

    #[test]
    fn twist_at_level_one() {
        let u: ExactOperator = spin_group(1, &twist_element()).unwrap();
        assert_eq!(*u.get(0, 1), gi(-1, 0));
        assert_eq!(*u.get(1, 0), gi(1, 0));
        assert!(u.get(0, 0).is_zero() && u.get(1, 1).is_zero());
    }

    #[test]
    fn iota_values() {
        assert_eq!(iota_su2(&Su2Element::h()), SpherePoly::z());
        assert_eq!(iota_su2(&Su2Element::e()), -&SpherePoly::y());
        assert_eq!(iota_su2(&Su2Element::f()), SpherePoly::x());
        let id = mat2(gi(1, 0), gi(0, 0), gi(0, 0), gi(1, 0));
        assert!(iota(&id).is_zero());
    }
}
