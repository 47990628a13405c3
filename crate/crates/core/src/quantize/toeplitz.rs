//! Berezin-Toeplitz matrices T_k(f) = Π_k f Π_k in the basis e_j = w^j.
//!
//! In the chart w ↦ (x + iy, z) = (2w, 1 − |w|²)/(1 + |w|²) every symbol is a
//! polynomial in u = x + iy, v = x − iy and z. The matrix element of
//! u^p v^q z^c between e_j and e_i (i = j + p − q) reduces to a radial integral
//! of the form ∫ ρ^{α}(1−ρ)^{β} dρ, i.e. a Beta value B(a, b):
//!
//!   A_ij = 2^{p+q} Σ_{s=0}^{c} (−1)^s C(c,s) B(j+p+s+1, n−j−p−s−1) / G_i,
//!   n = k + 2 + p + q + c.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::operator::{check_level, gram, FuzzyOperator};
use crate::error::{Error, Result};
use crate::harmonics::SpherePoly;
use crate::scalar::{binomial, gi, real, Gaussian, Real};

/// Symbols above this degree are rejected.
pub const DEFAULT_DEGREE_CAP: u32 = 24;

/// (p, q, c) ↦ coefficient of u^p v^q z^c.
pub type ChartSymbol = BTreeMap<(u32, u32, u32), Gaussian>;

/// Rewrite f in the variables u = x + iy, v = x − iy, z (z-degree ≤ 1).
/// Coefficients already include the 2^{p+q} factor of the matrix elements,
/// which cancels the 2^{−(a+b)} from x = (u+v)/2, y = (u−v)/(2i).
pub fn chart_symbol(f: &SpherePoly) -> ChartSymbol {
    let mut out = ChartSymbol::new();
    for (m, c) in f.terms() {
        let (a, b) = (m[0], m[1]);
        // (−i)^b
        let phase = match b % 4 {
            0 => gi(1, 0),
            1 => gi(0, -1),
            2 => gi(-1, 0),
            _ => gi(0, 1),
        };
        for alpha in 0..=a {
            for beta in 0..=b {
                let mut w = binomial(a as u64, alpha as u64) * binomial(b as u64, beta as u64);
                if (b - beta) % 2 == 1 {
                    w = -w;
                }
                let coef = c * &phase * real(BigRational::from_integer(w));
                let key = (alpha + beta, a + b - alpha - beta, m[2]);
                let e = out.entry(key).or_insert_with(Gaussian::zero);
                *e += coef;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn toeplitz<T: Real>(k: u32, f: &SpherePoly) -> Result<FuzzyOperator<T>> {
    toeplitz_capped(k, f, DEFAULT_DEGREE_CAP)
}

pub fn toeplitz_capped<T: Real>(k: u32, f: &SpherePoly, cap: u32) -> Result<FuzzyOperator<T>> {
    check_level(k)?;
    if f.degree() > cap {
        return Err(Error::SymbolDegree {
            degree: f.degree(),
            cap,
        });
    }
    Ok(toeplitz_chart(k, &chart_symbol(f)))
}

pub fn toeplitz_chart<T: Real>(k: u32, sym: &ChartSymbol) -> FuzzyOperator<T> {
    let g = gram::<T>(k);
    let mut out = FuzzyOperator::<T>::zeros(k);
    let kk = k as i64;
    for (&(p, q, c), coef) in sym {
        let coef = T::from_gaussian(coef);
        let n = k as u64 + 2 + (p + q + c) as u64;
        for j in 0..=kk {
            let i = j + p as i64 - q as i64;
            if !(0..=kk).contains(&i) {
                continue;
            }
            // c ≤ 1 on canonical symbols, so C(c, s) = 1
            let a0 = j as u64 + p as u64 + 1;
            let mut radial = T::beta(a0, n - a0);
            if c == 1 {
                radial = radial - T::beta(a0 + 1, n - a0 - 1);
            }
            let v = coef.clone().scale(radial / g[i as usize].clone());
            out.add_at(i as usize, j as usize, &v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use crate::quantize::operator::ExactOperator;
    use crate::scalar::{int, rat};

    fn exact(k: u32, f: &SpherePoly) -> ExactOperator {
        toeplitz(k, f).unwrap()
    }

    #[test]
    fn unit_symbol_is_identity() {
        for k in 1..=10 {
            assert_eq!(exact(k, &SpherePoly::one()), ExactOperator::identity(k));
        }
    }

    #[test]
    fn level_two_z() {
        let t = exact(2, &SpherePoly::z());
        let d = [rat(1, 2), int(0), rat(-1, 2)];
        assert_eq!(t, ExactOperator::diagonal(2, |j| Complex::new(d[j].clone(), int(0))));
    }

    #[test]
    fn closed_forms_for_coordinates() {
        let u = &SpherePoly::x() + &SpherePoly::y().scale(&gi(0, 1));
        let v = &SpherePoly::x() - &SpherePoly::y().scale(&gi(0, 1));
        for k in 1..=8u32 {
            let ki = k as i64;
            let tz = exact(k, &SpherePoly::z());
            let tu = exact(k, &u);
            let tv = exact(k, &v);
            for j in 0..=k as usize {
                let jj = j as i64;
                assert_eq!(tz.get(j, j).re, rat(ki - 2 * jj, ki + 2));
                if j < k as usize {
                    assert_eq!(tu.get(j + 1, j).re, rat(2 * (ki - jj), ki + 2));
                }
                if j > 0 {
                    assert_eq!(tv.get(j - 1, j).re, rat(2 * jj, ki + 2));
                }
            }
        }
    }

    #[test]
    fn real_symbols_are_gram_hermitian() {
        let f = &(&SpherePoly::x() * &SpherePoly::z()) + &SpherePoly::y().pow(3);
        for k in [1, 3, 6] {
            assert!(exact(k, &f).is_gram_hermitian());
        }
    }

    #[test]
    fn float_matches_exact() {
        let f = &(&SpherePoly::x().pow(2) * &SpherePoly::y()) + &SpherePoly::z().pow(3);
        for k in [5u32, 20, 40] {
            let e = exact(k, &f).to_float();
            let fl = toeplitz::<f64>(k, &f).unwrap();
            let scale = e.max_abs().max(1.0);
            assert!(e.max_abs_diff(&fl) / scale < 1e-12);
        }
    }

    #[test]
    fn degree_cap() {
        let f = SpherePoly::x().pow(5);
        assert!(matches!(
            toeplitz_capped::<f64>(3, &f, 4),
            Err(Error::SymbolDegree { degree: 5, cap: 4 })
        ));
        assert!(matches!(toeplitz::<f64>(0, &f), Err(Error::ZeroLevel)));
    }
}
