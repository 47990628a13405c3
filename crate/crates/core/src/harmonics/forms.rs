//! Invariant symmetric bilinear forms on the sphere Poisson algebra.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::basis::{HarmonicBasis, HarmonicCoeffs, HarmonicIndex};
use super::poly::SpherePoly;
use super::table::{pair_fits, PoissonTable};
use crate::error::Result;
use crate::scalar::{rat, SymbolicScalar};

/// κ(f, g) = ∫ f g ω.
pub fn kappa(f: &SpherePoly, g: &SpherePoly) -> SymbolicScalar {
    (f * g).integrate()
}

/// κ∞ = 12π / Vol³ · κ = 3/(2π²) · κ.
pub fn kappa_infty(f: &SpherePoly, g: &SpherePoly) -> SymbolicScalar {
    let k = kappa(f, g);
    &k * &SymbolicScalar::rational(rat(3, 2), -2)
}

/// B(f, g) = (∫ f ω)(∫ g ω).
pub fn b_form(f: &SpherePoly, g: &SpherePoly) -> SymbolicScalar {
    &f.integrate() * &g.integrate()
}

/// A bilinear form given by its values on pairs of basis harmonics.
/// Pairs not present are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearForm {
    pub lmax: u32,
    pub gram: BTreeMap<(HarmonicIndex, HarmonicIndex), SymbolicScalar>,
}

impl BilinearForm {
    pub fn from_fn(lmax: u32, f: impl Fn(&SpherePoly, &SpherePoly) -> SymbolicScalar) -> Self {
        let basis = HarmonicBasis::get(lmax);
        let mut gram = BTreeMap::new();
        for a in HarmonicIndex::all(lmax) {
            for b in HarmonicIndex::all(lmax) {
                let v = f(basis.harmonic(a), basis.harmonic(b));
                if !v.is_zero() {
                    gram.insert((a, b), v);
                }
            }
        }
        Self { lmax, gram }
    }

    pub fn kappa(lmax: u32) -> Self {
        Self::from_fn(lmax, kappa)
    }

    pub fn b_form(lmax: u32) -> Self {
        Self::from_fn(lmax, b_form)
    }

    /// Copy with `delta` added to the single entry (a, b).
    pub fn perturbed(&self, a: HarmonicIndex, b: HarmonicIndex, delta: SymbolicScalar) -> Result<Self> {
        let mut out = self.clone();
        let cur = out.entry(a, b);
        let v = cur.try_add(&delta)?;
        out.gram.insert((a, b), v);
        Ok(out)
    }

    pub fn entry(&self, a: HarmonicIndex, b: HarmonicIndex) -> SymbolicScalar {
        self.gram.get(&(a, b)).cloned().unwrap_or_else(SymbolicScalar::zero)
    }

    pub fn eval(&self, f: &HarmonicCoeffs, g: &HarmonicCoeffs) -> Result<SymbolicScalar> {
        let mut acc = SymbolicScalar::zero();
        for (a, fa) in f.iter() {
            for (b, gb) in g.iter() {
                let e = self.entry(*a, *b);
                if !e.is_zero() {
                    acc = acc.try_add(&e.scale(&(fa * gb)))?;
                }
            }
        }
        Ok(acc)
    }
}

/// Largest |S({h,f},g) + S(f,{h,g})| over basis triples whose brackets stay
/// inside the truncation.
pub fn check_invariance(form: &BilinearForm, lmax: u32) -> Result<SymbolicScalar> {
    let lmax = lmax.min(form.lmax);
    let table = PoissonTable::build(lmax);
    let unit = |i: HarmonicIndex| HarmonicCoeffs::unit(lmax, i);
    let mut worst = SymbolicScalar::zero();
    let mut worst_norm = BigRational::zero();
    for h in HarmonicIndex::all(lmax) {
        for f in HarmonicIndex::all(lmax) {
            if !pair_fits(h.l, f.l, lmax) {
                continue;
            }
            let hf = table.bracket(&unit(h), &unit(f))?;
            for g in HarmonicIndex::all(lmax) {
                if !pair_fits(h.l, g.l, lmax) {
                    continue;
                }
                let hg = table.bracket(&unit(h), &unit(g))?;
                let r = form.eval(&hf, &unit(g))?.try_add(&form.eval(&unit(f), &hg)?)?;
                let n = r.coeff_norm_sqr();
                if n > worst_norm {
                    worst_norm = n;
                    worst = r;
                }
            }
        }
    }
    Ok(worst)
}

/// First pair of distinct basis harmonics with nonzero κ, if any.
pub fn first_nonorthogonal_pair(lmax: u32) -> Option<(HarmonicIndex, HarmonicIndex, SymbolicScalar)> {
    let basis = HarmonicBasis::get(lmax);
    let all: Vec<_> = HarmonicIndex::all(lmax).collect();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            let v = kappa(basis.harmonic(*a), basis.harmonic(*b));
            if !v.is_zero() {
                return Some((*a, *b, v));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn kappa_infty_examples() {
        let (x, y, z) = (SpherePoly::x(), SpherePoly::y(), SpherePoly::z());
        assert_eq!(kappa_infty(&z, &z), SymbolicScalar::rational(int(1), -1));
        let sum = SymbolicScalar::sum(&[kappa_infty(&x, &x), kappa_infty(&y, &y), kappa_infty(&z, &z)])
            .unwrap();
        assert_eq!(sum, SymbolicScalar::rational(int(3), -1));
        let one = SpherePoly::one();
        assert_eq!(b_form(&one, &one), SymbolicScalar::rational(int(4), 2));
    }

    #[test]
    fn invariant_forms_have_zero_residual() {
        assert!(check_invariance(&BilinearForm::kappa(3), 3).unwrap().is_zero());
        assert!(check_invariance(&BilinearForm::b_form(3), 3).unwrap().is_zero());
    }

    #[test]
    fn perturbation_breaks_invariance() {
        let a = HarmonicIndex::new(1, 0);
        let form = BilinearForm::kappa(2)
            .perturbed(a, a, SymbolicScalar::rational(rat(1, 5), 1))
            .unwrap();
        let r = check_invariance(&form, 2).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn harmonics_orthogonal() {
        assert!(first_nonorthogonal_pair(4).is_none());
    }
}
