//! Integer-coefficient real solid harmonics Y̌_{l,m} and exact harmonic
//! decomposition of sphere polynomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{reduce, Monomial, Poly3, SpherePoly};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{binomial, factorial, gi, real, Gaussian};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HarmonicIndex {
    pub l: u32,
    pub m: i32,
}

impl HarmonicIndex {
    pub fn new(l: u32, m: i32) -> Self {
        assert!(m.unsigned_abs() <= l, "|m| must not exceed l");
        Self { l, m }
    }

    /// All indices with l ≤ lmax, ordered by (l, m).
    pub fn all(lmax: u32) -> impl Iterator<Item = HarmonicIndex> {
        (0..=lmax).flat_map(|l| (-(l as i32)..=l as i32).map(move |m| HarmonicIndex { l, m }))
    }

    /// Position in `all(lmax)`.
    pub fn position(&self) -> usize {
        (self.l * self.l) as usize + (self.m + self.l as i32) as usize
    }

    /// Sign of α_P on V_l.
    pub fn antipodal_sign(&self) -> i64 {
        if self.l % 2 == 1 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for HarmonicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y({},{})", self.l, self.m)
    }
}

/// Real and imaginary parts of (x + iy)^m as real polynomials.
fn planar_power(m: u32) -> (Poly3, Poly3) {
    let mut re = Poly3::zero();
    let mut im = Poly3::zero();
    for j in 0..=m {
        // C(m, j) x^(m−j) (iy)^j
        let c = BigRational::from_integer(binomial(m as u64, j as u64));
        let sign = if (j / 2) % 2 == 0 { c } else { -c };
        let target = if j % 2 == 0 { &mut re } else { &mut im };
        target.add_term([m - j, j, 0], real(sign));
    }
    (re, im)
}

/// Homogeneous harmonic polynomial Y̌_{l,m} on R³ with coprime integer
/// coefficients: Y̌10 = z, Y̌11 = x, Y̌1,−1 = y, Y̌20 = 2z² − x² − y².
pub fn solid_harmonic(l: u32, m: i32) -> Poly3 {
    let am = m.unsigned_abs();
    assert!(am <= l, "|m| must not exceed l");
    let r2 = &(&Poly3::x().pow(2) + &Poly3::y().pow(2)) + &Poly3::z().pow(2);
    let mut legendre = Poly3::zero();
    for k in 0..=((l - am) / 2) {
        let c = binomial(l as u64, k as u64)
            * binomial((2 * l - 2 * k) as u64, l as u64)
            * factorial((l - 2 * k) as u64)
            / factorial((l - 2 * k - am) as u64);
        let c = if k % 2 == 0 { c } else { -c };
        let t = &r2.pow(k) * &Poly3::z().pow(l - 2 * k - am);
        legendre = &legendre + &t.scale(&real(BigRational::from_integer(c)));
    }
    let (re, im) = planar_power(am);
    let raw = &legendre * if m >= 0 { &re } else { &im };
    let g = raw
        .terms()
        .fold(BigInt::zero(), |g, (_, c)| g.gcd(c.re.numer()));
    raw.scale(&real(BigRational::new(BigInt::one(), g)))
}

/// The 2l+1 basis harmonics of degree l restricted to the sphere, m = −l..l.
pub fn solid_harmonic_basis(l: u32) -> Vec<SpherePoly> {
    (-(l as i32)..=l as i32)
        .map(|m| reduce(&solid_harmonic(l, m)))
        .collect()
}

/// Canonical monomials (z-degree ≤ 1) of total degree ≤ lmax.
pub fn canonical_monomials(lmax: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=lmax {
        for c in 0..=1.min(d) {
            for a in (0..=(d - c)).rev() {
                out.push([a, d - c - a, c]);
            }
        }
    }
    out
}

/// Harmonic basis up to degree lmax with its exact change-of-basis inverse.
#[derive(Debug)]
pub struct HarmonicBasis {
    lmax: u32,
    harmonics: Vec<SpherePoly>,
    monomials: HashMap<Monomial, usize>,
    /// Row p gives the coefficient of harmonic p in terms of monomial coords.
    inverse: Vec<Vec<(usize, BigRational)>>,
}

impl HarmonicBasis {
    /// Shared instance for `lmax`, built on first use.
    pub fn get(lmax: u32) -> Arc<HarmonicBasis> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<HarmonicBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(b) = cache.lock().unwrap().get(&lmax) {
            return b.clone();
        }
        let built = Arc::new(Self::build(lmax));
        cache.lock().unwrap().entry(lmax).or_insert(built).clone()
    }

    fn build(lmax: u32) -> Self {
        let monos = canonical_monomials(lmax);
        let monomials: HashMap<Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let harmonics: Vec<SpherePoly> = HarmonicIndex::all(lmax)
            .map(|h| reduce(&solid_harmonic(h.l, h.m)))
            .collect();
        let n = monos.len();
        let mut matrix = vec![vec![BigRational::zero(); n]; n];
        for (col, h) in harmonics.iter().enumerate() {
            for (m, c) in h.terms() {
                matrix[monomials[m]][col] = c.re.clone();
            }
        }
        let inverse = linalg::invert(&matrix)
            .expect("solid harmonics span the canonical monomials")
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Self {
            lmax,
            harmonics,
            monomials,
            inverse,
        }
    }

    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    pub fn harmonic(&self, idx: HarmonicIndex) -> &SpherePoly {
        &self.harmonics[idx.position()]
    }

    pub fn decompose(&self, f: &SpherePoly) -> Result<HarmonicCoeffs> {
        if f.degree() > self.lmax {
            return Err(Error::DegreeOverflow {
                degree: f.degree(),
                lmax: self.lmax,
            });
        }
        let mut v = vec![Gaussian::zero(); self.monomials.len()];
        for (m, c) in f.terms() {
            v[self.monomials[m]] = c.clone();
        }
        let mut out = HarmonicCoeffs::zero(self.lmax);
        for (idx, row) in HarmonicIndex::all(self.lmax).zip(&self.inverse) {
            let mut acc = Gaussian::zero();
            for (j, q) in row {
                if !v[*j].is_zero() {
                    acc += &v[*j] * real(q.clone());
                }
            }
            out.set(idx, acc);
        }
        Ok(out)
    }

    pub fn recompose(&self, c: &HarmonicCoeffs) -> Result<SpherePoly> {
        if c.lmax > self.lmax {
            return Err(Error::DegreeOverflow {
                degree: c.lmax,
                lmax: self.lmax,
            });
        }
        Ok(c.iter().fold(SpherePoly::zero(), |acc, (idx, v)| {
            &acc + &self.harmonic(*idx).scale(v)
        }))
    }

    /// Δ with the convention Δ Y̌_{l,m} = 2l(l+1) Y̌_{l,m}.
    pub fn laplacian(&self, f: &SpherePoly) -> Result<SpherePoly> {
        let c = self.decompose(f)?;
        self.recompose(&c.laplacian())
    }

    /// Split f into its components in V_0, …, V_lmax.
    pub fn components(&self, f: &SpherePoly) -> Result<Vec<SpherePoly>> {
        let c = self.decompose(f)?;
        let mut out = vec![SpherePoly::zero(); self.lmax as usize + 1];
        for (idx, v) in c.iter() {
            let l = idx.l as usize;
            out[l] = &out[l] + &self.harmonic(*idx).scale(v);
        }
        Ok(out)
    }
}

pub fn harmonic_decompose(f: &SpherePoly, lmax: u32) -> Result<HarmonicCoeffs> {
    HarmonicBasis::get(lmax).decompose(f)
}

/// Δ f using a basis just large enough for f.
pub fn laplacian(f: &SpherePoly) -> SpherePoly {
    HarmonicBasis::get(f.degree())
        .laplacian(f)
        .expect("basis sized to the input degree")
}

/// Coefficients over the Y̌ basis, truncated at lmax. Zero entries are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicCoeffs {
    pub lmax: u32,
    coeffs: BTreeMap<HarmonicIndex, Gaussian>,
}

impl HarmonicCoeffs {
    pub fn zero(lmax: u32) -> Self {
        Self {
            lmax,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn unit(lmax: u32, idx: HarmonicIndex) -> Self {
        let mut c = Self::zero(lmax);
        c.set(idx, Gaussian::one());
        c
    }

    pub fn get(&self, idx: HarmonicIndex) -> Gaussian {
        self.coeffs.get(&idx).cloned().unwrap_or_else(Gaussian::zero)
    }

    pub fn set(&mut self, idx: HarmonicIndex, v: Gaussian) {
        assert!(idx.l <= self.lmax, "index beyond truncation");
        if v.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, v);
        }
    }

    pub fn add_to(&mut self, idx: HarmonicIndex, v: &Gaussian) {
        let cur = self.get(idx);
        self.set(idx, cur + v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HarmonicIndex, &Gaussian)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest l carrying a nonzero coefficient.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|i| i.l).max().unwrap_or(0)
    }

    pub fn with_lmax(&self, lmax: u32) -> Result<Self> {
        if self.degree() > lmax {
            return Err(Error::DegreeOverflow {
                degree: self.degree(),
                lmax,
            });
        }
        Ok(Self {
            lmax,
            coeffs: self.coeffs.clone(),
        })
    }

    pub fn scale(&self, s: &Gaussian) -> Self {
        let mut out = Self::zero(self.lmax);
        for (i, v) in &self.coeffs {
            out.set(*i, v * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.lmax.max(other.lmax));
        for (i, v) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_to(*i, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Gaussian::one()))
    }

    /// Entrywise complex conjugate; the basis is real.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.lmax);
        for (i, v) in &self.coeffs {
            out.set(*i, v.conj());
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(|v| v.im.is_zero())
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.lmax);
        for (i, v) in &self.coeffs {
            out.set(*i, v * gi(2 * i.l as i64 * (i.l as i64 + 1), 0));
        }
        out
    }

    pub fn antipodal(&self) -> Self {
        let mut out = Self::zero(self.lmax);
        for (i, v) in &self.coeffs {
            out.set(*i, v * gi(i.antipodal_sign(), 0));
        }
        out
    }

    /// Part of degree exactly l.
    pub fn component(&self, l: u32) -> Self {
        let mut out = Self::zero(self.lmax);
        for (i, v) in self.coeffs.iter().filter(|(i, _)| i.l == l) {
            out.set(*i, v.clone());
        }
        out
    }

    pub fn to_poly(&self) -> SpherePoly {
        HarmonicBasis::get(self.lmax)
            .recompose(self)
            .expect("basis matches truncation")
    }

    pub fn from_poly(f: &SpherePoly, lmax: u32) -> Result<Self> {
        harmonic_decompose(f, lmax)
    }
}

/// κ(Y̌_{l,m}, Y̌_{l,m}) / π as an exact positive rational.
pub fn harmonic_norm_sqr(idx: HarmonicIndex) -> BigRational {
    static NORMS: OnceLock<Mutex<BTreeMap<HarmonicIndex, BigRational>>> = OnceLock::new();
    let norms = NORMS.get_or_init(Default::default);
    if let Some(v) = norms.lock().expect("norm cache poisoned").get(&idx) {
        return v.clone();
    }
    let y = reduce(&solid_harmonic(idx.l, idx.m));
    let v = (&y * &y).integrate();
    debug_assert_eq!(v.pi_power, 1);
    norms.lock().expect("norm cache poisoned").insert(idx, v.coeff.re.clone());
    v.coeff.re
}

#[cfg(test)]
fn is_primitive(p: &Poly3) -> bool {
    use num_traits::Signed;
    p.terms()
        .fold(BigInt::zero(), |g, (_, c)| g.gcd(c.re.numer()))
        .abs()
        .is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn low_degree_harmonics() {
        assert_eq!(solid_harmonic(0, 0), Poly3::one());
        assert_eq!(solid_harmonic(1, 0), Poly3::z());
        assert_eq!(solid_harmonic(1, 1), Poly3::x());
        assert_eq!(solid_harmonic(1, -1), Poly3::y());
        let y20 = &(&Poly3::z().pow(2).scale(&gi(2, 0)) - &Poly3::x().pow(2)) - &Poly3::y().pow(2);
        assert_eq!(solid_harmonic(2, 0), y20);
        assert_eq!(solid_harmonic(2, -2), (&Poly3::x() * &Poly3::y()));
    }

    #[test]
    fn harmonic_integer_primitive() {
        for l in 0..=8 {
            for m in -(l as i32)..=l as i32 {
                let p = solid_harmonic(l, m);
                assert!(p.laplacian_r3().is_zero(), "({l},{m}) not harmonic");
                assert!(p.terms().all(|(mono, c)| c.im.is_zero()
                    && c.re.is_integer()
                    && mono.iter().sum::<u32>() == l));
                assert!(is_primitive(&p));
            }
        }
    }

    #[test]
    fn decompose_z_squared() {
        let z2 = SpherePoly::z().pow(2);
        let c = harmonic_decompose(&z2, 4).unwrap();
        assert_eq!(c.get(HarmonicIndex::new(0, 0)), real(rat(1, 3)));
        assert_eq!(c.get(HarmonicIndex::new(2, 0)), real(rat(1, 3)));
        assert!(c.component(1).is_zero());
        assert_eq!(c.iter().count(), 2);
        assert_eq!(c.to_poly(), z2);
    }

    #[test]
    fn decompose_overflow() {
        assert!(matches!(
            harmonic_decompose(&SpherePoly::z().pow(3), 2),
            Err(Error::DegreeOverflow { degree: 3, lmax: 2 })
        ));
    }

    #[test]
    fn unit_round_trip() {
        let basis = HarmonicBasis::get(5);
        for idx in HarmonicIndex::all(5) {
            let c = basis.decompose(basis.harmonic(idx)).unwrap();
            assert_eq!(c, HarmonicCoeffs::unit(5, idx));
        }
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(laplacian(&SpherePoly::z()), SpherePoly::z().scale(&gi(4, 0)));
        assert!(laplacian(&SpherePoly::one()).is_zero());
        for y in solid_harmonic_basis(2) {
            assert_eq!(laplacian(&y), y.scale(&gi(12, 0)));
        }
    }

    #[test]
    fn canonical_monomial_count() {
        for l in 0..6 {
            assert_eq!(canonical_monomials(l).len() as u32, (l + 1) * (l + 1));
        }
    }
}
