//! Polynomials in x, y, z and their canonical representatives modulo the
//! sphere ideal x² + y² + z² − 1.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::quantize::conventions::BRACKET_SIGN;
use crate::scalar::{
    format_gaussian, gaussian_to_c64, int, odd_double_factorial, real, Gaussian, SymbolicScalar,
};

/// Exponents (a, b, c) of x^a y^b z^c.
pub type Monomial = [u32; 3];

fn degree_of(m: &Monomial) -> u32 {
    m[0] + m[1] + m[2]
}

/// A raw polynomial in x, y, z with Gaussian-rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly3 {
    terms: BTreeMap<Monomial, Gaussian>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Gaussian) -> Self {
        Self::term([0, 0, 0], c)
    }

    pub fn one() -> Self {
        Self::constant(Gaussian::one())
    }

    pub fn term(m: Monomial, c: Gaussian) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn x() -> Self {
        Self::term([1, 0, 0], Gaussian::one())
    }

    pub fn y() -> Self {
        Self::term([0, 1, 0], Gaussian::one())
    }

    pub fn z() -> Self {
        Self::term([0, 0, 1], Gaussian::one())
    }

    /// Coordinate function by axis index 0, 1, 2.
    pub fn coord(axis: usize) -> Self {
        let mut m = [0; 3];
        m[axis] = 1;
        Self::term(m, Gaussian::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Gaussian) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Gaussian)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Gaussian {
        self.terms.get(m).cloned().unwrap_or_else(Gaussian::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(degree_of).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        let mut out = Self::zero();
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn partial(&self, axis: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m[axis] == 0 {
                continue;
            }
            let mut d = *m;
            d[axis] -= 1;
            out.add_term(d, c * real(int(m[axis] as i64)));
        }
        out
    }

    /// Flat Laplacian ∂²_x + ∂²_y + ∂²_z on R³.
    pub fn laplacian_r3(&self) -> Self {
        (0..3).fold(Self::zero(), |acc, i| &acc + &self.partial(i).partial(i))
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.conj());
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// f(−x, −y, −z).
    pub fn reflect(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let v = if degree_of(m) % 2 == 0 { c.clone() } else { -c.clone() };
            out.add_term(*m, v);
        }
        out
    }

    pub fn evaluate(&self, p: [f64; 3]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                gaussian_to_c64(c)
                    * p[0].powi(m[0] as i32)
                    * p[1].powi(m[1] as i32)
                    * p[2].powi(m[2] as i32)
            })
            .sum()
    }

    pub fn evaluate_exact(&self, p: &[BigRational; 3]) -> Gaussian {
        let mut acc = Gaussian::zero();
        for (m, c) in &self.terms {
            let mut v = BigRational::one();
            for axis in 0..3 {
                v *= num_traits::pow(p[axis].clone(), m[axis] as usize);
            }
            acc += c * real(v);
        }
        acc
    }

    /// Substitute each variable by a polynomial.
    pub fn compose(&self, sub: &[Poly3; 3]) -> Poly3 {
        let mut out = Poly3::zero();
        for (m, c) in &self.terms {
            let t = &(&sub[0].pow(m[0]) * &sub[1].pow(m[1])) * &sub[2].pow(m[2]);
            out = &out + &t.scale(c);
        }
        out
    }
}

impl Add for &Poly3 {
    type Output = Poly3;
    fn add(self, rhs: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly3 {
    type Output = Poly3;
    fn sub(self, rhs: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &Poly3 {
    type Output = Poly3;
    fn neg(self) -> Poly3 {
        self.scale(&-Gaussian::one())
    }
}

impl Mul for &Poly3 {
    type Output = Poly3;
    fn mul(self, rhs: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term([m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]], c1 * c2);
            }
        }
        out
    }
}

fn fmt_terms(terms: &BTreeMap<Monomial, Gaussian>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (m, c) in terms.iter().rev() {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        write!(f, "{}", format_gaussian(c))?;
        for (axis, name) in ["x", "y", "z"].iter().enumerate() {
            match m[axis] {
                0 => {}
                1 => write!(f, "·{name}")?,
                e => write!(f, "·{name}^{e}")?,
            }
        }
    }
    Ok(())
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(&self.terms, f)
    }
}

fn multinomial(n: u32, i: u32, j: u32) -> BigInt {
    use crate::scalar::factorial;
    factorial(n as u64) / (factorial(i as u64) * factorial(j as u64) * factorial((n - i - j) as u64))
}

/// Canonical representative modulo x² + y² + z² − 1 (z-degree at most 1).
pub fn reduce(p: &Poly3) -> SpherePoly {
    let mut out = Poly3::zero();
    for (m, c) in p.terms() {
        if m[2] <= 1 {
            out.add_term(*m, c.clone());
            continue;
        }
        // z^c = z^(c mod 2) · (1 − x² − y²)^(c/2)
        let n = m[2] / 2;
        for i in 0..=n {
            for j in 0..=(n - i) {
                let l = n - i - j;
                let sign = if (j + l) % 2 == 0 { 1 } else { -1 };
                let coef = BigRational::from_integer(multinomial(n, i, j) * sign);
                out.add_term([m[0] + 2 * j, m[1] + 2 * l, m[2] % 2], c * real(coef));
            }
        }
    }
    SpherePoly(out)
}

/// A function on the unit sphere, stored as its canonical polynomial
/// representative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpherePoly(Poly3);

impl SpherePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self(Poly3::one())
    }

    pub fn constant(c: Gaussian) -> Self {
        Self(Poly3::constant(c))
    }

    pub fn x() -> Self {
        Self(Poly3::x())
    }

    pub fn y() -> Self {
        Self(Poly3::y())
    }

    pub fn z() -> Self {
        Self(Poly3::z())
    }

    pub fn coord(axis: usize) -> Self {
        Self(Poly3::coord(axis))
    }

    pub fn poly(&self) -> &Poly3 {
        &self.0
    }

    pub fn into_poly(self) -> Poly3 {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.0.is_real()
    }

    /// Degree of the canonical representative, which is also the top
    /// harmonic degree present.
    pub fn degree(&self) -> u32 {
        self.0.degree()
    }

    pub fn coeff(&self, m: &Monomial) -> Gaussian {
        self.0.coeff(m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Gaussian)> {
        self.0.terms()
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        Self(self.0.scale(c))
    }

    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn evaluate(&self, p: [f64; 3]) -> Complex64 {
        self.0.evaluate(p)
    }

    pub fn evaluate_exact(&self, p: &[BigRational; 3]) -> Gaussian {
        self.0.evaluate_exact(p)
    }

    /// α_P(f) = −f(−x, −y, −z).
    pub fn antipodal(&self) -> Self {
        Self(-&self.0.reflect())
    }

    /// ∫ f ω with ω the area form of total mass 2π (half the round measure).
    pub fn integrate(&self) -> SymbolicScalar {
        let mut acc = Gaussian::zero();
        for (m, c) in self.terms() {
            if m.iter().any(|e| e % 2 == 1) {
                continue;
            }
            // ½ · 4π · (a−1)!!(b−1)!!/(a+b+1)!!, with c = 0 here.
            let num = odd_double_factorial(m[0] as u64) * odd_double_factorial(m[1] as u64) * 2;
            let den = odd_double_factorial((m[0] + m[1] + 2) as u64);
            acc += c * real(BigRational::new(num, den));
        }
        SymbolicScalar::new(acc, 1)
    }
}

pub fn integrate_sphere(p: &SpherePoly) -> SymbolicScalar {
    p.integrate()
}

/// {p, q} = ⟨r, ∇p × ∇q⟩, reduced.
pub fn kks_bracket(p: &SpherePoly, q: &SpherePoly) -> SpherePoly {
    kks_raw(&p.0, &q.0)
}

pub(crate) fn kks_raw(p: &Poly3, q: &Poly3) -> SpherePoly {
    let dp = [p.partial(0), p.partial(1), p.partial(2)];
    let dq = [q.partial(0), q.partial(1), q.partial(2)];
    let mut out = Poly3::zero();
    for axis in 0..3 {
        let (i, j) = ((axis + 1) % 3, (axis + 2) % 3);
        let cross = &(&dp[i] * &dq[j]) - &(&dp[j] * &dq[i]);
        out = &out + &(&Poly3::coord(axis) * &cross);
    }
    reduce(&out)
}

/// Bracket of the symplectic form ω (total area 2π): s · 2 · KKS.
pub fn omega_bracket(p: &SpherePoly, q: &SpherePoly) -> SpherePoly {
    kks_bracket(p, q).scale(&real(int(2 * BRACKET_SIGN)))
}

pub fn antipodal(f: &SpherePoly) -> SpherePoly {
    f.antipodal()
}

impl From<Poly3> for SpherePoly {
    fn from(p: Poly3) -> Self {
        reduce(&p)
    }
}

impl From<&Poly3> for SpherePoly {
    fn from(p: &Poly3) -> Self {
        reduce(p)
    }
}

impl Add for &SpherePoly {
    type Output = SpherePoly;
    fn add(self, rhs: &SpherePoly) -> SpherePoly {
        SpherePoly(&self.0 + &rhs.0)
    }
}

impl Sub for &SpherePoly {
    type Output = SpherePoly;
    fn sub(self, rhs: &SpherePoly) -> SpherePoly {
        SpherePoly(&self.0 - &rhs.0)
    }
}

impl Neg for &SpherePoly {
    type Output = SpherePoly;
    fn neg(self) -> SpherePoly {
        SpherePoly(-&self.0)
    }
}

impl Mul for &SpherePoly {
    type Output = SpherePoly;
    fn mul(self, rhs: &SpherePoly) -> SpherePoly {
        reduce(&(&self.0 * &rhs.0))
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Poly3, Add add, Sub sub, Mul mul);
forward_owned!(SpherePoly, Add add, Sub sub, Mul mul);

impl fmt::Display for SpherePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(&self.0.terms, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gi, rat};

    fn p(terms: &[(Monomial, i64)]) -> Poly3 {
        let mut out = Poly3::zero();
        for (m, c) in terms {
            out.add_term(*m, gi(*c, 0));
        }
        out
    }

    #[test]
    fn reduction_examples() {
        let r2 = p(&[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], 1)]);
        assert_eq!(reduce(&r2), SpherePoly::one());
        assert_eq!(
            reduce(&p(&[([0, 0, 2], 1)])),
            SpherePoly(p(&[([0, 0, 0], 1), ([2, 0, 0], -1), ([0, 2, 0], -1)]))
        );
        assert_eq!(
            reduce(&p(&[([0, 0, 3], 1)])),
            SpherePoly(p(&[([0, 0, 1], 1), ([2, 0, 1], -1), ([0, 2, 1], -1)]))
        );
    }

    #[test]
    fn kks_of_coordinates() {
        let (x, y, z) = (SpherePoly::x(), SpherePoly::y(), SpherePoly::z());
        assert_eq!(kks_bracket(&z, &x), y);
        assert_eq!(kks_bracket(&x, &y), z);
        assert_eq!(kks_bracket(&y, &z), x);
        assert!(kks_bracket(&x, &x).is_zero());
    }

    #[test]
    fn omega_bracket_scales_kks() {
        let (x, z) = (SpherePoly::x(), SpherePoly::z());
        let s = real(int(2 * BRACKET_SIGN));
        assert_eq!(omega_bracket(&z, &x), SpherePoly::y().scale(&s));
        assert!(omega_bracket(&SpherePoly::one(), &x).is_zero());
        assert_eq!(omega_bracket(&z, &(&x + &x)), omega_bracket(&z, &x).scale(&gi(2, 0)));
    }

    #[test]
    fn moments() {
        assert_eq!(SpherePoly::one().integrate(), SymbolicScalar::rational(int(2), 1));
        assert_eq!(SpherePoly::x().pow(2).integrate(), SymbolicScalar::rational(rat(2, 3), 1));
        assert_eq!(SpherePoly::z().pow(2).integrate(), SymbolicScalar::rational(rat(2, 3), 1));
        let xyz = &(&SpherePoly::x() * &SpherePoly::y()) * &SpherePoly::z();
        assert!(xyz.integrate().is_zero());
        // x²y² over the round sphere is 4π/15
        let x2y2 = &SpherePoly::x().pow(2) * &SpherePoly::y().pow(2);
        assert_eq!(x2y2.integrate(), SymbolicScalar::rational(rat(2, 15), 1));
    }

    #[test]
    fn moment_formula_matches_quadrature() {
        // z⁴ + x²z² against a midpoint rule in (cos θ, φ)
        let f = &SpherePoly::z().pow(4) + &(&SpherePoly::x().pow(2) * &SpherePoly::z().pow(2));
        let exact = f.integrate().to_f64();
        let n = 400;
        let mut acc = 0.0;
        for i in 0..n {
            let c = -1.0 + (i as f64 + 0.5) * 2.0 / n as f64;
            let s = (1.0 - c * c).sqrt();
            for j in 0..n {
                let phi = (j as f64 + 0.5) * std::f64::consts::TAU / n as f64;
                acc += f.evaluate([s * phi.cos(), s * phi.sin(), c]).re;
            }
        }
        let quad = 0.5 * acc * (2.0 / n as f64) * (std::f64::consts::TAU / n as f64);
        assert!((exact - quad).abs() < 1e-4, "{exact} {quad}");
    }

    #[test]
    fn antipodal_on_low_degrees() {
        assert_eq!(SpherePoly::x().antipodal(), SpherePoly::x());
        let xy = &SpherePoly::x() * &SpherePoly::y();
        assert_eq!(xy.antipodal(), -&xy);
        assert_eq!(SpherePoly::one().antipodal(), -&SpherePoly::one());
    }

    #[test]
    fn z_squared_bracket() {
        let u = &SpherePoly::x() + &SpherePoly::y().scale(&gi(0, 1));
        let z2 = SpherePoly::z().pow(2);
        for l in 1..=8u32 {
            let ul = u.pow(l);
            let expected = (&SpherePoly::z() * &ul).scale(&gi(0, -2 * l as i64));
            assert_eq!(kks_bracket(&z2, &ul), expected, "l = {l}");
        }
    }
}
