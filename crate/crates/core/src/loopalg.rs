//! Finite Fourier-series loops t ↦ Σ ĉ_n e^{int} valued in the sphere Poisson
//! algebra, in su(k+1), or in su(2). Coefficients are complex; reality and the
//! antipodal twist are validators rather than storage constraints.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{HarmonicCoeffs, HarmonicIndex, PoissonTable};
use crate::quantize::spin::{mat2_add, mat2_commutator, mat2_scale, mat2_trace, mat2_zero, Mat2};
use crate::quantize::{iota, spin_rep, theta_complex, FuzzyOperator, Su2Element, SymbolCache};
use crate::scalar::{gi, rat, real, Gaussian, Real};

pub const DEFAULT_SPAN: i32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Twist {
    Untwisted,
    Antipodal,
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Twist::Untwisted => "untwisted",
            Twist::Antipodal => "antipodal",
        })
    }
}

fn check_mode(n: i32, span: i32) -> Result<()> {
    if n.abs() > span {
        return Err(Error::SpanOverflow { mode: n, cap: span });
    }
    Ok(())
}

fn check_twists(a: Twist, b: Twist) -> Result<Twist> {
    if a != b {
        return Err(Error::LoopConstraint(format!("cannot combine {a} and {b} loops")));
    }
    Ok(a)
}

/// i·n as a Gaussian.
fn mode_factor(n: i32) -> Gaussian {
    gi(0, n as i64)
}

/// Coefficients of cos(nt)·v and sin(nt)·v at modes n and −n.
fn trig_weights(sine: bool) -> (Gaussian, Gaussian) {
    let half = rat(1, 2);
    if sine {
        // sin(nt) = (e^{int} − e^{−int}) / 2i
        let w = Complex::new(BigRational::zero(), -half);
        (w.clone(), -w)
    } else {
        (real(half.clone()), real(half))
    }
}

/// e^{int} at a point w on the unit circle, with w^{−1} = conj(w).
fn unit_power(w: &Gaussian, n: i32) -> Gaussian {
    let base = if n < 0 { w.conj() } else { w.clone() };
    (0..n.unsigned_abs()).fold(Gaussian::one(), |acc, _| acc * &base)
}

/// The rational point ((a² − b²) + 2abi)/(a² + b²) on the unit circle.
pub fn rational_circle_point(a: i64, b: i64) -> Gaussian {
    let d = a * a + b * b;
    Complex::new(
        BigRational::new((a * a - b * b).into(), d.into()),
        BigRational::new((2 * a * b).into(), d.into()),
    )
}

/// Loop in C[S²] ⊗ C[e^{±it}], each coefficient in the Y̌ basis up to lmax.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionLoop {
    lmax: u32,
    span: i32,
    twist: Twist,
    coeffs: BTreeMap<i32, HarmonicCoeffs>,
}

impl FunctionLoop {
    pub fn new(lmax: u32, span: i32, twist: Twist) -> Self {
        Self {
            lmax,
            span,
            twist,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    pub fn span(&self) -> i32 {
        self.span
    }

    pub fn twist(&self) -> Twist {
        self.twist
    }

    /// Add c·e^{int}.
    pub fn add_mode(&mut self, n: i32, c: &HarmonicCoeffs) -> Result<()> {
        check_mode(n, self.span)?;
        let c = c.with_lmax(self.lmax)?;
        let sum = match self.coeffs.get(&n) {
            Some(cur) => cur.add(&c),
            None => c,
        };
        if sum.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, sum);
        }
        Ok(())
    }

    pub fn with_mode(mut self, n: i32, c: &HarmonicCoeffs) -> Result<Self> {
        self.add_mode(n, c)?;
        Ok(self)
    }

    /// Adds cos(nt)·c.
    pub fn with_cos(self, n: i32, c: &HarmonicCoeffs) -> Result<Self> {
        self.with_trig(n, c, false)
    }

    /// Adds sin(nt)·c.
    pub fn with_sin(self, n: i32, c: &HarmonicCoeffs) -> Result<Self> {
        self.with_trig(n, c, true)
    }

    fn with_trig(self, n: i32, c: &HarmonicCoeffs, sine: bool) -> Result<Self> {
        let (wp, wm) = trig_weights(sine);
        self.with_mode(n, &c.scale(&wp))?.with_mode(-n, &c.scale(&wm))
    }

    pub fn coefficient(&self, n: i32) -> HarmonicCoeffs {
        self.coeffs.get(&n).cloned().unwrap_or_else(|| HarmonicCoeffs::zero(self.lmax))
    }

    pub fn modes(&self) -> impl Iterator<Item = (i32, &HarmonicCoeffs)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Harmonic indices used by any coefficient.
    pub fn indices(&self) -> Vec<HarmonicIndex> {
        let mut out: Vec<_> = self.coeffs.values().flat_map(|c| c.iter().map(|(i, _)| *i)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.values().map(|c| c.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Gaussian) -> Self {
        self.map_coeffs(|_, c| c.scale(s))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.twist = check_twists(self.twist, other.twist)?;
        out.span = self.span.max(other.span);
        out.lmax = self.lmax.max(other.lmax);
        for (n, c) in other.modes() {
            out.add_mode(n, c)?;
        }
        Ok(out)
    }

    fn map_coeffs(&self, f: impl Fn(i32, &HarmonicCoeffs) -> HarmonicCoeffs) -> Self {
        let mut out = Self::new(self.lmax, self.span, self.twist);
        for (n, c) in self.modes() {
            let v = f(n, c);
            if !v.is_zero() {
                out.coeffs.insert(n, v);
            }
        }
        out
    }

    /// ∂_t, the Fourier multiplier i·n.
    pub fn derivative(&self) -> Self {
        self.map_coeffs(|n, c| c.scale(&mode_factor(n)))
    }

    /// Pointwise ω-bracket. The result keeps the larger span cap.
    pub fn bracket(&self, other: &Self, table: &PoissonTable) -> Result<Self> {
        let twist = check_twists(self.twist, other.twist)?;
        let span = self.span.max(other.span);
        let mut out = Self::new(table.lmax(), span, twist);
        for (n, f) in self.modes() {
            for (m, g) in other.modes() {
                let b = table.bracket(f, g)?;
                if !b.is_zero() {
                    out.add_mode(n + m, &b)?;
                }
            }
        }
        Ok(out)
    }

    /// Value at the point e^{it} = w, which must lie on the unit circle.
    pub fn sample(&self, w: &Gaussian) -> HarmonicCoeffs {
        self.modes().fold(HarmonicCoeffs::zero(self.lmax), |acc, (n, c)| {
            acc.add(&c.scale(&unit_power(w, n)))
        })
    }

    /// ĉ_{−n} = conj(ĉ_n), so the loop is real-valued.
    pub fn check_reality(&self) -> Result<()> {
        for (n, c) in self.modes() {
            if self.coefficient(-n) != c.conj() {
                return Err(Error::LoopConstraint(format!("mode {n} breaks reality")));
            }
        }
        Ok(())
    }

    /// No (0, 0) component in any mode.
    pub fn check_zero_mean(&self) -> Result<()> {
        for (n, c) in self.modes() {
            if !c.get(HarmonicIndex::new(0, 0)).is_zero() {
                return Err(Error::LoopConstraint(format!("mode {n} has a constant term")));
            }
        }
        Ok(())
    }

    /// Antipodal loops are supported on n + l odd.
    pub fn check_twist(&self) -> Result<()> {
        if self.twist == Twist::Untwisted {
            return Ok(());
        }
        for (n, c) in self.modes() {
            if let Some((idx, _)) = c.iter().find(|(i, _)| (n + i.l as i32).rem_euclid(2) == 0) {
                return Err(Error::LoopConstraint(format!(
                    "antipodal loop has mode {n} at harmonic {idx}"
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check_reality()?;
        self.check_zero_mean()?;
        self.check_twist()
    }
}

/// Loop in gl(k+1) ⊗ C[e^{±it}] in the monomial basis of V_k.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorLoop<T> {
    k: u32,
    span: i32,
    twist: Twist,
    coeffs: BTreeMap<i32, FuzzyOperator<T>>,
}

impl<T: Real> OperatorLoop<T> {
    pub fn new(k: u32, span: i32, twist: Twist) -> Self {
        Self {
            k,
            span,
            twist,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    pub fn span(&self) -> i32 {
        self.span
    }

    pub fn twist(&self) -> Twist {
        self.twist
    }

    pub fn add_mode(&mut self, n: i32, a: &FuzzyOperator<T>) -> Result<()> {
        check_mode(n, self.span)?;
        if a.level() != self.k {
            return Err(Error::LevelMismatch {
                left: self.k,
                right: a.level(),
            });
        }
        let sum = match self.coeffs.get(&n) {
            Some(cur) => cur.try_add(a)?,
            None => a.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, sum);
        }
        Ok(())
    }

    pub fn with_mode(mut self, n: i32, a: &FuzzyOperator<T>) -> Result<Self> {
        self.add_mode(n, a)?;
        Ok(self)
    }

    pub fn coefficient(&self, n: i32) -> FuzzyOperator<T> {
        self.coeffs.get(&n).cloned().unwrap_or_else(|| FuzzyOperator::zeros(self.k))
    }

    pub fn modes(&self) -> impl Iterator<Item = (i32, &FuzzyOperator<T>)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::new(self.k, self.span, self.twist);
        for (n, c) in self.modes() {
            if n != 0 {
                out.coeffs.insert(n, c.scale(&T::from_gaussian(&mode_factor(n))));
            }
        }
        out
    }

    /// Pointwise commutator.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let twist = check_twists(self.twist, other.twist)?;
        if self.k != other.k {
            return Err(Error::LevelMismatch {
                left: self.k,
                right: other.k,
            });
        }
        let mut out = Self::new(self.k, self.span.max(other.span), twist);
        for (n, a) in self.modes() {
            for (m, b) in other.modes() {
                let c = a.commutator(b)?;
                if !c.is_zero() {
                    out.add_mode(n + m, &c)?;
                }
            }
        }
        Ok(out)
    }

    pub fn to_float(&self) -> OperatorLoop<f64> {
        OperatorLoop {
            k: self.k,
            span: self.span,
            twist: self.twist,
            coeffs: self.coeffs.iter().map(|(n, a)| (*n, a.to_float())).collect(),
        }
    }
}

impl OperatorLoop<BigRational> {
    /// ĉ_{−n} = −ĉ_n^* (Gram adjoint) and every coefficient traceless, so the
    /// loop is su(k+1)-valued.
    pub fn check_reality(&self) -> Result<()> {
        for (n, a) in self.modes() {
            if !a.trace().is_zero() {
                return Err(Error::LoopConstraint(format!("mode {n} has nonzero trace")));
            }
            if self.coefficient(-n) != -&a.gram_adjoint() {
                return Err(Error::LoopConstraint(format!("mode {n} breaks anti-Hermiticity")));
            }
        }
        Ok(())
    }

    /// θ(ĉ_n) = (−1)^n ĉ_n, i.e. X(t + π) = θ(X(t)).
    pub fn check_twist(&self) -> Result<()> {
        if self.twist == Twist::Untwisted {
            return Ok(());
        }
        for (n, a) in self.modes() {
            let t = theta_complex(a)?;
            let expected = if n.rem_euclid(2) == 0 { a.clone() } else { -a };
            if t != expected {
                return Err(Error::LoopConstraint(format!("mode {n} is not θ-compatible")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check_reality()?;
        self.check_twist()
    }
}

/// Loop in sl(2, C) ⊗ C[e^{±it}].
#[derive(Clone, Debug, PartialEq)]
pub struct Su2Loop {
    span: i32,
    twist: Twist,
    coeffs: BTreeMap<i32, Mat2>,
}

fn mat2_is_zero(m: &Mat2) -> bool {
    m.iter().flatten().all(|e| e.is_zero())
}

fn mat2_adjoint(m: &Mat2) -> Mat2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

impl Su2Loop {
    pub fn new(span: i32, twist: Twist) -> Self {
        Self {
            span,
            twist,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn span(&self) -> i32 {
        self.span
    }

    pub fn twist(&self) -> Twist {
        self.twist
    }

    pub fn add_mode(&mut self, n: i32, m: &Mat2) -> Result<()> {
        check_mode(n, self.span)?;
        let sum = match self.coeffs.get(&n) {
            Some(cur) => mat2_add(cur, m),
            None => m.clone(),
        };
        if mat2_is_zero(&sum) {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, sum);
        }
        Ok(())
    }

    pub fn with_mode(mut self, n: i32, m: &Mat2) -> Result<Self> {
        self.add_mode(n, m)?;
        Ok(self)
    }

    pub fn with_cos(self, n: i32, xi: &Su2Element) -> Result<Self> {
        self.with_trig(n, xi, false)
    }

    pub fn with_sin(self, n: i32, xi: &Su2Element) -> Result<Self> {
        self.with_trig(n, xi, true)
    }

    fn with_trig(self, n: i32, xi: &Su2Element, sine: bool) -> Result<Self> {
        let (wp, wm) = trig_weights(sine);
        self.with_mode(n, &mat2_scale(xi.matrix(), &wp))?
            .with_mode(-n, &mat2_scale(xi.matrix(), &wm))
    }

    pub fn coefficient(&self, n: i32) -> Mat2 {
        self.coeffs.get(&n).cloned().unwrap_or_else(mat2_zero)
    }

    pub fn modes(&self) -> impl Iterator<Item = (i32, &Mat2)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let twist = check_twists(self.twist, other.twist)?;
        let mut out = Self::new(self.span.max(other.span), twist);
        for (n, a) in self.modes() {
            for (m, b) in other.modes() {
                out.add_mode(n + m, &mat2_commutator(a, b))?;
            }
        }
        Ok(out)
    }

    /// Traceless, with ĉ_{−n} = −ĉ_n^†.
    pub fn check_reality(&self) -> Result<()> {
        for (n, a) in self.modes() {
            if !mat2_trace(a).is_zero() {
                return Err(Error::LoopConstraint(format!("mode {n} has nonzero trace")));
            }
            let neg = mat2_scale(&mat2_adjoint(a), &-Gaussian::one());
            if self.coefficient(-n) != neg {
                return Err(Error::LoopConstraint(format!("mode {n} breaks anti-Hermiticity")));
            }
        }
        Ok(())
    }

    /// su(2) is θ-fixed, so an antipodal loop only has even modes.
    pub fn check_twist(&self) -> Result<()> {
        if self.twist == Twist::Antipodal {
            if let Some((n, _)) = self.modes().find(|(n, _)| n.rem_euclid(2) == 1) {
                return Err(Error::LoopConstraint(format!("antipodal su(2) loop has odd mode {n}")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check_reality()?;
        self.check_twist()
    }
}

/// Coefficientwise dΦ̄_k.
pub fn loop_quantize<T: Real>(k: u32, f: &FunctionLoop) -> Result<OperatorLoop<T>> {
    let cache = SymbolCache::<T>::for_indices(k, f.lmax(), f.indices())?;
    loop_quantize_with(&cache, f)
}

/// Coefficientwise dΦ̄_k using a prebuilt symbol cache.
pub fn loop_quantize_with<T: Real>(cache: &SymbolCache<T>, f: &FunctionLoop) -> Result<OperatorLoop<T>> {
    let mut out = OperatorLoop::new(cache.level(), f.span(), f.twist());
    for (n, c) in f.modes() {
        out.add_mode(n, &cache.d_phi_bar(c)?)?;
    }
    Ok(out)
}

/// Coefficientwise ι into function loops truncated at lmax ≥ 1.
pub fn loop_iota_function(xi: &Su2Loop, lmax: u32) -> Result<FunctionLoop> {
    let mut out = FunctionLoop::new(lmax, xi.span(), xi.twist());
    for (n, m) in xi.modes() {
        out.add_mode(n, &HarmonicCoeffs::from_poly(&iota(m), lmax)?)?;
    }
    Ok(out)
}

/// Coefficientwise π_k.
pub fn loop_iota_operator<T: Real>(k: u32, xi: &Su2Loop) -> Result<OperatorLoop<T>> {
    let mut out = OperatorLoop::new(k, xi.span(), xi.twist());
    for (n, m) in xi.modes() {
        out.add_mode(n, &spin_rep(k, m)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::SpherePoly;
    use crate::quantize::iota_su2;

    fn coeffs(f: &SpherePoly) -> HarmonicCoeffs {
        HarmonicCoeffs::from_poly(f, 4).unwrap()
    }

    #[test]
    fn trig_builders_are_real() {
        let f = FunctionLoop::new(4, 8, Twist::Untwisted)
            .with_cos(1, &coeffs(&SpherePoly::z()))
            .unwrap()
            .with_sin(2, &coeffs(&SpherePoly::x()))
            .unwrap();
        f.validate().unwrap();
        assert_eq!(f.coefficient(1), coeffs(&SpherePoly::z()).scale(&real(rat(1, 2))));
        assert_eq!(f.coefficient(-2), coeffs(&SpherePoly::x()).scale(&Complex::new(rat(0, 1), rat(1, 2))));
        let bad = FunctionLoop::new(4, 8, Twist::Untwisted).with_mode(1, &coeffs(&SpherePoly::z())).unwrap();
        assert!(bad.check_reality().is_err());
    }

    #[test]
    fn span_cap() {
        let c = coeffs(&SpherePoly::z());
        let f = FunctionLoop::new(4, 2, Twist::Untwisted).with_cos(2, &c).unwrap();
        let g = FunctionLoop::new(4, 2, Twist::Untwisted).with_sin(2, &coeffs(&SpherePoly::x())).unwrap();
        let table = PoissonTable::build(4);
        assert!(matches!(f.bracket(&g, &table), Err(Error::SpanOverflow { mode: -4, cap: 2 })));
        assert!(FunctionLoop::new(4, 2, Twist::Untwisted).with_mode(3, &c).is_err());
    }

    #[test]
    fn bracket_of_modes() {
        // e^{it} z and e^{−it} x bracket to the constant loop 2y.
        let table = PoissonTable::build(4);
        let f = FunctionLoop::new(4, 8, Twist::Untwisted).with_mode(1, &coeffs(&SpherePoly::z())).unwrap();
        let g = FunctionLoop::new(4, 8, Twist::Untwisted).with_mode(-1, &coeffs(&SpherePoly::x())).unwrap();
        let b = f.bracket(&g, &table).unwrap();
        assert_eq!(b.modes().count(), 1);
        assert_eq!(b.coefficient(0), coeffs(&SpherePoly::y().scale(&gi(2, 0))));
        assert!(f.bracket(&f, &table).unwrap().is_zero());
    }

    #[test]
    fn zero_mean_and_twist_validators() {
        let one = coeffs(&SpherePoly::one());
        let f = FunctionLoop::new(4, 8, Twist::Untwisted).with_cos(1, &one).unwrap();
        assert!(f.check_zero_mean().is_err());
        // cos t · ι(h): n + l = 2 is even, rejected
        let g = FunctionLoop::new(4, 8, Twist::Antipodal)
            .with_cos(1, &coeffs(&iota_su2(&Su2Element::h())))
            .unwrap();
        assert!(g.check_twist().is_err());
        let y20 = HarmonicCoeffs::unit(4, HarmonicIndex::new(2, 0));
        let h = FunctionLoop::new(4, 8, Twist::Antipodal).with_cos(1, &y20).unwrap();
        h.validate().unwrap();
    }

    #[test]
    fn su2_loop_validators() {
        let x = Su2Loop::new(8, Twist::Untwisted)
            .with_cos(1, &Su2Element::h())
            .unwrap()
            .with_sin(3, &Su2Element::e())
            .unwrap();
        x.validate().unwrap();
        let odd = Su2Loop { twist: Twist::Antipodal, ..x };
        assert!(odd.check_twist().is_err());
    }

    #[test]
    fn quantize_intertwines_iota() {
        let xi = Su2Loop::new(8, Twist::Untwisted)
            .with_cos(1, &Su2Element::h())
            .unwrap()
            .with_sin(2, &Su2Element::f())
            .unwrap();
        for k in 1..=5 {
            let lhs: OperatorLoop<BigRational> = loop_quantize(k, &loop_iota_function(&xi, 3).unwrap()).unwrap();
            let rhs = loop_iota_operator::<BigRational>(k, &xi).unwrap();
            assert_eq!(lhs, rhs);
            lhs.validate().unwrap();
        }
        let zero = FunctionLoop::new(3, 8, Twist::Untwisted);
        assert!(loop_quantize::<BigRational>(4, &zero).unwrap().is_zero());
    }

    #[test]
    fn twisted_quantization() {
        for m in -2..=2 {
            let c = HarmonicCoeffs::unit(4, HarmonicIndex::new(2, m));
            let f = FunctionLoop::new(4, 8, Twist::Antipodal).with_cos(1, &c).unwrap();
            let q: OperatorLoop<BigRational> = loop_quantize(3, &f).unwrap();
            q.validate().unwrap();
            let c1 = q.coefficient(1);
            assert_eq!(theta_complex(&c1).unwrap(), -&c1);
        }
    }

    #[test]
    fn exact_sampling() {
        let table = PoissonTable::build(4);
        let f = FunctionLoop::new(4, 8, Twist::Untwisted)
            .with_cos(1, &coeffs(&(&SpherePoly::x() * &SpherePoly::z())))
            .unwrap();
        let g = FunctionLoop::new(4, 8, Twist::Untwisted)
            .with_sin(1, &coeffs(&SpherePoly::y()))
            .unwrap();
        let b = f.bracket(&g, &table).unwrap();
        for (a, c) in [(1, 0), (3, 4), (5, 12), (2, 7)] {
            let w = rational_circle_point(a, c);
            let lhs = b.sample(&w);
            let rhs = table.bracket(&f.sample(&w), &g.sample(&w)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
