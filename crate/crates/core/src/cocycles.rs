//! The loop-algebra 2-cocycles ψ₁, ψ_k, ψ∞ and their antipodally twisted
//! versions in Fourier form: ψ(F, G) = c · Σ_n (i n)·⟨F̂_{−n}, Ĝ_n⟩, the scaling
//! identities between them, and the large-k sweep.

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::basis::harmonic_norm_sqr;
use crate::harmonics::HarmonicCoeffs;
use crate::loopalg::{loop_iota_function, loop_iota_operator, loop_quantize_with, FunctionLoop, OperatorLoop, Su2Loop, Twist};
use crate::quantize::spin::{kappa_su2, Mat2};
use crate::quantize::{Su2Element, SymbolCache};
use crate::scalar::{gi, rat, real, Gaussian, Real, SymbolicScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CocycleKind {
    Psi1,
    Psik(u32),
    PsiInf,
    PsikP(u32),
    PsiInfP,
}

impl CocycleKind {
    pub fn is_twisted(&self) -> bool {
        matches!(self, CocycleKind::PsikP(_) | CocycleKind::PsiInfP)
    }

    /// Overall constant c as a rational times a power of π.
    fn prefactor(&self) -> SymbolicScalar {
        match self {
            CocycleKind::Psi1 | CocycleKind::Psik(_) => SymbolicScalar::rational(rat(1, 1), 0),
            CocycleKind::PsikP(_) => SymbolicScalar::rational(rat(1, 2), 0),
            // (6/(2π)²) ∫ dt over a period of length 2π
            CocycleKind::PsiInf => SymbolicScalar::rational(rat(3, 1), -1),
            CocycleKind::PsiInfP => SymbolicScalar::rational(rat(3, 2), -1),
        }
    }
}

impl fmt::Display for CocycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleKind::Psi1 => write!(f, "psi1"),
            CocycleKind::Psik(k) => write!(f, "psik({k})"),
            CocycleKind::PsiInf => write!(f, "psiinf"),
            CocycleKind::PsikP(k) => write!(f, "psikP({k})"),
            CocycleKind::PsiInfP => write!(f, "psiinfP"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LoopElement {
    Su2(Su2Loop),
    Function(FunctionLoop),
    Operator(OperatorLoop<BigRational>),
    OperatorFloat(OperatorLoop<f64>),
}

impl LoopElement {
    fn describe(&self) -> String {
        match self {
            LoopElement::Su2(_) => "su(2) loop".into(),
            LoopElement::Function(_) => "function loop".into(),
            LoopElement::Operator(l) => format!("exact operator loop at level {}", l.level()),
            LoopElement::OperatorFloat(l) => format!("float operator loop at level {}", l.level()),
        }
    }

    pub fn twist(&self) -> Twist {
        match self {
            LoopElement::Su2(l) => l.twist(),
            LoopElement::Function(l) => l.twist(),
            LoopElement::Operator(l) => l.twist(),
            LoopElement::OperatorFloat(l) => l.twist(),
        }
    }
}

impl From<Su2Loop> for LoopElement {
    fn from(l: Su2Loop) -> Self {
        LoopElement::Su2(l)
    }
}

impl From<FunctionLoop> for LoopElement {
    fn from(l: FunctionLoop) -> Self {
        LoopElement::Function(l)
    }
}

impl From<OperatorLoop<BigRational>> for LoopElement {
    fn from(l: OperatorLoop<BigRational>) -> Self {
        LoopElement::Operator(l)
    }
}

impl From<OperatorLoop<f64>> for LoopElement {
    fn from(l: OperatorLoop<f64>) -> Self {
        LoopElement::OperatorFloat(l)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CocycleValue {
    Exact(SymbolicScalar),
    Float(Complex64),
}

impl CocycleValue {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            CocycleValue::Exact(s) => s.to_c64(),
            CocycleValue::Float(z) => *z,
        }
    }

    pub fn exact(&self) -> Option<&SymbolicScalar> {
        match self {
            CocycleValue::Exact(s) => Some(s),
            CocycleValue::Float(_) => None,
        }
    }
}

/// ∫ f g ω / π, using κ-orthogonality of the Y̌ basis.
fn sphere_pairing(f: &HarmonicCoeffs, g: &HarmonicCoeffs) -> Gaussian {
    let mut acc = Gaussian::zero();
    for (idx, a) in f.iter() {
        let b = g.get(*idx);
        if !b.is_zero() {
            acc += a * b * real(harmonic_norm_sqr(*idx));
        }
    }
    acc
}

/// Σ_n (i n)·pair(F̂_{−n}, Ĝ_n) over the modes of G.
fn fourier_sum<'a, C: 'a, V>(
    g_modes: impl Iterator<Item = (i32, &'a C)>,
    f_coeff: impl Fn(i32) -> C,
    pair: impl Fn(&C, &C) -> V,
    zero: V,
    weight: impl Fn(i32, V) -> V,
    add: impl Fn(V, V) -> V,
) -> V {
    let mut acc = zero;
    for (n, g) in g_modes {
        if n != 0 {
            acc = add(acc, weight(n, pair(&f_coeff(-n), g)));
        }
    }
    acc
}

fn exact_sum<'a, C: 'a>(
    g_modes: impl Iterator<Item = (i32, &'a C)>,
    f_coeff: impl Fn(i32) -> C,
    pair: impl Fn(&C, &C) -> Gaussian,
) -> Gaussian {
    fourier_sum(g_modes, f_coeff, pair, Gaussian::zero(), |n, v| v * gi(0, n as i64), |a, b| a + b)
}

fn mismatch(kind: CocycleKind, f: &LoopElement, g: &LoopElement) -> Error {
    Error::KindMismatch {
        kind: kind.to_string(),
        loops: format!("{} and {}", f.describe(), g.describe()),
    }
}

/// ψ(F, G) for the given kind.
pub fn eval(kind: CocycleKind, f: &LoopElement, g: &LoopElement) -> Result<CocycleValue> {
    if kind.is_twisted() && (f.twist() != Twist::Antipodal || g.twist() != Twist::Antipodal) {
        return Err(Error::LoopConstraint(format!("{kind} needs antipodal loops")));
    }
    let c = kind.prefactor();
    let exact = |sum: Gaussian, pi_power: i32| Ok(CocycleValue::Exact(&c * &SymbolicScalar::new(sum, pi_power)));
    match (kind, f, g) {
        (CocycleKind::Psi1, LoopElement::Su2(a), LoopElement::Su2(b)) => {
            exact(exact_sum(b.modes(), |n| a.coefficient(n), |x: &Mat2, y| kappa_su2(x, y)), 0)
        }
        (CocycleKind::PsiInf | CocycleKind::PsiInfP, LoopElement::Function(a), LoopElement::Function(b)) => {
            exact(exact_sum(b.modes(), |n| a.coefficient(n), sphere_pairing), 1)
        }
        (CocycleKind::Psik(k) | CocycleKind::PsikP(k), LoopElement::Operator(a), LoopElement::Operator(b))
            if a.level() == k && b.level() == k =>
        {
            let sum = exact_sum(b.modes(), |n| a.coefficient(n), |x, y| {
                x.trace_product(y).expect("levels checked")
            });
            exact(sum, 0)
        }
        (CocycleKind::Psik(k) | CocycleKind::PsikP(k), LoopElement::OperatorFloat(a), LoopElement::OperatorFloat(b))
            if a.level() == k && b.level() == k =>
        {
            let sum = fourier_sum(
                b.modes(),
                |n| a.coefficient(n),
                |x, y| x.trace_product(y).expect("levels checked"),
                Complex64::zero(),
                |n, v| v * Complex64::new(0.0, n as f64),
                |x, y| x + y,
            );
            Ok(CocycleValue::Float(sum * c.to_c64()))
        }
        _ => Err(mismatch(kind, f, g)),
    }
}

/// The spanning set (e^{int} ξ_a, e^{−int} ξ_b) over the su(2) basis.
fn spanning_pairs(modes: &[i32], twist: Twist) -> Vec<(Su2Loop, Su2Loop)> {
    let basis = Su2Element::basis();
    let mut out = Vec::new();
    for &n in modes {
        for a in &basis {
            for b in &basis {
                let x = Su2Loop::new(n.abs().max(1), twist).with_mode(n, a.matrix());
                let y = Su2Loop::new(n.abs().max(1), twist).with_mode(-n, b.matrix());
                out.push((x.expect("mode within span"), y.expect("mode within span")));
            }
        }
    }
    out
}

const UNTWISTED_MODES: [i32; 5] = [-2, -1, 0, 1, 2];
// su(2) is θ-fixed, so twisted su(2) loops live on even modes.
const TWISTED_MODES: [i32; 3] = [-2, 0, 2];

/// The common ratio other(ΞA, ΞB)/ψ₁(ΞA, ΞB) over the pairs, requiring both
/// to vanish together.
fn common_ratio(
    pairs: &[(Su2Loop, Su2Loop)],
    other: impl Fn(&Su2Loop, &Su2Loop) -> Result<SymbolicScalar>,
) -> Result<Gaussian> {
    let mut ratio: Option<Gaussian> = None;
    for (x, y) in pairs {
        let base = eval(CocycleKind::Psi1, &x.clone().into(), &y.clone().into())?;
        let base = base.exact().expect("su(2) values are exact").clone();
        let v = other(x, y)?;
        if base.is_zero() {
            if !v.is_zero() {
                return Err(Error::NotProportional(format!("ψ₁ vanishes but pullback is {v}")));
            }
            continue;
        }
        if v.pi_power != base.pi_power && !v.is_zero() {
            return Err(Error::NotProportional(format!("π-powers differ: {v} vs {base}")));
        }
        let r = v.coeff / base.coeff;
        match &ratio {
            Some(prev) if *prev != r => {
                return Err(Error::NotProportional(format!("ratios {prev} and {r}")));
            }
            _ => ratio = Some(r),
        }
    }
    ratio.ok_or_else(|| Error::NotProportional("ψ₁ vanishes on every pair".into()))
}

fn exact_value(v: CocycleValue) -> SymbolicScalar {
    v.exact().expect("exact inputs give exact values").clone()
}

fn function_pullback(kind: CocycleKind, x: &Su2Loop, y: &Su2Loop) -> Result<SymbolicScalar> {
    let fx = loop_iota_function(x, 1)?;
    let fy = loop_iota_function(y, 1)?;
    Ok(exact_value(eval(kind, &fx.into(), &fy.into())?))
}

fn operator_pullback(kind: CocycleKind, k: u32, x: &Su2Loop, y: &Su2Loop) -> Result<SymbolicScalar> {
    let ox = loop_iota_operator::<BigRational>(k, x)?;
    let oy = loop_iota_operator::<BigRational>(k, y)?;
    Ok(exact_value(eval(kind, &ox.into(), &oy.into())?))
}

/// (Lι)*ψ∞ = −ψ₁ on the spanning set.
pub fn pullback_check_a() -> Result<bool> {
    let pairs = spanning_pairs(&UNTWISTED_MODES, Twist::Untwisted);
    let r = common_ratio(&pairs, |x, y| function_pullback(CocycleKind::PsiInf, x, y))?;
    Ok(r == -Gaussian::one())
}

/// The exact r with (Lπ_k)*ψ_k = r·ψ₁ on the spanning set.
pub fn pullback_check_b(k: u32) -> Result<BigRational> {
    let pairs = spanning_pairs(&UNTWISTED_MODES, Twist::Untwisted);
    real_ratio(common_ratio(&pairs, |x, y| operator_pullback(CocycleKind::Psik(k), k, x, y))?)
}

/// (Lι)*ψ^P_∞ = −½ψ₁ on the twisted spanning set.
pub fn twisted_check_a() -> Result<bool> {
    let pairs = spanning_pairs(&TWISTED_MODES, Twist::Antipodal);
    let r = common_ratio(&pairs, |x, y| function_pullback(CocycleKind::PsiInfP, x, y))?;
    Ok(r == real(rat(-1, 2)))
}

/// The exact r with (Lπ_k)*ψ^P_k = r·ψ₁ on the twisted spanning set.
pub fn twisted_check_b(k: u32) -> Result<BigRational> {
    let pairs = spanning_pairs(&TWISTED_MODES, Twist::Antipodal);
    real_ratio(common_ratio(&pairs, |x, y| operator_pullback(CocycleKind::PsikP(k), k, x, y))?)
}

fn real_ratio(r: Gaussian) -> Result<BigRational> {
    if !r.im.is_zero() {
        return Err(Error::NotProportional(format!("complex ratio {r}")));
    }
    Ok(r.re)
}

/// k(k+1)(k+2)/6.
pub fn expected_pullback_factor(k: u32) -> BigRational {
    let k = k as i64;
    rat(k * (k + 1) * (k + 2), 6)
}

/// k(k+1)(k+2)/12.
pub fn expected_twisted_factor(k: u32) -> BigRational {
    let k = k as i64;
    rat(k * (k + 1) * (k + 2), 12)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// −6/k³
    Cubic,
    /// −6/(k(k+1)(k+2))
    Exact,
}

impl Normalization {
    pub const ALL: [Normalization; 2] = [Normalization::Cubic, Normalization::Exact];

    pub fn factor(&self, k: u32) -> BigRational {
        let k = k as i64;
        match self {
            Normalization::Cubic => rat(-6, k * k * k),
            Normalization::Exact => rat(-6, k * (k + 1) * (k + 2)),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Cubic => "cubic",
            Normalization::Exact => "exact",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub k: u32,
    pub normalization: Normalization,
    pub value: f64,
    pub limit: f64,
    pub deviation: f64,
    /// Exact normalized value, present for k ≤ exact_k_max.
    #[serde(skip)]
    pub exact: Option<SymbolicScalar>,
    /// Wall time for the level, only when timings were requested.
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptions {
    pub exact_k_max: u32,
    pub timings: bool,
    /// Relative tolerance for the float/exact cross-check.
    pub cross_check_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            exact_k_max: 12,
            timings: false,
            cross_check_tol: 1e-9,
        }
    }
}

fn sweep_kinds(twist: Twist, k: u32) -> (CocycleKind, CocycleKind) {
    match twist {
        Twist::Untwisted => (CocycleKind::Psik(k), CocycleKind::PsiInf),
        Twist::Antipodal => (CocycleKind::PsikP(k), CocycleKind::PsiInfP),
    }
}

/// The finite-k cocycle value ψ_k(LdΦ̄_k F, LdΦ̄_k G) at one level, in floats,
/// together with the exact value when requested.
fn level_value(
    k: u32,
    f: &FunctionLoop,
    g: &FunctionLoop,
    exact: bool,
) -> Result<(Complex64, Option<SymbolicScalar>)> {
    let mut indices = f.indices();
    indices.extend(g.indices());
    let lmax = f.lmax().max(g.lmax());
    let (kind, _) = sweep_kinds(f.twist(), k);
    let cache = SymbolCache::<f64>::for_indices(k, lmax, indices.iter().copied())?;
    let float = eval(
        kind,
        &loop_quantize_with(&cache, f)?.into(),
        &loop_quantize_with(&cache, g)?.into(),
    )?
    .to_c64();
    let exact = if exact {
        let cache = SymbolCache::<BigRational>::for_indices(k, lmax, indices)?;
        let v = eval(
            kind,
            &loop_quantize_with(&cache, f)?.into(),
            &loop_quantize_with(&cache, g)?.into(),
        )?;
        Some(exact_value(v))
    } else {
        None
    };
    Ok((float, exact))
}

/// −(6/k³)·ψ_k and −6/(k(k+1)(k+2))·ψ_k of the quantized loops against ψ∞(F, G)
/// (twisted kinds for antipodal loops). Levels run in parallel; records come
/// back ordered by (k, normalization).
pub fn limit_sweep(
    f: &FunctionLoop,
    g: &FunctionLoop,
    k_list: &[u32],
    opts: &SweepOptions,
) -> Result<Vec<ConvergenceRecord>> {
    if k_list.is_empty() {
        return Err(Error::Config("empty k list".into()));
    }
    if k_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("k list must be strictly increasing".into()));
    }
    check_twist_pair(f, g)?;
    for l in [f, g] {
        l.validate()?;
    }
    let (_, limit_kind) = sweep_kinds(f.twist(), 1);
    let limit = exact_value(eval(limit_kind, &f.clone().into(), &g.clone().into())?);
    let limit_f = limit.to_c64();

    let per_level: Vec<Result<Vec<ConvergenceRecord>>> = k_list
        .par_iter()
        .map(|&k| {
            let start = Instant::now();
            let (raw, exact) = level_value(k, f, g, k <= opts.exact_k_max)?;
            let seconds = opts.timings.then(|| start.elapsed().as_secs_f64());
            if let Some(e) = &exact {
                let ef = e.to_c64();
                if (ef - raw).norm() > opts.cross_check_tol * ef.norm().max(1.0) {
                    return Err(Error::Inconsistent);
                }
            }
            Ok(Normalization::ALL
                .iter()
                .map(|&normalization| {
                    let factor = normalization.factor(k);
                    let exact = exact.as_ref().map(|e| e.scale(&real(factor.clone())));
                    // Exact levels report exact numbers, so a vanishing deviation is a true zero.
                    let (value, deviation) = match &exact {
                        Some(e) => (e.to_c64(), e.try_sub(&limit).map(|d| d.to_c64().norm())),
                        None => (raw * factor.as_f64(), Err(Error::Inconsistent)),
                    };
                    ConvergenceRecord {
                        k,
                        normalization,
                        value: value.re,
                        limit: limit_f.re,
                        deviation: deviation.unwrap_or_else(|_| (value - limit_f).norm()),
                        exact,
                        seconds,
                    }
                })
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for r in per_level {
        out.extend(r?);
    }
    Ok(out)
}

fn check_twist_pair(f: &FunctionLoop, g: &FunctionLoop) -> Result<()> {
    if f.twist() != g.twist() {
        return Err(Error::LoopConstraint("sweep loops have different twists".into()));
    }
    Ok(())
}

/// Least-squares slope of ln(deviation) against ln(k), skipping zero
/// deviations. None with fewer than two usable points.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(k, d)| *k > 0.0 && *d > 0.0)
        .map(|(k, d)| (k.ln(), d.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slope over the records with the given normalization.
pub fn sweep_slope(records: &[ConvergenceRecord], normalization: Normalization) -> Option<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.normalization == normalization)
        .map(|r| (r.k as f64, r.deviation))
        .collect();
    fit_slope(&pts)
}

/// Whether the deviations decrease from some index on.
pub fn eventually_decreasing(deviations: &[f64]) -> bool {
    let n = deviations.len();
    if n < 2 {
        return true;
    }
    deviations[n / 2..].windows(2).all(|w| w[1] <= w[0])
}
