//! Shared inputs for the benchmarks.

use fuzzyloop_core::harmonics::{HarmonicBasis, HarmonicCoeffs};
use fuzzyloop_core::{FunctionLoop, HarmonicIndex, SpherePoly, Twist};

/// Sum of all real harmonics up to degree `lmax`, a dense symbol.
pub fn dense_symbol(lmax: u32) -> SpherePoly {
    let basis = HarmonicBasis::get(lmax);
    HarmonicIndex::all(lmax).fold(SpherePoly::zero(), |acc, i| &acc + basis.harmonic(i))
}

/// cos t·Y̌_l0 and sin t·Y̌_l0.
pub fn cos_sin_pair(l: u32) -> (FunctionLoop, FunctionLoop) {
    let c = HarmonicCoeffs::unit(l, HarmonicIndex::new(l, 0));
    let f = FunctionLoop::new(l, 8, Twist::Untwisted).with_cos(1, &c).expect("valid mode");
    let g = FunctionLoop::new(l, 8, Twist::Untwisted).with_sin(1, &c).expect("valid mode");
    (f, g)
}
