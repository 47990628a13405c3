//! Run configuration: a JSON file with every field optional, then flag overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use fuzzyloop_core::harmonics::HarmonicCoeffs;
use fuzzyloop_core::scalar::{gauss, int, parse_rational};
use fuzzyloop_core::suite::{SuiteConfig, Tolerances};
use fuzzyloop_core::{FunctionLoop, HarmonicIndex, Twist};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// An integer or a rational string such as "-3/4".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalLit {
    Int(i64),
    Text(String),
}

impl Default for RationalLit {
    fn default() -> Self {
        RationalLit::Int(0)
    }
}

impl RationalLit {
    fn value(&self) -> Result<BigRational> {
        Ok(match self {
            RationalLit::Int(n) => int(*n),
            RationalLit::Text(s) => parse_rational(s)?,
        })
    }
}

/// One Fourier coefficient (re + i·im) of e^{int}·Y̌_lm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeLiteral {
    pub n: i32,
    pub l: u32,
    pub m: i32,
    #[serde(default)]
    pub re: RationalLit,
    #[serde(default)]
    pub im: RationalLit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopPair {
    #[serde(default = "untwisted")]
    pub twist: Twist,
    pub f: Vec<ModeLiteral>,
    pub g: Vec<ModeLiteral>,
}

fn untwisted() -> Twist {
    Twist::Untwisted
}

fn half(n: i32, re: &str, im: &str) -> ModeLiteral {
    ModeLiteral {
        n,
        l: 2,
        m: 0,
        re: RationalLit::Text(re.into()),
        im: RationalLit::Text(im.into()),
    }
}

impl Default for LoopPair {
    /// F = cos t·Y̌₂₀, G = sin t·Y̌₂₀.
    fn default() -> Self {
        Self {
            twist: Twist::Untwisted,
            f: vec![half(1, "1/2", "0"), half(-1, "1/2", "0")],
            g: vec![half(1, "0", "-1/2"), half(-1, "0", "1/2")],
        }
    }
}

impl LoopPair {
    pub fn build(&self, lmax: u32, span: i32) -> Result<(FunctionLoop, FunctionLoop)> {
        let one = |modes: &[ModeLiteral], name: &str| -> Result<FunctionLoop> {
            ensure!(!modes.is_empty(), "loop {name} has no modes");
            let mut out = FunctionLoop::new(lmax, span, self.twist);
            for lit in modes {
                ensure!(
                    lit.l <= lmax && lit.m.unsigned_abs() <= lit.l,
                    "loop {name}: harmonic ({}, {}) outside lmax {lmax}",
                    lit.l,
                    lit.m
                );
                let mut c = HarmonicCoeffs::zero(lmax);
                c.set(HarmonicIndex::new(lit.l, lit.m), gauss(lit.re.value()?, lit.im.value()?));
                out.add_mode(lit.n, &c).with_context(|| format!("loop {name}"))?;
            }
            out.validate().with_context(|| format!("loop {name}"))?;
            Ok(out)
        };
        Ok((one(&self.f, "f")?, one(&self.g, "g")?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub lmax: u32,
    pub span: i32,
    pub k_list: Vec<u32>,
    pub exact_k_max: u32,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub twist: bool,
    pub seed: u64,
    /// Record wall time per level in the sweep CSV (makes output nondeterministic).
    pub timings: bool,
    pub loops: LoopPair,
}

impl Default for RunConfig {
    fn default() -> Self {
        let suite = SuiteConfig::default();
        Self {
            lmax: 8,
            span: 8,
            k_list: vec![2, 4, 8, 16, 32, 64, 128],
            exact_k_max: suite.exact_k_max,
            tolerances: suite.tolerances,
            out: PathBuf::from("fuzzyloop-out"),
            twist: suite.twist,
            seed: suite.seed,
            timings: false,
            loops: LoopPair::default(),
        }
    }
}

/// Only levels at or above this enter the asymptotic rate fits.
pub const ASYMPTOTIC_K_MIN: u32 = 8;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(!self.k_list.is_empty(), "k_list is empty");
        ensure!(self.k_list[0] >= 1, "levels must be at least 1");
        ensure!(
            self.k_list.windows(2).all(|w| w[0] < w[1]),
            "k_list must be strictly ascending"
        );
        ensure!((1..=24).contains(&self.lmax), "lmax must be in 1..=24");
        ensure!(self.span >= 1, "span must be at least 1");
        let t = &self.tolerances;
        for (name, v) in [
            ("commutator_slope", t.commutator_slope),
            ("trace_slope", t.trace_slope),
            ("norm_slope", t.norm_slope),
            ("norm_bound", t.norm_bound),
            ("limit_slope", t.limit_slope),
            ("twisted_limit_slope", t.twisted_limit_slope),
            ("identity", t.identity),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                bail!("tolerance {name} must be a non-negative number, got {v}");
            }
        }
        Ok(())
    }

    pub fn suite(&self) -> Result<SuiteConfig> {
        let ks: Vec<u32> = self.k_list.iter().copied().filter(|&k| k >= ASYMPTOTIC_K_MIN).collect();
        ensure!(
            ks.len() >= 2,
            "verify needs at least two levels ≥ {ASYMPTOTIC_K_MIN} in k_list for rate fits"
        );
        Ok(SuiteConfig {
            exact_k_max: self.exact_k_max,
            asymptotic_ks: ks,
            twist: self.twist,
            seed: self.seed,
            tolerances: self.tolerances.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        c.validate().unwrap();
    }

    #[test]
    fn default_loops_are_cos_sin_y20() {
        let (f, g) = LoopPair::default().build(2, 8).unwrap();
        assert_eq!(f.modes().count(), 2);
        assert_eq!(g.modes().count(), 2);
    }

    #[test]
    fn rejects_bad_k_lists() {
        let mut c = RunConfig::default();
        c.k_list.clear();
        assert!(c.validate().is_err());
        c.k_list = vec![4, 2];
        assert!(c.validate().is_err());
    }

    #[test]
    fn parses_rational_literals() {
        let m: ModeLiteral = serde_json::from_str(r#"{"n": 1, "l": 1, "m": 0, "re": "-3/4", "im": 2}"#).unwrap();
        assert_eq!(m.re.value().unwrap(), parse_rational("-3/4").unwrap());
        assert_eq!(m.im.value().unwrap(), int(2));
    }

    #[test]
    fn unreal_loop_is_rejected() {
        let pair = LoopPair {
            twist: Twist::Untwisted,
            f: vec![half(1, "1", "0")],
            g: vec![half(1, "0", "1"), half(-1, "0", "1")],
        };
        assert!(pair.build(2, 8).is_err());
    }
}
