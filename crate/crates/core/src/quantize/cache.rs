//! Per-level Toeplitz matrices of the basis harmonics, reused for linear
//! combinations, with an exact JSON form and a CSV export.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::geometric::{remove_trace, tuynman_coeffs};
use super::operator::{check_level, ExactOperator, FloatOperator, FuzzyOperator};
use super::toeplitz::toeplitz;
use crate::error::{Error, Result};
use crate::harmonics::{HarmonicBasis, HarmonicCoeffs, HarmonicIndex};
use crate::report::fmt_f64;
use crate::scalar::{parse_rational, Real};

pub const CACHE_FORMAT: &str = "fuzzyloop.symbol-cache";
pub const CACHE_VERSION: u32 = 1;

/// T_k(Y̌_{l,m}) for a set of harmonic indices at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolCache<T> {
    k: u32,
    lmax: u32,
    symbols: BTreeMap<HarmonicIndex, FuzzyOperator<T>>,
}

impl<T: Real> SymbolCache<T> {
    /// Every harmonic with l ≤ lmax.
    pub fn build(k: u32, lmax: u32) -> Result<Self> {
        Self::for_indices(k, lmax, HarmonicIndex::all(lmax))
    }

    pub fn for_indices(k: u32, lmax: u32, indices: impl IntoIterator<Item = HarmonicIndex>) -> Result<Self> {
        check_level(k)?;
        let basis = HarmonicBasis::get(lmax);
        let mut symbols = BTreeMap::new();
        for idx in indices {
            if idx.l > lmax {
                return Err(Error::DegreeOverflow { degree: idx.l, lmax });
            }
            symbols.insert(idx, toeplitz::<T>(k, basis.harmonic(idx))?);
        }
        Ok(Self { k, lmax, symbols })
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    pub fn symbol(&self, idx: HarmonicIndex) -> Option<&FuzzyOperator<T>> {
        self.symbols.get(&idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HarmonicIndex, &FuzzyOperator<T>)> {
        self.symbols.iter()
    }

    /// T_k(Σ c_{l,m} Y̌_{l,m}).
    pub fn toeplitz(&self, c: &HarmonicCoeffs) -> Result<FuzzyOperator<T>> {
        let mut out = FuzzyOperator::<T>::zeros(self.k);
        for (idx, v) in c.iter() {
            let t = self.symbols.get(idx).ok_or(Error::DegreeOverflow {
                degree: idx.l,
                lmax: self.lmax,
            })?;
            out = out.try_add(&t.scale(&T::from_gaussian(v)))?;
        }
        Ok(out)
    }

    /// dΦ_k = i Σ (k + l(l+1)) c_{l,m} T_k(Y̌_{l,m}).
    pub fn d_phi(&self, c: &HarmonicCoeffs) -> Result<FuzzyOperator<T>> {
        Ok(self.toeplitz(&tuynman_coeffs(self.k, c))?.scale(&Complex::i()))
    }

    pub fn d_phi_bar(&self, c: &HarmonicCoeffs) -> Result<FuzzyOperator<T>> {
        Ok(remove_trace(&self.d_phi(c)?))
    }

    pub fn to_float(&self) -> SymbolCache<f64> {
        SymbolCache {
            k: self.k,
            lmax: self.lmax,
            symbols: self.symbols.iter().map(|(i, t)| (*i, t.to_float())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub l: u32,
    pub m: i32,
    pub i: usize,
    pub j: usize,
    pub re_num: String,
    pub re_den: String,
    pub im_num: String,
    pub im_den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub format: String,
    pub version: u32,
    pub level: u32,
    pub lmax: u32,
    pub entries: Vec<CacheEntry>,
    pub checksum: String,
}

fn cache_checksum(level: u32, lmax: u32, entries: &[CacheEntry]) -> String {
    let mut h = Sha256::new();
    h.update(format!("{CACHE_FORMAT}/{CACHE_VERSION}/{level}/{lmax}\n"));
    for e in entries {
        h.update(format!(
            "{} {} {} {} {}/{} {}/{}\n",
            e.l, e.m, e.i, e.j, e.re_num, e.re_den, e.im_num, e.im_den
        ));
    }
    hex::encode(h.finalize())
}

impl SymbolCache<BigRational> {
    pub fn to_file(&self) -> CacheFile {
        let mut entries = Vec::new();
        for (idx, t) in &self.symbols {
            for i in 0..t.dim() {
                for j in 0..t.dim() {
                    let v = t.get(i, j);
                    if v.re.is_zero() && v.im.is_zero() {
                        continue;
                    }
                    entries.push(CacheEntry {
                        l: idx.l,
                        m: idx.m,
                        i,
                        j,
                        re_num: v.re.numer().to_string(),
                        re_den: v.re.denom().to_string(),
                        im_num: v.im.numer().to_string(),
                        im_den: v.im.denom().to_string(),
                    });
                }
            }
        }
        let checksum = cache_checksum(self.k, self.lmax, &entries);
        CacheFile {
            format: CACHE_FORMAT.into(),
            version: CACHE_VERSION,
            level: self.k,
            lmax: self.lmax,
            entries,
            checksum,
        }
    }

    pub fn from_file(file: CacheFile) -> Result<Self> {
        if file.format != CACHE_FORMAT {
            return Err(Error::Parse(format!("unexpected format tag `{}`", file.format)));
        }
        if file.version != CACHE_VERSION {
            return Err(Error::Version {
                what: "symbol cache",
                found: file.version,
            });
        }
        let found = cache_checksum(file.level, file.lmax, &file.entries);
        if found != file.checksum {
            return Err(Error::Checksum {
                what: "symbol cache",
                expected: file.checksum,
                found,
            });
        }
        check_level(file.level)?;
        let dim = file.level as usize + 1;
        let mut symbols: BTreeMap<HarmonicIndex, ExactOperator> = HarmonicIndex::all(file.lmax)
            .map(|i| (i, ExactOperator::zeros(file.level)))
            .collect();
        for e in &file.entries {
            let op = symbols
                .get_mut(&HarmonicIndex { l: e.l, m: e.m })
                .ok_or_else(|| Error::Parse(format!("bad harmonic index ({},{})", e.l, e.m)))?;
            if e.i >= dim || e.j >= dim {
                return Err(Error::Parse(format!("entry ({},{}) outside level {}", e.i, e.j, file.level)));
            }
            let re = parse_rational(&format!("{}/{}", e.re_num, e.re_den))?;
            let im = parse_rational(&format!("{}/{}", e.im_num, e.im_den))?;
            op.set(e.i, e.j, Complex::new(re, im));
        }
        Ok(Self {
            k: file.level,
            lmax: file.lmax,
            symbols,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(&self.to_file())?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_file(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// CSV rows `i,j,re,im` for the nonzero entries.
pub fn write_csv(op: &FloatOperator, mut out: impl Write) -> Result<()> {
    writeln!(out, "i,j,re,im")?;
    for i in 0..op.dim() {
        for j in 0..op.dim() {
            let v = op.get(i, j);
            if v.re != 0.0 || v.im != 0.0 {
                writeln!(out, "{i},{j},{},{}", fmt_f64(v.re), fmt_f64(v.im))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::SpherePoly;
    use crate::quantize::geometric::{d_phi, d_phi_bar};

    #[test]
    fn cache_matches_direct() {
        let cache = SymbolCache::<BigRational>::build(4, 3).unwrap();
        let f = &SpherePoly::z().pow(2) + &(&SpherePoly::x() * &SpherePoly::y());
        let c = HarmonicCoeffs::from_poly(&f, 3).unwrap();
        assert_eq!(cache.toeplitz(&c).unwrap(), toeplitz(4, &f).unwrap());
        assert_eq!(cache.d_phi(&c).unwrap(), d_phi(4, &f).unwrap());
        assert_eq!(cache.d_phi_bar(&c).unwrap(), d_phi_bar(4, &f).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let cache = SymbolCache::<BigRational>::build(3, 2).unwrap();
        let file = cache.to_file();
        assert_eq!(SymbolCache::from_file(file.clone()).unwrap(), cache);
        let mut bad = file;
        bad.entries[0].re_num.push('7');
        assert!(matches!(SymbolCache::from_file(bad), Err(Error::Checksum { .. })));
    }

    #[test]
    fn csv_export() {
        let t = toeplitz::<f64>(2, &SpherePoly::z()).unwrap();
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 3);
        let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(&row[..2], ["0", "0"]);
        assert!((row[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-15);
    }
}
