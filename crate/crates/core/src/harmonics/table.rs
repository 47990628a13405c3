//! Structure constants of the ω-bracket in the Y̌ basis.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::basis::{HarmonicBasis, HarmonicCoeffs, HarmonicIndex};
use super::poly::omega_bracket;
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, real};

pub const TABLE_FORMAT: &str = "fuzzyloop.poisson-table";
pub const TABLE_VERSION: u32 = 1;

type Pair = (HarmonicIndex, HarmonicIndex);

/// {Y̌_A, Y̌_B}_ω = Σ_C C_AB^C Y̌_C for all pairs whose bracket stays within
/// the truncation, i.e. l_A + l_B − 1 ≤ lmax.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonTable {
    lmax: u32,
    entries: BTreeMap<Pair, Vec<(HarmonicIndex, BigRational)>>,
}

/// Whether {V_l1, V_l2} lands inside degree lmax.
pub fn pair_fits(l1: u32, l2: u32, lmax: u32) -> bool {
    l1 + l2 <= lmax + 1
}

impl PoissonTable {
    pub fn build(lmax: u32) -> Self {
        let basis = HarmonicBasis::get(lmax);
        let mut entries = BTreeMap::new();
        let all: Vec<_> = HarmonicIndex::all(lmax).collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if a.l == 0 || b.l == 0 || !pair_fits(a.l, b.l, lmax) {
                    continue;
                }
                let br = omega_bracket(basis.harmonic(*a), basis.harmonic(*b));
                let c = basis.decompose(&br).expect("bracket degree within truncation");
                let row: Vec<_> = c.iter().map(|(idx, v)| (*idx, v.re.clone())).collect();
                if row.is_empty() {
                    continue;
                }
                let neg = row.iter().map(|(idx, v)| (*idx, -v.clone())).collect();
                entries.insert((*a, *b), row);
                entries.insert((*b, *a), neg);
            }
        }
        Self { lmax, entries }
    }

    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    /// Nonzero structure constants of {Y̌_a, Y̌_b}.
    pub fn row(&self, a: HarmonicIndex, b: HarmonicIndex) -> &[(HarmonicIndex, BigRational)] {
        self.entries.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    pub fn constant(&self, a: HarmonicIndex, b: HarmonicIndex, c: HarmonicIndex) -> BigRational {
        self.row(a, b)
            .iter()
            .find(|(i, _)| *i == c)
            .map_or_else(BigRational::zero, |(_, v)| v.clone())
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (HarmonicIndex, HarmonicIndex, HarmonicIndex, &BigRational)> {
        self.entries
            .iter()
            .flat_map(|((a, b), row)| row.iter().map(move |(c, v)| (*a, *b, *c, v)))
    }

    /// ω-bracket of two coefficient vectors.
    pub fn bracket(&self, f: &HarmonicCoeffs, g: &HarmonicCoeffs) -> Result<HarmonicCoeffs> {
        let mut out = HarmonicCoeffs::zero(self.lmax);
        for (a, fa) in f.iter() {
            for (b, gb) in g.iter() {
                if a.l == 0 || b.l == 0 {
                    continue;
                }
                if !pair_fits(a.l, b.l, self.lmax) {
                    return Err(Error::DegreeOverflow {
                        degree: a.l + b.l - 1,
                        lmax: self.lmax,
                    });
                }
                let w = fa * gb;
                for (c, v) in self.row(*a, *b) {
                    out.add_to(*c, &(&w * real(v.clone())));
                }
            }
        }
        Ok(out)
    }

    /// Number of basis triples with l1 + l2 + l3 − 2 ≤ lmax on which the
    /// Jacobi identity fails (0 when the table is consistent).
    pub fn jacobi_violations(&self) -> usize {
        let lmax = self.lmax;
        let all: Vec<_> = HarmonicIndex::all(lmax).filter(|i| i.l > 0).collect();
        let unit = |i: HarmonicIndex| HarmonicCoeffs::unit(lmax, i);
        let mut bad = 0;
        for (ia, a) in all.iter().enumerate() {
            for (ib, b) in all.iter().enumerate().skip(ia + 1) {
                for c in all.iter().skip(ib + 1) {
                    if a.l + b.l + c.l > lmax + 2 {
                        continue;
                    }
                    let cyc = [(a, b, c), (b, c, a), (c, a, b)];
                    let mut sum = HarmonicCoeffs::zero(lmax);
                    for (p, q, r) in cyc {
                        let inner = self.bracket(&unit(*q), &unit(*r)).expect("fits");
                        sum = sum.add(&self.bracket(&unit(*p), &inner).expect("fits"));
                    }
                    if !sum.is_zero() {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    pub fn to_file(&self) -> TableFile {
        let entries: Vec<TableEntry> = self
            .iter()
            .map(|(a, b, c, v)| TableEntry {
                l1: a.l,
                m1: a.m,
                l2: b.l,
                m2: b.m,
                l3: c.l,
                m3: c.m,
                num: v.numer().to_string(),
                den: v.denom().to_string(),
            })
            .collect();
        let checksum = table_checksum(self.lmax, &entries);
        TableFile {
            format: TABLE_FORMAT.to_string(),
            version: TABLE_VERSION,
            lmax: self.lmax,
            entries,
            checksum,
        }
    }

    pub fn from_file(file: TableFile) -> Result<Self> {
        if file.format != TABLE_FORMAT {
            return Err(Error::Parse(format!("unexpected format tag `{}`", file.format)));
        }
        if file.version != TABLE_VERSION {
            return Err(Error::Version {
                what: "Poisson table",
                found: file.version,
            });
        }
        let found = table_checksum(file.lmax, &file.entries);
        if found != file.checksum {
            return Err(Error::Checksum {
                what: "Poisson table",
                expected: file.checksum,
                found,
            });
        }
        let mut entries: BTreeMap<Pair, Vec<(HarmonicIndex, BigRational)>> = BTreeMap::new();
        for e in &file.entries {
            let v = parse_rational(&format!("{}/{}", e.num, e.den))?;
            let idx = |l: u32, m: i32| {
                if m.unsigned_abs() > l || l > file.lmax {
                    Err(Error::Parse(format!("bad harmonic index ({l},{m})")))
                } else {
                    Ok(HarmonicIndex { l, m })
                }
            };
            entries
                .entry((idx(e.l1, e.m1)?, idx(e.l2, e.m2)?))
                .or_default()
                .push((idx(e.l3, e.m3)?, v));
        }
        Ok(Self {
            lmax: file.lmax,
            entries,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(s)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub l1: u32,
    pub m1: i32,
    pub l2: u32,
    pub m2: i32,
    pub l3: u32,
    pub m3: i32,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub format: String,
    pub version: u32,
    pub lmax: u32,
    pub entries: Vec<TableEntry>,
    pub checksum: String,
}

fn table_checksum(lmax: u32, entries: &[TableEntry]) -> String {
    let mut h = Sha256::new();
    h.update(format!("{TABLE_FORMAT}/{TABLE_VERSION}/{lmax}\n"));
    for e in entries {
        h.update(format!(
            "{} {} {} {} {} {} {}/{}\n",
            e.l1, e.m1, e.l2, e.m2, e.l3, e.m3, e.num, e.den
        ));
    }
    hex::encode(h.finalize())
}

/// Convenience: bracket two sphere polynomials through the table.
pub fn table_bracket(
    table: &PoissonTable,
    f: &super::poly::SpherePoly,
    g: &super::poly::SpherePoly,
) -> Result<super::poly::SpherePoly> {
    let basis = HarmonicBasis::get(table.lmax);
    let out = table.bracket(&basis.decompose(f)?, &basis.decompose(g)?)?;
    basis.recompose(&out)
}
