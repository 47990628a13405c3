use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fuzzyloop_core::cocycles::{limit_sweep, sweep_slope, SweepOptions};
use fuzzyloop_core::quantize::SymbolCache;
use fuzzyloop_core::report::fmt_f64;
use fuzzyloop_core::suite::{run_criterion, ReportEntry, Status, CRITERIA};
use fuzzyloop_core::{ConvergenceRecord, Normalization, PoissonTable};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const CACHE_ENV: &str = "FUZZYLOOP_CACHE_DIR";

fn cache_dir(cfg: &RunConfig) -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| cfg.out.join("cache"))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn tables(cfg: &RunConfig) -> Result<()> {
    let table = PoissonTable::build(cfg.lmax);
    let violations = table.jacobi_violations();
    if violations > 0 {
        bail!("Poisson table for lmax {} fails Jacobi on {violations} triples", cfg.lmax);
    }
    let path = cfg.out.join(format!("poisson_table_l{}.json", cfg.lmax));
    write(&path, &table.to_json()?)?;
    println!("jacobi: pass ({} structure constants, lmax {})", table.len(), cfg.lmax);
    println!("wrote {}", path.display());

    let dir = cache_dir(cfg);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    for &k in cfg.k_list.iter().filter(|&&k| k <= cfg.exact_k_max) {
        let path = dir.join(format!("symbols_k{k}_l{}.json", cfg.lmax));
        if path.exists() {
            SymbolCache::<BigRational>::read(&path).with_context(|| format!("cache {}", path.display()))?;
            println!("cache ok {}", path.display());
        } else {
            SymbolCache::<BigRational>::build(k, cfg.lmax)?.write(&path)?;
            println!("wrote {}", path.display());
        }
    }
    let skipped: Vec<u32> = cfg.k_list.iter().copied().filter(|&k| k > cfg.exact_k_max).collect();
    if !skipped.is_empty() {
        println!("no exact caches above exact_k_max {}: {skipped:?}", cfg.exact_k_max);
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub entries: Vec<ReportEntry>,
    pub failed: Vec<u32>,
}

pub fn render_report(entries: &[ReportEntry]) -> String {
    let mut s = String::new();
    for e in entries {
        writeln!(s, "{}", e.line()).unwrap();
        writeln!(s, "     {}", e.anchor).unwrap();
        for n in &e.notes {
            writeln!(s, "     - {n}").unwrap();
        }
    }
    let count = |st: Status| entries.iter().filter(|e| e.status == st).count();
    writeln!(
        s,
        "{} pass, {} warn, {} fail, {} skipped",
        count(Status::Pass),
        count(Status::Warn),
        count(Status::Fail),
        count(Status::Skipped)
    )
    .unwrap();
    s
}

/// Runs the suite, writes report.json and report.txt; returns whether every
/// non-warn entry passed.
pub fn verify(cfg: &RunConfig) -> Result<bool> {
    let suite = cfg.suite()?;
    let mut entries = Vec::new();
    for id in CRITERIA {
        let e = run_criterion(id, &suite).with_context(|| format!("criterion {id}"))?;
        println!("{}", e.line());
        entries.push(e);
    }
    let failed: Vec<u32> = entries.iter().filter(|e| e.status == Status::Fail).map(|e| e.id).collect();
    let report = VerifyReport { entries, failed };
    write(&cfg.out.join("report.json"), &serde_json::to_string_pretty(&report)?)?;
    write(&cfg.out.join("report.txt"), &render_report(&report.entries))?;
    Ok(report.failed.is_empty())
}

pub fn sweep_csv(records: &[ConvergenceRecord]) -> String {
    let mut s = String::from("k,normalization,value,limit,deviation,seconds\n");
    for r in records {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            r.k,
            r.normalization,
            fmt_f64(r.value),
            fmt_f64(r.limit),
            fmt_f64(r.deviation),
            r.seconds.map(fmt_f64).unwrap_or_default()
        )
        .unwrap();
    }
    s
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepSummary {
    pub twist: String,
    pub k_list: Vec<u32>,
    pub limit: String,
    /// Fitted log-log slope of the deviation per normalization; absent when
    /// every deviation is zero.
    pub slopes: BTreeMap<String, Option<String>>,
}

pub fn sweep(cfg: &RunConfig) -> Result<Vec<ConvergenceRecord>> {
    let (f, g) = cfg.loops.build(cfg.lmax, cfg.span)?;
    let opts = SweepOptions {
        exact_k_max: cfg.exact_k_max,
        timings: cfg.timings,
        ..SweepOptions::default()
    };
    let records = limit_sweep(&f, &g, &cfg.k_list, &opts)?;
    write(&cfg.out.join("sweep.csv"), &sweep_csv(&records))?;
    let summary = SweepSummary {
        twist: cfg.loops.twist.to_string(),
        k_list: cfg.k_list.clone(),
        limit: fmt_f64(records[0].limit),
        slopes: Normalization::ALL
            .iter()
            .map(|&n| (n.to_string(), sweep_slope(&records, n).map(fmt_f64)))
            .collect(),
    };
    write(&cfg.out.join("sweep.json"), &serde_json::to_string_pretty(&summary)?)?;
    for (n, s) in &summary.slopes {
        println!("{n}: slope {}", s.as_deref().unwrap_or("n/a (zero deviation)"));
    }
    Ok(records)
}

/// Text rendering of whatever artifacts exist in the output directory.
pub fn report(cfg: &RunConfig) -> Result<String> {
    let mut s = String::new();
    let verify_path = cfg.out.join("report.json");
    let sweep_path = cfg.out.join("sweep.json");
    if verify_path.exists() {
        let r: VerifyReport = serde_json::from_str(&fs::read_to_string(&verify_path)?)
            .with_context(|| format!("parsing {}", verify_path.display()))?;
        s.push_str(&render_report(&r.entries));
    }
    if sweep_path.exists() {
        let r: SweepSummary = serde_json::from_str(&fs::read_to_string(&sweep_path)?)
            .with_context(|| format!("parsing {}", sweep_path.display()))?;
        writeln!(s, "sweep ({}) over k = {:?}, limit {}", r.twist, r.k_list, r.limit)?;
        for (n, v) in &r.slopes {
            writeln!(s, "  {n}: slope {}", v.as_deref().unwrap_or("n/a"))?;
        }
    }
    if s.is_empty() {
        bail!("no report.json or sweep.json in {}", cfg.out.display());
    }
    Ok(s)
}
