//! Enumeration of weight systems and the scan harness.
//!
//! A scan evaluates every candidate system (exhaustive enumeration or one
//! of the closed-form families), writes one JSON object per system to a
//! JSONL file and summarizes the conjecture verdicts. Output is sorted by
//! `(d, v)` and deduplicated by the canonical key `v1,...,vn:d` (weights
//! ascending), so it does not depend on the worker count; an interrupted
//! scan can be resumed from the partial file.

use crate::arith::gcd;
use crate::cyclo_algebra::Divisor;
use crate::error::{Error, Result};
use crate::families::{
    chain_data, cycle_weights, fermat, saito_family, saito_members, ChainSpec, CycleSpec,
};
use crate::monodromy::{elementary_sets_for_divisor, saito_check, ElementarySetsReport, SaitoReport, Verdict};
use crate::weight_systems::{
    check_conditions, d_mon_of, divisor_d, singleton_c1, spectrum, spectrum_divisor,
    ConditionReport, WeightSystem, SUBSET_LIMIT,
};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const DEFAULT_MU_MAX: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `D_{2^k q_1 + 1} ⊗ D_{2^k q_2 + 1}`, bounded by `mu_max` only.
    Saito,
    /// Cycle type in `n` variables, exponents `a_j ≤ d_max`.
    Cycle,
    /// Chain type in `n` variables, exponents `a_j ≤ d_max`.
    Chain,
    /// Fermat type in `n` variables, exponents `2 ≤ t_j ≤ d_max`.
    Fermat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Family(FamilyKind),
}

impl FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let fam = s.strip_prefix("family:").unwrap_or(s);
        Ok(match fam {
            "exhaustive" if fam == s => Self::Exhaustive,
            "saito" => Self::Family(FamilyKind::Saito),
            "cycle" => Self::Family(FamilyKind::Cycle),
            "chain" => Self::Family(FamilyKind::Chain),
            "fermat" => Self::Family(FamilyKind::Fermat),
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "unknown mode `{s}` (expected exhaustive, saito, cycle, chain or fermat)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub n: Option<usize>,
    pub d_max: Option<u64>,
    pub mu_max: u64,
    pub mode: ScanMode,
    /// Worker threads; 0 means the rayon default.
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub resume: bool,
    pub allow_exhaustive_n4: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            n: None,
            d_max: None,
            mu_max: DEFAULT_MU_MAX,
            mode: ScanMode::Exhaustive,
            jobs: 0,
            out: None,
            resume: false,
            allow_exhaustive_n4: false,
        }
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::InvalidConfig(format!("{key}: expected a boolean, got `{other}`"))),
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("{key}: expected a number, got `{}`", value.trim())))
}

/// Reads a flat `key = value` file; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("line {}: expected key=value, got `{line}`", i + 1))
        })?;
        out.push((k.trim().replace('-', "_"), v.trim().to_string()));
    }
    Ok(out)
}

impl ScanConfig {
    /// Sets one option by its key (`n`, `d_max`, `mu_max`, `mode`, `jobs`,
    /// `out`, `resume`, `allow_exhaustive_n4`; dashes are accepted).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.replace('-', "_").as_str() {
            "n" => self.n = Some(parse_num(key, value)?),
            "d_max" => self.d_max = Some(parse_num(key, value)?),
            "mu_max" => self.mu_max = parse_num(key, value)?,
            "mode" => self.mode = value.parse()?,
            "jobs" => self.jobs = parse_num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "resume" => self.resume = parse_bool(key, value)?,
            "allow_exhaustive_n4" => self.allow_exhaustive_n4 = parse_bool(key, value)?,
            other => return Err(Error::InvalidConfig(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (k, v) in parse_config_text(text)? {
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.mu_max < 1 {
            return bad("mu_max must be at least 1".into());
        }
        if let Some(d) = self.d_max {
            if d < 2 {
                return bad(format!("d_max must be at least 2, got {d}"));
            }
        }
        let needs_n_and_d = !matches!(self.mode, ScanMode::Family(FamilyKind::Saito));
        if needs_n_and_d {
            match self.n {
                None => return bad("n is required for this mode".into()),
                Some(0) => return bad("n must be at least 1".into()),
                Some(n) if n > SUBSET_LIMIT => {
                    return bad(format!("n = {n} exceeds the subset bound {SUBSET_LIMIT}"))
                }
                _ => {}
            }
            if self.d_max.is_none() {
                return bad("d_max is required for this mode".into());
            }
        } else if self.n.is_some_and(|n| n != 4) {
            return bad("the saito family has n = 4".into());
        }
        if self.mode == ScanMode::Exhaustive
            && self.n.is_some_and(|n| n > 3)
            && !self.allow_exhaustive_n4
        {
            return bad(
                "exhaustive scans with n >= 4 are long-running; pass allow_exhaustive_n4 to run them"
                    .into(),
            );
        }
        Ok(())
    }
}

/// Nondecreasing tuples `lo ≤ x_1 ≤ … ≤ x_n ≤ hi`, lexicographic.
fn sorted_tuples(n: usize, lo: u64, hi: u64, mut f: impl FnMut(&[u64])) {
    fn rec(buf: &mut Vec<u64>, n: usize, lo: u64, hi: u64, f: &mut dyn FnMut(&[u64])) {
        if buf.len() == n {
            f(buf);
            return;
        }
        for x in lo..=hi {
            buf.push(x);
            rec(buf, n, x, hi, f);
            buf.pop();
        }
    }
    if lo <= hi {
        rec(&mut Vec::with_capacity(n), n, lo, hi, &mut f);
    }
}

/// All tuples in `[lo, hi]^n`, lexicographic.
fn all_tuples(n: usize, lo: u64, hi: u64, mut f: impl FnMut(&[u64])) {
    fn rec(buf: &mut Vec<u64>, n: usize, lo: u64, hi: u64, f: &mut dyn FnMut(&[u64])) {
        if buf.len() == n {
            f(buf);
            return;
        }
        for x in lo..=hi {
            buf.push(x);
            rec(buf, n, lo, hi, f);
            buf.pop();
        }
    }
    if lo <= hi {
        rec(&mut Vec::with_capacity(n), n, lo, hi, &mut f);
    }
}

/// Reduced systems of degree `d` in `n` variables with sorted weights and
/// (C1). The single-variable clauses are tested before the full subset
/// enumeration.
pub fn exhaustive_for_degree(n: usize, d: u64) -> Vec<WeightSystem> {
    let mut out = Vec::new();
    sorted_tuples(n, 1, d - 1, |v| {
        if v.iter().fold(d, |g, &x| gcd(g, x)) != 1 {
            return;
        }
        let ws = WeightSystem::new(v.to_vec(), d).expect("0 < v < d");
        if singleton_c1(&ws) && check_conditions(&ws).expect("n within bound").c1 {
            out.push(ws);
        }
    });
    out
}

/// Enumerates candidates without the `μ` filter, sorted by `(d, v)` and
/// deduplicated. Family members are reduced and sorted.
pub fn enumerate_candidates(cfg: &ScanConfig) -> Result<Vec<WeightSystem>> {
    cfg.validate()?;
    let mut set: BTreeSet<(u64, Vec<u64>)> = BTreeSet::new();
    let mut add = |ws: WeightSystem| {
        let ws = ws.reduce().sorted();
        set.insert((ws.d(), ws.v().to_vec()));
    };
    match cfg.mode {
        ScanMode::Exhaustive => {
            let n = cfg.n.expect("validated");
            let d_max = cfg.d_max.expect("validated");
            let per_d: Vec<Vec<WeightSystem>> = (2..=d_max)
                .into_par_iter()
                .map(|d| exhaustive_for_degree(n, d))
                .collect();
            per_d.into_iter().flatten().for_each(&mut add);
        }
        ScanMode::Family(FamilyKind::Saito) => {
            for (k, q1, q2) in saito_members(cfg.mu_max) {
                add(saito_family(k, q1, q2)?);
            }
        }
        ScanMode::Family(kind) => {
            let n = cfg.n.expect("validated");
            let d_max = cfg.d_max.expect("validated");
            let mut err = None;
            match kind {
                FamilyKind::Cycle => all_tuples(n, 1, d_max, |a| {
                    if let Ok(spec) = CycleSpec::new(a.to_vec()) {
                        match cycle_weights(&spec) {
                            Ok(ws) => add(ws),
                            Err(e) => err = err.take().or(Some(e)),
                        }
                    }
                }),
                FamilyKind::Chain => all_tuples(n, 1, d_max, |a| {
                    let spec = ChainSpec::chain(a.to_vec()).expect("positive exponents");
                    match chain_data(&spec) {
                        Ok(data) => add(data.weights),
                        Err(e) => err = err.take().or(Some(e)),
                    }
                }),
                FamilyKind::Fermat => sorted_tuples(n, 2, d_max, |t| match fermat(t) {
                    Ok(ws) => add(ws),
                    Err(e) => err = err.take().or(Some(e)),
                }),
                FamilyKind::Saito => unreachable!(),
            }
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    Ok(set
        .into_iter()
        .map(|(d, v)| WeightSystem::new(v, d).expect("valid"))
        .collect())
}

/// The systems a scan will record: candidates with `μ ≤ mu_max`.
pub fn enumerate_weight_systems(cfg: &ScanConfig) -> Result<Vec<WeightSystem>> {
    let mu_max = BigRational::from_integer(cfg.mu_max.into());
    Ok(enumerate_candidates(cfg)?
        .into_iter()
        .filter(|ws| ws.milnor_product() <= mu_max)
        .collect())
}

fn rat_json(q: &BigRational) -> serde_json::Value {
    if q.is_integer() {
        if let Some(i) = q.to_integer().to_i64() {
            return i.into();
        }
    }
    q.to_string().into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentCount {
    pub alpha: String,
    pub count: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaitoRecord {
    #[serde(flatten)]
    pub report: SaitoReport,
    pub order_or_half_verdict: Verdict,
    pub order_verdict: Verdict,
}

/// One line of scan output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub ws: String,
    pub n: usize,
    pub d: u64,
    pub v: Vec<u64>,
    pub weights: Vec<String>,
    pub mu: serde_json::Value,
    pub d_w: u64,
    pub d_mon: Option<u64>,
    pub divisor: Divisor,
    pub divisor_text: String,
    pub lambda_text: String,
    /// Exponent histogram in ascending order; empty if `ρ` is not a
    /// polynomial.
    pub exponents: Vec<ExponentCount>,
    pub rho_nonnegative: Option<bool>,
    pub spectrum_match: Option<bool>,
    pub conditions: ConditionReport,
    pub elementary_sets: ElementarySetsReport,
    pub saito: Option<SaitoRecord>,
}

impl ScanRecord {
    /// Some elementary set fails condition (I), or no eigenvalue has
    /// order `d_w` or `d_w/2` although all weights are at most 1/2.
    pub fn is_counterexample(&self) -> bool {
        self.elementary_sets.verdict == Verdict::Fail
            || self
                .saito
                .as_ref()
                .is_some_and(|s| s.order_or_half_verdict == Verdict::Fail)
    }
}

/// Computes the full record of a system. The system is reduced and its
/// weights sorted first.
pub fn compute_record(ws: &WeightSystem) -> Result<ScanRecord> {
    let ws = ws.reduce().sorted();
    let conditions = check_conditions(&ws)?;
    let divisor = divisor_d(&ws);
    let d_mon = d_mon_of(&divisor).ok();
    let (exponents, rho_nonnegative, spectrum_match) = match spectrum(&ws) {
        Ok(spec) => {
            let hist = spec
                .sigma
                .iter()
                .map(|(a, c)| ExponentCount {
                    alpha: a.to_string(),
                    count: rat_json(&BigRational::from_integer(c.clone())),
                })
                .collect();
            let matches = spectrum_divisor(&spec).is_some_and(|sd| sd == divisor);
            (hist, Some(spec.is_nonnegative()), Some(matches))
        }
        Err(Error::RhoNotPolynomial { .. }) => (Vec::new(), None, None),
        Err(e) => return Err(e),
    };
    let elementary_sets = if conditions.c1 && d_mon.is_some() {
        elementary_sets_for_divisor(&divisor)?
    } else {
        ElementarySetsReport::not_applicable()
    };
    let saito = if d_mon.is_some() {
        let report = saito_check(&ws)?;
        Some(SaitoRecord {
            order_or_half_verdict: report.order_or_half_verdict(),
            order_verdict: report.order_verdict(),
            report,
        })
    } else {
        None
    };
    Ok(ScanRecord {
        ws: ws.to_string(),
        n: ws.n(),
        d: ws.d(),
        v: ws.v().to_vec(),
        weights: ws.normalize().iter().map(ToString::to_string).collect(),
        mu: rat_json(&ws.milnor_product()),
        d_w: ws.dw(),
        d_mon,
        divisor_text: divisor.to_string(),
        lambda_text: divisor.lambda_form(),
        divisor,
        exponents,
        rho_nonnegative,
        spectrum_match,
        conditions,
        elementary_sets,
        saito,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    /// Records in the final output (including resumed ones).
    pub records: usize,
    /// Records computed in this run.
    pub computed: usize,
    /// Candidates skipped because their key was already persisted.
    pub skipped: usize,
    pub elementary_pass: usize,
    pub elementary_fail: usize,
    pub elementary_not_applicable: usize,
    pub all_strong: usize,
    /// Systems with all weights at most 1/2 lacking orders `d_w`, `d_w/2`.
    pub order_or_half_fail: usize,
    /// The same failure with some weight above 1/2; not counted against
    /// the conjecture.
    pub order_or_half_fail_unscoped: usize,
    pub order_applicable: usize,
    pub order_fail: usize,
    /// Keys of records for which [`ScanRecord::is_counterexample`] holds.
    pub counterexamples: Vec<String>,
}

impl ScanSummary {
    fn absorb(&mut self, r: &ScanRecord) {
        self.computed += 1;
        match r.elementary_sets.verdict {
            Verdict::Pass => self.elementary_pass += 1,
            Verdict::Fail => self.elementary_fail += 1,
            Verdict::NotApplicable => self.elementary_not_applicable += 1,
        }
        if r.elementary_sets.verdict == Verdict::Pass && r.elementary_sets.all_strong {
            self.all_strong += 1;
        }
        if let Some(s) = &r.saito {
            match s.order_or_half_verdict {
                Verdict::Fail => self.order_or_half_fail += 1,
                Verdict::NotApplicable if !s.report.order_or_half => {
                    self.order_or_half_fail_unscoped += 1
                }
                _ => {}
            }
            if s.report.all_below_half {
                self.order_applicable += 1;
                if !s.report.order_present {
                    self.order_fail += 1;
                }
            }
        }
        if r.is_counterexample() {
            self.counterexamples.push(r.ws.clone());
        }
    }

    pub fn found_counterexample(&self) -> bool {
        !self.counterexamples.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub summary: ScanSummary,
    /// Records computed in this run, sorted by `(d, v)`.
    pub records: Vec<ScanRecord>,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// `(d, v, key)` of a persisted line, or `None` for a damaged line.
fn line_key(line: &str) -> Option<(u64, Vec<u64>, String)> {
    let value: serde_json::Value = serde_json::from_str(line).ok()?;
    let d = value.get("d")?.as_u64()?;
    let v = value
        .get("v")?
        .as_array()?
        .iter()
        .map(|x| x.as_u64())
        .collect::<Option<Vec<u64>>>()?;
    let key = value.get("ws")?.as_str()?.to_string();
    Some((d, v, key))
}

fn read_persisted(path: &Path) -> Result<BTreeMap<(u64, Vec<u64>), (String, String)>> {
    let mut out = BTreeMap::new();
    if !path.exists() {
        return Ok(out);
    }
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| io_err(path, e))?;
        if let Some((d, v, key)) = line_key(&line) {
            out.entry((d, v)).or_insert((key, line));
        }
    }
    Ok(out)
}

/// Runs a scan. With an output path, records are appended as they are
/// computed and the file is rewritten sorted and deduplicated at the end;
/// with `resume`, systems already present in the file are skipped.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanOutcome> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| run_scan_inner(cfg))
}

fn run_scan_inner(cfg: &ScanConfig) -> Result<ScanOutcome> {
    let candidates = enumerate_weight_systems(cfg)?;
    let persisted = match (&cfg.out, cfg.resume) {
        (Some(path), true) => {
            // drop a torn last line so appended records start on a fresh line
            if path.exists() {
                finalize(path)?;
            }
            read_persisted(path)?
        }
        _ => BTreeMap::new(),
    };
    let known: BTreeSet<&str> = persisted.values().map(|(k, _)| k.as_str()).collect();
    let todo: Vec<&WeightSystem> = candidates
        .iter()
        .filter(|ws| !known.contains(ws.canonical_key().as_str()))
        .collect();
    let mut summary = ScanSummary {
        skipped: candidates.len() - todo.len(),
        ..Default::default()
    };

    let mut writer = match &cfg.out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
            }
            let file = OpenOptions::new()
                .create(true)
                .append(cfg.resume)
                .write(true)
                .truncate(!cfg.resume)
                .open(path)
                .map_err(|e| io_err(path, e))?;
            Some((path.clone(), BufWriter::new(file)))
        }
        None => None,
    };

    let mut records = Vec::with_capacity(todo.len());
    let chunk = 256.max(4 * rayon::current_num_threads());
    for block in todo.chunks(chunk) {
        let computed: Vec<Result<ScanRecord>> =
            block.par_iter().map(|ws| compute_record(ws)).collect();
        for r in computed {
            let r = r?;
            if let Some((path, w)) = writer.as_mut() {
                let line = serde_json::to_string(&r).expect("records serialize");
                writeln!(w, "{line}").map_err(|e| io_err(path, e))?;
            }
            summary.absorb(&r);
            records.push(r);
        }
        if let Some((path, w)) = writer.as_mut() {
            w.flush().map_err(|e| io_err(path, e))?;
        }
    }
    drop(writer);

    summary.records = match &cfg.out {
        Some(path) => finalize(path)?,
        None => records.len(),
    };
    Ok(ScanOutcome { summary, records })
}

/// Rewrites the output sorted by `(d, v)` with one line per key, via a
/// temporary file and rename. Returns the number of records.
fn finalize(path: &Path) -> Result<usize> {
    let lines = read_persisted(path)?;
    let tmp = path.with_extension("jsonl.tmp");
    {
        let file = File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
        let mut w = BufWriter::new(file);
        for (_, line) in lines.values() {
            writeln!(w, "{line}").map_err(|e| io_err(&tmp, e))?;
        }
        w.flush().map_err(|e| io_err(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))?;
    Ok(lines.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let cfg = ScanConfig::from_config_text("n = 2\nd-max=12 # bound\nmode=exhaustive\n").unwrap();
        assert_eq!(cfg.n, Some(2));
        assert_eq!(cfg.d_max, Some(12));
        assert!(cfg.validate().is_ok());
        assert!(ScanConfig::from_config_text("bogus=1").is_err());
        assert!(ScanConfig::from_config_text("n").is_err());
        let mut cfg = ScanConfig::default();
        cfg.set("mode", "family:saito").unwrap();
        assert_eq!(cfg.mode, ScanMode::Family(FamilyKind::Saito));
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn exhaustive_n4_is_gated() {
        let mut cfg = ScanConfig {
            n: Some(4),
            d_max: Some(10),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        cfg.allow_exhaustive_n4 = true;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn one_variable_series() {
        let cfg = ScanConfig {
            n: Some(1),
            d_max: Some(10),
            ..Default::default()
        };
        let got: Vec<String> = enumerate_weight_systems(&cfg)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        let want: Vec<String> = (2..=10).map(|d| format!("1:{d}")).collect();
        assert_eq!(got, want);
    }
}
