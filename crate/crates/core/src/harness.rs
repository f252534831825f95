//! Experiments and the verification report behind the `ytensor` tool.
//!
//! Every randomized experiment draws trial `k` from stream `k` of the run
//! seed (see [`crate::rsk::trial_rng`]) and folds results in trial order, so
//! output is identical for any number of worker threads.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::diagrams::{Partition, PiecewiseLinear, Profile};
use crate::error::{Error, Result};
use crate::exact::{
    dim_sym, enumerate_diagrams, enumeration_csv, factorial, ln_biguint, neg_log_measure_scaled,
    partition_counts, plancherel, schur_weyl_measure, schur_weyl_via_plancherel, ExactDims,
};
use crate::functionals::{
    alpha_constant, alpha_zero, beta_constant, check_hypotheses, default_window, lemma_a, lemma_f3,
    lemma_i, lemma_int_i_omega, m_closed, m_value, prop31_decompose, prop41_identity_perturbed,
    rho_hat, rho_piecewise, sobolev_half_sq, theta_hat, theta_piecewise, Curve, Deviation,
    QuadratureConfig, SobolevRoute,
};
use crate::quadrature::integrate_breaks;
use crate::rsk::{chi_square_gof, sample_schur_weyl, sample_schur_weyl_one, trial_rng};
use crate::shape::ShapeParam;

/// Largest `n` accepted by exhaustive enumeration.
pub const ENUMERATION_CAP: usize = 40;
/// Largest `n` accepted by the samplers.
pub const SAMPLING_CAP: usize = 1_000_000;
/// `N / √n` used as a stand-in for `c = 0`.
const C_ZERO_PROXY: f64 = 50.0;

/// Parameters shared by the sampling experiments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n: Option<usize>,
    pub big_n: Option<usize>,
    pub c: Option<f64>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub out: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: None,
            big_n: None,
            c: None,
            samples: 100,
            seed: 1,
            tol: 1e-9,
            out: None,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value {value:?} for {key}")))
}

impl ExperimentConfig {
    /// Sets one `key = value` pair; keys are `n`, `N`, `c`, `samples`,
    /// `seed`, `tol` and `out`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "n" => self.n = Some(parse_value(key, value)?),
            "N" => self.big_n = Some(parse_value(key, value)?),
            "c" => self.c = Some(parse_value(key, value)?),
            "samples" => self.samples = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "tol" => self.tol = parse_value(key, value)?,
            "out" => self.out = Some(value.trim().to_string()),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Flat `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config("tol must be positive".into()));
        }
        match (self.big_n, self.c) {
            (Some(_), Some(_)) => Err(Error::Config("give N or c, not both".into())),
            (None, None) => Err(Error::Config("give N or c".into())),
            _ => Ok(()),
        }
    }

    pub fn regime(&self) -> Result<Regime> {
        self.validate()?;
        let n = self
            .n
            .ok_or_else(|| Error::Config("n is required".into()))?;
        match (self.big_n, self.c) {
            (Some(big_n), None) => Regime::new(n, big_n),
            (None, Some(c)) => Regime::from_ratio(n, c),
            _ => unreachable!(),
        }
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            abs_tol: self.tol,
            rel_tol: self.tol,
            ..QuadratureConfig::default()
        }
    }
}

/// A concrete `(n, N)` with its realized `c_n = √n / N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regime {
    pub n: usize,
    pub big_n: usize,
    pub c: f64,
}

impl Regime {
    pub fn new(n: usize, big_n: usize) -> Result<Self> {
        if n == 0 || big_n == 0 {
            return Err(Error::Config("n and N must be positive".into()));
        }
        Ok(Regime {
            n,
            big_n,
            c: ShapeParam::from_dims(n, big_n)?.c(),
        })
    }

    /// `N = round(√n / c)`; `c = 0` is approximated by `N = round(50 √n)`.
    pub fn from_ratio(n: usize, c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Config(format!(
                "c must be finite and non-negative, got {c}"
            )));
        }
        let root = (n as f64).sqrt();
        let big_n = if c == 0.0 {
            C_ZERO_PROXY * root
        } else {
            root / c
        };
        Regime::new(n, (big_n.round() as usize).max(1))
    }

    pub fn shape(&self) -> ShapeParam {
        ShapeParam::new(self.c).expect("realized ratio is finite")
    }
}

/// One trial of a sampling experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub trial: usize,
    pub n: usize,
    pub big_n: usize,
    pub shape: String,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    pub mean: f64,
    /// Standard error of the mean; 0 for a single value.
    pub stderr: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("cannot summarise zero values".into()));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let count = sorted.len();
        let median = if count % 2 == 1 {
            sorted[count / 2]
        } else {
            0.5 * (sorted[count / 2 - 1] + sorted[count / 2])
        };
        let mean = values.iter().sum::<f64>() / count as f64;
        let stderr = if count > 1 {
            let var =
                values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64;
            (var / count as f64).sqrt()
        } else {
            0.0
        };
        Ok(Summary {
            count,
            min: sorted[0],
            max: sorted[count - 1],
            median,
            mean,
            stderr,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub regime: Regime,
    pub seed: u64,
    pub records: Vec<Record>,
    pub summary: Summary,
    /// Values must lie strictly between these, when given.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub inside: usize,
    pub pass: bool,
}

impl ExperimentResult {
    fn new(
        experiment: &str,
        regime: Regime,
        seed: u64,
        records: Vec<Record>,
        lower: Option<f64>,
        upper: Option<f64>,
    ) -> Result<Self> {
        let values: Vec<f64> = records.iter().map(|r| r.value).collect();
        let summary = Summary::of(&values)?;
        let inside = values
            .iter()
            .filter(|&&v| lower.is_none_or(|lo| v > lo) && upper.is_none_or(|hi| v < hi))
            .count();
        Ok(ExperimentResult {
            experiment: experiment.to_string(),
            regime,
            seed,
            pass: inside == values.len(),
            records,
            summary,
            lower,
            upper,
            inside,
        })
    }

    /// Records as CSV followed by `# key=value` summary lines. Floats use
    /// the shortest representation that reads back exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,n,N,shape,value\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},\"{}\",{}",
                r.trial, r.n, r.big_n, r.shape, r.value
            );
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "# experiment={} c={} seed={} count={} min={} max={} median={} mean={} stderr={} inside={} pass={}",
            self.experiment, self.regime.c, self.seed, s.count, s.min, s.max, s.median, s.mean, s.stderr, self.inside, self.pass
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises")
    }
}

/// Records from the CSV written by [`ExperimentResult::to_csv`].
pub fn records_from_csv(text: &str) -> Result<Vec<Record>> {
    let bad = |l: &str| Error::Config(format!("bad record line {l:?}"));
    let mut out = Vec::new();
    for line in text.lines().skip(1) {
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(",\"").ok_or_else(|| bad(line))?;
        let (shape, value) = rest.rsplit_once("\",").ok_or_else(|| bad(line))?;
        let mut h = head.split(',');
        let mut next = || h.next().ok_or_else(|| bad(line));
        let trial = parse_value("trial", next()?)?;
        let n = parse_value("n", next()?)?;
        let big_n = parse_value("N", next()?)?;
        out.push(Record {
            trial,
            n,
            big_n,
            shape: shape.to_string(),
            value: parse_value("value", value)?,
        });
    }
    Ok(out)
}

/// Summary fields from the trailing comment of [`ExperimentResult::to_csv`].
pub fn summary_from_csv(text: &str) -> Result<BTreeMap<String, String>> {
    let line = text
        .lines()
        .rev()
        .find(|l| l.starts_with("# "))
        .ok_or_else(|| Error::Config("no summary line".into()))?;
    Ok(line[2..]
        .split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}

fn check_sampling(n: usize) -> Result<()> {
    if n > SAMPLING_CAP {
        return Err(Error::Limit(format!(
            "n = {n} exceeds the sampling cap {SAMPLING_CAP}"
        )));
    }
    Ok(())
}

/// Exact dimensions and measures of one diagram.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimsReport {
    pub partition: String,
    pub n: usize,
    pub big_n: usize,
    pub dim_sym: String,
    pub dim_gl: String,
    pub dim_iso: String,
    pub plancherel: String,
    pub schur_weyl: String,
    pub schur_weyl_f64: f64,
}

pub fn cmd_dims(lambda: &Partition, big_n: usize) -> Result<DimsReport> {
    if big_n == 0 {
        return Err(Error::Config("N must be positive".into()));
    }
    let d = ExactDims::new(lambda, big_n);
    let sw = schur_weyl_measure(lambda, big_n);
    Ok(DimsReport {
        partition: lambda.to_string(),
        n: lambda.n(),
        big_n,
        dim_sym: d.dim_sym.to_string(),
        dim_gl: d.dim_gl.to_string(),
        dim_iso: d.dim_iso.to_string(),
        plancherel: plancherel(lambda).value.to_string(),
        schur_weyl: sw.value.to_string(),
        schur_weyl_f64: sw.to_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationReport {
    pub n: usize,
    pub big_n: usize,
    pub count: usize,
    pub total: String,
    pub expected: String,
    pub pass: bool,
    #[serde(skip)]
    pub csv: String,
}

/// Every diagram in `Y_N^n` with its exact measure, and the check
/// `Σ dim E_λ = N^n`.
pub fn cmd_enumerate(n: usize, big_n: usize) -> Result<EnumerationReport> {
    if n > ENUMERATION_CAP {
        return Err(Error::Limit(format!(
            "n = {n} exceeds the enumeration cap {ENUMERATION_CAP}"
        )));
    }
    if big_n == 0 {
        return Err(Error::Config("N must be positive".into()));
    }
    let (csv, total) = enumeration_csv(n, big_n);
    let expected = BigUint::from(big_n).pow(n as u32);
    Ok(EnumerationReport {
        n,
        big_n,
        count: csv.lines().count() - 1,
        pass: total == expected,
        total: total.to_string(),
        expected: expected.to_string(),
        csv,
    })
}

/// `-ln P_N^n(λ) / √n` for sampled `λ`, against the window
/// `(α_c - slack, β)`.
pub fn cmd_bounds(cfg: &ExperimentConfig, slack: f64) -> Result<ExperimentResult> {
    let regime = cfg.regime()?;
    check_sampling(regime.n)?;
    let shapes = sample_schur_weyl(regime.n, regime.big_n, cfg.seed, cfg.samples)?;
    let records = shapes
        .par_iter()
        .enumerate()
        .map(|(k, lambda)| {
            let v = neg_log_measure_scaled(lambda, regime.big_n, 30)?.to_f64();
            Ok(Record {
                trial: k,
                n: regime.n,
                big_n: regime.big_n,
                shape: lambda.to_string(),
                value: v,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let alpha = alpha_constant(regime.shape(), &cfg.quadrature())?;
    ExperimentResult::new(
        "bounds",
        regime,
        cfg.seed,
        records,
        Some(alpha - slack),
        Some(beta_constant()),
    )
}

/// `sup_X |L(X) - Ω_c(X)|` over the corners of `L` and a grid of step
/// `10^-3` (with midpoints) over both supports.
pub fn sup_distance(profile: &Profile, c: ShapeParam) -> f64 {
    let (a0, b0) = profile.support();
    let (a1, b1) = c.support();
    let (lo, hi) = (a0.min(a1), b0.max(b1));
    let mut best: f64 = 0.0;
    for (x, y) in profile.corners() {
        best = best.max((y - c.omega_c(x)).abs());
    }
    let steps = ((hi - lo) / 5e-4).ceil() as usize;
    for k in 0..=steps {
        let x = lo + (hi - lo) * k as f64 / steps as f64;
        best = best.max((profile.evaluate(x) - c.omega_c(x)).abs());
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BianeResult {
    pub runs: Vec<ExperimentResult>,
    pub medians: Vec<(usize, f64)>,
    pub decreasing: bool,
    /// Pinned bound on the median at the largest `n`.
    pub gate: Option<f64>,
    pub pass: bool,
}

/// Sup distance between sampled profiles and `Ω_c` along increasing `n`.
pub fn cmd_biane(
    ns: &[usize],
    c: f64,
    samples: usize,
    seed: u64,
    gate: Option<f64>,
) -> Result<BianeResult> {
    if ns.is_empty() || samples == 0 {
        return Err(Error::Config("need at least one n and one sample".into()));
    }
    let mut runs = Vec::with_capacity(ns.len());
    for &n in ns {
        check_sampling(n)?;
        let regime = Regime::from_ratio(n, c)?;
        let shape = regime.shape();
        let shapes = sample_schur_weyl(n, regime.big_n, seed, samples)?;
        let records = shapes
            .par_iter()
            .enumerate()
            .map(|(k, lambda)| {
                let profile = lambda.profile()?;
                Ok(Record {
                    trial: k,
                    n,
                    big_n: regime.big_n,
                    shape: lambda.to_string(),
                    value: sup_distance(&profile, shape),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        runs.push(ExperimentResult::new(
            "biane", regime, seed, records, None, None,
        )?);
    }
    let medians: Vec<(usize, f64)> = runs
        .iter()
        .map(|r| (r.regime.n, r.summary.median))
        .collect();
    let decreasing = medians.windows(2).all(|w| w[1].1 < w[0].1);
    let last = medians.last().unwrap().1;
    let pass = decreasing && gate.is_none_or(|g| last < g);
    Ok(BianeResult {
        runs,
        medians,
        decreasing,
        gate,
        pass,
    })
}

/// `c,alpha,beta` rows.
pub fn cmd_constants(cs: &[f64], quad: &QuadratureConfig) -> Result<String> {
    let mut out = String::from("c,alpha,beta\n");
    for &c in cs {
        let a = alpha_constant(ShapeParam::new(c)?, quad)?;
        let _ = writeln!(out, "{c},{a},{}", beta_constant());
    }
    Ok(out)
}

/// `s,omega_c` on a uniform grid over the support padded by 1/2.
pub fn shape_csv(c: ShapeParam, step: f64) -> Result<String> {
    if !(step > 0.0) {
        return Err(Error::Config("step must be positive".into()));
    }
    let (lo, hi) = c.support();
    let (lo, hi) = (lo - 0.5, hi + 0.5);
    let count = ((hi - lo) / step).round() as usize;
    let mut out = String::from("s,omega_c\n");
    for k in 0..=count {
        let s = lo + (hi - lo) * k as f64 / count as f64;
        let _ = writeln!(out, "{s},{}", c.omega_c(s));
    }
    Ok(out)
}

/// Shapes drawn from `P_N^n` conditioned on fewer than `N` rows, by
/// rejection over successive trial streams.
pub fn sample_strict(n: usize, big_n: usize, seed: u64, count: usize) -> Result<Vec<Partition>> {
    check_sampling(n)?;
    let mut out = Vec::with_capacity(count);
    let mut k = 0u64;
    while out.len() < count {
        let lambda = sample_schur_weyl_one(n, big_n, &mut trial_rng(seed, k));
        if lambda.height() < big_n {
            out.push(lambda);
        }
        k += 1;
        if k > 1000 * (count as u64 + 1) {
            return Err(Error::Limit(
                "rows < N is too rare at these parameters".into(),
            ));
        }
    }
    Ok(out)
}

/// How `lhs` is compared with `rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|lhs - rhs| ≤ tol`.
    Eq,
    /// `lhs ≥ rhs - tol`.
    Ge,
    /// `lhs < rhs`.
    Lt,
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub test: String,
    pub params: serde_json::Value,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(
        test: &str,
        params: serde_json::Value,
        relation: Relation,
        lhs: f64,
        rhs: f64,
        tol: f64,
    ) -> Self {
        let abs_err = (lhs - rhs).abs();
        let pass = match relation {
            Relation::Eq => abs_err <= tol,
            Relation::Ge => lhs >= rhs - tol,
            Relation::Lt => lhs < rhs,
        };
        Check {
            test: test.to_string(),
            params,
            relation,
            lhs,
            rhs,
            abs_err,
            tol,
            pass,
        }
    }

    /// An exact comparison reported through its `f64` images.
    fn exact(test: &str, params: serde_json::Value, equal: bool, lhs: f64, rhs: f64) -> Self {
        let mut c = Check::new(test, params, Relation::Eq, lhs, rhs, 0.0);
        c.abs_err = if equal {
            0.0
        } else {
            c.abs_err.max(f64::MIN_POSITIVE)
        };
        c.pass = equal;
        c
    }

    fn failed(test: &str, params: serde_json::Value, err: &Error) -> Self {
        let mut c = Check::new(test, params, Relation::Eq, f64::NAN, f64::NAN, 0.0);
        c.params["error"] = json!(err.to_string());
        c.pass = false;
        c
    }
}

/// Identities every verification run must exercise at least once.
pub const REQUIRED_COVERAGE: &[&str] = &[
    "dimension_sum",
    "plancherel_sum",
    "schur_weyl_via_plancherel",
    "partition_count",
    "partition_growth",
    "sampler_chi_square",
    "shape_area",
    "shape_derivatives",
    "m_at_one",
    "power_series",
    "hook_content_inequality",
    "residual_independence",
    "norm_identity",
    "identity_at_limit_shape",
    "gap_positivity",
    "h_term_sign",
    "sobolev_routes",
    "lemma_a",
    "lemma_i",
    "lemma_f3",
    "lemma_int_i_omega",
    "alpha_zero",
    "beta_value",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub quad: QuadratureConfig,
    pub c_grid: Vec<f64>,
    pub seed: u64,
    /// Added to `H_c'` in the norm identity; nonzero only to show that the
    /// check can fail.
    pub h_shift: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            quad: QuadratureConfig::default(),
            c_grid: vec![0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0],
            seed: 2024,
            h_shift: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Number of checks per required identity.
    pub coverage: BTreeMap<String, usize>,
    pub missing: Vec<String>,
    pub pass: bool,
}

type Suite<'a> = Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>;

/// Runs a suite body, turning an error into a failed check.
fn guarded(test: &'static str, body: impl Fn() -> Result<Vec<Check>>) -> Vec<Check> {
    body().unwrap_or_else(|e| vec![Check::failed(test, json!({}), &e)])
}

/// Runs every check; suites run in parallel and are reported in a fixed
/// order.
pub fn cmd_verify_all(opts: &VerifyOptions) -> VerifyReport {
    let suites: Vec<Suite> = vec![
        Box::new(|| guarded("dimension_sum", || Ok(suite_sums()))),
        Box::new(|| guarded("partition_count", || Ok(suite_partition_counts()))),
        Box::new(|| guarded("sampler_chi_square", || suite_chi_square(opts.seed))),
        Box::new(|| guarded("shape_area", || suite_shape(&opts.quad))),
        Box::new(|| guarded("m_at_one", || suite_series())),
        Box::new(|| guarded("hook_content_inequality", || suite_hook_content())),
        Box::new(|| guarded("residual_independence", || suite_residual(opts))),
        Box::new(|| guarded("norm_identity", || suite_norm_identity(opts))),
        Box::new(|| guarded("lemma_a", || suite_lemmas(opts))),
        Box::new(|| guarded("alpha_zero", || suite_constants(opts))),
    ];
    let checks: Vec<Check> = suites.par_iter().map(|s| s()).collect::<Vec<_>>().concat();
    let mut coverage: BTreeMap<String, usize> = REQUIRED_COVERAGE
        .iter()
        .map(|&k| (k.to_string(), 0))
        .collect();
    for c in &checks {
        *coverage.entry(c.test.clone()).or_default() += 1;
    }
    let missing: Vec<String> = REQUIRED_COVERAGE
        .iter()
        .filter(|&&k| coverage[k] == 0)
        .map(|k| k.to_string())
        .collect();
    let pass = missing.is_empty() && checks.iter().all(|c| c.pass);
    VerifyReport {
        checks,
        coverage,
        missing,
        pass,
    }
}

fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

fn suite_sums() -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=8 {
        for big_n in 1..=5 {
            let total: BigUint = enumerate_diagrams(n, big_n)
                .map(|l| ExactDims::new(&l, big_n).dim_iso)
                .sum();
            let want = BigUint::from(big_n).pow(n as u32);
            out.push(Check::exact(
                "dimension_sum",
                json!({"n": n, "N": big_n}),
                total == want,
                big_to_f64(&total),
                big_to_f64(&want),
            ));
        }
    }
    for n in 1..=10 {
        let total: BigUint = enumerate_diagrams(n, n).map(|l| dim_sym(&l).pow(2)).sum();
        let want = factorial(n);
        out.push(Check::exact(
            "plancherel_sum",
            json!({"n": n}),
            total == want,
            big_to_f64(&total),
            big_to_f64(&want),
        ));
    }
    for (n, big_n) in [(6, 3), (8, 4), (9, 2)] {
        let all = enumerate_diagrams(n, big_n)
            .all(|l| schur_weyl_via_plancherel(&l, big_n) == schur_weyl_measure(&l, big_n).value);
        out.push(Check::exact(
            "schur_weyl_via_plancherel",
            json!({"n": n, "N": big_n}),
            all,
            1.0,
            1.0,
        ));
    }
    out
}

fn suite_partition_counts() -> Vec<Check> {
    let table = partition_counts(10_000);
    let mut out = vec![Check::exact(
        "partition_count",
        json!({"n": 100}),
        table[100] == BigUint::from(190_569_292u32),
        big_to_f64(&table[100]),
        190_569_292.0,
    )];
    let beta = beta_constant();
    let mut prev = 0.0;
    for n in [100usize, 1000, 10_000] {
        let r = ln_biguint(&table[n]) / (n as f64).sqrt();
        out.push(Check::new(
            "partition_growth",
            json!({"n": n, "previous": prev}),
            Relation::Lt,
            r,
            beta,
            0.0,
        ));
        out.push(Check::new(
            "partition_growth",
            json!({"n": n, "against": "previous"}),
            Relation::Ge,
            r,
            prev,
            0.0,
        ));
        prev = r;
    }
    out
}

fn suite_chi_square(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (k, (n, big_n)) in [(4usize, 2usize), (5, 3), (6, 3)].into_iter().enumerate() {
        let law: Vec<(Partition, f64)> = enumerate_diagrams(n, big_n)
            .map(|l| {
                let p = schur_weyl_measure(&l, big_n).to_f64();
                (l, p)
            })
            .collect();
        let samples = sample_schur_weyl(n, big_n, seed.wrapping_add(k as u64), 100_000)?;
        let g = chi_square_gof(&samples, &law)?;
        out.push(Check::new(
            "sampler_chi_square",
            json!({"n": n, "N": big_n, "statistic": g.statistic, "dof": g.dof}),
            Relation::Ge,
            g.p_value,
            1e-3,
            0.0,
        ));
    }
    Ok(out)
}

fn central_difference(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-5;
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn suite_shape(quad: &QuadratureConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for c in [0.0, 0.5, 1.0, 2.0] {
        let s = ShapeParam::new(c)?;
        let area = integrate_breaks(
            |x| s.omega_c(x) - x.abs(),
            -2.0,
            c / 2.0 + 2.0,
            &s.breakpoints(),
            quad,
        )?;
        out.push(Check::new(
            "shape_area",
            json!({"c": c}),
            Relation::Eq,
            area,
            0.5,
            1e-8,
        ));
    }
    for c in [0.5, 2.0] {
        let s = ShapeParam::new(c)?;
        let x = 0.3;
        out.push(Check::new(
            "shape_derivatives",
            json!({"c": c, "pair": "omega_c'", "s": x}),
            Relation::Eq,
            s.omega_c_prime(x),
            central_difference(|t| s.omega_c(t), x),
            1e-6,
        ));
        let z = 1.6;
        out.push(Check::new(
            "shape_derivatives",
            json!({"c": c, "pair": "H'", "z": z}),
            Relation::Eq,
            s.h_tilde_prime(z)?,
            central_difference(|t| s.h_tilde(t).unwrap_or(f64::NAN), z),
            1e-6,
        ));
        out.push(Check::new(
            "shape_derivatives",
            json!({"c": c, "pair": "H''", "z": z}),
            Relation::Eq,
            s.h_tilde_second(z)?,
            central_difference(|t| s.h_tilde_prime(t).unwrap_or(f64::NAN), z),
            1e-6,
        ));
        out.push(Check::new(
            "shape_derivatives",
            json!({"c": c, "pair": "J'", "z": z}),
            Relation::Eq,
            s.h_tilde(z)?,
            central_difference(|t| s.j_tilde(t).unwrap_or(f64::NAN), z),
            1e-6,
        ));
    }
    Ok(out)
}

fn suite_series() -> Result<Vec<Check>> {
    let edge = 3.0 - 4.0 * std::f64::consts::LN_2;
    let mut out = vec![Check::new(
        "m_at_one",
        json!({}),
        Relation::Eq,
        m_value(1.0)?,
        edge,
        1e-10,
    )];
    for z in [0.1f64, 0.3, 0.5] {
        let lhs =
            -3.0 + (1.0 + 1.0 / z).powi(2) * z.ln_1p() + (1.0 / z - 1.0).powi(2) * (-z).ln_1p();
        let rhs = -(1..=80)
            .map(|k| {
                let k = k as f64;
                z.powf(2.0 * k) / (k * (k + 1.0) * (2.0 * k + 1.0))
            })
            .sum::<f64>();
        out.push(Check::new(
            "power_series",
            json!({"z": z}),
            Relation::Eq,
            lhs,
            rhs,
            1e-10,
        ));
        out.push(Check::new(
            "power_series",
            json!({"z": z, "form": "closed"}),
            Relation::Eq,
            -m_closed(1.0 / z)?,
            rhs,
            1e-10,
        ));
    }
    Ok(out)
}

fn suite_hook_content() -> Result<Vec<Check>> {
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for n in 1..=10 {
        for big_n in 1..=6 {
            for l in enumerate_diagrams(n, big_n) {
                worst = worst.min(theta_hat(&l)? - rho_hat(&l, big_n)?);
                count += 1;
            }
        }
    }
    Ok(vec![Check::new(
        "hook_content_inequality",
        json!({"n_max": 10, "N_max": 6, "diagrams": count}),
        Relation::Ge,
        worst,
        0.0,
        0.0,
    )])
}

fn suite_residual(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let (n, big_n) = (400, 20);
    let samples = sample_schur_weyl(n, big_n, opts.seed, 8)?;
    let residuals = samples
        .par_iter()
        .map(|l| prop31_decompose(l, big_n, &opts.quad).map(|r| r.residual))
        .collect::<Result<Vec<f64>>>()?;
    let (lo, hi) = residuals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| {
            (a.min(r), b.max(r))
        });
    Ok(vec![Check::new(
        "residual_independence",
        json!({"n": n, "N": big_n, "diagrams": residuals.len()}),
        Relation::Eq,
        hi,
        lo,
        1e-6,
    )])
}

fn identity_check(
    test: &str,
    params: serde_json::Value,
    curve: &Curve,
    c: ShapeParam,
    opts: &VerifyOptions,
) -> Result<Vec<Check>> {
    let r = prop41_identity_perturbed(curve, c, opts.h_shift, &opts.quad)?;
    let mut out = vec![Check::new(
        test,
        params.clone(),
        Relation::Eq,
        r.lhs,
        r.rhs,
        1e-5,
    )];
    if test == "norm_identity" {
        out.push(Check::new(
            "gap_positivity",
            params.clone(),
            Relation::Ge,
            r.lhs,
            0.0,
            1e-9,
        ));
        out.push(Check::new(
            "h_term_sign",
            params.clone(),
            Relation::Ge,
            r.h_term,
            0.0,
            1e-9,
        ));
        out.push(Check::new(
            "sobolev_routes",
            params,
            Relation::Eq,
            r.sobolev_sq,
            r.sobolev_sq_quotient,
            1e-6,
        ));
    }
    Ok(out)
}

fn suite_norm_identity(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let (n, big_n) = (400, 25);
    let c = ShapeParam::from_dims(n, big_n)?;
    let samples = sample_strict(n, big_n, opts.seed, 4)?;
    let mut cases: Vec<(serde_json::Value, Curve, ShapeParam)> = samples
        .iter()
        .map(|l| {
            (
                json!({"n": n, "N": big_n, "shape": l.to_string()}),
                Curve::from(&l.profile().unwrap()),
                c,
            )
        })
        .collect();
    // long first rows leave part of L - Ω_c outside the bulk, where the
    // H-term lives
    for (rows, m) in [(vec![12usize, 2, 1, 1], 8usize), (vec![16], 2)] {
        let l = Partition::new(rows)?;
        let cm = ShapeParam::from_dims(l.n(), m)?;
        cases.push((
            json!({"n": l.n(), "N": m, "shape": l.to_string()}),
            Curve::from(&l.profile()?),
            cm,
        ));
    }
    let mut out = cases
        .par_iter()
        .map(|(p, curve, c)| identity_check("norm_identity", p.clone(), curve, *c, opts))
        .collect::<Result<Vec<_>>>()?
        .concat();
    for cv in [0.5, 2.0] {
        let s = ShapeParam::new(cv)?;
        let r = prop41_identity_perturbed(&Curve::Shape(s), s, opts.h_shift, &opts.quad)?;
        out.push(Check::new(
            "identity_at_limit_shape",
            json!({"c": cv, "side": "lhs"}),
            Relation::Eq,
            r.lhs,
            0.0,
            1e-6,
        ));
        out.push(Check::new(
            "identity_at_limit_shape",
            json!({"c": cv, "side": "rhs"}),
            Relation::Eq,
            r.rhs,
            0.0,
            1e-6,
        ));
    }
    Ok(out)
}

fn suite_lemmas(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let per_c = opts
        .c_grid
        .par_iter()
        .map(|&cv| -> Result<Vec<Check>> {
            let c = ShapeParam::new(cv)?;
            let quad = &opts.quad;
            let mut out = Vec::new();
            let (q, closed) = lemma_a(c, quad)?;
            out.push(Check::new(
                "lemma_a",
                json!({"c": cv}),
                Relation::Eq,
                q,
                closed,
                1e-6,
            ));
            let (a, b) = default_window(c);
            let pole = -0.5 / cv;
            let mut ss = vec![0.5 * cv, 0.5 * cv + 0.9, 0.5 * cv + 1.25];
            if pole < 0.5 * cv - 1.0 {
                ss.push(0.5 * (pole + 0.5 * cv - 1.0));
            }
            for s in ss {
                let (q, closed) = lemma_i(c, s, a, b, quad)?;
                out.push(Check::new(
                    "lemma_i",
                    json!({"c": cv, "s": s}),
                    Relation::Eq,
                    q,
                    closed,
                    1e-6,
                ));
            }
            for x in [0.0, 1.0, -c.alpha(), 1.7, -0.6] {
                let (q, closed) = lemma_f3(c, x, quad)?;
                out.push(Check::new(
                    "lemma_f3",
                    json!({"c": cv, "x": x}),
                    Relation::Eq,
                    q,
                    closed,
                    1e-6,
                ));
            }
            let (l, r) = lemma_int_i_omega(c, a, b, quad)?;
            out.push(Check::new(
                "lemma_int_i_omega",
                json!({"c": cv, "a": a, "b": b}),
                Relation::Eq,
                l,
                r,
                1e-6,
            ));
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_c.concat())
}

fn suite_constants(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let a0 = alpha_constant(ShapeParam::new(0.0)?, &opts.quad)?;
    let beta = beta_constant();
    let mut out = vec![
        Check::new(
            "alpha_zero",
            json!({"against": "2/pi - 4/pi^2"}),
            Relation::Eq,
            a0,
            alpha_zero(),
            1e-12,
        ),
        Check::new(
            "beta_value",
            json!({}),
            Relation::Eq,
            beta,
            2.0 * std::f64::consts::PI / 6f64.sqrt(),
            1e-12,
        ),
    ];
    for &c in &opts.c_grid {
        let a = alpha_constant(ShapeParam::new(c)?, &opts.quad)?;
        out.push(Check::new(
            "alpha_below_beta",
            json!({"c": c}),
            Relation::Lt,
            a,
            beta,
            0.0,
        ));
    }
    Ok(out)
}

/// `θ - ρ` for a lattice profile at its realized `c`; used by the
/// positivity experiments and by the benches.
pub fn deviation_gap(lambda: &Partition, big_n: usize) -> Result<f64> {
    let c = ShapeParam::from_dims(lambda.n(), big_n)?;
    let l: PiecewiseLinear = lambda.profile()?.to_piecewise();
    Ok(theta_piecewise(&l) - rho_piecewise(&l, c.c())?)
}

/// Both Sobolev routes for one diagram, when it satisfies the identity's
/// hypotheses.
pub fn sobolev_pair(
    lambda: &Partition,
    big_n: usize,
    quad: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let c = ShapeParam::from_dims(lambda.n(), big_n)?;
    let curve = Curve::from(&lambda.profile()?);
    check_hypotheses(&curve, c)?;
    let f = Deviation::new(curve, c);
    Ok((
        sobolev_half_sq(&f, SobolevRoute::LogKernel, quad)?,
        sobolev_half_sq(&f, SobolevRoute::DifferenceQuotient, quad)?,
    ))
}
