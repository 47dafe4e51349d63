//! Seeded Monte-Carlo harness.
//!
//! Trial `i` of a run draws everything it needs from its own
//! `ChaCha8Rng` seeded with [`derive_trial_seed`]`(master_seed, i)`, so a run
//! is reproducible bit for bit no matter how trials are spread over workers.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{self, BoundsInput};
use crate::collab::{self, DecodeOutcome, FailureReason};
use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::indep;
use crate::irs::{self, ErrorMode};
use crate::matrix::Matrix;
use crate::rs_code::RsSpec;

/// Weyl increment of SplitMix64 (`floor(2^64 / phi)`).
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `splitmix64(master + GOLDEN_GAMMA * (index + 1))`. For a fixed master seed
/// this is a bijection of the index, so trial seeds never collide.
pub fn derive_trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64(master_seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(trial_index.wrapping_add(1))))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Decoder {
    Collaborative,
    Incremental(usize),
    IndependentColumns,
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub spec: RsSpec,
    pub l: usize,
    pub mode: ErrorMode,
    pub trials: u64,
    pub master_seed: u64,
    pub decoder: Decoder,
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
}

impl SimConfig {
    pub fn new(spec: RsSpec, l: usize, mode: ErrorMode, trials: u64, master_seed: u64) -> SimConfig {
        SimConfig { spec, l, mode, trials, master_seed, decoder: Decoder::Collaborative, workers: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::SimConfig("trials must be at least 1".into()));
        }
        if self.l == 0 {
            return Err(Error::SimConfig("interleaving depth must be at least 1".into()));
        }
        self.mode.validate(self.spec.n(), self.l)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TrialOutcome {
    Success,
    DetectedFailure(FailureReason),
    /// The independent decoder gave up on at least one column.
    ColumnFailure,
    Miscorrection,
    /// A success that matches the transmitted word through a support other
    /// than the planted one.
    InvariantViolation,
}

#[derive(Clone, Debug, Default)]
pub struct SimStats {
    pub trials: u64,
    pub successes: u64,
    /// Indexed like [`FailureReason::ALL`].
    pub failures: [u64; 4],
    pub column_failures: u64,
    pub miscorrections: u64,
    pub invariant_violations: u64,
    /// Histogram of planted error weights.
    pub weights: Vec<u64>,
    pub wall_time: Duration,
}

impl PartialEq for SimStats {
    fn eq(&self, other: &SimStats) -> bool {
        self.trials == other.trials
            && self.successes == other.successes
            && self.failures == other.failures
            && self.column_failures == other.column_failures
            && self.miscorrections == other.miscorrections
            && self.invariant_violations == other.invariant_violations
            && self.weights == other.weights
    }
}

impl Eq for SimStats {}

fn reason_index(r: FailureReason) -> usize {
    FailureReason::ALL.iter().position(|&x| x == r).expect("listed reason")
}

impl SimStats {
    pub fn record(&mut self, weight: usize, outcome: TrialOutcome) {
        self.trials += 1;
        if self.weights.len() <= weight {
            self.weights.resize(weight + 1, 0);
        }
        self.weights[weight] += 1;
        match outcome {
            TrialOutcome::Success => self.successes += 1,
            TrialOutcome::DetectedFailure(r) => self.failures[reason_index(r)] += 1,
            TrialOutcome::ColumnFailure => self.column_failures += 1,
            TrialOutcome::Miscorrection => self.miscorrections += 1,
            TrialOutcome::InvariantViolation => self.invariant_violations += 1,
        }
    }

    pub fn merge(mut self, other: SimStats) -> SimStats {
        self.trials += other.trials;
        self.successes += other.successes;
        for (a, b) in self.failures.iter_mut().zip(other.failures) {
            *a += b;
        }
        self.column_failures += other.column_failures;
        self.miscorrections += other.miscorrections;
        self.invariant_violations += other.invariant_violations;
        if self.weights.len() < other.weights.len() {
            self.weights.resize(other.weights.len(), 0);
        }
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            *a += b;
        }
        self.wall_time = self.wall_time.max(other.wall_time);
        self
    }

    pub fn failures_by(&self, reason: FailureReason) -> u64 {
        self.failures[reason_index(reason)]
    }

    pub fn detected_failures(&self) -> u64 {
        self.failures.iter().sum::<u64>() + self.column_failures
    }

    pub fn non_successes(&self) -> u64 {
        self.trials - self.successes
    }

    pub fn non_success_rate(&self) -> f64 {
        self.non_successes() as f64 / self.trials as f64
    }

    pub fn failure_rate(&self) -> f64 {
        self.detected_failures() as f64 / self.trials as f64
    }

    pub fn miscorrection_rate(&self) -> f64 {
        self.miscorrections as f64 / self.trials as f64
    }

    /// 95 % Wilson interval of the non-success rate.
    pub fn non_success_ci(&self) -> (f64, f64) {
        wilson_interval(self.non_successes(), self.trials, Z95)
    }

    pub fn is_consistent(&self) -> bool {
        self.successes + self.detected_failures() + self.miscorrections + self.invariant_violations == self.trials
    }
}

/// Two-sided 95 % normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    if k == 0 {
        return (0.0, wilson_interval_raw(p, n, z).1);
    }
    if k as f64 == n {
        return (wilson_interval_raw(p, n, z).0, 1.0);
    }
    wilson_interval_raw(p, n, z)
}

fn wilson_interval_raw(p: f64, n: f64, z: f64) -> (f64, f64) {
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Number of error rows the decoder sees in the lifted layout, and their
/// rank: the planted rows plus, for cyclic and shortened codes, the dummy row
/// holding `p(0)` of every column (row 0 of `info`) when it is nonzero.
pub fn lifted_error_rank(spec: &RsSpec, info: &Matrix, pattern: &irs::ErrorPattern) -> (usize, usize) {
    let mut rows: Vec<Vec<FieldElement>> = (0..pattern.weight()).map(|i| pattern.rows().row(i).to_vec()).collect();
    if spec.dummy_position().is_some() && info.row(0).iter().any(|x| !x.is_zero()) {
        rows.push(info.row(0).to_vec());
    }
    if rows.is_empty() {
        return (0, 0);
    }
    let count = rows.len();
    (count, Matrix::from_rows(&rows).expect("rows share length l").rank(spec.field()))
}

/// Runs trial `index` of `config`, returning the planted weight and outcome.
pub fn run_trial(config: &SimConfig, index: u64) -> Result<(usize, TrialOutcome)> {
    let spec = &config.spec;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_trial_seed(config.master_seed, index));
    let q = spec.field().size() as u32;
    let info_data = (0..spec.k() * config.l).map(|_| FieldElement(rng.random_range(0..q) as u16)).collect();
    let info = Matrix::from_vec(spec.k(), config.l, info_data)?;
    let sent = irs::encode_irs(&info, spec)?;
    let pattern = irs::sample_error_pattern(spec.field(), spec.n(), config.l, config.mode, &mut rng)?;
    let received = irs::apply_errors(&sent, &pattern)?;
    let outcome = match config.decoder {
        Decoder::Collaborative | Decoder::Incremental(_) => {
            let out = match config.decoder {
                Decoder::Incremental(c) => collab::decode_incremental(&received, spec, c)?,
                _ => collab::decode(&received, spec)?,
            };
            match out {
                DecodeOutcome::DetectedFailure(r) => TrialOutcome::DetectedFailure(r),
                DecodeOutcome::Success(d) if d.word != sent => TrialOutcome::Miscorrection,
                DecodeOutcome::Success(d) if d.support != pattern.support() => TrialOutcome::InvariantViolation,
                DecodeOutcome::Success(_) => TrialOutcome::Success,
            }
        }
        Decoder::IndependentColumns => match indep::decode_word(&received, spec)? {
            None => TrialOutcome::ColumnFailure,
            Some(w) if w != sent => TrialOutcome::Miscorrection,
            Some(_) => TrialOutcome::Success,
        },
    };
    Ok((pattern.weight(), outcome))
}

pub fn run(config: &SimConfig) -> Result<SimStats> {
    config.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::SimConfig(format!("thread pool: {e}")))?;
    let mut stats = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .try_fold(SimStats::default, |mut acc, i| {
                let (w, o) = run_trial(config, i)?;
                acc.record(w, o);
                Ok::<_, Error>(acc)
            })
            .try_reduce(SimStats::default, |a, b| Ok(a.merge(b)))
    })?;
    stats.wall_time = start.elapsed();
    Ok(stats)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub p_i: f64,
    pub fer_sim: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub fer_bound: f64,
    pub fer_err_bound: f64,
    pub trials: u64,
}

/// One run per grid point with `BernoulliRows(p_i)` errors, paired with the
/// analytical bounds at the same `p_i`.
pub fn sweep(config: &SimConfig, grid: &[f64]) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|&p| {
            let point = SimConfig { mode: ErrorMode::BernoulliRows(p), ..config.clone() };
            let stats = run(&point)?;
            let input = BoundsInput::for_code(&config.spec, config.l, p)?;
            let (ci_lo, ci_hi) = stats.non_success_ci();
            Ok(SweepRow {
                p_i: p,
                fer_sim: stats.non_success_rate(),
                ci_lo,
                ci_hi,
                fer_bound: bounds::fer_bound(&input)?.value,
                fer_err_bound: bounds::fer_error_bound(&input)?.value,
                trials: stats.trials,
            })
        })
        .collect()
}

pub const SWEEP_HEADER: &str = "p_i,fer_sim,fer_ci_lo,fer_ci_hi,fer_bound,fer_err_bound,trials";
pub const BOUNDS_HEADER: &str = "p_i,fer_bound,fer_err_bound";

/// Formats like C's `%.6e`: `1.234500e-03`.
pub fn format_exp(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.6e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_exp(r.p_i),
            format_exp(r.fer_sim),
            format_exp(r.ci_lo),
            format_exp(r.ci_hi),
            format_exp(r.fer_bound),
            format_exp(r.fer_err_bound),
            r.trials
        );
    }
    out
}

/// CSV of the analytical curves only.
pub fn bounds_csv(base: &BoundsInput, grid: &[f64]) -> Result<String> {
    let mut out = String::from(BOUNDS_HEADER);
    out.push('\n');
    for &p in grid {
        let input = base.with_p(p);
        let fer = bounds::fer_bound(&input)?;
        let fe = bounds::fer_error_bound(&input)?;
        let _ = writeln!(out, "{},{},{}", format_exp(p), format_exp(fer.value), format_exp(fe.value));
    }
    Ok(out)
}
