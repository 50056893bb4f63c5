//! Seeded verification suites for the capacity inequalities and regression
//! targets, with CSV reporting.

pub mod sets;
mod suites;

pub use suites::{half_disk_complement, half_disk_hcap, slit_hcap};

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::capacity::CapacityError;
use crate::extremal::ExtremalError;
use crate::geometry::GeometryError;
use crate::potential::{derive_seed, PotentialError};
use crate::symmetrize::SymmetrizeError;
use suites::{run_case, CaseValues, Check};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Symmetrize(#[from] SymmetrizeError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Monotonicity,
    Choquet,
    Polarization,
    Composition,
    CrSymmetrization,
    Steiner,
    Marcus,
    Averaging,
    Schwarzian,
    Transport,
    HcapRegression,
    RelcapRegression,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Monotonicity,
        Suite::Choquet,
        Suite::Polarization,
        Suite::Composition,
        Suite::CrSymmetrization,
        Suite::Steiner,
        Suite::Marcus,
        Suite::Averaging,
        Suite::Schwarzian,
        Suite::Transport,
        Suite::HcapRegression,
        Suite::RelcapRegression,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Monotonicity => "monotonicity",
            Suite::Choquet => "choquet",
            Suite::Polarization => "polarization",
            Suite::Composition => "composition",
            Suite::CrSymmetrization => "cr-symmetrization",
            Suite::Steiner => "steiner",
            Suite::Marcus => "marcus",
            Suite::Averaging => "averaging",
            Suite::Schwarzian => "schwarzian",
            Suite::Transport => "transport",
            Suite::HcapRegression => "hcap-regression",
            Suite::RelcapRegression => "relcap-regression",
        }
    }

    /// Walks per rung (or per height) used when none is given.
    pub fn default_samples(self) -> u64 {
        match self {
            Suite::Monotonicity | Suite::Choquet | Suite::Polarization | Suite::Composition => 10_000,
            Suite::CrSymmetrization | Suite::Steiner | Suite::Marcus | Suite::Averaging => 10_000,
            Suite::Schwarzian => 50_000,
            Suite::Transport => 200_000,
            Suite::HcapRegression => 1_000_000,
            Suite::RelcapRegression => 1_000_000,
        }
    }

    /// Grid used for discretized sets: `(nx, ny)` for Cartesian suites,
    /// `(rings, sectors)` for polar ones.
    pub fn default_grid(self) -> (usize, usize) {
        match self {
            Suite::Polarization | Suite::Composition | Suite::Steiner => (48, 48),
            Suite::CrSymmetrization => (20, 64),
            Suite::Marcus | Suite::Averaging => (40, 128),
            _ => (0, 0),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub samples: u64,
    pub grid: (usize, usize),
    /// Standard-error multiplier `k` in the pass criteria.
    pub tolerance: f64,
}

impl SuiteConfig {
    pub fn new(suite: Suite, trials: usize, seed: u64) -> Self {
        SuiteConfig {
            suite,
            trials,
            seed,
            samples: suite.default_samples(),
            grid: suite.default_grid(),
            tolerance: 3.0,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if self.samples < 1000 {
            return Err(HarnessError::Config(format!("samples must be at least 1000, got {}", self.samples)));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(HarnessError::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// A pass where both sides agree, as expected for extremal sets.
    Equality,
    Flagged,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Equality => "equality",
            Status::Flagged => "flagged",
            Status::Fail => "fail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseRow {
    /// `suite-index-digest`, the digest hashing the case inputs.
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub stderr: f64,
    pub status: Status,
    /// Error text for cases whose computation failed.
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    /// Includes equality rows.
    pub pass: usize,
    pub equality: usize,
    pub flagged: usize,
    pub fail: usize,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: SuiteConfig,
    pub rows: Vec<CaseRow>,
    pub runtime: Duration,
}

impl Report {
    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for r in &self.rows {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Equality => {
                    s.pass += 1;
                    s.equality += 1;
                }
                Status::Flagged => s.flagged += 1,
                Status::Fail => s.fail += 1,
            }
        }
        s
    }
}

fn digest(text: &str) -> u32 {
    let mut h = DefaultHasher::new();
    text.hash(&mut h);
    (h.finish() >> 32) as u32
}

fn classify(v: &CaseValues, k: f64) -> (f64, Status) {
    let ks = k * v.stderr;
    match v.check {
        Check::Inequality => {
            // Identical sets on both sides give a difference that is zero up to rounding.
            let exact = v.diff.abs() <= 1e-12 * (v.lhs.abs() + v.rhs.abs()) && v.stderr <= 1e-12 * v.lhs.abs();
            let status = if exact {
                Status::Equality
            } else if v.diff >= 0.0 {
                Status::Pass
            } else if v.diff >= -ks {
                Status::Flagged
            } else {
                Status::Fail
            };
            (v.diff, status)
        }
        Check::Identity { rel } => {
            let slack = (rel * v.rhs.abs()).max(ks) - v.diff.abs();
            (slack, if slack >= 0.0 { Status::Pass } else { Status::Fail })
        }
        Check::Attained { rel } => {
            let status = if v.diff.abs() <= (rel * v.lhs.abs()).max(ks) {
                Status::Equality
            } else if v.diff >= 0.0 {
                Status::Pass
            } else {
                Status::Fail
            };
            (v.diff, status)
        }
    }
}

fn evaluate(config: &SuiteConfig, index: usize) -> CaseRow {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, 2 * index as u64));
    let walk_seed = derive_seed(config.seed, 2 * index as u64 + 1);
    match run_case(config, index, &mut rng, walk_seed) {
        Ok(v) => {
            let (slack, status) = classify(&v, config.tolerance);
            CaseRow {
                case: format!("{}-{:03}-{:08x}", config.suite, index, digest(&v.inputs)),
                lhs: v.lhs,
                rhs: v.rhs,
                slack,
                stderr: v.stderr,
                status,
                note: None,
            }
        }
        Err(e) => CaseRow {
            case: format!("{}-{:03}-error", config.suite, index),
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            stderr: f64::NAN,
            status: Status::Flagged,
            note: Some(e.to_string()),
        },
    }
}

/// Worker count from `RELCAP_THREADS`, if set to a positive integer.
pub fn thread_limit() -> Option<usize> {
    std::env::var("RELCAP_THREADS").ok()?.trim().parse().ok().filter(|n| *n > 0)
}

/// Runs every trial; rows come back in trial order whatever the schedule.
pub fn run_suite(config: &SuiteConfig) -> Result<Report, HarnessError> {
    config.validate()?;
    let start = Instant::now();
    let work = || (0..config.trials).into_par_iter().map(|i| evaluate(config, i)).collect::<Vec<_>>();
    let rows = match thread_limit() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(Report { config: config.clone(), rows, runtime: start.elapsed() })
}

/// Twelve significant digits, decimal exponent notation.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

pub const CSV_HEADER: &str = "case,lhs,rhs,slack,stderr,status";

pub fn write_csv<W: Write>(report: &Report, mut out: W) -> Result<(), HarnessError> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.case,
            format_number(r.lhs),
            format_number(r.rhs),
            format_number(r.slack),
            format_number(r.stderr),
            r.status
        )?;
    }
    Ok(())
}

pub fn emit_csv(report: &Report, path: &Path) -> Result<(), HarnessError> {
    let mut buf = Vec::new();
    write_csv(report, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}
