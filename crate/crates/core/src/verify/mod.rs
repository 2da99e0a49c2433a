//! The verification harness: seeded suites that check each identity on
//! random and constructed inputs and summarise the outcome in a
//! [`VerifyReport`].
//!
//! Every case draws from its own stream of the suite seed, so results do not
//! depend on the order or parallelism in which cases run. Reports list cases
//! in a fixed order.

mod suites;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub type PrecedesFn = fn(&Permutation, &Permutation) -> Result<bool>;

pub const MAX_K: usize = 4;
pub const MAX_N: usize = 6;
pub const DEFAULT_TRIALS: usize = 50;
/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SIGMA_TENSOR_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Transfer,
    TransferBlock,
    Dual,
    Norm,
    Assoc,
    PermCommute,
    Contract,
    Corollary32,
    Grad,
    Hess,
    All,
}

impl Suite {
    /// Every suite except `All`, in the order `All` runs them.
    pub const EACH: [Suite; 10] = [
        Suite::Transfer,
        Suite::TransferBlock,
        Suite::Dual,
        Suite::Norm,
        Suite::Assoc,
        Suite::PermCommute,
        Suite::Contract,
        Suite::Corollary32,
        Suite::Grad,
        Suite::Hess,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Transfer => "transfer",
            Suite::TransferBlock => "transfer-block",
            Suite::Dual => "dual",
            Suite::Norm => "norm",
            Suite::Assoc => "assoc",
            Suite::PermCommute => "perm-commute",
            Suite::Contract => "contract",
            Suite::Corollary32 => "corollary32",
            Suite::Grad => "grad",
            Suite::Hess => "hess",
            Suite::All => "all",
        }
    }

    pub fn from_name(name: &str) -> Result<Suite> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|s| s.name() == name)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::EACH.iter().map(|s| s.name()).chain(["all"]).collect();
                Error::Usage(format!("unknown suite '{name}', expected one of {}", names.join(", ")))
            })
    }

    /// `k` used when none is given, and by `All`.
    pub fn default_k(self) -> usize {
        match self {
            Suite::Contract => 2,
            _ => 3,
        }
    }

    /// `n` used when none is given, and by `All`.
    pub fn default_n(self) -> usize {
        match self {
            Suite::Transfer | Suite::Corollary32 => 3,
            _ => 4,
        }
    }

    fn tag(self) -> u64 {
        Suite::EACH.iter().position(|&s| s == self).map_or(99, |p| p as u64 + 1)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub k: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Record `elapsed_ms` in the report (which makes it non-reproducible).
    pub timing: bool,
    /// The refinement test the transfer suites compare against.
    pub precedes: PrecedesFn,
}

impl VerifyConfig {
    pub fn new(k: usize, n: usize, trials: usize, seed: u64) -> Self {
        VerifyConfig {
            k,
            n,
            trials,
            seed,
            timing: false,
            precedes: crate::perm::precedes,
        }
    }

    pub fn for_suite(suite: Suite, trials: usize, seed: u64) -> Self {
        Self::new(suite.default_k(), suite.default_n(), trials, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub cases_run: u64,
    pub cases_failed: u64,
    /// Largest error over the cases expected to agree.
    pub max_error: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<VerifyReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cases_failed == 0
    }
}

/// One checked instance of an identity.
#[derive(Debug, Clone)]
pub(crate) struct Case {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
    pub passed: bool,
    /// Whether `error` enters `max_error`.
    pub tracked: bool,
}

impl Case {
    /// A case that passes iff `error <= tol`.
    pub fn within(label: String, lhs: f64, rhs: f64, error: f64, tol: f64) -> Case {
        Case {
            label,
            lhs,
            rhs,
            error,
            passed: error <= tol,
            tracked: true,
        }
    }

    pub fn errored(label: String, err: &Error) -> Case {
        Case {
            label: format!("{label}: {err}"),
            lhs: f64::NAN,
            rhs: f64::NAN,
            error: f64::NAN,
            passed: false,
            tracked: false,
        }
    }
}

fn summarise(suite: &str, seed: u64, cases: Vec<Case>) -> VerifyReport {
    let cases_run = cases.len() as u64;
    let max_error = cases
        .iter()
        .filter(|c| c.tracked && !c.error.is_nan())
        .fold(0.0_f64, |m, c| m.max(c.error));
    let failures: Vec<Failure> = cases
        .into_iter()
        .filter(|c| !c.passed)
        .map(|c| Failure {
            case: c.label,
            lhs: c.lhs,
            rhs: c.rhs,
            error: c.error,
        })
        .collect();
    VerifyReport {
        suite: suite.to_string(),
        cases_run,
        cases_failed: failures.len() as u64,
        max_error,
        seed,
        elapsed_ms: None,
        failures,
        suites: Vec::new(),
    }
}

fn check_limits(suite: Suite, cfg: &VerifyConfig) -> Result<()> {
    if cfg.trials == 0 {
        return Err(Error::Usage("--trials must be at least 1".into()));
    }
    if suite == Suite::All {
        return Ok(());
    }
    if !(1..=MAX_K).contains(&cfg.k) {
        return Err(Error::Capacity {
            what: "k",
            value: cfg.k,
            min: 1,
            max: MAX_K,
        });
    }
    let min_n = match suite {
        Suite::Transfer | Suite::TransferBlock => 2,
        _ => 1,
    };
    if !(min_n..=MAX_N).contains(&cfg.n) {
        return Err(Error::Capacity {
            what: "n",
            value: cfg.n,
            min: min_n,
            max: MAX_N,
        });
    }
    Ok(())
}

/// Runs `count` jobs in parallel and concatenates their cases in job order.
pub(crate) fn run_jobs(count: usize, job: impl Fn(usize) -> Vec<Case> + Sync + Send) -> Vec<Case> {
    (0..count).into_par_iter().map(job).collect::<Vec<_>>().into_iter().flatten().collect()
}

/// Runs one suite (or all of them) and builds the report.
pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<VerifyReport> {
    check_limits(suite, cfg)?;
    let start = Instant::now();
    let mut report = if suite == Suite::All {
        let subs = Suite::EACH
            .into_iter()
            .map(|s| {
                let sub = VerifyConfig {
                    k: s.default_k(),
                    n: s.default_n(),
                    timing: false,
                    ..*cfg
                };
                let cases = if s == Suite::Dual {
                    suites::dual_sweep(&sub)
                } else {
                    suites::cases(s, &sub)?
                };
                Ok(summarise(s.name(), cfg.seed, cases))
            })
            .collect::<Result<Vec<_>>>()?;
        combine(cfg.seed, subs)
    } else {
        summarise(suite.name(), cfg.seed, suites::cases(suite, cfg)?)
    };
    if cfg.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn combine(seed: u64, subs: Vec<VerifyReport>) -> VerifyReport {
    let failures = subs
        .iter()
        .flat_map(|s| {
            s.failures.iter().map(|f| Failure {
                case: format!("{}: {}", s.suite, f.case),
                ..f.clone()
            })
        })
        .collect::<Vec<_>>();
    VerifyReport {
        suite: "all".into(),
        cases_run: subs.iter().map(|s| s.cases_run).sum(),
        cases_failed: failures.len() as u64,
        max_error: subs.iter().fold(0.0, |m, s| m.max(s.max_error)),
        seed,
        elapsed_ms: None,
        failures,
        suites: subs,
    }
}

/// Runs `f` on a pool capped by `SIGMA_TENSOR_THREADS` when it is set to a
/// positive integer, otherwise on the global pool.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(f());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Usage(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(f))
}
