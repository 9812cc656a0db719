// Copyright 2026 The ffsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line front end. Every command delegates to the library and
//! renders the resulting record as JSON (default) or a two-column table.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::distributions::{load_cdf_json, load_samples_csv, Interval, PiecewiseCdf};
use crate::dominance::{check_ffsd, min_epsilon_ffsd};
use crate::error::{Error, Result};
use crate::integral::rsi;
use crate::multid::{
    check_nffsd_discrete, survival_direct, survival_prob, DiscreteJointDist, NdLimits, RVec,
};
use crate::utility::{classify_indicator, PiecewiseUtility};
use crate::verify::{verify_1d, verify_nd, verify_uniqueness, SuiteConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "ffsd", version, about = "Tolerance-based stochastic dominance toolkit")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether F dominates G with tolerance eps.
    Check {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
    },
    /// Smallest tolerance for which F dominates G.
    MinEps {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Robust Riemann-Stieltjes integral of a utility against a CDF.
    Rsi {
        /// Utility JSON.
        #[arg(long)]
        u: PathBuf,
        /// CDF as JSON, or CSV samples.
        #[arg(long)]
        f: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
        interval: Option<Vec<f64>>,
    },
    /// Classify a utility against indicator functions.
    Classify {
        #[arg(long)]
        u: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
    },
    /// n-dimensional commands on discrete joint distributions.
    #[command(subcommand)]
    Nd(NdCommand),
    /// Seeded 1-D theorem and uniqueness suites.
    #[command(name = "verify-1d")]
    Verify1d(VerifyArgs),
    /// Seeded n-D theorem suite.
    #[command(name = "verify-nd")]
    VerifyNd(VerifyNdArgs),
}

#[derive(Debug, Subcommand)]
pub enum NdCommand {
    /// Survival probability P(X >> x0).
    Survival {
        #[arg(long)]
        dist: PathBuf,
        /// Comma-separated reference point.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x0: Vec<f64>,
    },
    /// Decide n-D dominance with survival tolerance eps-surv.
    Check {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long = "eps-surv", allow_negative_numbers = true)]
        eps_surv: f64,
    },
    /// Smallest survival tolerance for which F dominates G.
    MinEps {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Same as `verify-nd`.
    Verify(VerifyNdArgs),
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// CDF of the dominating candidate (JSON, or CSV samples).
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    /// Support [A, B], required for CSV inputs.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Random utilities per reference point.
    #[arg(long, default_value_t = 3)]
    pub utilities: usize,
    #[arg(long, default_value_t = 10_000)]
    pub uniqueness_trials: usize,
}

#[derive(Debug, Args)]
pub struct VerifyNdArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 2)]
    pub utilities: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
    pub dims: Vec<usize>,
}

/// Whether the computation answered "yes" or "no"; both are successes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub report: Value,
    pub verdict: Verdict,
}

impl Output {
    fn positive(report: impl Serialize) -> Result<Self> {
        Self::with(report, true)
    }

    fn with(report: impl Serialize, ok: bool) -> Result<Self> {
        Ok(Output {
            report: serde_json::to_value(report).map_err(|e| Error::Input(e.to_string()))?,
            verdict: if ok { Verdict::Positive } else { Verdict::Negative },
        })
    }

    pub fn exit_code(&self) -> u8 {
        match self.verdict {
            Verdict::Positive => 0,
            Verdict::Negative => 1,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("value serializes");
                s.push('\n');
                s
            }
            Format::Table => render_table(&self.report),
        }
    }
}

fn render_table(value: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", value, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, rows);
            }
        }
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn parse_interval(raw: &Option<Vec<f64>>) -> Result<Option<Interval>> {
    match raw.as_deref() {
        None => Ok(None),
        Some([a, b]) => Interval::new(*a, *b).map(Some),
        Some(_) => Err(Error::Input("--interval takes two numbers".into())),
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn load_cdf(path: &Path, interval: Option<Interval>) -> Result<PiecewiseCdf> {
    if is_csv(path) {
        let iv = interval.ok_or_else(|| {
            Error::Input(format!("{}: CSV samples need --interval", path.display()))
        })?;
        PiecewiseCdf::from_samples(&load_samples_csv(path)?, iv)
    } else {
        let cdf = load_cdf_json(path)?;
        if let Some(iv) = interval {
            if iv != cdf.interval() {
                return Err(Error::IntervalMismatch);
            }
        }
        Ok(cdf)
    }
}

fn load_utility(path: &Path) -> Result<PiecewiseUtility> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_pair(pair: &PairArgs) -> Result<(PiecewiseCdf, PiecewiseCdf)> {
    let iv = parse_interval(&pair.interval)?;
    Ok((load_cdf(&pair.f, iv)?, load_cdf(&pair.g, iv)?))
}

fn suite_config(seed: u64, trials: usize, utilities: usize) -> SuiteConfig {
    SuiteConfig {
        seed,
        trials,
        random_utilities: utilities,
    }
}

fn run_verify_nd(args: &VerifyNdArgs) -> Result<Output> {
    if args.dims.is_empty() || args.dims.contains(&0) {
        return Err(Error::Input("--dims needs positive dimensions".into()));
    }
    let limits = NdLimits::from_env()?;
    if let Some(&n) = args.dims.iter().find(|&&n| n > limits.dim_cap) {
        return Err(Error::DimensionCapExceeded {
            dim: n,
            cap: limits.dim_cap,
        });
    }
    let report = verify_nd(&suite_config(args.seed, args.trials, args.utilities), &args.dims)?;
    let ok = report.passed;
    Output::with(report, ok)
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Check { pair, eps } => {
            let (f, g) = load_pair(pair)?;
            let verdict = check_ffsd(&f, &g, *eps)?;
            Output::with(verdict, verdict.holds)
        }
        Command::MinEps { pair } => {
            let (f, g) = load_pair(pair)?;
            let eps = min_epsilon_ffsd(&f, &g)?;
            let witness = check_ffsd(&f, &g, eps)?;
            Output::positive(json!({
                "epsilon": eps,
                "max_violation": witness.max_violation,
                "witness_x": witness.witness_x,
            }))
        }
        Command::Rsi { u, f, eps, interval } => {
            let u = load_utility(u)?;
            let iv = parse_interval(interval)?.unwrap_or(u.interval());
            let f = load_cdf(f, Some(iv))?;
            let r = rsi(&u, &f, *eps)?;
            Output::positive(json!({
                "epsilon": eps,
                "value": r.value,
                "case": r.case,
                "reference": r.reference,
                "tolerance_adjustment": r.tolerance_adjustment,
            }))
        }
        Command::Classify { u, eps } => {
            let u = load_utility(u)?;
            let class = classify_indicator(&u, *eps)?;
            Output::positive(json!({ "epsilon": eps, "result": class }))
        }
        Command::Nd(nd) => run_nd(nd),
        Command::Verify1d(args) => {
            let theorem = verify_1d(&suite_config(args.seed, args.trials, args.utilities))?;
            let uniqueness = verify_uniqueness(args.seed, args.uniqueness_trials)?;
            let ok = theorem.passed && uniqueness.passed;
            Output::with(
                json!({ "passed": ok, "theorem": theorem, "uniqueness": uniqueness }),
                ok,
            )
        }
        Command::VerifyNd(args) => run_verify_nd(args),
    }
}

fn run_nd(cmd: &NdCommand) -> Result<Output> {
    let limits = NdLimits::from_env()?;
    match cmd {
        NdCommand::Survival { dist, x0 } => {
            let d = DiscreteJointDist::load_json(dist)?;
            let x0 = RVec::new(x0.clone());
            d.rect().require_open(&x0)?;
            let survival = survival_prob(&d, &x0, d.rect().upper(), limits.dim_cap)?;
            Output::positive(json!({
                "x0": x0,
                "survival": survival,
                "survival_direct": survival_direct(&d, &x0)?,
            }))
        }
        NdCommand::Check { f, g, eps_surv } => {
            let f = DiscreteJointDist::load_json(f)?;
            let g = DiscreteJointDist::load_json(g)?;
            let verdict = check_nffsd_discrete(&f, &g, *eps_surv, &limits)?;
            let ok = verdict.holds;
            Output::with(verdict, ok)
        }
        NdCommand::MinEps { f, g } => {
            let f = DiscreteJointDist::load_json(f)?;
            let g = DiscreteJointDist::load_json(g)?;
            let verdict = check_nffsd_discrete(&f, &g, 0.0, &limits)?;
            Output::positive(json!({
                "epsilon": verdict.min_epsilon,
                "worst_candidate": verdict.worst_candidate,
                "candidates_checked": verdict.candidates_checked,
            }))
        }
        NdCommand::Verify(args) => run_verify_nd(args),
    }
}
