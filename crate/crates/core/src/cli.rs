//! Command-line front end: `solve`, `predict`, `sweep` and `dump-tree`.
//!
//! The environment variable `MFS_SEED` is not read; nothing here is random.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use crate::cost::{fit_scaling, predict_total, CostRecord, Prediction, ScalingFit};
use crate::error::{Error, Result};
use crate::solver::{solve_with, Solution, SolveOptions};
use crate::space::{build_space, Continuity};
use crate::tree::build_tree;

/// Counters above this are written as JSON strings.
const MAX_EXACT_JSON: u64 = 1 << 53;

#[derive(Debug, Parser)]
#[command(name = "mfs", version, about = "Multi-frontal solver for tensor-product B-spline systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and report measured and predicted costs.
    Solve(SolveArgs),
    /// Evaluate the closed-form predictors only.
    Predict(ProblemArgs),
    /// Solve over a range of levels and fit scaling exponents.
    Sweep(SweepArgs),
    /// Print the elimination tree with per-cluster sizes.
    DumpTree(ProblemArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub p: usize,
    /// c0 or cpm1
    #[arg(long)]
    pub continuity: Continuity,
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub s: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Inclusive range `a:b`.
    #[arg(long)]
    pub s: LevelRange,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelRange {
    pub start: usize,
    pub end: usize,
}

impl LevelRange {
    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl FromStr for LevelRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("level range must look like a:b, got {s:?}"));
        let (a, b) = match s.split_once(':') {
            Some((a, b)) => (a, b),
            None => (s, s),
        };
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        if start > end {
            return Err(Error::InvalidConfig(format!("empty level range {s:?}")));
        }
        Ok(Self { start, end })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Solve,
    Predict,
    Sweep,
    DumpTree,
}

/// A parsed invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub d: usize,
    pub p: usize,
    pub continuity: Continuity,
    pub s: LevelRange,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub threads: usize,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Self {
        let (command, common, s, threads) = match cli.command {
            Command::Solve(a) => (CommandKind::Solve, a.problem.common, single(a.problem.s), a.threads),
            Command::Predict(a) => (CommandKind::Predict, a.common, single(a.s), 1),
            Command::Sweep(a) => (CommandKind::Sweep, a.common, a.s, a.threads),
            Command::DumpTree(a) => (CommandKind::DumpTree, a.common, single(a.s), 1),
        };
        Self {
            command,
            d: common.d,
            p: common.p,
            continuity: common.continuity,
            s,
            output_path: common.output,
            format: common.format,
            threads: threads.max(1),
        }
    }
}

fn single(s: usize) -> LevelRange {
    LevelRange { start: s, end: s }
}

/// JSON integer that falls back to a string beyond 2^53.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Count(pub u64);

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 > MAX_EXACT_JSON {
            ser.serialize_str(&self.0.to_string())
        } else {
            ser.serialize_u64(self.0)
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LevelReport {
    pub i: usize,
    pub n_clusters: usize,
    pub q_rep: usize,
    pub r_rep: usize,
    pub flops: Count,
    pub entries: Count,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SolveReport {
    pub d: usize,
    pub p: usize,
    pub continuity: Continuity,
    pub s: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub flops_measured: Count,
    pub factor_bytes_measured: Count,
    pub flops_predicted: f64,
    pub bytes_predicted: f64,
    pub residual_norm: f64,
    pub per_level: Vec<LevelReport>,
}

impl SolveReport {
    pub fn new(solution: &Solution, cost: &CostRecord, prediction: &Prediction) -> Self {
        Self {
            d: cost.d,
            p: cost.p,
            continuity: cost.continuity,
            s: cost.s,
            n: cost.n_dofs,
            flops_measured: Count(cost.total_flops),
            factor_bytes_measured: Count(cost.total_factor_bytes),
            flops_predicted: prediction.total_flops_pred,
            bytes_predicted: 8.0 * prediction.total_mem_pred,
            residual_norm: solution.residual_norm,
            per_level: cost
                .per_level
                .iter()
                .map(|l| LevelReport {
                    i: l.i,
                    n_clusters: l.n_clusters,
                    q_rep: l.q_rep,
                    r_rep: l.r_rep,
                    flops: Count(l.flops),
                    entries: Count(l.entries),
                })
                .collect(),
        }
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:e}",
            self.d,
            self.p,
            self.continuity,
            self.s,
            self.n,
            self.flops_measured.0,
            self.factor_bytes_measured.0,
            self.flops_predicted,
            self.bytes_predicted,
            self.residual_norm
        )
    }
}

pub const CSV_HEADER: &str =
    "d,p,continuity,s,N,flops_measured,factor_bytes_measured,flops_predicted,bytes_predicted,residual_norm";

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SweepSummary {
    pub flops_fit: ScalingFit,
    pub memory_fit: ScalingFit,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SolveReport>,
    pub summary: SweepSummary,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

fn solve_one(config: &RunConfig, s: usize) -> Result<SolveReport> {
    let space = build_space(config.d, config.p, config.continuity, s)?;
    let (solution, cost) = solve_with(&space, &SolveOptions { threads: config.threads })?;
    let prediction = predict_total(config.d, config.p, config.continuity, s)?;
    Ok(SolveReport::new(&solution, &cost, &prediction))
}

pub fn run_solve(config: &RunConfig) -> Result<String> {
    let report = solve_one(config, config.s.start)?;
    match config.format {
        Format::Json => to_json(&report),
        Format::Csv => Ok(format!("{CSV_HEADER}\n{}\n", report.csv_row())),
    }
}

pub fn run_predict(config: &RunConfig) -> Result<String> {
    let prediction = predict_total(config.d, config.p, config.continuity, config.s.start)?;
    match config.format {
        Format::Json => to_json(&prediction),
        Format::Csv => Ok(format!(
            "d,p,continuity,s,N,flops_predicted,bytes_predicted,dominant_flops,dominant_memory\n{},{},{},{},{},{},{},{},{}\n",
            prediction.d,
            prediction.p,
            prediction.continuity,
            prediction.s,
            prediction.n_dofs,
            prediction.total_flops_pred,
            8.0 * prediction.total_mem_pred,
            prediction.dominant_flops.tag,
            prediction.dominant_memory.tag
        )),
    }
}

pub fn run_sweep(config: &RunConfig) -> Result<String> {
    let n_levels = config.s.end - config.s.start + 1;
    if n_levels < 3 {
        return Err(Error::DegenerateFit(format!(
            "a sweep needs at least 3 levels, got {}:{}",
            config.s.start, config.s.end
        )));
    }
    let rows = config.s.levels().map(|s| solve_one(config, s)).collect::<Result<Vec<_>>>()?;
    let fit = |f: fn(&SolveReport) -> u64| {
        let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, f(r) as f64)).collect();
        fit_scaling(&samples)
    };
    let summary = SweepSummary {
        flops_fit: fit(|r| r.flops_measured.0)?,
        memory_fit: fit(|r| r.factor_bytes_measured.0)?,
    };
    match config.format {
        Format::Json => to_json(&SweepReport { rows, summary }),
        Format::Csv => {
            let mut out = format!("{CSV_HEADER}\n");
            for r in &rows {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            for (name, f) in [("flops", &summary.flops_fit), ("memory", &summary.memory_fit)] {
                let _ = writeln!(out, "# fit {name} exponent={:.6} r2={:.6}", f.exponent, f.r2);
            }
            Ok(out)
        }
    }
}

pub fn run_dump_tree(config: &RunConfig) -> Result<String> {
    let space = build_space(config.d, config.p, config.continuity, config.s.start)?;
    let dump = build_tree(&space)?.dump();
    match config.format {
        Format::Json => to_json(&dump),
        Format::Csv => {
            let mut out = String::from("i,lo,hi,q,r\n");
            for level in &dump.levels {
                for c in &level.clusters {
                    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                    let _ = writeln!(out, "{},{},{},{},{}", level.i, join(&c.lo), join(&c.hi), c.q, c.r);
                }
            }
            Ok(out)
        }
    }
}

/// Runs the command and writes its output to the configured destination.
pub fn execute(config: &RunConfig) -> Result<()> {
    let out = match config.command {
        CommandKind::Solve => run_solve(config)?,
        CommandKind::Predict => run_predict(config)?,
        CommandKind::Sweep => run_sweep(config)?,
        CommandKind::DumpTree => run_dump_tree(config)?,
    };
    match &config.output_path {
        Some(path) => std::fs::write(path, out)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(out.as_bytes())?;
        }
    }
    Ok(())
}
