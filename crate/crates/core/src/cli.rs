//! Command-line surface: `gen`, `solve`, `eval`, `export`, `stats`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
//! 3 verification failure (including malformed instances in a batch).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::env::RewardConfig;
use crate::error::{PackError, Result};
use crate::instance::{derive_seed, generate_set, InstanceSpec};
use crate::io::{
    layout_obj, parse_line, read_lines, to_line, verify_solution, ErrorRecord, LayoutDocument, Record,
    SolutionRecord, SolverConfig, SolverKind, Summary,
};
use crate::rl_math::{entropy, DecisionRecord};
use crate::solvers::{greedy_solve, mcts_solve, sample_best_of_k, MctsConfig, UniformPolicy};
use crate::stability::{Ratio, StabilityParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "stablepack", version, about = "Stability-constrained 3D bin packing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance set as JSON lines.
    Gen(GenArgs),
    /// Solve every instance of a file.
    Solve(SolveArgs),
    /// Re-verify a solutions file and print its summary.
    Eval(EvalArgs),
    /// Export one solution as a JSON layout or OBJ mesh.
    Export(ExportArgs),
    /// Describe an instance, solution or decision-trace file.
    Stats(StatsArgs),
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    /// Scheme tag such as S1_10, S2_M, B2_30, BM_M or CASE_40.
    #[arg(long)]
    pub scheme: String,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Greedy,
    Mcts,
    Sample,
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = SolverArg::Greedy)]
    pub solver: SolverArg,
    /// Episodes for the best-of-K sampler.
    #[arg(long, default_value_t = 128)]
    pub k: u32,
    /// Simulations per instance for MCTS.
    #[arg(long, default_value_t = MctsConfig::default().rollouts)]
    pub rollouts: u32,
    /// UCT exploration constant.
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    pub c: f64,
    /// Enable the support constraint with this ratio (e.g. 0.66).
    #[arg(long)]
    pub rs: Option<f64>,
    /// Enable the single-supporter weight constraint with this ratio (e.g. 3.0).
    #[arg(long)]
    pub rw: Option<f64>,
    /// Drop any constraints stored in the instances.
    #[arg(long, conflicts_with_all = ["rs", "rw"])]
    pub unconstrained: bool,
    #[arg(long, default_value_t = 1.0)]
    pub alpha1: f64,
    #[arg(long, default_value_t = 0.1)]
    pub alpha2: f64,
    /// Master seed; instance i uses a seed derived from (seed, i).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "STABLEPACK_JOBS", default_value_t = 1)]
    pub jobs: usize,
    /// Store per-instance wall time in the output records.
    #[arg(long)]
    pub timing: bool,
    /// Solutions file; the summary still goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Json,
    Obj,
}

#[derive(Debug, clap::Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
    pub format: ExportFormat,
    /// Which solution of the file to export.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,
}

pub fn exit_code(err: &PackError) -> i32 {
    match err {
        PackError::Io(_) => EXIT_IO,
        PackError::Verification(_) | PackError::ContractViolation(_) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(&a, stdout),
        Command::Solve(a) => cmd_solve(&a, stdout, stderr),
        Command::Eval(a) => cmd_eval(&a, stdout, stderr),
        Command::Export(a) => cmd_export(&a, stdout),
        Command::Stats(a) => cmd_stats(&a, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let PackError::InvalidInput(_) = e {
                let _ = writeln!(stderr, "run `stablepack --help` for usage");
            }
            exit_code(&e)
        }
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_gen(a: &GenArgs, stdout: &mut dyn Write) -> Result<i32> {
    let set = generate_set(&a.scheme, a.count, a.seed)?;
    let mut text = String::new();
    for inst in set {
        text.push_str(&to_line(&Record::Instance(inst))?);
        text.push('\n');
    }
    emit(a.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

impl SolveArgs {
    fn params(&self, stored: &StabilityParams) -> Result<StabilityParams> {
        if self.unconstrained {
            return Ok(StabilityParams::unconstrained());
        }
        if self.rs.is_none() && self.rw.is_none() {
            return Ok(*stored);
        }
        let mut p = StabilityParams::unconstrained();
        if let Some(rs) = self.rs {
            p.support_ratio = Ratio::from_decimal(rs)?;
            p.support_enabled = true;
        }
        if let Some(rw) = self.rw {
            p.weight_ratio = rw;
            p.weight_enabled = true;
        }
        p.validate()?;
        Ok(p)
    }

    fn config(&self, seed: u64) -> SolverConfig {
        let rewards = RewardConfig { alpha1: self.alpha1, alpha2: self.alpha2 };
        match self.solver {
            SolverArg::Greedy => SolverConfig { solver: SolverKind::Greedy, budget: None, exploration: None, seed: 0, rewards },
            SolverArg::Mcts => SolverConfig {
                solver: SolverKind::Mcts,
                budget: Some(self.rollouts),
                exploration: Some(self.c),
                seed,
                rewards,
            },
            SolverArg::Sample => SolverConfig { solver: SolverKind::Sample, budget: Some(self.k), exploration: None, seed, rewards },
        }
    }

    fn validate(&self) -> Result<()> {
        if self.solver == SolverArg::Mcts && self.rollouts == 0 {
            return Err(PackError::InvalidInput("--rollouts must be at least 1".into()));
        }
        if self.solver == SolverArg::Sample && self.k == 0 {
            return Err(PackError::InvalidInput("--k must be at least 1".into()));
        }
        if !(self.c.is_finite() && self.c >= 0.0) {
            return Err(PackError::InvalidInput("--c must be a finite non-negative number".into()));
        }
        if !(self.alpha1.is_finite() && self.alpha2.is_finite()) {
            return Err(PackError::InvalidInput("reward weights must be finite".into()));
        }
        self.params(&StabilityParams::unconstrained()).map(|_| ())
    }

    fn solve_one(&self, index: usize, line: &str) -> Record {
        let attempt = || -> Result<SolutionRecord> {
            let inst = match parse_line(line)? {
                Record::Instance(i) => i,
                other => {
                    return Err(PackError::InvalidInput(format!(
                        "expected an instance, found a {} record",
                        crate::io::kind_name(&other)
                    )))
                }
            };
            let params = self.params(&inst.params)?;
            let inst: InstanceSpec = inst.with_params(params);
            inst.validate()?;
            let seed = derive_seed(self.seed, index as u64);
            let config = self.config(seed);
            let started = Instant::now();
            let result = match self.solver {
                SolverArg::Greedy => greedy_solve(&inst),
                SolverArg::Mcts => {
                    mcts_solve(&inst, &MctsConfig { rollouts: self.rollouts, exploration: self.c, seed })?
                }
                SolverArg::Sample => sample_best_of_k(&inst, &UniformPolicy, self.k, seed)?,
            };
            let elapsed = started.elapsed();
            let mut rec = SolutionRecord::from_result(&inst, config, &result);
            if self.timing {
                rec.wall_time_ms = Some(elapsed.as_secs_f64() * 1000.0);
            }
            Ok(rec)
        };
        match attempt() {
            Ok(rec) => Record::Solution(rec),
            Err(e) => Record::Error(ErrorRecord { index, message: e.to_string() }),
        }
    }
}

fn non_blank_lines(path: &Path) -> Result<Vec<String>> {
    Ok(fs::read_to_string(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(str::to_owned)
        .collect())
}

fn cmd_solve(a: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    a.validate()?;
    let lines = non_blank_lines(&a.input)?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| PackError::InvalidInput(format!("cannot start {} workers: {e}", a.jobs)))?;
    let records: Vec<Record> =
        pool.install(|| lines.par_iter().enumerate().map(|(i, l)| a.solve_one(i, l)).collect());

    let mut text = String::new();
    for r in &records {
        text.push_str(&to_line(r)?);
        text.push('\n');
    }
    if let Some(out) = &a.out {
        fs::write(out, &text)?;
    }

    let mut summary = Summary::from_records(&records);
    summary.wall_time_s = started.elapsed().as_secs_f64();
    write!(stdout, "{}", summary.render())?;

    for r in &records {
        if let Record::Error(e) = r {
            writeln!(stderr, "instance {}: {}", e.index, e.message)?;
        }
    }
    if a.solver == SolverArg::Greedy && summary.violations > 0 {
        writeln!(stderr, "note: the greedy baseline ignores stability constraints")?;
    }
    let env_violations = a.solver != SolverArg::Greedy && summary.violations > 0;
    Ok(if summary.errors > 0 || env_violations { EXIT_VERIFY } else { EXIT_OK })
}

fn cmd_eval(a: &EvalArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut records = Vec::new();
    let mut failures = 0usize;
    for (i, parsed) in read_lines(&a.input)?.into_iter().enumerate() {
        let checked = parsed.and_then(|r| match &r {
            Record::Solution(s) => verify_solution(s).map(|_| r),
            Record::Error(_) => Ok(r),
            other => Err(PackError::InvalidInput(format!("line {i}: not a solution ({})", crate::io::kind_name(other)))),
        });
        match checked {
            Ok(r) => records.push(r),
            Err(e) => {
                failures += 1;
                writeln!(stderr, "line {i}: {e}")?;
            }
        }
    }
    let summary = Summary::from_records(&records);
    write!(stdout, "{}", summary.render())?;
    writeln!(stdout, "rejected     {failures}")?;
    Ok(if failures > 0 || summary.errors > 0 { EXIT_VERIFY } else { EXIT_OK })
}

fn cmd_export(a: &ExportArgs, stdout: &mut dyn Write) -> Result<i32> {
    let solutions: Vec<SolutionRecord> = read_lines(&a.input)?
        .into_iter()
        .filter_map(|r| match r {
            Ok(Record::Solution(s)) => Some(Ok(s)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    let doc = if solutions.is_empty() {
        LayoutDocument::empty()
    } else {
        let sol = solutions.get(a.index).ok_or_else(|| {
            PackError::InvalidInput(format!("--index {} but the file holds {} solutions", a.index, solutions.len()))
        })?;
        verify_solution(sol)?;
        LayoutDocument::from_solution(sol)
    };
    let text = match a.format {
        ExportFormat::Json => doc.to_json()? + "\n",
        ExportFormat::Obj => layout_obj(&doc),
    };
    emit(a.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

fn cmd_stats(a: &StatsArgs, stdout: &mut dyn Write) -> Result<i32> {
    let records: Vec<Record> = read_lines(&a.input)?.into_iter().collect::<Result<_>>()?;
    let instances: Vec<&InstanceSpec> = records
        .iter()
        .filter_map(|r| if let Record::Instance(i) = r { Some(i) } else { None })
        .collect();
    let decisions: Vec<&DecisionRecord> = records
        .iter()
        .filter_map(|r| if let Record::Decision(d) = r { Some(d) } else { None })
        .collect();

    writeln!(stdout, "records      {}", records.len())?;
    if !instances.is_empty() {
        writeln!(stdout, "instances    {}", instances.len())?;
        writeln!(stdout, "mean items   {:.2}", mean(instances.iter().map(|i| i.item_count() as f64)))?;
        writeln!(stdout, "mean types   {:.2}", mean(instances.iter().map(|i| i.items.len() as f64)))?;
        writeln!(
            stdout,
            "mean bin     {:.1} x {:.1} x {:.1}",
            mean(instances.iter().map(|i| i.bin.l as f64)),
            mean(instances.iter().map(|i| i.bin.w as f64)),
            mean(instances.iter().map(|i| i.bin.h as f64))
        )?;
    }
    if records.iter().any(|r| matches!(r, Record::Solution(_) | Record::Error(_))) {
        write!(stdout, "{}", Summary::from_records(&records).render())?;
    }
    if !decisions.is_empty() {
        for d in &decisions {
            d.validate()?;
        }
        writeln!(stdout, "decisions    {}", decisions.len())?;
        let h_old = mean(decisions.iter().map(|d| entropy(&d.probs_old).unwrap_or(f64::NAN)));
        let h_new = mean(decisions.iter().map(|d| entropy(&d.probs_new).unwrap_or(f64::NAN)));
        writeln!(stdout, "entropy      {h_old:.6} -> {h_new:.6}")?;
        writeln!(stdout, "mean adv     {:.6}", mean(decisions.iter().map(|d| d.advantage)))?;
    }
    Ok(EXIT_OK)
}
