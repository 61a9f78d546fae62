//! Versioned JSON-lines formats.
//!
//! Every line is one JSON object carrying `schema_version` (`"<major>.<minor>"`)
//! and a `kind` tag:
//!
//! - `instance`: an [`InstanceSpec`] (bin, item batches, constraints, seed, scheme).
//! - `solution`: a [`SolutionRecord`], self-contained: it embeds its instance
//!   so it can be re-verified without the instance file.
//! - `error`: an [`ErrorRecord`] standing in for an instance that could not be solved.
//! - `decision`: a [`DecisionRecord`] from a learner's trace.
//!
//! Readers reject any major version other than [`SCHEMA_MAJOR`].

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::env::{layout_rewards, RewardConfig, StepReward};
use crate::error::{PackError, Result};
use crate::geometry::{contains, overlaps, Cuboid, Dims};
use crate::instance::InstanceSpec;
use crate::rl_math::DecisionRecord;
use crate::solvers::{replay, SolveResult};
use crate::stability::{audit_placement, Placed, SupportRatio};

pub const SCHEMA_MAJOR: u32 = 1;
pub const SCHEMA_VERSION: &str = "1.0";

/// Tolerance for re-derived floating-point quantities.
pub const VERIFY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Instance(InstanceSpec),
    Solution(SolutionRecord),
    Error(ErrorRecord),
    Decision(DecisionRecord),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    /// Zero-based line of the offending input.
    pub index: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Greedy,
    Mcts,
    Sample,
}

impl SolverKind {
    /// Solvers whose output is a trajectory of the packing environment.
    pub fn drives_env(&self) -> bool {
        !matches!(self, SolverKind::Greedy)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub solver: SolverKind,
    /// MCTS simulations or sampled episodes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exploration: Option<f64>,
    pub seed: u64,
    pub rewards: RewardConfig,
}

/// One placement of a solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// Item type index into the instance's `items`.
    pub item: usize,
    /// Oriented extents.
    pub dims: Dims,
    /// FLB corner.
    pub position: [i64; 3],
    /// Supported area over footprint, against the items placed before it.
    pub support: SupportRatio,
    pub reward: StepReward,
}

impl StepRecord {
    pub fn cuboid(&self) -> Cuboid {
        Cuboid::at(self.position, self.dims)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub instance: InstanceSpec,
    pub config: SolverConfig,
    pub eta: f64,
    pub steps: Vec<StepRecord>,
    /// Complete episodes the solver simulated.
    pub samples: u64,
    /// Only written on request.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl SolutionRecord {
    pub fn from_result(instance: &InstanceSpec, config: SolverConfig, result: &SolveResult) -> Self {
        let bin = instance.bin_cuboid();
        let cuboids: Vec<Cuboid> = result.placements.iter().map(|p| p.cuboid).collect();
        let rewards = layout_rewards(&bin, &cuboids, &config.rewards);
        let steps = result
            .placements
            .iter()
            .zip(rewards)
            .enumerate()
            .map(|(i, (p, reward))| StepRecord {
                item: p.item,
                dims: p.cuboid.dims(),
                position: p.cuboid.flb(),
                support: audit_placement(&p.cuboid, p.weight, &result.placements[..i], &instance.params).support,
                reward,
            })
            .collect();
        Self {
            instance: instance.clone(),
            config,
            eta: result.eta,
            steps,
            samples: result.samples,
            wall_time_ms: None,
        }
    }

    pub fn placements(&self) -> Vec<Placed> {
        self.steps
            .iter()
            .map(|s| Placed {
                item: s.item,
                cuboid: s.cuboid(),
                weight: self.instance.items.get(s.item).map_or(0.0, |t| t.weight),
            })
            .collect()
    }
}

/// What re-verification found, beyond hard failures.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    /// Placements that break an enabled stability constraint.
    pub stability_violations: usize,
}

fn fail(id: &str, msg: impl std::fmt::Display) -> PackError {
    PackError::Verification(format!("{id}: {msg}"))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= VERIFY_TOLERANCE
}

/// Re-derives every stored quantity of `record` from its placements.
///
/// Geometry, item accounting, support ratios, rewards and the loading rate
/// must match exactly (floats to [`VERIFY_TOLERANCE`]). Environment-driven
/// solutions are also replayed action by action. Stability violations are an
/// error for environment-driven solvers and are counted for the greedy
/// baseline, which does not model stability.
pub fn verify_solution(record: &SolutionRecord) -> Result<VerifyReport> {
    let inst = &record.instance;
    let id = inst.id.as_str();
    inst.validate().map_err(|e| fail(id, e))?;
    let bin = inst.bin_cuboid();

    let mut used = vec![0u32; inst.items.len()];
    let placements = record.placements();
    let mut report = VerifyReport::default();

    for (i, (step, placed)) in record.steps.iter().zip(&placements).enumerate() {
        let ty = inst
            .items
            .get(step.item)
            .ok_or_else(|| fail(id, format!("step {i}: unknown item type {}", step.item)))?;
        if step.dims.sorted_sides() != ty.dims().sorted_sides() {
            return Err(fail(id, format!("step {i}: {:?} is not a rotation of item type {}", step.dims, step.item)));
        }
        used[step.item] += 1;
        if used[step.item] > ty.quantity {
            return Err(fail(id, format!("step {i}: item type {} placed more than {} times", step.item, ty.quantity)));
        }
        let c = placed.cuboid;
        if !contains(&bin, &c) {
            return Err(fail(id, format!("step {i}: {c:?} leaves the bin")));
        }
        if let Some(j) = placements[..i].iter().position(|p| overlaps(&p.cuboid, &c)) {
            return Err(fail(id, format!("step {i}: overlaps step {j}")));
        }
        let audit = audit_placement(&c, placed.weight, &placements[..i], &inst.params);
        if audit.support != step.support {
            return Err(fail(id, format!("step {i}: recorded support {:?}, actual {:?}", step.support, audit.support)));
        }
        if !audit.passed() {
            if record.config.solver.drives_env() {
                return Err(fail(id, format!("step {i}: violates stability constraints")));
            }
            report.stability_violations += 1;
        }
    }

    let cuboids: Vec<Cuboid> = placements.iter().map(|p| p.cuboid).collect();
    let rewards = layout_rewards(&bin, &cuboids, &record.config.rewards);
    for (i, (got, want)) in record.steps.iter().map(|s| &s.reward).zip(&rewards).enumerate() {
        if !(close(got.r_lr, want.r_lr) && close(got.r_hd, want.r_hd) && close(got.total, want.total)) {
            return Err(fail(id, format!("step {i}: reward {got:?} does not match {want:?}")));
        }
    }

    let volume: i64 = cuboids.iter().map(Cuboid::volume).sum();
    let top = cuboids.iter().map(Cuboid::top).max().unwrap_or(0);
    let eta = if top == 0 { 0.0 } else { volume as f64 / (bin.l as f64 * bin.w as f64 * top as f64) };
    if !close(eta, record.eta) {
        return Err(fail(id, format!("recorded eta {} but layout gives {eta}", record.eta)));
    }

    if record.config.solver.drives_env() {
        let mut state = inst.initial_state().map_err(|e| fail(id, e))?;
        for (i, step) in record.steps.iter().enumerate() {
            let space = state
                .current_space()
                .copied()
                .ok_or_else(|| fail(id, format!("step {i}: episode already finished")))?;
            if space.flb() != step.position {
                return Err(fail(id, format!("step {i}: not at the current space corner {:?}", space.flb())));
            }
            let action = crate::env::PlacementAction { item: step.item, dims: step.dims };
            state = state
                .step(&action, &record.config.rewards)
                .map_err(|e| fail(id, format!("step {i}: {e}")))?
                .state;
        }
        if !state.is_terminal() {
            return Err(fail(id, "episode stops before the environment terminates"));
        }
    }
    Ok(report)
}

/// Replays an environment-driven record from its actions; used by tests and
/// by callers who want the final state back.
pub fn replay_solution(record: &SolutionRecord) -> Result<crate::solvers::Episode> {
    let actions: Vec<_> = record
        .steps
        .iter()
        .map(|s| crate::env::PlacementAction { item: s.item, dims: s.dims })
        .collect();
    replay(&record.instance, &actions)
}

#[derive(Serialize)]
struct OutLine<'a> {
    schema_version: &'a str,
    #[serde(flatten)]
    record: &'a Record,
}

pub fn to_line(record: &Record) -> Result<String> {
    Ok(serde_json::to_string(&OutLine { schema_version: SCHEMA_VERSION, record })?)
}

pub fn check_version(version: &str) -> Result<()> {
    let major = version.split('.').next().and_then(|m| m.parse::<u32>().ok());
    if major != Some(SCHEMA_MAJOR) {
        return Err(PackError::UnsupportedVersion { found: version.to_string(), expected: SCHEMA_MAJOR });
    }
    Ok(())
}

pub fn parse_line(line: &str) -> Result<Record> {
    let mut value: serde_json::Value = serde_json::from_str(line)?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| PackError::InvalidInput("line is not a JSON object".into()))?;
    let version = obj
        .remove("schema_version")
        .ok_or_else(|| PackError::InvalidInput("missing schema_version".into()))?;
    let version = version
        .as_str()
        .ok_or_else(|| PackError::InvalidInput("schema_version must be a string".into()))?;
    check_version(version)?;
    Ok(serde_json::from_value(value)?)
}

/// Reads every non-blank line. Each entry is the parse result of that line,
/// so one malformed line does not hide the others.
pub fn read_lines(path: &Path) -> Result<Vec<Result<Record>>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_line(&line));
    }
    Ok(out)
}

pub fn write_lines<'a>(out: &mut impl Write, records: impl IntoIterator<Item = &'a Record>) -> Result<()> {
    for r in records {
        writeln!(out, "{}", to_line(r)?)?;
    }
    Ok(())
}

pub fn write_file<'a>(path: &Path, records: impl IntoIterator<Item = &'a Record>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_lines(&mut w, records)?;
    w.flush()?;
    Ok(())
}

pub fn write_instances(path: &Path, instances: &[InstanceSpec]) -> Result<()> {
    let records: Vec<Record> = instances.iter().cloned().map(Record::Instance).collect();
    write_file(path, &records)
}

pub fn read_instances(path: &Path) -> Result<Vec<InstanceSpec>> {
    read_lines(path)?
        .into_iter()
        .map(|r| match r? {
            Record::Instance(i) => Ok(i),
            other => Err(PackError::InvalidInput(format!("expected an instance line, found {}", kind_name(&other)))),
        })
        .collect()
}

pub fn write_decision_trace(path: &Path, records: &[DecisionRecord]) -> Result<()> {
    let records: Vec<Record> = records.iter().cloned().map(Record::Decision).collect();
    write_file(path, &records)
}

pub fn read_decision_trace(path: &Path) -> Result<Vec<DecisionRecord>> {
    read_lines(path)?
        .into_iter()
        .map(|r| match r? {
            Record::Decision(d) => Ok(d),
            other => Err(PackError::InvalidInput(format!("expected a decision line, found {}", kind_name(&other)))),
        })
        .collect()
}

pub fn kind_name(record: &Record) -> &'static str {
    match record {
        Record::Instance(_) => "instance",
        Record::Solution(_) => "solution",
        Record::Error(_) => "error",
        Record::Decision(_) => "decision",
    }
}

/// Aggregate over a batch of solutions.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub solved: usize,
    pub errors: usize,
    pub mean_eta: f64,
    /// Population variance of eta.
    pub var_eta: f64,
    /// Mean support fraction over every placement.
    pub mean_support: f64,
    pub violations: usize,
    pub wall_time_s: f64,
}

impl Summary {
    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a Record>) -> Self {
        let mut etas = Vec::new();
        let mut support_sum = 0.0;
        let mut support_n = 0usize;
        let mut s = Summary::default();
        for r in records {
            match r {
                Record::Solution(sol) => {
                    etas.push(sol.eta);
                    for (i, step) in sol.steps.iter().enumerate() {
                        support_sum += step.support.to_f64();
                        support_n += 1;
                        let placements = sol.placements();
                        let p = placements[i];
                        if !audit_placement(&p.cuboid, p.weight, &placements[..i], &sol.instance.params).passed() {
                            s.violations += 1;
                        }
                    }
                    s.wall_time_s += sol.wall_time_ms.unwrap_or(0.0) / 1000.0;
                }
                Record::Error(_) => s.errors += 1,
                _ => {}
            }
        }
        s.solved = etas.len();
        if !etas.is_empty() {
            let n = etas.len() as f64;
            s.mean_eta = etas.iter().sum::<f64>() / n;
            s.var_eta = etas.iter().map(|e| (e - s.mean_eta).powi(2)).sum::<f64>() / n;
        }
        if support_n > 0 {
            s.mean_support = support_sum / support_n as f64;
        }
        s
    }

    pub fn render(&self) -> String {
        format!(
            "solved       {}\nerrors       {}\nmean eta     {:.2}% ± {:.4}\nmean support {:.4}\nviolations   {}\nwall time    {:.2}s\n",
            self.solved,
            self.errors,
            100.0 * self.mean_eta,
            self.var_eta,
            self.mean_support,
            self.violations,
            self.wall_time_s
        )
    }
}

/// One cuboid of an exported layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutCuboid {
    pub step: usize,
    pub item: usize,
    pub x: i64,
    pub y: i64,
    pub z: i64,
    pub l: i64,
    pub w: i64,
    pub h: i64,
    pub weight: f64,
}

/// Structured layout for external viewers. Carries the full solution so it
/// can be loaded back and re-verified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutDocument {
    pub schema_version: String,
    pub bin: Option<Dims>,
    pub cuboids: Vec<LayoutCuboid>,
    pub solution: Option<SolutionRecord>,
}

impl LayoutDocument {
    pub fn empty() -> Self {
        Self { schema_version: SCHEMA_VERSION.into(), bin: None, cuboids: Vec::new(), solution: None }
    }

    pub fn from_solution(record: &SolutionRecord) -> Self {
        let cuboids = record
            .placements()
            .iter()
            .enumerate()
            .map(|(step, p)| LayoutCuboid {
                step,
                item: p.item,
                x: p.cuboid.x,
                y: p.cuboid.y,
                z: p.cuboid.z,
                l: p.cuboid.l,
                w: p.cuboid.w,
                h: p.cuboid.h,
                weight: p.weight,
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION.into(),
            bin: Some(record.instance.bin),
            cuboids,
            solution: Some(record.clone()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses and re-verifies an exported layout.
    pub fn load(json: &str) -> Result<Self> {
        let doc: LayoutDocument = serde_json::from_str(json)?;
        check_version(&doc.schema_version)?;
        if let Some(sol) = &doc.solution {
            verify_solution(sol)?;
            if LayoutDocument::from_solution(sol).cuboids != doc.cuboids {
                return Err(PackError::Verification("layout cuboids disagree with the embedded solution".into()));
            }
        } else if !doc.cuboids.is_empty() {
            return Err(PackError::Verification("layout has cuboids but no solution".into()));
        }
        Ok(doc)
    }
}

/// Wavefront OBJ text with one closed cuboid object per placement.
pub fn layout_obj(doc: &LayoutDocument) -> String {
    let mut out = String::from("# stablepack layout\n");
    if let Some(bin) = doc.bin {
        out.push_str(&format!("# bin {} {} {}\n", bin.l, bin.w, bin.h));
    }
    for (n, c) in doc.cuboids.iter().enumerate() {
        out.push_str(&format!("o step{}_item{}\n", c.step, c.item));
        let (x0, y0, z0) = (c.x, c.y, c.z);
        let (x1, y1, z1) = (c.x + c.l, c.y + c.w, c.z + c.h);
        for (x, y, z) in [
            (x0, y0, z0),
            (x1, y0, z0),
            (x1, y1, z0),
            (x0, y1, z0),
            (x0, y0, z1),
            (x1, y0, z1),
            (x1, y1, z1),
            (x0, y1, z1),
        ] {
            out.push_str(&format!("v {x} {y} {z}\n"));
        }
        let b = 8 * n + 1;
        for face in [[0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4], [1, 2, 6, 5], [2, 3, 7, 6], [3, 0, 4, 7]] {
            out.push_str(&format!("f {} {} {} {}\n", b + face[0], b + face[1], b + face[2], b + face[3]));
        }
    }
    out
}
