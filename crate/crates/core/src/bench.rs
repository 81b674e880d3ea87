//! Experiment harness: LP-bound dominance, timing sweeps and performance
//! profiles, with plot-ready CSV output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::instgen::{batch_specs, generate, GenSpec, Generator};
use crate::milp::{solve_bb, solve_lp, BbLimits, LpStatus, MilpStatus};
use crate::models::{build_model, extract_selection, Formulation};
use crate::oracle::solve_dp;

/// LP bounds closer than this count as ties.
pub const DOMINANCE_TOL: f64 = 1e-7;

/// Pairwise strict-dominance counts of LP relaxation bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceTable {
    pub models: Vec<Formulation>,
    /// `counts[r][c]`: instances where model `r`'s bound strictly exceeds
    /// model `c`'s. The diagonal stays zero.
    pub counts: Vec<Vec<usize>>,
    /// Instances that entered the comparison.
    pub instances: usize,
    /// Instances dropped because some relaxation failed.
    pub excluded: usize,
    /// LP bound per compared instance and model.
    pub bounds: Vec<Vec<f64>>,
}

impl DominanceTable {
    /// Build the table from per-instance bound vectors (one entry per model).
    pub fn from_bounds(models: Vec<Formulation>, bounds: Vec<Vec<f64>>, excluded: usize) -> Self {
        let k = models.len();
        let mut counts = vec![vec![0; k]; k];
        for row in &bounds {
            for r in 0..k {
                for c in 0..k {
                    if r != c && row[r] > row[c] + DOMINANCE_TOL {
                        counts[r][c] += 1;
                    }
                }
            }
        }
        Self { models, counts, instances: bounds.len(), excluded, bounds }
    }

    /// Row average in percent; `None` when there is nothing to compare.
    pub fn pct(&self, r: usize) -> Option<f64> {
        let cells = (self.models.len().saturating_sub(1)) * self.instances;
        if cells == 0 {
            return None;
        }
        let wins: usize = self.counts[r].iter().sum();
        Some(100.0 * wins as f64 / cells as f64)
    }

    pub fn index_of(&self, f: Formulation) -> Option<usize> {
        self.models.iter().position(|&m| m == f)
    }

    /// Fraction of the instances where `r` strictly beats `c`.
    pub fn share(&self, r: Formulation, c: Formulation) -> Option<f64> {
        let (r, c) = (self.index_of(r)?, self.index_of(c)?);
        (self.instances > 0).then(|| self.counts[r][c] as f64 / self.instances as f64)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row_model", "col_model", "count", "row_pct"])?;
        for (r, rm) in self.models.iter().enumerate() {
            let pct = self.pct(r).map_or(String::new(), |v| format!("{v:.2}"));
            for (c, cm) in self.models.iter().enumerate() {
                if r == c {
                    continue;
                }
                w.write_record([rm.tag(), cm.tag(), &self.counts[r][c].to_string(), &pct])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for DominanceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# LP-bound dominance over {} instances ({} excluded); ties within {DOMINANCE_TOL:e}",
            self.instances, self.excluded
        )?;
        write!(f, "{:>6}", "")?;
        for m in &self.models {
            write!(f, " {:>6}", m.label())?;
        }
        writeln!(f, " {:>7}", "%")?;
        for (r, rm) in self.models.iter().enumerate() {
            write!(f, "{:>6}", rm.label())?;
            for c in 0..self.models.len() {
                if r == c {
                    write!(f, " {:>6}", "-")?;
                } else {
                    write!(f, " {:>6}", self.counts[r][c])?;
                }
            }
            match self.pct(r) {
                Some(p) => writeln!(f, " {p:>7.2}")?,
                None => writeln!(f, " {:>7}", "")?,
            }
        }
        Ok(())
    }
}

/// One LP-bound experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LbManifest {
    pub generator: Generator,
    pub n: usize,
    pub p: usize,
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
    pub models: Vec<Formulation>,
}

/// LP relaxation bounds of every model on `count` generated instances.
pub fn run_lb_experiment(
    generator: Generator,
    n: usize,
    p: usize,
    count: usize,
    base_seed: u64,
    models: &[Formulation],
) -> Result<DominanceTable> {
    if models.contains(&Formulation::Ip1) && p != 1 {
        return Err(Error::Unsupported("IP-1 is only applicable to p = 1".into()));
    }
    let specs = batch_specs(generator, n, p, base_seed, count)?;
    let rows: Vec<Option<Vec<f64>>> = specs
        .par_iter()
        .map(|spec| {
            let inst = generate(spec).ok()?;
            models
                .iter()
                .map(|&f| {
                    let m = build_model(&inst, f).ok()?;
                    let lp = solve_lp(&m).ok()?;
                    (lp.status == LpStatus::Optimal).then(|| lp.objective.expect("optimal"))
                })
                .collect()
        })
        .collect();
    let excluded = rows.iter().filter(|r| r.is_none()).count();
    let bounds = rows.into_iter().flatten().collect();
    Ok(DominanceTable::from_bounds(models.to_vec(), bounds, excluded))
}

impl LbManifest {
    pub fn run(&self) -> Result<DominanceTable> {
        run_lb_experiment(self.generator, self.n, self.p, self.count, self.seed, &self.models)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunStatus {
    Optimal,
    Infeasible,
    TimeLimit,
    Error,
}

impl RunStatus {
    pub fn tag(self) -> &'static str {
        match self {
            RunStatus::Optimal => "optimal",
            RunStatus::Infeasible => "infeasible",
            RunStatus::TimeLimit => "time_limit",
            RunStatus::Error => "error",
        }
    }

    /// Finished within the limits with a proven answer.
    pub fn solved(self) -> bool {
        matches!(self, RunStatus::Optimal | RunStatus::Infeasible)
    }
}

impl FromStr for RunStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(RunStatus::Optimal),
            "infeasible" => Ok(RunStatus::Infeasible),
            "time_limit" => Ok(RunStatus::TimeLimit),
            "error" => Ok(RunStatus::Error),
            _ => Err(Error::Input(format!("unknown run status {s:?}"))),
        }
    }
}

impl From<MilpStatus> for RunStatus {
    fn from(s: MilpStatus) -> Self {
        match s {
            MilpStatus::Optimal => RunStatus::Optimal,
            MilpStatus::Infeasible => RunStatus::Infeasible,
            MilpStatus::TimeLimit => RunStatus::TimeLimit,
        }
    }
}

/// Outcome of one (instance, model) solve.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance_id: String,
    pub generator: String,
    pub n: usize,
    pub p: usize,
    pub seed: u64,
    pub model: String,
    pub status: RunStatus,
    pub objective: Option<f64>,
    pub bound: Option<f64>,
    /// Seconds; `+inf` unless the run was solved.
    pub wall_time: f64,
    pub nodes: usize,
}

pub const RESULTS_HEADER: [&str; 11] = [
    "instance_id",
    "generator",
    "n",
    "p",
    "seed",
    "model",
    "status",
    "objective",
    "bound",
    "wall_time_s",
    "nodes",
];

fn fmt_num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

fn parse_num(s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| Error::Input(format!("bad number {s:?}")))
}

fn parse_opt(s: &str) -> Result<Option<f64>> {
    if s.is_empty() { Ok(None) } else { parse_num(s).map(Some) }
}

pub fn write_records<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in records {
        w.write_record([
            r.instance_id.clone(),
            r.generator.clone(),
            r.n.to_string(),
            r.p.to_string(),
            r.seed.to_string(),
            r.model.clone(),
            r.status.tag().to_string(),
            r.objective.map_or(String::new(), fmt_num),
            r.bound.map_or(String::new(), fmt_num),
            fmt_num(r.wall_time),
            r.nodes.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(RESULTS_HEADER.iter().copied()) {
        return Err(Error::Input("results header does not match the expected columns".into()));
    }
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let int = |i: usize| {
            field(i).parse::<u64>().map_err(|_| Error::Input(format!("bad integer {:?}", field(i))))
        };
        out.push(RunRecord {
            instance_id: field(0).to_string(),
            generator: field(1).to_string(),
            n: int(2)? as usize,
            p: int(3)? as usize,
            seed: int(4)?,
            model: field(5).to_string(),
            status: field(6).parse()?,
            objective: parse_opt(field(7))?,
            bound: parse_opt(field(8))?,
            wall_time: parse_num(field(9))?,
            nodes: int(10)? as usize,
        });
    }
    Ok(out)
}

/// Instances for a timing sweep: `count` seeds starting at `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchSpec {
    pub generator: Generator,
    pub n: usize,
    pub p: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub count: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingManifest {
    pub batches: Vec<BatchSpec>,
    pub models: Vec<Formulation>,
    /// Seconds per solve.
    pub time_limit: f64,
    #[serde(default)]
    pub node_limit: Option<usize>,
    /// Compare optimal objectives with the DP oracle up to this `n`.
    #[serde(default)]
    pub oracle_max_n: Option<usize>,
}

impl TimingManifest {
    pub fn specs(&self) -> Result<Vec<GenSpec>> {
        let mut out = Vec::new();
        for b in &self.batches {
            out.extend(batch_specs(b.generator, b.n, b.p, b.seed, b.count)?);
        }
        Ok(out)
    }

    pub fn limits(&self) -> BbLimits {
        BbLimits {
            time_limit: Some(std::time::Duration::from_secs_f64(self.time_limit)),
            node_limit: self.node_limit,
        }
    }
}

/// Solve `inst` with formulation `f` and summarise the run.
pub fn run_one(spec: &GenSpec, inst: &Instance, f: Formulation, limits: BbLimits) -> RunRecord {
    let mut rec = RunRecord {
        instance_id: spec.id(),
        generator: spec.generator.tag().to_string(),
        n: spec.n,
        p: spec.p,
        seed: spec.seed,
        model: f.tag().to_string(),
        status: RunStatus::Error,
        objective: None,
        bound: None,
        wall_time: f64::INFINITY,
        nodes: 0,
    };
    let Ok(m) = build_model(inst, f) else {
        return rec;
    };
    let Ok(res) = solve_bb(&m, limits) else {
        return rec;
    };
    // an incumbent that fails extraction is a solver defect, not a result
    if let Some(sol) = &res.solution {
        if extract_selection(&m, inst, sol).is_err() {
            return rec;
        }
    }
    rec.status = res.status.into();
    rec.objective = res.objective;
    rec.bound = res.bound;
    rec.nodes = res.nodes;
    if rec.status.solved() {
        rec.wall_time = res.wall_time;
    }
    rec
}

/// Worker count from `INTERDICT_THREADS`, else available cores minus one.
pub fn worker_threads() -> usize {
    std::env::var("INTERDICT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map_or(1, |c| c.get().saturating_sub(1).max(1))
        })
}

/// Run every (instance, model) pair of the manifest on `threads` workers.
///
/// Each worker runs one timed solve at a time. Records come back ordered by
/// instance then model, whatever the execution order.
pub fn run_timing_experiment(manifest: &TimingManifest, threads: usize) -> Result<Vec<RunRecord>> {
    let specs = manifest.specs()?;
    let instances: Vec<(GenSpec, Result<Instance>)> = specs.iter().map(|s| (*s, generate(s))).collect();
    let jobs: Vec<(usize, Formulation)> = (0..instances.len())
        .flat_map(|i| manifest.models.iter().map(move |&f| (i, f)))
        .collect();
    let limits = manifest.limits();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?;
    let mut records: Vec<RunRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, f)| {
                let (spec, inst) = &instances[i];
                match inst {
                    Ok(inst) => run_one(spec, inst, f, limits),
                    Err(_) => RunRecord {
                        instance_id: spec.id(),
                        generator: spec.generator.tag().to_string(),
                        n: spec.n,
                        p: spec.p,
                        seed: spec.seed,
                        model: f.tag().to_string(),
                        status: RunStatus::Error,
                        objective: None,
                        bound: None,
                        wall_time: f64::INFINITY,
                        nodes: 0,
                    },
                }
            })
            .collect()
    });
    records.sort_by(|a, b| (&a.instance_id, &a.model).cmp(&(&b.instance_id, &b.model)));
    Ok(records)
}

/// Disagreements among optimal objectives within each instance, and with
/// the DP oracle for instances up to `oracle_max_n` items.
pub fn cross_check(records: &[RunRecord], oracle_max_n: Option<usize>) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let mut by_instance: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        by_instance.entry(&r.instance_id).or_default().push(r);
    }
    for (id, runs) in by_instance {
        let optimal: BTreeSet<i64> = runs
            .iter()
            .filter(|r| r.status == RunStatus::Optimal)
            .filter_map(|r| r.objective.map(|o| o.round() as i64))
            .collect();
        if optimal.len() > 1 {
            problems.push(format!("{id}: models disagree on the optimum {optimal:?}"));
        }
        let first = runs[0];
        if oracle_max_n.is_some_and(|max| first.n <= max) {
            let g: Generator = first.generator.parse()?;
            let inst = generate(&GenSpec::new(g, first.n, first.p, first.seed)?)?;
            let dp = solve_dp(&inst)?;
            for r in &runs {
                let agree = match (r.status, dp.objective) {
                    (RunStatus::Optimal, Some(v)) => r.objective.map(|o| o.round() as i64) == Some(v as i64),
                    (RunStatus::Infeasible, None) => true,
                    (RunStatus::Optimal | RunStatus::Infeasible, _) => false,
                    _ => true,
                };
                if !agree {
                    problems.push(format!(
                        "{id}: {} reports {} {:?}, DP says {:?}",
                        r.model,
                        r.status.tag(),
                        r.objective,
                        dp.objective
                    ));
                }
            }
        }
    }
    Ok(problems)
}

/// Sampled performance profiles, one curve per model.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub models: Vec<String>,
    pub taus: Vec<f64>,
    /// `values[s][j]` is `k_s(taus[j])`.
    pub values: Vec<Vec<f64>>,
}

impl ProfileCurve {
    pub fn curve(&self, model: &str) -> Option<&[f64]> {
        self.models.iter().position(|m| m == model).map(|i| self.values[i].as_slice())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["model", "tau", "k_s"])?;
        for (s, model) in self.models.iter().enumerate() {
            for (j, tau) in self.taus.iter().enumerate() {
                w.write_record([model.clone(), fmt_num(*tau), fmt_num(self.values[s][j])])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// `points` log-spaced values on `[1, tau_max]`.
pub fn log_grid(tau_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..points)
            .map(|j| tau_max.powf(j as f64 / (points - 1) as f64))
            .collect(),
    }
}

/// Default profile grid: 200 points on `[1, 100]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(100.0, 200)
}

/// Fraction of instances on which each model is within a factor `tau` of
/// the fastest model. Unsolved runs count as infinitely slow; instances no
/// model solved count against every curve.
pub fn performance_profile(records: &[RunRecord], taus: &[f64]) -> Result<ProfileCurve> {
    let models: Vec<String> = records.iter().map(|r| r.model.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut grid: BTreeMap<&str, BTreeMap<&str, f64>> = BTreeMap::new();
    for r in records {
        let t = if r.status.solved() { r.wall_time } else { f64::INFINITY };
        if grid.entry(&r.instance_id).or_default().insert(&r.model, t).is_some() {
            return Err(Error::Input(format!("duplicate record for {} / {}", r.instance_id, r.model)));
        }
    }
    for (id, row) in &grid {
        if row.len() != models.len() {
            return Err(Error::Input(format!("instance {id} is missing runs for some models")));
        }
    }
    let instances = grid.len();
    let mut values = vec![vec![0.0; taus.len()]; models.len()];
    if instances > 0 {
        for row in grid.values() {
            let best = row.values().copied().filter(|t| t.is_finite()).fold(f64::INFINITY, f64::min);
            if !best.is_finite() {
                continue;
            }
            for (s, model) in models.iter().enumerate() {
                let ratio = row[model.as_str()] / best;
                for (j, &tau) in taus.iter().enumerate() {
                    if ratio <= tau {
                        values[s][j] += 1.0;
                    }
                }
            }
        }
        for curve in &mut values {
            for v in curve.iter_mut() {
                *v /= instances as f64;
            }
        }
    }
    Ok(ProfileCurve { models, taus: taus.to_vec(), values })
}
