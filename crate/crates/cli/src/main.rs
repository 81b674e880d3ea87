use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use interdict::bench::{self, LbManifest, TimingManifest};
use interdict::instance::fmt_items;
use interdict::instgen::{batch_specs, generate, Generator};
use interdict::milp::export::export;
use interdict::{
    build_model, extract_selection, phi, solve_bb, solve_dp, solve_enum, BbLimits, Error, ExactStatus, ExportFormat,
    Formulation, Instance, MilpStatus, Selection,
};
use interdict_cli::SolveReport;

const EXIT_INFEASIBLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_DISAGREE: u8 = 4;

#[derive(Parser)]
#[command(name = "interdict", version, about = "Robust selection under budgeted interdiction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instance files.
    Gen(GenArgs),
    /// Solve one instance.
    Solve(SolveArgs),
    /// Evaluate the adversary on a selection.
    Phi(PhiArgs),
    /// Cross-check every exact method on one instance.
    Oracle(OracleArgs),
    /// Write a model as LP or MPS text.
    Export(ExportArgs),
    /// LP-bound dominance experiment.
    BenchLb(BenchArgs),
    /// Timing experiment with performance profiles.
    BenchTime(BenchArgs),
    /// Performance profile from a results file.
    Profile(ProfileArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_from_str::<Generator>)]
    generator: Generator,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Model(Formulation),
    Dp,
    Enum,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "dp" => Ok(Method::Dp),
            "enum" => Ok(Method::Enum),
            other => other.parse().map(Method::Model).map_err(|e: Error| e.to_string()),
        }
    }
}

impl Method {
    fn tag(self) -> &'static str {
        match self {
            Method::Model(f) => f.tag(),
            Method::Dp => "dp",
            Method::Enum => "enum",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// ip1..ip5, dp or enum.
    #[arg(long, value_parser = parse_from_str::<Method>)]
    model: Method,
    /// Seconds for branch-and-bound; unlimited when absent.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PhiArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Selection bits, first character is item 1.
    #[arg(long)]
    x: String,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Known optimal objective to check against.
    #[arg(long)]
    expect: Option<u64>,
    #[arg(long)]
    time_limit: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Lp,
    Mps,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_parser = parse_from_str::<Formulation>)]
    model: Formulation,
    #[arg(long, value_enum)]
    format: FormatArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    records: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Largest ratio on the grid.
    #[arg(long, default_value_t = 100.0)]
    tau_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
}

fn parse_from_str<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| e.to_string())
}

/// A failure carrying its exit code.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity(_) | Error::Solver(_) | Error::Extraction(_) => EXIT_SOLVER,
            _ => EXIT_USAGE,
        };
        Fail { code, msg: e.to_string() }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type CmdResult = Result<u8, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Phi(a) => cmd_phi(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Export(a) => cmd_export(a),
        Command::BenchLb(a) => cmd_bench_lb(a),
        Command::BenchTime(a) => cmd_bench_time(a),
        Command::Profile(a) => cmd_profile(a),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("interdict: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn limits(secs: Option<f64>) -> Result<BbLimits, Fail> {
    match secs {
        None => Ok(BbLimits::unlimited()),
        Some(s) if s.is_finite() && s > 0.0 => Ok(BbLimits::seconds(s)),
        Some(s) => Err(Fail { code: EXIT_USAGE, msg: format!("time limit must be positive, got {s}") }),
    }
}

fn create_dir(dir: &Path) -> Result<(), Fail> {
    fs::create_dir_all(dir).map_err(|e| Fail { code: EXIT_USAGE, msg: format!("{}: {e}", dir.display()) })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail { code: EXIT_USAGE, msg: format!("{}: {e}", path.display()) })?;
    serde_json::from_str(&text).map_err(|e| Fail { code: EXIT_USAGE, msg: format!("{}: {e}", path.display()) })
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let specs = batch_specs(a.generator, a.n, a.p, a.seed, a.count)?;
    create_dir(&a.out)?;
    for spec in specs {
        let inst = generate(&spec)?;
        let path = a.out.join(format!("{}.json", spec.id()));
        inst.save(&path)?;
        println!("{}", path.display());
    }
    Ok(0)
}

fn run_method(inst: &Instance, method: Method, lim: BbLimits) -> Result<SolveReport, Fail> {
    let start = Instant::now();
    let exact = |res: interdict::ExactResult| SolveReport {
        model: method.tag().into(),
        status: match res.status {
            ExactStatus::Optimal => "optimal".into(),
            ExactStatus::Infeasible => "infeasible".into(),
        },
        objective: res.objective.map(|v| v as f64),
        bound: res.objective.map(|v| v as f64),
        items: res.best.as_ref().map(|s| s.items().iter().map(|i| i + 1).collect()),
        x: res.best.as_ref().map(Selection::to_bits),
        nodes: 0,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    match method {
        Method::Dp => Ok(exact(solve_dp(inst)?)),
        Method::Enum => Ok(exact(solve_enum(inst)?)),
        Method::Model(f) => {
            let m = build_model(inst, f)?;
            let res = solve_bb(&m, lim)?;
            let sel = match &res.solution {
                Some(sol) => Some(extract_selection(&m, inst, sol)?),
                None => None,
            };
            Ok(SolveReport {
                model: f.tag().into(),
                status: res.status.tag().into(),
                objective: res.objective,
                bound: res.bound,
                items: sel.as_ref().map(|s| s.items().iter().map(|i| i + 1).collect()),
                x: sel.as_ref().map(Selection::to_bits),
                nodes: res.nodes,
                wall_time_s: res.wall_time,
            })
        }
    }
}

fn load(path: &Path) -> Result<Instance, Fail> {
    Instance::load(path).map_err(|e| Fail { code: EXIT_USAGE, msg: format!("{}: {e}", path.display()) })
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let report = run_method(&inst, a.model, limits(a.time_limit)?)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(Error::from)?);
    } else {
        println!("status {}", report.status);
        if let Some(obj) = report.objective {
            println!("objective {obj}");
        }
        if let Some(items) = &report.items {
            let zero: Vec<usize> = items.iter().map(|i| i - 1).collect();
            println!("items {}", fmt_items(&zero));
        }
        if report.status == MilpStatus::TimeLimit.tag() {
            if let Some(b) = report.bound {
                println!("bound {b}");
            }
        }
    }
    Ok(match report.status.as_str() {
        "infeasible" => EXIT_INFEASIBLE,
        _ => 0,
    })
}

fn cmd_phi(a: PhiArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let x = Selection::from_bits(&inst, &a.x)?;
    let res = phi(&inst, &x)?;
    println!("{}", res.value);
    println!("attacked {}", fmt_items(&res.attacked));
    Ok(0)
}

fn cmd_oracle(a: OracleArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let lim = limits(a.time_limit)?;
    let mut methods = vec![Method::Dp];
    if inst.n() <= interdict::oracle::ENUM_MAX_N {
        methods.push(Method::Enum);
    }
    methods.extend(Formulation::applicable(inst.p()).into_iter().map(Method::Model));

    let mut answers = Vec::new();
    let mut unresolved = false;
    for m in methods {
        let rep = run_method(&inst, m, lim)?;
        let answer = match rep.status.as_str() {
            "optimal" => rep.objective.map(|o| o.round() as u64),
            "infeasible" => None,
            _ => {
                unresolved = true;
                println!("{:<6} {}", m.tag(), rep.status);
                continue;
            }
        };
        println!("{:<6} {}", m.tag(), answer.map_or("infeasible".into(), |v| v.to_string()));
        answers.push((m.tag(), answer));
    }
    let reference = match a.expect {
        Some(v) => Some(Some(v)),
        None => answers.first().map(|(_, v)| *v),
    };
    let bad: Vec<&str> = answers.iter().filter(|(_, v)| Some(*v) != reference).map(|(t, _)| *t).collect();
    if !bad.is_empty() {
        eprintln!("interdict: disagreement from {}", bad.join(", "));
        return Ok(EXIT_DISAGREE);
    }
    if unresolved {
        eprintln!("interdict: some models hit the time limit");
        return Ok(EXIT_SOLVER);
    }
    println!("agree");
    Ok(0)
}

fn cmd_export(a: ExportArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let m = build_model(&inst, a.model)?;
    let fmt = match a.format {
        FormatArg::Lp => ExportFormat::LpText,
        FormatArg::Mps => ExportFormat::Mps,
    };
    fs::write(&a.out, export(&m, fmt))?;
    Ok(0)
}

fn cmd_bench_lb(a: BenchArgs) -> CmdResult {
    let manifest: LbManifest = read_json(&a.manifest)?;
    let table = manifest.run()?;
    create_dir(&a.out)?;
    table.write_csv(fs::File::create(a.out.join("dominance.csv"))?)?;
    print!("{table}");
    Ok(0)
}

fn cmd_bench_time(a: BenchArgs) -> CmdResult {
    let manifest: TimingManifest = read_json(&a.manifest)?;
    if !(manifest.time_limit.is_finite() && manifest.time_limit > 0.0) {
        return Err(Fail { code: EXIT_USAGE, msg: "manifest time_limit must be positive".into() });
    }
    let records = bench::run_timing_experiment(&manifest, bench::worker_threads())?;
    create_dir(&a.out)?;
    bench::write_records(&records, fs::File::create(a.out.join("results.csv"))?)?;
    let prof = bench::performance_profile(&records, &bench::default_grid())?;
    prof.write_csv(fs::File::create(a.out.join("profile.csv"))?)?;
    for r in &records {
        println!("{} {} {} {}", r.instance_id, r.model, r.status.tag(), r.wall_time);
    }
    let problems = bench::cross_check(&records, manifest.oracle_max_n)?;
    if !problems.is_empty() {
        for p in &problems {
            eprintln!("interdict: {p}");
        }
        return Ok(EXIT_DISAGREE);
    }
    Ok(0)
}

fn cmd_profile(a: ProfileArgs) -> CmdResult {
    if !(a.tau_max >= 1.0) || a.points == 0 {
        return Err(Fail { code: EXIT_USAGE, msg: "need tau_max >= 1 and at least one point".into() });
    }
    let records = bench::read_records(fs::File::open(&a.records)?)?;
    let prof = bench::performance_profile(&records, &bench::log_grid(a.tau_max, a.points))?;
    prof.write_csv(fs::File::create(&a.out)?)?;
    Ok(0)
}
