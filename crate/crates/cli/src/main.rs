//! `modcert`: sampling, scoring and certification front end.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use modcert_core::degree_general::{
    self, supercritical_grid, DegreeProfile, DEFAULT_ELLS, DEFAULT_EPS_PRIMES, DEFAULT_T_MAX,
};
use modcert_core::graph::{sample_configuration, sample_simple, DegreeSequence, MultiGraph, DEFAULT_REJECTION_BUDGET};
use modcert_core::io::{self, Cell, Table};
use modcert_core::modularity::{brute_force_qstar, component_baseline, modularity_report, DEFAULT_BRUTE_FORCE_LIMIT};
use modcert_core::ode_lower::{self, cherry_trace, lower_certificate_in, schedule_of, DEFAULT_BRACKET, DEFAULT_TOL};
use modcert_core::parallel::{self, Execution};
use modcert_core::phase_sim::{simulate, simulate_trials, simulate_urns, trajectory_table};
use modcert_core::rng::trial_seeds;
use modcert_core::upper_bound::{certify_upper_with, g_grid, Constants, DEFAULT_GRID_STEP};
use modcert_core::Error;

const EXIT_INVALID: u8 = 2;
const EXIT_CERTIFICATE_FAILED: u8 = 3;

/// Random seed: a 64-bit integer or `auto`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SeedArg {
    Fixed(u64),
    Auto,
}

impl FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(SeedArg::Auto)
        } else {
            s.parse().map(SeedArg::Fixed).map_err(|_| format!("seed must be a u64 or `auto`, got {s:?}"))
        }
    }
}

impl SeedArg {
    fn resolve(self) -> u64 {
        match self {
            SeedArg::Fixed(s) => s,
            SeedArg::Auto => rand::random(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "modcert", version, about = "Modularity bounds for random graphs: sampling, scoring and certificates")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "MODCERT_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a configuration multigraph (or a simple graph by rejection).
    Sample(SampleArgs),
    /// Score a partition, or the component baseline when none is given.
    Score(ScoreArgs),
    /// Exact optimum by enumerating all partitions of a small graph.
    Brute(BruteArgs),
    /// Lower-bound certificate for random cubic graphs.
    CertifyLower(LowerArgs),
    /// Upper-bound certificate for random cubic graphs.
    CertifyUpper(UpperArgs),
    /// Run the three growth phases on sampled cubic graphs.
    SimulatePhases(PhaseArgs),
    /// Limiting constant of `n(1 - q*)` for a subcritical profile.
    SubcriticalC(SubcriticalArgs),
    /// Dense-set construction for a supercritical profile over a grid.
    Supercritical(SupercriticalArgs),
    /// Two-slot urn occupancy.
    Urns(UrnArgs),
}

#[derive(Debug, Args)]
struct GraphSource {
    /// Degree sequence, e.g. `3:1000` or `1:4,3:2`.
    #[arg(long, conflicts_with = "profile")]
    sequence: Option<String>,
    /// Degree probabilities, e.g. `1:0.3,3:0.7`; needs `--n`.
    #[arg(long, requires = "n")]
    profile: Option<String>,
    #[arg(long)]
    n: Option<usize>,
}

impl GraphSource {
    fn sequence(&self) -> Result<DegreeSequence, Error> {
        match (&self.sequence, &self.profile, self.n) {
            (Some(s), _, _) => s.parse(),
            (None, Some(p), Some(n)) => p.parse::<DegreeProfile>()?.to_sequence(n),
            _ => Err(Error::Parse("give --sequence, or --profile with --n".into())),
        }
    }
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value = "auto")]
    seed: SeedArg,
    /// Resample until the graph has no loops or parallel edges.
    #[arg(long)]
    simple: bool,
    #[arg(long, default_value_t = DEFAULT_REJECTION_BUDGET)]
    max_retries: usize,
    /// Write the edge list here.
    #[arg(long)]
    edges: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    partition: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BruteArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
    limit: usize,
}

#[derive(Debug, Args)]
struct LowerArgs {
    #[arg(long, default_value_t = DEFAULT_BRACKET.0)]
    lo: f64,
    #[arg(long, default_value_t = DEFAULT_BRACKET.1)]
    hi: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the cherry-phase curves at this eps as CSV (needs `--trace-out`).
    #[arg(long, requires = "trace_out")]
    trace: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    trace_step: f64,
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct UpperArgs {
    #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
    grid_step: f64,
    /// Write `(eps, g, g')` on the certificate grid as CSV.
    #[arg(long)]
    g_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PhaseArgs {
    #[arg(long, default_value_t = 200_000)]
    n: usize,
    /// Seed-phase size as a fraction of `n`; defaults to the optimizer's choice.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value = "auto")]
    seed: SeedArg,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Write the first trial's trajectory as CSV.
    #[arg(long)]
    trajectory: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SubcriticalArgs {
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    t_max: usize,
    /// Also estimate the constant from samples of this order.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value = "auto")]
    seed: SeedArg,
    /// Per-trial estimates as CSV.
    #[arg(long, requires = "n")]
    trials_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SupercriticalArgs {
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_EPS_PRIMES)]
    eps_prime: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ELLS)]
    ell: Vec<usize>,
    #[arg(long, default_value = "auto")]
    seed: SeedArg,
    /// Grid results as CSV.
    #[arg(long)]
    grid_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct UrnArgs {
    /// Number of urns.
    #[arg(long)]
    a: usize,
    /// Half the number of balls.
    #[arg(long)]
    b: usize,
    #[arg(long, default_value = "auto")]
    seed: SeedArg,
}

/// Result of a command: its JSON document and whether a certificate failed.
struct Outcome {
    doc: Value,
    certificate_failed: bool,
}

impl Outcome {
    fn ok(command: &str, config: Value, result: impl Serialize) -> Result<Self, Error> {
        Ok(Outcome { doc: document(command, config, result)?, certificate_failed: false })
    }
}

fn document(command: &str, config: Value, result: impl Serialize) -> Result<Value, Error> {
    let result = serde_json::to_value(result).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(json!({ "command": command, "config": config, "result": result }))
}

fn read_graph(path: &Path) -> Result<MultiGraph, Error> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    io::read_edge_list(BufReader::new(file))
}

fn write_table(table: &Table, path: &Path) -> Result<(), Error> {
    io::write_file(path, &table.to_csv_string()?)
}

fn run_sample(args: &SampleArgs) -> Result<Outcome, Error> {
    let seq = args.source.sequence()?;
    let seed = args.seed.resolve();
    let g = if args.simple { sample_simple(&seq, seed, args.max_retries)? } else { sample_configuration(&seq, seed) };
    if let Some(path) = &args.edges {
        io::write_file(path, &io::format_edge_list(&g))?;
    }
    let config = json!({
        "sequence": seq.to_string(),
        "seed": seed,
        "simple": args.simple,
        "max_retries": args.max_retries,
        "edges": args.edges,
    });
    let result = json!({
        "n": g.n(),
        "m": g.m(),
        "loops": g.loop_count(),
        "is_simple": g.is_simple(),
        "triangles": g.triangle_count(),
    });
    Outcome::ok("sample", config, result)
}

fn run_score(args: &ScoreArgs) -> Result<Outcome, Error> {
    let g = read_graph(&args.graph)?;
    let config = json!({ "graph": args.graph, "partition": args.partition });
    match &args.partition {
        Some(path) => {
            let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let partition = io::read_partition(BufReader::new(file), g.n())?;
            Outcome::ok("score", config, modularity_report(&g, &partition)?)
        }
        None => {
            let base = component_baseline(&g)?;
            let result = json!({
                "q": base.q,
                "guarantee": base.guarantee,
                "components": base.components,
                "blocks": base.partition.blocks(),
            });
            Outcome::ok("score", config, result)
        }
    }
}

fn run_brute(args: &BruteArgs) -> Result<Outcome, Error> {
    let g = read_graph(&args.graph)?;
    let (q, partition) = brute_force_qstar(&g, args.limit)?;
    let config = json!({ "graph": args.graph, "limit": args.limit });
    Outcome::ok("brute", config, json!({ "q_star": q, "blocks": partition.blocks() }))
}

fn run_certify_lower(args: &LowerArgs) -> Result<Outcome, Error> {
    let cert = lower_certificate_in(args.lo, args.hi, args.tol)?;
    if let (Some(eps), Some(path)) = (args.trace, &args.trace_out) {
        let mut table = Table::new(["t", "x0", "x1", "x2", "a", "h"]);
        for r in cherry_trace(eps, args.trace_step)? {
            table.push(vec![r.t.into(), r.x0.into(), r.x1.into(), r.x2.into(), r.a.into(), r.h.into()])?;
        }
        write_table(&table, path)?;
    }
    let config = json!({
        "lo": args.lo,
        "hi": args.hi,
        "tol": args.tol,
        "trace": args.trace,
        "trace_step": args.trace_step,
        "trace_out": args.trace_out,
    });
    let failed = !cert.valid;
    Ok(Outcome { doc: document("certify-lower", config, cert)?, certificate_failed: failed })
}

fn run_certify_upper(args: &UpperArgs, exec: Execution) -> Result<Outcome, Error> {
    let consts = Constants::default();
    let cert = certify_upper_with(&consts, args.grid_step, exec)?;
    if let Some(path) = &args.g_csv {
        let mut table = Table::new(["eps", "g", "g_prime"]);
        for r in g_grid(&consts, cert.eps0, 0.5, args.grid_step) {
            table.push(vec![r.eps.into(), r.g.into(), r.g_prime.into()])?;
        }
        write_table(&table, path)?;
    }
    let config = json!({ "grid_step": args.grid_step, "g_csv": args.g_csv });
    let failed = !cert.valid;
    Ok(Outcome { doc: document("certify-upper", config, cert)?, certificate_failed: failed })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

fn run_simulate_phases(args: &PhaseArgs, exec: Execution) -> Result<Outcome, Error> {
    let eps = match args.eps {
        Some(e) => e,
        None => ode_lower::optimize_eps(DEFAULT_BRACKET.0, DEFAULT_BRACKET.1, DEFAULT_TOL)?,
    };
    let seed = args.seed.resolve();
    let seeds = trial_seeds(seed, args.trials.max(1));
    let mut runs = simulate_trials(args.n, eps, &seeds[1..], exec)?;
    let first = simulate(args.n, eps, seeds[0], args.trajectory.is_some())?;
    if let Some(path) = &args.trajectory {
        write_table(&trajectory_table(&first.trajectory, args.n, Some(eps))?, path)?;
    }
    runs.insert(0, first);
    let schedule = schedule_of(eps).ok();
    let config = json!({
        "n": args.n,
        "eps": eps,
        "seed": seed,
        "trials": seeds.len(),
        "trajectory": args.trajectory,
    });
    let result = json!({
        "mean_q": mean(runs.iter().map(|r| r.q)),
        "mean_v3": mean(runs.iter().map(|r| r.v3)),
        "mean_qr_c3": mean(runs.iter().map(|r| r.qr_c3)),
        "mean_qr_closed": mean(runs.iter().map(|r| r.qr_closed)),
        "max_ode_deviation": runs.iter().map(|r| r.ode_deviation).fold(0.0, f64::max),
        "closed_form": schedule.map(|s| json!({ "v3": s.v3, "e3": s.e3, "qr": s.qr, "bound": s.bound() })),
        "runs": runs,
    });
    Outcome::ok("simulate-phases", config, result)
}

fn run_subcritical(args: &SubcriticalArgs, exec: Execution) -> Result<Outcome, Error> {
    let profile: DegreeProfile = args.profile.parse()?;
    let series = degree_general::subcritical_constant_with(&profile, args.t_max, exec)?;
    let seed = args.seed.resolve();
    let empirical = match args.n {
        Some(n) => Some(degree_general::subcritical_empirical_with(&profile, n, args.trials, seed, exec)?),
        None => None,
    };
    if let (Some(path), Some(emp)) = (&args.trials_csv, &empirical) {
        let mut table = Table::new(["trial", "seed", "c_hat", "q"]);
        let mean_degree = profile.mean_degree();
        for (i, (&c, &s)) in emp.per_trial.iter().zip(&emp.seeds).enumerate() {
            let q = 1.0 - c / (mean_degree * emp.n as f64);
            table.push(vec![Cell::from(i), Cell::Text(s.to_string()), c.into(), q.into()])?;
        }
        write_table(&table, path)?;
    }
    let config = json!({
        "profile": args.profile,
        "t_max": args.t_max,
        "n": args.n,
        "trials": args.trials,
        "seed": empirical.as_ref().map(|_| seed),
        "trials_csv": args.trials_csv,
    });
    let result = json!({
        "criterion": profile.criterion(),
        "series": series,
        "empirical": empirical.map(|e| json!({ "c_hat": e.c_hat, "n": e.n, "trials": e.per_trial.len() })),
    });
    Outcome::ok("subcritical-c", config, result)
}

fn run_supercritical(args: &SupercriticalArgs, exec: Execution) -> Result<Outcome, Error> {
    let profile: DegreeProfile = args.profile.parse()?;
    let seed = args.seed.resolve();
    let runs = supercritical_grid(&profile, args.n, &args.eps_prime, &args.ell, seed, exec)?;
    let pairs: Vec<(f64, usize)> = args.eps_prime.iter().flat_map(|&e| args.ell.iter().map(move |&l| (e, l))).collect();
    let mut entries = Vec::new();
    let mut table = Table::new([
        "eps_prime",
        "ell",
        "s_order",
        "aprime_order",
        "amax_order",
        "amax_edges",
        "density_margin",
        "q_achieved",
        "baseline",
        "component_q",
    ]);
    for ((e, l), run) in pairs.iter().zip(runs) {
        match run {
            Ok(r) => {
                table.push(vec![
                    r.eps_prime.into(),
                    Cell::from(r.ell),
                    Cell::from(r.s_order),
                    Cell::from(r.aprime_order),
                    Cell::from(r.amax_order),
                    Cell::from(r.amax_edges),
                    r.density_margin.into(),
                    r.q_achieved.into(),
                    r.baseline.into(),
                    r.component_q.into(),
                ])?;
                entries.push(serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?);
            }
            Err(err) => entries.push(json!({ "eps_prime": e, "ell": l, "error": err.to_string() })),
        }
    }
    if let Some(path) = &args.grid_csv {
        write_table(&table, path)?;
    }
    let best = entries
        .iter()
        .filter_map(|r| Some((r.get("q_achieved")?.as_f64()? - r.get("baseline")?.as_f64()?, r)))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(margin, r)| json!({ "eps_prime": r["eps_prime"], "ell": r["ell"], "margin_over_baseline": margin }));
    let config = json!({
        "profile": args.profile,
        "n": args.n,
        "eps_prime": args.eps_prime,
        "ell": args.ell,
        "seed": seed,
        "grid_csv": args.grid_csv,
    });
    let result = json!({ "criterion": profile.criterion(), "best": best, "runs": entries });
    Outcome::ok("supercritical", config, result)
}

fn run_urns(args: &UrnArgs) -> Result<Outcome, Error> {
    let seed = args.seed.resolve();
    let filled = simulate_urns(args.a, args.b, seed)?;
    let predicted = if args.a > 0 { ode_lower::urn_fraction(args.a as f64, args.b as f64)? } else { 0.0 };
    let config = json!({ "a": args.a, "b": args.b, "seed": seed });
    Outcome::ok("urns", config, json!({ "filled": filled, "predicted": predicted }))
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    let exec = Execution::default();
    parallel::with_jobs(cli.jobs, || match &cli.command {
        Command::Sample(a) => run_sample(a),
        Command::Score(a) => run_score(a),
        Command::Brute(a) => run_brute(a),
        Command::CertifyLower(a) => run_certify_lower(a),
        Command::CertifyUpper(a) => run_certify_upper(a, exec),
        Command::SimulatePhases(a) => run_simulate_phases(a, exec),
        Command::SubcriticalC(a) => run_subcritical(a, exec),
        Command::Supercritical(a) => run_supercritical(a, exec),
        Command::Urns(a) => run_urns(a),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let text = match serde_json::to_string_pretty(&outcome.doc) {
        Ok(t) => t + "\n",
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = io::write_file(path, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INVALID);
            }
        }
        None => print!("{text}"),
    }
    if outcome.certificate_failed {
        ExitCode::from(EXIT_CERTIFICATE_FAILED)
    } else {
        ExitCode::SUCCESS
    }
}
