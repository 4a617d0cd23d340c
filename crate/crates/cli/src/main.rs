//! `saari`: scenario runner and thin wrappers over the saari-core modules.
//!
//! Every subcommand prints one JSON document to stdout. Diagnostics go to
//! stderr. Exit codes: 0 success, 1 other failure, 2 invalid input,
//! 3 integration failure, 4 anomaly (constant inertia without rigidity under
//! a fixed-sign law).

mod run;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use saari_core::equilibria::{collinear_seed, polygon_seed, solve_ce};
use saari_core::output::to_json;
use saari_core::probe::{minimize, ProbeConfig, ProbeLaw, DEFAULT_MARGIN};
use saari_core::saari::{find_counterexample, CounterexampleConfig, Tolerances};
use saari_core::scenario::Scenario;
use saari_core::{classify_admissibility, forcelaw, Bodies, ForceLaw, LawSpec, PhaseState, System};
use serde_json::json;

use run::{CliError, Overrides};

#[derive(Parser)]
#[command(name = "saari", version, about = "Generalized n-body dynamics and constant-inertia checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario; writes series.csv and summary.json to --out.
    Simulate(SimulateArgs),
    /// Solve for a relative equilibrium from a seed configuration.
    CentralConfig(CentralConfigArgs),
    /// Integrate a scenario and print its constant-inertia report.
    SaariCheck(SaariCheckArgs),
    /// Search for a constant-inertia, non-rigid flow under the inverse-cube law.
    Counterexample(CounterexampleArgs),
    /// Minimize the constancy residual of a trigonometric family.
    Probe(ProbeArgs),
    /// Classify a force law by the sign of G = x f + F.
    Lawcheck(LawcheckArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario file; with --batch, files or directories of *.json.
    #[arg(long, required = true)]
    scenario: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Run every scenario concurrently, each into <out>/<file stem>/.
    #[arg(long)]
    batch: bool,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct CentralConfigArgs {
    /// `polygon`, `collinear`, or a JSON file holding an array of [x, y] rows.
    #[arg(long, default_value = "polygon")]
    seed: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    /// Comma-separated masses; unit masses if omitted.
    #[arg(long, value_delimiter = ',')]
    masses: Option<Vec<f64>>,
}

#[derive(Args)]
struct SaariCheckArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    tol_i: Option<f64>,
    #[arg(long)]
    tol_r: Option<f64>,
    /// Also write the invariant series here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 5.0)]
    t_end: f64,
    #[arg(long, default_value_t = 100)]
    retries: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Side of the starting regular polygon.
    #[arg(long, default_value_t = 4.0)]
    side: f64,
    /// Write the invariant series of the found trajectory here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a scenario file reproducing the found trajectory here.
    #[arg(long)]
    emit_scenario: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long, default_value_t = 3)]
    n_funcs: usize,
    #[arg(long, default_value_t = 2)]
    degree: usize,
    /// `newtonian`, `power:ALPHA` or `zero`.
    #[arg(long, default_value = "newtonian")]
    law: String,
    #[arg(long, default_value_t = 0.1)]
    rho: f64,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    margin: f64,
}

#[derive(Args)]
struct LawcheckArgs {
    /// `newtonian`, `inverse-cube`, `power:ALPHA` or `power:ALPHA:C`.
    #[arg(long)]
    law: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::CentralConfig(a) => central_config(a),
        Command::SaariCheck(a) => saari_check(a),
        Command::Counterexample(a) => counterexample(a),
        Command::Probe(a) => probe(a),
        Command::Lawcheck(a) => lawcheck(a),
    };
    match outcome {
        Ok((doc, code)) => {
            print!("{}", to_json(&doc).expect("JSON values always serialize"));
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            print!("{}", to_json(&json!({ "error": e.message })).expect("JSON values always serialize"));
            ExitCode::from(e.code)
        }
    }
}

type Outcome = Result<(serde_json::Value, u8), CliError>;

fn simulate(a: SimulateArgs) -> Outcome {
    if !a.batch {
        if a.scenario.len() != 1 {
            return Err(CliError::input("more than one --scenario requires --batch"));
        }
        let res = run::simulate_file(&a.scenario[0], &a.out, &a.overrides)?;
        return Ok((res.summary, res.code));
    }
    let files = run::expand_scenarios(&a.scenario)?;
    let runs = run::simulate_batch(&files, &a.out, &a.overrides);
    let code = runs.iter().map(|r| r.code).max().unwrap_or(0);
    let docs: Vec<serde_json::Value> = runs.into_iter().map(|r| r.summary).collect();
    Ok((json!({ "runs": docs }), code))
}

fn central_config(a: CentralConfigArgs) -> Outcome {
    let law = ForceLaw::power_law(a.alpha, 1.0).map_err(CliError::input)?;
    let seed: Vec<f64> = match a.seed.as_str() {
        "polygon" => polygon_seed(a.n, 1.0),
        "collinear" => collinear_seed(a.n, 1.0),
        path => {
            let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{path}: {e}")))?;
            let rows: Vec<[f64; 2]> =
                serde_json::from_str(&text).map_err(|e| CliError::input(format!("{path}: {e}")))?;
            rows.concat()
        }
    };
    let n = seed.len() / 2;
    let masses = a.masses.unwrap_or_else(|| vec![1.0; n]);
    if masses.len() != n {
        return Err(CliError::input(format!("{} masses for {n} bodies", masses.len())));
    }
    let system = System::new(Bodies::new(masses, 2).map_err(CliError::input)?, law);
    let cc = solve_ce(&seed, &system, None).map_err(CliError::solver)?;
    Ok((
        json!({
            "q": PhaseState::rows(&cc.q, 2),
            "omega2": cc.omega2,
            "residual_norm": cc.residual_norm,
        }),
        0,
    ))
}

fn saari_check(a: SaariCheckArgs) -> Outcome {
    let overrides = Overrides::default();
    let mut prepared = run::load(&a.scenario, &overrides)?;
    if let Some(t) = a.tol_i {
        prepared.tolerances.tol_i = t;
    }
    if let Some(t) = a.tol_r {
        prepared.tolerances.tol_r = t;
    }
    prepared.tolerances.validate().map_err(CliError::input)?;
    let (traj, summary, code) = run::execute(&prepared)?;
    if let Some(path) = a.csv {
        run::write_csv(&traj, &path)?;
    }
    Ok((summary, code))
}

fn counterexample(a: CounterexampleArgs) -> Outcome {
    let cfg = CounterexampleConfig {
        n: a.n,
        t_end: a.t_end,
        retries: a.retries,
        rng_seed: a.rng_seed,
        side: a.side,
        ..Default::default()
    };
    let found = find_counterexample(&cfg).map_err(|e| match e {
        saari_core::Error::InvalidInput(_) => CliError::input(e),
        _ => CliError::other(e),
    })?;
    if let Some(path) = &a.out {
        run::write_csv(&found.trajectory, path)?;
    }
    if let Some(path) = &a.emit_scenario {
        let sc = Scenario::explicit(
            &found.system,
            &found.state0,
            LawSpec::Power { alpha: 4.0, c: 1.0 },
            &saari_core::IntegratorConfig::adaptive(cfg.t_end, cfg.tol),
            &Tolerances {
                tol_i: cfg.tolerances.tol_i,
                tol_r: cfg.tolerances.tol_r,
            },
        );
        let text = to_json(&sc).map_err(CliError::other)?;
        fs::write(path, text).map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
    }
    Ok((
        json!({
            "attempts": found.attempts,
            "law": found.system.law.label(),
            "report": found.report,
            "initial_state": {
                "q": PhaseState::rows(&found.state0.q, 2),
                "v": PhaseState::rows(&found.state0.v, 2),
            },
        }),
        0,
    ))
}

fn probe(a: ProbeArgs) -> Outcome {
    let law: ProbeLaw = a.law.parse().map_err(CliError::input)?;
    let cfg = ProbeConfig {
        n_funcs: a.n_funcs,
        degree: a.degree,
        rho: a.rho,
        restarts: a.restarts,
        rng_seed: a.rng_seed,
        margin: a.margin,
        ..Default::default()
    };
    let res = minimize(&[law], &cfg).map_err(CliError::input)?;
    Ok((json!(res), 0))
}

fn lawcheck(a: LawcheckArgs) -> Outcome {
    let spec: LawSpec = a.law.parse().map_err(CliError::input)?;
    let law = spec.build().map_err(CliError::input)?;
    let adm = classify_admissibility(&law, &forcelaw::default_grid()).map_err(CliError::input)?;
    let max_abs_g = adm.evidence.iter().map(|(_, g)| g.abs()).fold(0.0, f64::max);
    Ok((
        json!({
            "law": law.label(),
            "class": adm.class,
            "max_abs_g": max_abs_g,
        }),
        0,
    ))
}
