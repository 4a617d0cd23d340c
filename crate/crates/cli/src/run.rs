//! Scenario loading, integration and artifact writing.

use std::fmt::Display;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;
use saari_core::forcelaw::default_grid;
use saari_core::output::{to_json, write_series_csv};
use saari_core::saari::{analyze, Verdict};
use saari_core::scenario::{Prepared, Scenario};
use saari_core::{classify_admissibility, integrate, Method, Trajectory};
use serde_json::{json, Value};

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INTEGRATION: u8 = 3;
pub const EXIT_ANOMALY: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(e: impl Display) -> Self {
        Self {
            code: EXIT_INVALID,
            message: e.to_string(),
        }
    }

    pub fn other(e: impl Display) -> Self {
        Self {
            code: EXIT_OTHER,
            message: e.to_string(),
        }
    }

    /// Solver errors: input problems stay code 2, the rest are code 1.
    pub fn solver(e: saari_core::Error) -> Self {
        match e {
            saari_core::Error::InvalidInput(_) | saari_core::Error::CollisionApproach { .. } => Self::input(e),
            _ => Self::other(e),
        }
    }
}

/// Command-line overrides of the scenario's integrator block.
#[derive(Args, Debug, Default, Clone)]
pub struct Overrides {
    /// `adaptive`, `rk4` or `leapfrog`.
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub atol: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub sample_every: Option<usize>,
}

impl Overrides {
    fn apply(&self, sc: &mut Scenario) {
        let it = &mut sc.integrator;
        if let Some(m) = self.method {
            it.method = m;
        }
        if let Some(x) = self.rtol {
            it.rtol = x;
        }
        if let Some(x) = self.atol {
            it.atol = x;
        }
        if self.h.is_some() {
            it.h = self.h;
        }
        if let Some(x) = self.t_end {
            it.t_end = x;
        }
        if self.max_steps.is_some() {
            it.max_steps = self.max_steps;
        }
        if let Some(x) = self.sample_every {
            it.sample_every = x;
        }
    }
}

pub fn load(path: &Path, overrides: &Overrides) -> Result<Prepared, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut sc = Scenario::from_json(&text).map_err(CliError::input)?;
    overrides.apply(&mut sc);
    sc.prepare().map_err(CliError::input)
}

/// Integrates and analyzes; returns the trajectory, the summary document and
/// the exit code it implies.
pub fn execute(p: &Prepared) -> Result<(Trajectory, Value, u8), CliError> {
    let class = classify_admissibility(&p.system.law, &default_grid())
        .map_err(CliError::input)?
        .class;
    let traj = integrate(&p.system, &p.state0, &p.integrator).map_err(|e| CliError {
        code: if e.is_integration_failure() { EXIT_INTEGRATION } else { EXIT_OTHER },
        message: e.to_string(),
    })?;
    let report = analyze(&traj, &p.tolerances).map_err(CliError::other)?;
    let anomaly = class.is_admissible() && report.verdict == Verdict::ConstantInertiaNonRigid;

    let first = &traj.samples[0];
    let last = traj.samples.last().expect("analyze checked the sample count");
    let drift = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mut summary = json!(report);
    let obj = summary.as_object_mut().expect("report serializes to an object");
    obj.insert("law".into(), json!(p.system.law.label()));
    obj.insert("law_classification".into(), json!(class));
    obj.insert("anomaly".into(), json!(anomaly));
    obj.insert("accepted_steps".into(), json!(traj.accepted_steps));
    obj.insert("t_final".into(), json!(last.t));
    obj.insert(
        "final_drifts".into(),
        json!({
            "energy": last.energy - first.energy,
            "inertia": last.inertia - first.inertia,
            "c1_sum": last.c1_sum - first.c1_sum,
            "c2_sum": last.c2_sum - first.c2_sum,
            "momentum": drift(&last.momentum, &first.momentum),
            "angular_momentum": drift(&last.angular_momentum, &first.angular_momentum),
        }),
    );
    Ok((traj, summary, if anomaly { EXIT_ANOMALY } else { 0 }))
}

pub fn write_csv(traj: &Trajectory, path: &Path) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
    write_series_csv(traj, BufWriter::new(file)).map_err(|e| CliError::other(format!("{}: {e}", path.display())))
}

pub struct RunResult {
    pub summary: Value,
    pub code: u8,
}

/// One scenario into `out`: series.csv and summary.json.
///
/// Validation failures are returned as errors and leave `out` untouched.
/// Integration failures still write a summary.json carrying the message.
pub fn simulate_file(path: &Path, out: &Path, overrides: &Overrides) -> Result<RunResult, CliError> {
    let prepared = load(path, overrides)?;
    fs::create_dir_all(out).map_err(|e| CliError::other(format!("{}: {e}", out.display())))?;
    let write_summary = |doc: &Value| -> Result<(), CliError> {
        let text = to_json(doc).map_err(CliError::other)?;
        fs::write(out.join("summary.json"), text).map_err(CliError::other)
    };
    match execute(&prepared) {
        Ok((traj, summary, code)) => {
            write_csv(&traj, &out.join("series.csv"))?;
            write_summary(&summary)?;
            Ok(RunResult { summary, code })
        }
        Err(e) if e.code == EXIT_INTEGRATION => {
            write_summary(&json!({ "error": e.message }))?;
            Err(e)
        }
        Err(e) => Err(e),
    }
}

/// Files are kept as given; directories contribute their `*.json` entries in
/// name order.
pub fn expand_scenarios(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| CliError::input(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|e| e.extension().is_some_and(|x| x == "json"))
                .collect();
            entries.sort();
            out.extend(entries);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(CliError::input("no scenario files found"));
    }
    Ok(out)
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned())
}

pub fn simulate_batch(files: &[PathBuf], out: &Path, overrides: &Overrides) -> Vec<RunResult> {
    files
        .par_iter()
        .map(|f| {
            let name = stem(f);
            match simulate_file(f, &out.join(&name), overrides) {
                Ok(mut r) => {
                    r.summary
                        .as_object_mut()
                        .expect("summary is an object")
                        .insert("scenario".into(), json!(name));
                    r
                }
                Err(e) => {
                    eprintln!("{name}: {}", e.message);
                    RunResult {
                        summary: json!({ "scenario": name, "error": e.message, "exit_code": e.code }),
                        code: e.code,
                    }
                }
            }
        })
        .collect()
}
