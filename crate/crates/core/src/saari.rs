//! Constant-inertia analysis of trajectories.
//!
//! A trajectory is classified by two relative variations: that of the moment
//! of inertia about the barycenter and that of the pairwise distances. Under
//! an admissible law, constant inertia without rigidity would contradict the
//! theorem and is flagged as an anomaly. Under the inverse-cube law such
//! trajectories exist: at zero energy `I'' = 4E = 0`, so `I' = 0` initially
//! keeps `I` fixed while the shape moves.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibria::{make_rotating_state, polygon_seed, solve_ce};
use crate::error::{Error, Result};
use crate::forcelaw::{classify_admissibility, default_grid, AdmissibilityClass, ForceLaw};
use crate::integrators::{integrate, IntegratorConfig};
use crate::nbody::{dot, norm2, pairwise_distances, Bodies, PhaseState, System, Trajectory};

pub const DEFAULT_TOL_I: f64 = 1e-6;
pub const DEFAULT_TOL_R: f64 = 1e-3;
pub const MIN_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_i: f64,
    pub tol_r: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_i: DEFAULT_TOL_I,
            tol_r: DEFAULT_TOL_R,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, t) in [("tol_i", self.tol_i), ("tol_r", self.tol_r)] {
            if !(t > 0.0 && t < 0.1) {
                return Err(Error::InvalidInput(format!("{name} = {t} outside (0, 0.1)")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    /// Distances constant but inertia not; only possible with barycentric drift
    /// or integration error, since rigid motion fixes `I` about the barycenter.
    Rigid,
    ConstantInertiaRigid,
    ConstantInertiaNonRigid,
    VariableInertia,
}

impl Verdict {
    pub fn from_variations(inertia: f64, rigidity: f64, tol: &Tolerances) -> Self {
        match (inertia < tol.tol_i, rigidity < tol.tol_r) {
            (true, true) => Verdict::ConstantInertiaRigid,
            (true, false) => Verdict::ConstantInertiaNonRigid,
            (false, true) => Verdict::Rigid,
            (false, false) => Verdict::VariableInertia,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Rigid => "Rigid",
            Verdict::ConstantInertiaRigid => "ConstantInertiaRigid",
            Verdict::ConstantInertiaNonRigid => "ConstantInertiaNonRigid",
            Verdict::VariableInertia => "VariableInertia",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaariReport {
    pub inertia_rel_variation: f64,
    pub rigidity_rel_variation: f64,
    pub c1_rel_variation: f64,
    pub c2_rel_variation: f64,
    /// `max |E - E0| / (1 + |E0|)`.
    pub energy_drift: f64,
    pub verdict: Verdict,
    pub tol_i: f64,
    pub tol_r: f64,
    pub samples: usize,
}

/// `(max - min) / |mean|`, with an all-zero series mapped to zero and a
/// zero-mean series normalised by its largest magnitude.
fn rel_variation(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let (mut lo, mut hi, mut sum, mut big, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0.0f64, 0usize);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
        sum += v;
        big = big.max(v.abs());
        n += 1;
    }
    let range = hi - lo;
    if n == 0 || range == 0.0 {
        return 0.0;
    }
    let mean = (sum / n as f64).abs();
    if mean > 0.0 {
        range / mean
    } else {
        range / big
    }
}

fn barycentric_inertia(bodies: &Bodies, state: &PhaseState) -> f64 {
    let d = bodies.dim();
    let com = bodies.center_of_mass(state);
    bodies
        .masses()
        .iter()
        .zip(state.q.chunks_exact(d))
        .map(|(m, q)| m * q.iter().zip(&com).map(|(a, c)| (a - c).powi(2)).sum::<f64>())
        .sum()
}

/// Variation statistics and verdict for `traj`.
///
/// Inertia is taken about the instantaneous barycenter so that every field is
/// invariant under rigid motions of the whole trajectory.
pub fn analyze(traj: &Trajectory, tol: &Tolerances) -> Result<SaariReport> {
    tol.validate()?;
    if traj.states.len() < MIN_SAMPLES || traj.samples.len() != traj.states.len() {
        return Err(Error::TooFewSamples(traj.states.len().min(traj.samples.len())));
    }
    let inertia: Vec<f64> = traj.states.iter().map(|s| barycentric_inertia(&traj.bodies, s)).collect();
    let inertia_rel_variation = rel_variation(inertia.iter().copied());

    let dist: Vec<Vec<f64>> = traj
        .states
        .iter()
        .map(|s| pairwise_distances(s).into_iter().map(|p| p.2).collect())
        .collect();
    let pairs = dist[0].len();
    let rigidity_rel_variation = (0..pairs)
        .map(|p| rel_variation(dist.iter().map(move |row| row[p])))
        .fold(0.0, f64::max);

    let c1_rel_variation = rel_variation(traj.samples.iter().map(|s| s.c1_sum));
    let c2_rel_variation = rel_variation(traj.samples.iter().map(|s| s.c2_sum));
    let e0 = traj.samples[0].energy;
    let energy_drift = traj
        .samples
        .iter()
        .map(|s| (s.energy - e0).abs())
        .fold(0.0, f64::max)
        / (1.0 + e0.abs());

    Ok(SaariReport {
        inertia_rel_variation,
        rigidity_rel_variation,
        c1_rel_variation,
        c2_rel_variation,
        energy_drift,
        verdict: Verdict::from_variations(inertia_rel_variation, rigidity_rel_variation, tol),
        tol_i: tol.tol_i,
        tol_r: tol.tol_r,
        samples: traj.states.len(),
    })
}

/// A barycentric state with zero momentum, `I' = 0` and `E = 0` for a
/// degenerate (inverse-cube type) law.
///
/// `v_seed` is projected in the mass-weighted inner product onto the
/// complement of uniform translations and of the radial direction `q`, then
/// scaled so that the kinetic energy equals `-V`.
pub fn construct_zero_e_zero_idot(q: &[f64], system: &System, v_seed: &[f64]) -> Result<PhaseState> {
    let class = classify_admissibility(&system.law, &default_grid())?.class;
    if class != AdmissibilityClass::DegenerateInverseCube {
        return Err(Error::LawNotDegenerate);
    }
    let bodies = &system.bodies;
    let d = bodies.dim();
    let m = bodies.masses();
    let seed = PhaseState::new(0.0, d, q.to_vec(), v_seed.to_vec())?;
    bodies.validate(&seed)?;
    let mut state = bodies.reduce_to_barycenter(&seed);
    system.check_separation(&state.q)?;

    let potential = system.potential_energy(&state)?;
    if !(potential < 0.0) {
        return Err(Error::NonNegativePotential(potential));
    }

    let seed_kinetic = bodies.kinetic_energy(&state);
    // reduce_to_barycenter already removed the translational part of v
    let weighted = |a: &[f64], b: &[f64]| -> f64 {
        a.chunks_exact(d).zip(b.chunks_exact(d)).zip(m).map(|((x, y), mk)| mk * dot(x, y)).sum()
    };
    let qq = weighted(&state.q, &state.q);
    let coef = weighted(&state.v, &state.q) / qq;
    for (v, q) in state.v.iter_mut().zip(&state.q) {
        *v -= coef * q;
    }
    let kinetic = bodies.kinetic_energy(&state);
    if !(kinetic > 1e-12 * seed_kinetic) || kinetic == 0.0 {
        return Err(Error::DegenerateSeed);
    }
    let lambda = (-potential / kinetic).sqrt();
    state.v.iter_mut().for_each(|v| *v *= lambda);
    Ok(state)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    pub n: usize,
    pub t_end: f64,
    pub retries: usize,
    pub rng_seed: u64,
    /// Side length of the regular polygon the bodies start on.
    pub side: f64,
    pub tol: f64,
    /// Required rigidity variation for a trajectory to count as non-rigid.
    pub min_rigidity: f64,
    pub tolerances: Tolerances,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self {
            n: 3,
            t_end: 5.0,
            retries: 100,
            rng_seed: 0,
            side: 4.0,
            tol: 1e-12,
            min_rigidity: 0.05,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub system: System,
    pub state0: PhaseState,
    pub trajectory: Trajectory,
    pub report: SaariReport,
    /// Seeds tried, including the successful one.
    pub attempts: usize,
}

/// Regular polygon of unit masses under `f = x^-2`, with random velocity
/// seeds until the flow is measurably non-rigid at constant inertia.
///
/// Times scale with the square of the polygon size under this law. At unit
/// side, zero-energy flows reach a binary collision well before `t = 5`; the
/// default side of 4 stretches the collision times past the horizon while
/// the shape still deforms by several percent.
pub fn find_counterexample(cfg: &CounterexampleConfig) -> Result<Counterexample> {
    if cfg.n < 3 {
        return Err(Error::InvalidInput("counterexample search needs n >= 3".into()));
    }
    let system = System::new(Bodies::equal(cfg.n, 2)?, ForceLaw::inverse_cube());
    if !(cfg.side > 0.0 && cfg.side.is_finite()) {
        return Err(Error::InvalidInput(format!("polygon side must be positive, got {}", cfg.side)));
    }
    let radius = 0.5 * cfg.side / (PI / cfg.n as f64).sin();
    let q = polygon_seed(cfg.n, radius);
    let icfg = IntegratorConfig::adaptive(cfg.t_end, cfg.tol);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);

    for attempt in 1..=cfg.retries {
        let v_seed: Vec<f64> = (0..2 * cfg.n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let state0 = match construct_zero_e_zero_idot(&q, &system, &v_seed) {
            Ok(s) => s,
            Err(Error::DegenerateSeed) => continue,
            Err(e) => return Err(e),
        };
        let trajectory = match integrate(&system, &state0, &icfg) {
            Ok(t) => t,
            Err(e) if e.is_integration_failure() => continue,
            Err(e) => return Err(e),
        };
        let report = analyze(&trajectory, &cfg.tolerances)?;
        if report.inertia_rel_variation < cfg.tolerances.tol_i && report.rigidity_rel_variation > cfg.min_rigidity {
            return Ok(Counterexample {
                system,
                state0,
                trajectory,
                report,
                attempts: attempt,
            });
        }
    }
    Err(Error::CounterexampleNotFound(cfg.retries))
}

#[derive(Debug, Clone)]
pub struct BatteryScenario {
    pub name: String,
    pub system: System,
    pub state0: PhaseState,
    pub integrator: IntegratorConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatteryEntry {
    pub name: String,
    pub law: String,
    pub class: AdmissibilityClass,
    pub report: Option<SaariReport>,
    pub error: Option<String>,
    /// Constant inertia without rigidity under an admissible law.
    pub anomaly: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BatterySummary {
    pub total: usize,
    pub failed: usize,
    pub verdicts: BTreeMap<String, usize>,
    pub anomalies: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BatteryReport {
    pub entries: Vec<BatteryEntry>,
    pub summary: BatterySummary,
}

fn run_one(sc: &BatteryScenario, tol: &Tolerances) -> BatteryEntry {
    let law = sc.system.law.label();
    let class = match classify_admissibility(&sc.system.law, &default_grid()) {
        Ok(a) => a.class,
        Err(e) => {
            return BatteryEntry {
                name: sc.name.clone(),
                law,
                class: AdmissibilityClass::Indefinite,
                report: None,
                error: Some(e.to_string()),
                anomaly: false,
            }
        }
    };
    let outcome = integrate(&sc.system, &sc.state0, &sc.integrator).and_then(|t| analyze(&t, tol));
    match outcome {
        Ok(report) => BatteryEntry {
            anomaly: class.is_admissible() && report.verdict == Verdict::ConstantInertiaNonRigid,
            name: sc.name.clone(),
            law,
            class,
            report: Some(report),
            error: None,
        },
        Err(e) => BatteryEntry {
            name: sc.name.clone(),
            law,
            class,
            report: None,
            error: Some(e.to_string()),
            anomaly: false,
        },
    }
}

/// Runs every scenario in parallel; failures are recorded per entry.
pub fn run_battery(scenarios: &[BatteryScenario], tol: &Tolerances) -> BatteryReport {
    let entries: Vec<BatteryEntry> = scenarios.par_iter().map(|sc| run_one(sc, tol)).collect();
    let mut summary = BatterySummary {
        total: entries.len(),
        ..Default::default()
    };
    for e in &entries {
        match &e.report {
            Some(r) => *summary.verdicts.entry(r.verdict.as_str().to_string()).or_default() += 1,
            None => summary.failed += 1,
        }
        summary.anomalies += usize::from(e.anomaly);
    }
    BatteryReport { entries, summary }
}

/// Random bounded start: positions uniform in `[-1, 1]^2`, velocities uniform
/// in `[-vscale, vscale]^2`, reduced to the barycenter.
pub fn random_state(n: usize, vscale: f64, rng: &mut impl Rng) -> PhaseState {
    let q: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let v: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-vscale..vscale)).collect();
    PhaseState { t: 0.0, dim: 2, q, v }
}

/// A relative equilibrium solved from a polygon seed, with every velocity
/// component perturbed by a relative amount up to `eps`.
pub fn perturbed_equilibrium(system: &System, eps: f64, rng: &mut impl Rng) -> Result<PhaseState> {
    let cc = solve_ce(&polygon_seed(system.n(), 1.0), system, None)?;
    let mut st = make_rotating_state(&cc);
    let vmax = st.v.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    st.v.iter_mut().for_each(|v| *v += eps * vmax * rng.random_range(-1.0..1.0));
    Ok(system.bodies.reduce_to_barycenter(&st))
}

/// Mixed battery over `alpha` in {1, 2, 3} and `n` in {3, 4}: for each of the
/// six combinations, `per_cell` random starts and `per_cell` perturbed
/// equilibria, plus one exact equilibrium.
pub fn admissible_battery(per_cell: usize, t_end: f64, rng_seed: u64) -> Result<Vec<BatteryScenario>> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut out = Vec::new();
    for alpha in [1.0, 2.0, 3.0] {
        for n in [3usize, 4] {
            let mut masses: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
            let system = System::new(Bodies::new(masses.clone(), 2)?, ForceLaw::power_law(alpha, 1.0)?);
            let cfg = IntegratorConfig::adaptive(t_end, 1e-11);
            for i in 0..per_cell {
                let st = random_state(n, 0.5, &mut rng);
                out.push(BatteryScenario {
                    name: format!("random-a{alpha}-n{n}-{i}"),
                    system: system.clone(),
                    state0: system.bodies.reduce_to_barycenter(&st),
                    integrator: cfg.clone(),
                });
            }
            masses.iter_mut().for_each(|m| *m = 1.0);
            let equal = System::new(Bodies::new(masses, 2)?, ForceLaw::power_law(alpha, 1.0)?);
            for i in 0..per_cell {
                out.push(BatteryScenario {
                    name: format!("near-eq-a{alpha}-n{n}-{i}"),
                    system: equal.clone(),
                    state0: perturbed_equilibrium(&equal, 0.02, &mut rng)?,
                    integrator: cfg.clone(),
                });
            }
            out.push(BatteryScenario {
                name: format!("exact-eq-a{alpha}-n{n}"),
                system: equal.clone(),
                state0: perturbed_equilibrium(&equal, 0.0, &mut rng)?,
                integrator: cfg.clone(),
            });
        }
    }
    Ok(out)
}

/// `max |sum m v|`, `|I'|` and `|E|` of a state; the constraints imposed by
/// [`construct_zero_e_zero_idot`].
pub fn constraint_residuals(system: &System, state: &PhaseState) -> Result<[f64; 3]> {
    let p = system.bodies.momentum(state);
    Ok([
        norm2(&p).sqrt(),
        system.bodies.inertia_rate(state).abs(),
        system.total_energy(state)?.abs(),
    ])
}
