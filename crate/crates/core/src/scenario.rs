//! Scenario files: bodies, initial data, law, integrator and tolerances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equilibria::{collinear_seed, make_rotating_state, polygon_seed, solve_ce};
use crate::error::{Error, Result};
use crate::forcelaw::LawSpec;
use crate::integrators::{IntegratorConfig, Method};
use crate::nbody::{Bodies, PhaseState, System};
use crate::saari::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub masses: Vec<f64>,
    pub d: usize,
    pub init: InitSpec,
    pub law: LawSpec,
    pub integrator: IntegratorSpec,
    pub analysis: AnalysisSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum InitSpec {
    Explicit { q: Vec<Vec<f64>>, v: Vec<Vec<f64>> },
    Generated { generator: GeneratorSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    /// Central configuration solved from a regular polygon, set rotating.
    Polygon,
    /// Central configuration solved from equally spaced points on a line.
    Collinear,
    /// Uniform positions in `[-scale, scale]^d`, uniform velocities.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorParams {
    /// Polygon circumradius (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Collinear seed spacing (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    /// Random position half-width (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    /// Random velocity half-width (default 0.5).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vscale: Option<f64>,
    /// Relative velocity noise added to the equilibrium generators (default 0).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(rename = "type")]
    pub kind: GeneratorKind,
    #[serde(default)]
    pub params: GeneratorParams,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    pub method: Method,
    pub rtol: f64,
    pub atol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    pub t_end: f64,
    pub sample_every: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
}

impl IntegratorSpec {
    pub fn to_config(&self) -> IntegratorConfig {
        let defaults = IntegratorConfig::default();
        IntegratorConfig {
            method: self.method,
            rel_tol: self.rtol,
            abs_tol: self.atol,
            h: self.h,
            t_end: self.t_end,
            max_steps: self.max_steps.unwrap_or(defaults.max_steps),
            sample_every: self.sample_every,
        }
    }

    pub fn from_config(cfg: &IntegratorConfig) -> Self {
        Self {
            method: cfg.method,
            rtol: cfg.rel_tol,
            atol: cfg.abs_tol,
            h: cfg.h,
            t_end: cfg.t_end,
            sample_every: cfg.sample_every,
            max_steps: Some(cfg.max_steps),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpec {
    pub tol_i: f64,
    pub tol_r: f64,
}

impl From<AnalysisSpec> for Tolerances {
    fn from(a: AnalysisSpec) -> Self {
        Tolerances {
            tol_i: a.tol_i,
            tol_r: a.tol_r,
        }
    }
}

/// A scenario after validation, ready to integrate.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub system: System,
    pub state0: PhaseState,
    pub integrator: IntegratorConfig,
    pub tolerances: Tolerances,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("scenario: {e}")))
    }

    /// Explicit-state scenario.
    pub fn explicit(
        system: &System,
        state: &PhaseState,
        law: LawSpec,
        integrator: &IntegratorConfig,
        tol: &Tolerances,
    ) -> Self {
        Self {
            masses: system.bodies.masses().to_vec(),
            d: system.dim(),
            init: InitSpec::Explicit {
                q: PhaseState::rows(&state.q, state.dim),
                v: PhaseState::rows(&state.v, state.dim),
            },
            law,
            integrator: IntegratorSpec::from_config(integrator),
            analysis: AnalysisSpec {
                tol_i: tol.tol_i,
                tol_r: tol.tol_r,
            },
        }
    }

    /// Validates every field, builds the initial state and checks it.
    pub fn prepare(&self) -> Result<Prepared> {
        let bodies = Bodies::new(self.masses.clone(), self.d)?;
        let system = System::new(bodies, self.law.build()?);
        let integrator = self.integrator.to_config();
        integrator.validate()?;
        let tolerances: Tolerances = self.analysis.into();
        tolerances.validate()?;
        let state0 = match &self.init {
            InitSpec::Explicit { q, v } => {
                if q.len() != self.masses.len() || v.len() != self.masses.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} masses but {} positions and {} velocities",
                        self.masses.len(),
                        q.len(),
                        v.len()
                    )));
                }
                if q.iter().chain(v).any(|row| row.len() != self.d) {
                    return Err(Error::InvalidInput(format!("every row must have d = {} entries", self.d)));
                }
                PhaseState::from_rows(0.0, q, v)?
            }
            InitSpec::Generated { generator } => generate(generator, &system)?,
        };
        system.bodies.validate(&state0)?;
        system.check_separation(&state0.q)?;
        Ok(Prepared {
            system,
            state0,
            integrator,
            tolerances,
        })
    }
}

fn positive_or(value: Option<f64>, default: f64, name: &str) -> Result<f64> {
    match value {
        None => Ok(default),
        Some(x) if x > 0.0 && x.is_finite() => Ok(x),
        Some(x) => Err(Error::InvalidInput(format!("generator {name} must be positive, got {x}"))),
    }
}

/// Builds the initial state of a generated scenario.
pub fn generate(spec: &GeneratorSpec, system: &System) -> Result<PhaseState> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let n = system.n();
    let d = system.dim();
    let p = &spec.params;
    let mut equilibrium = |seed: Vec<f64>| -> Result<PhaseState> {
        if d != 2 {
            return Err(Error::InvalidInput("equilibrium generators need d = 2".into()));
        }
        let cc = solve_ce(&seed, system, None)?;
        let mut st = make_rotating_state(&cc);
        let eps = p.perturbation.unwrap_or(0.0);
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidInput(format!("perturbation must be non-negative, got {eps}")));
        }
        if eps > 0.0 {
            let vmax = st.v.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            st.v.iter_mut().for_each(|v| *v += eps * vmax * rng.random_range(-1.0..1.0));
        }
        Ok(system.bodies.reduce_to_barycenter(&st))
    };
    match spec.kind {
        GeneratorKind::Polygon => equilibrium(polygon_seed(n, positive_or(p.radius, 1.0, "radius")?)),
        GeneratorKind::Collinear => equilibrium(collinear_seed(n, positive_or(p.spacing, 1.0, "spacing")?)),
        GeneratorKind::Random => {
            let scale = positive_or(p.scale, 1.0, "scale")?;
            let vscale = positive_or(p.vscale, 0.5, "vscale")?;
            let q: Vec<f64> = (0..n * d).map(|_| rng.random_range(-scale..scale)).collect();
            let v: Vec<f64> = (0..n * d).map(|_| rng.random_range(-vscale..vscale)).collect();
            Ok(system.bodies.reduce_to_barycenter(&PhaseState::new(0.0, d, q, v)?))
        }
    }
}
