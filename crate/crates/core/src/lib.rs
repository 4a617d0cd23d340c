//! Generalized n-body dynamics laboratory.
//!
//! Pairwise force laws `f(|q_j - q_k|^2)`, the conservation identities that
//! hold along their solutions, relative equilibria, and tools to test whether
//! solutions with constant moment of inertia must be rigid.

pub mod equilibria;
pub mod error;
pub mod fixtures;
pub mod forcelaw;
pub mod integrators;
pub mod nbody;
pub mod output;
pub mod probe;
pub mod saari;
pub mod scenario;

pub use equilibria::{solve_ce, CentralConfiguration};
pub use error::{Error, Result};
pub use forcelaw::{classify_admissibility, Admissibility, AdmissibilityClass, ForceLaw, LawKind, LawSpec};
pub use integrators::{integrate, IntegratorConfig, Method};
pub use nbody::{pairwise_distances, Bodies, InvariantSample, PhaseState, System, Trajectory};
pub use probe::{ProbeLaw, ProbeResult, TrigFamily};
pub use saari::{analyze, SaariReport, Tolerances, Verdict};
pub use scenario::Scenario;
