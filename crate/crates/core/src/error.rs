use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("admissibility grid is empty")]
    EmptyGrid,

    #[error("argument must be strictly positive, got {0}")]
    NonPositiveArgument(f64),

    #[error("bodies {j} and {k} approached to distance {distance:e}")]
    CollisionApproach { j: usize, k: usize, distance: f64 },

    #[error("integration exceeded {0} steps")]
    MaxStepsExceeded(usize),

    #[error("adaptive step {h:e} underflowed at t = {t}")]
    StepUnderflow { t: f64, h: f64 },

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("jacobian is rank deficient beyond the gauge null space")]
    SingularJacobian,

    #[error("trajectory has {0} samples, at least 10 required")]
    TooFewSamples(usize),

    #[error("velocity seed vanishes after projection")]
    DegenerateSeed,

    #[error("potential energy {0} is not negative; zero total energy is unreachable")]
    NonNegativePotential(f64),

    #[error("force law is not of the degenerate inverse-cube type")]
    LawNotDegenerate,

    #[error("no constant-inertia non-rigid trajectory found in {0} attempts")]
    CounterexampleNotFound(usize),

    #[error("family sample {value} at z = {z} violates the positivity margin")]
    NonPositiveSample { z: f64, value: f64 },

    #[error("probe law {0} is not positive and divergent at zero")]
    InvalidLawFamily(String),
}

impl Error {
    /// Failures raised while advancing the equations of motion.
    pub fn is_integration_failure(&self) -> bool {
        matches!(
            self,
            Error::CollisionApproach { .. }
                | Error::MaxStepsExceeded(_)
                | Error::StepUnderflow { .. }
        )
    }
}
