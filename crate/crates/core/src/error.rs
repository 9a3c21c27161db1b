use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("argument {z} lies on a branch cut of log-gamma")]
    BranchCut { z: Complex64 },
    #[error("argument {z} is a pole")]
    Pole { z: Complex64 },
    #[error("L*Omega/pi = {ratio} is within {guard} of an integer; use near_resonance_poles")]
    NearResonance { ratio: f64, guard: f64 },
    #[error("L*Omega/pi = {ratio} is not near an integer; use the dominant pole search")]
    NotNearResonance { ratio: f64 },
    #[error("pole search did not converge after {iterations} iterations (|f| = {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("pole search stalled at {z}: every step would cross a branch cut")]
    CutCrossingDeadlock { z: Complex64 },
    #[error("second near-resonance root not found: {0}")]
    SecondRootNotFound(String),
    #[error("root at {z} is (nearly) double: |1 + mu'| = {derivative:e}")]
    NearDoubleRoot { z: Complex64, derivative: f64 },
    #[error("roots are too close for the product formula (min separation {separation:e}); use spectral weights")]
    NearDegenerateRoots { separation: f64 },
    #[error("pole {z} has positive real part")]
    UnstablePole { z: Complex64 },
    #[error("RK4 stability bound violated: dt * |H| = {0}")]
    StepTooLarge(f64),
}
