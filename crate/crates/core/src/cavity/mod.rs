//! Continuum of intracavity modes between two perfect mirrors.
//!
//! Units: `c = 1`, so the free spectral range is `π/L`. The memory kernel is
//! regularized by an exponential frequency cutoff `e^{−kε}`; `ε` stays finite.

mod kernel;
mod poles;
pub mod special;

pub use kernel::{mu_laplace, mu_laplace_derivative, mu_laplace_rest, mu_time};
pub use poles::{
    cavity_ln_series, crosses_cut, dominant_pole_numeric, dominant_pole_perturbative, long_time_u,
    near_resonance_poles, pole_function, residue_at, PoleMethod, RESONANCE_GUARD,
};
pub use special::{digamma, ln_c, log_gamma};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::EULER_GAMMA;

/// Cutoffs with `ε·ω0` at or above this draw a warning.
pub const CUTOFF_WARNING: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    lambda: f64,
    length: f64,
    epsilon: f64,
    omega0: f64,
    omega_tilde: f64,
}

impl CavityParams {
    pub fn new(lambda: f64, length: f64, epsilon: f64, omega0: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!("lambda = {lambda} must be >= 0")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter(format!("mirror separation L = {length} must be > 0")));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("cutoff epsilon = {epsilon} must be > 0")));
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidParameter(format!("omega0 = {omega0} must be > 0")));
        }
        let omega_tilde = omega0 - lambda * lambda / (PI * PI * epsilon);
        if !(omega_tilde > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "shifted frequency omega0 - lambda^2/(pi^2 eps) = {omega_tilde} must be > 0"
            )));
        }
        Ok(Self { lambda, length, epsilon, omega0, omega_tilde })
    }

    /// Builds the geometry from the dimensionless combinations `ε·ω0` and `X = L·Ω∞/π`.
    pub fn from_resonance_ratio(lambda: f64, eps_omega0: f64, x: f64, omega0: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidParameter(format!("L*Omega/pi = {x} must be > 0")));
        }
        let probe = Self::new(lambda, 1.0, eps_omega0 / omega0, omega0)?;
        let omega_inf = omega_infinity(&probe);
        if !(omega_inf > 0.0) {
            return Err(Error::InvalidParameter(format!("dressed frequency {omega_inf} must be > 0")));
        }
        Self::new(lambda, x * PI / omega_inf, eps_omega0 / omega0, omega0)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn length(&self) -> f64 {
        self.length
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    /// `ω̃0 = ω0 − λ²/(π²ε)`.
    pub fn omega_tilde(&self) -> f64 {
        self.omega_tilde
    }
    /// Free spectral range `π/L`.
    pub fn fsr(&self) -> f64 {
        PI / self.length
    }
    /// `L·Ω∞/π`; integer values are resonances with a cavity mode.
    pub fn resonance_ratio(&self) -> f64 {
        self.length * omega_infinity(self) / PI
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(lambda, self.length, self.epsilon, self.omega0)
    }

    pub fn cutoff_warning(&self) -> Option<String> {
        let x = self.epsilon * self.omega0;
        (x >= CUTOFF_WARNING).then(|| format!("eps*omega0 = {x} is not small; the kernel transform drops O(eps) terms"))
    }
}

/// Dressed free-field frequency `ω̃0 + (λ²ω̃0/π²) ln(e^{γ_e} ε ω̃0)`.
pub fn omega_infinity(cp: &CavityParams) -> f64 {
    let w = cp.omega_tilde;
    let l2 = cp.lambda * cp.lambda;
    w + l2 * w / (PI * PI) * (EULER_GAMMA.exp() * cp.epsilon * w).ln()
}

/// Root of `z + iω0 + μ̃(z)` with its residue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityPole {
    pub z: Complex64,
    pub residue: Complex64,
    pub method: PoleMethod,
}

impl CavityPole {
    /// Decay rate `−Re z`.
    pub fn gamma(&self) -> f64 {
        -self.z.re
    }
    /// Dressed frequency `−Im z`.
    pub fn omega(&self) -> f64 {
        -self.z.im
    }
}
