//! Single-mode Jaynes–Cummings closed forms.
//!
//! Sign convention: `delta = ω_atom − ω_mode`. A multimode description of the
//! same system has the mode detuning `δ_1 = ω_mode − ω_atom = −delta`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::PureMeasure;
use crate::multimode::ModeSet;
use crate::state::{bloch_to_density, BlochVector, CMatrix, TruncatedState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcmParams {
    g: f64,
    delta: f64,
    omega: f64,
}

impl JcmParams {
    pub fn new(g: f64, delta: f64, omega: f64) -> Result<Self> {
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::InvalidParameter(format!("coupling g = {g} must be >= 0")));
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParameter("detuning must be finite".into()));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("mode frequency omega = {omega} must be > 0")));
        }
        Ok(Self { g, delta, omega })
    }

    pub fn g(&self) -> f64 {
        self.g
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `Δα = √(δ² + 4g²)`, twice the vacuum Rabi frequency.
    pub fn delta_alpha(&self) -> f64 {
        self.delta.hypot(2.0 * self.g)
    }

    /// The equivalent one-mode [`ModeSet`] (atomic frequency `ω + δ`).
    pub fn to_mode_set(&self) -> ModeSet {
        ModeSet::new(self.omega + self.delta, vec![-self.delta], vec![self.g])
            .expect("validated parameters")
    }
}

/// `(cos(Δα t/2), (δ/Δα) sin(Δα t/2))`; the bracket of `u` is `c − i s`.
fn bracket(t: f64, p: &JcmParams) -> (f64, f64) {
    let da = p.delta_alpha();
    if da == 0.0 {
        return (1.0, 0.0);
    }
    let (s, c) = (0.5 * da * t).sin_cos();
    (c, p.delta / da * s)
}

/// Amplitude to remain in `|e, vac>`, including the free phase.
pub fn jcm_u(t: f64, p: &JcmParams) -> Complex64 {
    let (c, s) = bracket(t, p);
    Complex64::from_polar(1.0, -(p.omega + 0.5 * p.delta) * t) * Complex64::new(c, -s)
}

/// `|u(t)|` without the rapidly rotating phase (better rounding).
pub fn jcm_u_abs(t: f64, p: &JcmParams) -> f64 {
    let (c, s) = bracket(t, p);
    c.hypot(s).min(1.0)
}

/// Entanglement time series for a pure initial state at polar angle `theta`.
pub fn jcm_pure_series(grid: &[f64], theta: f64, p: &JcmParams, measure: PureMeasure) -> Result<Vec<f64>> {
    grid.iter().map(|&t| measure.from_u(jcm_u_abs(t, p), theta)).collect()
}

/// Exact mixed-state evolution on `{|g,0>, |e,0>, |g,1>}`, embedded at `M = 1`.
///
/// The one-excitation block is `[[0, g], [g, −δ]]` on `(|e,0>, |g,1>)`; `|g,0>`
/// has energy zero, so coherences between the sectors keep the right phase.
pub fn jcm_mixed_evolution(t: f64, b: &BlochVector, p: &JcmParams) -> TruncatedState {
    // e^{-iH t} = e^{iδt/2} [cos(Δα t/2) − i sin(Δα t/2) K/(Δα/2)],  K = [[δ/2, g],[g, −δ/2]]
    let da = p.delta_alpha();
    let (sn, cs) = (0.5 * da * t).sin_cos();
    let sinc = if da == 0.0 { 0.5 * t } else { sn / (0.5 * da) };
    let ph = Complex64::from_polar(1.0, 0.5 * p.delta * t);
    let i = Complex64::i();
    let u_ee = ph * (cs - i * sinc * 0.5 * p.delta);
    let u_gg = ph * (cs + i * sinc * 0.5 * p.delta);
    let u_eg = ph * (-i * sinc * p.g);

    // basis order: e0 = 0, e1 = 1, g0 = 2, g1 = 3
    let one = Complex64::new(1.0, 0.0);
    let mut u = CMatrix::zeros(4, 4);
    u[(0, 0)] = u_ee;
    u[(0, 3)] = u_eg;
    u[(3, 0)] = u_eg;
    u[(3, 3)] = u_gg;
    u[(1, 1)] = one;
    u[(2, 2)] = one;

    let chi0 = TruncatedState::with_vacuum(&bloch_to_density(b), 1).expect("2x2 atom, M = 1");
    let m = &u * chi0.matrix() * u.adjoint();
    TruncatedState::from_parts(1, m)
}

/// Hamiltonian vector `(g, 0, −δ/2)` driving the Bloch precession in the one-excitation manifold.
pub fn bloch_precession_axis(p: &JcmParams) -> [f64; 3] {
    [p.g, 0.0, -0.5 * p.delta]
}

/// `|u|²` at the odd minima `Δα t = π(2k+1)`: `δ²/(δ² + 4g²)`.
pub fn odd_minimum_depth(p: &JcmParams) -> f64 {
    let da2 = p.delta * p.delta + 4.0 * p.g * p.g;
    if da2 == 0.0 {
        1.0
    } else {
        p.delta * p.delta / da2
    }
}
