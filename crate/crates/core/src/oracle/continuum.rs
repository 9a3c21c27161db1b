use num_complex::Complex64;
use std::f64::consts::PI;

use crate::cavity::CavityParams;
use crate::error::{Error, Result};
use crate::multimode::ModeSet;

/// Finite stand-in for the cavity continuum.
#[derive(Debug, Clone)]
pub struct ContinuumModes {
    pub modes: ModeSet,
    /// Wavenumber the grids are refined around.
    pub focus: f64,
    /// Largest mode spacing in the graded core `|k − focus| < GRADING`, over all branches.
    pub spacing_near_focus: f64,
}

impl ContinuumModes {
    /// Spacing must resolve the decay rate: `Δk ≤ γ/10`.
    pub fn resolves(&self, gamma: f64) -> bool {
        self.spacing_near_focus <= 0.1 * gamma
    }
}

/// Width of the finely resolved core of the sinh grid.
pub const GRADING: f64 = 0.02;

/// Discretizes every transverse branch `n` (wavenumber floor `πn/L`, `±n` merged)
/// on a sinh-graded grid `k = focus + s·sinh ξ`, midpoint rule in `ξ`.
///
/// Each mode gets `g² = (λ²/(2πL))·m·dk·e^{−kε}` with multiplicity `m = 1`
/// for `n = 0` and 2 otherwise, so `Σ g²` reproduces the kernel at `s = 0`.
pub fn discretize_continuum(cp: &CavityParams, n_per_branch: usize, k_max: f64) -> Result<ContinuumModes> {
    if k_max * cp.epsilon() < 5.0 {
        return Err(Error::InvalidParameter(format!(
            "k_max * eps = {} must be >= 5 to resolve the cutoff",
            k_max * cp.epsilon()
        )));
    }
    if n_per_branch < 100 {
        return Err(Error::InvalidParameter("need at least 100 points per branch".into()));
    }
    let l = cp.length();
    let c = cp.lambda().powi(2) / (2.0 * PI * l);
    let focus = cp.omega_tilde();
    let n_max = (l * k_max / PI).floor() as usize;
    let mut deltas = Vec::with_capacity((n_max + 1) * n_per_branch);
    let mut couplings = Vec::with_capacity((n_max + 1) * n_per_branch);
    let mut spacing: f64 = 0.0;
    for n in 0..=n_max {
        let k_lo = PI * n as f64 / l;
        if k_lo >= k_max {
            break;
        }
        let mult = if n == 0 { 1.0 } else { 2.0 };
        let xa = ((k_lo - focus) / GRADING).asinh();
        let xb = ((k_max - focus) / GRADING).asinh();
        let dxi = (xb - xa) / n_per_branch as f64;
        for j in 0..n_per_branch {
            let xi = xa + dxi * (j as f64 + 0.5);
            let k = focus + GRADING * xi.sinh();
            let dk = GRADING * xi.cosh() * dxi;
            if (k - focus).abs() < GRADING {
                spacing = spacing.max(dk);
            }
            deltas.push(k - cp.omega0());
            couplings.push((c * mult * dk * (-k * cp.epsilon()).exp()).sqrt());
        }
    }
    Ok(ContinuumModes { modes: ModeSet::new(cp.omega0(), deltas, couplings)?, focus, spacing_near_focus: spacing })
}

/// Secular roots and weights inside a frequency window.
#[derive(Debug, Clone)]
pub struct WindowedSpectrum {
    pub roots: Vec<f64>,
    pub weights: Vec<f64>,
}

impl WindowedSpectrum {
    /// `Σ c_j e^{−i x_j t}` over the captured roots.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        self.roots.iter().zip(&self.weights).map(|(&x, &c)| Complex64::from_polar(c, -x * t)).sum()
    }

    pub fn captured_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Chebyshev interpolant on `[centre − half, centre + half]`.
struct Chebyshev {
    centre: f64,
    half: f64,
    coeffs: Vec<f64>,
}

impl Chebyshev {
    fn fit(centre: f64, half: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let nodes: Vec<f64> = (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect();
        let vals: Vec<f64> = nodes.iter().map(|&u| f(centre + half * u)).collect();
        let coeffs = (0..n)
            .map(|k| {
                let s: f64 = (0..n).map(|j| vals[j] * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos()).sum();
                let norm = if k == 0 { 1.0 } else { 2.0 };
                norm * s / n as f64
            })
            .collect();
        Self { centre, half, coeffs }
    }

    fn eval(&self, x: f64) -> f64 {
        let u = (x - self.centre) / self.half;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * u * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        u * b1 - b2 + self.coeffs[0]
    }
}

/// Roots of `x − Σ g_k²/(x − δ_k)` with `|x − centre| < half_width` and their
/// weights `1/(1 + Σ g_k²/(x−δ_k)²)`.
///
/// Modes within `half_width + 0.2` of the centre enter exactly; the remote tail
/// is smooth on the window and is replaced by 96-node Chebyshev interpolants.
pub fn windowed_spectrum(ms: &ModeSet, centre: f64, half_width: f64) -> Result<WindowedSpectrum> {
    if !(half_width > 0.0) {
        return Err(Error::InvalidParameter("window half-width must be positive".into()));
    }
    let band = half_width + 0.2;
    let mut near: Vec<(f64, f64)> = Vec::new();
    let mut far_d = Vec::new();
    let mut far_g2 = Vec::new();
    for (&d, &g) in ms.deltas().iter().zip(ms.couplings()) {
        if g == 0.0 {
            continue;
        }
        if (d - centre).abs() < band {
            near.push((d, g * g));
        } else {
            far_d.push(d);
            far_g2.push(g * g);
        }
    }
    near.sort_by(|a, b| a.0.total_cmp(&b.0));
    let far = |x: f64, p: i32| -> f64 { far_d.iter().zip(&far_g2).map(|(d, g2)| g2 / (x - d).powi(p)).sum() };
    let s0 = Chebyshev::fit(centre, half_width, 96, |x| far(x, 1));
    let s1 = Chebyshev::fit(centre, half_width, 96, |x| far(x, 2));
    let f = |x: f64| x - near.iter().map(|(d, g2)| g2 / (x - d)).sum::<f64>() - s0.eval(x);
    let df = |x: f64| 1.0 + near.iter().map(|(d, g2)| g2 / (x - d).powi(2)).sum::<f64>() + s1.eval(x);

    let inside: Vec<f64> =
        near.iter().map(|p| p.0).filter(|d| (d - centre).abs() < half_width).collect();
    let mut roots = Vec::new();
    let mut weights = Vec::new();
    for w in inside.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        // f runs from −∞ to +∞ between consecutive poles
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if f(m) > 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        let x = 0.5 * (a + b);
        roots.push(x);
        weights.push(1.0 / df(x));
    }
    Ok(WindowedSpectrum { roots, weights })
}

/// Least-squares decay rate `−d ln|u| / dt`.
pub fn fit_decay_rate(times: &[f64], abs_u: &[f64]) -> f64 {
    let n = times.len() as f64;
    let ys: Vec<f64> = abs_u.iter().map(|v| v.ln()).collect();
    let mt = times.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, y) in times.iter().zip(&ys) {
        sxy += (t - mt) * (y - my);
        sxx += (t - mt).powi(2);
    }
    -sxy / sxx
}
