//! Poles of `1/(z + iω0 + μ̃(z))` on the cut plane.
//!
//! In the `z`-plane the log-gamma cuts become the rays `{x − inπ/L : x ≤ 0}`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::kernel::{mu_laplace_derivative, mu_laplace_rest};
use super::special::stirling_remainder;
use super::{omega_infinity, CavityParams, CavityPole};
use crate::error::{Error, Result};
use crate::measures::ln_from_u;

/// Distance of `L·Ω∞/π` from an integer inside which a mode is considered resonant.
pub const RESONANCE_GUARD: f64 = 0.05;

const MAX_ITERATIONS: usize = 200;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoleMethod {
    Perturbative,
    Numeric,
}

impl PoleMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            PoleMethod::Perturbative => "perturbative",
            PoleMethod::Numeric => "numeric",
        }
    }
}

/// `f(z) = z + iω̃0 + μ̃_rest(z)`, equal to `z + iω0 + μ̃(z)`.
pub fn pole_function(z: Complex64, cp: &CavityParams) -> Result<Complex64> {
    Ok(z + Complex64::new(0.0, cp.omega_tilde()) + mu_laplace_rest(z, cp)?)
}

fn beta(z: Complex64, cp: &CavityParams) -> Complex64 {
    cp.length() * z / Complex64::new(0.0, PI)
}

/// Whether the straight path `a → b` crosses (or touches) a cut ray.
pub fn crosses_cut(a: Complex64, b: Complex64, cp: &CavityParams) -> bool {
    let (ba, bb) = (beta(a, cp), beta(b, cp));
    let (lo, hi) = if ba.re <= bb.re { (ba, bb) } else { (bb, ba) };
    // cut rays sit at Re β = −n (n ≥ 0) with Im β ≥ 0
    let first = lo.re.ceil().min(0.0);
    let mut n = first;
    while n <= hi.re.min(0.0) {
        if n >= lo.re {
            let im = if hi.re == lo.re {
                lo.im.max(hi.im)
            } else {
                lo.im + (hi.im - lo.im) * (n - lo.re) / (hi.re - lo.re)
            };
            if im >= 0.0 {
                return true;
            }
        }
        n += 1.0;
    }
    false
}

fn resonance_offset(cp: &CavityParams) -> (f64, f64) {
    let x = cp.resonance_ratio();
    (x, x - x.round())
}

/// `1/(1 + μ̃′(z_p))`.
pub fn residue_at(z: Complex64, cp: &CavityParams) -> Result<Complex64> {
    let d = 1.0 + mu_laplace_derivative(z, cp)?;
    if d.norm() <= 1e-8 {
        return Err(Error::NearDoubleRoot { z, derivative: d.norm() });
    }
    Ok(d.inv())
}

/// Weak-coupling dominant pole `−iΩ∞ − λ²Ω∞/π + (iλ²/(πL)) R(−LΩ∞/π)`,
/// `R` the Stirling remainder of log-gamma.
pub fn dominant_pole_perturbative(cp: &CavityParams) -> Result<CavityPole> {
    let om = omega_infinity(cp);
    let (x, off) = resonance_offset(cp);
    if cp.lambda() == 0.0 {
        let z = Complex64::new(0.0, -cp.omega0());
        return Ok(CavityPole { z, residue: Complex64::new(1.0, 0.0), method: PoleMethod::Perturbative });
    }
    if off.abs() < RESONANCE_GUARD {
        return Err(Error::NearResonance { ratio: x, guard: RESONANCE_GUARD });
    }
    let l2 = cp.lambda().powi(2);
    let r = stirling_remainder(Complex64::new(-x, 0.0))?;
    let z = Complex64::new(-l2 * om / PI, -om) + Complex64::new(0.0, l2 / (PI * cp.length())) * r;
    let residue = residue_at(z, cp)?;
    Ok(CavityPole { z, residue, method: PoleMethod::Perturbative })
}

/// Region a Newton iterate must stay in.
#[derive(Clone, Copy)]
struct Strip {
    im_lo: f64,
    im_hi: f64,
}

impl Strip {
    fn everywhere() -> Self {
        Self { im_lo: f64::NEG_INFINITY, im_hi: f64::INFINITY }
    }
    fn contains(&self, z: Complex64) -> bool {
        z.im > self.im_lo && z.im < self.im_hi
    }
}

/// Damped Newton on `f/(z − z_k)` (deflated by `known`), never crossing a cut.
fn newton(cp: &CavityParams, seed: Complex64, known: &[Complex64], strip: Strip) -> Result<Complex64> {
    let tol = 1e-9 * cp.omega0();
    let eval = |z: Complex64| -> Result<(Complex64, Complex64)> {
        let f = pole_function(z, cp)?;
        let df = 1.0 + mu_laplace_derivative(z, cp)?;
        // Newton quantity for the deflated g = f / Π(z − z_k): g/g' = f / (f' − f Σ 1/(z − z_k))
        let corr: Complex64 = known.iter().map(|k| (z - k).inv()).sum();
        Ok((f, df - f * corr))
    };
    let mut z = seed;
    let (mut f, mut dg) = eval(z)?;
    for _ in 0..MAX_ITERATIONS {
        if f.norm() <= 1e-14 * cp.omega0() {
            return Ok(z);
        }
        let full = -f / dg;
        let mut step = full;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand = z + step;
            if !crosses_cut(z, cand, cp) && strip.contains(cand) {
                if let Ok((fc, dc)) = eval(cand) {
                    if fc.norm() < f.norm() || step.norm() < 1e-13 * z.norm().max(1.0) {
                        accepted = Some((cand, fc, dc));
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        let Some((cand, fc, dc)) = accepted else {
            if f.norm() < tol {
                return Ok(z);
            }
            return Err(Error::CutCrossingDeadlock { z });
        };
        let moved = (cand - z).norm();
        z = cand;
        f = fc;
        dg = dc;
        if moved <= 4.0 * f64::EPSILON * z.norm() && f.norm() < tol {
            return Ok(z);
        }
    }
    if f.norm() < tol {
        return Ok(z);
    }
    Err(Error::NonConvergence { iterations: MAX_ITERATIONS, residual: f.norm() })
}

fn finish(z: Complex64, cp: &CavityParams) -> Result<CavityPole> {
    if z.re > 1e-12 * cp.omega0() {
        return Err(Error::UnstablePole { z });
    }
    let residue = residue_at(z, cp)?;
    Ok(CavityPole { z, residue, method: PoleMethod::Numeric })
}

/// Newton search for the root of `z + iω0 + μ̃(z)` seeded at `seed` (default `−iΩ∞`).
pub fn dominant_pole_numeric(cp: &CavityParams, seed: Option<Complex64>) -> Result<CavityPole> {
    let seed = seed.unwrap_or_else(|| Complex64::new(0.0, -omega_infinity(cp)));
    if cp.lambda() == 0.0 {
        let z = seed - pole_function(seed, cp)?;
        return finish(z, cp);
    }
    let z = newton(cp, seed, &[], Strip::everywhere())?;
    finish(z, cp)
}

fn strip_search(cp: &CavityParams, strip: Strip, re_lo: f64, known: &[Complex64], toward_lo: bool) -> Option<Complex64> {
    // coarse scan for small |f|, clustered towards the resonant cut line
    let (nr, ni) = (48, 48);
    let width = strip.im_hi - strip.im_lo;
    let mut best: Option<(f64, Complex64)> = None;
    for a in 0..=nr {
        let re = re_lo * (1.0 - a as f64 / nr as f64);
        for b in 1..ni {
            let s = (b as f64 / ni as f64).powi(3) * width;
            let im = if toward_lo { strip.im_lo + s } else { strip.im_hi - s };
            let z = Complex64::new(re, im);
            if let Ok(f) = pole_function(z, cp) {
                let v = f.norm() / known.iter().map(|k| (z - k).norm()).product::<f64>();
                if best.map_or(true, |(m, _)| v < m) {
                    best = Some((v, z));
                }
            }
        }
    }
    let (_, seed) = best?;
    let z = newton(cp, seed, known, strip).ok()?;
    let fine = pole_function(z, cp).ok()?.norm() < 1e-9 * cp.omega0();
    (fine && z.re <= 0.0 && strip.contains(z)).then_some(z)
}

/// The pair of poles straddling a resonant cut ray.
///
/// Searches the strip just above the ray, then (deflating the first root) the
/// strip just below. Fails with [`Error::SecondRootNotFound`] when the cut
/// plane only holds one of them, which happens for weak coupling.
pub fn near_resonance_poles(cp: &CavityParams) -> Result<Vec<CavityPole>> {
    let (x, off) = resonance_offset(cp);
    if off.abs() >= RESONANCE_GUARD {
        return Err(Error::NotNearResonance { ratio: x });
    }
    let n = x.round();
    let yc = -n * cp.fsr();
    let h = 0.45 * cp.fsr();
    let gamma_scale = cp.lambda().powi(2) * (n + 0.5) / cp.length();
    let re_lo = -(20.0 * gamma_scale).max(0.05 * cp.fsr());
    let above = Strip { im_lo: yc, im_hi: yc + h };
    let below = Strip { im_lo: yc - h, im_hi: yc };
    let first = strip_search(cp, above, re_lo, &[], true);
    let second = strip_search(cp, below, re_lo, first.as_slice(), false);
    match (first, second) {
        (Some(a), Some(b)) => {
            if (a - b).norm() <= 10.0 * 1e-9 * cp.omega0() {
                return Err(Error::SecondRootNotFound("roots coincide".into()));
            }
            Ok(vec![finish(a, cp)?, finish(b, cp)?])
        }
        (Some(_), None) => Err(Error::SecondRootNotFound("no root below the resonant cut ray".into())),
        (None, Some(_)) => Err(Error::SecondRootNotFound("no root above the resonant cut ray".into())),
        (None, None) => Err(Error::NonConvergence { iterations: MAX_ITERATIONS, residual: f64::NAN }),
    }
}

/// Single-pole long-time amplitude `residue · e^{z_p t}`.
pub fn long_time_u(t: f64, pole: &CavityPole) -> Complex64 {
    pole.residue * (pole.z * t).exp()
}

/// Pure-state LN from the long-time amplitude, `|u|` capped at 1.
pub fn cavity_ln_series(grid: &[f64], theta: f64, pole: &CavityPole) -> Vec<f64> {
    grid.iter()
        .map(|&t| ln_from_u(long_time_u(t, pole).norm().min(1.0), theta).expect("|u| capped at 1"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn off_resonant(lam: f64) -> CavityParams {
        CavityParams::from_resonance_ratio(lam, 1e-3, 2.5, 1.0).unwrap()
    }

    #[test]
    fn uncoupled_pole() {
        let cp = off_resonant(0.0);
        let p = dominant_pole_perturbative(&cp).unwrap();
        assert_eq!(p.z, Complex64::new(0.0, -1.0));
        assert_eq!(p.gamma(), 0.0);
        let p = dominant_pole_numeric(&cp, None).unwrap();
        assert_eq!(p.z, Complex64::new(0.0, -1.0));
        assert_eq!(residue_at(p.z, &cp).unwrap(), Complex64::new(1.0, 0.0));
        assert!((long_time_u(50.0, &p).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frozen_pole_pair_at_small_coupling() {
        // values from an independent 30-digit computation
        let cp = off_resonant(0.02);
        let n = dominant_pole_numeric(&cp, None).unwrap();
        let p = dominant_pole_perturbative(&cp).unwrap();
        let zn = Complex64::new(-0.000_122_105_509, -0.959_235_094_749);
        let zp = Complex64::new(-0.000_122_132_161, -0.959_235_043_272);
        assert!((n.z - zn).norm() < 2e-12, "{}", n.z);
        assert!((p.z - zp).norm() < 2e-12, "{}", p.z);
        // |Δz| / (λ² Ω∞) ≈ 1.45e-4
        let rel = (n.z - p.z).norm() / (0.02f64.powi(2) * omega_infinity(&cp));
        assert!(rel > 1.3e-4 && rel < 1.6e-4, "{rel}");
        assert!(pole_function(n.z, &cp).unwrap().norm() < 1e-9);
    }

    #[test]
    fn golden_rule_rate() {
        let cp = off_resonant(0.01);
        let p = dominant_pole_perturbative(&cp).unwrap();
        let golden = 0.01f64.powi(2) / cp.length() * 2.5;
        assert!((p.gamma() / golden - 1.0).abs() < 1e-3);
        let q = dominant_pole_perturbative(&off_resonant(0.02)).unwrap();
        assert!((q.gamma() / p.gamma() / 4.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn guard_redirects() {
        let cp = CavityParams::from_resonance_ratio(0.05, 1e-3, 3.01, 1.0).unwrap();
        assert!(matches!(dominant_pole_perturbative(&cp), Err(Error::NearResonance { .. })));
        assert!(matches!(near_resonance_poles(&off_resonant(0.05)), Err(Error::NotNearResonance { .. })));
    }

    #[test]
    fn cut_crossing_detection() {
        let cp = off_resonant(0.05);
        let y = -2.0 * cp.fsr();
        let a = Complex64::new(-0.01, y + 0.01);
        let b = Complex64::new(-0.01, y - 0.01);
        assert!(crosses_cut(a, b, &cp));
        // passing to the right of the ray's end point is allowed
        let a = Complex64::new(0.01, y + 0.01);
        let b = Complex64::new(0.01, y - 0.01);
        assert!(!crosses_cut(a, b, &cp));
    }

    #[test]
    fn ln_series_limits() {
        let pole = CavityPole { z: Complex64::new(-0.1, -1.0), residue: Complex64::new(1.0, 0.0), method: PoleMethod::Numeric };
        let ln = cavity_ln_series(&[0.0, 100.0], 0.0, &pole);
        assert_eq!(ln[0], 0.0);
        // γt = 10: LN = log2(1 + 2e^{-10}√(1 − e^{-20})) ≈ 1.31e-4
        let want = (1.0 + 2.0 * (-10.0f64).exp() * (1.0 - (-20.0f64).exp()).sqrt()).log2();
        assert!((ln[1] - want).abs() < 1e-15);
        assert!((ln[1] - 1.3101e-4).abs() < 1e-7);
        let ln = cavity_ln_series(&[3.0, 7.0], PI, &pole);
        assert!(ln.iter().all(|v| v.abs() < 1e-15));
    }
}
