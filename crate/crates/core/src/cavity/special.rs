//! Complex log-gamma and digamma on the plane cut along `{−n + iy : n ≥ 0, y ≥ 0}`.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

const CUT_TOL: f64 = 1e-12;
const ASYMPTOTIC_RE: f64 = 12.0;
const HALF_LN_TAU: f64 = 0.918_938_533_204_672_7;

/// `B_{2k}` for `k = 1..8`.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Logarithm with `arg ∈ (−3π/2, π/2]`: principal in the right half-plane and
/// continuous across the negative real axis; cut along the positive imaginary axis.
pub fn ln_c(w: Complex64) -> Complex64 {
    let mut a = w.im.atan2(w.re);
    if w.re < 0.0 && w.im >= 0.0 {
        a -= TAU;
    }
    Complex64::new(w.norm().ln(), a)
}

/// Which cut ray or pole `z` sits on, if any.
fn cut_check(z: Complex64) -> Result<()> {
    let n = (-z.re).round();
    if n >= 0.0 && (z.re + n).abs() <= CUT_TOL && z.im >= -CUT_TOL {
        if z.im.abs() <= CUT_TOL {
            return Err(Error::Pole { z });
        }
        return Err(Error::BranchCut { z });
    }
    Ok(())
}

fn shift_count(z: Complex64) -> usize {
    if z.re >= ASYMPTOTIC_RE {
        0
    } else {
        (ASYMPTOTIC_RE - z.re).ceil() as usize
    }
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k2 = 2.0 * (k as f64 + 1.0);
        series += term * (b / (k2 * (k2 - 1.0)));
        term *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_TAU + series
}

/// `ln Γ(z)`: principal for `Re z > 0`, continued by `lnΓ(z) = lnΓ(z+1) − ln_c z`.
///
/// Points on a cut ray (within `1e-12`) are rejected.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("log_gamma of non-finite {z}")));
    }
    cut_check(z)?;
    let n = shift_count(z);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += ln_c(z + k as f64);
    }
    Ok(stirling(z + n as f64) - acc)
}

/// Logarithmic derivative of Γ.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("digamma of non-finite {z}")));
    }
    let n = (-z.re).round();
    if n >= 0.0 && (z.re + n).abs() <= CUT_TOL && z.im.abs() <= CUT_TOL {
        return Err(Error::Pole { z });
    }
    let shifts = shift_count(z);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..shifts {
        acc += (z + k as f64).inv();
    }
    let w = z + shifts as f64;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut term = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k2 = 2.0 * (k as f64 + 1.0);
        series += term * (b / k2);
        term *= inv2;
    }
    Ok(w.ln() - 0.5 * inv - series - acc)
}

/// Stirling remainder `lnΓ(β) − β ln β + β + ½(ln β − ln 2π)`, small for large `|β|`.
pub fn stirling_remainder(beta: Complex64) -> Result<Complex64> {
    let lb = ln_c(beta);
    Ok(log_gamma(beta)? - beta * lb + beta + 0.5 * (lb - (2.0 * PI).ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::EULER_GAMMA;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half - c(0.5 * PI.ln(), 0.0)).norm() < 1e-14);
        // ln Γ(10) = ln 362880
        assert!((log_gamma(c(10.0, 0.0)).unwrap().re - 362_880f64.ln()).abs() < 1e-13);
        assert!((digamma(c(1.0, 0.0)).unwrap() + EULER_GAMMA).norm() < 1e-14);
    }

    #[test]
    fn reflection_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        for y in [0.3, 1.0, 4.0] {
            let lg = log_gamma(c(0.0, -y)).unwrap();
            let want = 0.5 * (PI / (y * (PI * y).sinh())).ln();
            assert!((lg.re - want).abs() < 1e-13);
        }
    }

    #[test]
    fn negative_real_axis_values() {
        // Γ(−0.5) = −2√π; each ln_c of a negative number carries −iπ
        let lg = log_gamma(c(-0.5, 0.0)).unwrap();
        assert!((lg.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
        assert!((lg.im - PI).abs() < 1e-13);
        // Γ(−2.5) = −8√π/15, reached through three logs each contributing −π
        let lg = log_gamma(c(-2.5, 0.0)).unwrap();
        assert!((lg.re - (8.0 * PI.sqrt() / 15.0).ln()).abs() < 1e-13);
        assert!((lg.im - 3.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn recurrence_and_cuts() {
        for z in [c(0.3, 0.7), c(-1.4, -2.0), c(-3.6, 0.2), c(2.2, -5.0)] {
            let a = log_gamma(z + 1.0).unwrap();
            let b = log_gamma(z).unwrap() + ln_c(z);
            assert!((a - b).norm() < 1e-12, "{z}");
            let d = digamma(z + 1.0).unwrap() - digamma(z).unwrap() - z.inv();
            assert!(d.norm() < 1e-12);
            let dc = digamma(z.conj()).unwrap() - digamma(z).unwrap().conj();
            assert!(dc.norm() < 1e-13);
        }
        assert!(matches!(log_gamma(c(-2.0, 0.5)), Err(Error::BranchCut { .. })));
        assert!(matches!(log_gamma(c(0.0, 3.0)), Err(Error::BranchCut { .. })));
        assert!(matches!(log_gamma(c(-1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(digamma(c(-3.0, 0.0)), Err(Error::Pole { .. })));
        assert!(log_gamma(c(-2.0, -0.5)).is_ok());
    }

    #[test]
    fn stirling_remainder_decays() {
        let r = stirling_remainder(c(40.0, -3.0)).unwrap();
        assert!(r.norm() < 3e-3);
    }
}
