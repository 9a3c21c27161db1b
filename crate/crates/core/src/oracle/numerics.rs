//! Quadrature, contour derivatives and root counting.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::cavity::{mu_time, CavityParams};
use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `∫_a^b f` on panels between sorted breakpoints, each split to width ≤ `max_width`.
pub fn panel_quadrature(breaks: &[f64], max_width: f64, order: usize, mut f: impl FnMut(f64) -> Complex64) -> Complex64 {
    let (x, w) = gauss_legendre(order);
    let mut total = Complex64::new(0.0, 0.0);
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let pieces = ((b - a) / max_width).ceil().max(1.0) as usize;
        let h = (b - a) / pieces as f64;
        for p in 0..pieces {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            let mut s = Complex64::new(0.0, 0.0);
            for (xi, wi) in x.iter().zip(&w) {
                s += wi * f(mid + 0.5 * h * xi);
            }
            total += 0.5 * h * s;
        }
    }
    total
}

/// `∫_0^∞ e^{−zs} μ(s) ds` by graded panels around the kernel's revivals at `s = 2Lm`.
///
/// Needs `Re z > 0`; the tail beyond `e^{−Re z · s} < 1e-13` is dropped.
pub fn kernel_laplace_quadrature(z: Complex64, cp: &CavityParams) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::InvalidParameter("Laplace quadrature needs Re z > 0".into()));
    }
    let s_max = 30.0 / z.re;
    let (l, eps) = (cp.length(), cp.epsilon());
    let mut breaks = vec![0.0];
    let mut m = 0usize;
    loop {
        let c = 2.0 * l * m as f64;
        if c > s_max {
            break;
        }
        let mut d = eps / 8.0;
        while d < l {
            if c - d > 0.0 {
                breaks.push(c - d);
            }
            breaks.push(c + d);
            d *= 2.0;
        }
        breaks.push(c + l);
        m += 1;
    }
    breaks.push(s_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks.retain(|&b| b <= s_max);
    let mut err = None;
    let val = panel_quadrature(&breaks, 0.25, 20, |s| match mu_time(Complex64::new(s, 0.0), cp) {
        Ok(v) => v * (-z * s).exp(),
        Err(e) => {
            err = Some(e);
            Complex64::new(0.0, 0.0)
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(val),
    }
}

/// Derivative of a holomorphic `f` from `n` samples on a circle of radius `r`.
pub fn contour_derivative(f: impl Fn(Complex64) -> Complex64, z: Complex64, r: f64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        acc += f(z + r * w) / w;
    }
    acc / (n as f64 * r)
}

/// Zeros minus poles of `f` inside an axis-aligned rectangle (argument principle).
///
/// Edges are refined until the phase changes by less than `π/8` between samples.
pub fn count_zeros_in_rect(
    f: impl Fn(Complex64) -> Result<Complex64>,
    re: (f64, f64),
    im: (f64, f64),
    per_edge: usize,
) -> Result<i64> {
    let corners = [
        Complex64::new(re.0, im.0),
        Complex64::new(re.1, im.0),
        Complex64::new(re.1, im.1),
        Complex64::new(re.0, im.1),
    ];
    let mut total = 0.0;
    for e in 0..4 {
        let (a, b) = (corners[e], corners[(e + 1) % 4]);
        let mut prev_z = a;
        let mut prev = f(a)?;
        for k in 1..=per_edge {
            let next_z = a + (b - a) * (k as f64 / per_edge as f64);
            total += phase_change(&f, prev_z, prev, next_z, 0)?;
            prev = f(next_z)?;
            prev_z = next_z;
        }
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn phase_change(
    f: &impl Fn(Complex64) -> Result<Complex64>,
    za: Complex64,
    fa: Complex64,
    zb: Complex64,
    depth: usize,
) -> Result<f64> {
    let fb = f(zb)?;
    let d = (fb / fa).arg();
    if d.abs() < PI / 8.0 || depth > 30 {
        return Ok(d);
    }
    let zm = 0.5 * (za + zb);
    let fm = f(zm)?;
    Ok(phase_change(f, za, fa, zm, depth + 1)? + phase_change(f, zm, fm, zb, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(20);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn contour_derivative_of_exp() {
        let z = Complex64::new(0.3, -0.2);
        let d = contour_derivative(|w| w.exp(), z, 0.1, 32);
        assert!((d - z.exp()).norm() < 1e-14);
    }

    #[test]
    fn counts_polynomial_roots() {
        let f = |z: Complex64| Ok((z - 0.5) * (z + Complex64::new(0.0, 0.3)) * (z - 3.0));
        assert_eq!(count_zeros_in_rect(f, (-1.0, 1.0), (-1.0, 1.0), 16).unwrap(), 2);
        assert_eq!(count_zeros_in_rect(f, (2.0, 4.0), (-1.0, 1.0), 16).unwrap(), 1);
    }
}
