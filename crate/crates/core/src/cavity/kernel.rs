//! Memory kernel `μ(s)` and its Laplace transform `μ̃(z)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::special::{digamma, ln_c, stirling_remainder};
use super::CavityParams;
use crate::error::{Error, Result};
use crate::EULER_GAMMA;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `C/(ε+is) · (1+q)/(1−q)`, `q = e^{−iπ(s−iε)/L}`, `C = λ²/(2πL)`.
///
/// Requires `Im s < ε` so that `|q| < 1`.
pub fn mu_time(s: Complex64, cp: &CavityParams) -> Result<Complex64> {
    let eps = cp.epsilon();
    if !(s.im < eps) {
        return Err(Error::InvalidParameter(format!(
            "kernel needs Im s < eps (got s = {s}, eps = {eps})"
        )));
    }
    if cp.lambda() == 0.0 {
        return Ok(zero());
    }
    let l = cp.length();
    let c = cp.lambda().powi(2) / (2.0 * PI * l);
    let i = Complex64::i();
    let q = (-i * PI * (s - i * eps) / l).exp();
    Ok(c / (eps + i * s) * (1.0 + q) / (1.0 - q))
}

fn beta(z: Complex64, cp: &CavityParams) -> Complex64 {
    cp.length() * z / Complex64::new(0.0, PI)
}

fn free_log(z: Complex64, cp: &CavityParams) -> Complex64 {
    ln_c(Complex64::new(0.0, -EULER_GAMMA.exp() * cp.epsilon()) * z)
}

/// `μ̃(z)` without the constant `−iλ²/(π²ε)` that renormalizes `ω0`.
pub fn mu_laplace_rest(z: Complex64, cp: &CavityParams) -> Result<Complex64> {
    if cp.lambda() == 0.0 {
        return Ok(zero());
    }
    let l2 = cp.lambda().powi(2);
    let b = beta(z, cp);
    let r = stirling_remainder(b)?;
    Ok(-(l2 / (PI * PI)) * z * free_log(z, cp) - Complex64::new(0.0, l2 / (PI * cp.length())) * r)
}

/// Laplace transform of the kernel, accurate up to `O(ε)`.
pub fn mu_laplace(z: Complex64, cp: &CavityParams) -> Result<Complex64> {
    if cp.lambda() == 0.0 {
        return Ok(zero());
    }
    let l2 = cp.lambda().powi(2);
    Ok(Complex64::new(0.0, -l2 / (PI * PI * cp.epsilon())) + mu_laplace_rest(z, cp)?)
}

/// `dμ̃/dz = −(λ²/π²)[ln(−ie^{γ_e}εz) + 1 + ψ(β) − ln β + 1/(2β)]`, `β = Lz/(iπ)`.
pub fn mu_laplace_derivative(z: Complex64, cp: &CavityParams) -> Result<Complex64> {
    if cp.lambda() == 0.0 {
        return Ok(zero());
    }
    let b = beta(z, cp);
    super::special::log_gamma(b)?; // rejects points on a cut
    let inner = free_log(z, cp) + 1.0 + digamma(b)? - ln_c(b) + 0.5 / b;
    Ok(-(cp.lambda().powi(2) / (PI * PI)) * inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> CavityParams {
        CavityParams::new(0.05, 7.85, 1e-3, 1.0).unwrap()
    }

    #[test]
    fn vanishes_without_coupling() {
        let cp = params().with_lambda(0.0).unwrap();
        let z = Complex64::new(0.1, -1.0);
        assert_eq!(mu_time(Complex64::new(0.3, 0.0), &cp).unwrap(), zero());
        assert_eq!(mu_laplace(z, &cp).unwrap(), zero());
        assert_eq!(mu_laplace_derivative(z, &cp).unwrap(), zero());
    }

    #[test]
    fn kernel_at_origin() {
        let cp = params();
        let q = (-PI * cp.epsilon() / cp.length()).exp();
        let want = cp.lambda().powi(2) / (2.0 * PI * cp.length()) / cp.epsilon() * (1.0 + q) / (1.0 - q);
        let got = mu_time(Complex64::new(1e-14, 0.0), &cp).unwrap();
        assert!((got.re - want).abs() / want < 1e-10);
        assert!(mu_time(Complex64::new(0.0, cp.epsilon()), &cp).is_err());
    }

    #[test]
    fn scales_with_lambda_squared() {
        let a = params();
        let b = a.with_lambda(0.025).unwrap();
        let z = Complex64::new(0.02, -0.9);
        let ra = mu_laplace(z, &a).unwrap();
        let rb = mu_laplace(z, &b).unwrap();
        assert!((ra / rb - 4.0).norm() < 1e-12);
    }

    #[test]
    fn frozen_reference_value() {
        // independent high-precision quadrature of the Laplace integral
        let z = Complex64::new(0.1, -1.0);
        let quad = Complex64::new(0.000_930_094, -0.254_804_037);
        let got = mu_laplace(z, &params()).unwrap();
        assert!((got - quad).norm() / quad.norm() < 2e-5, "{got}");
    }
}
