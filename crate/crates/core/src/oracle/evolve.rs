use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multimode::ModeSet;
use crate::state::{CMatrix, TruncatedState};

/// Sampled trajectory.
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    /// Amplitude vectors in the truncated product basis.
    pub states: Vec<Vec<Complex64>>,
    /// `max |<ψ|ψ> − 1|` over the samples.
    pub norm_drift: f64,
}

/// Full `2(M+1)` interaction Hamiltonian in the product basis `atom·(M+1) + field`.
///
/// `|e,1_k>` carries energy `δ_k` and no coupling (two excitations are outside the model).
pub fn full_hamiltonian(ms: &ModeSet) -> DMatrix<f64> {
    let nf = ms.len() + 1;
    let mut h = DMatrix::zeros(2 * nf, 2 * nf);
    for k in 1..nf {
        let (d, g) = (ms.deltas()[k - 1], ms.couplings()[k - 1]);
        h[(k, k)] = d;
        h[(nf + k, nf + k)] = d;
        h[(0, nf + k)] = g;
        h[(nf + k, 0)] = g;
    }
    h
}

fn apply(ms: &ModeSet, psi: &[Complex64], out: &mut [Complex64]) {
    // out = −i H ψ, exploiting the arrow structure
    let nf = ms.len() + 1;
    let mi = Complex64::new(0.0, -1.0);
    let mut e0 = Complex64::new(0.0, 0.0);
    for k in 1..nf {
        let (d, g) = (ms.deltas()[k - 1], ms.couplings()[k - 1]);
        e0 += g * psi[nf + k];
        out[nf + k] = mi * (g * psi[0] + d * psi[nf + k]);
        out[k] = mi * d * psi[k];
    }
    out[0] = mi * e0;
    out[nf] = Complex64::new(0.0, 0.0);
}

fn norm_bound(ms: &ModeSet) -> f64 {
    let row0: f64 = ms.couplings().iter().sum();
    ms.deltas().iter().zip(ms.couplings()).fold(row0, |m, (d, g)| m.max(d.abs() + g))
}

/// Classical fourth-order Runge–Kutta on `i dψ/dt = Hψ`, sampled on `grid`.
///
/// Steps never exceed `dt_max`; `dt_max · ‖H‖` (Gershgorin bound) must stay below 0.1.
pub fn rk4_evolve(ms: &ModeSet, psi0: &[Complex64], grid: &[f64], dt_max: f64) -> Result<EvolutionResult> {
    let dim = 2 * (ms.len() + 1);
    if psi0.len() != dim {
        return Err(Error::InvalidParameter(format!("initial amplitude vector must have length {dim}")));
    }
    if !(dt_max > 0.0) {
        return Err(Error::InvalidParameter("dt_max must be positive".into()));
    }
    let stiff = dt_max * norm_bound(ms);
    if stiff >= 0.1 {
        return Err(Error::StepTooLarge(stiff));
    }
    if grid.iter().any(|t| !(*t >= 0.0)) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("time grid must be sorted and nonnegative".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut psi = psi0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![zero; dim], vec![zero; dim], vec![zero; dim], vec![zero; dim], vec![zero; dim]);
    let n0: f64 = psi0.iter().map(|a| a.norm_sqr()).sum();
    let mut t = 0.0;
    let mut states = Vec::with_capacity(grid.len());
    let mut drift: f64 = 0.0;
    for &target in grid {
        let span = target - t;
        let steps = (span / dt_max).ceil().max(0.0) as usize;
        if steps > 0 {
            let h = span / steps as f64;
            for _ in 0..steps {
                apply(ms, &psi, &mut k1);
                for i in 0..dim {
                    tmp[i] = psi[i] + 0.5 * h * k1[i];
                }
                apply(ms, &tmp, &mut k2);
                for i in 0..dim {
                    tmp[i] = psi[i] + 0.5 * h * k2[i];
                }
                apply(ms, &tmp, &mut k3);
                for i in 0..dim {
                    tmp[i] = psi[i] + h * k3[i];
                }
                apply(ms, &tmp, &mut k4);
                for i in 0..dim {
                    psi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
        }
        t = target;
        let n: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        drift = drift.max((n - n0).abs());
        states.push(psi.clone());
    }
    Ok(EvolutionResult { times: grid.to_vec(), states, norm_drift: drift })
}

/// Cyclic Jacobi rotations; returns `(eigenvalues, eigenvectors as columns)`.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = DMatrix::identity(n, n);
    let scale = m.iter().fold(0.0f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].powi(2)).sum();
        if off.sqrt() <= 1e-17 * scale * n as f64 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[(i, i)]).collect(), v)
}

fn propagator(ms: &ModeSet, t: f64) -> CMatrix {
    let (vals, vecs) = jacobi_eigen(&full_hamiltonian(ms));
    let n = vals.len();
    let phases: Vec<Complex64> = vals.iter().map(|&e| Complex64::from_polar(1.0, -e * t)).collect();
    CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| phases[k] * vecs[(i, k)] * vecs[(j, k)]).sum())
}

/// `e^{−iHt} χ e^{iHt}` through a full eigendecomposition.
pub fn expm_evolve(ms: &ModeSet, chi0: &TruncatedState, t: f64) -> Result<TruncatedState> {
    if chi0.modes() != ms.len() {
        return Err(Error::InvalidParameter("state and mode set disagree on M".into()));
    }
    let u = propagator(ms, t);
    Ok(TruncatedState::from_parts(ms.len(), &u * chi0.matrix() * u.adjoint()))
}

/// `e^{−iHt} ψ0` through the same eigendecomposition.
pub fn expm_amplitude(ms: &ModeSet, psi0: &[Complex64], t: f64) -> Vec<Complex64> {
    let u = propagator(ms, t);
    let n = psi0.len();
    (0..n).map(|i| (0..n).map(|j| u[(i, j)] * psi0[j]).sum()).collect()
}
