//! Entanglement measures in bits.

use crate::error::{Error, Result};
use crate::state::{hermitian_eigenvalues, CMatrix, DensityOperator, Spectrum, TruncatedState};

const CLIP_TOL: f64 = 1e-10;

fn entropy_term(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Von Neumann entropy `-Σ p log2 p` of a density operator.
pub fn eoe(rho: &DensityOperator) -> f64 {
    eoe_spectrum(&rho.spectrum())
}

/// Entropy of an already-diagonalized state.
pub fn eoe_spectrum(s: &Spectrum) -> f64 {
    s.values().iter().map(|&p| entropy_term(p.clamp(0.0, 1.0))).sum()
}

/// Transposes the field indices: `PT[(a,f),(b,f')] = χ[(a,f'),(b,f)]`.
pub fn partial_transpose(chi: &TruncatedState) -> CMatrix {
    let nf = chi.modes() + 1;
    let m = chi.matrix();
    CMatrix::from_fn(chi.dim(), chi.dim(), |i, j| {
        let (a, f) = (i / nf, i % nf);
        let (b, fp) = (j / nf, j % nf);
        m[(a * nf + fp, b * nf + f)]
    })
}

/// Sum of absolute eigenvalues of the Hermitian part of `a`.
pub fn trace_norm(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).iter().map(|v| v.abs()).sum()
}

/// `log2 ‖χ^{T_B}‖₁`, floored at zero against rounding.
pub fn log_negativity(chi: &TruncatedState) -> f64 {
    trace_norm(&partial_transpose(chi)).log2().max(0.0)
}

fn check_u(u_abs: f64) -> Result<f64> {
    if !(u_abs.is_finite() && u_abs >= 0.0 && u_abs <= 1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!("|u| = {u_abs} outside [0, 1]")));
    }
    Ok(u_abs.min(1.0))
}

/// `√(|u|² − |u|⁴)`, written to stay exact at `|u|² = ½`.
fn coherence(u: f64) -> f64 {
    let x = u * u;
    (x * (1.0 - x)).max(0.0).sqrt()
}

/// Reduced atomic eigenvalues for a pure total state with amplitude `|u|`.
pub fn reduced_eigs_from_u(u_abs: f64, theta: f64) -> Result<Spectrum> {
    let u = check_u(u_abs)?;
    let c2 = (0.5 * theta).cos().powi(2);
    let s = 2.0 * c2 * coherence(u);
    let root = (1.0 - s * s).max(0.0).sqrt();
    Ok(Spectrum::from_sorted(vec![0.5 * (1.0 + root), 0.5 * (1.0 - root)]))
}

/// `log2 (Σ √p)²` for a Schmidt spectrum.
pub fn ln_pure_from_spectrum(s: &Spectrum) -> f64 {
    let sum: f64 = s.values().iter().map(|p| p.max(0.0).sqrt()).sum();
    (2.0 * sum.log2()).max(0.0)
}

/// Closed-form LN of a pure state from `|u|` and the initial polar angle.
pub fn ln_from_u(u_abs: f64, theta: f64) -> Result<f64> {
    let u = check_u(u_abs)?;
    let c2 = (0.5 * theta).cos().powi(2);
    Ok((1.0 + 2.0 * c2 * coherence(u)).log2())
}

/// Entropy of entanglement from `|u|` (pure total states).
pub fn eoe_from_u(u_abs: f64, theta: f64) -> Result<f64> {
    Ok(eoe_spectrum(&reduced_eigs_from_u(u_abs, theta)?))
}

/// Measures available on the pure-state path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PureMeasure {
    Eoe,
    Ln,
}

impl PureMeasure {
    pub fn from_u(self, u_abs: f64, theta: f64) -> Result<f64> {
        match self {
            PureMeasure::Eoe => eoe_from_u(u_abs, theta),
            PureMeasure::Ln => ln_from_u(u_abs, theta),
        }
    }
}

/// Clip eigenvalues within tolerance of `[0, 1]`; bigger violations are errors.
pub fn clip_probabilities(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|&p| {
            if (-CLIP_TOL..=1.0 + CLIP_TOL).contains(&p) {
                Ok(p.clamp(0.0, 1.0))
            } else {
                Err(Error::InvalidState(format!("eigenvalue {p} outside [0, 1]")))
            }
        })
        .collect()
}

/// Entanglement entropy of a pure atom-field state given as a density matrix.
pub fn eoe_truncated(chi: &TruncatedState) -> Result<f64> {
    let red = chi.reduced_atom();
    let vals = clip_probabilities(&hermitian_eigenvalues(&red))?;
    Ok(vals.into_iter().map(entropy_term).sum())
}
