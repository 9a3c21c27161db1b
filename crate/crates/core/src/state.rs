//! Atomic and atom-field states.
//!
//! Basis convention for [`TruncatedState`]: atom `{|e>, |g>}` tensored with
//! field `{|vac>, |1_1>, ..., |1_M>}`, flattened as `atom * (M + 1) + field`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

/// Index of the excited atomic level.
pub const EXCITED: usize = 0;
/// Index of the ground atomic level.
pub const GROUND: usize = 1;

/// Atomic state on or inside the Bloch sphere; `|e>` sits at the north pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    r: f64,
    theta: f64,
    phi: f64,
}

impl BlochVector {
    /// Radius is clamped to 1 when it exceeds it by rounding noise; `phi` wraps into `[0, 2π)`.
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(r.is_finite() && theta.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidState("Bloch coordinates must be finite".into()));
        }
        if !(0.0..=1.0 + 1e-12).contains(&r) {
            return Err(Error::InvalidState(format!("Bloch radius r = {r} outside [0, 1]")));
        }
        if !(-1e-12..=PI + 1e-12).contains(&theta) {
            return Err(Error::InvalidState(format!("polar angle theta = {theta} outside [0, pi]")));
        }
        Ok(Self {
            r: r.min(1.0),
            theta: theta.clamp(0.0, PI),
            phi: phi.rem_euclid(TAU),
        })
    }

    pub fn excited() -> Self {
        Self { r: 1.0, theta: 0.0, phi: 0.0 }
    }

    pub fn ground() -> Self {
        Self { r: 1.0, theta: PI, phi: 0.0 }
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn is_pure(&self) -> bool {
        self.r == 1.0
    }

    /// Pure-state amplitudes `(a_e, a_g)`; only meaningful when `r = 1`.
    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        let half = 0.5 * self.theta;
        (
            Complex64::new(half.cos(), 0.0),
            Complex64::from_polar(half.sin(), self.phi),
        )
    }
}

/// `½(I + r n·σ)` in the `{|e>, |g>}` basis.
pub fn bloch_to_density(b: &BlochVector) -> DensityOperator {
    let (st, ct) = b.theta.sin_cos();
    let ee = 0.5 * (1.0 + b.r * ct);
    let eg = Complex64::from_polar(0.5 * b.r * st, -b.phi);
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(ee, 0.0), eg, eg.conj(), Complex64::new(1.0 - ee, 0.0)],
    );
    DensityOperator { matrix: m }
}

fn check_density(m: &CMatrix) -> Result<()> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::InvalidState("density matrix must be square and nonempty".into()));
    }
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if dev > HERMITIAN_TOL {
        return Err(Error::InvalidState(format!("not Hermitian (deviation {dev:e})")));
    }
    let tr = m.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let min = hermitian_eigenvalues(m).into_iter().fold(f64::INFINITY, f64::min);
    if min < -POSITIVITY_TOL {
        return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Eigenvalues of the Hermitian part of `m`, in descending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Hermitian, unit-trace, positive matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_density(&matrix)?;
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum { values: hermitian_eigenvalues(&self.matrix) }
    }
}

/// Atom-field density operator on the zero- and one-excitation truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    modes: usize,
    matrix: CMatrix,
}

impl TruncatedState {
    pub fn new(modes: usize, matrix: CMatrix) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidState("need at least one mode".into()));
        }
        let dim = 2 * (modes + 1);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "expected {dim}x{dim} matrix for M = {modes}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_density(&matrix)?;
        Ok(Self { modes, matrix })
    }

    /// Skips validation; callers guarantee the invariants (exact unitary evolution).
    pub(crate) fn from_parts(modes: usize, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), 2 * (modes + 1));
        Self { modes, matrix }
    }

    /// `ρ_A ⊗ |vac><vac|`.
    pub fn with_vacuum(rho_atom: &DensityOperator, modes: usize) -> Result<Self> {
        if rho_atom.dim() != 2 {
            return Err(Error::InvalidState("atomic state must be 2x2".into()));
        }
        if modes == 0 {
            return Err(Error::InvalidState("need at least one mode".into()));
        }
        let f = modes + 1;
        let mut m = CMatrix::zeros(2 * f, 2 * f);
        for a in 0..2 {
            for b in 0..2 {
                m[(a * f, b * f)] = rho_atom.matrix()[(a, b)];
            }
        }
        Ok(Self { modes, matrix: m })
    }

    /// `|ψ><ψ|` for a normalized amplitude vector in the product basis.
    pub fn from_pure(modes: usize, psi: &[Complex64]) -> Result<Self> {
        let dim = 2 * (modes + 1);
        if psi.len() != dim {
            return Err(Error::InvalidState(format!("amplitude vector must have length {dim}")));
        }
        let m = CMatrix::from_fn(dim, dim, |i, j| psi[i] * psi[j].conj());
        Self::new(modes, m)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn index(&self, atom: usize, field: usize) -> usize {
        atom * (self.modes + 1) + field
    }

    /// Partial trace over the field.
    pub fn reduced_atom(&self) -> CMatrix {
        let f = self.modes + 1;
        CMatrix::from_fn(2, 2, |a, b| (0..f).map(|k| self.matrix[(a * f + k, b * f + k)]).sum())
    }

    /// Diagonal element for `|atom, field>`.
    pub fn population(&self, atom: usize, field: usize) -> f64 {
        let i = self.index(atom, field);
        self.matrix[(i, i)].re
    }
}

/// Eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts descending; entries must lie in `[0, 1]` up to `1e-10` (then clipped) and sum to 1.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidState("empty spectrum".into()));
        }
        for v in values.iter_mut() {
            if !(-POSITIVITY_TOL..=1.0 + POSITIVITY_TOL).contains(v) {
                return Err(Error::InvalidState(format!("eigenvalue {v} outside [0, 1]")));
            }
            *v = v.clamp(0.0, 1.0);
        }
        let s: f64 = values.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("eigenvalues sum to {s}")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub(crate) fn from_sorted(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
