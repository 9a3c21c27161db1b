//! Exact M-mode dynamics in the one-excitation manifold.
//!
//! Basis of the interaction matrix: `{|e,0>, |g,1_1>, ..., |g,1_M>}`. The
//! matrix is an "arrow": diagonal `(0, δ_1, ..., δ_M)` with the couplings in
//! the first row and column, so a real symmetric eigensolver gives the exact
//! spectrum.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{bloch_to_density, BlochVector, CMatrix, TruncatedState};

/// Atomic frequency plus per-mode detunings `δ_k = ω_k − ω_0` and real couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    omega0: f64,
    deltas: Vec<f64>,
    couplings: Vec<f64>,
}

impl ModeSet {
    pub fn new(omega0: f64, deltas: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::InvalidParameter("need at least one mode".into()));
        }
        if deltas.len() != couplings.len() {
            return Err(Error::InvalidParameter(format!(
                "{} detunings but {} couplings",
                deltas.len(),
                couplings.len()
            )));
        }
        if !omega0.is_finite() {
            return Err(Error::InvalidParameter("omega0 must be finite".into()));
        }
        if deltas.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidParameter("detunings must be finite".into()));
        }
        if couplings.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::InvalidParameter("couplings must be real and nonnegative".into()));
        }
        Ok(Self { omega0, deltas, couplings })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }
    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }
    /// Number of modes `M`.
    pub fn len(&self) -> usize {
        self.deltas.len()
    }
    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }
}

/// Arrow-shaped `(M+1)×(M+1)` interaction matrix.
pub fn build_interaction_matrix(ms: &ModeSet) -> DMatrix<f64> {
    let n = ms.len() + 1;
    let mut h = DMatrix::zeros(n, n);
    for (k, (&d, &g)) in ms.deltas.iter().zip(&ms.couplings).enumerate() {
        h[(k + 1, k + 1)] = d;
        h[(0, k + 1)] = g;
        h[(k + 1, 0)] = g;
    }
    h
}

/// Poles `z_j = −i x_j` of the Laplace-domain amplitude with their residues.
#[derive(Debug, Clone)]
pub struct PoleSet {
    roots: Vec<Complex64>,
    weights: Vec<Complex64>,
    secular_roots: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl PoleSet {
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }
    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }
    /// Eigenvalues `x_j` in ascending order.
    pub fn secular_roots(&self) -> &[f64] {
        &self.secular_roots
    }
    pub fn len(&self) -> usize {
        self.roots.len()
    }
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
    /// Normalized eigenvectors as columns, aligned with `secular_roots`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }
}

/// Exact spectrum and spectral weights `c_j = |<e,0|v_j>|²`.
pub fn poles(ms: &ModeSet) -> PoleSet {
    let eig = SymmetricEigen::new(build_interaction_matrix(ms));
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let secular_roots: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    let roots = secular_roots.iter().map(|&x| Complex64::new(0.0, -x)).collect();
    let weights = (0..n).map(|j| Complex64::new(vectors[(0, j)].powi(2), 0.0)).collect();
    PoleSet { roots, weights, secular_roots, vectors }
}

/// Relative residual of `x Π(x−δ_k) − Σ g_k² Π_{l≠k}(x−δ_l)` at `x`.
pub fn secular_residual(x: f64, ms: &ModeSet) -> f64 {
    let scale = ms
        .deltas
        .iter()
        .chain(&ms.couplings)
        .fold(x.abs(), |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let f: Vec<f64> = ms.deltas.iter().map(|d| (x - d) / scale).collect();
    let lhs = x / scale * f.iter().product::<f64>();
    let mut rhs = 0.0;
    let mut mag = lhs.abs();
    for (k, g) in ms.couplings.iter().enumerate() {
        let term = (g / scale).powi(2)
            * f.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, v)| v).product::<f64>();
        rhs += term;
        mag += term.abs();
    }
    if mag == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / mag
    }
}

/// `Σ c_j e^{z_j t}`.
pub fn u_residue(t: f64, ps: &PoleSet) -> Complex64 {
    ps.roots.iter().zip(&ps.weights).map(|(z, c)| c * (z * t).exp()).sum()
}

/// Amplitudes of `e^{−iHt}|e,0>` over the one-excitation basis.
pub fn one_excitation_amplitudes(t: f64, ps: &PoleSet) -> Vec<Complex64> {
    let n = ps.len();
    let phases: Vec<Complex64> =
        ps.secular_roots.iter().zip(&ps.vectors.row(0)).map(|(&x, &v0)| Complex64::from_polar(v0, -x * t)).collect();
    (0..n)
        .map(|k| (0..n).map(|j| phases[j] * ps.vectors[(k, j)]).sum())
        .collect()
}

/// Residues from the partial-fraction product `Π_k(z_j+iδ_k) / Π_{l≠j}(z_j−z_l)`.
///
/// Refuses when two roots are closer than `1e-8·max|z|`; spectral weights are
/// then the only reliable option.
pub fn product_formula_weights(ps: &PoleSet, ms: &ModeSet) -> Result<Vec<Complex64>> {
    let z = &ps.roots;
    let zmax = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut sep = f64::INFINITY;
    for j in 0..z.len() {
        for l in j + 1..z.len() {
            sep = sep.min((z[j] - z[l]).norm());
        }
    }
    if z.len() > 1 && sep <= 1e-8 * zmax {
        return Err(Error::NearDegenerateRoots { separation: sep });
    }
    let i = Complex64::i();
    Ok((0..z.len())
        .map(|j| {
            // interleave numerator and denominator factors to keep the product in range
            let mut c = Complex64::new(1.0, 0.0);
            let others = (0..z.len()).filter(|&l| l != j);
            for (d, l) in ms.deltas.iter().zip(others) {
                c *= (z[j] + i * d) / (z[j] - z[l]);
            }
            c
        })
        .collect())
}

/// Exact `χ(t)` from a Bloch initial state, on the reachable `|g,0>` plus one-excitation space.
pub fn mixed_evolution(t: f64, b: &BlochVector, ms: &ModeSet) -> TruncatedState {
    mixed_evolution_with(t, b, &poles(ms))
}

/// As [`mixed_evolution`], reusing a precomputed spectrum.
pub fn mixed_evolution_with(t: f64, b: &BlochVector, ps: &PoleSet) -> TruncatedState {
    let m = ps.len() - 1;
    let nf = m + 1;
    let rho = bloch_to_density(b);
    let r = rho.matrix();
    let w = one_excitation_amplitudes(t, ps);
    // one-excitation index 0 -> |e,0> (row 0); k -> |g,1_k> (row nf + k)
    let mut psi_e = vec![Complex64::new(0.0, 0.0); 2 * nf];
    psi_e[0] = w[0];
    for k in 1..nf {
        psi_e[nf + k] = w[k];
    }
    let g0 = nf;
    let mut chi = CMatrix::zeros(2 * nf, 2 * nf);
    for i in 0..2 * nf {
        for j in 0..2 * nf {
            chi[(i, j)] = r[(0, 0)] * psi_e[i] * psi_e[j].conj();
        }
    }
    for i in 0..2 * nf {
        chi[(i, g0)] += r[(0, 1)] * psi_e[i];
        chi[(g0, i)] += r[(1, 0)] * psi_e[i].conj();
    }
    chi[(g0, g0)] += r[(1, 1)];
    TruncatedState::from_parts(m, chi)
}

/// Ladder of `2Q+1` longitudinal modes at detunings `δ + kΔ`, `k = −Q..Q`,
/// with couplings `g√((ω0+δ)/(ω0+δ+kΔ))`.
pub fn cavity_ladder(q: usize, g: f64, delta: f64, big_delta: f64, omega0: f64) -> Result<ModeSet> {
    if q > 0 && big_delta == 0.0 {
        return Err(Error::InvalidParameter("free spectral range must be nonzero for Q > 0".into()));
    }
    let centre = omega0 + delta;
    let mut deltas = Vec::with_capacity(2 * q + 1);
    let mut couplings = Vec::with_capacity(2 * q + 1);
    for k in -(q as i64)..=(q as i64) {
        let wk = centre + k as f64 * big_delta;
        if !(wk > 0.0) {
            return Err(Error::InvalidParameter(format!("mode k = {k} has nonpositive frequency {wk}")));
        }
        deltas.push(delta + k as f64 * big_delta);
        couplings.push(g * (centre / wk).sqrt());
    }
    ModeSet::new(omega0, deltas, couplings)
}

/// Weak-coupling poles of the ladder: the near-resonant pair plus `2Q` side poles.
///
/// Side poles are shifted by `−iδ` so that they sit at the mode detunings
/// `δ ± kΔ` plus the level repulsion `±g²/(kΔ)`.
pub fn perturbative_poles(q: usize, g: f64, delta: f64, big_delta: f64, omega0: f64) -> Result<Vec<Complex64>> {
    if q > 0 && big_delta == 0.0 {
        return Err(Error::InvalidParameter("free spectral range must be nonzero for Q > 0".into()));
    }
    if !(omega0 > 0.0) {
        return Err(Error::InvalidParameter("omega0 must be positive".into()));
    }
    let root = delta.hypot(2.0 * g);
    let mut out = vec![
        Complex64::new(0.0, -0.5 * (delta + root)),
        Complex64::new(0.0, -0.5 * (delta - root)),
    ];
    for k in 1..=q {
        let kd = k as f64 * big_delta;
        let shift = kd + g * g / kd;
        out.push(Complex64::new(0.0, -delta - shift));
        out.push(Complex64::new(0.0, -delta + shift));
    }
    Ok(out)
}

/// `|u(t)|` of the ladder, from the generic spectral engine.
pub fn u_shifted(t: f64, q: usize, g: f64, delta: f64, big_delta: f64, omega0: f64) -> Result<f64> {
    let ms = cavity_ladder(q, g, delta, big_delta, omega0)?;
    Ok(u_residue(t, &poles(&ms)).norm())
}

/// Left side of the ladder's pole equation in the shifted variable `w = z + iδ`.
pub fn shifted_pole_polynomial(w: Complex64, q: usize, g: f64, delta: f64, big_delta: f64, omega0: f64) -> Complex64 {
    let i = Complex64::i();
    let c = omega0 + delta;
    let pair = |n: usize| w * w + (n as f64 * big_delta).powi(2);
    let all: Complex64 = (1..=q).map(pair).product();
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=q {
        let nd2 = (n as f64 * big_delta).powi(2);
        let weight = 1.0 / (1.0 - nd2 / (c * c));
        let rest: Complex64 = (1..=q).filter(|&j| j != n).map(pair).product();
        sum += weight * (w + i * nd2 / c) * rest;
    }
    (w * w - i * delta * w + g * g) * all + 2.0 * w * g * g * sum
}

/// `|u(t)|` from the shifted-root sum `Σ_j w_j Π_n(w_j²+n²Δ²) / Π_{l≠j}(w_j−w_l) e^{w_j t}`.
pub fn u_shifted_closed_form(t: f64, ws: &[Complex64], big_delta: f64) -> f64 {
    let q = (ws.len() - 2) / 2;
    let mut u = Complex64::new(0.0, 0.0);
    for (j, &w) in ws.iter().enumerate() {
        let mut c = w / ws.iter().enumerate().find(|&(l, _)| l != j).map(|(_, &x)| w - x).unwrap();
        let mut others = ws.iter().enumerate().filter(|&(l, _)| l != j).skip(1);
        for n in 1..=q {
            let (_, a) = others.next().unwrap();
            let (_, b) = others.next().unwrap();
            c *= (w * w + (n as f64 * big_delta).powi(2)) / ((w - a) * (w - b));
        }
        u += c * (w * t).exp();
    }
    u.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symmetric(g: f64, d: f64) -> ModeSet {
        ModeSet::new(1.0e7, vec![d, -d], vec![g, g]).unwrap()
    }

    #[test]
    fn single_mode_matrix_and_poles() {
        let ms = ModeSet::new(1.0, vec![0.7], vec![1.2]).unwrap();
        let h = build_interaction_matrix(&ms);
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[0.0, 1.2, 1.2, 0.7]));
        let ps = poles(&ms);
        let r = (0.7f64 * 0.7 + 4.0 * 1.44).sqrt();
        assert!((ps.secular_roots()[0] - 0.5 * (0.7 - r)).abs() < 1e-14);
        assert!((ps.secular_roots()[1] - 0.5 * (0.7 + r)).abs() < 1e-14);
    }

    #[test]
    fn symmetric_two_mode_spectrum() {
        let ps = poles(&symmetric(1.0, 1.5));
        let w = (2.0f64 + 2.25).sqrt();
        let want = [-w, 0.0, w];
        for (x, y) in ps.secular_roots().iter().zip(want) {
            assert!((x - y).abs() < 1e-14);
        }
        let den = 2.25 + 2.0;
        let pf = product_formula_weights(&ps, &symmetric(1.0, 1.5)).unwrap();
        let want = [1.0 / den, 2.25 / den, 1.0 / den];
        for j in 0..3 {
            assert!((pf[j].re - want[j]).abs() < 1e-13 && pf[j].im.abs() < 1e-13);
            assert!((ps.weights()[j].re - want[j]).abs() < 1e-13);
        }
    }

    #[test]
    fn decoupled_modes() {
        let ms = ModeSet::new(1.0, vec![-1.0, 2.0], vec![0.0, 0.0]).unwrap();
        let ps = poles(&ms);
        assert_eq!(ps.secular_roots(), &[-1.0, 0.0, 2.0]);
        let c: Vec<f64> = ps.weights().iter().map(|c| c.re).collect();
        assert_eq!(c, vec![0.0, 1.0, 0.0]);
        assert_eq!(u_residue(3.0, &ps), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn resonant_pair_weights() {
        let ms = ModeSet::new(1.0, vec![0.0], vec![1.0]).unwrap();
        let pf = product_formula_weights(&poles(&ms), &ms).unwrap();
        for c in pf {
            assert!((c - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn product_formula_refuses_degenerate() {
        // two identical decoupled modes give a double root
        let ms = ModeSet::new(1.0, vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 0.5]).unwrap();
        assert!(matches!(
            product_formula_weights(&poles(&ms), &ms),
            Err(Error::NearDegenerateRoots { .. })
        ));
    }

    #[test]
    fn residuals_and_trace() {
        let ms = ModeSet::new(1.0, vec![0.3, -1.2, 2.5], vec![0.8, 0.4, 1.1]).unwrap();
        let ps = poles(&ms);
        for &x in ps.secular_roots() {
            assert!(secular_residual(x, &ms) < 1e-12);
        }
        let tr: f64 = ps.secular_roots().iter().sum();
        assert!((tr - 1.6).abs() < 1e-12);
    }

    #[test]
    fn ladder_construction() {
        let ms = cavity_ladder(0, 1.0, 0.1, 5.0, 1e7).unwrap();
        assert_eq!(ms.deltas(), &[0.1]);
        assert_eq!(ms.couplings(), &[1.0]);
        let ms = cavity_ladder(2, 1.0, 0.1, 5.0, 100.0).unwrap();
        assert_eq!(ms.len(), 5);
        let w: Vec<f64> = ms.deltas().iter().map(|d| 100.0 + d).collect();
        for j in 0..5 {
            for k in 0..5 {
                let lhs = ms.couplings()[j];
                let rhs = ms.couplings()[k] * (w[k] / w[j]).sqrt();
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
        assert!(cavity_ladder(2, 1.0, 0.0, 60.0, 100.0).is_err());
        assert!(cavity_ladder(1, 1.0, 0.0, 0.0, 100.0).is_err());
    }

    #[test]
    fn ladder_zero_is_single_mode() {
        let p = perturbative_poles(0, 1.0, 0.4, 0.0, 1e7).unwrap();
        let ps = poles(&cavity_ladder(0, 1.0, 0.4, 0.0, 1e7).unwrap());
        let mut a: Vec<f64> = p.iter().map(|z| -z.im).collect();
        a.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(ps.secular_roots()) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!(perturbative_poles(1, 1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn shifted_equation_and_closed_form() {
        for q in [1usize, 2] {
            let (g, d, dd, w0) = (1.0, 0.3, 5.0, 200.0);
            let ms = cavity_ladder(q, g, d, dd, w0).unwrap();
            let ps = poles(&ms);
            let ws: Vec<Complex64> = ps.roots().iter().map(|z| z + Complex64::new(0.0, d)).collect();
            for &w in &ws {
                let p = shifted_pole_polynomial(w, q, g, d, dd, w0);
                let scale: f64 = (w.norm() + dd * q as f64 + g).powi(2 * q as i32 + 2);
                assert!(p.norm() / scale < 1e-12, "q={q} residual {}", p.norm() / scale);
            }
            for t in [0.0, 0.37, 2.9, 7.5] {
                let a = u_shifted(t, q, g, d, dd, w0).unwrap();
                let b = u_shifted_closed_form(t, &ws, dd);
                assert!((a - b).abs() < 1e-10, "q={q} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn mixed_evolution_keeps_unreachable_empty() {
        let ms = ModeSet::new(1.0, vec![0.2, -0.5], vec![0.9, 0.6]).unwrap();
        let b = BlochVector::new(0.7, 1.0, 2.0).unwrap();
        let chi = mixed_evolution(3.3, &b, &ms);
        for k in 1..=2 {
            assert!(chi.population(0, k).abs() < 1e-15);
        }
        assert!(TruncatedState::new(2, chi.matrix().clone()).is_ok());
    }
}
