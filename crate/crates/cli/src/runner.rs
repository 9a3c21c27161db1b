//! Evaluates one scenario point per call; sweeps fan the points out over a pool.

use entangledyn::cavity::{
    dominant_pole_numeric, dominant_pole_perturbative, long_time_u, near_resonance_poles, CavityParams, CavityPole,
    RESONANCE_GUARD,
};
use entangledyn::jcm::{jcm_mixed_evolution, jcm_u_abs, JcmParams};
use entangledyn::measures::{eoe_from_u, ln_from_u, log_negativity};
use entangledyn::multimode::{cavity_ladder, mixed_evolution_with, poles, secular_residual, u_residue, ModeSet, PoleSet};
use entangledyn::state::BlochVector;
use entangledyn::{Complex64, Error};
use rayon::prelude::*;

use crate::config::{CavityConfig, Measure, Model, ModelParams, Point, Scenario};
use crate::error::CliError;

/// Samples of one sweep point: `t` plus one column per requested measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub t: Vec<f64>,
    pub columns: Vec<Vec<f64>>,
}

/// One long-format table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn mode_set(params: &ModelParams) -> Result<ModeSet, CliError> {
    Ok(match params {
        ModelParams::Multimode(c) => {
            let deltas = c.deltas.iter().map(|d| c.detuning_scale * d).collect();
            ModeSet::new(c.omega0, deltas, c.couplings.clone())?
        }
        ModelParams::Ladder(c) => cavity_ladder(c.q, c.g, c.delta, c.big_delta, c.omega0)?,
        ModelParams::Jcm(c) => JcmParams::new(c.g, c.delta, c.omega)?.to_mode_set(),
        ModelParams::Cavity(_) => unreachable!("cavity scenarios have no finite mode set"),
    })
}

fn cavity_params(c: &CavityConfig) -> Result<CavityParams, CliError> {
    let cp = CavityParams::from_resonance_ratio(c.lambda, c.eps_omega0, c.resonance_ratio, 1.0)?;
    if let Some(w) = cp.cutoff_warning() {
        eprintln!("warning: {w}");
    }
    Ok(cp)
}

fn near_resonance(cp: &CavityParams) -> bool {
    let x = cp.resonance_ratio();
    (x - x.round()).abs() < RESONANCE_GUARD
}

/// Near a resonance both roots of the straddling pair when the cut plane holds
/// two, otherwise the single dominant root.
fn resonant_poles(cp: &CavityParams) -> Result<Vec<CavityPole>, CliError> {
    if near_resonance(cp) {
        match near_resonance_poles(cp) {
            Ok(p) => return Ok(p),
            Err(Error::SecondRootNotFound(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(vec![dominant_pole_numeric(cp, None)?])
}

/// The root with the largest real part; it alone survives at long times.
fn long_time_pole(cp: &CavityParams) -> Result<CavityPole, CliError> {
    let ps = resonant_poles(cp)?;
    Ok(ps.into_iter().max_by(|a, b| a.z.re.total_cmp(&b.z.re)).expect("at least one pole"))
}

fn measure_value(m: Measure, u_abs: f64, theta: f64, ln_mixed: impl FnOnce() -> f64) -> Result<f64, CliError> {
    Ok(match m {
        Measure::AbsU => u_abs,
        Measure::Eoe => eoe_from_u(u_abs, theta)?,
        Measure::Ln => ln_mixed(),
    })
}

/// Time series for one point of the scenario.
pub fn evaluate(s: &Scenario, point: &Point) -> Result<Series, CliError> {
    let grid = s.time_grid.points();
    let st = point.initial;
    let b = BlochVector::new(st.r, st.theta, st.phi)?;
    let pure = b.is_pure();
    let mut columns = vec![Vec::with_capacity(grid.len()); s.measures.len()];
    let mut push = |u_abs: f64, ln: &dyn Fn() -> f64| -> Result<(), CliError> {
        for (col, &m) in columns.iter_mut().zip(&s.measures) {
            col.push(measure_value(m, u_abs, b.theta(), ln)?);
        }
        Ok(())
    };
    let t_out = match (&s.model, &point.params) {
        (Model::Jcm, ModelParams::Jcm(c)) => {
            let p = JcmParams::new(c.g, c.delta, c.omega)?;
            for &t in &grid {
                let u = jcm_u_abs(t, &p);
                if pure {
                    push(u, &|| ln_from_u(u, b.theta()).expect("|u| <= 1"))?;
                } else {
                    push(u, &|| log_negativity(&jcm_mixed_evolution(t, &b, &p)))?;
                }
            }
            grid
        }
        (Model::Multimode | Model::Ladder, params) => {
            let ps: PoleSet = poles(&mode_set(params)?);
            for &t in &grid {
                let u = u_residue(t, &ps).norm().min(1.0);
                if pure {
                    push(u, &|| ln_from_u(u, b.theta()).expect("|u| <= 1"))?;
                } else {
                    push(u, &|| log_negativity(&mixed_evolution_with(t, &b, &ps)))?;
                }
            }
            grid
        }
        (Model::CavityLongtime, ModelParams::Cavity(c)) => {
            if !pure {
                return Err(CliError::Validation(format!(
                    "cavity-longtime needs a pure initial state (r = 1), got r = {}",
                    st.r
                )));
            }
            let cp = cavity_params(c)?;
            let pole = long_time_pole(&cp)?;
            // the grid is in units of 1/γ
            let gamma = pole.gamma();
            if !(gamma > 0.0) {
                return Err(CliError::Numerical(format!("dominant pole has no decay (gamma = {gamma})")));
            }
            for &tau in &grid {
                let u = long_time_u(tau / gamma, &pole).norm().min(1.0);
                push(u, &|| ln_from_u(u, b.theta()).expect("|u| capped"))?;
            }
            grid
        }
        (Model::CavityPoles, _) => {
            return Err(CliError::Validation("model cavity-poles only supports the poles command".into()))
        }
        _ => unreachable!("point params always match the model"),
    };
    Ok(Series { t: t_out, columns })
}

/// Evaluates every sweep point on `workers` threads and merges rows by `(t, sweep value)`.
pub fn time_series_table(s: &Scenario, workers: usize) -> Result<Table, CliError> {
    s.validate()?;
    let values = s.sweep_values();
    let points: Vec<Point> = values.iter().map(|&v| s.point(v)).collect::<Result<_, _>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Numerical(format!("worker pool: {e}")))?;
    // collect keeps input order, so the first error reported is deterministic too
    let results: Vec<Result<Series, CliError>> = pool.install(|| points.par_iter().map(|p| evaluate(s, p)).collect());
    let mut header = vec!["t".to_string()];
    header.extend(s.measures.iter().map(|m| m.column().to_string()));
    let sweeping = s.sweep.is_some();
    if sweeping {
        header.push("sweep_value".into());
    }
    let mut rows = Vec::new();
    for (v, r) in values.iter().zip(results) {
        let series = r?;
        for (i, &t) in series.t.iter().enumerate() {
            let mut row = vec![t];
            row.extend(series.columns.iter().map(|c| c[i]));
            if let Some(v) = v {
                row.push(*v);
            }
            rows.push(row);
        }
    }
    if sweeping {
        // stable: equal (t, value) pairs keep their sweep-list order
        let last = header.len() - 1;
        rows.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[last].total_cmp(&b[last])));
    }
    Ok(Table { header, rows })
}

/// One row of the poles report.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleRow {
    pub z: Complex64,
    pub weight: Complex64,
    pub method: &'static str,
    pub secular_residual: Option<f64>,
}

/// All poles of a finite mode set, or the dominant cavity pole(s).
pub fn pole_rows(s: &Scenario) -> Result<Vec<PoleRow>, CliError> {
    s.validate()?;
    if s.sweep.is_some() {
        return Err(CliError::Validation("the poles command takes a scenario without a sweep".into()));
    }
    let point = s.point(None)?;
    match s.model {
        Model::Multimode | Model::Ladder => {
            let ms = mode_set(&point.params)?;
            let ps = poles(&ms);
            Ok(ps
                .roots()
                .iter()
                .zip(ps.weights())
                .zip(ps.secular_roots())
                .map(|((&z, &w), &x)| PoleRow {
                    z,
                    weight: w,
                    method: "spectral",
                    secular_residual: Some(secular_residual(x, &ms)),
                })
                .collect())
        }
        Model::CavityPoles => {
            let ModelParams::Cavity(c) = &point.params else { unreachable!() };
            let cp = cavity_params(c)?;
            let row = |p: CavityPole| PoleRow { z: p.z, weight: p.residue, method: p.method.as_str(), secular_residual: None };
            if near_resonance(&cp) {
                return Ok(resonant_poles(&cp)?.into_iter().map(row).collect());
            }
            Ok(vec![row(dominant_pole_numeric(&cp, None)?), row(dominant_pole_perturbative(&cp)?)])
        }
        m => Err(CliError::Validation(format!("the poles command is not available for model {m:?}"))),
    }
}
