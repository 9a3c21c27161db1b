//! Scenario files: one JSON document per scenario.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Jcm,
    Multimode,
    Ladder,
    CavityLongtime,
    CavityPoles,
}

impl Model {
    pub fn is_cavity(self) -> bool {
        matches!(self, Model::CavityLongtime | Model::CavityPoles)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
pub enum Measure {
    #[serde(rename = "EOE")]
    Eoe,
    #[serde(rename = "LN")]
    Ln,
    #[serde(rename = "abs_u")]
    AbsU,
}

impl Measure {
    pub fn column(self) -> &'static str {
        match self {
            Measure::Eoe => "EOE",
            Measure::Ln => "LN",
            Measure::AbsU => "abs_u",
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    #[serde(default = "one")]
    pub r: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        let n = self.samples;
        let h = (self.t_end - self.t_start) / (n - 1) as f64;
        (0..n).map(|i| if i + 1 == n { self.t_end } else { self.t_start + h * i as f64 }).collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub model: Model,
    #[serde(default = "excited")]
    pub initial_state: InitialState,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub time_grid: TimeGrid,
    pub measures: Vec<Measure>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
}

fn excited() -> InitialState {
    InitialState { r: 1.0, theta: 0.0, phi: 0.0 }
}

/// Finite-mode energies are in units of `g`, so `ω0/g = 10⁷` by default.
fn default_omega() -> f64 {
    1.0e7
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JcmConfig {
    #[serde(default = "one")]
    pub g: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "default_omega")]
    pub omega: f64,
}

/// Mode detunings are `detuning_scale · deltas[k]`, which lets a sweep move a
/// whole pattern (e.g. the symmetric pair `±δ`) with one number.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultimodeConfig {
    #[serde(default = "default_omega")]
    pub omega0: f64,
    pub deltas: Vec<f64>,
    pub couplings: Vec<f64>,
    #[serde(default = "one")]
    pub detuning_scale: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    pub q: usize,
    #[serde(default = "one")]
    pub g: f64,
    #[serde(default)]
    pub delta: f64,
    pub big_delta: f64,
    #[serde(default = "default_omega")]
    pub omega0: f64,
}

/// Cavity scenarios fix `ω0 = 1`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    pub lambda: f64,
    pub eps_omega0: f64,
    pub resonance_ratio: f64,
}

#[derive(Debug, Clone)]
pub enum ModelParams {
    Jcm(JcmConfig),
    Multimode(MultimodeConfig),
    Ladder(LadderConfig),
    Cavity(CavityConfig),
}

/// Everything needed to evaluate one sweep point.
#[derive(Debug, Clone)]
pub struct Point {
    pub initial: InitialState,
    pub params: ModelParams,
}

const STATE_KEYS: [&str; 3] = ["r", "theta", "phi"];

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Checks the invariants that do not depend on a sweep value.
    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.time_grid;
        if g.samples < 2 {
            return Err(CliError::Validation(format!("time_grid.samples = {} must be >= 2", g.samples)));
        }
        if !(g.t_start.is_finite() && g.t_start >= 0.0) {
            return Err(CliError::Validation(format!("time_grid.t_start = {} must be >= 0", g.t_start)));
        }
        if !(g.t_end.is_finite() && g.t_end > g.t_start) {
            return Err(CliError::Validation(format!(
                "time_grid.t_end = {} must exceed t_start = {}",
                g.t_end, g.t_start
            )));
        }
        if self.measures.is_empty() {
            return Err(CliError::Validation("measures must name at least one of EOE, LN, abs_u".into()));
        }
        for (i, m) in self.measures.iter().enumerate() {
            if self.measures[..i].contains(m) {
                return Err(CliError::Validation(format!("measure {} listed twice", m.column())));
            }
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(CliError::Validation("sweep.values must not be empty".into()));
            }
            if s.values.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Validation("sweep.values must be finite".into()));
            }
            let known = STATE_KEYS.contains(&s.parameter.as_str()) || self.param_names().contains(&s.parameter.as_str());
            if !known {
                return Err(CliError::Validation(format!(
                    "sweep.parameter '{}' is not a parameter of model {:?}",
                    s.parameter, self.model
                )));
            }
        }
        // resolve every point up front so bad values fail before any work starts
        for v in self.sweep_values() {
            self.point(v)?;
        }
        Ok(())
    }

    fn param_names(&self) -> &'static [&'static str] {
        match self.model {
            Model::Jcm => &["g", "delta", "omega"],
            Model::Multimode => &["omega0", "detuning_scale"],
            Model::Ladder => &["q", "g", "delta", "big_delta", "omega0"],
            Model::CavityLongtime | Model::CavityPoles => &["lambda", "eps_omega0", "resonance_ratio"],
        }
    }

    /// `[None]` without a sweep, otherwise the sweep values in ascending order.
    pub fn sweep_values(&self) -> Vec<Option<f64>> {
        match &self.sweep {
            None => vec![None],
            Some(s) => {
                let mut v = s.values.clone();
                v.sort_by(f64::total_cmp);
                v.into_iter().map(Some).collect()
            }
        }
    }

    /// Scenario with the sweep parameter set to `value`.
    pub fn point(&self, value: Option<f64>) -> Result<Point, CliError> {
        let mut initial = self.initial_state;
        let mut params = self.params.clone();
        if let (Some(s), Some(v)) = (&self.sweep, value) {
            match s.parameter.as_str() {
                "r" => initial.r = v,
                "theta" => initial.theta = v,
                "phi" => initial.phi = v,
                name => {
                    params.insert(name.to_string(), number(v));
                }
            }
        }
        if self.measures.contains(&Measure::Eoe) && initial.r != 1.0 {
            return Err(CliError::Validation(format!(
                "EOE needs a pure initial state (r = 1), got r = {}",
                initial.r
            )));
        }
        let params = match self.model {
            Model::Jcm => ModelParams::Jcm(decode(params)?),
            Model::Multimode => ModelParams::Multimode(decode(params)?),
            Model::Ladder => ModelParams::Ladder(decode(params)?),
            Model::CavityLongtime | Model::CavityPoles => ModelParams::Cavity(decode(params)?),
        };
        Ok(Point { initial, params })
    }
}

/// Integral values go in as integers so that count parameters such as `q` decode.
fn number(v: f64) -> Value {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        Value::from(v as i64)
    } else {
        Value::from(v)
    }
}

fn decode<T: DeserializeOwned>(params: Map<String, Value>) -> Result<T, CliError> {
    serde_json::from_value(Value::Object(params)).map_err(|e| CliError::Validation(format!("params: {e}")))
}
