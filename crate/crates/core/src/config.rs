//! JSON scenario configuration.
//!
//! ```json
//! {
//!   "mu0": 0, "rE": 1, "rP": 1,          // or sigma0_sq / sigmaE_sq / sigmaP_sq
//!   "p": 0.5, "r": 1, "sP": 0,
//!   "uninformative_prior": false,
//!   "trust": { "rE_high": 3, "cost": 0.1 },
//!   "sweep": { "param": "p", "from": 0, "to": 1, "steps": 1001, "quantity": "loss" },
//!   "mc": { "n": 1000000, "seed": 0 }
//! }
//! ```
//!
//! Every key is optional. Values only have to be finite numbers here; domain
//! checks happen when the scenario objects are built.

use serde_json::{Map, Value};
use thiserror::Error;

use crate::beliefs::{BeliefParams, VariancePrior};
use crate::equilibrium::Scenario;
use crate::error::Result;
use crate::sweep::{SweepParam, SweepSpec, TrustSupplement};
use crate::trust::TrustInvestmentProblem;

pub const DEFAULT_MC_N: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config is not valid UTF-8: {0}")]
    Utf8(#[from] std::str::Utf8Error),

    #[error("malformed config at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("config mixes parameterizations: `{ratio}` and `{variance}` cannot both be given")]
    Ambiguous {
        ratio: &'static str,
        variance: &'static str,
    },

    #[error("config key `{key}`: {constraint}")]
    Key { key: String, constraint: String },
}

fn key_err(key: impl Into<String>, constraint: impl Into<String>) -> ConfigError {
    ConfigError::Key {
        key: key.into(),
        constraint: constraint.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrustWeights {
    Ratios { r_e: f64, r_p: f64 },
    Variances(VariancePrior),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrustBlock {
    pub r_e_high: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepBlock {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub quantity: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McBlock {
    pub n: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub mu0: f64,
    pub weights: TrustWeights,
    pub uninformative_prior: bool,
    pub p: f64,
    pub r: f64,
    pub s_p: f64,
    pub trust: Option<TrustBlock>,
    pub sweep: Option<SweepBlock>,
    pub mc: McBlock,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            mu0: 0.0,
            weights: TrustWeights::Ratios { r_e: 1.0, r_p: 1.0 },
            uninformative_prior: false,
            p: 0.5,
            r: 1.0,
            s_p: 0.0,
            trust: None,
            sweep: None,
            mc: McBlock {
                n: DEFAULT_MC_N,
                seed: DEFAULT_SEED,
            },
        }
    }
}

/// Reads an object, tracking which keys were consumed so leftovers can be
/// reported by name.
struct Fields<'a> {
    path: &'a str,
    map: Map<String, Value>,
}

impl<'a> Fields<'a> {
    fn new(path: &'a str, value: Value) -> Result<Self, ConfigError> {
        match value {
            Value::Object(map) => Ok(Self { path, map }),
            _ => Err(key_err(self_path(path), "must be an object")),
        }
    }

    fn full(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn take(&mut self, key: &str) -> Option<Value> {
        self.map.remove(key)
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(Value::Number(n)) => match n.as_f64() {
                Some(v) if v.is_finite() => Ok(Some(v)),
                _ => Err(key_err(self.full(key), "must be a finite number")),
            },
            Some(_) => Err(key_err(self.full(key), "must be a number")),
        }
    }

    fn required_number(&mut self, key: &str) -> Result<f64, ConfigError> {
        self.number(key)?
            .ok_or_else(|| key_err(self.full(key), "is required"))
    }

    fn unsigned(&mut self, key: &str) -> Result<Option<u64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(Value::Number(n)) => n
                .as_u64()
                .map(Some)
                .ok_or_else(|| key_err(self.full(key), "must be a nonnegative integer")),
            Some(_) => Err(key_err(self.full(key), "must be a nonnegative integer")),
        }
    }

    fn string(&mut self, key: &str) -> Result<String, ConfigError> {
        match self.take(key) {
            Some(Value::String(s)) => Ok(s),
            Some(_) => Err(key_err(self.full(key), "must be a string")),
            None => Err(key_err(self.full(key), "is required")),
        }
    }

    fn boolean(&mut self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(Value::Bool(b)) => Ok(Some(b)),
            Some(_) => Err(key_err(self.full(key), "must be true or false")),
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        match self.map.keys().next() {
            Some(key) => Err(key_err(self.full(key), "unknown key")),
            None => Ok(()),
        }
    }
}

fn self_path(path: &str) -> String {
    if path.is_empty() {
        "<root>".into()
    } else {
        path.into()
    }
}

const RATIO_KEYS: [&str; 2] = ["rE", "rP"];
const VARIANCE_KEYS: [&str; 3] = ["sigma0_sq", "sigmaE_sq", "sigmaP_sq"];

pub fn parse_config(bytes: &[u8]) -> Result<ScenarioConfig, ConfigError> {
    let text = std::str::from_utf8(bytes)?;
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut root = Fields::new("", value)?;
    let defaults = ScenarioConfig::default();

    if let (Some(ratio), Some(variance)) = (
        RATIO_KEYS.into_iter().find(|k| root.has(k)),
        VARIANCE_KEYS.into_iter().find(|k| root.has(k)),
    ) {
        return Err(ConfigError::Ambiguous { ratio, variance });
    }

    let weights = if VARIANCE_KEYS.iter().any(|k| root.has(k)) {
        TrustWeights::Variances(VariancePrior {
            sigma0_sq: root.required_number("sigma0_sq")?,
            sigma_e_sq: root.required_number("sigmaE_sq")?,
            sigma_p_sq: root.required_number("sigmaP_sq")?,
        })
    } else {
        TrustWeights::Ratios {
            r_e: root.number("rE")?.unwrap_or(1.0),
            r_p: root.number("rP")?.unwrap_or(1.0),
        }
    };

    let mut config = ScenarioConfig {
        mu0: root.number("mu0")?.unwrap_or(defaults.mu0),
        weights,
        uninformative_prior: root.boolean("uninformative_prior")?.unwrap_or(false),
        p: root.number("p")?.unwrap_or(defaults.p),
        r: root.number("r")?.unwrap_or(defaults.r),
        s_p: root.number("sP")?.unwrap_or(defaults.s_p),
        ..defaults
    };

    if let Some(v) = root.take("trust") {
        let mut t = Fields::new("trust", v)?;
        config.trust = Some(TrustBlock {
            r_e_high: t.required_number("rE_high")?,
            cost: t.number("cost")?.unwrap_or(0.0),
        });
        t.finish()?;
    }
    if let Some(v) = root.take("sweep") {
        let mut s = Fields::new("sweep", v)?;
        let param = s.string("param")?;
        let from = s.required_number("from")?;
        let to = s.required_number("to")?;
        let steps = s
            .unsigned("steps")?
            .ok_or_else(|| key_err("sweep.steps", "is required"))?;
        let quantity = s.string("quantity")?;
        s.finish()?;
        config.sweep = Some(SweepBlock {
            param,
            from,
            to,
            steps: usize::try_from(steps).map_err(|_| key_err("sweep.steps", "too large"))?,
            quantity,
        });
    }
    if let Some(v) = root.take("mc") {
        let mut m = Fields::new("mc", v)?;
        config.mc = McBlock {
            n: m.unsigned("n")?.unwrap_or(DEFAULT_MC_N),
            seed: m.unsigned("seed")?.unwrap_or(DEFAULT_SEED),
        };
        m.finish()?;
    }
    root.finish()?;
    Ok(config)
}

impl ScenarioConfig {
    pub fn beliefs(&self) -> Result<BeliefParams> {
        let (r_e, r_p) = match self.weights {
            TrustWeights::Ratios { r_e, r_p } => (r_e, r_p),
            TrustWeights::Variances(v) => {
                let b = BeliefParams::from_variances(&v)?;
                (b.r_e(), b.r_p())
            }
        };
        if self.uninformative_prior {
            BeliefParams::uninformative(r_e, r_p)
        } else {
            BeliefParams::new(self.mu0, r_e, r_p)
        }
    }

    pub fn scenario(&self) -> Result<Scenario> {
        Scenario::new(self.beliefs()?, self.p, self.r, self.s_p)
    }

    /// `None` when the config has no trust block.
    pub fn trust_problem(&self) -> Result<Option<TrustInvestmentProblem>> {
        self.trust
            .map(|t| TrustInvestmentProblem::new(self.scenario()?, t.r_e_high, t.cost))
            .transpose()
    }

    pub fn trust_supplement(&self) -> Option<TrustSupplement> {
        self.trust.map(|t| TrustSupplement {
            r_e_high: t.r_e_high,
            cost: t.cost,
        })
    }

    /// `None` when the config has no sweep block.
    pub fn sweep_spec(&self) -> Result<Option<SweepSpec>> {
        let Some(block) = &self.sweep else {
            return Ok(None);
        };
        Ok(Some(SweepSpec {
            base: self.scenario()?,
            param: block.param.parse::<SweepParam>()?,
            from: block.from,
            to: block.to,
            steps: block.steps,
            quantity: block.quantity.clone(),
            trust: self.trust_supplement(),
        }))
    }

    /// Replaces the trust weights with explicit ratios, keeping whichever of
    /// the two is not overridden.
    pub fn override_ratios(&mut self, r_e: Option<f64>, r_p: Option<f64>) -> Result<()> {
        if r_e.is_none() && r_p.is_none() {
            return Ok(());
        }
        let current = match self.weights {
            TrustWeights::Ratios { r_e, r_p } => (r_e, r_p),
            TrustWeights::Variances(v) => {
                let b = BeliefParams::from_variances(&v)?;
                (b.r_e(), b.r_p())
            }
        };
        self.weights = TrustWeights::Ratios {
            r_e: r_e.unwrap_or(current.0),
            r_p: r_p.unwrap_or(current.1),
        };
        Ok(())
    }
}
