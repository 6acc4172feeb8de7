use super::{SweepParam, SweepSpec, MIN_TRUST_RATIO};
use crate::equilibrium::Scenario;
use crate::error::{Error, Result};

/// A named sweep layout for one of the standard comparative-statics curves.
/// The base scenario comes from the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub quantity: &'static str,
}

impl Preset {
    pub fn spec(&self, base: Scenario) -> SweepSpec {
        SweepSpec {
            base,
            param: self.param,
            from: self.from,
            to: self.to,
            steps: self.steps,
            quantity: self.quantity.to_string(),
            trust: None,
        }
    }
}

const STEPS: usize = 1001;

const PRESETS: [Preset; 6] = [
    Preset {
        name: "delta-vs-p",
        param: SweepParam::Adoption,
        from: 0.0,
        to: 1.0,
        steps: STEPS,
        quantity: "delta",
    },
    Preset {
        name: "delta-vs-t",
        param: SweepParam::TrustRatio,
        from: MIN_TRUST_RATIO,
        to: 10.0,
        steps: STEPS,
        quantity: "delta",
    },
    Preset {
        name: "loss-vs-p",
        param: SweepParam::Adoption,
        from: 0.0,
        to: 1.0,
        steps: STEPS,
        quantity: "loss",
    },
    Preset {
        name: "loss-vs-t",
        param: SweepParam::TrustRatio,
        from: MIN_TRUST_RATIO,
        to: 10.0,
        steps: STEPS,
        quantity: "loss",
    },
    Preset {
        name: "loss-vs-rE",
        param: SweepParam::AdvisorTrust,
        from: 0.05,
        to: 10.0,
        steps: STEPS,
        quantity: "loss",
    },
    Preset {
        name: "loss-vs-rP",
        param: SweepParam::AiTrust,
        from: 0.05,
        to: 10.0,
        steps: STEPS,
        quantity: "loss",
    },
];

pub fn presets() -> &'static [Preset] {
    &PRESETS
}

pub fn preset(name: &str) -> Result<&'static Preset> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownStrategy {
            kind: "sweep preset",
            name: name.to_string(),
            available: PRESETS.iter().map(|p| p.name).collect::<Vec<_>>().join(", "),
        })
}
