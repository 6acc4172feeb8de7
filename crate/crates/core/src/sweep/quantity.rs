use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::equilibrium::{
    counteraction_intensity, counteraction_intensity_tform, equilibrium_loss,
    equilibrium_loss_tform, Scenario,
};
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};
use crate::trust::{trust_threshold, TrustInvestmentProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum SweepParam {
    #[serde(rename = "p")]
    Adoption,
    #[serde(rename = "t")]
    TrustRatio,
    #[serde(rename = "rE")]
    AdvisorTrust,
    #[serde(rename = "rP")]
    AiTrust,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Adoption => "p",
            SweepParam::TrustRatio => "t",
            SweepParam::AdvisorTrust => "rE",
            SweepParam::AiTrust => "rP",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(SweepParam::Adoption),
            "t" => Ok(SweepParam::TrustRatio),
            "rE" => Ok(SweepParam::AdvisorTrust),
            "rP" => Ok(SweepParam::AiTrust),
            other => Err(Error::UnknownStrategy {
                kind: "sweep parameter",
                name: other.to_string(),
                available: "p, rE, rP, t".into(),
            }),
        }
    }
}

/// Shape the rows of a sweep must have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Increasing,
    Decreasing,
    /// Rises to a single peak then falls. Either side may be empty.
    SinglePeaked,
    /// Either direction, but only one.
    Monotone,
    Unconstrained,
}

impl Shape {
    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Increasing => "increasing",
            Shape::Decreasing => "decreasing",
            Shape::SinglePeaked => "single-peaked",
            Shape::Monotone => "monotone",
            Shape::Unconstrained => "unconstrained",
        }
    }
}

/// One grid point: the scenario with the swept parameter substituted, plus
/// the raw parameter value (needed for `t`, which has no scenario field).
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint<'a> {
    pub scenario: Scenario,
    pub param: SweepParam,
    pub value: f64,
    pub trust: Option<&'a TrustSupplement>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrustSupplement {
    pub r_e_high: f64,
    pub cost: f64,
}

/// A scalar output that can be traced along a one-parameter sweep.
pub trait SweepQuantity: Named + Send + Sync {
    /// Checks that this quantity is defined for sweeps over `param`.
    fn check(&self, param: SweepParam, trust: Option<&TrustSupplement>) -> Result<()>;

    fn evaluate(&self, point: &SweepPoint<'_>) -> Result<f64>;

    /// Shape the comparative statics predict for this sweep.
    fn expected_shape(&self, param: SweepParam) -> Shape;
}

pub struct Delta;
pub struct Loss;
pub struct Threshold;

impl Named for Delta {
    fn name(&self) -> &'static str {
        "delta"
    }
}

impl SweepQuantity for Delta {
    fn check(&self, _: SweepParam, _: Option<&TrustSupplement>) -> Result<()> {
        Ok(())
    }

    fn evaluate(&self, pt: &SweepPoint<'_>) -> Result<f64> {
        match pt.param {
            SweepParam::TrustRatio => counteraction_intensity_tform(
                pt.scenario.p(),
                pt.scenario.beliefs().r_e(),
                pt.value,
            ),
            _ => counteraction_intensity(&pt.scenario),
        }
    }

    fn expected_shape(&self, param: SweepParam) -> Shape {
        match param {
            SweepParam::Adoption => Shape::Increasing,
            SweepParam::TrustRatio | SweepParam::AiTrust => Shape::SinglePeaked,
            SweepParam::AdvisorTrust => Shape::Unconstrained,
        }
    }
}

impl Named for Loss {
    fn name(&self) -> &'static str {
        "loss"
    }
}

impl SweepQuantity for Loss {
    fn check(&self, _: SweepParam, _: Option<&TrustSupplement>) -> Result<()> {
        Ok(())
    }

    fn evaluate(&self, pt: &SweepPoint<'_>) -> Result<f64> {
        match pt.param {
            SweepParam::TrustRatio => equilibrium_loss_tform(
                pt.scenario.p(),
                pt.value,
                pt.scenario.disagreement_sq(),
            ),
            _ => equilibrium_loss(&pt.scenario),
        }
    }

    fn expected_shape(&self, param: SweepParam) -> Shape {
        match param {
            SweepParam::Adoption => Shape::SinglePeaked,
            SweepParam::TrustRatio | SweepParam::AiTrust => Shape::Increasing,
            SweepParam::AdvisorTrust => Shape::Decreasing,
        }
    }
}

impl Named for Threshold {
    fn name(&self) -> &'static str {
        "threshold"
    }
}

impl SweepQuantity for Threshold {
    fn check(&self, param: SweepParam, trust: Option<&TrustSupplement>) -> Result<()> {
        if param != SweepParam::Adoption {
            return Err(Error::InvalidSpec(
                "threshold sweeps must vary the adoption rate p".into(),
            ));
        }
        if trust.is_none() {
            return Err(Error::InvalidSpec(
                "threshold sweeps need a trust block (rE_high, cost)".into(),
            ));
        }
        Ok(())
    }

    fn evaluate(&self, pt: &SweepPoint<'_>) -> Result<f64> {
        let trust = pt
            .trust
            .ok_or_else(|| Error::InvalidSpec("missing trust block".into()))?;
        let tp = TrustInvestmentProblem::new(pt.scenario, trust.r_e_high, trust.cost)?;
        trust_threshold(&tp)
    }

    fn expected_shape(&self, _: SweepParam) -> Shape {
        Shape::Monotone
    }
}

pub fn quantities() -> Registry<dyn SweepQuantity> {
    let mut reg: Registry<dyn SweepQuantity> = Registry::new("sweep quantity");
    reg.register(Arc::new(Delta))
        .register(Arc::new(Loss))
        .register(Arc::new(Threshold));
    reg
}
