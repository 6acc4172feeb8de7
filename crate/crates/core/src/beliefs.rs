//! Human belief structure and the two Bayesian decision rules.
//!
//! The human holds a Gaussian prior on the unknown state with mean `mu0` and
//! weighs each recommendation by its precision relative to the prior:
//! `r_e = σ0²/σE²` for the advisor and `r_p = σ0²/σP²` for the personal AI.
//! Decisions are posterior means, i.e. precision-weighted averages.

use std::ops::{Add, Div, Mul, Sub};

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};

/// Smallest admissible relative precision. Anything below is rejected.
pub const TRUST_FLOOR: f64 = 1e-12;

/// Arithmetic needed to evaluate the decision rules.
///
/// Implemented for `f64` and for double-double numbers, so the numerical
/// oracle can evaluate the same rules at higher precision.
pub trait Scalar:
    Copy
    + From<f64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Scalar for T where
    T: Copy
        + From<f64>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
{
}

/// Prior variance and the perceived noise variances of both recommenders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariancePrior {
    pub sigma0_sq: f64,
    pub sigma_e_sq: f64,
    pub sigma_p_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeliefParams {
    mu0: f64,
    r_e: f64,
    r_p: f64,
    uninformative_prior: bool,
}

fn check_trust(name: &'static str, value: f64) -> Result<f64> {
    ensure_finite(name, value)?;
    if value < TRUST_FLOOR {
        return Err(Error::invalid(
            name,
            format!("must be at least {TRUST_FLOOR:e}, got {value}"),
        ));
    }
    Ok(value)
}

impl BeliefParams {
    pub fn new(mu0: f64, r_e: f64, r_p: f64) -> Result<Self> {
        Ok(Self {
            mu0: ensure_finite("mu0", mu0)?,
            r_e: check_trust("rE", r_e)?,
            r_p: check_trust("rP", r_p)?,
            uninformative_prior: false,
        })
    }

    /// The diffuse-prior limit σ0² → ∞. The prior mean plays no role.
    pub fn uninformative(r_e: f64, r_p: f64) -> Result<Self> {
        Ok(Self {
            mu0: 0.0,
            r_e: check_trust("rE", r_e)?,
            r_p: check_trust("rP", r_p)?,
            uninformative_prior: true,
        })
    }

    pub fn from_variances(v: &VariancePrior) -> Result<Self> {
        for (name, value) in [
            ("sigma0_sq", v.sigma0_sq),
            ("sigmaE_sq", v.sigma_e_sq),
            ("sigmaP_sq", v.sigma_p_sq),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("variance must be positive and finite, got {value}"),
                ));
            }
        }
        Self::new(0.0, v.sigma0_sq / v.sigma_e_sq, v.sigma0_sq / v.sigma_p_sq)
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn r_e(&self) -> f64 {
        self.r_e
    }

    pub fn r_p(&self) -> f64 {
        self.r_p
    }

    pub fn is_uninformative(&self) -> bool {
        self.uninformative_prior
    }

    pub fn with_mu0(self, mu0: f64) -> Result<Self> {
        Ok(Self {
            mu0: ensure_finite("mu0", mu0)?,
            ..self
        })
    }

    pub fn with_trust(self, r_e: f64, r_p: f64) -> Result<Self> {
        Ok(Self {
            r_e: check_trust("rE", r_e)?,
            r_p: check_trust("rP", r_p)?,
            ..self
        })
    }

    /// Relative trust ratio `t = r_p / (1 + r_e)`.
    pub fn trust_ratio(&self) -> f64 {
        self.r_p / (1.0 + self.r_e)
    }

    /// Posterior mean given only the advisor's recommendation.
    ///
    /// Evaluated as the prior mean plus weighted deviations, which is exact
    /// whenever the sources agree.
    pub fn decide_without_ai<T: Scalar>(&self, s_e: T) -> T {
        let r_e = T::from(self.r_e);
        if self.uninformative_prior {
            return s_e;
        }
        let one = T::from(1.0);
        let mu0 = T::from(self.mu0);
        mu0 + r_e * (s_e - mu0) / (one + r_e)
    }

    /// Posterior mean given both recommendations.
    pub fn decide_with_ai<T: Scalar>(&self, s_e: T, s_p: T) -> T {
        let r_e = T::from(self.r_e);
        let r_p = T::from(self.r_p);
        if self.uninformative_prior {
            return (r_e * s_e + r_p * s_p) / (r_e + r_p);
        }
        let one = T::from(1.0);
        let mu0 = T::from(self.mu0);
        mu0 + (r_e * (s_e - mu0) + r_p * (s_p - mu0)) / (one + r_e + r_p)
    }
}

pub fn from_variances(v: &VariancePrior) -> Result<BeliefParams> {
    BeliefParams::from_variances(v)
}

pub fn decision_without_ai(b: &BeliefParams, s_e: f64) -> f64 {
    b.decide_without_ai(s_e)
}

pub fn decision_with_ai(b: &BeliefParams, s_e: f64, s_p: f64) -> f64 {
    b.decide_with_ai(s_e, s_p)
}
