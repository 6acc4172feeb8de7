//! Closed-form equilibrium of the advisor's recommendation problem.
//!
//! The advisor observes (or replicates) the personal-AI recommendation `s_p`
//! and picks `s_e` to minimize the expected squared distance between the
//! human's decision and its target `r`, where the human consults the AI with
//! probability `p`. The objective is a strictly convex quadratic in `s_e`, so
//! everything below is exact algebra.

use serde::Serialize;

use crate::beliefs::{BeliefParams, TRUST_FLOOR};
use crate::error::{ensure_finite, Error, Result};

/// A full game instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    beliefs: BeliefParams,
    p: f64,
    r: f64,
    s_p: f64,
}

fn check_probability(name: &'static str, p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::invalid(name, format!("must lie in [0, 1], got {p}")))
    }
}

impl Scenario {
    pub fn new(beliefs: BeliefParams, p: f64, r: f64, s_p: f64) -> Result<Self> {
        Ok(Self {
            beliefs,
            p: check_probability("p", p)?,
            r: ensure_finite("r", r)?,
            s_p: ensure_finite("sP", s_p)?,
        })
    }

    pub fn beliefs(&self) -> &BeliefParams {
        &self.beliefs
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s_p(&self) -> f64 {
        self.s_p
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        Ok(Self {
            p: check_probability("p", p)?,
            ..self
        })
    }

    pub fn with_s_p(self, s_p: f64) -> Result<Self> {
        Ok(Self {
            s_p: ensure_finite("sP", s_p)?,
            ..self
        })
    }

    pub fn with_beliefs(self, beliefs: BeliefParams) -> Self {
        Self { beliefs, ..self }
    }

    /// Squared disagreement `(r - s_p)²`, the only way `s_p` enters the loss.
    pub fn disagreement_sq(&self) -> f64 {
        let dev = self.r - self.s_p;
        dev * dev
    }

    fn informative_beliefs(&self) -> Result<&BeliefParams> {
        if self.beliefs.is_uninformative() {
            Err(Error::Domain(
                "equilibrium objects are undefined under the uninformative-prior limit".into(),
            ))
        } else {
            Ok(&self.beliefs)
        }
    }
}

/// `t = r_p / (1 + r_e)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct TrustRatio(f64);

impl TrustRatio {
    pub fn new(t: f64) -> Result<Self> {
        ensure_finite("t", t)?;
        if t > 0.0 {
            Ok(Self(t))
        } else {
            Err(Error::invalid("t", format!("must be positive, got {t}")))
        }
    }

    pub fn of(beliefs: &BeliefParams) -> Self {
        Self(beliefs.trust_ratio())
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumOutcome {
    pub s_e_star: f64,
    pub delta: f64,
    pub loss: f64,
    pub d0: f64,
    pub d1: f64,
}

/// Benchmark when the advisor ignores the AI and assumes a diffuse zero-mean
/// prior: recommend the target itself.
pub fn naive_recommendation(r: f64) -> f64 {
    r
}

/// `(1-p)(1+r_e+r_p)² + p(1+r_e)²`, shared by Δ and L*.
fn mixing_denominator(p: f64, r_e: f64, r_p: f64) -> f64 {
    let with_ai = 1.0 + r_e + r_p;
    let without_ai = 1.0 + r_e;
    (1.0 - p) * with_ai * with_ai + p * without_ai * without_ai
}

/// Counteraction intensity Δ: the coefficient on `(r - s_p)` in the optimal
/// recommendation.
pub fn counteraction_intensity(s: &Scenario) -> Result<f64> {
    let b = s.informative_beliefs()?;
    let (p, r_e, r_p) = (s.p, b.r_e(), b.r_p());
    let lead = 1.0 + r_e;
    Ok(p * r_p * lead * lead / (r_e * mixing_denominator(p, r_e, r_p)))
}

/// Δ written in terms of the trust ratio: `(1 + 1/r_e) · p t / ((1-p)(1+t)² + p)`.
pub fn counteraction_intensity_tform(p: f64, r_e: f64, t: f64) -> Result<f64> {
    let p = check_probability("p", p)?;
    ensure_finite("rE", r_e)?;
    if r_e < TRUST_FLOOR {
        return Err(Error::invalid("rE", format!("must be at least {TRUST_FLOOR:e}")));
    }
    let t = TrustRatio::new(t)?.get();
    Ok((1.0 + 1.0 / r_e) * p * t / ((1.0 - p) * (1.0 + t) * (1.0 + t) + p))
}

/// Minimized expected loss L*. Independent of `mu0`.
pub fn equilibrium_loss(s: &Scenario) -> Result<f64> {
    let b = s.informative_beliefs()?;
    let (p, r_e, r_p) = (s.p, b.r_e(), b.r_p());
    Ok(p * (1.0 - p) * r_p * r_p * s.disagreement_sq() / mixing_denominator(p, r_e, r_p))
}

/// L* in terms of the trust ratio and `dev_sq = (r - s_p)²`.
pub fn equilibrium_loss_tform(p: f64, t: f64, dev_sq: f64) -> Result<f64> {
    let p = check_probability("p", p)?;
    let t = TrustRatio::new(t)?.get();
    ensure_finite("dev_sq", dev_sq)?;
    if dev_sq < 0.0 {
        return Err(Error::invalid("dev_sq", "must be nonnegative"));
    }
    Ok(t * t * p * (1.0 - p) * dev_sq / ((1.0 - p) * (1.0 + t) * (1.0 + t) + p))
}

/// Optimal recommendation `r + (r - mu0)/r_e + Δ (r - s_p)` with its loss and
/// the decisions it induces in both consultation states.
pub fn optimal_recommendation(s: &Scenario) -> Result<EquilibriumOutcome> {
    let delta = counteraction_intensity(s)?;
    let loss = equilibrium_loss(s)?;
    let b = s.beliefs;
    let s_e_star = s.r + (s.r - b.mu0()) / b.r_e() + delta * (s.r - s.s_p);
    Ok(EquilibriumOutcome {
        s_e_star,
        delta,
        loss,
        d0: b.decide_without_ai(s_e_star),
        d1: b.decide_with_ai(s_e_star, s.s_p),
    })
}

/// Adoption rate at which L* peaks.
pub fn peak_adoption(r_e: f64, r_p: f64) -> Result<f64> {
    // Validates both trust weights against the floor.
    BeliefParams::new(0.0, r_e, r_p)?;
    Ok((1.0 + r_e + r_p) / (2.0 * (1.0 + r_e) + r_p))
}

/// Same maximizer as [`peak_adoption`], as a function of `t` alone.
pub fn peak_adoption_tform(t: f64) -> Result<f64> {
    let t = TrustRatio::new(t)?.get();
    Ok(1.0 - 1.0 / (t + 2.0))
}

/// Trust ratio at which Δ peaks for a fixed adoption rate. Diverges at `p = 1`.
pub fn peak_trust(p: f64) -> Result<f64> {
    let p = check_probability("p", p)?;
    if p == 1.0 {
        return Err(Error::Domain(
            "peak trust diverges at p = 1 (Δ is increasing in t)".into(),
        ));
    }
    Ok(1.0 / (1.0 - p).sqrt())
}
