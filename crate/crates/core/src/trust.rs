//! Binary trust investment: the advisor may pay a fixed cost to lift the
//! human's relative trust in it from `r_e` to `r_e_high`, with the
//! recommendation held at the naive baseline `s_e = r`.

use serde::Serialize;

use crate::beliefs::TRUST_FLOOR;
use crate::equilibrium::Scenario;
use crate::error::{ensure_finite, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrustInvestmentProblem {
    scenario: Scenario,
    r_e_high: f64,
    cost: f64,
}

impl TrustInvestmentProblem {
    /// The baseline trust is the scenario's own `r_e`.
    pub fn new(scenario: Scenario, r_e_high: f64, cost: f64) -> Result<Self> {
        if scenario.beliefs().is_uninformative() {
            return Err(Error::Domain(
                "trust investment needs an informative prior".into(),
            ));
        }
        ensure_finite("rE_high", r_e_high)?;
        let base = scenario.beliefs().r_e();
        if r_e_high <= base {
            return Err(Error::invalid(
                "rE_high",
                format!("must exceed the baseline rE = {base}, got {r_e_high}"),
            ));
        }
        ensure_finite("cost", cost)?;
        if cost < 0.0 {
            return Err(Error::invalid("cost", format!("must be nonnegative, got {cost}")));
        }
        Ok(Self {
            scenario,
            r_e_high,
            cost,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn r_e_base(&self) -> f64 {
        self.scenario.beliefs().r_e()
    }

    pub fn r_e_high(&self) -> f64 {
        self.r_e_high
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        Ok(Self {
            scenario: self.scenario.with_p(p)?,
            ..self
        })
    }

    pub fn with_cost(self, cost: f64) -> Result<Self> {
        Self::new(self.scenario, self.r_e_high, cost)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrustDecision {
    pub invest: bool,
    pub threshold: f64,
    pub loss_base: f64,
    pub loss_high: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeCondition {
    /// Whether the threshold cost falls as adoption rises.
    pub decreasing: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// Expected loss when the advisor recommends `s_e = r` and the human trusts
/// the advisor at level `tau`.
pub fn fixed_rec_expected_loss(s: &Scenario, tau: f64) -> Result<f64> {
    ensure_finite("tau", tau)?;
    if tau <= 0.0 {
        return Err(Error::invalid("tau", format!("must be positive, got {tau}")));
    }
    if s.beliefs().is_uninformative() {
        return Err(Error::Domain(
            "fixed-recommendation loss needs an informative prior".into(),
        ));
    }
    let p = s.p();
    let r_p = s.beliefs().r_p();
    let bias = s.r() - s.beliefs().mu0();
    let with_ai = bias + r_p * (s.r() - s.s_p());
    let d0 = 1.0 + tau;
    let d1 = 1.0 + tau + r_p;
    Ok((1.0 - p) * bias * bias / (d0 * d0) + p * with_ai * with_ai / (d1 * d1))
}

fn inv_sq_gap(low: f64, high: f64) -> f64 {
    1.0 / (low * low) - 1.0 / (high * high)
}

/// Largest cost at which upgrading trust still pays off.
pub fn trust_threshold(tp: &TrustInvestmentProblem) -> Result<f64> {
    let s = &tp.scenario;
    let (r_e, r_hi, r_p) = (tp.r_e_base(), tp.r_e_high, s.beliefs().r_p());
    let p = s.p();
    let bias = s.r() - s.beliefs().mu0();
    let with_ai = bias + r_p * (s.r() - s.s_p());
    let gain_without = inv_sq_gap(1.0 + r_e, 1.0 + r_hi);
    let gain_with = inv_sq_gap(1.0 + r_e + r_p, 1.0 + r_hi + r_p);
    Ok((1.0 - p) * bias * bias * gain_without + p * with_ai * with_ai * gain_with)
}

/// Invest iff `cost <= threshold` (ties invest).
pub fn invest_decision(tp: &TrustInvestmentProblem) -> Result<TrustDecision> {
    let threshold = trust_threshold(tp)?;
    Ok(TrustDecision {
        invest: tp.cost <= threshold,
        threshold,
        loss_base: fixed_rec_expected_loss(&tp.scenario, tp.r_e_base())?,
        loss_high: fixed_rec_expected_loss(&tp.scenario, tp.r_e_high)?,
    })
}

/// `sqrt(A/B)` where `A` and `B` are the per-regime reductions in the squared
/// inverse weights brought by the trust upgrade. Always above one.
pub fn alpha_ratio(r_e: f64, r_e_high: f64, r_p: f64) -> Result<f64> {
    for (name, v) in [("rE", r_e), ("rE_high", r_e_high), ("rP", r_p)] {
        ensure_finite(name, v)?;
        if v < TRUST_FLOOR {
            return Err(Error::invalid(name, format!("must be at least {TRUST_FLOOR:e}")));
        }
    }
    if r_e_high <= r_e {
        return Err(Error::invalid("rE_high", "must exceed rE"));
    }
    let a = inv_sq_gap(1.0 + r_e, 1.0 + r_e_high);
    let b = inv_sq_gap(1.0 + r_e + r_p, 1.0 + r_e_high + r_p);
    if b <= 0.0 {
        return Err(Error::Domain(format!(
            "trust upgrade {r_e} -> {r_e_high} is below floating-point resolution"
        )));
    }
    Ok((a / b).sqrt())
}

/// Condition under which the threshold cost is decreasing in adoption:
/// `|r - (mu0 + r_p s_p)/(1 + r_p)| < alpha/(1 + r_p) |r - mu0|`.
pub fn threshold_slope_condition(tp: &TrustInvestmentProblem) -> Result<SlopeCondition> {
    let s = &tp.scenario;
    let (mu0, r_p) = (s.beliefs().mu0(), s.beliefs().r_p());
    let alpha = alpha_ratio(tp.r_e_base(), tp.r_e_high, r_p)?;
    let lhs = (s.r() - (mu0 + r_p * s.s_p()) / (1.0 + r_p)).abs();
    let rhs = alpha / (1.0 + r_p) * (s.r() - mu0).abs();
    Ok(SlopeCondition {
        decreasing: lhs < rhs,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beliefs::{decision_with_ai, decision_without_ai, BeliefParams};

    fn scenario(p: f64, r_e: f64, r_p: f64, mu0: f64, r: f64, s_p: f64) -> Scenario {
        Scenario::new(BeliefParams::new(mu0, r_e, r_p).unwrap(), p, r, s_p).unwrap()
    }

    fn worked(p: f64) -> TrustInvestmentProblem {
        TrustInvestmentProblem::new(scenario(p, 1.0, 1.0, 0.0, 1.0, 1.0), 3.0, 0.0).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn fixed_rec_loss_examples() {
        let s = scenario(0.4, 1.0, 2.0, 1.0, 1.0, 1.0);
        assert_eq!(fixed_rec_expected_loss(&s, 0.7).unwrap(), 0.0);

        let s = scenario(0.0, 1.0, 1.0, 0.0, 1.0, 0.0);
        assert_eq!(fixed_rec_expected_loss(&s, 1.0).unwrap(), 0.25);
        let b = s.beliefs();
        assert_eq!((1.0 - decision_without_ai(b, 1.0)).powi(2), 0.25);

        let s = scenario(1.0, 1.0, 1.0, 0.0, 1.0, 1.0);
        assert!(close(fixed_rec_expected_loss(&s, 1.0).unwrap(), 1.0 / 9.0, 1e-15));
        let direct = (1.0 - decision_with_ai(s.beliefs(), 1.0, 1.0)).powi(2);
        assert!(close(direct, 1.0 / 9.0, 1e-15));

        assert!(fixed_rec_expected_loss(&s, 0.0).is_err());
        assert!(fixed_rec_expected_loss(&s, -1.0).is_err());
    }

    #[test]
    fn threshold_worked_example() {
        assert!(close(trust_threshold(&worked(0.0)).unwrap(), 3.0 / 16.0, 1e-15));
        assert!(close(trust_threshold(&worked(1.0)).unwrap(), 16.0 / 225.0, 1e-15));
        for p in [0.0, 0.3, 1.0] {
            let tp = worked(p);
            let composed = fixed_rec_expected_loss(tp.scenario(), 1.0).unwrap()
                - fixed_rec_expected_loss(tp.scenario(), 3.0).unwrap();
            assert!(close(trust_threshold(&tp).unwrap(), composed, 1e-12));
        }
    }

    #[test]
    fn threshold_vanishes_without_deviations() {
        for p in [0.0, 0.5, 1.0] {
            let s = scenario(p, 0.5, 2.0, 2.0, 2.0, 2.0);
            let tp = TrustInvestmentProblem::new(s, 4.0, 0.0).unwrap();
            assert_eq!(trust_threshold(&tp).unwrap(), 0.0);
        }
    }

    #[test]
    fn degenerate_upgrade_rejected() {
        let s = scenario(0.5, 1.0, 1.0, 0.0, 1.0, 0.0);
        assert!(TrustInvestmentProblem::new(s, 1.0, 0.0).is_err());
        assert!(TrustInvestmentProblem::new(s, 0.5, 0.0).is_err());
        assert!(TrustInvestmentProblem::new(s, 2.0, -0.1).is_err());
        assert!(alpha_ratio(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn invest_decision_rules() {
        let tp = worked(0.0);
        assert!(invest_decision(&tp).unwrap().invest);

        let d = invest_decision(&tp.with_cost(0.2).unwrap()).unwrap();
        assert!(!d.invest);
        assert!(close(d.threshold, 0.1875, 1e-15));
        assert!(close(d.threshold, d.loss_base - d.loss_high, 1e-12));

        let exact = tp.with_cost(d.threshold).unwrap();
        assert!(invest_decision(&exact).unwrap().invest);
    }

    #[test]
    fn alpha_examples() {
        let a = alpha_ratio(1.0, 3.0, 1.0).unwrap();
        assert!(close(a, (675.0f64 / 256.0).sqrt(), 1e-14));
        assert!((a - 1.62380).abs() < 1e-5);
        let tiny = alpha_ratio(1.0, 3.0, 1e-6).unwrap();
        assert!(tiny > 1.0 && tiny < 1.0 + 1e-5);
    }

    #[test]
    fn slope_condition_examples() {
        let c = threshold_slope_condition(&worked(0.5)).unwrap();
        assert!(close(c.lhs, 0.5, 1e-15));
        assert!((c.rhs - 0.81190).abs() < 1e-5);
        assert!(c.decreasing);

        let s = scenario(0.5, 1.0, 1.0, 1.0, 1.0, -2.0);
        let c = threshold_slope_condition(&TrustInvestmentProblem::new(s, 3.0, 0.0).unwrap())
            .unwrap();
        assert_eq!(c.rhs, 0.0);
        assert!(c.lhs > 0.0 && !c.decreasing);

        let s = scenario(0.5, 1.0, 2.0, -1.0, 1.0, 1.0);
        let c = threshold_slope_condition(&TrustInvestmentProblem::new(s, 3.0, 0.0).unwrap())
            .unwrap();
        assert!(close(c.lhs, 2.0 / 3.0, 1e-15));
        assert!(c.decreasing);
    }

    #[test]
    fn upgrade_at_resolution_limit() {
        let s = scenario(0.5, 1.0, 1.0, 0.0, 1.0, 0.0);
        let tp = TrustInvestmentProblem::new(s, 1.0 + 1e-12, 1e-9).unwrap();
        let d = invest_decision(&tp).unwrap();
        assert!(d.threshold < 1e-9);
        assert!(!d.invest);
    }
}
