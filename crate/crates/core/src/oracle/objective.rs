use twofloat::TwoFloat;

use crate::equilibrium::Scenario;

/// Expected squared miss of the advisor's target as a function of its
/// recommendation, averaging the two consultation states.
#[derive(Debug, Clone, Copy)]
pub struct RawObjective {
    scenario: Scenario,
}

impl RawObjective {
    pub fn new(scenario: Scenario) -> Self {
        Self { scenario }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn eval(&self, s_e: f64) -> f64 {
        self.eval_in::<f64>(s_e)
    }

    /// Double-double evaluation. Near the minimum the objective is flat
    /// enough that f64 rounding hides differences of order `1e-6` in the
    /// argument; comparisons made at this precision stay exact far below that.
    pub fn eval_precise(&self, s_e: f64) -> TwoFloat {
        self.eval_in::<TwoFloat>(s_e)
    }

    fn eval_in<T: crate::beliefs::Scalar>(&self, s_e: f64) -> T {
        let s = &self.scenario;
        let b = s.beliefs();
        let p = T::from(s.p());
        let r = T::from(s.r());
        let s_e = T::from(s_e);
        let miss0 = r - b.decide_without_ai(s_e);
        let miss1 = r - b.decide_with_ai(s_e, T::from(s.s_p()));
        (T::from(1.0) - p) * miss0 * miss0 + p * miss1 * miss1
    }
}

pub fn raw_loss(s: &Scenario, s_e: f64) -> f64 {
    RawObjective::new(*s).eval(s_e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beliefs::BeliefParams;

    fn scenario(p: f64, r_e: f64, r_p: f64, mu0: f64, r: f64, s_p: f64) -> Scenario {
        Scenario::new(BeliefParams::new(mu0, r_e, r_p).unwrap(), p, r, s_p).unwrap()
    }

    #[test]
    fn zero_when_both_branches_hit_target() {
        let s = scenario(0.6, 2.0, 3.0, 0.5, 0.5, 0.5);
        assert_eq!(raw_loss(&s, 0.5), 0.0);
    }

    #[test]
    fn no_adoption_point() {
        let s = scenario(0.0, 1.0, 1.0, 0.0, 1.0, 0.0);
        assert_eq!(raw_loss(&s, 2.0), 0.0);
    }

    #[test]
    fn canonical_minimum_value() {
        let s = scenario(0.5, 1.0, 1.0, 0.0, 1.0, 0.0);
        let v = raw_loss(&s, 30.0 / 13.0);
        assert!((v - 1.0 / 26.0).abs() < 1e-15);
    }

    #[test]
    fn precise_and_plain_agree() {
        let obj = RawObjective::new(scenario(0.3, 0.2, 4.0, -3.0, 2.0, 7.0));
        for x in [-10.0, 0.0, 3.3, 50.0] {
            let plain = obj.eval(x);
            let precise = obj.eval_precise(x).hi();
            assert!((plain - precise).abs() <= 1e-13 * plain.abs().max(1.0));
        }
    }
}
