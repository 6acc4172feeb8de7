//! Cross-checks of the closed-form equilibrium against the numerical oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::beliefs::BeliefParams;
use crate::equilibrium::{optimal_recommendation, EquilibriumOutcome, Scenario};
use crate::error::Result;
use crate::oracle::{bracket_minimum, grid_min, mc_expected_loss, minimizers, raw_loss, McEstimate};

pub const ARGMIN_TOL: f64 = 1e-8;
pub const LOSS_ABS_TOL: f64 = 1e-10;
pub const LOSS_REL_TOL: f64 = 1e-8;
pub const MC_SIGMAS: f64 = 3.0;
/// Slack allowed for rounding when the grid minimum undercuts L*.
pub const GRID_SLACK: f64 = 1e-12;

/// Draws a scenario with `p ~ U[0,1]`, `r_e, r_p` log-uniform on
/// `[0.05, 20]` and `mu0, r, s_p ~ U[-10, 10]`.
pub fn random_scenario<R: Rng>(rng: &mut R) -> Scenario {
    let (lo, hi) = (0.05f64.ln(), 20f64.ln());
    let p = rng.gen::<f64>();
    let r_e = rng.gen_range(lo..hi).exp();
    let r_p = rng.gen_range(lo..hi).exp();
    let mu0 = rng.gen_range(-10.0..10.0);
    let r = rng.gen_range(-10.0..10.0);
    let s_p = rng.gen_range(-10.0..10.0);
    let beliefs = BeliefParams::new(mu0, r_e, r_p).expect("sampled trust is above the floor");
    Scenario::new(beliefs, p, r, s_p).expect("sampled scenario is valid")
}

/// Scenario for trial `i` of a run seeded with `seed`.
pub fn trial_scenario(seed: u64, i: u64) -> Scenario {
    random_scenario(&mut ChaCha8Rng::seed_from_u64(seed ^ i))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrialCheck {
    pub closed: EquilibriumOutcome,
    pub bracket: (f64, f64),
    pub oracle_argmin: f64,
    pub oracle_min: f64,
    pub grid_argmin: f64,
    pub grid_min: f64,
    pub grid_spacing: f64,
    /// Loss increase caused by missing the minimizer by the minimizer's
    /// resolution; zero for an exact search.
    pub resolution_slack: f64,
}

impl TrialCheck {
    pub fn argmin_dev(&self) -> f64 {
        (self.oracle_argmin - self.closed.s_e_star).abs()
    }

    pub fn loss_dev(&self) -> f64 {
        (self.oracle_min - self.closed.loss).abs()
    }

    pub fn loss_ok(&self) -> bool {
        self.loss_dev()
            <= LOSS_ABS_TOL.max(LOSS_REL_TOL * self.closed.loss) + self.resolution_slack
    }

    pub fn grid_ok(&self) -> bool {
        (self.grid_argmin - self.closed.s_e_star).abs() <= self.grid_spacing
            && self.grid_min >= self.closed.loss - GRID_SLACK * self.closed.loss.max(1.0)
    }
}

/// Runs the chosen minimizer and a coarse grid on one scenario.
pub fn check_scenario(s: &Scenario, minimizer: &str, grid_points: usize) -> Result<TrialCheck> {
    let closed = optimal_recommendation(s)?;
    let (lo, hi) = bracket_minimum(s)?;
    let minimizer = minimizers().get(minimizer)?;
    let oracle_argmin = minimizer.minimize(s, lo, hi)?;
    let (grid_argmin, grid_min) = grid_min(s, lo, hi, grid_points)?;
    let res = minimizer.resolution(lo, hi);
    let at = |x: f64| raw_loss(s, x);
    let star = closed.s_e_star;
    let resolution_slack = if res > ARGMIN_TOL {
        (at(star - res).max(at(star + res)) - at(star)).max(0.0)
    } else {
        0.0
    };
    Ok(TrialCheck {
        closed,
        bracket: (lo, hi),
        oracle_argmin,
        oracle_min: raw_loss(s, oracle_argmin),
        grid_argmin,
        grid_min,
        grid_spacing: (hi - lo) / (grid_points - 1) as f64,
        resolution_slack,
    })
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub minimizer: String,
    pub grid_points: usize,
    pub mc_n: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0,
            minimizer: "golden".into(),
            grid_points: 10_001,
            mc_n: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub trials: usize,
    pub minimizer: String,
    pub max_argmin_dev: f64,
    pub max_loss_dev: f64,
    pub argmin_failures: usize,
    pub loss_failures: usize,
    pub grid_failures: usize,
    pub mc: McEstimate,
    pub mc_target: f64,
    pub mc_ok: bool,
    pub passed: bool,
}

/// Randomized oracle agreement over `opts.trials` scenarios, plus a Monte
/// Carlo check of the loss of `base` at its optimal recommendation.
pub fn verify(base: &Scenario, opts: &VerifyOptions) -> Result<VerifyReport> {
    let registry = minimizers();
    let minimizer = registry.get(&opts.minimizer)?;

    let checks: Vec<TrialCheck> = (0..opts.trials as u64)
        .into_par_iter()
        .map(|i| check_scenario(&trial_scenario(opts.seed, i), &opts.minimizer, opts.grid_points))
        .collect::<Result<_>>()?;

    let mut max_argmin_dev = 0.0f64;
    let mut max_loss_dev = 0.0f64;
    let (mut argmin_failures, mut loss_failures, mut grid_failures) = (0, 0, 0);
    for c in &checks {
        let allowed = ARGMIN_TOL.max(minimizer.resolution(c.bracket.0, c.bracket.1));
        max_argmin_dev = max_argmin_dev.max(c.argmin_dev());
        max_loss_dev = max_loss_dev.max(c.loss_dev());
        argmin_failures += usize::from(c.argmin_dev() > allowed);
        loss_failures += usize::from(!c.loss_ok());
        grid_failures += usize::from(!c.grid_ok());
    }

    let closed = optimal_recommendation(base)?;
    let mc = mc_expected_loss(base, closed.s_e_star, opts.mc_n, opts.seed)?;
    let mc_ok = (mc.mean - closed.loss).abs() <= MC_SIGMAS * mc.std_error + GRID_SLACK;

    Ok(VerifyReport {
        trials: opts.trials,
        minimizer: opts.minimizer.clone(),
        max_argmin_dev,
        max_loss_dev,
        argmin_failures,
        loss_failures,
        grid_failures,
        mc,
        mc_target: closed.loss,
        mc_ok,
        passed: argmin_failures == 0 && loss_failures == 0 && grid_failures == 0 && mc_ok,
    })
}
