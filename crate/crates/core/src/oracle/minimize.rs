use std::sync::Arc;

use twofloat::TwoFloat;

use super::objective::RawObjective;
use crate::equilibrium::Scenario;
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

pub const DEFAULT_GOLDEN_TOL: f64 = 1e-10;
const MAX_DOUBLINGS: u32 = 64;
/// 1/φ, the fraction of the interval kept at each golden-section step.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

fn checked(obj: &RawObjective, x: f64) -> Result<TwoFloat> {
    let v = obj.eval_precise(x);
    if v.hi().is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(x))
    }
}

/// Interval `[lo, hi]` with `L(lo) > L(mid) < L(hi)`, which by convexity
/// contains the minimizer. Centred on the target `r` with a half-width that
/// scales with the prior bias and the AI disagreement, doubled until the
/// condition holds.
pub fn bracket_minimum(s: &Scenario) -> Result<(f64, f64)> {
    let obj = RawObjective::new(*s);
    let b = s.beliefs();
    let (r, r_e, r_p) = (s.r(), b.r_e(), b.r_p());
    let mid = r;
    let mut half = 1.0
        + (r - b.mu0()).abs() * (1.0 + 1.0 / r_e)
        + (r - s.s_p()).abs() * (1.0 + r_p / r_e);
    let f_mid = checked(&obj, mid)?;
    for _ in 0..=MAX_DOUBLINGS {
        let (lo, hi) = (mid - half, mid + half);
        if checked(&obj, lo)? > f_mid && checked(&obj, hi)? > f_mid {
            return Ok((lo, hi));
        }
        half *= 2.0;
    }
    Err(Error::Bracketing(MAX_DOUBLINGS))
}

/// Number of golden-section steps needed to shrink `width` below `tol`.
pub(crate) fn golden_iterations(width: f64, tol: f64) -> u32 {
    ((width / tol).ln() / (1.0 / INV_PHI).ln()).ceil().max(0.0) as u32
}

/// Golden-section search on the raw objective. Returns the midpoint of the
/// final interval, whose half-width is at most `tol / 2`.
pub fn golden_section_minimize(s: &Scenario, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::invalid("lo", format!("need lo < hi, got [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", format!("must be positive, got {tol}")));
    }
    let obj = RawObjective::new(*s);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = checked(&obj, c)?;
    let mut fd = checked(&obj, d)?;
    for _ in 0..golden_iterations(hi - lo, tol) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = checked(&obj, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = checked(&obj, d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Evaluates the objective at `n` equally spaced points and returns the
/// leftmost minimal one with its value.
pub fn grid_min(s: &Scenario, lo: f64, hi: f64, n: usize) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::invalid("n", format!("grid needs at least 3 points, got {n}")));
    }
    if !(lo < hi) {
        return Err(Error::invalid("lo", format!("need lo < hi, got [{lo}, {hi}]")));
    }
    let obj = RawObjective::new(*s);
    let step = (hi - lo) / (n - 1) as f64;
    let mut best = (lo, obj.eval(lo));
    for i in 1..n {
        let x = if i == n - 1 { hi } else { lo + step * i as f64 };
        let v = obj.eval(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

/// A one-dimensional minimizer of the raw objective over a bracket.
pub trait Minimizer: Named + Send + Sync {
    fn minimize(&self, s: &Scenario, lo: f64, hi: f64) -> Result<f64>;

    /// Worst-case distance between the returned point and the true minimizer.
    fn resolution(&self, lo: f64, hi: f64) -> f64;
}

#[derive(Debug, Clone, Copy)]
pub struct GoldenSection {
    pub tol: f64,
}

impl Default for GoldenSection {
    fn default() -> Self {
        Self {
            tol: DEFAULT_GOLDEN_TOL,
        }
    }
}

impl Named for GoldenSection {
    fn name(&self) -> &'static str {
        "golden"
    }
}

impl Minimizer for GoldenSection {
    fn minimize(&self, s: &Scenario, lo: f64, hi: f64) -> Result<f64> {
        golden_section_minimize(s, lo, hi, self.tol)
    }

    fn resolution(&self, _lo: f64, _hi: f64) -> f64 {
        self.tol
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GridSearch {
    pub points: usize,
}

impl Default for GridSearch {
    fn default() -> Self {
        Self { points: 1_000_001 }
    }
}

impl Named for GridSearch {
    fn name(&self) -> &'static str {
        "grid"
    }
}

impl Minimizer for GridSearch {
    fn minimize(&self, s: &Scenario, lo: f64, hi: f64) -> Result<f64> {
        grid_min(s, lo, hi, self.points).map(|(x, _)| x)
    }

    fn resolution(&self, lo: f64, hi: f64) -> f64 {
        (hi - lo) / (self.points - 1) as f64
    }
}

/// Built-in minimizers with default settings.
pub fn minimizers() -> Registry<dyn Minimizer> {
    let mut reg: Registry<dyn Minimizer> = Registry::new("minimizer");
    reg.register(Arc::new(GoldenSection::default()))
        .register(Arc::new(GridSearch::default()));
    reg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beliefs::BeliefParams;

    fn scenario(p: f64, r_e: f64, r_p: f64, mu0: f64, r: f64, s_p: f64) -> Scenario {
        Scenario::new(BeliefParams::new(mu0, r_e, r_p).unwrap(), p, r, s_p).unwrap()
    }

    fn canonical() -> Scenario {
        scenario(0.5, 1.0, 1.0, 0.0, 1.0, 0.0)
    }

    #[test]
    fn brackets_contain_known_minimizers() {
        let (lo, hi) = bracket_minimum(&scenario(0.5, 1.0, 1.0, 2.0, 2.0, 2.0)).unwrap();
        assert!(lo < 2.0 && 2.0 < hi);
        let (lo, hi) = bracket_minimum(&canonical()).unwrap();
        assert!(lo < 30.0 / 13.0 && 30.0 / 13.0 < hi);
        let (lo, hi) = bracket_minimum(&scenario(0.0, 1.0, 1.0, 0.0, 1.0, 0.0)).unwrap();
        assert!(lo < 2.0 && 2.0 < hi);
    }

    #[test]
    fn golden_section_hits_closed_form_points() {
        let cases = [
            (canonical(), 30.0 / 13.0),
            (scenario(0.0, 1.0, 1.0, 0.0, 1.0, 0.0), 2.0),
            (scenario(0.4, 3.0, 0.5, -1.0, -1.0, -1.0), -1.0),
        ];
        for (s, expected) in cases {
            let (lo, hi) = bracket_minimum(&s).unwrap();
            let x = golden_section_minimize(&s, lo, hi, 1e-10).unwrap();
            assert!((x - expected).abs() <= 1e-10, "{x} vs {expected}");
        }
    }

    #[test]
    fn golden_iteration_count() {
        assert_eq!(golden_iterations(1.0, 1.0), 0);
        // 0.618^k <= 1e-3 first holds at k = 15.
        assert_eq!(golden_iterations(1.0, 1e-3), 15);
    }

    #[test]
    fn golden_rejects_bad_input() {
        let s = canonical();
        assert!(golden_section_minimize(&s, 1.0, 1.0, 1e-10).is_err());
        assert!(golden_section_minimize(&s, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn non_finite_objective_reported() {
        let s = scenario(0.5, 1.0, 1.0, 0.0, 1.0, 0.0);
        assert!(matches!(
            golden_section_minimize(&s, -f64::MAX, f64::MAX, 1.0),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn grid_on_canonical_scenario() {
        let (x, v) = grid_min(&canonical(), 0.0, 5.0, 1_000_001).unwrap();
        assert!((x - 30.0 / 13.0).abs() <= 5e-6);
        assert!(v >= 1.0 / 26.0 - 1e-12);
        assert!(grid_min(&canonical(), 0.0, 5.0, 2).is_err());
    }

    #[test]
    fn grid_at_full_adoption_reaches_zero() {
        let s = scenario(1.0, 0.7, 2.0, 1.0, -0.5, 3.0);
        let (lo, hi) = bracket_minimum(&s).unwrap();
        let (_, v) = grid_min(&s, lo, hi, 200_001).unwrap();
        assert!(v < 1e-6);
    }

    #[test]
    fn registry_lists_both_minimizers() {
        let reg = minimizers();
        assert_eq!(reg.names(), vec!["golden", "grid"]);
        let s = canonical();
        for name in reg.names() {
            let m = reg.get(name).unwrap();
            let x = m.minimize(&s, 0.0, 5.0).unwrap();
            assert!((x - 30.0 / 13.0).abs() <= m.resolution(0.0, 5.0).max(1e-10));
        }
    }
}
