//! One-dimensional parameter sweeps of the equilibrium objects, with extremum
//! location, shape checks and CSV/SVG emission.

mod csv;
mod preset;
mod quantity;
mod svg;

use rayon::prelude::*;
use serde::Serialize;

use crate::beliefs::TRUST_FLOOR;
use crate::equilibrium::{peak_adoption, Scenario};
use crate::error::{Error, Result};

pub use csv::{emit_csv, format_sig17};
pub use preset::{preset, presets, Preset};
pub use quantity::{
    quantities, Delta, Loss, Shape, SweepParam, SweepPoint, SweepQuantity, Threshold,
    TrustSupplement,
};
pub use svg::{emit_svg_chart, ChartFrame};

/// Smallest start value for sweeps over the open domain `t > 0`.
pub const MIN_TRUST_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Scenario,
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// Registered quantity name (`delta`, `loss`, `threshold`).
    pub quantity: String,
    pub trust: Option<TrustSupplement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub index: usize,
    pub param: f64,
    pub value: f64,
    /// Vertex of the parabola through the extremal row and its neighbours.
    pub refined_param: f64,
    pub refined_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub param: SweepParam,
    pub quantity: &'static str,
    pub rows: Vec<(f64, f64)>,
    pub argmax: Option<Extremum>,
    pub argmin: Option<Extremum>,
    /// Fixed parameters, in emission order.
    pub metadata: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(Error::InvalidSpec(format!(
                "need finite from < to, got [{}, {}]",
                self.from, self.to
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidSpec(format!(
                "need at least 2 steps, got {}",
                self.steps
            )));
        }
        let lower = match self.param {
            SweepParam::Adoption => {
                if self.to > 1.0 {
                    return Err(Error::InvalidSpec("p must stay within [0, 1]".into()));
                }
                0.0
            }
            SweepParam::TrustRatio => MIN_TRUST_RATIO,
            SweepParam::AdvisorTrust | SweepParam::AiTrust => TRUST_FLOOR,
        };
        if self.from < lower {
            return Err(Error::InvalidSpec(format!(
                "{} sweep must start at or above {lower:e}, got {}",
                self.param, self.from
            )));
        }
        if self.base.beliefs().is_uninformative() {
            return Err(Error::InvalidSpec(
                "sweeps need an informative prior".into(),
            ));
        }
        Ok(())
    }

    /// Grid value at row `i`; both endpoints are hit exactly.
    pub fn grid_value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.to
        } else {
            self.from + (self.to - self.from) * (i as f64 / (self.steps - 1) as f64)
        }
    }

    /// Scenario with the swept parameter set to `value`. For `t`, `r_e` stays
    /// fixed and `r_p = t (1 + r_e)`.
    pub fn scenario_at(&self, value: f64) -> Result<Scenario> {
        let b = *self.base.beliefs();
        Ok(match self.param {
            SweepParam::Adoption => self.base.with_p(value)?,
            SweepParam::TrustRatio => self
                .base
                .with_beliefs(b.with_trust(b.r_e(), value * (1.0 + b.r_e()))?),
            SweepParam::AdvisorTrust => self.base.with_beliefs(b.with_trust(value, b.r_p())?),
            SweepParam::AiTrust => self.base.with_beliefs(b.with_trust(b.r_e(), value)?),
        })
    }

    fn metadata(&self, quantity: &str) -> Vec<(String, String)> {
        let b = self.base.beliefs();
        let mut meta = vec![
            ("quantity".to_string(), quantity.to_string()),
            ("param".to_string(), self.param.to_string()),
            ("from".to_string(), format_sig17(self.from)),
            ("to".to_string(), format_sig17(self.to)),
            ("steps".to_string(), self.steps.to_string()),
        ];
        let mut fixed = |key: &str, v: f64, swept: bool| {
            if !swept {
                meta.push((key.to_string(), format_sig17(v)));
            }
        };
        let param = self.param;
        fixed("p", self.base.p(), param == SweepParam::Adoption);
        fixed("mu0", b.mu0(), false);
        fixed("rE", b.r_e(), param == SweepParam::AdvisorTrust);
        fixed(
            "rP",
            b.r_p(),
            matches!(param, SweepParam::AiTrust | SweepParam::TrustRatio),
        );
        fixed("r", self.base.r(), false);
        fixed("sP", self.base.s_p(), false);
        if let Some(trust) = &self.trust {
            meta.push(("rE_high".to_string(), format_sig17(trust.r_e_high)));
            meta.push(("cost".to_string(), format_sig17(trust.cost)));
        }
        if param == SweepParam::TrustRatio {
            meta.push(("embedding".to_string(), "rP=t*(1+rE)".to_string()));
        }
        meta.push(("seed".to_string(), "none".to_string()));
        meta
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with(spec, Execution::Parallel)
}

pub fn run_sweep_with(spec: &SweepSpec, execution: Execution) -> Result<SweepResult> {
    spec.validate()?;
    let registry = quantities();
    let quantity = registry
        .get(&spec.quantity)
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    quantity.check(spec.param, spec.trust.as_ref())?;

    let eval_row = |i: usize| -> Result<(f64, f64)> {
        let x = spec.grid_value(i);
        let point = SweepPoint {
            scenario: spec.scenario_at(x)?,
            param: spec.param,
            value: x,
            trust: spec.trust.as_ref(),
        };
        Ok((x, quantity.evaluate(&point)?))
    };
    let rows: Vec<(f64, f64)> = match execution {
        Execution::Serial => (0..spec.steps).map(eval_row).collect::<Result<_>>()?,
        Execution::Parallel => (0..spec.steps)
            .into_par_iter()
            .map(eval_row)
            .collect::<Result<_>>()?,
    };

    check_shape(&rows, quantity.expected_shape(spec.param))?;

    Ok(SweepResult {
        param: spec.param,
        quantity: quantity.name(),
        argmax: locate(&rows, |a, b| a > b),
        argmin: locate(&rows, |a, b| a < b),
        metadata: spec.metadata(quantity.name()),
        rows,
    })
}

/// Leftmost row that `better` prefers over every other, refined by a
/// three-point parabola when it has neighbours on both sides.
fn locate(rows: &[(f64, f64)], better: impl Fn(f64, f64) -> bool) -> Option<Extremum> {
    let mut idx = 0;
    for (i, &(_, y)) in rows.iter().enumerate() {
        if y.is_nan() {
            return None;
        }
        if better(y, rows[idx].1) {
            idx = i;
        }
    }
    let (x, y) = *rows.get(idx)?;
    let (mut refined_param, mut refined_value) = (x, y);
    if idx > 0 && idx + 1 < rows.len() {
        let (x0, y0) = rows[idx - 1];
        let (x2, y2) = rows[idx + 1];
        let h = 0.5 * (x2 - x0);
        let curvature = y0 - 2.0 * y + y2;
        if curvature != 0.0 {
            let offset = h * (y0 - y2) / (2.0 * curvature);
            if offset.abs() <= h {
                refined_param = x + offset;
                refined_value = y - (y0 - y2) * (y0 - y2) / (8.0 * curvature);
            }
        }
    }
    Some(Extremum {
        index: idx,
        param: x,
        value: y,
        refined_param,
        refined_value,
    })
}

/// Steps that move against the expected direction by more than rounding
/// (relative `1e-12`) are violations; flat stretches are allowed.
fn check_shape(rows: &[(f64, f64)], shape: Shape) -> Result<()> {
    let rises = |a: f64, b: f64| b - a > 1e-12 * a.abs().max(b.abs());
    let falls = |a: f64, b: f64| rises(b, a);
    let first_violation = |from: usize, to: usize, bad: &dyn Fn(f64, f64) -> bool| {
        (from..to).find(|&i| bad(rows[i].1, rows[i + 1].1))
    };
    let n = rows.len();
    let violation = match shape {
        Shape::Unconstrained => None,
        Shape::Increasing => first_violation(0, n - 1, &falls),
        Shape::Decreasing => first_violation(0, n - 1, &rises),
        Shape::Monotone => {
            let up = first_violation(0, n - 1, &falls);
            let down = first_violation(0, n - 1, &rises);
            match (up, down) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            }
        }
        Shape::SinglePeaked => {
            let peak = locate(rows, |a, b| a > b).map_or(0, |e| e.index);
            first_violation(0, peak, &falls).or_else(|| first_violation(peak, n - 1, &rises))
        }
    };
    match violation {
        Some(index) => Err(Error::ShapeViolation {
            expected: shape.as_str(),
            index,
        }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakAdoptionCheck {
    pub analytic: f64,
    pub numeric: f64,
    /// Grid spacing of the numeric search.
    pub resolution: f64,
}

/// Locates the loss-maximizing adoption rate twice: in closed form, and as the
/// grid minimizer of `B/p + A/(1-p)` with `A = (1+r_e)²`, `B = (1+r_e+r_p)²`.
pub fn peak_adoption_dual_check(r_e: f64, r_p: f64, steps: usize) -> Result<PeakAdoptionCheck> {
    if steps < 1000 {
        return Err(Error::InvalidSpec(format!(
            "need at least 1000 grid points, got {steps}"
        )));
    }
    let analytic = peak_adoption(r_e, r_p)?;
    let a = (1.0 + r_e).powi(2);
    let b = (1.0 + r_e + r_p).powi(2);
    let resolution = 1.0 / (steps + 1) as f64;
    let mut best = (f64::NAN, f64::INFINITY);
    for i in 1..=steps {
        let p = i as f64 * resolution;
        let d = b / p + a / (1.0 - p);
        if d < best.1 {
            best = (p, d);
        }
    }
    Ok(PeakAdoptionCheck {
        analytic,
        numeric: best.0,
        resolution,
    })
}
