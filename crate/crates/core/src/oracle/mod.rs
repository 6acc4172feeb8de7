//! Independent numerical checks of the closed forms.
//!
//! Everything here is built from the human decision rules in
//! [`crate::beliefs`] and nothing else; the closed-form equilibrium is never
//! consulted, so a shared algebra mistake cannot validate itself.

mod minimize;
mod montecarlo;
mod objective;

pub use minimize::{
    bracket_minimum, golden_section_minimize, grid_min, minimizers, GoldenSection, GridSearch,
    Minimizer, DEFAULT_GOLDEN_TOL,
};
pub use montecarlo::{mc_expected_loss, McEstimate, MC_BLOCK};
pub use objective::{raw_loss, RawObjective};
