//! Equilibrium analysis of an advisor whose recommendations compete with a
//! predictable personal AI assistant.
//!
//! The human consults the AI with probability `p` and combines the advisor's
//! recommendation, the AI's recommendation and its own prior as a Bayesian.
//! The advisor anticipates this and distorts its recommendation to pull the
//! decision toward its own target. This crate computes the resulting
//! recommendation, counteraction intensity, equilibrium loss, the
//! comparative-statics maximizers and the trust-investment threshold, and
//! checks every closed form against numerical oracles.

pub mod beliefs;
pub mod cli;
pub mod config;
pub mod equilibrium;
pub mod error;
pub mod oracle;
pub mod registry;
pub mod sweep;
pub mod trust;
pub mod verify;

pub use beliefs::{BeliefParams, VariancePrior};
pub use equilibrium::{EquilibriumOutcome, Scenario, TrustRatio};
pub use error::{Error, Result};
pub use trust::{TrustDecision, TrustInvestmentProblem};
