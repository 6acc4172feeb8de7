use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::equilibrium::Scenario;
use crate::error::{Error, Result};

/// Draws per random stream. Draw `j` comes from stream `j / MC_BLOCK`, seeded
/// with `seed ^ (j / MC_BLOCK)`, so the estimate does not depend on how the
/// blocks are spread over threads.
pub const MC_BLOCK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
    pub seed: u64,
}

fn consulted_in_block(p: f64, seed: u64, block: u64, draws: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ block);
    (0..draws).filter(|_| rng.gen::<f64>() < p).count() as u64
}

/// Monte Carlo estimate of the expected loss of recommending `s_e`, sampling
/// only the consultation coin.
///
/// Every draw's loss is one of two values, so the sample is summarized exactly
/// by the number of consultations `k`: mean `(1-q) l0 + q l1` and unbiased
/// variance `n/(n-1) q(1-q) (l1-l0)²` with `q = k/n`. Degenerate coins give
/// the single branch loss bit for bit and zero standard error.
pub fn mc_expected_loss(s: &Scenario, s_e: f64, n: u64, seed: u64) -> Result<McEstimate> {
    if n < 2 {
        return Err(Error::invalid("n", format!("need at least 2 draws, got {n}")));
    }
    let b = s.beliefs();
    let r = s.r();
    let l0 = (r - b.decide_without_ai(s_e)).powi(2);
    let l1 = (r - b.decide_with_ai(s_e, s.s_p())).powi(2);

    let p = s.p();
    let blocks = n.div_ceil(MC_BLOCK);
    let consulted: u64 = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let draws = MC_BLOCK.min(n - block * MC_BLOCK);
            consulted_in_block(p, seed, block, draws)
        })
        .sum();

    let q = consulted as f64 / n as f64;
    let mean = (1.0 - q) * l0 + q * l1;
    let gap = l1 - l0;
    let variance = n as f64 / (n - 1) as f64 * q * (1.0 - q) * gap * gap;
    Ok(McEstimate {
        mean,
        std_error: (variance / n as f64).sqrt(),
        n,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beliefs::BeliefParams;

    fn canonical(p: f64) -> Scenario {
        Scenario::new(BeliefParams::new(0.0, 1.0, 1.0).unwrap(), p, 1.0, 0.0).unwrap()
    }

    #[test]
    fn degenerate_coins_are_exact() {
        let s = canonical(0.0);
        let est = mc_expected_loss(&s, 1.7, 1000, 3).unwrap();
        let d0 = s.beliefs().decide_without_ai(1.7);
        assert_eq!(est.mean, (1.0f64 - d0).powi(2));
        assert_eq!(est.std_error, 0.0);

        let s = canonical(1.0);
        let est = mc_expected_loss(&s, 1.7, 1000, 3).unwrap();
        let d1 = s.beliefs().decide_with_ai(1.7, 0.0);
        assert_eq!(est.mean, (1.0f64 - d1).powi(2));
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn canonical_estimate_within_three_standard_errors() {
        let est = mc_expected_loss(&canonical(0.5), 30.0 / 13.0, 1_000_000, 0).unwrap();
        assert!((est.mean - 1.0 / 26.0).abs() <= 3.0 * est.std_error);
        assert!(est.std_error > 0.0);
    }

    #[test]
    fn seeded_runs_repeat() {
        let s = canonical(0.3);
        let a = mc_expected_loss(&s, 2.0, 200_001, 42).unwrap();
        let b = mc_expected_loss(&s, 2.0, 200_001, 42).unwrap();
        assert_eq!(a, b);
        let c = mc_expected_loss(&s, 2.0, 200_001, 43).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let s = canonical(0.42);
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| mc_expected_loss(&s, 2.0, 300_000, 9).unwrap());
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| mc_expected_loss(&s, 2.0, 300_000, 9).unwrap());
        assert_eq!(serial, parallel);
    }

    #[test]
    fn sample_variance_matches_direct_computation() {
        let s = canonical(0.37);
        let n = 5_000u64;
        let est = mc_expected_loss(&s, 2.2, n, 11).unwrap();
        // Replay the draws one by one.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = s.beliefs();
        let losses: Vec<f64> = (0..n)
            .map(|_| {
                let d = if rng.gen::<f64>() < 0.37 {
                    b.decide_with_ai(2.2, 0.0)
                } else {
                    b.decide_without_ai(2.2)
                };
                (1.0f64 - d).powi(2)
            })
            .collect();
        let mean = losses.iter().sum::<f64>() / n as f64;
        let var = losses.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((est.mean - mean).abs() < 1e-14);
        assert!((est.std_error - (var / n as f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn too_few_draws() {
        assert!(mc_expected_loss(&canonical(0.5), 1.0, 1, 0).is_err());
    }
}
