//! Deterministic RNG stream derivation.
//!
//! All randomness in the crate flows from a single master seed. Every
//! consumer derives its own independent stream from `(seed, purpose, id)`,
//! so results never depend on worker count or evaluation order.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derive an independent RNG stream from the master seed, a purpose tag and
/// a numeric id (typically a node id).
pub fn stream(seed: u64, purpose: &str, id: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(purpose.as_bytes());
    hasher.update(id.to_le_bytes());
    let digest: [u8; 32] = hasher.finalize().into();
    ChaCha8Rng::from_seed(digest)
}

/// Uniform draw on the half-open interval (0, 1]; safe as a power-law base.
pub fn open_closed<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Draw one index from an explicit categorical distribution.
///
/// `probs` must be non-negative and sum to roughly 1; the final bucket
/// absorbs any floating-point slack.
pub fn categorical<R: Rng>(rng: &mut R, probs: &[f64]) -> usize {
    debug_assert!(!probs.is_empty());
    let r = rng.gen::<f64>();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if r < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Weighted sampling of `n` distinct indices without replacement.
///
/// After each draw the weight of the selected index is zeroed and the
/// remaining weights are implicitly renormalized. Consumes `weights`.
pub fn weighted_without_replacement<R: Rng>(
    rng: &mut R,
    mut weights: Vec<f64>,
    n: usize,
) -> Vec<usize> {
    let n = n.min(weights.len());
    let mut picked = Vec::with_capacity(n);
    for _ in 0..n {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            break;
        }
        let r = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut choice = None;
        for (i, &w) in weights.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            acc += w;
            if r < acc {
                choice = Some(i);
                break;
            }
        }
        // Floating-point slack can push r past the last positive weight.
        let idx = choice.unwrap_or_else(|| {
            weights.iter().rposition(|&w| w > 0.0).expect("total > 0")
        });
        weights[idx] = 0.0;
        picked.push(idx);
    }
    picked
}

/// Uniform sample of `n` distinct values from `0..population` via partial
/// Fisher-Yates.
pub fn index_sample<R: Rng>(rng: &mut R, population: usize, n: usize) -> Vec<usize> {
    let n = n.min(population);
    let mut pool: Vec<usize> = (0..population).collect();
    for i in 0..n {
        let j = rng.gen_range(i..population);
        pool.swap(i, j);
    }
    pool.truncate(n);
    pool
}
