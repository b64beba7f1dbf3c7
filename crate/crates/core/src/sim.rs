//! Seeded Monte Carlo play of the regret game.
//!
//! Samples are split into fixed-size chunks; chunk `i` draws from substream `i`
//! of the seed, so the estimate does not depend on the thread count.

use rayon::prelude::*;
use thiserror::Error;

use crate::instance::Instance;
use crate::model::{AdversaryMixedStrategy, PlayerMixedStrategy};
use crate::nominal::NominalOracle;
use crate::regret::pure_regret;

const CHUNK: usize = 1 << 16;
const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// SplitMix64: a Weyl sequence with step `0x9e3779b97f4a7c15` passed through a
/// xor-shift/multiply finalizer.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent substream `index` of `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        SplitMix64::new(mix64(seed ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("player support contains the infeasible set {0}")]
    Infeasible(String),
    #[error("strategy dimension {found} does not match the instance ({expected})")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationResult {
    pub mean: f64,
    /// Sample standard deviation over `√N`.
    pub stderr: f64,
    pub samples: u64,
    /// Smallest and largest regret in the support of the product distribution.
    pub support_min: f64,
    pub support_max: f64,
}

/// Count, mean and sum of squared deviations of a batch.
#[derive(Debug, Clone, Copy)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn merge(a: Moments, b: Moments) -> Moments {
        if a.count == 0.0 {
            return b;
        }
        if b.count == 0.0 {
            return a;
        }
        let count = a.count + b.count;
        let delta = b.mean - a.mean;
        Moments {
            count,
            mean: a.mean + delta * b.count / count,
            m2: a.m2 + b.m2 + delta * delta * a.count * b.count / count,
        }
    }
}

/// Pairwise reduction in index order.
fn combine(mut parts: Vec<Moments>) -> Moments {
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|p| if p.len() == 2 { Moments::merge(p[0], p[1]) } else { p[0] })
            .collect();
    }
    parts[0]
}

fn cumulative(probs: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = probs
        .map(|p| {
            acc += p;
            acc
        })
        .collect();
    // guard the last bucket against round-off
    if let Some(last) = out.last_mut() {
        *last = f64::INFINITY;
    }
    out
}

fn draw(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Estimates `R̄(y, w)` from `samples` independent draws of `(T, c) ~ y × w`.
pub fn simulate(
    instance: &Instance,
    player: &PlayerMixedStrategy,
    adversary: &AdversaryMixedStrategy,
    samples: u64,
    seed: u64,
) -> Result<SimulationResult, SimError> {
    if samples == 0 {
        return Err(SimError::NoSamples);
    }
    let n = instance.n();
    if player.n() != n {
        return Err(SimError::LengthMismatch {
            expected: n,
            found: player.n(),
        });
    }
    if let Some((pure, _)) = adversary.support().iter().find(|(c, _)| c.costs.len() != n) {
        return Err(SimError::LengthMismatch {
            expected: n,
            found: pure.costs.len(),
        });
    }
    if let Some((t, _)) = player.support().iter().find(|(t, _)| !instance.oracle().is_feasible(t)) {
        return Err(SimError::Infeasible(t.to_string()));
    }

    let table: Vec<Vec<f64>> = player
        .support()
        .iter()
        .map(|(t, _)| {
            adversary
                .support()
                .iter()
                .map(|(c, _)| pure_regret(t, c, instance))
                .collect()
        })
        .collect();
    let support_min = table.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let support_max = table.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let row_cdf = cumulative(player.support().iter().map(|(_, p)| *p));
    let col_cdf = cumulative(adversary.support().iter().map(|(_, p)| *p));

    let chunks = samples.div_ceil(CHUNK as u64);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = (samples - i * CHUNK as u64).min(CHUNK as u64);
            let mut rng = SplitMix64::substream(seed, i);
            let mut m = Moments {
                count: 0.0,
                mean: 0.0,
                m2: 0.0,
            };
            for _ in 0..len {
                let r = draw(&row_cdf, rng.next_f64());
                let c = draw(&col_cdf, rng.next_f64());
                let x = table[r][c];
                m.count += 1.0;
                let delta = x - m.mean;
                m.mean += delta / m.count;
                m.m2 += delta * (x - m.mean);
            }
            m
        })
        .collect();
    let total = combine(parts);
    let stderr = if samples > 1 {
        (total.m2.max(0.0) / (total.count - 1.0)).sqrt() / total.count.sqrt()
    } else {
        0.0
    };
    Ok(SimulationResult {
        mean: total.mean,
        stderr,
        samples,
        support_min,
        support_max,
    })
}
