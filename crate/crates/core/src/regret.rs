//! Per-player regret of pure and mixed profiles.
//!
//! A profile is an epsilon-Nash equilibrium exactly when every player's
//! regret is at most epsilon.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::game::SummGame;
use crate::profile::{MixedProfile, PureProfile};

/// Largest player count for exact expectation over all `2^n` profiles.
pub const EXACT_MIXED_MAX_PLAYERS: usize = 20;

/// Number of enumeration blocks for the exact mode. Fixed so that the
/// reduction order does not depend on the thread pool.
const EXACT_BLOCKS: u64 = 256;

/// How expectations over a mixed profile are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegretMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedRegret {
    pub regrets: Vec<f64>,
    /// Standard errors of the Monte-Carlo estimates; `None` in exact mode.
    pub std_errors: Option<Vec<f64>>,
}

impl MixedRegret {
    pub fn max(&self) -> f64 {
        max_regret(&self.regrets)
    }
}

pub fn max_regret(regrets: &[f64]) -> f64 {
    regrets.iter().copied().fold(0.0, f64::max)
}

fn check_arity(game: &SummGame, len: usize) -> Result<()> {
    if len != game.players() {
        return Err(input(format!(
            "profile has {len} players but the game has {}",
            game.players()
        )));
    }
    Ok(())
}

/// Regret of every player at a pure profile:
/// `max_b F_b^i(S(x[i:b])) - F_{x_i}^i(S(x))`.
pub fn regret_pure(game: &SummGame, x: &PureProfile) -> Result<Vec<f64>> {
    check_arity(game, x.len())?;
    let s = game.summarization();
    let at = s.evaluate(x);
    Ok((0..game.players())
        .map(|i| {
            let current = game.payoff_unchecked(i, x.action(i), at.value);
            let other = 1 - x.action(i);
            let deviation = game.payoff_unchecked(i, other, s.substituted(x, &at, i, other));
            current.max(deviation) - current
        })
        .collect())
}

/// Regret from the expected payoff gap `gap = E[F_1(S(x[i:1]))] - E[F_0(S(x[i:0]))]`
/// of a player who plays 1 with probability `p`.
fn regret_from_gap(p: f64, gap: f64) -> f64 {
    (1.0 - p) * gap.max(0.0) + p * (-gap).max(0.0)
}

/// Regret of every player at a mixed profile.
pub fn regret_mixed(game: &SummGame, p: &MixedProfile, mode: RegretMode) -> Result<MixedRegret> {
    check_arity(game, p.len())?;
    match mode {
        RegretMode::Exact => exact_regret(game, p),
        RegretMode::MonteCarlo { samples, seed } => monte_carlo_regret(game, p, samples, seed),
    }
}

fn accumulate(game: &SummGame, x: &PureProfile, weight: f64, e0: &mut [f64], e1: &mut [f64]) {
    let s = game.summarization();
    let at = s.evaluate(x);
    for i in 0..game.players() {
        e0[i] += weight * game.payoff_unchecked(i, 0, s.substituted(x, &at, i, 0));
        e1[i] += weight * game.payoff_unchecked(i, 1, s.substituted(x, &at, i, 1));
    }
}

fn exact_regret(game: &SummGame, p: &MixedProfile) -> Result<MixedRegret> {
    let n = game.players();
    if n > EXACT_MIXED_MAX_PLAYERS {
        return Err(Error::Capability(format!(
            "exact mixed regret enumerates 2^n profiles and is limited to n <= {EXACT_MIXED_MAX_PLAYERS}, got {n}; use Monte-Carlo mode"
        )));
    }
    let total = 1u64 << n;
    let blocks = EXACT_BLOCKS.min(total);
    let per_block = total / blocks;
    let probs = p.probs();

    let partials: Vec<(Vec<f64>, Vec<f64>)> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut e0 = vec![0.0; n];
            let mut e1 = vec![0.0; n];
            for m in block * per_block..(block + 1) * per_block {
                let x = PureProfile::from_index(m, n);
                let weight: f64 = x
                    .actions()
                    .iter()
                    .zip(probs)
                    .map(|(&a, &q)| if a == 1 { q } else { 1.0 - q })
                    .product();
                if weight != 0.0 {
                    accumulate(game, &x, weight, &mut e0, &mut e1);
                }
            }
            (e0, e1)
        })
        .collect();

    let mut e0 = vec![0.0; n];
    let mut e1 = vec![0.0; n];
    for (b0, b1) in &partials {
        for i in 0..n {
            e0[i] += b0[i];
            e1[i] += b1[i];
        }
    }
    let regrets = (0..n)
        .map(|i| regret_from_gap(probs[i], e1[i] - e0[i]))
        .collect();
    Ok(MixedRegret {
        regrets,
        std_errors: None,
    })
}

/// Draws a pure profile from the product distribution.
pub(crate) fn sample_profile(rng: &mut impl Rng, p: &MixedProfile) -> PureProfile {
    let actions = p
        .probs()
        .iter()
        .map(|&q| u8::from(rng.gen::<f64>() < q))
        .collect();
    PureProfile::new(actions).expect("sampled actions are binary")
}

fn monte_carlo_regret(
    game: &SummGame,
    p: &MixedProfile,
    samples: u64,
    seed: u64,
) -> Result<MixedRegret> {
    if samples == 0 {
        return Err(input("Monte-Carlo regret needs at least one sample"));
    }
    let n = game.players();
    let s = game.summarization();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Welford accumulators for the per-sample payoff gap of each player.
    let mut mean = vec![0.0; n];
    let mut m2 = vec![0.0; n];
    for k in 1..=samples {
        let x = sample_profile(&mut rng, p);
        let at = s.evaluate(&x);
        for i in 0..n {
            let gap = game.payoff_unchecked(i, 1, s.substituted(&x, &at, i, 1))
                - game.payoff_unchecked(i, 0, s.substituted(&x, &at, i, 0));
            let d = gap - mean[i];
            mean[i] += d / k as f64;
            m2[i] += d * (gap - mean[i]);
        }
    }
    let probs = p.probs();
    let mut regrets = Vec::with_capacity(n);
    let mut std_errors = Vec::with_capacity(n);
    for i in 0..n {
        let gap = mean[i];
        regrets.push(regret_from_gap(probs[i], gap));
        // Gaps lie in [-1, 1]; with one sample fall back to that spread.
        let sd = if samples > 1 {
            (m2[i] / (samples - 1) as f64).sqrt()
        } else {
            1.0
        };
        let slope = if gap >= 0.0 { 1.0 - probs[i] } else { probs[i] };
        std_errors.push(slope * sd / (samples as f64).sqrt());
    }
    Ok(MixedRegret {
        regrets,
        std_errors: Some(std_errors),
    })
}
