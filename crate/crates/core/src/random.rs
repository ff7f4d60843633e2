//! Random catalog payoffs and games for randomized test suites.

use rand::Rng;

use crate::error::Result;
use crate::game::SummGame;
use crate::payoff::PayoffFn;
use crate::summarization::Summarization;

/// Keeps generated slopes strictly inside the requested bound despite
/// rounding in the slope computation.
const SLOPE_MARGIN: f64 = 1.0 - 1e-9;

/// A random catalog payoff with derivative bound at most `max_slope`.
pub fn random_payoff(rng: &mut impl Rng, max_slope: f64) -> PayoffFn {
    let m = max_slope * SLOPE_MARGIN;
    loop {
        let candidate = match rng.gen_range(0..4) {
            0 => PayoffFn::constant(rng.gen()),
            1 => {
                let b = rng.gen_range(-1.0..=1.0) * m.min(1.0);
                let a = if b >= 0.0 {
                    rng.gen_range(0.0..=1.0 - b)
                } else {
                    rng.gen_range(-b..=1.0)
                };
                PayoffFn::affine(a, b)
            }
            2 => {
                let c = rng.gen_range(-0.5..=0.5) * m;
                let b_max = (m - 2.0 * c.abs()).max(0.0);
                let b = rng.gen_range(-b_max..=b_max);
                // Range of b z + c z^2 on [0, 1].
                let mut probes = vec![0.0, b + c];
                if c != 0.0 {
                    let vertex = -b / (2.0 * c);
                    if (0.0..=1.0).contains(&vertex) {
                        probes.push(b * vertex + c * vertex * vertex);
                    }
                }
                let lo = probes.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = probes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if hi - lo > 1.0 {
                    continue;
                }
                PayoffFn::quadratic(rng.gen_range(-lo..=1.0 - hi), b, c)
            }
            _ => {
                let segments = rng.gen_range(1..=5);
                let mut zs: Vec<f64> = (0..segments - 1).map(|_| rng.gen()).collect();
                zs.push(0.0);
                zs.push(1.0);
                zs.sort_by(f64::total_cmp);
                zs.dedup();
                let mut points = vec![[0.0, rng.gen::<f64>()]];
                for w in zs.windows(2) {
                    let prev = points.last().unwrap()[1];
                    let reach = m * (w[1] - w[0]);
                    let lo = (prev - reach).max(0.0);
                    let hi = (prev + reach).min(1.0);
                    points.push([w[1], rng.gen_range(lo..=hi)]);
                }
                PayoffFn::piecewise_linear(points)
            }
        };
        match candidate {
            Ok(f) if f.derivative_bound() <= max_slope => return f,
            _ => continue,
        }
    }
}

/// Which summarization a random game uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomSummarization {
    Mean,
    /// Independent uniform weights, normalized to sum to one.
    LinearWeighted,
}

pub fn random_summarization(
    rng: &mut impl Rng,
    n: usize,
    kind: RandomSummarization,
) -> Result<Summarization> {
    match kind {
        RandomSummarization::Mean => Summarization::mean(n),
        RandomSummarization::LinearWeighted => {
            let weights = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
            Summarization::linear_weighted(weights, true)
        }
    }
}

/// A game with independent random payoffs for every player and action.
pub fn random_game(
    rng: &mut impl Rng,
    n: usize,
    kind: RandomSummarization,
    max_slope: f64,
) -> Result<SummGame> {
    let summarization = random_summarization(rng, n, kind)?;
    let payoffs = (0..n)
        .map(|_| (random_payoff(rng, max_slope), random_payoff(rng, max_slope)))
        .collect();
    SummGame::new(summarization, payoffs)
}
