//! Named example games used throughout the tests and shipped samples.

use crate::error::Result;
use crate::game::SummGame;
use crate::payoff::PayoffFn;
use crate::summarization::Summarization;

/// Congestion ("bar") game under the voting summarization: going out pays
/// `1 - z`, staying home pays `z`, where `z` is the fraction going out.
pub fn bar(n: usize) -> Result<SummGame> {
    SummGame::symmetric(
        Summarization::mean(n)?,
        PayoffFn::affine(0.0, 1.0)?,
        PayoffFn::affine(1.0, -1.0)?,
    )
}

/// Consensus game: action 1 pays `z`, action 0 pays `1 - z`.
pub fn consensus(n: usize) -> Result<SummGame> {
    SummGame::symmetric(
        Summarization::mean(n)?,
        PayoffFn::affine(1.0, -1.0)?,
        PayoffFn::affine(0.0, 1.0)?,
    )
}

/// Every payoff is the same constant.
pub fn constant(n: usize, value: f64) -> Result<SummGame> {
    let f = PayoffFn::constant(value)?;
    SummGame::symmetric(Summarization::mean(n)?, f.clone(), f)
}

/// Bar game under an arbitrary summarization.
pub fn bar_with(summarization: Summarization) -> Result<SummGame> {
    SummGame::symmetric(
        summarization,
        PayoffFn::affine(0.0, 1.0)?,
        PayoffFn::affine(1.0, -1.0)?,
    )
}
