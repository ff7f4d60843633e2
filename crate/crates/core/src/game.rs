use crate::error::{input, Result};
use crate::payoff::PayoffFn;
use crate::summarization::Summarization;

/// An n-player two-action summarization game together with its influence
/// bound `tau` and derivative bound `rho`.
#[derive(Debug, Clone)]
pub struct SummGame {
    summarization: Summarization,
    payoffs: Vec<[PayoffFn; 2]>,
    tau: f64,
    rho: f64,
}

impl SummGame {
    /// Builds a game from a summarization and one `(F_0, F_1)` pair per
    /// player.
    pub fn new(summarization: Summarization, payoffs: Vec<(PayoffFn, PayoffFn)>) -> Result<Self> {
        let n = summarization.arity();
        if n == 0 {
            return Err(input("a game needs at least one player"));
        }
        if payoffs.len() != n {
            return Err(input(format!(
                "summarization is over {n} players but {} payoff pairs were given",
                payoffs.len()
            )));
        }
        let tau = summarization.tau()?;
        let payoffs: Vec<[PayoffFn; 2]> = payoffs.into_iter().map(|(f0, f1)| [f0, f1]).collect();
        let rho = payoffs
            .iter()
            .flatten()
            .map(PayoffFn::derivative_bound)
            .fold(0.0, f64::max);
        Ok(SummGame {
            summarization,
            payoffs,
            tau,
            rho,
        })
    }

    /// Every player uses the same payoff pair.
    pub fn symmetric(
        summarization: Summarization,
        action0: PayoffFn,
        action1: PayoffFn,
    ) -> Result<Self> {
        let n = summarization.arity();
        Self::new(summarization, vec![(action0, action1); n])
    }

    pub fn players(&self) -> usize {
        self.payoffs.len()
    }

    pub fn summarization(&self) -> &Summarization {
        &self.summarization
    }

    /// `F_b^i`.
    pub fn payoff_fn(&self, i: usize, b: u8) -> &PayoffFn {
        &self.payoffs[i][b as usize]
    }

    pub fn payoff_pairs(&self) -> &[[PayoffFn; 2]] {
        &self.payoffs
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `F_b^i(z)`.
    pub fn payoff(&self, i: usize, b: u8, z: f64) -> Result<f64> {
        if i >= self.players() {
            return Err(input(format!(
                "player {i} out of range for {} players",
                self.players()
            )));
        }
        if b > 1 {
            return Err(input(format!("action {b} is not 0 or 1")));
        }
        self.payoffs[i][b as usize].eval(z)
    }

    pub(crate) fn payoff_unchecked(&self, i: usize, b: u8, z: f64) -> f64 {
        self.payoffs[i][b as usize].eval_unchecked(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_are_derived_from_components() {
        let s = Summarization::linear_weighted(vec![0.5, 0.3, 0.2], false).unwrap();
        let game = SummGame::new(
            s,
            vec![
                (
                    PayoffFn::constant(0.5).unwrap(),
                    PayoffFn::affine(0.0, 1.0).unwrap(),
                ),
                (
                    PayoffFn::quadratic(0.0, 2.0, -1.0).unwrap(),
                    PayoffFn::constant(0.1).unwrap(),
                ),
                (
                    PayoffFn::affine(1.0, -0.5).unwrap(),
                    PayoffFn::constant(0.0).unwrap(),
                ),
            ],
        )
        .unwrap();
        assert_eq!(game.tau(), 0.5);
        assert_eq!(game.rho(), 4.0);
        assert_eq!(game.payoff(0, 1, 0.3).unwrap(), 0.3);
        assert!(game.payoff(0, 1, 1.3).is_err());
        assert!(game.payoff(3, 0, 0.3).is_err());
    }

    #[test]
    fn payoff_count_must_match_arity() {
        let s = Summarization::mean(3).unwrap();
        let f = PayoffFn::constant(0.5).unwrap();
        assert!(SummGame::new(s, vec![(f.clone(), f)]).is_err());
    }
}
