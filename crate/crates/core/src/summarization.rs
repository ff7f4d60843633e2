//! Population summarization functions and their influence bounds.

use std::fmt;
use std::sync::Arc;

use crate::error::{input, Error, Result};
use crate::profile::PureProfile;

/// Largest player count for which influence is computed by enumerating every
/// setting of the other players.
pub const EXACT_INFLUENCE_MAX_PLAYERS: usize = 20;

/// Slack accepted on `sum(weights) <= 1` for unnormalized weights.
const WEIGHT_SUM_SLACK: f64 = 1e-12;

pub type CustomEval = Arc<dyn Fn(&PureProfile) -> f64 + Send + Sync>;

/// A map from joint pure play to `[0, 1]`.
#[derive(Clone)]
pub enum Summarization {
    /// `S(x) = sum_i w_i x_i` with `w_i >= 0` and `sum w_i <= 1`.
    LinearWeighted { weights: Vec<f64> },
    /// The voting fraction `(1/n) sum_i x_i`.
    Mean { n: usize },
    /// Fraction of players playing the majority value.
    MajorityFraction { n: usize },
    /// An arbitrary evaluator with a declared influence bound.
    Custom {
        n: usize,
        eval: CustomEval,
        declared_influence: f64,
    },
}

impl fmt::Debug for Summarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summarization::LinearWeighted { weights } => f
                .debug_struct("LinearWeighted")
                .field("weights", weights)
                .finish(),
            Summarization::Mean { n } => f.debug_struct("Mean").field("n", n).finish(),
            Summarization::MajorityFraction { n } => {
                f.debug_struct("MajorityFraction").field("n", n).finish()
            }
            Summarization::Custom {
                n,
                declared_influence,
                ..
            } => f
                .debug_struct("Custom")
                .field("n", n)
                .field("declared_influence", declared_influence)
                .finish_non_exhaustive(),
        }
    }
}

/// Cached evaluation of `S` at a profile, used to get `S(x[i:b])` without a
/// full re-evaluation for the catalog variants.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Evaluated {
    pub value: f64,
    ones: usize,
}

impl Summarization {
    /// Linear summarization with nonnegative weights. With `normalize` the
    /// weights are rescaled to sum to one; otherwise their sum must not
    /// exceed one.
    pub fn linear_weighted(weights: Vec<f64>, normalize: bool) -> Result<Self> {
        if weights.is_empty() {
            return Err(input("linear summarization needs at least one weight"));
        }
        if let Some(pos) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(input(format!(
                "weight {pos} is {}, expected a finite nonnegative value",
                weights[pos]
            )));
        }
        let total: f64 = weights.iter().sum();
        let weights = if normalize {
            if total <= 0.0 {
                return Err(input("cannot normalize weights that sum to zero"));
            }
            weights.iter().map(|w| w / total).collect()
        } else {
            if total > 1.0 + WEIGHT_SUM_SLACK {
                return Err(input(format!(
                    "weights sum to {total}, which exceeds 1; set normalize to rescale them"
                )));
            }
            weights
        };
        Ok(Summarization::LinearWeighted { weights })
    }

    pub fn mean(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(input("player count must be at least 1"));
        }
        Ok(Summarization::Mean { n })
    }

    pub fn majority_fraction(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(input("player count must be at least 1"));
        }
        Ok(Summarization::MajorityFraction { n })
    }

    pub fn custom(
        n: usize,
        declared_influence: f64,
        eval: impl Fn(&PureProfile) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if n == 0 {
            return Err(input("player count must be at least 1"));
        }
        if !(0.0..=1.0).contains(&declared_influence) {
            return Err(input(format!(
                "declared influence {declared_influence} is outside [0, 1]"
            )));
        }
        Ok(Summarization::Custom {
            n,
            eval: Arc::new(eval),
            declared_influence,
        })
    }

    /// Number of players the function is defined over.
    pub fn arity(&self) -> usize {
        match self {
            Summarization::LinearWeighted { weights } => weights.len(),
            Summarization::Mean { n }
            | Summarization::MajorityFraction { n }
            | Summarization::Custom { n, .. } => *n,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(
            self,
            Summarization::LinearWeighted { .. } | Summarization::Mean { .. }
        )
    }

    /// Per-player weights of a linear summarization.
    pub fn weights(&self) -> Option<Vec<f64>> {
        match self {
            Summarization::LinearWeighted { weights } => Some(weights.clone()),
            Summarization::Mean { n } => Some(vec![1.0 / *n as f64; *n]),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Summarization::LinearWeighted { .. } => "linear_weighted",
            Summarization::Mean { .. } => "mean",
            Summarization::MajorityFraction { .. } => "majority_fraction",
            Summarization::Custom { .. } => "custom",
        }
    }

    fn check_arity(&self, len: usize) -> Result<()> {
        if len != self.arity() {
            return Err(input(format!(
                "profile has {len} players but the summarization expects {}",
                self.arity()
            )));
        }
        Ok(())
    }

    /// `S(x)`.
    pub fn eval(&self, x: &PureProfile) -> Result<f64> {
        self.check_arity(x.len())?;
        let value = self.eval_unchecked(x);
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Contract(format!(
                "summarization returned {value}, outside [0, 1]"
            )));
        }
        Ok(value)
    }

    pub(crate) fn eval_unchecked(&self, x: &PureProfile) -> f64 {
        match self {
            Summarization::LinearWeighted { weights } => {
                let s: f64 = weights
                    .iter()
                    .zip(x.actions())
                    .filter(|(_, &a)| a == 1)
                    .map(|(w, _)| w)
                    .sum();
                s.clamp(0.0, 1.0)
            }
            Summarization::Mean { n } => x.count_ones() as f64 / *n as f64,
            Summarization::MajorityFraction { n } => majority_fraction(x.count_ones(), *n),
            Summarization::Custom { eval, .. } => eval(x),
        }
    }

    pub(crate) fn evaluate(&self, x: &PureProfile) -> Evaluated {
        let ones = match self {
            Summarization::Mean { .. } | Summarization::MajorityFraction { .. } => x.count_ones(),
            _ => 0,
        };
        Evaluated {
            value: self.eval_unchecked(x),
            ones,
        }
    }

    /// `S(x[i:b])` given the cached evaluation of `S(x)`.
    pub(crate) fn substituted(&self, x: &PureProfile, at: &Evaluated, i: usize, b: u8) -> f64 {
        let current = x.action(i);
        if b == current {
            return at.value;
        }
        let ones = || if b == 1 { at.ones + 1 } else { at.ones - 1 };
        match self {
            Summarization::LinearWeighted { weights } => {
                let step = if b == 1 { weights[i] } else { -weights[i] };
                (at.value + step).clamp(0.0, 1.0)
            }
            Summarization::Mean { n } => ones() as f64 / *n as f64,
            Summarization::MajorityFraction { n } => majority_fraction(ones(), *n),
            Summarization::Custom { eval, .. } => eval(&x.with(i, b)),
        }
    }

    /// Influence of player `i`: the largest change in `S` that `i` can cause
    /// by switching action, over all plays of the other players.
    pub fn influence_of(&self, i: usize) -> Result<f64> {
        let n = self.arity();
        if i >= n {
            return Err(input(format!("player {i} out of range for {n} players")));
        }
        Ok(match self {
            Summarization::LinearWeighted { weights } => weights[i],
            Summarization::Mean { n } => 1.0 / *n as f64,
            // Symmetric in the players, so only the number of ones among the
            // others matters.
            Summarization::MajorityFraction { n } => (0..*n)
                .map(|others| {
                    (majority_fraction(others + 1, *n) - majority_fraction(others, *n)).abs()
                })
                .fold(0.0, f64::max),
            Summarization::Custom {
                declared_influence, ..
            } => {
                if n <= EXACT_INFLUENCE_MAX_PLAYERS {
                    self.enumerated_influence(i)?
                } else {
                    *declared_influence
                }
            }
        })
    }

    /// Influence of player `i` by enumerating all `2^(n-1)` settings of the
    /// other players.
    pub fn enumerated_influence(&self, i: usize) -> Result<f64> {
        let n = self.arity();
        if i >= n {
            return Err(input(format!("player {i} out of range for {n} players")));
        }
        if n > EXACT_INFLUENCE_MAX_PLAYERS {
            return Err(Error::Capability(format!(
                "exact influence needs n <= {EXACT_INFLUENCE_MAX_PLAYERS}, got {n}"
            )));
        }
        let mut best: f64 = 0.0;
        for m in 0..(1u64 << n) {
            let x = PureProfile::from_index(m, n);
            if x.action(i) == 1 {
                continue;
            }
            let off = self.eval(&x)?;
            let on = self.eval(&x.with(i, 1))?;
            best = best.max((on - off).abs());
        }
        Ok(best)
    }

    /// The influence bound `tau` used by the guarantees. Custom functions
    /// report their declared bound.
    pub fn tau(&self) -> Result<f64> {
        match self {
            Summarization::Custom {
                declared_influence, ..
            } => Ok(*declared_influence),
            Summarization::LinearWeighted { weights } => {
                Ok(weights.iter().copied().fold(0.0, f64::max))
            }
            Summarization::Mean { n } => Ok(1.0 / *n as f64),
            Summarization::MajorityFraction { .. } => self.influence_of(0),
        }
    }

    /// For a small custom function, confirms that the declared influence
    /// bounds every player's enumerated influence.
    pub fn check_declared_influence(&self) -> Result<()> {
        if let Summarization::Custom {
            n,
            declared_influence,
            ..
        } = self
        {
            for i in 0..*n {
                let actual = self.enumerated_influence(i)?;
                if actual > *declared_influence {
                    return Err(Error::Contract(format!(
                        "player {i} has influence {actual}, above the declared {declared_influence}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn majority_fraction(ones: usize, n: usize) -> f64 {
    ones.max(n - ones) as f64 / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(a: &[u8]) -> PureProfile {
        PureProfile::new(a.to_vec()).unwrap()
    }

    #[test]
    fn evaluates_catalog_examples() {
        let mean = Summarization::mean(4).unwrap();
        assert_eq!(mean.eval(&profile(&[1, 1, 0, 0])).unwrap(), 0.5);

        let maj = Summarization::majority_fraction(4).unwrap();
        assert_eq!(maj.eval(&profile(&[1, 1, 1, 0])).unwrap(), 0.75);

        let lin = Summarization::linear_weighted(vec![0.5, 0.3, 0.2], false).unwrap();
        assert!((lin.eval(&profile(&[1, 0, 1])).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn arity_mismatch_is_an_input_error() {
        let mean = Summarization::mean(3).unwrap();
        assert!(matches!(mean.eval(&profile(&[1, 0])), Err(Error::Input(_))));
    }

    #[test]
    fn weights_are_validated_or_normalized() {
        assert!(Summarization::linear_weighted(vec![0.7, 0.6], false).is_err());
        assert!(Summarization::linear_weighted(vec![0.5, -0.1], false).is_err());
        let s = Summarization::linear_weighted(vec![2.0, 6.0], true).unwrap();
        assert_eq!(s.weights().unwrap(), vec![0.25, 0.75]);
    }

    #[test]
    fn mean_influence_is_one_over_n() {
        let mean = Summarization::mean(10).unwrap();
        for i in 0..10 {
            assert_eq!(mean.influence_of(i).unwrap(), 0.1);
        }
        assert!(mean.influence_of(10).is_err());
    }

    #[test]
    fn constant_custom_has_zero_influence() {
        let s = Summarization::custom(5, 0.0, |_| 0.5).unwrap();
        for i in 0..5 {
            assert_eq!(s.influence_of(i).unwrap(), 0.0);
        }
        s.check_declared_influence().unwrap();
    }

    #[test]
    fn majority_influence_matches_enumeration() {
        for n in 1..=9 {
            let maj = Summarization::majority_fraction(n).unwrap();
            // Route the same function through the enumerating path.
            let brute = Summarization::custom(n, 1.0, move |x| {
                let ones = x.count_ones();
                ones.max(n - ones) as f64 / n as f64
            })
            .unwrap();
            for i in 0..n {
                assert_eq!(
                    maj.influence_of(i).unwrap(),
                    brute.enumerated_influence(i).unwrap(),
                    "n={n} i={i}"
                );
            }
        }
        // n = 3: the four settings of the other two players give changes
        // 1/3, 0, 0, 1/3.
        let maj = Summarization::majority_fraction(3).unwrap();
        assert!((maj.influence_of(1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn understated_custom_influence_is_caught() {
        let s = Summarization::custom(4, 0.1, |x| x.count_ones() as f64 / 4.0).unwrap();
        assert!(matches!(
            s.check_declared_influence(),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn substitution_matches_full_evaluation() {
        let cases = vec![
            Summarization::mean(5).unwrap(),
            Summarization::majority_fraction(5).unwrap(),
            Summarization::linear_weighted(vec![0.1, 0.2, 0.3, 0.15, 0.25], false).unwrap(),
        ];
        for s in &cases {
            for m in 0..32 {
                let x = PureProfile::from_index(m, 5);
                let at = s.evaluate(&x);
                for i in 0..5 {
                    for b in 0..=1 {
                        let direct = s.eval(&x.with(i, b)).unwrap();
                        assert!((s.substituted(&x, &at, i, b) - direct).abs() < 1e-15);
                    }
                }
            }
        }
    }
}
