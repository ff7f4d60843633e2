//! Uniform alpha-grids over `[0, 1]` and the step payoffs built on them.
//!
//! Interval `k` is `[k/K, (k+1)/K)` for `k < K - 1`; the last interval
//! `[(K-1)/K, 1]` is closed. Endpoints are the floating-point values
//! `k as f64 / K as f64`, and membership is decided by exact comparison
//! against them.

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::game::SummGame;
use crate::payoff::PayoffFn;
use crate::profile::PureProfile;

/// Default cap on the number of intervals.
pub const DEFAULT_MAX_INTERVALS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaGrid {
    intervals: usize,
}

impl AlphaGrid {
    /// A grid with `intervals` equal cells, so `alpha = 1 / intervals`.
    pub fn new(intervals: usize) -> Result<Self> {
        if intervals == 0 {
            return Err(input("a grid needs at least one interval"));
        }
        Ok(AlphaGrid { intervals })
    }

    pub fn len(&self) -> usize {
        self.intervals
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn alpha(&self) -> f64 {
        1.0 / self.intervals as f64
    }

    /// Left endpoint `k * alpha` of interval `k`; `point(K)` is 1.
    pub fn point(&self, k: usize) -> f64 {
        k as f64 / self.intervals as f64
    }

    /// Whether `z` lies in interval `k`.
    pub fn contains(&self, k: usize, z: f64) -> bool {
        if k >= self.intervals || !(0.0..=1.0).contains(&z) {
            return false;
        }
        z >= self.point(k) && (k == self.intervals - 1 || z < self.point(k + 1))
    }

    /// Index of the interval containing `z`.
    pub fn interval_of(&self, z: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&z) {
            return Err(input(format!("{z} is outside [0, 1]")));
        }
        let last = self.intervals - 1;
        let mut k = ((z * self.intervals as f64).floor() as usize).min(last);
        while k > 0 && z < self.point(k) {
            k -= 1;
        }
        while k < last && z >= self.point(k + 1) {
            k += 1;
        }
        Ok(k)
    }
}

/// Grid for target accuracy `epsilon` and derivative bound `rho`: the target
/// resolution is `epsilon / (8 rho)`, snapped down to `1/K` for the smallest
/// integer `K` with `8 rho <= epsilon K`.
pub fn make_grid(epsilon: f64, rho: f64) -> Result<AlphaGrid> {
    make_grid_capped(epsilon, rho, DEFAULT_MAX_INTERVALS)
}

pub fn make_grid_capped(epsilon: f64, rho: f64, max_intervals: usize) -> Result<AlphaGrid> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(input(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(input(format!(
            "rho must be finite and nonnegative, got {rho}"
        )));
    }
    let needed = 8.0 * rho;
    if needed <= epsilon {
        return AlphaGrid::new(1);
    }
    let estimate = (needed / epsilon).ceil();
    if estimate > max_intervals as f64 + 1.0 {
        return Err(Error::Capability(format!(
            "epsilon {epsilon} with rho {rho} needs about {estimate} intervals, above the cap of {max_intervals}"
        )));
    }
    let mut k = (estimate as usize).max(1);
    while k > 1 && needed <= epsilon * (k - 1) as f64 {
        k -= 1;
    }
    while needed > epsilon * k as f64 {
        k += 1;
    }
    if k > max_intervals {
        return Err(Error::Capability(format!(
            "epsilon {epsilon} with rho {rho} needs {k} intervals, above the cap of {max_intervals}"
        )));
    }
    AlphaGrid::new(k)
}

/// Piecewise-constant approximation of a payoff function: on interval `k`
/// it takes the value `F(k alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPayoff {
    grid: AlphaGrid,
    values: Vec<f64>,
}

impl StepPayoff {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid(&self) -> AlphaGrid {
        self.grid
    }

    /// Value on interval `k`.
    pub fn at_interval(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        Ok(self.values[self.grid.interval_of(z)?])
    }
}

/// Evaluates `f` at the `K` left endpoints of the grid.
pub fn discretize(f: &PayoffFn, grid: AlphaGrid) -> StepPayoff {
    let values = (0..grid.len())
        .map(|k| f.eval_unchecked(grid.point(k)))
        .collect();
    StepPayoff { grid, values }
}

/// Step approximations of both payoff functions of every player.
#[derive(Debug, Clone)]
pub struct GameSteps {
    grid: AlphaGrid,
    steps: Vec<[StepPayoff; 2]>,
}

impl GameSteps {
    /// Discretizes every `F_b^i` on `grid`.
    pub fn new(game: &SummGame, grid: AlphaGrid) -> Self {
        let steps = game
            .payoff_pairs()
            .iter()
            .map(|[f0, f1]| [discretize(f0, grid), discretize(f1, grid)])
            .collect();
        GameSteps { grid, steps }
    }

    pub fn grid(&self) -> AlphaGrid {
        self.grid
    }

    pub fn players(&self) -> usize {
        self.steps.len()
    }

    /// The step approximation of `F_b^i`.
    pub fn step(&self, i: usize, b: u8) -> &StepPayoff {
        &self.steps[i][b as usize]
    }

    /// Apparent best response of player `i` when the summary lies in
    /// interval `k`; ties go to action 0.
    pub fn apparent_action(&self, i: usize, k: usize) -> u8 {
        let [f0, f1] = &self.steps[i];
        u8::from(f1.values[k] > f0.values[k])
    }

    /// The profile of apparent best responses for interval `k`.
    pub fn apparent_br_at(&self, k: usize) -> PureProfile {
        PureProfile::new(
            (0..self.players())
                .map(|i| self.apparent_action(i, k))
                .collect(),
        )
        .expect("apparent actions are binary")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_examples() {
        let g = make_grid(0.8, 1.0).unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g.alpha(), 0.1);

        let g = make_grid(0.5, 0.0).unwrap();
        assert_eq!((g.len(), g.alpha()), (1, 1.0));

        let g = make_grid(0.1, 3.0).unwrap();
        assert_eq!(g.len(), 240);
        assert_eq!(g.alpha(), 1.0 / 240.0);
    }

    #[test]
    fn grid_errors() {
        assert!(matches!(make_grid(0.0, 1.0), Err(Error::Input(_))));
        assert!(matches!(make_grid(-1.0, 1.0), Err(Error::Input(_))));
        match make_grid_capped(1e-3, 1.0, 1000) {
            Err(Error::Capability(msg)) => assert!(msg.contains("1000")),
            other => panic!("expected capability error, got {other:?}"),
        }
    }

    #[test]
    fn snapped_alpha_never_exceeds_target() {
        for &eps in &[0.01, 0.03, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0, 2.0] {
            for &rho in &[0.1, 0.5, 1.0, 1.5, 2.0, 3.0, 7.0] {
                let g = make_grid(eps, rho).unwrap();
                assert!(
                    8.0 * rho * g.alpha() <= eps * (1.0 + 1e-15),
                    "eps={eps} rho={rho}"
                );
                if g.len() > 1 {
                    // One interval fewer would miss the target.
                    assert!(8.0 * rho > eps * (g.len() - 1) as f64);
                }
            }
        }
    }

    #[test]
    fn interval_boundaries() {
        let g = AlphaGrid::new(4).unwrap();
        assert_eq!(g.interval_of(0.25).unwrap(), 1);
        assert_eq!(g.interval_of(1.0).unwrap(), 3);
        assert_eq!(g.interval_of(0.2499999).unwrap(), 0);
        assert_eq!(g.interval_of(0.0).unwrap(), 0);
        assert!(g.interval_of(1.01).is_err());
        assert!(g.interval_of(-0.01).is_err());
    }

    #[test]
    fn interval_endpoints_are_exact_for_awkward_counts() {
        for k_count in [3usize, 7, 10, 49, 240, 1000] {
            let g = AlphaGrid::new(k_count).unwrap();
            for k in 0..k_count {
                let left = g.point(k);
                assert_eq!(g.interval_of(left).unwrap(), k);
                assert!(g.contains(k, left));
                if k > 0 {
                    assert_eq!(
                        g.interval_of(f64::from_bits(left.to_bits() - 1)).unwrap(),
                        k - 1
                    );
                }
            }
        }
    }

    #[test]
    fn discretize_examples() {
        let g = AlphaGrid::new(4).unwrap();
        let id = PayoffFn::affine(0.0, 1.0).unwrap();
        assert_eq!(discretize(&id, g).values(), &[0.0, 0.25, 0.5, 0.75]);

        let c = PayoffFn::constant(0.7).unwrap();
        assert!(discretize(&c, g).values().iter().all(|&v| v == 0.7));

        let down = PayoffFn::affine(1.0, -1.0).unwrap();
        assert_eq!(discretize(&down, g).eval(0.6).unwrap(), 0.5);
    }
}
