//! Pure approximate Nash equilibria by locating where the interval
//! best-response map `V` crosses the diagonal.
//!
//! For each alpha-interval `I_k`, every player best-responds to the step
//! payoffs at `k alpha`, giving a profile `BR(I_k)` and a value
//! `V(I_k) = S(BR(I_k))`. Either some `V(I_k)` falls inside `I_k`
//! (horizontal crossing, and `BR(I_k)` is the answer), or `V` drops across
//! some grid point `k alpha` between consecutive intervals (vertical
//! crossing). In the vertical case the answer lies on the walk that flips,
//! one at a time and in ascending player order, the bits where `BR(I_{k-1})`
//! and `BR(I_k)` differ: the walk position whose summary is nearest to
//! `k alpha`, which is within `tau` of it.
//!
//! The returned profile is a `(3 tau rho + epsilon)`-Nash equilibrium.

use rayon::prelude::*;

use crate::certificate::{CertifiedProfile, Crossing, EquilibriumCertificate, RegretEvaluation};
use crate::error::{input, Error, Result};
use crate::game::SummGame;
use crate::grid::{make_grid_capped, AlphaGrid, GameSteps, DEFAULT_MAX_INTERVALS};
use crate::profile::PureProfile;
use crate::regret::regret_pure;

/// Per-interval apparent best responses and their summary values.
#[derive(Debug, Clone, PartialEq)]
pub struct VTable {
    grid: AlphaGrid,
    br: Vec<PureProfile>,
    values: Vec<f64>,
}

impl VTable {
    pub fn build(game: &SummGame, steps: &GameSteps) -> Result<Self> {
        if steps.players() != game.players() {
            return Err(input("step payoffs were built for a different game"));
        }
        let grid = steps.grid();
        let s = game.summarization();
        let (br, values): (Vec<PureProfile>, Vec<f64>) = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let x = steps.apparent_br_at(k);
                let v = s.eval(&x)?;
                Ok((x, v))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        Ok(VTable { grid, br, values })
    }

    /// Assembles a table from parts, checking only shapes and ranges.
    pub fn from_parts(grid: AlphaGrid, br: Vec<PureProfile>, values: Vec<f64>) -> Result<Self> {
        if br.len() != grid.len() || values.len() != grid.len() {
            return Err(input(format!(
                "a grid of {} intervals needs that many profiles and values",
                grid.len()
            )));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(input("V values must lie in [0, 1]"));
        }
        Ok(VTable { grid, br, values })
    }

    pub fn grid(&self) -> AlphaGrid {
        self.grid
    }

    pub fn br(&self, k: usize) -> &PureProfile {
        &self.br[k]
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(k alpha, V(I_k))` rows for plotting.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (self.grid.point(k), v))
    }
}

/// Apparent best responses for interval `k`, ties to action 0.
pub fn apparent_br_at(steps: &GameSteps, k: usize) -> Result<PureProfile> {
    if k >= steps.grid().len() {
        return Err(input(format!(
            "interval {k} out of range for {} intervals",
            steps.grid().len()
        )));
    }
    Ok(steps.apparent_br_at(k))
}

pub fn build_v_table(game: &SummGame, grid: AlphaGrid) -> Result<VTable> {
    VTable::build(game, &GameSteps::new(game, grid))
}

/// Smallest `k` with `V(I_k)` inside `I_k`.
pub fn find_horizontal(vt: &VTable) -> Option<usize> {
    (0..vt.grid.len()).find(|&k| vt.grid.contains(k, vt.values[k]))
}

/// Smallest `k >= 1` with `V(I_{k-1}) >= k alpha > V(I_k)`.
///
/// When no interval holds its own value, `V(I_0) >= alpha` and
/// `V(I_{K-1}) < 1 - alpha`, so such a `k` exists.
pub fn find_vertical(vt: &VTable) -> Option<usize> {
    (1..vt.grid.len()).find(|&k| {
        let mark = vt.grid.point(k);
        vt.values[k - 1] >= mark && mark > vt.values[k]
    })
}

/// Result of the bit-flip walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkOutcome {
    /// The crossing interval `k`.
    pub interval: usize,
    /// Number of flips applied to the starting profile.
    pub position: usize,
    pub profile: PureProfile,
    /// Summary value of `profile`.
    pub value: f64,
}

/// Walks from `from` to `to`, flipping differing bits in ascending player
/// order, and returns `(position, profile, S(profile))` for the position
/// whose summary is nearest to `target` (earliest on ties). Fails if the
/// endpoints coincide or the nearest value is farther than `tolerance`.
pub fn walk_between(
    game: &SummGame,
    from: &PureProfile,
    to: &PureProfile,
    target: f64,
    tolerance: f64,
) -> Result<(usize, PureProfile, f64)> {
    if from.len() != game.players() || to.len() != game.players() {
        return Err(input("walk endpoints do not match the game's player count"));
    }
    if from == to {
        return Err(Error::Contract(
            "vertical crossing between identical best-response profiles; \
             the game's influence or derivative bounds are inconsistent"
                .into(),
        ));
    }
    let s = game.summarization();
    let mut x = from.clone();
    let v0 = s.eval(&x)?;
    let mut best = (0usize, x.clone(), v0);
    let mut position = 0;
    for i in 0..x.len() {
        if x.action(i) == to.action(i) {
            continue;
        }
        x.set(i, to.action(i));
        position += 1;
        let v = s.eval(&x)?;
        if (v - target).abs() < (best.2 - target).abs() {
            best = (position, x.clone(), v);
        }
    }
    if (best.2 - target).abs() > tolerance {
        return Err(Error::Contract(format!(
            "no walk position has summary within {tolerance} of {target} (nearest {}); \
             the declared influence bound is too small",
            best.2
        )));
    }
    Ok(best)
}

/// Locates a vertical crossing and resolves it with the bit-flip walk.
pub fn find_vertical_and_walk(game: &SummGame, vt: &VTable) -> Result<WalkOutcome> {
    let k = find_vertical(vt).ok_or_else(|| {
        Error::Contract(
            "V has neither a horizontal nor a vertical crossing; \
             the summarization left [0, 1] or the bounds are inconsistent"
                .into(),
        )
    })?;
    let (position, profile, value) =
        walk_between(game, vt.br(k - 1), vt.br(k), vt.grid.point(k), game.tau())?;
    Ok(WalkOutcome {
        interval: k,
        position,
        profile,
        value,
    })
}

/// Output of the solver: the certificate plus the grid and table it used.
#[derive(Debug, Clone)]
pub struct Solution {
    pub certificate: EquilibriumCertificate,
    pub grid: AlphaGrid,
    pub v_table: VTable,
}

/// Computes a pure `(3 tau rho + epsilon)`-Nash equilibrium.
pub fn summ_nash(game: &SummGame, epsilon: f64) -> Result<Solution> {
    summ_nash_capped(game, epsilon, DEFAULT_MAX_INTERVALS)
}

pub fn summ_nash_capped(game: &SummGame, epsilon: f64, max_intervals: usize) -> Result<Solution> {
    let grid = make_grid_capped(epsilon, game.rho(), max_intervals)?;
    let v_table = build_v_table(game, grid)?;
    let (profile, crossing) = match find_horizontal(&v_table) {
        Some(k) => (v_table.br(k).clone(), Crossing::Horizontal { interval: k }),
        None => {
            let walk = find_vertical_and_walk(game, &v_table)?;
            (
                walk.profile,
                Crossing::Vertical {
                    interval: walk.interval,
                    walk_position: walk.position,
                },
            )
        }
    };
    let regrets = regret_pure(game, &profile)?;
    let certificate = EquilibriumCertificate {
        profile: CertifiedProfile::Pure(profile),
        epsilon_claimed: 3.0 * game.tau() * game.rho() + epsilon,
        regrets,
        evaluation: RegretEvaluation::Exact,
        crossing,
    };
    Ok(Solution {
        certificate,
        grid,
        v_table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn quarter_grid() -> AlphaGrid {
        AlphaGrid::new(4).unwrap()
    }

    /// V computed straight from the payoff formulas, independent of the step
    /// tables: at each grid point a player picks 1 only if it pays strictly
    /// more.
    fn v_oracle(
        n: usize,
        f0: impl Fn(f64) -> f64,
        f1: impl Fn(f64) -> f64,
        k_count: usize,
    ) -> Vec<f64> {
        (0..k_count)
            .map(|k| {
                let z = k as f64 / k_count as f64;
                let ones = if f1(z) > f0(z) { n } else { 0 };
                ones as f64 / n as f64
            })
            .collect()
    }

    #[test]
    fn apparent_br_examples() {
        let c = catalog::constant(3, 0.5).unwrap();
        let steps = GameSteps::new(&c, quarter_grid());
        assert_eq!(apparent_br_at(&steps, 2).unwrap(), PureProfile::zeros(3));

        let bar = catalog::bar(4).unwrap();
        let steps = GameSteps::new(&bar, quarter_grid());
        assert_eq!(apparent_br_at(&steps, 0).unwrap(), PureProfile::ones(4));
        // F_1(0.5) = F_0(0.5) = 0.5: tie goes to 0.
        assert_eq!(apparent_br_at(&steps, 2).unwrap(), PureProfile::zeros(4));
        assert!(apparent_br_at(&steps, 4).is_err());
    }

    #[test]
    fn v_table_examples() {
        let consensus = catalog::consensus(4).unwrap();
        let vt = build_v_table(&consensus, quarter_grid()).unwrap();
        let oracle = v_oracle(4, |z| 1.0 - z, |z| z, 4);
        assert_eq!(vt.values(), oracle.as_slice());
        assert_eq!(vt.values(), &[0.0, 0.0, 0.0, 1.0]);

        let bar = catalog::bar(4).unwrap();
        let vt = build_v_table(&bar, quarter_grid()).unwrap();
        let oracle = v_oracle(4, |z| z, |z| 1.0 - z, 4);
        assert_eq!(vt.values(), oracle.as_slice());
        assert_eq!(vt.values(), &[1.0, 1.0, 0.0, 0.0]);

        let c = catalog::constant(4, 0.2).unwrap();
        let vt = build_v_table(&c, quarter_grid()).unwrap();
        assert!(vt.values().iter().all(|&v| v == vt.value(0)));
    }

    #[test]
    fn horizontal_examples() {
        let bar = build_v_table(&catalog::bar(4).unwrap(), quarter_grid()).unwrap();
        assert_eq!(find_horizontal(&bar), None);

        // V(I_0) = 0 lies in [0, 0.25).
        let consensus = build_v_table(&catalog::consensus(4).unwrap(), quarter_grid()).unwrap();
        assert_eq!(find_horizontal(&consensus), Some(0));

        // Closed last interval holds 1.
        let vt = VTable::from_parts(
            quarter_grid(),
            vec![PureProfile::ones(2); 4],
            vec![1.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        assert_eq!(find_horizontal(&vt), Some(3));

        let c = build_v_table(&catalog::constant(4, 0.5).unwrap(), quarter_grid()).unwrap();
        assert_eq!(find_horizontal(&c), Some(0));
    }

    /// All walk positions and their summaries, built by hand.
    fn walk_values(
        from: &PureProfile,
        to: &PureProfile,
        s: impl Fn(&PureProfile) -> f64,
    ) -> Vec<(PureProfile, f64)> {
        let mut out = vec![(from.clone(), s(from))];
        let mut x = from.clone();
        for i in 0..x.len() {
            if x.action(i) != to.action(i) {
                x.set(i, to.action(i));
                out.push((x.clone(), s(&x)));
            }
        }
        out
    }

    #[test]
    fn bar4_vertical_walk() {
        let game = catalog::bar(4).unwrap();
        let vt = build_v_table(&game, quarter_grid()).unwrap();
        let walk = find_vertical_and_walk(&game, &vt).unwrap();
        assert_eq!(walk.interval, 2);

        let values = walk_values(&PureProfile::ones(4), &PureProfile::zeros(4), |x| {
            x.count_ones() as f64 / 4.0
        });
        let svals: Vec<f64> = values.iter().map(|(_, v)| *v).collect();
        assert_eq!(svals, vec![1.0, 0.75, 0.5, 0.25, 0.0]);
        // Nearest to k alpha = 0.5 is position 2.
        assert_eq!(walk.position, 2);
        assert_eq!(walk.profile.actions(), &[0, 0, 1, 1]);
        assert_eq!(walk.value, 0.5);

        let regrets = regret_pure(&game, &walk.profile).unwrap();
        let bound = 3.0 * game.tau() * game.rho() + 6.0 * game.rho() * 0.25;
        assert!(regrets.iter().all(|&r| r <= bound));
        assert!(regrets.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn bar100_walk_lands_on_half() {
        let game = catalog::bar(100).unwrap();
        let vt = build_v_table(&game, quarter_grid()).unwrap();
        let walk = find_vertical_and_walk(&game, &vt).unwrap();
        assert_eq!(walk.interval, 2);
        assert_eq!(walk.position, 50);
        assert_eq!(walk.profile.count_ones(), 50);
        assert_eq!(walk.value, 0.5);
        let max = crate::regret::max_regret(&regret_pure(&game, &walk.profile).unwrap());
        assert!(max <= 3.0 * 0.01 + 6.0 * 0.25);
    }

    #[test]
    fn degenerate_walk_is_a_contract_error() {
        let game = catalog::bar(4).unwrap();
        let x = PureProfile::ones(4);
        assert!(matches!(
            walk_between(&game, &x, &x, 0.5, game.tau()),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn walk_beyond_tolerance_is_a_contract_error() {
        let game = catalog::bar(4).unwrap();
        // Endpoints 1.0 and 0.75 never come within 0.1 of 0.5.
        let from = PureProfile::ones(4);
        let to = PureProfile::new(vec![0, 1, 1, 1]).unwrap();
        assert!(matches!(
            walk_between(&game, &from, &to, 0.5, 0.1),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn summ_nash_examples() {
        let bar = catalog::bar(4).unwrap();
        let sol = summ_nash(&bar, 2.0).unwrap();
        assert_eq!(sol.grid.len(), 4);
        assert_eq!(sol.certificate.epsilon_claimed, 3.0 * 0.25 + 2.0);
        assert!(sol.certificate.within_claim());
        assert_eq!(
            sol.certificate.crossing,
            Crossing::Vertical {
                interval: 2,
                walk_position: 2
            }
        );

        let consensus = catalog::consensus(4).unwrap();
        let sol = summ_nash(&consensus, 0.5).unwrap();
        assert!(sol.certificate.regrets.iter().all(|&r| r == 0.0));
        assert!(matches!(
            sol.certificate.crossing,
            Crossing::Horizontal { .. }
        ));

        let c = catalog::constant(6, 0.4).unwrap();
        let sol = summ_nash(&c, 0.1).unwrap();
        assert_eq!(
            sol.certificate.profile.as_pure().unwrap(),
            &PureProfile::zeros(6)
        );
        assert!(sol.certificate.regrets.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn summ_nash_propagates_grid_errors() {
        let bar = catalog::bar(4).unwrap();
        assert!(matches!(summ_nash(&bar, 0.0), Err(Error::Input(_))));
        assert!(matches!(
            summ_nash_capped(&bar, 0.001, 10),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn solver_is_deterministic() {
        let game = catalog::bar(37).unwrap();
        let a = summ_nash(&game, 0.3).unwrap();
        let b = summ_nash(&game, 0.3).unwrap();
        assert_eq!(a.certificate, b.certificate);
        assert_eq!(a.v_table, b.v_table);
    }
}
