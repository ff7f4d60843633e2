//! Bounded-influence summarization games.
//!
//! In a summarization game each of `n` players picks an action in `{0, 1}`
//! and is paid `F_b^i(S(x))`, a private function of its own action and of a
//! population summary `S(x)` in `[0, 1]`. When no single player can move `S`
//! by more than `tau` and no payoff function has slope above `rho`, the
//! game has cheap approximate equilibria:
//!
//! * [`summ_nash`] computes a pure `(3 tau rho + epsilon)`-Nash equilibrium
//!   in time polynomial in `n` and `rho / epsilon`.
//! * [`run_summ_learn`] runs distributed smoothed best-response dynamics
//!   for linear summaries and certifies where they end up.
//! * [`brute_min_epsilon`] and [`validate_certificate`] recompute
//!   everything from scratch for small games.
//!
//! ```
//! use summgame::{catalog, summ_nash, regret_pure};
//!
//! let game = catalog::bar(10).unwrap();
//! let solution = summ_nash(&game, 0.2).unwrap();
//! let profile = solution.certificate.profile.as_pure().unwrap();
//! let worst = regret_pure(&game, profile).unwrap().into_iter().fold(0.0, f64::max);
//! assert!(worst <= 3.0 * game.tau() * game.rho() + 0.2);
//! ```

pub mod catalog;
mod certificate;
mod error;
pub mod format;
mod game;
pub mod grid;
pub mod learn;
pub mod oracle;
mod payoff;
mod profile;
pub mod random;
pub mod regret;
pub mod solver;
pub mod summarization;

pub use certificate::{CertifiedProfile, Crossing, EquilibriumCertificate, RegretEvaluation};
pub use error::{Error, Result};
pub use format::{parse_game, GameDocument};
pub use game::SummGame;
pub use grid::{discretize, make_grid, AlphaGrid, GameSteps, StepPayoff};
pub use learn::{broadcast_mean, learn_step, run_summ_learn, LearnConfig, LearnOutcome};
pub use oracle::{brute_min_epsilon, validate_certificate, BruteForceReport, ValidationReport};
pub use payoff::{PayoffFn, PayoffForm};
pub use profile::{MixedProfile, PureProfile};
pub use regret::{regret_mixed, regret_pure, MixedRegret, RegretMode};
pub use solver::{summ_nash, Solution, VTable};
pub use summarization::Summarization;
