//! Distributed smoothed best-response dynamics for linear summarization
//! games.
//!
//! Every step the mean `mu = S(p)` is broadcast, each player finds its
//! apparent best response on the step payoffs of the interval holding `mu`,
//! and moves its probability a fraction `beta` of the way there. With
//! `delta > 0` the run stops once no probability moved by more than
//! `delta`; with `delta = 0` it runs for a fixed number of steps.

use serde::{Deserialize, Serialize};

use crate::certificate::{CertifiedProfile, Crossing, EquilibriumCertificate, RegretEvaluation};
use crate::error::{input, Error, Result};
use crate::game::SummGame;
use crate::grid::{make_grid_capped, AlphaGrid, GameSteps, DEFAULT_MAX_INTERVALS};
use crate::profile::MixedProfile;
use crate::regret::{regret_mixed, RegretMode, EXACT_MIXED_MAX_PLAYERS};

/// Step cap used when `delta > 0` and no explicit cap is given. Runs that
/// settle into a two-interval oscillation never meet the stopping rule.
pub const DEFAULT_MAX_STEPS: u64 = 100_000;
pub const DEFAULT_REGRET_SAMPLES: u64 = 10_000;
pub const DEFAULT_INITIAL_PROB: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct LearnConfig {
    /// Target accuracy; fixes the grid as for the solver.
    pub epsilon: f64,
    /// Learning rate, strictly between 0 and alpha. Defaults to alpha / 2.
    pub beta: Option<f64>,
    /// Stopping threshold on the per-player update; 0 disables stopping.
    pub delta: f64,
    /// Hard step cap; required when `delta` is 0.
    pub max_steps: Option<u64>,
    /// Keep one trajectory record every this many steps.
    pub snapshot_every: u64,
    /// Store the full mixed profile in each kept record.
    pub store_profiles: bool,
    /// Starting profile; all players at 1/2 when absent.
    pub initial: Option<MixedProfile>,
    /// Samples for Monte-Carlo regret when the game is too large to enumerate.
    pub regret_samples: u64,
    pub seed: u64,
    pub max_intervals: usize,
}

impl LearnConfig {
    pub fn new(epsilon: f64, delta: f64) -> Self {
        LearnConfig {
            epsilon,
            beta: None,
            delta,
            max_steps: None,
            snapshot_every: 1,
            store_profiles: false,
            initial: None,
            regret_samples: DEFAULT_REGRET_SAMPLES,
            seed: 0,
            max_intervals: DEFAULT_MAX_INTERVALS,
        }
    }
}

/// Parameters after defaults and grid snapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedParameters {
    pub alpha: f64,
    pub intervals: usize,
    pub beta: f64,
    pub delta: f64,
    pub max_steps: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u64,
    /// Broadcast mean `S(p^t)`.
    pub mu: f64,
    pub interval: usize,
    /// `max_i |p_i^{t+1} - p_i^t|`.
    pub max_delta: f64,
    pub profile: Option<MixedProfile>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    Converged { steps: u64 },
    MaxSteps { steps: u64 },
}

impl Termination {
    pub fn steps(&self) -> u64 {
        match *self {
            Termination::Converged { steps } | Termination::MaxSteps { steps } => steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<StepRecord>,
    pub termination: Termination,
    pub final_profile: MixedProfile,
    pub final_mu: f64,
}

/// A maximal run of consecutive times with the mean in one interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Visit {
    pub interval: usize,
    pub start: u64,
    pub duration: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnDiagnostics {
    /// `sqrt(sum_i tau_i^2)`.
    pub psi_scale: f64,
    /// `rho * psi_scale * ln(1 / psi_scale)`. A scale indication only: the
    /// constant in front is unknown, so this is not a guarantee.
    pub psi_expression: f64,
    /// `rho tau + rho delta + rho alpha`, the computable part of the
    /// learner's error bound.
    pub explicit_bound: f64,
    pub visits: Vec<Visit>,
}

impl LearnDiagnostics {
    pub fn longest_visit(&self) -> u64 {
        self.visits.iter().map(|v| v.duration).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct LearnOutcome {
    pub parameters: ResolvedParameters,
    pub grid: AlphaGrid,
    pub trajectory: Trajectory,
    pub certificate: EquilibriumCertificate,
    pub diagnostics: LearnDiagnostics,
}

fn linear_weights(game: &SummGame) -> Result<Vec<f64>> {
    game.summarization().weights().ok_or_else(|| {
        Error::Capability(format!(
            "the learning dynamics need a linear summarization, got {}",
            game.summarization().kind()
        ))
    })
}

fn mean_of(game: &SummGame, weights: &[f64], probs: &[f64]) -> f64 {
    let mu = if matches!(game.summarization(), crate::Summarization::Mean { .. }) {
        probs.iter().sum::<f64>() / probs.len() as f64
    } else {
        weights.iter().zip(probs).map(|(w, p)| w * p).sum()
    };
    mu.clamp(0.0, 1.0)
}

/// Expected summary `sum_i w_i p_i` of a linear game.
pub fn broadcast_mean(game: &SummGame, p: &MixedProfile) -> Result<f64> {
    let weights = linear_weights(game)?;
    if p.len() != game.players() {
        return Err(input(format!(
            "profile has {} players but the game has {}",
            p.len(),
            game.players()
        )));
    }
    Ok(mean_of(game, &weights, p.probs()))
}

/// Moves every probability toward the apparent best response at interval
/// `k`; returns the new probabilities and the largest change.
fn advance(steps: &GameSteps, probs: &[f64], k: usize, beta: f64) -> (Vec<f64>, f64) {
    let mut max_delta: f64 = 0.0;
    let next = probs
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            let target = f64::from(steps.apparent_action(i, k));
            let moved = (q + beta * (target - q)).clamp(0.0, 1.0);
            max_delta = max_delta.max((moved - q).abs());
            moved
        })
        .collect();
    (next, max_delta)
}

fn check_beta(beta: f64, grid: AlphaGrid) -> Result<()> {
    if !(beta > 0.0 && beta < grid.alpha()) {
        return Err(input(format!(
            "learning rate {beta} must lie strictly between 0 and alpha = {}",
            grid.alpha()
        )));
    }
    Ok(())
}

/// One synchronous update `p' = (1 - beta) p + beta BR(mu)`.
pub fn learn_step(
    game: &SummGame,
    steps: &GameSteps,
    p: &MixedProfile,
    beta: f64,
) -> Result<MixedProfile> {
    let mu = broadcast_mean(game, p)?;
    if steps.players() != game.players() {
        return Err(input("step payoffs were built for a different game"));
    }
    check_beta(beta, steps.grid())?;
    let k = steps.grid().interval_of(mu)?;
    let (next, _) = advance(steps, p.probs(), k, beta);
    Ok(MixedProfile::from_raw(next))
}

struct VisitTracker {
    visits: Vec<Visit>,
    current: Option<Visit>,
}

impl VisitTracker {
    fn observe(&mut self, t: u64, k: usize) {
        match &mut self.current {
            Some(v) if v.interval == k => v.duration += 1,
            _ => {
                if let Some(v) = self.current.take() {
                    self.visits.push(v);
                }
                self.current = Some(Visit {
                    interval: k,
                    start: t,
                    duration: 1,
                });
            }
        }
    }

    fn finish(mut self) -> Vec<Visit> {
        if let Some(v) = self.current.take() {
            self.visits.push(v);
        }
        self.visits
    }
}

/// Runs the dynamics and certifies the final profile.
pub fn run_summ_learn(game: &SummGame, config: &LearnConfig) -> Result<LearnOutcome> {
    let weights = linear_weights(game)?;
    let n = game.players();
    let grid = make_grid_capped(config.epsilon, game.rho(), config.max_intervals)?;
    let beta = config.beta.unwrap_or(grid.alpha() / 2.0);
    check_beta(beta, grid)?;
    if !(config.delta >= 0.0) || !config.delta.is_finite() {
        return Err(input(format!(
            "delta must be finite and nonnegative, got {}",
            config.delta
        )));
    }
    let max_steps = match (config.delta == 0.0, config.max_steps) {
        (_, Some(0)) => return Err(input("max_steps must be positive")),
        (true, None) => return Err(input("delta = 0 never stops on its own; give max_steps")),
        (_, Some(m)) => m,
        (false, None) => DEFAULT_MAX_STEPS,
    };
    if config.snapshot_every == 0 {
        return Err(input("snapshot_every must be at least 1"));
    }
    if config.regret_samples == 0 {
        return Err(input("regret_samples must be at least 1"));
    }
    let initial = match &config.initial {
        Some(p) if p.len() != n => {
            return Err(input(format!(
                "initial profile has {} players but the game has {n}",
                p.len()
            )))
        }
        Some(p) => p.clone(),
        None => MixedProfile::uniform(n, DEFAULT_INITIAL_PROB)?,
    };

    let steps = GameSteps::new(game, grid);
    let mut probs: Vec<f64> = initial.probs().to_vec();
    let mut records = Vec::new();
    let mut tracker = VisitTracker {
        visits: Vec::new(),
        current: None,
    };
    let mut t: u64 = 0;
    let mut converged = false;
    let (termination, final_mu) = loop {
        let mu = mean_of(game, &weights, &probs);
        let k = grid.interval_of(mu)?;
        tracker.observe(t, k);
        if converged {
            break (Termination::Converged { steps: t }, mu);
        }
        if t >= max_steps {
            break (Termination::MaxSteps { steps: t }, mu);
        }
        let (next, max_delta) = advance(&steps, &probs, k, beta);
        if t % config.snapshot_every == 0 {
            records.push(StepRecord {
                t,
                mu,
                interval: k,
                max_delta,
                profile: config
                    .store_profiles
                    .then(|| MixedProfile::from_raw(probs.clone())),
            });
        }
        probs = next;
        t += 1;
        converged = config.delta > 0.0 && max_delta <= config.delta;
    };
    let final_profile = MixedProfile::from_raw(probs);

    let certificate = certify(game, &final_profile, config)?;
    let psi_scale = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    let psi_expression = if psi_scale > 0.0 {
        game.rho() * psi_scale * (1.0 / psi_scale).ln()
    } else {
        0.0
    };
    let rho = game.rho();
    let diagnostics = LearnDiagnostics {
        psi_scale,
        psi_expression,
        explicit_bound: rho * game.tau() + rho * config.delta + rho * grid.alpha(),
        visits: tracker.finish(),
    };
    Ok(LearnOutcome {
        parameters: ResolvedParameters {
            alpha: grid.alpha(),
            intervals: grid.len(),
            beta,
            delta: config.delta,
            max_steps,
            seed: config.seed,
        },
        grid,
        trajectory: Trajectory {
            records,
            termination,
            final_profile,
            final_mu,
        },
        certificate,
        diagnostics,
    })
}

/// Regrets of the final profile: exact enumeration for small games,
/// seeded Monte-Carlo otherwise. The claimed epsilon is the measured
/// maximum, widened by four standard errors per player when sampled.
fn certify(
    game: &SummGame,
    p: &MixedProfile,
    config: &LearnConfig,
) -> Result<EquilibriumCertificate> {
    if game.players() <= EXACT_MIXED_MAX_PLAYERS {
        let r = regret_mixed(game, p, RegretMode::Exact)?;
        Ok(EquilibriumCertificate {
            profile: CertifiedProfile::Mixed(p.clone()),
            epsilon_claimed: r.max(),
            regrets: r.regrets,
            evaluation: RegretEvaluation::Exact,
            crossing: Crossing::Learned,
        })
    } else {
        let mode = RegretMode::MonteCarlo {
            samples: config.regret_samples,
            seed: config.seed,
        };
        let r = regret_mixed(game, p, mode)?;
        let std_errors = r.std_errors.unwrap_or_default();
        let claimed = r
            .regrets
            .iter()
            .zip(&std_errors)
            .map(|(r, se)| r + 4.0 * se)
            .fold(0.0, f64::max);
        Ok(EquilibriumCertificate {
            profile: CertifiedProfile::Mixed(p.clone()),
            epsilon_claimed: claimed,
            regrets: r.regrets,
            evaluation: RegretEvaluation::MonteCarlo {
                samples: config.regret_samples,
                seed: config.seed,
                std_errors,
            },
            crossing: Crossing::Learned,
        })
    }
}
