//! Ground-truth checks: exhaustive search for the best pure equilibrium and
//! independent revalidation of certificates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{CertifiedProfile, EquilibriumCertificate, RegretEvaluation};
use crate::error::{input, Error, Result};
use crate::game::SummGame;
use crate::profile::PureProfile;
use crate::regret::{max_regret, regret_mixed, regret_pure, RegretMode};

pub const BRUTE_FORCE_MAX_PLAYERS: usize = 22;

/// Absolute tolerance when comparing exactly recomputed regrets.
pub const EXACT_REGRET_TOLERANCE: f64 = 1e-9;

/// Standard errors allowed between sampled and recorded regrets.
pub const MONTE_CARLO_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceReport {
    pub best_profile: PureProfile,
    /// Smallest max-regret over all pure profiles.
    pub epsilon_star: f64,
    pub profiles_examined: u64,
}

/// Evaluates the max-regret of all `2^n` pure profiles and returns the
/// minimizer, lexicographically smallest among ties.
pub fn brute_min_epsilon(game: &SummGame) -> Result<BruteForceReport> {
    let n = game.players();
    if n > BRUTE_FORCE_MAX_PLAYERS {
        return Err(Error::Capability(format!(
            "exhaustive search is limited to n <= {BRUTE_FORCE_MAX_PLAYERS}, got {n}"
        )));
    }
    let total = 1u64 << n;
    let blocks = 512u64.min(total);
    let per_block = total / blocks;
    // Each block reports its best (regret, index); blocks are combined in
    // index order with a strict comparison, so ties keep the smaller index.
    let best_per_block: Vec<(f64, u64)> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut best = (f64::INFINITY, u64::MAX);
            for m in block * per_block..(block + 1) * per_block {
                let x = PureProfile::from_index(m, n);
                let r = max_regret(&regret_pure(game, &x).expect("arity matches"));
                if r < best.0 {
                    best = (r, m);
                }
            }
            best
        })
        .collect();
    let (epsilon_star, index) =
        best_per_block
            .into_iter()
            .fold(
                (f64::INFINITY, u64::MAX),
                |acc, b| if b.0 < acc.0 { b } else { acc },
            );
    Ok(BruteForceReport {
        best_profile: PureProfile::from_index(index, n),
        epsilon_star,
        profiles_examined: total,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub recomputed_regrets: Vec<f64>,
    pub recomputed_max: f64,
    /// Standard errors of the recomputation, if sampled.
    pub std_errors: Option<Vec<f64>>,
    pub violations: Vec<String>,
}

/// Recomputes a certificate's regrets from scratch and lists every
/// disagreement with what it records or claims.
///
/// `mode` selects how mixed profiles are re-evaluated; `None` reuses the
/// certificate's own evaluation settings. Pure profiles are always checked
/// exactly.
pub fn validate_certificate(
    game: &SummGame,
    cert: &EquilibriumCertificate,
    mode: Option<RegretMode>,
) -> Result<ValidationReport> {
    let n = game.players();
    if cert.profile.len() != n {
        return Err(input(format!(
            "certificate is for {} players but the game has {n}",
            cert.profile.len()
        )));
    }
    let mut violations = Vec::new();
    if cert.regrets.len() != n {
        violations.push(format!(
            "certificate lists {} regrets for {n} players",
            cert.regrets.len()
        ));
    }
    let cert_errors: Option<&[f64]> = match &cert.evaluation {
        RegretEvaluation::Exact => None,
        RegretEvaluation::MonteCarlo { std_errors, .. } => Some(std_errors),
    };

    let (recomputed, std_errors) = match &cert.profile {
        CertifiedProfile::Pure(x) => (regret_pure(game, x)?, None),
        CertifiedProfile::Mixed(p) => {
            let mode = mode.unwrap_or(match cert.evaluation {
                RegretEvaluation::Exact => RegretMode::Exact,
                RegretEvaluation::MonteCarlo { samples, seed, .. } => {
                    RegretMode::MonteCarlo { samples, seed }
                }
            });
            let r = regret_mixed(game, p, mode)?;
            (r.regrets, r.std_errors)
        }
    };

    let se_at =
        |errors: Option<&[f64]>, i: usize| errors.and_then(|e| e.get(i)).copied().unwrap_or(0.0);
    for (i, (&recorded, &fresh)) in cert.regrets.iter().zip(&recomputed).enumerate() {
        let a = se_at(cert_errors, i);
        let b = se_at(std_errors.as_deref(), i);
        let tolerance = EXACT_REGRET_TOLERANCE + MONTE_CARLO_SIGMAS * (a * a + b * b).sqrt();
        if !((recorded - fresh).abs() <= tolerance) {
            violations.push(format!(
                "player {i}: recorded regret {recorded} but recomputed {fresh} (tolerance {tolerance})"
            ));
        }
    }
    let recomputed_max = max_regret(&recomputed);
    let max_se = std_errors
        .as_deref()
        .map(|e| e.iter().copied().fold(0.0, f64::max))
        .unwrap_or(0.0);
    let claim_slack = EXACT_REGRET_TOLERANCE + MONTE_CARLO_SIGMAS * max_se;
    if !(recomputed_max <= cert.epsilon_claimed + claim_slack) {
        violations.push(format!(
            "max regret {recomputed_max} exceeds the claimed epsilon {}",
            cert.epsilon_claimed
        ));
    }
    Ok(ValidationReport {
        valid: violations.is_empty(),
        recomputed_regrets: recomputed,
        recomputed_max,
        std_errors,
        violations,
    })
}
