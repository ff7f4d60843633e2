use serde::{Deserialize, Serialize};

use crate::profile::{MixedProfile, PureProfile};
use crate::regret::max_regret;

/// The profile a certificate speaks about.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifiedProfile {
    Pure(PureProfile),
    Mixed(MixedProfile),
}

impl CertifiedProfile {
    pub fn len(&self) -> usize {
        match self {
            CertifiedProfile::Pure(x) => x.len(),
            CertifiedProfile::Mixed(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_pure(&self) -> Option<&PureProfile> {
        match self {
            CertifiedProfile::Pure(x) => Some(x),
            CertifiedProfile::Mixed(_) => None,
        }
    }
}

/// Where the solver found its equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Crossing {
    /// `V(I_k)` lies inside `I_k`.
    Horizontal { interval: usize },
    /// `V` drops across `k alpha`; the answer is position `walk_position` of
    /// the bit-flip walk between the two best-response profiles.
    Vertical {
        interval: usize,
        walk_position: usize,
    },
    /// Produced by the learning dynamics.
    Learned,
}

/// How the regrets in a certificate were computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegretEvaluation {
    Exact,
    MonteCarlo {
        samples: u64,
        seed: u64,
        std_errors: Vec<f64>,
    },
}

/// A profile with its per-player regrets and the epsilon it claims.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumCertificate {
    pub profile: CertifiedProfile,
    pub epsilon_claimed: f64,
    pub regrets: Vec<f64>,
    pub evaluation: RegretEvaluation,
    pub crossing: Crossing,
}

impl EquilibriumCertificate {
    pub fn max_regret(&self) -> f64 {
        max_regret(&self.regrets)
    }

    /// Whether the recorded regrets respect the claim.
    pub fn within_claim(&self) -> bool {
        self.max_regret() <= self.epsilon_claimed
    }
}
