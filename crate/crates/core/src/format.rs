//! Game definition documents.
//!
//! A game file is a JSON object:
//!
//! ```json
//! {
//!   "players": 2,
//!   "summarization": { "type": "linear_weighted", "weights": [0.6, 0.4] },
//!   "payoffs": [
//!     { "action0": { "type": "constant", "value": 0.5 },
//!       "action1": { "type": "affine", "a": 0.0, "b": 1.0 } },
//!     { "action0": { "type": "quadratic", "a": 0.0, "b": 2.0, "c": -1.0 },
//!       "action1": { "type": "piecewise_linear", "points": [[0, 1], [0.5, 0.2], [1, 0.6]] } }
//!   ]
//! }
//! ```
//!
//! `summarization.type` is one of `mean`, `majority_fraction` or
//! `linear_weighted` (with `weights` and an optional `normalize` flag).
//! Custom summarizations have no file form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::SummGame;
use crate::payoff::PayoffFn;
use crate::summarization::Summarization;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SummarizationSpec {
    Mean,
    MajorityFraction,
    LinearWeighted {
        weights: Vec<f64>,
        #[serde(default)]
        normalize: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffPair {
    pub action0: PayoffFn,
    pub action1: PayoffFn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub players: usize,
    pub summarization: SummarizationSpec,
    pub payoffs: Vec<PayoffPair>,
}

fn parse_error(path: &str, reason: impl ToString) -> Error {
    Error::Parse {
        path: path.to_string(),
        reason: reason.to_string(),
    }
}

impl GameDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            parse_error(&path, e.into_inner())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game documents always serialize")
    }

    pub fn into_game(self) -> Result<SummGame> {
        let n = self.players;
        if n == 0 {
            return Err(parse_error("players", "must be at least 1"));
        }
        if self.payoffs.len() != n {
            return Err(parse_error(
                "payoffs",
                format!("expected {n} payoff pairs, found {}", self.payoffs.len()),
            ));
        }
        let summarization = match self.summarization {
            SummarizationSpec::Mean => Summarization::mean(n)?,
            SummarizationSpec::MajorityFraction => Summarization::majority_fraction(n)?,
            SummarizationSpec::LinearWeighted { weights, normalize } => {
                if weights.len() != n {
                    return Err(parse_error(
                        "summarization.weights",
                        format!("expected {n} weights, found {}", weights.len()),
                    ));
                }
                Summarization::linear_weighted(weights, normalize)
                    .map_err(|e| parse_error("summarization.weights", e))?
            }
        };
        let pairs = self
            .payoffs
            .into_iter()
            .map(|p| (p.action0, p.action1))
            .collect();
        SummGame::new(summarization, pairs)
    }

    pub fn from_game(game: &SummGame) -> Result<Self> {
        let summarization = match game.summarization() {
            Summarization::Mean { .. } => SummarizationSpec::Mean,
            Summarization::MajorityFraction { .. } => SummarizationSpec::MajorityFraction,
            Summarization::LinearWeighted { weights } => SummarizationSpec::LinearWeighted {
                weights: weights.clone(),
                normalize: false,
            },
            Summarization::Custom { .. } => {
                return Err(Error::Capability(
                    "custom summarizations cannot be written to a game file".into(),
                ))
            }
        };
        Ok(GameDocument {
            players: game.players(),
            summarization,
            payoffs: game
                .payoff_pairs()
                .iter()
                .map(|[f0, f1]| PayoffPair {
                    action0: f0.clone(),
                    action1: f1.clone(),
                })
                .collect(),
        })
    }
}

/// Parses and validates a game file.
pub fn parse_game(text: &str) -> Result<SummGame> {
    GameDocument::from_json(text)?.into_game()
}
