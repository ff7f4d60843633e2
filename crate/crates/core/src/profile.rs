use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// A joint pure strategy: one binary action per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct PureProfile(Vec<u8>);

impl PureProfile {
    pub fn new(actions: Vec<u8>) -> Result<Self> {
        if actions.is_empty() {
            return Err(input("a profile needs at least one player"));
        }
        if let Some(pos) = actions.iter().position(|&a| a > 1) {
            return Err(input(format!(
                "action of player {pos} is {}, expected 0 or 1",
                actions[pos]
            )));
        }
        Ok(PureProfile(actions))
    }

    pub fn zeros(n: usize) -> Self {
        PureProfile(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        PureProfile(vec![1; n])
    }

    /// Decodes the `n` low bits of `index` so that profile order matches
    /// integer order: player 0 is the most significant bit.
    pub fn from_index(index: u64, n: usize) -> Self {
        PureProfile((0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn action(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn actions(&self) -> &[u8] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&a| a == 1).count()
    }

    /// Sets player `i` to action `b`.
    pub fn set(&mut self, i: usize, b: u8) {
        debug_assert!(b <= 1);
        self.0[i] = b;
    }

    /// The profile with player `i` switched to `b`.
    pub fn with(&self, i: usize, b: u8) -> Self {
        let mut out = self.clone();
        out.set(i, b);
        out
    }

    pub fn to_mixed(&self) -> MixedProfile {
        MixedProfile(self.0.iter().map(|&a| f64::from(a)).collect())
    }
}

impl TryFrom<Vec<u8>> for PureProfile {
    type Error = crate::Error;

    fn try_from(v: Vec<u8>) -> Result<Self> {
        PureProfile::new(v)
    }
}

impl From<PureProfile> for Vec<u8> {
    fn from(p: PureProfile) -> Self {
        p.0
    }
}

/// A joint mixed strategy. `probs[i]` is the probability that player `i`
/// plays action 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MixedProfile(Vec<f64>);

impl MixedProfile {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(input("a profile needs at least one player"));
        }
        if let Some(pos) = probs.iter().position(|p| !(0.0..=1.0).contains(p)) {
            return Err(input(format!(
                "probability of player {pos} is {}, expected a value in [0, 1]",
                probs[pos]
            )));
        }
        Ok(MixedProfile(probs))
    }

    pub fn uniform(n: usize, p: f64) -> Result<Self> {
        MixedProfile::new(vec![p; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    /// The embedded pure profile, if every entry is exactly 0 or 1.
    pub fn as_pure(&self) -> Option<PureProfile> {
        self.0
            .iter()
            .map(|&p| {
                if p == 0.0 {
                    Some(0)
                } else if p == 1.0 {
                    Some(1)
                } else {
                    None
                }
            })
            .collect::<Option<Vec<u8>>>()
            .map(PureProfile)
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        debug_assert!(probs.iter().all(|p| (0.0..=1.0).contains(p)));
        MixedProfile(probs)
    }
}

impl TryFrom<Vec<f64>> for MixedProfile {
    type Error = crate::Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        MixedProfile::new(v)
    }
}

impl From<MixedProfile> for Vec<f64> {
    fn from(p: MixedProfile) -> Self {
        p.0
    }
}

impl From<&PureProfile> for MixedProfile {
    fn from(p: &PureProfile) -> Self {
        p.to_mixed()
    }
}
