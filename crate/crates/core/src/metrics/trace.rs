use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{NodeId, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolTag {
    /// Three-phase energy-efficient broadcast on `G(n, p)`.
    BroadcastRandom,
    /// Probability-`1/d` gossip with message joining on `G(n, p)`.
    GossipRandom,
    /// Broadcast on arbitrary graphs driven by a shared exponent sequence.
    BroadcastGeneral,
}

impl ProtocolTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolTag::BroadcastRandom => "broadcast-random",
            ProtocolTag::GossipRandom => "gossip-random",
            ProtocolTag::BroadcastGeneral => "broadcast-general",
        }
    }

    pub fn is_broadcast(self) -> bool {
        !matches!(self, ProtocolTag::GossipRandom)
    }
}

impl fmt::Display for ProtocolTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    /// The round cap or the protocol's schedule ran out first.
    CapExhausted,
}

/// Round layout of the three-phase random-graph broadcast.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseMarks {
    /// `T`: rounds `1..=T` form phase 1.
    pub phase1_rounds: u32,
    /// Whether round `T + 1` is the single phase-2 round.
    pub phase2: bool,
    pub phase3_rounds: u32,
}

impl PhaseMarks {
    pub fn phase2_round(&self) -> Option<u32> {
        self.phase2.then_some(self.phase1_rounds + 1)
    }

    pub fn total_rounds(&self) -> u32 {
        self.phase1_rounds + u32::from(self.phase2) + self.phase3_rounds
    }
}

/// What happened in one round. Counts refer to the state at the start of
/// the round except `transmitters`, `newly_informed` and `collisions`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u32,
    /// `|U_t|`.
    pub active: u32,
    /// `|Q_t|`.
    pub transmitters: u32,
    /// `N_t`. For gossip: nodes still missing at least one message.
    pub uninformed: u32,
    /// Nodes informed this round. For gossip: new (originator, node) deliveries.
    pub newly_informed: u64,
    /// Non-transmitting nodes with two or more transmitting in-neighbours.
    pub collisions: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transmitter_ids: Vec<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub tx_count: u32,
    /// Round in which the node was activated; 0 for initial sources.
    pub t_u: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub protocol: ProtocolTag,
    pub n: usize,
    pub source: Option<NodeId>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<PhaseMarks>,
    pub rounds: Vec<RoundRecord>,
    pub per_node: Vec<NodeRecord>,
    pub completion_round: Option<u32>,
    pub status: RunStatus,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Trace {
    pub fn completed(&self) -> bool {
        self.completion_round.is_some()
    }

    pub fn total_transmissions(&self) -> u64 {
        self.per_node.iter().map(|r| u64::from(r.tx_count)).sum()
    }

    pub fn max_tx(&self) -> u32 {
        self.per_node.iter().map(|r| r.tx_count).max().unwrap_or(0)
    }

    pub fn mean_tx(&self) -> f64 {
        if self.per_node.is_empty() {
            0.0
        } else {
            self.total_transmissions() as f64 / self.per_node.len() as f64
        }
    }

    pub fn round(&self, t: u32) -> Option<&RoundRecord> {
        t.checked_sub(1).and_then(|i| self.rounds.get(i as usize))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
