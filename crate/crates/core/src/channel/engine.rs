use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Channel;
use crate::metrics::{NodeRecord, PhaseMarks, ProtocolTag, RoundRecord, RunStatus, Trace};
use crate::netgraph::DirectedGraph;
use crate::{Error, NodeId, Result};

/// Random stream type handed to protocols.
pub type NodeRng = ChaCha8Rng;

/// Stream index of the randomness shared by all nodes. Node `i` draws from
/// stream `i + 1` of the same seed.
pub const SHARED_STREAM: u64 = 0;

/// The ChaCha stream `stream` under key `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> NodeRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Uninformed,
    Active,
    /// Informed and retired; never transmits again.
    Passive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub status: Status,
    /// Round in which the node left `Uninformed` (0 for sources).
    pub activated: Option<u32>,
    pub tx_count: u32,
}

impl NodeState {
    pub const fn new() -> Self {
        Self {
            status: Status::Uninformed,
            activated: None,
            tx_count: 0,
        }
    }

    /// Uninformed -> active. Returns whether the node was newly activated.
    pub fn activate(&mut self, round: u32) -> bool {
        if self.status == Status::Uninformed {
            self.status = Status::Active;
            self.activated = Some(round);
            true
        } else {
            false
        }
    }

    pub fn retire(&mut self) {
        if self.status == Status::Active {
            self.status = Status::Passive;
        }
    }

    pub fn is_active(&self) -> bool {
        self.status == Status::Active
    }

    pub fn is_informed(&self) -> bool {
        self.status != Status::Uninformed
    }
}

impl Default for NodeState {
    fn default() -> Self {
        Self::new()
    }
}

/// Per-node behaviour plugged into [`run`].
///
/// Within a round the engine calls `begin_round`, then `decide` for every
/// node, `after_transmit` for each transmitter, `payload` for each
/// transmitter, `deliver` for each receiver and finally `end_round` for every
/// node. `decide` may only look at its own node and its private stream.
pub trait Protocol {
    type Message;

    fn tag(&self) -> ProtocolTag;

    fn source(&self) -> Option<NodeId> {
        None
    }

    /// Sets up initial states, typically activating the source.
    fn init(&mut self, g: &DirectedGraph, states: &mut [NodeState]) -> Result<()>;

    /// Last round of the protocol's own schedule, if it has one.
    fn last_round(&self) -> Option<u32> {
        None
    }

    /// Hook for common randomness drawn once per round.
    fn begin_round(&mut self, _round: u32, _shared: &mut NodeRng) {}

    fn decide(&self, node: NodeId, state: &NodeState, round: u32, rng: &mut NodeRng) -> bool;

    fn after_transmit(&self, _state: &mut NodeState, _round: u32) {}

    fn payload(&self, node: NodeId) -> Self::Message;

    /// Handles a clean reception; returns the number of new deliveries.
    fn deliver(&mut self, node: NodeId, state: &mut NodeState, msg: &Self::Message, round: u32)
        -> u64;

    fn end_round(&self, _node: NodeId, _state: &mut NodeState, _round: u32) {}

    /// `N_t`: nodes still waiting for information.
    fn pending(&self, states: &[NodeState]) -> usize {
        states.iter().filter(|s| !s.is_informed()).count()
    }

    fn is_complete(&self, states: &[NodeState]) -> bool {
        self.pending(states) == 0
    }

    /// True when no node can ever transmit again.
    fn quiescent(&self, states: &[NodeState]) -> bool {
        !states.iter().any(NodeState::is_active)
    }

    fn phases(&self) -> Option<PhaseMarks> {
        None
    }

    fn warnings(&self) -> Vec<String> {
        Vec::new()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub round_cap: u32,
    /// Stop as soon as the observer sees completion instead of running the
    /// protocol's schedule out.
    pub stop_at_completion: bool,
    pub record_transmitters: bool,
}

impl RunConfig {
    pub fn new(seed: u64, round_cap: u32) -> Self {
        Self {
            seed,
            round_cap,
            stop_at_completion: false,
            record_transmitters: true,
        }
    }

    pub fn stop_at_completion(mut self, stop: bool) -> Self {
        self.stop_at_completion = stop;
        self
    }

    pub fn record_transmitters(mut self, record: bool) -> Self {
        self.record_transmitters = record;
        self
    }
}

/// Runs `protocol` on `g` until its schedule ends, it goes quiet, it
/// completes (when asked to stop there) or `cfg.round_cap` is reached.
///
/// Completion is judged by an omniscient observer and never fed back to
/// the nodes. The result is a pure function of `(g, protocol, cfg)`.
pub fn run<P: Protocol>(g: &DirectedGraph, protocol: &mut P, cfg: &RunConfig) -> Result<Trace> {
    if cfg.round_cap == 0 {
        return Err(Error::InvalidConfig("round cap must be at least 1".into()));
    }
    let n = g.n();
    let mut states = vec![NodeState::new(); n];
    protocol.init(g, &mut states)?;

    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut shared = base.clone();
    shared.set_stream(SHARED_STREAM);
    let mut rngs: Vec<NodeRng> = (0..n as u64)
        .map(|i| {
            let mut r = base.clone();
            r.set_stream(i + 1);
            r
        })
        .collect();

    let last = protocol
        .last_round()
        .map_or(cfg.round_cap, |l| l.min(cfg.round_cap));
    let mut completion_round = protocol.is_complete(&states).then_some(0);
    let mut rounds = Vec::new();
    let mut channel = Channel::new(n);
    let mut transmitters: Vec<NodeId> = Vec::new();

    let mut round = 1;
    while round <= last {
        if completion_round.is_some() && cfg.stop_at_completion {
            break;
        }
        if protocol.quiescent(&states) {
            break;
        }
        protocol.begin_round(round, &mut shared);
        let active = states.iter().filter(|s| s.is_active()).count() as u32;
        let uninformed = protocol.pending(&states) as u32;

        transmitters.clear();
        for (v, (state, rng)) in states.iter().zip(rngs.iter_mut()).enumerate() {
            if protocol.decide(v as NodeId, state, round, rng) {
                transmitters.push(v as NodeId);
            }
        }
        for &t in &transmitters {
            let s = &mut states[t as usize];
            s.tx_count += 1;
            protocol.after_transmit(s, round);
        }
        let payloads: Vec<P::Message> = transmitters.iter().map(|&t| protocol.payload(t)).collect();

        let resolved = channel.resolve(g, &transmitters);
        let mut newly = 0;
        for &(v, idx) in &resolved.received {
            newly += protocol.deliver(v, &mut states[v as usize], &payloads[idx], round);
        }
        let collisions = resolved.collided.len() as u32;
        for (v, s) in states.iter_mut().enumerate() {
            protocol.end_round(v as NodeId, s, round);
        }

        rounds.push(RoundRecord {
            round,
            active,
            transmitters: transmitters.len() as u32,
            uninformed,
            newly_informed: newly,
            collisions,
            transmitter_ids: if cfg.record_transmitters {
                transmitters.clone()
            } else {
                Vec::new()
            },
        });
        if completion_round.is_none() && protocol.is_complete(&states) {
            completion_round = Some(round);
        }
        round += 1;
    }

    Ok(Trace {
        protocol: protocol.tag(),
        n,
        source: protocol.source(),
        seed: cfg.seed,
        phases: protocol.phases(),
        rounds,
        per_node: states
            .iter()
            .map(|s| NodeRecord {
                tx_count: s.tx_count,
                t_u: s.activated,
            })
            .collect(),
        completion_round,
        status: if completion_round.is_some() {
            RunStatus::Completed
        } else {
            RunStatus::CapExhausted
        },
        warnings: protocol.warnings(),
    })
}
