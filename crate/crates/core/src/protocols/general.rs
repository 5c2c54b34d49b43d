//! Broadcast on arbitrary graphs with known diameter.
//!
//! A single exponent sequence `I_1, I_2, ...` is drawn from the table and
//! shared by all nodes. An active node activated in round `t_u` transmits in
//! round `r` with probability `2^-I_r` while `r <= t_u + ceil(β log² n)`,
//! and retires after that.

use rand::distr::{Bernoulli, Distribution};

use super::dist::{ExponentSampler, ProbabilityTable};
use crate::channel::{run, NodeRng, NodeState, Protocol, RunConfig};
use crate::metrics::{ProtocolTag, Trace};
use crate::netgraph::DirectedGraph;
use crate::{ceil_log2, Error, NodeId, Result};

pub const DEFAULT_BETA: f64 = 8.0;

/// `ceil(log2 n)` of the table's `n`, at least 1.
fn log_n(dist: &ProbabilityTable) -> f64 {
    f64::from(ceil_log2(dist.n()).max(1))
}

/// Rounds a node stays active: `ceil(β · log² n)` with `n` taken from the
/// table.
pub fn activity_window(dist: &ProbabilityTable, beta: f64) -> u32 {
    let log_n = log_n(dist);
    (beta * log_n * log_n).ceil() as u32
}

/// `4 · (D·λ + log² n)`, the default stopping round.
pub fn default_round_cap(dist: &ProbabilityTable) -> u32 {
    let log_n = log_n(dist);
    let cap = 4.0 * (dist.diameter() as f64 * dist.lambda() + log_n * log_n);
    (cap.ceil() as u32).max(1)
}

#[derive(Debug, Clone)]
pub struct GeneralBroadcast {
    sources: Vec<NodeId>,
    window: u32,
    sampler: ExponentSampler,
    /// Send coin per exponent; `None` when the probability is exactly 0 or 1.
    coins: Vec<Option<Bernoulli>>,
    send_prob: Vec<f64>,
    current: usize,
}

impl GeneralBroadcast {
    pub fn new(source: NodeId, dist: &ProbabilityTable, beta: f64) -> Result<Self> {
        Self::with_sources(vec![source], dist, beta)
    }

    /// Same protocol with several nodes active from round 0.
    pub fn with_sources(sources: Vec<NodeId>, dist: &ProbabilityTable, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidConfig(format!("beta must be positive, got {beta}")));
        }
        if sources.is_empty() {
            return Err(Error::InvalidConfig("no source".into()));
        }
        let send_prob: Vec<f64> = (0..=dist.max_k()).map(|k| dist.send_probability(k)).collect();
        let coins = send_prob
            .iter()
            .map(|&q| (q > 0.0 && q < 1.0).then(|| Bernoulli::new(q).expect("q in (0, 1)")))
            .collect();
        Ok(Self {
            sources,
            window: activity_window(dist, beta),
            sampler: ExponentSampler::new(dist),
            coins,
            send_prob,
            current: 0,
        })
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    /// Exponent drawn for the current round.
    pub fn current_exponent(&self) -> u32 {
        self.current as u32
    }
}

impl Protocol for GeneralBroadcast {
    type Message = ();

    fn tag(&self) -> ProtocolTag {
        ProtocolTag::BroadcastGeneral
    }

    fn source(&self) -> Option<NodeId> {
        (self.sources.len() == 1).then(|| self.sources[0])
    }

    fn init(&mut self, g: &DirectedGraph, states: &mut [NodeState]) -> Result<()> {
        for &s in &self.sources {
            g.check_node(s)?;
            states[s as usize].activate(0);
        }
        Ok(())
    }

    fn begin_round(&mut self, _round: u32, shared: &mut NodeRng) {
        self.current = self.sampler.sample(shared) as usize;
    }

    fn decide(&self, _node: NodeId, state: &NodeState, round: u32, rng: &mut NodeRng) -> bool {
        if !state.is_active() {
            return false;
        }
        let t_u = state.activated.expect("active nodes are activated");
        if round > t_u + self.window {
            return false;
        }
        match &self.coins[self.current] {
            Some(coin) => coin.sample(rng),
            None => self.send_prob[self.current] == 1.0,
        }
    }

    fn payload(&self, _node: NodeId) {}

    fn deliver(&mut self, _node: NodeId, state: &mut NodeState, _msg: &(), round: u32) -> u64 {
        u64::from(state.activate(round))
    }

    fn end_round(&self, _node: NodeId, state: &mut NodeState, round: u32) {
        if state.is_active() && state.activated.is_some_and(|t| round >= t + self.window) {
            state.retire();
        }
    }
}

/// Broadcast from `source` driven by `dist`. The round cap in `cfg` is the
/// protocol's stopping round; [`default_round_cap`] gives the usual choice.
pub fn broadcast_general(
    g: &DirectedGraph,
    source: NodeId,
    dist: &ProbabilityTable,
    beta: f64,
    cfg: &RunConfig,
) -> Result<Trace> {
    let mut protocol = GeneralBroadcast::new(source, dist, beta)?;
    run(g, &mut protocol, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{verify_trace, RunStatus};
    use crate::netgraph::{gen_lowerbound_network, gen_star_dumbbell};
    use crate::protocols::{sample_sequence, ZeroOutcome};

    #[test]
    fn certain_transmission_one_hop() {
        let g = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        let dist = ProbabilityTable::point_mass(2, 0).unwrap();
        let t = broadcast_general(&g, 0, &dist, 8.0, &RunConfig::new(1, 100)).unwrap();
        assert_eq!(t.completion_round, Some(1));
        assert_eq!(t.per_node[1].t_u, Some(1));
    }

    #[test]
    fn window_limits_transmissions() {
        let g = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        let dist = ProbabilityTable::point_mass(4, 0).unwrap();
        let t = broadcast_general(&g, 0, &dist, 1.0, &RunConfig::new(1, 1000)).unwrap();
        // log2 4 = 2, window 4: source transmits rounds 1..=4, node 1 rounds 2..=5.
        assert_eq!(t.per_node[0].tx_count, 4);
        assert_eq!(t.per_node[1].tx_count, 4);
        assert_eq!(t.rounds.len(), 5);
    }

    #[test]
    fn certain_rounds_follow_the_sequence() {
        // Exponent 0 means a certain transmission here, so a lone active
        // node transmits in every round where the shared draw is 0.
        let dist =
            ProbabilityTable::from_masses(2, 1, 0.0, vec![0.5, 0.5], ZeroOutcome::Transmit).unwrap();
        let g = DirectedGraph::empty(1);
        let t = broadcast_general(&g, 0, &dist, 200.0, &RunConfig::new(8, 150)).unwrap();
        assert_eq!(t.rounds.len(), 150);
        let seq = sample_sequence(&dist, t.rounds.len(), 8);
        for (r, k) in t.rounds.iter().zip(seq) {
            if k == 0 {
                assert_eq!(r.transmitters, 1, "round {}", r.round);
            }
        }
    }

    #[test]
    fn lowerbound_network_completes() {
        let g = gen_lowerbound_network(64, 30).unwrap();
        let dist = ProbabilityTable::alpha(64, 30, None).unwrap();
        let cfg = RunConfig::new(11, default_round_cap(&dist));
        let t = broadcast_general(&g, 0, &dist, DEFAULT_BETA, &cfg).unwrap();
        assert_eq!(t.status, RunStatus::Completed);
        assert!(verify_trace(&t, &g).is_empty());
    }

    #[test]
    fn dumbbell_destinations_need_a_lone_sender() {
        let g = gen_star_dumbbell(8).unwrap();
        let dist = ProbabilityTable::point_mass(8, 1).unwrap();
        let t = broadcast_general(&g, 0, &dist, DEFAULT_BETA, &RunConfig::new(2, 500)).unwrap();
        assert!(verify_trace(&t, &g).is_empty());
        assert!(t.rounds.iter().any(|r| r.collisions > 0));
    }

    #[test]
    fn idle_rounds_follow_the_sequence() {
        // A single node that stays active: it transmits exactly in rounds
        // where the shared exponent is 1 and its coin comes up.
        let dist = ProbabilityTable::alpha(1 << 10, 60, None).unwrap();
        let g = DirectedGraph::empty(1);
        let cfg = RunConfig::new(3, 200);
        let t = broadcast_general(&g, 0, &dist, DEFAULT_BETA, &cfg).unwrap();
        let seq = sample_sequence(&dist, t.rounds.len(), 3);
        for (r, k) in t.rounds.iter().zip(seq) {
            if k == 0 {
                assert_eq!(r.transmitters, 0, "idle round {}", r.round);
            }
        }
    }
}
