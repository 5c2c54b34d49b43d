//! Gossip on `G(n, p)`: every round every node transmits the union of all
//! messages it knows with probability `1/d`, for `ceil(c · d · log2 n)`
//! rounds (`c = 128` by default). Nodes never retire.

use fixedbitset::FixedBitSet;
use rand::distr::{Bernoulli, Distribution};

use crate::channel::{run, NodeRng, NodeState, Protocol, RunConfig};
use crate::metrics::{ProtocolTag, Trace};
use crate::netgraph::DirectedGraph;
use crate::{Error, NodeId, Result};

pub const DEFAULT_GOSSIP_MULTIPLIER: f64 = 128.0;

/// `ceil(multiplier · d · log2 n)`.
pub fn gossip_rounds(n: usize, d: f64, multiplier: f64) -> u32 {
    (multiplier * d * (n as f64).log2()).ceil().max(1.0) as u32
}

#[derive(Debug, Clone)]
pub struct Gossip {
    n: usize,
    rounds: u32,
    coin: Bernoulli,
    /// Originators known by each node.
    known: Vec<FixedBitSet>,
    known_count: Vec<u32>,
    delivered: u64,
}

impl Gossip {
    pub fn new(n: usize, d: f64, multiplier: f64) -> Result<Self> {
        if !(d > 1.0 && d.is_finite()) {
            return Err(Error::DegreeTooSmall(d));
        }
        if !(multiplier > 0.0 && multiplier.is_finite()) {
            return Err(Error::InvalidConfig(format!("bad round multiplier {multiplier}")));
        }
        Ok(Self {
            n,
            rounds: gossip_rounds(n, d, multiplier),
            coin: Bernoulli::new(1.0 / d).map_err(|_| Error::InvalidProbability(1.0 / d))?,
            known: Vec::new(),
            known_count: Vec::new(),
            delivered: 0,
        })
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    /// Whether `v` has received `u`'s message.
    pub fn knows(&self, v: NodeId, u: NodeId) -> bool {
        self.known[v as usize].contains(u as usize)
    }
}

impl Protocol for Gossip {
    type Message = FixedBitSet;

    fn tag(&self) -> ProtocolTag {
        ProtocolTag::GossipRandom
    }

    fn init(&mut self, g: &DirectedGraph, states: &mut [NodeState]) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::InvalidConfig(format!(
                "gossip built for {} nodes, graph has {}",
                self.n,
                g.n()
            )));
        }
        self.known = (0..self.n)
            .map(|v| {
                let mut s = FixedBitSet::with_capacity(self.n);
                s.insert(v);
                s
            })
            .collect();
        self.known_count = vec![1; self.n];
        self.delivered = self.n as u64;
        for s in states.iter_mut() {
            s.activate(0);
        }
        Ok(())
    }

    fn last_round(&self) -> Option<u32> {
        Some(self.rounds)
    }

    fn decide(&self, _node: NodeId, _state: &NodeState, _round: u32, rng: &mut NodeRng) -> bool {
        self.coin.sample(rng)
    }

    fn payload(&self, node: NodeId) -> FixedBitSet {
        self.known[node as usize].clone()
    }

    fn deliver(&mut self, node: NodeId, _state: &mut NodeState, msg: &FixedBitSet, _: u32) -> u64 {
        let v = node as usize;
        self.known[v].union_with(msg);
        let now = self.known[v].count_ones(..) as u32;
        let new = now - self.known_count[v];
        self.known_count[v] = now;
        self.delivered += u64::from(new);
        u64::from(new)
    }

    fn pending(&self, _states: &[NodeState]) -> usize {
        self.known_count
            .iter()
            .filter(|&&c| c as usize != self.n)
            .count()
    }

    fn is_complete(&self, _states: &[NodeState]) -> bool {
        self.delivered == (self.n as u64) * (self.n as u64)
    }

    fn quiescent(&self, _states: &[NodeState]) -> bool {
        false
    }
}

/// Runs gossip for its full schedule of `ceil(multiplier · d · log2 n)`
/// rounds (or `cfg.round_cap`, whichever is smaller).
pub fn gossip_random(g: &DirectedGraph, d: f64, multiplier: f64, cfg: &RunConfig) -> Result<Trace> {
    let mut protocol = Gossip::new(g.n(), d, multiplier)?;
    run(g, &mut protocol, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::stream_rng;
    use crate::metrics::RunStatus;

    #[test]
    fn two_node_exhaustive() {
        let g = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        for seed in 0..50 {
            let t = gossip_random(&g, 2.0, DEFAULT_GOSSIP_MULTIPLIER, &RunConfig::new(seed, u32::MAX))
                .unwrap();
            assert_eq!(t.rounds.len() as u32, gossip_rounds(2, 2.0, 128.0));

            // Replay each node's private stream.
            let coin = Bernoulli::new(0.5).unwrap();
            let mut rngs = [stream_rng(seed, 1), stream_rng(seed, 2)];
            let draws: Vec<[bool; 2]> = (0..t.rounds.len())
                .map(|_| [coin.sample(&mut rngs[0]), coin.sample(&mut rngs[1])])
                .collect();
            for v in 0..2 {
                let expected = draws.iter().filter(|d| d[v]).count() as u32;
                assert_eq!(t.per_node[v].tx_count, expected);
            }
            // Each direction needs a round in which only its sender transmits.
            let solo = |v: usize| {
                draws
                    .iter()
                    .position(|d| d[v] && !d[1 - v])
                    .map(|r| r as u32 + 1)
            };
            let expected = solo(0).zip(solo(1)).map(|(a, b)| a.max(b));
            assert_eq!(t.completion_round, expected, "seed {seed}");
        }
    }

    #[test]
    fn joins_messages_along_a_path() {
        // 0 -> 1 -> 2 -> 0 cycle: everyone eventually learns everything.
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut gossip = Gossip::new(3, 2.0, 128.0).unwrap();
        let t = run(&g, &mut gossip, &RunConfig::new(5, u32::MAX)).unwrap();
        assert_eq!(t.status, RunStatus::Completed);
        for v in 0..3 {
            for u in 0..3 {
                assert!(gossip.knows(v, u));
            }
        }
        let deliveries: u64 = t.rounds.iter().map(|r| r.newly_informed).sum();
        assert_eq!(deliveries, 6);
        assert!(t.rounds.windows(2).all(|w| w[0].uninformed >= w[1].uninformed));
    }

    #[test]
    fn incomplete_when_disconnected() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 0)]).unwrap();
        let t = gossip_random(&g, 2.0, 4.0, &RunConfig::new(1, u32::MAX)).unwrap();
        assert_eq!(t.status, RunStatus::CapExhausted);
        assert_eq!(t.rounds.last().unwrap().uninformed, 3);
    }

    #[test]
    fn rejects_bad_degree() {
        assert!(Gossip::new(4, 1.0, 128.0).is_err());
        assert!(Gossip::new(4, 2.0, 0.0).is_err());
        let g = DirectedGraph::empty(3);
        let mut gossip = Gossip::new(4, 2.0, 1.0).unwrap();
        assert!(run(&g, &mut gossip, &RunConfig::new(1, 10)).is_err());
    }
}
