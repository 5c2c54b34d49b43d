//! Collision semantics and the synchronous round engine.
//!
//! In every round each node either transmits or listens. A listening node
//! receives iff exactly one of its in-neighbours transmits; with two or more
//! it hears a collision, with none it hears silence. Transmitters are
//! half-duplex and receive nothing in the round they transmit.

mod engine;

use crate::netgraph::DirectedGraph;
use crate::{Error, NodeId, Result};

pub use engine::{run, stream_rng, NodeRng, NodeState, Protocol, RunConfig, Status, SHARED_STREAM};

/// What a single node observed in a round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reception<M> {
    Silence,
    Received { from: NodeId, message: M },
    Collision,
    /// The node was transmitting and could not listen.
    Transmitting,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOutcome<M> {
    pub receptions: Vec<Reception<M>>,
    pub transmitters: Vec<NodeId>,
}

impl<M> RoundOutcome<M> {
    pub fn received(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.receptions.iter().enumerate().filter_map(|(v, r)| match r {
            Reception::Received { from, .. } => Some((v as NodeId, *from)),
            _ => None,
        })
    }

    pub fn collisions(&self) -> usize {
        self.receptions
            .iter()
            .filter(|r| matches!(r, Reception::Collision))
            .count()
    }
}

/// Resolves one round: `transmitters[i]` sends `messages[i]`.
pub fn step<M: Clone>(
    g: &DirectedGraph,
    transmitters: &[NodeId],
    messages: &[M],
) -> Result<RoundOutcome<M>> {
    if transmitters.len() != messages.len() {
        return Err(Error::InvalidConfig(format!(
            "{} transmitters but {} messages",
            transmitters.len(),
            messages.len()
        )));
    }
    let mut seen = vec![false; g.n()];
    for &t in transmitters {
        g.check_node(t)?;
        if std::mem::replace(&mut seen[t as usize], true) {
            return Err(Error::InvalidConfig(format!("node {t} transmits twice")));
        }
    }

    let mut channel = Channel::new(g.n());
    let resolved = channel.resolve(g, transmitters);
    let mut receptions = vec![Reception::Silence; g.n()];
    for &t in transmitters {
        receptions[t as usize] = Reception::Transmitting;
    }
    for &(v, idx) in &resolved.received {
        receptions[v as usize] = Reception::Received {
            from: transmitters[idx],
            message: messages[idx].clone(),
        };
    }
    for &v in &resolved.collided {
        receptions[v as usize] = Reception::Collision;
    }
    Ok(RoundOutcome {
        receptions,
        transmitters: transmitters.to_vec(),
    })
}

/// Reusable scratch space for resolving rounds without per-round
/// allocation proportional to `n`.
#[derive(Debug, Clone)]
pub(crate) struct Channel {
    hits: Vec<u32>,
    sender: Vec<u32>,
    transmitting: Vec<bool>,
    touched: Vec<NodeId>,
    resolved: Resolved,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Resolved {
    /// `(receiver, index of the sender in the transmitter slice)`.
    pub received: Vec<(NodeId, usize)>,
    pub collided: Vec<NodeId>,
}

impl Channel {
    pub fn new(n: usize) -> Self {
        Self {
            hits: vec![0; n],
            sender: vec![0; n],
            transmitting: vec![false; n],
            touched: Vec::new(),
            resolved: Resolved::default(),
        }
    }

    pub fn resolve(&mut self, g: &DirectedGraph, transmitters: &[NodeId]) -> &Resolved {
        self.resolved.received.clear();
        self.resolved.collided.clear();
        for &t in transmitters {
            self.transmitting[t as usize] = true;
        }
        for (idx, &t) in transmitters.iter().enumerate() {
            for &v in g.out_neighbors(t) {
                let h = &mut self.hits[v as usize];
                if *h == 0 {
                    self.touched.push(v);
                }
                *h += 1;
                self.sender[v as usize] = idx as u32;
            }
        }
        // Sorted so receivers are processed in id order.
        self.touched.sort_unstable();
        for &v in &self.touched {
            let vi = v as usize;
            if !self.transmitting[vi] {
                match self.hits[vi] {
                    1 => self.resolved.received.push((v, self.sender[vi] as usize)),
                    _ => self.resolved.collided.push(v),
                }
            }
            self.hits[vi] = 0;
        }
        self.touched.clear();
        for &t in transmitters {
            self.transmitting[t as usize] = false;
        }
        &self.resolved
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_transmitter_is_heard() {
        let g = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        let out = step(&g, &[0], &["m"]).unwrap();
        assert_eq!(out.receptions[1], Reception::Received { from: 0, message: "m" });
        assert_eq!(out.receptions[0], Reception::Transmitting);
    }

    #[test]
    fn two_transmitters_collide() {
        let g = DirectedGraph::from_edges(3, [(0, 2), (1, 2)]).unwrap();
        let out = step(&g, &[0, 1], &[(), ()]).unwrap();
        assert_eq!(out.receptions[2], Reception::Collision);
        assert_eq!(out.collisions(), 1);
    }

    #[test]
    fn no_transmitter_is_silence() {
        let g = DirectedGraph::from_edges(3, [(0, 2), (1, 2)]).unwrap();
        let out = step::<()>(&g, &[], &[]).unwrap();
        assert!(out.receptions.iter().all(|r| *r == Reception::Silence));
    }

    #[test]
    fn transmitter_does_not_receive() {
        let g = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let out = step(&g, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(out.received().count(), 0);
        assert_eq!(out.collisions(), 0);
    }

    #[test]
    fn rejects_bad_transmit_sets() {
        let g = DirectedGraph::empty(2);
        assert!(step(&g, &[2], &[()]).is_err());
        assert!(step(&g, &[0, 0], &[(), ()]).is_err());
        assert!(step(&g, &[0], &[(), ()]).is_err());
    }

    fn graph_and_tx() -> impl Strategy<Value = (DirectedGraph, Vec<NodeId>)> {
        (2usize..14)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    proptest::collection::vec(any::<bool>(), n * n),
                    proptest::collection::vec(any::<bool>(), n),
                )
            })
            .prop_map(|(n, adj, tx)| {
                let edges = (0..n * n)
                    .filter(|&i| adj[i] && i / n != i % n)
                    .map(|i| ((i / n) as NodeId, (i % n) as NodeId));
                let g = DirectedGraph::from_edges(n, edges).unwrap();
                let tx = (0..n as NodeId).filter(|&v| tx[v as usize]).collect();
                (g, tx)
            })
    }

    proptest! {
        #[test]
        fn exactly_one_rule((g, tx) in graph_and_tx()) {
            let msgs: Vec<NodeId> = tx.clone();
            let out = step(&g, &tx, &msgs).unwrap();
            let ins = g.in_neighbors();
            for (v, in_v) in ins.iter().enumerate() {
                let hearing: Vec<_> = in_v.iter().filter(|u| tx.contains(u)).collect();
                let r = &out.receptions[v];
                if tx.contains(&(v as NodeId)) {
                    prop_assert_eq!(r, &Reception::Transmitting);
                } else {
                    match hearing.len() {
                        0 => prop_assert_eq!(r, &Reception::Silence),
                        1 => prop_assert_eq!(
                            r,
                            &Reception::Received { from: *hearing[0], message: *hearing[0] }
                        ),
                        _ => prop_assert_eq!(r, &Reception::Collision),
                    }
                }
            }
        }

        #[test]
        fn scratch_reuse_is_stateless((g, tx) in graph_and_tx()) {
            let mut ch = Channel::new(g.n());
            let first = ch.resolve(&g, &tx).clone();
            ch.resolve(&g, &[]);
            let again = ch.resolve(&g, &tx).clone();
            prop_assert_eq!(first.received, again.received);
            prop_assert_eq!(first.collided, again.collided);
        }
    }
}
