//! Consistency checks for recorded traces.
//!
//! Every trace is checked for bounds, monotone `N_t` and a consistent
//! completion record. Broadcast traces that carry transmitter ids are
//! replayed through the collision rule. Traces of the three-phase random
//! broadcast additionally have to satisfy four identities:
//!
//! 1. `U_t = Q_t` for `t <= T`;
//! 2. `N_t = n - (Σ_{i<t} |Q_i| + |U_t|)` for `t <= T`;
//! 3. `|U_t| >= |U_r| - Σ_{i=r}^{t-1} |Q_i|` for `r < t`, except across the
//!    phase-2 round, which retires every node active before it;
//! 4. transmit sets of different rounds are pairwise disjoint.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ProtocolTag, RunStatus, Trace};
use crate::channel::Channel;
use crate::netgraph::DirectedGraph;
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Trace and graph disagree on shape, or a count exceeds `n`.
    Shape,
    /// `N_t` increased.
    Monotone,
    /// Completion round or status inconsistent with the rounds.
    Completion,
    /// Replaying the transmit sets gives different receptions or counts.
    Replay,
    /// Identity 1.
    ActiveTransmit,
    /// Identity 2.
    UninformedAccounting,
    /// Identity 3.
    ActiveDecay,
    /// Identity 4.
    DisjointTransmitSets,
}

impl Check {
    /// Number of the random-broadcast identity this check covers.
    pub fn identity(self) -> Option<u8> {
        match self {
            Check::ActiveTransmit => Some(1),
            Check::UninformedAccounting => Some(2),
            Check::ActiveDecay => Some(3),
            Check::DisjointTransmitSets => Some(4),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: Check,
    pub round: Option<u32>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.check)?;
        if let Some(r) = self.round {
            write!(f, " at round {r}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

struct Report(Vec<Violation>);

impl Report {
    fn push(&mut self, check: Check, round: Option<u32>, detail: impl Into<String>) {
        self.0.push(Violation {
            check,
            round,
            detail: detail.into(),
        });
    }
}

/// Checks `trace` against the graph it was recorded on. An empty result
/// means every applicable check passed.
pub fn verify_trace(trace: &Trace, g: &DirectedGraph) -> Vec<Violation> {
    let mut report = Report(Vec::new());
    let n = trace.n;
    if n != g.n() || trace.per_node.len() != n {
        report.push(
            Check::Shape,
            None,
            format!(
                "trace has n = {} and {} node records, graph has {} nodes",
                n,
                trace.per_node.len(),
                g.n()
            ),
        );
        return report.0;
    }

    check_counts(trace, &mut report);
    if trace.protocol.is_broadcast() {
        replay_broadcast(trace, g, &mut report);
    }
    if trace.protocol == ProtocolTag::BroadcastRandom {
        check_identities(trace, &mut report);
    }
    report.0
}

fn check_counts(trace: &Trace, report: &mut Report) {
    let n = trace.n as u64;
    for (i, r) in trace.rounds.iter().enumerate() {
        let t = Some(r.round);
        if r.round as usize != i + 1 {
            report.push(Check::Shape, t, format!("record {i} has round {}", r.round));
        }
        for (name, v) in [
            ("active", r.active),
            ("transmitters", r.transmitters),
            ("uninformed", r.uninformed),
            ("collisions", r.collisions),
        ] {
            if u64::from(v) > n {
                report.push(Check::Shape, t, format!("{name} = {v} exceeds n = {n}"));
            }
        }
        if trace.protocol.is_broadcast() && r.transmitters > r.active {
            report.push(
                Check::Shape,
                t,
                format!("{} transmitters but only {} active", r.transmitters, r.active),
            );
        }
    }
    for w in trace.rounds.windows(2) {
        if w[1].uninformed > w[0].uninformed {
            report.push(
                Check::Monotone,
                Some(w[1].round),
                format!("N went from {} to {}", w[0].uninformed, w[1].uninformed),
            );
        }
    }
    let completed = trace.completion_round.is_some();
    if completed != (trace.status == RunStatus::Completed) {
        report.push(Check::Completion, None, "status disagrees with completion round");
    }
    if let Some(c) = trace.completion_round {
        if c as usize > trace.rounds.len() {
            report.push(Check::Completion, Some(c), "completion after the last recorded round");
        } else if let Some(next) = trace.rounds.get(c as usize) {
            if next.uninformed != 0 {
                report.push(
                    Check::Completion,
                    Some(c),
                    format!("{} still uninformed after completion", next.uninformed),
                );
            }
        }
        if c >= 1 {
            if let Some(r) = trace.round(c) {
                if r.uninformed == 0 {
                    report.push(Check::Completion, Some(c), "already complete before this round");
                }
            }
        }
    }
}

/// Replays the recorded transmit sets; skipped when ids were not recorded.
fn replay_broadcast(trace: &Trace, g: &DirectedGraph, report: &mut Report) {
    let n = trace.n;
    let has_ids = trace
        .rounds
        .iter()
        .all(|r| r.transmitters == 0 || !r.transmitter_ids.is_empty());
    let mut t_u: Vec<Option<u32>> = trace
        .per_node
        .iter()
        .map(|r| r.t_u.filter(|&t| t == 0))
        .collect();
    let sources: Vec<NodeId> = (0..n as NodeId).filter(|&v| t_u[v as usize].is_some()).collect();
    if let Some(s) = trace.source {
        if sources != [s] {
            report.push(
                Check::Replay,
                None,
                format!("source {s} but round-0 nodes are {sources:?}"),
            );
        }
    }
    let mut informed = sources.len() as u64;
    let mut tx = vec![0u32; n];
    let mut channel = Channel::new(n);

    for r in &trace.rounds {
        let round = Some(r.round);
        if r.uninformed as u64 != n as u64 - informed {
            report.push(
                Check::Replay,
                round,
                format!("N = {} but {} nodes are uninformed", r.uninformed, n as u64 - informed),
            );
        }
        if !has_ids {
            informed += r.newly_informed;
            continue;
        }
        let ids = &r.transmitter_ids;
        if ids.len() != r.transmitters as usize {
            report.push(
                Check::Replay,
                round,
                format!("{} ids for {} transmitters", ids.len(), r.transmitters),
            );
        }
        if ids.iter().any(|&v| v as usize >= n) || ids.windows(2).any(|w| w[0] >= w[1]) {
            report.push(Check::Replay, round, "transmitter ids out of range or unsorted");
            return;
        }
        for &v in ids {
            if t_u[v as usize].is_none_or(|t| t >= r.round) {
                report.push(Check::Replay, round, format!("uninformed node {v} transmits"));
            }
            tx[v as usize] += 1;
        }
        let resolved = channel.resolve(g, ids);
        let mut newly = 0u64;
        for &(v, _) in &resolved.received {
            let slot = &mut t_u[v as usize];
            if slot.is_none() {
                *slot = Some(r.round);
                newly += 1;
            }
        }
        if newly != r.newly_informed {
            report.push(
                Check::Replay,
                round,
                format!("{} newly informed recorded, {} replayed", r.newly_informed, newly),
            );
        }
        if resolved.collided.len() != r.collisions as usize {
            report.push(
                Check::Replay,
                round,
                format!("{} collisions recorded, {} replayed", r.collisions, resolved.collided.len()),
            );
        }
        informed += newly;
    }

    if has_ids {
        for (v, rec) in trace.per_node.iter().enumerate() {
            if rec.t_u != t_u[v] {
                report.push(
                    Check::Replay,
                    None,
                    format!("node {v}: t_u {:?} recorded, {:?} replayed", rec.t_u, t_u[v]),
                );
            }
            if rec.tx_count != tx[v] {
                report.push(
                    Check::Replay,
                    None,
                    format!("node {v}: tx_count {} recorded, {} replayed", rec.tx_count, tx[v]),
                );
            }
        }
    }
}

fn check_identities(trace: &Trace, report: &mut Report) {
    let Some(marks) = trace.phases else {
        report.push(Check::Shape, None, "random-broadcast trace without phase marks");
        return;
    };
    let n = trace.n as u64;
    let t_max = marks.phase1_rounds;
    let mut sent_before = 0u64;
    for r in &trace.rounds {
        if r.round > t_max {
            break;
        }
        if r.active != r.transmitters {
            report.push(
                Check::ActiveTransmit,
                Some(r.round),
                format!("|U| = {} but |Q| = {}", r.active, r.transmitters),
            );
        }
        let expected = n.checked_sub(sent_before + u64::from(r.active));
        if expected != Some(u64::from(r.uninformed)) {
            report.push(
                Check::UninformedAccounting,
                Some(r.round),
                format!(
                    "N = {} but n - (Σ|Q| + |U|) = {} - ({} + {})",
                    r.uninformed, n, sent_before, r.active
                ),
            );
        }
        sent_before += u64::from(r.transmitters);
    }

    // Consecutive rounds suffice: the general inequality is their sum.
    let phase2 = marks.phase2_round();
    for w in trace.rounds.windows(2) {
        if Some(w[0].round) == phase2 {
            continue;
        }
        if i64::from(w[1].active) < i64::from(w[0].active) - i64::from(w[0].transmitters) {
            report.push(
                Check::ActiveDecay,
                Some(w[1].round),
                format!(
                    "|U| = {} below {} - {}",
                    w[1].active, w[0].active, w[0].transmitters
                ),
            );
        }
    }

    let mut first_tx: Vec<Option<u32>> = vec![None; trace.n];
    for r in &trace.rounds {
        for &v in &r.transmitter_ids {
            if let Some(slot) = first_tx.get_mut(v as usize) {
                match *slot {
                    Some(prev) => report.push(
                        Check::DisjointTransmitSets,
                        Some(r.round),
                        format!("node {v} already transmitted in round {prev}"),
                    ),
                    None => *slot = Some(r.round),
                }
            }
        }
    }
    for (v, rec) in trace.per_node.iter().enumerate() {
        if rec.tx_count > 1 {
            report.push(
                Check::DisjointTransmitSets,
                None,
                format!("node {v} transmitted {} times", rec.tx_count),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RunConfig;
    use crate::metrics::{NodeRecord, PhaseMarks, RoundRecord};
    use crate::netgraph::gen_gnp_directed;
    use crate::protocols::{broadcast_random, derive_phase_params, gossip_random};

    fn round(round: u32, active: u32, ids: Vec<NodeId>, uninformed: u32, newly: u64) -> RoundRecord {
        RoundRecord {
            round,
            active,
            transmitters: ids.len() as u32,
            uninformed,
            newly_informed: newly,
            collisions: 0,
            transmitter_ids: ids,
        }
    }

    /// Path 0 -> 1 -> 2 where node 1 transmits in rounds 2 and 5.
    fn double_transmission() -> (Trace, DirectedGraph) {
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let rounds = vec![
            round(1, 1, vec![0], 2, 1),
            round(2, 1, vec![1], 1, 1),
            round(3, 1, vec![], 0, 0),
            round(4, 1, vec![], 0, 0),
            round(5, 1, vec![1], 0, 0),
        ];
        let trace = Trace {
            protocol: ProtocolTag::BroadcastRandom,
            n: 3,
            source: Some(0),
            seed: 0,
            phases: Some(PhaseMarks {
                phase1_rounds: 2,
                phase2: false,
                phase3_rounds: 3,
            }),
            rounds,
            per_node: vec![
                NodeRecord { tx_count: 1, t_u: Some(0) },
                NodeRecord { tx_count: 2, t_u: Some(1) },
                NodeRecord { tx_count: 0, t_u: Some(2) },
            ],
            completion_round: Some(2),
            status: RunStatus::Completed,
            warnings: Vec::new(),
        };
        (trace, g)
    }

    #[test]
    fn double_transmission_breaks_identity_four() {
        let (trace, g) = double_transmission();
        let v = verify_trace(&trace, &g);
        assert!(
            v.iter().any(|x| x.check.identity() == Some(4) && x.round == Some(5)),
            "{v:?}"
        );
    }

    #[test]
    fn simulator_traces_are_clean() {
        for (n, p) in [(256, 0.1), (1024, 0.02), (2048, 0.004)] {
            let params = derive_phase_params(n, p, 8.0).unwrap();
            for seed in 0..5 {
                let g = gen_gnp_directed(n, p, seed).unwrap();
                let t = broadcast_random(&g, 0, &params, &RunConfig::new(seed, 10_000)).unwrap();
                let v = verify_trace(&t, &g);
                assert!(v.is_empty(), "n={n} seed={seed}: {v:?}");
            }
        }
    }

    #[test]
    fn tampering_is_detected() {
        let n = 256;
        let params = derive_phase_params(n, 0.1, 8.0).unwrap();
        let g = gen_gnp_directed(n, 0.1, 1).unwrap();
        let t = broadcast_random(&g, 0, &params, &RunConfig::new(1, 10_000)).unwrap();

        let mut bad = t.clone();
        bad.rounds[0].newly_informed += 1;
        assert!(verify_trace(&bad, &g).iter().any(|v| v.check == Check::Replay));

        let mut bad = t.clone();
        bad.rounds[1].uninformed = bad.rounds[0].uninformed + 1;
        let checks: Vec<_> = verify_trace(&bad, &g).into_iter().map(|v| v.check).collect();
        assert!(checks.contains(&Check::Monotone));
        assert!(checks.contains(&Check::UninformedAccounting) || checks.contains(&Check::Replay));

        let mut bad = t;
        bad.rounds[0].active = 3;
        assert!(verify_trace(&bad, &g).iter().any(|v| v.check.identity() == Some(1)));
    }

    #[test]
    fn gossip_only_gets_generic_checks() {
        let g = gen_gnp_directed(16, 0.5, 2).unwrap();
        let t = gossip_random(&g, 8.0, 4.0, &RunConfig::new(2, u32::MAX)).unwrap();
        // Gossip nodes transmit many times; identity 4 must not apply.
        assert!(t.max_tx() > 1);
        assert!(verify_trace(&t, &g).is_empty());

        let mut bad = t;
        bad.rounds[1].uninformed = bad.rounds[0].uninformed + 1;
        let v = verify_trace(&bad, &g);
        assert!(v.iter().all(|x| x.check.identity().is_none()));
        assert!(v.iter().any(|x| x.check == Check::Monotone));
    }

    #[test]
    fn wrong_graph_is_a_shape_violation() {
        let (trace, _) = double_transmission();
        let v = verify_trace(&trace, &DirectedGraph::empty(4));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].check, Check::Shape);
    }
}
