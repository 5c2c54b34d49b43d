//! Synchronous radio-network simulation.
//!
//! A radio network is a directed graph in which a node receives a message in
//! a round iff exactly one of its in-neighbours transmits. Two or more
//! simultaneous transmissions collide and nobody hears anything.
//!
//! The crate is organised around that model:
//!
//! - [`netgraph`]: random `G(n, p)` digraphs, the adversarial star/path and
//!   dumbbell constructions, BFS queries and the `radiograph v1` file format.
//! - [`channel`]: the round engine. It applies the collision rule and drives
//!   any [`channel::Protocol`] to completion or to its round cap.
//! - [`protocols`]: energy-efficient broadcast on random graphs, gossip on
//!   random graphs, broadcast on general graphs driven by a shared exponent
//!   sequence, the send-exponent distributions and the exact inform
//!   probability oracle.
//! - [`metrics`]: traces, trace identity checks and trial summaries.
//! - [`harness`]: seeded Monte Carlo batches and the lower-bound experiments
//!   used by the `radiocast` binary and the examples.
//!
//! Edges always point from transmitter to receiver: `u -> v` means `v` hears
//! `u`. A transmitting node does not receive in the same round.

pub mod channel;
mod error;
pub mod harness;
pub mod metrics;
pub mod netgraph;
pub mod protocols;

pub use error::{Error, Result};

/// Node identifier. Nodes of an `n`-node graph are `0..n`.
pub type NodeId = u32;

/// Base-2 logarithm of `n` rounded up, with `ceil_log2(1) == 0`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::ceil_log2;

    #[test]
    fn ceil_log2_matches_float() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
        for n in 2..5000u64 {
            assert_eq!(ceil_log2(n), (n as f64).log2().ceil() as u32, "n={n}");
        }
    }
}
