//! The three protocols and the exponent distributions driving the general one.

pub mod dist;
pub mod general;
pub mod gossip;
pub mod random_broadcast;

pub use crate::channel::{NodeState, Status};
pub use dist::{
    default_lambda, exact_inform_probability, sample_sequence, ExponentSampler,
    ProbabilityTable, ZeroOutcome, DIST_HEADER,
};
pub use general::{
    activity_window, broadcast_general, default_round_cap, GeneralBroadcast, DEFAULT_BETA,
};
pub use gossip::{gossip_random, gossip_rounds, Gossip, DEFAULT_GOSSIP_MULTIPLIER};
pub use random_broadcast::{
    broadcast_random, derive_phase_params, derive_phase_params_with, PhaseParams, RandomBroadcast, SPARSITY_WARNING,
};
