//! Energy-efficient broadcast on `G(n, p)` where every node transmits at
//! most once.
//!
//! Phase 1 (`T = floor(log n / log d)` rounds): every active node transmits
//! and retires. Phase 2 (one round, only for `p <= n^-2/5`): every active
//! node transmits with probability `1/(d^T p)`, then all of them retire.
//! Phase 3 (`ceil(β log n)` rounds): active nodes transmit with probability
//! `1/d` (or `1/(dp)` without phase 2) and retire once they have.

use rand::distr::{Bernoulli, Distribution};
use serde::{Deserialize, Serialize};

use crate::channel::{run, NodeRng, NodeState, Protocol, RunConfig};
use crate::metrics::{PhaseMarks, ProtocolTag, Trace};
use crate::netgraph::DirectedGraph;
use crate::{Error, NodeId, Result};

/// Below this value of `pn / ln n` the graph is likely too sparse for the
/// protocol's guarantees.
pub const SPARSITY_WARNING: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseParams {
    pub n: usize,
    pub p: f64,
    /// Expected degree `np`.
    pub d: f64,
    /// Phase-1 length `T`.
    pub phase1_rounds: u32,
    pub phase2_enabled: bool,
    pub p2_prob: f64,
    pub p3_prob: f64,
    pub p3_rounds: u32,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl PhaseParams {
    pub fn marks(&self) -> PhaseMarks {
        PhaseMarks {
            phase1_rounds: self.phase1_rounds,
            phase2: self.phase2_enabled,
            phase3_rounds: self.p3_rounds,
        }
    }
}

fn clamp_probability(name: &str, raw: f64, warnings: &mut Vec<String>) -> f64 {
    if raw > 1.0 {
        warnings.push(format!("{name} = {raw} clamped to 1"));
        1.0
    } else {
        raw
    }
}

pub fn derive_phase_params(n: usize, p: f64, beta: f64) -> Result<PhaseParams> {
    derive_phase_params_with(n, p, beta, SPARSITY_WARNING)
}

/// As [`derive_phase_params`], warning when `pn / ln n < sparsity`.
pub fn derive_phase_params_with(n: usize, p: f64, beta: f64, sparsity: f64) -> Result<PhaseParams> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!("need n >= 2, got {n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidConfig(format!("beta must be positive, got {beta}")));
    }
    let nf = n as f64;
    let d = nf * p;
    if d <= 1.0 {
        return Err(Error::DegreeTooSmall(d));
    }
    let log_n = nf.log2();
    let phase1_rounds = ((log_n / d.log2()).floor() as u32).max(1);
    let phase2_enabled = p <= nf.powf(-0.4);

    let mut warnings = Vec::new();
    let density = p * nf / nf.ln();
    if density < sparsity {
        warnings.push(format!(
            "p*n/ln n = {density:.3} is below {sparsity}; the graph may be too sparse"
        ));
    }
    let p2_prob = clamp_probability(
        "phase-2 probability",
        1.0 / (d.powi(phase1_rounds as i32) * p),
        &mut warnings,
    );
    let p3_raw = if phase2_enabled { 1.0 / d } else { 1.0 / (d * p) };
    let p3_prob = clamp_probability("phase-3 probability", p3_raw, &mut warnings);
    Ok(PhaseParams {
        n,
        p,
        d,
        phase1_rounds,
        phase2_enabled,
        p2_prob,
        p3_prob,
        p3_rounds: (beta * log_n).ceil() as u32,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Flood,
    Thin,
    Trickle,
}

#[derive(Debug, Clone)]
pub struct RandomBroadcast {
    source: NodeId,
    params: PhaseParams,
    thin: Bernoulli,
    trickle: Bernoulli,
}

impl RandomBroadcast {
    pub fn new(source: NodeId, params: PhaseParams) -> Result<Self> {
        let bern = |p: f64| Bernoulli::new(p).map_err(|_| Error::InvalidProbability(p));
        Ok(Self {
            source,
            thin: bern(params.p2_prob)?,
            trickle: bern(params.p3_prob)?,
            params,
        })
    }

    fn phase(&self, round: u32) -> Phase {
        let t = self.params.phase1_rounds;
        if round <= t {
            Phase::Flood
        } else if self.params.phase2_enabled && round == t + 1 {
            Phase::Thin
        } else {
            Phase::Trickle
        }
    }
}

impl Protocol for RandomBroadcast {
    type Message = ();

    fn tag(&self) -> ProtocolTag {
        ProtocolTag::BroadcastRandom
    }

    fn source(&self) -> Option<NodeId> {
        Some(self.source)
    }

    fn init(&mut self, g: &DirectedGraph, states: &mut [NodeState]) -> Result<()> {
        g.check_node(self.source)?;
        states[self.source as usize].activate(0);
        Ok(())
    }

    fn last_round(&self) -> Option<u32> {
        Some(self.params.marks().total_rounds())
    }

    fn decide(&self, _node: NodeId, state: &NodeState, round: u32, rng: &mut NodeRng) -> bool {
        if !state.is_active() {
            return false;
        }
        match self.phase(round) {
            Phase::Flood => true,
            Phase::Thin => self.thin.sample(rng),
            Phase::Trickle => self.trickle.sample(rng),
        }
    }

    fn after_transmit(&self, state: &mut NodeState, _round: u32) {
        state.retire();
    }

    fn payload(&self, _node: NodeId) {}

    fn deliver(&mut self, _node: NodeId, state: &mut NodeState, _msg: &(), round: u32) -> u64 {
        u64::from(state.activate(round))
    }

    fn end_round(&self, _node: NodeId, state: &mut NodeState, round: u32) {
        // Phase 2 retires everyone who was active when it started.
        if self.phase(round) == Phase::Thin && state.activated.is_some_and(|t| t < round) {
            state.retire();
        }
    }

    fn phases(&self) -> Option<PhaseMarks> {
        Some(self.params.marks())
    }

    fn warnings(&self) -> Vec<String> {
        self.params.warnings.clone()
    }
}

/// Runs the three-phase broadcast from `source`.
pub fn broadcast_random(
    g: &DirectedGraph,
    source: NodeId,
    params: &PhaseParams,
    cfg: &RunConfig,
) -> Result<Trace> {
    let mut protocol = RandomBroadcast::new(source, params.clone())?;
    run(g, &mut protocol, cfg)
}
