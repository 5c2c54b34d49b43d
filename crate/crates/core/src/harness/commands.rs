use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{protocol_seed, run_trials, GraphSource, SimConfig};
use crate::channel::RunConfig;
use crate::metrics::{
    summarize, verify_trace, write_summary_csv, ProtocolTag, SummaryRow, Trace, TrialSummary,
};
use crate::netgraph::{DirectedGraph, GraphSummary};
use crate::protocols::{
    broadcast_general, default_round_cap, derive_phase_params_with, gossip_random,
    gossip_rounds, ProbabilityTable,
};
use crate::{Error, Result};

pub const TRACES_FILE: &str = "traces.json";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    Gnp,
    Lowerbound,
    Dumbbell,
}

/// Builds a graph and summarises it from node 0, the source of every
/// construction.
pub fn generate(source: &GraphSource, seed: u64) -> Result<(DirectedGraph, GraphSummary)> {
    let g = source.build(seed)?;
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let summary = GraphSummary::of(&g, 0)?;
    Ok((g, summary))
}

#[derive(Debug, Clone)]
pub struct BatchResult {
    pub config: SimConfig,
    pub traces: Vec<Trace>,
    pub summary: TrialSummary,
    pub row: SummaryRow,
    /// Trace-check violations summed over trials.
    pub violations: usize,
}

impl BatchResult {
    pub fn passed(&self) -> bool {
        self.summary.completion_rate >= self.config.threshold
    }
}

fn scaled_cap(base: u32, multiplier: f64) -> u32 {
    (f64::from(base) * multiplier).ceil().clamp(1.0, f64::from(u32::MAX)) as u32
}

fn edge_probability(cfg: &SimConfig, g: &DirectedGraph) -> f64 {
    cfg.p.unwrap_or_else(|| {
        let n = g.n() as f64;
        g.edge_count() as f64 / (n * (n - 1.0)).max(1.0)
    })
}

fn general_table(cfg: &SimConfig, g: &DirectedGraph) -> Result<ProbabilityTable> {
    let dist_n = cfg.dist_n.unwrap_or(match cfg.graph {
        GraphSource::LowerBound { n, .. } => n,
        GraphSource::Dumbbell { n } => n as u64,
        _ => g.n() as u64,
    });
    let diameter = cfg
        .diameter
        .ok_or_else(|| Error::InvalidConfig("broadcast-general needs --D".into()))?;
    cfg.dist.build(dist_n, diameter, cfg.lambda)
}

fn run_one(cfg: &SimConfig, g: &DirectedGraph, seed: u64) -> Result<Trace> {
    let n = g.n();
    let run_seed = protocol_seed(seed);
    match cfg.protocol {
        ProtocolTag::BroadcastRandom => {
            let p = edge_probability(cfg, g);
            let params = derive_phase_params_with(n, p, cfg.beta, cfg.sparsity_warning)?;
            let cap = scaled_cap(params.marks().total_rounds(), cfg.cap_multiplier);
            crate::protocols::broadcast_random(g, cfg.source, &params, &RunConfig::new(run_seed, cap))
        }
        ProtocolTag::GossipRandom => {
            let d = n as f64 * edge_probability(cfg, g);
            let cap = scaled_cap(gossip_rounds(n, d, cfg.gossip_multiplier), cfg.cap_multiplier);
            gossip_random(g, d, cfg.gossip_multiplier, &RunConfig::new(run_seed, cap))
        }
        ProtocolTag::BroadcastGeneral => {
            let dist = general_table(cfg, g)?;
            let cap = scaled_cap(default_round_cap(&dist), cfg.cap_multiplier);
            broadcast_general(g, cfg.source, &dist, cfg.beta, &RunConfig::new(run_seed, cap))
        }
    }
}

/// Runs `cfg.trials` trials with seeds `cfg.seed + i`, checks every trace
/// and summarises the batch.
pub fn run_batch(cfg: &SimConfig) -> Result<BatchResult> {
    cfg.validate()?;
    let fixed = if cfg.graph.is_fixed() {
        Some(cfg.graph.build(cfg.seed)?)
    } else {
        None
    };
    let traces = run_trials(cfg.trials, cfg.seed, |_, seed| {
        let built;
        let g = match &fixed {
            Some(g) => g,
            None => {
                built = cfg.graph.build(seed)?;
                &built
            }
        };
        run_one(cfg, g, seed)
    })?;

    let violations = if let Some(g) = &fixed {
        traces.iter().map(|t| verify_trace(t, g).len()).sum()
    } else {
        traces
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let g = cfg.graph.build(super::trial_seed(cfg.seed, i))?;
                Ok(verify_trace(t, &g).len())
            })
            .sum::<Result<usize>>()?
    };

    let summary = summarize(&traces)?;
    let n = traces[0].n;
    let p_or_d = match cfg.protocol {
        ProtocolTag::BroadcastGeneral => cfg.diameter.unwrap_or(0) as f64,
        _ => match (&fixed, cfg.p) {
            (_, Some(p)) => p,
            (Some(g), None) => edge_probability(cfg, g),
            (None, None) => 0.0,
        },
    };
    let row = SummaryRow::new(n, p_or_d, cfg.protocol.as_str(), &summary);
    Ok(BatchResult {
        config: cfg.clone(),
        traces,
        summary,
        row,
        violations,
    })
}

/// Contents of `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: SimConfig,
    pub summary: TrialSummary,
    pub violations: usize,
    pub passed: bool,
    /// Unix seconds; left out of reproducible reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
}

impl RunReport {
    pub fn new(batch: &BatchResult, reproducible: bool) -> Self {
        let generated_at = (!reproducible).then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        });
        Self {
            config: batch.config.clone(),
            summary: batch.summary.clone(),
            violations: batch.violations,
            passed: batch.passed(),
            generated_at,
        }
    }
}

/// Writes `traces.json`, `summary.csv` and `report.json` into `dir`.
pub fn write_run_artifacts(batch: &BatchResult, dir: &Path, reproducible: bool) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(TRACES_FILE), serde_json::to_string(&batch.traces)?)?;
    write_summary_csv(fs::File::create(dir.join(SUMMARY_FILE))?, std::slice::from_ref(&batch.row))?;
    let report = RunReport::new(batch, reproducible);
    fs::write(dir.join(REPORT_FILE), serde_json::to_string_pretty(&report)? + "\n")?;
    Ok(())
}
