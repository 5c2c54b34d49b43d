use serde::{Deserialize, Serialize};

use super::Trace;
use crate::{Error, Result};

/// Exact order statistics of a sample. The median is the lower median and
/// `p95` is the nearest-rank 95th percentile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderStats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub p95: f64,
    pub max: f64,
}

impl OrderStats {
    /// `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let len = v.len();
        // Summing in sorted order keeps the mean independent of input order.
        let mean = v.iter().sum::<f64>() / len as f64;
        let rank = (0.95 * len as f64).ceil() as usize;
        Some(Self {
            count: len,
            mean,
            median: v[(len - 1) / 2],
            p95: v[rank.clamp(1, len) - 1],
            max: v[len - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub completed: usize,
    pub completion_rate: f64,
    /// Completion rounds of the completed trials only.
    pub rounds: Option<OrderStats>,
    /// Per-trial mean of per-node transmissions.
    pub tx_mean: OrderStats,
    /// Per-trial maximum of per-node transmissions.
    pub tx_max: OrderStats,
    pub total_tx: OrderStats,
}

pub fn summarize(traces: &[Trace]) -> Result<TrialSummary> {
    if traces.is_empty() {
        return Err(Error::EmptyInput);
    }
    let rounds: Vec<f64> = traces
        .iter()
        .filter_map(|t| t.completion_round.map(f64::from))
        .collect();
    let collect = |f: &dyn Fn(&Trace) -> f64| -> OrderStats {
        let v: Vec<f64> = traces.iter().map(f).collect();
        OrderStats::of(&v).expect("non-empty")
    };
    Ok(TrialSummary {
        trials: traces.len(),
        completed: rounds.len(),
        completion_rate: rounds.len() as f64 / traces.len() as f64,
        rounds: OrderStats::of(&rounds),
        tx_mean: collect(&|t| t.mean_tx()),
        tx_max: collect(&|t| f64::from(t.max_tx())),
        total_tx: collect(&|t| t.total_transmissions() as f64),
    })
}

/// One CSV row per configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    /// `p` for random graphs, `D` for general graphs.
    pub p_or_d: f64,
    pub protocol: String,
    pub trials: usize,
    pub completion_rate: f64,
    pub rounds_mean: Option<f64>,
    pub rounds_p95: Option<f64>,
    pub tx_mean: f64,
    pub tx_max: f64,
}

pub const SUMMARY_CSV_HEADER: [&str; 9] = [
    "n",
    "p_or_D",
    "protocol",
    "trials",
    "completion_rate",
    "rounds_mean",
    "rounds_p95",
    "tx_mean",
    "tx_max",
];

impl SummaryRow {
    pub fn new(n: usize, p_or_d: f64, protocol: &str, s: &TrialSummary) -> Self {
        Self {
            n,
            p_or_d,
            protocol: protocol.to_owned(),
            trials: s.trials,
            completion_rate: s.completion_rate,
            rounds_mean: s.rounds.map(|r| r.mean),
            rounds_p95: s.rounds.map(|r| r.p95),
            tx_mean: s.tx_mean.mean,
            tx_max: s.tx_max.max,
        }
    }

    fn fields(&self) -> [String; 9] {
        let opt = |x: Option<f64>| x.map_or_else(String::new, |v| v.to_string());
        [
            self.n.to_string(),
            self.p_or_d.to_string(),
            self.protocol.clone(),
            self.trials.to_string(),
            self.completion_rate.to_string(),
            opt(self.rounds_mean),
            opt(self.rounds_p95),
            self.tx_mean.to_string(),
            self.tx_max.to_string(),
        ]
    }
}

/// Writes the header and `rows` as CSV.
pub fn write_summary_csv<W: std::io::Write>(w: W, rows: &[SummaryRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SUMMARY_CSV_HEADER)?;
    for row in rows {
        out.write_record(row.fields())?;
    }
    out.flush()?;
    Ok(())
}
