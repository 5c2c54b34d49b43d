use serde::{Deserialize, Serialize};

use super::Trace;
use crate::protocols::PhaseParams;

/// Phase-1 growth of the active set across trials.
///
/// In phase 1 every active node transmits and retires, so `|U_{t+1}|` is
/// the number of nodes informed in round `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRatioReport {
    pub d: f64,
    pub phase1_rounds: u32,
    /// `|U_{t+1}| / |U_t|` for `t = 1..=T`, pooled over trials.
    pub growth: Vec<f64>,
    /// `|U_{T+1}| / d^T`, one per trial.
    pub final_ratio: Vec<f64>,
    /// Trials where some `|U_t|` with `t <= T` was zero.
    pub skipped: usize,
}

impl PhaseRatioReport {
    pub fn median_growth(&self) -> Option<f64> {
        lower_median(&self.growth)
    }

    pub fn median_final(&self) -> Option<f64> {
        lower_median(&self.final_ratio)
    }
}

pub fn lower_median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some(v[(v.len() - 1) / 2])
}

pub fn phase_ratio_report(traces: &[Trace], params: &PhaseParams) -> PhaseRatioReport {
    let t_max = params.phase1_rounds as usize;
    let scale = params.d.powi(params.phase1_rounds as i32);
    let mut report = PhaseRatioReport {
        d: params.d,
        phase1_rounds: params.phase1_rounds,
        growth: Vec::new(),
        final_ratio: Vec::new(),
        skipped: 0,
    };
    for trace in traces {
        let rounds = &trace.rounds[..t_max.min(trace.rounds.len())];
        if rounds.len() < t_max || rounds.iter().any(|r| r.active == 0) {
            report.skipped += 1;
            continue;
        }
        report
            .growth
            .extend(rounds.iter().map(|r| r.newly_informed as f64 / f64::from(r.active)));
        report
            .final_ratio
            .push(rounds[t_max - 1].newly_informed as f64 / scale);
    }
    report
}
