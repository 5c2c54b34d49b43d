//! Experiments on the two adversarial constructions.
//!
//! Inform rates are per-round estimates: successes divided by the number of
//! rounds in which the informing nodes were active and waiting.

use serde::{Deserialize, Serialize};

use super::{protocol_seed, run_trials, DistSpec};
use crate::channel::RunConfig;
use crate::metrics::{OrderStats, Trace};
use crate::netgraph::{gen_lowerbound_network, gen_star_dumbbell, LowerBoundLayout};
use crate::protocols::{
    activity_window, broadcast_general, default_round_cap, exact_inform_probability,
};
use crate::{NodeId, Result};

/// Rate estimate for one group of informers.
#[derive(Debug, Clone, Copy, Default)]
struct Exposure {
    successes: u64,
    rounds: u64,
}

impl Exposure {
    /// Informers became active in `from`; the target was informed in `to`.
    fn add(&mut self, trace: &Trace, from: Option<u32>, to: Option<u32>, window: u32) {
        let Some(from) = from else { return };
        match to {
            Some(to) => {
                self.successes += 1;
                self.rounds += u64::from(to - from);
            }
            None => {
                let seen = (trace.rounds.len() as u32).saturating_sub(from);
                self.rounds += u64::from(seen.min(window));
            }
        }
    }

    fn rate(&self) -> f64 {
        if self.rounds == 0 {
            0.0
        } else {
            self.successes as f64 / self.rounds as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarStat {
    pub star: u32,
    pub leaves: usize,
    /// Trials in which the star's leaves informed the next center.
    pub informed: usize,
    /// Rounds from the leaves' activation to the next center's, over
    /// informed trials.
    pub wait: Option<OrderStats>,
    pub rate: f64,
    /// Exact single-round probability that exactly one leaf transmits.
    pub oracle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub n: u64,
    pub diameter: u64,
    pub dist: DistSpec,
    pub lambda: f64,
    pub trials: usize,
    pub completion_rate: f64,
    pub cap_exhausted: usize,
    pub rounds: Option<OrderStats>,
    /// Per-trial mean per-node transmissions.
    pub tx_mean: OrderStats,
    pub tx_max: u32,
    pub stars: Vec<StarStat>,
    pub min_rate_star: u32,
    pub min_rate: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn lowerbound_suite(
    n: u64,
    diameter: u64,
    dist: DistSpec,
    lambda: Option<f64>,
    trials: usize,
    seed: u64,
    beta: f64,
    round_cap: Option<u32>,
) -> Result<LowerBoundReport> {
    let layout = LowerBoundLayout::new(n, diameter)?;
    let g = gen_lowerbound_network(n, diameter)?;
    let table = dist.build(n, diameter, lambda)?;
    let cap = round_cap.unwrap_or_else(|| default_round_cap(&table));
    let window = activity_window(&table, beta);
    let traces = run_trials(trials, seed, |_, s| {
        let cfg = RunConfig::new(protocol_seed(s), cap).record_transmitters(false);
        broadcast_general(&g, layout.source(), &table, beta, &cfg)
    })?;

    let mut stars = Vec::with_capacity(layout.log_n as usize);
    for i in 1..=layout.log_n {
        let leaves = layout.leaves[i as usize - 1].clone();
        let next = layout.next_center(i);
        let mut exposure = Exposure::default();
        let mut waits = Vec::new();
        for t in &traces {
            let from = t.per_node[leaves.start as usize].t_u;
            let to = t.per_node[next as usize].t_u;
            exposure.add(t, from, to, window);
            if let (Some(a), Some(b)) = (from, to) {
                waits.push(f64::from(b - a));
            }
        }
        stars.push(StarStat {
            star: i,
            leaves: leaves.len(),
            informed: waits.len(),
            wait: OrderStats::of(&waits),
            rate: exposure.rate(),
            oracle: exact_inform_probability(leaves.len() as u64, &table)?,
        });
    }
    let (min_rate_star, min_rate) = stars
        .iter()
        .map(|s| (s.star, s.rate))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 0.0));

    let completed: Vec<f64> = traces
        .iter()
        .filter_map(|t| t.completion_round.map(f64::from))
        .collect();
    let tx_means: Vec<f64> = traces.iter().map(Trace::mean_tx).collect();
    Ok(LowerBoundReport {
        n,
        diameter,
        dist,
        lambda: table.lambda(),
        trials,
        completion_rate: completed.len() as f64 / trials as f64,
        cap_exhausted: trials - completed.len(),
        rounds: OrderStats::of(&completed),
        tx_mean: OrderStats::of(&tx_means).expect("trials >= 1"),
        tx_max: traces.iter().map(Trace::max_tx).max().unwrap_or(0),
        stars,
        min_rate_star,
        min_rate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumbbellReport {
    pub n: usize,
    pub dist: DistSpec,
    pub trials: usize,
    /// Trials in which every destination was informed.
    pub successes: usize,
    pub success_rate: f64,
    /// `n log2 n / 2`.
    pub target: f64,
    /// Intermediate transmissions until all destinations were informed (or
    /// the run ended), over all trials.
    pub intermediate_tx: OrderStats,
    /// Same, over successful trials only.
    pub intermediate_tx_successful: Option<OrderStats>,
    /// Per-round rate at which a destination hears one of its two
    /// intermediates.
    pub destination_rate: f64,
    pub destination_rounds: u64,
    /// Exact probability that exactly one of two active nodes transmits.
    pub destination_oracle: f64,
}

/// Runs the general broadcast on the `3n + 1` node dumbbell until every
/// destination is informed or every node has retired.
pub fn dumbbell_suite(
    n: usize,
    diameter: u64,
    dist: DistSpec,
    trials: usize,
    seed: u64,
    beta: f64,
    round_cap: Option<u32>,
) -> Result<DumbbellReport> {
    let g = gen_star_dumbbell(n)?;
    let table = dist.build(n as u64, diameter, None)?;
    let window = activity_window(&table, beta);
    // Retirement bounds every run, so the cap only guards against misuse.
    let cap = round_cap.unwrap_or(u32::MAX);
    let traces = run_trials(trials, seed, |_, s| {
        let cfg = RunConfig::new(protocol_seed(s), cap)
            .stop_at_completion(true)
            .record_transmitters(false);
        broadcast_general(&g, 0, &table, beta, &cfg)
    })?;

    let intermediates = 1..=(2 * n) as NodeId;
    let destinations = (2 * n + 1) as NodeId..=(3 * n) as NodeId;
    let mut exposure = Exposure::default();
    let mut all_tx = Vec::with_capacity(trials);
    let mut ok_tx = Vec::new();
    for t in &traces {
        let tx: u32 = intermediates.clone().map(|u| t.per_node[u as usize].tx_count).sum();
        all_tx.push(f64::from(tx));
        if t.completed() {
            ok_tx.push(f64::from(tx));
        }
        for (i, d) in destinations.clone().enumerate() {
            // Both intermediates of d_i are informed by the source's one
            // clean transmission, so they share t_u.
            let from = t.per_node[2 * i + 1].t_u;
            exposure.add(t, from, t.per_node[d as usize].t_u, window);
        }
    }
    Ok(DumbbellReport {
        n,
        dist,
        trials,
        successes: ok_tx.len(),
        success_rate: ok_tx.len() as f64 / trials as f64,
        target: n as f64 * (n as f64).log2() / 2.0,
        intermediate_tx: OrderStats::of(&all_tx).expect("trials >= 1"),
        intermediate_tx_successful: OrderStats::of(&ok_tx),
        destination_rate: exposure.rate(),
        destination_rounds: exposure.rounds,
        destination_oracle: exact_inform_probability(2, &table)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowerbound_report_shape() {
        let r = lowerbound_suite(64, 30, DistSpec::Alpha, None, 20, 1, 8.0, None).unwrap();
        assert_eq!(r.stars.len(), 6);
        assert_eq!(r.stars.iter().map(|s| s.leaves).collect::<Vec<_>>(), vec![2, 4, 8, 16, 32, 64]);
        assert!(r.stars.iter().all(|s| s.rate <= 1.0 && s.oracle <= 1.0));
        assert!(r.stars.iter().any(|s| s.rate == r.min_rate));
        assert_eq!(r.cap_exhausted, 20 - (r.completion_rate * 20.0).round() as usize);
    }

    #[test]
    fn single_destination_matches_oracle() {
        // Point mass k = 1: exactly one of two transmits with probability 1/2.
        let r = dumbbell_suite(1, 2, DistSpec::Point(1), 2000, 5, 8.0, None).unwrap();
        assert_eq!(r.destination_oracle, 0.5);
        let sigma = (0.25 / r.destination_rounds as f64).sqrt();
        assert!((r.destination_rate - 0.5).abs() < 4.0 * sigma, "{r:?}");
    }

    #[test]
    fn dumbbell_meets_the_transmission_bound() {
        let r = dumbbell_suite(16, 2, DistSpec::Point(1), 200, 3, 8.0, None).unwrap();
        assert!(r.success_rate > 0.9);
        assert!(r.intermediate_tx.mean >= r.target, "{r:?}");
    }
}
