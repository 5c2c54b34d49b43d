//! Three-phase broadcast on G(n, p): phase layout, one verified trace and a
//! small batch summary.

use radiocast::channel::RunConfig;
use radiocast::harness::{protocol_seed, run_trials};
use radiocast::metrics::{summarize, verify_trace};
use radiocast::netgraph::gen_gnp_directed;
use radiocast::protocols::{broadcast_random, derive_phase_params};

fn main() -> radiocast::Result<()> {
    let n = 4096;
    let p = 16.0 * (n as f64).ln() / n as f64;
    let params = derive_phase_params(n, p, 8.0)?;
    println!(
        "d = {:.1}, T = {}, phase 2 = {} (prob {:.4}), phase 3: {} rounds at {:.4}",
        params.d, params.phase1_rounds, params.phase2_enabled, params.p2_prob, params.p3_rounds,
        params.p3_prob
    );

    let g = gen_gnp_directed(n, p, 1)?;
    let trace = broadcast_random(&g, 0, &params, &RunConfig::new(protocol_seed(1), 10_000))?;
    println!("round  active  tx  uninformed  new  collisions");
    for r in trace.rounds.iter().take(12) {
        println!(
            "{:>5}  {:>6}  {:>2}  {:>10}  {:>3}  {:>10}",
            r.round, r.active, r.transmitters, r.uninformed, r.newly_informed, r.collisions
        );
    }
    println!(
        "completed at {:?}, max per-node tx {}, trace violations {}",
        trace.completion_round,
        trace.max_tx(),
        verify_trace(&trace, &g).len()
    );

    let traces = run_trials(40, 100, |_, s| {
        let g = gen_gnp_directed(n, p, s)?;
        broadcast_random(&g, 0, &params, &RunConfig::new(protocol_seed(s), 10_000))
    })?;
    let s = summarize(&traces)?;
    println!(
        "40 trials: completion {:.2}, rounds p95 {:?}, total tx mean {:.0}",
        s.completion_rate,
        s.rounds.map(|r| r.p95),
        s.total_tx.mean
    );
    Ok(())
}
