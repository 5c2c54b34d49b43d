//! Gossip on G(n, p) with message joining.

use radiocast::channel::{run, RunConfig};
use radiocast::netgraph::gen_gnp_directed;
use radiocast::protocols::Gossip;

fn main() -> radiocast::Result<()> {
    let (n, p) = (128, 0.125);
    let d = n as f64 * p;
    let g = gen_gnp_directed(n, p, 3)?;
    let mut gossip = Gossip::new(n, d, 128.0)?;
    let trace = run(&g, &mut gossip, &RunConfig::new(3, u32::MAX))?;
    println!("schedule {} rounds", gossip.rounds());
    for t in [1u32, 10, 100, 1000] {
        if let Some(r) = trace.round(t) {
            println!("round {t:>4}: {} nodes still missing messages", r.uninformed);
        }
    }
    println!(
        "all {} ordered pairs delivered by round {:?}; mean tx/node {:.0}, max {}",
        n * (n - 1),
        trace.completion_round,
        trace.mean_tx(),
        trace.max_tx()
    );
    assert!(gossip.knows(5, 77));
    Ok(())
}
