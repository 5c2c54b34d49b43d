//! Exact single-round inform probability against sampled exponents.

use rand::distr::{Bernoulli, Distribution};
use radiocast::channel::stream_rng;
use radiocast::protocols::{exact_inform_probability, sample_sequence, ProbabilityTable};

fn main() -> radiocast::Result<()> {
    let dist = ProbabilityTable::alpha(1 << 16, 1 << 6, None)?;
    println!("{dist}");
    let rounds = 200_000;
    let exponents = sample_sequence(&dist, rounds, 4);
    let mut rng = stream_rng(4, 1);
    for m in [1u64, 2, 8, 64, 512] {
        let hits = exponents
            .iter()
            .filter(|&&k| {
                let q = dist.send_probability(k);
                let coin = Bernoulli::new(q).expect("probability");
                (0..m).filter(|_| coin.sample(&mut rng)).count() == 1
            })
            .count();
        println!(
            "m = {m:>3}: exact {:.5}, sampled {:.5}",
            exact_inform_probability(m, &dist)?,
            hits as f64 / rounds as f64
        );
    }
    Ok(())
}
