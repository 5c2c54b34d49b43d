//! Energy against time on the star/path network: alpha vs the baseline
//! table, then a sweep of lambda.

use radiocast::harness::{lowerbound_suite, DistSpec};

fn main() -> radiocast::Result<()> {
    let (n, diameter) = (1 << 10, 60);
    for dist in [DistSpec::Alpha, DistSpec::AlphaPrime] {
        let r = lowerbound_suite(n, diameter, dist, None, 40, 1, 8.0, None)?;
        println!(
            "{dist:<12} tx/node {:>6.2}  completion {:.2}  mean rounds {:>7.1}",
            r.tx_mean.mean,
            r.completion_rate,
            r.rounds.map_or(f64::NAN, |s| s.mean)
        );
    }
    let lo = (n as f64 / diameter as f64).log2();
    let hi = (n as f64).log2();
    for lambda in [lo, (lo + hi) / 2.0, hi] {
        let r = lowerbound_suite(n, diameter, DistSpec::Alpha, Some(lambda), 40, 2, 8.0, Some(2800))?;
        println!(
            "lambda {lambda:>5.2}  tx/node {:>6.2}  mean rounds {:>7.1}",
            r.tx_mean.mean,
            r.rounds.map_or(f64::NAN, |s| s.mean)
        );
    }
    Ok(())
}
