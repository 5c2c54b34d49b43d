//! Per-star inform rates on the star/path network and the dumbbell
//! transmission count.

use radiocast::harness::{dumbbell_suite, lowerbound_suite, DistSpec};

fn main() -> radiocast::Result<()> {
    let r = lowerbound_suite(1 << 10, 60, DistSpec::Alpha, None, 50, 9, 8.0, None)?;
    println!("star  leaves  rate     exact");
    for s in &r.stars {
        println!("{:>4}  {:>6}  {:.4}  {:.4}", s.star, s.leaves, s.rate, s.oracle);
    }
    println!("slowest star {} at {:.4} per round", r.min_rate_star, r.min_rate);

    for k in 1..=5 {
        let d = dumbbell_suite(16, 2, DistSpec::Point(k), 300, k.into(), 8.0, None)?;
        println!(
            "dumbbell k={k}: success {:.3}, intermediate tx {:.1} (n log n / 2 = {})",
            d.success_rate, d.intermediate_tx.mean, d.target
        );
    }
    Ok(())
}
