//! Send-exponent distributions.
//!
//! A table assigns a mass to every exponent `k in 0..=ceil(log2 n)`. In a
//! round where the shared exponent is `k`, each active node transmits with
//! probability `2^-k`.
//!
//! The `alpha` and `alpha_prime` tables define their `k = 0` entry as the
//! residual `1 - sum_{k >= 1}`. That residual is an idle round in which
//! nobody transmits ([`ZeroOutcome::Idle`]); otherwise the residual alone
//! would make every active node transmit with constant probability per
//! round. Tables built from explicit masses keep the literal reading
//! `2^0 = 1` ([`ZeroOutcome::Transmit`]).

use std::fmt;
use std::io::BufRead;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::channel::{stream_rng, NodeRng, SHARED_STREAM};
use crate::{ceil_log2, Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;
pub const DIST_HEADER: &str = "dist";
const VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroOutcome {
    /// Exponent 0 means transmit with probability 1.
    Transmit,
    /// Exponent 0 is a residual idle outcome: nobody transmits.
    Idle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    n: u64,
    diameter: u64,
    lambda: f64,
    masses: Vec<f64>,
    zero: ZeroOutcome,
}

fn check_n_d(n: u64, diameter: u64) -> Result<()> {
    if n < 2 || diameter < 2 || diameter > n {
        return Err(Error::InvalidDistribution(format!(
            "need 2 <= D <= n, got n={n} D={diameter}"
        )));
    }
    Ok(())
}

/// `floor(log2(n / D))`.
pub fn default_lambda(n: u64, diameter: u64) -> f64 {
    (n as f64 / diameter as f64).log2().floor()
}

struct Shape {
    log_n: u32,
    lambda: f64,
    band_end: f64,
}

impl Shape {
    fn new(n: u64, diameter: u64, lambda_override: Option<f64>) -> Result<Self> {
        check_n_d(n, diameter)?;
        let log_n = ceil_log2(n);
        let floor_lambda = default_lambda(n, diameter);
        let lambda = lambda_override.unwrap_or(floor_lambda);
        if !lambda.is_finite() || lambda < 1.0 {
            return Err(Error::InvalidDistribution(format!("lambda {lambda} must be >= 1")));
        }
        if lambda_override.is_some() && (lambda < floor_lambda || lambda > log_n as f64) {
            return Err(Error::InvalidDistribution(format!(
                "lambda {lambda} outside [{floor_lambda}, {log_n}]"
            )));
        }
        let log_log_n = ceil_log2(log_n as u64);
        Ok(Self {
            log_n,
            lambda,
            band_end: (lambda + log_log_n as f64).min(log_n as f64),
        })
    }

    /// Which of the three ranges `k >= 1` falls in.
    fn range(&self, k: u32) -> u8 {
        let kf = k as f64;
        if kf <= self.lambda {
            0
        } else if kf <= self.band_end {
            1
        } else {
            2
        }
    }

    fn decay(&self, k: u32) -> f64 {
        (1.0 / (2.0 * self.lambda)) * 2f64.powf(-(k as f64 - self.lambda))
    }
}

impl ProbabilityTable {
    /// Energy-saving distribution: `1/(4λ)` up to `λ`, then
    /// `max{1/(2 log n), 2^-(k-λ)/(2λ)}` up to `λ + log log n`, then
    /// `1/(2 log n)`.
    ///
    /// `λ` defaults to `floor(log2(n/D))`; an override trades transmissions
    /// for time and must lie in `[floor(log2(n/D)), ceil(log2 n)]`. Logs are
    /// base 2 and rounded up, so `log n = ceil(log2 n)`.
    pub fn alpha(n: u64, diameter: u64, lambda_override: Option<f64>) -> Result<Self> {
        let shape = Shape::new(n, diameter, lambda_override)?;
        let floor = 1.0 / (2.0 * shape.log_n as f64);
        let masses = (1..=shape.log_n).map(|k| match shape.range(k) {
            0 => 1.0 / (4.0 * shape.lambda),
            1 => floor.max(shape.decay(k)),
            _ => floor,
        });
        Self::with_residual(n, diameter, shape.lambda, masses)
    }

    /// Baseline distribution used by earlier shallow-network broadcast.
    pub fn alpha_prime(n: u64, diameter: u64) -> Result<Self> {
        let shape = Shape::new(n, diameter, None)?;
        let tail = 1.0 / (2.0 * shape.lambda * shape.log_n as f64);
        let masses = (1..=shape.log_n).map(|k| match shape.range(k) {
            0 => 1.0 / (2.0 * shape.lambda),
            1 => shape.decay(k),
            _ => tail,
        });
        Self::with_residual(n, diameter, shape.lambda, masses)
    }

    fn with_residual(
        n: u64,
        diameter: u64,
        lambda: f64,
        tail: impl Iterator<Item = f64>,
    ) -> Result<Self> {
        let mut masses = vec![0.0];
        masses.extend(tail);
        let rest: f64 = masses[1..].iter().sum();
        let zero = 1.0 - rest;
        if zero < -SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "masses for k >= 1 sum to {rest} > 1"
            )));
        }
        masses[0] = zero.max(0.0);
        Ok(Self {
            n,
            diameter,
            lambda,
            masses,
            zero: ZeroOutcome::Idle,
        })
    }

    /// All mass on exponent `k`, with `2^0 = 1` read literally.
    pub fn point_mass(n: u64, k: u32) -> Result<Self> {
        let len = ceil_log2(n).max(k) as usize + 1;
        let mut masses = vec![0.0; len];
        masses[k as usize] = 1.0;
        Self::from_masses(n, 1, 0.0, masses, ZeroOutcome::Transmit)
    }

    pub fn from_masses(
        n: u64,
        diameter: u64,
        lambda: f64,
        masses: Vec<f64>,
        zero: ZeroOutcome,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("n must be positive".into()));
        }
        if masses.is_empty() {
            return Err(Error::InvalidDistribution("no masses".into()));
        }
        if let Some(bad) = masses.iter().find(|m| !m.is_finite() || **m < 0.0) {
            return Err(Error::InvalidDistribution(format!("mass {bad} is not a probability")));
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("masses sum to {sum}")));
        }
        if zero == ZeroOutcome::Idle && masses[0] == 1.0 {
            return Err(Error::InvalidDistribution("table never transmits".into()));
        }
        Ok(Self {
            n,
            diameter,
            lambda,
            masses,
            zero,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn diameter(&self) -> u64 {
        self.diameter
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn zero_outcome(&self) -> ZeroOutcome {
        self.zero
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, k: u32) -> f64 {
        self.masses.get(k as usize).copied().unwrap_or(0.0)
    }

    /// Largest exponent with an entry.
    pub fn max_k(&self) -> u32 {
        self.masses.len() as u32 - 1
    }

    /// Per-node send probability when the shared exponent is `k`.
    pub fn send_probability(&self, k: u32) -> f64 {
        if k == 0 && self.zero == ZeroOutcome::Idle {
            0.0
        } else {
            0.5f64.powi(k as i32)
        }
    }

    /// Expected transmissions per active node per round.
    pub fn mean_send_probability(&self) -> f64 {
        self.masses
            .iter()
            .enumerate()
            .map(|(k, m)| m * self.send_probability(k as u32))
            .sum()
    }

    /// Write as `dist v1 <n> <D> <lambda>` followed by `k alpha_k` lines.
    pub fn write_to<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        write!(w, "{self}")?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = r.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| perr(1, "empty table".into()))?;
        let header = header?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        match toks.as_slice() {
            [DIST_HEADER, VERSION, ..] => {}
            [DIST_HEADER, v, ..] => {
                return Err(Error::VersionMismatch {
                    expected: format!("{DIST_HEADER} {VERSION}"),
                    found: format!("{DIST_HEADER} {v}"),
                })
            }
            _ => return Err(perr(1, format!("not a dist table: {header:?}"))),
        }
        let [_, _, n, d, lambda] = toks.as_slice() else {
            return Err(perr(1, "header needs n, D and lambda".into()));
        };
        let n: u64 = n.parse().map_err(|_| perr(1, "bad n".into()))?;
        let diameter: u64 = d.parse().map_err(|_| perr(1, "bad D".into()))?;
        let lambda: f64 = lambda.parse().map_err(|_| perr(1, "bad lambda".into()))?;

        let mut zero = ZeroOutcome::Transmit;
        let mut masses = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if rest.split_whitespace().collect::<Vec<_>>() == ["zero", "idle"] {
                    zero = ZeroOutcome::Idle;
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let k: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| perr(lineno, "bad exponent".into()))?;
            let m: f64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| perr(lineno, "bad mass".into()))?;
            if k != masses.len() {
                return Err(perr(lineno, format!("expected exponent {}, got {k}", masses.len())));
            }
            masses.push(m);
        }
        Self::from_masses(n, diameter, lambda, masses, zero)
    }
}

impl fmt::Display for ProbabilityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{DIST_HEADER} {VERSION} {} {} {}", self.n, self.diameter, self.lambda)?;
        if self.zero == ZeroOutcome::Idle {
            writeln!(f, "# zero idle")?;
        }
        for (k, m) in self.masses.iter().enumerate() {
            writeln!(f, "{k} {m}")?;
        }
        Ok(())
    }
}

/// Inverse-CDF sampler over a table's exponents.
#[derive(Debug, Clone)]
pub struct ExponentSampler {
    index: WeightedIndex<f64>,
}

impl ExponentSampler {
    pub fn new(dist: &ProbabilityTable) -> Self {
        let index = WeightedIndex::new(dist.masses()).expect("validated table has positive mass");
        Self { index }
    }

    pub fn sample(&self, rng: &mut NodeRng) -> u32 {
        self.index.sample(rng) as u32
    }
}

/// I.i.d. exponents drawn from `dist` on the shared stream of `seed`.
///
/// This is exactly the sequence a general broadcast run with the same seed
/// uses, one exponent per round.
pub fn sample_sequence(dist: &ProbabilityTable, length: usize, seed: u64) -> Vec<u32> {
    let sampler = ExponentSampler::new(dist);
    let mut rng = stream_rng(seed, SHARED_STREAM);
    (0..length).map(|_| sampler.sample(&mut rng)).collect()
}

/// Probability that a node with `m` active in-neighbours is informed in a
/// round: `sum_k alpha_k * m q_k (1 - q_k)^(m-1)` with `q_k` the send
/// probability of exponent `k`.
pub fn exact_inform_probability(m: u64, dist: &ProbabilityTable) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidConfig("need at least one active in-neighbour".into()));
    }
    let mf = m as f64;
    Ok(dist
        .masses()
        .iter()
        .enumerate()
        .map(|(k, &mass)| {
            let q = dist.send_probability(k as u32);
            if mass == 0.0 || q == 0.0 {
                0.0
            } else if q == 1.0 {
                if m == 1 {
                    mass
                } else {
                    0.0
                }
            } else {
                mass * mf * q * (1.0 - q).powi((m - 1).min(i32::MAX as u64) as i32)
            }
        })
        .sum())
}
