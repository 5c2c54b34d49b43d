use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::metrics::ProtocolTag;
use crate::netgraph::{gen_gnp_directed, gen_lowerbound_network, gen_star_dumbbell, read_graph, DirectedGraph};
use crate::protocols::{ProbabilityTable, DEFAULT_BETA, DEFAULT_GOSSIP_MULTIPLIER, SPARSITY_WARNING};
use crate::{Error, Result};

/// Which send-exponent table drives the general broadcast.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistSpec {
    Alpha,
    AlphaPrime,
    /// All mass on one exponent.
    Point(u32),
}

impl DistSpec {
    pub fn build(self, n: u64, diameter: u64, lambda: Option<f64>) -> Result<ProbabilityTable> {
        if lambda.is_some() && self != DistSpec::Alpha {
            return Err(Error::InvalidConfig("--lambda only applies to alpha".into()));
        }
        match self {
            DistSpec::Alpha => ProbabilityTable::alpha(n, diameter, lambda),
            DistSpec::AlphaPrime => ProbabilityTable::alpha_prime(n, diameter),
            DistSpec::Point(k) => ProbabilityTable::point_mass(n, k),
        }
    }
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::Alpha => f.write_str("alpha"),
            DistSpec::AlphaPrime => f.write_str("alpha-prime"),
            DistSpec::Point(k) => write!(f, "point:{k}"),
        }
    }
}

impl FromStr for DistSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "alpha" => Ok(DistSpec::Alpha),
            "alpha-prime" | "alpha_prime" => Ok(DistSpec::AlphaPrime),
            _ => s
                .strip_prefix("point:")
                .and_then(|k| k.parse().ok())
                .map(DistSpec::Point)
                .ok_or_else(|| format!("unknown distribution {s:?}; use alpha, alpha-prime or point:K")),
        }
    }
}

/// Where a batch gets its graph from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphSource {
    /// A fresh `G(n, p)` per trial.
    Gnp { n: usize, p: f64 },
    LowerBound { n: u64, diameter: u64 },
    Dumbbell { n: usize },
    File(PathBuf),
}

impl GraphSource {
    /// Whether every trial uses the same graph.
    pub fn is_fixed(&self) -> bool {
        !matches!(self, GraphSource::Gnp { .. })
    }

    pub fn build(&self, seed: u64) -> Result<DirectedGraph> {
        match self {
            GraphSource::Gnp { n, p } => gen_gnp_directed(*n, *p, seed),
            GraphSource::LowerBound { n, diameter } => gen_lowerbound_network(*n, *diameter),
            GraphSource::Dumbbell { n } => gen_star_dumbbell(*n),
            GraphSource::File(path) => {
                let file = std::fs::File::open(path)?;
                read_graph(std::io::BufReader::new(file))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub trials: usize,
    pub protocol: ProtocolTag,
    pub graph: GraphSource,
    pub source: u32,
    /// Edge probability of the random-graph protocols. Estimated from the
    /// graph when it comes from a file.
    pub p: Option<f64>,
    /// Diameter parameter of the general broadcast's distribution.
    pub diameter: Option<u64>,
    /// `n` used inside the distribution; defaults to the construction `n`
    /// or the node count.
    pub dist_n: Option<u64>,
    pub dist: DistSpec,
    pub lambda: Option<f64>,
    pub beta: f64,
    /// Warn when `pn / ln n` falls below this.
    pub sparsity_warning: f64,
    pub gossip_multiplier: f64,
    /// Multiplies the protocol's default round cap.
    pub cap_multiplier: f64,
    /// Minimum completion rate for a passing batch.
    pub threshold: f64,
}

impl SimConfig {
    pub fn new(protocol: ProtocolTag, graph: GraphSource) -> Self {
        let p = match graph {
            GraphSource::Gnp { p, .. } => Some(p),
            _ => None,
        };
        let diameter = match graph {
            GraphSource::LowerBound { diameter, .. } => Some(diameter),
            _ => None,
        };
        Self {
            seed: 0,
            trials: 1,
            protocol,
            graph,
            source: 0,
            p,
            diameter,
            dist_n: None,
            dist: DistSpec::Alpha,
            lambda: None,
            beta: DEFAULT_BETA,
            sparsity_warning: SPARSITY_WARNING,
            gossip_multiplier: DEFAULT_GOSSIP_MULTIPLIER,
            cap_multiplier: 1.0,
            threshold: 0.95,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return bad(format!("threshold {} outside [0, 1]", self.threshold));
        }
        if !(self.cap_multiplier.is_finite() && self.cap_multiplier > 0.0) {
            return bad(format!("cap multiplier {} must be positive", self.cap_multiplier));
        }
        match (self.protocol, &self.graph) {
            (ProtocolTag::BroadcastGeneral, _) => {
                if self.diameter.is_none() {
                    return bad("broadcast-general needs --D".into());
                }
            }
            (_, GraphSource::Gnp { p, .. }) => {
                if self.p != Some(*p) {
                    return bad("edge probability given twice".into());
                }
            }
            (_, GraphSource::File(_)) => {
                if self.p.is_some() {
                    return bad("give either --p or a graph file, not both".into());
                }
            }
            (tag, _) => return bad(format!("{tag} runs on G(n, p) or a graph file")),
        }
        Ok(())
    }
}
