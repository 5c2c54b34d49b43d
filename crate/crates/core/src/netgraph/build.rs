use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::Geometric;

use super::{DirectedGraph, Role};
use crate::{Error, NodeId, Result};

/// Directed `G(n, p)`: every ordered pair `(u, v)`, `u != v`, gets the edge
/// `u -> v` independently with probability `p`.
///
/// Pairs are enumerated in row-major order and the generator jumps between
/// successes with geometric skips, so the cost is proportional to the number
/// of edges rather than `n^2`.
pub fn gen_gnp_directed(n: usize, p: f64, seed: u64) -> Result<DirectedGraph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut out_edges = vec![Vec::new(); n];
    if n == 1 || p == 0.0 {
        return Ok(DirectedGraph::from_adjacency(out_edges));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let skips = Geometric::new(p).map_err(|_| Error::InvalidProbability(p))?;
    let row = n as u64 - 1;
    let total = n as u64 * row;
    let mut pos = 0u64;
    loop {
        pos = match pos.checked_add(skips.sample(&mut rng)) {
            Some(next) if next < total => next,
            _ => break,
        };
        let u = pos / row;
        let j = pos % row;
        let v = if j >= u { j + 1 } else { j };
        out_edges[u as usize].push(v as NodeId);
        pos += 1;
    }
    Ok(DirectedGraph::from_adjacency(out_edges))
}

/// Node ids of the layered lower-bound network.
///
/// Stars `S_1..S_{log n}` come first, each stored as its center followed by
/// its `2^i` leaves. The path `v_0..v_L` follows, with `v_0` doubling as
/// `c_{log n + 1}`. The broadcast source is `c_1`, node 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundLayout {
    pub log_n: u32,
    pub diameter: u64,
    /// `centers[i - 1]` is `c_i`.
    pub centers: Vec<NodeId>,
    /// `leaves[i - 1]` is the id range of the leaves of `S_i`.
    pub leaves: Vec<std::ops::Range<NodeId>>,
    pub path: std::ops::Range<NodeId>,
}

impl LowerBoundLayout {
    pub fn new(n: u64, diameter: u64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let log_n = n.trailing_zeros();
        let min = 4 * log_n as u64;
        if diameter <= min {
            return Err(Error::DiameterTooSmall { diameter, min });
        }
        let mut centers = Vec::with_capacity(log_n as usize);
        let mut leaves = Vec::with_capacity(log_n as usize);
        let mut next: NodeId = 0;
        for i in 1..=log_n {
            centers.push(next);
            let first = next + 1;
            next = first + (1 << i);
            leaves.push(first..next);
        }
        let path_len = diameter - 2 * log_n as u64;
        let path = next..next + path_len as NodeId + 1;
        Ok(Self {
            log_n,
            diameter,
            centers,
            leaves,
            path,
        })
    }

    pub fn node_count(&self) -> usize {
        self.path.end as usize
    }

    pub fn source(&self) -> NodeId {
        self.centers[0]
    }

    /// The node every leaf of `S_i` points at: `c_{i+1}`, or `v_0` for the
    /// last star.
    pub fn next_center(&self, i: u32) -> NodeId {
        if i < self.log_n {
            self.centers[i as usize]
        } else {
            self.path.start
        }
    }
}

/// Layered network of stars followed by a path, used to show that any
/// time-invariant send distribution pays many transmissions per node.
///
/// `c_i` reaches each of its `2^i` leaves, every leaf of `S_i` reaches
/// `c_{i+1}`, the leaves of the last star reach `v_0`, and the path runs
/// `v_0 -> v_1 -> ... -> v_L` with `L = D - 2 log n`. The eccentricity of
/// `c_1` is exactly `D`.
pub fn gen_lowerbound_network(n: u64, diameter: u64) -> Result<DirectedGraph> {
    let layout = LowerBoundLayout::new(n, diameter)?;
    let mut g = DirectedGraph::empty(layout.node_count());
    for i in 1..=layout.log_n {
        let center = layout.centers[i as usize - 1];
        let next = layout.next_center(i);
        g.labels.insert(center, Role::Center(i));
        for leaf in layout.leaves[i as usize - 1].clone() {
            g.push_edge(center, leaf);
            g.push_edge(leaf, next);
            g.labels.insert(leaf, Role::Leaf(i));
        }
    }
    for (j, v) in layout.path.clone().enumerate() {
        g.labels.insert(v, Role::Path(j as u32));
        if v + 1 < layout.path.end {
            g.push_edge(v, v + 1);
        }
    }
    Ok(g)
}

/// The `3n + 1` node dumbbell: source `s` (node 0) reaches intermediates
/// `u_1..u_{2n}` (nodes `1..=2n`), and destination `d_i` (node `2n + i`)
/// hears exactly `u_{2i-1}` and `u_{2i}`.
pub fn gen_star_dumbbell(n: usize) -> Result<DirectedGraph> {
    if n == 0 {
        return Err(Error::InvalidConfig("dumbbell needs n >= 1".into()));
    }
    let mut g = DirectedGraph::empty(3 * n + 1);
    g.labels.insert(0, Role::Source);
    for j in 1..=2 * n {
        let u = j as NodeId;
        g.push_edge(0, u);
        g.labels.insert(u, Role::Intermediate(j as u32));
    }
    for i in 1..=n {
        let d = (2 * n + i) as NodeId;
        g.push_edge((2 * i - 1) as NodeId, d);
        g.push_edge((2 * i) as NodeId, d);
        g.labels.insert(d, Role::Destination(i as u32));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::bfs_eccentricity;
    use proptest::prelude::*;
    use crate::ceil_log2;

    /// Node count of the lower-bound network, by formula.
    fn lowerbound_node_count(n: u64, diameter: u64) -> u64 {
        let log_n = ceil_log2(n) as u64;
        (1..=log_n).map(|i| (1u64 << i) + 1).sum::<u64>() + diameter - 2 * log_n + 1
    }

    #[test]
    fn gnp_extremes() {
        let g = gen_gnp_directed(3, 1.0, 7).unwrap();
        assert_eq!(g.edge_count(), 6);
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(g.has_edge(u, v), u != v);
            }
        }
        assert_eq!(gen_gnp_directed(5, 0.0, 7).unwrap().edge_count(), 0);
        assert_eq!(gen_gnp_directed(1, 1.0, 7).unwrap().edge_count(), 0);
    }

    #[test]
    fn gnp_rejects_bad_input() {
        assert!(matches!(gen_gnp_directed(0, 0.5, 1), Err(Error::EmptyGraph)));
        assert!(matches!(
            gen_gnp_directed(4, 1.5, 1),
            Err(Error::InvalidProbability(_))
        ));
        assert!(gen_gnp_directed(4, -0.1, 1).is_err());
        assert!(gen_gnp_directed(4, f64::NAN, 1).is_err());
    }

    #[test]
    fn gnp_edge_count_concentrates() {
        let (n, p) = (1024usize, 0.0677);
        let pairs = (n * (n - 1)) as f64;
        let mean = pairs * p;
        let sigma = (pairs * p * (1.0 - p)).sqrt();
        let g = gen_gnp_directed(n, p, 20240601).unwrap();
        let m = g.edge_count() as f64;
        assert!((m - mean).abs() <= 5.0 * sigma, "m={m} mean={mean} sigma={sigma}");
    }

    #[test]
    fn gnp_pair_frequencies_are_uniform() {
        // Every ordered pair should appear with frequency p over many seeds.
        let (n, p, seeds) = (6usize, 0.3, 4000u64);
        let mut hits = vec![0u32; n * n];
        for s in 0..seeds {
            for (u, v) in gen_gnp_directed(n, p, s).unwrap().edges() {
                hits[u as usize * n + v as usize] += 1;
            }
        }
        let sigma = (seeds as f64 * p * (1.0 - p)).sqrt();
        for u in 0..n {
            for v in 0..n {
                let h = hits[u * n + v] as f64;
                if u == v {
                    assert_eq!(h, 0.0);
                } else {
                    assert!((h - seeds as f64 * p).abs() < 5.0 * sigma, "({u},{v}) {h}");
                }
            }
        }
    }

    #[test]
    fn lowerbound_counts_and_eccentricity() {
        let g = gen_lowerbound_network(16, 20).unwrap();
        assert_eq!(g.n(), 47);
        assert_eq!(lowerbound_node_count(16, 20), 47);
        assert!(g.n() <= 2 * 16 + 20);
        assert_eq!(bfs_eccentricity(&g, 0), Some(20));
        assert_eq!(g.labels().len(), g.n());
        let layout = LowerBoundLayout::new(16, 20).unwrap();
        assert_eq!(layout.path.len(), 13);
        assert_eq!(g.label(layout.source()), Some(Role::Center(1)));
    }

    #[test]
    fn lowerbound_preconditions() {
        assert!(matches!(gen_lowerbound_network(3, 20), Err(Error::NotPowerOfTwo(3))));
        assert!(matches!(
            gen_lowerbound_network(16, 16),
            Err(Error::DiameterTooSmall { diameter: 16, min: 16 })
        ));
        assert!(gen_lowerbound_network(16, 17).is_ok());
    }

    #[test]
    fn lowerbound_structure() {
        let g = gen_lowerbound_network(8, 13).unwrap();
        let layout = LowerBoundLayout::new(8, 13).unwrap();
        let ins = g.in_neighbors();
        for i in 1..=3u32 {
            let c = layout.centers[i as usize - 1];
            for leaf in layout.leaves[i as usize - 1].clone() {
                assert_eq!(ins[leaf as usize], vec![c]);
                assert_eq!(g.out_neighbors(leaf), &[layout.next_center(i)]);
            }
            assert_eq!(
                ins[layout.next_center(i) as usize].len(),
                1 << i,
                "next center hears exactly the leaves of S_{i}"
            );
        }
    }

    #[test]
    fn dumbbell_structure() {
        let g = gen_star_dumbbell(4).unwrap();
        assert_eq!(g.n(), 13);
        assert_eq!(g.out_neighbors(0).len(), 8);
        let ins = g.in_degrees();
        let dests = g.nodes_with(|r| matches!(r, Role::Destination(_)));
        assert_eq!(dests.len(), 4);
        assert_eq!(dests.iter().map(|&d| ins[d as usize]).sum::<usize>(), 8);
        for d in dests {
            assert_eq!(ins[d as usize], 2);
            assert!(g.out_neighbors(d).is_empty());
        }
        for u in g.nodes_with(|r| matches!(r, Role::Intermediate(_))) {
            assert_eq!(ins[u as usize], 1);
            assert!(g.has_edge(0, u));
        }

        let g1 = gen_star_dumbbell(1).unwrap();
        assert_eq!(g1.n(), 4);
        assert_eq!(g1.in_degrees()[3], 2);
        assert!(gen_star_dumbbell(0).is_err());
    }

    proptest! {
        #[test]
        fn gnp_is_reproducible(n in 1usize..40, p in 0.0f64..=1.0, seed: u64) {
            let a = gen_gnp_directed(n, p, seed).unwrap();
            let b = gen_gnp_directed(n, p, seed).unwrap();
            prop_assert_eq!(&a, &b);
            for (u, v) in a.edges() {
                prop_assert!(u != v);
            }
            let rebuilt = DirectedGraph::from_edges(n, a.edges());
            prop_assert!(rebuilt.is_ok());
        }

        #[test]
        fn lowerbound_size_formula(log_n in 1u32..8, extra in 1u64..40) {
            let n = 1u64 << log_n;
            let d = 4 * log_n as u64 + extra;
            let g = gen_lowerbound_network(n, d).unwrap();
            prop_assert_eq!(g.n() as u64, lowerbound_node_count(n, d));
            prop_assert!(g.n() as u64 <= 2 * n + d);
            prop_assert_eq!(bfs_eccentricity(&g, 0), Some(d as u32));
        }
    }
}
