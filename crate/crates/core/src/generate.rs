//! Seeded synthetic graph generators: Erdos-Renyi G(n, p) and a
//! preferential-attachment power-law model.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticModel {
    /// Each of the `n*(n-1)/2` possible edges is present independently with
    /// probability `edge_prob`.
    ErdosRenyi { nodes: usize, edge_prob: f64 },
    /// Preferential attachment: start from a clique of `attach_m + 1` nodes;
    /// each new node attaches to `attach_m` distinct existing nodes chosen
    /// with degree-proportional probability.
    PowerLawBa { nodes: usize, attach_m: usize },
}

/// Generate a graph, deterministically for a fixed `(model, seed)` pair.
/// Node ids are `0..n` in both the internal and external id spaces.
pub fn generate_synthetic(model: &SyntheticModel, seed: u64) -> Result<Graph> {
    match *model {
        SyntheticModel::ErdosRenyi { nodes, edge_prob } => erdos_renyi(nodes, edge_prob, seed),
        SyntheticModel::PowerLawBa { nodes, attach_m } => powerlaw_ba(nodes, attach_m, seed),
    }
}

fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "erdos_renyi requires at least one node".to_string(),
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    if p == 0.0 {
        return Graph::from_edges(n, &[]);
    }
    if p == 1.0 {
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for v in 1..n as NodeId {
            for u in 0..v {
                edges.push((u, v));
            }
        }
        return Graph::from_edges(n, &edges);
    }

    // Geometric skip sampling over the lower-triangular pair space, so the
    // cost is proportional to the number of edges drawn rather than n^2.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::new();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen_range(0.0..1.0);
        let skip = ((1.0 - r).ln() / log_q).floor() as i64;
        w += 1 + skip.max(0);
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as NodeId, v as NodeId));
        }
    }
    Graph::from_edges(n, &edges)
}

fn powerlaw_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "powerlaw_ba requires at least one node".to_string(),
        ));
    }
    if m < 1 || m >= n {
        return Err(Error::InvalidArgument(format!(
            "attach_m must satisfy 1 <= attach_m < n (got attach_m = {m}, n = {n})"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m * (n - m - 1) + m * (m + 1) / 2);
    // One entry per incident edge endpoint; sampling an index uniformly is
    // degree-proportional sampling of a node.
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * edges.capacity());

    for v in 1..=m as NodeId {
        for u in 0..v {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }

    let mut chosen: Vec<NodeId> = Vec::with_capacity(m);
    for v in (m + 1)..n {
        chosen.clear();
        while chosen.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((t, v as NodeId));
            endpoints.push(t);
            endpoints.push(v as NodeId);
        }
    }
    Graph::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_zero_probability() {
        let g = generate_synthetic(
            &SyntheticModel::ErdosRenyi {
                nodes: 10,
                edge_prob: 0.0,
            },
            7,
        )
        .unwrap();
        assert_eq!(g.node_count(), 10);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn er_full_probability_is_complete() {
        for seed in [0, 1, 99] {
            let g = generate_synthetic(
                &SyntheticModel::ErdosRenyi {
                    nodes: 4,
                    edge_prob: 1.0,
                },
                seed,
            )
            .unwrap();
            assert_eq!(g.node_count(), 4);
            assert_eq!(g.edge_count(), 6);
        }
    }

    #[test]
    fn er_deterministic_and_valid() {
        let model = SyntheticModel::ErdosRenyi {
            nodes: 500,
            edge_prob: 0.01,
        };
        let a = generate_synthetic(&model, 42).unwrap();
        let b = generate_synthetic(&model, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(&model, 43).unwrap();
        assert_ne!(a.edges_external(), c.edges_external());
        let total: u32 = a.degrees().iter().sum();
        assert_eq!(total as usize, 2 * a.edge_count());
    }

    #[test]
    fn ba_edge_count_forced_by_construction() {
        // clique on attach_m + 1 nodes, then attach_m edges per later node
        let g = generate_synthetic(
            &SyntheticModel::PowerLawBa {
                nodes: 1000,
                attach_m: 3,
            },
            42,
        )
        .unwrap();
        assert_eq!(g.edge_count(), 3 * (1000 - 3) + 3);
        assert_eq!(g.node_count(), 1000);
    }

    #[test]
    fn ba_min_degree_is_attach_m() {
        let g = generate_synthetic(
            &SyntheticModel::PowerLawBa {
                nodes: 200,
                attach_m: 2,
            },
            5,
        )
        .unwrap();
        assert!(g.degrees().iter().all(|&d| d >= 2));
    }

    #[test]
    fn ba_deterministic() {
        let model = SyntheticModel::PowerLawBa {
            nodes: 300,
            attach_m: 4,
        };
        let a = generate_synthetic(&model, 11).unwrap();
        let b = generate_synthetic(&model, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(generate_synthetic(
            &SyntheticModel::ErdosRenyi {
                nodes: 0,
                edge_prob: 0.5
            },
            0
        )
        .is_err());
        assert!(generate_synthetic(
            &SyntheticModel::ErdosRenyi {
                nodes: 5,
                edge_prob: 1.5
            },
            0
        )
        .is_err());
        assert!(generate_synthetic(
            &SyntheticModel::PowerLawBa {
                nodes: 2,
                attach_m: 5
            },
            0
        )
        .is_err());
        assert!(generate_synthetic(
            &SyntheticModel::PowerLawBa {
                nodes: 4,
                attach_m: 0
            },
            0
        )
        .is_err());
    }
}
