//! Iterative node-index coreness estimation and the synchronous reference
//! convergence loop.
//!
//! Each node repeatedly replaces its estimate with the h-index of its
//! neighbors' estimates from the previous sweep; external information lifts
//! the operator for nodes whose cut neighbors live in higher-core parts.
//! Estimates start at `deg(v) + E(v)`, descend monotonically, and reach the
//! exact coreness at the fixpoint.

use crate::divide::ExternalInfo;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::metrics::RunMetrics;
use crate::oracle::CorenessMap;

/// The largest `i` such that at least `i` values in `cores` are >= `i`.
/// The empty multiset maps to 0.
pub fn h_operator(cores: &[u32]) -> u32 {
    h_operator_ext(cores, 0)
}

/// External-information variant: `ext + (largest i such that at least i
/// values in cores are >= ext + i)`. Reduces to [`h_operator`] at `ext = 0`.
pub fn h_operator_ext(cores: &[u32], ext: u32) -> u32 {
    let mut counts = vec![0u32; cores.len() + 1];
    ext + h_of(cores.iter().copied(), ext, &mut counts)
}

/// Counting-sort core of the operator. `counts` must hold `len + 1` zeroed
/// slots; values are shifted down by `ext` and clamped to `len`, which leaves
/// the result unchanged.
#[inline]
pub(crate) fn h_of(values: impl Iterator<Item = u32>, ext: u32, counts: &mut [u32]) -> u32 {
    let cap = (counts.len() - 1) as u32;
    for value in values {
        let t = value.saturating_sub(ext).min(cap);
        counts[t as usize] += 1;
    }
    let mut at_least = 0u32;
    for i in (1..=cap).rev() {
        at_least += counts[i as usize];
        if at_least >= i {
            return i;
        }
    }
    0
}

/// How [`decompose_sequential`] seeds the estimates.
#[derive(Debug, Clone)]
pub enum InitEstimate {
    /// `deg(v) + E(v)`, the standard upper-bound start.
    DegreePlusExt,
    /// Caller-supplied start. Must dominate the true coreness of every node
    /// for the monotone-descent and upper-bound properties to hold.
    Explicit(Vec<u32>),
}

/// Snapshot handed to sweep observers.
#[derive(Debug, Clone)]
pub struct EstimateState {
    pub estimates: Vec<u32>,
    /// Sweep counter; 0 is the initial assignment.
    pub iteration: u32,
    /// Which nodes changed in the sweep that produced `estimates`.
    pub changed: Vec<bool>,
}

/// Synchronous (Jacobi) sweeps to the fixpoint: sweep `t + 1` evaluates the
/// operator over sweep-`t` estimates only. Terminates at the first sweep with
/// zero changed nodes and returns the exact coreness values.
pub fn decompose_sequential(
    g: &Graph,
    ext: &ExternalInfo,
    init: InitEstimate,
) -> Result<(CorenessMap, RunMetrics)> {
    decompose_sequential_observed(g, ext, init, |_| {})
}

/// [`decompose_sequential`] with a per-sweep observer, called once with the
/// initial state and once after every sweep.
pub fn decompose_sequential_observed(
    g: &Graph,
    ext: &ExternalInfo,
    init: InitEstimate,
    mut observer: impl FnMut(&EstimateState),
) -> Result<(CorenessMap, RunMetrics)> {
    let n = g.node_count();
    if ext.len() != n {
        return Err(Error::InvalidArgument(format!(
            "external info covers {} nodes, graph has {n}",
            ext.len()
        )));
    }
    let mut metrics = RunMetrics::new();

    let mut prev: Vec<u32> = match init {
        InitEstimate::DegreePlusExt => (0..n as NodeId)
            .map(|v| g.deg(v) + ext.get(v))
            .collect(),
        InitEstimate::Explicit(values) => {
            if values.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "explicit init covers {} nodes, graph has {n}",
                    values.len()
                )));
            }
            values
        }
    };
    let mut state = EstimateState {
        estimates: prev.clone(),
        iteration: 0,
        changed: vec![false; n],
    };
    observer(&state);
    if n == 0 {
        return Ok((CorenessMap::from_values(prev), metrics));
    }

    let neighbor_reads = 2 * g.edge_count() as u64;
    let mut next = vec![0u32; n];
    let mut counts: Vec<u32> = Vec::new();
    loop {
        let mut updates = 0u64;
        for v in 0..n as NodeId {
            let neigh = g.adj(v);
            counts.clear();
            counts.resize(neigh.len() + 1, 0);
            let e = ext.get(v);
            let new = e + h_of(neigh.iter().map(|&u| prev[u as usize]), e, &mut counts);
            let vi = v as usize;
            next[vi] = new;
            state.changed[vi] = new != prev[vi];
            if state.changed[vi] {
                updates += 1;
            }
        }
        metrics.record_sweep(n as u64, neighbor_reads, updates);
        state.iteration += 1;
        state.estimates.copy_from_slice(&next);
        observer(&state);
        if updates == 0 {
            break;
        }
        std::mem::swap(&mut prev, &mut next);
    }

    Ok((CorenessMap::from_values(next), metrics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{load_edge_list, LoadOptions};
    use crate::oracle::peel_coreness;
    use proptest::prelude::*;

    fn load(text: &str) -> Graph {
        load_edge_list(text.as_bytes(), &LoadOptions::default()).unwrap()
    }

    /// Direct enumeration of the definition, independent of the counting
    /// implementation.
    fn h_brute(cores: &[u32], ext: u32) -> u32 {
        let mut best = 0;
        for i in 0..=cores.len() as u32 {
            let qualifying = cores.iter().filter(|&&c| c >= ext + i).count() as u32;
            if qualifying >= i {
                best = i;
            }
        }
        ext + best
    }

    #[test]
    fn h_operator_hand_traces() {
        assert_eq!(h_operator(&[3, 3, 3]), 3);
        assert_eq!(h_operator(&[2, 1, 1]), 1);
        assert_eq!(h_operator(&[]), 0);
    }

    #[test]
    fn h_operator_ext_hand_traces() {
        assert_eq!(h_operator_ext(&[1, 1], 2), 2);
        assert_eq!(h_operator_ext(&[], 5), 5);
        assert_eq!(h_operator_ext(&[4, 4], 0), 2);
    }

    #[test]
    fn k4_converges_in_one_sweep() {
        let g = load("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
        let ext = ExternalInfo::zeros(4);
        let (map, metrics) =
            decompose_sequential(&g, &ext, InitEstimate::DegreePlusExt).unwrap();
        assert_eq!(map.values(), &[3, 3, 3, 3]);
        // degree init is already the fixpoint
        assert_eq!(metrics.updates_per_sweep, vec![0]);
        assert_eq!(metrics.total_updates, 0);
    }

    #[test]
    fn triangle_pendant_matches_oracle() {
        let g = load("0 1\n1 2\n2 0\n0 3\n");
        let ext = ExternalInfo::zeros(4);
        let (map, _) = decompose_sequential(&g, &ext, InitEstimate::DegreePlusExt).unwrap();
        assert_eq!(map.values(), peel_coreness(&g).values());
    }

    #[test]
    fn star_center_drops_from_five_to_one() {
        let g = load("0 1\n0 2\n0 3\n0 4\n0 5\n");
        let ext = ExternalInfo::zeros(6);
        let mut center_trace = Vec::new();
        let (map, _) = decompose_sequential_observed(
            &g,
            &ext,
            InitEstimate::DegreePlusExt,
            |state| center_trace.push(state.estimates[0]),
        )
        .unwrap();
        assert!(map.values().iter().all(|&c| c == 1));
        assert_eq!(center_trace.first(), Some(&5));
        assert_eq!(center_trace.last(), Some(&1));
    }

    #[test]
    fn empty_graph_is_immediate() {
        let g = load("");
        let (map, metrics) =
            decompose_sequential(&g, &ExternalInfo::zeros(0), InitEstimate::DegreePlusExt)
                .unwrap();
        assert!(map.is_empty());
        assert_eq!(metrics.sweeps, 0);
    }

    #[test]
    fn ext_length_mismatch_is_error() {
        let g = load("0 1\n");
        assert!(
            decompose_sequential(&g, &ExternalInfo::zeros(3), InitEstimate::DegreePlusExt)
                .is_err()
        );
        assert!(decompose_sequential(
            &g,
            &ExternalInfo::zeros(2),
            InitEstimate::Explicit(vec![1])
        )
        .is_err());
    }

    #[test]
    fn monotone_and_bounded_by_oracle() {
        let g = load("0 1\n1 2\n2 0\n0 3\n3 4\n4 5\n5 3\n1 4\n");
        let oracle = peel_coreness(&g);
        let mut last: Option<Vec<u32>> = None;
        let mut sweeps = 0;
        decompose_sequential_observed(
            &g,
            &ExternalInfo::zeros(g.node_count()),
            InitEstimate::DegreePlusExt,
            |state| {
                if let Some(prev) = &last {
                    for v in 0..g.node_count() {
                        assert!(state.estimates[v] <= prev[v]);
                    }
                }
                for v in 0..g.node_count() as NodeId {
                    assert!(state.estimates[v as usize] >= oracle.get(v));
                }
                last = Some(state.estimates.clone());
                sweeps = state.iteration;
            },
        )
        .unwrap();
        assert!((sweeps as usize) <= g.node_count());
    }

    proptest! {
        #[test]
        fn reduction_to_plain_operator(cores in prop::collection::vec(0u32..50, 0..40)) {
            prop_assert_eq!(h_operator_ext(&cores, 0), h_operator(&cores));
        }

        #[test]
        fn operator_matches_brute_force(
            cores in prop::collection::vec(0u32..30, 0..30),
            ext in 0u32..20,
        ) {
            prop_assert_eq!(h_operator_ext(&cores, ext), h_brute(&cores, ext));
        }
    }
}
