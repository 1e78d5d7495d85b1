//! Exact peeling algorithms: ground truth for every iterative engine and the
//! subgraph extraction primitive behind exact division.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph, NodeId, SubgraphView};

/// Coreness value per node, indexed by internal id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorenessMap {
    values: Vec<u32>,
    k_max: u32,
}

impl CorenessMap {
    pub fn from_values(values: Vec<u32>) -> Self {
        let k_max = values.iter().copied().max().unwrap_or(0);
        Self { values, k_max }
    }

    pub fn get(&self, v: NodeId) -> u32 {
        self.values[v as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }
}

/// Exact coreness of every node by bucket-queue peeling, O(n + m).
/// Isolated nodes get coreness 0; the result is independent of peeling order.
pub fn peel_coreness(g: &Graph) -> CorenessMap {
    let n = g.node_count();
    if n == 0 {
        return CorenessMap::from_values(Vec::new());
    }

    let mut core: Vec<u32> = g.degrees();
    let max_deg = *core.iter().max().unwrap() as usize;

    // Counting sort of nodes by degree; bin[d] is the start of the degree-d
    // block in vert.
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &core {
        bin[d as usize] += 1;
    }
    let mut start = 0usize;
    for slot in bin.iter_mut() {
        let width = *slot;
        *slot = start;
        start += width;
    }
    let mut vert = vec![0 as NodeId; n];
    let mut pos = vec![0usize; n];
    for v in 0..n as NodeId {
        let d = core[v as usize] as usize;
        pos[v as usize] = bin[d];
        vert[bin[d]] = v;
        bin[d] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = vert[i];
        for &u in g.adj(v) {
            if core[u as usize] > core[v as usize] {
                let du = core[u as usize] as usize;
                let pu = pos[u as usize];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    vert.swap(pu, pw);
                    pos[u as usize] = pw;
                    pos[w as usize] = pu;
                }
                bin[du] += 1;
                core[u as usize] -= 1;
            }
        }
    }

    CorenessMap::from_values(core)
}

/// Membership mask of the k-core plus the number of peeling passes it took
/// (the initial scan counts as one pass, each cascade wave adds one).
pub(crate) fn kcore_mask(g: &Graph, k: u32) -> (Vec<bool>, usize) {
    let n = g.node_count();
    let mut alive = vec![true; n];
    if k == 0 {
        return (alive, 1);
    }
    let mut deg = g.degrees();
    let mut frontier: Vec<NodeId> = Vec::new();
    for v in 0..n as NodeId {
        if deg[v as usize] < k {
            alive[v as usize] = false;
            frontier.push(v);
        }
    }
    let mut rounds = 1usize;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &v in &frontier {
            for &u in g.adj(v) {
                if alive[u as usize] {
                    deg[u as usize] -= 1;
                    if deg[u as usize] < k {
                        alive[u as usize] = false;
                        next.push(u);
                    }
                }
            }
        }
        if !next.is_empty() {
            rounds += 1;
        }
        frontier = next;
    }
    (alive, rounds)
}

pub(crate) fn mask_members(mask: &[bool], keep: bool) -> Vec<NodeId> {
    mask.iter()
        .enumerate()
        .filter(|&(_, &m)| m == keep)
        .map(|(v, _)| v as NodeId)
        .collect()
}

/// The maximal induced subgraph with minimum internal degree >= k.
/// `extract_kcore(g, 0)` is the whole graph; an empty view means no k-core
/// exists.
pub fn extract_kcore(g: &Graph, k: u32) -> SubgraphView {
    let (mask, _) = kcore_mask(g, k);
    let members = mask_members(&mask, true);
    induced_subgraph(g, &members).expect("k-core members are valid by construction")
}

/// True iff `candidate` is exactly the node set of the k-core (checks both
/// the minimum-degree property and maximality).
pub fn verify_kcore(g: &Graph, candidate: &[NodeId], k: u32) -> bool {
    let n = g.node_count();
    if candidate.iter().any(|&v| (v as usize) >= n) {
        return false;
    }
    let mut sorted = candidate.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != candidate.len() {
        return false;
    }
    let (mask, _) = kcore_mask(g, k);
    sorted == mask_members(&mask, true)
}

/// Write one `external_id<TAB>coreness` line per node, sorted by external id.
pub fn write_coreness<W: Write>(g: &Graph, map: &CorenessMap, mut out: W) -> Result<()> {
    if map.len() != g.node_count() {
        return Err(Error::InvalidArgument(format!(
            "coreness map covers {} nodes, graph has {}",
            map.len(),
            g.node_count()
        )));
    }
    let mut rows: Vec<(u64, u32)> = (0..g.node_count() as NodeId)
        .map(|v| (g.external_id(v), map.get(v)))
        .collect();
    rows.sort_unstable();
    for (id, c) in rows {
        writeln!(out, "{id}\t{c}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{load_edge_list, LoadOptions};

    fn load(text: &str) -> Graph {
        load_edge_list(text.as_bytes(), &LoadOptions::default()).unwrap()
    }

    fn k4() -> Graph {
        load("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    }

    /// triangle a=0, b=1, c=2 plus pendant d=3 attached to a
    fn triangle_pendant() -> Graph {
        load("0 1\n1 2\n2 0\n0 3\n")
    }

    #[test]
    fn complete_graph_coreness() {
        let map = peel_coreness(&k4());
        assert_eq!(map.values(), &[3, 3, 3, 3]);
        assert_eq!(map.k_max(), 3);
    }

    #[test]
    fn triangle_with_pendant_coreness() {
        let map = peel_coreness(&triangle_pendant());
        assert_eq!(map.values(), &[2, 2, 2, 1]);
    }

    #[test]
    fn path_coreness_all_one() {
        let g = load("0 1\n1 2\n2 3\n3 4\n");
        assert_eq!(peel_coreness(&g).values(), &[1, 1, 1, 1, 1]);
    }

    #[test]
    fn empty_graph_k_max_zero() {
        let g = load("");
        let map = peel_coreness(&g);
        assert!(map.is_empty());
        assert_eq!(map.k_max(), 0);
    }

    #[test]
    fn extract_k3_of_k4_is_everything() {
        let view = extract_kcore(&k4(), 3);
        assert_eq!(view.members(), &[0, 1, 2, 3]);
    }

    #[test]
    fn extract_2core_drops_pendant() {
        let view = extract_kcore(&triangle_pendant(), 2);
        assert_eq!(view.members(), &[0, 1, 2]);
        assert_eq!(view.graph().edge_count(), 3);
    }

    #[test]
    fn extract_above_max_degree_is_empty() {
        let g = triangle_pendant();
        let view = extract_kcore(&g, g.max_degree() + 1);
        assert_eq!(view.node_count(), 0);
    }

    #[test]
    fn extract_zero_is_identity() {
        let g = triangle_pendant();
        let view = extract_kcore(&g, 0);
        assert_eq!(view.node_count(), g.node_count());
        assert_eq!(view.graph().edge_count(), g.edge_count());
    }

    #[test]
    fn verify_kcore_checks_maximality() {
        let g = k4();
        assert!(verify_kcore(&g, &[0, 1, 2, 3], 3));
        assert!(!verify_kcore(&g, &[0, 1, 2], 2)); // node 3 also belongs
        let tp = triangle_pendant();
        assert!(verify_kcore(&tp, &[0, 1, 2], 2));
        assert!(!verify_kcore(&tp, &[0, 1, 2, 9], 2));
        assert!(!verify_kcore(&tp, &[0, 0, 1, 2], 2));
    }

    #[test]
    fn nested_cores() {
        let g = triangle_pendant();
        let mut prev: Vec<NodeId> = (0..g.node_count() as NodeId).collect();
        for k in 0..=g.max_degree() + 1 {
            let cur = extract_kcore(&g, k).members().to_vec();
            assert!(cur.iter().all(|v| prev.contains(v)), "k = {k}");
            prev = cur;
        }
    }

    #[test]
    fn membership_matches_coreness() {
        let g = triangle_pendant();
        let map = peel_coreness(&g);
        for k in 0..=map.k_max() + 1 {
            let members = extract_kcore(&g, k).members().to_vec();
            for v in 0..g.node_count() as NodeId {
                assert_eq!(members.contains(&v), map.get(v) >= k);
            }
        }
    }

    #[test]
    fn coreness_bounded_by_degree() {
        let g = load("0 1\n0 2\n0 3\n0 4\n0 5\n1 2\n");
        let map = peel_coreness(&g);
        for v in 0..g.node_count() as NodeId {
            assert!(map.get(v) <= g.degree(v).unwrap());
        }
    }

    #[test]
    fn writer_sorted_by_external_id() {
        let g = load("30 10\n10 20\n20 30\n");
        let map = peel_coreness(&g);
        let mut buf = Vec::new();
        write_coreness(&g, &map, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "10\t2\n20\t2\n30\t2\n");
    }
}
