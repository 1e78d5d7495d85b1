//! Graph data model: CSR adjacency storage, edge-list ingestion, and
//! induced subgraph construction.
//!
//! Graphs are undirected and simple. External node ids are arbitrary 64-bit
//! integers remapped to dense internal ids `0..n`, so adjacency can be
//! array-backed.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Internal node identifier, dense in `0..node_count`.
pub type NodeId = u32;

/// Undirected simple graph in compressed sparse row form.
///
/// Invariants enforced at construction:
/// - adjacency is symmetric and free of self-loops and duplicates,
/// - neighbor lists are sorted ascending by internal id,
/// - the sum of neighbor-list lengths equals `2 * edge_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    edge_count: usize,
    ext_ids: Vec<u64>,
}

/// Options for [`load_edge_list`].
///
/// With `dedupe` or `drop_self_loops` set to `false` the loader refuses
/// inputs containing duplicates or self-loops instead of keeping them, since
/// the graph invariants do not admit either.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub dedupe: bool,
    pub drop_self_loops: bool,
    /// Force the node set to external ids `0..count`, so nodes that appear
    /// in no edge are kept as isolated nodes.
    pub node_count: Option<usize>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            dedupe: true,
            drop_self_loops: true,
            node_count: None,
        }
    }
}

impl Graph {
    /// Build a graph over `node_count` nodes from internal-id edges.
    /// Self-loops are dropped and duplicate edges collapsed. External ids
    /// default to the identity mapping.
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Graph> {
        let ext_ids = (0..node_count as u64).collect();
        Self::build(node_count, edges, ext_ids, true, true)
    }

    fn build(
        node_count: usize,
        edges: &[(NodeId, NodeId)],
        ext_ids: Vec<u64>,
        dedupe: bool,
        drop_self_loops: bool,
    ) -> Result<Graph> {
        debug_assert_eq!(ext_ids.len(), node_count);
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); node_count];
        for &(a, b) in edges {
            if (a as usize) >= node_count || (b as usize) >= node_count {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) out of range for {node_count} nodes"
                )));
            }
            if a == b {
                if drop_self_loops {
                    continue;
                }
                return Err(Error::InvalidArgument(format!(
                    "self-loop at node {}",
                    ext_ids[a as usize]
                )));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        let mut half_edges = 0usize;
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            if !dedupe && list.len() != before {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edges at node {}",
                    ext_ids[v]
                )));
            }
            half_edges += list.len();
        }
        debug_assert_eq!(half_edges % 2, 0);
        let mut offsets = Vec::with_capacity(node_count + 1);
        let mut targets = Vec::with_capacity(half_edges);
        offsets.push(0);
        for list in &adj {
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Ok(Graph {
            offsets,
            targets,
            edge_count: half_edges / 2,
            ext_ids,
        })
    }

    /// Build from external-id pairs, remapping ids to dense internal ids in
    /// first-appearance order (or identity when `node_count` is forced).
    pub fn from_external_edges(pairs: &[(u64, u64)], options: &LoadOptions) -> Result<Graph> {
        let (node_count, ext_ids, edges) = match options.node_count {
            Some(count) => {
                if count > u32::MAX as usize {
                    return Err(Error::InvalidArgument(format!(
                        "node count {count} exceeds the supported id space"
                    )));
                }
                let mut edges = Vec::with_capacity(pairs.len());
                for &(a, b) in pairs {
                    if a >= count as u64 || b >= count as u64 {
                        return Err(Error::InvalidArgument(format!(
                            "edge ({a}, {b}) out of range for declared node count {count}"
                        )));
                    }
                    edges.push((a as NodeId, b as NodeId));
                }
                (count, (0..count as u64).collect(), edges)
            }
            None => {
                let mut map: HashMap<u64, NodeId> = HashMap::new();
                let mut ext_ids: Vec<u64> = Vec::new();
                let intern = |id: u64, map: &mut HashMap<u64, NodeId>, ext: &mut Vec<u64>| {
                    *map.entry(id).or_insert_with(|| {
                        ext.push(id);
                        (ext.len() - 1) as NodeId
                    })
                };
                let mut edges = Vec::with_capacity(pairs.len());
                for &(a, b) in pairs {
                    let u = intern(a, &mut map, &mut ext_ids);
                    let v = intern(b, &mut map, &mut ext_ids);
                    edges.push((u, v));
                }
                if ext_ids.len() > u32::MAX as usize {
                    return Err(Error::InvalidArgument(
                        "too many distinct node ids".to_string(),
                    ));
                }
                (ext_ids.len(), ext_ids, edges)
            }
        };
        Self::build(
            node_count,
            &edges,
            ext_ids,
            options.dedupe,
            options.drop_self_loops,
        )
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Neighbor list of `v`, sorted ascending. Errors on out-of-range ids.
    pub fn neighbors(&self, v: NodeId) -> Result<&[NodeId]> {
        if (v as usize) >= self.node_count() {
            return Err(Error::InvalidArgument(format!(
                "node {v} out of range (n = {})",
                self.node_count()
            )));
        }
        Ok(self.adj(v))
    }

    pub fn degree(&self, v: NodeId) -> Result<u32> {
        Ok(self.neighbors(v)?.len() as u32)
    }

    /// Unchecked neighbor access for internal hot paths.
    #[inline]
    pub(crate) fn adj(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    #[inline]
    pub(crate) fn deg(&self, v: NodeId) -> u32 {
        (self.offsets[v as usize + 1] - self.offsets[v as usize]) as u32
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.node_count() as NodeId).map(|v| self.deg(v)).collect()
    }

    pub fn max_degree(&self) -> u32 {
        (0..self.node_count() as NodeId)
            .map(|v| self.deg(v))
            .max()
            .unwrap_or(0)
    }

    pub fn external_id(&self, v: NodeId) -> u64 {
        self.ext_ids[v as usize]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.ext_ids
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u != v && (u as usize) < self.node_count() && self.adj(u).binary_search(&v).is_ok()
    }

    /// Internal edges with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count() as NodeId)
            .flat_map(move |v| self.adj(v).iter().filter(move |&&u| u > v).map(move |&u| (v, u)))
    }

    /// External-id edges, normalized to `(min, max)` and sorted.
    pub fn edges_external(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = self
            .edges()
            .map(|(u, v)| {
                let a = self.external_id(u);
                let b = self.external_id(v);
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// A materialized induced subgraph plus the two-way id mapping to the graph
/// it was cut from. Subgraph-internal id `i` corresponds to parent id
/// `members()[i]`; external ids carry over from the parent.
#[derive(Debug, Clone)]
pub struct SubgraphView {
    graph: Graph,
    parent_ids: Vec<NodeId>,
}

impl SubgraphView {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Member node set, as sorted parent ids.
    pub fn members(&self) -> &[NodeId] {
        &self.parent_ids
    }

    pub fn node_count(&self) -> usize {
        self.parent_ids.len()
    }

    pub fn to_parent(&self, sub: NodeId) -> NodeId {
        self.parent_ids[sub as usize]
    }

    pub fn from_parent(&self, parent: NodeId) -> Option<NodeId> {
        self.parent_ids
            .binary_search(&parent)
            .ok()
            .map(|i| i as NodeId)
    }

    pub fn into_parts(self) -> (Graph, Vec<NodeId>) {
        (self.graph, self.parent_ids)
    }
}

/// Materialize the subgraph of `g` induced by `members`.
///
/// The id mapping is the bijection between the sorted member set and
/// `0..members.len()`. Duplicate or out-of-range members are rejected.
pub fn induced_subgraph(g: &Graph, members: &[NodeId]) -> Result<SubgraphView> {
    let n = g.node_count();
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidArgument(format!(
                "duplicate member id {}",
                w[0]
            )));
        }
    }
    if let Some(&last) = sorted.last() {
        if (last as usize) >= n {
            return Err(Error::InvalidArgument(format!(
                "member id {last} out of range (n = {n})"
            )));
        }
    }

    const ABSENT: NodeId = NodeId::MAX;
    let mut position = vec![ABSENT; n];
    for (i, &p) in sorted.iter().enumerate() {
        position[p as usize] = i as NodeId;
    }

    let mut offsets = Vec::with_capacity(sorted.len() + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for &p in &sorted {
        // Parent lists are sorted and the member mapping is monotone, so the
        // remapped list stays sorted.
        for &q in g.adj(p) {
            let sq = position[q as usize];
            if sq != ABSENT {
                targets.push(sq);
            }
        }
        offsets.push(targets.len());
    }
    debug_assert_eq!(targets.len() % 2, 0);
    let edge_count = targets.len() / 2;
    let ext_ids = sorted.iter().map(|&p| g.external_id(p)).collect();

    Ok(SubgraphView {
        graph: Graph {
            offsets,
            targets,
            edge_count,
            ext_ids,
        },
        parent_ids: sorted,
    })
}

/// Parse a whitespace-separated edge list: one `u v` pair per line, blank
/// lines and lines starting with `#` ignored. Empty input yields the empty
/// graph.
pub fn load_edge_list<R: BufRead>(reader: R, options: &LoadOptions) -> Result<Graph> {
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (a, b, extra) = (tokens.next(), tokens.next(), tokens.next());
        let (a, b) = match (a, b, extra) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "expected exactly two node ids".to_string(),
                })
            }
        };
        let parse = |tok: &str| -> Result<u64> {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("expected integer node id, found {tok:?}"),
            })
        };
        pairs.push((parse(a)?, parse(b)?));
    }
    Graph::from_external_edges(&pairs, options)
}

/// Write one `u<TAB>v` line per undirected edge with `u < v`, in external
/// ids, sorted. The inverse of [`load_edge_list`] up to id relabeling.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    for (a, b) in g.edges_external() {
        writeln!(out, "{a}\t{b}")?;
    }
    Ok(())
}
