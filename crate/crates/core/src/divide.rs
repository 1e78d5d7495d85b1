//! Graph division strategies, external-information generation, multi-part
//! planning, and result merging.
//!
//! A division splits the graph at a coreness (or degree) threshold into an
//! upper part and a remainder. Cut edges from a remainder node to the upper
//! part are summarized as that node's external information: a count of
//! neighbors whose coreness is known to dominate everything in the remainder.
//! Decomposing the remainder with the lifted operator then reproduces the
//! exact coreness values, so per-part results merge into the full answer.

use serde::{Deserialize, Serialize};

use crate::distsim::{run_distributed, SimConfig};
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph, NodeId, SubgraphView};
use crate::hindex::{decompose_sequential, InitEstimate};
use crate::metrics::{timed, RunMetrics};
use crate::oracle::{kcore_mask, mask_members, CorenessMap};

/// Per-node count of cut neighbors in higher parts. Zero when a node has no
/// cut neighbors; always bounded by the node's coreness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalInfo {
    counts: Vec<u32>,
}

impl ExternalInfo {
    pub fn zeros(n: usize) -> Self {
        Self {
            counts: vec![0; n],
        }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    pub fn get(&self, v: NodeId) -> u32 {
        self.counts[v as usize]
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Sum of all counts; at a two-part split this equals the number of cut
    /// edges.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exact,
    Rough,
}

/// An ordered multi-part split: `thresholds.len() + 1` parts separated by
/// strictly increasing thresholds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisionPlan {
    pub strategy: Strategy,
    pub thresholds: Vec<u32>,
}

impl DivisionPlan {
    pub fn new(strategy: Strategy, thresholds: Vec<u32>) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::InvalidArgument(
                "a division plan needs at least one threshold".to_string(),
            ));
        }
        if thresholds[0] < 1 {
            return Err(Error::InvalidArgument(
                "thresholds must be at least 1".to_string(),
            ));
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "thresholds must be strictly increasing, got {thresholds:?}"
            )));
        }
        Ok(Self {
            strategy,
            thresholds,
        })
    }

    pub fn parts(&self) -> usize {
        self.thresholds.len() + 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plan serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            strategy: Strategy,
            thresholds: Vec<u32>,
        }
        let raw: Raw = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("bad plan JSON: {e}")))?;
        Self::new(raw.strategy, raw.thresholds)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExactDivideStats {
    /// Peeling passes over node sets (initial scan plus cascade waves).
    pub peel_rounds: usize,
    pub extract_seconds: f64,
    pub ext_gen_seconds: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RoughDivideStats {
    /// Always 1: rough extraction is a single degree scan, no peeling.
    pub node_passes: usize,
    pub extract_seconds: f64,
}

pub struct ExactSplit {
    /// The exact k-core of the input.
    pub upper: SubgraphView,
    /// Everything else, with cut edges summarized in `ext`.
    pub lower: SubgraphView,
    /// Indexed by `lower`'s internal ids.
    pub ext: ExternalInfo,
    pub stats: ExactDivideStats,
}

/// Split at threshold `k` into the exact k-core and the remainder, counting
/// each remainder node's neighbors inside the core. Every input edge lands in
/// exactly one of upper, lower, or the cut set.
pub fn exact_divide(g: &Graph, k: u32) -> Result<ExactSplit> {
    if k < 1 {
        return Err(Error::InvalidArgument(
            "divide threshold must be at least 1".to_string(),
        ));
    }
    let ((mask, peel_rounds, upper, lower), extract_seconds) = timed(|| {
        let (mask, rounds) = kcore_mask(g, k);
        let upper = induced_subgraph(g, &mask_members(&mask, true))
            .expect("core members are valid by construction");
        let lower = induced_subgraph(g, &mask_members(&mask, false))
            .expect("remainder members are valid by construction");
        (mask, rounds, upper, lower)
    });
    let (ext, ext_gen_seconds) = timed(|| count_neighbors_in(g, lower.members(), &mask));
    Ok(ExactSplit {
        upper,
        lower,
        ext,
        stats: ExactDivideStats {
            peel_rounds,
            extract_seconds,
            ext_gen_seconds,
        },
    })
}

/// For each of `members` (parent ids of `g`), count neighbors flagged in
/// `in_upper`.
fn count_neighbors_in(g: &Graph, members: &[NodeId], in_upper: &[bool]) -> ExternalInfo {
    let counts = members
        .iter()
        .map(|&p| g.adj(p).iter().filter(|&&q| in_upper[q as usize]).count() as u32)
        .collect();
    ExternalInfo::from_counts(counts)
}

pub struct RoughSplit {
    /// Superset of the exact k-core: all nodes of degree (plus external
    /// info) at least k.
    pub rough_upper: SubgraphView,
    pub stats: RoughDivideStats,
}

/// Cheap one-pass alternative to [`exact_divide`]: keep every node whose
/// degree is at least `k`. The result always contains the exact k-core, both
/// its nodes and its edges.
pub fn rough_divide(g: &Graph, k: u32) -> Result<RoughSplit> {
    rough_divide_with_ext(g, &ExternalInfo::zeros(g.node_count()), k)
}

/// Multi-stage variant: a node qualifies when `deg(v) + ext(v) >= k`, so the
/// superset guarantee survives accumulated external information from parts
/// already finalized above.
pub fn rough_divide_with_ext(g: &Graph, ext: &ExternalInfo, k: u32) -> Result<RoughSplit> {
    if k < 1 {
        return Err(Error::InvalidArgument(
            "divide threshold must be at least 1".to_string(),
        ));
    }
    if ext.len() != g.node_count() {
        return Err(Error::InvalidArgument(format!(
            "external info covers {} nodes, graph has {}",
            ext.len(),
            g.node_count()
        )));
    }
    let (rough_upper, extract_seconds) = timed(|| {
        let members: Vec<NodeId> = (0..g.node_count() as NodeId)
            .filter(|&v| g.deg(v) + ext.get(v) >= k)
            .collect();
        induced_subgraph(g, &members).expect("degree-filtered members are valid")
    });
    Ok(RoughSplit {
        rough_upper,
        stats: RoughDivideStats {
            node_passes: 1,
            extract_seconds,
        },
    })
}

pub struct FinalizeOutcome {
    /// Nodes whose computed value reached the threshold, as parent ids of the
    /// divided graph with their (exact) coreness values.
    pub finalized: Vec<(NodeId, u32)>,
    /// Induced subgraph over all remaining nodes.
    pub lower: SubgraphView,
    /// For `lower`, counted against the finalized set only.
    pub ext: ExternalInfo,
}

/// Second half of the rough strategy: after decomposing the rough superset,
/// keep the nodes with values >= k (those values are exact), and rebuild the
/// remainder with its external information.
pub fn finalize_rough(
    g: &Graph,
    rough_upper: &SubgraphView,
    rough_coreness: &CorenessMap,
    k: u32,
) -> Result<FinalizeOutcome> {
    if rough_coreness.len() != rough_upper.node_count() {
        return Err(Error::InvalidArgument(format!(
            "rough coreness covers {} nodes, rough subgraph has {}",
            rough_coreness.len(),
            rough_upper.node_count()
        )));
    }
    let n = g.node_count();
    let mut in_final = vec![false; n];
    let mut finalized = Vec::new();
    for (i, &p) in rough_upper.members().iter().enumerate() {
        let value = rough_coreness.get(i as NodeId);
        if value >= k {
            in_final[p as usize] = true;
            finalized.push((p, value));
        }
    }
    let lower_members = mask_members(&in_final, false);
    let lower = induced_subgraph(g, &lower_members)?;
    let ext = count_neighbors_in(g, lower.members(), &in_final);
    Ok(FinalizeOutcome {
        finalized,
        lower,
        ext,
    })
}

/// Threshold schedule for a P-part split: `deg_max * (i / P)^2` for
/// `i = 1..P-1`, rounded to the nearest integer and clamped to at least 1.
/// Fails when rounding collapses two thresholds.
pub fn plan_thresholds(deg_max: u32, parts: usize) -> Result<Vec<u32>> {
    if parts < 2 {
        return Err(Error::InvalidArgument(
            "a division needs at least 2 parts".to_string(),
        ));
    }
    if deg_max < 1 {
        return Err(Error::InvalidArgument(
            "deg_max must be at least 1".to_string(),
        ));
    }
    let mut thresholds: Vec<u32> = (1..parts)
        .map(|i| {
            let frac = i as f64 / parts as f64;
            ((deg_max as f64 * frac * frac).round() as u32).max(1)
        })
        .collect();
    thresholds.dedup();
    if thresholds.len() != parts - 1 {
        return Err(Error::Planning(format!(
            "thresholds collide after rounding for deg_max = {deg_max}, parts = {parts}; \
             try fewer parts"
        )));
    }
    Ok(thresholds)
}

/// A decomposition backend for one part: the single-threaded reference loop
/// or the parameter-server simulator.
pub trait DecompositionEngine {
    fn decompose(&self, g: &Graph, ext: &ExternalInfo) -> Result<(CorenessMap, RunMetrics)>;
}

pub struct SequentialEngine;

impl DecompositionEngine for SequentialEngine {
    fn decompose(&self, g: &Graph, ext: &ExternalInfo) -> Result<(CorenessMap, RunMetrics)> {
        decompose_sequential(g, ext, InitEstimate::DegreePlusExt)
    }
}

pub struct SimulatedEngine {
    pub config: SimConfig,
}

impl DecompositionEngine for SimulatedEngine {
    fn decompose(&self, g: &Graph, ext: &ExternalInfo) -> Result<(CorenessMap, RunMetrics)> {
        run_distributed(g, ext, &self.config)
    }
}

/// Result of decomposing one part. Node ids refer to the original graph the
/// divided run started from.
#[derive(Debug, Clone)]
pub struct PartResult {
    pub part_index: usize,
    /// Threshold separating this part from the parts above it; `None` for
    /// the top part. External info stays strictly below this value.
    pub threshold_above: Option<u32>,
    /// Finalized nodes with their exact coreness values.
    pub coreness: Vec<(NodeId, u32)>,
    /// External information supplied to the engine for this part's graph.
    pub ext_used: Vec<(NodeId, u32)>,
    /// Size of the graph actually decomposed (for rough parts this is the
    /// superset, not just the finalized nodes).
    pub node_count: usize,
    pub edge_count: usize,
    pub metrics: RunMetrics,
}

#[derive(Debug, Clone)]
pub struct DividedRun {
    pub merged: CorenessMap,
    pub parts: Vec<PartResult>,
}

/// Execute a full divided decomposition. Parts are decomposed strictly one
/// at a time, highest part first, to keep the peak working set small; the
/// merged map equals the whole-graph decomposition exactly.
pub fn run_divided(
    g: &Graph,
    plan: &DivisionPlan,
    engine: &dyn DecompositionEngine,
) -> Result<DividedRun> {
    let parts = match plan.strategy {
        Strategy::Exact => run_exact(g, &plan.thresholds, engine)?,
        Strategy::Rough => run_rough(g, &plan.thresholds, engine)?,
    };
    let merged = merge_results(g, &parts)?;
    Ok(DividedRun { merged, parts })
}

struct Stage {
    graph: Graph,
    ext: ExternalInfo,
    to_orig: Vec<NodeId>,
    threshold_above: Option<u32>,
    divide_seconds: f64,
    ext_gen_seconds: f64,
}

/// Exact strategy: carve the remainder off at the lowest threshold, then
/// keep subdividing the upper subgraph at the next threshold. Each final part
/// holds the nodes with coreness in one threshold band, and its external info
/// counts neighbors in all higher bands combined.
fn run_exact(
    g: &Graph,
    thresholds: &[u32],
    engine: &dyn DecompositionEngine,
) -> Result<Vec<PartResult>> {
    let mut stages: Vec<Stage> = Vec::with_capacity(thresholds.len() + 1);
    let mut current = g.clone();
    let mut to_orig: Vec<NodeId> = (0..g.node_count() as NodeId).collect();

    for &k in thresholds {
        let split = exact_divide(&current, k)?;
        let (lower_graph, lower_members) = split.lower.into_parts();
        let lower_to_orig: Vec<NodeId> = lower_members
            .iter()
            .map(|&p| to_orig[p as usize])
            .collect();
        stages.push(Stage {
            graph: lower_graph,
            ext: split.ext,
            to_orig: lower_to_orig,
            threshold_above: Some(k),
            divide_seconds: split.stats.extract_seconds,
            ext_gen_seconds: split.stats.ext_gen_seconds,
        });
        let (upper_graph, upper_members) = split.upper.into_parts();
        to_orig = upper_members.iter().map(|&p| to_orig[p as usize]).collect();
        current = upper_graph;
    }
    stages.push(Stage {
        graph: current,
        ext: ExternalInfo::zeros(to_orig.len()),
        to_orig,
        threshold_above: None,
        divide_seconds: 0.0,
        ext_gen_seconds: 0.0,
    });
    stages.reverse();

    let mut parts = Vec::with_capacity(stages.len());
    for (index, stage) in stages.into_iter().enumerate() {
        let (map, mut metrics) = engine
            .decompose(&stage.graph, &stage.ext)
            .map_err(|e| e.in_part(index))?;
        metrics.record_timing("divide", stage.divide_seconds);
        metrics.record_timing("ext_gen", stage.ext_gen_seconds);
        let coreness = stage
            .to_orig
            .iter()
            .zip(map.values())
            .map(|(&orig, &c)| (orig, c))
            .collect();
        let ext_used = stage
            .to_orig
            .iter()
            .zip(stage.ext.counts())
            .map(|(&orig, &e)| (orig, e))
            .collect();
        parts.push(PartResult {
            part_index: index,
            threshold_above: stage.threshold_above,
            coreness,
            ext_used,
            node_count: stage.graph.node_count(),
            edge_count: stage.graph.edge_count(),
            metrics,
        });
    }
    Ok(parts)
}

/// Rough strategy, top-down and strictly sequential: extract the superset of
/// the current threshold's core by degree (plus accumulated external info),
/// decompose it, finalize nodes that reached the threshold, and descend with
/// the remainder. Finalization above is a prerequisite for the node set
/// below, so the order is mandatory.
fn run_rough(
    g: &Graph,
    thresholds: &[u32],
    engine: &dyn DecompositionEngine,
) -> Result<Vec<PartResult>> {
    let mut residual = g.clone();
    let mut to_orig: Vec<NodeId> = (0..g.node_count() as NodeId).collect();
    let mut res_ext = ExternalInfo::zeros(g.node_count());
    let mut parts: Vec<PartResult> = Vec::with_capacity(thresholds.len() + 1);
    let mut threshold_above: Option<u32> = None;

    for &k in thresholds.iter().rev() {
        let index = parts.len();
        let split = rough_divide_with_ext(&residual, &res_ext, k)?;
        let rough = split.rough_upper;
        let rough_ext = ExternalInfo::from_counts(
            rough.members().iter().map(|&p| res_ext.get(p)).collect(),
        );
        let (rough_map, mut metrics) = engine
            .decompose(rough.graph(), &rough_ext)
            .map_err(|e| e.in_part(index))?;
        let (outcome, ext_gen_seconds) =
            timed(|| finalize_rough(&residual, &rough, &rough_map, k));
        let outcome = outcome?;
        metrics.record_timing("divide", split.stats.extract_seconds);
        metrics.record_timing("ext_gen", ext_gen_seconds);

        parts.push(PartResult {
            part_index: index,
            threshold_above,
            coreness: outcome
                .finalized
                .iter()
                .map(|&(p, c)| (to_orig[p as usize], c))
                .collect(),
            ext_used: rough
                .members()
                .iter()
                .zip(rough_ext.counts())
                .map(|(&p, &e)| (to_orig[p as usize], e))
                .collect(),
            node_count: rough.node_count(),
            edge_count: rough.graph().edge_count(),
            metrics,
        });

        let (lower_graph, lower_members) = outcome.lower.into_parts();
        let new_counts: Vec<u32> = lower_members
            .iter()
            .enumerate()
            .map(|(j, &p)| res_ext.get(p) + outcome.ext.get(j as NodeId))
            .collect();
        to_orig = lower_members.iter().map(|&p| to_orig[p as usize]).collect();
        residual = lower_graph;
        res_ext = ExternalInfo::from_counts(new_counts);
        threshold_above = Some(k);
    }

    let index = parts.len();
    let (map, metrics) = engine
        .decompose(&residual, &res_ext)
        .map_err(|e| e.in_part(index))?;
    parts.push(PartResult {
        part_index: index,
        threshold_above,
        coreness: to_orig
            .iter()
            .zip(map.values())
            .map(|(&orig, &c)| (orig, c))
            .collect(),
        ext_used: to_orig
            .iter()
            .zip(res_ext.counts())
            .map(|(&orig, &e)| (orig, e))
            .collect(),
        node_count: residual.node_count(),
        edge_count: residual.edge_count(),
        metrics,
    });
    Ok(parts)
}

/// Union of disjoint part maps into a full coreness map. Rejects overlaps and
/// uncovered nodes, reporting offending external ids.
pub fn merge_results(g: &Graph, parts: &[PartResult]) -> Result<CorenessMap> {
    let n = g.node_count();
    let mut values = vec![0u32; n];
    let mut seen = vec![false; n];
    let mut overlaps: Vec<u64> = Vec::new();
    for part in parts {
        for &(v, c) in &part.coreness {
            if (v as usize) >= n {
                return Err(Error::Merge(format!(
                    "part {} finalized unknown node id {v}",
                    part.part_index
                )));
            }
            if seen[v as usize] {
                overlaps.push(g.external_id(v));
            } else {
                seen[v as usize] = true;
                values[v as usize] = c;
            }
        }
    }
    if !overlaps.is_empty() {
        overlaps.sort_unstable();
        overlaps.truncate(10);
        return Err(Error::Merge(format!(
            "nodes finalized by more than one part: {overlaps:?}"
        )));
    }
    let gaps: Vec<u64> = (0..n)
        .filter(|&v| !seen[v])
        .map(|v| g.external_id(v as NodeId))
        .take(10)
        .collect();
    if !gaps.is_empty() {
        return Err(Error::Merge(format!(
            "nodes not covered by any part: {gaps:?}"
        )));
    }
    Ok(CorenessMap::from_values(values))
}
