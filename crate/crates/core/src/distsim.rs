//! Simulated parameter-server execution of the decomposition.
//!
//! Nodes are hash-partitioned across workers by internal id, with external
//! information co-located. Every sweep runs the pull / estimate / push /
//! update loop per worker batch against a shared estimate store; only changed
//! estimates are pushed, and the push total is the communication amount. The
//! simulation measures message counts faithfully without any transport.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divide::ExternalInfo;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::hindex::{h_of, EstimateState};
use crate::metrics::RunMetrics;
use crate::oracle::CorenessMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    /// Pushes become visible at the sweep boundary; bit-identical to the
    /// sequential reference engine.
    Synchronous,
    /// Pushes are visible to later batches within the same sweep.
    Asynchronous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub partitions: usize,
    pub batch_size: usize,
    pub mode: SimMode,
    /// Safety cap; the loop provably converges, so hitting it means a bug.
    pub max_sweeps: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            partitions: std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(4),
            batch_size: 1024,
            mode: SimMode::Asynchronous,
            max_sweeps: 100_000,
        }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if self.partitions < 1 {
            return Err(Error::InvalidArgument(
                "partitions must be at least 1".to_string(),
            ));
        }
        if self.batch_size < 1 {
            return Err(Error::InvalidArgument(
                "batch_size must be at least 1".to_string(),
            ));
        }
        if self.max_sweeps < 1 {
            return Err(Error::InvalidArgument(
                "max_sweeps must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// Run the decomposition on the simulated parameter server. Both modes
/// return the exact coreness map; metrics are deterministic because workers
/// execute in a fixed round-robin order.
pub fn run_distributed(
    g: &Graph,
    ext: &ExternalInfo,
    config: &SimConfig,
) -> Result<(CorenessMap, RunMetrics)> {
    run_distributed_observed(g, ext, config, |_| {})
}

/// [`run_distributed`] with a per-sweep observer (initial state, then the
/// store snapshot after every sweep).
pub fn run_distributed_observed(
    g: &Graph,
    ext: &ExternalInfo,
    config: &SimConfig,
    mut observer: impl FnMut(&EstimateState),
) -> Result<(CorenessMap, RunMetrics)> {
    config.validate()?;
    let n = g.node_count();
    if ext.len() != n {
        return Err(Error::InvalidArgument(format!(
            "external info covers {} nodes, graph has {n}",
            ext.len()
        )));
    }

    let mut metrics = RunMetrics::new();
    let mut store: Vec<u32> = (0..n as NodeId).map(|v| g.deg(v) + ext.get(v)).collect();
    let mut state = EstimateState {
        estimates: store.clone(),
        iteration: 0,
        changed: vec![false; n],
    };
    observer(&state);
    if n == 0 {
        return Ok((CorenessMap::from_values(store), metrics));
    }

    // Vertex-centric partitioning: worker w owns nodes w, w + P, w + 2P, ...
    // processed in ascending id order, batch_size nodes per round.
    let workers: Vec<Vec<NodeId>> = (0..config.partitions)
        .map(|w| {
            (w..n)
                .step_by(config.partitions)
                .map(|v| v as NodeId)
                .collect()
        })
        .collect();

    let neighbor_reads = 2 * g.edge_count() as u64;
    let mut next = vec![0u32; n];
    let mut counts: Vec<u32> = Vec::new();
    let mut pending: Vec<(NodeId, u32)> = Vec::new();

    for _ in 0..config.max_sweeps {
        let updates = match config.mode {
            SimMode::Synchronous => {
                let prev = &store;
                let computed: Vec<u32> = (0..n as NodeId)
                    .into_par_iter()
                    .map_init(Vec::new, |buf, v| {
                        let neigh = g.adj(v);
                        buf.clear();
                        buf.resize(neigh.len() + 1, 0u32);
                        let e = ext.get(v);
                        e + h_of(neigh.iter().map(|&u| prev[u as usize]), e, buf)
                    })
                    .collect();
                next.copy_from_slice(&computed);
                let mut updates = 0u64;
                for v in 0..n {
                    state.changed[v] = next[v] != store[v];
                    if state.changed[v] {
                        updates += 1;
                    }
                }
                std::mem::swap(&mut store, &mut next);
                updates
            }
            SimMode::Asynchronous => {
                state.changed.fill(false);
                let mut updates = 0u64;
                let mut cursors = vec![0usize; workers.len()];
                let mut exhausted = 0usize;
                while exhausted < workers.len() {
                    exhausted = 0;
                    for (w, nodes) in workers.iter().enumerate() {
                        if cursors[w] >= nodes.len() {
                            exhausted += 1;
                            continue;
                        }
                        let end = (cursors[w] + config.batch_size).min(nodes.len());
                        let batch = &nodes[cursors[w]..end];
                        cursors[w] = end;
                        // Pull and estimate against the store as of batch
                        // start, then push the changed values in place.
                        pending.clear();
                        for &v in batch {
                            let neigh = g.adj(v);
                            counts.clear();
                            counts.resize(neigh.len() + 1, 0);
                            let e = ext.get(v);
                            let new =
                                e + h_of(neigh.iter().map(|&u| store[u as usize]), e, &mut counts);
                            if new != store[v as usize] {
                                pending.push((v, new));
                            }
                        }
                        for &(v, new) in &pending {
                            store[v as usize] = new;
                            state.changed[v as usize] = true;
                            updates += 1;
                        }
                    }
                }
                updates
            }
        };

        metrics.record_sweep(n as u64, neighbor_reads, updates);
        state.iteration += 1;
        state.estimates.copy_from_slice(&store);
        observer(&state);
        if updates == 0 {
            return Ok((CorenessMap::from_values(store), metrics));
        }
    }

    Err(Error::NonConvergence {
        max_sweeps: config.max_sweeps,
    })
}

/// Communication comparison between an undivided baseline run and the parts
/// of a divided run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub baseline_total_updates: u64,
    pub divided_total_updates: Vec<u64>,
    pub divided_sum: u64,
    /// `divided_sum / baseline`; `None` when undefined (no parts or zero
    /// baseline).
    pub ratio: Option<f64>,
    pub baseline_updates_per_sweep: Vec<u64>,
    pub divided_updates_per_sweep: Vec<Vec<u64>>,
}

pub fn compare_runs(baseline: &RunMetrics, divided: &[RunMetrics]) -> ComparisonReport {
    let divided_total_updates: Vec<u64> = divided.iter().map(|m| m.total_updates).collect();
    let divided_sum: u64 = divided_total_updates.iter().sum();
    let ratio = if divided.is_empty() || baseline.total_updates == 0 {
        None
    } else {
        Some(divided_sum as f64 / baseline.total_updates as f64)
    };
    ComparisonReport {
        baseline_total_updates: baseline.total_updates,
        divided_total_updates,
        divided_sum,
        ratio,
        baseline_updates_per_sweep: baseline.updates_per_sweep.clone(),
        divided_updates_per_sweep: divided
            .iter()
            .map(|m| m.updates_per_sweep.clone())
            .collect(),
    }
}
