//! Run counters: communication amount, pull/push totals, and phase timings.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Counters collected by a decomposition run.
///
/// `total_updates` is the communication amount: the total number of changed
/// estimates pushed to the shared store over the whole run. Pulls are counted
/// once per (node, sweep) batch fetch; `pulls_fine` counts individual
/// neighbor-estimate reads.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub sweeps: usize,
    pub updates_per_sweep: Vec<u64>,
    pub total_updates: u64,
    pub pulls: u64,
    pub pulls_fine: u64,
    pub pushes: u64,
    /// Wall-clock seconds per named phase (load, divide, ext_gen, decompose, merge).
    pub phase_timings: BTreeMap<String, f64>,
}

impl RunMetrics {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record one full sweep: every live node pulls its neighbor batch once,
    /// and only changed estimates are pushed.
    pub(crate) fn record_sweep(&mut self, nodes: u64, neighbor_reads: u64, updates: u64) {
        self.sweeps += 1;
        self.updates_per_sweep.push(updates);
        self.total_updates += updates;
        self.pulls += nodes;
        self.pulls_fine += neighbor_reads;
        self.pushes += updates;
    }

    pub fn record_timing(&mut self, phase: &str, seconds: f64) {
        *self.phase_timings.entry(phase.to_string()).or_insert(0.0) += seconds;
    }

    pub fn clear_timings(&mut self) {
        self.phase_timings.clear();
    }

    /// Counter fields only, for comparisons that must ignore wall-clock noise.
    pub fn counters(&self) -> (usize, &[u64], u64, u64, u64, u64) {
        (
            self.sweeps,
            &self.updates_per_sweep,
            self.total_updates,
            self.pulls,
            self.pulls_fine,
            self.pushes,
        )
    }

    pub fn same_counters(&self, other: &RunMetrics) -> bool {
        self.counters() == other.counters()
    }
}

/// Run `f`, returning its output and the elapsed wall-clock seconds.
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}
