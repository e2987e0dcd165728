//! Exhaustive simple-cycle enumeration, used to validate the counters.
//!
//! A cycle is a closed path with distinct edges and distinct internal nodes;
//! a closed walk that reuses its first edge as its last is not a cycle.
//! Enumeration is plain backtracking over flat node ids and is only meant
//! for graphs small enough to search exhaustively, guarded by a budget on
//! partial paths.

use super::{CycleProfile, Girth};
use crate::graph::BipartiteGraph;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default cap on explored partial paths.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cycle enumeration exceeded its search budget of {budget} partial paths")]
pub struct BudgetExceeded {
    pub budget: u64,
}

struct Search<'a> {
    graph: &'a BipartiteGraph,
    l_max: usize,
    budget: u64,
    steps: u64,
    start: usize,
    on_path: Vec<bool>,
    path: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn dfs(&mut self) -> Result<(), BudgetExceeded> {
        let current = self.graph.node_from_flat(*self.path.last().unwrap());
        for nb in self.graph.neighbors(current) {
            let nb = self.graph.flat_id(nb);
            if nb == self.start {
                // Closing edge. Length 2 would reuse the opening edge, and
                // each cycle is emitted in one direction only.
                if self.path.len() >= 3 && self.path[1] < self.path[self.path.len() - 1] {
                    self.out.push(self.path.clone());
                }
            } else if nb > self.start && !self.on_path[nb] && self.path.len() < self.l_max {
                self.steps += 1;
                if self.steps > self.budget {
                    return Err(BudgetExceeded { budget: self.budget });
                }
                self.path.push(nb);
                self.on_path[nb] = true;
                self.dfs()?;
                self.path.pop();
                self.on_path[nb] = false;
            }
        }
        Ok(())
    }
}

/// Every simple cycle of length at most `l_max`, each exactly once.
///
/// Cycles come back as flat node sequences (left nodes first, then right
/// nodes offset by `left_count`), canonicalized to start at their smallest
/// node and run toward the smaller of its two cycle neighbors.
pub fn enumerate_cycles(
    graph: &BipartiteGraph,
    l_max: usize,
    budget: u64,
) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    let mut all = Vec::new();
    if l_max < 3 {
        return Ok(all);
    }
    let mut search = Search {
        graph,
        l_max,
        budget,
        steps: 0,
        start: 0,
        on_path: vec![false; graph.node_count()],
        path: Vec::with_capacity(l_max),
        out: Vec::new(),
    };
    for s in 0..graph.node_count() {
        search.start = s;
        search.path.clear();
        search.path.push(s);
        search.on_path[s] = true;
        search.dfs()?;
        search.on_path[s] = false;
        all.append(&mut search.out);
    }
    Ok(all)
}

/// Cycle profile by exhaustive enumeration. Unlike the message-passing
/// counters this has no validity window: counts are exact for every length
/// up to `l_max`.
pub fn profile(
    graph: &BipartiteGraph,
    l_max: usize,
    budget: u64,
) -> Result<CycleProfile, BudgetExceeded> {
    let cycles = enumerate_cycles(graph, l_max, budget)?;
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for c in &cycles {
        *counts.entry(c.len()).or_insert(0) += 1;
    }
    let girth = counts.keys().next().map_or(Girth::Acyclic, |&g| Girth::Finite(g));
    Ok(CycleProfile { girth, counts, clamped: false, per_node: None })
}
