//! Girth and short-cycle profiles of bipartite graphs.
//!
//! Counting follows the monomial message-passing scheme: the initiating node
//! emits a distinct dummy variable of unit power on each of its edges, every
//! other node forwards the product of its incoming messages extrinsically,
//! and copies of the initiating node's own monomials returning at time `t`
//! signal cycles of length `t + 1`. Counts are exact for lengths up to
//! `2g - 2`, where `g` is the girth; requests beyond that window are clamped
//! and flagged.
//!
//! Two engines are provided. The full engine propagates messages all the way
//! around the cycle. The half engine propagates only to the midpoint and
//! pairs arriving walks there, which returns identical counts on every input
//! at half the number of message-passing sweeps. A backtracking enumeration
//! oracle lives in [`oracle`] for validation.
//!
//! All inputs are immutable; counting runs for distinct initiating nodes on
//! the same graph snapshot are independent. The profile functions' own
//! delete-after-count loop is inherently sequential and is run that way.

pub mod oracle;

use crate::graph::{BipartiteGraph, NodeRef, Side};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// The length of the shortest cycle, or `Acyclic` for forests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Girth {
    Acyclic,
    Finite(usize),
}

impl Girth {
    /// The largest cycle length the message-passing counters are exact for.
    pub fn counting_window(self) -> Option<usize> {
        match self {
            Girth::Acyclic => None,
            Girth::Finite(g) => Some(2 * g - 2),
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Acyclic => None,
            Girth::Finite(g) => Some(g),
        }
    }

    /// Minimum, with `Acyclic` acting as plus infinity.
    pub fn min(self, other: Girth) -> Girth {
        match (self, other) {
            (Girth::Acyclic, g) | (g, Girth::Acyclic) => g,
            (Girth::Finite(a), Girth::Finite(b)) => Girth::Finite(a.min(b)),
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Acyclic => write!(f, "acyclic"),
            Girth::Finite(g) => write!(f, "{g}"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Girth::Acyclic => serializer.serialize_str("acyclic"),
            Girth::Finite(g) => serializer.serialize_u64(*g as u64),
        }
    }
}

/// Girth plus the number of cycles of each even length inside the validity
/// window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleProfile {
    pub girth: Girth,
    /// `counts[L]` is the number of distinct L-cycles, for even L from the
    /// girth up to the effective limit.
    pub counts: BTreeMap<usize, u64>,
    /// True when the requested limit exceeded `2g - 2` and was clamped.
    pub clamped: bool,
    /// Per-node attribution: node -> (L -> cycles first counted at that
    /// node). Only nodes with at least one nonzero count appear.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_node: Option<BTreeMap<usize, BTreeMap<usize, u64>>>,
}

impl CycleProfile {
    fn acyclic() -> Self {
        CycleProfile {
            girth: Girth::Acyclic,
            counts: BTreeMap::new(),
            clamped: false,
            per_node: None,
        }
    }

    pub fn count(&self, length: usize) -> u64 {
        self.counts.get(&length).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// One row per length: `L,count` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("L,count\n");
        for (l, c) in &self.counts {
            out.push_str(&format!("{l},{c}\n"));
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycleArgError {
    #[error("cycle length limit must be even and at least 4, got {l_max}")]
    BadLengthLimit { l_max: usize },
}

/// A product of edge-label variables with non-negative integer powers.
///
/// Zero-power labels are never stored; the unit monomial is the empty
/// product. Powers count non-backtracking walks, so they are kept as `u64`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Monomial {
    factors: Vec<(u16, u64)>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial { factors: Vec::new() }
    }

    /// The dummy variable `X_label` of unit power.
    pub fn variable(label: u16) -> Self {
        Monomial { factors: vec![(label, 1)] }
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn power(&self, label: u16) -> u64 {
        self.factors
            .binary_search_by_key(&label, |&(l, _)| l)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn total_power(&self) -> u64 {
        self.factors.iter().map(|&(_, p)| p).sum()
    }

    /// Total power with every copy of `label` discarded.
    pub fn total_power_excluding(&self, label: u16) -> u64 {
        self.total_power() - self.power(label)
    }

    pub fn factors(&self) -> &[(u16, u64)] {
        &self.factors
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut a, mut b) = (self.factors.iter().peekable(), other.factors.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(la, pa)), Some(&&(lb, pb))) => {
                    if la < lb {
                        out.push((la, pa));
                        a.next();
                    } else if lb < la {
                        out.push((lb, pb));
                        b.next();
                    } else {
                        out.push((la, pa + pb));
                        a.next();
                        b.next();
                    }
                }
                (Some(&&f), None) => {
                    out.push(f);
                    a.next();
                }
                (None, Some(&&f)) => {
                    out.push(f);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial { factors: out }
    }

    /// Exact division: every factor of `other` must divide `self`.
    fn div_exact(&self, other: &Monomial) -> Monomial {
        if other.is_unit() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.factors.len());
        let mut b = other.factors.iter().peekable();
        for &(l, p) in &self.factors {
            let q = match b.peek() {
                Some(&&(lb, pb)) if lb == l => {
                    b.next();
                    pb
                }
                _ => 0,
            };
            debug_assert!(q <= p, "non-exact monomial division");
            if p - q > 0 {
                out.push((l, p - q));
            }
        }
        debug_assert!(b.next().is_none(), "non-exact monomial division");
        Monomial { factors: out }
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.factors.len()))?;
        for (l, p) in &self.factors {
            map.serialize_entry(&format!("X{l}"), p)?;
        }
        map.end()
    }
}

/// The directed message buffers of one monomial propagation run.
///
/// Each undirected edge carries exactly two messages, one per direction. At
/// step 0 only the initiating node's outgoing messages are non-unit.
#[derive(Debug, Clone)]
pub struct MessageState {
    to_right: Vec<Monomial>,
    to_left: Vec<Monomial>,
    step: usize,
}

impl MessageState {
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn to_right(&self, edge: usize) -> &Monomial {
        &self.to_right[edge]
    }

    pub fn to_left(&self, edge: usize) -> &Monomial {
        &self.to_left[edge]
    }
}

/// Graph view that supports the delete-after-count loop without mutating the
/// shared graph.
struct PrunedView<'a> {
    graph: &'a BipartiteGraph,
    edge_alive: Vec<bool>,
}

impl<'a> PrunedView<'a> {
    fn all_alive(graph: &'a BipartiteGraph) -> Self {
        PrunedView { graph, edge_alive: vec![true; graph.edge_count()] }
    }

    fn alive_edges<'b>(&'b self, node: NodeRef) -> impl Iterator<Item = usize> + 'b {
        self.graph.adjacency(node).iter().copied().filter(move |&e| self.edge_alive[e])
    }

    fn alive_degree(&self, node: NodeRef) -> usize {
        self.alive_edges(node).count()
    }

    fn kill_node(&mut self, node: NodeRef) {
        for e in self.graph.adjacency(node) {
            self.edge_alive[*e] = false;
        }
    }
}

/// One monomial propagation run from a fixed initiating node.
struct Propagation<'a, 'b> {
    view: &'b PrunedView<'a>,
    init: NodeRef,
    /// (edge id, label) for the initiating node's alive edges.
    init_edges: Vec<(usize, u16)>,
    state: MessageState,
    scratch: Vec<Monomial>,
}

impl<'a, 'b> Propagation<'a, 'b> {
    fn new(view: &'b PrunedView<'a>, init: NodeRef) -> Self {
        let graph = view.graph;
        let init_edges: Vec<(usize, u16)> =
            view.alive_edges(init).enumerate().map(|(k, e)| (e, k as u16)).collect();
        let unit = vec![Monomial::unit(); graph.edge_count()];
        let mut state = MessageState { to_right: unit.clone(), to_left: unit.clone(), step: 0 };
        for &(e, label) in &init_edges {
            match init.side {
                Side::Left => state.to_right[e] = Monomial::variable(label),
                Side::Right => state.to_left[e] = Monomial::variable(label),
            }
        }
        Propagation { view, init, init_edges, state, scratch: unit }
    }

    /// Advances to the next time instant. Nodes on one side multiply their
    /// incoming messages and send each edge the product of all the others;
    /// the initiating node sends only unit monomials after step 0.
    fn advance(&mut self) {
        let t = self.state.step + 1;
        let active = if t % 2 == 1 { self.init.side.opposite() } else { self.init.side };
        let graph = self.view.graph;

        for m in self.scratch.iter_mut() {
            if !m.is_unit() {
                *m = Monomial::unit();
            }
        }
        {
            let incoming: &Vec<Monomial> = match active {
                Side::Left => &self.state.to_left,
                Side::Right => &self.state.to_right,
            };
            for node in graph.nodes(active) {
                if node == self.init {
                    continue; // sends unit monomials after step 0
                }
                let mut total = Monomial::unit();
                let mut any = false;
                for e in self.view.alive_edges(node) {
                    any = true;
                    if !incoming[e].is_unit() {
                        total = total.mul(&incoming[e]);
                    }
                }
                if !any || total.is_unit() {
                    continue; // all-unit incoming yields all-unit outgoing
                }
                for e in self.view.alive_edges(node) {
                    self.scratch[e] = total.div_exact(&incoming[e]);
                }
            }
        }
        let outgoing = match active {
            Side::Left => &mut self.state.to_right,
            Side::Right => &mut self.state.to_left,
        };
        std::mem::swap(outgoing, &mut self.scratch);
        self.state.step = t;
    }

    /// Messages arriving at a node of the side that received at this step.
    fn arriving(&self, edge: usize, receiver_side: Side) -> &Monomial {
        match receiver_side {
            Side::Left => &self.state.to_left[edge],
            Side::Right => &self.state.to_right[edge],
        }
    }

    /// Copies of the initiating node's monomials returning at the current
    /// (odd) step: for each edge, every power not belonging to that edge's
    /// own label counts as one copy.
    fn returning_copies(&self) -> u64 {
        self.init_edges
            .iter()
            .map(|&(e, label)| self.arriving(e, self.init.side).total_power_excluding(label))
            .sum()
    }
}

fn even_floor(x: usize) -> usize {
    x & !1
}

/// Cycles through `node` by length, via the full message-passing engine.
///
/// The map holds every even length from 4 to `l_max`. Degree-0 and degree-1
/// nodes lie on no cycle and return all zeros. Counts are exact only while
/// `l_max` stays within the graph's validity window `2g - 2`; staying there
/// is the caller's responsibility here, unlike the profile functions which
/// clamp.
pub fn count_node_cycles(
    graph: &BipartiteGraph,
    node: NodeRef,
    l_max: usize,
) -> Result<BTreeMap<usize, u64>, CycleArgError> {
    if l_max < 4 || !l_max.is_multiple_of(2) {
        return Err(CycleArgError::BadLengthLimit { l_max });
    }
    let view = PrunedView::all_alive(graph);
    Ok(count_node_cycles_on(&view, node, l_max, EngineKind::Full))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EngineKind {
    Full,
    Half,
}

fn count_node_cycles_on(
    view: &PrunedView,
    node: NodeRef,
    l_max: usize,
    engine: EngineKind,
) -> BTreeMap<usize, u64> {
    let mut counts: BTreeMap<usize, u64> = (2..=l_max / 2).map(|h| (2 * h, 0)).collect();
    if view.alive_degree(node) < 2 {
        return counts;
    }
    match engine {
        EngineKind::Full => {
            let mut prop = Propagation::new(view, node);
            for t in 1..l_max {
                prop.advance();
                if t % 2 == 1 && t >= 3 {
                    let copies = prop.returning_copies();
                    debug_assert!(copies.is_multiple_of(2), "each cycle returns two copies");
                    counts.insert(t + 1, copies / 2);
                }
            }
        }
        EngineKind::Half => {
            let mut prop = Propagation::new(view, node);
            let d = prop.init_edges.len();
            // Walks of length t+1 meet at their midpoint after t sweeps, so
            // length L is detected at t = L/2 - 1.
            for t in 1..=(l_max / 2 - 1) {
                prop.advance();
                let receivers = if t % 2 == 1 { node.side } else { node.side.opposite() };
                let mut paired: u128 = 0;
                let mut label_totals = vec![0u128; d];
                for m in view.graph.nodes(receivers) {
                    if m == node {
                        continue;
                    }
                    // Pair walks arriving on distinct edges with distinct
                    // start labels: sum over i != k, p != q of w_p(i)w_q(k).
                    for v in label_totals.iter_mut() {
                        *v = 0;
                    }
                    let mut label_sq_by_edge: u128 = 0;
                    let mut edge_total_sum: u128 = 0;
                    let mut edge_total_sq: u128 = 0;
                    let mut edges_seen = 0usize;
                    for e in view.alive_edges(m) {
                        edges_seen += 1;
                        let mono = prop.arriving(e, receivers);
                        let mut edge_total: u128 = 0;
                        for &(label, p) in mono.factors() {
                            let p = p as u128;
                            edge_total += p;
                            label_totals[label as usize] += p;
                            label_sq_by_edge += p * p;
                        }
                        edge_total_sum += edge_total;
                        edge_total_sq += edge_total * edge_total;
                    }
                    if edges_seen < 2 || edge_total_sum == 0 {
                        continue;
                    }
                    let cross_edges = edge_total_sum * edge_total_sum - edge_total_sq;
                    let same_label: u128 =
                        label_totals.iter().map(|&v| v * v).sum::<u128>() - label_sq_by_edge;
                    paired += cross_edges - same_label;
                }
                debug_assert!(paired.is_multiple_of(2), "half pairing double-covers each cycle");
                let n = paired / 2;
                counts.insert(2 * (t + 1), u64::try_from(n).expect("cycle count fits in u64"));
            }
        }
    }
    counts
}

/// Girth by breadth-first search from every variable node. Exact on any
/// simple bipartite graph and independent of the message-passing engines.
pub fn girth(graph: &BipartiteGraph) -> Girth {
    let n = graph.node_count();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent_edge = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();

    for root in graph.nodes(Side::Left) {
        if graph.degree(root) < 2 {
            continue;
        }
        dist.fill(usize::MAX);
        parent_edge.fill(usize::MAX);
        queue.clear();
        let root_id = graph.flat_id(root);
        dist[root_id] = 0;
        queue.push_back(root);
        'bfs: while let Some(x) = queue.pop_front() {
            let xid = graph.flat_id(x);
            if 2 * dist[xid] + 1 >= best {
                break;
            }
            for &e in graph.adjacency(x) {
                if e == parent_edge[xid] {
                    continue;
                }
                let y = graph.opposite(e, x);
                let yid = graph.flat_id(y);
                if dist[yid] == usize::MAX {
                    dist[yid] = dist[xid] + 1;
                    parent_edge[yid] = e;
                    queue.push_back(y);
                } else {
                    best = best.min(dist[xid] + dist[yid] + 1);
                    if best == 4 {
                        break 'bfs;
                    }
                }
            }
        }
        if best == 4 {
            break;
        }
    }
    if best == usize::MAX {
        Girth::Acyclic
    } else {
        Girth::Finite(best)
    }
}

/// Cycle profile via the full engine: visits variable nodes in ascending
/// index, counts the cycles through each one on the current pruned graph,
/// then deletes the node so every cycle is counted exactly once.
pub fn count_cycles_full(graph: &BipartiteGraph, l_max: Option<usize>) -> CycleProfile {
    profile_with(graph, l_max, EngineKind::Full)
}

/// Cycle profile via the half engine. Identical output to
/// [`count_cycles_full`] on every input, with messages propagated only to
/// the cycle midpoint.
pub fn count_cycles_half(graph: &BipartiteGraph, l_max: Option<usize>) -> CycleProfile {
    profile_with(graph, l_max, EngineKind::Half)
}

fn profile_with(graph: &BipartiteGraph, l_max: Option<usize>, engine: EngineKind) -> CycleProfile {
    let g = girth(graph);
    let Girth::Finite(g_len) = g else {
        return CycleProfile::acyclic();
    };
    let window = 2 * g_len - 2;
    let requested = l_max.unwrap_or(window);
    let clamped = requested > window;
    let l_eff = even_floor(requested.min(window));

    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    let mut per_node: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
    if l_eff >= g_len {
        for l in (g_len..=l_eff).step_by(2) {
            counts.insert(l, 0);
        }
        let mut view = PrunedView::all_alive(graph);
        for v in 0..graph.left_count() {
            let node = NodeRef::left(v);
            if view.alive_degree(node) >= 2 {
                let node_counts = count_node_cycles_on(&view, node, l_eff, engine);
                let mut kept = BTreeMap::new();
                for (l, c) in node_counts {
                    if l >= g_len && c > 0 {
                        *counts.get_mut(&l).expect("window length") += c;
                        kept.insert(l, c);
                    }
                }
                if !kept.is_empty() {
                    per_node.insert(v, kept);
                }
            }
            view.kill_node(node);
        }
    }

    CycleProfile { girth: g, counts, clamped, per_node: Some(per_node) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_bipartite;

    fn k22() -> BipartiteGraph {
        complete_bipartite(2, 2)
    }

    /// Six variables, five checks, girth four. Variable v3 (index 2) has
    /// degree three, lies on exactly one 4-cycle and two 6-cycles, and the
    /// whole graph holds one 4-cycle and three 6-cycles.
    pub(crate) fn walkthrough_graph() -> BipartiteGraph {
        crate::fixtures::girth4_walkthrough().to_tanner_graph()
    }

    #[test]
    fn monomial_algebra() {
        let x0 = Monomial::variable(0);
        let x1 = Monomial::variable(1);
        let m = x0.mul(&x1).mul(&x0);
        assert_eq!(m.power(0), 2);
        assert_eq!(m.power(1), 1);
        assert_eq!(m.total_power(), 3);
        assert_eq!(m.total_power_excluding(0), 1);
        assert_eq!(m.div_exact(&x0.mul(&x0)), x1);
        assert!(Monomial::unit().is_unit());
        assert!(m.div_exact(&m).is_unit());
    }

    #[test]
    fn node_count_on_k22() {
        let g = k22();
        let counts = count_node_cycles(&g, NodeRef::left(0), 4).unwrap();
        assert_eq!(counts.get(&4), Some(&1));
    }

    #[test]
    fn node_count_on_path_is_zero() {
        // v0 - c0 - v1: a tree.
        let g = BipartiteGraph::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        for node in [NodeRef::left(0), NodeRef::left(1), NodeRef::right(0)] {
            let counts = count_node_cycles(&g, node, 6).unwrap();
            assert!(counts.values().all(|&c| c == 0));
        }
    }

    #[test]
    fn node_count_works_from_check_nodes_too() {
        let g = k22();
        let counts = count_node_cycles(&g, NodeRef::right(1), 4).unwrap();
        assert_eq!(counts.get(&4), Some(&1));
        let fixture = walkthrough_graph();
        // Check node 3 (degree 2) lies on the single 4-cycle.
        let counts = count_node_cycles(&fixture, NodeRef::right(3), 6).unwrap();
        assert_eq!(counts.get(&4), Some(&1));
    }

    #[test]
    fn node_count_rejects_bad_limit() {
        let g = k22();
        assert_eq!(
            count_node_cycles(&g, NodeRef::left(0), 5).unwrap_err(),
            CycleArgError::BadLengthLimit { l_max: 5 }
        );
        assert!(count_node_cycles(&g, NodeRef::left(0), 2).is_err());
    }

    #[test]
    fn walkthrough_node_v3() {
        let g = walkthrough_graph();
        let counts = count_node_cycles(&g, NodeRef::left(2), 6).unwrap();
        assert_eq!(counts.get(&4), Some(&1));
        assert_eq!(counts.get(&6), Some(&2));
    }

    #[test]
    fn girth_basics() {
        assert_eq!(girth(&k22()), Girth::Finite(4));
        let tree = BipartiteGraph::new(3, 2, vec![(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
        assert_eq!(girth(&tree), Girth::Acyclic);
        assert_eq!(girth(&walkthrough_graph()), Girth::Finite(4));
        assert_eq!(girth(&complete_bipartite(3, 3)), Girth::Finite(4));
    }

    #[test]
    fn full_profile_k22() {
        let p = count_cycles_full(&k22(), None);
        assert_eq!(p.girth, Girth::Finite(4));
        assert_eq!(p.count(4), 1);
        assert_eq!(p.count(6), 0);
        assert!(!p.clamped);
    }

    #[test]
    fn full_profile_k33() {
        let p = count_cycles_full(&complete_bipartite(3, 3), None);
        assert_eq!(p.girth, Girth::Finite(4));
        assert_eq!(p.count(4), 9);
        assert_eq!(p.count(6), 6);
    }

    #[test]
    fn full_profile_walkthrough() {
        let p = count_cycles_full(&walkthrough_graph(), None);
        assert_eq!(p.girth, Girth::Finite(4));
        assert_eq!(p.count(4), 1);
        assert_eq!(p.count(6), 3);
    }

    #[test]
    fn half_matches_full_on_fixtures() {
        for g in [k22(), complete_bipartite(3, 3), complete_bipartite(4, 3), walkthrough_graph()] {
            let full = count_cycles_full(&g, None);
            let half = count_cycles_half(&g, None);
            assert_eq!(full.girth, half.girth);
            assert_eq!(full.counts, half.counts);
            assert_eq!(full.per_node, half.per_node);
        }
    }

    #[test]
    fn clamp_is_recorded() {
        let p = count_cycles_full(&k22(), Some(12));
        assert!(p.clamped);
        assert_eq!(p.counts.keys().max(), Some(&6));
        let q = count_cycles_full(&k22(), Some(4));
        assert!(!q.clamped);
        assert_eq!(q.counts.keys().max(), Some(&4));
    }

    #[test]
    fn acyclic_profile_is_empty() {
        let tree = BipartiteGraph::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        let p = count_cycles_full(&tree, None);
        assert_eq!(p.girth, Girth::Acyclic);
        assert!(p.counts.is_empty());
    }

    #[test]
    fn per_node_sums_to_totals() {
        let p = count_cycles_full(&walkthrough_graph(), None);
        let per_node = p.per_node.as_ref().unwrap();
        for (&l, &total) in &p.counts {
            let sum: u64 = per_node.values().map(|m| m.get(&l).copied().unwrap_or(0)).sum();
            assert_eq!(sum, total, "length {l}");
        }
    }

    #[test]
    fn profile_serialization_shape() {
        let p = count_cycles_full(&k22(), None);
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json["girth"], 4);
        assert_eq!(json["counts"]["4"], 1);
        assert_eq!(json["clamped"], false);
        let tree = BipartiteGraph::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        let p = count_cycles_full(&tree, None);
        assert_eq!(serde_json::to_value(&p).unwrap()["girth"], "acyclic");
    }
}
