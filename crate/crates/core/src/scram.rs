//! SCRAM systems: users with LDPC codes transmitting over shared slotted
//! ALOHA resources, represented as a three-layer Tanner graph.
//!
//! Variable nodes stand for the transmitted symbols of all users. Each
//! variable node touches exactly one SA check node (the slot its symbol was
//! sent in) and the LDPC check nodes of its own user's code. The system maps
//! one-to-one onto a hybrid matrix whose first `n_slots` rows are the SA
//! incidence band and whose remaining rows stack the per-user parity-check
//! matrices block-diagonally.

use crate::cycles::{self, oracle, Girth};
use crate::global8;
use crate::graph::BipartiteGraph;
use crate::ldpc::{GlobalIndexMap, ParityCheckMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name of the slot-assignment generator, recorded in reports so assignments
/// reproduce across platforms.
pub const RNG_ALGORITHM: &str = "chacha12";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScramError {
    #[error("no users configured")]
    NoUsers,
    #[error("slot count must be positive")]
    NoSlots,
    #[error("user {user} transmits {needed} symbols but only {available} slots exist")]
    NotEnoughSlots { user: usize, needed: usize, available: usize },
    #[error("user {user}'s parity-check matrix has duplicate entries")]
    InvalidCode { user: usize },
    #[error("user {user} assigns slot {slot} twice but sampling is without replacement")]
    DuplicateSlot { user: usize, slot: usize },
    #[error("inconsistent assignment: {reason}")]
    InconsistentAssignment { reason: String },
}

/// Slot sampling discipline. The default draws each user's slots without
/// replacement, which is what keeps same-user symbol pairs off shared slots
/// and every global cycle at length eight or more. The with-replacement mode
/// exists for counter-example studies only and is excluded from the girth
/// bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotPolicy {
    #[default]
    WithoutReplacement,
    WithReplacement,
}

/// One user's code and payload size.
#[derive(Debug, Clone)]
pub struct UserCode {
    pub matrix: ParityCheckMatrix,
    /// Information bits `k`. Carried as metadata; never inferred from rank.
    pub info_bits: usize,
}

/// Everything needed to build a SCRAM system.
#[derive(Debug, Clone)]
pub struct ScramConfig {
    pub users: Vec<UserCode>,
    pub n_slots: usize,
    pub seed: u64,
}

impl ScramConfig {
    fn check(&self) -> Result<(), ScramError> {
        if self.users.is_empty() {
            return Err(ScramError::NoUsers);
        }
        if self.n_slots == 0 {
            return Err(ScramError::NoSlots);
        }
        for (u, user) in self.users.iter().enumerate() {
            if user.matrix.n_cols() > self.n_slots {
                return Err(ScramError::NotEnoughSlots {
                    user: u,
                    needed: user.matrix.n_cols(),
                    available: self.n_slots,
                });
            }
            let has_duplicates = user
                .matrix
                .validate()
                .iter()
                .any(|d| matches!(d, crate::ldpc::Diagnostic::DuplicateEntry { .. }));
            if has_duplicates {
                return Err(ScramError::InvalidCode { user: u });
            }
        }
        Ok(())
    }
}

/// Per-user injective map from symbol index to slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotAssignment {
    slots: Vec<Vec<usize>>,
    policy: SlotPolicy,
}

impl SlotAssignment {
    pub fn new(slots: Vec<Vec<usize>>, policy: SlotPolicy) -> Result<Self, ScramError> {
        if policy == SlotPolicy::WithoutReplacement {
            for (u, user_slots) in slots.iter().enumerate() {
                let mut seen = user_slots.clone();
                seen.sort_unstable();
                for w in seen.windows(2) {
                    if w[0] == w[1] {
                        return Err(ScramError::DuplicateSlot { user: u, slot: w[0] });
                    }
                }
            }
        }
        Ok(SlotAssignment { slots, policy })
    }

    pub fn policy(&self) -> SlotPolicy {
        self.policy
    }

    /// Slot of each symbol of `user`, in symbol order.
    pub fn user_slots(&self, user: usize) -> &[usize] {
        &self.slots[user]
    }

    pub fn user_count(&self) -> usize {
        self.slots.len()
    }
}

/// The on-disk form of an assignment: 1-based slot numbers plus enough
/// context to reproduce the draw.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub rng: String,
    pub seed: u64,
    pub policy: SlotPolicy,
    /// `slots[user][symbol]` is the 1-based slot number.
    pub slots: Vec<Vec<usize>>,
}

impl AssignmentRecord {
    pub fn from_assignment(assignment: &SlotAssignment, seed: u64) -> Self {
        AssignmentRecord {
            rng: RNG_ALGORITHM.to_string(),
            seed,
            policy: assignment.policy,
            slots: assignment
                .slots
                .iter()
                .map(|user| user.iter().map(|&s| s + 1).collect())
                .collect(),
        }
    }

    pub fn to_assignment(&self) -> Result<SlotAssignment, ScramError> {
        let mut slots = Vec::with_capacity(self.slots.len());
        for (u, user) in self.slots.iter().enumerate() {
            let mut row = Vec::with_capacity(user.len());
            for &s in user {
                if s == 0 {
                    return Err(ScramError::InconsistentAssignment {
                        reason: format!("user {u} lists slot 0; slot numbers are 1-based"),
                    });
                }
                row.push(s - 1);
            }
            slots.push(row);
        }
        SlotAssignment::new(slots, self.policy)
    }
}

/// Draws each user's slots independently: a uniform random subset of the
/// available slots, in uniform random order, without replacement.
/// Deterministic for a given seed.
pub fn assign_slots(config: &ScramConfig) -> Result<SlotAssignment, ScramError> {
    assign_slots_with_policy(config, SlotPolicy::WithoutReplacement)
}

/// [`assign_slots`] with an explicit sampling policy.
pub fn assign_slots_with_policy(
    config: &ScramConfig,
    policy: SlotPolicy,
) -> Result<SlotAssignment, ScramError> {
    config.check()?;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let mut slots = Vec::with_capacity(config.users.len());
    for user in &config.users {
        let n = user.matrix.n_cols();
        let user_slots: Vec<usize> = match policy {
            SlotPolicy::WithoutReplacement => {
                rand::seq::index::sample(&mut rng, config.n_slots, n).into_vec()
            }
            SlotPolicy::WithReplacement => {
                use rand::Rng;
                (0..n).map(|_| rng.random_range(0..config.n_slots)).collect()
            }
        };
        slots.push(user_slots);
    }
    SlotAssignment::new(slots, policy)
}

/// Warnings surfaced while building a system. These never abort the build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildWarning {
    /// The user's parity-check matrix has no entries, so its variable nodes
    /// hang off the SA layer alone.
    AllZeroCode { user: usize },
}

impl std::fmt::Display for BuildWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BuildWarning::AllZeroCode { user } => {
                write!(f, "warning: user {} has an all-zero parity-check matrix", user + 1)
            }
        }
    }
}

/// The three-layer Tanner graph, stored as adjacency views over global
/// indices. Immutable after construction and safe to share across readers.
#[derive(Debug, Clone)]
pub struct ScramSystem {
    index_map: GlobalIndexMap,
    codes: Vec<ParityCheckMatrix>,
    info_bits: Vec<usize>,
    policy: SlotPolicy,
    seed: u64,
    /// Slot of each variable node (A_v^(S) has exactly one element).
    slot_of_var: Vec<usize>,
    /// Variables colliding at each slot, ascending (A_s).
    sa_adj: Vec<Vec<usize>>,
    /// Variables on each global LDPC check, ascending (A_l).
    check_vars: Vec<Vec<usize>>,
    /// Global LDPC checks on each variable, ascending (A_v^(L)).
    var_checks: Vec<Vec<usize>>,
    /// Dense ids for the LDPC edges, for message storage.
    ldpc_edges: Vec<(usize, usize)>,
    var_ldpc_edges: Vec<Vec<usize>>,
    check_ldpc_edges: Vec<Vec<usize>>,
    warnings: Vec<BuildWarning>,
}

/// Assembles the three-layer graph from a configuration and an assignment.
pub fn build_system(
    config: &ScramConfig,
    assignment: &SlotAssignment,
) -> Result<ScramSystem, ScramError> {
    config.check()?;
    if assignment.user_count() != config.users.len() {
        return Err(ScramError::InconsistentAssignment {
            reason: format!(
                "{} users configured but assignment covers {}",
                config.users.len(),
                assignment.user_count()
            ),
        });
    }
    let symbols: Vec<usize> = config.users.iter().map(|u| u.matrix.n_cols()).collect();
    let checks: Vec<usize> = config.users.iter().map(|u| u.matrix.n_rows()).collect();
    let index_map = GlobalIndexMap::new(symbols, checks, config.n_slots)
        .expect("config.check ruled out empty user lists");

    let n_vars = index_map.total_symbols();
    let n_checks = index_map.total_checks();
    let mut slot_of_var = Vec::with_capacity(n_vars);
    let mut sa_adj = vec![Vec::new(); config.n_slots];
    let mut warnings = Vec::new();

    for (u, user) in config.users.iter().enumerate() {
        let user_slots = assignment.user_slots(u);
        if user_slots.len() != user.matrix.n_cols() {
            return Err(ScramError::InconsistentAssignment {
                reason: format!(
                    "user {u} has {} symbols but {} assigned slots",
                    user.matrix.n_cols(),
                    user_slots.len()
                ),
            });
        }
        if assignment.policy == SlotPolicy::WithoutReplacement {
            let mut seen = user_slots.to_vec();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(ScramError::InconsistentAssignment {
                    reason: format!("user {u} repeats a slot without replacement"),
                });
            }
        }
        for (i, &slot) in user_slots.iter().enumerate() {
            if slot >= config.n_slots {
                return Err(ScramError::InconsistentAssignment {
                    reason: format!(
                        "user {u} symbol {i} assigned slot {slot}, but only {} slots exist",
                        config.n_slots
                    ),
                });
            }
            let global = index_map.vn_to_global(u, i).expect("symbol in range");
            debug_assert_eq!(global, slot_of_var.len());
            slot_of_var.push(slot);
            sa_adj[slot].push(global);
        }
        if user.matrix.entry_count() == 0 {
            warnings.push(BuildWarning::AllZeroCode { user: u });
        }
    }
    debug_assert_eq!(sa_adj.iter().map(Vec::len).sum::<usize>(), n_vars);

    let mut check_vars = vec![Vec::new(); n_checks];
    let mut var_checks = vec![Vec::new(); n_vars];
    for (u, user) in config.users.iter().enumerate() {
        for (j, i) in user.matrix.entries() {
            let global_check = index_map.cn_to_global(u, j).expect("check in range");
            let global_var = index_map.vn_to_global(u, i).expect("symbol in range");
            check_vars[global_check].push(global_var);
            var_checks[global_var].push(global_check);
        }
    }
    for adj in &mut check_vars {
        adj.sort_unstable();
    }
    for adj in &mut var_checks {
        adj.sort_unstable();
    }

    // Dense edge ids in (variable, check) order.
    let mut ldpc_edges = Vec::new();
    let mut var_ldpc_edges = vec![Vec::new(); n_vars];
    let mut check_ldpc_edges = vec![Vec::new(); n_checks];
    for v in 0..n_vars {
        for &c in &var_checks[v] {
            let id = ldpc_edges.len();
            ldpc_edges.push((v, c));
            var_ldpc_edges[v].push(id);
            check_ldpc_edges[c].push(id);
        }
    }

    Ok(ScramSystem {
        index_map,
        codes: config.users.iter().map(|u| u.matrix.clone()).collect(),
        info_bits: config.users.iter().map(|u| u.info_bits).collect(),
        policy: assignment.policy,
        seed: config.seed,
        slot_of_var,
        sa_adj,
        check_vars,
        var_checks,
        ldpc_edges,
        var_ldpc_edges,
        check_ldpc_edges,
        warnings,
    })
}

impl ScramSystem {
    pub fn index_map(&self) -> &GlobalIndexMap {
        &self.index_map
    }

    pub fn n_vars(&self) -> usize {
        self.index_map.total_symbols()
    }

    pub fn n_checks(&self) -> usize {
        self.index_map.total_checks()
    }

    pub fn n_slots(&self) -> usize {
        self.index_map.n_slots()
    }

    pub fn user_count(&self) -> usize {
        self.codes.len()
    }

    pub fn code(&self, user: usize) -> &ParityCheckMatrix {
        &self.codes[user]
    }

    pub fn info_bits(&self, user: usize) -> usize {
        self.info_bits[user]
    }

    pub fn policy(&self) -> SlotPolicy {
        self.policy
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn user_of_var(&self, var: usize) -> usize {
        self.index_map.user_of_vn(var).expect("variable in range")
    }

    pub fn slot_of_var(&self, var: usize) -> usize {
        self.slot_of_var[var]
    }

    /// Variables colliding at `slot`, ascending by global index.
    pub fn colliders(&self, slot: usize) -> &[usize] {
        &self.sa_adj[slot]
    }

    /// Variables on a global LDPC check, ascending.
    pub fn check_vars(&self, check: usize) -> &[usize] {
        &self.check_vars[check]
    }

    /// Global LDPC checks on a variable, ascending.
    pub fn var_checks(&self, var: usize) -> &[usize] {
        &self.var_checks[var]
    }

    pub fn ldpc_edge_count(&self) -> usize {
        self.ldpc_edges.len()
    }

    pub fn ldpc_edge(&self, id: usize) -> (usize, usize) {
        self.ldpc_edges[id]
    }

    pub fn var_ldpc_edges(&self, var: usize) -> &[usize] {
        &self.var_ldpc_edges[var]
    }

    pub fn check_ldpc_edges(&self, check: usize) -> &[usize] {
        &self.check_ldpc_edges[check]
    }

    pub fn warnings(&self) -> &[BuildWarning] {
        &self.warnings
    }

    /// Collision sizes: entry `d` of the histogram is the number of slots
    /// with exactly `d` colliders.
    pub fn collision_histogram(&self) -> Vec<usize> {
        let max = self.sa_adj.iter().map(Vec::len).max().unwrap_or(0);
        let mut hist = vec![0usize; max + 1];
        for adj in &self.sa_adj {
            hist[adj.len()] += 1;
        }
        hist
    }
}

/// The hybrid matrix equivalent of a three-layer Tanner graph: SA incidence
/// rows on top, the users' parity-check matrices stacked block-diagonally
/// below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridMatrix {
    matrix: ParityCheckMatrix,
    sa_rows: usize,
}

impl HybridMatrix {
    pub fn matrix(&self) -> &ParityCheckMatrix {
        &self.matrix
    }

    pub fn sa_rows(&self) -> usize {
        self.sa_rows
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.n_cols()
    }

    /// The bipartite graph of the matrix; identical to the three-layer
    /// Tanner graph with all check nodes on the right.
    pub fn to_bipartite(&self) -> BipartiteGraph {
        self.matrix.to_tanner_graph()
    }

    /// Returns true when `row` belongs to the SA band.
    pub fn is_sa_row(&self, row: usize) -> bool {
        row < self.sa_rows
    }

    /// Splits the matrix back into SA and LDPC adjacency given the band
    /// boundary: (variables per slot, variables per global check).
    pub fn split_adjacency(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let sa = (0..self.sa_rows).map(|r| self.matrix.row(r).to_vec()).collect();
        let ldpc =
            (self.sa_rows..self.matrix.n_rows()).map(|r| self.matrix.row(r).to_vec()).collect();
        (sa, ldpc)
    }
}

/// Maps the system onto its hybrid matrix. A symbol assigned to slot `s`
/// puts a one at (s, var); an entry (j, i) of user u's code puts a one at
/// (n_slots + check_prefix(u) + j, symbol_prefix(u) + i).
pub fn build_hybrid_matrix(system: &ScramSystem) -> HybridMatrix {
    let n_slots = system.n_slots();
    let n_rows = n_slots + system.n_checks();
    let mut entries = Vec::with_capacity(system.n_vars() + system.ldpc_edge_count());
    for (var, &slot) in system.slot_of_var.iter().enumerate() {
        entries.push((slot, var));
    }
    for (check, vars) in system.check_vars.iter().enumerate() {
        for &var in vars {
            entries.push((n_slots + check, var));
        }
    }
    let matrix = ParityCheckMatrix::from_entries(n_rows, system.n_vars(), &entries)
        .expect("hybrid entries are unique and in range");
    HybridMatrix { matrix, sa_rows: n_slots }
}

/// Information bits per slot, `D = sum(k_u) / N_s`.
pub fn channel_load(config: &ScramConfig) -> Result<f64, ScramError> {
    if config.n_slots == 0 {
        return Err(ScramError::NoSlots);
    }
    let total_bits: usize = config.users.iter().map(|u| u.info_bits).sum();
    Ok(total_bits as f64 / config.n_slots as f64)
}

/// The least girth over the users' codes; acyclic codes act as plus
/// infinity.
pub fn local_girth(system: &ScramSystem) -> Girth {
    system
        .codes
        .iter()
        .map(|code| cycles::girth(&code.to_tanner_graph()))
        .fold(Girth::Acyclic, Girth::min)
}

/// Outcome of the girth analysis of a full system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScramGirthReport {
    /// The overall girth. Measured exactly unless `bound_only` is set, in
    /// which case it is the bound `min(8, local)`.
    pub girth: Girth,
    /// Least girth among the users' codes.
    pub local: Girth,
    /// Shortest global cycle observed, if any was found within the searched
    /// window.
    pub global_min: Option<usize>,
    /// Global cycles were searched exhaustively up to this length.
    pub global_searched_up_to: usize,
    /// Number of global 8-cycles, when the counter applies.
    pub global_8cycles: Option<u64>,
    /// Set when the system was too large for exact analysis.
    pub bound_only: bool,
}

/// Node-count ceiling for exact hybrid-graph analysis.
const EXACT_ANALYSIS_MAX_NODES: usize = 5_000;

/// Measures the overall girth of the system and classifies short cycles.
///
/// The hybrid graph's girth comes from the half-engine profile. Cycles
/// shorter than eight are enumerated exhaustively and classified as local
/// (confined to one user's LDPC band) or global (touching an SA row); the
/// direct counter then pins down whether global 8-cycles exist. Systems too
/// large for that fall back to the bound `min(8, local girth)` with
/// `bound_only` set.
pub fn scram_girth(system: &ScramSystem, oracle_budget: u64) -> ScramGirthReport {
    let local = local_girth(system);
    let hybrid = build_hybrid_matrix(system);
    let graph = hybrid.to_bipartite();
    let bound = ScramGirthReport {
        girth: Girth::Finite(8).min(local),
        local,
        global_min: None,
        global_searched_up_to: 0,
        global_8cycles: None,
        bound_only: true,
    };
    if graph.node_count() > EXACT_ANALYSIS_MAX_NODES {
        return bound;
    }
    let profile = cycles::count_cycles_half(&graph, None);
    let short = match oracle::enumerate_cycles(&graph, 6, oracle_budget) {
        Ok(cycles) => cycles,
        Err(_) => return bound,
    };
    let mut shortest_global: Option<usize> = None;
    for cycle in &short {
        if cycle_touches_sa(&hybrid, &graph, cycle) {
            let len = cycle.len();
            shortest_global = Some(shortest_global.map_or(len, |m: usize| m.min(len)));
        }
    }
    // The direct counter extends the exhaustive search from 6 to 8; it does
    // not apply to with-replacement systems.
    let (global_8cycles, searched) = match system.policy {
        SlotPolicy::WithoutReplacement => {
            (Some(global8::count_global_8cycles(system).total), 8)
        }
        SlotPolicy::WithReplacement => (None, 6),
    };
    let global_min = shortest_global.or(match global_8cycles {
        Some(n) if n > 0 => Some(8),
        _ => None,
    });
    if system.policy == SlotPolicy::WithoutReplacement {
        debug_assert!(global_min.is_none_or(|g| g >= 8), "global cycles shorter than 8");
    }
    ScramGirthReport {
        girth: profile.girth,
        local,
        global_min,
        global_searched_up_to: searched,
        global_8cycles,
        bound_only: false,
    }
}

/// A cycle of the hybrid graph is global exactly when it crosses the SA
/// band. A cycle that stays on LDPC rows is confined to one user's code
/// block, because variables connect only to their own user's checks.
pub fn cycle_touches_sa(
    hybrid: &HybridMatrix,
    graph: &BipartiteGraph,
    cycle_flat_nodes: &[usize],
) -> bool {
    cycle_flat_nodes
        .iter()
        .any(|&id| id >= graph.left_count() && hybrid.is_sa_row(id - graph.left_count()))
}
