//! Shared generators and independent oracles for the integration suites.
//!
//! The oracles here deliberately avoid the library's implementation paths:
//! the reference sum-product decoder works directly on a parity-check
//! matrix with explicit exclusion loops, and the slot marginalizer sums
//! plain probabilities instead of running in the log domain.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use scram_core::decoder::{ATANH_GUARD, LLR_CLAMP};
use scram_core::graph::BipartiteGraph;
use scram_core::ldpc::ParityCheckMatrix;
use scram_core::scram::{assign_slots, build_system, ScramConfig, ScramSystem, UserCode};

pub fn mix(seed: u64, stream: u64) -> u64 {
    let mut x = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// A random bipartite graph with at most `max_side` nodes per side and the
/// given edge density.
pub fn random_bipartite(rng: &mut ChaCha12Rng, max_side: usize, density: f64) -> BipartiteGraph {
    let left = rng.random_range(2..=max_side);
    let right = rng.random_range(2..=max_side);
    let mut edges = Vec::new();
    for l in 0..left {
        for r in 0..right {
            if rng.random_bool(density) {
                edges.push((l, r));
            }
        }
    }
    BipartiteGraph::new(left, right, edges).expect("generated edges are unique")
}

/// Desk-scale system: four users with girth-6 column-weight-2 codes and a
/// slot count chosen for channel load exactly 1. Even seeds use equal code
/// sizes, odd seeds heterogeneous ones.
pub fn desk_system(seed: u64) -> ScramSystem {
    let sizes: [usize; 4] =
        if seed.is_multiple_of(2) { [18, 18, 18, 18] } else { [12, 16, 20, 24] };
    let users: Vec<UserCode> = sizes
        .iter()
        .enumerate()
        .map(|(u, &n)| {
            let m = n / 2;
            let matrix = scram_core::codegen::random_code_girth6(m, n, 2, mix(seed, u as u64))
                .expect("desk code parameters are feasible");
            UserCode { matrix, info_bits: n - m }
        })
        .collect();
    let n_slots: usize = users.iter().map(|u| u.info_bits).sum();
    let config = ScramConfig { users, n_slots, seed: mix(seed, 0xDE5C) };
    let assignment = assign_slots(&config).unwrap();
    build_system(&config, &assignment).unwrap()
}

/// Two-user variant for decoder smoke tests, load 1.
pub fn two_user_system(seed: u64) -> ScramSystem {
    let users: Vec<UserCode> = (0..2)
        .map(|u| {
            let matrix = scram_core::codegen::random_code_girth6(9, 18, 2, mix(seed, 100 + u))
                .expect("code parameters are feasible");
            UserCode { matrix, info_bits: 9 }
        })
        .collect();
    let config = ScramConfig { users, n_slots: 18, seed: mix(seed, 0x2B) };
    let assignment = assign_slots(&config).unwrap();
    build_system(&config, &assignment).unwrap()
}

/// Reference sum-product decoder over one parity-check matrix.
///
/// Messages live per (row, position-in-row). The recursion matches the
/// joint decoder's LDPC layer when the variable-to-check messages start at
/// zero: check messages first, then variable messages with explicit
/// exclusion sums. Clamping uses the same constants as the implementation
/// so trajectories are comparable to tight tolerances.
pub struct ReferenceSumProduct<'a> {
    code: &'a ParityCheckMatrix,
    lambda: Vec<f64>,
    /// var -> list of (row, position) where it appears.
    col_positions: Vec<Vec<(usize, usize)>>,
    pub var_to_check: Vec<Vec<f64>>,
    pub check_to_var: Vec<Vec<f64>>,
}

impl<'a> ReferenceSumProduct<'a> {
    pub fn new(code: &'a ParityCheckMatrix, lambda: Vec<f64>) -> Self {
        assert_eq!(lambda.len(), code.n_cols());
        let mut col_positions = vec![Vec::new(); code.n_cols()];
        for r in 0..code.n_rows() {
            for (i, &c) in code.row(r).iter().enumerate() {
                col_positions[c].push((r, i));
            }
        }
        let var_to_check: Vec<Vec<f64>> =
            (0..code.n_rows()).map(|r| vec![0.0; code.row(r).len()]).collect();
        let check_to_var = var_to_check.clone();
        ReferenceSumProduct { code, lambda, col_positions, var_to_check, check_to_var }
    }

    /// One iteration: tanh-rule check update, then variable update.
    pub fn iterate(&mut self) {
        for r in 0..self.code.n_rows() {
            let deg = self.code.row(r).len();
            for i in 0..deg {
                let mut product = 1.0;
                for j in 0..deg {
                    if j != i {
                        product *= (self.var_to_check[r][j] / 2.0).tanh();
                    }
                }
                let product = product.clamp(-ATANH_GUARD, ATANH_GUARD);
                self.check_to_var[r][i] =
                    (2.0 * product.atanh()).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
        }
        for v in 0..self.code.n_cols() {
            for &(r, i) in &self.col_positions[v] {
                let mut sum = self.lambda[v];
                for &(r2, i2) in &self.col_positions[v] {
                    if (r2, i2) != (r, i) {
                        sum += self.check_to_var[r2][i2];
                    }
                }
                self.var_to_check[r][i] = sum.clamp(-LLR_CLAMP, LLR_CLAMP);
            }
        }
    }

    pub fn check_message(&self, row: usize, var: usize) -> f64 {
        let i = self.code.row(row).iter().position(|&c| c == var).expect("edge exists");
        self.check_to_var[row][i]
    }

    pub fn var_message(&self, row: usize, var: usize) -> f64 {
        let i = self.code.row(row).iter().position(|&c| c == var).expect("edge exists");
        self.var_to_check[row][i]
    }
}

/// Probability-domain marginalizer for one slot: enumerates every sign
/// vector of the colliders, weights the Gaussian likelihood by the other
/// symbols' priors, and returns the posterior log ratio for the target.
pub fn sa_posterior_oracle(
    y: Complex64,
    h: &[Complex64],
    priors_llr: &[f64],
    target: usize,
    noise_variance: f64,
) -> f64 {
    let d = h.len();
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for m in 0..(1u64 << d) {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut prior = 1.0f64;
        for i in 0..d {
            let minus = (m >> i) & 1 == 1;
            sum += if minus { -h[i] } else { h[i] };
            if i != target {
                let p_plus = 1.0 / (1.0 + (-priors_llr[i]).exp());
                prior *= if minus { 1.0 - p_plus } else { p_plus };
            }
        }
        let weight = (-(y - sum).norm_sqr() / noise_variance).exp() * prior;
        if (m >> target) & 1 == 0 {
            num += weight;
        } else {
            den += weight;
        }
    }
    (num / den).ln().clamp(-LLR_CLAMP, LLR_CLAMP)
}

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}
