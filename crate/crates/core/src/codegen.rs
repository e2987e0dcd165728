//! Seeded construction of small random codes for experiments.
//!
//! Girth control works on the pair structure of the columns: a Tanner graph
//! has a 4-cycle exactly when two columns share two rows, so keeping every
//! row pair unique across columns guarantees girth at least six. Columns are
//! drawn one at a time with rejection on pair collisions.

use crate::ldpc::ParityCheckMatrix;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodegenError {
    #[error("{n_cols} weight-{col_weight} columns need {needed} distinct row pairs but only {available} exist")]
    TooDense { n_cols: usize, col_weight: usize, needed: usize, available: usize },
    #[error("gave up after {attempts} attempts; parameters leave too little slack")]
    GaveUp { attempts: usize },
    #[error("column weight must be at least 1 and at most the row count")]
    BadWeight,
}

/// Draws an `n_rows x n_cols` matrix with constant column weight and girth
/// at least six, deterministically from the seed.
pub fn random_code_girth6(
    n_rows: usize,
    n_cols: usize,
    col_weight: usize,
    seed: u64,
) -> Result<ParityCheckMatrix, CodegenError> {
    if col_weight == 0 || col_weight > n_rows {
        return Err(CodegenError::BadWeight);
    }
    let pairs_per_col = col_weight * (col_weight - 1) / 2;
    let available = n_rows * (n_rows - 1) / 2;
    if n_cols * pairs_per_col > available {
        return Err(CodegenError::TooDense {
            n_cols,
            col_weight,
            needed: n_cols * pairs_per_col,
            available,
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    const RESTARTS: usize = 200;
    const COLUMN_TRIES: usize = 500;
    for _ in 0..RESTARTS {
        let mut used_pairs: HashSet<(usize, usize)> = HashSet::new();
        let mut entries: Vec<(usize, usize)> = Vec::with_capacity(n_cols * col_weight);
        let mut ok = true;
        'columns: for c in 0..n_cols {
            for _ in 0..COLUMN_TRIES {
                let mut rows = sample(&mut rng, n_rows, col_weight).into_vec();
                rows.sort_unstable();
                let fresh = pairs(&rows).all(|p| !used_pairs.contains(&p));
                if fresh {
                    for p in pairs(&rows) {
                        used_pairs.insert(p);
                    }
                    entries.extend(rows.iter().map(|&r| (r, c)));
                    continue 'columns;
                }
            }
            ok = false;
            break;
        }
        if ok {
            let m = ParityCheckMatrix::from_entries(n_rows, n_cols, &entries)
                .expect("sampled entries are distinct and in range");
            debug_assert!(no_four_cycles(&m));
            return Ok(m);
        }
    }
    Err(CodegenError::GaveUp { attempts: RESTARTS })
}

fn pairs(rows: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    rows.iter().enumerate().flat_map(move |(i, &a)| rows[i + 1..].iter().map(move |&b| (a, b)))
}

fn no_four_cycles(m: &ParityCheckMatrix) -> bool {
    !matches!(crate::cycles::girth(&m.to_tanner_graph()), crate::cycles::Girth::Finite(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{girth, Girth};

    #[test]
    fn generated_codes_have_girth_at_least_six() {
        for seed in 0..10 {
            let m = random_code_girth6(9, 18, 2, seed).unwrap();
            assert_eq!(m.n_rows(), 9);
            assert_eq!(m.n_cols(), 18);
            assert_eq!(m.entry_count(), 36);
            match girth(&m.to_tanner_graph()) {
                Girth::Finite(g) => assert!(g >= 6, "seed {seed} gave girth {g}"),
                Girth::Acyclic => {}
            }
        }
    }

    #[test]
    fn weight_three_works_when_pairs_allow() {
        let m = random_code_girth6(12, 16, 3, 5).unwrap();
        for c in 0..16 {
            assert_eq!(m.col(c).len(), 3);
        }
        match girth(&m.to_tanner_graph()) {
            Girth::Finite(g) => assert!(g >= 6),
            Girth::Acyclic => {}
        }
    }

    #[test]
    fn determinism() {
        let a = random_code_girth6(9, 18, 2, 42).unwrap();
        let b = random_code_girth6(9, 18, 2, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn impossible_density_rejected() {
        assert!(matches!(
            random_code_girth6(9, 18, 3, 0),
            Err(CodegenError::TooDense { .. })
        ));
        assert_eq!(random_code_girth6(4, 2, 0, 0), Err(CodegenError::BadWeight));
    }
}
