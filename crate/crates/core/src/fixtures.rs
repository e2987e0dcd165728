//! Small frozen matrices used across tests, benches and the docs.

use crate::ldpc::ParityCheckMatrix;

/// A 5x6 parity-check matrix whose Tanner graph has girth four, one 4-cycle
/// and three 6-cycles in total. The third variable node has degree three and
/// lies on exactly one 4-cycle and two 6-cycles, which makes it a convenient
/// walkthrough target for the counting engines. The counts were frozen after
/// verification with the enumeration oracle.
///
/// Rows and their columns (0-based):
///
/// ```text
/// check 0: v0 v3
/// check 1: v0 v1 v2
/// check 2: v2 v3 v4
/// check 3: v2 v4
/// check 4: v1 v3 v5
/// ```
pub fn girth4_walkthrough() -> ParityCheckMatrix {
    ParityCheckMatrix::from_entries(
        5,
        6,
        &[
            (0, 0),
            (0, 3),
            (1, 0),
            (1, 1),
            (1, 2),
            (2, 2),
            (2, 3),
            (2, 4),
            (3, 2),
            (3, 4),
            (4, 1),
            (4, 3),
            (4, 5),
        ],
    )
    .expect("fixture entries are valid")
}
