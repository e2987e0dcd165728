//! Construction and analysis of SCRAM systems: LDPC-coded users transmitting
//! over shared slotted-ALOHA resources, decoded jointly on a three-layer
//! Tanner graph.
//!
//! The crate covers the full pipeline at desk scale:
//!
//! * [`ldpc`]: sparse parity-check matrices, alist interchange, validation,
//!   and the global/local index maps of the joint system.
//! * [`cycles`]: girth and short-cycle profiles of any bipartite graph via
//!   monomial message passing (full and half engines), with a brute-force
//!   enumeration oracle.
//! * [`scram`]: slot assignment, the three-layer graph, the equivalent
//!   hybrid matrix, and girth analysis of whole systems.
//! * [`global8`]: the correlation-based counter for global 8-cycles, plus
//!   its validation against profile subtraction.
//! * [`decoder`]: the joint belief-propagation decoder, a seeded channel
//!   simulator, and a packet-error-rate harness.
//! * [`codegen`]: seeded random codes with a girth floor for experiments.
//!
//! Building a system, counting its global 8-cycles and checking the count
//! against the cycle profiles takes a few lines:
//!
//! ```
//! use scram_core::codegen::random_code_girth6;
//! use scram_core::scram::{assign_slots, build_system, ScramConfig, UserCode};
//!
//! let users: Vec<UserCode> = (0..4)
//!     .map(|u| UserCode {
//!         matrix: random_code_girth6(9, 18, 2, u).unwrap(),
//!         info_bits: 9,
//!     })
//!     .collect();
//! let config = ScramConfig { users, n_slots: 36, seed: 1 }; // load 1.0
//! let assignment = assign_slots(&config)?;
//! let system = build_system(&config, &assignment)?;
//!
//! let report = scram_core::global8::count_global_8cycles(&system);
//! let check = scram_core::global8::verify_against_profile(&system).unwrap();
//! assert_eq!(check.algorithmic, report.total);
//! assert!(check.equal);
//! # Ok::<(), scram_core::scram::ScramError>(())
//! ```

pub mod codegen;
pub mod cycles;
pub mod decoder;
pub mod fixtures;
pub mod global8;
pub mod graph;
pub mod ldpc;
pub mod scram;

pub use cycles::{count_cycles_full, count_cycles_half, count_node_cycles, girth};
pub use cycles::{CycleProfile, Girth, MessageState, Monomial};
pub use decoder::{
    decode, run_per_experiment, simulate_transmit, ChannelModel, DecodeOptions, DecodeResult,
    DecoderState, FadingModel, PayloadMode, PerTable, ReceivedFrame,
};
pub use global8::{common_ldpc_checks, count_global_8cycles, verify_against_profile};
pub use global8::{Global8Report, Global8Verification};
pub use graph::{BipartiteGraph, NodeRef, Side};
pub use ldpc::{AlistError, Diagnostic, GlobalIndexMap, ParityCheckMatrix, Severity};
pub use scram::{
    assign_slots, build_hybrid_matrix, build_system, channel_load, local_girth, scram_girth,
    AssignmentRecord, HybridMatrix, ScramConfig, ScramGirthReport, ScramSystem, SlotAssignment,
    SlotPolicy, UserCode,
};
