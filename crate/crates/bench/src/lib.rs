//! Shared fixtures for the benchmark targets.

use scram_core::codegen::random_code_girth6;
use scram_core::scram::{assign_slots, build_system, ScramConfig, ScramSystem, UserCode};

fn mix(seed: u64, stream: u64) -> u64 {
    let mut x = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// A load-1 system with `users` girth-6 codes of `n` symbols each.
pub fn seeded_system(seed: u64, users: usize, n: usize) -> ScramSystem {
    let m = n / 2;
    let k = n - m;
    let users: Vec<UserCode> = (0..users)
        .map(|u| UserCode {
            matrix: random_code_girth6(m, n, 2, mix(seed, u as u64)).expect("feasible code"),
            info_bits: k,
        })
        .collect();
    let n_slots = users.iter().map(|u| u.info_bits).sum();
    let config = ScramConfig { users, n_slots, seed: mix(seed, 0xBE) };
    let assignment = assign_slots(&config).expect("assignment fits");
    build_system(&config, &assignment).expect("system builds")
}
