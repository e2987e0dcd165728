//! Joint decoding on the three-layer Tanner graph, with a seeded channel
//! simulator and a packet-error-rate harness.
//!
//! One iteration runs the two check-node updates and then the variable-node
//! update. SA check nodes marginalize the received slot observation over
//! every sign combination of their colliders, weighting each hypothesis by
//! the product of the other symbols' priors; LDPC check nodes apply the
//! extrinsic tanh rule; variable nodes return extrinsic sums. LLRs follow
//! the convention `ln P(x = +1) / P(x = -1)` throughout, and BPSK maps bit 0
//! to +1.
//!
//! The SA and LDPC updates both read only the variable messages of the
//! previous half-iteration, so they may run concurrently; the variable
//! update is a barrier. Frames decode independently.

use crate::cycles::Girth;
use crate::global8;
use crate::scram::{self, ScramSystem, SlotPolicy};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

/// Messages are clamped to this magnitude after every update.
pub const LLR_CLAMP: f64 = 50.0;
/// atanh inputs are clamped into (-1, 1) by this margin.
pub const ATANH_GUARD: f64 = 1.0 - 1e-12;
/// Default ceiling on SA hypothesis enumeration (2^12).
pub const DEFAULT_HYPOTHESIS_LIMIT: u64 = 1 << 12;
/// Default iteration cap; the stopping rule is all-parities-satisfied.
pub const DEFAULT_MAX_ITERS: usize = 50;

#[derive(Debug, Error, PartialEq)]
pub enum DecoderError {
    #[error("noise variance must be positive, got {value}")]
    BadNoiseVariance { value: f64 },
    #[error("max_iters must be at least 1")]
    BadIterationLimit,
    #[error(
        "slot {slot} has {degree} colliders ({hypotheses} hypotheses, limit {limit}); \
         reduce the collision degree or raise the hypothesis limit"
    )]
    CollisionTooLarge { slot: usize, degree: usize, hypotheses: u64, limit: u64 },
    #[error("payload covers {got} users, expected {expected}")]
    PayloadUsers { got: usize, expected: usize },
    #[error("payload for user {user} has {got} bits, expected {expected}")]
    PayloadShape { user: usize, got: usize, expected: usize },
    #[error("payload bit for user {user} at position {index} is not 0 or 1")]
    PayloadBit { user: usize, index: usize },
    #[error("received frame does not match the system: {reason}")]
    FrameShape { reason: String },
}

/// Flat fading per (slot, collider). `Unit` fixes every coefficient at 1;
/// `SeededFlat` draws circularly symmetric unit-power coefficients from the
/// frame seed. Coefficients are known to the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingModel {
    Unit,
    SeededFlat,
}

/// Complex AWGN channel with known noise variance.
#[derive(Debug, Clone, Copy)]
pub struct ChannelModel {
    /// Total variance of the complex noise, split evenly between the real
    /// and imaginary parts. Must be positive.
    pub noise_variance: f64,
    pub fading: FadingModel,
}

/// What the users transmit.
#[derive(Debug, Clone)]
pub enum PayloadMode {
    /// Every user sends the all-zero codeword (all symbols +1).
    AllZero,
    /// Explicit codeword bits per user.
    Given(Vec<Vec<u8>>),
}

/// One slotted frame as seen by the receiver, plus the transmitted truth for
/// evaluation.
#[derive(Debug, Clone)]
pub struct ReceivedFrame {
    /// Per-slot observation; empty slots carry pure noise.
    pub observations: Vec<Complex64>,
    /// Per-slot fading coefficients, aligned with the system's collider
    /// order.
    pub fading: Vec<Vec<Complex64>>,
    /// Transmitted BPSK symbol of every variable node.
    pub transmitted: Vec<f64>,
}

fn payload_symbols(system: &ScramSystem, payload: &PayloadMode) -> Result<Vec<f64>, DecoderError> {
    match payload {
        PayloadMode::AllZero => Ok(vec![1.0; system.n_vars()]),
        PayloadMode::Given(words) => {
            if words.len() != system.user_count() {
                return Err(DecoderError::PayloadUsers {
                    got: words.len(),
                    expected: system.user_count(),
                });
            }
            let mut x = Vec::with_capacity(system.n_vars());
            for (u, bits) in words.iter().enumerate() {
                let expected = system.code(u).n_cols();
                if bits.len() != expected {
                    return Err(DecoderError::PayloadShape {
                        user: u,
                        got: bits.len(),
                        expected,
                    });
                }
                for (i, &b) in bits.iter().enumerate() {
                    match b {
                        0 => x.push(1.0),
                        1 => x.push(-1.0),
                        _ => return Err(DecoderError::PayloadBit { user: u, index: i }),
                    }
                }
            }
            Ok(x)
        }
    }
}

/// Simulates one frame: per slot, the observation is the fading-weighted sum
/// of the colliding BPSK symbols plus complex Gaussian noise of total
/// variance `noise_variance`. Deterministic for a given seed.
pub fn simulate_transmit(
    system: &ScramSystem,
    channel: &ChannelModel,
    seed: u64,
    payload: &PayloadMode,
) -> Result<ReceivedFrame, DecoderError> {
    if channel.noise_variance.is_nan() || channel.noise_variance <= 0.0 {
        return Err(DecoderError::BadNoiseVariance { value: channel.noise_variance });
    }
    let x = payload_symbols(system, payload)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let sigma_per_dim = (channel.noise_variance / 2.0).sqrt();
    let mut observations = Vec::with_capacity(system.n_slots());
    let mut fading = Vec::with_capacity(system.n_slots());
    for slot in 0..system.n_slots() {
        let colliders = system.colliders(slot);
        let mut coeffs = Vec::with_capacity(colliders.len());
        for _ in colliders {
            let h = match channel.fading {
                FadingModel::Unit => Complex64::new(1.0, 0.0),
                FadingModel::SeededFlat => {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im) / 2.0_f64.sqrt()
                }
            };
            coeffs.push(h);
        }
        let mut y = Complex64::new(0.0, 0.0);
        for (h, &v) in coeffs.iter().zip(colliders) {
            y += h * x[v];
        }
        let noise_re: f64 = rng.sample(StandardNormal);
        let noise_im: f64 = rng.sample(StandardNormal);
        y += Complex64::new(noise_re * sigma_per_dim, noise_im * sigma_per_dim);
        observations.push(y);
        fading.push(coeffs);
    }
    Ok(ReceivedFrame { observations, fading, transmitted: x })
}

/// All LLR messages on the three-layer graph. SA messages are stored per
/// variable node, since every variable touches exactly one slot; LDPC
/// messages are stored per edge id.
#[derive(Debug, Clone)]
pub struct DecoderState {
    /// Slot-to-variable message for each variable node.
    pub sa_to_var: Vec<f64>,
    /// Variable-to-slot message for each variable node.
    pub var_to_sa: Vec<f64>,
    /// Check-to-variable message per LDPC edge.
    pub ldpc_to_var: Vec<f64>,
    /// Variable-to-check message per LDPC edge.
    pub var_to_ldpc: Vec<f64>,
    /// Completed iterations.
    pub iteration: usize,
}

impl DecoderState {
    pub fn new(system: &ScramSystem) -> Self {
        DecoderState {
            sa_to_var: vec![0.0; system.n_vars()],
            var_to_sa: vec![0.0; system.n_vars()],
            ldpc_to_var: vec![0.0; system.ldpc_edge_count()],
            var_to_ldpc: vec![0.0; system.ldpc_edge_count()],
            iteration: 0,
        }
    }
}

fn clamp_llr(x: f64) -> f64 {
    x.clamp(-LLR_CLAMP, LLR_CLAMP)
}

/// Numerically stable `ln(1 + e^x)`.
fn log1p_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Max-plus with correction: `ln(e^a + e^b)`.
fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// SA check-node update: for each slot and each collider, enumerates both
/// polarities of the target symbol against every sign combination of the
/// other colliders, weights the Gaussian likelihood of the observation by
/// the product of the other symbols' priors, and emits the log ratio of the
/// two marginal sums. The first iteration's zero variable messages reproduce
/// the uniform prior 1/M over the hypothesis set.
pub fn sa_check_update(
    state: &mut DecoderState,
    system: &ScramSystem,
    frame: &ReceivedFrame,
    noise_variance: f64,
    hypothesis_limit: u64,
) -> Result<(), DecoderError> {
    if noise_variance.is_nan() || noise_variance <= 0.0 {
        return Err(DecoderError::BadNoiseVariance { value: noise_variance });
    }
    if frame.observations.len() != system.n_slots() {
        return Err(DecoderError::FrameShape {
            reason: format!(
                "{} slot observations for {} slots",
                frame.observations.len(),
                system.n_slots()
            ),
        });
    }
    let mut log_prior = Vec::new();
    for slot in 0..system.n_slots() {
        let colliders = system.colliders(slot);
        let d = colliders.len();
        if d == 0 {
            continue;
        }
        if frame.fading[slot].len() != d {
            return Err(DecoderError::FrameShape {
                reason: format!(
                    "slot {slot} carries {} fading coefficients for {d} colliders",
                    frame.fading[slot].len()
                ),
            });
        }
        let hypotheses = if d > 63 { u64::MAX } else { 1u64 << (d - 1) };
        if hypotheses > hypothesis_limit {
            return Err(DecoderError::CollisionTooLarge {
                slot,
                degree: d,
                hypotheses,
                limit: hypothesis_limit,
            });
        }
        let y = frame.observations[slot];
        let h = &frame.fading[slot];

        // ln P(+1), ln P(-1) per collider from the incoming messages.
        log_prior.clear();
        for &v in colliders {
            let msg = state.var_to_sa[v];
            log_prior.push((-log1p_exp(-msg), -log1p_exp(msg)));
        }

        for target in 0..d {
            let mut marginal = [f64::NEG_INFINITY; 2];
            for (polarity, slot_sum) in marginal.iter_mut().enumerate() {
                let target_sign = if polarity == 0 { 1.0 } else { -1.0 };
                // Hypothesis index enumerates the other d-1 symbols in
                // binary-counter order, bit 0 meaning +1.
                for m in 0..hypotheses {
                    let mut sum = h[target] * target_sign;
                    let mut prior = 0.0;
                    let mut bit = 0;
                    for other in 0..d {
                        if other == target {
                            continue;
                        }
                        if (m >> bit) & 1 == 0 {
                            sum += h[other];
                            prior += log_prior[other].0;
                        } else {
                            sum -= h[other];
                            prior += log_prior[other].1;
                        }
                        bit += 1;
                    }
                    // Gaussian density with a negative exponent; the
                    // 1/(pi sigma^2) factor cancels in the ratio.
                    let log_lik = -(y - sum).norm_sqr() / noise_variance;
                    *slot_sum = log_add_exp(*slot_sum, log_lik + prior);
                }
            }
            state.sa_to_var[colliders[target]] = clamp_llr(marginal[0] - marginal[1]);
        }
    }
    Ok(())
}

/// LDPC check-node update: the extrinsic tanh rule
/// `L = 2 atanh(prod tanh(V/2))` over the other variables of each check.
pub fn ldpc_check_update(state: &mut DecoderState, system: &ScramSystem) {
    for check in 0..system.n_checks() {
        let edges = system.check_ldpc_edges(check);
        for &out in edges {
            let mut product = 1.0;
            for &e in edges {
                if e != out {
                    product *= (state.var_to_ldpc[e] / 2.0).tanh();
                }
            }
            let product = product.clamp(-ATANH_GUARD, ATANH_GUARD);
            state.ldpc_to_var[out] = clamp_llr(2.0 * product.atanh());
        }
    }
}

/// Variable-node update: to an LDPC check, the slot message plus all other
/// check messages; to the slot, the sum of all check messages (the slot is
/// the variable's only SA neighbor, so nothing else contributes).
pub fn variable_update(state: &mut DecoderState, system: &ScramSystem) {
    for v in 0..system.n_vars() {
        let edges = system.var_ldpc_edges(v);
        let sum_l: f64 = edges.iter().map(|&e| state.ldpc_to_var[e]).sum();
        state.var_to_sa[v] = clamp_llr(sum_l);
        for &e in edges {
            state.var_to_ldpc[e] =
                clamp_llr(state.sa_to_var[v] + (sum_l - state.ldpc_to_var[e]));
        }
    }
}

/// Total belief of each variable node: its slot message plus every check
/// message.
pub fn beliefs(state: &DecoderState, system: &ScramSystem) -> Vec<f64> {
    (0..system.n_vars())
        .map(|v| {
            state.sa_to_var[v]
                + system.var_ldpc_edges(v).iter().map(|&e| state.ldpc_to_var[e]).sum::<f64>()
        })
        .collect()
}

fn hard_decisions(beliefs: &[f64]) -> Vec<u8> {
    beliefs.iter().map(|&b| if b > 0.0 { 0 } else { 1 }).collect()
}

fn parity_per_user(system: &ScramSystem, bits: &[u8]) -> Vec<bool> {
    (0..system.user_count())
        .map(|u| {
            system.index_map().user_check_range(u).all(|check| {
                system.check_vars(check).iter().fold(0u8, |acc, &v| acc ^ bits[v]) == 0
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct DecodeOptions {
    pub max_iters: usize,
    pub hypothesis_limit: u64,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        DecodeOptions { max_iters: DEFAULT_MAX_ITERS, hypothesis_limit: DEFAULT_HYPOTHESIS_LIMIT }
    }
}

/// Result of decoding one frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// Hard-decision bits per user.
    pub bits: Vec<Vec<u8>>,
    /// Whether each user's parity checks all hold on the hard decision.
    pub parity_ok: Vec<bool>,
    /// Iterations actually run.
    pub iterations: usize,
    /// True when decoding stopped with every user's parity satisfied.
    pub converged: bool,
}

impl DecodeResult {
    pub fn all_parities_ok(&self) -> bool {
        self.parity_ok.iter().all(|&ok| ok)
    }
}

/// Runs joint decoding: both check updates, then the variable update, with
/// hard decisions after every iteration. Stops early once every user's
/// syndrome is zero.
pub fn decode(
    system: &ScramSystem,
    frame: &ReceivedFrame,
    noise_variance: f64,
    options: &DecodeOptions,
) -> Result<DecodeResult, DecoderError> {
    if options.max_iters == 0 {
        return Err(DecoderError::BadIterationLimit);
    }
    let mut state = DecoderState::new(system);
    let mut bits = Vec::new();
    let mut parity = Vec::new();
    for iter in 1..=options.max_iters {
        sa_check_update(&mut state, system, frame, noise_variance, options.hypothesis_limit)?;
        ldpc_check_update(&mut state, system);
        variable_update(&mut state, system);
        state.iteration = iter;
        bits = hard_decisions(&beliefs(&state, system));
        parity = parity_per_user(system, &bits);
        if parity.iter().all(|&ok| ok) {
            return Ok(finish(system, bits, parity, iter, true));
        }
    }
    Ok(finish(system, bits, parity, options.max_iters, false))
}

fn finish(
    system: &ScramSystem,
    bits: Vec<u8>,
    parity_ok: Vec<bool>,
    iterations: usize,
    converged: bool,
) -> DecodeResult {
    let per_user = (0..system.user_count())
        .map(|u| system.index_map().user_symbol_range(u).map(|v| bits[v]).collect())
        .collect();
    DecodeResult { bits: per_user, parity_ok, iterations, converged }
}

/// One row of a PER table. `user` of `None` is the aggregate over all users
/// (its `frames` column counts user-frames).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerPoint {
    pub snr_db: f64,
    pub user: Option<usize>,
    pub frames: usize,
    pub errors: usize,
    pub per: f64,
}

/// Cycle structure recorded next to simulation results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleSummary {
    pub local_girth: Girth,
    pub global_8cycles: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerTable {
    pub points: Vec<PerPoint>,
    pub cycle_summary: CycleSummary,
}

impl PerTable {
    /// CSV with columns `snr_db,user,frames,errors,per`; the aggregate rows
    /// carry `all` in the user column. Numbers use plain C formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,user,frames,errors,per\n");
        for p in &self.points {
            let user = p.user.map_or_else(|| "all".to_string(), |u| (u + 1).to_string());
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.snr_db, user, p.frames, p.errors, p.per
            ));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct PerExperimentSpec {
    /// Es/N0 per point, in dB; the noise variance is 10^(-snr/10) with unit
    /// symbol energy.
    pub snr_db: Vec<f64>,
    pub frames_per_point: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub fading: FadingModel,
    pub hypothesis_limit: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn frame_seed(base: u64, point: usize, frame: usize) -> u64 {
    splitmix64(base ^ splitmix64(point as u64 + 1).wrapping_add(frame as u64))
}

/// Monte-Carlo packet error rate over an SNR grid. A user's frame counts as
/// an error when its parity fails or its decoded bits differ from the
/// transmitted codeword (the all-zero codeword here). Seed-reproducible; the
/// system's cycle summary is recorded alongside.
pub fn run_per_experiment(
    system: &ScramSystem,
    spec: &PerExperimentSpec,
) -> Result<PerTable, DecoderError> {
    if spec.max_iters == 0 {
        return Err(DecoderError::BadIterationLimit);
    }
    let options =
        DecodeOptions { max_iters: spec.max_iters, hypothesis_limit: spec.hypothesis_limit };
    let users = system.user_count();
    let mut points = Vec::new();
    for (pi, &snr_db) in spec.snr_db.iter().enumerate() {
        let noise_variance = 10f64.powf(-snr_db / 10.0);
        let channel = ChannelModel { noise_variance, fading: spec.fading };
        let mut errors = vec![0usize; users];
        for f in 0..spec.frames_per_point {
            let seed = frame_seed(spec.seed, pi, f);
            let frame = simulate_transmit(system, &channel, seed, &PayloadMode::AllZero)?;
            let result = decode(system, &frame, noise_variance, &options)?;
            for (u, errors) in errors.iter_mut().enumerate() {
                let truth_ok = result.bits[u].iter().all(|&b| b == 0);
                if !result.parity_ok[u] || !truth_ok {
                    *errors += 1;
                }
            }
        }
        for (u, &e) in errors.iter().enumerate() {
            points.push(PerPoint {
                snr_db,
                user: Some(u),
                frames: spec.frames_per_point,
                errors: e,
                per: e as f64 / spec.frames_per_point as f64,
            });
        }
        let total: usize = errors.iter().sum();
        let user_frames = spec.frames_per_point * users;
        points.push(PerPoint {
            snr_db,
            user: None,
            frames: user_frames,
            errors: total,
            per: total as f64 / user_frames as f64,
        });
    }
    let global_8cycles = match system.policy() {
        SlotPolicy::WithoutReplacement => Some(global8::count_global_8cycles(system).total),
        SlotPolicy::WithReplacement => None,
    };
    Ok(PerTable {
        points,
        cycle_summary: CycleSummary { local_girth: scram::local_girth(system), global_8cycles },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::girth4_walkthrough;
    use crate::scram::{assign_slots, build_system, ScramConfig, SlotAssignment, UserCode};

    fn single_user_system(seed: u64) -> ScramSystem {
        let config = ScramConfig {
            users: vec![UserCode { matrix: girth4_walkthrough(), info_bits: 3 }],
            n_slots: 6,
            seed,
        };
        let assignment = assign_slots(&config).unwrap();
        build_system(&config, &assignment).unwrap()
    }

    fn quiet_channel() -> ChannelModel {
        ChannelModel { noise_variance: 1e-9, fading: FadingModel::Unit }
    }

    #[test]
    fn noiseless_single_user_observations() {
        let system = single_user_system(1);
        let frame =
            simulate_transmit(&system, &quiet_channel(), 7, &PayloadMode::AllZero).unwrap();
        for slot in 0..system.n_slots() {
            let expected = system.colliders(slot).len() as f64;
            assert!((frame.observations[slot].re - expected).abs() < 1e-3);
            assert!(frame.observations[slot].im.abs() < 1e-3);
        }
    }

    #[test]
    fn empty_slot_carries_noise_only() {
        let config = ScramConfig {
            users: vec![UserCode { matrix: girth4_walkthrough(), info_bits: 3 }],
            n_slots: 8,
            seed: 3,
        };
        let assignment =
            SlotAssignment::new(vec![vec![0, 1, 2, 3, 4, 5]], Default::default()).unwrap();
        let system = build_system(&config, &assignment).unwrap();
        let channel = ChannelModel { noise_variance: 0.5, fading: FadingModel::Unit };
        let frame = simulate_transmit(&system, &channel, 11, &PayloadMode::AllZero).unwrap();
        assert!(frame.observations[7].norm() < 5.0);
        assert!(system.colliders(7).is_empty());
    }

    fn pair_code() -> crate::ldpc::ParityCheckMatrix {
        crate::ldpc::ParityCheckMatrix::from_entries(1, 2, &[(0, 0), (0, 1)]).unwrap()
    }

    #[test]
    fn superposition_of_two_colliders() {
        let code = pair_code();
        let config = ScramConfig {
            users: vec![
                UserCode { matrix: code.clone(), info_bits: 1 },
                UserCode { matrix: code, info_bits: 1 },
            ],
            n_slots: 2,
            seed: 0,
        };
        let assignment =
            SlotAssignment::new(vec![vec![0, 1], vec![0, 1]], Default::default()).unwrap();
        let system = build_system(&config, &assignment).unwrap();
        let frame =
            simulate_transmit(&system, &quiet_channel(), 5, &PayloadMode::AllZero).unwrap();
        assert!((frame.observations[0].re - 2.0).abs() < 1e-3);
        assert!((frame.observations[1].re - 2.0).abs() < 1e-3);
    }

    #[test]
    fn degree_one_slot_matches_closed_form() {
        let system = single_user_system(2);
        let channel = ChannelModel { noise_variance: 0.8, fading: FadingModel::SeededFlat };
        let frame = simulate_transmit(&system, &channel, 21, &PayloadMode::AllZero).unwrap();
        let mut state = DecoderState::new(&system);
        sa_check_update(&mut state, &system, &frame, 0.8, DEFAULT_HYPOTHESIS_LIMIT).unwrap();
        for slot in 0..system.n_slots() {
            let colliders = system.colliders(slot);
            if colliders.len() != 1 {
                continue;
            }
            let h = frame.fading[slot][0];
            let y = frame.observations[slot];
            let expected = clamp_llr(4.0 * (h.conj() * y).re / 0.8);
            assert!((state.sa_to_var[colliders[0]] - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_observation_gives_zero_llr() {
        let system = single_user_system(2);
        let mut frame =
            simulate_transmit(&system, &quiet_channel(), 3, &PayloadMode::AllZero).unwrap();
        for y in frame.observations.iter_mut() {
            *y = Complex64::new(0.0, 0.0);
        }
        let mut state = DecoderState::new(&system);
        sa_check_update(&mut state, &system, &frame, 1.0, DEFAULT_HYPOTHESIS_LIMIT).unwrap();
        for v in 0..system.n_vars() {
            assert!(state.sa_to_var[v].abs() < 1e-12);
        }
    }

    #[test]
    fn sa_update_is_extrinsic() {
        // The message a slot sends to a collider must not depend on that
        // collider's own incoming message.
        let code = pair_code();
        let config = ScramConfig {
            users: vec![
                UserCode { matrix: code.clone(), info_bits: 1 },
                UserCode { matrix: code, info_bits: 1 },
            ],
            n_slots: 2,
            seed: 0,
        };
        let assignment =
            SlotAssignment::new(vec![vec![0, 1], vec![0, 1]], Default::default()).unwrap();
        let system = build_system(&config, &assignment).unwrap();
        let channel = ChannelModel { noise_variance: 0.6, fading: FadingModel::SeededFlat };
        let frame = simulate_transmit(&system, &channel, 9, &PayloadMode::AllZero).unwrap();
        let target = system.colliders(0)[0];

        let mut a = DecoderState::new(&system);
        let mut b = DecoderState::new(&system);
        for v in 0..system.n_vars() {
            a.var_to_sa[v] = 0.4 * (v as f64) - 0.7;
            b.var_to_sa[v] = a.var_to_sa[v];
        }
        b.var_to_sa[target] = 42.0;
        sa_check_update(&mut a, &system, &frame, 0.6, DEFAULT_HYPOTHESIS_LIMIT).unwrap();
        sa_check_update(&mut b, &system, &frame, 0.6, DEFAULT_HYPOTHESIS_LIMIT).unwrap();
        assert_eq!(a.sa_to_var[target], b.sa_to_var[target]);
    }

    #[test]
    fn hypothesis_budget_enforced() {
        let system = single_user_system(2);
        let frame =
            simulate_transmit(&system, &quiet_channel(), 3, &PayloadMode::AllZero).unwrap();
        let mut state = DecoderState::new(&system);
        let err = sa_check_update(&mut state, &system, &frame, 1.0, 0).unwrap_err();
        assert!(matches!(err, DecoderError::CollisionTooLarge { .. }));
    }

    #[test]
    fn ldpc_degree_two_passes_message_through() {
        // One check over two variables.
        let code = pair_code();
        let config = ScramConfig {
            users: vec![UserCode { matrix: code, info_bits: 1 }],
            n_slots: 2,
            seed: 0,
        };
        let system = build_system(&config, &assign_slots(&config).unwrap()).unwrap();
        let mut state = DecoderState::new(&system);
        state.var_to_ldpc[0] = 1.7;
        state.var_to_ldpc[1] = -0.4;
        ldpc_check_update(&mut state, &system);
        assert!((state.ldpc_to_var[0] - (-0.4)).abs() < 1e-12);
        assert!((state.ldpc_to_var[1] - 1.7).abs() < 1e-12);
    }

    #[test]
    fn ldpc_zero_input_annihilates() {
        let code =
            crate::ldpc::ParityCheckMatrix::from_entries(1, 3, &[(0, 0), (0, 1), (0, 2)]).unwrap();
        let config = ScramConfig {
            users: vec![UserCode { matrix: code, info_bits: 1 }],
            n_slots: 3,
            seed: 0,
        };
        let system = build_system(&config, &assign_slots(&config).unwrap()).unwrap();
        let mut state = DecoderState::new(&system);
        state.var_to_ldpc[0] = 0.0;
        state.var_to_ldpc[1] = 2.5;
        state.var_to_ldpc[2] = -3.0;
        ldpc_check_update(&mut state, &system);
        // The message to variable 2 multiplies tanh(0) in.
        assert_eq!(state.ldpc_to_var[2], 0.0);
    }

    #[test]
    fn ldpc_degree_three_matches_scalar_formula() {
        let code =
            crate::ldpc::ParityCheckMatrix::from_entries(1, 3, &[(0, 0), (0, 1), (0, 2)]).unwrap();
        let config = ScramConfig {
            users: vec![UserCode { matrix: code, info_bits: 1 }],
            n_slots: 3,
            seed: 0,
        };
        let system = build_system(&config, &assign_slots(&config).unwrap()).unwrap();
        let mut state = DecoderState::new(&system);
        state.var_to_ldpc[0] = 2.0;
        state.var_to_ldpc[1] = 3.0;
        state.var_to_ldpc[2] = 0.7;
        ldpc_check_update(&mut state, &system);
        let expected = 2.0 * (1.0_f64.tanh() * 1.5_f64.tanh()).atanh();
        assert!((state.ldpc_to_var[2] - expected).abs() < 1e-12);
    }

    #[test]
    fn variable_update_excludes_own_message() {
        // Variable 0 of the fixture has checks {0, 1}.
        let system = single_user_system(4);
        let mut state = DecoderState::new(&system);
        state.sa_to_var[0] = 1.0;
        let edges = system.var_ldpc_edges(0).to_vec();
        assert_eq!(edges.len(), 2);
        state.ldpc_to_var[edges[0]] = 0.5;
        state.ldpc_to_var[edges[1]] = -0.25;
        variable_update(&mut state, &system);
        assert!((state.var_to_ldpc[edges[0]] - (1.0 - 0.25)).abs() < 1e-12);
        assert!((state.var_to_ldpc[edges[1]] - (1.0 + 0.5)).abs() < 1e-12);
        assert!((state.var_to_sa[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn variable_update_zeroes_stay_zero() {
        let system = single_user_system(4);
        let mut state = DecoderState::new(&system);
        variable_update(&mut state, &system);
        assert!(state.var_to_ldpc.iter().all(|&v| v == 0.0));
        assert!(state.var_to_sa.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_variable_with_one_check_swaps_messages() {
        let code = crate::ldpc::ParityCheckMatrix::from_entries(1, 1, &[(0, 0)]).unwrap();
        let config = ScramConfig {
            users: vec![UserCode { matrix: code, info_bits: 1 }],
            n_slots: 1,
            seed: 0,
        };
        let system = build_system(&config, &assign_slots(&config).unwrap()).unwrap();
        let mut state = DecoderState::new(&system);
        state.sa_to_var[0] = 0.9;
        state.ldpc_to_var[0] = -0.3;
        variable_update(&mut state, &system);
        assert!((state.var_to_ldpc[0] - 0.9).abs() < 1e-12);
        assert!((state.var_to_sa[0] - (-0.3)).abs() < 1e-12);
    }

    #[test]
    fn noiseless_decode_converges_quickly() {
        let system = single_user_system(8);
        let channel = ChannelModel { noise_variance: 1e-6, fading: FadingModel::Unit };
        let frame = simulate_transmit(&system, &channel, 77, &PayloadMode::AllZero).unwrap();
        let result = decode(&system, &frame, 1e-6, &DecodeOptions::default()).unwrap();
        assert!(result.converged);
        assert!(result.iterations <= 5);
        assert!(result.all_parities_ok());
        assert!(result.bits[0].iter().all(|&b| b == 0));
    }

    #[test]
    fn zero_iterations_is_an_error() {
        let system = single_user_system(8);
        let frame =
            simulate_transmit(&system, &quiet_channel(), 1, &PayloadMode::AllZero).unwrap();
        let options = DecodeOptions { max_iters: 0, ..Default::default() };
        assert_eq!(
            decode(&system, &frame, 1e-6, &options).unwrap_err(),
            DecoderError::BadIterationLimit
        );
    }

    #[test]
    fn sign_symmetry_of_one_iteration() {
        // Negating the transmitted symbols negates the observations (unit
        // fading), and with negated priors every message flips sign. The
        // check rule is odd under a global sign flip only when the extrinsic
        // product has an odd number of factors, so the invariant needs every
        // check degree even (equivalently, the all-ones flip of a codeword
        // is again a codeword).
        let code = crate::ldpc::ParityCheckMatrix::from_entries(
            4,
            6,
            &[
                (0, 0),
                (0, 1),
                (1, 1),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 4),
                (2, 5),
                (3, 0),
                (3, 2),
                (3, 3),
                (3, 5),
            ],
        )
        .unwrap();
        let config = ScramConfig {
            users: vec![
                UserCode { matrix: code.clone(), info_bits: 2 },
                UserCode { matrix: code, info_bits: 2 },
            ],
            n_slots: 9,
            seed: 31,
        };
        let system = build_system(&config, &assign_slots(&config).unwrap()).unwrap();
        let channel = ChannelModel { noise_variance: 0.7, fading: FadingModel::Unit };
        let zeros = PayloadMode::AllZero;
        let ones = PayloadMode::Given(vec![vec![1; 6], vec![1; 6]]);
        let frame_p = simulate_transmit(&system, &channel, 5, &zeros).unwrap();
        let mut frame_n = simulate_transmit(&system, &channel, 5, &ones).unwrap();
        // Same seed draws the same noise; flip it so y_n = -y_p exactly.
        for (yn, yp) in frame_n.observations.iter_mut().zip(&frame_p.observations) {
            *yn = -*yp;
        }
        let mut sp = DecoderState::new(&system);
        let mut sn = DecoderState::new(&system);
        for v in 0..system.n_vars() {
            sp.var_to_sa[v] = 0.3 * (v as f64 + 1.0);
            sn.var_to_sa[v] = -sp.var_to_sa[v];
        }
        for e in 0..system.ldpc_edge_count() {
            sp.var_to_ldpc[e] = -0.2 * (e as f64 + 1.0) / 7.0;
            sn.var_to_ldpc[e] = -sp.var_to_ldpc[e];
        }
        sa_check_update(&mut sp, &system, &frame_p, 0.7, DEFAULT_HYPOTHESIS_LIMIT).unwrap();
        sa_check_update(&mut sn, &system, &frame_n, 0.7, DEFAULT_HYPOTHESIS_LIMIT).unwrap();
        ldpc_check_update(&mut sp, &system);
        ldpc_check_update(&mut sn, &system);
        variable_update(&mut sp, &system);
        variable_update(&mut sn, &system);
        for v in 0..system.n_vars() {
            assert!((sp.sa_to_var[v] + sn.sa_to_var[v]).abs() < 1e-9);
            assert!((sp.var_to_sa[v] + sn.var_to_sa[v]).abs() < 1e-9);
        }
        for e in 0..system.ldpc_edge_count() {
            assert!((sp.ldpc_to_var[e] + sn.ldpc_to_var[e]).abs() < 1e-9);
            assert!((sp.var_to_ldpc[e] + sn.var_to_ldpc[e]).abs() < 1e-9);
        }
    }

    #[test]
    fn per_experiment_is_reproducible_and_clean_at_high_snr() {
        let system = single_user_system(12);
        let spec = PerExperimentSpec {
            snr_db: vec![40.0],
            frames_per_point: 5,
            max_iters: 20,
            seed: 99,
            fading: FadingModel::Unit,
            hypothesis_limit: DEFAULT_HYPOTHESIS_LIMIT,
        };
        let a = run_per_experiment(&system, &spec).unwrap();
        let b = run_per_experiment(&system, &spec).unwrap();
        assert_eq!(a, b);
        assert!(a.points.iter().all(|p| p.errors == 0 && p.per == 0.0));
        assert_eq!(a.cycle_summary.local_girth, Girth::Finite(4));
    }
}
