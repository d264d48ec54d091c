//! Stochastic execution: sampled detections, detector inefficiency and the
//! classical message Alice sends to Bob.
//!
//! # Random numbers
//!
//! All sampling uses ChaCha20 ([`rand_chacha::ChaCha20Rng`]), a counter-based
//! generator whose output is identical on every platform. A run seeded with
//! `seed` is split into fixed blocks of [`BLOCK_TRIALS`] trials; block `b`
//! draws from `ChaCha20Rng::seed_from_u64(seed)` with `set_stream(b)`. Each
//! trial consumes exactly three 64-bit words, in order: outcome selection,
//! Alice's detector click, Bob's detector click. A word `w` becomes the
//! uniform double `(w >> 11) · 2⁻⁵³ ∈ [0, 1)`. Blocks are reduced in index
//! order, so results do not depend on how many threads run them.
//! Random target parameters use stream [`PARAM_STREAM`].

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::{outcome_registry, run_protocol, BranchReport, ProtocolKind};
use crate::state::{Outcome, StateVector, TargetParams};

/// Current channel frame version.
pub const FRAME_VERSION: u8 = 1;
/// Trials per independent random stream.
pub const BLOCK_TRIALS: u64 = 1 << 14;
/// Stream reserved for drawing random target parameters.
pub const PARAM_STREAM: u64 = u64::MAX;

/// Alice → Bob classical message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelMessage {
    pub version: u8,
    pub protocol: ProtocolKind,
    pub outcome_code: u8,
}

impl ChannelMessage {
    /// Three-byte frame `[version][protocol][outcome_code]`.
    pub fn to_bytes(self) -> [u8; 3] {
        [self.version, self.protocol.code(), self.outcome_code]
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let [version, protocol, outcome_code] = bytes else {
            return Err(Error::InvalidFrame(format!(
                "expected 3 bytes, got {}",
                bytes.len()
            )));
        };
        if *version != FRAME_VERSION {
            return Err(Error::InvalidFrame(format!(
                "unsupported version {version}"
            )));
        }
        let protocol = ProtocolKind::from_code(*protocol)
            .ok_or_else(|| Error::InvalidFrame(format!("unknown protocol code {protocol}")))?;
        let msg = ChannelMessage {
            version: *version,
            protocol,
            outcome_code: *outcome_code,
        };
        decode_outcome(&msg)?;
        Ok(msg)
    }

    /// Classical bits of physical payload carried by the message.
    pub fn payload_bits(&self) -> u32 {
        payload_bits(self.protocol)
    }
}

/// Payload width: ⌈log₂ |registry|⌉, i.e. 2 bits for PF and 3 for TB.
pub fn payload_bits(kind: ProtocolKind) -> u32 {
    let n = outcome_registry(kind).len() as u32;
    n.next_power_of_two().trailing_zeros()
}

/// PF: `2·[V] + [a₂]`; TB: `4·[V] + (k′ index 0..3)`. Equivalently, the
/// outcome's position in [`outcome_registry`].
pub fn encode_outcome(kind: ProtocolKind, outcome: Outcome) -> Result<ChannelMessage> {
    let code = outcome_registry(kind)
        .iter()
        .position(|o| *o == outcome)
        .ok_or_else(|| Error::UnknownDetector(kind.outcome_name(outcome)))?;
    Ok(ChannelMessage {
        version: FRAME_VERSION,
        protocol: kind,
        outcome_code: code as u8,
    })
}

pub fn decode_outcome(msg: &ChannelMessage) -> Result<Outcome> {
    let registry = outcome_registry(msg.protocol);
    registry
        .get(msg.outcome_code as usize)
        .copied()
        .ok_or(Error::OutcomeCodeOutOfRange {
            code: msg.outcome_code,
            size: registry.len(),
        })
}

/// Seeded ChaCha20 stream; see the module docs for the exact contract.
#[derive(Debug, Clone)]
pub struct SimRng {
    inner: ChaCha20Rng,
}

impl SimRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SimRng { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// True with probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}

/// Target parameters from three uniform angles: each pair is (cos φ, sin φ).
pub fn random_params(seed: u64) -> TargetParams {
    let mut rng = SimRng::with_stream(seed, PARAM_STREAM);
    let mut pair = || {
        let phi = std::f64::consts::TAU * rng.next_f64();
        (phi.cos(), phi.sin())
    };
    let (p0, p1, p2) = (pair(), pair(), pair());
    TargetParams::new(p0.0, p0.1, p1.0, p1.1, p2.0, p2.1).expect("cos/sin pairs are normalized")
}

/// Precomputed branches of one (protocol, params) pair, ready for repeated draws.
#[derive(Debug, Clone)]
pub struct Sampler {
    kind: ProtocolKind,
    branches: Vec<BranchReport>,
    cumulative: Vec<f64>,
}

impl Sampler {
    pub fn new(kind: ProtocolKind, params: &TargetParams) -> Result<Self> {
        let branches = run_protocol(kind, params)?;
        let mut acc = 0.0;
        let cumulative = branches
            .iter()
            .map(|b| {
                acc += b.probability;
                acc
            })
            .collect();
        Ok(Sampler {
            kind,
            branches,
            cumulative,
        })
    }

    pub fn kind(&self) -> ProtocolKind {
        self.kind
    }

    pub fn branches(&self) -> &[BranchReport] {
        &self.branches
    }

    /// Picks a branch index from one uniform draw.
    fn pick(&self, u: f64) -> usize {
        let total = *self.cumulative.last().unwrap_or(&1.0);
        let x = u * total;
        let last_live = self
            .branches
            .iter()
            .rposition(|b| b.bob_state_post.is_some())
            .unwrap_or(0);
        self.cumulative
            .iter()
            .position(|c| x < *c)
            .unwrap_or(last_live)
    }

    /// Draws one detection and returns Bob's corrected state.
    pub fn sample(&self, rng: &mut SimRng) -> (Outcome, StateVector) {
        let branch = &self.branches[self.pick(rng.next_f64())];
        let post = branch
            .bob_state_post
            .clone()
            .expect("drawn branches have nonzero weight");
        (branch.outcome, post)
    }

    fn run_block(&self, eta_d: f64, seed: u64, block: u64, trials: u64) -> BlockStats {
        let mut rng = SimRng::with_stream(seed, block);
        let mut stats = BlockStats {
            detected: 0,
            fidelity_sum: 0.0,
            fidelity_min: f64::INFINITY,
        };
        for _ in 0..trials {
            let b = self.pick(rng.next_f64());
            let alice = rng.bernoulli(eta_d);
            let bob = rng.bernoulli(eta_d);
            if alice && bob {
                let f = self.branches[b].fidelity_post.unwrap_or(0.0);
                stats.detected += 1;
                stats.fidelity_sum += f;
                stats.fidelity_min = stats.fidelity_min.min(f);
            }
        }
        stats
    }
}

#[derive(Debug, Clone, Copy)]
struct BlockStats {
    detected: u64,
    fidelity_sum: f64,
    fidelity_min: f64,
}

/// Draws one outcome per branch probabilities and applies the tabulated correction.
pub fn sample_run(
    kind: ProtocolKind,
    params: &TargetParams,
    rng: &mut SimRng,
) -> Result<(Outcome, StateVector)> {
    Ok(Sampler::new(kind, params)?.sample(rng))
}

/// Summary of a lossy sampling run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub trials: u64,
    pub detected: u64,
    pub success_rate: f64,
    /// Mean fidelity over trials where both detectors clicked; `None` if none did.
    pub mean_fidelity_on_detected: Option<f64>,
    pub min_fidelity_on_detected: Option<f64>,
    pub eta_d: f64,
    pub seed: u64,
}

/// Runs `trials` protocol rounds where Alice's and Bob's detectors each click
/// independently with probability `eta_d`; a round counts only when both click.
pub fn sample_with_loss(
    kind: ProtocolKind,
    params: &TargetParams,
    eta_d: f64,
    trials: u64,
    seed: u64,
) -> Result<SampleStats> {
    if !(0.0..=1.0).contains(&eta_d) {
        return Err(Error::InvalidArgument(format!(
            "detector efficiency {eta_d} outside [0, 1]"
        )));
    }
    let sampler = Sampler::new(kind, params)?;
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let per_block: Vec<BlockStats> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
            sampler.run_block(eta_d, seed, b, n)
        })
        .collect();
    let detected: u64 = per_block.iter().map(|b| b.detected).sum();
    let fidelity_sum: f64 = per_block.iter().map(|b| b.fidelity_sum).sum();
    let fidelity_min = per_block
        .iter()
        .map(|b| b.fidelity_min)
        .fold(f64::INFINITY, f64::min);
    Ok(SampleStats {
        trials,
        detected,
        success_rate: if trials == 0 {
            0.0
        } else {
            detected as f64 / trials as f64
        },
        mean_fidelity_on_detected: (detected > 0).then(|| fidelity_sum / detected as f64),
        min_fidelity_on_detected: (detected > 0).then_some(fidelity_min),
        eta_d,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{fidelity, make_target};

    #[test]
    fn codes_follow_formula() {
        let reg = ProtocolKind::Pf.registry();
        let o = Outcome {
            polarization: crate::state::Pol::H,
            path: reg.id("a1").unwrap(),
        };
        assert_eq!(encode_outcome(ProtocolKind::Pf, o).unwrap().outcome_code, 0);
        let reg = ProtocolKind::Tb.registry();
        let o = Outcome {
            polarization: crate::state::Pol::V,
            path: reg.id("kp3").unwrap(),
        };
        assert_eq!(encode_outcome(ProtocolKind::Tb, o).unwrap().outcome_code, 6);
    }

    #[test]
    fn codec_round_trip_and_range() {
        for kind in ProtocolKind::ALL {
            for o in outcome_registry(kind) {
                let m = encode_outcome(kind, o).unwrap();
                assert_eq!(decode_outcome(&m).unwrap(), o);
                assert_eq!(ChannelMessage::from_bytes(&m.to_bytes()).unwrap(), m);
            }
        }
        let bad = ChannelMessage {
            version: FRAME_VERSION,
            protocol: ProtocolKind::Pf,
            outcome_code: 4,
        };
        assert!(matches!(
            decode_outcome(&bad),
            Err(Error::OutcomeCodeOutOfRange { .. })
        ));
        assert!(ChannelMessage::from_bytes(&[1, 0]).is_err());
        assert!(ChannelMessage::from_bytes(&[9, 0, 0]).is_err());
        assert!(ChannelMessage::from_bytes(&[1, 7, 0]).is_err());
        assert!(ChannelMessage::from_bytes(&[1, 1, 8]).is_err());
    }

    #[test]
    fn payload_widths() {
        assert_eq!(payload_bits(ProtocolKind::Pf), 2);
        assert_eq!(payload_bits(ProtocolKind::Tb), 3);
    }

    #[test]
    fn rng_is_reproducible_and_streams_differ() {
        let a: Vec<u64> = (0..8)
            .map({
                let mut r = SimRng::new(7);
                move |_| r.next_u64()
            })
            .collect();
        let b: Vec<u64> = (0..8)
            .map({
                let mut r = SimRng::new(7);
                move |_| r.next_u64()
            })
            .collect();
        let c: Vec<u64> = (0..8)
            .map({
                let mut r = SimRng::with_stream(7, 1);
                move |_| r.next_u64()
            })
            .collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let mut r = SimRng::new(1);
        assert!((0..1000)
            .map(|_| r.next_f64())
            .all(|u| (0.0..1.0).contains(&u)));
    }

    #[test]
    fn tb_draws_always_reach_target() {
        let params = random_params(3);
        let target = make_target(&params, ProtocolKind::Tb).unwrap();
        let sampler = Sampler::new(ProtocolKind::Tb, &params).unwrap();
        let mut rng = SimRng::new(11);
        for _ in 0..50 {
            let (_, post) = sampler.sample(&mut rng);
            assert!((fidelity(&post, &target).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn loss_extremes() {
        let params = random_params(5);
        let full = sample_with_loss(ProtocolKind::Pf, &params, 1.0, 1000, 7).unwrap();
        assert_eq!(full.success_rate, 1.0);
        let none = sample_with_loss(ProtocolKind::Pf, &params, 0.0, 1000, 7).unwrap();
        assert_eq!(none.detected, 0);
        assert_eq!(none.mean_fidelity_on_detected, None);
        assert!(sample_with_loss(ProtocolKind::Pf, &params, 1.5, 10, 7).is_err());
    }

    #[test]
    fn stats_are_seed_deterministic() {
        let params = random_params(9);
        let a = sample_with_loss(ProtocolKind::Tb, &params, 0.7, 40_000, 42).unwrap();
        let b = sample_with_loss(ProtocolKind::Tb, &params, 0.7, 40_000, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.success_rate.to_bits(), b.success_rate.to_bits());
    }
}
