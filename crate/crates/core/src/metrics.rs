//! Efficiency figure of merit η = q_s / (q_u + b_t), kept as an exact fraction.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::ProtocolKind;
use crate::runtime::payload_bits;

/// Qubits prepared at the receiver: one photon, two DoFs.
pub const PREPARED_QUBITS: u64 = 2;
/// Qubits of the shared channel: a photon pair entangled in two DoFs.
pub const CHANNEL_QUBITS: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfficiencyInput {
    /// Qubits transmitted.
    pub q_s: u64,
    /// Qubits used as the quantum channel.
    pub q_u: u64,
    /// Classical bits sent.
    pub b_t: u64,
}

/// Reduced q_s / (q_u + b_t).
pub fn efficiency(e: EfficiencyInput) -> Result<Ratio<u64>> {
    let denom = e
        .q_u
        .checked_add(e.b_t)
        .ok_or_else(|| Error::InvalidArgument("q_u + b_t overflows".into()))?;
    if denom == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(Ratio::new(e.q_s, denom))
}

pub fn protocol_input(kind: ProtocolKind) -> EfficiencyInput {
    EfficiencyInput {
        q_s: PREPARED_QUBITS,
        q_u: CHANNEL_QUBITS,
        b_t: u64::from(payload_bits(kind)),
    }
}

/// PF → 1/3, TB → 2/7; b_t is the channel codec's payload width.
pub fn protocol_efficiency(kind: ProtocolKind) -> Ratio<u64> {
    efficiency(protocol_input(kind)).expect("q_u > 0")
}
