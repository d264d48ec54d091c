//! Simulation and verification of remote state preparation for a single
//! photon encoded in two degrees of freedom, using photon pairs
//! hyper-entangled in polarization and frequency or in polarization and
//! time-bin.
//!
//! The crate is organized bottom-up:
//!
//! - [`state`]: labeled-basis state vectors, projection and fidelity;
//! - [`optics`]: optical elements as ket rewrites;
//! - [`protocols`]: the two circuits, branch enumeration, correction tables;
//! - [`runtime`]: seeded sampling, detector loss, the classical channel codec;
//! - [`metrics`]: the exact efficiency figure of merit;
//! - [`cli`]: the `hyperrsp` command-line reports.

pub mod cli;
pub mod error;
pub mod metrics;
pub mod optics;
pub mod protocols;
pub mod runtime;
pub mod state;

pub use error::{Error, Result};
pub use optics::{Element, PauliOp, PauliString, PbsRoute};
pub use protocols::{
    build_circuit, correction_table, derive_correction, outcome_registry, run_protocol,
    verify_protocol, BranchReport, BranchVerification, Circuit, CorrectionSearch, ProtocolKind,
};
pub use runtime::{
    decode_outcome, encode_outcome, sample_run, sample_with_loss, ChannelMessage, SampleStats,
    Sampler, SimRng,
};
pub use state::{
    fidelity, make_hyper_bell, make_target, project_photon_a, BasisLabel, DofKind, DofValue, Freq,
    Outcome, PathId, Photon, Pol, Schema, StateVector, TargetParams,
};
