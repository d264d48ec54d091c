//! C interface to the `hyperrsp` simulator.
//!
//! Every function returns an [`RspStatus`]; results are written through
//! out-pointers. Protocol runs and samplers are opaque handles that the caller
//! releases with the matching `_free` function. Panics never cross the
//! boundary: they are caught and reported as [`RspStatus::Panic`].

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hyperrsp::metrics::protocol_efficiency;
use hyperrsp::runtime::{
    decode_outcome, encode_outcome, payload_bits, sample_with_loss, ChannelMessage, Sampler, SimRng,
};
use hyperrsp::state::{Outcome, PathId, Pol, StateVector, TargetParams};
use hyperrsp::{verify_protocol, BranchVerification, Error, ProtocolKind};

/// Status code returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RspStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    InvalidArgument = 3,
    InvalidFrame = 4,
    OutOfRange = 5,
    BufferTooSmall = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RspProtocol {
    /// Polarization-frequency.
    Pf = 0,
    /// Polarization-time-bin.
    Tb = 1,
}

/// Target (α0|H⟩+β0|V⟩)⊗(α|x⟩+β|y⟩). PF reads (alpha1, beta1) for the second
/// factor and TB reads (alpha2, beta2); each pair must have unit norm.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RspParams {
    pub alpha0: f64,
    pub beta0: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RspComplex {
    pub re: f64,
    pub im: f64,
}

/// One detection branch of a protocol run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RspBranchInfo {
    /// 0 for H, 1 for V.
    pub polarization: u8,
    /// Index into the protocol's path list (see `rsp_path_name`).
    pub path_index: u8,
    /// Code Alice sends over the classical channel.
    pub outcome_code: u8,
    /// Pauli factors of Bob's correction on polarization and on the second
    /// DoF: 0 = I, 1 = σx, 2 = iσy, 3 = σz.
    pub correction: [u8; 2],
    pub probability: f64,
    /// Fidelity after correction, NaN for a zero-probability branch.
    pub fidelity: f64,
    /// Whether the tabulated correction is among those an exhaustive search accepts.
    pub table_matches_search: bool,
    pub passed: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RspSampleStats {
    pub trials: u64,
    pub detected: u64,
    pub success_rate: f64,
    /// NaN when nothing was detected.
    pub mean_fidelity: f64,
    /// NaN when nothing was detected.
    pub min_fidelity: f64,
}

/// Every branch of one protocol run, verified.
pub struct RspRun {
    kind: ProtocolKind,
    branches: Vec<BranchVerification>,
}

/// Repeated single-shot draws for one (protocol, params) pair.
pub struct RspSampler {
    sampler: Sampler,
    rng: SimRng,
}

/// Number of amplitudes in Bob's two-qubit state.
pub const RSP_BOB_DIM: usize = 4;

impl From<RspProtocol> for ProtocolKind {
    fn from(p: RspProtocol) -> Self {
        match p {
            RspProtocol::Pf => ProtocolKind::Pf,
            RspProtocol::Tb => ProtocolKind::Tb,
        }
    }
}

impl From<ProtocolKind> for RspProtocol {
    fn from(k: ProtocolKind) -> Self {
        match k {
            ProtocolKind::Pf => RspProtocol::Pf,
            ProtocolKind::Tb => RspProtocol::Tb,
        }
    }
}

impl From<Error> for RspStatus {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) => RspStatus::InvalidParams,
            Error::InvalidFrame(_) | Error::OutcomeCodeOutOfRange { .. } => RspStatus::InvalidFrame,
            Error::InvalidArgument(_) | Error::UnknownDetector(_) | Error::UnknownPath(_) => {
                RspStatus::InvalidArgument
            }
            _ => RspStatus::Internal,
        }
    }
}

type FfiResult = Result<(), RspStatus>;

fn guard<F: FnOnce() -> FfiResult>(f: F) -> RspStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RspStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => RspStatus::Panic,
    }
}

fn params_from(kind: ProtocolKind, p: *const RspParams) -> Result<TargetParams, RspStatus> {
    // SAFETY: caller passes either null or a valid RspParams.
    let p = unsafe { p.as_ref() }.ok_or(RspStatus::NullPointer)?;
    Ok(TargetParams::for_protocol(
        kind,
        (p.alpha0, p.beta0),
        match kind {
            ProtocolKind::Pf => (p.alpha1, p.beta1),
            ProtocolKind::Tb => (p.alpha2, p.beta2),
        },
    )?)
}

fn write<T>(out: *mut T, value: T) -> FfiResult {
    if out.is_null() {
        return Err(RspStatus::NullPointer);
    }
    // SAFETY: non-null and, per the caller contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

fn copy_state(s: &StateVector, out: *mut RspComplex, len: usize) -> FfiResult {
    let dense = s.to_dense();
    if out.is_null() {
        return Err(RspStatus::NullPointer);
    }
    if len < dense.len() {
        return Err(RspStatus::BufferTooSmall);
    }
    for (i, a) in dense.iter().enumerate() {
        // SAFETY: i < dense.len() <= len, the caller's buffer length.
        unsafe { out.add(i).write(RspComplex { re: a.re, im: a.im }) };
    }
    Ok(())
}

fn outcome_code(kind: ProtocolKind, o: Outcome) -> Result<u8, RspStatus> {
    Ok(encode_outcome(kind, o)?.outcome_code)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn rsp_status_message(status: RspStatus) -> *const c_char {
    let s: &'static CStr = match status {
        RspStatus::Ok => c"ok",
        RspStatus::NullPointer => c"null pointer argument",
        RspStatus::InvalidParams => c"target coefficients are not normalized",
        RspStatus::InvalidArgument => c"invalid argument",
        RspStatus::InvalidFrame => c"malformed channel frame",
        RspStatus::OutOfRange => c"index out of range",
        RspStatus::BufferTooSmall => c"output buffer too small",
        RspStatus::Internal => c"internal simulator error",
        RspStatus::Panic => c"panic inside the library",
    };
    s.as_ptr()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rsp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Runs and verifies every branch of `protocol` for `params`.
///
/// # Safety
/// `params` must be null or point to a valid [`RspParams`]; `out` must be null
/// or valid for writing one pointer. Release the handle with [`rsp_run_free`].
#[no_mangle]
pub unsafe extern "C" fn rsp_run_protocol(
    protocol: RspProtocol,
    params: *const RspParams,
    out: *mut *mut RspRun,
) -> RspStatus {
    guard(|| {
        if out.is_null() {
            return Err(RspStatus::NullPointer);
        }
        let kind = ProtocolKind::from(protocol);
        let p = params_from(kind, params)?;
        let branches = verify_protocol(kind, &p)?;
        write(out, Box::into_raw(Box::new(RspRun { kind, branches })))
    })
}

/// # Safety
/// `run` must be null or a handle from [`rsp_run_protocol`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rsp_run_free(run: *mut RspRun) {
    if !run.is_null() {
        // SAFETY: the handle came from Box::into_raw in rsp_run_protocol.
        drop(unsafe { Box::from_raw(run) });
    }
}

fn run_ref<'a>(run: *const RspRun) -> Result<&'a RspRun, RspStatus> {
    // SAFETY: caller passes null or a live handle.
    unsafe { run.as_ref() }.ok_or(RspStatus::NullPointer)
}

fn branch(run: &RspRun, index: usize) -> Result<&BranchVerification, RspStatus> {
    run.branches.get(index).ok_or(RspStatus::OutOfRange)
}

/// # Safety
/// `run` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_run_branch_count(run: *const RspRun, out: *mut usize) -> RspStatus {
    guard(|| write(out, run_ref(run)?.branches.len()))
}

/// Writes whether every branch reached the target with its tabulated correction.
///
/// # Safety
/// `run` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_run_passed(run: *const RspRun, out: *mut bool) -> RspStatus {
    guard(|| {
        write(
            out,
            run_ref(run)?
                .branches
                .iter()
                .all(BranchVerification::passed),
        )
    })
}

/// # Safety
/// `run` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_run_branch_info(
    run: *const RspRun,
    index: usize,
    out: *mut RspBranchInfo,
) -> RspStatus {
    guard(|| {
        let run = run_ref(run)?;
        let b = branch(run, index)?;
        let r = &b.report;
        let [(_, p), (_, s)] = r.correction.factors;
        write(
            out,
            RspBranchInfo {
                polarization: match r.outcome.polarization {
                    Pol::H => 0,
                    Pol::V => 1,
                },
                path_index: r.outcome.path.0,
                outcome_code: outcome_code(run.kind, r.outcome)?,
                correction: [p.code(), s.code()],
                probability: r.probability,
                fidelity: r.fidelity_post.unwrap_or(f64::NAN),
                table_matches_search: b.table_matches_search(),
                passed: b.passed(),
            },
        )
    })
}

/// Copies Bob's state in branch `index`, before (`corrected == false`) or
/// after the correction, as [`RSP_BOB_DIM`] amplitudes ordered
/// (H,x), (H,y), (V,x), (V,y) with x, y = ω1, ω2 or e, l.
///
/// # Safety
/// `run` must be a live handle; `out` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_run_bob_state(
    run: *const RspRun,
    index: usize,
    corrected: bool,
    out: *mut RspComplex,
    len: usize,
) -> RspStatus {
    guard(|| {
        let r = &branch(run_ref(run)?, index)?.report;
        let s = if corrected {
            &r.bob_state_post
        } else {
            &r.bob_state_pre
        };
        copy_state(s.as_ref().ok_or(RspStatus::OutOfRange)?, out, len)
    })
}

/// Writes the NUL-terminated name of path `index` (e.g. "a1", "kp3") into `buf`.
///
/// # Safety
/// `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_path_name(
    protocol: RspProtocol,
    index: u8,
    buf: *mut c_char,
    len: usize,
) -> RspStatus {
    guard(|| {
        let registry = ProtocolKind::from(protocol).registry();
        if !registry.contains(PathId(index)) {
            return Err(RspStatus::OutOfRange);
        }
        let name = registry.name(PathId(index)).as_bytes();
        if buf.is_null() {
            return Err(RspStatus::NullPointer);
        }
        if len < name.len() + 1 {
            return Err(RspStatus::BufferTooSmall);
        }
        // SAFETY: name.len() + 1 <= len bytes are writable.
        unsafe {
            ptr::copy_nonoverlapping(name.as_ptr().cast(), buf, name.len());
            buf.add(name.len()).write(0);
        }
        Ok(())
    })
}

/// Creates a sampler drawing detections for `protocol` and `params` from the
/// seeded generator.
///
/// # Safety
/// `params` must point to a valid [`RspParams`]; `out` must be valid for
/// writes. Release the handle with [`rsp_sampler_free`].
#[no_mangle]
pub unsafe extern "C" fn rsp_sampler_new(
    protocol: RspProtocol,
    params: *const RspParams,
    seed: u64,
    out: *mut *mut RspSampler,
) -> RspStatus {
    guard(|| {
        if out.is_null() {
            return Err(RspStatus::NullPointer);
        }
        let kind = ProtocolKind::from(protocol);
        let sampler = Sampler::new(kind, &params_from(kind, params)?)?;
        write(
            out,
            Box::into_raw(Box::new(RspSampler {
                sampler,
                rng: SimRng::new(seed),
            })),
        )
    })
}

/// Draws one detection; writes its channel code and Bob's corrected state.
///
/// # Safety
/// `sampler` must be a live handle; `code` must be valid for writes and
/// `state` for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_sampler_next(
    sampler: *mut RspSampler,
    code: *mut u8,
    state: *mut RspComplex,
    len: usize,
) -> RspStatus {
    guard(|| {
        // SAFETY: caller passes null or a live, unaliased handle.
        let s = unsafe { sampler.as_mut() }.ok_or(RspStatus::NullPointer)?;
        if code.is_null() || state.is_null() {
            return Err(RspStatus::NullPointer);
        }
        if len < RSP_BOB_DIM {
            return Err(RspStatus::BufferTooSmall);
        }
        let (outcome, bob) = s.sampler.sample(&mut s.rng);
        copy_state(&bob, state, len)?;
        write(code, outcome_code(s.sampler.kind(), outcome)?)
    })
}

/// # Safety
/// `sampler` must be null or a handle from [`rsp_sampler_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rsp_sampler_free(sampler: *mut RspSampler) {
    if !sampler.is_null() {
        // SAFETY: the handle came from Box::into_raw in rsp_sampler_new.
        drop(unsafe { Box::from_raw(sampler) });
    }
}

/// Monte Carlo run with detector efficiency `eta_d` on both sides.
///
/// # Safety
/// `params` must point to a valid [`RspParams`]; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_sample_with_loss(
    protocol: RspProtocol,
    params: *const RspParams,
    eta_d: f64,
    trials: u64,
    seed: u64,
    out: *mut RspSampleStats,
) -> RspStatus {
    guard(|| {
        if out.is_null() {
            return Err(RspStatus::NullPointer);
        }
        let kind = ProtocolKind::from(protocol);
        let s = sample_with_loss(kind, &params_from(kind, params)?, eta_d, trials, seed)?;
        write(
            out,
            RspSampleStats {
                trials: s.trials,
                detected: s.detected,
                success_rate: s.success_rate,
                mean_fidelity: s.mean_fidelity_on_detected.unwrap_or(f64::NAN),
                min_fidelity: s.min_fidelity_on_detected.unwrap_or(f64::NAN),
            },
        )
    })
}

/// Efficiency q_s / (q_u + b_t) as a reduced fraction.
///
/// # Safety
/// `numerator` and `denominator` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_protocol_efficiency(
    protocol: RspProtocol,
    numerator: *mut u64,
    denominator: *mut u64,
) -> RspStatus {
    guard(|| {
        if numerator.is_null() || denominator.is_null() {
            return Err(RspStatus::NullPointer);
        }
        let eta = protocol_efficiency(protocol.into());
        write(numerator, *eta.numer())?;
        write(denominator, *eta.denom())
    })
}

/// Classical bits needed to name a detection outcome.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_payload_bits(protocol: RspProtocol, out: *mut u32) -> RspStatus {
    guard(|| write(out, payload_bits(protocol.into())))
}

/// Encodes the detection (polarization 0/1, path index) as a 3-byte frame.
///
/// # Safety
/// `frame` must be valid for 3 writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_encode_outcome(
    protocol: RspProtocol,
    polarization: u8,
    path_index: u8,
    frame: *mut u8,
) -> RspStatus {
    guard(|| {
        if frame.is_null() {
            return Err(RspStatus::NullPointer);
        }
        let polarization = match polarization {
            0 => Pol::H,
            1 => Pol::V,
            _ => return Err(RspStatus::InvalidArgument),
        };
        let bytes = encode_outcome(
            protocol.into(),
            Outcome {
                polarization,
                path: PathId(path_index),
            },
        )?
        .to_bytes();
        // SAFETY: the caller provides 3 writable bytes.
        unsafe { ptr::copy_nonoverlapping(bytes.as_ptr(), frame, bytes.len()) };
        Ok(())
    })
}

/// Decodes a frame into its protocol, polarization (0/1) and path index.
///
/// # Safety
/// `frame` must be valid for `len` reads; the out-pointers for writes.
#[no_mangle]
pub unsafe extern "C" fn rsp_decode_frame(
    frame: *const u8,
    len: usize,
    protocol: *mut RspProtocol,
    polarization: *mut u8,
    path_index: *mut u8,
) -> RspStatus {
    guard(|| {
        if frame.is_null() || protocol.is_null() || polarization.is_null() || path_index.is_null() {
            return Err(RspStatus::NullPointer);
        }
        // SAFETY: the caller provides `len` readable bytes.
        let bytes = unsafe { std::slice::from_raw_parts(frame, len) };
        let msg = ChannelMessage::from_bytes(bytes)?;
        let o = decode_outcome(&msg)?;
        write(protocol, msg.protocol.into())?;
        write(polarization, if o.polarization == Pol::H { 0 } else { 1 })?;
        write(path_index, o.path.0)
    })
}
