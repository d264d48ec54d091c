//! Optical elements as rewrites of labeled kets.
//!
//! Every element acts on one photon. Matrix-valued elements (wave plates,
//! splitters, Pauli corrections) mix amplitudes; routing elements (WDM, PBS,
//! Pockels cells, HWPs, delay lines) only relabel. Elements that change the
//! set of active registers or a register's value set do so explicitly through
//! [`Element::output_schema`].

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{
    DofKind, DofValue, Freq, PathId, Photon, Pol, Register, Schema, StateVector, STATE_TOL,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Single-register correction operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliOp {
    I,
    X,
    /// iσ_y = [[0, 1], [-1, 0]] in (first, second) basis order.
    IY,
    Z,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::IY, PauliOp::Z];

    /// Image of basis value `index` (0 = first, 1 = second) as (target index, coefficient).
    pub fn act(self, index: usize) -> (usize, f64) {
        match (self, index) {
            (PauliOp::I, i) => (i, 1.0),
            (PauliOp::X, i) => (1 - i, 1.0),
            (PauliOp::Z, 0) => (0, 1.0),
            (PauliOp::Z, _) => (1, -1.0),
            (PauliOp::IY, 0) => (1, -1.0),
            (PauliOp::IY, _) => (0, 1.0),
        }
    }

    /// Row-major 2×2 matrix in (first, second) order.
    pub fn matrix(self) -> [[f64; 2]; 2] {
        match self {
            PauliOp::I => [[1.0, 0.0], [0.0, 1.0]],
            PauliOp::X => [[0.0, 1.0], [1.0, 0.0]],
            PauliOp::IY => [[0.0, 1.0], [-1.0, 0.0]],
            PauliOp::Z => [[1.0, 0.0], [0.0, -1.0]],
        }
    }

    pub fn code(self) -> u8 {
        match self {
            PauliOp::I => 0,
            PauliOp::X => 1,
            PauliOp::IY => 2,
            PauliOp::Z => 3,
        }
    }

    fn symbol(self, tag: &str) -> String {
        match self {
            PauliOp::I => "I".into(),
            PauliOp::X => format!("σx^{tag}"),
            PauliOp::IY => format!("iσy^{tag}"),
            PauliOp::Z => format!("σz^{tag}"),
        }
    }
}

/// A correction acting on both registers of photon B, e.g. σz^p⊗σx^f.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub factors: [(DofKind, PauliOp); 2],
}

impl PauliString {
    pub fn new(first: (DofKind, PauliOp), second: (DofKind, PauliOp)) -> Result<Self> {
        if first.0 == second.0 {
            return Err(Error::InvalidArgument(format!(
                "both factors act on the {} register",
                first.0
            )));
        }
        Ok(PauliString {
            factors: [first, second],
        })
    }

    /// Polarization factor times a factor on `second`.
    pub fn pol_and(pol: PauliOp, second: DofKind, op: PauliOp) -> Self {
        PauliString {
            factors: [(DofKind::Polarization, pol), (second, op)],
        }
    }

    /// All 16 strings over {I, σx, iσy, σz}² for the given register pair.
    pub fn all(first: DofKind, second: DofKind) -> Vec<PauliString> {
        PauliOp::ALL
            .iter()
            .flat_map(|a| {
                PauliOp::ALL.iter().map(move |b| PauliString {
                    factors: [(first, *a), (second, *b)],
                })
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(|(_, op)| *op == PauliOp::I)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [(k0, o0), (k1, o1)] = self.factors;
        write!(f, "{}⊗{}", o0.symbol(k0.tag()), o1.symbol(k1.tag()))
    }
}

/// Polarization-dependent routing entry of a PBS: (input path, polarization) → output path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PbsRoute {
    pub input: PathId,
    pub polarization: Pol,
    pub output: PathId,
}

/// One optical element, or an explicit register-schema transform.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    /// Polarization rotation |H⟩→cosθ|H⟩+sinθ|V⟩, |V⟩→−sinθ|H⟩+cosθ|V⟩,
    /// optionally restricted to some paths.
    Rtheta {
        photon: Photon,
        theta: f64,
        paths: Option<Vec<PathId>>,
    },
    /// Unbalanced beam splitter on a path pair:
    /// |p₁⟩→cos(φ/2)|p₁⟩+sin(φ/2)|p₂⟩, |p₂⟩→−sin(φ/2)|p₁⟩+cos(φ/2)|p₂⟩.
    Ubs {
        photon: Photon,
        paths: (PathId, PathId),
        phi: f64,
    },
    /// Wavelength demultiplexer: adds a path register, |ω⟩→|path(ω)⟩|ω⟩.
    Wdm {
        photon: Photon,
        routing: Vec<(Freq, PathId)>,
    },
    /// Frequency shifter: erases frequency perfectly correlated with path and
    /// drops the frequency register.
    Fs {
        photon: Photon,
        correlation: Vec<(PathId, Freq)>,
        common: Freq,
    },
    /// Polarizing beam splitter: path rewritten per (input path, polarization).
    Pbs {
        photon: Photon,
        routing: Vec<PbsRoute>,
    },
    /// Pockels cell: σx on polarization for the given time-bin on the given paths.
    Pc {
        photon: Photon,
        paths: Vec<PathId>,
        time: u32,
    },
    /// Unbalanced interferometer delay: `long_arm` polarization on `paths`
    /// gains one unit of delay.
    Ui {
        photon: Photon,
        paths: Vec<PathId>,
        long_arm: Pol,
    },
    /// Half-wave plate |H⟩⇌|V⟩ on the given paths.
    Hwp { photon: Photon, paths: Vec<PathId> },
    /// 50:50 beam splitter: in₁→(out₁+out₂)/√2, in₂→(out₁−out₂)/√2.
    Bs {
        photon: Photon,
        inputs: (PathId, PathId),
        outputs: (PathId, PathId),
    },
    /// Local Pauli correction.
    Pauli {
        photon: Photon,
        correction: PauliString,
    },
    /// Schema transform: a single-valued path register (source port).
    AddPathRegister { photon: Photon, path: PathId },
    /// Schema transform: drops a register whose value is the same on every ket.
    DropUniformRegister { photon: Photon, kind: DofKind },
}

impl Element {
    pub fn photon(&self) -> Photon {
        match self {
            Element::Rtheta { photon, .. }
            | Element::Ubs { photon, .. }
            | Element::Wdm { photon, .. }
            | Element::Fs { photon, .. }
            | Element::Pbs { photon, .. }
            | Element::Pc { photon, .. }
            | Element::Ui { photon, .. }
            | Element::Hwp { photon, .. }
            | Element::Bs { photon, .. }
            | Element::Pauli { photon, .. }
            | Element::AddPathRegister { photon, .. }
            | Element::DropUniformRegister { photon, .. } => *photon,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Element::Rtheta { .. } => "Rtheta",
            Element::Ubs { .. } => "UBS",
            Element::Wdm { .. } => "WDM",
            Element::Fs { .. } => "FS",
            Element::Pbs { .. } => "PBS",
            Element::Pc { .. } => "PC",
            Element::Ui { .. } => "UI",
            Element::Hwp { .. } => "HWP",
            Element::Bs { .. } => "BS",
            Element::Pauli { .. } => "Pauli",
            Element::AddPathRegister { .. } => "AddPath",
            Element::DropUniformRegister { .. } => "DropUniform",
        }
    }

    /// Register schema after this element, or an error if the element does
    /// not fit `schema`.
    pub fn output_schema(&self, schema: &Schema) -> Result<Schema> {
        let photon = self.photon();
        let regs = schema.registers(photon);
        let registry = schema.registry();
        let check_paths = |paths: &[PathId]| -> Result<usize> {
            let idx = schema.require(photon, DofKind::Path)?;
            for p in paths {
                if !regs[idx].contains(DofValue::Path(*p)) {
                    return Err(Error::UnknownPath(registry.name(*p).to_string()));
                }
            }
            Ok(idx)
        };
        match self {
            Element::Rtheta { paths, .. } => {
                schema.require(photon, DofKind::Polarization)?;
                if let Some(paths) = paths {
                    check_paths(paths)?;
                }
                Ok(schema.clone())
            }
            Element::Ubs { paths, .. } => {
                check_paths(&[paths.0, paths.1])?;
                if paths.0 == paths.1 {
                    return Err(Error::InvalidRouting("UBS needs two distinct paths".into()));
                }
                Ok(schema.clone())
            }
            Element::Wdm { routing, .. } => {
                schema.require(photon, DofKind::Frequency)?;
                if schema.find(photon, DofKind::Path).is_some() {
                    return Err(Error::RegisterPresent {
                        photon,
                        kind: DofKind::Path,
                    });
                }
                for f in [Freq::W1, Freq::W2] {
                    if routing.iter().filter(|(rf, _)| *rf == f).count() != 1 {
                        return Err(Error::InvalidRouting(format!(
                            "WDM must route {f} exactly once"
                        )));
                    }
                }
                if routing.len() != 2 || routing[0].1 == routing[1].1 {
                    return Err(Error::InvalidRouting(
                        "WDM outputs must be two distinct paths".into(),
                    ));
                }
                for (_, p) in routing {
                    if !registry.contains(*p) {
                        return Err(Error::UnknownPath(format!("#{}", p.0)));
                    }
                }
                let mut next = regs.to_vec();
                next.push(Register::paths(routing.iter().map(|(_, p)| *p)));
                schema.with_registers(photon, next)
            }
            Element::Fs { correlation, .. } => {
                let f_idx = schema.require(photon, DofKind::Frequency)?;
                let p_idx = schema.require(photon, DofKind::Path)?;
                for p in regs[p_idx].path_ids() {
                    if correlation.iter().filter(|(cp, _)| *cp == p).count() != 1 {
                        return Err(Error::InvalidRouting(format!(
                            "FS correlation must name path {} exactly once",
                            registry.name(p)
                        )));
                    }
                }
                let mut next = regs.to_vec();
                next.remove(f_idx);
                schema.with_registers(photon, next)
            }
            Element::Pbs { routing, .. } => {
                schema.require(photon, DofKind::Polarization)?;
                let p_idx = schema.require(photon, DofKind::Path)?;
                let mut inputs: Vec<PathId> = routing.iter().map(|r| r.input).collect();
                inputs.sort();
                inputs.dedup();
                check_paths(&inputs)?;
                for input in &inputs {
                    for pol in [Pol::H, Pol::V] {
                        let n = routing
                            .iter()
                            .filter(|r| r.input == *input && r.polarization == pol)
                            .count();
                        if n != 1 {
                            return Err(Error::InvalidRouting(format!(
                                "PBS routing has {n} entries for ({pol}, {})",
                                registry.name(*input)
                            )));
                        }
                    }
                }
                for (i, r) in routing.iter().enumerate() {
                    if !registry.contains(r.output) {
                        return Err(Error::UnknownPath(format!("#{}", r.output.0)));
                    }
                    if routing[..i]
                        .iter()
                        .any(|o| o.output == r.output && o.polarization == r.polarization)
                    {
                        return Err(Error::InvalidRouting(format!(
                            "PBS sends two inputs to ({}, {})",
                            r.polarization,
                            registry.name(r.output)
                        )));
                    }
                }
                let kept: Vec<PathId> = regs[p_idx]
                    .path_ids()
                    .into_iter()
                    .filter(|p| !inputs.contains(p))
                    .collect();
                if let Some(r) = routing.iter().find(|r| kept.contains(&r.output)) {
                    return Err(Error::InvalidRouting(format!(
                        "PBS output {} is already occupied",
                        registry.name(r.output)
                    )));
                }
                let mut next = regs.to_vec();
                next[p_idx] =
                    Register::paths(kept.into_iter().chain(routing.iter().map(|r| r.output)));
                schema.with_registers(photon, next)
            }
            Element::Pc { paths, .. } => {
                schema.require(photon, DofKind::Polarization)?;
                schema.require(photon, DofKind::TimeBin)?;
                check_paths(paths)?;
                Ok(schema.clone())
            }
            Element::Ui { paths, .. } => {
                schema.require(photon, DofKind::Polarization)?;
                let t_idx = schema.require(photon, DofKind::TimeBin)?;
                check_paths(paths)?;
                let max = regs[t_idx]
                    .domain()
                    .iter()
                    .filter_map(|v| v.delay())
                    .max()
                    .unwrap_or(0);
                let mut next = regs.to_vec();
                next[t_idx] = Register::time_bins(max + 1);
                schema.with_registers(photon, next)
            }
            Element::Hwp { paths, .. } => {
                schema.require(photon, DofKind::Polarization)?;
                check_paths(paths)?;
                Ok(schema.clone())
            }
            Element::Bs {
                inputs, outputs, ..
            } => {
                let p_idx = check_paths(&[inputs.0, inputs.1])?;
                if inputs.0 == inputs.1 || outputs.0 == outputs.1 {
                    return Err(Error::InvalidRouting("BS ports must be distinct".into()));
                }
                for o in [outputs.0, outputs.1] {
                    if !registry.contains(o) {
                        return Err(Error::UnknownPath(format!("#{}", o.0)));
                    }
                }
                let kept: Vec<PathId> = regs[p_idx]
                    .path_ids()
                    .into_iter()
                    .filter(|p| *p != inputs.0 && *p != inputs.1)
                    .collect();
                if kept.contains(&outputs.0) || kept.contains(&outputs.1) {
                    return Err(Error::InvalidRouting(
                        "BS output is already occupied".into(),
                    ));
                }
                let mut next = regs.to_vec();
                next[p_idx] = Register::paths(kept.into_iter().chain([outputs.0, outputs.1]));
                schema.with_registers(photon, next)
            }
            Element::Pauli { correction, .. } => {
                for (kind, _) in correction.factors {
                    let idx = schema.require(photon, kind)?;
                    if regs[idx].len() != 2 {
                        return Err(Error::SchemaMismatch(format!(
                            "Pauli factor on a {kind} register with {} values",
                            regs[idx].len()
                        )));
                    }
                }
                Ok(schema.clone())
            }
            Element::AddPathRegister { path, .. } => {
                if schema.find(photon, DofKind::Path).is_some() {
                    return Err(Error::RegisterPresent {
                        photon,
                        kind: DofKind::Path,
                    });
                }
                if !registry.contains(*path) {
                    return Err(Error::UnknownPath(format!("#{}", path.0)));
                }
                let mut next = regs.to_vec();
                next.push(Register::paths([*path]));
                schema.with_registers(photon, next)
            }
            Element::DropUniformRegister { kind, .. } => {
                let idx = schema.require(photon, *kind)?;
                let mut next = regs.to_vec();
                next.remove(idx);
                schema.with_registers(photon, next)
            }
        }
    }

    /// Applies the element. The result's norm equals the input's to within
    /// [`STATE_TOL`] (relative), otherwise [`Error::NormViolation`].
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        let schema = s.schema();
        let next = Arc::new(self.output_schema(schema)?);
        let photon = self.photon();
        let regs = schema.registers(photon);
        let idx = |kind| schema.find(photon, kind);
        let out = match self {
            Element::Rtheta { theta, paths, .. } => {
                let pol = idx(DofKind::Polarization).expect("checked");
                let path = idx(DofKind::Path);
                let (c, sn) = (theta.cos(), theta.sin());
                s.rewrite_photon(photon, next.clone(), |part| {
                    let active = match (paths, path) {
                        (Some(ps), Some(pi)) => part[pi].path().is_some_and(|p| ps.contains(&p)),
                        _ => true,
                    };
                    if !active {
                        return Ok(vec![(part.to_vec(), ONE)]);
                    }
                    let (to_h, to_v) = match part[pol].pol() {
                        Some(Pol::H) => (c, sn),
                        _ => (-sn, c),
                    };
                    Ok(vec![
                        (
                            with_value(part, pol, DofValue::Polarization(Pol::H)),
                            real(to_h),
                        ),
                        (
                            with_value(part, pol, DofValue::Polarization(Pol::V)),
                            real(to_v),
                        ),
                    ])
                })?
            }
            Element::Ubs {
                paths: (p1, p2),
                phi,
                ..
            } => {
                let pi = idx(DofKind::Path).expect("checked");
                let (c, sn) = ((phi / 2.0).cos(), (phi / 2.0).sin());
                let (v1, v2) = (DofValue::Path(*p1), DofValue::Path(*p2));
                s.rewrite_photon(photon, next.clone(), |part| {
                    let v = part[pi];
                    Ok(if v == v1 {
                        vec![
                            (with_value(part, pi, v1), real(c)),
                            (with_value(part, pi, v2), real(sn)),
                        ]
                    } else if v == v2 {
                        vec![
                            (with_value(part, pi, v1), real(-sn)),
                            (with_value(part, pi, v2), real(c)),
                        ]
                    } else {
                        vec![(part.to_vec(), ONE)]
                    })
                })?
            }
            Element::Wdm { routing, .. } => {
                let fi = idx(DofKind::Frequency).expect("checked");
                s.rewrite_photon(photon, next.clone(), |part| {
                    let f = part[fi].freq().expect("frequency register");
                    let path = routing
                        .iter()
                        .find(|(rf, _)| *rf == f)
                        .map(|(_, p)| *p)
                        .expect("checked");
                    let mut out = part.to_vec();
                    out.push(DofValue::Path(path));
                    Ok(vec![(out, ONE)])
                })?
            }
            Element::Fs { correlation, .. } => {
                let fi = idx(DofKind::Frequency).expect("checked");
                let pi = idx(DofKind::Path).expect("checked");
                let registry = schema.registry();
                s.rewrite_photon(photon, next.clone(), |part| {
                    let path = part[pi].path().expect("path register");
                    let f = part[fi].freq().expect("frequency register");
                    let expected = correlation
                        .iter()
                        .find(|(p, _)| *p == path)
                        .map(|(_, f)| *f)
                        .expect("checked");
                    if f != expected {
                        return Err(Error::CorrelationViolated(format!(
                            "{f} on path {} (expected {expected})",
                            registry.name(path)
                        )));
                    }
                    let mut out = part.to_vec();
                    out.remove(fi);
                    Ok(vec![(out, ONE)])
                })?
            }
            Element::Pbs { routing, .. } => {
                let poli = idx(DofKind::Polarization).expect("checked");
                let pi = idx(DofKind::Path).expect("checked");
                let pi_next = next
                    .find(photon, DofKind::Path)
                    .expect("path register kept");
                s.rewrite_photon(photon, next.clone(), |part| {
                    let pol = part[poli].pol().expect("polarization register");
                    let path = part[pi].path().expect("path register");
                    let out_path = routing
                        .iter()
                        .find(|r| r.input == path && r.polarization == pol)
                        .map_or(path, |r| r.output);
                    Ok(vec![(
                        with_value(part, pi_next, DofValue::Path(out_path)),
                        ONE,
                    )])
                })?
            }
            Element::Pc { paths, time, .. } => {
                let poli = idx(DofKind::Polarization).expect("checked");
                let ti = idx(DofKind::TimeBin).expect("checked");
                let pi = idx(DofKind::Path).expect("checked");
                s.rewrite_photon(photon, next.clone(), |part| {
                    let hit = part[ti].delay() == Some(*time)
                        && part[pi].path().is_some_and(|p| paths.contains(&p));
                    Ok(vec![(
                        if hit {
                            flip_pol(part, poli)
                        } else {
                            part.to_vec()
                        },
                        ONE,
                    )])
                })?
            }
            Element::Ui {
                paths, long_arm, ..
            } => {
                let poli = idx(DofKind::Polarization).expect("checked");
                let ti = idx(DofKind::TimeBin).expect("checked");
                let pi = idx(DofKind::Path).expect("checked");
                s.rewrite_photon(photon, next.clone(), |part| {
                    let hit = part[poli].pol() == Some(*long_arm)
                        && part[pi].path().is_some_and(|p| paths.contains(&p));
                    let t = part[ti].delay().expect("time register");
                    let t = if hit { t + 1 } else { t };
                    Ok(vec![(with_value(part, ti, DofValue::TimeBin(t)), ONE)])
                })?
            }
            Element::Hwp { paths, .. } => {
                let poli = idx(DofKind::Polarization).expect("checked");
                let pi = idx(DofKind::Path).expect("checked");
                s.rewrite_photon(photon, next.clone(), |part| {
                    let hit = part[pi].path().is_some_and(|p| paths.contains(&p));
                    Ok(vec![(
                        if hit {
                            flip_pol(part, poli)
                        } else {
                            part.to_vec()
                        },
                        ONE,
                    )])
                })?
            }
            Element::Bs {
                inputs: (i1, i2),
                outputs: (o1, o2),
                ..
            } => {
                let pi = idx(DofKind::Path).expect("checked");
                let pi_next = next
                    .find(photon, DofKind::Path)
                    .expect("path register kept");
                let r = FRAC_1_SQRT_2;
                let (o1, o2) = (DofValue::Path(*o1), DofValue::Path(*o2));
                s.rewrite_photon(photon, next.clone(), |part| {
                    let path = part[pi].path().expect("path register");
                    Ok(if path == *i1 {
                        vec![
                            (with_value(part, pi_next, o1), real(r)),
                            (with_value(part, pi_next, o2), real(r)),
                        ]
                    } else if path == *i2 {
                        vec![
                            (with_value(part, pi_next, o1), real(r)),
                            (with_value(part, pi_next, o2), real(-r)),
                        ]
                    } else {
                        vec![(part.to_vec(), ONE)]
                    })
                })?
            }
            Element::Pauli { correction, .. } => {
                let slots: Vec<(usize, PauliOp)> = correction
                    .factors
                    .iter()
                    .map(|(kind, op)| (idx(*kind).expect("checked"), *op))
                    .collect();
                s.rewrite_photon(photon, next.clone(), |part| {
                    let mut out = part.to_vec();
                    let mut coeff = 1.0;
                    for (ri, op) in &slots {
                        let pos = regs[*ri].position(part[*ri]).expect("value in domain");
                        let (to, c) = op.act(pos);
                        out[*ri] = regs[*ri].domain()[to];
                        coeff *= c;
                    }
                    Ok(vec![(out, real(coeff))])
                })?
            }
            Element::AddPathRegister { path, .. } => {
                s.rewrite_photon(photon, next.clone(), |part| {
                    let mut out = part.to_vec();
                    out.push(DofValue::Path(*path));
                    Ok(vec![(out, ONE)])
                })?
            }
            Element::DropUniformRegister { kind, .. } => {
                let ri = idx(*kind).expect("checked");
                if s.register_values(photon, ri).len() > 1 {
                    return Err(Error::NotUniform {
                        photon,
                        kind: *kind,
                    });
                }
                s.rewrite_photon(photon, next.clone(), |part| {
                    let mut out = part.to_vec();
                    out.remove(ri);
                    Ok(vec![(out, ONE)])
                })?
            }
        };
        let (before, after) = (s.norm_sqr(), out.norm_sqr());
        if (after - before).abs() > STATE_TOL * before.max(f64::MIN_POSITIVE) {
            return Err(Error::NormViolation {
                element: self.kind_name().into(),
                before,
                after,
            });
        }
        Ok(out)
    }
}

fn with_value(part: &[DofValue], index: usize, v: DofValue) -> Vec<DofValue> {
    let mut out = part.to_vec();
    out[index] = v;
    out
}

fn flip_pol(part: &[DofValue], index: usize) -> Vec<DofValue> {
    let p = part[index].pol().expect("polarization register");
    with_value(part, index, DofValue::Polarization(p.flipped()))
}

pub fn apply_rtheta(s: &StateVector, photon: Photon, theta: f64) -> Result<StateVector> {
    Element::Rtheta {
        photon,
        theta,
        paths: None,
    }
    .apply(s)
}

pub fn apply_ubs(
    s: &StateVector,
    photon: Photon,
    paths: (PathId, PathId),
    phi: f64,
) -> Result<StateVector> {
    Element::Ubs { photon, paths, phi }.apply(s)
}

pub fn apply_wdm(
    s: &StateVector,
    photon: Photon,
    routing: &[(Freq, PathId)],
) -> Result<StateVector> {
    Element::Wdm {
        photon,
        routing: routing.to_vec(),
    }
    .apply(s)
}

pub fn apply_fs(
    s: &StateVector,
    photon: Photon,
    correlation: &[(PathId, Freq)],
    common: Freq,
) -> Result<StateVector> {
    Element::Fs {
        photon,
        correlation: correlation.to_vec(),
        common,
    }
    .apply(s)
}

pub fn apply_pbs(s: &StateVector, photon: Photon, routing: &[PbsRoute]) -> Result<StateVector> {
    Element::Pbs {
        photon,
        routing: routing.to_vec(),
    }
    .apply(s)
}

pub fn apply_pc(
    s: &StateVector,
    photon: Photon,
    paths: &[PathId],
    time: u32,
) -> Result<StateVector> {
    Element::Pc {
        photon,
        paths: paths.to_vec(),
        time,
    }
    .apply(s)
}

pub fn apply_ui(
    s: &StateVector,
    photon: Photon,
    paths: &[PathId],
    long_arm: Pol,
) -> Result<StateVector> {
    Element::Ui {
        photon,
        paths: paths.to_vec(),
        long_arm,
    }
    .apply(s)
}

pub fn apply_hwp(s: &StateVector, photon: Photon, paths: &[PathId]) -> Result<StateVector> {
    Element::Hwp {
        photon,
        paths: paths.to_vec(),
    }
    .apply(s)
}

pub fn apply_bs(
    s: &StateVector,
    photon: Photon,
    inputs: (PathId, PathId),
    outputs: (PathId, PathId),
) -> Result<StateVector> {
    Element::Bs {
        photon,
        inputs,
        outputs,
    }
    .apply(s)
}

pub fn apply_pauli(
    s: &StateVector,
    photon: Photon,
    correction: PauliString,
) -> Result<StateVector> {
    Element::Pauli { photon, correction }.apply(s)
}

pub fn drop_uniform_register(
    s: &StateVector,
    photon: Photon,
    kind: DofKind,
) -> Result<StateVector> {
    Element::DropUniformRegister { photon, kind }.apply(s)
}
