//! Labeled-basis state vectors for a photon pair.
//!
//! Each photon carries an ordered list of registers (polarization, frequency,
//! path, time-bin). A basis ket is one value per register, and a
//! [`StateVector`] is a sparse map from kets to complex amplitudes kept in
//! canonical order: photon A registers first, then photon B, each register's
//! values in declaration order (H < V, ω₁ < ω₂, registry order for paths,
//! ascending delay for time-bins).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::ProtocolKind;

/// Amplitudes with modulus below this are dropped after every rewrite.
pub const PRUNE_EPS: f64 = 1e-14;
/// Tolerance used for normalization and equality assertions on evolved states.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on the normalization of each coefficient pair of [`TargetParams`].
pub const PARAM_TOL: f64 = 1e-12;
/// Branch probabilities at or below this are treated as vanishing.
pub const ZERO_PROBABILITY: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Photon {
    A,
    B,
}

impl fmt::Display for Photon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Photon::A => "A",
            Photon::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pol {
    H,
    V,
}

impl Pol {
    pub fn flipped(self) -> Pol {
        match self {
            Pol::H => Pol::V,
            Pol::V => Pol::H,
        }
    }
}

impl fmt::Display for Pol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pol::H => "H",
            Pol::V => "V",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Freq {
    W1,
    W2,
}

impl fmt::Display for Freq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Freq::W1 => "w1",
            Freq::W2 => "w2",
        })
    }
}

/// Early time-bin.
pub const EARLY: u32 = 0;
/// Late time-bin (one unit of delay).
pub const LATE: u32 = 1;

/// Index of a path name in a [`PathRegistry`]; ordering follows declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathId(pub u8);

/// The finite, ordered set of spatial-mode names one circuit may use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRegistry {
    names: Vec<String>,
}

impl PathRegistry {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > u8::MAX as usize {
            return Err(Error::InvalidRegistry("more than 255 paths".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::InvalidRegistry("empty path name".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidRegistry(format!("duplicate path `{n}`")));
            }
        }
        Ok(PathRegistry { names })
    }

    pub fn id(&self, name: &str) -> Result<PathId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| PathId(i as u8))
            .ok_or_else(|| Error::UnknownPath(name.to_string()))
    }

    pub fn name(&self, id: PathId) -> &str {
        self.names.get(id.0 as usize).map_or("?", String::as_str)
    }

    pub fn contains(&self, id: PathId) -> bool {
        (id.0 as usize) < self.names.len()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DofKind {
    Polarization,
    Frequency,
    Path,
    TimeBin,
}

impl DofKind {
    /// Short tag used in correction operator names (σ^p, σ^f, σ^t).
    pub fn tag(self) -> &'static str {
        match self {
            DofKind::Polarization => "p",
            DofKind::Frequency => "f",
            DofKind::Path => "s",
            DofKind::TimeBin => "t",
        }
    }
}

impl fmt::Display for DofKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DofKind::Polarization => "polarization",
            DofKind::Frequency => "frequency",
            DofKind::Path => "path",
            DofKind::TimeBin => "time-bin",
        })
    }
}

/// One register value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DofValue {
    Polarization(Pol),
    Frequency(Freq),
    Path(PathId),
    /// Integer delay count; 0 = early, 1 = late.
    TimeBin(u32),
}

impl DofValue {
    pub fn kind(self) -> DofKind {
        match self {
            DofValue::Polarization(_) => DofKind::Polarization,
            DofValue::Frequency(_) => DofKind::Frequency,
            DofValue::Path(_) => DofKind::Path,
            DofValue::TimeBin(_) => DofKind::TimeBin,
        }
    }

    pub fn pol(self) -> Option<Pol> {
        match self {
            DofValue::Polarization(p) => Some(p),
            _ => None,
        }
    }

    pub fn freq(self) -> Option<Freq> {
        match self {
            DofValue::Frequency(f) => Some(f),
            _ => None,
        }
    }

    pub fn path(self) -> Option<PathId> {
        match self {
            DofValue::Path(p) => Some(p),
            _ => None,
        }
    }

    pub fn delay(self) -> Option<u32> {
        match self {
            DofValue::TimeBin(t) => Some(t),
            _ => None,
        }
    }

    pub fn display(self, registry: &PathRegistry) -> String {
        match self {
            DofValue::Polarization(p) => p.to_string(),
            DofValue::Frequency(f) => f.to_string(),
            DofValue::Path(p) => registry.name(p).to_string(),
            DofValue::TimeBin(EARLY) => "e".into(),
            DofValue::TimeBin(LATE) => "l".into(),
            DofValue::TimeBin(t) => format!("t{t}"),
        }
    }
}

/// A register: its DoF kind plus the ordered list of values it may take.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    kind: DofKind,
    domain: Vec<DofValue>,
}

impl Register {
    pub fn polarization() -> Self {
        Register {
            kind: DofKind::Polarization,
            domain: vec![
                DofValue::Polarization(Pol::H),
                DofValue::Polarization(Pol::V),
            ],
        }
    }

    pub fn frequency() -> Self {
        Register {
            kind: DofKind::Frequency,
            domain: vec![DofValue::Frequency(Freq::W1), DofValue::Frequency(Freq::W2)],
        }
    }

    /// Delays `0..=max_delay`.
    pub fn time_bins(max_delay: u32) -> Self {
        Register {
            kind: DofKind::TimeBin,
            domain: (0..=max_delay).map(DofValue::TimeBin).collect(),
        }
    }

    /// A path register over the given paths, stored in registry order.
    pub fn paths<I: IntoIterator<Item = PathId>>(paths: I) -> Self {
        let mut ids: Vec<PathId> = paths.into_iter().collect();
        ids.sort();
        ids.dedup();
        Register {
            kind: DofKind::Path,
            domain: ids.into_iter().map(DofValue::Path).collect(),
        }
    }

    pub fn kind(&self) -> DofKind {
        self.kind
    }

    pub fn domain(&self) -> &[DofValue] {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn contains(&self, v: DofValue) -> bool {
        self.domain.contains(&v)
    }

    pub fn position(&self, v: DofValue) -> Option<usize> {
        self.domain.iter().position(|d| *d == v)
    }

    pub fn path_ids(&self) -> Vec<PathId> {
        self.domain.iter().filter_map(|v| v.path()).collect()
    }
}

/// The active registers of both photons at one circuit stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    registry: Arc<PathRegistry>,
    photon_a: Vec<Register>,
    photon_b: Vec<Register>,
}

impl Schema {
    pub fn new(
        registry: Arc<PathRegistry>,
        photon_a: Vec<Register>,
        photon_b: Vec<Register>,
    ) -> Result<Self> {
        for (photon, regs) in [(Photon::A, &photon_a), (Photon::B, &photon_b)] {
            for (i, r) in regs.iter().enumerate() {
                if regs[..i].iter().any(|o| o.kind == r.kind) {
                    return Err(Error::RegisterPresent {
                        photon,
                        kind: r.kind,
                    });
                }
                if r.domain.is_empty() {
                    return Err(Error::InvalidLabel(format!(
                        "empty {} register on photon {photon}",
                        r.kind
                    )));
                }
                for v in &r.domain {
                    if v.kind() != r.kind {
                        return Err(Error::InvalidLabel(format!(
                            "{v:?} in a {} register",
                            r.kind
                        )));
                    }
                    if let Some(p) = v.path() {
                        if !registry.contains(p) {
                            return Err(Error::UnknownPath(format!("#{}", p.0)));
                        }
                    }
                }
            }
        }
        Ok(Schema {
            registry,
            photon_a,
            photon_b,
        })
    }

    pub fn registry(&self) -> &Arc<PathRegistry> {
        &self.registry
    }

    pub fn registers(&self, photon: Photon) -> &[Register] {
        match photon {
            Photon::A => &self.photon_a,
            Photon::B => &self.photon_b,
        }
    }

    pub fn find(&self, photon: Photon, kind: DofKind) -> Option<usize> {
        self.registers(photon).iter().position(|r| r.kind == kind)
    }

    pub fn require(&self, photon: Photon, kind: DofKind) -> Result<usize> {
        self.find(photon, kind)
            .ok_or(Error::MissingRegister { photon, kind })
    }

    /// Same registry and other photon, with `photon`'s registers replaced.
    pub fn with_registers(&self, photon: Photon, regs: Vec<Register>) -> Result<Schema> {
        let (a, b) = match photon {
            Photon::A => (regs, self.photon_b.clone()),
            Photon::B => (self.photon_a.clone(), regs),
        };
        Schema::new(self.registry.clone(), a, b)
    }

    /// Photon B's registers alone, photon A emptied.
    pub fn bob_only(&self) -> Schema {
        Schema {
            registry: self.registry.clone(),
            photon_a: Vec::new(),
            photon_b: self.photon_b.clone(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.photon_a
            .iter()
            .chain(&self.photon_b)
            .map(Register::len)
            .product()
    }

    /// Every basis label in canonical order.
    pub fn basis(&self) -> Vec<BasisLabel> {
        fn product(regs: &[Register]) -> Vec<Vec<DofValue>> {
            regs.iter().fold(vec![Vec::new()], |acc, r| {
                acc.iter()
                    .flat_map(|prefix| {
                        r.domain.iter().map(move |v| {
                            let mut p = prefix.clone();
                            p.push(*v);
                            p
                        })
                    })
                    .collect()
            })
        }
        let a = product(&self.photon_a);
        let b = product(&self.photon_b);
        a.iter()
            .flat_map(|pa| {
                b.iter()
                    .map(move |pb| BasisLabel::new(pa.clone(), pb.clone()))
            })
            .collect()
    }

    pub fn validate_label(&self, label: &BasisLabel) -> Result<()> {
        for photon in [Photon::A, Photon::B] {
            let regs = self.registers(photon);
            let vals = label.photon(photon);
            if regs.len() != vals.len() {
                return Err(Error::InvalidLabel(format!(
                    "photon {photon} has {} values for {} registers",
                    vals.len(),
                    regs.len()
                )));
            }
            for (r, v) in regs.iter().zip(vals) {
                if !r.contains(*v) {
                    return Err(Error::InvalidLabel(format!(
                        "{} not in photon {photon}'s {} register",
                        v.display(&self.registry),
                        r.kind
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn format_label(&self, label: &BasisLabel) -> String {
        let side = |vals: &[DofValue]| {
            vals.iter()
                .map(|v| v.display(&self.registry))
                .collect::<Vec<_>>()
                .join(",")
        };
        if label.a.is_empty() {
            side(&label.b)
        } else {
            format!("{}|{}", side(&label.a), side(&label.b))
        }
    }
}

/// One basis ket: a value per active register of each photon.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub a: Vec<DofValue>,
    pub b: Vec<DofValue>,
}

impl BasisLabel {
    pub fn new(a: Vec<DofValue>, b: Vec<DofValue>) -> Self {
        BasisLabel { a, b }
    }

    pub fn photon(&self, photon: Photon) -> &[DofValue] {
        match photon {
            Photon::A => &self.a,
            Photon::B => &self.b,
        }
    }

    pub fn photon_mut(&mut self, photon: Photon) -> &mut Vec<DofValue> {
        match photon {
            Photon::A => &mut self.a,
            Photon::B => &mut self.b,
        }
    }
}

/// Sparse pure state of the photon pair.
///
/// Immutable once built; every operation returns a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    schema: Arc<Schema>,
    amps: BTreeMap<BasisLabel, Complex64>,
}

impl StateVector {
    /// Builds a state from (label, amplitude) pairs. Repeated labels add up;
    /// amplitudes below [`PRUNE_EPS`] are dropped. Normalization is not enforced.
    pub fn from_amplitudes<I>(schema: Arc<Schema>, amps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisLabel, Complex64)>,
    {
        let mut map: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
        for (label, amp) in amps {
            schema.validate_label(&label)?;
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "non-finite amplitude {amp}"
                )));
            }
            *map.entry(label).or_default() += amp;
        }
        map.retain(|_, a| a.norm() >= PRUNE_EPS);
        Ok(StateVector { schema, amps: map })
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Complex64 {
        self.amps.get(label).copied().unwrap_or_default()
    }

    /// Nonzero amplitudes in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &Complex64)> {
        self.amps.iter()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(Complex64::norm_sqr).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < STATE_TOL
    }

    pub fn scaled(&self, c: Complex64) -> StateVector {
        let amps = self
            .amps
            .iter()
            .map(|(l, a)| (l.clone(), a * c))
            .filter(|(_, a)| a.norm() >= PRUNE_EPS)
            .collect();
        StateVector {
            schema: self.schema.clone(),
            amps,
        }
    }

    /// Amplitudes over the full canonical basis, zeros included.
    pub fn to_dense(&self) -> Vec<Complex64> {
        self.schema
            .basis()
            .iter()
            .map(|l| self.amplitude(l))
            .collect()
    }

    /// Values taken by one register across the support.
    pub fn register_values(&self, photon: Photon, index: usize) -> Vec<DofValue> {
        let mut vals: Vec<DofValue> = self.amps.keys().map(|l| l.photon(photon)[index]).collect();
        vals.sort();
        vals.dedup();
        vals
    }

    /// Rewrites photon `photon`'s part of every label into a linear combination
    /// of labels under `schema`, summing coherent contributions.
    pub(crate) fn rewrite_photon<F>(
        &self,
        photon: Photon,
        schema: Arc<Schema>,
        mut f: F,
    ) -> Result<StateVector>
    where
        F: FnMut(&[DofValue]) -> Result<Vec<(Vec<DofValue>, Complex64)>>,
    {
        let mut out: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
        for (label, amp) in &self.amps {
            for (part, coeff) in f(label.photon(photon))? {
                let mut next = label.clone();
                *next.photon_mut(photon) = part;
                *out.entry(next).or_default() += amp * coeff;
            }
        }
        out.retain(|_, a| a.norm() >= PRUNE_EPS);
        for label in out.keys() {
            schema.validate_label(label)?;
        }
        Ok(StateVector { schema, amps: out })
    }

    pub fn format_amplitudes(&self) -> Vec<(String, Complex64)> {
        self.amps
            .iter()
            .map(|(l, a)| (self.schema.format_label(l), *a))
            .collect()
    }
}

/// Six real coefficients of the target product state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetParams {
    pub alpha0: f64,
    pub beta0: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
}

impl TargetParams {
    pub fn new(
        alpha0: f64,
        beta0: f64,
        alpha1: f64,
        beta1: f64,
        alpha2: f64,
        beta2: f64,
    ) -> Result<Self> {
        let p = TargetParams {
            alpha0,
            beta0,
            alpha1,
            beta1,
            alpha2,
            beta2,
        };
        p.validate()?;
        Ok(p)
    }

    /// Polarization and frequency coefficients; the time-bin pair defaults to (1, 0).
    pub fn pf(alpha0: f64, beta0: f64, alpha1: f64, beta1: f64) -> Result<Self> {
        Self::new(alpha0, beta0, alpha1, beta1, 1.0, 0.0)
    }

    /// Polarization and time-bin coefficients; the frequency pair defaults to (1, 0).
    pub fn tb(alpha0: f64, beta0: f64, alpha2: f64, beta2: f64) -> Result<Self> {
        Self::new(alpha0, beta0, 1.0, 0.0, alpha2, beta2)
    }

    /// Builds params for `kind` from its two coefficient pairs.
    pub fn for_protocol(kind: ProtocolKind, pol: (f64, f64), second: (f64, f64)) -> Result<Self> {
        match kind {
            ProtocolKind::Pf => Self::pf(pol.0, pol.1, second.0, second.1),
            ProtocolKind::Tb => Self::tb(pol.0, pol.1, second.0, second.1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pairs = [
            ("(alpha0, beta0)", self.alpha0, self.beta0),
            ("(alpha1, beta1)", self.alpha1, self.beta1),
            ("(alpha2, beta2)", self.alpha2, self.beta2),
        ];
        for (name, a, b) in pairs {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
            if !(-1.0..=1.0).contains(&a) || !(-1.0..=1.0).contains(&b) {
                return Err(Error::InvalidParams(format!(
                    "{name} = ({a}, {b}) outside [-1, 1]"
                )));
            }
            let n = a * a + b * b;
            if (n - 1.0).abs() > PARAM_TOL {
                return Err(Error::InvalidParams(format!(
                    "{name} = ({a}, {b}) has squared norm {n}, expected 1"
                )));
            }
        }
        Ok(())
    }

    pub fn polarization(&self) -> (f64, f64) {
        (self.alpha0, self.beta0)
    }

    pub fn frequency(&self) -> (f64, f64) {
        (self.alpha1, self.beta1)
    }

    pub fn time_bin(&self) -> (f64, f64) {
        (self.alpha2, self.beta2)
    }

    /// The pair encoding the second DoF of `kind`.
    pub fn second(&self, kind: ProtocolKind) -> (f64, f64) {
        match kind {
            ProtocolKind::Pf => self.frequency(),
            ProtocolKind::Tb => self.time_bin(),
        }
    }
}

/// Register schema of photon B: polarization plus the protocol's second DoF.
pub fn bob_registers(kind: ProtocolKind) -> Vec<Register> {
    match kind {
        ProtocolKind::Pf => vec![Register::polarization(), Register::frequency()],
        ProtocolKind::Tb => vec![Register::polarization(), Register::time_bins(LATE)],
    }
}

fn second_values(kind: ProtocolKind) -> [DofValue; 2] {
    match kind {
        ProtocolKind::Pf => [DofValue::Frequency(Freq::W1), DofValue::Frequency(Freq::W2)],
        ProtocolKind::Tb => [DofValue::TimeBin(EARLY), DofValue::TimeBin(LATE)],
    }
}

/// The shared hyper-entangled pair ½(|HH⟩+|VV⟩)⊗(|xx⟩+|yy⟩), where x, y are
/// ω₁, ω₂ for [`ProtocolKind::Pf`] and e, l for [`ProtocolKind::Tb`].
pub fn make_hyper_bell(kind: ProtocolKind) -> StateVector {
    let regs = bob_registers(kind);
    let schema = Schema::new(kind.registry(), regs.clone(), regs).expect("static schema");
    let pols = [
        DofValue::Polarization(Pol::H),
        DofValue::Polarization(Pol::V),
    ];
    let amps = pols.iter().flat_map(|p| {
        second_values(kind).into_iter().map(move |x| {
            let part = vec![*p, x];
            (
                BasisLabel::new(part.clone(), part),
                Complex64::new(0.5, 0.0),
            )
        })
    });
    StateVector::from_amplitudes(Arc::new(schema), amps).expect("static labels")
}

/// The single-photon target (α₀|H⟩+β₀|V⟩)⊗(α|x⟩+β|y⟩) on photon B alone.
pub fn make_target(params: &TargetParams, kind: ProtocolKind) -> Result<StateVector> {
    params.validate()?;
    let schema = Schema::new(kind.registry(), Vec::new(), bob_registers(kind))?;
    let (a0, b0) = params.polarization();
    let (a, b) = params.second(kind);
    let [x, y] = second_values(kind);
    let amps = [
        (Pol::H, x, a0 * a),
        (Pol::H, y, a0 * b),
        (Pol::V, x, b0 * a),
        (Pol::V, y, b0 * b),
    ]
    .into_iter()
    .map(|(p, v, c)| {
        (
            BasisLabel::new(Vec::new(), vec![DofValue::Polarization(p), v]),
            Complex64::new(c, 0.0),
        )
    });
    StateVector::from_amplitudes(Arc::new(schema), amps)
}

/// |⟨t|s⟩|², clamped to at most 1.
pub fn fidelity(s: &StateVector, t: &StateVector) -> Result<f64> {
    if s.schema != t.schema {
        return Err(Error::SchemaMismatch(
            "fidelity between states on different schemas".into(),
        ));
    }
    // Visit common labels in canonical order so the result is symmetric in (s, t).
    let (small, large) = if s.len() <= t.len() { (s, t) } else { (t, s) };
    let overlap: Complex64 = small
        .amps
        .iter()
        .filter_map(|(l, a)| large.amps.get(l).map(|b| (a, b)))
        .map(|(a, b)| {
            if std::ptr::eq(small, t) {
                a.conj() * b
            } else {
                b.conj() * a
            }
        })
        .sum();
    Ok(overlap.norm_sqr().min(1.0))
}

/// Photon A's detection result: polarization at one output path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome {
    pub polarization: Pol,
    pub path: PathId,
}

/// Result of projecting photon A onto one detector.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub probability: f64,
    /// Renormalized photon-B state; `None` when the branch has zero weight.
    pub bob_state: Option<StateVector>,
}

/// Projects photon A onto `outcome`. Photon A must carry exactly a
/// polarization and a path register, and the outcome's path must be one of
/// the path register's current values.
pub fn project_photon_a(s: &StateVector, outcome: Outcome) -> Result<Projection> {
    let schema = s.schema();
    let regs = schema.registers(Photon::A);
    let pol_idx = schema.require(Photon::A, DofKind::Polarization)?;
    let path_idx = schema.require(Photon::A, DofKind::Path)?;
    if regs.len() != 2 {
        return Err(Error::SchemaMismatch(format!(
            "photon A must carry only polarization and path at detection, found {} registers",
            regs.len()
        )));
    }
    if !regs[path_idx].contains(DofValue::Path(outcome.path)) {
        return Err(Error::UnknownDetector(format!(
            "{}, {}",
            outcome.polarization,
            schema.registry().name(outcome.path)
        )));
    }
    let bob_schema = Arc::new(schema.bob_only());
    let branch: Vec<(BasisLabel, Complex64)> = s
        .iter()
        .filter(|(l, _)| {
            l.a[pol_idx] == DofValue::Polarization(outcome.polarization)
                && l.a[path_idx] == DofValue::Path(outcome.path)
        })
        .map(|(l, a)| (BasisLabel::new(Vec::new(), l.b.clone()), *a))
        .collect();
    let probability: f64 = branch.iter().map(|(_, a)| a.norm_sqr()).sum();
    if probability <= ZERO_PROBABILITY {
        return Ok(Projection {
            probability: 0.0,
            bob_state: None,
        });
    }
    let scale = 1.0 / probability.sqrt();
    let bob =
        StateVector::from_amplitudes(bob_schema, branch.into_iter().map(|(l, a)| (l, a * scale)))?;
    Ok(Projection {
        probability,
        bob_state: Some(bob),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn pol(p: Pol) -> DofValue {
        DofValue::Polarization(p)
    }

    #[test]
    fn hyper_bell_amplitudes() {
        let pf = make_hyper_bell(ProtocolKind::Pf);
        assert_eq!(pf.len(), 4);
        let w1 = DofValue::Frequency(Freq::W1);
        let hh = BasisLabel::new(vec![pol(Pol::H), w1], vec![pol(Pol::H), w1]);
        assert_eq!(pf.amplitude(&hh), Complex64::new(0.5, 0.0));
        let hv = BasisLabel::new(vec![pol(Pol::H), w1], vec![pol(Pol::V), w1]);
        assert_eq!(pf.amplitude(&hv), Complex64::new(0.0, 0.0));

        let tb = make_hyper_bell(ProtocolKind::Tb);
        let l = DofValue::TimeBin(LATE);
        let vv = BasisLabel::new(vec![pol(Pol::V), l], vec![pol(Pol::V), l]);
        assert_eq!(tb.amplitude(&vv), Complex64::new(0.5, 0.0));
        assert!(tb.is_normalized());
    }

    #[test]
    fn target_basis_cases() {
        let t = make_target(
            &TargetParams::pf(1.0, 0.0, 1.0, 0.0).unwrap(),
            ProtocolKind::Pf,
        )
        .unwrap();
        assert_eq!(t.len(), 1);
        let (l, a) = t.iter().next().unwrap();
        assert_eq!(l.b, vec![pol(Pol::H), DofValue::Frequency(Freq::W1)]);
        assert_eq!(*a, Complex64::new(1.0, 0.0));

        let t = make_target(
            &TargetParams::tb(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 1.0).unwrap(),
            ProtocolKind::Tb,
        )
        .unwrap();
        assert_eq!(t.len(), 2);
        for (l, a) in t.iter() {
            assert_eq!(l.b[1], DofValue::TimeBin(LATE));
            assert!((a.re - FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn params_rejected_when_unnormalized() {
        assert!(matches!(
            TargetParams::pf(0.5, 0.5, 1.0, 0.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(TargetParams::pf(f64::NAN, 0.0, 1.0, 0.0).is_err());
        assert!(TargetParams::new(1.0, 0.0, 1.0, 0.0, 2.0, 0.0).is_err());
        assert!(TargetParams::pf(0.6, -0.8, -0.28, 0.96).is_ok());
    }

    #[test]
    fn fidelity_basics() {
        let kind = ProtocolKind::Pf;
        let h = make_target(&TargetParams::pf(1.0, 0.0, 1.0, 0.0).unwrap(), kind).unwrap();
        let v = make_target(&TargetParams::pf(0.0, 1.0, 1.0, 0.0).unwrap(), kind).unwrap();
        assert_eq!(fidelity(&h, &h).unwrap(), 1.0);
        assert_eq!(fidelity(&h, &v).unwrap(), 0.0);
        let s = make_target(&TargetParams::pf(0.6, 0.8, 0.28, 0.96).unwrap(), kind).unwrap();
        let rotated = s.scaled(Complex64::from_polar(1.0, 1.234));
        assert!((fidelity(&rotated, &s).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            fidelity(&s, &make_hyper_bell(kind)),
            Err(Error::SchemaMismatch(_))
        ));
    }

    #[test]
    fn labels_outside_schema_are_rejected() {
        let schema = Arc::new(
            Schema::new(
                ProtocolKind::Pf.registry(),
                vec![],
                bob_registers(ProtocolKind::Pf),
            )
            .unwrap(),
        );
        let bad = BasisLabel::new(vec![], vec![pol(Pol::H), DofValue::TimeBin(0)]);
        assert!(StateVector::from_amplitudes(schema, [(bad, Complex64::new(1.0, 0.0))]).is_err());
    }

    #[test]
    fn registry_rejects_unknown_and_duplicate_names() {
        let reg = PathRegistry::new(["a1", "a2"]).unwrap();
        assert_eq!(reg.id("a2").unwrap(), PathId(1));
        assert!(matches!(reg.id("k9"), Err(Error::UnknownPath(_))));
        assert!(PathRegistry::new(["a1", "a1"]).is_err());
    }

    #[test]
    fn canonical_basis_is_sorted() {
        let s = make_hyper_bell(ProtocolKind::Tb);
        let basis = s.schema().basis();
        assert_eq!(basis.len(), 16);
        assert!(basis.windows(2).all(|w| w[0] < w[1]));
    }
}
