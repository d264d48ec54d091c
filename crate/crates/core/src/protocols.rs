//! The two remote-state-preparation circuits, branch enumeration and the
//! receiver's correction tables.
//!
//! Polarization–frequency (PF): Alice rotates her polarization by θ, routes
//! her frequency onto paths a₁/a₂ with a WDM, erases the frequency with an FS
//! and mixes the paths on a UBS. Polarization–time-bin (TB): after the same
//! rotation, a PBS/Pockels-cell/PBS sequence swaps time-bin information into
//! paths, two unbalanced interferometers equalize the arrival time while wave
//! plates θ₁, θ₂ on their arms encode the time-bin coefficients, and HWPs plus
//! two beam splitters spread every branch over eight detectors.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{Element, PauliOp, PauliString, PbsRoute};
use crate::state::{
    fidelity, make_hyper_bell, make_target, project_photon_a, DofKind, Freq, Outcome, PathId,
    PathRegistry, Photon, Pol, StateVector, TargetParams, EARLY, LATE, STATE_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    /// Polarization–frequency hyper-entanglement.
    Pf,
    /// Polarization–time-bin hyper-entanglement.
    Tb,
}

const PF_PATHS: [&str; 2] = ["a1", "a2"];
const TB_PATHS: [&str; 11] = [
    "in", "a1", "a2", "k1", "k2", "k3", "k4", "kp1", "kp2", "kp3", "kp4",
];

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 2] = [ProtocolKind::Pf, ProtocolKind::Tb];

    /// Declared spatial modes of the circuit. `in` is the TB source port;
    /// `kpN` stands for the beam-splitter output k′N.
    pub fn registry(self) -> Arc<PathRegistry> {
        static PF: OnceLock<Arc<PathRegistry>> = OnceLock::new();
        static TB: OnceLock<Arc<PathRegistry>> = OnceLock::new();
        match self {
            ProtocolKind::Pf => {
                PF.get_or_init(|| Arc::new(PathRegistry::new(PF_PATHS).expect("static")))
            }
            ProtocolKind::Tb => {
                TB.get_or_init(|| Arc::new(PathRegistry::new(TB_PATHS).expect("static")))
            }
        }
        .clone()
    }

    /// Register of photon B that carries the second DoF.
    pub fn second_dof(self) -> DofKind {
        match self {
            ProtocolKind::Pf => DofKind::Frequency,
            ProtocolKind::Tb => DofKind::TimeBin,
        }
    }

    pub fn detector_paths(self) -> Vec<PathId> {
        let names: &[&str] = match self {
            ProtocolKind::Pf => &["a1", "a2"],
            ProtocolKind::Tb => &["kp1", "kp2", "kp3", "kp4"],
        };
        let reg = self.registry();
        names.iter().map(|n| reg.id(n).expect("static")).collect()
    }

    pub fn code(self) -> u8 {
        match self {
            ProtocolKind::Pf => 0,
            ProtocolKind::Tb => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(ProtocolKind::Pf),
            1 => Some(ProtocolKind::Tb),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Pf => "pf",
            ProtocolKind::Tb => "tb",
        }
    }

    pub fn outcome_name(self, o: Outcome) -> String {
        format!("{},{}", o.polarization, self.registry().name(o.path))
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pf" => Ok(ProtocolKind::Pf),
            "tb" => Ok(ProtocolKind::Tb),
            other => Err(Error::InvalidArgument(format!(
                "unknown protocol `{other}` (expected pf or tb)"
            ))),
        }
    }
}

/// Detector registry in channel-code order: all H outcomes, then all V outcomes.
pub fn outcome_registry(kind: ProtocolKind) -> Vec<Outcome> {
    let paths = kind.detector_paths();
    [Pol::H, Pol::V]
        .iter()
        .flat_map(|pol| {
            paths.iter().map(move |path| Outcome {
                polarization: *pol,
                path: *path,
            })
        })
        .collect()
}

/// Rotation angle realizing |H⟩ → α|H⟩ + β|V⟩; equals arccos α whenever β ≥ 0.
pub fn rotation_angle(alpha: f64, beta: f64) -> f64 {
    beta.atan2(alpha)
}

/// An ordered element list with the angles it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub kind: ProtocolKind,
    pub params: TargetParams,
    /// Alice's polarization rotation.
    pub theta: f64,
    /// UBS phase (PF only).
    pub phi: Option<f64>,
    /// Wave plates on the short and long interferometer arms (TB only).
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub stages: Vec<Stage>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub label: &'static str,
    pub element: Element,
}

impl Circuit {
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.stages.iter().map(|s| &s.element)
    }

    /// The initial pair followed by the state after every stage.
    pub fn evolve(&self) -> Result<Vec<StateVector>> {
        let mut states = vec![make_hyper_bell(self.kind)];
        for stage in &self.stages {
            let next = stage.element.apply(states.last().expect("non-empty"))?;
            states.push(next);
        }
        Ok(states)
    }

    /// State just before detection.
    pub fn final_state(&self) -> Result<StateVector> {
        self.stages
            .iter()
            .try_fold(make_hyper_bell(self.kind), |s, stage| {
                stage.element.apply(&s)
            })
    }
}

/// Builds Alice's circuit for `kind` and target `params`.
pub fn build_circuit(kind: ProtocolKind, params: &TargetParams) -> Result<Circuit> {
    params.validate()?;
    let reg = kind.registry();
    let path = |n: &str| reg.id(n).expect("static path");
    let a = Photon::A;
    let theta = rotation_angle(params.alpha0, params.beta0);
    let stage = |label, element| Stage { label, element };
    match kind {
        ProtocolKind::Pf => {
            let (a1, a2) = (path("a1"), path("a2"));
            let phi = 2.0 * rotation_angle(params.alpha1, params.beta1);
            let stages = vec![
                stage(
                    "R_theta",
                    Element::Rtheta {
                        photon: a,
                        theta,
                        paths: None,
                    },
                ),
                stage(
                    "WDM",
                    Element::Wdm {
                        photon: a,
                        routing: vec![(Freq::W1, a1), (Freq::W2, a2)],
                    },
                ),
                stage(
                    "FS",
                    Element::Fs {
                        photon: a,
                        correlation: vec![(a1, Freq::W1), (a2, Freq::W2)],
                        common: Freq::W2,
                    },
                ),
                stage(
                    "UBS",
                    Element::Ubs {
                        photon: a,
                        paths: (a1, a2),
                        phi,
                    },
                ),
            ];
            Ok(Circuit {
                kind,
                params: *params,
                theta,
                phi: Some(phi),
                theta1: None,
                theta2: None,
                stages,
            })
        }
        ProtocolKind::Tb => {
            let (src, a1, a2) = (path("in"), path("a1"), path("a2"));
            let [k1, k2, k3, k4] = ["k1", "k2", "k3", "k4"].map(path);
            let [kp1, kp2, kp3, kp4] = ["kp1", "kp2", "kp3", "kp4"].map(path);
            let theta1 = rotation_angle(params.alpha2, params.beta2);
            let theta2 = theta1 - FRAC_PI_2;
            let route = |input, polarization, output| PbsRoute {
                input,
                polarization,
                output,
            };
            // Each interferometer: entry PBS sends H to the short arm and V to
            // the long arm; the exit PBS transmits H and reflects V.
            let arms = |inp, short, long| vec![route(inp, Pol::H, short), route(inp, Pol::V, long)];
            let exit = |short, long| {
                vec![
                    route(short, Pol::H, short),
                    route(short, Pol::V, long),
                    route(long, Pol::H, long),
                    route(long, Pol::V, short),
                ]
            };
            let stages = vec![
                stage(
                    "R_theta",
                    Element::Rtheta {
                        photon: a,
                        theta,
                        paths: None,
                    },
                ),
                stage(
                    "source port",
                    Element::AddPathRegister {
                        photon: a,
                        path: src,
                    },
                ),
                stage(
                    "PBS1",
                    Element::Pbs {
                        photon: a,
                        routing: vec![route(src, Pol::H, a2), route(src, Pol::V, a1)],
                    },
                ),
                stage(
                    "PC_e(a2)",
                    Element::Pc {
                        photon: a,
                        paths: vec![a2],
                        time: EARLY,
                    },
                ),
                stage(
                    "PC_l(a1)",
                    Element::Pc {
                        photon: a,
                        paths: vec![a1],
                        time: LATE,
                    },
                ),
                stage(
                    "PBS2",
                    Element::Pbs {
                        photon: a,
                        routing: vec![
                            route(a1, Pol::H, a2),
                            route(a1, Pol::V, a1),
                            route(a2, Pol::H, a1),
                            route(a2, Pol::V, a2),
                        ],
                    },
                ),
                stage(
                    "UI delay",
                    Element::Ui {
                        photon: a,
                        paths: vec![a1, a2],
                        long_arm: Pol::V,
                    },
                ),
                stage(
                    "UI time erased",
                    Element::DropUniformRegister {
                        photon: a,
                        kind: DofKind::TimeBin,
                    },
                ),
                stage(
                    "UI1 entry",
                    Element::Pbs {
                        photon: a,
                        routing: arms(a1, k1, k2),
                    },
                ),
                stage(
                    "UI2 entry",
                    Element::Pbs {
                        photon: a,
                        routing: arms(a2, k4, k3),
                    },
                ),
                stage(
                    "R_theta1",
                    Element::Rtheta {
                        photon: a,
                        theta: theta1,
                        paths: Some(vec![k1, k4]),
                    },
                ),
                stage(
                    "R_theta2",
                    Element::Rtheta {
                        photon: a,
                        theta: theta2,
                        paths: Some(vec![k2, k3]),
                    },
                ),
                stage(
                    "UI1 exit",
                    Element::Pbs {
                        photon: a,
                        routing: exit(k1, k2),
                    },
                ),
                stage(
                    "UI2 exit",
                    Element::Pbs {
                        photon: a,
                        routing: exit(k4, k3),
                    },
                ),
                stage(
                    "HWP(k1)",
                    Element::Hwp {
                        photon: a,
                        paths: vec![k1],
                    },
                ),
                stage(
                    "HWP(k2)",
                    Element::Hwp {
                        photon: a,
                        paths: vec![k2],
                    },
                ),
                stage(
                    "BS1",
                    Element::Bs {
                        photon: a,
                        inputs: (k1, k4),
                        outputs: (kp1, kp4),
                    },
                ),
                stage(
                    "BS2",
                    Element::Bs {
                        photon: a,
                        inputs: (k2, k3),
                        outputs: (kp2, kp3),
                    },
                ),
            ];
            Ok(Circuit {
                kind,
                params: *params,
                theta,
                phi: None,
                theta1: Some(theta1),
                theta2: Some(theta2),
                stages,
            })
        }
    }
}

/// Bob's correction for each of Alice's detections, as tabulated for the two protocols.
pub fn correction_table(kind: ProtocolKind, outcome: Outcome) -> Result<PauliString> {
    let registry = outcome_registry(kind);
    let row = registry
        .iter()
        .position(|o| *o == outcome)
        .ok_or_else(|| Error::UnknownDetector(kind.outcome_name(outcome)))?;
    use PauliOp::{I, IY, X, Z};
    let (pol, second) = match kind {
        // H a1, H a2, V a1, V a2
        ProtocolKind::Pf => [(Z, Z), (Z, X), (X, Z), (X, X)][row],
        // H k'1..k'4, V k'1..k'4
        ProtocolKind::Tb => [
            (X, X),
            (Z, I),
            (Z, Z),
            (X, IY),
            (Z, X),
            (X, I),
            (X, Z),
            (Z, IY),
        ][row],
    };
    Ok(PauliString::pol_and(pol, kind.second_dof(), second))
}

/// Outcome of the exhaustive 16-way correction search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionSearch {
    /// Every Pauli string reaching fidelity 1 (within 1e-10), in search order.
    pub successes: Vec<PauliString>,
}

impl CorrectionSearch {
    pub fn unique(&self) -> Option<PauliString> {
        match self.successes.as_slice() {
            [only] => Some(*only),
            _ => None,
        }
    }

    pub fn is_ambiguous(&self) -> bool {
        self.successes.len() > 1
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.successes.contains(p)
    }
}

/// Finds every {I, σx, iσy, σz}² correction mapping `bob_state` onto `target`
/// up to a global phase.
pub fn derive_correction(
    bob_state: &StateVector,
    target: &StateVector,
) -> Result<CorrectionSearch> {
    let schema = bob_state.schema();
    if schema != target.schema() {
        return Err(Error::SchemaMismatch(
            "collapsed state and target differ in schema".into(),
        ));
    }
    let regs = schema.registers(Photon::B);
    if !schema.registers(Photon::A).is_empty()
        || regs.len() != 2
        || regs.iter().any(|r| r.len() != 2)
    {
        return Err(Error::SchemaMismatch(
            "correction search needs a single photon with two qubit registers".into(),
        ));
    }
    let mut successes = Vec::new();
    for candidate in PauliString::all(regs[0].kind(), regs[1].kind()) {
        let corrected = Element::Pauli {
            photon: Photon::B,
            correction: candidate,
        }
        .apply(bob_state)?;
        if fidelity(&corrected, target)? > 1.0 - STATE_TOL {
            successes.push(candidate);
        }
    }
    if successes.is_empty() {
        return Err(Error::NoCorrection);
    }
    Ok(CorrectionSearch { successes })
}

/// One measured branch of a protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchReport {
    pub outcome: Outcome,
    pub probability: f64,
    /// Bob's collapsed state; `None` for a zero-weight branch.
    pub bob_state_pre: Option<StateVector>,
    pub correction: PauliString,
    pub bob_state_post: Option<StateVector>,
    /// Fidelity of the corrected state with the target.
    pub fidelity_post: Option<f64>,
}

impl BranchReport {
    pub fn succeeded(&self) -> bool {
        self.fidelity_post.is_some_and(|f| f > 1.0 - STATE_TOL)
    }
}

/// Evolves the shared pair through Alice's circuit, projects onto every
/// registered detector, and applies the tabulated correction on each branch.
pub fn run_protocol(kind: ProtocolKind, params: &TargetParams) -> Result<Vec<BranchReport>> {
    let circuit = build_circuit(kind, params)?;
    let state = circuit.final_state()?;
    let target = make_target(params, kind)?;
    outcome_registry(kind)
        .into_iter()
        .map(|outcome| {
            let proj = project_photon_a(&state, outcome)?;
            let correction = correction_table(kind, outcome)?;
            let (post, fid) = match &proj.bob_state {
                Some(pre) => {
                    let post = Element::Pauli {
                        photon: Photon::B,
                        correction,
                    }
                    .apply(pre)?;
                    let f = fidelity(&post, &target)?;
                    (Some(post), Some(f))
                }
                None => (None, None),
            };
            Ok(BranchReport {
                outcome,
                probability: proj.probability,
                bob_state_pre: proj.bob_state,
                correction,
                bob_state_post: post,
                fidelity_post: fid,
            })
        })
        .collect()
}

/// A branch together with the re-derived correction set.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchVerification {
    pub report: BranchReport,
    /// `None` for zero-weight branches.
    pub search: Option<CorrectionSearch>,
}

impl BranchVerification {
    pub fn table_matches_search(&self) -> bool {
        self.search
            .as_ref()
            .is_none_or(|s| s.contains(&self.report.correction))
    }

    pub fn passed(&self) -> bool {
        (self.report.bob_state_pre.is_none() || self.report.succeeded())
            && self.table_matches_search()
    }
}

/// Runs the protocol and cross-checks every tabulated correction against the
/// exhaustive search at the same parameters.
pub fn verify_protocol(
    kind: ProtocolKind,
    params: &TargetParams,
) -> Result<Vec<BranchVerification>> {
    let target = make_target(params, kind)?;
    run_protocol(kind, params)?
        .into_iter()
        .map(|report| {
            let search = match &report.bob_state_pre {
                Some(pre) => match derive_correction(pre, &target) {
                    Ok(s) => Some(s),
                    Err(Error::NoCorrection) => Some(CorrectionSearch {
                        successes: Vec::new(),
                    }),
                    Err(e) => return Err(e),
                },
                None => None,
            };
            Ok(BranchVerification { report, search })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn pf_generic() -> TargetParams {
        TargetParams::pf(0.6, 0.8, 0.28, 0.96).unwrap()
    }

    #[test]
    fn angles_from_params() {
        let c = build_circuit(
            ProtocolKind::Pf,
            &TargetParams::pf(1.0, 0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap(),
        )
        .unwrap();
        assert_eq!(c.theta, 0.0);
        assert!((c.phi.unwrap() / 2.0 - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(c.stages.len(), 4);

        let c = build_circuit(
            ProtocolKind::Tb,
            &TargetParams::tb(0.6, 0.8, 1.0, 0.0).unwrap(),
        )
        .unwrap();
        assert_eq!(c.theta1, Some(0.0));
        assert_eq!(c.theta2, Some(-FRAC_PI_2));
        assert!((c.theta - 0.6f64.acos()).abs() < 1e-15);
    }

    #[test]
    fn registry_sizes_and_order() {
        let pf = outcome_registry(ProtocolKind::Pf);
        assert_eq!(pf.len(), 4);
        assert_eq!(ProtocolKind::Pf.outcome_name(pf[0]), "H,a1");
        assert_eq!(ProtocolKind::Pf.outcome_name(pf[3]), "V,a2");
        let tb = outcome_registry(ProtocolKind::Tb);
        assert_eq!(tb.len(), 8);
        assert_eq!(ProtocolKind::Tb.outcome_name(tb[6]), "V,kp3");
    }

    #[test]
    fn table_entries() {
        let reg = ProtocolKind::Pf.registry();
        let o = Outcome {
            polarization: Pol::H,
            path: reg.id("a2").unwrap(),
        };
        assert_eq!(
            correction_table(ProtocolKind::Pf, o).unwrap().to_string(),
            "σz^p⊗σx^f"
        );
        let reg = ProtocolKind::Tb.registry();
        let o = Outcome {
            polarization: Pol::V,
            path: reg.id("kp2").unwrap(),
        };
        assert_eq!(
            correction_table(ProtocolKind::Tb, o).unwrap().to_string(),
            "σx^p⊗I"
        );
        let o = Outcome {
            polarization: Pol::H,
            path: reg.id("kp3").unwrap(),
        };
        assert_eq!(
            correction_table(ProtocolKind::Tb, o).unwrap().to_string(),
            "σz^p⊗σz^t"
        );
        let o = Outcome {
            polarization: Pol::H,
            path: reg.id("k1").unwrap(),
        };
        assert!(matches!(
            correction_table(ProtocolKind::Tb, o),
            Err(Error::UnknownDetector(_))
        ));
    }

    #[test]
    fn pf_branches_are_quarter_and_corrected() {
        let branches = run_protocol(ProtocolKind::Pf, &pf_generic()).unwrap();
        assert_eq!(branches.len(), 4);
        for b in &branches {
            assert!((b.probability - 0.25).abs() < 1e-12);
            assert!(b.succeeded(), "{:?}", b.fidelity_post);
        }
    }

    #[test]
    fn tb_branches_are_eighth_and_corrected() {
        let params = TargetParams::tb(0.6, 0.8, 0.6, 0.8).unwrap();
        let branches = run_protocol(ProtocolKind::Tb, &params).unwrap();
        assert_eq!(branches.len(), 8);
        for b in &branches {
            assert!((b.probability - 0.125).abs() < 1e-12);
            assert!(b.succeeded());
        }
    }

    #[test]
    fn basis_target_is_reached_exactly() {
        let params = TargetParams::pf(1.0, 0.0, 1.0, 0.0).unwrap();
        let target = make_target(&params, ProtocolKind::Pf).unwrap();
        for b in run_protocol(ProtocolKind::Pf, &params).unwrap() {
            let post = b.bob_state_post.unwrap();
            assert_eq!(post.len(), 1);
            let (label, amp) = post.iter().next().unwrap();
            let (tl, _) = target.iter().next().unwrap();
            assert_eq!(label, tl);
            assert!((amp.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn search_on_target_includes_identity() {
        let params = pf_generic();
        let t = make_target(&params, ProtocolKind::Pf).unwrap();
        let found = derive_correction(&t, &t).unwrap();
        assert!(found.successes.iter().any(PauliString::is_identity));
    }

    #[test]
    fn search_is_ambiguous_at_degenerate_params() {
        let params = TargetParams::pf(0.6, 0.8, 1.0, 0.0).unwrap();
        let v = verify_protocol(ProtocolKind::Pf, &params).unwrap();
        assert!(v.iter().all(BranchVerification::passed));
        assert!(v[0].search.as_ref().unwrap().is_ambiguous());
    }

    #[test]
    fn search_reports_no_correction() {
        let kind = ProtocolKind::Pf;
        let t = make_target(&pf_generic(), kind).unwrap();
        let other = make_target(
            &TargetParams::pf(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 1.0, 0.0).unwrap(),
            kind,
        )
        .unwrap();
        assert_eq!(derive_correction(&other, &t), Err(Error::NoCorrection));
    }

    #[test]
    fn protocol_names_parse() {
        assert_eq!("PF".parse::<ProtocolKind>().unwrap(), ProtocolKind::Pf);
        assert!("xy".parse::<ProtocolKind>().is_err());
        assert_eq!(ProtocolKind::from_code(1), Some(ProtocolKind::Tb));
    }
}
