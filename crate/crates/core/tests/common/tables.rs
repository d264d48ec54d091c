//! Reference detection tables of both protocols, transcribed as data: for each outcome of
//! photon A, the collapsed state of photon B as a product
//! (h|H⟩ + v|V⟩)(x|first⟩ + y|second⟩) and the local correction.

use hyperrsp::state::TargetParams;
use hyperrsp::{PauliOp, ProtocolKind};

pub struct Row {
    /// `"<pol>,<path>"` as printed by the library, e.g. `"V,kp4"`.
    pub outcome: &'static str,
    pub pol: fn(f64, f64) -> (f64, f64),
    pub second: fn(f64, f64) -> (f64, f64),
    pub correction: (PauliOp, PauliOp),
}

fn same(a: f64, b: f64) -> (f64, f64) {
    (a, b)
}
fn minus(a: f64, b: f64) -> (f64, f64) {
    (a, -b)
}
fn swapped(a: f64, b: f64) -> (f64, f64) {
    (b, a)
}
fn swapped_minus(a: f64, b: f64) -> (f64, f64) {
    (b, -a)
}
fn neg_first(a: f64, b: f64) -> (f64, f64) {
    (-a, b)
}
fn neg_swapped(a: f64, b: f64) -> (f64, f64) {
    (-b, a)
}

use PauliOp::{I, IY, X, Z};

pub const TABLE_PF: [Row; 4] = [
    Row {
        outcome: "H,a1",
        pol: minus,
        second: minus,
        correction: (Z, Z),
    },
    Row {
        outcome: "H,a2",
        pol: minus,
        second: swapped,
        correction: (Z, X),
    },
    Row {
        outcome: "V,a1",
        pol: swapped,
        second: minus,
        correction: (X, Z),
    },
    Row {
        outcome: "V,a2",
        pol: swapped,
        second: swapped,
        correction: (X, X),
    },
];

pub const TABLE_TB: [Row; 8] = [
    Row {
        outcome: "H,kp1",
        pol: swapped,
        second: swapped,
        correction: (X, X),
    },
    Row {
        outcome: "H,kp2",
        pol: minus,
        second: same,
        correction: (Z, I),
    },
    Row {
        outcome: "H,kp3",
        pol: minus,
        second: neg_first,
        correction: (Z, Z),
    },
    Row {
        outcome: "H,kp4",
        pol: swapped,
        second: swapped_minus,
        correction: (X, IY),
    },
    Row {
        outcome: "V,kp1",
        pol: minus,
        second: swapped,
        correction: (Z, X),
    },
    Row {
        outcome: "V,kp2",
        pol: swapped,
        second: same,
        correction: (X, I),
    },
    Row {
        outcome: "V,kp3",
        pol: swapped,
        second: minus,
        correction: (X, Z),
    },
    Row {
        outcome: "V,kp4",
        pol: minus,
        second: neg_swapped,
        correction: (Z, IY),
    },
];

pub fn table(kind: ProtocolKind) -> &'static [Row] {
    match kind {
        ProtocolKind::Pf => &TABLE_PF,
        ProtocolKind::Tb => &TABLE_TB,
    }
}

impl Row {
    /// Amplitudes in the order (H,x), (H,y), (V,x), (V,y).
    pub fn bob_state(&self, kind: ProtocolKind, p: &TargetParams) -> [f64; 4] {
        let (a0, b0) = p.polarization();
        let (a, b) = p.second(kind);
        let (h, v) = (self.pol)(a0, b0);
        let (x, y) = (self.second)(a, b);
        [h * x, h * y, v * x, v * y]
    }
}

/// (a0|H⟩+b0|V⟩)(a|x⟩+b|y⟩) in the same order.
pub fn target(kind: ProtocolKind, p: &TargetParams) -> [f64; 4] {
    let (a0, b0) = p.polarization();
    let (a, b) = p.second(kind);
    [a0 * a, a0 * b, b0 * a, b0 * b]
}

fn apply2(m: [[f64; 2]; 2], v: (f64, f64)) -> (f64, f64) {
    (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1)
}

/// The tabulated correction applied to the tabulated state, factor by factor.
pub fn corrected(row: &Row, kind: ProtocolKind, p: &TargetParams) -> [f64; 4] {
    let m = |op: PauliOp| match op {
        I => [[1.0, 0.0], [0.0, 1.0]],
        X => [[0.0, 1.0], [1.0, 0.0]],
        IY => [[0.0, 1.0], [-1.0, 0.0]],
        Z => [[1.0, 0.0], [0.0, -1.0]],
    };
    let (a0, b0) = p.polarization();
    let (a, b) = p.second(kind);
    let (h, v) = apply2(m(row.correction.0), (row.pol)(a0, b0));
    let (x, y) = apply2(m(row.correction.1), (row.second)(a, b));
    [h * x, h * y, v * x, v * y]
}

/// |⟨u|w⟩|² for real four-component vectors.
pub fn overlap_sqr(u: &[f64; 4], w: &[f64; 4]) -> f64 {
    let d: f64 = u.iter().zip(w).map(|(x, y)| x * y).sum();
    d * d
}

/// Largest componentwise gap after aligning `u` to `w` by a global sign.
pub fn phase_aligned_deviation(u: &[f64; 4], w: &[f64; 4]) -> f64 {
    let d: f64 = u.iter().zip(w).map(|(x, y)| x * y).sum();
    let sign = if d < 0.0 { -1.0 } else { 1.0 };
    u.iter()
        .zip(w)
        .map(|(x, y)| (sign * x - y).abs())
        .fold(0.0, f64::max)
}
