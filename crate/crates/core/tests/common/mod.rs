#![allow(dead_code)]

pub mod dense;
pub mod tables;

use hyperrsp::runtime::random_params;
use hyperrsp::state::{BasisLabel, DofValue, Freq, Pol, StateVector, TargetParams};
use hyperrsp::ProtocolKind;
use num_complex::Complex64;

/// Generic real parameters with no accidental symmetry.
pub fn generic_params() -> TargetParams {
    TargetParams::new(0.6, 0.8, 0.28, 0.96, 0.6, 0.8).unwrap()
}

/// `n` reproducible parameter sets covering all sign combinations.
pub fn sampled_params(n: u64) -> Vec<TargetParams> {
    (0..n).map(random_params).collect()
}

/// Bob's amplitudes read label by label in the order (H,x), (H,y), (V,x), (V,y).
pub fn bob_amplitudes(kind: ProtocolKind, s: &StateVector) -> [Complex64; 4] {
    let [x, y] = match kind {
        ProtocolKind::Pf => [DofValue::Frequency(Freq::W1), DofValue::Frequency(Freq::W2)],
        ProtocolKind::Tb => [DofValue::TimeBin(0), DofValue::TimeBin(1)],
    };
    let at = |p, v| {
        s.amplitude(&BasisLabel::new(
            Vec::new(),
            vec![DofValue::Polarization(p), v],
        ))
    };
    [at(Pol::H, x), at(Pol::H, y), at(Pol::V, x), at(Pol::V, y)]
}

/// Largest componentwise gap between `u` and the real vector `w` after
/// removing the global phase of `u` relative to `w`.
pub fn deviation_up_to_phase(u: &[Complex64; 4], w: &[f64; 4]) -> f64 {
    let d: Complex64 = u.iter().zip(w).map(|(x, y)| x * y).sum();
    let phase = if d.norm() > 0.0 {
        d.conj() / d.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    u.iter()
        .zip(w)
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max)
}
