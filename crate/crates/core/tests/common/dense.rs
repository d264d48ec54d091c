//! Independent dense model of every element: each element becomes an explicit
//! matrix between the canonical bases of its input and output schemas, built
//! from the element's defining formula rather than from the library's sparse
//! rewrite code.

use std::collections::HashMap;

use hyperrsp::optics::Element;
use hyperrsp::state::{BasisLabel, DofKind, DofValue, Photon, Pol, Schema, StateVector};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn reg_index(schema: &Schema, photon: Photon, kind: DofKind) -> Option<usize> {
    schema
        .registers(photon)
        .iter()
        .position(|r| r.kind() == kind)
}

/// 2×2 Pauli-type matrices, columns are images of (first, second).
fn pauli_matrix(op: hyperrsp::PauliOp) -> [[f64; 2]; 2] {
    use hyperrsp::PauliOp::*;
    match op {
        I => [[1.0, 0.0], [0.0, 1.0]],
        X => [[0.0, 1.0], [1.0, 0.0]],
        IY => [[0.0, 1.0], [-1.0, 0.0]],
        Z => [[1.0, 0.0], [0.0, -1.0]],
    }
}

/// Image of one photon part under `e`, as (part, coefficient) pairs. An empty
/// result means the input column lies outside the element's domain.
fn image(
    e: &Element,
    input: &Schema,
    output: &Schema,
    part: &[DofValue],
) -> Vec<(Vec<DofValue>, Complex64)> {
    let photon = e.photon();
    let idx = |k| reg_index(input, photon, k);
    let pol_of = |p: &[DofValue]| p[idx(DofKind::Polarization).unwrap()].pol().unwrap();
    let path_of = |p: &[DofValue]| idx(DofKind::Path).map(|i| p[i].path().unwrap());
    let with = |k: DofKind, v: DofValue| {
        let mut p = part.to_vec();
        p[idx(k).unwrap()] = v;
        p
    };
    let keep = || vec![(part.to_vec(), c(1.0))];
    match e {
        Element::Rtheta { theta, paths, .. } => {
            if let Some(ps) = paths {
                if !ps.contains(&path_of(part).unwrap()) {
                    return keep();
                }
            }
            let (co, si) = (theta.cos(), theta.sin());
            let h = with(DofKind::Polarization, DofValue::Polarization(Pol::H));
            let v = with(DofKind::Polarization, DofValue::Polarization(Pol::V));
            match pol_of(part) {
                Pol::H => vec![(h, c(co)), (v, c(si))],
                Pol::V => vec![(h, c(-si)), (v, c(co))],
            }
        }
        Element::Ubs {
            paths: (p1, p2),
            phi,
            ..
        } => {
            let (co, si) = ((phi / 2.0).cos(), (phi / 2.0).sin());
            let a = with(DofKind::Path, DofValue::Path(*p1));
            let b = with(DofKind::Path, DofValue::Path(*p2));
            match path_of(part) {
                Some(p) if p == *p1 => vec![(a, c(co)), (b, c(si))],
                Some(p) if p == *p2 => vec![(a, c(-si)), (b, c(co))],
                _ => keep(),
            }
        }
        Element::Wdm { routing, .. } => {
            let f = part[idx(DofKind::Frequency).unwrap()].freq().unwrap();
            let path = routing.iter().find(|(rf, _)| *rf == f).unwrap().1;
            vec![(
                insert_value(output, photon, part, DofKind::Path, DofValue::Path(path)),
                c(1.0),
            )]
        }
        Element::Fs { correlation, .. } => {
            let f_i = idx(DofKind::Frequency).unwrap();
            let p = path_of(part).unwrap();
            let expected = correlation.iter().find(|(cp, _)| *cp == p).unwrap().1;
            if part[f_i].freq().unwrap() != expected {
                return Vec::new();
            }
            let mut out = part.to_vec();
            out.remove(f_i);
            vec![(out, c(1.0))]
        }
        Element::Pbs { routing, .. } => {
            let (p, pol) = (path_of(part).unwrap(), pol_of(part));
            match routing
                .iter()
                .find(|r| r.input == p && r.polarization == pol)
            {
                Some(r) => vec![(with(DofKind::Path, DofValue::Path(r.output)), c(1.0))],
                None => keep(),
            }
        }
        Element::Pc { paths, time, .. } => {
            let t = part[idx(DofKind::TimeBin).unwrap()].delay().unwrap();
            if paths.contains(&path_of(part).unwrap()) && t == *time {
                vec![(
                    with(
                        DofKind::Polarization,
                        DofValue::Polarization(pol_of(part).flipped()),
                    ),
                    c(1.0),
                )]
            } else {
                keep()
            }
        }
        Element::Ui {
            paths, long_arm, ..
        } => {
            let t = part[idx(DofKind::TimeBin).unwrap()].delay().unwrap();
            if paths.contains(&path_of(part).unwrap()) && pol_of(part) == *long_arm {
                vec![(with(DofKind::TimeBin, DofValue::TimeBin(t + 1)), c(1.0))]
            } else {
                keep()
            }
        }
        Element::Hwp { paths, .. } => {
            if paths.contains(&path_of(part).unwrap()) {
                vec![(
                    with(
                        DofKind::Polarization,
                        DofValue::Polarization(pol_of(part).flipped()),
                    ),
                    c(1.0),
                )]
            } else {
                keep()
            }
        }
        Element::Bs {
            inputs, outputs, ..
        } => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let o1 = with(DofKind::Path, DofValue::Path(outputs.0));
            let o2 = with(DofKind::Path, DofValue::Path(outputs.1));
            match path_of(part) {
                Some(p) if p == inputs.0 => vec![(o1, c(r)), (o2, c(r))],
                Some(p) if p == inputs.1 => vec![(o1, c(r)), (o2, c(-r))],
                _ => keep(),
            }
        }
        Element::Pauli { correction, .. } => {
            let mut terms = vec![(part.to_vec(), c(1.0))];
            for (kind, op) in correction.factors {
                let i = idx(kind).unwrap();
                let domain = input.registers(photon)[i].domain().to_vec();
                let m = pauli_matrix(op);
                terms = terms
                    .into_iter()
                    .flat_map(|(p, amp)| {
                        let j = domain.iter().position(|v| *v == p[i]).unwrap();
                        let domain = domain.clone();
                        (0..2).filter(move |r| m[*r][j] != 0.0).map(move |r| {
                            let mut q = p.clone();
                            q[i] = domain[r];
                            (q, amp * m[r][j])
                        })
                    })
                    .collect();
            }
            terms
        }
        Element::AddPathRegister { path, .. } => {
            vec![(
                insert_value(output, photon, part, DofKind::Path, DofValue::Path(*path)),
                c(1.0),
            )]
        }
        Element::DropUniformRegister { kind, .. } => {
            let mut out = part.to_vec();
            out.remove(idx(*kind).unwrap());
            vec![(out, c(1.0))]
        }
    }
}

fn insert_value(
    output: &Schema,
    photon: Photon,
    part: &[DofValue],
    kind: DofKind,
    v: DofValue,
) -> Vec<DofValue> {
    let at = reg_index(output, photon, kind).unwrap();
    let mut out = part.to_vec();
    out.insert(at, v);
    out
}

/// Dense matrix of `e` from `input`'s canonical basis to `output`'s.
pub fn element_matrix(e: &Element, input: &Schema, output: &Schema) -> CMatrix {
    let in_basis = input.basis();
    let out_basis = output.basis();
    let out_pos: HashMap<&BasisLabel, usize> =
        out_basis.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let photon = e.photon();
    let mut m = CMatrix::zeros(out_basis.len(), in_basis.len());
    for (j, label) in in_basis.iter().enumerate() {
        for (part, coeff) in image(e, input, output, label.photon(photon)) {
            let mut next = label.clone();
            *next.photon_mut(photon) = part;
            let i = *out_pos
                .get(&next)
                .unwrap_or_else(|| panic!("{} leaves the output basis", e.kind_name()));
            m[(i, j)] += coeff;
        }
    }
    m
}

/// Input columns on which the element acts as an isometry: all of them except
/// for FS (correlated labels only) and register drops (one fixed value).
pub fn domain_columns(e: &Element, input: &Schema, support: &StateVector) -> Vec<usize> {
    let basis = input.basis();
    match e {
        Element::DropUniformRegister { photon, kind } => {
            let i = reg_index(input, *photon, *kind).unwrap();
            let value = support
                .iter()
                .next()
                .map(|(l, _)| l.photon(*photon)[i])
                .unwrap();
            (0..basis.len())
                .filter(|j| basis[*j].photon(*photon)[i] == value)
                .collect()
        }
        Element::Fs { .. } => {
            let out = e.output_schema(input).unwrap();
            (0..basis.len())
                .filter(|j| !image(e, input, &out, basis[*j].photon(e.photon())).is_empty())
                .collect()
        }
        _ => (0..basis.len()).collect(),
    }
}

/// max |(U†U − I)_{jk}| over the given columns.
pub fn isometry_defect(m: &CMatrix, cols: &[usize]) -> f64 {
    let sub = m.select_columns(cols);
    let g = sub.adjoint() * &sub;
    let id = CMatrix::identity(cols.len(), cols.len());
    (g - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Every entry is 0 or ±1 and every column has exactly one nonzero entry.
pub fn is_signed_permutation(m: &CMatrix, cols: &[usize]) -> bool {
    cols.iter().all(|&j| {
        let col = m.column(j);
        let nz: Vec<&Complex64> = col.iter().filter(|z| z.norm() > 1e-15).collect();
        nz.len() == 1 && (nz[0].re.abs() - 1.0).abs() < 1e-15 && nz[0].im == 0.0
    })
}

/// Amplitudes of `s` over its schema's canonical basis, read label by label.
pub fn dense_of(s: &StateVector) -> CVector {
    let basis = s.schema().basis();
    CVector::from_iterator(basis.len(), basis.iter().map(|l| s.amplitude(l)))
}

/// ½(|HH⟩+|VV⟩)(|xx⟩+|yy⟩) written out directly over `schema`'s basis.
pub fn hyper_bell_dense(schema: &Schema) -> CVector {
    let basis = schema.basis();
    CVector::from_iterator(
        basis.len(),
        basis
            .iter()
            .map(|l| if l.a == l.b { c(0.5) } else { c(0.0) }),
    )
}

pub fn max_deviation(a: &CVector, b: &CVector) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
