mod common;

use common::tables::{corrected, overlap_sqr, table, target};
use common::{bob_amplitudes, deviation_up_to_phase, generic_params, sampled_params};
use hyperrsp::optics::apply_pauli;
use hyperrsp::state::Photon;
use hyperrsp::{
    correction_table, derive_correction, make_target, outcome_registry, run_protocol,
    verify_protocol, PauliString, ProtocolKind,
};

#[test]
fn transcribed_tables_are_self_consistent() {
    for kind in ProtocolKind::ALL {
        for p in sampled_params(200) {
            for row in table(kind) {
                let f = overlap_sqr(&corrected(row, kind, &p), &target(kind, &p));
                assert!((f - 1.0).abs() < 1e-12, "{kind} {}: {f}", row.outcome);
            }
        }
    }
}

#[test]
fn collapsed_states_match_tables() {
    for kind in ProtocolKind::ALL {
        for p in sampled_params(100) {
            let reports = run_protocol(kind, &p).unwrap();
            assert_eq!(reports.len(), table(kind).len());
            for (report, row) in reports.iter().zip(table(kind)) {
                assert_eq!(kind.outcome_name(report.outcome), row.outcome);
                let pre = report.bob_state_pre.as_ref().unwrap();
                let dev =
                    deviation_up_to_phase(&bob_amplitudes(kind, pre), &row.bob_state(kind, &p));
                assert!(dev < 1e-10, "{kind} {}: deviation {dev}", row.outcome);
            }
        }
    }
}

#[test]
fn correction_table_matches_reference_rows() {
    for kind in ProtocolKind::ALL {
        for (outcome, row) in outcome_registry(kind).into_iter().zip(table(kind)) {
            let expected =
                PauliString::pol_and(row.correction.0, kind.second_dof(), row.correction.1);
            assert_eq!(
                correction_table(kind, outcome).unwrap(),
                expected,
                "{kind} {}",
                row.outcome
            );
        }
    }
}

#[test]
fn exhaustive_search_recovers_each_row_uniquely() {
    let p = generic_params();
    for kind in ProtocolKind::ALL {
        let t = make_target(&p, kind).unwrap();
        for (report, row) in run_protocol(kind, &p).unwrap().iter().zip(table(kind)) {
            let search = derive_correction(report.bob_state_pre.as_ref().unwrap(), &t).unwrap();
            let expected =
                PauliString::pol_and(row.correction.0, kind.second_dof(), row.correction.1);
            assert_eq!(
                search.unique(),
                Some(expected),
                "{kind} {}: {:?}",
                row.outcome,
                search.successes
            );
        }
    }
}

#[test]
fn corrected_states_reach_target() {
    for kind in ProtocolKind::ALL {
        for p in sampled_params(100) {
            let t = make_target(&p, kind).unwrap();
            for report in run_protocol(kind, &p).unwrap() {
                let pre = report.bob_state_pre.unwrap();
                let post = apply_pauli(&pre, Photon::B, report.correction).unwrap();
                let f = hyperrsp::fidelity(&post, &t).unwrap();
                assert!(f > 1.0 - 1e-10);
                assert!((report.fidelity_post.unwrap() - f).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn branch_probabilities_are_uniform() {
    for kind in ProtocolKind::ALL {
        let n = outcome_registry(kind).len() as f64;
        for p in sampled_params(100) {
            let reports = run_protocol(kind, &p).unwrap();
            let total: f64 = reports.iter().map(|r| r.probability).sum();
            assert!((total - 1.0).abs() < 1e-10);
            for r in reports {
                assert!(
                    (r.probability - 1.0 / n).abs() < 1e-12,
                    "{kind}: {}",
                    r.probability
                );
            }
        }
    }
}

#[test]
fn verification_passes_at_axis_aligned_params() {
    for kind in ProtocolKind::ALL {
        for (a0, b0, a, b) in [
            (1.0, 0.0, 1.0, 0.0),
            (0.0, 1.0, 0.0, 1.0),
            (0.0, -1.0, -1.0, 0.0),
        ] {
            let p = hyperrsp::TargetParams::for_protocol(kind, (a0, b0), (a, b)).unwrap();
            for v in verify_protocol(kind, &p).unwrap() {
                assert!(v.report.succeeded(), "{kind} {p:?}");
                assert!(v.table_matches_search());
            }
        }
    }
}
