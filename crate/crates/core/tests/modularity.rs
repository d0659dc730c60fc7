//! Modular identities of the local-plane genus-one potential, with
//! mutation guards showing each comparison is sensitive to `𝔮(q)`.

use gwloc_core::algebra::rational::{q, qf, Q};
use gwloc_core::algebra::TruncSeries;
use gwloc_core::mirror::{genus1_series, to_mirror_coordinate, MirrorContext};
use gwloc_core::modular::{
    all_checks, check_delta_identity_with, check_eta_quotient_with, check_f1_modular_with,
    check_j_identity_with, delta_series, e4_series, f1_with_log_q, j_series, qtau_series,
};

const ORDER: usize = 12;

fn perturbed(k: usize) -> TruncSeries {
    let mut qt = qtau_series(ORDER + 2);
    let c = qt.coeff(k) + Q::from_integer(1.into());
    qt.set_coeff(k, c);
    qt
}

#[test]
fn classical_expansions() {
    // Ramanujan's τ(n), σ_3 and the j-invariant.
    let tau = [1i64, -24, 252, -1472, 4830, -6048, -16744];
    let d = delta_series(7);
    for (k, t) in tau.iter().enumerate() {
        assert_eq!(d.coeff(k + 1), &q(*t));
    }
    let e4 = e4_series(3);
    assert_eq!(
        (e4.coeff(1), e4.coeff(2), e4.coeff(3)),
        (&q(240), &q(2160), &q(6720))
    );
    let j = j_series(2);
    assert_eq!(
        (j.coeff(-1), j.coeff(0), j.coeff(1), j.coeff(2)),
        (q(1), q(744), q(196884), q(21493760))
    );
}

#[test]
fn modular_coordinate_leading_terms() {
    // S_1 = -6 (1/2 + 1/3) = -5, so 𝔮 = -q e^{-15 q + …} = -q + 15 q² + ….
    let qt = qtau_series(3);
    assert_eq!(qt.coeff(0), &q(0));
    assert_eq!(qt.coeff(1), &q(-1));
    assert_eq!(qt.coeff(2), &q(15));
}

#[test]
fn all_identities_hold_through_order_twelve() {
    for check in all_checks(ORDER).unwrap() {
        assert!(check.pass, "{check:?}");
        assert_eq!(check.order, ORDER as i64);
        assert_eq!(check.first_mismatch, None);
    }
}

#[test]
fn delta_identity_detects_a_perturbed_coordinate() {
    for k in [2usize, 5, ORDER] {
        let c = check_delta_identity_with(&perturbed(k), ORDER).unwrap();
        assert!(!c.pass, "k={k}");
        assert_eq!(c.first_mismatch, Some(k as i64), "k={k}");
    }
}

#[test]
fn j_identity_detects_a_perturbed_coordinate() {
    for k in [2usize, 6, ORDER] {
        let c = check_j_identity_with(&perturbed(k), ORDER).unwrap();
        assert!(!c.pass, "k={k}");
    }
}

#[test]
fn eta_quotient_detects_a_perturbed_coordinate() {
    for k in [2usize, 7, ORDER] {
        let c = check_eta_quotient_with(&perturbed(k), ORDER).unwrap();
        assert!(!c.pass, "k={k}");
    }
}

#[test]
fn potential_comparison_detects_a_perturbed_coordinate() {
    for k in [2usize, 9, ORDER] {
        let c = check_f1_modular_with(&perturbed(k), ORDER).unwrap();
        assert!(!c.pass, "k={k}");
    }
}

#[test]
fn too_short_coordinate_is_rejected() {
    assert!(check_j_identity_with(&qtau_series(ORDER), ORDER).is_err());
    let mut flat = qtau_series(ORDER + 2);
    flat.set_coeff(1, Q::from_integer(0.into()));
    assert!(check_delta_identity_with(&flat, ORDER).is_err());
}

#[test]
fn potential_in_the_mirror_coordinate_is_the_genus_one_series() {
    let order = 6;
    let ctx = MirrorContext::new(3, &[3], order).unwrap();
    let in_q = to_mirror_coordinate(&ctx, &f1_with_log_q(order).unwrap()).unwrap();
    let series = genus1_series(&ctx).unwrap();
    for d in 1..=order {
        assert_eq!(in_q.coeff(d), series.coeff(d), "d={d}");
    }
    assert_eq!(in_q.coeff(1), &qf(1, 4));
}
