//! Hypergeometric series, the `M` operator tower and the closed genus-one
//! formulas, checked against factorial closed forms and hand expansions.

use gwloc_core::algebra::rational::{factorial_q, q, qf, Q};
use gwloc_core::algebra::TruncSeries;
use gwloc_core::mirror::{
    correction_series, genus1_series, hyper_i, hyper_i_tilde, log_r_shifted, mirror_coordinate,
    mirror_invert, mirror_map, mirror_map_closed, q1_asymptotics, reduced_genus1_series, series_f,
    series_f0_closed, series_l, series_mu, series_phi, series_r, MirrorContext,
};
use gwloc_core::Error;
use num_traits::{One, Zero};

/// Spaces exercised throughout: conifold, local P², local P³,
/// `O(-2)⊕O(-2) → P³` and `O(-2)⊕O(-1)⊕O(-1) → P³`.
fn spaces() -> Vec<(usize, Vec<u32>)> {
    vec![
        (2, vec![1, 1]),
        (3, vec![3]),
        (4, vec![4]),
        (4, vec![2, 2]),
        (4, vec![2, 1, 1]),
    ]
}

/// `Σ_d (Π_k (a_k d)!) / (d!)^n q^d`, the `w = 0` value of `ℱ_0`.
fn factorial_i0(n: usize, a: &[u32], order: usize) -> TruncSeries {
    TruncSeries::from_fn('q', order, |d| {
        let num: Q = a
            .iter()
            .map(|&ak| factorial_q(ak as u64 * d as u64))
            .product();
        num / num_traits::pow(factorial_q(d as u64), n)
    })
}

#[test]
fn conifold_r_is_the_expected_rational_function() {
    // R̃ = Σ_d q^d w² / (w + d)² for the conifold, modulo w⁴.
    let ctx = MirrorContext::new(2, &[1, 1], 5).unwrap();
    let r = series_r(&ctx).unwrap();
    assert_eq!(r.coeff(0, 0), &Q::one());
    for d in 1..=5i64 {
        assert!(r.coeff(d as usize, 0).is_zero() && r.coeff(d as usize, 1).is_zero());
        assert_eq!(r.coeff(d as usize, 2), &qf(1, d * d));
        assert_eq!(r.coeff(d as usize, 3), &qf(-2, d * d * d));
    }
}

#[test]
fn mirror_map_matches_factorial_formula() {
    // l = 1: f = Σ (-1)^{nd} (nd)! / (d (d!)^n) q^d.
    for n in [3usize, 4, 5] {
        let ctx = MirrorContext::new(n, &[n as u32], 5).unwrap();
        let f = mirror_map(&ctx).unwrap();
        assert_eq!(f, mirror_map_closed(&ctx));
        for d in 1..=5u64 {
            let sign = if (n as u64 * d).is_multiple_of(2) {
                Q::one()
            } else {
                -Q::one()
            };
            let expected = sign * factorial_q(n as u64 * d)
                / (q(d as i64) * num_traits::pow(factorial_q(d), n));
            assert_eq!(f.coeff(d as usize), &expected, "n={n} d={d}");
        }
    }
    let p2 = MirrorContext::new(3, &[3], 3).unwrap();
    assert_eq!(mirror_map(&p2).unwrap().coeff(1), &q(-6));
    let p3 = MirrorContext::new(4, &[4], 3).unwrap();
    assert_eq!(mirror_map(&p3).unwrap().coeff(1), &q(24));
    // Several negative summands: no mirror-map correction.
    let ctx = MirrorContext::new(4, &[2, 2], 4).unwrap();
    assert!((0..=4).all(|d| mirror_map(&ctx).unwrap().coeff(d).is_zero()));
}

#[test]
fn mirror_coordinate_inverts() {
    let ctx = MirrorContext::new(3, &[3], 8).unwrap();
    let f = mirror_map(&ctx).unwrap();
    let big_q = mirror_coordinate(&f).unwrap();
    let inv = mirror_invert(&f).unwrap();
    let round_trip = big_q.compose(&inv).unwrap();
    let id = TruncSeries::from_fn('Q', 8, |k| if k == 1 { Q::one() } else { Q::zero() });
    assert_eq!(round_trip.with_var('Q'), id);
    // Q = q e^{-6q + …} = q - 6q² + …, so q(Q) = Q + 6Q² + ….
    assert_eq!(big_q.coeff(2), &q(-6));
    assert_eq!(inv.coeff(2), &q(6));
}

#[test]
fn m_tower_reaches_the_closed_zeroth_series() {
    for (n, a) in spaces() {
        let ctx = MirrorContext::new(n, &a, 5).unwrap();
        let via_m = series_f(&ctx, 0).unwrap();
        let closed = series_f0_closed(&ctx, ctx.w_mod).unwrap();
        assert_eq!(via_m, closed, "n={n} a={a:?}");
    }
}

#[test]
fn m_tower_is_periodic() {
    for (n, a) in spaces() {
        let ctx = MirrorContext::new(n, &a, 4).unwrap();
        let f0 = series_f(&ctx, 0).unwrap();
        let fn_ = series_f(&ctx, n as i64).unwrap();
        assert_eq!(fn_, f0, "n={n} a={a:?}");
    }
}

#[test]
fn hypergeometric_values_at_w_zero() {
    for (n, a) in spaces() {
        let ctx = MirrorContext::new(n, &a, 5).unwrap();
        assert_eq!(
            hyper_i_tilde(&ctx, 0).unwrap(),
            factorial_i0(n, &a, 5),
            "n={n} a={a:?}"
        );
        for p in 0..a.len() {
            assert_eq!(hyper_i(&ctx, p).unwrap(), TruncSeries::one('q', 5));
        }
    }
}

#[test]
fn first_nontrivial_i_is_one_plus_derivative_of_mirror_map() {
    // For one negative summand I_1 = 1 + q f'(q).
    for n in [3usize, 4] {
        let ctx = MirrorContext::new(n, &[n as u32], 5).unwrap();
        let f = mirror_map(&ctx).unwrap();
        let expected = &TruncSeries::one('q', 5) + &f.euler();
        assert_eq!(hyper_i(&ctx, 1).unwrap(), expected, "n={n}");
    }
    let ctx = MirrorContext::new(3, &[3], 3).unwrap();
    let i1 = hyper_i(&ctx, 1).unwrap();
    assert_eq!(
        (0..=3).map(|k| i1.coeff(k).clone()).collect::<Vec<_>>(),
        vec![q(1), q(-6), q(90), q(-1680)]
    );
}

#[test]
fn asymptotic_series_closed_forms() {
    let ctx = MirrorContext::new(2, &[1, 1], 3).unwrap();
    // L = (1 - q)^{-1/2}; μ = Σ L_d/d q^d.
    let l = series_l(&ctx).unwrap();
    assert_eq!(l.coeff(1), &qf(1, 2));
    assert_eq!(l.coeff(2), &qf(3, 8));
    let mu = series_mu(&ctx).unwrap();
    assert_eq!(mu.coeff(1), &qf(1, 2));
    assert_eq!(mu.coeff(2), &qf(3, 16));
    let phi = series_phi(&ctx, -2).unwrap();
    assert_eq!(phi.coeff(1), &qf(-1, 4));
    assert!(series_phi(&ctx, 1).is_err());
    // Local P²: L = (1 - 27q)^{-1/3}, Φ_{-1,0} = L⁰ = 1.
    let p2 = MirrorContext::new(3, &[3], 3).unwrap();
    assert_eq!(series_l(&p2).unwrap().coeff(1), &q(9));
    assert_eq!(series_phi(&p2, -1).unwrap(), TruncSeries::one('q', 3));
}

#[test]
fn large_w_behaviour_of_the_first_coefficient() {
    // Conifold, p = -2: w²/((w+1)² - w²) = w/2 - 1/4 + O(1/w).
    let ctx = MirrorContext::new(2, &[1, 1], 3).unwrap();
    assert_eq!(q1_asymptotics(&ctx, -2).unwrap(), (qf(1, 2), qf(-1, 4)));
    for (n, a) in spaces() {
        let ctx = MirrorContext::new(n, &a, 3).unwrap();
        let mu1 = series_mu(&ctx).unwrap().coeff(1).clone();
        for p in -(a.len() as i64)..=0 {
            let (lin, cst) = q1_asymptotics(&ctx, p).unwrap();
            assert_eq!(lin, mu1, "n={n} a={a:?} p={p}");
            assert_eq!(
                &cst,
                series_phi(&ctx, p).unwrap().coeff(1),
                "n={n} a={a:?} p={p}"
            );
        }
    }
}

#[test]
fn shifted_logarithm_starts_at_w_to_the_l() {
    for (n, a) in spaces() {
        let ctx = MirrorContext::new(n, &a, 5).unwrap();
        assert!(log_r_shifted(&ctx).is_ok(), "n={n} a={a:?}");
    }
}

#[test]
fn conifold_correction_and_reduced_series() {
    let ctx = MirrorContext::new(2, &[1, 1], 6).unwrap();
    let corr = correction_series(&ctx).unwrap();
    let reduced = reduced_genus1_series(&ctx).unwrap();
    let full = genus1_series(&ctx).unwrap();
    for d in 1..=6i64 {
        let d3 = d * d * d;
        assert_eq!(corr.coeff(d as usize), &qf(2, d3), "d={d}");
        assert_eq!(reduced.coeff(d as usize), &qf(d * d - 1, 12 * d3), "d={d}");
        assert_eq!(full.coeff(d as usize), &qf(1, 12 * d), "d={d}");
    }
}

#[test]
fn local_plane_closed_genus_one_series() {
    let ctx = MirrorContext::new(3, &[3], 4).unwrap();
    let full = genus1_series(&ctx).unwrap();
    let expected = [qf(1, 4), qf(-3, 8), qf(-23, 3), qf(3437, 16)];
    for (d, v) in expected.iter().enumerate() {
        assert_eq!(full.coeff(d + 1), v, "d={}", d + 1);
    }
}

#[test]
fn closed_formulas_require_calabi_yau() {
    let ctx = MirrorContext::new(3, &[2], 3).unwrap();
    assert!(matches!(genus1_series(&ctx), Err(Error::NotCalabiYau(_))));
    assert!(matches!(
        reduced_genus1_series(&ctx),
        Err(Error::NotCalabiYau(_))
    ));
}

#[test]
fn full_minus_reduced_series_is_the_weighted_correction() {
    for (n, a) in spaces() {
        let ctx = MirrorContext::new(n, &a, 8).unwrap();
        let diff = &genus1_series(&ctx).unwrap() - &reduced_genus1_series(&ctx).unwrap();
        let corr = correction_series(&ctx).unwrap().scale(&q(24).recip());
        assert_eq!(diff, corr, "n={n} a={a:?}");
    }
}
