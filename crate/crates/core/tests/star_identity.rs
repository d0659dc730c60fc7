//! Per-star standard-versus-reduced identity, the two correction routes,
//! hand-evaluated star fixtures and homogeneity under weight scaling.

use gwloc_core::algebra::rational::{q, qf, Q};
use gwloc_core::gkm::{InsertionClass, LocalSpace, Sign, Specialization};
use gwloc_core::graphs::{star_configs, DecoratedStar};
use gwloc_core::localization::{
    colored_correction_contribution, eta_route, eta_tilde_route, reduced_root_contribution,
    root1_contribution, root_homogeneity, svr_check_star,
};
use num_traits::{One, Zero};

/// All ordered splittings of `n` into positive parts, as non-increasing tuples.
fn splittings(n: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=left.min(max)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn space(n: usize, a: &[u32], alpha: &[i64]) -> LocalSpace {
    let spec = Specialization::new(alpha.iter().map(|&x| q(x)).collect(), 0).unwrap();
    LocalSpace::from_spec(n, a, Sign::Concave, spec).unwrap()
}

#[test]
fn splittings_of_small_n() {
    assert_eq!(splittings(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    assert_eq!(splittings(4).len(), 5);
}

#[test]
fn per_star_identity_on_lines_planes_and_threefolds() {
    let mut checked = 0;
    for n in 2..=4usize {
        for a in splittings(n as u32) {
            for seed in 0..5u64 {
                let ls = LocalSpace::projective(n, &a, Sign::Concave, seed).unwrap();
                for d in 1..=3 {
                    for marks in 0..=2 {
                        for star in star_configs(&ls.space, d, marks) {
                            // Marks carry hyperplane classes; the identity is linear in μ.
                            let mu = InsertionClass::hyperplane_power(&ls.spec.alpha, 1)
                                .at(star.root)
                                .clone();
                            let mu = num_traits::pow(mu, star.marks);
                            let check = svr_check_star(&ls, &star, &mu).unwrap();
                            assert!(check.equal, "n={n} a={a:?} seed={seed} {star:?}: {check:?}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 1000, "only {checked} stars checked");
}

#[test]
fn conifold_degree_one_star_by_hand() {
    // α = (3, -2): prefactor ε² α_12 = 9·5, ω = 5, F_1(1/5) = 1/120,
    // [x](x - 3)²(x + 5) = -21, ∫λ_1/(ω - ψ) = 1/120.
    let ls = space(2, &[1, 1], &[3, -2]);
    let star = DecoratedStar::new(0, vec![(1, 1)], 0);
    let (pref, omega, e1) = (q(45), q(5), q(-21));
    let f1 = omega.recip() / q(24);
    let expected = &pref * &f1 / &omega - &e1 / (q(24) * &omega);
    assert_eq!(expected, qf(1, 4));
    let check = svr_check_star(&ls, &star, &Q::one()).unwrap();
    assert_eq!(check.lhs, expected);
    assert_eq!(check.reduced, Q::zero());
    assert_eq!(check.correction, expected);
}

#[test]
fn conifold_single_color_correction_by_hand() {
    // n + l - 1 - 2m = 1 for m = 1, so only p = 0, 1 contribute:
    // [x^{1-p}] (1 - 3x)²(1 + 5x) · [x^p] 1/(1 + 5x).
    let ls = space(2, &[1, 1], &[3, -2]);
    let star = DecoratedStar::new(0, vec![(1, 1)], 0);
    // (1 - 3x)²(1 + 5x) = 1 - x - 21x² + 45x³.
    let chern = [q(1), q(-1)];
    let block = [q(1), q(-5)];
    for p in 0..=1usize {
        let expected = &chern[1 - p] * &block[p];
        assert_eq!(
            colored_correction_contribution(&ls, &star, 1, p, &[]).unwrap(),
            expected,
            "p={p}"
        );
    }
    assert!(colored_correction_contribution(&ls, &star, 1, 2, &[])
        .unwrap()
        .is_zero());
    // Weight (-1)^m / 24m turns the sum into the correction bracket 1/4.
    let weighted: Q = -(0..=1).map(|p| &chern[1 - p] * &block[p]).sum::<Q>() / q(24);
    assert_eq!(weighted, qf(1, 4));
}

#[test]
fn colored_terms_outside_the_range_vanish() {
    let ls = space(3, &[3], &[2, -1, 7]);
    let star = DecoratedStar::new(0, vec![(1, 1), (2, 1)], 0);
    // n + l - 1 = 3, so 2m ≤ 3 forces m = 1 and p ≤ 1.
    for p in 0..=3 {
        assert!(colored_correction_contribution(&ls, &star, 2, p, &[])
            .unwrap()
            .is_zero());
    }
    assert!(colored_correction_contribution(&ls, &star, 1, 2, &[])
        .unwrap()
        .is_zero());
}

#[test]
fn simply_decorated_stars_have_no_reduced_part() {
    for (n, a) in [(3usize, vec![3u32]), (4, vec![2, 2]), (4, vec![4])] {
        let ls = LocalSpace::projective(n, &a, Sign::Concave, 11).unwrap();
        for star in star_configs(&ls.space, 3, 0)
            .into_iter()
            .filter(|s| s.is_simply_decorated())
        {
            assert!(
                reduced_root_contribution(&ls, &star, &[])
                    .unwrap()
                    .is_zero(),
                "{star:?}"
            );
        }
    }
}

#[test]
fn conifold_reduced_star_vanishes_only_in_degree_one() {
    let ls = space(2, &[1, 1], &[3, -2]);
    for d in 1..=4 {
        let star = DecoratedStar::new(0, vec![(1, d)], 0);
        let red = reduced_root_contribution(&ls, &star, &[]).unwrap();
        assert_eq!(red.is_zero(), d == 1, "d={d}");
    }
}

#[test]
fn eta_and_eta_tilde_routes_agree() {
    for (n, a) in [
        (2usize, vec![1u32, 1]),
        (3, vec![3]),
        (3, vec![2, 1]),
        (4, vec![2, 1, 1]),
    ] {
        let ls = LocalSpace::projective(n, &a, Sign::Concave, 21).unwrap();
        for marks in 0..=2 {
            for star in star_configs(&ls.space, 3, marks)
                .into_iter()
                .filter(|s| s.r() <= 3)
            {
                for m in 1..=star.r() {
                    assert_eq!(
                        eta_route(&ls, &star, m).unwrap(),
                        eta_tilde_route(&ls, &star, m).unwrap(),
                        "{star:?} m={m}"
                    );
                }
            }
        }
    }
}

#[test]
fn root_contribution_scales_with_its_homogeneity_degree() {
    let base = [3i64, -1, 8];
    let t = q(2);
    let ls = space(3, &[3], &base);
    let scaled = space(3, &[3], &base.map(|x| 2 * x));
    for star in star_configs(&ls.space, 3, 0) {
        let v = root1_contribution(&ls, &star, &Q::one()).unwrap();
        let w = root1_contribution(&scaled, &star, &Q::one()).unwrap();
        let h = root_homogeneity(&ls, star.r());
        let factor = if h >= 0 {
            num_traits::pow(t.clone(), h as usize)
        } else {
            num_traits::pow(t.recip(), (-h) as usize)
        };
        assert_eq!(w, v * factor, "{star:?}");
    }
}
