//! Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit if
//! any criterion failed. Each criterion is isolated with `catch_unwind`, so
//! a panic in one does not hide the others.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use gwloc_core::algebra::rational::{q, qf, Q};
use gwloc_core::algebra::TruncSeries;
use gwloc_core::gkm::{with_respecialization, InsertionClass, LocalSpace, Sign};
use gwloc_core::graphs::star_configs;
use gwloc_core::hodge::{genus1_npoint, genus1_npoint_oracle, h_graded, h_poly};
use gwloc_core::localization::{
    compute_invariant, correction_sum, hypersurface_bracket_in_beta, invariant_genus0,
    invariant_genus1, invariant_reduced_genus1, modified_lambda_colored_sum,
    modified_lambda_integral, modified_root_bracket, svr_check_star, InvariantKind,
};
use gwloc_core::mirror::{correction_series, genus1_series, reduced_genus1_series, MirrorContext};
use gwloc_core::modular::{
    all_checks, check_delta_identity_with, check_eta_quotient_with, check_f1_modular_with,
    check_j_identity_with, qtau_series,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

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

/// Conifold closed forms for `d ≤ 4` at two specializations.
fn conifold_closed_forms() -> Outcome {
    for seed in [1u64, 2] {
        let ls = ok(LocalSpace::projective(2, &[1, 1], Sign::Concave, seed))?;
        for d in 1..=4u32 {
            let di = d as i64;
            let d3 = di * di * di;
            let got = (
                ok(invariant_genus0(&ls, d))?,
                ok(invariant_genus1(&ls, d, &[]))?,
                ok(invariant_reduced_genus1(&ls, d, &[]))?,
                ok(correction_sum(&ls, d))?,
            );
            let want = (
                qf(1, d3),
                qf(1, 12 * di),
                qf(di * di - 1, 12 * d3),
                qf(1, 12 * d3),
            );
            ensure(got == want, || {
                format!("seed {seed} d={d}: {got:?} != {want:?}")
            })?;
        }
    }
    Ok("N0, N1, reduced and correction for d ≤ 4 at seeds 1, 2".into())
}

/// Per-star standard = reduced + correction over lines, planes and 3-spaces.
fn per_star_identity() -> Outcome {
    let mut stars = 0usize;
    for n in 2..=4usize {
        for a in splittings(n as u32) {
            for seed in 0..5u64 {
                let (count, _) = ok(with_respecialization(n, &a, Sign::Concave, seed, |ls| {
                    let x = InsertionClass::hyperplane_power(&ls.spec.alpha, 1);
                    let mut count = 0usize;
                    for d in 1..=3 {
                        for marks in 0..=2 {
                            for star in star_configs(&ls.space, d, marks)
                                .into_iter()
                                .filter(|s| s.r() <= 4)
                            {
                                let mu = num_traits::pow(x.at(star.root).clone(), star.marks);
                                let c = svr_check_star(ls, &star, &mu)?;
                                if !c.equal {
                                    return Err(gwloc_core::Error::Inconsistent(format!(
                                        "n={n} a={a:?} seed={seed} {star:?}: {c:?}"
                                    )));
                                }
                                count += 1;
                            }
                        }
                    }
                    Ok(count)
                }))?;
                stars += count;
            }
        }
    }
    ensure(stars > 1000, || format!("only {stars} stars"))?;
    Ok(format!(
        "{stars} stars, n = 2..4, all splittings, |J| ≤ 2, d ≤ 3, 5 seeds"
    ))
}

fn graph_vs_series(n: usize, a: &[u32], dmax: u32, seed: u64) -> Result<(), String> {
    let ctx = ok(MirrorContext::new(n, a, dmax as usize))?;
    let series = ok(genus1_series(&ctx))?;
    for d in 1..=dmax {
        let (v, _) = ok(with_respecialization(n, a, Sign::Concave, seed, |ls| {
            invariant_genus1(ls, d, &[])
        }))?;
        ensure(&v == series.coeff(d as usize), || {
            format!("n={n} d={d}: {v} vs {}", series.coeff(d as usize))
        })?;
    }
    Ok(())
}

/// Closed mirror formula against localization for local P² and local P³.
fn mirror_formula() -> Outcome {
    graph_vs_series(3, &[3], 3, 1)?;
    graph_vs_series(4, &[4], 2, 1)?;
    Ok("local P² d ≤ 3 and local P³ d ≤ 2 agree with the closed series".into())
}

/// Graph-route correction against the residue series, and the series difference.
fn correction_routes() -> Outcome {
    for (n, a, dmax) in [(2usize, vec![1u32, 1], 4u32), (3, vec![3], 2)] {
        let ctx = ok(MirrorContext::new(n, &a, dmax as usize))?;
        let series = ok(correction_series(&ctx))?;
        let ls = ok(LocalSpace::projective(n, &a, Sign::Concave, 1))?;
        for d in 1..=dmax {
            let graph = q(24) * ok(correction_sum(&ls, d))?;
            ensure(&graph == series.coeff(d as usize), || {
                format!("n={n} d={d}: 24·{graph} mismatch")
            })?;
        }
    }
    for (n, a) in [
        (2usize, vec![1u32, 1]),
        (3, vec![3]),
        (4, vec![4]),
        (4, vec![2, 2]),
        (4, vec![2, 1, 1]),
    ] {
        let ctx = ok(MirrorContext::new(n, &a, 8))?;
        let diff = &ok(genus1_series(&ctx))? - &ok(reduced_genus1_series(&ctx))?;
        let corr = ok(correction_series(&ctx))?.scale(&q(24).recip());
        ensure(diff.first_mismatch(&corr).is_none(), || {
            format!("n={n} a={a:?}: series differ")
        })?;
    }
    Ok("24·graph correction = residue series; full − reduced = correction/24 to q^8".into())
}

fn weight_vectors(r: usize, salt: u64) -> Vec<Vec<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97 + salt * 31 + r as u64);
    (0..5)
        .map(|_| {
            (0..r)
                .map(|_| {
                    let num = match rng.gen_range(-9i64..=9) {
                        0 => 7,
                        x => x,
                    };
                    qf(num, rng.gen_range(1i64..=5))
                })
                .collect()
        })
        .collect()
}

/// Graded pieces of `H_r`, its top part against the moduli oracle, and the
/// zero-weight recursion.
fn h_identities() -> Outcome {
    for r in 1..=6 {
        for w in weight_vectors(r, 0) {
            let g = h_graded(&w);
            let s: Q = w.iter().sum();
            ensure(g.coeff(r - 1) * q(24) == -num_traits::pow(s, r - 1), || {
                format!("degree r-1 part, r={r}")
            })?;
            for p in 0..r.saturating_sub(1) {
                ensure(g.coeff(p).is_zero(), || {
                    format!("degree {p} part nonzero, r={r}")
                })?;
            }
        }
    }
    for r in 1..=5 {
        for w in weight_vectors(r, 1) {
            ensure(genus1_npoint(&w) == ok(genus1_npoint_oracle(&w))?, || {
                format!("top part vs oracle, r={r}")
            })?;
        }
    }
    let mut recursions = 0;
    for r in 2..=6 {
        for mut w in weight_vectors(r, 2) {
            w[r - 1] = Q::zero();
            let s: Q = w[..r - 1].iter().sum();
            let (Ok(lhs), Ok(rhs)) = (h_poly(&w), h_poly(&w[..r - 1])) else {
                continue;
            };
            ensure(lhs == s * rhs, || format!("zero-weight recursion, r={r}"))?;
            recursions += 1;
        }
    }
    ensure(recursions >= 20, || {
        format!("only {recursions} recursion cases were nondegenerate")
    })?;
    Ok(format!("vanishing and degree r−1 parts (r ≤ 6), top part vs oracle (r ≤ 5), {recursions} recursions"))
}

/// Hypersurface identity and regularity of the modified bracket in β.
fn convex_checks() -> Outcome {
    let (mut stars, mut evaluated, mut skipped) = (0, 0, 0);
    for n in 3..=5usize {
        for seed in 0..5u64 {
            let ls = ok(LocalSpace::projective(n, &[n as u32], Sign::Convex, seed))?;
            for d in 1..=3 {
                for star in star_configs(&ls.space, d, 0)
                    .into_iter()
                    .filter(|s| s.r() <= 3)
                {
                    let (l, r) = (
                        ok(modified_lambda_colored_sum(&ls, &star))?,
                        ok(modified_lambda_integral(&ls, &star))?,
                    );
                    ensure(l == r, || format!("n={n} seed={seed} {star:?}: {l} != {r}"))?;
                    stars += 1;
                }
            }
            for star in star_configs(&ls.space, 2, 0)
                .into_iter()
                .filter(|s| s.r() <= 3)
            {
                let (full, _) = ok(hypersurface_bracket_in_beta(&ls, &star))?;
                ensure(full.order_at_zero().is_none_or(|o| o >= 0), || {
                    format!("pole at β = 0: {star:?}")
                })?;
                // The bracket has genuine poles at β = ω_s; a specialization
                // landing on one is degenerate for this evaluation only.
                let beta = ls.eps(star.root)[0].clone();
                match full.eval(&beta) {
                    Ok(v) => {
                        ensure(v == ok(modified_root_bracket(&ls, &star))?, || {
                            format!("{star:?}")
                        })?;
                        evaluated += 1;
                    }
                    Err(e) if e.is_degenerate() => skipped += 1,
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
    }
    ensure(evaluated > 10 * skipped, || {
        format!("{skipped} degenerate evaluations vs {evaluated}")
    })?;
    Ok(format!(
        "{stars} stars with r ≤ 3 at 5 seeds; brackets regular at β = 0, {evaluated} evaluated ({skipped} degenerate)"
    ))
}

/// The four modular identities to order 12, each sensitive to a perturbed coordinate.
fn modularity() -> Outcome {
    const ORDER: usize = 12;
    let checks = ok(all_checks(ORDER))?;
    ensure(checks.len() == 4 && checks.iter().all(|c| c.pass), || {
        format!("{checks:?}")
    })?;
    let perturbed = |k: usize| {
        let mut qt: TruncSeries = qtau_series(ORDER + 2);
        let c = qt.coeff(k) + q(1);
        qt.set_coeff(k, c);
        qt
    };
    for k in [2usize, 7, ORDER] {
        let qt = perturbed(k);
        let guards = [
            ok(check_delta_identity_with(&qt, ORDER))?,
            ok(check_j_identity_with(&qt, ORDER))?,
            ok(check_eta_quotient_with(&qt, ORDER))?,
            ok(check_f1_modular_with(&qt, ORDER))?,
        ];
        ensure(guards.iter().all(|c| !c.pass), || {
            format!("perturbation at q^{k} went unnoticed")
        })?;
    }
    Ok("Δ, j, η-quotient and potential identities through q^12; all detect perturbations".into())
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

/// Seed independence, worker-count independence and byte-identical CLI output.
fn determinism() -> Outcome {
    let run = || {
        [
            InvariantKind::N0,
            InvariantKind::N1,
            InvariantKind::N1Reduced,
            InvariantKind::Correction,
        ]
        .iter()
        .map(|&k| {
            compute_invariant(3, &[2, 1], Sign::Concave, 3, k, &[], &[1, 2, 3]).map(|r| r.to_json())
        })
        .collect::<Result<Vec<_>, _>>()
    };
    let (one, four) = (ok(in_pool(1, run))?, ok(in_pool(4, run))?);
    ensure(one == four, || {
        "library results depend on the worker count".into()
    })?;
    let cli = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_gwloc"))
            .args([
                "--n",
                "3",
                "--a",
                "3",
                "--dmax",
                "3",
                "--seeds",
                "1,2",
                "--format",
                "json",
                "invariants",
            ])
            .env("GWLOC_THREADS", threads)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (cli("1")?, cli("4")?);
    ensure(a.status.success() && b.status.success(), || {
        "CLI run failed".into()
    })?;
    ensure(a.stdout == b.stdout, || {
        "CLI output differs between 1 and 4 workers".into()
    })?;
    Ok(format!(
        "seeds 1..3 agree; 1 vs 4 workers identical; CLI output {} bytes identical",
        a.stdout.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("conifold closed forms", conifold_closed_forms),
        ("per-star identity", per_star_identity),
        ("mirror formula vs localization", mirror_formula),
        ("correction cross-route", correction_routes),
        ("H_r identities", h_identities),
        ("convex hypersurface", convex_checks),
        ("modularity", modularity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail}", k + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
