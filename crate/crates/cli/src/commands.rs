//! The subcommands. Each returns a report; the caller turns failed checks
//! into exit code 1.

use std::path::Path;

use anyhow::Context;
use gwloc_core::algebra::rational::q;
use gwloc_core::gkm::{with_respecialization, InsertionClass, LocalSpace, Sign};
use gwloc_core::graphs::{
    enumerate_one_loop, enumerate_rooted_trees, enumerate_trees, star_configs, DecoratedStar,
};
use gwloc_core::hodge::{exponent_vectors, genus1_npoint, genus1_npoint_oracle, genus1_psi_oracle};
use gwloc_core::localization::{compute_invariant, svr_check_star, SvrCheck};
use gwloc_core::mirror::{correction_series, genus1_series, reduced_genus1_series, MirrorContext};
use gwloc_core::modular::all_checks;
use gwloc_core::{fmt_decimal, fmt_q, Error, InvariantKind, Route, TruncSeries, Q};

use crate::config::RunConfig;
use crate::report::{Check, HodgeRow, Report, ValueRow};

/// Seeded graph-sum value, or a failed check when seeds disagree.
fn seeded(
    cfg: &RunConfig,
    d: u32,
    kind: InvariantKind,
) -> anyhow::Result<Result<(Q, Vec<u64>), Check>> {
    let (n, a) = (cfg.n.unwrap(), cfg.a.as_deref().unwrap());
    match compute_invariant(n, a, cfg.sign, d, kind, &[], &cfg.seeds) {
        Ok(r) => Ok(Ok((r.value, r.seeds))),
        Err(Error::Inconsistent(msg)) => Ok(Err(Check::new(
            format!("seed-agreement {} d={d}", kind.name()),
            false,
            msg,
        ))),
        Err(e) => Err(e).with_context(|| format!("{} at degree {d}", kind.name())),
    }
}

pub fn invariants(cfg: RunConfig, dump_graphs: Option<&Path>) -> anyhow::Result<Report<ValueRow>> {
    let kinds: &[InvariantKind] = match cfg.sign {
        Sign::Concave => &[
            InvariantKind::N0,
            InvariantKind::N1,
            InvariantKind::N1Reduced,
            InvariantKind::Correction,
        ],
        Sign::Convex => &[InvariantKind::N0, InvariantKind::N1],
    };
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for d in 1..=cfg.dmax {
        let mut values = Vec::new();
        for &kind in kinds {
            match seeded(&cfg, d, kind)? {
                Ok((v, seeds)) => {
                    rows.push(ValueRow::new(
                        d,
                        kind,
                        &v,
                        Route::GraphSum,
                        seeds,
                        cfg.decimal,
                    ));
                    values.push(Some(v));
                }
                Err(check) => {
                    checks.push(check);
                    values.push(None);
                }
            }
        }
        if let [_, Some(n1), Some(red), Some(corr)] = values.as_slice() {
            let gap = n1 - red - corr;
            checks.push(Check::new(
                format!("standard-reduced-correction d={d}"),
                gap == q(0),
                format!("N1 - N1_reduced - correction = {}", fmt_q(&gap)),
            ));
        }
        checks.push(Check::new(
            format!("seed-independence d={d}"),
            values.iter().all(Option::is_some),
            format!("{} seeds", cfg.seeds.len()),
        ));
    }
    if let Some(path) = dump_graphs {
        dump(&cfg, path)?;
    }
    Ok(Report {
        config: cfg,
        rows,
        checks,
    })
}

fn dump(cfg: &RunConfig, path: &Path) -> anyhow::Result<()> {
    let ls = LocalSpace::projective(
        cfg.n.unwrap(),
        cfg.a.as_deref().unwrap(),
        cfg.sign,
        cfg.seeds[0],
    )?;
    let mut out = Vec::new();
    for d in 1..=cfg.dmax {
        out.push(serde_json::json!({
            "degree": d,
            "trees": enumerate_trees(&ls.space, d, 0),
            "rooted_trees": enumerate_rooted_trees(&ls.space, d, 0),
            "one_loop": enumerate_one_loop(&ls.space, d, 0),
        }));
    }
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Nonincreasing splittings of `n` into positive parts.
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

fn describe(star: &DecoratedStar, c: &SvrCheck) -> String {
    let edges = star
        .edges
        .iter()
        .map(|(j, d)| format!("({j},{d})"))
        .collect::<Vec<_>>()
        .join("");
    format!(
        "star root={} edges={edges} marks={}: lhs={} reduced={} correction={}",
        star.root,
        star.marks,
        fmt_q(&c.lhs),
        fmt_q(&c.reduced),
        fmt_q(&c.correction)
    )
}

pub fn svr_verify(cfg: RunConfig, inject_fault: bool) -> anyhow::Result<Report<ValueRow>> {
    let n = cfg.n.unwrap();
    let bundles = match &cfg.a {
        Some(a) => vec![a.clone()],
        None => splittings(n as u32),
    };
    let mut checks = Vec::new();
    for a in &bundles {
        for &seed in &cfg.seeds {
            for d in 1..=cfg.dmax {
                let ((count, failure), used) =
                    with_respecialization(n, a, Sign::Concave, seed, |ls| {
                        let x = InsertionClass::hyperplane_power(&ls.spec.alpha, 1);
                        let mut count = 0usize;
                        for marks in 0..=cfg.marks {
                            for star in star_configs(&ls.space, d, marks)
                                .into_iter()
                                .filter(|s| s.r() <= cfg.rmax)
                            {
                                let mu = power(x.at(star.root), star.marks);
                                let mut c = svr_check_star(ls, &star, &mu)?;
                                if inject_fault {
                                    c.equal = c.lhs == &c.reduced - &c.correction;
                                }
                                count += 1;
                                if !c.equal {
                                    return Ok((count, Some(describe(&star, &c))));
                                }
                            }
                        }
                        Ok((count, None))
                    })?;
                let a_str = a.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                let name = format!("stars n={n} a={a_str} seed={seed} d={d}");
                let detail = match &failure {
                    Some(f) => f.clone(),
                    None => format!("{count} stars equal (specialization seed {used})"),
                };
                checks.push(Check::new(name, failure.is_none(), detail));
            }
        }
    }
    Ok(Report {
        config: cfg,
        rows: Vec::new(),
        checks,
    })
}

fn power(x: &Q, e: usize) -> Q {
    (0..e).fold(q(1), |acc, _| acc * x)
}

pub fn mirror_verify(cfg: RunConfig) -> anyhow::Result<Report<ValueRow>> {
    let (n, a) = (cfg.n.unwrap(), cfg.a.clone().unwrap());
    let ctx = MirrorContext::new(n, &a, cfg.qorder)?;
    let full = genus1_series(&ctx)?;
    let reduced = reduced_genus1_series(&ctx)?;
    let corr = correction_series(&ctx)?.scale(&q(24).recip());
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let series: [(InvariantKind, &TruncSeries); 3] = [
        (InvariantKind::N1, &full),
        (InvariantKind::N1Reduced, &reduced),
        (InvariantKind::Correction, &corr),
    ];
    for d in 1..=cfg.dmax {
        for (kind, s) in series {
            let closed = s.coeff(d as usize).clone();
            match seeded(&cfg, d, kind)? {
                Ok((v, seeds)) => {
                    let equal = v == closed;
                    let detail = format!(
                        "graph-sum {} vs generating-function {}",
                        fmt_q(&v),
                        fmt_q(&closed)
                    );
                    rows.push(ValueRow::new(
                        d,
                        kind,
                        &v,
                        Route::GraphSum,
                        seeds,
                        cfg.decimal,
                    ));
                    checks.push(Check::new(format!("{} d={d}", kind.name()), equal, detail));
                }
                Err(check) => checks.push(check),
            }
            rows.push(ValueRow::new(
                d,
                kind,
                &closed,
                Route::GeneratingFunction,
                Vec::new(),
                cfg.decimal,
            ));
        }
    }
    let diff = &full - &reduced;
    let mismatch = diff.first_mismatch(&corr);
    let detail = match mismatch {
        None => format!("through q^{}", cfg.qorder),
        Some(k) => format!("first mismatch at q^{k}"),
    };
    checks.push(Check::new(
        "full-minus-reduced-series",
        mismatch.is_none(),
        detail,
    ));
    Ok(Report {
        config: cfg,
        rows,
        checks,
    })
}

pub fn modularity_verify(cfg: RunConfig) -> anyhow::Result<Report<ValueRow>> {
    let checks = all_checks(cfg.qorder)?
        .into_iter()
        .map(|c| {
            let detail = match c.first_mismatch {
                None => format!("through q^{}", c.order),
                Some(k) => format!("first mismatch at q^{k}"),
            };
            Check::new(c.name, c.pass, detail)
        })
        .collect();
    Ok(Report {
        config: cfg,
        rows: Vec::new(),
        checks,
    })
}

pub fn hodge_table(cfg: RunConfig) -> anyhow::Result<Report<HodgeRow>> {
    let digits = cfg.decimal;
    let row = |r: usize, exponents: Vec<u32>, v: &Q, source: &'static str| HodgeRow {
        r,
        exponents,
        value: fmt_q(v),
        source,
        decimal: digits.map(|k| fmt_decimal(v, k)),
    };
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for r in 1..=cfg.rmax {
        for e in exponent_vectors(r, r as u32)
            .into_iter()
            .filter(|e| e.windows(2).all(|w| w[0] >= w[1]))
        {
            let v = genus1_psi_oracle(&e)?;
            rows.push(row(r, e, &v, "string-dilaton"));
        }
        for (label, w) in [
            ("ones", vec![q(1); r]),
            ("ramp", (1..=r as i64).map(q).collect::<Vec<_>>()),
        ] {
            let from_h = genus1_npoint(&w);
            let from_oracle = genus1_npoint_oracle(&w)?;
            rows.push(row(
                r,
                Vec::new(),
                &from_h,
                if label == "ones" {
                    "F_r(1,...,1)"
                } else {
                    "F_r(1,2,...,r)"
                },
            ));
            checks.push(Check::new(
                format!("F_r r={r} at {label}"),
                from_h == from_oracle,
                format!("H_r {} vs oracle {}", fmt_q(&from_h), fmt_q(&from_oracle)),
            ));
        }
    }
    Ok(Report {
        config: cfg,
        rows,
        checks,
    })
}
