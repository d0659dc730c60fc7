//! Localization contributions and graph-sum assembly.
//!
//! Edge and vertex contributions for `Tot(⊕ O(∓a_k) → P^{n-1})`, the
//! genus-one root in its standard, reduced and correction forms, the
//! per-star standard-versus-reduced identity, the four invariant families,
//! and the modified genus-one root for a Calabi–Yau hypersurface.
//!
//! Conventions used throughout (all checked by the test suite):
//!
//! * `ω_e = α_{𝔪(v), other end} / d(e)` from the vertex's point of view;
//! * the concave vertex prefactor is `Π_k ε_{i,k} · Π_{j≠i} α_{i,j}`, the
//!   convex one `Π_{j≠i} α_{i,j} / Π_k ε_{i,k}`;
//! * marks are `ψ`-free legs, so each contributes a factor `Σ 1/ω` at a
//!   vertex (string equation);
//! * refined tuples and colored partitions are ordered; the `1/(24m)`
//!   weights absorb the orderings.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::rational::{factorial_q, fmt_q, pow, product, q, qf, sign, sum, Q};
use crate::algebra::series::TruncSeries;
use crate::error::{Error, Result};
use crate::gkm::{with_respecialization, InsertionClass, InsertionSpec, LocalSpace, Sign};
use crate::graphs::{
    colored_partitions, enumerate_one_loop, enumerate_rooted_trees, enumerate_trees,
    refined_tuples, subsets, DecoratedStar, GraphClass, RefinedTuple,
};
use crate::hodge::{genus0_with_pulled_legs, genus1_lambda_integral, genus1_npoint, h_poly};

/// `ω = α_{i,j} / d`.
pub fn omega(ls: &LocalSpace, i: usize, j: usize, d: u32) -> Q {
    ls.alpha(i, j) / q(d as i64)
}

/// The weights `ω_s` of a star.
pub fn star_weights(ls: &LocalSpace, star: &DecoratedStar) -> Vec<Q> {
    star.edges
        .iter()
        .map(|&(j, d)| omega(ls, star.root, j, d))
        .collect()
}

fn nonzero(x: Q, what: &str) -> Result<Q> {
    if x.is_zero() {
        Err(Error::Degenerate(format!(
            "{what} vanishes at this specialization"
        )))
    } else {
        Ok(x)
    }
}

/// Genus-zero vertex prefactor at `P_i`: `Π ε · Π α` (concave) or
/// `Π α / Π ε` (convex).
pub fn vertex_prefactor(ls: &LocalSpace, i: usize) -> Result<Q> {
    let tangent = product(&ls.tangent_weights(i));
    let bundle = product(ls.eps(i));
    match ls.sign() {
        Sign::Concave => nonzero(tangent * bundle, "vertex prefactor"),
        Sign::Convex => Ok(tangent / nonzero(bundle, "bundle Euler class")?),
    }
}

/// `[x^1] Π_t (x + t)` over the Chern roots of `TX` at `P_i`.
pub fn chern_linear(ls: &LocalSpace, i: usize) -> Q {
    Poly::from_shifted_roots(&ls.chern_roots(i)).coeff(1)
}

/// `Π_t (1 + t x)` over the Chern roots of `TX` at `P_i`, to `order`.
pub fn chern_series(ls: &LocalSpace, i: usize, order: usize) -> TruncSeries {
    ls.chern_roots(i)
        .iter()
        .fold(TruncSeries::one('x', order), |acc, t| {
            &acc * &TruncSeries::linear_power('x', &Q::one(), t, 1, order).expect("linear factor")
        })
}

/// Contribution of an edge of degree `d` joining `P_i` and `P_j`.
///
/// Numerator (concave): `Π_k Π_{b=1}^{a_k d - 1} (-a_k α_j + b (α_j - α_i)/d)`;
/// numerator (convex): `Π_k Π_{b=0}^{a_k d} (a_k α_i + b (α_j - α_i)/d)`;
/// denominator: `d (d!/d^d)^2 (α_i - α_j)^d (α_j - α_i)^d
/// Π_{k≠i,j} Π_{b=0}^{d} (α_i - α_k + b (α_j - α_i)/d)`.
pub fn edge_contribution(ls: &LocalSpace, i: usize, j: usize, d: u32) -> Result<Q> {
    if d == 0 || !ls.space.adjacent(i, j) {
        return Err(Error::Precondition(format!(
            "edge ({i}, {j}) of degree {d} is not admissible"
        )));
    }
    let (ai, aj) = (ls.alpha_i(i), ls.alpha_i(j));
    let dq = q(d as i64);
    let step = (aj - ai) / &dq;
    let mut num = Q::one();
    for &ak in ls.degrees() {
        let akq = q(ak as i64);
        match ls.sign() {
            Sign::Concave => {
                for b in 1..(ak * d) {
                    num *= -(&akq * aj) + &step * q(b as i64);
                }
            }
            Sign::Convex => {
                for b in 0..=(ak * d) {
                    num *= &akq * ai + &step * q(b as i64);
                }
            }
        }
    }
    let dd = d as usize;
    let fact_ratio = factorial_q(d as u64) / num_traits::pow(dq.clone(), dd);
    let mut den = &dq
        * &fact_ratio
        * &fact_ratio
        * num_traits::pow(ai - aj, dd)
        * num_traits::pow(aj - ai, dd);
    for k in 0..ls.n() {
        if k == i || k == j {
            continue;
        }
        for b in 0..=d {
            den *= ai - ls.alpha_i(k) + &step * q(b as i64);
        }
    }
    Ok(num / nonzero(den, "edge denominator")?)
}

/// Genus-zero vertex at `P_i` with incident weights `omegas`, `n_marks`
/// ψ-free marks and insertion product `mu`:
/// `μ · prefactor^{|Edg|-1} · (Σ 1/ω)^{val-3} / Π ω`.
pub fn vertex0_contribution(
    ls: &LocalSpace,
    i: usize,
    omegas: &[Q],
    n_marks: usize,
    mu: &Q,
) -> Result<Q> {
    if omegas.is_empty() {
        return Err(Error::Precondition(
            "a vertex needs at least one edge".into(),
        ));
    }
    let pref = pow(
        &vertex_prefactor(ls, i)?,
        omegas.len() as i64 - 1,
        "vertex prefactor",
    )?;
    Ok(mu * pref * genus0_with_pulled_legs(omegas, n_marks)?)
}

fn inverse_sum(oms: &[Q]) -> Result<Q> {
    let mut s = Q::zero();
    for w in oms {
        s += nonzero(w.clone(), "star weight")?.recip();
    }
    Ok(s)
}

/// `∫_{M̄_{1,r}} 1 / Π(ω_k - ψ_k) = F_r(1/ω) / Π ω`.
pub fn genus1_psi_integral(oms: &[Q]) -> Result<Q> {
    let inv: Vec<Q> = oms
        .iter()
        .map(|w| nonzero(w.clone(), "star weight").map(|w| w.recip()))
        .collect::<Result<_>>()?;
    Ok(genus1_npoint(&inv) / product(oms))
}

/// The standard genus-one root bracket of a concave star, without the
/// common `prefactor^{r-1}` and insertion factors:
/// `(prefactor · ∫ 1/Π(ω-ψ) - e_1 · ∫ λ_1/Π(ω-ψ)) · (Σ 1/ω)^{|J|}`.
pub fn root_bracket(ls: &LocalSpace, star: &DecoratedStar) -> Result<Q> {
    let oms = star_weights(ls, star);
    let s = inverse_sum(&oms)?;
    let hodge = genus1_psi_integral(&oms)?;
    let lambda = genus1_lambda_integral(&oms)?;
    let bracket = vertex_prefactor(ls, star.root)? * hodge - chern_linear(ls, star.root) * lambda;
    Ok(bracket * num_traits::pow(s, star.marks))
}

/// The standard genus-one root contribution
/// `μ · prefactor^{r-1} · root_bracket` (the modified root for a convex
/// hypersurface).
pub fn root1_contribution(ls: &LocalSpace, star: &DecoratedStar, mu: &Q) -> Result<Q> {
    if ls.sign() == Sign::Convex {
        let s = inverse_sum(&star_weights(ls, star))?;
        return Ok(mu * modified_root_contribution(ls, star)? * num_traits::pow(s, star.marks));
    }
    let pref = pow(
        &vertex_prefactor(ls, star.root)?,
        star.r() as i64 - 1,
        "root prefactor",
    )?;
    Ok(mu * pref * root_bracket(ls, star)?)
}

/// One refined tuple's term in the reduced root bracket:
/// `((-1)^{m+|J'|+1} m^{|J'|} / 24m) · [y^{|U|-1}] ( Π_t (y - ω_U + t)
/// (y - ω_U)^{-(2m+1+|J'|-|U|)} Π_{k ∉ I_U} ω_k^{-1}
/// Π_{s ∉ U} (1/(y - ω_U) + σ_s)^{|I_s|+|K_s|-2} )`.
pub fn refined_tuple_term(
    ls: &LocalSpace,
    star: &DecoratedStar,
    tuple: &RefinedTuple,
) -> Result<Q> {
    let oms = star_weights(ls, star);
    let u_edges = tuple.u_edges();
    let w_u = oms[u_edges[0]].clone();
    let order = u_edges.len() - 1;
    let m = tuple.m as i64;
    let jp = tuple.j_prime.len() as i64;
    let one = Q::one();
    let mut ser = TruncSeries::one('y', order);
    for t in ls.chern_roots(star.root) {
        ser = &ser * &TruncSeries::linear_power('y', &(&t - &w_u), &one, 1, order)?;
    }
    let shift = -(2 * m + 1 + jp - u_edges.len() as i64);
    ser = &ser * &TruncSeries::linear_power('y', &-&w_u, &one, shift, order)?;
    for (k, w) in oms.iter().enumerate() {
        if !u_edges.contains(&k) {
            ser = ser.scale(&nonzero(w.clone(), "star weight")?.recip());
        }
    }
    for s in 0..tuple.m {
        if tuple.u.contains(&s) {
            continue;
        }
        let block = &tuple.i.blocks[s];
        let e = (block.len() + tuple.k.blocks[s].len()) as i64 - 2;
        let sigma = inverse_sum(&block.iter().map(|&k| oms[k].clone()).collect::<Vec<_>>())?;
        let c0 = Q::one() - &sigma * &w_u;
        ser = &ser * &TruncSeries::linear_power('y', &c0, &sigma, e, order)?;
        ser = &ser * &TruncSeries::linear_power('y', &-&w_u, &one, -e, order)?;
    }
    let coef = sign(m + jp + 1) * num_traits::pow(q(m), jp as usize) / q(24 * m);
    Ok(coef * ser.coeff(order))
}

/// Reduced root bracket for one split-off mark set `J'`.
pub fn reduced_root_contribution(
    ls: &LocalSpace,
    star: &DecoratedStar,
    j_prime: &[usize],
) -> Result<Q> {
    let mut total = Q::zero();
    for t in refined_tuples(star, j_prime) {
        total += refined_tuple_term(ls, star, &t)?;
    }
    Ok(total)
}

/// Reduced root bracket summed over all `J' ⊂ J`.
pub fn reduced_root_total(ls: &LocalSpace, star: &DecoratedStar) -> Result<Q> {
    let mut total = Q::zero();
    for jp in subsets(star.marks) {
        total += reduced_root_contribution(ls, star, &jp)?;
    }
    Ok(total)
}

/// `n + l - 1`, the complex dimension of the local space.
fn top_degree(ls: &LocalSpace) -> i64 {
    (ls.n() + ls.rank()) as i64 - 1
}

/// `Σ_{I ∈ 𝒜_m([r]), K ∈ 𝒜⁰_m(marks)} Π_s block_s(x)` to `order`, where a
/// block is `(1/Π_{I_s} ω)(x + σ_s)^{|I_s|+|K_s|-2}` (η route) or
/// `σ_s^{|K_s|} (1/Π_{I_s} ω)(x + σ_s)^{|I_s|-2}` (η̃ route, `tilde`).
fn colored_block_series(
    oms: &[Q],
    m: usize,
    marks: &[usize],
    order: usize,
    tilde: bool,
) -> Result<TruncSeries> {
    let edges: Vec<usize> = (0..oms.len()).collect();
    let mut acc = TruncSeries::zero('x', order);
    for i in colored_partitions(&edges, m, false) {
        for k in colored_partitions(marks, m, true) {
            let mut term = TruncSeries::one('x', order);
            for (is, ks) in i.blocks.iter().zip(&k.blocks) {
                let ws: Vec<Q> = is.iter().map(|&e| oms[e].clone()).collect();
                let sigma = inverse_sum(&ws)?;
                let mut scale = product(&ws).recip();
                let e = if tilde {
                    scale *= num_traits::pow(sigma.clone(), ks.len());
                    is.len() as i64 - 2
                } else {
                    (is.len() + ks.len()) as i64 - 2
                };
                term = &term
                    * &TruncSeries::linear_power('x', &sigma, &Q::one(), e, order)?.scale(&scale);
            }
            acc = &acc + &term;
        }
    }
    Ok(acc)
}

/// The `(m, p, q)` correction term of a star for the split `J'`:
/// `[x^q] Π(1 + t x) · [x^p] Σ_{I,K} Π_s (1/Π_{I_s} ω)(x + σ_s)^{|I_s|+|K_s|-2}`
/// with `p + q = n + l - 1 - |J'| - 2m`; zero outside that range.
pub fn colored_correction_contribution(
    ls: &LocalSpace,
    star: &DecoratedStar,
    m: usize,
    p: usize,
    j_prime: &[usize],
) -> Result<Q> {
    let total = top_degree(ls) - j_prime.len() as i64 - 2 * m as i64;
    if m == 0 || m > star.r() || total < 0 || p as i64 > total {
        return Ok(Q::zero());
    }
    let total = total as usize;
    let rest: Vec<usize> = (0..star.marks).filter(|j| !j_prime.contains(j)).collect();
    let block = colored_block_series(&star_weights(ls, star), m, &rest, p, false)?;
    Ok(chern_series(ls, star.root, total).coeff(total - p).clone() * block.coeff(p))
}

/// `Σ_p` of [`colored_correction_contribution`] at fixed `m` and `J'`.
pub fn colored_correction_summed(
    ls: &LocalSpace,
    star: &DecoratedStar,
    m: usize,
    j_prime: &[usize],
) -> Result<Q> {
    let total = top_degree(ls) - j_prime.len() as i64 - 2 * m as i64;
    if m == 0 || m > star.r() || total < 0 {
        return Ok(Q::zero());
    }
    let total = total as usize;
    let rest: Vec<usize> = (0..star.marks).filter(|j| !j_prime.contains(j)).collect();
    let block = colored_block_series(&star_weights(ls, star), m, &rest, total, false)?;
    Ok((&chern_series(ls, star.root, total) * &block)
        .coeff(total)
        .clone())
}

/// Correction bracket of a star:
/// `Σ_{J'} Σ_m ((-1)^{m+|J'|} m^{|J'|} / 24m) Σ_p Cont^{(m,p,·)}`.
pub fn correction_root_total(ls: &LocalSpace, star: &DecoratedStar) -> Result<Q> {
    let mut total = Q::zero();
    for jp in subsets(star.marks) {
        for m in 1..=star.r() {
            let k = jp.len();
            let coef = sign((m + k) as i64) * num_traits::pow(q(m as i64), k) / q(24 * m as i64);
            total += coef * colored_correction_summed(ls, star, m, &jp)?;
        }
    }
    Ok(total)
}

/// The η-route correction at fixed `m`, with the `J'` splits combined as
/// `Σ_{J'} (-1)^{|J'|} m^{|J'|} Σ_p Cont^{(m,p,·)}_{J'}`.
pub fn eta_route(ls: &LocalSpace, star: &DecoratedStar, m: usize) -> Result<Q> {
    let mut total = Q::zero();
    for jp in subsets(star.marks) {
        let k = jp.len();
        total += sign(k as i64)
            * num_traits::pow(q(m as i64), k)
            * colored_correction_summed(ls, star, m, &jp)?;
    }
    Ok(total)
}

/// The η̃-route correction at fixed `m`: all marks stay on the colored
/// components and carry pulled-back classes, each contributing `σ_s`.
pub fn eta_tilde_route(ls: &LocalSpace, star: &DecoratedStar, m: usize) -> Result<Q> {
    let total = top_degree(ls) - 2 * m as i64;
    if m == 0 || m > star.r() || total < 0 {
        return Ok(Q::zero());
    }
    let total = total as usize;
    let marks: Vec<usize> = (0..star.marks).collect();
    let block = colored_block_series(&star_weights(ls, star), m, &marks, total, true)?;
    Ok((&chern_series(ls, star.root, total) * &block)
        .coeff(total)
        .clone())
}

/// Outcome of the per-star standard-versus-reduced check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SvrCheck {
    /// Standard root contribution.
    #[serde(serialize_with = "ser_q")]
    pub lhs: Q,
    /// Reduced root contribution.
    #[serde(serialize_with = "ser_q")]
    pub reduced: Q,
    /// Correction root contribution.
    #[serde(serialize_with = "ser_q")]
    pub correction: Q,
    /// `lhs == reduced + correction`.
    pub equal: bool,
}

/// Evaluate the standard, reduced and correction root contributions of a
/// concave star (all including `μ · prefactor^{r-1}`) and compare.
pub fn svr_check_star(ls: &LocalSpace, star: &DecoratedStar, mu: &Q) -> Result<SvrCheck> {
    if ls.sign() != Sign::Concave {
        return Err(Error::Precondition(
            "the per-star identity is stated for concave bundles".into(),
        ));
    }
    let common = mu
        * pow(
            &vertex_prefactor(ls, star.root)?,
            star.r() as i64 - 1,
            "root prefactor",
        )?;
    let lhs = &common * root_bracket(ls, star)?;
    let reduced = &common * reduced_root_total(ls, star)?;
    let correction = &common * correction_root_total(ls, star)?;
    let equal = lhs == &reduced + &correction;
    Ok(SvrCheck {
        lhs,
        reduced,
        correction,
        equal,
    })
}

/// Which root contribution a genus-one graph sum uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootRule {
    /// Standard (or, for convex bundles, modified) genus-one root.
    Standard,
    /// Reduced root (refined tuples).
    Reduced,
    /// Correction root (colored partitions); one-loop graphs drop out.
    Correction,
}

fn marks_product(ins: &[InsertionClass], marks: &[usize], label: usize) -> Q {
    marks
        .iter()
        .fold(Q::one(), |acc, &j| acc * ins[j].at(label))
}

/// `(1/|Aut Γ|) Π_v Cont_v Π_e Cont_e` for one graph class.
pub fn graph_contribution(
    ls: &LocalSpace,
    class: &GraphClass,
    ins: &[InsertionClass],
    rule: RootRule,
) -> Result<Q> {
    let g = &class.graph;
    if g.root.is_none() && g.total_genus() == 1 && rule == RootRule::Correction {
        return Ok(Q::zero());
    }
    let mut c = Q::one();
    for &(a, b, d) in &g.edges {
        c *= edge_contribution(ls, g.labels[a], g.labels[b], d)?;
    }
    for v in 0..g.n_vertices() {
        let i = g.labels[v];
        let mu = marks_product(ins, &g.mark_indices_at(v), i);
        if g.root == Some(v) {
            let star = g.root_star().expect("rooted graph");
            c *= match rule {
                RootRule::Standard => root1_contribution(ls, &star, &mu)?,
                RootRule::Reduced | RootRule::Correction => {
                    if ls.sign() != Sign::Concave {
                        return Err(Error::Precondition(
                            "reduced and correction roots need a concave bundle".into(),
                        ));
                    }
                    let pref = pow(
                        &vertex_prefactor(ls, i)?,
                        star.r() as i64 - 1,
                        "root prefactor",
                    )?;
                    let bracket = if rule == RootRule::Reduced {
                        reduced_root_total(ls, &star)?
                    } else {
                        correction_root_total(ls, &star)?
                    };
                    mu * pref * bracket
                }
            };
        } else {
            let oms: Vec<Q> = g
                .incident(v)
                .iter()
                .map(|&(u, d)| omega(ls, i, g.labels[u], d))
                .collect();
            c *= vertex0_contribution(ls, i, &oms, g.marks_at(v), &mu)?;
        }
    }
    Ok(c / q(class.aut as i64))
}

/// Parallel exact sum of graph contributions (order-independent).
pub fn sum_contributions(
    ls: &LocalSpace,
    classes: &[GraphClass],
    ins: &[InsertionClass],
    rule: RootRule,
) -> Result<Q> {
    let terms: Vec<Q> = classes
        .par_iter()
        .map(|c| graph_contribution(ls, c, ins, rule))
        .collect::<Result<Vec<Q>>>()?;
    Ok(sum(&terms))
}

fn check_insertions(ls: &LocalSpace, ins: &[InsertionClass]) -> Result<()> {
    if ins.iter().any(|c| c.restrictions.len() != ls.n()) {
        return Err(Error::InvalidInput(
            "insertion restrictions must list every fixed point".into(),
        ));
    }
    Ok(())
}

/// `N_{0,d}`: the genus-zero tree sum.
pub fn invariant_genus0(ls: &LocalSpace, d: u32) -> Result<Q> {
    sum_contributions(
        ls,
        &enumerate_trees(&ls.space, d, 0),
        &[],
        RootRule::Standard,
    )
}

/// `N_{1,d}` (or `⟨μ_1, …⟩_{1,d}`): rooted trees plus one-loop graphs.
pub fn invariant_genus1(ls: &LocalSpace, d: u32, ins: &[InsertionClass]) -> Result<Q> {
    check_insertions(ls, ins)?;
    let trees = sum_contributions(
        ls,
        &enumerate_rooted_trees(&ls.space, d, ins.len()),
        ins,
        RootRule::Standard,
    )?;
    let loops = sum_contributions(
        ls,
        &enumerate_one_loop(&ls.space, d, ins.len()),
        ins,
        RootRule::Standard,
    )?;
    Ok(trees + loops)
}

/// `N⁰_{1,d}`: one-loop graphs plus rooted trees with reduced roots.
pub fn invariant_reduced_genus1(ls: &LocalSpace, d: u32, ins: &[InsertionClass]) -> Result<Q> {
    check_insertions(ls, ins)?;
    let trees = sum_contributions(
        ls,
        &enumerate_rooted_trees(&ls.space, d, ins.len()),
        ins,
        RootRule::Reduced,
    )?;
    let loops = sum_contributions(
        ls,
        &enumerate_one_loop(&ls.space, d, ins.len()),
        ins,
        RootRule::Standard,
    )?;
    Ok(trees + loops)
}

/// The correction term with insertions: rooted trees with correction roots.
pub fn correction_sum_with(ls: &LocalSpace, d: u32, ins: &[InsertionClass]) -> Result<Q> {
    check_insertions(ls, ins)?;
    sum_contributions(
        ls,
        &enumerate_rooted_trees(&ls.space, d, ins.len()),
        ins,
        RootRule::Correction,
    )
}

/// The correction term `N_{1,d} - N⁰_{1,d}` assembled from colored roots.
pub fn correction_sum(ls: &LocalSpace, d: u32) -> Result<Q> {
    correction_sum_with(ls, d, &[])
}

// ---------------------------------------------------------------------------
// Convex hypersurface: modified genus-one root.

/// `(β, c)` with `β = n α_i` and `c_j = α_i - α_j` (`j ≠ i`); requires the
/// convex single-hypersurface case `E = O(n)`.
fn hypersurface_data(ls: &LocalSpace, i: usize) -> Result<(Q, Vec<Q>)> {
    if ls.sign() != Sign::Convex || ls.degrees() != [ls.n() as u32] {
        return Err(Error::Precondition(
            "the modified root is defined for E = O(n) over P^{n-1}".into(),
        ));
    }
    let beta = nonzero(ls.eps(i)[0].clone(), "hypersurface weight")?;
    Ok((beta, ls.tangent_weights(i)))
}

/// `Σ_m ((-1)^m / 24m) Σ_I (1/Πω) [x^r] ( Π_j (x + c_j) Π_s (1 + σ_s x)^{|I_s|-2} / (x + β) )`,
/// the colored sum on the left of the hypersurface identity.
pub fn modified_lambda_colored_sum(ls: &LocalSpace, star: &DecoratedStar) -> Result<Q> {
    let (beta, cs) = hypersurface_data(ls, star.root)?;
    let oms = star_weights(ls, star);
    let r = oms.len();
    let base = cs.iter().fold(TruncSeries::one('x', r), |acc, c| {
        &acc * &TruncSeries::linear_power('x', c, &Q::one(), 1, r).expect("linear factor")
    });
    let resolvent = TruncSeries::linear_power('x', &beta, &Q::one(), -1, r)?;
    let base = &base * &resolvent;
    let edges: Vec<usize> = (0..r).collect();
    let mut total = Q::zero();
    for m in 1..=r {
        let mut acc = Q::zero();
        for part in colored_partitions(&edges, m, false) {
            let mut ser = base.clone();
            for block in &part.blocks {
                let sigma =
                    inverse_sum(&block.iter().map(|&k| oms[k].clone()).collect::<Vec<_>>())?;
                ser = &ser
                    * &TruncSeries::linear_power(
                        'x',
                        &Q::one(),
                        &sigma,
                        block.len() as i64 - 2,
                        r,
                    )?;
            }
            acc += ser.coeff(r);
        }
        total += sign(m as i64) * acc / q(24 * m as i64);
    }
    Ok(total / product(&oms))
}

/// `(Π c / β) ∫_{M̄_{1,r}} 1/Π(ω - ψ) + [x](Π(c_j - x)/(β - x)) · ∫ λ_1/Π(ω - ψ)`,
/// i.e. `∫ Π Λ^∨(c_j) / (Λ^∨(β) Π(ω - ψ))`.
pub fn modified_lambda_integral(ls: &LocalSpace, star: &DecoratedStar) -> Result<Q> {
    let (beta, cs) = hypersurface_data(ls, star.root)?;
    let oms = star_weights(ls, star);
    let pc = product(&cs);
    // [x] Π(c - x)/(β - x) = P_1/β + P_0/β² with P(x) = Π(c_j - x).
    let p = cs.iter().fold(Poly::one(), |acc, c| {
        &acc * &Poly::linear(c.clone(), -Q::one())
    });
    let linear = p.coeff(1) / &beta + p.coeff(0) / (&beta * &beta);
    Ok(&pc / &beta * genus1_psi_integral(&oms)? + linear * genus1_lambda_integral(&oms)?)
}

/// The `H_r` correction row:
/// `Π(c_j - β) / ((-β)^{r+1} Π ω) · H_r(-β/ω_1, …, -β/ω_r)`.
pub fn h_correction_row(ls: &LocalSpace, star: &DecoratedStar) -> Result<Q> {
    let (beta, cs) = hypersurface_data(ls, star.root)?;
    let oms = star_weights(ls, star);
    let r = oms.len() as i64;
    let shifted: Vec<Q> = cs.iter().map(|c| c - &beta).collect();
    let args: Vec<Q> = oms.iter().map(|w| -&beta / w).collect();
    Ok(
        product(&shifted) / (pow(&-&beta, r + 1, "hypersurface weight")? * product(&oms))
            * h_poly(&args)?,
    )
}

/// The modified root bracket `modified_lambda_integral + h_correction_row`.
pub fn modified_root_bracket(ls: &LocalSpace, star: &DecoratedStar) -> Result<Q> {
    Ok(modified_lambda_integral(ls, star)? + h_correction_row(ls, star)?)
}

/// The modified genus-one root contribution
/// `(Π c / β)^{r-1} · modified_root_bracket`.
pub fn modified_root_contribution(ls: &LocalSpace, star: &DecoratedStar) -> Result<Q> {
    let pref = pow(
        &vertex_prefactor(ls, star.root)?,
        star.r() as i64 - 1,
        "root prefactor",
    )?;
    Ok(pref * modified_root_bracket(ls, star)?)
}

/// The defining colored sum for the hypersurface root:
/// `Σ_m ((-1)^m/24m) Σ_I (1/Πω) [x^{n-2-2m}] ( Π_j (1 + c_j x)/(1 + β x) Π_s (x + σ_s)^{|I_s|-2} )`.
pub fn hypersurface_colored_sum(ls: &LocalSpace, star: &DecoratedStar) -> Result<Q> {
    let (beta, cs) = hypersurface_data(ls, star.root)?;
    let oms = star_weights(ls, star);
    let r = oms.len();
    let edges: Vec<usize> = (0..r).collect();
    let mut total = Q::zero();
    for m in 1..=r {
        let top = ls.n() as i64 - 2 - 2 * m as i64;
        if top < 0 {
            continue;
        }
        let top = top as usize;
        let mut base = cs.iter().fold(TruncSeries::one('x', top), |acc, c| {
            &acc * &TruncSeries::linear_power('x', &Q::one(), c, 1, top).expect("linear factor")
        });
        base = &base * &TruncSeries::linear_power('x', &Q::one(), &beta, -1, top)?;
        let mut acc = Q::zero();
        for part in colored_partitions(&edges, m, false) {
            let mut ser = base.clone();
            for block in &part.blocks {
                let sigma =
                    inverse_sum(&block.iter().map(|&k| oms[k].clone()).collect::<Vec<_>>())?;
                ser = &ser
                    * &TruncSeries::linear_power(
                        'x',
                        &sigma,
                        &Q::one(),
                        block.len() as i64 - 2,
                        top,
                    )?;
            }
            acc += ser.coeff(top);
        }
        total += sign(m as i64) * acc / q(24 * m as i64);
    }
    Ok(total / product(&oms))
}

/// The bracket of the hypersurface root (colored sum plus `H_r` row) as a
/// rational function of the bundle weight `β`, every other weight fixed.
/// Also returns the `H_r` row alone, which does have a pole at `β = 0`.
pub fn hypersurface_bracket_in_beta(
    ls: &LocalSpace,
    star: &DecoratedStar,
) -> Result<(RatFunc, RatFunc)> {
    let (_, cs) = hypersurface_data(ls, star.root)?;
    let oms = star_weights(ls, star);
    let r = oms.len();
    let pw = product(&oms);
    let edges: Vec<usize> = (0..r).collect();
    // Colored part: Σ_k P_{r-k} (-1)^k β^{-k-1} per partition.
    let mut colored = RatFunc::constant(Q::zero());
    let mut h_sum = RatFunc::constant(Q::zero());
    let base = cs.iter().fold(TruncSeries::one('x', r), |acc, c| {
        &acc * &TruncSeries::linear_power('x', c, &Q::one(), 1, r).expect("linear factor")
    });
    for m in 1..=r {
        let coef = sign(m as i64) / q(24 * m as i64);
        for part in colored_partitions(&edges, m, false) {
            let mut ser = base.clone();
            let mut h_term = RatFunc::constant(Q::one());
            for block in &part.blocks {
                let sigma =
                    inverse_sum(&block.iter().map(|&k| oms[k].clone()).collect::<Vec<_>>())?;
                let e = block.len() as i64 - 2;
                ser = &ser * &TruncSeries::linear_power('x', &Q::one(), &sigma, e, r)?;
                let lin = RatFunc::from_poly(Poly::linear(Q::one(), -sigma));
                h_term = &h_term
                    * &lin
                        .powi(e)
                        .map_err(|_| Error::Degenerate("1 - βσ vanishes identically".into()))?;
            }
            let mut poly = vec![Q::zero(); r + 1];
            for k in 0..=r {
                poly[r - k] = sign(k as i64) * ser.coeff(r - k);
            }
            let laurent = RatFunc::new(Poly::new(poly), Poly::monomial(r + 1, Q::one()))?;
            colored = &colored + &(&laurent * &RatFunc::constant(coef.clone()));
            h_sum = &h_sum + &(&h_term * &RatFunc::constant(coef.clone()));
        }
    }
    colored = &colored * &RatFunc::constant(pw.recip());
    let shifted = cs.iter().fold(Poly::one(), |acc, c| {
        &acc * &Poly::linear(c.clone(), -Q::one())
    });
    let minus_b_pow = RatFunc::from_poly(Poly::monomial(r + 1, sign(r as i64 + 1)));
    let h_row = &(&RatFunc::from_poly(shifted) * &h_sum) * &minus_b_pow.inv()?;
    let h_row = &h_row * &RatFunc::constant(pw.recip());
    Ok((&colored + &h_row, h_row))
}

// ---------------------------------------------------------------------------
// Seeded invariant results.

/// Which invariant a result holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InvariantKind {
    /// `N_{0,d}`.
    #[serde(rename = "N0")]
    N0,
    /// `N_{1,d}`.
    #[serde(rename = "N1")]
    N1,
    /// `N⁰_{1,d}`.
    #[serde(rename = "N1_reduced")]
    N1Reduced,
    /// `N_{1,d} - N⁰_{1,d}` from colored roots.
    #[serde(rename = "correction")]
    Correction,
    /// A genus-one invariant with primary insertions.
    #[serde(rename = "inserted")]
    Inserted,
}

impl InvariantKind {
    /// Name used in CSV/JSON.
    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::N0 => "N0",
            InvariantKind::N1 => "N1",
            InvariantKind::N1Reduced => "N1_reduced",
            InvariantKind::Correction => "correction",
            InvariantKind::Inserted => "inserted",
        }
    }
}

/// How a value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Localization graph sum.
    #[serde(rename = "graph-sum")]
    GraphSum,
    /// Hypergeometric generating function.
    #[serde(rename = "generating-function")]
    GeneratingFunction,
}

impl Route {
    /// Name used in CSV/JSON.
    pub fn name(self) -> &'static str {
        match self {
            Route::GraphSum => "graph-sum",
            Route::GeneratingFunction => "generating-function",
        }
    }
}

/// `{n, a, sign}` of the local space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceSummary {
    /// Number of homogeneous coordinates.
    pub n: usize,
    /// Bundle degrees.
    pub a: Vec<u32>,
    /// Concave or convex.
    pub sign: Sign,
}

/// An exact invariant with provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantResult {
    /// The local space.
    pub space: SpaceSummary,
    /// Curve degree.
    pub degree: u32,
    /// Which invariant.
    pub kind: InvariantKind,
    /// How it was computed.
    pub route: Route,
    /// The exact value.
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
    /// The specialization seeds that produced `value`.
    pub seeds: Vec<u64>,
}

impl InvariantResult {
    /// JSON form `{space, degree, kind, route, value, seeds}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Serialize a rational as `"p/q"`.
pub fn ser_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

/// Evaluate one invariant kind on a local space.
pub fn evaluate(ls: &LocalSpace, d: u32, kind: InvariantKind, ins: &[InsertionClass]) -> Result<Q> {
    match kind {
        InvariantKind::N0 => invariant_genus0(ls, d),
        InvariantKind::N1 | InvariantKind::Inserted => invariant_genus1(ls, d, ins),
        InvariantKind::N1Reduced => invariant_reduced_genus1(ls, d, ins),
        InvariantKind::Correction => correction_sum_with(ls, d, ins),
    }
}

/// Compute an invariant at every seed (respecializing on degeneracy) and
/// require the values to agree exactly.
pub fn compute_invariant(
    n: usize,
    a: &[u32],
    sign: Sign,
    d: u32,
    kind: InvariantKind,
    insertions: &[InsertionSpec],
    seeds: &[u64],
) -> Result<InvariantResult> {
    if seeds.is_empty() {
        return Err(Error::InvalidInput("at least one seed is required".into()));
    }
    let mut value: Option<Q> = None;
    let mut used = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let (v, s) = with_respecialization(n, a, sign, seed, |ls| {
            let ins: Vec<InsertionClass> = insertions
                .iter()
                .map(|c| c.resolve(&ls.spec.alpha))
                .collect();
            evaluate(ls, d, kind, &ins)
        })?;
        if let Some(prev) = &value {
            if prev != &v {
                return Err(Error::Inconsistent(format!(
                    "{} at degree {d} differs between seeds: {} vs {}",
                    kind.name(),
                    fmt_q(prev),
                    fmt_q(&v)
                )));
            }
        }
        value = Some(v);
        used.push(s);
    }
    Ok(InvariantResult {
        space: SpaceSummary {
            n,
            a: a.to_vec(),
            sign,
        },
        degree: d,
        kind,
        route: Route::GraphSum,
        value: value.expect("at least one seed"),
        seeds: used,
    })
}

/// Homogeneity degree of the standard root contribution of a concave star
/// with `r` edges: `r (n + l - 1) - 2r`.
pub fn root_homogeneity(ls: &LocalSpace, r: usize) -> i64 {
    r as i64 * (top_degree(ls) - 2)
}

/// `1/24`, the genus-one point-class normalization, exposed for tests.
pub fn one_over_24() -> Q {
    qf(1, 24)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkm::Specialization;

    fn conifold(alpha: [i64; 2]) -> LocalSpace {
        let spec = Specialization {
            alpha: alpha.iter().map(|&x| q(x)).collect(),
            seed: 0,
        };
        LocalSpace::from_spec(2, &[1, 1], Sign::Concave, spec).unwrap()
    }

    #[test]
    fn conifold_edge_of_degree_one() {
        let ls = conifold([1, -1]);
        assert_eq!(edge_contribution(&ls, 0, 1, 1).unwrap(), qf(-1, 4));
    }

    #[test]
    fn conifold_valence_one_vertex() {
        let ls = conifold([1, -1]);
        assert_eq!(
            vertex0_contribution(&ls, 0, &[q(2)], 0, &Q::one()).unwrap(),
            q(2)
        );
    }

    #[test]
    fn conifold_degree_one_star_balances() {
        let ls = conifold([3, -2]);
        let star = DecoratedStar::new(0, vec![(1, 1)], 0);
        let check = svr_check_star(&ls, &star, &Q::one()).unwrap();
        assert!(check.equal, "{check:?}");
    }
}
