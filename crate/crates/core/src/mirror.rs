//! The hypergeometric side: `R(w,t)`, the mirror map, the `M`-operator
//! tower `ℱ_p`, the asymptotic data `L`, `μ`, `Φ`, the series `I_p`, the
//! residue generating function of the correction term, and the closed
//! genus-one formulas for `N_{1,d}` and `N⁰_{1,d}`.
//!
//! `t` never appears as a free symbol: `R(w,t) = e^{wt} R̃(w,q)` with
//! `q = e^t`, and every formula is arranged so that only `R̃` and
//! `T - t = f(q)` enter. Results indexed by `Q = q e^{f(q)}` are obtained by
//! composing with the inverse mirror map.

use num_traits::{One, Zero};

use crate::algebra::bivar::BivarSeries;
use crate::algebra::poly::Poly;
use crate::algebra::rational::{factorial_q, q, qf, sign, Q};
use crate::algebra::series::TruncSeries;
use crate::error::{Error, Result};

/// `(n, a_1..a_l)` with the truncation orders of every series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorContext {
    /// `P^{n-1}`.
    pub n: usize,
    /// Bundle degrees `a_k`.
    pub a: Vec<u32>,
    /// `q`-order `K`.
    pub q_order: usize,
    /// `w`-modulus `M` (default `n + l`).
    pub w_mod: usize,
}

impl MirrorContext {
    /// Context with the default `w`-modulus `n + l`.
    pub fn new(n: usize, a: &[u32], q_order: usize) -> Result<Self> {
        if n < 2 || a.is_empty() || a.contains(&0) || q_order == 0 {
            return Err(Error::InvalidInput(
                "need n ≥ 2, degrees a_k ≥ 1 and q-order ≥ 1".into(),
            ));
        }
        Ok(MirrorContext {
            n,
            a: a.to_vec(),
            q_order,
            w_mod: n + a.len(),
        })
    }

    /// Same context with another `w`-modulus.
    pub fn with_w_mod(mut self, w_mod: usize) -> Result<Self> {
        if w_mod == 0 {
            return Err(Error::InvalidInput("w-modulus must be at least 1".into()));
        }
        self.w_mod = w_mod;
        Ok(self)
    }

    /// Bundle rank `l`.
    pub fn l(&self) -> usize {
        self.a.len()
    }

    /// `Σ a_k = n`.
    pub fn is_calabi_yau(&self) -> bool {
        self.a.iter().map(|&x| x as usize).sum::<usize>() == self.n
    }

    /// `Π_k (-a_k)`.
    pub fn neg_degree_product(&self) -> Q {
        self.a.iter().fold(Q::one(), |acc, &x| acc * q(-(x as i64)))
    }

    /// `Π_k (-a_k)^{a_k}`.
    pub fn log_argument_coefficient(&self) -> Q {
        self.a.iter().fold(Q::one(), |acc, &x| {
            acc * num_traits::pow(q(-(x as i64)), x as usize)
        })
    }

    /// `Π_k a_k^{a_k}`.
    pub fn degree_power_product(&self) -> Q {
        self.a.iter().fold(Q::one(), |acc, &x| {
            acc * num_traits::pow(q(x as i64), x as usize)
        })
    }
}

/// Expand `num / den` (with `den(0) ≠ 0`) modulo `w^m`.
fn expand_ratio(num: &Poly, den: &Poly, m: usize) -> Result<Vec<Q>> {
    let ns = TruncSeries::from_poly('w', m - 1, num);
    let ds = TruncSeries::from_poly('w', m - 1, den);
    Ok(ns.div(&ds)?.coeffs().to_vec())
}

/// `Π_{s=1}^{d} (w + s)^n` as a polynomial in `w`.
fn shifted_power_product(n: usize, d: usize) -> Poly {
    (1..=d).fold(Poly::one(), |acc, s| {
        &acc * &Poly::linear(q(s as i64), Q::one()).pow(n)
    })
}

/// `R̃(w,q) = e^{-wt} R(w,t) = Σ_d q^d Π_k Π_{s=0}^{a_k d - 1}(-a_k w - s) / Π_{s=1}^{d}(w+s)^n`
/// modulo `w^M`.
pub fn series_r(ctx: &MirrorContext) -> Result<BivarSeries> {
    let m = ctx.w_mod;
    let mut rows = Vec::with_capacity(ctx.q_order + 1);
    for d in 0..=ctx.q_order {
        let mut num = Poly::one();
        for &ak in &ctx.a {
            let akq = q(ak as i64);
            for s in 0..(ak as usize * d) {
                num = &num * &Poly::linear(q(-(s as i64)), -akq.clone());
            }
        }
        rows.push(expand_ratio(&num, &shifted_power_product(ctx.n, d), m)?);
    }
    Ok(BivarSeries::from_fn(ctx.q_order, m, |d| rows[d].clone()))
}

/// `f(q) = Σ_d (-1)^{nd} (nd)! / (d (d!)^n) q^d` when `l = 1`, else `0`.
pub fn mirror_map_closed(ctx: &MirrorContext) -> TruncSeries {
    TruncSeries::from_fn('q', ctx.q_order, |d| {
        if d == 0 || ctx.l() != 1 {
            return Q::zero();
        }
        let n = ctx.n;
        sign((n * d) as i64) * factorial_q((n * d) as u64)
            / (q(d as i64) * num_traits::pow(factorial_q(d as u64), n))
    })
}

/// The mirror map `T - t = f(q)`, read off as `[w^1] R̃` and checked
/// against the closed form.
pub fn mirror_map(ctx: &MirrorContext) -> Result<TruncSeries> {
    let ctx2 = ctx.clone().with_w_mod(ctx.w_mod.max(2))?;
    let from_r = series_r(&ctx2)?.w_coeff(1);
    let closed = mirror_map_closed(ctx);
    if let Some(k) = from_r.first_mismatch(&closed) {
        return Err(Error::Inconsistent(format!(
            "[w^1] R differs from the mirror map at q^{k}"
        )));
    }
    Ok(closed)
}

/// `Q(q) = q e^{f(q)}`.
pub fn mirror_coordinate(f: &TruncSeries) -> Result<TruncSeries> {
    Ok(f.exp()?.shift(1).truncate(f.order()))
}

/// The inverse mirror map `q(Q)` with `Q(q(Q)) = Q`, to the order of `f`.
pub fn mirror_invert(f: &TruncSeries) -> Result<TruncSeries> {
    if !f.coeff(0).is_zero() {
        return Err(Error::Precondition(
            "the mirror map must vanish at q = 0".into(),
        ));
    }
    let big_q = mirror_coordinate(f)?;
    let inv = big_q.reversion()?.with_var('Q');
    let round = big_q.compose(&inv)?;
    if round
        .first_mismatch(&TruncSeries::variable('Q', f.order()))
        .is_some()
    {
        return Err(Error::Inconsistent(
            "mirror map inversion failed its round trip".into(),
        ));
    }
    Ok(inv)
}

/// Re-expand a `q`-series in the mirror coordinate `Q`.
pub fn to_mirror_coordinate(ctx: &MirrorContext, s: &TruncSeries) -> Result<TruncSeries> {
    let inv = mirror_invert(&mirror_map(ctx)?.truncate(ctx.q_order))?;
    s.compose(&inv)
}

/// `M F = (1 + (q/w) ∂_q)(F / F(0,q))`. The `w`-modulus drops by one.
pub fn operator_m(f: &BivarSeries) -> Result<BivarSeries> {
    let f0 = f.at_w0();
    if f0.coeff(0).is_zero() {
        return Err(Error::Malformed("F(0,q) has no constant term".into()));
    }
    let normalized = f.mul_q_series(&f0.inv()?);
    let derivative = normalized.q_euler().div_w()?;
    Ok(&normalized + &derivative)
}

/// `ℱ_{-l} = Σ_d q^d Π_k Π_{r=0}^{a_k d - 1}(a_k w + r) / Π_{r=1}^{d}((w+r)^n - w^n)`
/// (the `r = 0` factor of the denominator would vanish and is omitted).
pub fn series_f_minus_l(ctx: &MirrorContext, w_mod: usize) -> Result<BivarSeries> {
    let rows = (0..=ctx.q_order)
        .map(|d| {
            let (num, den) = f_minus_l_term(ctx, d);
            expand_ratio(&num, &den, w_mod)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BivarSeries::from_fn(ctx.q_order, w_mod, |d| {
        rows[d].clone()
    }))
}

/// Numerator and denominator of the `q^d` coefficient of `ℱ_{-l}`.
pub fn f_minus_l_term(ctx: &MirrorContext, d: usize) -> (Poly, Poly) {
    let mut num = Poly::one();
    for &ak in &ctx.a {
        for r in 0..(ak as usize * d) {
            num = &num * &Poly::linear(q(r as i64), q(ak as i64));
        }
    }
    let wn = Poly::monomial(ctx.n, Q::one());
    let den = (1..=d).fold(Poly::one(), |acc, r| {
        &acc * &(&Poly::linear(q(r as i64), Q::one()).pow(ctx.n) - &wn)
    });
    (num, den)
}

/// `ℱ_0` from its closed form
/// `Σ_d q^d Π_k Π_{r=1}^{a_k d}(a_k w + r) / Π_{r=1}^{d}((w+r)^n - w^n)`.
pub fn series_f0_closed(ctx: &MirrorContext, w_mod: usize) -> Result<BivarSeries> {
    let wn = Poly::monomial(ctx.n, Q::one());
    let rows = (0..=ctx.q_order)
        .map(|d| {
            let mut num = Poly::one();
            for &ak in &ctx.a {
                for r in 1..=(ak as usize * d) {
                    num = &num * &Poly::linear(q(r as i64), q(ak as i64));
                }
            }
            let den = (1..=d).fold(Poly::one(), |acc, r| {
                &acc * &(&Poly::linear(q(r as i64), Q::one()).pow(ctx.n) - &wn)
            });
            expand_ratio(&num, &den, w_mod)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BivarSeries::from_fn(ctx.q_order, w_mod, |d| {
        rows[d].clone()
    }))
}

/// `ℱ_p = M^{l+p} ℱ_{-l}` for `p ≥ -l`, returned modulo `w^{M}` (the
/// starting modulus is raised by `l + p` to absorb the divisions by `w`).
pub fn series_f(ctx: &MirrorContext, p: i64) -> Result<BivarSeries> {
    let steps = ctx.l() as i64 + p;
    if steps < 0 {
        return Err(Error::Precondition(format!(
            "ℱ_p needs p ≥ -l, got p = {p}"
        )));
    }
    let mut f = series_f_minus_l(ctx, ctx.w_mod + steps as usize)?;
    for _ in 0..steps {
        f = operator_m(&f)?;
    }
    Ok(f)
}

/// `L(q) = (1 - Π a_k^{a_k} q)^{-1/n}`.
pub fn series_l(ctx: &MirrorContext) -> Result<TruncSeries> {
    TruncSeries::linear_power('q', &Q::one(), &-ctx.degree_power_product(), 1, ctx.q_order)?
        .pow_q(&qf(-1, ctx.n as i64))
}

/// `μ(q) = ∫_0^q (L(u) - 1)/u du`.
pub fn series_mu(ctx: &MirrorContext) -> Result<TruncSeries> {
    let l = series_l(ctx)?;
    Ok(TruncSeries::from_fn('q', ctx.q_order, |d| {
        if d == 0 {
            Q::zero()
        } else {
            l.coeff(d) / q(d as i64)
        }
    }))
}

/// `Φ_{p,0}` for `-l ≤ p ≤ 0`: `Φ_{-l,0} = L^{(1-l)/2}` and
/// `Φ_{p+1,0} = (1 + q μ') Φ_{p,0}`.
pub fn series_phi(ctx: &MirrorContext, p: i64) -> Result<TruncSeries> {
    let l = ctx.l() as i64;
    if p < -l || p > 0 {
        return Err(Error::Precondition(format!(
            "Φ_(p,0) is tabulated for -l ≤ p ≤ 0, got p = {p}"
        )));
    }
    let big_l = series_l(ctx)?;
    let mut phi = big_l.pow_q(&qf(1 - l, 2))?;
    let step = &TruncSeries::one('q', ctx.q_order) + &series_mu(ctx)?.euler();
    for _ in -l..p {
        phi = &phi * &step;
    }
    Ok(phi)
}

/// Large-`w` data of the `q^1` coefficient of `ℱ_p` (`-l ≤ p ≤ 0`): the
/// coefficients of `w^1` and `w^0` of its expansion at `w = ∞`, which the
/// asymptotic form `e^{μ_p w} Σ_s Φ_{p,s} w^{-s}` identifies with
/// `[q^1] μ_p` and `[q^1] Φ_{p,0}`.
pub fn q1_asymptotics(ctx: &MirrorContext, p: i64) -> Result<(Q, Q)> {
    let l = ctx.l() as i64;
    if p < -l || p > 0 {
        return Err(Error::Precondition(format!(
            "q^1 asymptotics tabulated for -l ≤ p ≤ 0, got p = {p}"
        )));
    }
    let (mut num, mut den) = f_minus_l_term(ctx, 1);
    // (1 + q∂_q / w) acts on the q^1 term as multiplication by (w + 1)/w;
    // F(0, q) = 1 for p < 0.
    for _ in -l..p {
        num = &num * &Poly::linear(Q::one(), Q::one());
        den = den.shift(1);
    }
    let (quot, _) = num.div_rem(&den)?;
    if quot.degree().unwrap_or(0) > 1 {
        return Err(Error::Inconsistent(
            "q^1 coefficient grows faster than linearly in w".into(),
        ));
    }
    Ok((quot.coeff(1), quot.coeff(0)))
}

/// `Ĩ_p = M^p ℱ_0 |_{w=0}`.
pub fn hyper_i_tilde(ctx: &MirrorContext, p: usize) -> Result<TruncSeries> {
    Ok(series_f(ctx, p as i64)?.at_w0())
}

/// `I_p(q)`: `1` for `0 ≤ p < l` and `Ĩ_{p-l}((-1)^n q)` for `p ≥ l`.
pub fn hyper_i(ctx: &MirrorContext, p: usize) -> Result<TruncSeries> {
    if p < ctx.l() {
        return Ok(TruncSeries::one('q', ctx.q_order));
    }
    Ok(hyper_i_tilde(ctx, p - ctx.l())?.scale_var(&sign(ctx.n as i64)))
}

/// `-Tw + ln R = ln R̃ - f(q) w`, checked to vanish modulo `w^l`.
pub fn log_r_shifted(ctx: &MirrorContext) -> Result<BivarSeries> {
    let r = series_r(ctx)?;
    let f = mirror_map(ctx)?;
    let mut fw = vec![vec![Q::zero(); ctx.w_mod]; ctx.q_order + 1];
    if ctx.w_mod > 1 {
        for (d, row) in fw.iter_mut().enumerate() {
            row[1] = f.coeff(d).clone();
        }
    }
    let fw = BivarSeries::from_fn(ctx.q_order, ctx.w_mod, |d| fw[d].clone());
    let x = &r.log()? - &fw;
    for j in 0..ctx.l().min(ctx.w_mod) {
        if let Some(d) = (0..=ctx.q_order).find(|&d| !x.coeff(d, j).is_zero()) {
            return Err(Error::Inconsistent(format!(
                "-Tw + ln R has a q^{d} w^{j} term below w^l"
            )));
        }
    }
    Ok(x)
}

/// `Res_{w=0} { Π_k(1 - a_k w)((1+w)^n - w^n) / w^{n+l} · (-Tw + ln R) }` as a
/// `q`-series.
pub fn residue_series(ctx: &MirrorContext) -> Result<TruncSeries> {
    let top = ctx.n + ctx.l();
    let ctx = ctx.clone().with_w_mod(top)?;
    let x = log_r_shifted(&ctx)?;
    let mut pw = ctx.a.iter().fold(Poly::one(), |acc, &ak| {
        &acc * &Poly::linear(Q::one(), q(-(ak as i64)))
    });
    pw = &pw * &(&Poly::linear(Q::one(), Q::one()).pow(ctx.n) - &Poly::monomial(ctx.n, Q::one()));
    let coeffs: Vec<Q> = (0..top).map(|j| pw.coeff(j)).collect();
    Ok(x.mul_w_poly(&coeffs).w_coeff(top - 1))
}

/// `Σ_d Q^d Σ_m (-1)^m (m-1)! Σ_p ⟨η_p c(TX)⟩_{(m,∅,d)}` from the residue
/// formula: `-(1/Π(-a_k)) · residue_series`, re-expanded in `Q`.
pub fn correction_series(ctx: &MirrorContext) -> Result<TruncSeries> {
    let res = residue_series(ctx)?.scale(&-ctx.neg_degree_product().recip());
    to_mirror_coordinate(ctx, &res)
}

/// The `q`-series of the closed genus-one formula before re-expansion:
/// `(n/48)(n - 1 - 2Σ 1/a_k) f(q)` minus the parity-split log terms.
fn genus1_closed_q(ctx: &MirrorContext) -> Result<TruncSeries> {
    if !ctx.is_calabi_yau() {
        return Err(Error::NotCalabiYau(format!(
            "Σ a_k = {:?} differs from n = {}",
            ctx.a, ctx.n
        )));
    }
    let (n, l) = (ctx.n as i64, ctx.l() as i64);
    let inv_sum: Q = ctx.a.iter().map(|&x| qf(1, x as i64)).sum();
    let mut rhs = mirror_map(ctx)?.scale(&(qf(n, 48) * (q(n - 1) - q(2) * inv_sum)));
    let log_arg = TruncSeries::linear_power(
        'q',
        &Q::one(),
        &-ctx.log_argument_coefficient(),
        1,
        ctx.q_order,
    )?
    .log()?;
    let (log_coef, p_max, even) = if (n + l) % 2 == 0 {
        (qf(n + l, 48), (n + l - 2) / 2, true)
    } else {
        (qf(n + l - 3, 48), (n + l - 3) / 2, false)
    };
    rhs = &rhs - &log_arg.scale(&log_coef);
    for p in l..=p_max {
        let k = n + l - 2 * p;
        let coef = if even { qf(k * k, 8) } else { qf(k * k - 1, 8) };
        rhs = &rhs - &hyper_i(ctx, p as usize)?.log()?.scale(&coef);
    }
    Ok(rhs)
}

/// `Σ_d Q^d N_{1,d}` from the closed mirror formula (Calabi–Yau only).
pub fn genus1_series(ctx: &MirrorContext) -> Result<TruncSeries> {
    to_mirror_coordinate(ctx, &genus1_closed_q(ctx)?)
}

/// `Σ_d Q^d N⁰_{1,d}`: the closed formula plus
/// `(1/(24 Π(-a_k))) · residue_series` (Calabi–Yau only).
pub fn reduced_genus1_series(ctx: &MirrorContext) -> Result<TruncSeries> {
    let base = genus1_closed_q(ctx)?;
    let res = residue_series(ctx)?.scale(&(q(24) * ctx.neg_degree_product()).recip());
    to_mirror_coordinate(ctx, &(&base + &res))
}
