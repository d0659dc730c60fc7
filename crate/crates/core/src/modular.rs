//! Modularity of the genus-one potential of `K_{P^2}` as identities of
//! truncated `q`-series: `Δ`, `E_4`, `j`, the modular coordinate `𝔮(q)`,
//! the η-quotient relation and the genus-one potential in both coordinates.
//!
//! Fractional powers of `𝔮` (from `η` and `θ_2`) and the constant `3^{3/2}`
//! never appear: only the pre-cancelled quotients are built. Identities that
//! hold "up to a constant" are compared after applying `q d/dq`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::laurent::LaurentSeries;
use crate::algebra::rational::{factorial_q, q, qf, sign, Q};
use crate::algebra::series::TruncSeries;
use crate::error::{Error, Result};

/// The variable tag used for series in the modular coordinate.
pub const MODULAR_VAR: char = '𝔮';

/// `Π_{n ≥ 1} (1 - x^{step·n})^e` through `x^order`.
pub fn eta_product(step: usize, e: i64, order: usize, var: char) -> TruncSeries {
    // log Π(1 - x^{sn})^e = -e Σ_n Σ_k x^{snk} / k.
    let mut log = TruncSeries::zero(var, order);
    for n in 1..=order / step.max(1) {
        let mut k = 1;
        while step * n * k <= order {
            let idx = step * n * k;
            let c = log.coeff(idx) - qf(e, k as i64);
            log.set_coeff(idx, c);
            k += 1;
        }
    }
    log.exp().expect("zero constant term")
}

/// `Δ(𝔮) = 𝔮 Π (1 - 𝔮^n)^{24}` through `𝔮^order`.
pub fn delta_series(order: usize) -> TruncSeries {
    eta_product(1, 24, order, MODULAR_VAR).shift(1)
}

/// `σ_3(n)`.
fn sigma3(n: usize) -> i64 {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| (d * d * d) as i64)
        .sum()
}

/// `E_4 = 1 + 240 Σ σ_3(n) 𝔮^n`.
pub fn e4_series(order: usize) -> TruncSeries {
    TruncSeries::from_fn(MODULAR_VAR, order, |n| {
        if n == 0 {
            Q::one()
        } else {
            q(240 * sigma3(n))
        }
    })
}

/// `j = E_4^3 / Δ` through `𝔮^order`.
pub fn j_series(order: usize) -> LaurentSeries {
    let k = order + 1;
    let e4 = e4_series(k);
    let unit = (&(&e4 * &e4) * &e4)
        .div(&eta_product(1, 24, k, MODULAR_VAR))
        .expect("unit constant term");
    LaurentSeries::new(MODULAR_VAR, -1, unit.coeffs().to_vec())
}

/// `(-1)^d (3d)! / (d!)^3`.
fn hyper_coefficient(d: usize) -> Q {
    sign(d as i64) * factorial_q(3 * d as u64) / num_traits::pow(factorial_q(d as u64), 3)
}

/// `I_{1,1}(q) = Σ (-1)^d (3d)!/(d!)^3 q^d`.
pub fn i11_series(order: usize) -> TruncSeries {
    TruncSeries::from_fn('q', order, hyper_coefficient)
}

/// `S(q) = Σ_{d ≥ 1} (-1)^d (3d)!/(d!)^3 (Σ_{s=d+1}^{3d} 1/s) q^d`.
pub fn s_series(order: usize) -> TruncSeries {
    TruncSeries::from_fn('q', order, |d| {
        if d == 0 {
            return Q::zero();
        }
        let h: Q = (d + 1..=3 * d).map(|s| qf(1, s as i64)).sum();
        hyper_coefficient(d) * h
    })
}

/// `𝔮(q) = -q exp(3 S(q) / I_{1,1}(q))` through `q^order`.
pub fn qtau_series(order: usize) -> TruncSeries {
    let ratio = s_series(order)
        .div(&i11_series(order))
        .expect("I_(1,1)(0) = 1")
        .scale(&q(3));
    ratio.exp().expect("S(0) = 0").shift(1).scale(&q(-1))
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    /// Short identifier.
    pub name: &'static str,
    /// Highest `q`-exponent compared.
    pub order: i64,
    /// Whether both sides agree through `order`.
    pub pass: bool,
    /// First disagreeing exponent.
    pub first_mismatch: Option<i64>,
}

impl IdentityCheck {
    fn from_series(
        name: &'static str,
        order: usize,
        lhs: &TruncSeries,
        rhs: &TruncSeries,
    ) -> Result<Self> {
        if lhs.order() < order || rhs.order() < order {
            return Err(Error::Precondition(format!(
                "{name}: series known only below q^{order}"
            )));
        }
        let first_mismatch = (0..=order)
            .find(|&k| lhs.coeff(k) != rhs.coeff(k))
            .map(|k| k as i64);
        Ok(IdentityCheck {
            name,
            order: order as i64,
            pass: first_mismatch.is_none(),
            first_mismatch,
        })
    }

    fn from_laurent(
        name: &'static str,
        order: i64,
        lhs: &LaurentSeries,
        rhs: &LaurentSeries,
    ) -> Result<Self> {
        if lhs.order() < order || rhs.order() < order {
            return Err(Error::Precondition(format!(
                "{name}: Laurent series known only below q^{order}"
            )));
        }
        let lo = lhs.valuation().min(rhs.valuation());
        let first_mismatch = (lo..=order).find(|&k| lhs.coeff(k) != rhs.coeff(k));
        Ok(IdentityCheck {
            name,
            order,
            pass: first_mismatch.is_none(),
            first_mismatch,
        })
    }
}

fn require_order(qtau: &TruncSeries, need: usize) -> Result<()> {
    if qtau.order() < need {
        return Err(Error::Precondition(format!(
            "𝔮(q) must be known through q^{need}"
        )));
    }
    if !qtau.coeff(0).is_zero() || qtau.coeff(1).is_zero() {
        return Err(Error::Precondition(
            "𝔮(q) must vanish at q = 0 with a nonzero linear term".into(),
        ));
    }
    Ok(())
}

fn one_plus_27q(order: usize) -> TruncSeries {
    TruncSeries::linear_power('q', &Q::one(), &q(27), 1, order).expect("polynomial")
}

/// `Δ(𝔮(q)) = -q (1 + 27q)^3 I_{1,1}^{12}` for a given `𝔮(q)` (through
/// `q^order`; needs `𝔮` through `q^order`).
pub fn check_delta_identity_with(qtau: &TruncSeries, order: usize) -> Result<IdentityCheck> {
    require_order(qtau, order)?;
    let lhs = delta_series(order).compose(&qtau.truncate(order))?;
    let rhs = (&one_plus_27q(order).powi(3) * &i11_series(order).powi(12))
        .shift(1)
        .scale(&q(-1));
    IdentityCheck::from_series("delta", order, &lhs, &rhs)
}

/// [`check_delta_identity_with`] at the true `𝔮(q)`.
pub fn check_delta_identity(order: usize) -> Result<IdentityCheck> {
    check_delta_identity_with(&qtau_series(order), order)
}

/// `(216q - 1)^3 / (q (1 + 27q)^3)` through `q^order`.
pub fn j_rhs(order: usize) -> Result<LaurentSeries> {
    let k = order + 1;
    let num = TruncSeries::linear_power('q', &q(-1), &q(216), 3, k)?;
    let unit = num.div(&one_plus_27q(k).powi(3))?;
    Ok(LaurentSeries::new('q', -1, unit.coeffs().to_vec()))
}

/// `j(𝔮(q)) = (216q - 1)^3 / (q (27q + 1)^3)` through `q^order`; needs `𝔮`
/// through `q^{order+2}`.
pub fn check_j_identity_with(qtau: &TruncSeries, order: usize) -> Result<IdentityCheck> {
    require_order(qtau, order + 2)?;
    let lhs = j_series(order + 1).compose(&qtau.truncate(order + 2).with_var('q'))?;
    IdentityCheck::from_laurent("j-invariant", order as i64, &lhs, &j_rhs(order)?)
}

/// [`check_j_identity_with`] at the true `𝔮(q)`.
pub fn check_j_identity(order: usize) -> Result<IdentityCheck> {
    check_j_identity_with(&qtau_series(order + 2), order)
}

/// `(1 + 27q)/(27q) = -27 η^{12}(𝔮)/d^4(𝔮)`, in the cancelled form
/// `-27 η^{12}/d^4 = -(1/27) 𝔮^{-1} Π(1-𝔮^n)^{12} Π(1-𝔮^{3n})^{-12}`;
/// with `𝔮 = -q u(q)` this is `Π(1-𝔮^n)^{12}/Π(1-𝔮^{3n})^{12} = u (1 + 27q)`.
/// Needs `𝔮` through `q^{order+1}`.
pub fn check_eta_quotient_with(qtau: &TruncSeries, order: usize) -> Result<IdentityCheck> {
    require_order(qtau, order + 1)?;
    let qt = qtau.truncate(order + 1);
    let u = qt.unshift()?.scale(&q(-1));
    let quotient = eta_product(1, 12, order + 1, MODULAR_VAR).div(&eta_product(
        3,
        12,
        order + 1,
        MODULAR_VAR,
    ))?;
    let lhs = quotient
        .compose(&qt.with_var(MODULAR_VAR))?
        .truncate(order)
        .with_var('q');
    let rhs = &u * &one_plus_27q(order);
    IdentityCheck::from_series("eta-quotient", order, &lhs, &rhs)
}

/// [`check_eta_quotient_with`] at the true `𝔮(q)`.
pub fn check_eta_quotient(order: usize) -> Result<IdentityCheck> {
    check_eta_quotient_with(&qtau_series(order + 1), order)
}

/// `q d/dq` of `ℱ_1 = -(1/12) log q - (1/2) log I_{1,1} - (1/12) log(1 + 27q)`.
pub fn f1_log_derivative(order: usize) -> Result<TruncSeries> {
    let i11 = i11_series(order);
    let a = i11.euler().div(&i11)?.scale(&qf(-1, 2));
    let b = one_plus_27q(order);
    let c = b.euler().div(&b)?.scale(&qf(-1, 12));
    Ok(&(&a + &c) - &TruncSeries::constant('q', order, qf(1, 12)))
}

/// `q d/dq` of `-(1/6) log(d(𝔮) η^3(𝔮))` composed with `𝔮(q)`:
/// `-(1/6) [ (1/2) q𝔮'/𝔮 + 3 q d/dq log Π(1-𝔮^{3n}) + 3 q d/dq log Π(1-𝔮^n) ]`.
pub fn modular_f1_log_derivative(qtau: &TruncSeries, order: usize) -> Result<TruncSeries> {
    require_order(qtau, order + 1)?;
    let qt = qtau.truncate(order + 1);
    let u = qt.unshift()?;
    let log_q_derivative = &TruncSeries::one('q', order) + &u.euler().div(&u)?;
    let p3 = eta_product(3, 1, order, MODULAR_VAR).log()?;
    let p1 = eta_product(1, 1, order, MODULAR_VAR).log()?;
    let inner = qt.truncate(order).with_var(MODULAR_VAR);
    let logs = &p3.compose(&inner)? + &p1.compose(&inner)?;
    let total = &log_q_derivative.scale(&qf(1, 2)) + &logs.euler().with_var('q').scale(&q(3));
    Ok(total.scale(&qf(-1, 6)))
}

/// The genus-one potential in `q` and in `𝔮` agree up to a constant
/// (compared after `q d/dq`); needs `𝔮` through `q^{order+1}`.
pub fn check_f1_modular_with(qtau: &TruncSeries, order: usize) -> Result<IdentityCheck> {
    let lhs = f1_log_derivative(order)?;
    let rhs = modular_f1_log_derivative(qtau, order)?;
    IdentityCheck::from_series("genus-one-potential", order, &lhs, &rhs)
}

/// [`check_f1_modular_with`] at the true `𝔮(q)`.
pub fn check_f1_modular(order: usize) -> Result<IdentityCheck> {
    check_f1_modular_with(&qtau_series(order + 1), order)
}

/// `ℱ_1 + (1/12) log Q = f(q)/12 - (1/2) log I_{1,1} - (1/12) log(1 + 27q)`,
/// the genus-one generating function before re-expansion in `Q`.
pub fn f1_with_log_q(order: usize) -> Result<TruncSeries> {
    let i11 = i11_series(order);
    // I_{1,1} = 1 + q f'(q), so f = ∫ (I_{1,1} - 1)/q.
    let f = TruncSeries::from_fn('q', order, |d| {
        if d == 0 {
            Q::zero()
        } else {
            i11.coeff(d) / q(d as i64)
        }
    });
    let a = i11.log()?.scale(&qf(-1, 2));
    let b = one_plus_27q(order).log()?.scale(&qf(-1, 12));
    Ok(&(&f.scale(&qf(1, 12)) + &a) + &b)
}

/// All four identities at the given order.
pub fn all_checks(order: usize) -> Result<Vec<IdentityCheck>> {
    let qtau = qtau_series(order + 2);
    Ok(vec![
        check_delta_identity_with(&qtau, order)?,
        check_j_identity_with(&qtau, order)?,
        check_eta_quotient_with(&qtau, order)?,
        check_f1_modular_with(&qtau, order)?,
    ])
}
