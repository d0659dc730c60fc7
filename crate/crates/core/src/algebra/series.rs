//! Truncated power series `a_0 + a_1 x + ... + a_K x^K + O(x^{K+1})`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::{fmt_q, q, Q};
use crate::error::{Error, Result};

/// A power series known exactly through exponent `order()`.
///
/// Binary operations between series of different orders yield the smaller
/// order: only coefficients that are determined by both operands are kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    var: char,
    coeffs: Vec<Q>,
}

impl TruncSeries {
    /// Series from the first `order + 1` coefficients.
    pub fn new(var: char, coeffs: Vec<Q>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series needs at least one coefficient"
        );
        TruncSeries { var, coeffs }
    }

    /// Build from a coefficient function for exponents `0..=order`.
    pub fn from_fn(var: char, order: usize, f: impl FnMut(usize) -> Q) -> Self {
        TruncSeries::new(var, (0..=order).map(f).collect())
    }

    /// The zero series.
    pub fn zero(var: char, order: usize) -> Self {
        TruncSeries::new(var, vec![Q::zero(); order + 1])
    }

    /// A constant series.
    pub fn constant(var: char, order: usize, c: Q) -> Self {
        let mut s = TruncSeries::zero(var, order);
        s.coeffs[0] = c;
        s
    }

    /// The series `1`.
    pub fn one(var: char, order: usize) -> Self {
        TruncSeries::constant(var, order, Q::one())
    }

    /// The series variable `x` itself.
    pub fn variable(var: char, order: usize) -> Self {
        let mut s = TruncSeries::zero(var, order);
        if order >= 1 {
            s.coeffs[1] = Q::one();
        }
        s
    }

    /// Truncate a polynomial.
    pub fn from_poly(var: char, order: usize, p: &Poly) -> Self {
        TruncSeries::from_fn(var, order, |k| p.coeff(k))
    }

    /// Variable tag (for display only).
    pub fn var(&self) -> char {
        self.var
    }

    /// `(c0 + c1 x)^e` for any integer `e`, expanded at `x = 0` to `order`.
    /// A negative exponent needs `c0 ≠ 0` (degenerate otherwise).
    pub fn linear_power(var: char, c0: &Q, c1: &Q, e: i64, order: usize) -> Result<Self> {
        if c0.is_zero() {
            if e < 0 {
                return Err(Error::Degenerate(
                    "negative power of a series without constant term".into(),
                ));
            }
            let mut s = TruncSeries::zero(var, order);
            if (e as usize) <= order {
                s.coeffs[e as usize] = num_traits::pow(c1.clone(), e as usize);
            }
            return Ok(s);
        }
        // c0^e Σ_j C(e, j) (c1/c0)^j x^j.
        let ratio = c1 / c0;
        let lead = if e >= 0 {
            num_traits::pow(c0.clone(), e as usize)
        } else {
            num_traits::pow(c0.recip(), e.unsigned_abs() as usize)
        };
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut binom = Q::one();
        let mut rp = Q::one();
        for j in 0..=order {
            coeffs.push(&lead * &binom * &rp);
            binom = binom * q(e - j as i64) / q(j as i64 + 1);
            rp *= &ratio;
        }
        Ok(TruncSeries::new(var, coeffs))
    }

    /// Highest exponent known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// All known coefficients.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `x^k`; panics if `k` exceeds the order.
    pub fn coeff(&self, k: usize) -> &Q {
        assert!(
            k <= self.order(),
            "coefficient {k} beyond series order {}",
            self.order()
        );
        &self.coeffs[k]
    }

    /// Overwrite a coefficient (used by mutation tests).
    pub fn set_coeff(&mut self, k: usize, c: Q) {
        self.coeffs[k] = c;
    }

    /// Keep only exponents `0..=order` (no-op if already shorter).
    pub fn truncate(&self, order: usize) -> Self {
        let n = (order + 1).min(self.coeffs.len());
        TruncSeries::new(self.var, self.coeffs[..n].to_vec())
    }

    /// Same coefficients with a new variable tag.
    pub fn with_var(&self, var: char) -> Self {
        TruncSeries {
            var,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiply by a scalar.
    pub fn scale(&self, c: &Q) -> Self {
        TruncSeries::new(self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `f(c x)`.
    pub fn scale_var(&self, c: &Q) -> Self {
        let mut pw = Q::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &pw);
            pw *= c;
        }
        TruncSeries::new(self.var, v)
    }

    /// `x^k f(x)`, keeping the same order (higher terms are dropped).
    pub fn shift(&self, k: usize) -> Self {
        TruncSeries::from_fn(self.var, self.order(), |i| {
            if i >= k {
                self.coeffs[i - k].clone()
            } else {
                Q::zero()
            }
        })
    }

    /// `f(x) / x`, which requires a zero constant term; the order drops by one.
    pub fn unshift(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "division by the series variable needs f(0) = 0".into(),
            ));
        }
        if self.order() == 0 {
            return Err(Error::Precondition(
                "no coefficients left after division by x".into(),
            ));
        }
        Ok(TruncSeries::new(self.var, self.coeffs[1..].to_vec()))
    }

    /// Euler operator `x d/dx`.
    pub fn euler(&self) -> Self {
        TruncSeries::from_fn(self.var, self.order(), |k| &self.coeffs[k] * q(k as i64))
    }

    /// Ordinary derivative `d/dx` (order drops by one, minimum zero).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return TruncSeries::zero(self.var, 0);
        }
        TruncSeries::from_fn(self.var, self.order() - 1, |k| {
            &self.coeffs[k + 1] * q(k as i64 + 1)
        })
    }

    /// `∫_0^x f(u)/u du` for a series with `f(0) = 0`.
    pub fn integrate_over_x(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition("∫ f/x needs f(0) = 0".into()));
        }
        Ok(TruncSeries::from_fn(self.var, self.order(), |k| {
            if k == 0 {
                Q::zero()
            } else {
                &self.coeffs[k] / q(k as i64)
            }
        }))
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inv(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Precondition(
                "series inverse needs a nonzero constant term".into(),
            ));
        }
        let c0inv = c0.recip();
        let n = self.coeffs.len();
        let mut out: Vec<Q> = Vec::with_capacity(n);
        out.push(c0inv.clone());
        for k in 1..n {
            let mut s = Q::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-s * &c0inv);
        }
        Ok(TruncSeries::new(self.var, out))
    }

    /// Quotient `self / d`.
    pub fn div(&self, d: &TruncSeries) -> Result<Self> {
        Ok(self * &d.inv()?)
    }

    /// Exponential; requires a zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "series_exp needs a zero constant term".into(),
            ));
        }
        // E' = f' E, coefficientwise: k e_k = sum_{j=1}^k j f_j e_{k-j}.
        let n = self.coeffs.len();
        let mut e: Vec<Q> = Vec::with_capacity(n);
        e.push(Q::one());
        for k in 1..n {
            let mut s = Q::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * q(j as i64) * &e[k - j];
                }
            }
            e.push(s / q(k as i64));
        }
        Ok(TruncSeries::new(self.var, e))
    }

    /// Logarithm; requires constant term one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Precondition(
                "series_log needs constant term 1".into(),
            ));
        }
        // x L' = x f' / f.
        let d = self.euler().div(self)?;
        d.integrate_over_x()
    }

    /// Rational power `f^a` for a series with constant term one.
    pub fn pow_q(&self, a: &Q) -> Result<Self> {
        self.log()?.scale(a).exp()
    }

    /// Non-negative integer power.
    pub fn powi(&self, e: usize) -> Self {
        let mut acc = TruncSeries::one(self.var, self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Composition `self(inner(x))`; `inner` must have zero constant term.
    /// The result has order `min(self.order, inner.order)`.
    pub fn compose(&self, inner: &TruncSeries) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "series_compose needs inner(0) = 0".into(),
            ));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = TruncSeries::zero(inner.var, order);
        // Horner in the inner series.
        for c in self.coeffs[..=order].iter().rev() {
            acc = &(&acc * &inner) + &TruncSeries::constant(inner.var, order, c.clone());
        }
        Ok(acc)
    }

    /// Compositional inverse `g` with `self(g(x)) = x`; requires zero
    /// constant term and nonzero linear term.
    pub fn reversion(&self) -> Result<Self> {
        let k = self.order();
        if !self.coeffs[0].is_zero() || k == 0 || self.coeffs[1].is_zero() {
            return Err(Error::Precondition(
                "reversion needs zero constant term and nonzero linear term".into(),
            ));
        }
        let a1inv = self.coeffs[1].recip();
        let mut g = TruncSeries::variable(self.var, k).scale(&a1inv);
        // Each Newton-free fixed-point pass fixes one more coefficient.
        for _ in 1..k {
            let fg = self.compose(&g)?;
            let err = &fg - &TruncSeries::variable(self.var, k);
            g = &g - &err.scale(&a1inv);
        }
        Ok(g)
    }

    /// First exponent where the two series differ, compared up to the
    /// smaller order; `None` if they agree there.
    pub fn first_mismatch(&self, other: &TruncSeries) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    /// Equality up to (and including) exponent `order`.
    pub fn agrees_to(&self, other: &TruncSeries, order: usize) -> bool {
        order <= self.order()
            && order <= other.order()
            && (0..=order).all(|k| self.coeffs[k] == other.coeffs[k])
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match k {
                0 => fmt_q(c),
                1 => format!("({}){}", fmt_q(c), self.var),
                _ => format!("({}){}^{k}", fmt_q(c), self.var),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(
            f,
            "{} + O({}^{})",
            terms.join(" + "),
            self.var,
            self.order() + 1
        )
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order().min(rhs.order());
        TruncSeries::from_fn(self.var, n, |k| &self.coeffs[k] + &rhs.coeffs[k])
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order().min(rhs.order());
        TruncSeries::from_fn(self.var, n, |k| &self.coeffs[k] - &rhs.coeffs[k])
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order().min(rhs.order());
        let mut v = vec![Q::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        TruncSeries::new(self.var, v)
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        self.scale(&-Q::one())
    }
}
