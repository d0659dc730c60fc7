//! Truncated Laurent series `Σ_{k=v}^{K} a_k x^k + O(x^{K+1})` with an
//! explicit (possibly negative) valuation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{fmt_q, Q};
use super::series::TruncSeries;
use crate::error::{Error, Result};

/// A Laurent series known exactly through exponent `order()`.
///
/// The stored valuation is the exponent of the first stored coefficient;
/// after normalization that coefficient is nonzero unless the series is zero
/// to its order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    var: char,
    val: i64,
    coeffs: Vec<Q>,
}

impl LaurentSeries {
    /// Series `Σ coeffs[i] x^{val+i}`, known through `val + len - 1`.
    pub fn new(var: char, val: i64, coeffs: Vec<Q>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a Laurent series needs at least one coefficient"
        );
        let mut s = LaurentSeries { var, val, coeffs };
        s.normalize();
        s
    }

    /// Embed a power series (valuation zero before normalization).
    pub fn from_series(s: &TruncSeries) -> Self {
        LaurentSeries::new(s.var(), 0, s.coeffs().to_vec())
    }

    /// `x^k · s`.
    pub fn monomial_times(k: i64, s: &TruncSeries) -> Self {
        LaurentSeries::new(s.var(), k, s.coeffs().to_vec())
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(p) if p > 0 && p < self.coeffs.len() => {
                self.coeffs.drain(..p);
                self.val += p as i64;
            }
            None if self.coeffs.len() > 1 => {
                // Zero to its order: keep a single zero at the top exponent.
                let top = self.order();
                self.coeffs = vec![Q::zero()];
                self.val = top;
            }
            _ => {}
        }
    }

    /// Valuation: exponent of the leading stored term.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Highest exponent known.
    pub fn order(&self) -> i64 {
        self.val + self.coeffs.len() as i64 - 1
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient of `x^k` (zero below the valuation); panics beyond order.
    pub fn coeff(&self, k: i64) -> Q {
        assert!(
            k <= self.order(),
            "coefficient {k} beyond Laurent order {}",
            self.order()
        );
        if k < self.val {
            Q::zero()
        } else {
            self.coeffs[(k - self.val) as usize].clone()
        }
    }

    /// Variable tag.
    pub fn var(&self) -> char {
        self.var
    }

    /// Drop all exponents above `order`.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order() {
            return self.clone();
        }
        assert!(order >= self.val, "truncation below the valuation");
        let n = (order - self.val + 1) as usize;
        LaurentSeries::new(self.var, self.val, self.coeffs[..n].to_vec())
    }

    /// Multiply by a scalar.
    pub fn scale(&self, c: &Q) -> Self {
        LaurentSeries::new(
            self.var,
            self.val,
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries::new(self.var, self.val + k, self.coeffs.clone())
    }

    /// The power-series part `x^{-v} f` as a [`TruncSeries`].
    fn unit_part(&self) -> TruncSeries {
        TruncSeries::new(self.var, self.coeffs.clone())
    }

    /// Multiplicative inverse (the leading coefficient must be nonzero).
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Precondition(
                "inverse of a Laurent series that is zero to its order".into(),
            ));
        }
        let u = self.unit_part().inv()?;
        Ok(LaurentSeries::new(self.var, -self.val, u.coeffs().to_vec()))
    }

    /// Composition `self(inner(x))`, where `inner` has zero constant term and
    /// nonzero linear term. Negative powers of the outer variable are handled
    /// through `inner = x·u(x)` with `u(0) ≠ 0`.
    pub fn compose(&self, inner: &TruncSeries) -> Result<Self> {
        if !inner.coeff(0).is_zero() || inner.order() == 0 || inner.coeff(1).is_zero() {
            return Err(Error::Precondition(
                "Laurent composition needs inner(0) = 0 and a nonzero linear term".into(),
            ));
        }
        // u = inner / x, known through order K-1.
        let u = inner.unshift()?;
        let ku = u.order() as i64;
        // Result precision: the leading term x^v u^v is known through v + ku;
        // the outer truncation contributes x^{order+1} terms.
        let top = (self.val + ku).min(self.order());
        let len = (top - self.val + 1).max(1) as usize;
        let uu = u.truncate(len - 1);
        let uinv = uu.inv()?;
        let mut acc = LaurentSeries::new(self.var, self.val, vec![Q::zero(); len]);
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.val + i as i64;
            if k > top {
                break;
            }
            if c.is_zero() {
                continue;
            }
            let base = if k >= 0 { &uu } else { &uinv };
            let p = base.powi(k.unsigned_abs() as usize);
            let term = LaurentSeries::new(self.var, k, p.coeffs().to_vec()).scale(c);
            acc = &acc + &term;
        }
        Ok(acc.truncate(top))
    }

    /// Equality of all coefficients up to and including `order`.
    pub fn agrees_to(&self, other: &LaurentSeries, order: i64) -> bool {
        if order > self.order() || order > other.order() {
            return false;
        }
        let lo = self.val.min(other.val);
        (lo..=order).all(|k| self.coeff(k) == other.coeff(k))
    }

    /// First exponent (up to the common order) where the series differ.
    pub fn first_mismatch(&self, other: &LaurentSeries) -> Option<i64> {
        let lo = self.val.min(other.val);
        let hi = self.order().min(other.order());
        (lo..=hi).find(|&k| self.coeff(k) != other.coeff(k))
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let k = self.val + i as i64;
                terms.push(if k == 0 {
                    fmt_q(c)
                } else {
                    format!("({}){}^{}", fmt_q(c), self.var, k)
                });
            }
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

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        let lo = self.val.min(rhs.val);
        let hi = self.order().min(rhs.order());
        if hi < lo {
            return LaurentSeries::new(self.var, hi, vec![Q::zero()]);
        }
        let v = (lo..=hi).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        LaurentSeries::new(self.var, lo, v)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &(-rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(&-Q::one())
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        // Relative precision is the smaller of the two relative precisions.
        let rel = (self.coeffs.len()).min(rhs.coeffs.len());
        let a = TruncSeries::new(self.var, self.coeffs[..rel].to_vec());
        let b = TruncSeries::new(self.var, rhs.coeffs[..rel].to_vec());
        let p = &a * &b;
        LaurentSeries::new(self.var, self.val + rhs.val, p.coeffs().to_vec())
    }
}
