//! Bivariate truncations: power series in an outer variable `q` (through
//! order `K`) whose coefficients are polynomials in `w` reduced modulo `w^M`.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::rational::{q, Q};
use super::series::TruncSeries;
use crate::error::{Error, Result};

/// `Σ_{d ≤ K} q^d c_d(w)` with every `c_d` taken modulo `w^M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivarSeries {
    q_order: usize,
    w_mod: usize,
    /// `coeffs[d][j]` is the coefficient of `q^d w^j`.
    coeffs: Vec<Vec<Q>>,
}

/// Multiply two truncated `w`-polynomials modulo `w^m`.
pub(crate) fn wmul(a: &[Q], b: &[Q], m: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); m];
    for (i, x) in a.iter().enumerate().take(m) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(m - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Inverse of a `w`-polynomial with nonzero constant term, modulo `w^m`.
pub(crate) fn winv(a: &[Q], m: usize) -> Result<Vec<Q>> {
    let s = TruncSeries::from_fn('w', m - 1, |k| a.get(k).cloned().unwrap_or_else(Q::zero));
    Ok(s.inv()?.coeffs().to_vec())
}

impl BivarSeries {
    /// Zero series with the given truncations (`w_mod ≥ 1`).
    pub fn zero(q_order: usize, w_mod: usize) -> Self {
        assert!(w_mod >= 1, "w-modulus must be at least 1");
        BivarSeries {
            q_order,
            w_mod,
            coeffs: vec![vec![Q::zero(); w_mod]; q_order + 1],
        }
    }

    /// The constant series `1`.
    pub fn one(q_order: usize, w_mod: usize) -> Self {
        let mut s = BivarSeries::zero(q_order, w_mod);
        s.coeffs[0][0] = Q::one();
        s
    }

    /// Build from a function producing each `q^d` coefficient as a list of
    /// `w`-coefficients (extra entries beyond `w_mod` are ignored).
    pub fn from_fn(q_order: usize, w_mod: usize, mut f: impl FnMut(usize) -> Vec<Q>) -> Self {
        let mut s = BivarSeries::zero(q_order, w_mod);
        for d in 0..=q_order {
            for (j, c) in f(d).into_iter().enumerate().take(w_mod) {
                s.coeffs[d][j] = c;
            }
        }
        s
    }

    /// Embed a `q`-series as `w`-constant coefficients.
    pub fn from_q_series(s: &TruncSeries, w_mod: usize) -> Self {
        BivarSeries::from_fn(s.order(), w_mod, |d| vec![s.coeff(d).clone()])
    }

    /// `q`-order.
    pub fn q_order(&self) -> usize {
        self.q_order
    }

    /// `w`-modulus `M` (coefficients of `w^0..w^{M-1}` are kept).
    pub fn w_mod(&self) -> usize {
        self.w_mod
    }

    /// Coefficient of `q^d w^j`.
    pub fn coeff(&self, d: usize, j: usize) -> &Q {
        &self.coeffs[d][j]
    }

    /// The `w`-polynomial multiplying `q^d`.
    pub fn q_coeff(&self, d: usize) -> &[Q] {
        &self.coeffs[d]
    }

    /// The `q`-series multiplying `w^j`.
    pub fn w_coeff(&self, j: usize) -> TruncSeries {
        assert!(
            j < self.w_mod,
            "w-exponent {j} beyond modulus {}",
            self.w_mod
        );
        TruncSeries::from_fn('q', self.q_order, |d| self.coeffs[d][j].clone())
    }

    /// Value at `w = 0`.
    pub fn at_w0(&self) -> TruncSeries {
        self.w_coeff(0)
    }

    /// Reduce to smaller truncations.
    pub fn truncate(&self, q_order: usize, w_mod: usize) -> Self {
        let q_order = q_order.min(self.q_order);
        let w_mod = w_mod.min(self.w_mod);
        BivarSeries::from_fn(q_order, w_mod, |d| self.coeffs[d][..w_mod].to_vec())
    }

    /// Multiply by a rational constant.
    pub fn scale(&self, c: &Q) -> Self {
        BivarSeries::from_fn(self.q_order, self.w_mod, |d| {
            self.coeffs[d].iter().map(|x| x * c).collect()
        })
    }

    /// `q → c·q`.
    pub fn scale_q(&self, c: &Q) -> Self {
        let mut pw = Q::one();
        let mut out = self.clone();
        for d in 0..=self.q_order {
            for x in out.coeffs[d].iter_mut() {
                *x *= &pw;
            }
            pw *= c;
        }
        out
    }

    /// Multiply every coefficient by a `w`-polynomial (mod `w^M`).
    pub fn mul_w_poly(&self, p: &[Q]) -> Self {
        BivarSeries::from_fn(self.q_order, self.w_mod, |d| {
            wmul(&self.coeffs[d], p, self.w_mod)
        })
    }

    /// Multiply by a `q`-series with `w`-constant coefficients.
    pub fn mul_q_series(&self, s: &TruncSeries) -> Self {
        self * &BivarSeries::from_q_series(s, self.w_mod)
    }

    /// Euler operator `q ∂_q`.
    pub fn q_euler(&self) -> Self {
        BivarSeries::from_fn(self.q_order, self.w_mod, |d| {
            self.coeffs[d].iter().map(|x| x * q(d as i64)).collect()
        })
    }

    /// Exact division by `w`. Every `w^0` coefficient must vanish; the
    /// modulus drops by one because the top coefficient is no longer known.
    pub fn div_w(&self) -> Result<Self> {
        if self.w_mod < 2 {
            return Err(Error::Malformed(
                "division by w leaves no known w-coefficients".into(),
            ));
        }
        if let Some(d) = (0..=self.q_order).find(|&d| !self.coeffs[d][0].is_zero()) {
            return Err(Error::Malformed(format!(
                "coefficient of q^{d} is not divisible by w"
            )));
        }
        Ok(BivarSeries::from_fn(self.q_order, self.w_mod - 1, |d| {
            self.coeffs[d][1..].to_vec()
        }))
    }

    /// Logarithm of a series whose `q^0` coefficient is exactly `1`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0][0] != Q::one() || self.coeffs[0][1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Precondition(
                "bivariate log needs q^0 coefficient equal to 1".into(),
            ));
        }
        // q L' f = q f'  =>  D_k = k f_k - Σ_{i=1}^{k-1} f_i D_{k-i},  L_k = D_k / k.
        let m = self.w_mod;
        let mut dser: Vec<Vec<Q>> = vec![vec![Q::zero(); m]; self.q_order + 1];
        let mut out = BivarSeries::zero(self.q_order, m);
        for k in 1..=self.q_order {
            let mut s: Vec<Q> = self.coeffs[k].iter().map(|x| x * q(k as i64)).collect();
            for i in 1..k {
                let t = wmul(&self.coeffs[i], &dser[k - i], m);
                for (a, b) in s.iter_mut().zip(t) {
                    *a -= b;
                }
            }
            out.coeffs[k] = s.iter().map(|x| x / q(k as i64)).collect();
            dser[k] = s;
        }
        Ok(out)
    }

    /// Multiplicative inverse; the `q^0` coefficient must be a unit mod `w^M`.
    pub fn inv(&self) -> Result<Self> {
        let m = self.w_mod;
        let c0inv = winv(&self.coeffs[0], m)?;
        let mut out = BivarSeries::zero(self.q_order, m);
        out.coeffs[0] = c0inv.clone();
        for k in 1..=self.q_order {
            let mut s = vec![Q::zero(); m];
            for j in 1..=k {
                let t = wmul(&self.coeffs[j], &out.coeffs[k - j], m);
                for (a, b) in s.iter_mut().zip(t) {
                    *a += b;
                }
            }
            out.coeffs[k] = wmul(&s, &c0inv, m).into_iter().map(|x| -x).collect();
        }
        Ok(out)
    }
}

impl Add for &BivarSeries {
    type Output = BivarSeries;
    fn add(self, rhs: &BivarSeries) -> BivarSeries {
        let (k, m) = (self.q_order.min(rhs.q_order), self.w_mod.min(rhs.w_mod));
        BivarSeries::from_fn(k, m, |d| {
            (0..m)
                .map(|j| &self.coeffs[d][j] + &rhs.coeffs[d][j])
                .collect()
        })
    }
}

impl Sub for &BivarSeries {
    type Output = BivarSeries;
    fn sub(self, rhs: &BivarSeries) -> BivarSeries {
        let (k, m) = (self.q_order.min(rhs.q_order), self.w_mod.min(rhs.w_mod));
        BivarSeries::from_fn(k, m, |d| {
            (0..m)
                .map(|j| &self.coeffs[d][j] - &rhs.coeffs[d][j])
                .collect()
        })
    }
}

impl Mul for &BivarSeries {
    type Output = BivarSeries;
    fn mul(self, rhs: &BivarSeries) -> BivarSeries {
        let (k, m) = (self.q_order.min(rhs.q_order), self.w_mod.min(rhs.w_mod));
        let mut out = BivarSeries::zero(k, m);
        for a in 0..=k {
            for b in 0..=(k - a) {
                let t = wmul(&self.coeffs[a], &rhs.coeffs[b], m);
                for (x, y) in out.coeffs[a + b].iter_mut().zip(t) {
                    *x += y;
                }
            }
        }
        out
    }
}
