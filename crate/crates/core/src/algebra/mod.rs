//! Exact algebra: rationals, polynomials, rational functions, and truncated
//! power/Laurent/bivariate series, plus the coefficient and residue
//! extraction primitives the rest of the crate is written in terms of.

pub mod bivar;
pub mod laurent;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;

pub use bivar::BivarSeries;
pub use laurent::LaurentSeries;
pub use poly::Poly;
pub use ratfunc::{Point, RatFunc};
pub use rational::{fmt_decimal, fmt_q, parse_q, q, qf, Q};
pub use series::TruncSeries;

use crate::error::Result;

/// `exp(s)` for a series with zero constant term.
pub fn series_exp(s: &TruncSeries) -> Result<TruncSeries> {
    s.exp()
}

/// `log(s)` for a series with constant term one.
pub fn series_log(s: &TruncSeries) -> Result<TruncSeries> {
    s.log()
}

/// Outer argument of [`series_compose`]: a power series or a Laurent series.
#[derive(Clone, Debug)]
pub enum Outer<'a> {
    /// Ordinary power series.
    Power(&'a TruncSeries),
    /// Laurent series (possibly with a pole).
    Laurent(&'a LaurentSeries),
}

/// Result of [`series_compose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Composed {
    /// Composition of power series.
    Power(TruncSeries),
    /// Composition with a Laurent outer series.
    Laurent(LaurentSeries),
}

/// `outer(inner(x))` for `inner` with zero constant term (and, for Laurent
/// outer series with a pole, a nonzero linear term).
pub fn series_compose(outer: Outer<'_>, inner: &TruncSeries) -> Result<Composed> {
    match outer {
        Outer::Power(s) => Ok(Composed::Power(s.compose(inner)?)),
        Outer::Laurent(l) => Ok(Composed::Laurent(l.compose(inner)?)),
    }
}

/// `[x^k] f`: the exponent-`k` coefficient of the Laurent expansion at zero.
pub fn taylor_coeff(f: &RatFunc, k: i64) -> Q {
    f.taylor_coeff(k)
}

/// Residue of `f(x) dx` at zero, infinity, or a finite rational point.
pub fn residue(f: &RatFunc, at: &Point) -> Q {
    f.residue(at)
}
