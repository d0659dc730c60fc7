//! Arbitrary-precision rationals and the small helpers built on them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The exact scalar used throughout: a reduced fraction with positive
/// denominator over arbitrary-precision integers.
pub type Q = BigRational;

/// The integer `n` as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// The fraction `n / d`; panics if `d == 0` (only used with literal constants).
pub fn qf(n: i64, d: i64) -> Q {
    assert!(d != 0, "zero denominator in literal fraction");
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Render as `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Render with exactly `digits` digits after the point, rounding half away
/// from zero.
pub fn fmt_decimal(x: &Q, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (x.abs() * Q::from_integer(scale.clone()))
        .round()
        .to_integer();
    let (int, frac) = (&scaled / &scale, &scaled % &scale);
    let sign = if x.is_negative() && !scaled.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>digits$}")
    }
}

/// Parse `"p/q"` or `"p"` (surrounding whitespace allowed).
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(p, d))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(p))
        }
    }
}

/// Multiplicative inverse, reporting a degenerate specialization on zero.
pub fn inv(x: &Q, what: &str) -> Result<Q> {
    if x.is_zero() {
        Err(Error::Degenerate(format!("vanishing {what}")))
    } else {
        Ok(x.recip())
    }
}

/// Exact quotient `a / b`, reporting a degenerate specialization when `b == 0`.
pub fn div(a: &Q, b: &Q, what: &str) -> Result<Q> {
    Ok(a * inv(b, what)?)
}

/// Integer power with possibly negative exponent.
pub fn pow(x: &Q, e: i64, what: &str) -> Result<Q> {
    if e >= 0 {
        Ok(num_traits::pow(x.clone(), e as usize))
    } else {
        Ok(num_traits::pow(inv(x, what)?, e.unsigned_abs() as usize))
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n!` as a rational.
pub fn factorial_q(n: u64) -> Q {
    Q::from_integer(factorial(n))
}

/// Generalized binomial coefficient `binom(a, k)` for rational `a`.
pub fn binom_q(a: &Q, k: usize) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * (a - q(i as i64)) / q(i as i64 + 1);
    }
    acc
}

/// `(-1)^k` as a rational.
pub fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Sum of rationals.
pub fn sum<'a, I: IntoIterator<Item = &'a Q>>(it: I) -> Q {
    it.into_iter().fold(Q::zero(), |acc, x| acc + x)
}

/// Product of rationals.
pub fn product<'a, I: IntoIterator<Item = &'a Q>>(it: I) -> Q {
    it.into_iter().fold(Q::one(), |acc, x| acc * x)
}

/// True when `x` is an integer.
pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Absolute value helper kept here so callers need not import `Signed`.
pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for s in ["0", "7", "-3", "1/2", "-22/7"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(fmt_q(&qf(4, -6)), "-2/3");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(fmt_decimal(&qf(1, 3), 4), "0.3333");
        assert_eq!(fmt_decimal(&qf(-2, 3), 3), "-0.667");
        assert_eq!(fmt_decimal(&qf(3437, 16), 2), "214.81");
        assert_eq!(fmt_decimal(&qf(5, 2), 0), "3");
        assert_eq!(fmt_decimal(&qf(-1, 1000), 2), "0.00");
        assert_eq!(fmt_decimal(&q(7), 1), "7.0");
    }

    #[test]
    fn inverse_of_zero_is_degenerate() {
        assert!(inv(&q(0), "test").unwrap_err().is_degenerate());
        assert_eq!(pow(&q(2), -3, "t").unwrap(), qf(1, 8));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_q(&q(5), 2), q(10));
        assert_eq!(binom_q(&qf(-1, 2), 2), qf(3, 8));
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
