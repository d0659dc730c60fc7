//! Univariate rational functions with Laurent-coefficient and residue
//! extraction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Q;
use super::series::TruncSeries;
use crate::error::{Error, Result};

/// Where to take a residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    /// The origin of the variable.
    Zero,
    /// The point at infinity (residue of the differential `f dx`).
    Infinity,
    /// A finite rational point.
    Finite(Q),
}

/// `num / den` in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Build and reduce; errors if the denominator is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Precondition(
                "rational function with zero denominator".into(),
            ));
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g)?.0;
        let den = den.div_rem(&g)?.0;
        let lead = den.leading().recip();
        Ok(RatFunc {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    /// A polynomial viewed as a rational function.
    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    /// A constant.
    pub fn constant(c: Q) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The variable.
    pub fn x() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    /// Numerator (reduced).
    pub fn num(&self) -> &Poly {
        &self.num
    }

    /// Denominator (reduced, monic).
    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// True for the zero function.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Precondition(
                "inverse of the zero rational function".into(),
            ));
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Quotient.
    pub fn div(&self, other: &RatFunc) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Integer power (negative allowed for nonzero functions).
    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as usize;
        RatFunc::new(base.num.pow(k), base.den.pow(k))
    }

    /// Evaluate at a point where the denominator does not vanish.
    pub fn eval(&self, x: &Q) -> Result<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Degenerate(
                "rational function evaluated at a pole".into(),
            ));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Order of vanishing at zero (negative for a pole); `None` for zero.
    pub fn order_at_zero(&self) -> Option<i64> {
        let u = self.num.valuation()? as i64;
        let v = self.den.valuation().expect("denominator is nonzero") as i64;
        Some(u - v)
    }

    /// The exponent-`k` coefficient of the Laurent expansion at zero.
    pub fn taylor_coeff(&self, k: i64) -> Q {
        let Some(u) = self.num.valuation() else {
            return Q::zero();
        };
        let v = self.den.valuation().expect("denominator is nonzero");
        let shift = u as i64 - v as i64;
        let want = k - shift;
        if want < 0 {
            return Q::zero();
        }
        let want = want as usize;
        let n0 = TruncSeries::from_poly('x', want, &self.num.unshift(u));
        let d0 = TruncSeries::from_poly('x', want, &self.den.unshift(v));
        let quotient = n0
            .div(&d0)
            .expect("unit denominator after removing x-powers");
        quotient.coeff(want).clone()
    }

    /// `f(x + a)`.
    pub fn translate(&self, a: &Q) -> RatFunc {
        RatFunc::new(self.num.taylor_shift(a), self.den.taylor_shift(a))
            .expect("nonzero denominator")
    }

    /// Residue of `f(x) dx` at the given point. At infinity this is
    /// `-[x^{-1}]` of the expansion in descending powers of `x`.
    pub fn residue(&self, at: &Point) -> Q {
        match at {
            Point::Zero => self.taylor_coeff(-1),
            Point::Finite(a) => self.translate(a).taylor_coeff(-1),
            Point::Infinity => {
                if self.is_zero() {
                    return Q::zero();
                }
                // f(1/t) = t^{dd - dn} num_rev(t) / den_rev(t); [x^{-1}] f = [t^1] f(1/t).
                let dn = self.num.degree().unwrap();
                let dd = self.den.degree().unwrap();
                let g =
                    RatFunc::new(self.num.reversed(dn), self.den.reversed(dd)).expect("nonzero");
                let c = g.taylor_coeff(1 - (dd as i64 - dn as i64));
                -c
            }
        }
    }

    /// Distinct rational roots of the denominator (poles with rational
    /// location), found by the rational root test over the integer-scaled
    /// denominator. Used only by residue-theorem property tests.
    pub fn rational_poles(&self) -> Vec<Q> {
        rational_roots(&self.den)
    }
}

/// Rational roots of a polynomial via the rational-root theorem.
pub fn rational_roots(p: &Poly) -> Vec<Q> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Signed;
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let v = p.valuation().unwrap();
    if v > 0 {
        roots.push(Q::zero());
    }
    let p = p.unshift(v);
    // Clear denominators.
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Q::from_integer(l.clone())).to_integer())
        .collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= *n {
            if (n % &d).is_zero() {
                out.push(d.clone());
                out.push(n / &d);
            }
            d += 1;
        }
        out
    };
    for a in divisors(&a0) {
        for b in divisors(&an) {
            for s in [1i64, -1] {
                let cand = Q::new(a.clone() * s, b.clone());
                if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("product of nonzero denominators")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::constant(Q::one())
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}
