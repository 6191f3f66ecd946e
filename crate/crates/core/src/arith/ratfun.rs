use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Poly, Q};
use crate::error::{Error, Result};

/// Exact rational function of the formal parameter `t`.
///
/// Always stored reduced: `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarQt {
    num: Poly,
    den: Poly,
}

impl ScalarQt {
    pub fn zero() -> Self {
        ScalarQt { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        ScalarQt::from_q(Q::one())
    }

    pub fn t() -> Self {
        ScalarQt::from_poly(Poly::t())
    }

    pub fn from_q(c: Q) -> Self {
        ScalarQt { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(num: Poly) -> Self {
        ScalarQt { num, den: Poly::one() }
    }

    /// `c * t^k` for any integer `k`.
    pub fn t_power(c: Q, k: i64) -> Self {
        if k >= 0 {
            ScalarQt::from_poly(Poly::monomial(c, k as usize))
        } else {
            ScalarQt::new(Poly::constant(c), Poly::monomial(Q::one(), (-k) as usize))
        }
    }

    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "ScalarQt with zero denominator");
        if num.is_zero() {
            return ScalarQt::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lead = den.leading().cloned().unwrap();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ScalarQt { num, den }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return ScalarQt::zero();
        }
        ScalarQt { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(ScalarQt::new(self.den.clone(), self.num.clone()))
        }
    }

    /// Order of vanishing at `t = 0` (negative for a pole); `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        let vd = self.den.valuation().unwrap() as i64;
        Some(vn - vd)
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Taylor coefficients at `t = 0` up to and including `t^order`.
    pub fn series(&self, order: usize) -> Result<Vec<Q>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::Pole(self.to_string()));
        }
        let inv = d0.recip();
        let mut out: Vec<Q> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.num.coeff(k);
            for j in 1..=k {
                let dj = self.den.coeff(j);
                if !dj.is_zero() {
                    acc -= dj * &out[k - j];
                }
            }
            out.push(acc * &inv);
        }
        Ok(out)
    }

    /// Cache-file form `num=[..];den=[..]`.
    pub fn to_list(&self) -> String {
        format!("num={};den={}", self.num.to_list(), self.den.to_list())
    }

    pub fn parse_list(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed rational function {s:?}"));
        let (n, d) = s.trim().split_once(';').ok_or_else(bad)?;
        let parse_poly = |part: &str, key: &str| -> Result<Poly> {
            let body = part.trim().strip_prefix(key).ok_or_else(bad)?;
            let body = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
            if body.trim().is_empty() {
                return Ok(Poly::zero());
            }
            let cs = body.split(',').map(super::parse_q).collect::<Result<Vec<_>>>()?;
            Ok(Poly::from_coeffs(cs))
        };
        let num = parse_poly(n, "num=")?;
        let den = parse_poly(d, "den=")?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(ScalarQt::new(num, den))
    }
}

impl Default for ScalarQt {
    fn default() -> Self {
        ScalarQt::zero()
    }
}

impl From<Q> for ScalarQt {
    fn from(c: Q) -> Self {
        ScalarQt::from_q(c)
    }
}

impl<'a> Add<&'a ScalarQt> for &'a ScalarQt {
    type Output = ScalarQt;
    fn add(self, rhs: &ScalarQt) -> ScalarQt {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return ScalarQt::new(&self.num + &rhs.num, self.den.clone());
        }
        ScalarQt::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a ScalarQt> for &'a ScalarQt {
    type Output = ScalarQt;
    fn sub(self, rhs: &ScalarQt) -> ScalarQt {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ScalarQt> for &'a ScalarQt {
    type Output = ScalarQt;
    fn mul(self, rhs: &ScalarQt) -> ScalarQt {
        if self.is_zero() || rhs.is_zero() {
            return ScalarQt::zero();
        }
        ScalarQt::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a ScalarQt> for &'a ScalarQt {
    type Output = ScalarQt;
    fn div(self, rhs: &ScalarQt) -> ScalarQt {
        assert!(!rhs.is_zero(), "ScalarQt division by zero");
        ScalarQt::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &ScalarQt {
    type Output = ScalarQt;
    fn neg(self) -> ScalarQt {
        ScalarQt { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ScalarQt> for ScalarQt {
            type Output = ScalarQt;
            fn $m(self, rhs: ScalarQt) -> ScalarQt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Display for ScalarQt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for ScalarQt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarQt({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};
    use proptest::prelude::*;

    fn rf(n: &[i64], d: &[i64]) -> ScalarQt {
        ScalarQt::new(
            Poly::from_coeffs(n.iter().map(|&c| q(c)).collect()),
            Poly::from_coeffs(d.iter().map(|&c| q(c)).collect()),
        )
    }

    #[test]
    fn reduction_is_canonical() {
        // (t^2 - 1) / (2t - 2) = (t + 1)/2
        let a = rf(&[-1, 0, 1], &[-2, 2]);
        assert_eq!(a, ScalarQt::from_poly(Poly::from_coeffs(vec![qf(1, 2), qf(1, 2)])));
        assert!(a.denom().is_one());
    }

    #[test]
    fn series_of_geometric() {
        // 1/(1 - t) = 1 + t + t^2 + ...
        let a = rf(&[1], &[1, -1]);
        assert_eq!(a.series(3).unwrap(), vec![q(1), q(1), q(1), q(1)]);
        let pole = rf(&[1], &[0, 1]);
        assert!(pole.series(1).is_err());
        assert_eq!(pole.valuation(), Some(-1));
    }

    #[test]
    fn list_roundtrip() {
        let a = rf(&[3, 0, -2], &[5, 1]);
        assert_eq!(ScalarQt::parse_list(&a.to_list()).unwrap(), a);
        assert_eq!(ScalarQt::parse_list(&ScalarQt::zero().to_list()).unwrap(), ScalarQt::zero());
    }

    fn small_rf() -> impl Strategy<Value = ScalarQt> {
        (prop::collection::vec(-4i64..5, 0..4), prop::collection::vec(-4i64..5, 1..4)).prop_filter_map(
            "nonzero denominator",
            |(n, d)| {
                let den = Poly::from_coeffs(d.iter().map(|&c| q(c)).collect());
                (!den.is_zero()).then(|| ScalarQt::new(Poly::from_coeffs(n.iter().map(|&c| q(c)).collect()), den))
            },
        )
    }

    proptest! {
        #[test]
        fn field_laws(a in small_rf(), b in small_rf(), c in small_rf()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a);
            }
        }
    }
}
