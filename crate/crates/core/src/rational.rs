//! Exact rational exponents.
//!
//! Decay rates such as ν are carried as rationals so that the borderline
//! case ν = 1 can be dispatched by an exact comparison.

use core::cmp::Ordering;
use core::fmt;

use crate::{CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(CoreError::ZeroDenominator);
        }
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Ok(Rational {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub const fn integer(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 1 && self.den == 1
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Parses `p/q`, an integer, or a finite decimal such as `0.25`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| CoreError::InvalidParameter("rational numerator"))?;
            let q: i64 = q.trim().parse().map_err(|_| CoreError::InvalidParameter("rational denominator"))?;
            return Rational::new(p, q);
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(Rational::integer(n));
        }
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body
            .split_once('.')
            .ok_or(CoreError::InvalidParameter("rational literal"))?;
        if frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CoreError::InvalidParameter("rational literal"));
        }
        let int: i64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| CoreError::InvalidParameter("rational literal"))?
        };
        let scale = 10_i64.pow(frac.len() as u32);
        let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| CoreError::InvalidParameter("rational literal"))? };
        Rational::new(sign * (int * scale + frac), scale)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(Rational::parse("1/2").unwrap(), Rational::new(1, 2).unwrap());
        assert_eq!(Rational::parse("2/2").unwrap(), Rational::ONE);
        assert_eq!(Rational::parse("0.5").unwrap(), Rational::new(1, 2).unwrap());
        assert_eq!(Rational::parse("-3/6").unwrap(), Rational::new(-1, 2).unwrap());
        assert_eq!(Rational::parse(" 3 ").unwrap(), Rational::integer(3));
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("abc").is_err());
    }

    #[test]
    fn exact_one_dispatch() {
        assert!(Rational::parse("3/3").unwrap().is_one());
        assert!(!Rational::parse("1.000001").unwrap().is_one());
        assert!(Rational::new(2, 1).unwrap() > Rational::ONE);
    }
}
