//! Arbitrary-precision rationals and their textual form.
//!
//! A rational is written `"p/q"` in lowest terms, or `"p"` when `q = 1`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().copied().map(int).collect()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Formats as `"p/q"`, or `"p"` for integers.
pub fn format(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::input(alloc::format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
    }
}

/// Converts an integral rational to `i64`, or `None` when it is fractional
/// or out of range.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if !q.denom().is_one() {
        return None;
    }
    i64::try_from(q.numer()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format(&Rational::new(BigInt::from(4), BigInt::from(-6))), "-2/3");
        assert_eq!(format(&int(7)), "7");
        assert_eq!(format(&zero()), "0");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse("6/4").unwrap(), Rational::new(3.into(), 2.into()));
        assert_eq!(parse(" -5 ").unwrap(), int(-5));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn huge_values_do_not_overflow() {
        let big = parse("123456789012345678901234567890/7").unwrap();
        let sq = &big * &big;
        assert_eq!(parse(&format(&sq)).unwrap(), sq);
    }
}
