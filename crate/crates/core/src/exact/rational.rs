//! Exact rational scalars and their text formats.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Digits carried by approximate square roots (well past the 10^-30 budget).
const SQRT_DIGITS: u32 = 48;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a/b"`, an integer, or a plain decimal such as `"-0.35"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::ParseRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = num_traits::pow(BigInt::from(10u8), frac.len());
    let r = Rational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// Canonical exact rendering: `"a/b"`, or `"a"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rounds to `places` digits after the decimal point (half away from zero).
pub fn to_fixed(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u8), places);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (q, rem) = rounded.div_rem(&scale);
    let mut out = String::new();
    if r.is_negative() && !rounded.is_zero() {
        out.push('-');
    }
    write!(out, "{q}").unwrap();
    if places > 0 {
        write!(out, ".{:0>width$}", rem.to_string(), width = places).unwrap();
    }
    out
}

/// Decimal rendering with `digits` significant digits; trailing zeros trimmed.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    // Position of the leading digit: 10^e <= |r| < 10^(e+1).
    let a = r.abs();
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let ten = int(10);
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            num_traits::pow(ten.clone(), (-k) as usize).recip()
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let places = (digits as i64 - 1 - e).max(0) as usize;
    let mut s = to_fixed(r, places);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Square root of a non-negative rational.
///
/// Exact when the argument is the square of a rational; otherwise a rational
/// within 10^-40 of the true root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sqrt {
    Exact(Rational),
    Approx(Rational),
}

impl Sqrt {
    pub fn value(&self) -> &Rational {
        match self {
            Sqrt::Exact(v) | Sqrt::Approx(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Sqrt::Exact(_))
    }
}

impl std::ops::Neg for Sqrt {
    type Output = Sqrt;

    fn neg(self) -> Sqrt {
        match self {
            Sqrt::Exact(v) => Sqrt::Exact(-v),
            Sqrt::Approx(v) => Sqrt::Approx(-v),
        }
    }
}

pub fn sqrt_rational(r: &Rational) -> Sqrt {
    assert!(!r.is_negative(), "square root of a negative rational");
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        return Sqrt::Exact(Rational::new(sn, sd));
    }
    // sqrt(n/d) = sqrt(n*d)/d, evaluated on a 10^SQRT_DIGITS grid.
    let scale = num_traits::pow(BigInt::from(10u8), SQRT_DIGITS as usize);
    let root = (n * d * &scale * &scale).sqrt();
    Sqrt::Approx(Rational::new(root, d * scale))
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && r <= &Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_fraction_and_decimal_forms() {
        assert_eq!(parse_rational("0.3").unwrap(), ratio(3, 10));
        assert_eq!(parse_rational("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational("2/6").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-3/-4").unwrap(), ratio(3, 4));
        for bad in ["", "1/0", "abc", "0.3.1", "-", ".", "1e5", "1/x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_fixed(&ratio(1, 3), 3), "0.333");
        assert_eq!(to_fixed(&ratio(-2, 3), 3), "-0.667");
        assert_eq!(to_fixed(&ratio(-1, 10000), 3), "0.000");
        assert_eq!(to_decimal(&ratio(1, 3), 12), "0.333333333333");
        assert_eq!(to_decimal(&ratio(1, 4), 12), "0.25");
        assert_eq!(to_decimal(&int(-12), 3), "-12");
        assert_eq!(to_decimal(&ratio(1, 700), 3), "0.00143");
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_rational(&ratio(9, 256)), Sqrt::Exact(ratio(3, 16)));
        let s = sqrt_rational(&int(2));
        assert!(!s.is_exact());
        let err = s.value() * s.value() - int(2);
        assert!(err.abs() < ratio(1, 10).pow(40));
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = ratio(n, d);
            prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }
}
