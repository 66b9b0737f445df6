use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RatFuncError;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Parses an integer (`-3`), a fraction (`1/50`) or a plain decimal (`0.02`).
pub fn parse_rational(input: &str) -> Result<Rational, RatFuncError> {
    let s = input.trim();
    let err = |message: &str, offset: usize| RatFuncError::Parse {
        input: input.to_string(),
        message: message.to_string(),
        offset,
    };
    if s.is_empty() {
        return Err(err("empty number", 0));
    }
    if let Some((p, q)) = s.split_once('/') {
        let num = parse_decimal(p.trim()).ok_or_else(|| err("bad numerator", 0))?;
        let den = parse_decimal(q.trim()).ok_or_else(|| err("bad denominator", p.len() + 1))?;
        if den.is_zero() {
            return Err(err("zero denominator", p.len() + 1));
        }
        return Ok(num / den);
    }
    parse_decimal(s).ok_or_else(|| err("not a number", 0))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(numer, denom);
    Some(if neg { -value } else { value })
}

/// Nearest integer, ties to even.
pub fn round_half_even(q: &Rational) -> BigInt {
    let floor = q.floor().to_integer();
    let frac = q - Rational::from_integer(floor.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => floor + 1,
        std::cmp::Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    }
}

/// Fixed-point rendering with `digits` places, rounded half-even.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = round_half_even(&(q * Rational::from_integer(scale.clone())));
    let negative = scaled.is_negative();
    let (int_part, frac_part) = scaled.abs().div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_rational("1/50").unwrap(), q(1, 50));
        assert_eq!(parse_rational("0.02").unwrap(), q(1, 50));
        assert_eq!(parse_rational("-3").unwrap(), q(-3, 1));
        assert_eq!(parse_rational(" .5 ").unwrap(), q(1, 2));
        assert_eq!(parse_rational("0.3/2").unwrap(), q(3, 20));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn half_even_rounding() {
        assert_eq!(round_half_even(&q(5, 2)), BigInt::from(2));
        assert_eq!(round_half_even(&q(7, 2)), BigInt::from(4));
        assert_eq!(round_half_even(&q(-5, 2)), BigInt::from(-2));
        assert_eq!(round_half_even(&q(-7, 2)), BigInt::from(-4));
        assert_eq!(round_half_even(&q(26, 10)), BigInt::from(3));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&q(17, 37), 5), "0.45946");
        assert_eq!(to_decimal(&q(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&q(1, 100), 4), "0.0100");
        assert_eq!(to_decimal(&q(-1, 8), 2), "-0.12");
        assert_eq!(to_decimal(&q(3, 8), 2), "0.38");
        assert_eq!(to_decimal(&q(7, 2), 0), "4");
        assert_eq!(to_decimal(&q(-1, 1000), 2), "0.00");
    }
}
