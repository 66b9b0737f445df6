use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::format_int_poly;
use super::{Polynomial, RatFuncError, Rational};

/// A ratio of two polynomials in `r`, kept in canonical form.
///
/// Canonical form: numerator and denominator share no common factor, the
/// denominator is monic, and zero is `0/1`. Two canonical values are equal
/// exactly when they denote the same function.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Polynomial::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().expect("nonzero denominator").recip();
        RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    /// The constant `n/d`. Panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(Rational::new(n.into(), d.into()))
    }

    /// The prevalence parameter `r` itself.
    pub fn param() -> Self {
        Self::from_poly(Polynomial::param())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Some(c) if the function does not depend on `r`.
    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Result<Self, RatFuncError> {
        if rhs.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        Ok(Self::normalize(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<Self, RatFuncError> {
        Self::one().checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact value at `r = at`.
    pub fn eval_at(&self, at: &Rational) -> Result<Rational, RatFuncError> {
        let den = self.den.eval(at);
        if den.is_zero() {
            return Err(RatFuncError::Pole(at.to_string()));
        }
        Ok(self.num.eval(at) / den)
    }

    /// Identity test by cross-multiplication: `a.num * b.den == b.num * a.den`.
    pub fn equals(&self, other: &RationalFunction) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Integer-coefficient numerator and denominator with no common
    /// integer content, signed so the lowest-order term of the
    /// denominator is positive.
    fn integer_form(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let (mut n, kn) = self.num.clear_denominators();
        let (mut d, kd) = self.den.clear_denominators();
        // num/den = (n/kn)/(d/kd) = (n*kd)/(d*kn)
        n.iter_mut().for_each(|c| *c *= &kd);
        d.iter_mut().for_each(|c| *c *= &kn);
        let content = n
            .iter()
            .chain(d.iter())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let flip = d
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative());
        let fix = |c: &mut BigInt| {
            *c = &*c / &content;
            if flip {
                *c = -&*c;
            }
        };
        if !content.is_zero() {
            n.iter_mut().for_each(fix);
            d.iter_mut().for_each(fix);
        }
        (n, d)
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for RationalFunction {}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for RationalFunction {
    fn from(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.integer_form();
        let nonzero_terms = |v: &[BigInt]| v.iter().filter(|c| !c.is_zero()).count();
        let num_s = format_int_poly(&n);
        let is_unit_den = d.len() == 1 && d[0].is_one();
        if is_unit_den {
            return f.write_str(&num_s);
        }
        let num_s = if nonzero_terms(&n) > 1 {
            format!("({num_s})")
        } else {
            num_s
        };
        let den_s = format_int_poly(&d);
        let plain_den = d.len() == 1
            || (nonzero_terms(&d) == 1 && d.last().is_some_and(|c| c.is_one()));
        if plain_den {
            write!(f, "{num_s}/{den_s}")
        } else {
            write!(f, "{num_s}/({den_s})")
        }
    }
}

impl FromStr for RationalFunction {
    type Err = RatFuncError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_function(s)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
        impl $trait<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                self.$method(&rhs)
            }
        }
    };
}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalize(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero, like integer division; use
/// [`RationalFunction::checked_div`] when the divisor may vanish.
impl Div for &RationalFunction {
    type Output = RationalFunction;

    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs)
            .expect("division by the zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        -&self
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Sum for RationalFunction {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a RationalFunction> for RationalFunction {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl Product for RationalFunction {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a RationalFunction> for RationalFunction {
    fn product<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}
