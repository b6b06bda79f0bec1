//! Exact integer and rational arithmetic.
//!
//! [`Integer`] and [`Rational`] are thin newtypes over `num-bigint`'s `BigInt`
//! and `num-rational`'s `BigRational`. The wrappers keep the canonical form
//! (reduced, positive denominator) as a public invariant and turn the
//! division-by-zero panics of the backing crate into [`ExactError`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid number literal `{0}`")]
    InvalidLiteral(String),
}

/// Arbitrary-precision signed integer.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Integer(BigInt);

impl Integer {
    pub fn zero() -> Self {
        Integer(BigInt::zero())
    }

    pub fn one() -> Self {
        Integer(BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.0.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Integer(self.0.abs())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        Integer(self.0.gcd(&other.0))
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Integer(self.0.lcm(&other.0))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Integer(num_traits::Pow::pow(&self.0, exp))
    }

    /// Number of decimal digits of the magnitude.
    pub fn decimal_digits(&self) -> usize {
        self.0.abs().to_str_radix(10).len()
    }

    pub fn checked_div_exact(&self, other: &Self) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Integer(&self.0 / &other.0))
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }

    pub fn as_bigint(&self) -> &BigInt {
        &self.0
    }
}

impl From<i64> for Integer {
    fn from(v: i64) -> Self {
        Integer(BigInt::from(v))
    }
}

impl From<BigInt> for Integer {
    fn from(v: BigInt) -> Self {
        Integer(v)
    }
}

impl FromStr for Integer {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ExactError::InvalidLiteral(s.to_string()));
        }
        t.parse::<BigInt>()
            .map(Integer)
            .map_err(|_| ExactError::InvalidLiteral(s.to_string()))
    }
}

impl fmt::Display for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! int_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Integer> for &Integer {
            type Output = Integer;
            fn $m(self, rhs: &Integer) -> Integer {
                Integer($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr for Integer {
            type Output = Integer;
            fn $m(self, rhs: Integer) -> Integer {
                Integer($tr::$m(self.0, rhs.0))
            }
        }
    };
}
int_binop!(Add, add);
int_binop!(Sub, sub);
int_binop!(Mul, mul);

impl Neg for Integer {
    type Output = Integer;
    fn neg(self) -> Integer {
        Integer(-self.0)
    }
}

/// Exact rational number, always stored reduced with a positive denominator.
///
/// Structural equality is numeric equality because of the canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// `numer / denom`, reduced. Fails when `denom` is zero.
    pub fn new(numer: Integer, denom: Integer) -> Result<Self, ExactError> {
        if denom.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.0, denom.0)))
    }

    pub fn from_ints(numer: i64, denom: i64) -> Result<Self, ExactError> {
        Self::new(Integer::from(numer), Integer::from(denom))
    }

    pub fn from_integer(v: Integer) -> Self {
        Rational(BigRational::from_integer(v.0))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> Integer {
        Integer(self.0.numer().clone())
    }

    pub fn denom(&self) -> Integer {
        Integer(self.0.denom().clone())
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn signum(&self) -> i8 {
        self.numer().signum()
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self, ExactError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    /// Nearest-ish double; exact for small values, correctly scaled for huge ones.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<Integer> for Rational {
    fn from(v: Integer) -> Self {
        Rational::from_integer(v)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

/// Parses `p` or `p/q` with decimal integers; `q` must be non-zero.
impl FromStr for Rational {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('/') {
            None => Ok(Rational::from_integer(s.parse()?)),
            Some((n, d)) => {
                let d = d.trim();
                if d.starts_with(['-', '+']) {
                    return Err(ExactError::InvalidLiteral(s.to_string()));
                }
                Rational::new(n.parse()?, d.parse()?)
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident, $tra:ident, $ma:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational($tr::$m(self.0, rhs.0))
            }
        }
        impl $tra<&Rational> for Rational {
            fn $ma(&mut self, rhs: &Rational) {
                $tra::$ma(&mut self.0, &rhs.0)
            }
        }
    };
}
rat_binop!(Add, add, AddAssign, add_assign);
rat_binop!(Sub, sub, SubAssign, sub_assign);
rat_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

pub fn rat_add(a: &Rational, b: &Rational) -> Rational {
    a + b
}

pub fn rat_mul(a: &Rational, b: &Rational) -> Rational {
    a * b
}

pub fn rat_inv(a: &Rational) -> Result<Rational, ExactError> {
    a.inv()
}
