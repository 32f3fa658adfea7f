//! Exact rational numbers for DoF values.
//!
//! Every closed-form sum DoF is a ratio of small integers, so all formula
//! evaluation and LP corner enumeration runs on [`Rational`], a canonical
//! arbitrary-precision fraction. Intermediate values (for example
//! `1 - M1/N1`) may be negative; DoF results themselves never are.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{DofError, Result};

/// Canonical fraction `numer / denom` with `denom > 0` and `gcd = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num / den` in lowest terms. `den` must be strictly positive.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(DofError::InvalidArgument(format!(
                "rational denominator must be positive, got {den}"
            )));
        }
        Ok(Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    /// Convenience for counts, which are the usual inputs of the DoF formulas.
    pub fn from_count(value: usize) -> Self {
        Rational(BigRational::from_integer(BigInt::from(value)))
    }

    /// `a / b` for counts; `b` must be nonzero.
    pub fn ratio(a: usize, b: usize) -> Result<Self> {
        if b == 0 {
            return Err(DofError::InvalidArgument(
                "rational denominator must be positive, got 0".into(),
            ));
        }
        Ok(Rational(BigRational::new(BigInt::from(a), BigInt::from(b))))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// `max(0, self)`.
    pub fn positive_part(&self) -> Self {
        if self.0.is_negative() {
            Rational::zero()
        } else {
            self.clone()
        }
    }

    /// Division; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Rational) -> Option<Rational> {
        if rhs.is_zero() {
            None
        } else {
            Some(Rational(&self.0 / &rhs.0))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Always `p/q`, including integers (`10/1`).
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    /// Fixed-point decimal with `places` digits, rounded half away from zero
    /// using exact integer arithmetic.
    pub fn to_decimal_string(&self, places: usize) -> String {
        let scale = BigInt::from(10u32).pow(places as u32);
        let numer = self.0.numer().abs() * &scale;
        let denom = self.0.denom();
        let mut q = &numer / denom;
        let r = &numer % denom;
        if r * 2 >= *denom {
            q += 1;
        }
        let digits = q.to_string();
        let (int_part, frac_part) = if places == 0 {
            (digits, String::new())
        } else if digits.len() > places {
            let split = digits.len() - places;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            ("0".to_string(), format!("{digits:0>places$}"))
        };
        let sign = if self.0.numer().sign() == Sign::Minus && q_nonzero(&int_part, &frac_part) {
            "-"
        } else {
            ""
        };
        if places == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

fn q_nonzero(int_part: &str, frac_part: &str) -> bool {
    int_part.chars().chain(frac_part.chars()).any(|c| c != '0')
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
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
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl From<usize> for Rational {
    fn from(value: usize) -> Self {
        Rational::from_count(value)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// Panics on a zero divisor, like integer division. Use
/// [`Rational::checked_div`] when the divisor may vanish.
impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("division of Rational by zero")
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// Smallest element; ties keep the earliest. `None` for an empty iterator.
pub fn min_of<I: IntoIterator<Item = Rational>>(items: I) -> Option<Rational> {
    items.into_iter().reduce(|a, b| if b < a { b } else { a })
}

/// Largest element; ties keep the earliest.
pub fn max_of<I: IntoIterator<Item = Rational>>(items: I) -> Option<Rational> {
    items.into_iter().reduce(|a, b| if b.cmp(&a) == Ordering::Greater { b } else { a })
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_fraction_string())
    }
}
