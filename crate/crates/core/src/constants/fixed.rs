//! Binary fixed-point numbers backed by `BigInt`.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Neg, Sub};

pub const FRAC_BITS: u32 = 320;

/// Absolute error allowance for a chain of fixed-point operations.
pub fn rounding_allowance() -> f64 {
    2f64.powi(-(FRAC_BITS as i32 - 64))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn one() -> Self {
        Fixed(BigInt::one() << FRAC_BITS)
    }

    pub fn from_int(n: i64) -> Self {
        Fixed(BigInt::from(n) << FRAC_BITS)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        Fixed((num << FRAC_BITS) / den)
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_ratio(q.numer(), q.denom())
    }

    /// Parse a plain decimal literal such as `-3.1415`.
    pub fn from_decimal(s: &str) -> Self {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let digits: BigInt = format!("{int_part}{frac_part}").parse().expect("decimal literal");
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let v = Self::from_ratio(&digits, &den);
        if neg {
            -v
        } else {
            v
        }
    }

    pub fn raw(&self) -> &BigInt {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    pub fn div(&self, other: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &other.0)
    }

    pub fn div_int(&self, d: i64) -> Fixed {
        Fixed(&self.0 / BigInt::from(d))
    }

    pub fn mul_int(&self, m: i64) -> Fixed {
        Fixed(&self.0 * m)
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.0.bits().saturating_sub(60);
        let top = (&self.0 >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - FRAC_BITS as i32)
    }

    /// `exp(x)`, halving the argument until it is below 1/2 and squaring back.
    pub fn exp(&self) -> Fixed {
        let mut halvings = 0;
        let mut x = self.clone();
        let half = Fixed::one().div_int(2);
        while x.abs() > half {
            x = x.div_int(2);
            halvings += 1;
        }
        let mut sum = Fixed::one();
        let mut term = Fixed::one();
        for k in 1.. {
            term = (&term * &x).div_int(k);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        for _ in 0..halvings {
            sum = &sum * &sum;
        }
        sum
    }

    /// `ln(1 + u)` for `|u| < 1/2`, through `2 atanh(u / (2 + u))`.
    pub fn ln_1p(&self) -> Fixed {
        assert!(self.abs() < Fixed::one().div_int(2), "ln_1p argument out of range");
        let z = self.div(&(&Fixed::from_int(2) + self));
        let z2 = &z * &z;
        let mut power = z.clone();
        let mut sum = Fixed::zero();
        for k in (1i64..).step_by(2) {
            let term = power.div_int(k);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
            power = &power * &z2;
        }
        sum.mul_int(2)
    }

    /// Decimal string rounded half away from zero to `digits` places.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits as usize);
        let scaled = self.0.abs() * scale;
        let half = BigInt::one() << (FRAC_BITS - 1);
        let rounded: BigInt = (scaled + half) >> FRAC_BITS;
        let s = rounded.to_str_radix(10);
        let d = digits as usize;
        let padded = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
        let (int_part, frac_part) = padded.split_at(padded.len() - d);
        let sign = if self.0.sign() == Sign::Minus && rounded_nonzero(&padded) { "-" } else { "" };
        if d == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

fn rounded_nonzero(s: &str) -> bool {
    s.bytes().any(|b| b != b'0')
}

impl<'a> Add<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn mul(self, rhs: &Fixed) -> Fixed {
        // truncate toward zero so that series terms of either sign reach 0
        let p = &self.0 * &rhs.0;
        if p.is_negative() {
            Fixed(-((-p) >> FRAC_BITS))
        } else {
            Fixed(p >> FRAC_BITS)
        }
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-self.0)
    }
}
