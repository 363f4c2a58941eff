//! Exact rational helpers shared by the identity checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Sum by balanced splitting. Mixing small and large denominators pairwise
/// keeps intermediate gcds cheap compared with a left fold.
pub fn sum_balanced(mut terms: Vec<BigRational>) -> BigRational {
    if terms.is_empty() {
        return BigRational::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

/// Decimal numerator and denominator strings, denominator positive.
pub fn to_strings(q: &BigRational) -> (String, String) {
    (q.numer().to_string(), q.denom().to_string())
}

/// Serde adapter writing a rational as `{"num": "..", "den": ".."}`.
pub fn serialize_ratio<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let (num, den) = to_strings(q);
    let mut st = s.serialize_struct("Rational", 2)?;
    st.serialize_field("num", &num)?;
    st.serialize_field("den", &den)?;
    st.end()
}

/// Nearest `f64`, also for values whose parts overflow `f64`.
pub fn to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = 60 - (nb - db);
    let scaled = if shift >= 0 {
        (q.numer() << shift as usize) / q.denom()
    } else {
        q.numer() / (q.denom() << (-shift) as usize)
    };
    let mantissa = scaled.to_f64().unwrap_or(0.0);
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * mantissa.abs() * 2f64.powi(-shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_sum_of_harmonic_terms() {
        let terms: Vec<_> = (1..=10).map(|n| ratio(1, n)).collect();
        assert_eq!(sum_balanced(terms), ratio(7381, 2520));
        assert_eq!(sum_balanced(Vec::new()), BigRational::zero());
    }

    #[test]
    fn float_conversion_of_huge_parts() {
        let big = BigInt::from(10).pow(400);
        let q = BigRational::new(big.clone() * 3, big * 7);
        assert!((to_f64(&q) - 3.0 / 7.0).abs() < 1e-15);
        let q = BigRational::new(-BigInt::from(10).pow(350), BigInt::from(10).pow(349));
        assert!((to_f64(&q) + 10.0).abs() < 1e-12);
        assert_eq!(to_strings(&ratio(-2, 4)), ("-1".to_string(), "2".to_string()));
    }
}
