//! `zeta(t)` at integers `t >= 2` by Euler-Maclaurin summation.

use super::fixed::Fixed;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

const HEAD_TERMS: u64 = 100;
const CORRECTION_TERMS: usize = 40;

/// `B_0, B_1, ..., B_m` with `B_1 = -1/2`.
pub fn bernoulli_numbers(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    b.push(BigRational::one());
    for n in 1..=m {
        // sum_{k=0}^{n} C(n+1, k) B_k = 0
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += bk * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// `B_{2j} / (2j)!` for `j = 1..=CORRECTION_TERMS + 1`.
fn scaled_bernoulli() -> &'static [BigRational] {
    static CACHE: OnceLock<Vec<BigRational>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let b = bernoulli_numbers(2 * CORRECTION_TERMS + 2);
        let mut fact = BigInt::one();
        let mut out = Vec::new();
        for (i, bi) in b.iter().enumerate().skip(1) {
            fact *= BigInt::from(i);
            if i % 2 == 0 {
                out.push(bi / BigRational::from_integer(fact.clone()));
            }
        }
        out
    })
}

#[derive(Debug, Clone)]
pub struct ZetaValue {
    pub value: Fixed,
    /// Bound on the Euler-Maclaurin remainder (rounding excluded).
    pub remainder_bound: f64,
}

fn rational_fixed(num: BigInt, den: BigInt) -> Fixed {
    Fixed::from_ratio(&num, &den)
}

/// `zeta(t)` for an integer `t >= 2`.
pub fn zeta(t: u32) -> ZetaValue {
    assert!(t >= 2, "zeta needs t >= 2");
    let n = BigInt::from(HEAD_TERMS);
    let one = BigInt::one();
    let mut sum = Fixed::zero();
    for k in 1..HEAD_TERMS {
        sum = &sum + &rational_fixed(one.clone(), num_traits::pow(BigInt::from(k), t as usize));
    }
    let n_pow_t = num_traits::pow(n.clone(), t as usize);
    // N^{1-t} / (t - 1) + N^{-t} / 2
    sum = &sum + &rational_fixed(n.clone(), &n_pow_t * BigInt::from(t - 1));
    sum = &sum + &rational_fixed(one.clone(), &n_pow_t * 2);

    let coeffs = scaled_bernoulli();
    // rising factorial t (t+1) ... (t + 2j - 2) and N^{t + 2j - 1}
    let mut rising = BigInt::from(t);
    let mut n_pow = &n_pow_t * &n;
    let mut remainder_bound = 0.0;
    for (j, c) in coeffs.iter().enumerate() {
        let term = c * BigRational::new(rising.clone(), n_pow.clone());
        if j == CORRECTION_TERMS {
            remainder_bound = 2.0 * term.abs().to_f64().unwrap_or(f64::INFINITY);
            break;
        }
        sum = &sum + &Fixed::from_rational(&term);
        let base = BigInt::from(t as usize + 2 * j + 1);
        rising = rising * &base * (&base + 1);
        n_pow = n_pow * &n * &n;
    }
    ZetaValue { value: sum, remainder_bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], ratio(-1, 2));
        assert_eq!(b[2], ratio(1, 6));
        assert_eq!(b[4], ratio(-1, 30));
        assert_eq!(b[3], ratio(0, 1));
        assert_eq!(b[12], ratio(-691, 2730));
    }

    #[test]
    fn zeta_even_values() {
        // zeta(2) = pi^2/6, zeta(4) = pi^4/90
        let pi = Fixed::from_decimal(super::super::PI_LITERAL);
        let pi2 = &pi * &pi;
        let z2 = zeta(2);
        assert_eq!(z2.value.to_decimal(45), pi2.div_int(6).to_decimal(45));
        assert!(z2.remainder_bound < 1e-90);
        let z4 = zeta(4);
        assert_eq!(z4.value.to_decimal(45), (&pi2 * &pi2).div_int(90).to_decimal(45));
    }

    #[test]
    fn zeta_large_argument() {
        let z = zeta(40).value.to_f64();
        assert!((z - 1.0 - 2f64.powi(-40)).abs() < 1e-20);
    }
}
