//! Euler products `prod_p f(1/p)` for the fixed local factors.
//!
//! The product over `p <= P` is taken exactly. For the tail, write
//! `log f(x) = sum_{s >= 2} c_s x^s`, so that
//! `sum_{p > P} log f(1/p) = sum_s c_s P_{>P}(s)` with the prime zeta tail
//! `P_{>P}(s) = sum_k mu(k)/k log zeta_{>P}(k s)` and
//! `zeta_{>P}(t) = zeta(t) prod_{p <= P} (1 - p^{-t})`.

use super::fixed::{rounding_allowance, Fixed, FRAC_BITS};
use super::zeta::zeta;
use crate::arith::{mobius, primes_up_to};
use crate::error::{Error, Result};
use crate::exact::{int, ratio};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub const MIN_CUTOFF: u64 = 100;
pub const MAX_CUTOFF: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalFactor {
    /// `1 - 1/(p(p-1))`
    Artin,
    /// `1 - p/(p^3 - 1)`
    Stephens,
    /// `1 + 1/(p^5 + p^4 - p^3 - p^2)`
    Theorem13,
    /// `1 - 1/p^2`, whose product is `6/pi^2`.
    InverseZeta2,
}

impl LocalFactor {
    pub const ALL: [LocalFactor; 4] = [
        LocalFactor::Artin,
        LocalFactor::Stephens,
        LocalFactor::Theorem13,
        LocalFactor::InverseZeta2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LocalFactor::Artin => "artin",
            LocalFactor::Stephens => "stephens",
            LocalFactor::Theorem13 => "theorem13_product",
            LocalFactor::InverseZeta2 => "inverse_zeta2",
        }
    }

    /// Numerator and denominator of `f(x)` as coefficient lists in `x = 1/p`.
    fn polynomials(self) -> (&'static [i64], &'static [i64]) {
        match self {
            LocalFactor::Artin => (&[1, -1, -1], &[1, -1]),
            LocalFactor::Stephens => (&[1, 0, -1, -1], &[1, 0, 0, -1]),
            LocalFactor::Theorem13 => (&[1, 1, -1, -1, 0, 1], &[1, 1, -1, -1]),
            LocalFactor::InverseZeta2 => (&[1, 0, -1], &[1]),
        }
    }

    /// The local factor at `p`, exactly.
    pub fn at(self, p: u64) -> BigRational {
        let eval = |poly: &[i64]| {
            poly.iter()
                .enumerate()
                .map(|(i, &a)| ratio(a, num_traits::pow(BigInt::from(p), i)))
                .fold(BigRational::zero(), |acc, t| acc + t)
        };
        let (num, den) = self.polynomials();
        eval(num) / eval(den)
    }

    /// Bound on `|sum_{p > P} log f(1/p)|` from `|log(1 + h)| <= 2|h|` for
    /// `|h| <= 1/2` and `sum_{n > P} n^{-k} <= P^{1-k}/(k-1)`.
    pub fn naive_tail_bound(self, cutoff: u64) -> f64 {
        let p = cutoff as f64;
        match self {
            // h = 1/(p(p-1)) <= 1/(n-1)^2 summed over n > P
            LocalFactor::Artin => 2.0 / p,
            // h = p/(p^3-1) <= (8/7)/p^2
            LocalFactor::Stephens => 16.0 / (7.0 * p),
            // 0 < h <= 1/p^5 and log(1 + h) <= h
            LocalFactor::Theorem13 => 1.0 / (4.0 * p.powi(4)),
            LocalFactor::InverseZeta2 => 2.0 / p,
        }
    }

    /// Coefficients `c_0, ..., c_s_max` of `log f(x)`.
    pub fn log_coefficients(self, s_max: usize) -> Vec<BigRational> {
        let (num, den) = self.polynomials();
        let a = log_series(num, s_max);
        let b = log_series(den, s_max);
        a.into_iter().zip(b).map(|(x, y)| x - y).collect()
    }

    /// `(D, R)` with `|c_s| <= D R^s / s`: `D` counts roots, `R` bounds
    /// their reciprocals through the Cauchy bound.
    fn coefficient_envelope(self) -> (f64, f64) {
        let (num, den) = self.polynomials();
        let degree = (num.len() - 1 + den.len() - 1) as f64;
        let radius = num
            .iter()
            .chain(den)
            .skip(1)
            .map(|a| a.unsigned_abs() as f64)
            .fold(0.0, f64::max)
            + 1.0;
        (degree, radius)
    }
}

/// Power series of `log g(x)` for a polynomial with `g(0) = 1`.
fn log_series(poly: &[i64], s_max: usize) -> Vec<BigRational> {
    assert_eq!(poly[0], 1);
    let a = |i: usize| -> BigRational { int(poly.get(i).copied().unwrap_or(0)) };
    let mut c = vec![BigRational::zero(); s_max + 1];
    // g L' = g'  =>  s c_s = s a_s - sum_{k=1}^{s-1} k c_k a_{s-k}
    for s in 1..=s_max {
        let mut acc = a(s) * int(s as u64);
        for (k, ck) in c.iter().enumerate().take(s).skip(1) {
            acc -= ck * int(k as u64) * a(s - k);
        }
        c[s] = acc / int(s as u64);
    }
    c
}

/// Truncated product `prod_{p <= P} f(1/p)` with its elementary tail bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerProductSpec {
    pub name: String,
    pub local_factor: LocalFactor,
    pub prime_cutoff: u64,
    pub tail_bound: f64,
}

impl EulerProductSpec {
    pub fn new(local_factor: LocalFactor, prime_cutoff: u64) -> Result<Self> {
        if prime_cutoff < 2 {
            return Err(Error::InvalidArgument("prime cutoff must be at least 2".into()));
        }
        Ok(EulerProductSpec {
            name: local_factor.name().to_string(),
            local_factor,
            prime_cutoff,
            tail_bound: local_factor.naive_tail_bound(prime_cutoff),
        })
    }

    /// Partial product in floating point.
    pub fn partial_product(&self) -> f64 {
        primes_up_to(self.prime_cutoff as u32)
            .into_iter()
            .map(|p| self.local_factor.at(p as u64).to_f64().expect("finite"))
            .product()
    }

    /// Interval containing the full product.
    pub fn bracket(&self) -> (f64, f64) {
        let v = self.partial_product();
        let slack = 1e-15 * v;
        (v * (-self.tail_bound).exp() - slack, v * self.tail_bound.exp() + slack)
    }
}

#[derive(Debug, Clone)]
pub struct ProductEvaluation {
    pub factor: LocalFactor,
    pub cutoff: u64,
    pub value: Fixed,
    pub error_bound: f64,
}

/// Accelerated evaluation of the full product.
pub fn evaluate(factor: LocalFactor, cutoff: u64) -> Result<ProductEvaluation> {
    if !(MIN_CUTOFF..=MAX_CUTOFF).contains(&cutoff) {
        return Err(Error::InvalidArgument(format!(
            "prime cutoff must lie in [{MIN_CUTOFF}, {MAX_CUTOFF}], got {cutoff}"
        )));
    }
    let primes: Vec<u64> = primes_up_to(cutoff as u32).into_iter().map(u64::from).collect();
    let partial = primes
        .iter()
        .fold(BigRational::one(), |acc, &p| acc * factor.at(p));

    let target = 2f64.powi(-(FRAC_BITS as i32 - 64));
    let p = cutoff as f64;
    let (d, r) = factor.coefficient_envelope();
    // sum_{s > S} D R^s / s * P^{1-s} / (s-1) <= D P (R/P)^{S+1} / (1 - R/P)
    let s_tail = |s_max: usize| d * p * (r / p).powi(s_max as i32 + 1) / (1.0 - r / p);
    let mut s_max = 2;
    while s_tail(s_max) > target {
        s_max += 1;
    }
    // omitted zeta arguments t > T contribute at most sum_{t > T} P^{1-t} <= 2 P^{-T}
    let mut t_max = s_max;
    while 2.0 * p.powi(-(t_max as i32)) > target {
        t_max += 1;
    }

    let coeffs = factor.log_coefficients(s_max);
    assert!(coeffs[1].is_zero(), "log f(x) must start at x^2");

    // log zeta_{>P}(t) for t = 2..=T
    let mut log_zeta_tail = vec![Fixed::zero(); t_max + 1];
    let mut zeta_error = vec![0.0; t_max + 1];
    for t in 2..=t_max {
        let z = zeta(t as u32);
        let mut v = z.value;
        for &q in &primes {
            let inv = Fixed::from_ratio(&BigInt::one(), &num_traits::pow(BigInt::from(q), t));
            v = &v - &(&v * &inv);
        }
        log_zeta_tail[t] = (&v - &Fixed::one()).ln_1p();
        zeta_error[t] = 1.01 * z.remainder_bound;
    }

    let mut tail = Fixed::zero();
    let mut bound = s_tail(s_max);
    for (s, c) in coeffs.iter().enumerate().skip(2) {
        if c.is_zero() {
            continue;
        }
        let mut prime_zeta = Fixed::zero();
        let mut err = 2.0 * p.powi(-(t_max as i32));
        for k in 1..=t_max / s {
            let mu = mobius(k as u64).expect("positive");
            err += zeta_error[k * s] / k as f64;
            if mu == 0 {
                continue;
            }
            let term = log_zeta_tail[k * s].div_int(k as i64);
            prime_zeta = if mu > 0 { &prime_zeta + &term } else { &prime_zeta - &term };
        }
        tail = &tail + &(&Fixed::from_rational(c) * &prime_zeta);
        bound += c.abs().to_f64().unwrap_or(f64::INFINITY) * err;
    }
    bound += rounding_allowance();

    let value = &Fixed::from_rational(&partial) * &tail.exp();
    let magnitude = value.to_f64().abs();
    let error_bound = magnitude * bound.exp_m1() * 1.0001 + rounding_allowance();
    Ok(ProductEvaluation { factor, cutoff, value, error_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_factor_values() {
        assert_eq!(LocalFactor::Artin.at(2), ratio(1, 2));
        assert_eq!(LocalFactor::Artin.at(3), ratio(5, 6));
        assert_eq!(LocalFactor::Stephens.at(2), ratio(5, 7));
        assert_eq!(LocalFactor::Theorem13.at(2), ratio(37, 36));
        assert_eq!(LocalFactor::InverseZeta2.at(3), ratio(8, 9));
    }

    #[test]
    fn log_coefficients_vanish_at_first_order() {
        for f in LocalFactor::ALL {
            let c = f.log_coefficients(30);
            assert!(c[1].is_zero(), "{f:?}");
            let (d, r) = f.coefficient_envelope();
            for (s, cs) in c.iter().enumerate().skip(1) {
                assert!(cs.abs().to_f64().unwrap() <= d * r.powi(s as i32) / s as f64);
            }
        }
        // log(1 - x^2) = -x^2 - x^4/2 - ...
        let c = LocalFactor::InverseZeta2.log_coefficients(6);
        assert_eq!(c[2], ratio(-1, 1));
        assert_eq!(c[4], ratio(-1, 2));
        assert_eq!(c[6], ratio(-1, 3));
        assert!(c[3].is_zero());
    }

    #[test]
    fn inverse_zeta2_matches_pi() {
        let pi = Fixed::from_decimal(super::super::PI_LITERAL);
        let expected = Fixed::from_int(6).div(&(&pi * &pi));
        let got = evaluate(LocalFactor::InverseZeta2, 200).unwrap();
        assert!(got.error_bound < 1e-60);
        assert_eq!(got.value.to_decimal(40), expected.to_decimal(40));
    }

    #[test]
    fn naive_bracket_contains_accelerated_value() {
        for f in LocalFactor::ALL {
            let accurate = evaluate(f, 500).unwrap().value.to_f64();
            for cutoff in [10, 100, 1000] {
                let (lo, hi) = EulerProductSpec::new(f, cutoff).unwrap().bracket();
                assert!(lo <= accurate && accurate <= hi, "{f:?} at {cutoff}");
            }
        }
    }

    #[test]
    fn tail_bounds_shrink() {
        for f in LocalFactor::ALL {
            assert!(f.naive_tail_bound(2000) < f.naive_tail_bound(1000));
        }
    }

    #[test]
    fn cutoff_range_checked() {
        assert!(evaluate(LocalFactor::Artin, 10).is_err());
    }
}
