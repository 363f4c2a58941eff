//! Euler-product constants, `f(K)` and the root of `K/4 = f(K)`.

pub mod euler;
pub mod fixed;
pub mod zeta;

pub use euler::{EulerProductSpec, LocalFactor, ProductEvaluation};

use crate::error::{Error, Result};
use crate::exact::{int, ratio};
use fixed::{rounding_allowance, Fixed};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use std::sync::OnceLock;

/// pi to 50 decimals (standard published expansion).
pub const PI_LITERAL: &str = "3.14159265358979323846264338327950288419716939937510";
/// Euler-Mascheroni constant to 50 decimals (standard published expansion).
pub const GAMMA_LITERAL: &str = "0.57721566490153286060651209008240243104215933593992";
/// Absolute error of the literals above.
const LITERAL_ERROR: f64 = 1e-50;

pub const MAX_DIGITS: u32 = 30;
pub const DEFAULT_CUTOFF: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantValue {
    pub name: String,
    /// Decimal rounded to `digits` places.
    pub value: String,
    /// Bound on `|value - limit|`, rounding included.
    pub error_bound: f64,
    pub digits: u32,
}

impl ConstantValue {
    fn new(name: &str, value: &Fixed, computed_error: f64, digits: u32) -> Self {
        let error_bound = computed_error + 0.5 * 10f64.powi(-(digits as i32));
        debug_assert!(error_bound < 10f64.powi(-(digits as i32)));
        ConstantValue {
            name: name.to_string(),
            value: value.to_decimal(digits),
            error_bound,
            digits,
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.value.parse().expect("decimal string")
    }
}

fn check_digits(digits: u32) -> Result<()> {
    if !(1..=MAX_DIGITS).contains(&digits) {
        return Err(Error::InvalidArgument(format!(
            "digits must lie in [1, {MAX_DIGITS}], got {digits}"
        )));
    }
    Ok(())
}

fn product_constant(factor: LocalFactor, name: &str, digits: u32, cutoff: u64) -> Result<ConstantValue> {
    check_digits(digits)?;
    let e = euler::evaluate(factor, cutoff)?;
    Ok(ConstantValue::new(name, &e.value, e.error_bound, digits))
}

/// `prod_p (1 - 1/(p(p-1)))`.
pub fn artin_constant(digits: u32) -> Result<ConstantValue> {
    artin_constant_with_cutoff(digits, DEFAULT_CUTOFF)
}

pub fn artin_constant_with_cutoff(digits: u32, cutoff: u64) -> Result<ConstantValue> {
    product_constant(LocalFactor::Artin, "artin", digits, cutoff)
}

/// `prod_p (1 - p/(p^3 - 1))`.
pub fn stephens_constant(digits: u32) -> Result<ConstantValue> {
    stephens_constant_with_cutoff(digits, DEFAULT_CUTOFF)
}

pub fn stephens_constant_with_cutoff(digits: u32, cutoff: u64) -> Result<ConstantValue> {
    product_constant(LocalFactor::Stephens, "stephens", digits, cutoff)
}

fn pi() -> Fixed {
    Fixed::from_decimal(PI_LITERAL)
}

fn exp_gamma() -> Fixed {
    Fixed::from_decimal(GAMMA_LITERAL).exp()
}

/// `6 / (pi^2 e^gamma)` together with its absolute error.
fn theorem12_fixed() -> (Fixed, f64) {
    let pi = pi();
    let v = Fixed::from_int(6).div(&(&(&pi * &pi) * &exp_gamma()));
    // relative sensitivity is 2 (pi) + 1 (gamma), times the value
    (v, 4.0 * LITERAL_ERROR + rounding_allowance())
}

/// `6 / (pi^2 e^gamma)`.
pub fn theorem12_constant(digits: u32) -> Result<ConstantValue> {
    check_digits(digits)?;
    let (v, err) = theorem12_fixed();
    Ok(ConstantValue::new("theorem12", &v, err, digits))
}

/// `(36 / (pi^4 e^{2 gamma})) (prod_p (1 + 1/(p^5 + p^4 - p^3 - p^2)) - 1)`.
pub fn theorem13_constant(digits: u32) -> Result<ConstantValue> {
    check_digits(digits)?;
    let (c12, c12_err) = theorem12_fixed();
    let product = euler::evaluate(LocalFactor::Theorem13, DEFAULT_CUTOFF)?;
    let excess = &product.value - &Fixed::one();
    let v = &(&c12 * &c12) * &excess;
    // |d(a^2 b)| <= 2 a b da + a^2 db with a < 1, b < 1
    let err = 2.0 * c12_err + product.error_bound + rounding_allowance();
    Ok(ConstantValue::new("theorem13", &v, err, digits))
}

pub fn theorem12_f64() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| theorem12_fixed().0.to_f64())
}

pub fn theorem13_f64() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| theorem13_constant(20).expect("valid digits").as_f64())
}

/// The two per-prime factor forms `1 + (1 + 1/p)^{-2} p^{-5} (1 - 1/p)^{-1}`
/// and `1 + 1/(p^5 + p^4 - p^3 - p^2)`.
pub fn theorem13_factor_forms(p: u64) -> (BigRational, BigRational) {
    let inv = ratio(1, p);
    let one = BigRational::one();
    let a = (&one + &inv).recip();
    let first = &one + &a * &a * num_traits::pow(inv.clone(), 5) * (&one - &inv).recip();
    let p = int(p);
    let d = num_traits::pow(p.clone(), 5) + num_traits::pow(p.clone(), 4) - num_traits::pow(p.clone(), 3) - &p * &p;
    let second = &one + d.recip();
    (first, second)
}

/// Primes `p <= limit` at which the two factor forms differ.
pub fn theorem13_identity_failures(limit: u64) -> Vec<u64> {
    crate::arith::primes_up_to(limit as u32)
        .into_iter()
        .map(u64::from)
        .filter(|&p| {
            let (a, b) = theorem13_factor_forms(p);
            a != b
        })
        .collect()
}

/// `f(K) = (log(K^2/2 + 1) + 1) / K`.
pub fn f_of_k(k: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidArgument(format!("K must be positive, got {k}")));
    }
    Ok(((k * k / 2.0 + 1.0).ln() + 1.0) / k)
}

fn g(k: f64) -> f64 {
    k / 4.0 - f_of_k(k).expect("positive K")
}

pub const RHO1_BRACKET: (f64, f64) = (1.0, 10.0);
pub const MIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rho1Root {
    pub root: f64,
    pub tolerance: f64,
    /// Decimal places implied by the tolerance.
    pub decimals: u32,
}

impl Rho1Root {
    pub fn to_decimal_string(&self) -> String {
        format!("{:.*}", self.decimals as usize, self.root)
    }
}

/// Positive root of `K/4 = f(K)` by bisection.
pub fn rho1_root(tolerance: f64) -> Result<Rho1Root> {
    if !(tolerance.is_finite() && tolerance >= MIN_TOLERANCE) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be at least {MIN_TOLERANCE:e}, got {tolerance}"
        )));
    }
    let (mut lo, mut hi) = RHO1_BRACKET;
    if !(g(lo) < 0.0 && g(hi) > 0.0) {
        return Err(Error::Inconsistent("bisection bracket does not change sign".into()));
    }
    // run well past the tolerance so the rounded output is stable
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let decimals = (-tolerance.log10() - 1e-9).ceil().max(0.0) as u32;
    Ok(Rho1Root { root: 0.5 * (lo + hi), tolerance, decimals })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rho1Diagnostics {
    pub g_at_1: f64,
    pub g_at_10: f64,
    /// `g` strictly increasing on a grid of 10^4 points in `[1, 10]`.
    pub sampled_monotone: bool,
    /// `f(3.419906) - 3.419906/4`
    pub threshold_gap: f64,
    pub f_at_4_18: f64,
    pub f_at_4_87: f64,
}

impl Rho1Diagnostics {
    pub fn holds(&self) -> bool {
        self.g_at_1 < 0.0 && self.g_at_10 > 0.0 && self.sampled_monotone && self.threshold_gap < 1e-6
    }
}

pub fn rho1_diagnostics() -> Rho1Diagnostics {
    let samples: Vec<f64> = (0..=10_000).map(|i| g(1.0 + 9.0 * i as f64 / 10_000.0)).collect();
    Rho1Diagnostics {
        g_at_1: g(1.0),
        g_at_10: g(10.0),
        sampled_monotone: samples.windows(2).all(|w| w[1] > w[0]),
        threshold_gap: f_of_k(3.419906).unwrap() - 3.419906 / 4.0,
        f_at_4_18: f_of_k(4.18).unwrap(),
        f_at_4_87: f_of_k(4.87).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn artin_examples() {
        let v6 = artin_constant(6).unwrap();
        assert_eq!(v6.value, "0.373956");
        assert!(v6.error_bound < 1e-6);
        assert_eq!(artin_constant(1).unwrap().value, "0.4");
        let v10 = artin_constant(10).unwrap();
        assert!((v10.as_f64() - v6.as_f64()).abs() <= 5e-7);
        let v30 = artin_constant(30).unwrap();
        assert!(v30.error_bound < 1e-30);
        assert!(artin_constant(0).is_err());
        assert!(artin_constant(31).is_err());
    }

    #[test]
    fn published_expansions() {
        assert_eq!(artin_constant(30).unwrap().value, "0.373955813619202288054728054346");
        assert_eq!(stephens_constant(30).unwrap().value, "0.575959968892945439643163375492");
    }

    #[test]
    fn stephens_examples() {
        assert_eq!(stephens_constant(6).unwrap().value, "0.575960");
        assert_eq!(stephens_constant(1).unwrap().value, "0.6");
    }

    #[test]
    fn cutoff_doubling_is_stable() {
        for digits in [10, 20, 30] {
            assert_eq!(
                artin_constant_with_cutoff(digits, 1000).unwrap().value,
                artin_constant_with_cutoff(digits, 2000).unwrap().value
            );
            assert_eq!(
                stephens_constant_with_cutoff(digits, 1000).unwrap().value,
                stephens_constant_with_cutoff(digits, 2000).unwrap().value
            );
        }
    }

    #[test]
    fn theorem_constants() {
        assert_eq!(theorem12_constant(6).unwrap().value, "0.341326");
        assert_eq!(theorem12_constant(2).unwrap().value, "0.34");
        // 0.00369289..., quoted in the literature truncated as 0.003692
        let c13 = theorem13_constant(10).unwrap();
        assert_eq!(c13.value, "0.0036928942");
        assert!((c13.as_f64() - 0.003692).abs() < 5e-6);
        // twice 3/(pi^2 e^gamma)
        let pi = std::f64::consts::PI;
        let gamma = 0.577_215_664_901_532_9_f64;
        let half = 3.0 / (pi * pi * gamma.exp());
        assert!((theorem12_f64() - 2.0 * half).abs() < 1e-15);
    }

    #[test]
    fn factor_forms_agree() {
        assert!(theorem13_identity_failures(100).is_empty());
        let (a, b) = theorem13_factor_forms(2);
        assert_eq!(a, ratio(37, 36));
        assert_eq!(b, ratio(37, 36));
        let (a, b) = theorem13_factor_forms(3);
        assert_eq!(a, b);
    }

    #[test]
    fn f_examples() {
        assert!(f_of_k(0.0).is_err());
        assert!(f_of_k(-1.0).is_err());
        assert!(f_of_k(1e-8).unwrap() > 1e7);
        assert!(f_of_k(3.42).unwrap() < 3.42 / 4.0);
    }

    #[test]
    fn rho1_examples() {
        let r = rho1_root(1e-7).unwrap();
        assert_eq!(r.to_decimal_string(), "3.4199057");
        assert!((r.root - 3.4199057).abs() < 1e-7);
        let r6 = rho1_root(1e-6).unwrap();
        assert_eq!(r6.to_decimal_string(), "3.419906");
        assert!(g(r.root).abs() < 1e-7);
        assert!((f_of_k(r.root).unwrap() - 0.854976).abs() < 1e-6);
        assert!(rho1_root(1e-13).is_err());
        assert!(rho1_diagnostics().holds());
    }
}
