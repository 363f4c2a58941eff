//! Factorization and the multiplicative functions the rest of the crate is
//! built on: `phi`, `lambda`, `rad`, `mu`, `omega`, and multiplicative order.
//!
//! Everything hangs off [`FactoredInt`]. Free functions accept anything that
//! implements [`AsFactored`], so callers can pass either a raw `u64` (factored
//! on the spot) or a cached factorization.

mod prime;
mod sieve;

pub use prime::{is_prime, mul_mod, pow_mod, primes_up_to, TRIAL_DIVISION_LIMIT};
pub use sieve::FactorSieve;

use crate::error::{Error, Result};
use num_integer::Integer;
use serde::Serialize;
use std::borrow::Cow;
use std::fmt;

/// Largest input accepted by [`factorize`].
pub const MAX_FACTOR_INPUT: u64 = 1 << 63;

/// A positive integer together with its prime factorization, primes
/// strictly increasing.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FactoredInt {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl fmt::Debug for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)?;
        if !self.factors.is_empty() {
            write!(f, " = ")?;
            for (i, (p, e)) in self.factors.iter().enumerate() {
                if i > 0 {
                    write!(f, " * ")?;
                }
                if *e == 1 {
                    write!(f, "{p}")?;
                } else {
                    write!(f, "{p}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Factor `n` by trial division up to 10^6, then deterministic Miller-Rabin
/// and Pollard rho on whatever cofactor remains.
pub fn factorize(n: u64) -> Result<FactoredInt> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    crate::error::check_bound("n", n, MAX_FACTOR_INPUT)?;
    let mut rest = n;
    let mut factors = Vec::new();
    for &p in prime::small_primes() {
        let p = p as u64;
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        if rest < TRIAL_DIVISION_LIMIT * TRIAL_DIVISION_LIMIT || prime::is_prime(rest) {
            factors.push((rest, 1));
        } else {
            let mut large = Vec::new();
            prime::split_large(rest, &mut large);
            large.sort_unstable();
            for p in large {
                match factors.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }
    Ok(FactoredInt { value: n, factors })
}

impl FactoredInt {
    pub fn new(n: u64) -> Result<Self> {
        factorize(n)
    }

    pub fn one() -> Self {
        FactoredInt {
            value: 1,
            factors: Vec::new(),
        }
    }

    /// Build from a factorization that is already known to be valid.
    pub(crate) fn from_parts(value: u64, factors: Vec<(u64, u32)>) -> Self {
        debug_assert_eq!(
            factors.iter().map(|&(p, e)| p.pow(e)).product::<u64>(),
            value
        );
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        FactoredInt { value, factors }
    }

    /// Checked constructor from an explicit factorization.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value = 1u64;
        for (i, &(p, e)) in factors.iter().enumerate() {
            if e == 0 || !is_prime(p) {
                return Err(Error::InvalidArgument(format!("{p}^{e} is not a prime power")));
            }
            if i > 0 && factors[i - 1].0 >= p {
                return Err(Error::InvalidArgument("primes must be strictly increasing".into()));
            }
            value = p
                .checked_pow(e)
                .and_then(|q| value.checked_mul(q))
                .ok_or_else(|| Error::InvalidArgument("factorization overflows u64".into()))?;
        }
        Ok(FactoredInt { value, factors })
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// `p`-adic valuation.
    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e - 1) * (p - 1))
            .product()
    }

    /// Carmichael's function: lcm of `lambda(p^e)` over the prime powers.
    pub fn carmichael_lambda(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| prime_power_lambda(p, e))
            .fold(1, |acc, l| acc.lcm(&l))
    }

    pub fn rad(&self) -> u64 {
        self.primes().product()
    }

    pub fn mobius(&self) -> i8 {
        if self.is_squarefree() {
            if self.factors.len().is_multiple_of(2) {
                1
            } else {
                -1
            }
        } else {
            0
        }
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of divisors.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// All divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn profile(&self) -> MultiplicativeProfile {
        MultiplicativeProfile {
            n: self.clone(),
            phi: self.euler_phi(),
            lambda: self.carmichael_lambda(),
            rad: self.rad(),
            omega: self.omega(),
            mu: self.mobius(),
        }
    }

    /// Order of `a` in `(Z/nZ)*`.
    ///
    /// `lambda_factors` must be the factorization of `lambda(n)`; the order is
    /// found by stripping primes from `lambda(n)` while `a` still maps to 1.
    pub fn order_with(&self, a: u64, lambda_factors: &FactoredInt) -> Result<u64> {
        let n = self.value;
        let a = a % n.max(1);
        if n == 1 {
            return Ok(1);
        }
        if a.gcd(&n) != 1 {
            return Err(Error::NotCoprime { a, n });
        }
        let mut t = lambda_factors.value();
        for &(q, e) in lambda_factors.factors() {
            for _ in 0..e {
                if pow_mod(a, t / q, n) == 1 {
                    t /= q;
                } else {
                    break;
                }
            }
        }
        Ok(t)
    }

    pub fn multiplicative_order(&self, a: u64) -> Result<u64> {
        let lambda = factorize(self.carmichael_lambda())?;
        self.order_with(a, &lambda)
    }
}

/// `lambda(p^e)`: `p^(e-1)(p-1)` for odd `p`, `2^(e-1)` for `e <= 2`, `2^(e-2)` above.
pub fn prime_power_lambda(p: u64, e: u32) -> u64 {
    debug_assert!(e >= 1);
    if p == 2 {
        if e <= 2 {
            1 << (e - 1)
        } else {
            1 << (e - 2)
        }
    } else {
        p.pow(e - 1) * (p - 1)
    }
}

/// The multiplicative invariants of `n` in one place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicativeProfile {
    pub n: FactoredInt,
    pub phi: u64,
    pub lambda: u64,
    pub rad: u64,
    pub omega: u32,
    pub mu: i8,
}

/// Either a raw integer (factored on demand) or an existing factorization.
pub trait AsFactored {
    fn as_factored(&self) -> Result<Cow<'_, FactoredInt>>;
}

impl AsFactored for FactoredInt {
    fn as_factored(&self) -> Result<Cow<'_, FactoredInt>> {
        Ok(Cow::Borrowed(self))
    }
}

impl AsFactored for u64 {
    fn as_factored(&self) -> Result<Cow<'_, FactoredInt>> {
        factorize(*self).map(Cow::Owned)
    }
}

impl<T: AsFactored + ?Sized> AsFactored for &T {
    fn as_factored(&self) -> Result<Cow<'_, FactoredInt>> {
        (**self).as_factored()
    }
}

pub fn carmichael_lambda(n: impl AsFactored) -> Result<u64> {
    Ok(n.as_factored()?.carmichael_lambda())
}

pub fn euler_phi(n: impl AsFactored) -> Result<u64> {
    Ok(n.as_factored()?.euler_phi())
}

pub fn rad(n: impl AsFactored) -> Result<u64> {
    Ok(n.as_factored()?.rad())
}

pub fn mobius(n: impl AsFactored) -> Result<i8> {
    Ok(n.as_factored()?.mobius())
}

pub fn omega(n: impl AsFactored) -> Result<u32> {
    Ok(n.as_factored()?.omega())
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Smallest `t >= 1` with `a^t = 1 (mod n)`. Fails when `gcd(a, n) > 1`.
pub fn multiplicative_order(a: u64, n: impl AsFactored) -> Result<u64> {
    n.as_factored()?.multiplicative_order(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_order(a: u64, n: u64) -> u64 {
        if n == 1 {
            return 1;
        }
        let mut x = a % n;
        let mut t = 1;
        while x != 1 {
            x = x * a % n;
            t += 1;
        }
        t
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        let f = factorize(5040).unwrap();
        assert_eq!(f.factors(), &[(2, 4), (3, 2), (5, 1), (7, 1)]);
        assert_eq!(f.factors().iter().map(|&(p, e)| p.pow(e)).product::<u64>(), 5040);
        assert_eq!(factorize(0), Err(Error::ZeroModulus));
        assert!(matches!(factorize(u64::MAX), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn factorize_large_inputs() {
        let n = 1_000_003u64 * 998_244_353 * 3;
        assert_eq!(factorize(n).unwrap().factors(), &[(3, 1), (1_000_003, 1), (998_244_353, 1)]);
        let f = factorize(MAX_FACTOR_INPUT).unwrap();
        assert_eq!(f.factors(), &[(2, 63)]);
        // (2^31 - 1)^2 survives trial division as a square of a large prime
        let p = (1u64 << 31) - 1;
        assert_eq!(factorize(p * p).unwrap().factors(), &[(p, 2)]);
        let big = 1_000_000_007u64 * 1_000_000_009;
        assert_eq!(factorize(big).unwrap().factors(), &[(1_000_000_007, 1), (1_000_000_009, 1)]);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(carmichael_lambda(1u64).unwrap(), 1);
        assert_eq!(carmichael_lambda(2u64).unwrap(), 1);
        assert_eq!(carmichael_lambda(4u64).unwrap(), 2);
        assert_eq!(carmichael_lambda(8u64).unwrap(), 2);
        assert_eq!(carmichael_lambda(15u64).unwrap(), 4);
        assert_eq!(carmichael_lambda(1024u64).unwrap(), 256);
        assert_eq!(carmichael_lambda(561u64).unwrap(), 80);
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(1, 97u64).unwrap(), 1);
        assert_eq!(multiplicative_order(1, 1u64).unwrap(), 1);
        assert_eq!(multiplicative_order(2, 7u64).unwrap(), 3);
        assert_eq!(multiplicative_order(2, 9u64).unwrap(), 6);
        assert_eq!(
            multiplicative_order(6, 9u64),
            Err(Error::NotCoprime { a: 6, n: 9 })
        );
        // large modulus: 3 is a primitive root of the prime 998244353
        assert_eq!(multiplicative_order(3, 998_244_353u64).unwrap(), 998_244_352);
    }

    #[test]
    fn small_function_examples() {
        assert_eq!(euler_phi(1u64).unwrap(), 1);
        assert_eq!(rad(12u64).unwrap(), 6);
        assert_eq!(mobius(30u64).unwrap(), -1);
        assert_eq!(mobius(12u64).unwrap(), 0);
        assert_eq!(mobius(1u64).unwrap(), 1);
        assert_eq!(omega(5040u64).unwrap(), 4);
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(factorize(12).unwrap().divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(factorize(12).unwrap().tau(), 6);
    }

    #[test]
    fn from_factors_validation() {
        assert_eq!(FactoredInt::from_factors(vec![(2, 2), (3, 1)]).unwrap().value(), 12);
        assert!(FactoredInt::from_factors(vec![(4, 1)]).is_err());
        assert!(FactoredInt::from_factors(vec![(3, 1), (2, 1)]).is_err());
        assert!(FactoredInt::from_factors(vec![(2, 0)]).is_err());
    }

    #[test]
    fn lambda_is_group_exponent_below_10k() {
        // brute force: exponent of (Z/nZ)* = max element order
        for n in 1..=2000u64 {
            let f = factorize(n).unwrap();
            let lambda = f.carmichael_lambda();
            assert_eq!(f.euler_phi() % lambda, 0, "n = {n}");
            let max_order = (1..=n.max(1))
                .filter(|a| a.gcd(&n) == 1)
                .map(|a| brute_order(a, n))
                .max()
                .unwrap();
            assert_eq!(lambda, max_order, "n = {n}");
        }
        // divisibility only (cheap) up to 10^4
        for n in 2001..=10_000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.euler_phi() % f.carmichael_lambda(), 0);
        }
    }

    #[test]
    fn order_divides_lambda_below_2000() {
        for n in 1..=2000u64 {
            let f = factorize(n).unwrap();
            let lambda = f.carmichael_lambda();
            let lf = factorize(lambda).unwrap();
            for a in (1..=n).filter(|a| a.gcd(&n) == 1).step_by(7) {
                let t = f.order_with(a, &lf).unwrap();
                assert_eq!(lambda % t, 0);
                assert_eq!(t, brute_order(a, n), "a = {a}, n = {n}");
            }
        }
    }

    #[test]
    fn profile_invariants() {
        for n in 1..=3000u64 {
            let p = factorize(n).unwrap().profile();
            assert_eq!(p.phi % p.lambda, 0);
            assert_eq!(n % p.rad, 0);
            assert!(factorize(p.rad).unwrap().is_squarefree());
            assert_eq!(p.mu == 0, p.n.factors().iter().any(|&(_, e)| e >= 2));
        }
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(n in 1u64..=MAX_FACTOR_INPUT) {
            let f = factorize(n).unwrap();
            let mut prod = 1u64;
            let mut last = 1u64;
            for &(p, e) in f.factors() {
                prop_assert!(p > last);
                prop_assert!(is_prime(p));
                last = p;
                prod *= p.pow(e);
            }
            prop_assert_eq!(prod, n);
        }

        #[test]
        fn multiplicativity_on_coprime_pairs(m in 1u64..1_000_000, n in 1u64..1_000_000) {
            prop_assume!(m.gcd(&n) == 1);
            let fm = factorize(m).unwrap();
            let fn_ = factorize(n).unwrap();
            let fmn = factorize(m * n).unwrap();
            prop_assert_eq!(fmn.euler_phi(), fm.euler_phi() * fn_.euler_phi());
            prop_assert_eq!(fmn.mobius(), fm.mobius() * fn_.mobius());
            prop_assert_eq!(fmn.omega(), fm.omega() + fn_.omega());
            prop_assert_eq!(fmn.rad(), fm.rad() * fn_.rad());
            prop_assert_eq!(fmn.carmichael_lambda(), fm.carmichael_lambda().lcm(&fn_.carmichael_lambda()));
        }
    }
}
