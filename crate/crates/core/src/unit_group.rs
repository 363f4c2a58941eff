//! Structure of `(Z/nZ)*`: the cyclic factors contributed by each prime
//! power, the per-prime multiplicities `Delta_q(n)`, the subgroup `E(n)`, and
//! the number `R(n)` of lambda-primitive roots.

use crate::arith::{factorize, pow_mod, prime_power_lambda, AsFactored, FactoredInt};
use crate::error::{check_bound, Error, Result};
use num_integer::Integer;
use serde::Serialize;
use std::collections::BTreeMap;

/// Upper bound for [`r_count_bruteforce`].
pub const BRUTE_FORCE_BOUND: u64 = 1_000_000;

/// Which prime power a cyclic factor comes from, and how its generator is
/// chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// `(Z/p^eZ)*` for odd `p`, cyclic of order `p^(e-1)(p-1)`.
    OddPrimePower,
    /// The `<-1>` factor of `(Z/2^eZ)*`, `e >= 2`.
    TwoSign,
    /// The `<5>` factor of `(Z/2^eZ)*`, `e >= 3`.
    TwoFive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CyclicFactor {
    pub prime: u64,
    pub exponent: u32,
    pub order: u64,
    pub kind: FactorKind,
}

impl CyclicFactor {
    pub fn prime_power(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitGroupStructure {
    pub n: FactoredInt,
    /// One entry per cyclic factor, in the order of `factors`.
    pub cyclic_orders: Vec<u64>,
    pub lambda: u64,
    /// `Delta_q(n)` for every prime `q | phi(n)`.
    pub delta: BTreeMap<u64, u32>,
    #[serde(skip)]
    pub factors: Vec<CyclicFactor>,
}

pub fn decompose(n: impl AsFactored) -> Result<UnitGroupStructure> {
    Ok(UnitGroupStructure::new(&*n.as_factored()?))
}

impl UnitGroupStructure {
    pub fn new(n: &FactoredInt) -> Self {
        let mut factors = Vec::new();
        for &(p, e) in n.factors() {
            let push = |factors: &mut Vec<CyclicFactor>, order, kind| {
                factors.push(CyclicFactor { prime: p, exponent: e, order, kind })
            };
            match (p, e) {
                (2, 1) => {}
                (2, 2) => push(&mut factors, 2, FactorKind::TwoSign),
                (2, _) => {
                    push(&mut factors, 2, FactorKind::TwoSign);
                    push(&mut factors, 1 << (e - 2), FactorKind::TwoFive);
                }
                _ => push(&mut factors, prime_power_lambda(p, e), FactorKind::OddPrimePower),
            }
        }
        let cyclic_orders: Vec<u64> = factors.iter().map(|f| f.order).collect();
        let lambda = cyclic_orders.iter().fold(1u64, |acc, m| acc.lcm(m));
        debug_assert_eq!(lambda, n.carmichael_lambda());

        let phi = n.euler_phi();
        let mut delta = BTreeMap::new();
        // phi(n) = product of cyclic orders; factor each order, not phi itself
        for &m in &cyclic_orders {
            for &(q, _) in factorize(m).expect("positive").factors() {
                delta.entry(q).or_insert(0u32);
            }
        }
        for (&q, count) in delta.iter_mut() {
            let top = valuation(lambda, q);
            // lambda and phi have the same prime support
            assert!(top >= 1, "prime {q} divides phi({}) but not lambda", n.value());
            *count = cyclic_orders.iter().filter(|&&m| valuation(m, q) == top).count() as u32;
        }
        debug_assert_eq!(cyclic_orders.iter().product::<u64>(), phi);
        UnitGroupStructure {
            n: n.clone(),
            cyclic_orders,
            lambda,
            delta,
            factors,
        }
    }

    pub fn phi(&self) -> u64 {
        self.cyclic_orders.iter().product()
    }

    /// `Delta_q(n)`, zero for primes not dividing `phi(n)`.
    pub fn delta_q(&self, q: u64) -> u32 {
        self.delta.get(&q).copied().unwrap_or(0)
    }

    /// `R(n) = phi(n) * prod_{q | phi(n)} (1 - q^(-Delta_q(n)))`, in integers.
    pub fn r_count(&self) -> u64 {
        let mut r = self.phi() as u128;
        for (&q, &d) in &self.delta {
            let qd = (q as u128).pow(d);
            debug_assert_eq!(r % qd, 0);
            r = r / qd * (qd - 1);
        }
        r as u64
    }

    /// `lambda(n) / rad(lambda(n))`.
    pub fn e_exponent(&self) -> u64 {
        let rad_lambda: u64 = self.delta.keys().product();
        self.lambda / rad_lambda
    }
}

pub(crate) fn valuation(mut m: u64, q: u64) -> u32 {
    let mut v = 0;
    while m.is_multiple_of(q) {
        m /= q;
        v += 1;
    }
    v
}

/// Tests `ord(a) = lambda(n)` by checking `a^(lambda/q) != 1` for every
/// prime `q | lambda(n)`.
#[derive(Debug, Clone)]
pub struct LambdaRootTester {
    n: u64,
    lambda: u64,
    cofactors: Vec<u64>,
}

impl LambdaRootTester {
    pub fn new(n: &FactoredInt) -> Self {
        let lambda = n.carmichael_lambda();
        let lf = factorize(lambda).expect("lambda >= 1");
        Self::with_lambda_factors(n.value(), &lf)
    }

    pub fn with_lambda_factors(n: u64, lambda: &FactoredInt) -> Self {
        LambdaRootTester {
            n,
            lambda: lambda.value(),
            cofactors: lambda.primes().map(|q| lambda.value() / q).collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    /// `t_a(n)`: false whenever `gcd(a, n) > 1`.
    #[inline]
    pub fn is_root(&self, a: u64) -> bool {
        if self.n == 1 {
            return true;
        }
        let a = a % self.n;
        if a.gcd(&self.n) != 1 {
            return false;
        }
        self.cofactors.iter().all(|&c| pow_mod(a, c, self.n) != 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaRootCount {
    pub n: u64,
    pub r_closed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_brute: Option<u64>,
}

/// `R(n)` from the closed form, plus the enumeration when `n` is small enough.
pub fn lambda_root_count(n: impl AsFactored) -> Result<LambdaRootCount> {
    let n = n.as_factored()?;
    let r_closed = UnitGroupStructure::new(&n).r_count();
    let r_brute = if n.value() <= BRUTE_FORCE_BOUND {
        Some(r_count_bruteforce(&*n)?)
    } else {
        None
    };
    Ok(LambdaRootCount { n: n.value(), r_closed, r_brute })
}

pub fn r_count(n: impl AsFactored) -> Result<u64> {
    Ok(UnitGroupStructure::new(&*n.as_factored()?).r_count())
}

/// Counts `a` in `[1, n]` coprime to `n` with `ord(a) = lambda(n)`.
pub fn r_count_bruteforce(n: impl AsFactored) -> Result<u64> {
    let n = n.as_factored()?;
    check_bound("n", n.value(), BRUTE_FORCE_BOUND)?;
    let tester = LambdaRootTester::new(&n);
    Ok((1..=n.value()).filter(|&a| tester.is_root(a)).count() as u64)
}

pub fn is_lambda_primitive_root(a: u64, n: impl AsFactored) -> Result<bool> {
    Ok(LambdaRootTester::new(&*n.as_factored()?).is_root(a))
}

pub fn e_subgroup_exponent(n: impl AsFactored) -> Result<u64> {
    Ok(UnitGroupStructure::new(&*n.as_factored()?).e_exponent())
}

/// Whether `a^(lambda(n)/rad(lambda(n))) = 1 (mod n)`.
pub fn e_membership(a: u64, n: impl AsFactored) -> Result<bool> {
    let n = n.as_factored()?;
    let m = n.value();
    if a.gcd(&m) != 1 {
        return Err(Error::NotCoprime { a, n: m });
    }
    let exp = UnitGroupStructure::new(&n).e_exponent();
    Ok(m == 1 || pow_mod(a, exp, m) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn structure(n: u64) -> UnitGroupStructure {
        decompose(n).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let s = structure(8);
        assert_eq!(s.cyclic_orders, vec![2, 2]);
        assert_eq!(s.lambda, 2);
        assert_eq!(s.delta_q(2), 2);

        let s = structure(15);
        assert_eq!(s.cyclic_orders, vec![2, 4]);
        assert_eq!(s.lambda, 4);
        assert_eq!(s.delta_q(2), 1);

        let s = structure(13);
        assert_eq!(s.cyclic_orders, vec![12]);
        assert_eq!(s.delta.iter().map(|(&q, &d)| (q, d)).collect::<Vec<_>>(), vec![(2, 1), (3, 1)]);

        assert!(structure(1).cyclic_orders.is_empty());
        assert!(structure(2).cyclic_orders.is_empty());
        assert_eq!(structure(4).cyclic_orders, vec![2]);
        assert_eq!(structure(32).cyclic_orders, vec![2, 8]);
        // 21: C2 x C6, both factors carry the top power of 2
        let s = structure(21);
        assert_eq!((s.delta_q(2), s.delta_q(3)), (2, 1));
    }

    #[test]
    fn r_count_examples() {
        assert_eq!(r_count(7u64).unwrap(), 2);
        assert_eq!(r_count(8u64).unwrap(), 3);
        assert_eq!(r_count(1u64).unwrap(), 1);
        assert_eq!(r_count(2u64).unwrap(), 1);
        assert_eq!(r_count(21u64).unwrap(), 6);
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(r_count_bruteforce(5u64).unwrap(), 2);
        assert_eq!(r_count_bruteforce(2u64).unwrap(), 1);
        assert_eq!(r_count_bruteforce(15u64).unwrap(), 4);
        assert_eq!(r_count_bruteforce(1u64).unwrap(), 1);
        assert!(matches!(
            r_count_bruteforce(BRUTE_FORCE_BOUND + 1),
            Err(Error::BoundExceeded { .. })
        ));
        let roots: Vec<u64> = (1..=15).filter(|&a| is_lambda_primitive_root(a, 15u64).unwrap()).collect();
        assert_eq!(roots, vec![2, 7, 8, 13]);
    }

    #[test]
    fn indicator_examples() {
        assert!(is_lambda_primitive_root(2, 5u64).unwrap());
        assert!(!is_lambda_primitive_root(4, 5u64).unwrap());
        assert!(!is_lambda_primitive_root(5, 5u64).unwrap());
        for n in 3..200u64 {
            assert!(!is_lambda_primitive_root(1, n).unwrap());
        }
        assert!(is_lambda_primitive_root(1, 2u64).unwrap());
        assert!(is_lambda_primitive_root(7, 1u64).unwrap());
    }

    #[test]
    fn e_subgroup_examples() {
        assert_eq!(e_subgroup_exponent(5u64).unwrap(), 2);
        let e5: Vec<u64> = (1..5).filter(|&a| e_membership(a, 5u64).unwrap()).collect();
        assert_eq!(e5, vec![1, 4]);
        // p - 1 squarefree
        for p in [3u64, 7, 11, 23, 31, 43] {
            assert_eq!(e_subgroup_exponent(p).unwrap(), 1);
        }
        assert_eq!(e_subgroup_exponent(8u64).unwrap(), 1);
        let e8: Vec<u64> = (1..8).step_by(2).filter(|&a| e_membership(a, 8u64).unwrap()).collect();
        assert_eq!(e8, vec![1]);
        assert_eq!(e_membership(2, 8u64), Err(Error::NotCoprime { a: 2, n: 8 }));
    }

    #[test]
    fn closed_form_matches_enumeration_small() {
        for n in 1..=1500u64 {
            assert_eq!(r_count(n).unwrap(), r_count_bruteforce(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn structure_invariants_below_10k() {
        for n in 1..=10_000u64 {
            let f = factorize(n).unwrap();
            let s = UnitGroupStructure::new(&f);
            assert_eq!(s.phi(), f.euler_phi());
            assert_eq!(s.lambda, f.carmichael_lambda());
            for (&q, &d) in &s.delta {
                assert!(d >= 1);
                assert_eq!(s.lambda % q, 0);
            }
            let r = s.r_count();
            assert!(r <= s.phi());
        }
    }

    #[test]
    fn e_subgroup_is_closed_and_avoids_roots() {
        for n in 1..=400u64 {
            let f = factorize(n).unwrap();
            let s = UnitGroupStructure::new(&f);
            let members: Vec<u64> = (1..=n)
                .filter(|&a| a.gcd(&n) == 1 && e_membership(a, &f).unwrap())
                .collect();
            assert!(members.contains(&(1 % n.max(2)).max(1)));
            for &a in &members {
                for &b in &members {
                    let c = (a * b) % n;
                    let c = if n == 1 { 1 } else { c };
                    assert!(members.contains(&c), "n = {n}");
                }
            }
            if s.lambda > s.e_exponent() {
                let tester = LambdaRootTester::new(&f);
                assert!(members.iter().all(|&a| !tester.is_root(a)));
            }
        }
    }
}
