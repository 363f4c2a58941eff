use super::FactoredInt;
use crate::error::{Error, Result};

/// Smallest-prime-factor table, so a sweep over `1..=limit` factors each
/// integer once in `O(log n)`.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    spf: Vec<u32>,
}

impl FactorSieve {
    /// Largest limit accepted; the table costs four bytes per entry.
    pub const MAX_LIMIT: u64 = 1 << 30;

    pub fn new(limit: u64) -> Result<Self> {
        crate::error::check_bound("sieve limit", limit, Self::MAX_LIMIT)?;
        let n = limit.max(1) as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si || i * p as usize > n {
                    break;
                }
                spf[i * p as usize] = p;
            }
        }
        Ok(FactorSieve { spf })
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit() && self.spf[n as usize] as u64 == n
    }

    pub fn factor(&self, n: u64) -> Result<FactoredInt> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        crate::error::check_bound("n", n, self.limit())?;
        let mut rest = n as usize;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        while rest > 1 {
            let p = self.spf[rest] as usize;
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Ok(FactoredInt::from_parts(n, factors))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit()).filter(|&n| self.is_prime(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    #[test]
    fn agrees_with_trial_division() {
        let sieve = FactorSieve::new(20_000).unwrap();
        for n in 1..=20_000 {
            assert_eq!(sieve.factor(n).unwrap(), factorize(n).unwrap());
        }
        assert!(sieve.factor(20_001).is_err());
        assert!(sieve.factor(0).is_err());
    }

    #[test]
    fn prime_listing() {
        let sieve = FactorSieve::new(30).unwrap();
        assert_eq!(sieve.primes().collect::<Vec<_>>(), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let tiny = FactorSieve::new(1).unwrap();
        assert_eq!(tiny.factor(1).unwrap().value(), 1);
        assert_eq!(tiny.primes().count(), 0);
    }
}
