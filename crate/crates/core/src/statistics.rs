//! Counting functions `N_a(x)`, `P_a(x)`, the mean `sum R(n)/n`, the second
//! moment over `a <= y`, the double sum `Sigma_1` in its direct and
//! gcd-resummed forms, and sums of `phi(phi(n))`.
//!
//! Moduli `n = 1` and `n = 2` have trivial unit groups, so every `a` is a
//! lambda-primitive root mod 1 and every odd `a` is one mod 2.

use crate::arith::{FactorSieve, FactoredInt};
use crate::characters::{self, coprime_count};
use crate::error::{check_bound, Error, Result};
use crate::exact::{int, ratio, sum_balanced, to_f64};
use crate::par;
use crate::unit_group::{LambdaRootTester, UnitGroupStructure};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

/// Largest `x * y` (order evaluations) accepted by the moment sweeps.
pub const MOMENT_BUDGET: u128 = 100_000_000;
/// Bound for [`sigma1_direct`].
pub const SIGMA1_DIRECT_BOUND: u64 = 2000;
/// Bound for [`sigma1_gcd_form`].
pub const SIGMA1_GCD_BOUND: u64 = 5000;
/// Bound on `x` and `y` for [`moment_split`].
pub const SPLIT_BOUND: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MomentConfig {
    pub x: u64,
    pub y: u64,
    pub include_n_equals_1: bool,
}

impl MomentConfig {
    pub fn new(x: u64, y: u64) -> Result<Self> {
        if x == 0 || y == 0 {
            return Err(Error::InvalidArgument("x and y must be at least 1".into()));
        }
        Ok(MomentConfig { x, y, include_n_equals_1: true })
    }

    fn first_n(&self) -> u64 {
        if self.include_n_equals_1 {
            1
        } else {
            2
        }
    }

    fn check_budget(&self) -> Result<()> {
        let requested = self.x as u128 * self.y as u128;
        if requested > MOMENT_BUDGET {
            return Err(Error::BudgetExceeded { requested, budget: MOMENT_BUDGET });
        }
        Ok(())
    }
}

/// Per-modulus data for `n = 1..=x`, factored once through a sieve.
#[derive(Debug, Clone)]
pub struct ModuliTable {
    entries: Vec<ModulusEntry>,
}

#[derive(Debug, Clone)]
pub struct ModulusEntry {
    pub n: u64,
    pub phi: u64,
    pub r: u64,
    pub tester: LambdaRootTester,
}

impl ModuliTable {
    pub fn new(x: u64) -> Result<Self> {
        let sieve = FactorSieve::new(x)?;
        let entries = par::map_range(1..x + 1, |n| {
            let f = sieve.factor(n).expect("within sieve");
            let s = UnitGroupStructure::new(&f);
            let lf = sieve.factor(s.lambda).expect("lambda <= n");
            ModulusEntry {
                n,
                phi: s.phi(),
                r: s.r_count(),
                tester: LambdaRootTester::with_lambda_factors(n, &lf),
            }
        });
        Ok(ModuliTable { entries })
    }

    pub fn x(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn get(&self, n: u64) -> &ModulusEntry {
        &self.entries[(n - 1) as usize]
    }

    pub fn entries(&self) -> &[ModulusEntry] {
        &self.entries
    }

    /// `N_a(x)` counted from modulus `first_n` on.
    pub fn n_count_from(&self, a: u64, first_n: u64) -> u64 {
        self.entries[(first_n - 1) as usize..]
            .iter()
            .filter(|e| e.tester.is_root(a))
            .count() as u64
    }

    pub fn mean_from(&self, first_n: u64) -> BigRational {
        sum_balanced(
            self.entries[(first_n - 1) as usize..]
                .iter()
                .map(|e| ratio(e.r, e.n))
                .collect(),
        )
    }
}

/// `N_a(x)`: moduli `n <= x` for which `a` is a lambda-primitive root.
pub fn n_count(a: u64, x: u64) -> Result<u64> {
    if x == 0 {
        return Ok(0);
    }
    let sieve = FactorSieve::new(x)?;
    let counts = par::map_shards(1..x + 1, 4096, |range| {
        range
            .filter(|&n| {
                let f = sieve.factor(n).expect("within sieve");
                let lf = sieve.factor(f.carmichael_lambda()).expect("lambda <= n");
                LambdaRootTester::with_lambda_factors(n, &lf).is_root(a)
            })
            .count() as u64
    });
    Ok(counts.into_iter().sum())
}

/// `P_a(x)`: primes `p <= x`, `p` not dividing `a`, with `ord_p(a) = p - 1`.
pub fn p_count(a: u64, x: u64) -> Result<u64> {
    if x < 2 {
        return Ok(0);
    }
    let sieve = FactorSieve::new(x)?;
    let counts = par::map_shards(2..x + 1, 4096, |range| {
        range
            .filter(|&p| sieve.is_prime(p) && !a.is_multiple_of(p))
            .filter(|&p| {
                let lf = sieve.factor(p - 1).expect("within sieve");
                LambdaRootTester::with_lambda_factors(p, &lf).is_root(a)
            })
            .count() as u64
    });
    Ok(counts.into_iter().sum())
}

/// `sum_{n <= x} R(n) / n`, exact.
pub fn mean_sum(x: u64) -> Result<BigRational> {
    if x == 0 {
        return Err(Error::InvalidArgument("x must be at least 1".into()));
    }
    Ok(ModuliTable::new(x)?.mean_from(1))
}

/// `N_a(x)` for every `a = 1..=y`.
pub fn n_counts(table: &ModuliTable, y: u64, first_n: u64) -> Vec<u64> {
    par::map_range(1..y + 1, |a| table.n_count_from(a, first_n))
}

/// `(1/y) sum_{a <= y} (N_a(x) - sum_{n <= x} R(n)/n)^2`, exact.
pub fn second_moment(config: &MomentConfig) -> Result<BigRational> {
    config.check_budget()?;
    let table = ModuliTable::new(config.x)?;
    Ok(second_moment_with(&table, config))
}

fn second_moment_with(table: &ModuliTable, config: &MomentConfig) -> BigRational {
    let mean = table.mean_from(config.first_n());
    centered_square_sum(&n_counts(table, config.y, config.first_n()), &mean) / int(config.y)
}

fn centered_square_sum(counts: &[u64], mean: &BigRational) -> BigRational {
    // sum (N - M)^2 = sum N^2 - 2 M sum N + y M^2
    let s1: u128 = counts.iter().map(|&c| c as u128).sum();
    let s2: u128 = counts.iter().map(|&c| c as u128 * c as u128).sum();
    let y = int(counts.len() as u64);
    int(s2) - mean * int(s1) * int(2) + &y * mean * mean
}

fn sigma1_weight(g: u64, phi_g: u64) -> BigRational {
    // (g / phi(g)) - 1
    ratio(g - phi_g, phi_g)
}

/// `sum_{n1, n2 <= x} R(n1) R(n2) / (n1 n2) * ((n1, n2) / phi((n1, n2)) - 1)`.
pub fn sigma1_direct(x: u64) -> Result<BigRational> {
    check_bound("x", x, SIGMA1_DIRECT_BOUND)?;
    let table = ModuliTable::new(x.max(1))?;
    Ok(sigma1_direct_with(&table, x))
}

fn sigma1_direct_with(table: &ModuliTable, x: u64) -> BigRational {
    let rows = par::map_range(1..x + 1, |n1| {
        let row = sum_balanced(
            (1..=x)
                .filter_map(|n2| {
                    let g = n1.gcd(&n2);
                    (g > 1).then(|| {
                        let e = table.get(n2);
                        ratio(e.r, e.n) * sigma1_weight(g, table.get(g).phi)
                    })
                })
                .collect(),
        );
        let e1 = table.get(n1);
        row * ratio(e1.r, e1.n)
    });
    sum_balanced(rows)
}

/// The same double sum regrouped by `d = (n1, n2)`:
/// `sum_d (1/(d phi(d)) - 1/d^2) sum_{k1, k2 <= x/d, (k1, k2) = 1} R(d k1) R(d k2) / (k1 k2)`.
pub fn sigma1_gcd_form(x: u64) -> Result<BigRational> {
    check_bound("x", x, SIGMA1_GCD_BOUND)?;
    let table = ModuliTable::new(x.max(1))?;
    Ok(sigma1_gcd_form_with(&table, x))
}

fn gcd_form_weight(d: u64, phi_d: u64) -> BigRational {
    ratio(1, d * phi_d) - ratio(1, d * d)
}

fn sigma1_gcd_form_with(table: &ModuliTable, x: u64) -> BigRational {
    // the d = 1 weight vanishes
    let per_d = par::map_range(2..x + 1, |d| {
        let k_max = x / d;
        let terms: Vec<BigRational> = (1..=k_max)
            .map(|k1| {
                let inner = sum_balanced(
                    (1..=k_max)
                        .filter(|k2| k1.gcd(k2) == 1)
                        .map(|k2| ratio(table.get(d * k2).r, k2))
                        .collect(),
                );
                inner * ratio(table.get(d * k1).r, k1)
            })
            .collect();
        sum_balanced(terms) * gcd_form_weight(d, table.get(d).phi)
    });
    sum_balanced(per_d)
}

/// `sigma1_direct(m)` for every `m = 0..=x`, built shell by shell over
/// `max(n1, n2) = m`.
pub fn sigma1_direct_prefix(x: u64) -> Result<Vec<BigRational>> {
    check_bound("x", x, SIGMA1_DIRECT_BOUND)?;
    let table = ModuliTable::new(x.max(1))?;
    let shells = par::map_range(1..x + 1, |m| {
        let e = table.get(m);
        let rm = ratio(e.r, m);
        let mut terms: Vec<BigRational> = (1..m)
            .filter_map(|n| {
                let g = m.gcd(&n);
                (g > 1).then(|| {
                    let en = table.get(n);
                    ratio(en.r, n) * sigma1_weight(g, table.get(g).phi) * int(2)
                })
            })
            .collect();
        if m > 1 {
            terms.push(&rm * sigma1_weight(m, e.phi));
        }
        sum_balanced(terms) * rm
    });
    Ok(prefix_sums(shells))
}

/// `sigma1_gcd_form(m)` for every `m = 0..=x`, built from the pairs
/// `(d k1, d k2)` whose larger entry is `m`: `d | m`, `k = m / d`, and
/// `k2 <= k` coprime to `k`.
pub fn sigma1_gcd_form_prefix(x: u64) -> Result<Vec<BigRational>> {
    check_bound("x", x, SIGMA1_GCD_BOUND)?;
    let table = ModuliTable::new(x.max(1))?;
    let shells = par::map_range(1..x + 1, |m| {
        let rm = table.get(m).r;
        let divisors = FactoredInt::new(m).expect("positive").divisors();
        let per_d: Vec<BigRational> = divisors
            .into_iter()
            .filter(|&d| d > 1)
            .map(|d| {
                let k = m / d;
                let mut terms: Vec<BigRational> = (1..k)
                    .filter(|k2| k.gcd(k2) == 1)
                    .map(|k2| ratio(table.get(d * k2).r, k2) * int(2))
                    .collect();
                if k == 1 {
                    terms.push(int(rm));
                }
                sum_balanced(terms) * ratio(rm, k) * gcd_form_weight(d, table.get(d).phi)
            })
            .collect();
        sum_balanced(per_d)
    });
    Ok(prefix_sums(shells))
}

fn prefix_sums(shells: Vec<BigRational>) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(shells.len() + 1);
    let mut acc = BigRational::zero();
    out.push(acc.clone());
    for s in shells {
        acc += s;
        out.push(acc.clone());
    }
    out
}

fn phi_phi_values(x: u64) -> Result<Vec<u64>> {
    let sieve = FactorSieve::new(x.max(1))?;
    Ok(par::map_shards(1..x + 1, 4096, |range| {
        range
            .map(|n| {
                let phi = sieve.factor(n).expect("within sieve").euler_phi();
                sieve.factor(phi).expect("phi <= n").euler_phi()
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect())
}

/// `sum_{n <= x} phi(phi(n))`.
pub fn phi_phi_sum(x: u64) -> Result<u128> {
    Ok(phi_phi_values(x)?.into_iter().map(|v| v as u128).sum())
}

/// `sum_{n <= x} phi(phi(n)) / n`, exact.
pub fn phi_phi_mean(x: u64) -> Result<BigRational> {
    let values = phi_phi_values(x)?;
    Ok(sum_balanced(
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| ratio(v, i as u64 + 1))
            .collect(),
    ))
}

/// `(1/d) prod_{p | d} 1 / (1 + 1/p)`.
pub fn corollary_density(d: u64) -> Result<BigRational> {
    let f = FactoredInt::new(d)?;
    Ok(f.primes().fold(ratio(1, d), |acc, p| acc * ratio(p, p + 1)))
}

/// `sum_{a <= y} (N_a(x) - M)^2 = y Sigma_1 + Sigma_2 + E` with every piece
/// evaluated exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSplit {
    pub x: u64,
    pub y: u64,
    /// `sum_{a <= y} (N_a(x) - M)^2` from direct counts.
    pub centered_sum: BigRational,
    pub sigma1: BigRational,
    /// Character pairs with at least one non-principal member.
    pub sigma2: BigRational,
    /// Principal pairs: `sum c1 c2 (#{a <= y : (a, [n1, n2]) = 1} - y phi([n1,n2]) / [n1,n2])`.
    pub principal_pair_correction: BigRational,
    /// Single principal terms: `sum c (#{a <= y : (a, n) = 1} - y phi(n) / n)`.
    pub principal_correction: BigRational,
    pub b: BigRational,
    pub mean: BigRational,
}

impl MomentSplit {
    /// `E = principal_pair_correction - 2 M (principal_correction + B)`.
    pub fn error_term(&self) -> BigRational {
        &self.principal_pair_correction
            - int(2) * &self.mean * (&self.principal_correction + &self.b)
    }

    pub fn holds(&self) -> bool {
        self.centered_sum == int(self.y) * &self.sigma1 + &self.sigma2 + self.error_term()
    }
}

pub fn moment_split(x: u64, y: u64) -> Result<MomentSplit> {
    let config = MomentConfig::new(x, y)?;
    check_bound("x", x, SPLIT_BOUND)?;
    check_bound("y", y, SPLIT_BOUND)?;
    let table = ModuliTable::new(x)?;
    let mean = table.mean_from(1);
    let counts = n_counts(&table, y, 1);
    let centered_sum = centered_square_sum(&counts, &mean);
    let sigma1 = sigma1_direct_with(&table, x);

    let sums = characters::modulus_sums(x)?;
    let sigma2_terms = par::map_range(1..y + 1, |a| {
        let p = sum_balanced(
            sums.iter()
                .filter(|m| a.gcd(&m.n) == 1)
                .map(|m| m.principal_coefficient())
                .collect(),
        );
        let q = sum_balanced(sums.iter().map(|m| m.nonprincipal_at(a)).collect());
        int(2) * &p * &q + &q * &q
    });
    let sigma2 = sum_balanced(sigma2_terms);

    let coeff = |e: &ModulusEntry| ratio(e.r, e.phi);
    let density_gap = |m: u64, phi_m: u64| int(coprime_count(m, y)) - ratio(y * phi_m, m);
    let pair_rows = par::map_range(1..x + 1, |n1| {
        let e1 = table.get(n1);
        let row = sum_balanced(
            (1..=x)
                .map(|n2| {
                    let e2 = table.get(n2);
                    let l = n1.lcm(&n2);
                    let g = n1.gcd(&n2);
                    // phi(lcm) = phi(n1) phi(n2) / phi(gcd)
                    let phi_l = e1.phi * e2.phi / table.get(g).phi;
                    coeff(e2) * density_gap(l, phi_l)
                })
                .collect(),
        );
        coeff(e1) * row
    });
    let principal_pair_correction = sum_balanced(pair_rows);
    let principal_correction = sum_balanced(
        table
            .entries()
            .iter()
            .map(|e| coeff(e) * density_gap(e.n, e.phi))
            .collect(),
    );
    let b = characters::b_sum_from(&sums, y);
    debug_assert_eq!(config.first_n(), 1);
    Ok(MomentSplit {
        x,
        y,
        centered_sum,
        sigma1,
        sigma2,
        principal_pair_correction,
        principal_correction,
        b,
        mean,
    })
}

/// `ln ln ln x`, defined here only for `x >= 16`.
pub fn logloglog(x: u64) -> Option<f64> {
    (x >= 16).then(|| (x as f64).ln().ln().ln())
}

/// Aggregated statistics for one `(x, y)` grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub config: MomentConfig,
    pub mean: BigRational,
    pub second_moment: BigRational,
    pub sigma1: BigRational,
    pub phi_phi_sum: u128,
    pub ratios: BTreeMap<String, f64>,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl Serialize for SweepReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            x: u64,
            y: u64,
            mean_num: String,
            mean_den: String,
            m2_num: String,
            m2_den: String,
            sigma1_num: String,
            sigma1_den: String,
            phi_phi_sum: u128,
            diagnostics: &'a BTreeMap<String, f64>,
        }
        let (mean_num, mean_den) = crate::exact::to_strings(&self.mean);
        let (m2_num, m2_den) = crate::exact::to_strings(&self.second_moment);
        let (sigma1_num, sigma1_den) = crate::exact::to_strings(&self.sigma1);
        Wire {
            x: self.config.x,
            y: self.config.y,
            mean_num,
            mean_den,
            m2_num,
            m2_den,
            sigma1_num,
            sigma1_den,
            phi_phi_sum: self.phi_phi_sum,
            diagnostics: &self.ratios,
        }
        .serialize(serializer)
    }
}

pub fn sweep_report(config: &MomentConfig) -> Result<SweepReport> {
    config.check_budget()?;
    check_bound("x", config.x, SIGMA1_GCD_BOUND)?;
    let table = ModuliTable::new(config.x)?;
    let mean = table.mean_from(config.first_n());
    let second_moment = second_moment_with(&table, config);
    let sigma1 = if config.x <= SIGMA1_DIRECT_BOUND {
        sigma1_direct_with(&table, config.x)
    } else {
        sigma1_gcd_form_with(&table, config.x)
    };
    let phi_phi_sum = phi_phi_sum(config.x)?;
    let mut ratios = BTreeMap::new();
    if let Some(lll) = logloglog(config.x) {
        let x = config.x as f64;
        let c12 = crate::constants::theorem12_f64();
        let c13 = crate::constants::theorem13_f64();
        let mean_scaled = to_f64(&mean) * lll / x;
        let m2_scaled = to_f64(&second_moment) * lll * lll / (x * x);
        let sigma1_scaled = to_f64(&sigma1) * lll * lll / (x * x);
        let phi_phi_scaled = phi_phi_sum as f64 * lll / (x * x);
        ratios.insert("mean_scaled".to_string(), mean_scaled);
        ratios.insert("mean_vs_constant".to_string(), mean_scaled / c12);
        ratios.insert("m2_scaled".to_string(), m2_scaled);
        ratios.insert("m2_vs_constant".to_string(), m2_scaled / c13);
        ratios.insert("sigma1_scaled".to_string(), sigma1_scaled);
        ratios.insert("sigma1_vs_constant".to_string(), sigma1_scaled / c13);
        ratios.insert("phi_phi_scaled".to_string(), phi_phi_scaled);
        ratios.insert("phi_phi_vs_constant".to_string(), phi_phi_scaled / (c12 / 2.0));
    }
    debug_assert!(!second_moment.is_negative() && !sigma1.is_negative());
    Ok(SweepReport {
        config: *config,
        mean,
        second_moment,
        sigma1,
        phi_phi_sum,
        ratios,
    })
}
