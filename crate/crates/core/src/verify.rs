//! Cross-checking suites over bounded ranges, with a deterministic report.
//!
//! Reports contain no timings and no worker count, so runs that differ only
//! in parallelism serialize to identical bytes.

use crate::arith::{euler_phi, primes_up_to, FactorSieve};
use crate::characters::{self, coefficient_check, rho_check, t_expansion_check};
use crate::constants::{self, EulerProductSpec, LocalFactor};
use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::par;
use crate::statistics;
use crate::unit_group::{r_count_bruteforce, UnitGroupStructure};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// At most this many failure messages are kept per suite.
const MAX_FAILURES: usize = 10;
/// Prime specialization range of the R(n) oracle suite.
pub const PRIME_SPECIALIZATION_BOUND: u64 = 10_000;
pub const DECOMPOSITION_GRID: [u64; 6] = [1, 5, 10, 25, 50, 100];
/// Range of the coefficient sign and size checks inside the rho suite.
const COEFFICIENT_CHECK_BOUND: u64 = 300;
const IDENTITY_PRIME_BOUND: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    RcountOracle,
    TExpansion,
    Decomposition,
    Sigma1Forms,
    RhoCounts,
    LowerBound,
    ConstantsRegression,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::RcountOracle,
        Suite::TExpansion,
        Suite::Decomposition,
        Suite::Sigma1Forms,
        Suite::RhoCounts,
        Suite::LowerBound,
        Suite::ConstantsRegression,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::RcountOracle => "rcount-oracle",
            Suite::TExpansion => "t-expansion",
            Suite::Decomposition => "decomposition",
            Suite::Sigma1Forms => "sigma1-forms",
            Suite::RhoCounts => "rho-counts",
            Suite::LowerBound => "lower-bound",
            Suite::ConstantsRegression => "constants-regression",
        }
    }

    /// Default enumeration cap; the prime cutoff for the constants suite.
    pub fn default_cap(self) -> u64 {
        match self {
            Suite::RcountOracle => 5000,
            Suite::TExpansion => 500,
            Suite::Decomposition => 100,
            Suite::Sigma1Forms => 300,
            Suite::RhoCounts => 2000,
            Suite::LowerBound => 5000,
            Suite::ConstantsRegression => constants::DEFAULT_CUTOFF,
        }
    }

    pub fn max_cap(self) -> u64 {
        match self {
            Suite::RcountOracle => 20_000,
            Suite::TExpansion => characters::SUM_BOUND,
            Suite::Decomposition => characters::SUM_BOUND,
            Suite::Sigma1Forms => statistics::SIGMA1_DIRECT_BOUND,
            Suite::RhoCounts => characters::CHARACTER_BOUND,
            Suite::LowerBound => 10_000_000,
            Suite::ConstantsRegression => constants::euler::MAX_CUTOFF / 2,
        }
    }

    fn min_cap(self) -> u64 {
        match self {
            Suite::ConstantsRegression => constants::euler::MIN_CUTOFF,
            _ => 1,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyPlan {
    pub suites: Vec<Suite>,
    pub caps: BTreeMap<Suite, u64>,
    pub workers: usize,
}

impl VerifyPlan {
    pub fn all() -> Self {
        Self::new(Suite::ALL.to_vec())
    }

    pub fn new(mut suites: Vec<Suite>) -> Self {
        suites.sort();
        suites.dedup();
        VerifyPlan {
            caps: suites.iter().map(|&s| (s, s.default_cap())).collect(),
            suites,
            workers: par::default_workers(),
        }
    }

    pub fn with_cap(mut self, suite: Suite, cap: u64) -> Result<Self> {
        if cap < suite.min_cap() || cap > suite.max_cap() {
            return Err(Error::BoundExceeded {
                what: "suite cap",
                value: cap,
                bound: suite.max_cap(),
            });
        }
        self.caps.insert(suite, cap);
        Ok(self)
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    fn cap(&self, suite: Suite) -> u64 {
        self.caps.get(&suite).copied().unwrap_or(suite.default_cap())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cap: u64,
    pub passed: bool,
    /// Number of individual cases checked.
    pub checked: u64,
    pub failures: Vec<String>,
    pub details: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Collector {
    checked: u64,
    failures: Vec<String>,
    failed: bool,
    details: BTreeMap<String, Value>,
}

impl Collector {
    fn new() -> Self {
        Collector { checked: 0, failures: Vec::new(), failed: false, details: BTreeMap::new() }
    }

    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed = true;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(message());
            }
        }
    }

    /// Record the messages of failed cases, in order.
    fn extend(&mut self, checked: u64, failures: impl IntoIterator<Item = String>) {
        self.checked += checked;
        for f in failures {
            self.failed = true;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(f);
            }
        }
    }

    fn detail(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }

    fn finish(self, suite: Suite, cap: u64) -> SuiteReport {
        SuiteReport {
            suite,
            cap,
            passed: !self.failed,
            checked: self.checked,
            failures: self.failures,
            details: self.details,
        }
    }
}

/// Map `f` over `1..=cap` and keep the messages of failing cases.
fn range_failures(cap: u64, f: impl Fn(u64) -> Option<String> + Sync + Send) -> Vec<String> {
    par::map_range(1..cap + 1, f).into_iter().flatten().collect()
}

pub fn run(plan: &VerifyPlan) -> Result<VerifyReport> {
    par::with_workers(plan.workers, || {
        let suites = plan
            .suites
            .iter()
            .map(|&suite| run_suite(suite, plan.cap(suite)))
            .collect::<Result<Vec<_>>>()?;
        Ok(VerifyReport { passed: suites.iter().all(|s| s.passed), suites })
    })
}

pub fn run_suite(suite: Suite, cap: u64) -> Result<SuiteReport> {
    let mut c = Collector::new();
    match suite {
        Suite::RcountOracle => rcount_oracle(&mut c, cap)?,
        Suite::TExpansion => t_expansion(&mut c, cap)?,
        Suite::Decomposition => decomposition(&mut c, cap)?,
        Suite::Sigma1Forms => sigma1_forms(&mut c, cap)?,
        Suite::RhoCounts => rho_counts(&mut c, cap)?,
        Suite::LowerBound => lower_bound(&mut c, cap)?,
        Suite::ConstantsRegression => constants_regression(&mut c, cap)?,
    }
    Ok(c.finish(suite, cap))
}

fn rcount_oracle(c: &mut Collector, cap: u64) -> Result<()> {
    let failures = range_failures(cap, |n| {
        let closed = crate::unit_group::r_count(n).expect("positive");
        let brute = r_count_bruteforce(n).expect("within brute-force bound");
        (closed != brute).then(|| format!("n = {n}: closed form {closed}, enumeration {brute}"))
    });
    c.extend(cap, failures);

    let primes: Vec<u64> = primes_up_to(PRIME_SPECIALIZATION_BOUND as u32)
        .into_iter()
        .map(u64::from)
        .collect();
    let failures: Vec<String> = par::map_slice(&primes, |&p| {
        let r = crate::unit_group::r_count(p).expect("positive");
        let expected = euler_phi(p - 1).expect("positive");
        (r != expected).then(|| format!("p = {p}: R(p) = {r}, phi(p - 1) = {expected}"))
    })
    .into_iter()
    .flatten()
    .collect();
    c.extend(primes.len() as u64, failures);
    c.detail("moduli", json!(cap));
    c.detail("primes", json!(primes.len()));
    Ok(())
}

fn t_expansion(c: &mut Collector, cap: u64) -> Result<()> {
    let checks = par::map_range(1..cap + 1, t_expansion_check)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut max_residual: f64 = 0.0;
    let mut units = 0;
    for check in &checks {
        max_residual = max_residual.max(check.max_residual);
        units += check.units;
        c.check(check.holds(), || {
            format!(
                "n = {}: exact {}, residual {:e}, non-elementary nonzero {}",
                check.n, check.exact, check.max_residual, check.nonelementary_nonzero
            )
        });
    }
    c.detail("max_residual", json!(max_residual));
    c.detail("units", json!(units));
    Ok(())
}

fn decomposition(c: &mut Collector, cap: u64) -> Result<()> {
    let mut grid: Vec<u64> = DECOMPOSITION_GRID.iter().copied().filter(|&v| v <= cap).collect();
    if grid.last() != Some(&cap) {
        grid.push(cap);
    }
    for &x in &grid {
        for &y in &grid {
            let check = characters::decomposition_check(x, y)?;
            c.check(check.holds(), || format!("x = {x}, y = {y}: direct count {}", check.lhs));
        }
    }
    c.detail("grid", json!(grid));
    Ok(())
}

fn sigma1_forms(c: &mut Collector, cap: u64) -> Result<()> {
    let direct = statistics::sigma1_direct_prefix(cap)?;
    let gcd = statistics::sigma1_gcd_form_prefix(cap)?;
    for x in 1..=cap {
        let i = x as usize;
        c.check(direct[i] == gcd[i], || format!("x = {x}: direct and gcd forms differ"));
    }
    // full evaluations at the cap, independent of the shell decomposition
    let full_direct = statistics::sigma1_direct(cap)?;
    let full_gcd = statistics::sigma1_gcd_form(cap)?;
    c.check(full_direct == full_gcd, || format!("x = {cap}: full evaluations differ"));
    c.check(full_direct == direct[cap as usize], || format!("x = {cap}: shell sum differs from full sum"));
    let (num, den) = crate::exact::to_strings(&full_direct);
    c.detail("sigma1_num", json!(num));
    c.detail("sigma1_den", json!(den));
    Ok(())
}

fn rho_counts(c: &mut Collector, cap: u64) -> Result<()> {
    let checks = par::map_range(1..cap + 1, rho_check)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut elementary = 0;
    for check in &checks {
        elementary += check.counts.values().sum::<u64>();
        c.check(check.holds(), || {
            format!(
                "n = {}: counts {:?}, expected {:?}, flag mismatches {}",
                check.n, check.counts, check.expected, check.flag_mismatches
            )
        });
    }
    c.detail("elementary_characters", json!(elementary));

    let coefficient_cap = cap.min(COEFFICIENT_CHECK_BOUND);
    let checks = par::map_range(1..coefficient_cap + 1, |n| coefficient_check(n, false))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (mut mobius, mut parity, mut total) = (0, 0, 0);
    for check in &checks {
        mobius += check.matches_mobius;
        parity += check.matches_parity;
        total += check.elementary;
        c.check(
            check.bound_violations == 0 && check.unit_violations == 0 && check.matches_mobius == check.elementary,
            || format!("n = {}: coefficient bound or sign failed", check.n),
        );
    }
    c.detail("coefficient_moduli", json!(coefficient_cap));
    c.detail("sign_matches_mobius", json!(mobius));
    c.detail("sign_matches_parity", json!(parity));
    c.detail("coefficients_checked", json!(total));
    Ok(())
}

fn lower_bound(c: &mut Collector, cap: u64) -> Result<()> {
    let sieve = FactorSieve::new(cap)?;
    let failures = par::map_shards(1..cap + 1, 4096, |range| {
        range
            .filter_map(|n| {
                let f = sieve.factor(n).expect("within sieve");
                let r = UnitGroupStructure::new(&f).r_count();
                let pp = sieve.factor(f.euler_phi()).expect("phi <= n").euler_phi();
                (r < pp).then(|| format!("n = {n}: R(n) = {r} < phi(phi(n)) = {pp}"))
            })
            .collect::<Vec<_>>()
    });
    c.extend(cap, failures.into_iter().flatten());
    // the bound sums to mean >= sum phi(phi(n))/n
    let mean = statistics::mean_sum(cap)?;
    let pp = statistics::phi_phi_mean(cap)?;
    c.check(mean >= pp, || format!("x = {cap}: mean below phi(phi) mean"));
    c.detail("mean", json!(to_f64(&mean)));
    c.detail("phi_phi_mean", json!(to_f64(&pp)));
    Ok(())
}

fn constants_regression(c: &mut Collector, cutoff: u64) -> Result<()> {
    let t12 = constants::theorem12_constant(6)?;
    c.check((t12.as_f64() - 0.341326).abs() <= 5e-7, || format!("theorem12 = {}", t12.value));
    let t13 = constants::theorem13_constant(10)?;
    c.check((t13.as_f64() - 0.003692).abs() <= 5e-6, || format!("theorem13 = {}", t13.value));
    let rho1 = constants::rho1_root(1e-7)?;
    c.check((rho1.root - 3.4199057).abs() <= 1e-6, || format!("rho1 = {}", rho1.root));
    let diag = constants::rho1_diagnostics();
    c.check(diag.holds(), || format!("rho1 diagnostics {diag:?}"));

    let doubled = 2 * cutoff;
    for (name, base, wide) in [
        (
            "artin",
            constants::artin_constant_with_cutoff(10, cutoff)?,
            constants::artin_constant_with_cutoff(10, doubled)?,
        ),
        (
            "stephens",
            constants::stephens_constant_with_cutoff(10, cutoff)?,
            constants::stephens_constant_with_cutoff(10, doubled)?,
        ),
    ] {
        c.check(base.value == wide.value, || {
            format!("{name}: {} at cutoff {cutoff}, {} at {doubled}", base.value, wide.value)
        });
        c.detail(name, json!(base.value));
    }
    // the truncated products with elementary tail bounds bracket the values
    for f in [LocalFactor::Artin, LocalFactor::Stephens, LocalFactor::Theorem13] {
        let accurate = constants::euler::evaluate(f, cutoff)?.value.to_f64();
        let (lo, hi) = EulerProductSpec::new(f, cutoff)?.bracket();
        c.check(lo <= accurate && accurate <= hi, || format!("{}: naive bracket misses value", f.name()));
    }
    let failures = constants::theorem13_identity_failures(IDENTITY_PRIME_BOUND);
    c.check(failures.is_empty(), || format!("factor forms differ at {failures:?}"));

    c.detail("theorem12", json!(t12.value));
    c.detail("theorem13", json!(t13.value));
    c.detail("rho1", json!(rho1.to_decimal_string()));
    c.detail("f_4_18", json!(diag.f_at_4_18));
    c.detail("f_4_87", json!(diag.f_at_4_87));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), json!(s.name()));
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn caps_are_validated() {
        assert!(VerifyPlan::all().with_cap(Suite::TExpansion, 10_000).is_err());
        assert!(VerifyPlan::all().with_cap(Suite::ConstantsRegression, 10).is_err());
        assert!(VerifyPlan::all().with_cap(Suite::TExpansion, 50).is_ok());
    }

    #[test]
    fn small_plan_passes_and_is_deterministic() {
        let mut plan = VerifyPlan::all();
        for (s, cap) in [
            (Suite::RcountOracle, 300),
            (Suite::TExpansion, 60),
            (Suite::Decomposition, 25),
            (Suite::Sigma1Forms, 40),
            (Suite::RhoCounts, 200),
            (Suite::LowerBound, 1000),
        ] {
            plan = plan.with_cap(s, cap).unwrap();
        }
        let one = run(&plan.clone().with_workers(1)).unwrap();
        let four = run(&plan.with_workers(4)).unwrap();
        assert!(one.passed, "{}", one.to_json());
        assert_eq!(one.to_json(), four.to_json());
    }
}
