//! The character group mod `n` at enumeration scale.
//!
//! A character is an exponent vector against fixed generators of the cyclic
//! factors of `(Z/nZ)*` (see [`crate::unit_group`]). Values are roots of
//! unity `zeta_L^k` with `L = lambda(n)`, kept as the integer `k`, so every
//! sum that is known to be rational is evaluated exactly: a histogram over
//! `k` that is constant on Galois orbits sums to `sum_d hist_d * mu(d)`.

use crate::arith::{factorize, pow_mod, AsFactored, FactoredInt};
use crate::error::{check_bound, Error, Result};
use crate::exact::{ratio, sum_balanced};
use crate::par;
use crate::unit_group::{FactorKind, LambdaRootTester, UnitGroupStructure};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Largest modulus for which the full group is built.
pub const CHARACTER_BOUND: u64 = 5000;

/// Bound on `x` and `y` for [`b_sum`] and [`verify_decomposition`].
pub const SUM_BOUND: u64 = 500;

const NOT_A_UNIT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Character {
    #[serde(skip)]
    pub modulus: Arc<FactoredInt>,
    pub exponents: Vec<u64>,
    pub order: u64,
    pub is_elementary: bool,
}

impl Character {
    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterCoefficient {
    pub chi: Character,
    /// `c(chi)`, from the sum of `chi` over lambda-primitive roots.
    #[serde(serialize_with = "crate::exact::serialize_ratio")]
    pub c: BigRational,
    /// `1 / rho_n(ord chi)` for elementary `chi`, else 0.
    #[serde(serialize_with = "crate::exact::serialize_ratio")]
    pub c_bar: BigRational,
}

/// Orbits of `Z/LZ` under multiplication by units, i.e. `k` grouped by
/// `gcd(k, L)`, together with `mu(L / gcd)`.
#[derive(Debug, Clone)]
struct GaloisClasses {
    modulus: u64,
    /// For each `k`, the representative `gcd(k, L) mod L`.
    rep: Vec<u32>,
    /// `(representative, mu(L / representative))` per divisor.
    classes: Vec<(u32, i64)>,
}

impl GaloisClasses {
    fn new(modulus: u64) -> Self {
        let l = modulus;
        let rep = (0..l).map(|k| (k.gcd(&l) % l) as u32).collect();
        let classes = factorize(l)
            .expect("positive")
            .divisors()
            .into_iter()
            .map(|g| ((g % l) as u32, factorize(l / g).expect("positive").mobius() as i64))
            .collect();
        GaloisClasses { modulus, rep, classes }
    }

    /// `sum_k hist[k] * zeta_L^k` for a Galois-invariant histogram.
    fn sum(&self, hist: &[i64]) -> Result<i64> {
        debug_assert_eq!(hist.len() as u64, self.modulus);
        for (k, &h) in hist.iter().enumerate() {
            if h != hist[self.rep[k] as usize] {
                return Err(Error::Inconsistent(format!(
                    "root-of-unity sum mod {} is not Galois invariant at k = {k}",
                    self.modulus
                )));
            }
        }
        Ok(self.classes.iter().map(|&(g, mu)| hist[g as usize] * mu).sum())
    }
}

/// Group of Dirichlet characters mod `n` with explicit generators.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    modulus: Arc<FactoredInt>,
    structure: UnitGroupStructure,
    generators: Vec<u64>,
    scale: Vec<u64>,
    logs: Vec<u32>,
    roots: Vec<u64>,
    classes: GaloisClasses,
}

impl CharacterGroup {
    pub fn new(n: impl AsFactored) -> Result<Self> {
        let n = n.as_factored()?.into_owned();
        check_bound("modulus", n.value(), CHARACTER_BOUND)?;
        let structure = UnitGroupStructure::new(&n);
        let m = n.value();
        let lambda = structure.lambda;
        let width = structure.factors.len();

        let mut generators = Vec::with_capacity(width);
        let mut local_logs: Vec<(u64, Vec<u32>)> = Vec::with_capacity(width);
        for f in &structure.factors {
            let q = f.prime_power();
            let (g, table) = match f.kind {
                FactorKind::OddPrimePower => {
                    let g = prime_power_generator(f.prime, f.exponent);
                    (g, power_table(g, f.order, q))
                }
                FactorKind::TwoSign => {
                    // log is 0 for a = 1 (mod 4), 1 for a = 3 (mod 4)
                    let table = (0..q)
                        .map(|a| match a % 4 {
                            1 => 0,
                            3 => 1,
                            _ => NOT_A_UNIT,
                        })
                        .collect();
                    (q - 1, table)
                }
                FactorKind::TwoFive => {
                    let powers = power_table(5, f.order, q);
                    let table = (0..q)
                        .map(|a| match a % 4 {
                            1 => powers[a as usize],
                            3 => powers[(q - a) as usize],
                            _ => NOT_A_UNIT,
                        })
                        .collect();
                    (5, table)
                }
            };
            generators.push(crt_lift(g, q, m));
            local_logs.push((q, table));
        }

        let mut logs = vec![NOT_A_UNIT; (m as usize) * width.max(1)];
        for a in 0..m {
            if a.gcd(&m) != 1 {
                continue;
            }
            for (i, (q, table)) in local_logs.iter().enumerate() {
                logs[a as usize * width + i] = table[(a % q) as usize];
            }
        }
        let scale = structure.cyclic_orders.iter().map(|&o| lambda / o).collect();
        let tester = LambdaRootTester::new(&n);
        let roots = (0..m).filter(|&a| tester.is_root(a)).collect();
        Ok(CharacterGroup {
            modulus: Arc::new(n),
            structure,
            generators,
            scale,
            logs,
            roots,
            classes: GaloisClasses::new(lambda),
        })
    }

    pub fn modulus(&self) -> &FactoredInt {
        &self.modulus
    }

    pub fn structure(&self) -> &UnitGroupStructure {
        &self.structure
    }

    pub fn lambda(&self) -> u64 {
        self.structure.lambda
    }

    pub fn phi(&self) -> u64 {
        self.structure.phi()
    }

    /// One generator (a residue mod `n`) per cyclic factor.
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Lambda-primitive roots, as residues mod `n`.
    pub fn lambda_roots(&self) -> &[u64] {
        &self.roots
    }

    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        let m = self.modulus.value();
        (0..m).filter(move |&a| self.is_unit(a))
    }

    fn width(&self) -> usize {
        self.structure.factors.len()
    }

    fn is_unit(&self, residue: u64) -> bool {
        self.width() == 0 && residue.gcd(&self.modulus.value()) == 1
            || self.width() > 0 && self.logs[residue as usize * self.width()] != NOT_A_UNIT
    }

    /// Discrete logarithms of `a` against the generators, `None` off the unit group.
    pub fn log_vector(&self, a: u64) -> Option<&[u32]> {
        let r = a % self.modulus.value();
        if !self.is_unit(r) {
            return None;
        }
        let w = self.width();
        Some(&self.logs[r as usize * w..(r as usize + 1) * w])
    }

    /// `chi(a) = zeta_lambda^k`; `None` when `gcd(a, n) > 1`.
    pub fn value(&self, chi: &Character, a: u64) -> Option<u64> {
        let logs = self.log_vector(a)?;
        let lambda = self.lambda();
        let k = chi
            .exponents
            .iter()
            .zip(logs)
            .zip(&self.scale)
            .fold(0u64, |acc, ((&e, &l), &s)| (acc + e * l as u64 % lambda * s) % lambda);
        Some(k)
    }

    fn make_character(&self, exponents: Vec<u64>) -> Character {
        let orders = &self.structure.cyclic_orders;
        let order = exponents
            .iter()
            .zip(orders)
            .fold(1u64, |acc, (&e, &m)| acc.lcm(&(m / e.gcd(&m))));
        let exp = self.structure.e_exponent();
        let is_elementary = exponents
            .iter()
            .zip(orders)
            .all(|(&e, &m)| e % exp.gcd(&m) == 0);
        Character {
            modulus: Arc::clone(&self.modulus),
            exponents,
            order,
            is_elementary,
        }
    }

    pub fn character(&self, exponents: &[u64]) -> Result<Character> {
        let orders = &self.structure.cyclic_orders;
        if exponents.len() != orders.len() || exponents.iter().zip(orders).any(|(&e, &m)| e >= m) {
            return Err(Error::InvalidArgument(format!(
                "exponent vector {exponents:?} does not fit cyclic orders {orders:?}"
            )));
        }
        Ok(self.make_character(exponents.to_vec()))
    }

    pub fn principal(&self) -> Character {
        self.make_character(vec![0; self.width()])
    }

    /// All `phi(n)` characters, principal first, exponent vectors in
    /// lexicographic order.
    pub fn characters(&self) -> Vec<Character> {
        mixed_radix(&self.structure.cyclic_orders, &vec![1; self.width()])
            .into_iter()
            .map(|e| self.make_character(e))
            .collect()
    }

    /// Elementary characters only. A character is trivial on `E(n)`, the
    /// `M`-torsion with `M = lambda / rad(lambda)`, exactly when each
    /// exponent is a multiple of `gcd(M, m_i)`.
    pub fn elementary_characters(&self) -> Vec<Character> {
        let exp = self.structure.e_exponent();
        let steps: Vec<u64> = self.structure.cyclic_orders.iter().map(|m| exp.gcd(m)).collect();
        mixed_radix(&self.structure.cyclic_orders, &steps)
            .into_iter()
            .map(|e| self.make_character(e))
            .collect()
    }

    /// Generators of `E(n)` found by enumerating the units killed by
    /// `lambda / rad(lambda)` and closing under multiplication.
    pub fn e_generators(&self) -> Vec<u64> {
        let m = self.modulus.value();
        let exp = self.structure.e_exponent();
        let members: Vec<u64> = self
            .units()
            .filter(|&a| m == 1 || pow_mod(a, exp, m) == 1)
            .collect();
        let mut in_span = vec![false; m as usize];
        in_span[(1 % m) as usize] = true;
        let mut span = vec![1 % m];
        let mut gens = Vec::new();
        for &a in &members {
            if in_span[a as usize] {
                continue;
            }
            gens.push(a);
            let mut frontier = span.clone();
            while let Some(b) = frontier.pop() {
                for &g in &gens {
                    let c = (b as u128 * g as u128 % m as u128) as u64;
                    if !in_span[c as usize] {
                        in_span[c as usize] = true;
                        span.push(c);
                        frontier.push(c);
                    }
                }
            }
        }
        debug_assert_eq!(span.len(), members.len());
        gens
    }

    /// Elementary test by evaluation on generators of `E(n)`.
    pub fn is_trivial_on(&self, chi: &Character, elements: &[u64]) -> bool {
        elements.iter().all(|&a| self.value(chi, a) == Some(0))
    }

    /// `sum_{a unit} chi(a)`, exact.
    pub fn unit_sum(&self, chi: &Character) -> Result<i64> {
        self.exact_sum(chi, self.units())
    }

    /// `sum' chi(b)` over lambda-primitive roots `b` in `[1, n]`, exact.
    pub fn root_sum(&self, chi: &Character) -> Result<i64> {
        self.exact_sum(chi, self.roots.iter().copied())
    }

    fn exact_sum(&self, chi: &Character, elements: impl Iterator<Item = u64>) -> Result<i64> {
        let mut hist = vec![0i64; self.lambda() as usize];
        for a in elements {
            let k = self.value(chi, a).expect("unit");
            hist[k as usize] += 1;
        }
        self.classes.sum(&hist)
    }

    /// `c(chi) = (1/phi(n)) sum' chi(b)` and the majorant `c_bar(chi)`.
    pub fn coefficient(&self, chi: &Character) -> Result<CharacterCoefficient> {
        let s = self.root_sum(chi)?;
        let c = ratio(s, self.phi());
        let c_bar = if chi.is_elementary {
            ratio(1, rho_structure(&self.structure, chi.order)?)
        } else {
            BigRational::zero()
        };
        Ok(CharacterCoefficient { chi: chi.clone(), c, c_bar })
    }

    /// `sum_chi s(chi) chi(a)` over `(chi, s(chi))` pairs, exact. Returns
    /// `None` off the unit group.
    fn weighted_value_sum(&self, weighted: &[(Character, i64)], a: u64, hist: &mut [i64]) -> Result<Option<i64>> {
        if self.log_vector(a).is_none() {
            return Ok(None);
        }
        hist.iter_mut().for_each(|h| *h = 0);
        for (chi, s) in weighted {
            let k = self.value(chi, a).expect("unit");
            hist[k as usize] += s;
        }
        self.classes.sum(hist).map(Some)
    }
}

fn mixed_radix(orders: &[u64], steps: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::with_capacity(orders.len())];
    for (&m, &step) in orders.iter().zip(steps) {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..m).step_by(step as usize).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// `table[g^j mod q] = j` for `j < order`, `NOT_A_UNIT` elsewhere.
fn power_table(g: u64, order: u64, q: u64) -> Vec<u32> {
    let mut table = vec![NOT_A_UNIT; q as usize];
    let mut x = 1 % q;
    for j in 0..order {
        debug_assert_eq!(table[x as usize], NOT_A_UNIT, "{g} has order below {order} mod {q}");
        table[x as usize] = j as u32;
        x = x * g % q;
    }
    table
}

/// Smallest primitive root `g` mod odd `p`, bumped to `g + p` when it fails to
/// generate mod `p^2`.
fn prime_power_generator(p: u64, e: u32) -> u64 {
    let pm1 = factorize(p - 1).expect("positive");
    let g = (2..p)
        .find(|&g| pm1.primes().all(|q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("odd primes have a primitive root");
    if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

/// The residue mod `m` that is `g` mod `q` and 1 mod `m / q`.
fn crt_lift(g: u64, q: u64, m: u64) -> u64 {
    let rest = m / q;
    if rest == 1 {
        return g % m;
    }
    // x = 1 + rest * t with 1 + rest * t = g (mod q)
    let inv = mod_inverse(rest % q, q);
    let t = ((g + q - 1) % q) as u128 * inv as u128 % q as u128;
    ((1 + rest as u128 * t) % m as u128) as u64
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = i128::extended_gcd(&(a as i128), &(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

fn rho_structure(s: &UnitGroupStructure, h: u64) -> Result<u64> {
    let hf = factorize(h)?;
    if !hf.is_squarefree() {
        return Err(Error::NotSquarefree(h));
    }
    let mut out = 1u64;
    for q in hf.primes() {
        let d = s.delta_q(q);
        if d == 0 {
            return Err(Error::OutsideLambdaSupport { h, q, n: s.n.value() });
        }
        out *= q.pow(d) - 1;
    }
    Ok(out)
}

/// `rho_n(h) = prod_{q | h} (q^Delta_q(n) - 1)` for squarefree `h` whose
/// primes divide `lambda(n)`.
pub fn rho(n: impl AsFactored, h: u64) -> Result<u64> {
    if h == 0 {
        return Err(Error::InvalidArgument("h must be positive".into()));
    }
    rho_structure(&UnitGroupStructure::new(&*n.as_factored()?), h)
}

pub fn character_group(n: impl AsFactored) -> Result<Vec<Character>> {
    Ok(CharacterGroup::new(n)?.characters())
}

pub fn coefficient(chi: &Character) -> Result<CharacterCoefficient> {
    CharacterGroup::new(&*chi.modulus)?.coefficient(chi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TExpansionCheck {
    pub n: u64,
    pub units: u64,
    /// Exact agreement of `sum_chi c(chi) chi(a)` with `t_a(n)` for all units.
    pub exact: bool,
    /// Largest `|sum_chi c(chi) chi(a) - t_a(n)|` in double precision.
    pub max_residual: f64,
    /// Characters with nonzero `c(chi)` that are not elementary (must be 0).
    pub nonelementary_nonzero: u64,
}

impl TExpansionCheck {
    pub fn holds(&self) -> bool {
        self.exact && self.max_residual < 1e-9 && self.nonelementary_nonzero == 0
    }
}

/// Evaluates the character expansion of `t_a(n)` at every unit, both
/// exactly and in floating point.
pub fn t_expansion_check(n: impl AsFactored) -> Result<TExpansionCheck> {
    let group = CharacterGroup::new(n)?;
    let phi = group.phi() as i64;
    let lambda = group.lambda();
    let mut weighted = Vec::new();
    let mut nonelementary_nonzero = 0;
    for chi in group.characters() {
        let s = group.root_sum(&chi)?;
        if s != 0 {
            if !chi.is_elementary {
                nonelementary_nonzero += 1;
            }
            weighted.push((chi, s));
        }
    }
    let tester = LambdaRootTester::new(group.modulus());
    let angles: Vec<(f64, f64)> = (0..lambda)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / lambda as f64;
            (t.cos(), t.sin())
        })
        .collect();
    let mut exact = true;
    let mut max_residual = 0f64;
    let mut units = 0;
    let mut hist = vec![0i64; lambda as usize];
    for a in group.units() {
        units += 1;
        let t = tester.is_root(a) as i64;
        let total = group.weighted_value_sum(&weighted, a, &mut hist)?.expect("unit");
        exact &= total == phi * t;
        let (mut re, mut im) = (0f64, 0f64);
        for (chi, s) in &weighted {
            let (c, si) = angles[group.value(chi, a).expect("unit") as usize];
            let w = *s as f64 / phi as f64;
            re += w * c;
            im += w * si;
        }
        max_residual = max_residual.max(((re - t as f64).powi(2) + im * im).sqrt());
    }
    Ok(TExpansionCheck {
        n: group.modulus().value(),
        units,
        exact,
        max_residual,
        nonelementary_nonzero,
    })
}

pub fn verify_t_expansion(n: impl AsFactored) -> Result<bool> {
    Ok(t_expansion_check(n)?.holds())
}

/// Per-modulus pieces of the first-moment decomposition.
#[derive(Debug, Clone)]
pub(crate) struct ModulusSums {
    pub n: u64,
    pub phi: u64,
    /// `sum' chi_0(b)`, i.e. the number of lambda-primitive roots.
    pub principal_root_sum: i64,
    /// For each residue `r` mod `n`: `sum_{chi in X(n)} s(chi) chi(r)`,
    /// where `c(chi) = s(chi) / phi(n)`; zero off the unit group.
    pub nonprincipal: Vec<i64>,
}

impl ModulusSums {
    pub fn new(n: u64) -> Result<Self> {
        let group = CharacterGroup::new(n)?;
        let principal_root_sum = group.root_sum(&group.principal())?;
        let mut weighted = Vec::new();
        for chi in group.elementary_characters() {
            if chi.is_principal() {
                continue;
            }
            let s = group.root_sum(&chi)?;
            if s != 0 {
                weighted.push((chi, s));
            }
        }
        let mut hist = vec![0i64; group.lambda() as usize];
        let nonprincipal = (0..n)
            .map(|r| Ok(group.weighted_value_sum(&weighted, r, &mut hist)?.unwrap_or(0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModulusSums {
            n,
            phi: group.phi(),
            principal_root_sum,
            nonprincipal,
        })
    }

    /// `sum_{chi in X(n)} c(chi) chi(a)`.
    pub fn nonprincipal_at(&self, a: u64) -> BigRational {
        ratio(self.nonprincipal[(a % self.n) as usize], self.phi)
    }

    pub fn principal_coefficient(&self) -> BigRational {
        ratio(self.principal_root_sum, self.phi)
    }

    /// `sum_{a <= y} sum_{chi in X(n)} s(chi) chi(a)`, an integer.
    pub fn nonprincipal_prefix(&self, y: u64) -> i64 {
        let full = y / self.n;
        let rest = y % self.n;
        let total: i64 = self.nonprincipal.iter().sum();
        // residues 1..=rest, then wrap to residue 0 only through full periods
        let partial: i64 = (1..=rest).map(|a| self.nonprincipal[(a % self.n) as usize]).sum();
        full as i64 * total + partial
    }
}

pub(crate) fn modulus_sums(x: u64) -> Result<Vec<ModulusSums>> {
    par::map_range(1..x + 1, ModulusSums::new).into_iter().collect()
}

/// `B(x, y) = sum_{n <= x} sum_{chi in X(n)} c(chi) sum_{a <= y} chi(a)`,
/// with `X(n)` the non-principal elementary characters mod `n`.
pub fn b_sum(x: u64, y: u64) -> Result<BigRational> {
    check_sum_bounds(x, y)?;
    Ok(b_sum_from(&modulus_sums(x)?, y))
}

pub(crate) fn b_sum_from(sums: &[ModulusSums], y: u64) -> BigRational {
    sum_balanced(
        sums.iter()
            .map(|m| ratio(m.nonprincipal_prefix(y), m.phi))
            .collect(),
    )
}

fn check_sum_bounds(x: u64, y: u64) -> Result<()> {
    if x == 0 || y == 0 {
        return Err(Error::InvalidArgument("x and y must be positive".into()));
    }
    check_bound("x", x, SUM_BOUND)?;
    check_bound("y", y, SUM_BOUND)
}

/// `#{a <= y : gcd(a, n) = 1}`.
pub fn coprime_count(n: u64, y: u64) -> u64 {
    (1..=y).filter(|a| a.gcd(&n) == 1).count() as u64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionCheck {
    pub x: u64,
    pub y: u64,
    /// `sum_{a <= y} N_a(x)` by direct counting.
    pub lhs: u64,
    /// `sum_{n <= x} c(chi_0) #{a <= y : (a, n) = 1}`.
    #[serde(serialize_with = "crate::exact::serialize_ratio")]
    pub principal: BigRational,
    #[serde(serialize_with = "crate::exact::serialize_ratio")]
    pub b: BigRational,
}

impl DecompositionCheck {
    pub fn holds(&self) -> bool {
        BigRational::from_integer(self.lhs.into()) == &self.principal + &self.b
    }
}

/// Exact form of the first-moment decomposition.
pub fn decomposition_check(x: u64, y: u64) -> Result<DecompositionCheck> {
    check_sum_bounds(x, y)?;
    let sums = modulus_sums(x)?;
    let lhs: u64 = par::map_range(1..x + 1, |n| {
        let tester = LambdaRootTester::new(&factorize(n).expect("positive"));
        (1..=y).filter(|&a| tester.is_root(a)).count() as u64
    })
    .into_iter()
    .sum();
    let principal = sum_balanced(
        sums.iter()
            .map(|m| m.principal_coefficient() * BigRational::from_integer(coprime_count(m.n, y).into()))
            .collect(),
    );
    Ok(DecompositionCheck { x, y, lhs, principal, b: b_sum_from(&sums, y) })
}

pub fn verify_decomposition(x: u64, y: u64) -> Result<bool> {
    Ok(decomposition_check(x, y)?.holds())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoCheck {
    pub n: u64,
    /// Elementary characters per order, elementarity decided by evaluation
    /// on enumerated generators of `E(n)`.
    pub counts: BTreeMap<u64, u64>,
    /// `rho_n(h)` for every squarefree `h | rad(lambda(n))`.
    pub expected: BTreeMap<u64, u64>,
    /// Characters where the enumerated and structural tests disagree.
    pub flag_mismatches: u64,
}

impl RhoCheck {
    pub fn holds(&self) -> bool {
        self.flag_mismatches == 0 && self.counts == self.expected
    }
}

pub fn rho_check(n: impl AsFactored) -> Result<RhoCheck> {
    let group = CharacterGroup::new(n)?;
    let gens = group.e_generators();
    let mut counts = BTreeMap::new();
    let mut flag_mismatches = 0;
    for chi in group.characters() {
        let elementary = group.is_trivial_on(&chi, &gens);
        if elementary != chi.is_elementary {
            flag_mismatches += 1;
        }
        if elementary {
            *counts.entry(chi.order).or_insert(0) += 1;
        }
    }
    let primes: Vec<u64> = group.structure().delta.keys().copied().collect();
    let mut expected = BTreeMap::new();
    for mask in 0u32..(1 << primes.len()) {
        let h: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &q)| q)
            .product();
        expected.insert(h, rho_structure(group.structure(), h)?);
    }
    Ok(RhoCheck { n: group.modulus().value(), counts, expected, flag_mismatches })
}

/// Sign and size of `c(chi)` for elementary characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientCheck {
    pub n: u64,
    pub elementary: u64,
    /// `|c| <= c_bar` failed.
    pub bound_violations: u64,
    /// `c * rho(ord) * phi / R` outside `{+1, -1}`.
    pub unit_violations: u64,
    /// Sign equals `mu(ord chi)`.
    pub matches_mobius: u64,
    /// Sign equals `(-1)^ord(chi)`.
    pub matches_parity: u64,
    /// Non-elementary characters with `c != 0`.
    pub nonelementary_nonzero: u64,
}

pub fn coefficient_check(n: impl AsFactored, include_nonelementary: bool) -> Result<CoefficientCheck> {
    let group = CharacterGroup::new(n)?;
    let r = group.lambda_roots().len() as i64;
    let phi = group.phi() as i64;
    let mut out = CoefficientCheck {
        n: group.modulus().value(),
        elementary: 0,
        bound_violations: 0,
        unit_violations: 0,
        matches_mobius: 0,
        matches_parity: 0,
        nonelementary_nonzero: 0,
    };
    let chars = if include_nonelementary {
        group.characters()
    } else {
        group.elementary_characters()
    };
    for chi in chars {
        let coeff = group.coefficient(&chi)?;
        if !chi.is_elementary {
            if !coeff.c.is_zero() {
                out.nonelementary_nonzero += 1;
            }
            continue;
        }
        out.elementary += 1;
        if coeff.c.abs() > coeff.c_bar {
            out.bound_violations += 1;
        }
        if r == 0 {
            continue;
        }
        let normalized = &coeff.c / &coeff.c_bar * ratio(phi, r);
        let sign = if normalized == crate::exact::int(1) {
            1
        } else if normalized == crate::exact::int(-1) {
            -1
        } else {
            out.unit_violations += 1;
            continue;
        };
        let mu = factorize(chi.order)?.mobius() as i64;
        if sign == mu {
            out.matches_mobius += 1;
        }
        if sign == if chi.order % 2 == 0 { 1 } else { -1 } {
            out.matches_parity += 1;
        }
    }
    Ok(out)
}
