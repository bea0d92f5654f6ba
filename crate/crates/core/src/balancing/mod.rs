//! (a,b) balancing and cobalancing numbers, plain and square.

pub mod claims;
pub mod pell;

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactnum::{perfect_square, perfect_square_u128, Int};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalanceError {
    #[error("coefficients must be positive, got ({a},{b})")]
    NonPositive { a: Int, b: Int },
    #[error("({a},{b}) are not coprime")]
    NotCoprime { a: Int, b: Int },
    #[error("{x} is not a ({a},{b}) cobalancing number")]
    NotCobalancing { x: Int, a: Int, b: Int },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Balancing,
    Cobalancing,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Balancing => "balancing",
            Variant::Cobalancing => "cobalancing",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Power {
    One,
    Two,
}

impl Power {
    pub fn exponent(self) -> u32 {
        match self {
            Power::One => 1,
            Power::Two => 2,
        }
    }
}

/// Coprime positive `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffPair {
    a: Int,
    b: Int,
}

impl CoeffPair {
    pub fn new(a: Int, b: Int) -> Result<Self, BalanceError> {
        if !a.is_positive() || !b.is_positive() {
            return Err(BalanceError::NonPositive { a, b });
        }
        if !a.gcd(&b).is_one() {
            return Err(BalanceError::NotCoprime { a, b });
        }
        Ok(CoeffPair { a, b })
    }

    pub fn from_u64(a: u64, b: u64) -> Result<Self, BalanceError> {
        Self::new(Int::from(a), Int::from(b))
    }

    /// Divides out the common factor; the defining identities are scale-invariant.
    pub fn reduced(a: Int, b: Int) -> Result<Self, BalanceError> {
        if !a.is_positive() || !b.is_positive() {
            return Err(BalanceError::NonPositive { a, b });
        }
        let g = a.gcd(&b);
        Self::new(a / &g, b / g)
    }

    pub fn a(&self) -> &Int {
        &self.a
    }

    pub fn b(&self) -> &Int {
        &self.b
    }

    fn small(&self) -> Option<(u64, u64)> {
        let (a, b) = (self.a.to_u64()?, self.b.to_u64()?);
        (a < 1 << 20 && b < 1 << 20).then_some((a, b))
    }
}

impl fmt::Display for CoeffPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BalanceSolution {
    pub n: Int,
    pub r: Int,
    pub variant: Variant,
    pub power: Power,
}

impl BalanceSolution {
    fn new(n: Int, r: Int, variant: Variant, power: Power) -> Self {
        BalanceSolution {
            n,
            r,
            variant,
            power,
        }
    }
}

/// Sums both sides term by term. Slow; meant as an independent check.
pub fn defining_identity(sol: &BalanceSolution, c: &CoeffPair) -> bool {
    let e = sol.power.exponent() as usize;
    let pw = |k: &Int| num_traits::pow(k.clone(), e);
    let upto = match sol.variant {
        Variant::Balancing => &sol.n - 1,
        Variant::Cobalancing => sol.n.clone(),
    };
    let mut left = Int::zero();
    let mut k = Int::one();
    while k <= upto {
        left += pw(&k);
        k += 1;
    }
    let mut right = Int::zero();
    let mut k = &sol.n + 1;
    let end = &sol.n + &sol.r;
    while k <= end {
        right += pw(&k);
        k += 1;
    }
    let min_r = match sol.power {
        Power::One => Int::one(),
        Power::Two => Int::zero(),
    };
    sol.r >= min_r && c.a() * left == c.b() * right
}

fn discriminant(n: &Int, c: &CoeffPair, v: Variant) -> Int {
    let (a, b) = (c.a(), c.b());
    let lin = match v {
        Variant::Balancing => b - a,
        Variant::Cobalancing => b + a,
    };
    let four_b: Int = b * 4;
    &four_b * (b + a) * n * n + &four_b * lin * n + b * b
}

/// `Some(Some(r))`, `Some(None)` for "not a solution", `None` on overflow.
fn balancer_small(n: u64, a: u64, b: u64, v: Variant) -> Option<Option<u64>> {
    let (n, a, b) = (n as i128, a as i128, b as i128);
    let lin = match v {
        Variant::Balancing => b - a,
        Variant::Cobalancing => b + a,
    };
    let quad = (4 * b * (a + b)).checked_mul(n)?.checked_mul(n)?;
    let d = quad.checked_add((4 * b * lin).checked_mul(n)?)?.checked_add(b * b)?;
    if d < 0 {
        return Some(None);
    }
    let Some(s) = perfect_square_u128(d as u128) else {
        return Some(None);
    };
    let num = s as i128 - (2 * n + 1) * b;
    if num < 2 * b || num % (2 * b) != 0 {
        return Some(None);
    }
    Some(Some((num / (2 * b)) as u64))
}

/// The positive integer `r` making `n` an (a,b) balancing or cobalancing number.
pub fn balancer_of(n: &Int, c: &CoeffPair, v: Variant) -> Option<Int> {
    if !n.is_positive() {
        return None;
    }
    if let (Some(nn), Some((a, b))) = (n.to_u64(), c.small()) {
        if let Some(res) = balancer_small(nn, a, b, v) {
            return res.map(Int::from);
        }
    }
    let s = perfect_square(&discriminant(n, c, v))?;
    let b = c.b();
    let num: Int = s - (n * 2 + 1) * b;
    let two_b: Int = b * 2;
    if num < two_b || !num.is_multiple_of(&two_b) {
        return None;
    }
    Some(num / two_b)
}

const CHUNK: u64 = 1 << 14;

/// Runs `f` over `lo..=hi` in parallel chunks; output keeps index order.
pub fn par_scan<T, F>(lo: u64, hi: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync,
{
    if hi < lo {
        return Vec::new();
    }
    let chunks = (hi - lo) / CHUNK + 1;
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let s = lo + k * CHUNK;
            let e = (s + CHUNK - 1).min(hi);
            (s..=e).filter_map(&f).collect::<Vec<T>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Every solution with `1 <= n <= n_max`, by exhaustive scan.
pub fn find_all(c: &CoeffPair, v: Variant, n_max: u64) -> Vec<BalanceSolution> {
    let small = c.small();
    par_scan(1, n_max, |n| {
        if let Some((a, b)) = small {
            if let Some(res) = balancer_small(n, a, b, v) {
                return res.map(|r| BalanceSolution::new(Int::from(n), Int::from(r), v, Power::One));
            }
        }
        let n = Int::from(n);
        balancer_of(&n, c, v).map(|r| BalanceSolution::new(n, r, v, Power::One))
    })
}

/// Smallest `n` in `lo..=hi` that is not a solution.
pub fn first_gap(c: &CoeffPair, v: Variant, lo: u64, hi: u64) -> Option<u64> {
    (lo..=hi).find(|&n| balancer_of(&Int::from(n), c, v).is_none())
}

/// Successor of the cobalancing number `x` (or of 0):
/// `((2b + a) x + sqrt(D) + b) / a`.
pub fn next_cobalancing(x: &Int, c: &CoeffPair) -> Result<Int, BalanceError> {
    let err = || BalanceError::NotCobalancing {
        x: x.clone(),
        a: c.a().clone(),
        b: c.b().clone(),
    };
    if x.is_negative() {
        return Err(err());
    }
    let (a, b) = (c.a(), c.b());
    let d = if x.is_zero() {
        b * b
    } else {
        discriminant(x, c, Variant::Cobalancing)
    };
    let s = perfect_square(&d).ok_or_else(err)?;
    let num: Int = (b * 2 + a) * x + s + b;
    if !num.is_multiple_of(a) {
        return Err(err());
    }
    Ok(num / a)
}

/// Orbit of `next_cobalancing` from 0, terms `<= limit`.
pub fn cobalancing_orbit(c: &CoeffPair, limit: &Int) -> Result<Vec<Int>, BalanceError> {
    let mut out = Vec::new();
    let mut x = next_cobalancing(&Int::zero(), c)?;
    while &x <= limit {
        let nx = next_cobalancing(&x, c)?;
        out.push(x);
        x = nx;
    }
    Ok(out)
}

/// `1^2 + .. + k^2`.
pub fn sum_squares(k: &Int) -> Int {
    if !k.is_positive() {
        return Int::zero();
    }
    k * (k + 1) * (k * 2 + 1) / 6
}

fn sum_squares_u128(k: u128) -> Option<u128> {
    k.checked_mul(k + 1)?.checked_mul(2 * k + 1).map(|v| v / 6)
}

/// `b * S2(n + r)` must equal this.
fn square_target(n: &Int, c: &CoeffPair, v: Variant) -> Int {
    let left = match v {
        Variant::Balancing => sum_squares(&(n - 1)),
        Variant::Cobalancing => sum_squares(n),
    };
    c.a() * left + c.b() * sum_squares(n)
}

fn square_small(n: u64, a: u64, b: u64, v: Variant) -> Option<Option<u64>> {
    let n = n as u128;
    let left = match v {
        Variant::Balancing => sum_squares_u128(n - 1)?,
        Variant::Cobalancing => sum_squares_u128(n)?,
    };
    let t = (a as u128)
        .checked_mul(left)?
        .checked_add((b as u128).checked_mul(sum_squares_u128(n)?)?)?;
    if t % b as u128 != 0 {
        return Some(None);
    }
    let t = t / b as u128;
    // S2(m) ~ m^3 / 3, so the cube-root guess is within a few steps
    let mut m = ((3.0 * t as f64).cbrt() as u128).max(n);
    while m > n && sum_squares_u128(m)? > t {
        m -= 1;
    }
    while sum_squares_u128(m)? < t {
        m += 1;
    }
    Some((sum_squares_u128(m)? == t).then(|| (m - n) as u64))
}

/// The non-negative `r` solving the square identity for `n`, if any.
/// Doubling then binary search on the strictly increasing right side.
pub fn square_balancer_of(n: &Int, c: &CoeffPair, v: Variant) -> Option<Int> {
    if !n.is_positive() {
        return None;
    }
    if let (Some(nn), Some((a, b))) = (n.to_u64(), c.small()) {
        if nn < 1 << 36 {
            if let Some(res) = square_small(nn, a, b, v) {
                return res.map(Int::from);
            }
        }
    }
    let target = square_target(n, c, v);
    if !target.is_multiple_of(c.b()) {
        return None;
    }
    let t = target / c.b();
    let (mut lo, mut hi) = (Int::zero(), Int::one());
    while sum_squares(&(n + &hi)) < t {
        lo = hi.clone();
        hi *= 2;
    }
    // S2(n + lo) < t <= S2(n + hi), except lo = 0 may already hit
    if sum_squares(&(n + &lo)) == t {
        return Some(lo);
    }
    while &hi - &lo > Int::one() {
        let mid: Int = (&lo + &hi) / 2;
        if sum_squares(&(n + &mid)) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (sum_squares(&(n + &hi)) == t).then_some(hi)
}

/// All square solutions with `n <= n_max`, walking `m = n + r` monotonically.
pub fn square_solutions(c: &CoeffPair, v: Variant, n_max: u64) -> Vec<BalanceSolution> {
    if let Some((a, b)) = c.small() {
        if let Some(found) = square_walk(a as u128, b as u128, v, n_max as u128) {
            return found
                .into_iter()
                .map(|(n, r)| BalanceSolution::new(Int::from(n), Int::from(r), v, Power::Two))
                .collect();
        }
    }
    (1..=n_max)
        .filter_map(|n| {
            let n = Int::from(n);
            square_balancer_of(&n, c, v).map(|r| BalanceSolution::new(n, r, v, Power::Two))
        })
        .collect()
}

fn square_walk(a: u128, b: u128, v: Variant, n_max: u128) -> Option<Vec<(u128, u128)>> {
    let mut out = Vec::new();
    let mut m: u128 = 1;
    let mut sm = 1u128;
    let mut prev = 0u128; // S2(n - 1)
    for n in 1..=n_max {
        let cur = prev.checked_add(n * n)?;
        let left = match v {
            Variant::Balancing => prev,
            Variant::Cobalancing => cur,
        };
        let target = a.checked_mul(left)?.checked_add(b.checked_mul(cur)?)?;
        if m < n {
            m = n;
            sm = cur;
        }
        if target % b == 0 {
            let t = target / b;
            while sm < t {
                m += 1;
                sm = sm.checked_add(m.checked_mul(m)?)?;
            }
            if sm == t {
                out.push((n, m - n));
            }
        }
        prev = cur;
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conj41Hit {
    pub x: u64,
    pub n: u64,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conj41Scan {
    /// Solutions with `x` congruent to 0, 1 or 3 mod 4 (none expected).
    pub counterexamples: Vec<Conj41Hit>,
    /// `(residue, x values tested, solutions)` per residue class.
    pub per_residue: Vec<(u64, usize, usize)>,
    /// Solutions in the `x = 4y + 2` channel.
    pub sanity: Vec<Conj41Hit>,
    /// Every `y` produced `n = y, m = 8y^2 + 8y + 1` in the sanity channel.
    pub sanity_ok: bool,
}

fn conj41_hits(x: u64, n_max: u64) -> Vec<Conj41Hit> {
    let x2 = (x as u128) * (x as u128);
    (1..=n_max)
        .filter_map(|n| {
            let n128 = n as u128;
            let v = 4 * x2 * n128 * n128 + 4 * x2 * n128 + 1;
            perfect_square_u128(v).map(|m| Conj41Hit { x, n, m: m as u64 })
        })
        .collect()
}

/// Searches `4x^2 n^2 + 4x^2 n + 1 = m^2` for `x = 4y + k`, `k in {0, 1, 3}`,
/// `1 <= y <= y_max` (plus `x = 3`), `1 <= n <= n_max`, with `k = 2` as a control.
pub fn scan_conjecture_41(y_max: u64, n_max: u64) -> Conj41Scan {
    let mut counterexamples = Vec::new();
    let mut per_residue = Vec::new();
    for k in [0u64, 1, 3] {
        let mut xs: Vec<u64> = (1..=y_max).map(|y| 4 * y + k).collect();
        if k == 3 && y_max >= 1 {
            xs.insert(0, 3);
        }
        let hits: Vec<Conj41Hit> = xs
            .par_iter()
            .flat_map_iter(|&x| conj41_hits(x, n_max))
            .collect();
        per_residue.push((k, xs.len(), hits.len()));
        counterexamples.extend(hits);
    }
    let sanity: Vec<Conj41Hit> = (1..=y_max)
        .into_par_iter()
        .flat_map_iter(|y| conj41_hits(4 * y + 2, n_max))
        .collect();
    let sanity_ok = (1..=y_max.min(n_max)).all(|y| {
        sanity
            .iter()
            .any(|h| h.x == 4 * y + 2 && h.n == y && h.m == 8 * y * y + 8 * y + 1)
    });
    Conj41Scan {
        counterexamples,
        per_residue,
        sanity,
        sanity_ok,
    }
}
