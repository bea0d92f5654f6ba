//! Term source for sparse solution sets: the balancing discriminant condition
//! rewritten as a generalized Pell equation `X^2 - A Y^2 = N`.
//!
//! With `A = 4b(a+b)`, `X = A n + 2b(b -+ a)` and `Y = sqrt(D)`:
//! balancing gives `N = 4ab^2(a - 3b)`, cobalancing gives `N = 4ab^2(a + b)`.
//! Candidates are confirmed with [`balancer_of`], so the output is exactly the
//! solution set, in the same order as an exhaustive scan.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{balancer_of, BalanceSolution, CoeffPair, Power, Variant};
use crate::exactnum::{isqrt, perfect_square, Int};

const ORBIT_CAP: usize = 100_000;

struct Form {
    a_coef: Int,
    offset: Int,
    norm: Int,
}

fn form(c: &CoeffPair, v: Variant) -> Form {
    let (a, b) = (c.a(), c.b());
    let a_coef: Int = b * 4 * (a + b);
    let (offset, norm) = match v {
        Variant::Balancing => (b * 2 * (b - a), a * b * b * 4 * (a - b * 3)),
        Variant::Cobalancing => (b * 2 * (b + a), a * b * b * 4 * (a + b)),
    };
    Form {
        a_coef,
        offset,
        norm,
    }
}

/// Smallest nontrivial solution of `x^2 - A y^2 = 1` (A not a square).
pub fn fundamental_unit(a: &Int) -> (Int, Int) {
    let a0 = isqrt(a).expect("positive");
    let (mut m, mut d, mut t) = (Int::zero(), Int::one(), a0.clone());
    let (mut p_prev, mut p) = (Int::one(), a0.clone());
    let (mut q_prev, mut q) = (Int::zero(), Int::one());
    loop {
        if &p * &p - a * &q * &q == Int::one() {
            return (p, q);
        }
        m = &d * &t - &m;
        d = (a - &m * &m) / &d;
        t = (&a0 + &m) / &d;
        let np = &t * &p + &p_prev;
        let nq = &t * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut q, nq);
    }
}

fn divisors(n: &Int) -> Vec<Int> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = Int::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Solutions `(X, Y)` with `X > 0`, `Y >= 0`, `X <= x_max`.
fn pell_points(a_coef: &Int, norm: &Int, x_max: &Int) -> Vec<(Int, Int)> {
    let mut out = Vec::new();
    if let Some(s) = perfect_square(a_coef) {
        // (X - sY)(X + sY) = N
        for d in divisors(norm) {
            for u in [d.clone(), -d] {
                let w = norm / &u;
                let (sum, diff) = (&u + &w, &w - &u);
                let two_s: Int = &s * 2;
                if sum.is_positive()
                    && !diff.is_negative()
                    && sum.is_even()
                    && diff.is_multiple_of(&two_s)
                {
                    let x = sum / 2;
                    if &x <= x_max {
                        out.push((x, diff / two_s));
                    }
                }
            }
        }
        return out;
    }
    let (u1, v1) = fundamental_unit(a_coef);
    let abs_n = norm.abs();
    let (y_lo, y_hi): (Int, Int) = if norm.is_positive() {
        let bound = &v1 * &v1 * &abs_n / ((&u1 + 1) * 2);
        (Int::zero(), isqrt(&bound).unwrap() + 1)
    } else {
        let lo = isqrt(&(&abs_n / a_coef)).unwrap();
        let bound = &v1 * &v1 * &abs_n / ((&u1 - 1) * 2);
        (lo, isqrt(&bound).unwrap() + 1)
    };
    // Any solution with X <= x_max has Y below this, so a shorter direct scan
    // is exhaustive on its own when the unit is large.
    let y_direct = isqrt(&((x_max * x_max - norm).max(Int::zero()) / a_coef)).unwrap() + 1;
    let y_hi = y_hi.min(y_direct);
    let mut bases = Vec::new();
    let mut y = y_lo;
    while y <= y_hi {
        if let Some(x) = perfect_square(&(norm + a_coef * &y * &y)) {
            bases.push((x, y.clone()));
        }
        y += 1;
    }
    for (x, y) in bases {
        for (sx, sy) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
            let mut bx = if sx > 0 { x.clone() } else { -x.clone() };
            let mut by = if sy > 0 { y.clone() } else { -y.clone() };
            for _ in 0..ORBIT_CAP {
                if bx.is_positive() && &bx <= x_max {
                    out.push((bx.clone(), by.abs()));
                }
                let same_sign = (bx.is_negative() == by.is_negative()) || by.is_zero();
                if &bx.abs() > x_max && same_sign {
                    break;
                }
                let nx = &bx * &u1 + a_coef * &by * &v1;
                let ny = &bx * &v1 + &by * &u1;
                bx = nx;
                by = ny;
            }
        }
    }
    out
}

/// All power-one solutions with `n <= limit`, ascending, at most `max_terms` of them.
pub fn enumerate(c: &CoeffPair, v: Variant, limit: &Int, max_terms: usize) -> Vec<BalanceSolution> {
    let f = form(c, v);
    let mut found: BTreeMap<Int, Int> = BTreeMap::new();
    if f.norm.is_zero() {
        // every discriminant is a square; scan directly
        let mut n = Int::one();
        while &n <= limit && found.len() < max_terms {
            if let Some(r) = balancer_of(&n, c, v) {
                found.insert(n.clone(), r);
            }
            n += 1;
        }
    } else {
        let x_max: Int = &f.a_coef * limit + f.offset.abs();
        for (x, _) in pell_points(&f.a_coef, &f.norm, &x_max) {
            let shifted = &x - &f.offset;
            if !shifted.is_multiple_of(&f.a_coef) {
                continue;
            }
            let n = shifted / &f.a_coef;
            if n.is_positive() && &n <= limit {
                if let Some(r) = balancer_of(&n, c, v) {
                    found.insert(n, r);
                }
            }
        }
    }
    found
        .into_iter()
        .take(max_terms)
        .map(|(n, r)| BalanceSolution {
            n,
            r,
            variant: v,
            power: Power::One,
        })
        .collect()
}
