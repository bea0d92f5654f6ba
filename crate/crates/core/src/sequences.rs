//! Linear recurrences with a constant term, generated forward and backward.
//!
//! A recurrence of depth `d` is written `(x1, ..., xd, _x0)`:
//! `c_n = x1 c_{n-1} + ... + xd c_{n-d} + x0`.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{Num, One, Signed};
use thiserror::Error;

use crate::exactnum::{Int, Rat};

/// Scalars a recurrence can run over.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed {}

impl<T: Clone + Debug + Display + PartialOrd + Num + Signed> Scalar for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("a recurrence needs at least one coefficient")]
    NoCoefficients,
    #[error("depth {depth} needs at least {depth} initial terms, got {got}")]
    ShortInitial { depth: usize, got: usize },
    #[error("cannot extend backward: trailing coefficient is zero")]
    Extension,
    #[error("({a},{b}): a must divide 2b")]
    Unsupported { a: Int, b: Int },
    #[error("({a},{b}) are not coprime")]
    NotCoprime { a: Int, b: Int },
    #[error("coefficients must be positive, got ({a},{b})")]
    NonPositive { a: Int, b: Int },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericRecurrence<T> {
    /// `x1 .. xd`, most recent term first.
    pub coeffs: Vec<T>,
    pub constant: T,
    pub initial: Vec<T>,
    /// Index of `initial[0]`.
    pub base: i64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow<T> {
    pub start: i64,
    pub terms: Vec<T>,
}

impl<T> SequenceWindow<T> {
    pub fn get(&self, i: i64) -> Option<&T> {
        usize::try_from(i - self.start).ok().and_then(|k| self.terms.get(k))
    }

    pub fn end(&self) -> i64 {
        self.start + self.terms.len() as i64
    }
}

impl<T: Scalar> GenericRecurrence<T> {
    pub fn new(
        coeffs: Vec<T>,
        constant: T,
        initial: Vec<T>,
        base: i64,
        label: impl Into<String>,
    ) -> Result<Self, SeqError> {
        if coeffs.is_empty() {
            return Err(SeqError::NoCoefficients);
        }
        if initial.len() < coeffs.len() {
            return Err(SeqError::ShortInitial {
                depth: coeffs.len(),
                got: initial.len(),
            });
        }
        Ok(GenericRecurrence {
            coeffs,
            constant,
            initial,
            base,
            label: label.into(),
        })
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    /// Same recurrence rule, new initial block.
    pub fn with_initial(&self, initial: Vec<T>, base: i64) -> Result<Self, SeqError> {
        Self::new(
            self.coeffs.clone(),
            self.constant.clone(),
            initial,
            base,
            self.label.clone(),
        )
    }

    /// Next term from the `depth` terms ending at `tail`'s last element.
    pub fn step(&self, tail: &[T]) -> T {
        let d = self.depth();
        let mut acc = self.constant.clone();
        for (j, x) in self.coeffs.iter().enumerate() {
            if !x.is_zero() {
                acc = acc + x.clone() * tail[tail.len() - 1 - j].clone();
            }
        }
        debug_assert!(tail.len() >= d);
        acc
    }

    /// The term `depth` places before `block[0]`, given `block` of length `depth`.
    fn step_back(&self, block: &[T]) -> Result<T, SeqError> {
        let d = self.depth();
        let last = &self.coeffs[d - 1];
        if last.is_zero() {
            return Err(SeqError::Extension);
        }
        // block[d-1] is c_n, block[d-1-j] is c_{n-j}; solve for c_{n-d}
        let mut acc = block[d - 1].clone() - self.constant.clone();
        for j in 1..d {
            acc = acc - self.coeffs[j - 1].clone() * block[d - 1 - j].clone();
        }
        Ok(acc / last.clone())
    }

    pub fn window(&self, start: i64, count: usize) -> Result<SequenceWindow<T>, SeqError> {
        let d = self.depth();
        let mut terms: Vec<T> = self.initial.clone();
        let mut first = self.base;
        while first > start {
            let block: Vec<T> = (0..d).map(|k| terms[k].clone()).collect();
            let prev = self.step_back(&block)?;
            terms.insert(0, prev);
            first -= 1;
        }
        let need = (start - first) as usize + count;
        while terms.len() < need {
            let next = self.step(&terms[terms.len() - d..]);
            terms.push(next);
        }
        let off = (start - first) as usize;
        Ok(SequenceWindow {
            start,
            terms: terms[off..off + count].to_vec(),
        })
    }

    pub fn term(&self, i: i64) -> Result<T, SeqError> {
        Ok(self.window(i, 1)?.terms.pop().expect("one term"))
    }
}

fn r(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

fn ri(v: Int) -> Rat {
    Rat::from_integer(v)
}

/// `F_0 = 0, F_1 = 1`.
pub fn fibonacci() -> GenericRecurrence<Rat> {
    GenericRecurrence::new(vec![r(1), r(1)], r(0), vec![r(0), r(1)], 0, "fibonacci").unwrap()
}

/// `T_0 = 0, T_1 = T_2 = 1`.
pub fn tribonacci() -> GenericRecurrence<Rat> {
    GenericRecurrence::new(
        vec![r(1), r(1), r(1)],
        r(0),
        vec![r(0), r(1), r(1)],
        0,
        "tribonacci",
    )
    .unwrap()
}

/// `P_0 = 0, P_1 = 1, P_n = 2P_{n-1} + P_{n-2}`.
pub fn pell() -> GenericRecurrence<Rat> {
    GenericRecurrence::new(vec![r(2), r(1)], r(0), vec![r(0), r(1)], 0, "pell").unwrap()
}

/// Classical balancing numbers, `B_1 = 6, B_2 = 35`; backward extension gives `B_0 = 1`.
pub fn balancing_rec() -> GenericRecurrence<Rat> {
    GenericRecurrence::new(vec![r(6), r(-1)], r(0), vec![r(6), r(35)], 1, "balancing").unwrap()
}

// With gcd(a, b) = 1, a | 2b already forces a in {1, 2}.
fn cobalancing_m(a: &Int, b: &Int) -> Result<Int, SeqError> {
    if !a.is_positive() || !b.is_positive() {
        return Err(SeqError::NonPositive {
            a: a.clone(),
            b: b.clone(),
        });
    }
    if !a.gcd(b).is_one() {
        return Err(SeqError::NotCoprime {
            a: a.clone(),
            b: b.clone(),
        });
    }
    let two_b: Int = b * 2;
    if !two_b.is_multiple_of(a) {
        return Err(SeqError::Unsupported {
            a: a.clone(),
            b: b.clone(),
        });
    }
    Ok(two_b / a)
}

/// `(2m+2, -1, _m)` with `c_1 = m, c_2 = 2m^2 + 3m`, `m = 2b/a`; `c_0 = 0` by extension.
pub fn cobalancing_rec(a: &Int, b: &Int) -> Result<GenericRecurrence<Rat>, SeqError> {
    let m = cobalancing_m(a, b)?;
    let c2: Int = &m * &m * 2 + &m * 3;
    GenericRecurrence::new(
        vec![ri(&m * 2 + 2), r(-1)],
        ri(m.clone()),
        vec![ri(m), ri(c2)],
        1,
        format!("cobalancing({a},{b})"),
    )
}

/// `(2m+2, -1)` with `r_1 = 1, r_2 = 2m+2`; `r_0 = 0` by extension.
pub fn cobalancer_rec(a: &Int, b: &Int) -> Result<GenericRecurrence<Rat>, SeqError> {
    let m = cobalancing_m(a, b)?;
    let q: Int = &m * 2 + 2;
    GenericRecurrence::new(
        vec![ri(q.clone()), r(-1)],
        r(0),
        vec![r(1), ri(q)],
        1,
        format!("cobalancer({a},{b})"),
    )
}

/// `G_n = X G_{n-1} + Y G_{n-2} + Z G_{n-3}` from `G_0 = p, G_1 = q, G_2 = r`.
pub fn generalized_tribonacci(
    p: &Int,
    q: &Int,
    r0: &Int,
    x: &Int,
    y: &Int,
    z: &Int,
) -> GenericRecurrence<Rat> {
    GenericRecurrence::new(
        vec![ri(x.clone()), ri(y.clone()), ri(z.clone())],
        r(0),
        vec![ri(p.clone()), ri(q.clone()), ri(r0.clone())],
        0,
        format!("G({p},{q},{r0};{x},{y},{z})"),
    )
    .unwrap()
}

/// Terms that are integers, as integers.
pub fn as_integers(terms: &[Rat]) -> Option<Vec<Int>> {
    terms
        .iter()
        .map(|t| t.is_integer().then(|| t.to_integer()))
        .collect()
}
