//! Strategies and oracles shared by the property and acceptance suites.
#![allow(dead_code)]

use balans::exactnum::{floor_rat, int, rat, Int, Rat, RatInterval};
use balans::recipsum::{certified_sum, Denominator, SignMode, SumEnclosure, SumSpec};
use balans::sequences::{generalized_tribonacci, tribonacci, GenericRecurrence};
use balans::Recurrence;
use num_traits::{One, Zero};
use proptest::prelude::*;

pub fn r(v: i64) -> Rat {
    rat(v, 1)
}

/// `(q, -1, _s)` from `c_0 = 0, c_1 = s`.
pub fn constant_shape(q: i64, s: i64) -> Recurrence {
    GenericRecurrence::new(vec![r(q), r(-1)], r(s), vec![r(0), r(s)], 0, format!("({q}, -1, _{s})")).unwrap()
}

/// `(q, r)` from `c_0 = 0, c_1 = t`.
pub fn homogeneous_shape(q: i64, rr: i64, t: i64) -> Recurrence {
    GenericRecurrence::new(vec![r(q), r(rr)], r(0), vec![r(0), r(t)], 0, format!("({q}, {rr}) t={t}")).unwrap()
}

/// `(X, Y, Z)` from `G = 0, 0, 1`.
pub fn depth_three_shape(x: i64, y: i64, z: i64) -> Recurrence {
    generalized_tribonacci(&int(0), &int(0), &int(1), &int(x), &int(y), &int(z))
}

/// Recurrences shaped like the ones the reciprocal-sum statements are about,
/// restricted to parameters where the sequence needs its full depth.
pub fn theorem_family() -> impl Strategy<Value = Recurrence> {
    prop_oneof![
        (3i64..40, 1i64..12).prop_map(|(q, s)| constant_shape(q, s)),
        (3i64..30, -1i64..0, 1i64..6).prop_map(|(q, rr, t)| homogeneous_shape(q, rr, t)),
        (2i64..30, 1i64..8, 1i64..6).prop_map(|(q, rr, t)| homogeneous_shape(q, rr, t)),
        (1i64..5, 0i64..4, 1i64..4).prop_map(|(x, y, z)| depth_three_shape(x, y, z)),
    ]
}

/// Sum specifications over those families plus the Tribonacci variants
/// (every m-th term, alternating, partial sums).
pub fn sum_family() -> impl Strategy<Value = SumSpec> {
    prop_oneof![
        (theorem_family(), 1i64..8, 1u64..4).prop_map(|(rec, start, stride)| {
            let start = start.max(1 + rec.depth() as i64 - 2);
            SumSpec::plain(rec, start, stride)
        }),
        (1i64..20, 1u64..5).prop_map(|(start, stride)| SumSpec::plain(tribonacci(), start, stride)),
        (2i64..20, 1u64..3).prop_map(|(start, stride)| SumSpec {
            sequence: tribonacci(),
            start,
            stride,
            sign: SignMode::Alternating,
            denominator: Denominator::Term,
        }),
        (1i64..15, 1u64..3).prop_map(|(start, stride)| SumSpec {
            sequence: tribonacci(),
            start,
            stride,
            sign: SignMode::Plain,
            denominator: Denominator::PartialSum,
        }),
    ]
}

/// Exact sum of the first `p` terms, term by term, from one freshly generated
/// window (partial sums accumulated here, not taken from the library).
pub fn direct_partial_sum(spec: &SumSpec, p: usize) -> Rat {
    let stride = spec.stride as i64;
    let last = spec.start + stride * (p as i64 - 1);
    let denominators: Vec<Rat> = match spec.denominator {
        Denominator::Term => {
            let w = spec.sequence.window(spec.start, (last - spec.start + 1) as usize).unwrap();
            w.terms
        }
        Denominator::PartialSum => {
            let w = spec.sequence.window(1, last as usize).unwrap();
            let mut run = r(0);
            let mut out = vec![r(0)];
            for t in w.terms {
                run += t;
                out.push(run.clone());
            }
            out[spec.start as usize..].to_vec()
        }
    };
    // unreduced accumulation: the denominators are mostly coprime, so
    // reducing after every term only costs gcds on ever larger numbers
    let (mut num, mut den) = (Int::zero(), Int::one());
    for j in 0..p {
        let d = &denominators[j * spec.stride as usize];
        let (tn, td) = (d.denom().clone(), d.numer().clone());
        let tn = if spec.sign == SignMode::Alternating && j % 2 == 1 { -tn } else { tn };
        num = num * &td + tn * &den;
        den *= td;
    }
    Rat::new(num, den)
}

/// Checks the enclosure from `p` terms against a direct sum of `10 p` terms:
/// the longer partial sum (and the next one, for alternating sums) must stay
/// inside it.
pub fn oracle_agrees(spec: &SumSpec, enc: &SumEnclosure) -> bool {
    let long = 10 * enc.terms_used;
    let s_long = direct_partial_sum(spec, long);
    match spec.sign {
        SignMode::Plain => enc.interval.contains(&s_long),
        SignMode::Alternating => {
            let s_next = direct_partial_sum(spec, long + 1);
            enc.interval.contains(&s_long) && enc.interval.contains(&s_next)
        }
    }
}

/// Oracle interval for the full sum from `10 p` direct terms, reusing the
/// `p`-term majorant as the tail bound (the tail only shrinks).
pub fn oracle_interval(spec: &SumSpec, enc: &SumEnclosure) -> RatInterval {
    let long = 10 * enc.terms_used;
    let s_long = direct_partial_sum(spec, long);
    match spec.sign {
        SignMode::Plain => RatInterval::new(s_long, enc.interval.hi.clone()).unwrap(),
        SignMode::Alternating => {
            let s_next = direct_partial_sum(spec, long + 1);
            if s_long <= s_next {
                RatInterval::new(s_long, s_next).unwrap()
            } else {
                RatInterval::new(s_next, s_long).unwrap()
            }
        }
    }
}

/// First budget `p, 2p, 4p, ..` (up to 512) at which the sum certifies.
/// Shapes whose ratios oscillate early need more terms before a ratio
/// interval is invariant.
pub fn first_certified(spec: &SumSpec, p: usize) -> Option<(usize, SumEnclosure)> {
    let mut p = p;
    while p <= 512 {
        if let Ok(enc) = certified_sum(spec, p) {
            return Some((p, enc));
        }
        p *= 2;
    }
    None
}

/// Nesting at twice the first certified budget, with the longer partial sum inside both.
pub fn nests(spec: &SumSpec, p: usize) -> bool {
    let Some((p, a)) = first_certified(spec, p) else {
        return false;
    };
    let Ok(b) = certified_sum(spec, 2 * p) else {
        return false;
    };
    let s2 = direct_partial_sum(spec, 2 * p);
    a.interval.contains_interval(&b.interval) && a.interval.contains(&s2) && b.interval.contains(&s2)
}

pub fn floor_of(x: &Rat) -> Int {
    floor_rat(x)
}
