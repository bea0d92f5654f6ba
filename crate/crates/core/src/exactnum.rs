//! Exact integers, rationals, integer square roots and rational enclosures.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("square root of negative value {0}")]
    NegativeSqrt(Int),
    #[error("{0} is exactly halfway between two integers")]
    Tie(Rat),
    #[error("polynomial has no sign change over [{lo}, {hi}]")]
    NoSignChange { lo: Rat, hi: Rat },
    #[error("enclosure width must be positive")]
    BadWidth,
    #[error("interval bounds out of order: {lo} > {hi}")]
    Inverted { lo: Rat, hi: Rat },
    #[error("interval {0} contains zero")]
    ContainsZero(RatInterval),
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: Int) -> Rat {
    Rat::from_integer(v)
}

/// `10^-k` as an exact rational.
pub fn ten_pow_neg(k: u32) -> Rat {
    Rat::new(Int::one(), num_traits::pow(Int::from(10), k as usize))
}

const fn residue_table<const M: usize>() -> [bool; M] {
    let mut t = [false; M];
    let mut i = 0;
    while i < M {
        t[(i * i) % M] = true;
        i += 1;
    }
    t
}

static QR64: [bool; 64] = residue_table::<64>();
static QR63: [bool; 63] = residue_table::<63>();
static QR65: [bool; 65] = residue_table::<65>();
static QR11: [bool; 11] = residue_table::<11>();

#[inline]
fn may_be_square(x: u128) -> bool {
    QR64[(x & 63) as usize]
        && QR63[(x % 63) as usize]
        && QR65[(x % 65) as usize]
        && QR11[(x % 11) as usize]
}

pub fn isqrt_u128(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as u128;
    // one Newton step absorbs the float error, then walk to the exact floor
    r = (r + x / r.max(1)) / 2;
    while r.checked_mul(r).map_or(true, |s| s > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= x) {
        r += 1;
    }
    r
}

pub fn perfect_square_u128(x: u128) -> Option<u128> {
    if !may_be_square(x) {
        return None;
    }
    let r = isqrt_u128(x);
    (r * r == x).then_some(r)
}

pub fn isqrt(x: &Int) -> Result<Int, ExactError> {
    if x.is_negative() {
        return Err(ExactError::NegativeSqrt(x.clone()));
    }
    if let Some(v) = x.to_u128() {
        return Ok(Int::from(isqrt_u128(v)));
    }
    Ok(x.sqrt())
}

pub fn perfect_square(x: &Int) -> Option<Int> {
    if x.is_negative() {
        return None;
    }
    if let Some(v) = x.to_u128() {
        return perfect_square_u128(v).map(Int::from);
    }
    let low = x.iter_u64_digits().next().unwrap_or(0) as u128;
    if !QR64[(low & 63) as usize] {
        return None;
    }
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

pub fn floor_rat(x: &Rat) -> Int {
    x.floor().to_integer()
}

pub fn ceil_rat(x: &Rat) -> Int {
    x.ceil().to_integer()
}

/// Closest integer to `x`; exact halves are reported instead of rounded.
pub fn nearest_rat(x: &Rat) -> Result<Int, ExactError> {
    let twice = x * Rat::from_integer(Int::from(2));
    if twice.is_integer() && !x.is_integer() {
        return Err(ExactError::Tie(x.clone()));
    }
    Ok(floor_rat(&(x + rat(1, 2))))
}

pub fn sign_of(x: &Rat) -> Sign {
    if x.is_zero() {
        Sign::NoSign
    } else if x.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::Inverted { lo, hi });
        }
        Ok(RatInterval { lo, hi })
    }

    pub fn point(v: Rat) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn from_ints(lo: i64, hi: i64) -> Self {
        RatInterval::new(rat(lo, 1), rat(hi, 1)).expect("ordered bounds")
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(Int::from(2))
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `Plus`/`Minus` when the whole interval has one strict sign.
    pub fn strict_sign(&self) -> Option<Sign> {
        if self.is_positive() {
            Some(Sign::Plus)
        } else if self.is_negative() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn recip(&self) -> Result<RatInterval, ExactError> {
        if self.contains_zero() {
            return Err(ExactError::ContainsZero(self.clone()));
        }
        Ok(RatInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn abs(&self) -> RatInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            RatInterval {
                lo: Rat::zero(),
                hi: self.hi.clone().max(-self.lo.clone()),
            }
        }
    }

    pub fn scale(&self, k: &Rat) -> RatInterval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn pow(&self, e: u32) -> RatInterval {
        let mut acc = RatInterval::point(Rat::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Floor shared by every point, if there is one.
    pub fn common_floor(&self) -> Option<Int> {
        let f = floor_rat(&self.lo);
        (floor_rat(&self.hi) == f).then_some(f)
    }

    /// Nearest integer shared by every point, with no point at a tie.
    pub fn common_nearest(&self) -> Option<Int> {
        let half = rat(1, 2);
        let k = floor_rat(&(&self.lo + &half));
        let kr = rat_int(k.clone());
        (self.lo > &kr - &half && self.hi < &kr + &half).then_some(k)
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, o: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, o: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, o: &RatInterval) -> RatInterval {
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

/// Horner evaluation; `coeffs` are ordered from the highest degree down.
pub fn poly_eval(coeffs: &[Rat], x: &Rat) -> Rat {
    coeffs.iter().fold(Rat::zero(), |acc, c| acc * x + c)
}

pub fn poly_eval_interval(coeffs: &[Rat], x: &RatInterval) -> RatInterval {
    coeffs.iter().fold(RatInterval::point(Rat::zero()), |acc, c| {
        let t = &acc * x;
        RatInterval {
            lo: &t.lo + c,
            hi: &t.hi + c,
        }
    })
}

/// Bisects `bracket` down to `width` around a sign change of the polynomial
/// (coefficients from the highest degree down).
pub fn real_root_enclosure(
    coeffs: &[Rat],
    bracket: &RatInterval,
    width: &Rat,
) -> Result<RatInterval, ExactError> {
    if !width.is_positive() {
        return Err(ExactError::BadWidth);
    }
    let (mut lo, mut hi) = (bracket.lo.clone(), bracket.hi.clone());
    let (flo, fhi) = (poly_eval(coeffs, &lo), poly_eval(coeffs, &hi));
    if flo.is_zero() {
        return Ok(RatInterval::point(lo));
    }
    if fhi.is_zero() {
        return Ok(RatInterval::point(hi));
    }
    if flo.is_positive() == fhi.is_positive() {
        return Err(ExactError::NoSignChange { lo, hi });
    }
    let lo_positive = flo.is_positive();
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / Rat::from_integer(Int::from(2));
        let fm = poly_eval(coeffs, &mid);
        if fm.is_zero() {
            return Ok(RatInterval::point(mid));
        }
        if fm.is_positive() == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RatInterval { lo, hi })
}

/// The Tribonacci Binet-bound constants, read exactly from their printed decimals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinetBoundConstants {
    pub c4: Rat,
    pub a_const: Rat,
    pub d_const: Rat,
}

impl BinetBoundConstants {
    pub fn printed() -> Self {
        let p10 = |k: u32| num_traits::pow(Int::from(10), k as usize);
        BinetBoundConstants {
            c4: Rat::new(Int::from(33622811699u64), p10(11)),
            a_const: Rat::new(Int::from(51998), p10(5)),
            d_const: Rat::new(Int::from(7373527), p10(7)),
        }
    }
}

impl Default for BinetBoundConstants {
    fn default() -> Self {
        Self::printed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_small_cases() {
        assert_eq!(isqrt(&int(0)).unwrap(), int(0));
        assert_eq!(isqrt(&int(2)).unwrap(), int(1));
        assert_eq!(isqrt(&int(9801)).unwrap(), int(99));
        assert!(isqrt(&int(-1)).is_err());
    }

    #[test]
    fn isqrt_u128_edges() {
        assert_eq!(isqrt_u128(u128::MAX), u64::MAX as u128);
        for r in [1u128, 2, 3, 1 << 31, (1 << 63) - 1, u64::MAX as u128] {
            assert_eq!(isqrt_u128(r * r), r);
            assert_eq!(isqrt_u128(r * r - 1), r - 1);
        }
    }

    #[test]
    fn perfect_square_cases() {
        assert_eq!(perfect_square(&int(49)), Some(int(7)));
        assert_eq!(perfect_square(&int(50)), None);
        assert_eq!(perfect_square(&int(0)), Some(int(0)));
        assert_eq!(perfect_square(&int(-4)), None);
        let big: Int = num_traits::pow(Int::from(10), 40) + 7;
        assert_eq!(perfect_square(&(&big * &big)), Some(big.clone()));
        assert_eq!(perfect_square(&(&big * &big + 1)), None);
    }

    #[test]
    fn floor_and_nearest() {
        assert_eq!(floor_rat(&rat(100, 29)), int(3));
        assert_eq!(floor_rat(&rat(-3, 2)), int(-2));
        assert!(matches!(nearest_rat(&rat(7, 2)), Err(ExactError::Tie(_))));
        assert_eq!(nearest_rat(&rat(-7, 3)).unwrap(), int(-2));
        assert_eq!(nearest_rat(&rat(5, 1)).unwrap(), int(5));
    }

    #[test]
    fn root_enclosures() {
        let cubic = [rat(1, 1), rat(-1, 1), rat(-1, 1), rat(-1, 1)];
        let e = real_root_enclosure(&cubic, &RatInterval::from_ints(1, 2), &ten_pow_neg(6)).unwrap();
        assert!(e.width() <= ten_pow_neg(6));
        assert!(e.contains(&rat(1839286, 1000000)) || e.lo > rat(1839286, 1000000));
        assert!(e.hi < rat(1839287, 1000000));

        let lin = [rat(1, 1), rat(-1, 1)];
        let e = real_root_enclosure(&lin, &RatInterval::from_ints(0, 2), &ten_pow_neg(3)).unwrap();
        assert!(e.contains(&rat(1, 1)));

        let cbrt2 = [rat(1, 1), rat(0, 1), rat(0, 1), rat(-2, 1)];
        let e = real_root_enclosure(&cbrt2, &RatInterval::from_ints(1, 2), &ten_pow_neg(4)).unwrap();
        assert!(e.lo.pow(3) <= rat(2, 1) && e.hi.pow(3) >= rat(2, 1));

        let err = real_root_enclosure(&lin, &RatInterval::from_ints(2, 3), &ten_pow_neg(3));
        assert!(matches!(err, Err(ExactError::NoSignChange { .. })));
    }

    #[test]
    fn interval_nearest_rejects_ties() {
        let iv = RatInterval::new(rat(5, 2), rat(11, 4)).unwrap();
        assert_eq!(iv.common_nearest(), None);
        let iv = RatInterval::new(rat(51, 20), rat(11, 4)).unwrap();
        assert_eq!(iv.common_nearest(), Some(int(3)));
    }
}
