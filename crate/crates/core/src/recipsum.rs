//! Certified enclosures of reciprocal sums and exact floors/nearest integers
//! of their inverses.
//!
//! A sum is `sum_j s_j / e(start + stride * j)` where `e` is either the sequence
//! itself or its partial sums `e(i) = c_1 + .. + c_i`, and `s_j` is `1` or
//! `(-1)^j`. The first `P` terms are summed exactly; the tail is bounded by a
//! ratio certificate (or, for `(q, -1, _s)` shapes, by quadratic growth).

use std::fmt;

use num_bigint::Sign;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{
    floor_rat, isqrt, poly_eval_interval, rat, rat_int, real_root_enclosure, BinetBoundConstants,
    ExactError, Int, Rat, RatInterval,
};
use crate::sequences::{tribonacci, SeqError};
use crate::Recurrence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecipError {
    #[error("term {index} is {value}, not positive")]
    Domain { index: i64, value: Rat },
    #[error("tail certificate failed: {0}")]
    Certification(String),
    #[error("undecidable within {terms} terms; inverse enclosure {enclosure}")]
    Budget { terms: usize, enclosure: RatInterval },
    #[error("recurrence has the wrong shape: {0}")]
    Shape(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Sequence(#[from] SeqError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    Plain,
    /// `+ - + - ..`, starting positive.
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Denominator {
    Term,
    PartialSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Floor,
    Nearest,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Floor => "floor",
            Mode::Nearest => "nearest",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumSpec {
    pub sequence: Recurrence,
    /// Index of the first denominator.
    pub start: i64,
    pub stride: u64,
    pub sign: SignMode,
    pub denominator: Denominator,
}

impl SumSpec {
    pub fn plain(sequence: Recurrence, start: i64, stride: u64) -> Self {
        SumSpec {
            sequence,
            start,
            stride,
            sign: SignMode::Plain,
            denominator: Denominator::Term,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailCertificate {
    /// Every ratio `e(i+1)/e(i)` past `from_index` stays in `[g, h]`;
    /// the tail is at most `majorant`.
    Geometric {
        g: Rat,
        h: Rat,
        from_index: i64,
        majorant: Rat,
    },
    /// `e(i) - e(i-1)` grows by at least `s` per step past `from_index`.
    QuadraticGrowth { from_index: i64, majorant: Rat },
    /// Terms decrease in magnitude past `from_index` (ratio at least `g`);
    /// the tail lies between 0 and the first omitted term.
    Alternating {
        g: Rat,
        from_index: i64,
        first_omitted: Rat,
    },
}

impl TailCertificate {
    pub fn majorant(&self) -> &Rat {
        match self {
            TailCertificate::Geometric { majorant, .. } => majorant,
            TailCertificate::QuadraticGrowth { majorant, .. } => majorant,
            TailCertificate::Alternating { first_omitted, .. } => first_omitted,
        }
    }
}

impl fmt::Display for TailCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailCertificate::Geometric {
                g,
                from_index,
                majorant,
                ..
            } => write!(
                f,
                "geometric: ratio >= {:.6} from index {from_index}, tail <= {:.3e}",
                g.to_f64().unwrap_or(f64::NAN),
                majorant.to_f64().unwrap_or(f64::NAN)
            ),
            TailCertificate::QuadraticGrowth {
                from_index,
                majorant,
            } => write!(
                f,
                "quadratic growth from index {from_index}, tail <= {:.3e}",
                majorant.to_f64().unwrap_or(f64::NAN)
            ),
            TailCertificate::Alternating {
                from_index,
                first_omitted,
                ..
            } => write!(
                f,
                "alternating: decreasing from index {from_index}, tail <= {:.3e}",
                first_omitted.to_f64().unwrap_or(f64::NAN)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumEnclosure {
    pub interval: RatInterval,
    pub partial_sum: Rat,
    pub terms_used: usize,
    pub certificate: TailCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumVerdict {
    /// Enclosure of the inverse of the sum.
    pub enclosure: RatInterval,
    pub sum: SumEnclosure,
    pub answer: Int,
    pub mode: Mode,
    pub terms_used: usize,
}

/// The recurrence satisfied by `P_i = c_1 + .. + c_i`.
pub fn partial_sum_recurrence(rec: &Recurrence) -> Result<Recurrence, RecipError> {
    let x = &rec.coeffs;
    let d = x.len();
    let mut y = Vec::with_capacity(d + 1);
    y.push(Rat::one() + &x[0]);
    for j in 1..d {
        y.push(&x[j] - &x[j - 1]);
    }
    y.push(-x[d - 1].clone());
    let c = rec.window(1, d)?.terms;
    let mut p = vec![Rat::zero()];
    for t in c {
        let next = p.last().unwrap() + t;
        p.push(next);
    }
    Ok(Recurrence::new(
        y,
        rec.constant.clone(),
        p,
        0,
        format!("partial sums of {}", rec.label),
    )?)
}

/// Contiguous denominators `e(lo..=hi)`.
fn denominators(spec: &SumSpec, lo: i64, hi: i64) -> Result<Vec<Rat>, RecipError> {
    let count = (hi - lo + 1) as usize;
    match spec.denominator {
        Denominator::Term => Ok(spec.sequence.window(lo, count)?.terms),
        Denominator::PartialSum => {
            if lo < 0 {
                return Err(RecipError::Params("partial sums need indices >= 0".into()));
            }
            let c = spec.sequence.window(1, hi.max(0) as usize)?.terms;
            let mut p = Vec::with_capacity(c.len() + 1);
            p.push(Rat::zero());
            for t in c {
                let next = p.last().unwrap() + t;
                p.push(next);
            }
            Ok(p[lo as usize..=hi as usize].to_vec())
        }
    }
}

fn effective_rule(spec: &SumSpec) -> Result<(Vec<Rat>, Rat), RecipError> {
    match spec.denominator {
        Denominator::Term => Ok((spec.sequence.coeffs.clone(), spec.sequence.constant.clone())),
        Denominator::PartialSum => {
            let p = partial_sum_recurrence(&spec.sequence)?;
            Ok((p.coeffs, p.constant))
        }
    }
}

fn dyadic_down(x: &Rat, bits: usize) -> Rat {
    let scale = num_traits::pow(Int::from(2), bits);
    Rat::new(floor_rat(&(x * rat_int(scale.clone()))), scale)
}

fn dyadic_up(x: &Rat, bits: usize) -> Rat {
    -dyadic_down(&-x, bits)
}

/// Finds `[g, h]` with `g > 1` that the recurrence maps into itself, given
/// `tail` = the last terms of a positive run (at least `depth` of them).
///
/// If the latest `depth - 1` ratios lie in `[g, h]` and the next ratio, bounded
/// using the signs of the coefficients, again lies in `[g, h]`, induction keeps
/// every later ratio there.
fn certify_ratios(coeffs: &[Rat], constant: &Rat, tail: &[Rat]) -> Option<(Rat, Rat)> {
    let d = coeffs.len();
    if tail.len() < d.max(2) || tail.iter().any(|t| !t.is_positive()) {
        return None;
    }
    let k = tail.len();
    let nratios = (d - 1).max(1);
    let ratios: Vec<Rat> = (k - nratios..k).map(|i| &tail[i] / &tail[i - 1]).collect();
    let g0 = dyadic_down(ratios.iter().min().unwrap(), 48);
    let h0 = dyadic_up(ratios.iter().max().unwrap(), 48);
    let last = &tail[k - 1];
    let (cmin, cmax) = if constant.is_negative() {
        (constant / last, Rat::zero())
    } else {
        (Rat::zero(), constant / last)
    };
    let base = &h0 - &g0 + rat(1, 1 << 40);
    let mut t = base;
    for _ in 0..60 {
        let g = &g0 - &t;
        let h = &h0 + &t;
        if g <= Rat::one() {
            return None;
        }
        let (gi, hi) = (g.recip(), h.recip());
        let (mut lo, mut up) = (cmin.clone(), cmax.clone());
        let (mut gp, mut hp) = (Rat::one(), Rat::one());
        for x in coeffs {
            if x.is_positive() {
                lo += x * &hp;
                up += x * &gp;
            } else if x.is_negative() {
                lo += x * &gp;
                up += x * &hp;
            }
            gp = &gp * &gi;
            hp = &hp * &hi;
        }
        if lo >= g && up <= h {
            return Some((g, h));
        }
        t = &t * rat(2, 1);
    }
    None
}

/// Tail bound for `(q, -1, _s)`, `q >= 2`, `s > 0`, once differences are positive:
/// `e(last + i) >= e(last) + s i (i + 1) / 2`.
fn quadratic_tail(coeffs: &[Rat], constant: &Rat, tail: &[Rat]) -> Option<Rat> {
    if coeffs.len() != 2
        || coeffs[1] != -Rat::one()
        || coeffs[0] < rat(2, 1)
        || !constant.is_positive()
    {
        return None;
    }
    let k = tail.len();
    if k < 2 || !tail[k - 2].is_positive() || tail[k - 1] <= tail[k - 2] {
        return None;
    }
    let u = &tail[k - 1];
    let s = constant;
    let ratio = floor_rat(&(u * rat(2, 1) / s));
    let j = isqrt(&ratio).ok()?.max(Int::one());
    let jr = rat_int(j);
    Some(&jr / u + rat(2, 1) / (s * &jr))
}

/// `[S_P, S_P + tail]` (or the alternating analogue) from the first `terms_budget` terms.
pub fn certified_sum(spec: &SumSpec, terms_budget: usize) -> Result<SumEnclosure, RecipError> {
    if spec.stride == 0 || terms_budget == 0 {
        return Err(RecipError::Params("stride and budget must be positive".into()));
    }
    let stride = spec.stride as i64;
    let p = terms_budget as i64;
    let first_omitted = spec.start + stride * p;
    let (coeffs, constant) = effective_rule(spec)?;
    let d = coeffs.len() as i64;
    let lo = spec.start.min(first_omitted - d);
    let lo = if spec.denominator == Denominator::PartialSum {
        lo.max(0)
    } else {
        lo
    };
    let look = terms_budget.max(8) as i64;
    let e = denominators(spec, lo, first_omitted + stride * look)?;
    let at = |i: i64| &e[(i - lo) as usize];

    let mut partial = Rat::zero();
    for j in 0..p {
        let idx = spec.start + stride * j;
        let v = at(idx);
        if !v.is_positive() {
            return Err(RecipError::Domain {
                index: idx,
                value: v.clone(),
            });
        }
        let term = v.recip();
        if spec.sign == SignMode::Alternating && j % 2 == 1 {
            partial -= term;
        } else {
            partial += term;
        }
    }

    let next = at(first_omitted).clone();
    if !next.is_positive() {
        return Err(RecipError::Domain {
            index: first_omitted,
            value: next,
        });
    }
    let tail_at = |idx: i64| {
        let from = ((idx - lo) as usize + 1).saturating_sub(d.max(2) as usize);
        &e[from..=(idx - lo) as usize]
    };
    // The ratio certificate is tried at the first omitted index and, failing
    // that, at later indices of the same progression; the exact terms skipped
    // over are added to the majorant.
    let mut skipped = Rat::zero();
    let mut certified = None;
    let mut cert_index = first_omitted;
    for m in 0..=look {
        let idx = first_omitted + stride * m;
        let v = at(idx);
        if !v.is_positive() || (m > 0 && v <= at(idx - stride)) {
            break;
        }
        if let Some(gh) = certify_ratios(&coeffs, &constant, tail_at(idx)) {
            certified = Some(gh);
            cert_index = idx;
            break;
        }
        skipped += v.recip();
    }
    let tail = tail_at(first_omitted);

    let (interval, certificate) = match spec.sign {
        SignMode::Plain => {
            let cert = if let Some((g, h)) = certified {
                let gm = num_traits::pow(g.clone(), spec.stride as usize);
                let majorant = &skipped + at(cert_index).recip() * &gm / (&gm - Rat::one());
                TailCertificate::Geometric {
                    g,
                    h,
                    from_index: cert_index,
                    majorant,
                }
            } else if let Some(majorant) = quadratic_tail(&coeffs, &constant, tail) {
                TailCertificate::QuadraticGrowth {
                    from_index: first_omitted,
                    majorant,
                }
            } else {
                return Err(RecipError::Certification(format!(
                    "no growth certificate at index {first_omitted}"
                )));
            };
            let hi = &partial + cert.majorant();
            (RatInterval::new(partial.clone(), hi)?, cert)
        }
        SignMode::Alternating => {
            let Some((g, _)) = certified else {
                return Err(RecipError::Certification(format!(
                    "cannot certify decreasing terms at index {first_omitted}"
                )));
            };
            let t = next.recip();
            let iv = if p % 2 == 0 {
                RatInterval::new(partial.clone(), &partial + &t)?
            } else {
                RatInterval::new(&partial - &t, partial.clone())?
            };
            (
                iv,
                TailCertificate::Alternating {
                    g,
                    from_index: cert_index,
                    first_omitted: t,
                },
            )
        }
    };
    Ok(SumEnclosure {
        interval,
        partial_sum: partial,
        terms_used: terms_budget,
        certificate,
    })
}

pub const DEFAULT_BUDGET_CAP: usize = 2048;
const FIRST_BUDGET: usize = 16;

/// Floor or nearest integer of the inverse sum, doubling the term count until
/// the whole enclosure agrees.
pub fn inverse_answer(spec: &SumSpec, mode: Mode, budget_cap: usize) -> Result<SumVerdict, RecipError> {
    let cap = budget_cap.max(1);
    let mut p = FIRST_BUDGET.min(cap);
    loop {
        match certified_sum(spec, p) {
            Ok(sum) => {
                if !sum.interval.contains_zero() {
                    let inv = sum.interval.recip()?;
                    let decided = match mode {
                        Mode::Floor => inv.common_floor(),
                        Mode::Nearest => inv.common_nearest(),
                    };
                    if let Some(answer) = decided {
                        return Ok(SumVerdict {
                            enclosure: inv,
                            answer,
                            mode,
                            terms_used: p,
                            sum,
                        });
                    }
                    if p >= cap {
                        return Err(RecipError::Budget {
                            terms: p,
                            enclosure: inv,
                        });
                    }
                } else if p >= cap {
                    return Err(RecipError::Certification(
                        "sum enclosure still contains zero".into(),
                    ));
                }
            }
            Err(e @ (RecipError::Certification(_) | RecipError::Domain { .. })) => {
                if p >= cap {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
        p = (p * 2).min(cap);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Hypotheses do not hold here; the report still records whether the formula matched.
    Vacuous,
    /// The statement makes no prediction at this instance.
    Undefined,
    Undecidable,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Vacuous => "vacuous",
            Outcome::Undefined => "undefined",
            Outcome::Undecidable => "undecidable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check: &'static str,
    pub params: Vec<(&'static str, String)>,
    pub hypothesis: Option<bool>,
    pub expected: Option<Int>,
    pub computed: Option<Int>,
    pub matched: Option<bool>,
    pub outcome: Outcome,
    /// Inverse-sum enclosure behind `computed`.
    pub enclosure: Option<RatInterval>,
    pub note: String,
}

impl CheckReport {
    fn new(check: &'static str, params: Vec<(&'static str, String)>) -> Self {
        CheckReport {
            check,
            params,
            hypothesis: None,
            expected: None,
            computed: None,
            matched: None,
            outcome: Outcome::Undecidable,
            enclosure: None,
            note: String::new(),
        }
    }

    fn settle(mut self, verdict: Result<SumVerdict, RecipError>, expected: Option<Int>) -> Self {
        self.expected = expected;
        match verdict {
            Ok(v) => {
                self.computed = Some(v.answer.clone());
                self.enclosure = Some(v.enclosure);
                if self.note.is_empty() {
                    self.note = v.sum.certificate.to_string();
                }
                self.matched = self.expected.as_ref().map(|e| *e == v.answer);
                self.outcome = match (self.hypothesis, self.matched) {
                    (Some(false), _) => Outcome::Vacuous,
                    (_, None) => Outcome::Undefined,
                    (_, Some(true)) => Outcome::Pass,
                    (_, Some(false)) => Outcome::Fail,
                };
            }
            Err(e @ RecipError::Domain { .. }) => {
                self.outcome = Outcome::Undefined;
                self.note = e.to_string();
            }
            Err(e) => {
                self.outcome = Outcome::Undecidable;
                self.note = e.to_string();
            }
        }
        self
    }
}

fn int_term(rec: &Recurrence, i: i64) -> Result<Int, RecipError> {
    let t = rec.term(i)?;
    if !t.is_integer() {
        return Err(RecipError::Shape(format!("term {i} = {t} is not an integer")));
    }
    Ok(t.to_integer())
}

/// `c_{k+1} = q c_k - c_{k-1} + s` with `q >= 2`, `c_0 = 0`, `c_1 = s != 0`.
pub fn check_theorem_14(rec: &Recurrence, n: i64) -> Result<CheckReport, RecipError> {
    if rec.depth() != 2 || rec.coeffs[1] != -Rat::one() {
        return Err(RecipError::Shape("expected (q, -1, _s)".into()));
    }
    let q = rec.coeffs[0].clone();
    let s = rec.constant.clone();
    if q < rat(2, 1) || s.is_zero() || !rec.term(0)?.is_zero() || rec.term(1)? != s {
        return Err(RecipError::Shape(
            "expected q >= 2, s != 0, c_0 = 0, c_1 = s".into(),
        ));
    }
    if n < 1 {
        return Err(RecipError::Params("n must be positive".into()));
    }
    let cn = rec.term(n)?;
    let cp = rec.term(n - 1)?;
    let side = (&q - &s) * &cn - rat(2, 1) * &cp + &s - Rat::one();
    let mut report = CheckReport::new("thm1.4", vec![("label", rec.label.clone()), ("n", n.to_string())]);
    report.hypothesis = Some(s > rat(1, 2) && !side.is_negative());
    let expected = &cn - &cp - Rat::one();
    let spec = SumSpec::plain(rec.clone(), n, 1);
    let expected = expected.is_integer().then(|| expected.to_integer());
    Ok(report.settle(inverse_answer(&spec, Mode::Floor, DEFAULT_BUDGET_CAP), expected))
}

/// `c_{k+1} = q c_k + r c_{k-1}`, `c_0 = 0`, `c_1 = t > 0`, in one of the two
/// parameter cases.
pub fn check_theorem_15(rec: &Recurrence, n: i64) -> Result<CheckReport, RecipError> {
    if rec.depth() != 2 || !rec.constant.is_zero() {
        return Err(RecipError::Shape("expected homogeneous (q, r)".into()));
    }
    let (q, r) = (rec.coeffs[0].clone(), rec.coeffs[1].clone());
    let t = rec.term(1)?;
    if !rec.term(0)?.is_zero() || !t.is_positive() || r.is_zero() {
        return Err(RecipError::Shape("expected c_0 = 0, c_1 > 0, r != 0".into()));
    }
    let case1 = q >= rat(3, 1) && r >= rat(-1, 1) && r.is_negative();
    let case2 = q >= rat(2, 1) && r.is_positive();
    if !case1 && !case2 {
        return Err(RecipError::Shape(format!(
            "q = {q}, r = {r} is in neither parameter case"
        )));
    }
    if n < 1 {
        return Err(RecipError::Params("n must be positive".into()));
    }
    let (cn, cp, cnext) = (rec.term(n)?, rec.term(n - 1)?, rec.term(n + 1)?);
    let lhs = &t * &t * num_traits::pow(-r.clone(), (n - 1) as usize);
    let odd = n % 2 == 1;
    let (hyp, expected) = if case1 || odd {
        (lhs <= &cnext - &cp - Rat::one(), &cn - &cp - Rat::one())
    } else {
        (lhs > -&cnext + &cp - Rat::one(), &cn - &cp)
    };
    let mut report = CheckReport::new(
        "thm1.5",
        vec![
            ("label", rec.label.clone()),
            ("case", if case1 { "1" } else { "2" }.to_string()),
            ("n", n.to_string()),
        ],
    );
    report.hypothesis = Some(hyp);
    let spec = SumSpec::plain(rec.clone(), n, 1);
    let expected = expected.is_integer().then(|| expected.to_integer());
    Ok(report.settle(inverse_answer(&spec, Mode::Floor, DEFAULT_BUDGET_CAP), expected))
}

/// Floor of the inverse of `sum_{k>=n} 1/F_k` against `F_{n-2}` (even n) or `F_{n-2} - 1` (odd n).
pub fn check_fibonacci_floor(n: i64) -> Result<CheckReport, RecipError> {
    if n < 2 {
        return Err(RecipError::Params("n must be at least 2".into()));
    }
    let fib = crate::sequences::fibonacci();
    let f = int_term(&fib, n - 2)?;
    let expected = if n % 2 == 0 { f } else { f - 1 };
    let report = CheckReport::new("eq1.1", vec![("n", n.to_string())]);
    let spec = SumSpec::plain(fib, n, 1);
    Ok(report.settle(inverse_answer(&spec, Mode::Floor, DEFAULT_BUDGET_CAP), Some(expected)))
}

/// Floor of the inverse of `sum_{k>=n} 1/B_k` against `B_n - B_{n-1} - 1`.
pub fn check_balancing_floor(n: i64) -> Result<CheckReport, RecipError> {
    if n < 1 {
        return Err(RecipError::Params("n must be positive".into()));
    }
    let b = crate::sequences::balancing_rec();
    let expected = int_term(&b, n)? - int_term(&b, n - 1)? - 1;
    let report = CheckReport::new("eq1.5", vec![("n", n.to_string())]);
    let spec = SumSpec::plain(b, n, 1);
    Ok(report.settle(inverse_answer(&spec, Mode::Floor, DEFAULT_BUDGET_CAP), Some(expected)))
}

/// Floor of the inverse Tribonacci tail, against the branch picked by the sign of `T_{-(n+1)}`.
pub fn check_tribonacci_floor(n: i64) -> Result<CheckReport, RecipError> {
    if n < 1 {
        return Err(RecipError::Params("n must be positive".into()));
    }
    let t = tribonacci();
    let sign_term = int_term(&t, -(n + 1))?;
    let diff = int_term(&t, n)? - int_term(&t, n - 1)?;
    let expected = match sign_term.sign() {
        Sign::Minus => Some(diff),
        Sign::Plus => Some(diff - 1),
        Sign::NoSign => None,
    };
    let mut report = CheckReport::new(
        "eq1.2",
        vec![("n", n.to_string()), ("T_-(n+1)", sign_term.to_string())],
    );
    if expected.is_none() {
        report.note = format!("T_{} = 0: neither branch applies", -(n + 1));
    }
    let spec = SumSpec::plain(t, n, 1);
    Ok(report.settle(inverse_answer(&spec, Mode::Floor, DEFAULT_BUDGET_CAP), expected))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveryMthMode {
    Nearest,
    FloorWithSign,
}

/// Encloses `sum_{p>=0} (T_i^2 - T_{i+k} T_{i-k}) / (T_i (T_i - T_{i-k}) (T_{i+k} - T_i))`,
/// `i = n + k p`: the first `p_terms` exactly, the rest through the telescoped identity
/// `R_P = sum_{p>=P} 1/T_{n+kp} - 1/(T_{n+kP} - T_{n+kP-k})`.
pub fn correction_series(n: i64, k: i64, p_terms: usize) -> Result<RatInterval, RecipError> {
    let t = tribonacci();
    let lo = n - k;
    let hi = n + k * (p_terms as i64 + 1);
    let w = t.window(lo, (hi - lo + 1) as usize)?;
    let at = |i: i64| w.get(i).expect("in window").clone();
    let mut acc = Rat::zero();
    for p in 0..p_terms as i64 {
        let i = n + k * p;
        let (ti, tp, tn) = (at(i), at(i - k), at(i + k));
        let den = &ti * (&ti - &tp) * (&tn - &ti);
        if den.is_zero() {
            return Err(RecipError::Params(format!("zero denominator at index {i}")));
        }
        acc += (&ti * &ti - &tn * &tp) / den;
    }
    let m = n + k * p_terms as i64;
    let gap = at(m) - at(m - k);
    if !gap.is_positive() {
        return Err(RecipError::Params(format!("T_{m} - T_{} is not positive", m - k)));
    }
    let tail = certified_sum(&SumSpec::plain(t, m, k as u64), 24)?;
    let r = RatInterval {
        lo: &tail.interval.lo - gap.recip(),
        hi: &tail.interval.hi - gap.recip(),
    };
    Ok(RatInterval {
        lo: &acc + &r.lo,
        hi: &acc + &r.hi,
    })
}

/// Every `m`-th Tribonacci term from `n`: nearest integer against `T_n - T_{n-m}`,
/// or the floor against the branch fixed by the sign of the correction series.
pub fn check_every_mth(n: i64, m: i64, mode: EveryMthMode) -> Result<CheckReport, RecipError> {
    if m < 1 || n < m {
        return Err(RecipError::Params("need n >= m >= 1".into()));
    }
    let t = tribonacci();
    let base = int_term(&t, n)? - int_term(&t, n - m)?;
    let spec = SumSpec::plain(t, n, m as u64);
    match mode {
        EveryMthMode::Nearest => {
            let report = CheckReport::new("thm1.6", vec![("n", n.to_string()), ("m", m.to_string())]);
            Ok(report.settle(inverse_answer(&spec, Mode::Nearest, DEFAULT_BUDGET_CAP), Some(base)))
        }
        EveryMthMode::FloorWithSign => {
            let mut report =
                CheckReport::new("thm3.11", vec![("n", n.to_string()), ("k", m.to_string())]);
            if base.is_zero() {
                report.outcome = Outcome::Undefined;
                report.note = format!("T_{n} - T_{} = 0: the correction series is undefined", n - m);
                return Ok(report);
            }
            let mut p = 4usize;
            let sign = loop {
                let c = correction_series(n, m, p)?;
                if let Some(s) = c.strict_sign() {
                    report.params.push(("correction", format!("{:.3e}", c.midpoint().to_f64().unwrap_or(f64::NAN))));
                    break Some(s);
                }
                if p >= 256 {
                    break None;
                }
                p *= 2;
            };
            let Some(sign) = sign else {
                report.note = "correction-series sign undecided".into();
                return Ok(report);
            };
            let expected = if sign == Sign::Minus { base } else { base - 1 };
            Ok(report.settle(inverse_answer(&spec, Mode::Floor, DEFAULT_BUDGET_CAP), Some(expected)))
        }
    }
}

/// `sum_{k>=n} (-1)^k / T_{km-j}`: nearest integer of the inverse against
/// `(-1)^n (T_{mn-j} + T_{mn-j-m})`.
pub fn check_alternating(n: i64, m: i64, j: i64) -> Result<CheckReport, RecipError> {
    if m < 1 || j < 0 || j >= m || m * n - j - m < 0 {
        return Err(RecipError::Params("need 0 <= j < m and mn - j - m >= 0".into()));
    }
    let t = tribonacci();
    let i0 = m * n - j;
    let sign = if n % 2 == 0 { Int::one() } else { -Int::one() };
    let expected = &sign * (int_term(&t, i0)? + int_term(&t, i0 - m)?);
    let spec = SumSpec {
        sequence: t,
        start: i0,
        stride: m as u64,
        sign: SignMode::Alternating,
        denominator: Denominator::Term,
    };
    let report = CheckReport::new(
        "thm3.12",
        vec![("n", n.to_string()), ("m", m.to_string()), ("j", j.to_string())],
    );
    let verdict = inverse_answer(&spec, Mode::Nearest, DEFAULT_BUDGET_CAP).map(|mut v| {
        v.answer = &v.answer * &sign;
        v.enclosure = v.enclosure.scale(&rat_int(sign.clone()));
        v
    });
    Ok(report.settle(verdict, Some(expected)))
}

/// `sum_{i=1}^{k} T_i` two ways: the closed form and direct summation.
pub fn tribonacci_partial_sum(k: i64) -> Result<(Int, Int), RecipError> {
    let t = tribonacci();
    let closed = (int_term(&t, k + 2)? + int_term(&t, k)? - 1) / 2;
    let mut direct = Int::zero();
    if k >= 1 {
        for v in t.window(1, k as usize)?.terms {
            direct += v.to_integer();
        }
    }
    Ok((closed, direct))
}

/// `sum_{k>=n} 1 / (T_1 + .. + T_{mk})`: nearest integer of the inverse against
/// `(T_{mn+2} + T_{mn} - T_{mn-m+2} - T_{mn-m}) / 2`.
pub fn check_sum_of_sums(n: i64, m: i64) -> Result<CheckReport, RecipError> {
    if n < 1 || m < 1 {
        return Err(RecipError::Params("need n, m >= 1".into()));
    }
    let t = tribonacci();
    let k = m * n;
    let numer = int_term(&t, k + 2)? + int_term(&t, k)? - int_term(&t, k - m + 2)? - int_term(&t, k - m)?;
    let mut report = CheckReport::new("thm3.13", vec![("n", n.to_string()), ("m", m.to_string())]);
    for idx in [k, k + m, k + 2 * m] {
        let (closed, direct) = tribonacci_partial_sum(idx)?;
        if closed != direct {
            report.outcome = Outcome::Fail;
            report.note = format!("closed form {closed} != direct sum {direct} at {idx}");
            return Ok(report);
        }
    }
    let spec = SumSpec {
        sequence: t,
        start: k,
        stride: m as u64,
        sign: SignMode::Plain,
        denominator: Denominator::PartialSum,
    };
    let expected = (numer.clone() % 2 == Int::zero()).then(|| numer / 2);
    Ok(report.settle(inverse_answer(&spec, Mode::Nearest, DEFAULT_BUDGET_CAP), expected))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedReport {
    pub report: CheckReport,
    /// Whether `G_n - G_{n-k}` lies inside the inverse-sum enclosure.
    pub equality_consistent: Option<bool>,
}

/// Depth-3 homogeneous `G`: nearest integer of the inverse of `sum_{p>=0} 1/G_{n+kp}`
/// against `G_n - G_{n-k}`, plus whether exact equality is still possible.
pub fn check_generalized(g: &Recurrence, n: i64, k: i64) -> Result<GeneralizedReport, RecipError> {
    if g.depth() != 3 || !g.constant.is_zero() {
        return Err(RecipError::Shape("expected a homogeneous depth-3 recurrence".into()));
    }
    if k < 1 || n < k {
        return Err(RecipError::Params("need n >= k >= 1".into()));
    }
    let expected = int_term(g, n)? - int_term(g, n - k)?;
    let spec = SumSpec::plain(g.clone(), n, k as u64);
    let verdict = inverse_answer(&spec, Mode::Nearest, 512);
    if let Err(e @ RecipError::Certification(_)) = &verdict {
        return Err(e.clone());
    }
    let report = CheckReport::new(
        "thm3.15",
        vec![("label", g.label.clone()), ("n", n.to_string()), ("k", k.to_string())],
    )
    .settle(verdict, Some(expected.clone()));
    let equality_consistent = report
        .enclosure
        .as_ref()
        .map(|e| e.contains(&rat_int(expected)));
    Ok(GeneralizedReport {
        report,
        equality_consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinetRow {
    pub n: u32,
    pub holds: Option<bool>,
    /// Enclosure of `|T_n - c4 alpha^n|`.
    pub lhs: RatInterval,
    pub bound: Rat,
}

/// `|T_n - c4 alpha^n| < a d^n` for `1 <= n <= n_max`, with the printed constants.
pub fn check_binet_bound(n_max: u32) -> Result<Vec<BinetRow>, RecipError> {
    let k = BinetBoundConstants::printed();
    let cubic = [rat(1, 1), rat(-1, 1), rat(-1, 1), rat(-1, 1)];
    let t = tribonacci();
    let terms = if n_max == 0 {
        Vec::new()
    } else {
        t.window(1, n_max as usize)?.terms
    };
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let tn = RatInterval::point(terms[(n - 1) as usize].clone());
        let bound = &k.a_const * num_traits::pow(k.d_const.clone(), n as usize);
        let mut bits = 64usize;
        let row = loop {
            let width = Rat::new(Int::one(), num_traits::pow(Int::from(2), bits));
            let alpha = real_root_enclosure(&cubic, &RatInterval::from_ints(1, 2), &width)?;
            let power = alpha.pow(n);
            let lhs = (&tn - &power.scale(&k.c4)).abs();
            let holds = if lhs.hi < bound {
                Some(true)
            } else if lhs.lo >= bound {
                Some(false)
            } else {
                None
            };
            if holds.is_some() || bits >= 4096 {
                break BinetRow {
                    n,
                    holds,
                    lhs,
                    bound: bound.clone(),
                };
            }
            bits *= 2;
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Interval value of `x^3 - x^2 - x - 1` over `iv`, for sanity checks on alpha.
pub fn tribonacci_cubic_at(iv: &RatInterval) -> RatInterval {
    poly_eval_interval(&[rat(1, 1), rat(-1, 1), rat(-1, 1), rat(-1, 1)], iv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::sequences::{balancing_rec, fibonacci, pell};

    #[test]
    fn fibonacci_examples() {
        let v = inverse_answer(&SumSpec::plain(fibonacci(), 4, 1), Mode::Floor, 256).unwrap();
        assert_eq!(v.answer, int(1));
        let v = inverse_answer(&SumSpec::plain(fibonacci(), 5, 1), Mode::Floor, 256).unwrap();
        assert_eq!(v.answer, int(1));
    }

    #[test]
    fn balancing_example() {
        let v = inverse_answer(&SumSpec::plain(balancing_rec(), 2, 1), Mode::Floor, 256).unwrap();
        assert_eq!(v.answer, int(28));
    }

    #[test]
    fn tribonacci_nearest() {
        let v = inverse_answer(&SumSpec::plain(tribonacci(), 5, 1), Mode::Nearest, 256).unwrap();
        assert_eq!(v.answer, int(3));
    }

    #[test]
    fn partial_sum_recurrence_for_tribonacci() {
        let p = partial_sum_recurrence(&tribonacci()).unwrap();
        assert_eq!(p.coeffs, vec![rat(2, 1), rat(0, 1), rat(0, 1), rat(-1, 1)]);
        let w = p.window(0, 8).unwrap().terms;
        let expect: Vec<Rat> = [0, 1, 2, 4, 8, 15, 28, 52].iter().map(|&v| rat(v, 1)).collect();
        assert_eq!(w, expect);
    }

    #[test]
    fn small_checks() {
        assert_eq!(check_theorem_15(&pell(), 3).unwrap().computed, Some(int(2)));
        assert_eq!(check_theorem_15(&pell(), 4).unwrap().computed, Some(int(7)));
        assert!(matches!(check_theorem_15(&fibonacci(), 3), Err(RecipError::Shape(_))));
        let r = check_every_mth(6, 2, EveryMthMode::Nearest).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        assert_eq!(r.expected, Some(int(9)));
        let r = check_alternating(5, 2, 1).unwrap();
        assert_eq!(r.expected, Some(int(-105)));
        assert_eq!(r.outcome, Outcome::Pass);
        let r = check_sum_of_sums(4, 1).unwrap();
        assert_eq!(r.expected, Some(int(4)));
        let r = check_sum_of_sums(3, 2).unwrap();
        assert_eq!(r.expected, Some(int(20)));
    }

    #[test]
    fn first_binet_row() {
        let rows = check_binet_bound(1).unwrap();
        assert_eq!(rows[0].holds, Some(true));
        assert!(check_binet_bound(0).unwrap().is_empty());
    }
}
