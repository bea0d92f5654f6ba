//! Recover linear recurrences from raw terms by exact elimination.

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::sequences::{GenericRecurrence, Scalar};

/// Scalars with exact division.
pub trait Field: Scalar {}

impl<I> Field for Ratio<I>
where
    Ratio<I>: Scalar,
    I: Clone + Integer,
{
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("need at least {need} terms, got {got}")]
    Arity { need: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionResult<T> {
    pub recurrence: GenericRecurrence<T>,
    /// Equations beyond the solve block that the fit also satisfies.
    pub verified_terms: usize,
    pub tuple_text: String,
}

/// Solves `rows` (each `[coeffs.., rhs]`) for a unique solution.
/// `None` when inconsistent or rank-deficient.
fn solve_unique<T: Field>(mut rows: Vec<Vec<T>>, unknowns: usize) -> Option<Vec<T>> {
    let mut pivot_row = 0;
    for col in 0..unknowns {
        let p = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, p);
        let inv = T::one() / rows[pivot_row][col].clone();
        for v in rows[pivot_row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=unknowns {
                    let delta = f.clone() * rows[pivot_row][c].clone();
                    rows[r][c] = rows[r][c].clone() - delta;
                }
            }
        }
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    Some(rows[..unknowns].iter().map(|row| row[unknowns].clone()).collect())
}

fn equation<T: Field>(terms: &[T], i: usize, depth: usize, with_constant: bool) -> Vec<T> {
    let mut row: Vec<T> = (1..=depth).map(|j| terms[i - j].clone()).collect();
    if with_constant {
        row.push(T::one());
    }
    row.push(terms[i].clone());
    row
}

fn satisfies<T: Field>(terms: &[T], i: usize, coeffs: &[T], constant: &T) -> bool {
    let mut acc = constant.clone();
    for (j, x) in coeffs.iter().enumerate() {
        acc = acc + x.clone() * terms[i - 1 - j].clone();
    }
    acc == terms[i]
}

/// Fits `(x1, .., x_depth[, _x0])`: solves from the first half of the equations,
/// verifies the rest.
pub fn detect_fixed<T: Field>(
    terms: &[T],
    depth: usize,
    with_constant: bool,
) -> Result<Option<DetectionResult<T>>, DetectError> {
    let unknowns = depth + usize::from(with_constant);
    let need = 2 * unknowns;
    if depth == 0 || terms.len() < need {
        return Err(DetectError::Arity {
            need: need.max(2),
            got: terms.len(),
        });
    }
    let equations = terms.len() - depth;
    let solve_count = unknowns.max(equations.div_ceil(2));
    let rows: Vec<Vec<T>> = (depth..depth + solve_count)
        .map(|i| equation(terms, i, depth, with_constant))
        .collect();
    let Some(mut sol) = solve_unique(rows, unknowns) else {
        return Ok(None);
    };
    let constant = if with_constant {
        sol.pop().expect("constant slot")
    } else {
        T::zero()
    };
    let verified = (depth + solve_count..terms.len())
        .filter(|&i| satisfies(terms, i, &sol, &constant))
        .count();
    if verified != equations - solve_count {
        return Ok(None);
    }
    Ok(Some(make_result(
        sol,
        constant,
        terms,
        verified,
        if with_constant { "fixed+c" } else { "fixed" },
    )))
}

fn make_result<T: Field>(
    coeffs: Vec<T>,
    constant: T,
    terms: &[T],
    verified: usize,
    label: &str,
) -> DetectionResult<T> {
    let depth = coeffs.len();
    let recurrence = GenericRecurrence::new(coeffs, constant, terms[..depth].to_vec(), 0, label)
        .expect("terms cover the depth");
    let tuple_text = render_tuple(&recurrence);
    DetectionResult {
        recurrence,
        verified_terms: verified,
        tuple_text,
    }
}

/// Smallest depth first; at each depth the homogeneous form is tried first.
pub fn detect_minimal<T: Field>(terms: &[T], max_depth: usize) -> Option<DetectionResult<T>> {
    if terms.len() < 4 {
        return None;
    }
    for depth in 1..=max_depth {
        for with_constant in [false, true] {
            if let Ok(Some(found)) = detect_fixed(terms, depth, with_constant) {
                return Some(found);
            }
        }
    }
    None
}

/// `"(x1, x2, .., xd, _x0)"`, the constant omitted when zero.
pub fn render_tuple<T: Scalar>(rec: &GenericRecurrence<T>) -> String {
    let mut parts: Vec<String> = rec.coeffs.iter().map(|c| c.to_string()).collect();
    if !rec.constant.is_zero() {
        parts.push(format!("_{}", rec.constant));
    }
    format!("({})", parts.join(", "))
}

/// Fits the five-term shape `(1, K, -K, -1, 1)` (no constant), solving for `K`
/// and checking every supplied term.
pub fn fit_table_form<T: Field>(terms: &[T]) -> Option<DetectionResult<T>> {
    if terms.len() < 7 {
        return None;
    }
    let mut k: Option<T> = None;
    for i in 5..terms.len() {
        let lhs = terms[i].clone() - terms[i - 1].clone() + terms[i - 4].clone()
            - terms[i - 5].clone();
        let slope = terms[i - 2].clone() - terms[i - 3].clone();
        if slope.is_zero() {
            if !lhs.is_zero() {
                return None;
            }
            continue;
        }
        let here = lhs / slope;
        match &k {
            None => k = Some(here),
            Some(prev) if *prev != here => return None,
            _ => {}
        }
    }
    let k = k?;
    let one = T::one();
    let coeffs = vec![one.clone(), k.clone(), -k, -one.clone(), one];
    Some(make_result(coeffs, T::zero(), terms, terms.len() - 6, "table form"))
}

/// Characteristic polynomial `x^d - x1 x^(d-1) - .. - xd`, highest degree first.
/// A nonzero constant contributes an extra factor `(x - 1)`.
pub fn characteristic_poly<T: Field>(rec: &GenericRecurrence<T>) -> Vec<T> {
    let mut p = vec![T::one()];
    p.extend(rec.coeffs.iter().map(|c| -c.clone()));
    if rec.constant.is_zero() {
        p
    } else {
        poly_mul(&p, &[T::one(), -T::one()])
    }
}

pub fn poly_mul<T: Field>(p: &[T], q: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = out[i + j].clone() + a.clone() * b.clone();
        }
    }
    out
}

/// Whether `divisor` divides `p` exactly (both highest degree first).
pub fn poly_divides<T: Field>(divisor: &[T], p: &[T]) -> bool {
    let lead = match divisor.iter().position(|c| !c.is_zero()) {
        Some(i) => i,
        None => return false,
    };
    let divisor = &divisor[lead..];
    if divisor.len() > p.len() {
        return p.iter().all(|c| c.is_zero());
    }
    let mut rem: Vec<T> = p.to_vec();
    for i in 0..=rem.len() - divisor.len() {
        if rem[i].is_zero() {
            continue;
        }
        let f = rem[i].clone() / divisor[0].clone();
        for (j, d) in divisor.iter().enumerate() {
            rem[i + j] = rem[i + j].clone() - f.clone() * d.clone();
        }
    }
    rem.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Rat};
    use num_rational::Rational64;

    fn rs(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn cobalancing_depth_two_with_constant() {
        let t = rs(&[2, 14, 84, 492, 2870, 16730]);
        let d = detect_fixed(&t, 2, true).unwrap().unwrap();
        assert_eq!(d.tuple_text, "(6, -1, _2)");
    }

    #[test]
    fn arithmetic_progression() {
        let t = rs(&[1, 2, 3, 4, 5, 6]);
        let d = detect_fixed(&t, 1, true).unwrap().unwrap();
        assert_eq!(d.tuple_text, "(1, _1)");
        assert_eq!(d.verified_terms, 2);
    }

    #[test]
    fn arity_error() {
        let t = rs(&[1, 2, 3]);
        assert!(matches!(detect_fixed(&t, 2, false), Err(DetectError::Arity { .. })));
    }

    #[test]
    fn depth_five_homogeneous_is_singular_for_depth_two_data() {
        let t = rs(&[
            6, 35, 204, 1189, 6930, 40391, 235416, 1372105, 7997214, 46611179,
        ]);
        assert!(detect_fixed(&t, 5, false).unwrap().is_none());
        let fit = fit_table_form(&t).unwrap();
        assert_eq!(fit.tuple_text, "(1, 34, -34, -1, 1)");
    }

    #[test]
    fn minimal_forms() {
        assert_eq!(detect_minimal(&rs(&[5, 5, 5, 5]), 3).unwrap().tuple_text, "(1)");
        let cob = rs(&[2, 14, 84, 492, 2870, 16730, 97512, 568344]);
        assert_eq!(detect_minimal(&cob, 5).unwrap().tuple_text, "(6, -1, _2)");
        let cobr = rs(&[1, 10, 99, 980, 9701, 96030]);
        assert_eq!(detect_minimal(&cobr, 5).unwrap().tuple_text, "(10, -1)");
        assert!(detect_minimal(&rs(&[1, 2, 4]), 3).is_none());
    }

    #[test]
    fn works_over_machine_rationals() {
        let t: Vec<Rational64> = [1i64, 1, 2, 3, 5, 8, 13, 21]
            .iter()
            .map(|&x| Rational64::from_integer(x))
            .collect();
        assert_eq!(detect_minimal(&t, 3).unwrap().tuple_text, "(1, 1)");
    }

    #[test]
    fn divisibility() {
        let six = detect_minimal(&rs(&[6, 35, 204, 1189, 6930, 40391]), 3).unwrap();
        let table = fit_table_form(&rs(&[
            6, 35, 204, 1189, 6930, 40391, 235416, 1372105,
        ]))
        .unwrap();
        assert!(poly_divides(
            &characteristic_poly(&six.recurrence),
            &characteristic_poly(&table.recurrence)
        ));
        assert!(!poly_divides(&rs(&[1, -2]), &rs(&[1, -1])));
    }
}
