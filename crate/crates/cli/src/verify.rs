//! `verify`: runs one statement over its default (or given) range and
//! tabulates pass / vacuous / fail per instance.

use balans::balancing::{claims, scan_conjecture_41, Variant};
use balans::exactnum::Int;
use balans::recipsum::{
    check_alternating, check_balancing_floor, check_binet_bound, check_every_mth,
    check_fibonacci_floor, check_generalized, check_sum_of_sums, check_theorem_14,
    check_theorem_15, check_tribonacci_floor, tribonacci_partial_sum, CheckReport, EveryMthMode,
    Outcome, RecipError,
};
use balans::sequences::{cobalancer_rec, cobalancing_rec, generalized_tribonacci, pell};
use balans::Recurrence;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::out;

pub const THEOREMS: [&str; 16] = [
    "eq1.1", "eq1.2", "eq1.5", "thm1.4", "thm1.5", "thm1.6", "thm3.11", "thm3.12", "thm3.13",
    "thm3.15", "lemma3.9", "thm1.7", "thm1.8", "thm1.9", "thmA.1", "conj4.1",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Undecidable,
    Fail,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub params: Vec<(String, String)>,
    pub expected: Option<String>,
    pub computed: Option<String>,
    pub outcome: String,
    pub note: String,
}

impl Row {
    fn status(&self) -> Status {
        match self.outcome.as_str() {
            "fail" | "refuted" => Status::Fail,
            "undecidable" => Status::Undecidable,
            _ => Status::Pass,
        }
    }

    fn from_report(r: CheckReport) -> Row {
        let mut params: Vec<(String, String)> = r
            .params
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        if let Some(h) = r.hypothesis {
            params.push(("hypothesis".into(), h.to_string()));
        }
        let mut note = r.note;
        if r.outcome == Outcome::Vacuous {
            let m = match r.matched {
                Some(true) => "formula still matches",
                Some(false) => "formula does not match",
                None => "no formula value",
            };
            note = format!("{m}; {note}");
        }
        Row {
            params,
            expected: r.expected.map(|v| v.to_string()),
            computed: r.computed.map(|v| v.to_string()),
            outcome: r.outcome.name().to_string(),
            note,
        }
    }

    fn simple(params: Vec<(&str, String)>, ok: bool, note: String) -> Row {
        Row {
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            expected: None,
            computed: None,
            outcome: if ok { "pass" } else { "fail" }.to_string(),
            note,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub theorem: String,
    pub rows: Vec<Row>,
    /// Statement-level label, for claims that are bounded scans.
    pub verdict: Option<String>,
}

impl Table {
    pub fn status(&self) -> Status {
        self.rows.iter().map(Row::status).max().unwrap_or(Status::Pass)
    }

    fn counts(&self) -> Vec<(String, usize)> {
        let mut c: Vec<(String, usize)> = Vec::new();
        for r in &self.rows {
            match c.iter_mut().find(|(k, _)| *k == r.outcome) {
                Some(e) => e.1 += 1,
                None => c.push((r.outcome.clone(), 1)),
            }
        }
        c
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (k, v) in &r.params {
                    m.insert(k.clone(), out::num(v));
                }
                m.insert("expected".into(), r.expected.clone().map_or(Value::Null, Value::String));
                m.insert("computed".into(), r.computed.clone().map_or(Value::Null, Value::String));
                m.insert("outcome".into(), Value::String(r.outcome.clone()));
                m.insert("note".into(), Value::String(r.note.clone()));
                Value::Object(m)
            })
            .collect();
        let mut summary = Map::new();
        for (k, n) in self.counts() {
            summary.insert(k, out::num(n));
        }
        json!({
            "theorem": self.theorem,
            "verdict": self.verdict.clone().map_or(Value::Null, Value::String),
            "status": status_name(self.status()),
            "summary": summary,
            "rows": rows,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let p: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s.push_str(&format!(
                "{:<40} expected={:<12} computed={:<12} {:<11} {}\n",
                p.join(" "),
                r.expected.as_deref().unwrap_or("-"),
                r.computed.as_deref().unwrap_or("-"),
                r.outcome,
                r.note
            ));
        }
        let c: Vec<String> = self.counts().iter().map(|(k, n)| format!("{n} {k}")).collect();
        s.push_str(&format!("{}: {}", self.theorem, c.join(", ")));
        if let Some(v) = &self.verdict {
            s.push_str(&format!(" ({v})"));
        }
        s.push('\n');
        s
    }
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Undecidable => "undecidable",
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    /// Index range for the reciprocal-sum statements.
    pub range: Option<(i64, i64)>,
    /// Bound for the scan-type statements.
    pub n_max: Option<u64>,
    /// Sequence for thm3.15.
    pub generalized: Option<Recurrence>,
}

/// Coprime `(a, b)` with `a in {1, 2}`, `b <= 5`, `a | 2b`.
fn small_pairs() -> [(i64, i64); 8] {
    [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 1), (2, 3), (2, 5)]
}

fn run_reports<P, F>(instances: Vec<P>, f: F) -> Result<Vec<Row>, RecipError>
where
    P: Send + Sync,
    F: Fn(&P) -> Result<CheckReport, RecipError> + Sync + Send,
{
    let reports: Result<Vec<CheckReport>, RecipError> = instances.par_iter().map(f).collect();
    Ok(reports?.into_iter().map(Row::from_report).collect())
}

/// For statements that hold "for large enough n": within each parameter group
/// (rows in ascending n), mismatches followed by passes up to the end of the
/// range are relabelled `before-onset`. A group still fails if its largest n
/// mismatches.
fn mark_onset(rows: &mut [Row]) {
    let key = |r: &Row| -> Vec<(String, String)> {
        r.params.iter().filter(|(k, _)| k != "n").cloned().collect()
    };
    let mut i = 0;
    while i < rows.len() {
        let k = key(&rows[i]);
        let mut j = i;
        while j < rows.len() && key(&rows[j]) == k {
            j += 1;
        }
        if rows[j - 1].outcome == "pass" {
            for r in &mut rows[i..j] {
                if r.outcome == "fail" {
                    r.outcome = "before-onset".into();
                }
            }
        }
        i = j;
    }
}

fn ns(range: (i64, i64), min: i64) -> impl Iterator<Item = i64> {
    range.0.max(min)..=range.1
}

pub fn run(theorem: &str, opts: &Options) -> Result<Table, RecipError> {
    let range = opts.range.unwrap_or((1, 15));
    let mut verdict = None;
    let rows = match theorem {
        "eq1.1" => run_reports(ns(range, 2).collect(), |&n| check_fibonacci_floor(n))?,
        "eq1.2" => run_reports(ns(range, 1).collect(), |&n| check_tribonacci_floor(n))?,
        "eq1.5" => run_reports(ns(range, 1).collect(), |&n| check_balancing_floor(n))?,
        "thm1.4" => {
            let mut inst = Vec::new();
            for (a, b) in small_pairs() {
                let rec = cobalancing_rec(&Int::from(a), &Int::from(b))?;
                inst.extend(ns(range, 1).map(|n| (rec.clone(), n)));
            }
            run_reports(inst, |(rec, n)| check_theorem_14(rec, *n))?
        }
        "thm1.5" => {
            let mut recs = vec![pell()];
            for (a, b) in small_pairs() {
                recs.push(cobalancer_rec(&Int::from(a), &Int::from(b))?);
            }
            let inst: Vec<(Recurrence, i64)> = recs
                .iter()
                .flat_map(|r| ns(range, 1).map(move |n| (r.clone(), n)))
                .collect();
            run_reports(inst, |(rec, n)| check_theorem_15(rec, *n))?
        }
        "thm1.6" => {
            let inst: Vec<(i64, i64)> = (1..=4)
                .flat_map(|m| ns(range, m).map(move |n| (n, m)))
                .collect();
            let mut rows = run_reports(inst, |&(n, m)| check_every_mth(n, m, EveryMthMode::Nearest))?;
            mark_onset(&mut rows);
            rows
        }
        "thm3.11" => {
            let inst: Vec<(i64, i64)> = (1..=3)
                .flat_map(|k| ns(range, k.max(2)).map(move |n| (n, k)))
                .collect();
            run_reports(inst, |&(n, k)| check_every_mth(n, k, EveryMthMode::FloorWithSign))?
        }
        "thm3.12" => {
            let mut inst = Vec::new();
            for m in 1..=2i64 {
                for j in 0..m {
                    inst.extend(ns(range, 1).filter(|n| m * n - j - m >= 0).map(|n| (n, m, j)));
                }
            }
            let mut rows = run_reports(inst, |&(n, m, j)| check_alternating(n, m, j))?;
            mark_onset(&mut rows);
            rows
        }
        "thm3.13" => {
            let inst: Vec<(i64, i64)> = (1..=2)
                .flat_map(|m| ns(range, 1).map(move |n| (n, m)))
                .collect();
            let mut rows = run_reports(inst, |&(n, m)| check_sum_of_sums(n, m))?;
            mark_onset(&mut rows);
            let limit = opts.n_max.unwrap_or(200) as i64;
            let bad = (1..=limit).find(|&k| {
                tribonacci_partial_sum(k).map_or(true, |(closed, direct)| closed != direct)
            });
            rows.push(Row::simple(
                vec![("closed_form_upto", limit.to_string())],
                bad.is_none(),
                bad.map_or(String::new(), |k| format!("closed form differs at {k}")),
            ));
            rows
        }
        "thm3.15" => {
            let g = opts.generalized.clone().unwrap_or_else(|| {
                let i = |v: i64| Int::from(v);
                generalized_tribonacci(&i(0), &i(0), &i(1), &i(1), &i(1), &i(1))
            });
            let inst: Vec<(i64, i64)> = (1..=3)
                .flat_map(|k| ns(range, k).map(move |n| (n, k)))
                .collect();
            let results: Result<Vec<_>, RecipError> =
                inst.par_iter().map(|&(n, k)| check_generalized(&g, n, k)).collect();
            results?
                .into_iter()
                .map(|r| {
                    let mut row = Row::from_report(r.report);
                    let eq = match r.equality_consistent {
                        Some(true) => "exact equality not excluded",
                        Some(false) => "exact equality excluded",
                        None => "no enclosure",
                    };
                    row.note = format!("{eq}; {}", row.note);
                    row
                })
                .collect()
        }
        "lemma3.9" => {
            let n_max = opts.n_max.unwrap_or(50) as u32;
            check_binet_bound(n_max)?
                .into_iter()
                .map(|r| Row {
                    params: vec![("n".into(), r.n.to_string())],
                    expected: None,
                    computed: None,
                    outcome: match r.holds {
                        Some(true) => "pass",
                        Some(false) => "fail",
                        None => "undecidable",
                    }
                    .into(),
                    note: format!(
                        "|T_n - c4 a^n| ~ {:.6e}, bound {:.6e}",
                        out::approx(&r.lhs.hi),
                        out::approx(&r.bound)
                    ),
                })
                .collect()
        }
        "thm1.7" => {
            let n_max = opts.n_max.unwrap_or(1000);
            let first = claims::three_one_first_failure(n_max);
            let others: Vec<(u64, u64)> = claims::pairs_with_every_n(10, Variant::Balancing, 2, 50)
                .into_iter()
                .filter(|&p| p != (3, 1))
                .collect();
            vec![
                Row::simple(
                    vec![("pair", "(3,1)".into()), ("n", format!("2..={n_max}"))],
                    first.is_none(),
                    first.map_or("r = n - 1 for every n".into(), |n| format!("fails at n = {n}")),
                ),
                Row::simple(
                    vec![("pairs", "a,b<=10".into()), ("n", "2..=50".into())],
                    others.is_empty(),
                    if others.is_empty() {
                        "no other pair balances every n".into()
                    } else {
                        format!("also every n: {others:?}")
                    },
                ),
            ]
        }
        "thm1.8" => {
            let all = claims::pairs_with_every_n(10, Variant::Cobalancing, 1, 50);
            vec![Row::simple(
                vec![("pairs", "a,b<=10".into()), ("n", "1..=50".into())],
                all.is_empty(),
                if all.is_empty() {
                    "every pair has a non-cobalancing n".into()
                } else {
                    format!("every n cobalancing for {all:?}")
                },
            )]
        }
        "thm1.9" => {
            let n_max = opts.n_max.unwrap_or(10_000);
            let (lo, hi) = opts.range.unwrap_or((1, 5));
            (lo.max(1)..=hi)
                .collect::<Vec<i64>>()
                .par_iter()
                .map(|&y| {
                    let (found, expected) = claims::x_two_mod_four_family(y as u64, n_max);
                    let shown: Vec<String> = found.iter().map(|(n, r)| format!("{n}:{r}")).collect();
                    Row {
                        params: vec![
                            ("y".into(), y.to_string()),
                            ("a".into(), (16 * y * y + 16 * y + 3).to_string()),
                            ("n_max".into(), n_max.to_string()),
                        ],
                        expected: Some(format!("{}:{}", expected.0, expected.1)),
                        computed: Some(shown.join(";")),
                        outcome: if found == vec![expected] { "pass" } else { "fail" }.into(),
                        note: String::new(),
                    }
                })
                .collect()
        }
        "thmA.1" => {
            let n_max = opts.n_max.unwrap_or(100_000);
            let sols = claims::eight_one_solutions(n_max);
            vec![Row::simple(
                vec![("pair", "(8,1)".into()), ("n_max", n_max.to_string())],
                sols.is_empty(),
                if sols.is_empty() {
                    "no balancing numbers".into()
                } else {
                    format!("found n = {}", sols[0].n)
                },
            )]
        }
        "conj4.1" => {
            let n_max = opts.n_max.unwrap_or(1000);
            let y_max = opts.range.map_or(25, |r| r.1.max(0) as u64);
            let scan = scan_conjecture_41(y_max, n_max);
            let mut rows: Vec<Row> = scan
                .per_residue
                .iter()
                .map(|&(k, tested, hits)| Row {
                    params: vec![
                        ("residue".into(), k.to_string()),
                        ("x_tested".into(), tested.to_string()),
                        ("n_max".into(), n_max.to_string()),
                    ],
                    expected: Some("0".into()),
                    computed: Some(hits.to_string()),
                    outcome: if hits == 0 { "consistent" } else { "refuted" }.into(),
                    note: scan
                        .counterexamples
                        .iter()
                        .filter(|h| h.x % 4 == k)
                        .map(|h| format!("x={} n={} m={}", h.x, h.n, h.m))
                        .collect::<Vec<_>>()
                        .join("; "),
                })
                .collect();
            rows.push(Row::simple(
                vec![("residue", "2".into()), ("channel", "sanity".into())],
                scan.sanity_ok,
                format!("{} solutions, n = y, m = 8y^2 + 8y + 1", scan.sanity.len()),
            ));
            verdict = Some(if scan.counterexamples.is_empty() {
                "consistent within bounds, not proven".to_string()
            } else {
                format!("{} counterexamples", scan.counterexamples.len())
            });
            rows
        }
        other => return Err(RecipError::Params(format!("unknown theorem id {other}"))),
    };
    Ok(Table {
        theorem: theorem.to_string(),
        rows,
        verdict,
    })
}
