//! Square balancing/cobalancing counts over coefficient grids, written out as
//! CSV and plain PPM.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::balancing::{square_solutions, BalanceSolution, CoeffPair, Variant};
use crate::exactnum::Int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridScan {
    pub a_max: u64,
    pub b_max: u64,
    pub n_max: u64,
    pub variant: Variant,
    /// Coprime cells only.
    pub cells: BTreeMap<(u64, u64), Vec<BalanceSolution>>,
}

impl GridScan {
    pub fn count(&self, a: u64, b: u64) -> Option<usize> {
        self.cells.get(&(a, b)).map(Vec::len)
    }

    pub fn max_count(&self) -> usize {
        self.cells.values().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn scan_grid(a_max: u64, b_max: u64, n_max: u64, variant: Variant) -> GridScan {
    let pairs: Vec<(u64, u64)> = (1..=a_max)
        .flat_map(|a| (1..=b_max).map(move |b| (a, b)))
        .filter(|&(a, b)| a.gcd(&b) == 1)
        .collect();
    let cells = pairs
        .par_iter()
        .map(|&(a, b)| {
            let c = CoeffPair::from_u64(a, b).expect("coprime positive pair");
            ((a, b), square_solutions(&c, variant, n_max))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    GridScan {
        a_max,
        b_max,
        n_max,
        variant,
        cells,
    }
}

pub fn emit_csv(scan: &GridScan) -> Vec<u8> {
    let mut out = String::new();
    writeln!(out, "# n_max={}", scan.n_max).unwrap();
    out.push_str("a,b,count,solutions\n");
    for ((a, b), sols) in &scan.cells {
        let joined: Vec<String> = sols.iter().map(|s| format!("{}:{}", s.n, s.r)).collect();
        writeln!(out, "{a},{b},{},{}", sols.len(), joined.join(";")).unwrap();
    }
    out.into_bytes()
}

fn pixel(scan: &GridScan, a: u64, b: u64) -> &'static str {
    match (scan.count(a, b), scan.variant) {
        (None, _) => "255 255 255",
        (Some(0), Variant::Balancing) => "255 255 255",
        (Some(1), Variant::Balancing) => "192 192 192",
        (Some(2), Variant::Balancing) => "255 0 0",
        (Some(_), Variant::Balancing) => "0 0 0",
        (Some(0), Variant::Cobalancing) => "255 255 255",
        (Some(_), Variant::Cobalancing) => "0 0 0",
    }
}

/// `b` runs along rows, `a` down the image.
pub fn emit_ppm(scan: &GridScan) -> Vec<u8> {
    let mut out = String::new();
    writeln!(out, "P3\n{} {}\n255", scan.b_max, scan.a_max).unwrap();
    for a in 1..=scan.a_max {
        let row: Vec<&str> = (1..=scan.b_max).map(|b| pixel(scan, a, b)).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out.into_bytes()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PatternReport {
    /// `(a, b, n, r, r divides a - b, n in {r, r - 1})` per solution.
    pub conforming: Vec<(u64, u64, Int, Int, bool, bool)>,
    /// Fraction of solutions satisfying both conditions.
    pub conforming_fraction: Option<f64>,
    /// `(compared, agreeing)` for the shift `a -> a + 42`.
    pub shift_a42: (usize, usize),
    /// `(compared, agreeing)` for the shift `b -> b + 6`.
    pub shift_b6: (usize, usize),
}

impl PatternReport {
    pub fn shift_fraction(pair: (usize, usize)) -> Option<f64> {
        (pair.0 > 0).then(|| pair.1 as f64 / pair.0 as f64)
    }
}

fn shift_agreement(scan: &GridScan, da: u64, db: u64) -> (usize, usize) {
    let mut compared = 0;
    let mut agreeing = 0;
    for (&(a, b), sols) in &scan.cells {
        if let Some(other) = scan.cells.get(&(a + da, b + db)) {
            compared += 1;
            if sols.is_empty() == other.is_empty() {
                agreeing += 1;
            }
        }
    }
    (compared, agreeing)
}

/// Observations on a cobalancing scan; `None` for the balancing variant.
pub fn pattern_report(scan: &GridScan) -> Option<PatternReport> {
    if scan.variant != Variant::Cobalancing {
        return None;
    }
    let mut report = PatternReport::default();
    if scan.cells.values().all(Vec::is_empty) {
        return Some(report);
    }
    for (&(a, b), sols) in &scan.cells {
        for s in sols {
            let diff = Int::from(a) - Int::from(b);
            let divides = !s.r.is_zero() && diff.is_multiple_of(&s.r);
            let near = s.n == s.r || s.n == &s.r - Int::one();
            report
                .conforming
                .push((a, b, s.n.clone(), s.r.clone(), divides, near));
        }
    }
    let total = report.conforming.len();
    let good = report.conforming.iter().filter(|c| c.4 && c.5).count();
    report.conforming_fraction = (total > 0).then(|| good as f64 / total as f64);
    report.shift_a42 = shift_agreement(scan, 42, 0);
    report.shift_b6 = shift_agreement(scan, 0, 6);
    Some(report)
}
