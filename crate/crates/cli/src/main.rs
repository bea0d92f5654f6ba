//! `balans`: balancing numbers, recurrence detection and certified
//! reciprocal-sum floors from the command line.
//!
//! Exit codes: 0 success, 1 a checked statement failed, 2 usage or input
//! error, 3 undecidable within the budget.

mod out;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use balans::balancing::{
    balancer_of, find_all, pell, square_solutions, BalanceSolution, CoeffPair, Variant,
};
use balans::exactnum::{Int, Rat};
use balans::gridlab::{emit_csv, emit_ppm, pattern_report, scan_grid, PatternReport};
use balans::recdetect::{detect_fixed, detect_minimal, fit_table_form, render_tuple};
use balans::recipsum::{inverse_answer, Denominator, Mode, RecipError, SignMode, SumSpec};
use balans::sequences::{
    balancing_rec, cobalancer_rec, cobalancing_rec, fibonacci, generalized_tribonacci, pell as pell_seq,
    tribonacci, SeqError,
};
use balans::{DetectionResult, Recurrence};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::verify::Status;

#[derive(Parser)]
#[command(name = "balans", version, about = "Balancing numbers and certified reciprocal sums")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "BALANS_JOBS", default_value_t = 0)]
    jobs: usize,
    /// Output format; `verify` defaults to text, everything else to JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Fibonacci,
    Tribonacci,
    Pell,
    Balancing,
    Cobalancing,
    Cobalancer,
    Generalized,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Balancing,
    Cobalancing,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Balancing => Variant::Balancing,
            VariantArg::Cobalancing => Variant::Cobalancing,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Floor,
    Nearest,
}

#[derive(clap::Args)]
struct SeqArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    a: Option<Int>,
    #[arg(long)]
    b: Option<Int>,
    /// `p,q,r,x,y,z` for the generalized family: G_0..G_2 = p,q,r and coefficients x,y,z.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Vec<Int>,
}

#[derive(Subcommand)]
enum Command {
    /// Terms of a sequence.
    Seq {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        start: i64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Find the recurrence behind a list of terms.
    Detect {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        terms: Vec<Rat>,
        /// Fit exactly this depth instead of searching.
        #[arg(long)]
        depth: Option<usize>,
        /// With --depth: include a constant term.
        #[arg(long)]
        constant: bool,
        #[arg(long, default_value_t = 5)]
        max_depth: usize,
        /// Fit the five-term form (1, K, -K, -1, 1).
        #[arg(long)]
        table_form: bool,
    },
    /// Balancing or cobalancing numbers of a coefficient pair.
    Find {
        #[arg(long)]
        a: Int,
        #[arg(long)]
        b: Int,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Squares instead of integers on both sides.
        #[arg(long)]
        square: bool,
        /// Enumerate through the associated Pell equation instead of scanning n.
        #[arg(long, conflicts_with = "square")]
        pell: bool,
        #[arg(long)]
        nmax: u64,
        /// With --pell: stop after this many solutions.
        #[arg(long, default_value_t = 64)]
        max_terms: usize,
    },
    /// Certified floor or nearest integer of an inverse reciprocal sum.
    Recip {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, allow_hyphen_values = true)]
        start: i64,
        #[arg(long, default_value_t = 1)]
        stride: u64,
        #[arg(long)]
        alternating: bool,
        /// Use partial sums c_1 + .. + c_i as denominators.
        #[arg(long)]
        partial_sum_denoms: bool,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Most terms summed exactly before giving up.
        #[arg(long, default_value_t = 2048)]
        budget: usize,
    },
    /// Check a statement over a range.
    ///
    /// Defaults: n in 1..=15 for the reciprocal-sum statements (eq1.1 starts at 2,
    /// thm1.6/thm3.11/thm3.15 at the stride); lemma3.9 n <= 50; thm1.7 n <= 1000;
    /// thm1.9 y in 1..=5 with n <= 10^4; thmA.1 n <= 10^5; conj4.1 y <= 25, n <= 1000.
    Verify {
        #[arg(long, value_parser = verify::THEOREMS)]
        theorem: String,
        /// `LO..HI`, inclusive (y range for thm1.9 and conj4.1).
        #[arg(long, value_parser = parse_range)]
        range: Option<(i64, i64)>,
        /// Scan bound for lemma3.9, thm1.7, thm1.9, thmA.1, conj4.1, and the
        /// closed-form check in thm3.13.
        #[arg(long)]
        nmax: Option<u64>,
        /// Sequence for thm3.15 as `p,q,r,x,y,z`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<Int>,
    },
    /// Square-solution counts over a coefficient grid.
    Grid {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, default_value_t = 120)]
        amax: u64,
        #[arg(long, default_value_t = 120)]
        bmax: u64,
        #[arg(long, default_value_t = 5000)]
        nmax: u64,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_ppm: Option<PathBuf>,
        #[arg(long)]
        pattern_report: bool,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s}"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

enum Failure {
    Usage(String),
    Mismatch,
    Undecidable(String),
}

impl From<RecipError> for Failure {
    fn from(e: RecipError) -> Failure {
        match e {
            RecipError::Budget { .. } | RecipError::Certification(_) => {
                Failure::Undecidable(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<SeqError> for Failure {
    fn from(e: SeqError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn sequence(args: &SeqArgs, default_cobalancing: bool) -> Result<Recurrence, Failure> {
    let pair = || -> Result<(Int, Int), Failure> {
        match (&args.a, &args.b) {
            (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
            _ => Err(usage("this family needs --a and --b")),
        }
    };
    let family = match args.family {
        Some(f) => f,
        None if default_cobalancing && args.a.is_some() => Family::Cobalancing,
        None => return Err(usage("--family is required")),
    };
    Ok(match family {
        Family::Fibonacci => fibonacci(),
        Family::Tribonacci => tribonacci(),
        Family::Pell => pell_seq(),
        Family::Balancing => balancing_rec(),
        Family::Cobalancing => {
            let (a, b) = pair()?;
            cobalancing_rec(&a, &b)?
        }
        Family::Cobalancer => {
            let (a, b) = pair()?;
            cobalancer_rec(&a, &b)?
        }
        Family::Generalized => generalized(&args.params)?,
    })
}

fn generalized(p: &[Int]) -> Result<Recurrence, Failure> {
    match p {
        [p0, q, r, x, y, z] => Ok(generalized_tribonacci(p0, q, r, x, y, z)),
        _ => Err(usage("--params needs six values p,q,r,x,y,z")),
    }
}

fn solutions_json(c: &CoeffPair, v: Variant, square: bool, sols: &[BalanceSolution]) -> Value {
    json!({
        "pair": c.to_string(),
        "variant": v.name(),
        "power": if square { "2" } else { "1" },
        "count": out::num(sols.len()),
        "solutions": sols
            .iter()
            .map(|s| json!({"n": out::num(&s.n), "r": out::num(&s.r)}))
            .collect::<Vec<_>>(),
    })
}

fn detection_json(d: &DetectionResult) -> Value {
    json!({
        "tuple": d.tuple_text,
        "coefficients": d.recurrence.coeffs.iter().map(out::rat).collect::<Vec<_>>(),
        "constant": out::rat(&d.recurrence.constant),
        "verified_terms": out::num(d.verified_terms),
    })
}

fn emit(format: Format, value: &Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => out::print(value),
        Format::Text | Format::Csv => print!("{}", text()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let fmt = cli.format.unwrap_or(Format::Json);
    match cli.command {
        Command::Seq { seq, start, count } => {
            let rec = sequence(&seq, false)?;
            let w = rec.window(start, count)?;
            let v = json!({
                "family": rec.label,
                "recurrence": render_tuple(&rec),
                "start": out::num(start),
                "terms": w.terms.iter().map(out::rat).collect::<Vec<_>>(),
            });
            emit(fmt, &v, || {
                let t: Vec<String> = w.terms.iter().map(|t| t.to_string()).collect();
                if fmt == Format::Csv {
                    format!("{}\n", t.join(","))
                } else {
                    format!("{} {}\n{}\n", rec.label, render_tuple(&rec), t.join(" "))
                }
            });
            Ok(())
        }
        Command::Detect {
            terms,
            depth,
            constant,
            max_depth,
            table_form,
        } => {
            let found = if table_form {
                fit_table_form(&terms)
            } else if let Some(d) = depth {
                detect_fixed(&terms, d, constant).map_err(|e| usage(e.to_string()))?
            } else {
                detect_minimal(&terms, max_depth)
            };
            match found {
                Some(d) => {
                    emit(fmt, &detection_json(&d), || format!("{}\n", d.tuple_text));
                    Ok(())
                }
                None => {
                    emit(fmt, &json!({"tuple": null}), || "no recurrence\n".to_string());
                    Err(Failure::Mismatch)
                }
            }
        }
        Command::Find {
            a,
            b,
            variant,
            square,
            pell: use_pell,
            nmax,
            max_terms,
        } => {
            let c = CoeffPair::new(a, b).map_err(|e| usage(e.to_string()))?;
            let v: Variant = variant.into();
            let sols = if square {
                square_solutions(&c, v, nmax)
            } else if use_pell {
                pell::enumerate(&c, v, &Int::from(nmax), max_terms)
            } else {
                find_all(&c, v, nmax)
            };
            debug_assert!(square || sols.iter().all(|s| balancer_of(&s.n, &c, v).as_ref() == Some(&s.r)));
            emit(fmt, &solutions_json(&c, v, square, &sols), || {
                let mut s = String::new();
                if fmt == Format::Csv {
                    s.push_str("n,r\n");
                }
                for x in &sols {
                    s.push_str(&format!("{},{}\n", x.n, x.r));
                }
                s
            });
            Ok(())
        }
        Command::Recip {
            seq,
            start,
            stride,
            alternating,
            partial_sum_denoms,
            mode,
            budget,
        } => {
            let spec = SumSpec {
                sequence: sequence(&seq, true)?,
                start,
                stride,
                sign: if alternating {
                    SignMode::Alternating
                } else {
                    SignMode::Plain
                },
                denominator: if partial_sum_denoms {
                    Denominator::PartialSum
                } else {
                    Denominator::Term
                },
            };
            let mode = match mode {
                ModeArg::Floor => Mode::Floor,
                ModeArg::Nearest => Mode::Nearest,
            };
            let v = inverse_answer(&spec, mode, budget)?;
            let mut j = out::verdict(&v);
            j["sequence"] = Value::String(spec.sequence.label.clone());
            emit(fmt, &j, || {
                format!(
                    "{} {}  (inverse in [{:.12}, {:.12}], {} terms)\n",
                    mode.name(),
                    v.answer,
                    out::approx(&v.enclosure.lo),
                    out::approx(&v.enclosure.hi),
                    v.terms_used
                )
            });
            Ok(())
        }
        Command::Verify {
            theorem,
            range,
            nmax,
            params,
        } => {
            let generalized = if params.is_empty() {
                None
            } else {
                Some(generalized(&params)?)
            };
            let opts = verify::Options {
                range,
                n_max: nmax,
                generalized,
            };
            let table = verify::run(&theorem, &opts)?;
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => out::print(&table.to_json()),
                _ => print!("{}", table.to_text()),
            }
            match table.status() {
                Status::Pass => Ok(()),
                Status::Fail => Err(Failure::Mismatch),
                Status::Undecidable => Err(Failure::Undecidable("some instances undecided".into())),
            }
        }
        Command::Grid {
            variant,
            amax,
            bmax,
            nmax,
            out_csv,
            out_ppm,
            pattern_report: want_pattern,
        } => {
            if amax == 0 || bmax == 0 {
                return Err(usage("--amax and --bmax must be positive"));
            }
            let v: Variant = variant.into();
            let scan = scan_grid(amax, bmax, nmax, v);
            let write = |p: &Option<PathBuf>, bytes: Vec<u8>| -> Result<(), Failure> {
                if let Some(p) = p {
                    fs::write(p, bytes).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                }
                Ok(())
            };
            write(&out_csv, emit_csv(&scan))?;
            write(&out_ppm, emit_ppm(&scan))?;
            let limit = match v {
                Variant::Balancing => 3,
                Variant::Cobalancing => 1,
            };
            let over: Vec<String> = scan
                .cells
                .iter()
                .filter(|(_, s)| s.len() > limit)
                .map(|((a, b), _)| format!("({a},{b})"))
                .collect();
            let trivial_ok = v == Variant::Cobalancing
                || scan
                    .cells
                    .values()
                    .all(|s| s.first().is_some_and(|x| x.n == Int::from(1) && x.r == Int::from(0)));
            let mut j = json!({
                "variant": v.name(),
                "a_max": out::num(amax),
                "b_max": out::num(bmax),
                "n_max": out::num(nmax),
                "cells": out::num(scan.cells.len()),
                "nonempty": out::num(scan.cells.values().filter(|s| !s.is_empty()).count()),
                "max_count": out::num(scan.max_count()),
                "over_limit": over,
                "trivial_solution_everywhere": trivial_ok,
            });
            if want_pattern {
                j["pattern"] = match pattern_report(&scan) {
                    Some(r) => pattern_json(&r),
                    None => Value::Null,
                };
            }
            emit(fmt, &j, || {
                format!(
                    "{} grid {}x{} n<={}: {} cells, max count {}\n",
                    v.name(),
                    amax,
                    bmax,
                    nmax,
                    scan.cells.len(),
                    scan.max_count()
                )
            });
            if over.is_empty() && trivial_ok {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
    }
}

fn pattern_json(r: &PatternReport) -> Value {
    let frac = |f: Option<f64>| f.map_or(Value::Null, |x| out::num(format!("{x:.6}")));
    json!({
        "solutions": out::num(r.conforming.len()),
        "conforming_fraction": frac(r.conforming_fraction),
        "shift_a42": {"compared": out::num(r.shift_a42.0), "agreeing": out::num(r.shift_a42.1),
                      "fraction": frac(PatternReport::shift_fraction(r.shift_a42))},
        "shift_b6": {"compared": out::num(r.shift_b6.0), "agreeing": out::num(r.shift_b6.1),
                     "fraction": frac(PatternReport::shift_fraction(r.shift_b6))},
        "cells": r.conforming.iter().map(|(a, b, n, rr, div, near)| json!({
            "a": out::num(a), "b": out::num(b), "n": out::num(n), "r": out::num(rr),
            "r_divides_a_minus_b": div, "n_is_r_or_r_minus_1": near,
        })).collect::<Vec<_>>(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Undecidable(m)) => {
            eprintln!("undecidable: {m}");
            ExitCode::from(3)
        }
    }
}
