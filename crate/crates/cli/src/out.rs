//! JSON rendering. Every number goes out as a decimal string.

use balans::exactnum::{Rat, RatInterval};
use balans::recipsum::{SumEnclosure, SumVerdict, TailCertificate};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub fn rat(v: &Rat) -> Value {
    Value::String(v.to_string())
}

pub fn num(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn interval(iv: &RatInterval) -> Value {
    json!({
        "lo": rat(&iv.lo),
        "hi": rat(&iv.hi),
        "lo_approx": num(format!("{:.12e}", approx(&iv.lo))),
        "hi_approx": num(format!("{:.12e}", approx(&iv.hi))),
    })
}

pub fn approx(v: &Rat) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

pub fn certificate(c: &TailCertificate) -> Value {
    match c {
        TailCertificate::Geometric {
            g,
            h,
            from_index,
            majorant,
        } => json!({
            "kind": "geometric",
            "ratio_lo": rat(g),
            "ratio_hi": rat(h),
            "from_index": num(from_index),
            "majorant": rat(majorant),
        }),
        TailCertificate::QuadraticGrowth {
            from_index,
            majorant,
        } => json!({
            "kind": "quadratic_growth",
            "from_index": num(from_index),
            "majorant": rat(majorant),
        }),
        TailCertificate::Alternating {
            g,
            from_index,
            first_omitted,
        } => json!({
            "kind": "alternating",
            "ratio_lo": rat(g),
            "from_index": num(from_index),
            "first_omitted": rat(first_omitted),
        }),
    }
}

pub fn sum_enclosure(s: &SumEnclosure) -> Value {
    json!({
        "interval": interval(&s.interval),
        "terms_used": num(s.terms_used),
        "certificate": certificate(&s.certificate),
    })
}

pub fn verdict(v: &SumVerdict) -> Value {
    json!({
        "mode": v.mode.name(),
        "answer": num(&v.answer),
        "inverse_enclosure": interval(&v.enclosure),
        "terms_used": num(v.terms_used),
        "sum": sum_enclosure(&v.sum),
    })
}

pub fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}
