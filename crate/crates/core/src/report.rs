//! JSON and CSV artifacts. Floating-point values are written with six
//! significant digits.

use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{json, Map, Value};

use crate::algebra::{ActionSet, Assignment, Expr};
use crate::netsim::Message;
use crate::neuron::Trace;
use crate::rgt::{interval_members, CanonicalCoefficients, DecisionResult, InfluenceMatrix, RelationshipGraph};
use crate::scenario::RunOutcome;

/// `%.6g`-style formatting.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to six significant digits, for JSON numbers.
pub fn round6(x: f64) -> f64 {
    fmt_g(x).parse().unwrap_or(x)
}

pub fn decision_json(r: &DecisionResult) -> Value {
    match r {
        DecisionResult::Frustration => json!({ "result": "frustration" }),
        DecisionResult::Interval { lower, upper } => {
            let members: Vec<String> = interval_members(r)
                .expect("interval")
                .iter()
                .map(ToString::to_string)
                .collect();
            json!({
                "result": if lower == upper { "point" } else { "interval" },
                "lower": lower.to_string(),
                "upper": upper.to_string(),
                "members": members,
            })
        }
    }
}

pub fn decisions_json(decisions: &BTreeMap<String, DecisionResult>) -> Value {
    Value::Object(
        decisions
            .iter()
            .map(|(k, r)| (k.clone(), decision_json(r)))
            .collect(),
    )
}

pub fn coefficients_json(coeffs: &[CanonicalCoefficients]) -> Value {
    Value::Object(
        coeffs
            .iter()
            .map(|c| (c.subject.clone(), json!({ "A": c.a.to_string(), "B": c.b.to_string() })))
            .collect(),
    )
}

pub fn graph_json(g: &RelationshipGraph) -> Value {
    Value::Array(
        g.pairs()
            .map(|(a, b, r)| json!({ "between": [a, b], "relation": r.to_string() }))
            .collect(),
    )
}

pub fn matrix_json(m: &InfluenceMatrix) -> Value {
    let mut rows: BTreeMap<&str, Map<String, Value>> = BTreeMap::new();
    for (from, to, v) in m.entries() {
        rows.entry(from)
            .or_default()
            .insert(to.to_string(), Value::String(v.to_string()));
    }
    json!(rows)
}

pub fn assignment_json(a: &Assignment) -> Value {
    Value::Object(
        a.iter()
            .map(|(k, v)| (k.clone(), Value::String(v.to_string())))
            .collect(),
    )
}

fn table_json<T>(t: &BTreeMap<(String, String), T>, f: impl Fn(&T) -> Value) -> Value {
    let mut rows: BTreeMap<&str, Map<String, Value>> = BTreeMap::new();
    for ((from, to), v) in t {
        rows.entry(from).or_default().insert(to.clone(), f(v));
    }
    json!(rows)
}

/// The `decisions.json` document of a simulated round.
pub fn run_report(out: &RunOutcome) -> Value {
    let units: Map<String, Value> = out
        .group
        .units()
        .iter()
        .map(|u| (u.id.clone(), json!(round6(u.own_omega))))
        .collect();
    let crosstalk: Vec<Value> = out
        .messages()
        .iter()
        .filter(|m| !m.crosstalk.is_empty())
        .map(|m| {
            json!({
                "time": round6(m.payload_time),
                "sender": m.sender,
                "addressee": m.addressee,
                "decoded": m.decoded.to_string(),
                "channels": m.crosstalk,
            })
        })
        .collect();
    let mut doc = json!({
        "seed": out.seed,
        "universe": out.group.universe().actions(),
        "units": units,
        "relationship_codes": table_json(&out.intents.intents, |r| {
            json!(u8::from(*r == crate::rgt::Relation::Alliance))
        }),
        "graph": graph_json(&out.graph),
        "polynomial": out.round.polynomial.to_string(),
        "folded": out.round.folded.to_string(),
        "influences": matrix_json(&out.matrix),
        "decisions": decisions_json(&out.round.decisions),
        "messages": out.messages().len(),
        "crosstalk": crosstalk,
    });
    if !out.intents.draws.is_empty() {
        doc["draws"] = table_json(&out.intents.draws, |d| json!(round6(*d)));
    }
    if let Some((control, plan)) = &out.plan {
        doc["plan"] = json!({
            "planner": control.planner,
            "subject": control.subject,
            "target": control.target.to_string(),
            "influences": plan.as_ref().map(assignment_json),
        });
    }
    doc
}

/// Forward-task report without channel simulation.
pub fn forward_report(poly: &Expr, folded: &Expr, coeffs: &[CanonicalCoefficients], decisions: &BTreeMap<String, DecisionResult>) -> Value {
    json!({
        "task": "forward",
        "polynomial": poly.to_string(),
        "folded": folded.to_string(),
        "canonical": coefficients_json(coeffs),
        "decisions": decisions_json(decisions),
    })
}

pub fn inverse_report(poly: &Expr, controlled: &str, target: &ActionSet, solutions: &[Assignment]) -> Value {
    json!({
        "task": "inverse",
        "polynomial": poly.to_string(),
        "controlled": controlled,
        "target": target.to_string(),
        "solutions": solutions.iter().map(assignment_json).collect::<Vec<_>>(),
    })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn mags(m: &[f64; 3]) -> String {
    m.iter().map(|x| fmt_g(*x)).collect::<Vec<_>>().join(";")
}

/// `time,sender,carrier,mags,decoded,addressee`, one row per train. ID
/// rows are broadcast (`*`).
pub fn write_messages_csv<W: Write>(w: W, messages: &[Message]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["time", "sender", "carrier", "mags", "decoded", "addressee"])?;
    for m in messages {
        out.write_record([
            fmt_g(m.id_train.start_time),
            m.sender.clone(),
            fmt_g(m.id_train.carrier_omega),
            mags(&m.id_train.magnitudes),
            "id".to_string(),
            "*".to_string(),
        ])?;
        out.write_record([
            fmt_g(m.payload_train.start_time),
            m.sender.clone(),
            fmt_g(m.payload_train.carrier_omega),
            mags(&m.payload_train.magnitudes),
            m.decoded.to_string(),
            m.addressee.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `t,x,y,spike`, one row per sample.
pub fn write_trace_csv<W: Write>(w: W, trace: &Trace) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "x", "y", "spike"])?;
    for s in &trace.samples {
        out.write_record([fmt_g(s.t), fmt_g(s.x), fmt_g(s.y), u8::from(s.spike).to_string()])?;
    }
    out.flush()?;
    Ok(())
}
