use serde_json::{json, Value};
use wptree_core::corpus::{Failure, Rendered, Report, Term};

fn terms(t: &[Term]) -> Value {
    Value::Array(
        t.iter()
            .map(|(e, l, n, d)| json!([e, l, n.to_string(), d.to_string()]))
            .collect(),
    )
}

fn side(r: &Option<Rendered>) -> Value {
    match r {
        None => Value::Null,
        Some(x @ Rendered::Poly(t)) => json!({ "text": x.to_string(), "terms": terms(t) }),
        Some(x @ Rendered::Ratio { num, den }) => {
            json!({ "text": x.to_string(), "num": terms(num), "den": terms(den) })
        }
    }
}

fn failure(f: &Failure) -> Value {
    let bindings: serde_json::Map<String, Value> = f
        .instance
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let mut out = json!({ "bindings": bindings, "lhs": side(&f.lhs), "rhs": side(&f.rhs) });
    if let Some(e) = &f.error {
        out["error"] = Value::String(e.clone());
    }
    out
}

fn report(r: &Report) -> Value {
    let ranges: serde_json::Map<String, Value> = r
        .ranges
        .iter()
        .map(|p| (p.name.clone(), json!([p.lo, p.hi])))
        .collect();
    json!({
        "id": r.id,
        "label": r.label,
        "mode": r.mode.to_string(),
        "ranges": ranges,
        "instances": r.instances(),
        "passed": r.passed(),
        "failures": r.failures.iter().map(failure).collect::<Vec<_>>(),
        "elapsed_ms": r.elapsed_ms as u64,
    })
}

pub fn json(reports: &[Report]) -> String {
    let all: Vec<Value> = reports.iter().map(report).collect();
    serde_json::to_string_pretty(&all).expect("reports serialize")
}

fn instance(pairs: &[(String, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{}={}", k, v))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn human(r: &Report, timing: bool) -> String {
    let status = if r.passed() { "pass" } else { "FAIL" };
    let mut s = format!("{:8} {} {:5} instances", r.id, status, r.instances());
    if timing {
        s.push_str(&format!(" {:6} ms", r.elapsed_ms));
    }
    s.push('\n');
    for f in r.failures.iter().take(3) {
        s.push_str(&format!("  at {}\n", instance(&f.instance)));
        match (&f.error, &f.lhs, &f.rhs) {
            (Some(e), _, _) => s.push_str(&format!("    error: {}\n", e)),
            (None, Some(l), Some(rh)) => {
                s.push_str(&format!("    lhs = {}\n    rhs = {}\n", l, rh));
            }
            _ => {}
        }
    }
    if r.failures.len() > 3 {
        s.push_str(&format!("  ... {} more failures\n", r.failures.len() - 3));
    }
    s
}

pub fn csv(reports: &[Report]) -> String {
    let mut s = String::from("id,instance,pass\n");
    for r in reports {
        for i in &r.results {
            s.push_str(&format!("{},{},{}\n", r.id, instance(&i.instance), i.pass));
        }
    }
    s
}
