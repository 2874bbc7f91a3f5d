use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::ast::{Expr, IdentitySpec, IntParam, Mode};
use super::eval::{binding_values, eval_sides, Sides};
use super::parser::check_binding_set;
use crate::error::{Error, Result};
use crate::qlaurent::{Exp, LaurentRatio, Rational};
use crate::LaurentPoly;

/// `[exponent numerator, lattice, coefficient numerator, coefficient denominator]`.
pub type Term = (i64, i64, BigInt, BigInt);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rendered {
    Poly(Vec<Term>),
    Ratio { num: Vec<Term>, den: Vec<Term> },
}

impl Rendered {
    fn of_ratio(r: &LaurentRatio) -> Self {
        match r.to_poly() {
            Some(p) => Rendered::Poly(p.serialize_terms()),
            None => Rendered::Ratio {
                num: r.numer().serialize_terms(),
                den: r.denom().serialize_terms(),
            },
        }
    }

    fn of_poly(p: &LaurentPoly) -> Self {
        Rendered::Poly(p.serialize_terms())
    }
}

fn rebuild(terms: &[Term]) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for (e, l, n, d) in terms {
        let c = Rational::new(n.clone(), d.clone());
        acc = &acc + &LaurentPoly::monomial(&c, Exp::new(*e, *l));
    }
    acc
}

impl fmt::Display for Rendered {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rendered::Poly(t) => write!(f, "{}", rebuild(t)),
            Rendered::Ratio { num, den } => write!(f, "({}) / ({})", rebuild(num), rebuild(den)),
        }
    }
}

/// Overrides applied on top of a stanza's declarations.
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub ranges: Vec<(String, i64, i64)>,
    /// Replaces parameters of the first default binding set; the others
    /// keep their default expressions.
    pub bindings: Option<Vec<(String, Expr)>>,
    pub trunc: Option<i64>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceResult {
    /// Integer parameters then monomial parameters, as printed values.
    pub instance: Vec<(String, String)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub instance: Vec<(String, String)>,
    pub lhs: Option<Rendered>,
    pub rhs: Option<Rendered>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub id: String,
    pub label: String,
    pub mode: Mode,
    pub ranges: Vec<IntParam>,
    pub results: Vec<InstanceResult>,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn instances(&self) -> usize {
        self.results.len()
    }
}

struct Job {
    ints: Vec<(String, i64)>,
    set: usize,
}

fn resolve_ranges(spec: &IdentitySpec, overrides: &[(String, i64, i64)]) -> Result<Vec<IntParam>> {
    let mut ranges = spec.ints.clone();
    for (name, lo, hi) in overrides {
        let p = ranges
            .iter_mut()
            .find(|p| &p.name == name)
            .ok_or_else(|| Error::Unknown {
                kind: "integer parameter",
                name: format!("{} (in {})", name, spec.id),
            })?;
        if lo > hi {
            return Err(Error::Eval(format!(
                "empty range {}..{} for {}",
                lo, hi, name
            )));
        }
        p.lo = *lo;
        p.hi = *hi;
    }
    Ok(ranges)
}

fn resolve_bindings(
    spec: &IdentitySpec,
    over: &Option<Vec<(String, Expr)>>,
) -> Result<Vec<Vec<(String, Expr)>>> {
    let defaults = if spec.bindings.is_empty() {
        vec![Vec::new()]
    } else {
        spec.bindings.clone()
    };
    let over = match over {
        None => return Ok(defaults),
        Some(o) => o,
    };
    for (name, _) in over {
        if !spec.params.contains(name) {
            return Err(Error::Unknown {
                kind: "parameter",
                name: format!("{} (in {})", name, spec.id),
            });
        }
    }
    let mut set = defaults[0].clone();
    for (name, e) in over {
        if let Some(slot) = set.iter_mut().find(|(n, _)| n == name) {
            slot.1 = e.clone();
        }
    }
    check_binding_set(spec, &set)?;
    Ok(vec![set])
}

fn tuples(ranges: &[IntParam]) -> Vec<Vec<(String, i64)>> {
    let mut out = vec![Vec::new()];
    for p in ranges {
        let mut next = Vec::new();
        for t in &out {
            for v in p.lo..=p.hi {
                let mut t = t.clone();
                t.push((p.name.clone(), v));
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Evaluates both sides of every instance and compares them: exactly in
/// exact mode, modulo `q^T` in truncated mode. Evaluation errors are
/// recorded per instance.
pub fn verify_identity(spec: &IdentitySpec, opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let ranges = resolve_ranges(spec, &opts.ranges)?;
    let sets = resolve_bindings(spec, &opts.bindings)?;
    let mode = match (spec.mode, opts.trunc) {
        (Mode::Exact, Some(_)) => {
            return Err(Error::Eval(format!(
                "{} is exact; a truncation order does not apply",
                spec.id
            )))
        }
        (Mode::Truncated(_), Some(t)) if t < 1 => {
            return Err(Error::Eval(format!(
                "truncation order must be positive, got {}",
                t
            )))
        }
        (Mode::Truncated(_), Some(t)) => Mode::Truncated(t),
        (m, None) => m,
    };
    let values = sets
        .iter()
        .map(|s| binding_values(spec, s))
        .collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for set in 0..sets.len() {
        for ints in tuples(&ranges) {
            jobs.push(Job { ints, set });
        }
    }
    let order = match mode {
        Mode::Exact => None,
        Mode::Truncated(t) => Some(t),
    };
    let run = |job: &Job| -> Option<(InstanceResult, Option<Failure>)> {
        let binds = &values[job.set];
        let mut instance: Vec<(String, String)> = job
            .ints
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect();
        instance.extend(binds.iter().map(|(k, v)| (k.clone(), v.to_string())));
        let failure = match eval_sides(spec, binds, &job.ints, order) {
            Ok(None) => return None,
            Ok(Some(sides)) if sides.agree() => None,
            Ok(Some(Sides::Exact(l, r))) => Some(Failure {
                instance: instance.clone(),
                lhs: Some(Rendered::of_ratio(&l)),
                rhs: Some(Rendered::of_ratio(&r)),
                error: None,
            }),
            Ok(Some(Sides::Truncated { lhs, rhs, order })) => {
                let cut = Exp::from_integer(order);
                Some(Failure {
                    instance: instance.clone(),
                    lhs: Some(Rendered::of_poly(&lhs.poly().truncate(cut))),
                    rhs: Some(Rendered::of_poly(&rhs.poly().truncate(cut))),
                    error: None,
                })
            }
            Err(e) => Some(Failure {
                instance: instance.clone(),
                lhs: None,
                rhs: None,
                error: Some(e.to_string()),
            }),
        };
        let pass = failure.is_none();
        Some((InstanceResult { instance, pass }, failure))
    };
    let outcomes: Vec<_> = match opts.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Eval(format!("thread pool: {}", e)))?;
            pool.install(|| jobs.par_iter().map(run).collect())
        }
        None => jobs.par_iter().map(run).collect(),
    };
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for (r, f) in outcomes.into_iter().flatten() {
        results.push(r);
        failures.extend(f);
    }
    Ok(Report {
        id: spec.id.clone(),
        label: spec.label.clone(),
        mode,
        ranges,
        results,
        failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
