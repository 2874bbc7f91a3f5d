use std::fs;

use wptree_core::burge::{apply_word, burge_seed, check_burge_relation, parse_word, BurgePair};
use wptree_core::corpus::{
    catalog, eval_closed, eval_sides, find, parse_bindings, parse_catalog, parse_expr,
    verify_identity, Expr, IdentitySpec, Mode, Report, Sides, Value, VerifyOptions,
};
use wptree_core::hyperg::{classify_poised, PhiSpec, Terms, WSpec};
use wptree_core::wp_pairs::{
    check_wp_relation, derive, seed, termwise_eq, Bindings, Mismatch, Step,
};
use wptree_core::{Error, LaurentRatio, Monomial, Result};

use crate::report;
use crate::{BurgeCommand, ClassifyArgs, Format, PairCommand, VerifyArgs};

pub const PASS: u8 = 0;
pub const FAIL: u8 = 1;
pub const CONFIG: u8 = 2;

fn config_error(e: impl std::fmt::Display) -> u8 {
    eprintln!("error: {}", e);
    CONFIG
}

pub fn list() -> u8 {
    let cat = match catalog() {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    for s in cat {
        let ranges: Vec<String> = s
            .ints
            .iter()
            .map(|p| format!("{}={}..{}", p.name, p.lo, p.hi))
            .collect();
        println!(
            "{:8} {:14} {:24} {}",
            s.id,
            s.mode.to_string(),
            ranges.join(","),
            s.label
        );
    }
    PASS
}

/// Parses `N=0..6,M=0..6`.
fn parse_ranges(text: &str) -> Result<Vec<(String, i64, i64)>> {
    let bad = |part: &str| Error::Eval(format!("malformed range `{}`; expected NAME=LO..HI", part));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, span) = part.split_once('=').ok_or_else(|| bad(part))?;
        let (lo, hi) = span.split_once("..").ok_or_else(|| bad(part))?;
        let lo = lo.trim().parse().map_err(|_| bad(part))?;
        let hi = hi.trim().parse().map_err(|_| bad(part))?;
        out.push((name.trim().to_string(), lo, hi));
    }
    Ok(out)
}

/// Evaluates `name = expr` bindings in order; later ones may use earlier ones.
fn eval_bindings(text: &str) -> Result<Vec<(String, Monomial)>> {
    let mut out: Vec<(String, Monomial)> = Vec::new();
    for (name, e) in parse_bindings(text)? {
        let m = eval_closed(&e, &out)?.to_monomial()?;
        out.push((name, m));
    }
    Ok(out)
}

fn options_for(spec: &IdentitySpec, args: &VerifyArgs, explicit: bool) -> Result<VerifyOptions> {
    let mut opts = VerifyOptions {
        jobs: args.jobs,
        ..Default::default()
    };
    if let Some(r) = &args.range {
        for (name, lo, hi) in parse_ranges(r)? {
            if spec.int_param(&name).is_some() {
                opts.ranges.push((name, lo, hi));
            } else if explicit {
                return Err(Error::Unknown {
                    kind: "integer parameter",
                    name: format!("{} (in {})", name, spec.id),
                });
            }
        }
    }
    if let Some(b) = &args.bind {
        let mut kept = Vec::new();
        for (name, e) in parse_bindings(b)? {
            if spec.params.contains(&name) {
                kept.push((name, e));
            } else if explicit {
                return Err(Error::Unknown {
                    kind: "parameter",
                    name: format!("{} (in {})", name, spec.id),
                });
            }
        }
        if !kept.is_empty() {
            opts.bindings = Some(kept);
        }
    }
    if let Some(t) = args.trunc {
        match spec.mode {
            Mode::Truncated(_) => opts.trunc = Some(t),
            Mode::Exact if explicit => {
                return Err(Error::Eval(format!(
                    "{} is exact; --trunc does not apply",
                    spec.id
                )));
            }
            Mode::Exact => {}
        }
    }
    Ok(opts)
}

pub fn verify(args: &VerifyArgs) -> u8 {
    let explicit = !(args.ids.is_empty() || args.ids.iter().any(|i| i == "all"));
    let pool = match &args.file {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Error::Eval(format!("cannot read {}: {}", path.display(), e)))
            .and_then(|t| parse_catalog(&t)),
        None => catalog(),
    };
    let pool = match pool {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let specs = if explicit {
        let pick = |id: &String| {
            pool.iter()
                .find(|s| &s.id == id)
                .cloned()
                .ok_or_else(|| Error::Unknown {
                    kind: "identity",
                    name: id.clone(),
                })
        };
        match args.ids.iter().map(pick).collect::<Result<Vec<_>>>() {
            Ok(s) => s,
            Err(e) => return config_error(e),
        }
    } else {
        pool
    };
    let opts = match specs
        .iter()
        .map(|s| options_for(s, args, explicit))
        .collect::<Result<Vec<_>>>()
    {
        Ok(o) => o,
        Err(e) => return config_error(e),
    };
    let mut reports: Vec<Report> = Vec::new();
    for (spec, o) in specs.iter().zip(&opts) {
        match verify_identity(spec, o) {
            Ok(mut r) => {
                if args.no_timing {
                    r.elapsed_ms = 0;
                }
                if args.format == Format::Human {
                    print!("{}", report::human(&r, !args.no_timing));
                }
                reports.push(r);
            }
            Err(e) => return config_error(e),
        }
    }
    match args.format {
        Format::Human => {
            let failed = reports.iter().filter(|r| !r.passed()).count();
            println!("{} identities, {} failed", reports.len(), failed);
        }
        Format::Json => println!("{}", report::json(&reports)),
        Format::Csv => print!("{}", report::csv(&reports)),
    }
    if let Some(path) = &args.json {
        if let Err(e) = fs::write(path, format!("{}\n", report::json(&reports))) {
            return config_error(format!("cannot write {}: {}", path.display(), e));
        }
    }
    if reports.iter().all(Report::passed) {
        PASS
    } else {
        FAIL
    }
}

/// Fallback values for parameters a seed needs but the user did not bind.
const DEFAULT_BINDINGS: &str = "a = 4/9*q^2, k = q^5, rho1 = q, rho2 = -3*q^2, delta = -q";

fn pair_bindings(
    user: &Option<String>,
    extra: &[(String, Monomial)],
    required: &[String],
) -> Result<Bindings> {
    let mut b: Bindings = Bindings::new();
    for (k, v) in eval_bindings(DEFAULT_BINDINGS)? {
        if required.contains(&k) {
            b.insert(k, v);
        }
    }
    for (k, v) in extra {
        b.insert(k.clone(), v.clone());
    }
    if let Some(text) = user {
        for (k, v) in eval_bindings(text)? {
            b.insert(k, v);
        }
    }
    Ok(b)
}

fn show_bindings(b: &Bindings) -> String {
    b.iter()
        .map(|(k, v)| format!("{}={}", k, v))
        .collect::<Vec<_>>()
        .join(", ")
}

fn eval_with(text: &str, b: &Bindings) -> Result<Monomial> {
    let env: Vec<(String, Monomial)> = b.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    eval_closed(&parse_expr(text)?, &env)?.to_monomial()
}

fn relation_lines(report: &wptree_core::wp_pairs::RelationReport) -> u8 {
    for c in &report.checks {
        if c.pass {
            println!("  n={} ok", c.n);
        } else {
            println!(
                "  n={} FAIL: beta = {}, relation sum = {}",
                c.n, c.beta, c.sum
            );
        }
    }
    if report.passed() {
        println!("relation holds for {}", report.word);
        PASS
    } else {
        println!("relation fails for {}", report.word);
        FAIL
    }
}

pub fn pair(cmd: PairCommand) -> u8 {
    match cmd {
        PairCommand::Check {
            seed: id,
            bind,
            nmax,
        } => {
            let run = || -> Result<u8> {
                let p = seed(&id)?;
                let b = pair_bindings(&bind, &[], &p.required)?;
                println!("{} with {}", p.word, show_bindings(&b));
                Ok(relation_lines(&check_wp_relation(&p, &b, nmax)?))
            };
            run().unwrap_or_else(config_error)
        }
        PairCommand::Derive {
            seed: id,
            word,
            rho1,
            rho2,
            bind,
            check,
            compare,
            nmax,
        } => {
            let run = || -> Result<u8> {
                let p = seed(&id)?;
                let letters: Vec<char> = word.chars().filter(|c| *c != '.').collect();
                if let Some(c) = letters.iter().find(|c| **c != 'a' && **c != 'b') {
                    return Err(Error::Unknown {
                        kind: "construct",
                        name: c.to_string(),
                    });
                }
                let a_steps = letters.iter().filter(|c| **c == 'a').count();
                for (name, list) in [("--rho1", &rho1), ("--rho2", &rho2)] {
                    if a_steps > 0 && list.len() != 1 && list.len() != a_steps {
                        return Err(Error::Eval(format!(
                            "{} needs one value or one per `a` step ({}), got {}",
                            name,
                            a_steps,
                            list.len()
                        )));
                    }
                }
                let mut required = p.required.clone();
                if let Some(c) = &compare {
                    required.extend(seed(c)?.required);
                }
                let base = pair_bindings(&bind, &[], &required)?;
                let mut extra = Vec::new();
                if rho1.len() == 1 && rho2.len() == 1 {
                    extra.push(("rho1".to_string(), eval_with(&rho1[0], &base)?));
                    extra.push(("rho2".to_string(), eval_with(&rho2[0], &base)?));
                }
                let b = pair_bindings(&bind, &extra, &required)?;
                let mut steps = Vec::new();
                let mut seen = 0;
                for c in &letters {
                    if *c == 'b' {
                        steps.push(Step::B);
                        continue;
                    }
                    let pick = |l: &Vec<String>| l.get(seen).or_else(|| l.first()).cloned();
                    let (r1, r2) = match (pick(&rho1), pick(&rho2)) {
                        (Some(x), Some(y)) => (x, y),
                        _ => return Err(Error::MissingBinding("rho1/rho2 for an `a` step".into())),
                    };
                    steps.push(Step::A(eval_with(&r1, &b)?, eval_with(&r2, &b)?));
                    seen += 1;
                }
                let d = derive(&p, &steps)?;
                println!("{} with {}", d.word, show_bindings(&b));
                let mut code = PASS;
                if let Some(c) = &compare {
                    match termwise_eq(&d, &seed(c)?, &b, nmax)? {
                        None => println!("termwise equal to {} for n <= {}", c, nmax),
                        Some(Mismatch::Alpha(n)) => {
                            println!("differs from {} at alpha_{}", c, n);
                            code = FAIL;
                        }
                        Some(Mismatch::Beta(n)) => {
                            println!("differs from {} at beta_{}", c, n);
                            code = FAIL;
                        }
                    }
                }
                if check {
                    code = code.max(relation_lines(&check_wp_relation(&d, &b, nmax)?));
                }
                Ok(code)
            };
            run().unwrap_or_else(config_error)
        }
    }
}

fn burge_path(path: &str) -> Result<BurgePair> {
    let (id, word) = path.split_once('.').unwrap_or((path, ""));
    apply_word(&burge_seed(id)?, &parse_word(word)?)
}

pub fn burge(cmd: BurgeCommand) -> u8 {
    let BurgeCommand::Derive {
        seed: id,
        word,
        check,
        compare,
        identity,
        nmax,
        mmax,
    } = cmd;
    let run = || -> Result<u8> {
        let spec = identity.as_deref().map(find).transpose()?;
        if let Some(s) = &spec {
            for p in &s.ints {
                if p.name != "N" && p.name != "M" {
                    return Err(Error::Eval(format!(
                        "{} has integer parameter {} besides N and M",
                        s.id, p.name
                    )));
                }
            }
        }
        let other = compare.as_deref().map(burge_path).transpose()?;
        let p = apply_word(&burge_seed(&id)?, &parse_word(&word)?)?;
        println!("{} with offsets ({}, {})", p.word, p.a, p.b);
        let mut code = PASS;
        if check {
            let r = check_burge_relation(&p, nmax, mmax)?;
            match r.first_failure() {
                None => println!("relation holds for N <= {}, M <= {}", nmax, mmax),
                Some(c) => {
                    println!(
                        "relation fails at N={}, M={}: B = {}, A side = {}",
                        c.n, c.m, c.lhs, c.rhs
                    );
                    code = FAIL;
                }
            }
        }
        if let Some(o) = &other {
            let mut bad = None;
            'grid: for n in 0..=nmax {
                for m in 0..=mmax {
                    if !p.b_term(n, m)?.ratio_eq(&o.b_term(n, m)?) {
                        bad = Some((n, m));
                        break 'grid;
                    }
                }
            }
            match bad {
                None => println!(
                    "B values equal those of {} for N <= {}, M <= {}",
                    o.word, nmax, mmax
                ),
                Some((n, m)) => {
                    println!("B values differ from {} at N={}, M={}", o.word, n, m);
                    code = FAIL;
                }
            }
        }
        if let Some(s) = &spec {
            let mut bad = None;
            'grid2: for n in 0..=nmax {
                for m in 0..=mmax {
                    let ints: Vec<(String, i64)> = s
                        .ints
                        .iter()
                        .map(|p| (p.name.clone(), if p.name == "N" { n } else { m }))
                        .collect();
                    if s.ints.iter().all(|p| p.name != "M") && m > 0 {
                        continue;
                    }
                    if let Some(Sides::Exact(l, r)) = eval_sides(s, &[], &ints, None)? {
                        let a = LaurentRatio::from_poly(p.a_side(n, m)?);
                        if !p.b_term(n, m)?.ratio_eq(&l) || !a.ratio_eq(&r) {
                            bad = Some((n, m));
                            break 'grid2;
                        }
                    }
                }
            }
            match bad {
                None => println!("relation is {} for N <= {}, M <= {}", s.id, nmax, mmax),
                Some((n, m)) => {
                    println!("relation differs from {} at N={}, M={}", s.id, n, m);
                    code = FAIL;
                }
            }
        }
        Ok(code)
    };
    run().unwrap_or_else(config_error)
}

fn monomials(v: Value, what: &str) -> Result<Vec<Monomial>> {
    match v {
        Value::List(xs) => xs.iter().map(Value::to_monomial).collect(),
        other => Err(Error::Eval(format!(
            "{} must be a list, got {}",
            what, other
        ))),
    }
}

pub fn classify(args: &ClassifyArgs) -> u8 {
    let run = || -> Result<String> {
        let binds = match &args.bind {
            Some(b) => eval_bindings(b)?,
            None => Vec::new(),
        };
        let (name, call) = match parse_expr(&args.spec)? {
            Expr::Call(n, a) if (n == "phi" || n == "W") && a.len() == 4 => (n, a),
            _ => {
                return Err(Error::Eval(
                    "expected phi([upper], [lower], base, z) or W(a, [tail], base, z)".into(),
                ))
            }
        };
        let ev = |e: &Expr| eval_closed(e, &binds);
        let base = ev(&call[2])?.to_monomial()?;
        let z = ev(&call[3])?.to_monomial()?;
        let spec = if name == "phi" {
            PhiSpec::new(
                monomials(ev(&call[0])?, "upper")?,
                monomials(ev(&call[1])?, "lower")?,
                base,
                z,
                Terms::Terminating,
            )?
        } else {
            WSpec {
                a1: ev(&call[0])?.to_monomial()?,
                tail: monomials(ev(&call[1])?, "tail")?,
                base,
                argument: z,
                terms: Terms::Terminating,
            }
            .desugar()?
        };
        Ok(classify_poised(&spec).to_string())
    };
    match run() {
        Ok(c) => {
            println!("{}", c);
            PASS
        }
        Err(e) => config_error(e),
    }
}
