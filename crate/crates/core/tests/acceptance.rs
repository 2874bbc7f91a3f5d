//! Exit gate: one pass/fail line per acceptance criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::BigRational;
use wptree_core::burge::{
    apply_transform_81, apply_word, burge_seed, check_burge_relation, parse_word, BurgePair,
};
use wptree_core::corpus::{
    eval_sides, find, parse_identity, verify_identity, IdentitySpec, Report, Sides, VerifyOptions,
};
use wptree_core::qlaurent::exp;
use wptree_core::wp_pairs::{
    check_wp_relation, construct_a, construct_b, seed, termwise_eq, Bindings, WPPair, SEED_IDS,
};
use wptree_core::{Exp, LaurentPoly, LaurentRatio, Monomial, Series};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn m(c: (i64, i64), e: (i64, i64)) -> Monomial {
    Monomial::new(BigRational::new(c.0.into(), c.1.into()), exp(e.0, e.1))
}

fn qp(n: i64) -> Monomial {
    m((1, 1), (n, 1))
}

fn binds(list: &[(&str, Monomial)]) -> Bindings {
    list.iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn pair_sets() -> Vec<Bindings> {
    vec![
        binds(&[
            ("a", qp(2)),
            ("k", m((9, 4), (4, 1))),
            ("rho1", m((-1, 1), (0, 1))),
            ("rho2", m((2, 1), (1, 1))),
            ("delta", m((3, 1), (1, 2))),
        ]),
        binds(&[
            ("a", m((4, 9), (2, 1))),
            ("k", qp(5)),
            ("rho1", qp(1)),
            ("rho2", m((-3, 1), (2, 1))),
            ("delta", m((-1, 1), (1, 1))),
        ]),
        binds(&[
            ("a", qp(1)),
            ("k", m((1, 4), (3, 1))),
            ("rho1", m((5, 2), (0, 1))),
            ("rho2", m((2, 1), (3, 1))),
            ("delta", m((2, 1), (2, 1))),
        ]),
    ]
}

fn opts(ranges: &[(&str, i64, i64)], trunc: Option<i64>) -> VerifyOptions {
    VerifyOptions {
        ranges: ranges
            .iter()
            .map(|(n, lo, hi)| (n.to_string(), *lo, *hi))
            .collect(),
        trunc,
        ..Default::default()
    }
}

fn run(spec: &IdentitySpec, o: &VerifyOptions) -> Result<Report, String> {
    let r = verify_identity(spec, o).map_err(|e| format!("{}: {}", spec.id, e))?;
    match r.failures.first() {
        None => Ok(r),
        Some(f) => Err(format!(
            "{} fails at {:?}: {}",
            spec.id,
            f.instance,
            f.error.clone().unwrap_or_else(|| "sides differ".into())
        )),
    }
}

fn verify_ids(
    ids: &[&str],
    ranges: &[(&str, i64, i64)],
    trunc: Option<i64>,
) -> Result<usize, String> {
    let mut total = 0;
    for id in ids {
        let spec = find(id).map_err(|e| e.to_string())?;
        let ranges: Vec<_> = ranges
            .iter()
            .filter(|(n, _, _)| spec.int_param(n).is_some())
            .cloned()
            .collect();
        total += run(&spec, &opts(&ranges, trunc))?.instances();
    }
    Ok(total)
}

fn exact_sides(
    spec: &IdentitySpec,
    ints: &[(&str, i64)],
) -> Result<(LaurentRatio, LaurentRatio), String> {
    let ints: Vec<(String, i64)> = ints.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    match eval_sides(spec, &[], &ints, None).map_err(|e| e.to_string())? {
        Some(Sides::Exact(l, r)) => Ok((l, r)),
        other => Err(format!(
            "{}: unexpected sides {:?}",
            spec.id,
            other.is_some()
        )),
    }
}

fn poly(r: &LaurentRatio) -> Result<LaurentPoly, String> {
    r.to_poly()
        .ok_or_else(|| format!("{} is not a polynomial", r))
}

fn criterion_1() -> Outcome {
    let n = verify_ids(&["eq4.1", "eq4.2"], &[("N", 0, 12)], None)?;
    Ok(format!("{} instances, N in 0..12", n))
}

fn criterion_2() -> Outcome {
    let ids = [
        "eq5.1", "eq5.2", "eq5.3", "eq5.4", "eq5.6", "eq5.7", "eq5.8", "eq5.10", "eq5.12",
    ];
    let n = verify_ids(&ids, &[("N", 0, 6), ("M", 0, 6)], None)?;
    Ok(format!(
        "{} identities, {} instances, N, M in 0..6",
        ids.len(),
        n
    ))
}

fn criterion_3() -> Outcome {
    let sets = pair_sets();
    let mut checks = 0;
    for id in SEED_IDS {
        let p = seed(id).map_err(|e| e.to_string())?;
        for (i, b) in sets.iter().enumerate() {
            let r =
                check_wp_relation(&p, b, 8).map_err(|e| format!("{} set {}: {}", id, i + 1, e))?;
            if let Some(c) = r.first_failure() {
                return Err(format!("{} set {} fails at n = {}", id, i + 1, c.n));
            }
            checks += r.checks.len();
        }
    }
    Ok(format!(
        "8 seeds x 3 binding sets, n <= 8, {} relation checks",
        checks
    ))
}

fn same(x: &WPPair, y: &WPPair, b: &Bindings, n: i64) -> Result<(), String> {
    match termwise_eq(x, y, b, n).map_err(|e| e.to_string())? {
        None => Ok(()),
        Some(mm) => Err(format!("{} vs {} differ at {:?}", x.word, y.word, mm)),
    }
}

fn criterion_4() -> Outcome {
    let sets = pair_sets();
    let unit = seed("unit").map_err(|e| e.to_string())?;
    let singh = seed("singh").map_err(|e| e.to_string())?;
    for b in &sets {
        let d = construct_a(&unit, &b["rho1"], &b["rho2"]).map_err(|e| e.to_string())?;
        same(&d, &singh, b, 6)?;
    }
    for id in SEED_IDS {
        let p = seed(id).map_err(|e| e.to_string())?;
        for b in &sets {
            same(&construct_b(&construct_b(&p)), &p, b, 6)?;
        }
    }
    let p31 = seed("p31").map_err(|e| e.to_string())?;
    for b in &sets {
        same(&construct_b(&p31), &unit, b, 6)?;
    }
    Ok("unit.a = singh, b.b = id on 8 seeds, p31.b = unit; n <= 6, 3 binding sets".into())
}

fn criterion_5() -> Outcome {
    let sets = pair_sets();
    let (r1, r2) = (m((3, 5), (0, 1)), m((-7, 2), (1, 1)));
    let cases: [(&str, char, &[&str]); 9] = [
        ("unit", 'a', &["eq2.5"]),
        ("singh", 'a', &["eq2.9"]),
        ("singh", 'b', &["eq2.12"]),
        ("p4", 'a', &["eq3.13"]),
        ("p4", 'b', &["eq3.14"]),
        ("bressoud2", 'a', &["eq4.9", "eq4.11"]),
        ("bressoud2", 'b', &["eq4.10", "eq4.12"]),
        ("bressoud3", 'a', &["eq4.9", "eq4.11"]),
        ("bressoud3", 'b', &["eq4.10", "eq4.12"]),
    ];
    let mut cases = cases.to_vec();
    cases.push(("watson", 'b', &["eq6.4"]));
    let mut done = Vec::new();
    for (id, step, eqs) in cases {
        let p = seed(id).map_err(|e| e.to_string())?;
        let d = if step == 'a' {
            construct_a(&p, &r1, &r2).map_err(|e| e.to_string())?
        } else {
            construct_b(&p)
        };
        for (i, b) in sets.iter().take(2).enumerate() {
            let r = check_wp_relation(&d, b, 4)
                .map_err(|e| format!("{} set {}: {}", d.word, i + 1, e))?;
            if let Some(c) = r.first_failure() {
                return Err(format!("{} set {} fails at n = {}", d.word, i + 1, c.n));
            }
        }
        for eq in eqs {
            let spec = find(eq).map_err(|e| e.to_string())?;
            if spec.bindings.len() < 2 {
                return Err(format!("{} has fewer than two binding sets", eq));
            }
            run(&spec, &opts(&[("n", 0, 4)], None))?;
        }
        done.push(format!("{}=>{}", d.word, eqs.join("/")));
    }
    Ok(format!("n <= 4, two binding sets: {}", done.join(", ")))
}

fn same_burge(x: &BurgePair, y: &BurgePair, nm: i64) -> Result<(), String> {
    for j in 0..=nm {
        let (a, b) = (
            x.a_term(j).map_err(|e| e.to_string())?,
            y.a_term(j).map_err(|e| e.to_string())?,
        );
        if a != b {
            return Err(format!("{} vs {}: A_{} differs", x.word, y.word, j));
        }
    }
    for n in 0..=nm {
        for mm in 0..=nm {
            let (a, b) = (
                x.b_term(n, mm).map_err(|e| e.to_string())?,
                y.b_term(n, mm).map_err(|e| e.to_string())?,
            );
            if !a.ratio_eq(&b) {
                return Err(format!(
                    "{} vs {}: B({}, {}) differs",
                    x.word, y.word, n, mm
                ));
            }
        }
    }
    Ok(())
}

fn derived(path: &str) -> Result<BurgePair, String> {
    let (id, word) = path.split_once('.').unwrap_or((path, ""));
    let s = burge_seed(id).map_err(|e| e.to_string())?;
    apply_word(&s, &parse_word(word).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

/// Derived `B` against the left side and the relation sum against the right.
fn matches_identity(
    p: &BurgePair,
    id: &str,
    extra: &[(&str, i64)],
    nmax: i64,
    mmax: i64,
) -> Result<(), String> {
    let spec = find(id).map_err(|e| e.to_string())?;
    for n in 0..=nmax {
        for mm in 0..=mmax {
            let mut ints = extra.to_vec();
            ints.push(("N", n));
            ints.push(("M", mm));
            let (l, r) = exact_sides(&spec, &ints)?;
            let b = p.b_term(n, mm).map_err(|e| e.to_string())?;
            let a = LaurentRatio::from_poly(p.a_side(n, mm).map_err(|e| e.to_string())?);
            if !b.ratio_eq(&l) || !a.ratio_eq(&r) {
                return Err(format!(
                    "{} differs from {} {:?} at N={}, M={}",
                    p.word, id, extra, n, mm
                ));
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    for id in ["B1", "B2", "B3"] {
        let p = derived(id)?;
        let r = check_burge_relation(&p, 6, 6).map_err(|e| e.to_string())?;
        if let Some(c) = r.first_failure() {
            return Err(format!("{} relation fails at N={}, M={}", id, c.n, c.m));
        }
    }
    for (path, id) in [
        ("B1.74", "eq7.11"),
        ("B2.74", "eq7.15"),
        ("B3.74", "eq7.22"),
        ("B3.74.73", "eq7.23"),
    ] {
        matches_identity(&derived(path)?, id, &[], 5, 5)?;
    }
    for id in ["B1", "B2", "B3"] {
        let p = derived(id)?;
        same_burge(&apply_transform_81(&apply_transform_81(&p)), &p, 5)?;
    }
    verify_ids(
        &["eq7.24", "eq8.3"],
        &[("nu", 1, 3), ("N", 0, 4), ("M", 0, 4)],
        None,
    )?;
    let mut chain = String::from("B3.74");
    for nu in 1..=3 {
        chain.push_str(".73");
        matches_identity(&derived(&chain)?, "eq7.24", &[("nu", nu)], 4, 4)?;
        let via = format!("B3.74{}.74", ".73".repeat(nu as usize - 1));
        matches_identity(&derived(&via)?, "eq8.3", &[("nu", nu)], 4, 4)?;
    }
    Ok(
        "seed relations N, M <= 6; 74/73 words give eq7.11/7.15/7.22/7.23; 81.81 = id; \
        eq7.24 and eq8.3 pass and equal their chains for nu = 1..3, N, M <= 4"
            .into(),
    )
}

fn criterion_7() -> Outcome {
    let q_inv = Exp::from_integer(-1);
    let s51 = find("eq5.1").map_err(|e| e.to_string())?;
    let s57 = find("eq5.7").map_err(|e| e.to_string())?;
    for n in 0..=4 {
        for mm in 0..=4 {
            let a = exact_sides(&s51, &[("N", n), ("M", mm)])?;
            let b = exact_sides(&s57, &[("N", n), ("M", mm)])?;
            for (x, y) in [(&a.0, &b.0), (&a.1, &b.1)] {
                let flipped = poly(x)?
                    .subs_pow(q_inv)
                    .shift(Exp::from_integer(2 * n * mm));
                if flipped != poly(y)? {
                    return Err(format!("eq5.1(1/q) q^(2NM) != eq5.7 at N={}, M={}", n, mm));
                }
            }
        }
    }
    let s723 = find("eq7.23").map_err(|e| e.to_string())?;
    let s56 = find("eq5.6").map_err(|e| e.to_string())?;
    for n in 0..=5 {
        for mm in 0..=5 {
            let a = exact_sides(&s723, &[("N", n), ("M", mm)])?;
            let b = exact_sides(&s56, &[("N", n), ("M", mm)])?;
            for (x, y) in [(&a.0, &b.0), (&a.1, &b.1)] {
                if poly(x)?.subs_pow(Exp::from_integer(2)) != poly(y)? {
                    return Err(format!("eq7.23(q^2) != eq5.6 at N={}, M={}", n, mm));
                }
            }
        }
    }
    let s724 = find("eq7.24").map_err(|e| e.to_string())?;
    let lhs = |nu: i64, n: i64, mm: i64| -> Result<LaurentPoly, String> {
        poly(&exact_sides(&s724, &[("nu", nu), ("N", n), ("M", mm)])?.0)
    };
    let mut shifts = Vec::new();
    for n in 0..=3 {
        for mm in 0..=3 {
            let p = lhs(1, n, mm)?;
            let s = p.min_exp().unwrap() + p.max_exp().unwrap();
            if p.subs_pow(q_inv).shift(s) != p {
                return Err(format!(
                    "eq7.24 at nu=1, N={}, M={} is not self-dual",
                    n, mm
                ));
            }
            shifts.push((n, mm, s));
        }
    }
    let c = shifts
        .iter()
        .find(|(n, mm, _)| *n == 1 && *mm == 1)
        .unwrap()
        .2;
    if shifts
        .iter()
        .any(|(n, mm, s)| *s != c * Exp::from_integer(n * mm))
    {
        return Err(format!("shifts {:?} are not a multiple of NM", shifts));
    }
    for nu in 1..=2 {
        for n in 0..=3 {
            for mm in 0..=3 {
                let p = lhs(nu, n, mm)?;
                if p.subs_pow(q_inv).shift(c * Exp::from_integer(n * mm)) != p {
                    return Err(format!(
                        "eq7.24 shift fails at nu={}, N={}, M={}",
                        nu, n, mm
                    ));
                }
            }
        }
    }
    Ok(format!(
        "eq5.1(1/q) q^(2NM) = eq5.7; eq7.23(q^2) = eq5.6; eq7.24(1/q) q^({}NM) = eq7.24",
        c
    ))
}

fn criterion_8() -> Outcome {
    let ids = ["eq4.4", "eq5.5", "eq5.9", "eq5.11", "eq5.13", "eq7.26"];
    let mut total = 0;
    for t in [40, 60] {
        total += verify_ids(&ids, &[("nu", 2, 3)], Some(t))?;
    }
    let s = find("eq4.4").map_err(|e| e.to_string())?;
    if s.bindings.len() != 2 {
        return Err("eq4.4 needs two binding sets".into());
    }
    Ok(format!("{} instances agree modulo q^40 and q^60", total))
}

fn series(r: &LaurentRatio, prec: Exp) -> Result<Series, String> {
    r.to_series(prec).map_err(|e| e.to_string())
}

fn agree(x: &Series, y: &Series, cut: Exp) -> bool {
    x.poly().truncate(cut) == y.poly().truncate(cut)
}

fn criterion_9() -> Outcome {
    let cut = Exp::from_integer(20);
    let s719 = find("eq7.19").map_err(|e| e.to_string())?;
    let s720 = find("eq7.20").map_err(|e| e.to_string())?;
    let s721 = find("eq7.21").map_err(|e| e.to_string())?;
    let qq = |n: i64| LaurentRatio::poch(&Monomial::q(), &Monomial::q(), n).unwrap();
    for n in 0..=5 {
        let (l, r) = exact_sides(&s719, &[("N", n), ("M", 20)])?;
        let (fl, fr) = exact_sides(&s720, &[("N", n)])?;
        for (x, y) in [(&l, &fl), (&r, &fr)] {
            let lifted = series(&x.mul(&qq(2 * n)), cut)?;
            if !agree(&lifted, &series(y, cut)?, cut) {
                return Err(format!("eq7.19 at M=20 differs from eq7.20 at N={}", n));
            }
        }
    }
    for mm in 0..=4 {
        let (l, r) = exact_sides(&s719, &[("N", 20), ("M", mm)])?;
        let ints = vec![("M".to_string(), mm)];
        let (tl, tr) = match eval_sides(&s721, &[], &ints, Some(20)).map_err(|e| e.to_string())? {
            Some(Sides::Truncated { lhs, rhs, .. }) => (lhs, rhs),
            _ => return Err("eq7.21 did not evaluate in truncated mode".into()),
        };
        for (x, y) in [(&l, &tl), (&r, &tr)] {
            let lifted = series(&x.mul(&qq(mm)), cut)?;
            if !agree(&lifted, y, cut) {
                return Err(format!("eq7.19 at N=20 differs from eq7.21 at M={}", mm));
            }
        }
    }
    Ok("eq7.19(M=20)(q;q)_2N = eq7.20 for N <= 5; eq7.19(N=20)(q;q)_M = eq7.21 for M <= 4; mod q^20".into())
}

fn criterion_10() -> Outcome {
    let mut found = Vec::new();
    for (id, from, to) in [
        ("eq4.1", "qpow(i^2)", "qpow(i^3)"),
        ("eq5.1", "(5*j - 1)", "(5*j - 3)"),
        ("eq7.15", "(3*j + 1)", "(3*j + 3)"),
    ] {
        let text = find(id).map_err(|e| e.to_string())?.to_string();
        if !text.contains(from) {
            return Err(format!("{} has no `{}` to mutate", id, from));
        }
        let spec = parse_identity(&text.replacen(from, to, 1)).map_err(|e| e.to_string())?;
        let ranges: Vec<_> = [("N", 0, 3), ("M", 0, 3)]
            .into_iter()
            .filter(|(n, _, _)| spec.int_param(n).is_some())
            .collect();
        let r = verify_identity(&spec, &opts(&ranges, None)).map_err(|e| e.to_string())?;
        match r.failures.first() {
            Some(f) if f.lhs.is_some() && f.rhs.is_some() => {
                found.push(format!("{} at {:?}", id, f.instance))
            }
            Some(f) => {
                return Err(format!(
                    "{}: mutation raised {:?} without a counterexample",
                    id, f.error
                ))
            }
            None => {
                return Err(format!(
                    "{}: mutation `{}` -> `{}` went undetected",
                    id, from, to
                ))
            }
        }
    }
    Ok(format!("counterexamples: {}", found.join("; ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "polynomial Rogers-Ramanujan identities",
            "exact",
            criterion_1,
        ),
        ("doubly bounded identities", "exact", criterion_2),
        ("seed pair relations", "exact", criterion_3),
        ("construct coherence", "exact", criterion_4),
        ("derived pairs and transformations", "exact", criterion_5),
        ("Burge machinery", "exact", criterion_6),
        ("cross-substitution properties", "exact", criterion_7),
        (
            "truncated infinite identities",
            "mod q^40 and q^60",
            criterion_8,
        ),
        ("limit stitching", "mod q^20", criterion_9),
        ("mutation sensitivity", "exact", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, tol, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "criterion {:2} PASS [{}; {}] {} ({:.1}s)",
                i + 1,
                name,
                tol,
                detail,
                secs
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {:2} FAIL [{}; {}] {} ({:.1}s)",
                    i + 1,
                    name,
                    tol,
                    why,
                    secs
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
