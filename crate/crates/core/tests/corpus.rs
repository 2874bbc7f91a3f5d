use wptree_core::corpus::{
    catalog, eval_closed, eval_sides, find, parse_bindings, parse_catalog, parse_expr,
    parse_identity, verify_identity, Expr, Mode, Sides, VerifyOptions,
};
use wptree_core::{Error, LaurentRatio};

fn closed(text: &str) -> LaurentRatio {
    eval_closed(&parse_expr(text).unwrap(), &[])
        .unwrap()
        .to_ratio()
        .unwrap()
}

fn count_calls(e: &Expr, name: &str) -> usize {
    match e {
        Expr::Call(n, args) => {
            (n == name) as usize + args.iter().map(|a| count_calls(a, name)).sum::<usize>()
        }
        Expr::List(xs) => xs.iter().map(|a| count_calls(a, name)).sum(),
        Expr::Neg(x) => count_calls(x, name),
        Expr::Bin(_, l, r) | Expr::Cmp(_, l, r) | Expr::Index(l, r) => {
            count_calls(l, name) + count_calls(r, name)
        }
        _ => 0,
    }
}

fn ranges(list: &[(&str, i64, i64)]) -> VerifyOptions {
    VerifyOptions {
        ranges: list
            .iter()
            .map(|(n, lo, hi)| (n.to_string(), *lo, *hi))
            .collect(),
        ..Default::default()
    }
}

#[test]
fn qbin_two_one() {
    assert_eq!(closed("qbin(2,1)"), closed("1 + q"));
}

#[test]
fn delta_of_nonzero_is_zero() {
    assert!(closed("delta(3)").is_zero());
    assert_eq!(closed("delta(0)"), LaurentRatio::one());
}

#[test]
fn generalized_binomial_conventions() {
    assert!(closed("qbin(3, -1)").is_zero());
    assert!(closed("qbin(2, 3)").is_zero());
    assert_eq!(
        closed("qbin(4, 2, q^2)"),
        closed("1 + q^2 + 2*q^4 + q^6 + q^8")
    );
}

#[test]
fn bilateral_sum_flags_live_boundary() {
    let err = eval_closed(&parse_expr("bsum(j, -1, 1, qpow(j^2))").unwrap(), &[]).unwrap_err();
    assert!(err.to_string().contains("boundary"), "{}", err);
}

#[test]
fn stanza_has_two_sums() {
    let s = find("eq4.1").unwrap();
    assert_eq!(count_calls(&s.lhs, "sum") + count_calls(&s.rhs, "bsum"), 2);
    assert_eq!(s.ints.len(), 1);
    assert_eq!(s.mode, Mode::Exact);
}

#[test]
fn unclosed_paren_points_at_opening() {
    match parse_expr("sum(i,0,N, qpow(i^2)") {
        Err(Error::Parse { line, col, msg }) => {
            assert_eq!((line, col), (1, 4));
            assert!(msg.contains("unbalanced"), "{}", msg);
        }
        other => panic!("expected a parse error, got {:?}", other),
    }
}

#[test]
fn unknown_names_are_rejected() {
    let bad = "identity \"x\" {\n  int N range 0..2\n  lhs qpow(K)\n  rhs 1\n}\n";
    assert!(matches!(
        parse_identity(bad),
        Err(Error::Unknown { kind: "symbol", .. })
    ));
    let bad = "identity \"x\" {\n  int N range 0..2\n  lhs qpw(N)\n  rhs 1\n}\n";
    assert!(matches!(
        parse_identity(bad),
        Err(Error::Unknown {
            kind: "builtin",
            ..
        })
    ));
}

#[test]
fn off_lattice_binding_is_rejected() {
    let text = "identity \"x\" {\n  param a\n  bind a = q^(1/2)\n  lhs a\n  rhs a\n}\n";
    assert!(matches!(parse_identity(text), Err(Error::Lattice(_))));
}

#[test]
fn first_polynomial_value() {
    let s = find("eq4.1").unwrap();
    match eval_sides(&s, &[], &[("N".into(), 2)], None)
        .unwrap()
        .unwrap()
    {
        Sides::Exact(l, r) => {
            let want = closed("1 + q + q^2 + q^4");
            assert_eq!(l, want);
            assert!(r.ratio_eq(&want));
        }
        other => panic!("{:?}", other),
    }
}

#[test]
fn doubly_bounded_spot_values() {
    let s = find("eq5.1").unwrap();
    for (n, m, want) in [
        (0, 0, "1"),
        (1, 1, "1 + 2*q + q^2"),
        (2, 1, "1 + 2*q + 2*q^2 + q^3 + q^4"),
    ] {
        match eval_sides(&s, &[], &[("N".into(), n), ("M".into(), m)], None)
            .unwrap()
            .unwrap()
        {
            Sides::Exact(l, r) => {
                assert_eq!(l, closed(want), "N={} M={}", n, m);
                assert!(r.ratio_eq(&l));
            }
            other => panic!("{:?}", other),
        }
    }
}

#[test]
fn catalog_is_large_and_unique() {
    let cat = catalog().unwrap();
    assert!(cat.len() >= 40, "{}", cat.len());
    let mut ids: Vec<_> = cat.iter().map(|s| s.id.clone()).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), cat.len());
    let s = find("eq7.24").unwrap();
    let names: Vec<_> = s.ints.iter().map(|p| p.name.as_str()).collect();
    assert_eq!(names, ["nu", "N", "M"]);
}

#[test]
fn unknown_identity() {
    let err = find("nosuch").unwrap_err();
    assert_eq!(err.to_string(), "unknown identity `nosuch`");
}

#[test]
fn print_parse_round_trip() {
    for s in catalog().unwrap() {
        let printed = s.to_string();
        let back =
            parse_identity(&printed).unwrap_or_else(|e| panic!("{}: {}\n{}", s.id, e, printed));
        assert_eq!(back, s, "{}", s.id);
        assert_eq!(back.to_string(), printed);
    }
}

#[test]
fn whole_catalog_text_round_trips() {
    let text: String = catalog()
        .unwrap()
        .iter()
        .map(|s| format!("{}\n", s))
        .collect();
    assert_eq!(parse_catalog(&text).unwrap(), catalog().unwrap());
}

#[test]
fn small_sweeps_pass() {
    for id in ["eq4.1", "eq5.2", "eq5.8", "eq7.16", "eq2.5"] {
        let s = find(id).unwrap();
        let opts = match s.int_param("M") {
            Some(_) => ranges(&[("N", 0, 3), ("M", 0, 3)]),
            None => ranges(&[(s.ints[0].name.as_str(), 0, 3)]),
        };
        let r = verify_identity(&s, &opts).unwrap();
        assert!(r.passed(), "{}: {:?}", id, r.failures.first());
    }
}

fn mutated(id: &str, from: &str, to: &str) -> String {
    let text = find(id).unwrap().to_string();
    assert!(text.contains(from), "{} lacks {}", id, from);
    text.replacen(from, to, 1)
}

#[test]
fn exponent_mutations_are_detected() {
    for (id, from, to) in [
        ("eq4.1", "qpow(i^2)", "qpow(i^3)"),
        ("eq5.1", "(5*j - 1)", "(5*j - 3)"),
        ("eq7.15", "(3*j + 1)", "(3*j + 3)"),
    ] {
        let spec = parse_identity(&mutated(id, from, to)).unwrap();
        let opts = match spec.int_param("M") {
            Some(_) => ranges(&[("N", 0, 3), ("M", 0, 3)]),
            None => ranges(&[("N", 0, 3)]),
        };
        let r = verify_identity(&spec, &opts).unwrap();
        assert!(!r.passed(), "{} mutation survived", id);
        let f = &r.failures[0];
        assert!(f.lhs.is_some() && f.rhs.is_some(), "{}: {:?}", id, f.error);
    }
}

#[test]
fn binding_override_replaces_first_set() {
    let s = find("eq2.5").unwrap();
    let opts = VerifyOptions {
        ranges: vec![("n".into(), 0, 2)],
        bindings: Some(parse_bindings("a = 4*q^2, r1 = -q").unwrap()),
        ..Default::default()
    };
    let r = verify_identity(&s, &opts).unwrap();
    assert_eq!(r.instances(), 3);
    assert!(r.passed(), "{:?}", r.failures);
    assert!(
        r.results[0]
            .instance
            .iter()
            .any(|(k, v)| k == "a" && v == "4*q^2"),
        "{:?}",
        r.results[0]
    );
}

#[test]
fn override_errors() {
    let s = find("eq4.1").unwrap();
    assert!(matches!(
        verify_identity(&s, &ranges(&[("M", 0, 1)])),
        Err(Error::Unknown { .. })
    ));
    let opts = VerifyOptions {
        trunc: Some(10),
        ..Default::default()
    };
    assert!(verify_identity(&s, &opts).is_err());
}

#[test]
fn truncated_order_override() {
    let s = find("eq5.11").unwrap();
    let opts = VerifyOptions {
        trunc: Some(15),
        ..Default::default()
    };
    let r = verify_identity(&s, &opts).unwrap();
    assert_eq!(r.mode, Mode::Truncated(15));
    assert!(r.passed());
}

#[test]
fn truncated_mutation_is_detected() {
    let spec = parse_identity(&mutated("eq5.11", "qpow(i^2)", "qpow(i^2 + i)")).unwrap();
    let r = verify_identity(
        &spec,
        &VerifyOptions {
            trunc: Some(12),
            ..Default::default()
        },
    )
    .unwrap();
    assert!(!r.passed());
}

#[test]
fn reports_are_deterministic_across_jobs() {
    let s = find("eq5.3").unwrap();
    let mut a = verify_identity(
        &s,
        &VerifyOptions {
            jobs: Some(1),
            ..Default::default()
        },
    )
    .unwrap();
    let mut b = verify_identity(
        &s,
        &VerifyOptions {
            jobs: Some(4),
            ..Default::default()
        },
    )
    .unwrap();
    a.elapsed_ms = 0;
    b.elapsed_ms = 0;
    assert_eq!(a, b);
}
