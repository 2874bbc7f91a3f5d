use wptree_core::burge::{
    apply_transform_73, apply_transform_74, apply_transform_81, apply_word, burge_seed,
    check_burge_relation, parse_word, q_kernel, swap_sym, BurgePair,
};
use wptree_core::qlaurent::exp;
use wptree_core::{qbinom, Error, LaurentPoly, LaurentRatio, Monomial};

fn poly(terms: &[(i64, i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(
        terms
            .iter()
            .map(|&(e, l, c)| (exp(e, l), num_rational::BigRational::from_integer(c.into()))),
    )
}

fn same_b(x: &BurgePair, y: &BurgePair, n_max: i64, m_max: i64) -> bool {
    (0..=n_max).all(|n| (0..=m_max).all(|m| x.b_term(n, m).unwrap() == y.b_term(n, m).unwrap()))
}

#[test]
fn kernel_examples() {
    assert_eq!(
        q_kernel(1, 1, 0, 0),
        poly(&[(0, 1, 1), (1, 1, 2), (2, 1, 1)])
    );
    assert!(q_kernel(2, 3, 3, 0).is_zero());
    assert!(q_kernel(2, 3, -3, 0).is_zero());
    for n in 0..4 {
        for m in 0..4 {
            for r in -3i64..4 {
                for s in -3..4 {
                    if n + m < (r - s).abs() {
                        continue;
                    }
                    assert_eq!(q_kernel(n, m, r, s), q_kernel(m, n, s, r));
                }
            }
        }
    }
}

#[test]
fn kernel_rewrite_standalone() {
    let q = Monomial::q();
    let lhs = q_kernel(2, 2, 1, 0);
    let mut rhs = LaurentPoly::zero();
    for i in 0..=2 {
        let w = qbinom(6 - i, 4, &q).mul_monomial(&Monomial::q_pow(exp(i * i, 1)));
        rhs = &rhs + &(&w * &q_kernel(2 - i, i, 1, 0));
    }
    assert_eq!(lhs, rhs);
}

#[test]
fn seed_values() {
    let b1 = burge_seed("B1").unwrap();
    assert!(b1.a_term(0).unwrap().is_one());
    assert_eq!(b1.a_term(2).unwrap(), poly(&[(0, 1, 2)]));
    let b2 = burge_seed("B2").unwrap();
    assert_eq!(
        b2.b_term(1, 1).unwrap(),
        LaurentRatio::from_poly(poly(&[(2, 1, -1), (3, 1, -1)]))
    );
    let b3 = burge_seed("B3").unwrap();
    let expect =
        qbinom(5, 2, &Monomial::q_pow(exp(1, 2))).mul_monomial(&Monomial::q_pow(exp(-1, 2)));
    assert_eq!(b3.b_term(1, 1).unwrap(), LaurentRatio::from_poly(expect));
    assert_eq!(
        b1.b_term(1, 1).unwrap(),
        LaurentRatio::from_poly(poly(&[(0, 1, -1), (2, 1, -1)]))
    );
    assert!(burge_seed("B9").is_err());
}

#[test]
fn seeds_satisfy_the_relation() {
    for id in ["B1", "B2", "B3"] {
        let p = burge_seed(id).unwrap();
        assert!(check_burge_relation(&p, 5, 5).unwrap().passed(), "{}", id);
    }
}

#[test]
fn transforms_preserve_the_relation() {
    let b3 = burge_seed("B3").unwrap();
    for word in ["74", "74.73", "73", "81", "81.82", "82", "74.74"] {
        let p = apply_word(&b3, &parse_word(word).unwrap()).unwrap();
        assert!(check_burge_relation(&p, 4, 4).unwrap().passed(), "{}", word);
    }
}

#[test]
fn degenerate_column() {
    let b2 = burge_seed("B2").unwrap();
    let t = apply_transform_73(&b2).unwrap();
    for n in 0..5 {
        assert_eq!(t.b_term(n, 0).unwrap(), b2.b_term(n, 0).unwrap());
    }
    let t = apply_transform_81(&b2);
    for n in 0..4 {
        let mut expect = LaurentRatio::zero();
        for i in 0..=n {
            let w = qbinom(n - i, n - i, &Monomial::q()).mul_monomial(&Monomial::q_pow(exp(i, 1)));
            expect = expect.add(&b2.b_term(i, -1).unwrap().mul(&LaurentRatio::from_poly(w)));
        }
        assert_eq!(t.b_term(n, 0).unwrap(), expect);
    }
}

#[test]
fn transform_81_is_an_involution() {
    for id in ["B1", "B2", "B3"] {
        let p = burge_seed(id).unwrap();
        let pp = apply_transform_81(&apply_transform_81(&p));
        assert_eq!((pp.a, pp.b), (p.a, p.b));
        assert!(same_b(&pp, &p, 4, 4), "{}", id);
        for j in 0..5 {
            assert_eq!(pp.a_term(j).unwrap(), p.a_term(j).unwrap());
        }
    }
}

#[test]
fn swap_is_an_involution() {
    let b1 = burge_seed("B1").unwrap();
    let s = swap_sym(&b1);
    assert!(check_burge_relation(&s, 4, 4).unwrap().passed());
    assert!(same_b(&swap_sym(&s), &b1, 4, 4));
}

#[test]
fn offsets_are_validated() {
    let b1 = burge_seed("B1").unwrap();
    let err = apply_word(&b1, &parse_word("82.73").unwrap()).unwrap_err();
    assert!(matches!(
        err,
        Error::Offsets {
            step: 2,
            a: 0,
            b: 1,
            ..
        }
    ));
    let t = apply_transform_74(&b1).unwrap();
    assert_eq!((t.a, t.b), (1, 1));
    assert!(parse_word("75").is_err());
}
