use criterion::{black_box, criterion_group, criterion_main, Criterion};
use wptree_core::burge::{apply_word, burge_seed, parse_word};
use wptree_core::corpus::{find, verify_identity, VerifyOptions};
use wptree_core::wp_pairs::{check_wp_relation, seed, Bindings};
use wptree_core::{qbinom, Exp, LaurentRatio, Monomial, Series};

fn qbinomials(c: &mut Criterion) {
    let q = Monomial::q();
    c.bench_function("qbinom 40 20", |b| b.iter(|| qbinom(black_box(40), 20, &q)));
    let half = Monomial::q_pow(Exp::new(1, 2));
    c.bench_function("qbinom 30 12 half base", |b| {
        b.iter(|| qbinom(black_box(30), 12, &half))
    });
}

fn series(c: &mut Criterion) {
    let q = Monomial::q();
    c.bench_function("(q;q)_inf mod q^200", |b| {
        b.iter(|| Series::poch_inf(&q, &q, Exp::from_integer(black_box(200))).unwrap())
    });
    let r = LaurentRatio::poch(&q, &q, 12).unwrap().inv().unwrap();
    c.bench_function("1/(q;q)_12 to series mod q^100", |b| {
        b.iter(|| r.to_series(Exp::from_integer(black_box(100))).unwrap())
    });
}

fn identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    for id in ["eq4.1", "eq5.1", "eq7.24", "eq5.11"] {
        let spec = find(id).unwrap();
        g.bench_function(id, |b| {
            b.iter(|| verify_identity(&spec, &VerifyOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn pairs(c: &mut Criterion) {
    let mut b: Bindings = Bindings::new();
    b.insert("a".into(), Monomial::q_pow(Exp::from_integer(2)));
    b.insert("k".into(), Monomial::q_pow(Exp::from_integer(5)));
    b.insert("rho1".into(), Monomial::q());
    b.insert(
        "rho2".into(),
        Monomial::int(-3).mul(&Monomial::q_pow(Exp::from_integer(2))),
    );
    let singh = seed("singh").unwrap();
    let mut g = c.benchmark_group("pairs");
    g.sample_size(10);
    g.bench_function("singh relation n <= 6", |bn| {
        bn.iter(|| check_wp_relation(&singh, &b, 6).unwrap())
    });
    let b3 = burge_seed("B3").unwrap();
    let word = parse_word("74.73.73").unwrap();
    g.bench_function("B3.74.73.73 B(4, 4)", |bn| {
        bn.iter(|| apply_word(&b3, &word).unwrap().b_term(4, 4).unwrap())
    });
    g.finish();
}

criterion_group!(benches, qbinomials, series, identities, pairs);
criterion_main!(benches);
