//! WP-Bailey pairs: the seed catalog, the two tree constructs and the
//! defining-relation checker.

mod seeds;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::qlaurent::{Exp, LaurentRatio, Monomial};

pub use seeds::{seed, SEED_IDS};

/// Parameter name to specialization value.
pub type Bindings = BTreeMap<String, Monomial>;

/// A term generator `(n, bindings) -> value`.
pub type Generator = Arc<dyn Fn(i64, &Bindings) -> Result<LaurentRatio> + Send + Sync>;

#[derive(Clone)]
pub struct WPPair {
    pub id: String,
    /// Construct path from the seed, e.g. `unit.a.b`.
    pub word: String,
    pub alpha: Generator,
    pub beta: Generator,
    pub required: Vec<String>,
    pub lattice: i64,
    pub reference: String,
}

impl fmt::Debug for WPPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WPPair")
            .field("id", &self.id)
            .field("word", &self.word)
            .field("required", &self.required)
            .field("lattice", &self.lattice)
            .finish()
    }
}

impl WPPair {
    pub fn new(
        id: &str,
        alpha: Generator,
        beta: Generator,
        required: &[&str],
        lattice: i64,
        reference: &str,
    ) -> Self {
        WPPair {
            id: id.to_string(),
            word: id.to_string(),
            alpha,
            beta,
            required: required.iter().map(|s| s.to_string()).collect(),
            lattice,
            reference: reference.to_string(),
        }
    }

    pub fn alpha(&self, n: i64, b: &Bindings) -> Result<LaurentRatio> {
        self.validate(b)?;
        (self.alpha)(n, b)
    }

    pub fn beta(&self, n: i64, b: &Bindings) -> Result<LaurentRatio> {
        self.validate(b)?;
        (self.beta)(n, b)
    }

    pub fn validate(&self, b: &Bindings) -> Result<()> {
        for r in &self.required {
            if !b.contains_key(r) {
                return Err(Error::MissingBinding(r.clone()));
            }
        }
        Ok(())
    }
}

pub(crate) fn get<'a>(b: &'a Bindings, name: &str) -> Result<&'a Monomial> {
    b.get(name)
        .ok_or_else(|| Error::MissingBinding(name.to_string()))
}

pub(crate) fn q() -> Monomial {
    Monomial::q()
}

/// `∏ (num_i; base)_n / ∏ (den_i; base)_n`, naming any vanishing denominator.
pub(crate) fn frac(
    num: &[Monomial],
    den: &[Monomial],
    base: &Monomial,
    n: i64,
) -> Result<LaurentRatio> {
    let mut acc = LaurentRatio::one();
    for x in num {
        acc = acc.mul(&LaurentRatio::poch(x, base, n)?);
        if acc.is_zero() {
            return Ok(acc);
        }
    }
    for x in den {
        let d = LaurentRatio::poch(x, base, n)?;
        if d.is_zero() {
            return Err(Error::Pole(format!("({}; {})_{} vanishes", x, base, n)));
        }
        acc = acc.div(&d)?;
    }
    Ok(acc)
}

pub(crate) fn mono(m: &Monomial) -> LaurentRatio {
    LaurentRatio::from_monomial(m)
}

pub(crate) fn sqrt_of(m: &Monomial, what: &str) -> Result<Monomial> {
    m.sqrt().ok_or_else(|| {
        Error::Lattice(format!(
            "{} = {} needs an exact square root; choose a square binding",
            what, m
        ))
    })
}

/// Memoizes a generator on `(n, bindings)`.
pub fn memoize(g: Generator) -> Generator {
    let cache: Arc<Mutex<HashMap<(i64, Bindings), LaurentRatio>>> =
        Arc::new(Mutex::new(HashMap::new()));
    Arc::new(move |n, b| {
        let key = (n, b.clone());
        if let Some(v) = cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = g(n, b)?;
        cache.lock().unwrap().insert(key, v.clone());
        Ok(v)
    })
}

fn with_k(b: &Bindings, k: Monomial) -> Bindings {
    let mut out = b.clone();
    out.insert("k".into(), k);
    out
}

/// Weight `(k/a)_{n-j}/(q)_{n-j} · (k)_{n+j}/(aq)_{n+j}` of the defining relation.
pub fn relation_weight(a: &Monomial, k: &Monomial, n: i64, j: i64) -> Result<LaurentRatio> {
    let q = q();
    let ka = k.div(a)?;
    let left = frac(&[ka], std::slice::from_ref(&q), &q, n - j)?;
    if left.is_zero() {
        return Ok(left);
    }
    Ok(left.mul(&frac(std::slice::from_ref(k), &[a.mul(&q)], &q, n + j)?))
}

#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub n: i64,
    pub pass: bool,
    pub beta: LaurentRatio,
    pub sum: LaurentRatio,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub word: String,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| !c.pass)
    }
}

/// Checks `β_n = Σ_j (k/a)_{n-j}/(q)_{n-j} (k)_{n+j}/(aq)_{n+j} α_j` for `n <= n_max`.
pub fn check_wp_relation(pair: &WPPair, b: &Bindings, n_max: i64) -> Result<RelationReport> {
    pair.validate(b)?;
    let a = get(b, "a")?;
    let k = get(b, "k")?;
    let alphas = (0..=n_max)
        .map(|j| pair.alpha(j, b))
        .collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();
    for n in 0..=n_max {
        let mut terms = Vec::new();
        for (j, al) in alphas.iter().enumerate().take(n as usize + 1) {
            if al.is_zero() {
                continue;
            }
            terms.push(relation_weight(a, k, n, j as i64)?.mul(al));
        }
        let sum = LaurentRatio::sum_all(&terms);
        let beta = pair.beta(n, b)?;
        checks.push(RelationCheck {
            n,
            pass: beta == sum,
            beta,
            sum,
        });
    }
    Ok(RelationReport {
        word: pair.word.clone(),
        checks,
    })
}

/// First construct: `(α', β')` from `(α, β)` and two new parameters.
///
/// The parent is called at `k = c = kρ1ρ2/(aq)`; `k/c = aq/(ρ1ρ2)` is formed
/// directly so `k = 0` is allowed.
pub fn construct_a(pair: &WPPair, rho1: &Monomial, rho2: &Monomial) -> Result<WPPair> {
    if rho1.is_zero() || rho2.is_zero() {
        return Err(Error::Eval(
            "construct a needs nonzero rho1 and rho2".into(),
        ));
    }
    let (r1, r2) = (rho1.clone(), rho2.clone());
    let parent_alpha = memoize(pair.alpha.clone());
    let parent_beta = memoize(pair.beta.clone());
    let params = |b: &Bindings,
                  r1: &Monomial,
                  r2: &Monomial|
     -> Result<(Monomial, Monomial, Monomial, Monomial)> {
        let a = get(b, "a")?.clone();
        let k = get(b, "k")?.clone();
        let aq = a.mul(&q());
        let k_over_c = aq.div(&r1.mul(r2))?;
        let c = k.mul(r1).mul(r2).div(&aq)?;
        Ok((a, k, c, k_over_c))
    };
    let alpha: Generator = {
        let (r1, r2) = (r1.clone(), r2.clone());
        let pa = parent_alpha.clone();
        Arc::new(move |n, b| {
            let (a, _, c, kc) = params(b, &r1, &r2)?;
            let aq = a.mul(&q());
            let pre = frac(
                &[r1.clone(), r2.clone()],
                &[aq.div(&r1)?, aq.div(&r2)?],
                &q(),
                n,
            )?;
            if pre.is_zero() {
                return Ok(pre);
            }
            Ok(pre.mul_monomial(&kc.pow(n)?).mul(&pa(n, &with_k(b, c))?))
        })
    };
    let beta: Generator = {
        let (r1, r2) = (r1.clone(), r2.clone());
        let pb = parent_beta.clone();
        Arc::new(move |n, b| {
            let (a, k, c, kc) = params(b, &r1, &r2)?;
            let q = q();
            let aq = a.mul(&q);
            let kr1 = k.mul(&r1).div(&a)?;
            let kr2 = k.mul(&r2).div(&a)?;
            let pre = frac(
                &[kr1.clone(), kr2.clone()],
                &[aq.div(&r1)?, aq.div(&r2)?],
                &q,
                n,
            )?;
            if pre.is_zero() {
                return Ok(pre);
            }
            let bc = with_k(b, c.clone());
            let mut terms = Vec::new();
            for j in 0..=n {
                let mut t = frac(
                    &[r1.clone(), r2.clone()],
                    &[kr1.clone(), kr2.clone()],
                    &q,
                    j,
                )?;
                if t.is_zero() {
                    continue;
                }
                let vw = LaurentRatio::binomial(&c.mul(&q.pow(2 * j)?));
                let vd = LaurentRatio::binomial(&c);
                if vd.is_zero() {
                    return Err(Error::Pole("construct a: 1 - c vanishes".into()));
                }
                t = t.mul(&vw).div(&vd)?;
                t = t.mul(&frac(
                    std::slice::from_ref(&kc),
                    std::slice::from_ref(&q),
                    &q,
                    n - j,
                )?);
                t = t.mul(&frac(std::slice::from_ref(&k), &[q.mul(&c)], &q, n + j)?);
                if t.is_zero() {
                    continue;
                }
                t = t.mul_monomial(&kc.pow(j)?).mul(&pb(j, &bc)?);
                terms.push(t);
            }
            Ok(pre.mul(&LaurentRatio::sum_all(&terms)))
        })
    };
    let mut required = pair.required.clone();
    for r in ["a", "k"] {
        if !required.iter().any(|x| x == r) {
            required.push(r.to_string());
        }
    }
    Ok(WPPair {
        id: pair.id.clone(),
        word: format!("{}.a", pair.word),
        alpha: memoize(alpha),
        beta: memoize(beta),
        required,
        lattice: pair.lattice,
        reference: format!("construct a of {}", pair.word),
    })
}

/// Second construct: `(α̃, β̃)` evaluating the parent at `k -> qa²/k`.
pub fn construct_b(pair: &WPPair) -> WPPair {
    let parent_alpha = memoize(pair.alpha.clone());
    let parent_beta = memoize(pair.beta.clone());
    let dual = |b: &Bindings| -> Result<(Monomial, Monomial, Monomial)> {
        let a = get(b, "a")?;
        let k = get(b, "k")?.clone();
        let big = q().mul(a).mul(a).div(&k)?;
        let x = k.mul(&k).div(&q().mul(a).mul(a))?;
        Ok((k, big, x))
    };
    let alpha: Generator = {
        let pa = parent_alpha.clone();
        Arc::new(move |n, b| {
            let (k, big, x) = dual(b)?;
            let pre = frac(std::slice::from_ref(&big), &[k], &q(), 2 * n)?;
            if pre.is_zero() {
                return Ok(pre);
            }
            Ok(pre.mul_monomial(&x.pow(n)?).mul(&pa(n, &with_k(b, big))?))
        })
    };
    let beta: Generator = {
        let pb = parent_beta.clone();
        Arc::new(move |n, b| {
            let (_, big, x) = dual(b)?;
            let bb = with_k(b, big);
            let mut terms = Vec::new();
            for j in 0..=n {
                let w = frac(std::slice::from_ref(&x), &[q()], &q(), n - j)?;
                if w.is_zero() {
                    continue;
                }
                terms.push(w.mul_monomial(&x.pow(j)?).mul(&pb(j, &bb)?));
            }
            Ok(LaurentRatio::sum_all(&terms))
        })
    };
    WPPair {
        id: pair.id.clone(),
        word: format!("{}.b", pair.word),
        alpha: memoize(alpha),
        beta: memoize(beta),
        required: pair.required.clone(),
        lattice: pair.lattice,
        reference: format!("construct b of {}", pair.word),
    }
}

/// One step of a construct word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    A(Monomial, Monomial),
    B,
}

/// Applies construct steps left to right.
pub fn derive(pair: &WPPair, steps: &[Step]) -> Result<WPPair> {
    let mut cur = pair.clone();
    for s in steps {
        cur = match s {
            Step::A(r1, r2) => construct_a(&cur, r1, r2)?,
            Step::B => construct_b(&cur),
        };
    }
    Ok(cur)
}

/// Where two pairs first differ, if anywhere in `0..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mismatch {
    Alpha(i64),
    Beta(i64),
}

pub fn termwise_eq(x: &WPPair, y: &WPPair, b: &Bindings, n_max: i64) -> Result<Option<Mismatch>> {
    for n in 0..=n_max {
        if x.alpha(n, b)? != y.alpha(n, b)? {
            return Ok(Some(Mismatch::Alpha(n)));
        }
        if x.beta(n, b)? != y.beta(n, b)? {
            return Ok(Some(Mismatch::Beta(n)));
        }
    }
    Ok(None)
}

/// Integer-exponent helper `q^e`.
pub(crate) fn qe(num: i64, den: i64) -> Monomial {
    Monomial::q_pow(Exp::new(num, den))
}
