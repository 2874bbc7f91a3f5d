//! Burge pairs, the `Q` kernel, the four pair transforms and chain words.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::qlaurent::{qbinom, Exp, LaurentPoly, LaurentRatio, Monomial};

pub type AGen = Arc<dyn Fn(i64) -> Result<LaurentPoly> + Send + Sync>;
pub type BGen = Arc<dyn Fn(i64, i64) -> Result<LaurentRatio> + Send + Sync>;

pub const BURGE_SEED_IDS: [&str; 3] = ["B1", "B2", "B3"];

fn q_pow(e: Exp) -> Monomial {
    Monomial::q_pow(e)
}

fn qi(e: i64) -> Monomial {
    q_pow(Exp::from_integer(e))
}

fn sign(j: i64) -> i64 {
    if j.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `Q(N, M, r, s) = [N+M+r-s, N+r] [N+M-r+s, N-r]`.
pub fn q_kernel(n: i64, m: i64, r: i64, s: i64) -> LaurentPoly {
    let q = Monomial::q();
    let left = qbinom(n + m + r - s, n + r, &q);
    if left.is_zero() {
        return left;
    }
    &left * &qbinom(n + m - r + s, n - r, &q)
}

/// A pair `(A_j, B(N, M))` with offsets `(a, b)`.
#[derive(Clone)]
pub struct BurgePair {
    pub id: String,
    /// Transform path, e.g. `B3.74.73`.
    pub word: String,
    pub a: i64,
    pub b: i64,
    pub lattice: i64,
    /// Whether the `B` formula is valid at negative `M` as written.
    pub m_analytic: bool,
    a_fn: AGen,
    b_fn: BGen,
    cache: Arc<Mutex<HashMap<(i64, i64), LaurentRatio>>>,
}

impl fmt::Debug for BurgePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BurgePair")
            .field("word", &self.word)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("m_analytic", &self.m_analytic)
            .finish()
    }
}

impl BurgePair {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: &str,
        word: &str,
        a: i64,
        b: i64,
        lattice: i64,
        m_analytic: bool,
        a_fn: AGen,
        b_fn: BGen,
    ) -> Self {
        BurgePair {
            id: id.to_string(),
            word: word.to_string(),
            a,
            b,
            lattice,
            m_analytic,
            a_fn,
            b_fn,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn a_term(&self, j: i64) -> Result<LaurentPoly> {
        (self.a_fn)(j)
    }

    /// `B(N, M)`; zero for `N < 0`. At `M < 0` a non-analytic formula is
    /// replaced by the relation's right side, which is finite for fixed `N`.
    pub fn b_term(&self, n: i64, m: i64) -> Result<LaurentRatio> {
        if n < 0 {
            return Ok(LaurentRatio::zero());
        }
        if let Some(v) = self.cache.lock().unwrap().get(&(n, m)) {
            return Ok(v.clone());
        }
        let v = if m < 0 && !self.m_analytic {
            LaurentRatio::from_poly(self.a_side(n, m)?)
        } else {
            (self.b_fn)(n, m)?
        };
        self.cache.lock().unwrap().insert((n, m), v.clone());
        Ok(v)
    }

    /// `Σ_{j>=0} A_j Q(N, M, aj, bj)` over `aj <= N`, `bj <= M`. At `M < 0`
    /// only `aj <= N` bounds the sum, which needs `a > 0`.
    pub fn a_side(&self, n: i64, m: i64) -> Result<LaurentPoly> {
        let mut top: Option<i64> = None;
        if self.a > 0 {
            top = Some(n / self.a);
        }
        if m >= 0 && self.b > 0 {
            top = Some(top.map_or(m / self.b, |t| t.min(m / self.b)));
        }
        let top = top.ok_or_else(|| {
            Error::Eval(format!(
                "{}: offsets ({}, {}) leave the relation sum unbounded at M = {}",
                self.word, self.a, self.b, m
            ))
        })?;
        let mut acc = LaurentPoly::zero();
        for j in 0..=top {
            let k = q_kernel(n, m, self.a * j, self.b * j);
            if k.is_zero() {
                continue;
            }
            acc = &acc + &(&self.a_term(j)? * &k);
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub struct BurgeCheck {
    pub n: i64,
    pub m: i64,
    pub pass: bool,
    pub lhs: LaurentRatio,
    pub rhs: LaurentPoly,
}

#[derive(Clone, Debug)]
pub struct BurgeReport {
    pub word: String,
    pub checks: Vec<BurgeCheck>,
}

impl BurgeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&BurgeCheck> {
        self.checks.iter().find(|c| !c.pass)
    }
}

/// Checks `B(N, M) = Σ_j A_j Q(N, M, aj, bj)` on the grid.
pub fn check_burge_relation(pair: &BurgePair, n_max: i64, m_max: i64) -> Result<BurgeReport> {
    let mut checks = Vec::new();
    for n in 0..=n_max {
        for m in 0..=m_max {
            let lhs = pair.b_term(n, m)?;
            let rhs = pair.a_side(n, m)?;
            checks.push(BurgeCheck {
                n,
                m,
                pass: lhs == LaurentRatio::from_poly(rhs.clone()),
                lhs,
                rhs,
            });
        }
    }
    Ok(BurgeReport {
        word: pair.word.clone(),
        checks,
    })
}

fn b1() -> BurgePair {
    let a: AGen = Arc::new(|j| {
        Ok(if j == 0 {
            LaurentPoly::one()
        } else {
            LaurentPoly::from_int(2 * sign(j))
        })
    });
    let b: BGen = Arc::new(|n, m| {
        let p = qbinom(n + m, n, &qi(2))
            .scale(&num_rational::BigRational::from_integer(sign(n).into()));
        Ok(LaurentRatio::from_poly(p))
    });
    BurgePair::new("B1", "B1", 1, 0, 1, true, a, b)
}

fn b2() -> BurgePair {
    let a: AGen = Arc::new(|j| {
        if j == 0 {
            return Ok(LaurentPoly::one());
        }
        let one_plus = &LaurentPoly::one() + &LaurentPoly::q().pow(j as u32);
        let m = Monomial::int(sign(j)).mul(&qi(j * (j - 1) / 2));
        Ok(one_plus.mul_monomial(&m))
    });
    let b: BGen = Arc::new(|n, m| {
        let mono = Monomial::int(sign(n)).mul(&qi(n * (n + 1) / 2 + n * m));
        Ok(LaurentRatio::from_poly(
            qbinom(n + m, n, &Monomial::q()).mul_monomial(&mono),
        ))
    });
    BurgePair::new("B2", "B2", 1, 0, 1, true, a, b)
}

fn b3() -> BurgePair {
    let a: AGen = Arc::new(|j| {
        if j == 0 {
            return Ok(LaurentPoly::one());
        }
        Ok(&q_pow(Exp::new(j, 2)).to_poly() + &q_pow(Exp::new(-j, 2)).to_poly())
    });
    let b: BGen = Arc::new(|n, m| {
        let p = qbinom(2 * n + 2 * m + 1, 2 * n, &q_pow(Exp::new(1, 2)));
        Ok(LaurentRatio::from_poly(
            p.mul_monomial(&q_pow(Exp::new(-n, 2))),
        ))
    });
    BurgePair::new("B3", "B3", 1, 0, 2, true, a, b)
}

pub fn burge_seed(id: &str) -> Result<BurgePair> {
    match id {
        "B1" => Ok(b1()),
        "B2" => Ok(b2()),
        "B3" => Ok(b3()),
        _ => Err(Error::Unknown {
            kind: "Burge pair",
            name: id.into(),
        }),
    }
}

fn scaled_a(pair: &BurgePair, e: i64) -> AGen {
    let parent = pair.a_fn.clone();
    Arc::new(move |j| Ok(parent(j)?.mul_monomial(&qi(e * j * j))))
}

fn check_offsets(pair: &BurgePair, step: usize) -> Result<()> {
    if pair.b < 0 || pair.b > 2 * pair.a {
        return Err(Error::Offsets {
            step,
            word: pair.word.clone(),
            a: pair.a,
            b: pair.b,
        });
    }
    Ok(())
}

/// `B'(N, M) = Σ_{i<=M} q^{i²} [2N+M-i, 2N] B(N-i, i)`; offsets `(a+b, b)`.
pub fn apply_transform_73(pair: &BurgePair) -> Result<BurgePair> {
    check_offsets(pair, 1)?;
    let parent = pair.clone();
    let b: BGen = Arc::new(move |n, m| {
        let mut terms = Vec::new();
        for i in 0..=m.min(n) {
            let w = qbinom(2 * n + m - i, 2 * n, &Monomial::q());
            if w.is_zero() {
                continue;
            }
            terms.push(
                parent
                    .b_term(n - i, i)?
                    .mul(&LaurentRatio::from_poly(w.mul_monomial(&qi(i * i)))),
            );
        }
        Ok(LaurentRatio::sum_all(&terms))
    });
    let e = pair.b * pair.b;
    Ok(BurgePair::new(
        &pair.id,
        &format!("{}.73", pair.word),
        pair.a + pair.b,
        pair.b,
        pair.lattice,
        false,
        scaled_a(pair, e),
        b,
    ))
}

/// `B'(N, M) = Σ_{i<=M} q^{i²} [2N+M-i, 2N] B(i, N-i)`; offsets `(a+b, a)`.
pub fn apply_transform_74(pair: &BurgePair) -> Result<BurgePair> {
    check_offsets(pair, 1)?;
    let parent = pair.clone();
    let b: BGen = Arc::new(move |n, m| {
        let mut terms = Vec::new();
        for i in 0..=m {
            let w = qbinom(2 * n + m - i, 2 * n, &Monomial::q());
            if w.is_zero() {
                continue;
            }
            let v = parent.b_term(i, n - i)?;
            if v.is_zero() {
                continue;
            }
            terms.push(v.mul(&LaurentRatio::from_poly(w.mul_monomial(&qi(i * i)))));
        }
        Ok(LaurentRatio::sum_all(&terms))
    });
    let e = pair.a * pair.a;
    Ok(BurgePair::new(
        &pair.id,
        &format!("{}.74", pair.word),
        pair.a + pair.b,
        pair.a,
        pair.lattice,
        false,
        scaled_a(pair, e),
        b,
    ))
}

/// `B'(N, M) = Σ_{i<=N} q^{(1+2M)i} [2M+N-i, N-i] B(i, -1-M)`; offsets `(a, 2a-b)`.
pub fn apply_transform_81(pair: &BurgePair) -> BurgePair {
    let parent = pair.clone();
    let b: BGen = Arc::new(move |n, m| {
        let mut terms = Vec::new();
        for i in 0..=n {
            let w = qbinom(2 * m + n - i, n - i, &Monomial::q());
            if w.is_zero() {
                continue;
            }
            let v = parent.b_term(i, -1 - m)?;
            if v.is_zero() {
                continue;
            }
            terms.push(v.mul(&LaurentRatio::from_poly(
                w.mul_monomial(&qi((1 + 2 * m) * i)),
            )));
        }
        Ok(LaurentRatio::sum_all(&terms))
    });
    let e = 2 * pair.a * (pair.a - pair.b);
    BurgePair::new(
        &pair.id,
        &format!("{}.81", pair.word),
        pair.a,
        2 * pair.a - pair.b,
        pair.lattice,
        true,
        scaled_a(pair, e),
        b,
    )
}

/// `B''(N, M) = B(M, N)`; offsets `(b, a)`.
pub fn swap_sym(pair: &BurgePair) -> BurgePair {
    let parent = pair.clone();
    let b: BGen = Arc::new(move |n, m| {
        if m < 0 {
            return Ok(LaurentRatio::zero());
        }
        parent.b_term(m, n)
    });
    BurgePair::new(
        &pair.id,
        &format!("{}.82", pair.word),
        pair.b,
        pair.a,
        pair.lattice,
        false,
        pair.a_fn.clone(),
        b,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    T73,
    T74,
    T81,
    Swap,
}

impl Transform {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "73" => Ok(Transform::T73),
            "74" => Ok(Transform::T74),
            "81" => Ok(Transform::T81),
            "82" => Ok(Transform::Swap),
            _ => Err(Error::Unknown {
                kind: "transform",
                name: s.into(),
            }),
        }
    }
}

/// Parses a dot-separated word such as `74.73.73`.
pub fn parse_word(word: &str) -> Result<Vec<Transform>> {
    word.split('.')
        .filter(|s| !s.is_empty())
        .map(Transform::parse)
        .collect()
}

/// Applies a transform word, naming the first step whose offsets are invalid.
pub fn apply_word(pair: &BurgePair, steps: &[Transform]) -> Result<BurgePair> {
    let mut cur = pair.clone();
    for (i, t) in steps.iter().enumerate() {
        let step = i + 1;
        cur = match t {
            Transform::T73 => apply_transform_73(&cur).map_err(|e| restep(e, step))?,
            Transform::T74 => apply_transform_74(&cur).map_err(|e| restep(e, step))?,
            Transform::T81 => apply_transform_81(&cur),
            Transform::Swap => swap_sym(&cur),
        };
    }
    Ok(cur)
}

fn restep(e: Error, step: usize) -> Error {
    match e {
        Error::Offsets { word, a, b, .. } => Error::Offsets { step, word, a, b },
        other => other,
    }
}
