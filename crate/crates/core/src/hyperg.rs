//! Basic, very-well-poised and bibasic hypergeometric series over monomial
//! parameters, a poisedness classifier and terminating-series reversal.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qlaurent::{Exp, LaurentRatio, Monomial};

/// How many terms of a series to sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terms {
    /// Stop at the `base^{-n}` upper parameter.
    Terminating,
    /// Sum `j = 0..=n`.
    Bound(i64),
    /// Sum until every omitted term lies in `O(q^T)`.
    Truncate(Exp),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSpec {
    pub upper: Vec<Monomial>,
    pub lower: Vec<Monomial>,
    pub base: Monomial,
    pub argument: Monomial,
    pub terms: Terms,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WSpec {
    pub a1: Monomial,
    pub tail: Vec<Monomial>,
    pub base: Monomial,
    pub argument: Monomial,
    pub terms: Terms,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BibasicSpec {
    pub upper1: Vec<Monomial>,
    pub lower1: Vec<Monomial>,
    pub upper2: Vec<Monomial>,
    pub lower2: Vec<Monomial>,
    pub base1: Monomial,
    pub base2: Monomial,
    pub argument: Monomial,
    pub terms: Terms,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Poise {
    VeryWellPoised,
    WellPoised,
    NearlyPoised1,
    NearlyPoised2,
    None,
}

impl fmt::Display for Poise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Poise::VeryWellPoised => "very_well_poised",
            Poise::WellPoised => "well_poised",
            Poise::NearlyPoised1 => "nearly_poised_1",
            Poise::NearlyPoised2 => "nearly_poised_2",
            Poise::None => "none",
        })
    }
}

impl PhiSpec {
    pub fn new(
        upper: Vec<Monomial>,
        lower: Vec<Monomial>,
        base: Monomial,
        argument: Monomial,
        terms: Terms,
    ) -> Result<Self> {
        if upper.len() != lower.len() + 1 {
            return Err(Error::Eval(format!(
                "phi needs one more upper than lower parameter, got {} and {}",
                upper.len(),
                lower.len()
            )));
        }
        Ok(PhiSpec {
            upper,
            lower,
            base,
            argument,
            terms,
        })
    }
}

impl WSpec {
    /// Expands the `W` shorthand into the underlying `phi`.
    pub fn desugar(&self) -> Result<PhiSpec> {
        let s = self.a1.sqrt().ok_or_else(|| {
            Error::Lattice(format!(
                "W needs sqrt({}); double the lattice or choose square bindings",
                self.a1
            ))
        })?;
        let qs = self.base.mul(&s);
        let qa = self.base.mul(&self.a1);
        let mut upper = vec![self.a1.clone(), qs.clone(), qs.neg()];
        let mut lower = vec![s.clone(), s.neg()];
        for t in &self.tail {
            upper.push(t.clone());
            lower.push(qa.div(t)?);
        }
        PhiSpec::new(
            upper,
            lower,
            self.base.clone(),
            self.argument.clone(),
            self.terms.clone(),
        )
    }
}

/// Smallest `m >= 0` with some upper parameter equal to `base^{-m}`.
pub fn terminating_length(upper: &[Monomial], base: &Monomial) -> Option<i64> {
    if base.exp().is_zero() {
        return None;
    }
    upper
        .iter()
        .filter_map(|u| {
            let m = -(u.exp() / base.exp());
            if !m.is_integer() || m < Exp::zero() || u.is_zero() {
                return None;
            }
            let m = m.to_integer();
            (base.pow(-m).ok()? == *u).then_some(m)
        })
        .min()
}

struct Group<'a> {
    upper: &'a [Monomial],
    lower: &'a [Monomial],
    base: &'a Monomial,
    with_q: bool,
}

fn factor(m: &Monomial) -> LaurentRatio {
    LaurentRatio::binomial(m)
}

/// Ratio `t_{j+1} / t_j` contributed by one base group.
fn step(g: &Group, j: i64) -> Result<LaurentRatio> {
    let bj = g.base.pow(j)?;
    let mut num = LaurentRatio::one();
    for u in g.upper {
        num = num.mul(&factor(&u.mul(&bj)));
    }
    if num.is_zero() {
        return Ok(num);
    }
    let mut den = LaurentRatio::one();
    if g.with_q {
        den = den.mul(&factor(&g.base.pow(j + 1)?));
    }
    for l in g.lower {
        let f = factor(&l.mul(&bj));
        if f.is_zero() {
            return Err(Error::Pole(format!(
                "lower parameter {} makes (1 - {}) vanish at j = {}",
                l,
                l.mul(&bj),
                j
            )));
        }
        den = den.mul(&f);
    }
    if den.is_zero() {
        return Err(Error::Pole(format!(
            "(base; base)_j vanishes at j = {}",
            j + 1
        )));
    }
    num.div(&den)
}

fn min_exp_plus(params: &[Monomial], base: &Monomial, j: i64) -> bool {
    params
        .iter()
        .all(|p| p.is_zero() || p.exp() + base.exp() * j > Exp::zero())
}

fn eval_groups(groups: &[Group], z: &Monomial, terms: &Terms) -> Result<LaurentRatio> {
    let term_bound = groups
        .iter()
        .filter_map(|g| terminating_length(g.upper, g.base))
        .min();
    let (limit, cutoff) = match terms {
        Terms::Terminating => (Some(term_bound.ok_or(Error::NonTerminating)?), None),
        Terms::Bound(n) => (Some(term_bound.map_or(*n, |m| m.min(*n))), None),
        Terms::Truncate(t) => match term_bound {
            Some(m) => (Some(m), None),
            None => {
                if z.is_zero() {
                    (Some(0), None)
                } else {
                    if z.exp() <= Exp::zero() || groups.iter().any(|g| g.base.exp() <= Exp::zero())
                    {
                        return Err(Error::NotTruncatable(format!(
                            "argument {} and bases must have positive exponent",
                            z
                        )));
                    }
                    (None, Some(*t))
                }
            }
        },
    };
    let mut out = Vec::new();
    let mut term = LaurentRatio::one();
    let mut j = 0i64;
    loop {
        if let Some(n) = limit {
            if j > n {
                break;
            }
        }
        if let Some(t) = cutoff {
            let settled = groups
                .iter()
                .all(|g| min_exp_plus(g.upper, g.base, j) && min_exp_plus(g.lower, g.base, j));
            let v = term.valuation().unwrap_or(t);
            if settled && v >= t {
                break;
            }
        }
        if term.is_zero() {
            break;
        }
        out.push(term.clone());
        if limit == Some(j) {
            break;
        }
        let mut next = term.mul_monomial(z);
        for g in groups {
            next = next.mul(&step(g, j)?);
        }
        term = next;
        j += 1;
    }
    Ok(LaurentRatio::sum_all(&out))
}

/// `_{r+1}phi_r` summed per `spec.terms`.
pub fn eval_phi(spec: &PhiSpec) -> Result<LaurentRatio> {
    let g = Group {
        upper: &spec.upper,
        lower: &spec.lower,
        base: &spec.base,
        with_q: true,
    };
    eval_groups(&[g], &spec.argument, &spec.terms)
}

pub fn eval_w(spec: &WSpec) -> Result<LaurentRatio> {
    eval_phi(&spec.desugar()?)
}

pub fn eval_bibasic(spec: &BibasicSpec) -> Result<LaurentRatio> {
    if spec.upper1.len() != spec.lower1.len() + 1 || spec.upper2.len() != spec.lower2.len() {
        return Err(Error::Eval("bibasic parameter counts do not match".into()));
    }
    let g1 = Group {
        upper: &spec.upper1,
        lower: &spec.lower1,
        base: &spec.base1,
        with_q: true,
    };
    let g2 = Group {
        upper: &spec.upper2,
        lower: &spec.lower2,
        base: &spec.base2,
        with_q: false,
    };
    eval_groups(&[g1, g2], &spec.argument, &spec.terms)
}

/// Most specific poisedness class of a `phi` spec.
pub fn classify_poised(spec: &PhiSpec) -> Poise {
    let r = spec.lower.len();
    let p0 = spec.base.mul(&spec.upper[0]);
    let prods: Vec<Monomial> = (0..r)
        .map(|i| spec.lower[i].mul(&spec.upper[i + 1]))
        .collect();
    let well = prods.iter().all(|p| *p == p0);
    if well {
        if spec.upper.len() >= 3 {
            let a2 = &spec.upper[1];
            let a3 = &spec.upper[2];
            let b2 = spec.base.mul(&spec.base).mul(&spec.upper[0]);
            if *a3 == a2.neg() && a2.mul(a2) == b2 {
                return Poise::VeryWellPoised;
            }
        }
        return Poise::WellPoised;
    }
    if r < 2 {
        return Poise::None;
    }
    if prods[0] != p0 && prods.iter().all(|p| *p == prods[0]) {
        return Poise::NearlyPoised1;
    }
    if prods[..r - 1].iter().all(|p| *p == p0) && prods[r - 1] != p0 {
        return Poise::NearlyPoised2;
    }
    Poise::None
}

/// Reverses the order of summation of a terminating series.
///
/// Returns the reversed spec and the prefactor `P` with
/// `eval(spec) = P · eval(reversed)`.
pub fn reverse_terminating(spec: &PhiSpec) -> Result<(PhiSpec, LaurentRatio)> {
    let base = &spec.base;
    let (idx, n) = spec
        .upper
        .iter()
        .enumerate()
        .filter_map(|(i, _)| terminating_length(&spec.upper[i..=i], base).map(|m| (i, m)))
        .min_by_key(|(_, m)| *m)
        .ok_or(Error::NonTerminating)?;
    let others: Vec<Monomial> = spec
        .upper
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, u)| u.clone())
        .collect();
    if others.iter().chain(&spec.lower).any(|m| m.is_zero()) || spec.argument.is_zero() {
        return Err(Error::Eval("reversal divides by a zero parameter".into()));
    }
    let shift = base.pow(1 - n)?;
    let mut upper: Vec<Monomial> = Vec::new();
    for b in &spec.lower {
        upper.push(shift.div(b)?);
    }
    upper.push(spec.upper[idx].clone());
    let mut lower = Vec::new();
    for a in &others {
        lower.push(shift.div(a)?);
    }
    let mut z = base.pow(n + 1)?.div(&spec.argument)?;
    for b in &spec.lower {
        z = z.mul(b);
    }
    for a in &others {
        z = z.div(a)?;
    }
    let mut pre = LaurentRatio::one();
    for a in &others {
        pre = pre.mul(&LaurentRatio::poch(a, base, n)?);
    }
    for b in &spec.lower {
        pre = pre.div(&LaurentRatio::poch(b, base, n)?)?;
    }
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let mono = base
        .pow(n * (1 - n) / 2)?
        .mul(&spec.argument.div(base)?.pow(n)?)
        .scale(&num_rational::BigRational::from_integer(sign.into()));
    pre = pre.mul_monomial(&mono);
    let reversed = PhiSpec::new(upper, lower, base.clone(), z, Terms::Terminating)?;
    Ok((reversed, pre))
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Monomial]| {
            v.iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "phi([{}], [{}], {}, {})",
            list(&self.upper),
            list(&self.lower),
            self.base,
            self.argument
        )
    }
}
