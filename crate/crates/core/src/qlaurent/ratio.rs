use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{Exp, LaurentPoly, Monomial, Rational, Series};
use crate::error::{Error, Result};

type Factors = BTreeMap<LaurentPoly, u32>;

/// A rational function of `q`, kept as
/// `coeff · Π num_f^m / Π den_f^m` where every factor `f` is normalized
/// (lowest exponent 0, constant term 1, not constant).
///
/// Equality (`==`) is mathematical: `x == y` iff `x - y` vanishes.
#[derive(Clone, Debug)]
pub struct LaurentRatio {
    coeff: LaurentPoly,
    num: Factors,
    den: Factors,
}

/// Splits a nonzero polynomial into `unit · f` with `f` normalized,
/// returning `None` for `f` when the polynomial is a monomial.
fn split_unit(p: &LaurentPoly) -> (Monomial, Option<LaurentPoly>) {
    let lead = p.leading().expect("split_unit on zero");
    if p.term_count() == 1 {
        return (lead, None);
    }
    let inv = lead.inv().expect("nonzero leading term");
    (lead, Some(p.mul_monomial(&inv)))
}

fn bump(map: &mut Factors, f: LaurentPoly, by: u32) {
    *map.entry(f).or_insert(0) += by;
}

impl LaurentRatio {
    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        LaurentRatio {
            coeff: p,
            num: Factors::new(),
            den: Factors::new(),
        }
    }

    pub fn from_monomial(m: &Monomial) -> Self {
        Self::from_poly(m.to_poly())
    }

    pub fn from_rational(c: &Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    /// `num / den`; rejects a zero denominator.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Pole("zero denominator".into()));
        }
        Self::from_poly(num).div(&Self::from_poly(den))
    }

    /// The factor `1 - m`, kept in factored form.
    pub fn binomial(m: &Monomial) -> Self {
        if m.is_zero() {
            return Self::one();
        }
        if m.exp().is_zero() {
            return Self::from_rational(&(Rational::one() - m.coeff()));
        }
        let p = &LaurentPoly::one() - &m.to_poly();
        let (unit, f) = split_unit(&p);
        let mut num = Factors::new();
        num.insert(f.expect("binomial with nonzero exponent"), 1);
        LaurentRatio {
            coeff: unit.to_poly(),
            num,
            den: Factors::new(),
        }
    }

    /// `(a; base)_n` as a factored product.
    pub fn poch(a: &Monomial, base: &Monomial, n: i64) -> Result<Self> {
        if n < 0 {
            return Err(Error::NegativeLength(n));
        }
        let mut acc = Self::one();
        let mut x = a.clone();
        for _ in 0..n {
            acc = acc.mul(&Self::binomial(&x));
            if acc.is_zero() {
                return Ok(acc);
            }
            x = x.mul(base);
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// Multiplicative prefactor (a Laurent polynomial).
    pub fn coeff(&self) -> &LaurentPoly {
        &self.coeff
    }

    pub fn den_factors(&self) -> impl Iterator<Item = (&LaurentPoly, u32)> {
        self.den.iter().map(|(f, m)| (f, *m))
    }

    pub fn num_factors(&self) -> impl Iterator<Item = (&LaurentPoly, u32)> {
        self.num.iter().map(|(f, m)| (f, *m))
    }

    /// Lowest exponent of the `q`-expansion (factors have valuation zero).
    pub fn valuation(&self) -> Option<Exp> {
        self.coeff.min_exp()
    }

    /// Expanded numerator.
    pub fn numer(&self) -> LaurentPoly {
        let mut acc = self.coeff.clone();
        for (f, m) in &self.num {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    /// Expanded denominator.
    pub fn denom(&self) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for (f, m) in &self.den {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    /// The value as a Laurent polynomial when the denominator divides out.
    pub fn to_poly(&self) -> Option<LaurentPoly> {
        let mut p = self.numer();
        for (f, m) in &self.den {
            for _ in 0..*m {
                p = p.div_exact(f)?;
            }
        }
        Some(p)
    }

    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.is_zero() {
            return Some(Monomial::zero());
        }
        if self.num.is_empty() && self.den.is_empty() {
            return self.coeff.as_monomial();
        }
        self.to_poly()?.as_monomial()
    }

    fn cancel(mut self) -> Self {
        if self.coeff.is_zero() {
            return Self::zero();
        }
        let common: Vec<(LaurentPoly, u32)> = self
            .num
            .iter()
            .filter_map(|(f, m)| self.den.get(f).map(|d| (f.clone(), (*m).min(*d))))
            .collect();
        for (f, m) in common {
            for map in [&mut self.num, &mut self.den] {
                let e = map.get_mut(&f).unwrap();
                *e -= m;
                if *e == 0 {
                    map.remove(&f);
                }
            }
        }
        self
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut r = self.clone();
        r.coeff = &r.coeff * &o.coeff;
        for (f, m) in &o.num {
            bump(&mut r.num, f.clone(), *m);
        }
        for (f, m) in &o.den {
            bump(&mut r.den, f.clone(), *m);
        }
        r.cancel()
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        if m.is_zero() {
            return Self::zero();
        }
        let mut r = self.clone();
        r.coeff = r.coeff.mul_monomial(m);
        r
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut r = self.clone();
        r.coeff = r.coeff.scale(c);
        if r.coeff.is_zero() {
            return Self::zero();
        }
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        r.coeff = -&r.coeff;
        r
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Pole("division by zero".into()));
        }
        let (unit, f) = split_unit(&self.coeff);
        let mut r = LaurentRatio {
            coeff: unit.inv()?.to_poly(),
            num: self.den.clone(),
            den: self.num.clone(),
        };
        if let Some(f) = f {
            bump(&mut r.den, f, 1);
        }
        Ok(r.cancel())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::sum_all(&[self.clone(), o.clone()])
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::sum_all(&[self.clone(), o.neg()])
    }

    /// Numerator over the common denominator, plus the shared factors.
    fn combine(terms: &[&LaurentRatio]) -> (LaurentPoly, Factors, Factors) {
        if terms.iter().all(|t| t.num.is_empty() && t.den.is_empty()) {
            let mut acc = LaurentPoly::zero();
            for t in terms {
                acc = &acc + &t.coeff;
            }
            return (acc, Factors::new(), Factors::new());
        }
        let mut common = terms[0].num.clone();
        for t in &terms[1..] {
            common.retain(|f, m| match t.num.get(f) {
                Some(k) => {
                    *m = (*m).min(*k);
                    true
                }
                None => false,
            });
        }
        let mut lcm = Factors::new();
        for t in terms {
            for (f, m) in &t.den {
                let e = lcm.entry(f.clone()).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let mut acc = LaurentPoly::zero();
        for t in terms {
            let mut p = t.coeff.clone();
            for (f, m) in &t.num {
                let extra = m - common.get(f).copied().unwrap_or(0);
                if extra > 0 {
                    p = &p * &f.pow(extra);
                }
            }
            for (f, m) in &lcm {
                let extra = m - t.den.get(f).copied().unwrap_or(0);
                if extra > 0 {
                    p = &p * &f.pow(extra);
                }
            }
            acc = &acc + &p;
        }
        (acc, common, lcm)
    }

    pub fn sum_all(terms: &[LaurentRatio]) -> Self {
        let live: Vec<&LaurentRatio> = terms.iter().filter(|t| !t.is_zero()).collect();
        match live.len() {
            0 => return Self::zero(),
            1 => return live[0].clone(),
            _ => {}
        }
        let (mut s, num, mut den) = Self::combine(&live);
        if s.is_zero() {
            return Self::zero();
        }
        let keys: Vec<LaurentPoly> = den.keys().cloned().collect();
        for f in keys {
            let m = den.get_mut(&f).unwrap();
            while *m > 0 {
                match s.div_exact(&f) {
                    Some(next) => {
                        s = next;
                        *m -= 1;
                    }
                    None => break,
                }
            }
            if *m == 0 {
                den.remove(&f);
            }
        }
        LaurentRatio { coeff: s, num, den }.cancel()
    }

    /// Exact equality by cross-multiplication over the common denominator.
    pub fn ratio_eq(&self, o: &Self) -> bool {
        let neg = o.neg();
        Self::combine(&[self, &neg]).0.is_zero()
    }

    /// Substitutes `q -> q^r`.
    pub fn subs_pow(&self, r: Exp) -> Result<Self> {
        let mut acc = Self::from_poly(self.coeff.subs_pow(r));
        for (f, m) in &self.num {
            let g = Self::from_poly(f.subs_pow(r)).normalized()?;
            acc = acc.mul(&g.pow(*m as i64)?);
        }
        for (f, m) in &self.den {
            let g = Self::from_poly(f.subs_pow(r)).normalized()?;
            acc = acc.div(&g.pow(*m as i64)?)?;
        }
        Ok(acc)
    }

    /// Moves a non-monomial coefficient into factored form.
    fn normalized(self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self);
        }
        let (unit, f) = split_unit(&self.coeff);
        let mut r = self;
        r.coeff = unit.to_poly();
        if let Some(f) = f {
            bump(&mut r.num, f, 1);
        }
        Ok(r.cancel())
    }

    /// Expansion modulo `q^prec`.
    pub fn to_series(&self, prec: Exp) -> Result<Series> {
        let v = match self.valuation() {
            None => return Ok(Series::zero(prec)),
            Some(v) => v,
        };
        if v >= prec {
            return Ok(Series::zero(prec));
        }
        let rel = prec - v;
        let mut acc = Series::from_poly(LaurentPoly::one(), rel);
        for (f, m) in &self.num {
            for _ in 0..*m {
                acc = acc.mul(&Series::from_poly(f.clone(), rel));
            }
        }
        let mut den = Series::from_poly(LaurentPoly::one(), rel);
        for (f, m) in &self.den {
            for _ in 0..*m {
                den = den.mul(&Series::from_poly(f.clone(), rel));
            }
        }
        if !self.den.is_empty() {
            acc = acc.mul(&den.inv()?);
        }
        Ok(acc.mul(&Series::from_poly(self.coeff.clone(), prec)))
    }
}

impl PartialEq for LaurentRatio {
    fn eq(&self, other: &Self) -> bool {
        self.ratio_eq(other)
    }
}

impl From<LaurentPoly> for LaurentRatio {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for LaurentRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.numer());
        }
        write!(f, "({}) / ({})", self.numer(), self.denom())
    }
}
