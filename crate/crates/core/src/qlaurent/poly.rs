use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Exp, Monomial, Rational};

/// Laurent polynomial in `q` with exponents on the lattice `(1/L)·Z`.
///
/// Stored densely: `coeffs[i] / den` is the coefficient of `q^((lo + i) / L)`.
/// The representation is canonical (minimal lattice, trimmed ends, reduced
/// denominator), so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    lattice: i64,
    lo: i64,
    coeffs: Vec<BigInt>,
    den: BigInt,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            lattice: 1,
            lo: 0,
            coeffs: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(&Rational::one())
    }

    pub fn q() -> Self {
        Self::monomial(&Rational::one(), Exp::from_integer(1))
    }

    pub fn constant(c: &Rational) -> Self {
        Self::monomial(c, Exp::from_integer(0))
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(&Rational::from_integer(c.into()))
    }

    pub fn monomial(c: &Rational, e: Exp) -> Self {
        Self::build(
            *e.denom(),
            *e.numer(),
            vec![c.numer().clone()],
            c.denom().clone(),
        )
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (Exp, Rational)>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| &acc + &Self::monomial(&c, e))
    }

    pub(crate) fn build(lattice: i64, lo: i64, mut coeffs: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert!(lattice > 0);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        let lo = lo + lead as i64;
        if den.is_negative() {
            den = -den;
            for c in coeffs.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &coeffs {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                den /= &g;
                for c in coeffs.iter_mut() {
                    *c /= &g;
                }
            }
        }
        let mut g = lattice.gcd(&lo);
        for (i, c) in coeffs.iter().enumerate() {
            if g == 1 {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(&(i as i64));
            }
        }
        if g > 1 {
            let g = g as usize;
            coeffs = coeffs.into_iter().step_by(g).collect();
            return LaurentPoly {
                lattice: lattice / g as i64,
                lo: lo / g as i64,
                coeffs,
                den,
            };
        }
        LaurentPoly {
            lattice,
            lo,
            coeffs,
            den,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.coeffs.len() == 1 && self.den.is_one() && self.coeffs[0].is_one()
    }

    /// Lattice denominator `L` of the canonical form.
    pub fn lattice(&self) -> i64 {
        self.lattice
    }

    /// Number of stored nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> Vec<(Exp, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                (
                    Exp::new(self.lo + i as i64, self.lattice),
                    Rational::new(c.clone(), self.den.clone()),
                )
            })
            .collect()
    }

    pub fn coeff(&self, e: Exp) -> Rational {
        let scaled = e * self.lattice;
        if !scaled.is_integer() {
            return Rational::zero();
        }
        let idx = scaled.to_integer() - self.lo;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Rational::zero();
        }
        Rational::new(self.coeffs[idx as usize].clone(), self.den.clone())
    }

    /// Lowest exponent, `None` for zero.
    pub fn min_exp(&self) -> Option<Exp> {
        (!self.is_zero()).then(|| Exp::new(self.lo, self.lattice))
    }

    pub fn max_exp(&self) -> Option<Exp> {
        (!self.is_zero()).then(|| Exp::new(self.lo + self.coeffs.len() as i64 - 1, self.lattice))
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        (self.lo == 0 && self.coeffs.len() == 1)
            .then(|| Rational::new(self.coeffs[0].clone(), self.den.clone()))
    }

    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.is_zero() {
            return Some(Monomial::zero());
        }
        (self.coeffs.len() == 1).then(|| {
            Monomial::new(
                Rational::new(self.coeffs[0].clone(), self.den.clone()),
                Exp::new(self.lo, self.lattice),
            )
        })
    }

    /// Lowest-order term as a monomial.
    pub fn leading(&self) -> Option<Monomial> {
        (!self.is_zero()).then(|| {
            Monomial::new(
                Rational::new(self.coeffs[0].clone(), self.den.clone()),
                Exp::new(self.lo, self.lattice),
            )
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        Self::build(
            self.lattice,
            self.lo,
            self.coeffs.iter().map(|x| x * c.numer()).collect(),
            &self.den * c.denom(),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        if m.is_zero() {
            return Self::zero();
        }
        let scaled = self.scale(m.coeff());
        scaled.shift(m.exp())
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: Exp) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lat = self.lattice.lcm(e.denom());
        let (lo, coeffs) = self.spread(lat);
        Self::build(lat, lo + (e * lat).to_integer(), coeffs, self.den.clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Drops all terms with exponent `>= cutoff`.
    pub fn truncate(&self, cutoff: Exp) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let limit = (cutoff * self.lattice).ceil().to_integer() - self.lo;
        if limit <= 0 {
            return Self::zero();
        }
        let limit = limit as usize;
        if limit >= self.coeffs.len() {
            return self.clone();
        }
        Self::build(
            self.lattice,
            self.lo,
            self.coeffs[..limit].to_vec(),
            self.den.clone(),
        )
    }

    /// Substitutes `q -> q^r`.
    pub fn subs_pow(&self, r: Exp) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        assert!(!r.is_zero(), "q -> q^0 is not a substitution");
        let lat = self.lattice * r.denom();
        let mut sparse: Vec<(i64, BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| ((self.lo + i as i64) * r.numer(), c.clone()))
            .collect();
        sparse.sort_by_key(|(e, _)| *e);
        Self::from_sparse(lat, &sparse, self.den.clone())
    }

    fn from_sparse(lattice: i64, terms: &[(i64, BigInt)], den: BigInt) -> Self {
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|(e, _)| *e).min().unwrap();
        let hi = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::build(lattice, lo, coeffs, den)
    }

    /// Coefficients re-expressed on lattice `lat`, a multiple of `self.lattice`.
    fn spread(&self, lat: i64) -> (i64, Vec<BigInt>) {
        let m = lat / self.lattice;
        debug_assert_eq!(m * self.lattice, lat);
        if m == 1 {
            return (self.lo, self.coeffs.clone());
        }
        let mut out = vec![BigInt::zero(); (self.coeffs.len() - 1) * m as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * m as usize] = c.clone();
        }
        (self.lo * m, out)
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let lat = self.lattice.lcm(&other.lattice);
        let (alo, ac) = self.spread(lat);
        let (blo, bc) = other.spread(lat);
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let lo = alo.min(blo);
        let hi = (alo + ac.len() as i64).max(blo + bc.len() as i64);
        let mut out = vec![BigInt::zero(); (hi - lo) as usize];
        for (i, c) in ac.iter().enumerate() {
            if !c.is_zero() {
                out[(alo - lo) as usize + i] += if fa.is_one() { c.clone() } else { c * &fa };
            }
        }
        for (i, c) in bc.iter().enumerate() {
            if !c.is_zero() {
                let t = if fb.is_one() { c.clone() } else { c * &fb };
                let slot = &mut out[(blo - lo) as usize + i];
                if negate {
                    *slot -= t;
                } else {
                    *slot += t;
                }
            }
        }
        Self::build(lat, lo, out, den)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let lat = self.lattice.lcm(&other.lattice);
        let (alo, ac) = self.spread(lat);
        let (blo, bc) = other.spread(lat);
        let coeffs = convolve(&ac, &bc);
        Self::build(lat, alo + blo, coeffs, &self.den * &other.den)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.coeffs.len() == 1 {
            let m = d.as_monomial().unwrap();
            return Some(self.mul_monomial(&m.inv().ok()?));
        }
        let lat = self.lattice.lcm(&d.lattice);
        let (nlo, nc) = self.spread(lat);
        let (dlo, mut dc) = d.spread(lat);
        if nc.len() < dc.len() {
            return None;
        }
        let mut content = BigInt::zero();
        for c in &dc {
            content = content.gcd(c);
        }
        if dc[0].is_negative() {
            content = -content;
        }
        if !content.is_one() {
            for c in dc.iter_mut() {
                *c /= &content;
            }
        }
        let qlen = nc.len() - dc.len() + 1;
        let mut quot: Vec<BigInt> = Vec::with_capacity(qlen);
        let unit = dc[0].is_one();
        for i in 0..nc.len() {
            let mut r = nc[i].clone();
            let jmin = i.saturating_sub(qlen - 1).max(1);
            let jmax = i.min(dc.len() - 1);
            for j in jmin..=jmax {
                if !dc[j].is_zero() && !quot[i - j].is_zero() {
                    r -= &dc[j] * &quot[i - j];
                }
            }
            if i < qlen {
                if unit {
                    quot.push(r);
                } else {
                    let (qv, rem) = r.div_rem(&dc[0]);
                    if !rem.is_zero() {
                        return None;
                    }
                    quot.push(qv);
                }
            } else if !r.is_zero() {
                return None;
            }
        }
        let scale = &d.den;
        if !scale.is_one() {
            for c in quot.iter_mut() {
                *c *= scale;
            }
        }
        Some(Self::build(lat, nlo - dlo, quot, &self.den * content))
    }

    /// Serialized terms `[exponent_numerator, lattice, coeff_num, coeff_den]`,
    /// sorted by exponent.
    pub fn serialize_terms(&self) -> Vec<(i64, i64, BigInt, BigInt)> {
        self.terms()
            .into_iter()
            .map(|(e, c)| {
                let num = e.numer() * (self.lattice / e.denom());
                (num, self.lattice, c.numer().clone(), c.denom().clone())
            })
            .collect()
    }

    /// Evaluates at a rational point `q = x` for the lattice-1 case.
    pub fn eval_integral_at(&self, x: &Rational) -> Option<Rational> {
        if self.lattice != 1 {
            return None;
        }
        if x.is_zero() && self.lo < 0 {
            return None;
        }
        let mut acc = Rational::zero();
        for (e, c) in self.terms() {
            acc += c * pow_rational(x, e.to_integer());
        }
        Some(acc)
    }
}

fn pow_rational(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|c| c.bits()).max().unwrap_or(0)
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len() + b.len() - 1;
    let len_bits = 64 - (a.len().min(b.len()) as u64).leading_zeros() as u64;
    if max_bits(a) + max_bits(b) + len_bits < 126 && max_bits(a) < 63 && max_bits(b) < 63 {
        let a64: Vec<i128> = a.iter().map(|c| c.to_i64().unwrap() as i128).collect();
        let b64: Vec<i128> = b.iter().map(|c| c.to_i64().unwrap() as i128).collect();
        let mut out = vec![0i128; n];
        for (i, x) in a64.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b64.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        return out.into_iter().map(BigInt::from).collect();
    }
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_signed(rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_signed(rhs, true)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.mul_impl(rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            lattice: self.lattice,
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

pub(crate) fn fmt_exp(e: Exp) -> String {
    if e.is_integer() {
        if e.to_integer() < 0 {
            format!("q^({})", e)
        } else {
            format!("q^{}", e)
        }
    } else {
        format!("q^({})", e)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if e.is_zero() {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if e.is_one() {
                    write!(f, "q")?;
                } else {
                    write!(f, "{}", fmt_exp(e))?;
                }
            }
        }
        Ok(())
    }
}
