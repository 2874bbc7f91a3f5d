use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::fmt_exp;
use super::{Exp, LaurentPoly, Rational};
use crate::error::{Error, Result};

/// A specialization value `c·q^e` with rational `c` and rational `e`.
///
/// The zero monomial has exponent 0, so `k = 0` compares equal regardless of
/// how it was produced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    coeff: Rational,
    exp: Exp,
}

impl Monomial {
    pub fn new(coeff: Rational, exp: Exp) -> Self {
        let exp = if coeff.is_zero() { Exp::zero() } else { exp };
        Monomial { coeff, exp }
    }

    pub fn q() -> Self {
        Self::q_pow(Exp::one())
    }

    pub fn q_pow(e: Exp) -> Self {
        Self::new(Rational::one(), e)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(c, Exp::zero())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn exp(&self) -> Exp {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exp.is_zero()
    }

    /// Smallest lattice on which the exponent lives.
    pub fn lattice(&self) -> i64 {
        *self.exp.denom()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial::new(&self.coeff * &o.coeff, self.exp + o.exp)
    }

    pub fn inv(&self) -> Result<Monomial> {
        if self.is_zero() {
            return Err(Error::Pole("division by the zero monomial".into()));
        }
        Ok(Monomial::new(self.coeff.recip(), -self.exp))
    }

    pub fn div(&self, o: &Monomial) -> Result<Monomial> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn neg(&self) -> Monomial {
        Monomial::new(-&self.coeff, self.exp)
    }

    pub fn scale(&self, c: &Rational) -> Monomial {
        Monomial::new(&self.coeff * c, self.exp)
    }

    pub fn pow(&self, n: i64) -> Result<Monomial> {
        if n == 0 {
            return Ok(Monomial::one());
        }
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        Ok(Monomial::new(
            num_traits::pow(self.coeff.clone(), n as usize),
            self.exp * n,
        ))
    }

    /// Exact `k`-th root, if the coefficient is a `k`-th power of a rational.
    pub fn root(&self, k: i64) -> Option<Monomial> {
        if k <= 0 {
            return None;
        }
        let c = rational_root(&self.coeff, k)?;
        Some(Monomial::new(c, self.exp / k))
    }

    pub fn sqrt(&self) -> Option<Monomial> {
        self.root(2)
    }

    /// `self^r` for rational `r`, requiring an exact root of the coefficient.
    pub fn pow_rational(&self, r: Exp) -> Result<Monomial> {
        let root = self.root(*r.denom()).ok_or_else(|| {
            Error::Lattice(format!(
                "{} has no exact root of order {}; choose square bindings or a finer lattice",
                self,
                r.denom()
            ))
        })?;
        root.pow(*r.numer())
    }

    /// Substitutes `q -> q^r`.
    pub fn subs_pow(&self, r: Exp) -> Monomial {
        Monomial::new(self.coeff.clone(), self.exp * r)
    }

    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::monomial(&self.coeff, self.exp)
    }
}

/// Exact `k`-th root of a rational number.
pub fn rational_root(x: &Rational, k: i64) -> Option<Rational> {
    if x.is_zero() {
        return Some(Rational::zero());
    }
    if k == 1 {
        return Some(x.clone());
    }
    let neg = x.is_negative();
    if neg && k % 2 == 0 {
        return None;
    }
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(k as u32);
        (num_traits::pow(r.clone(), k as usize) == n.abs()).then_some(r)
    };
    let n = root_int(x.numer())?;
    let d = root_int(x.denom())?;
    let r = Rational::new(n, d);
    Some(if neg { -r } else { r })
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.exp.is_zero() {
            return write!(f, "{}", self.coeff);
        }
        let q = if self.exp.is_one() {
            "q".to_string()
        } else {
            fmt_exp(self.exp)
        };
        if self.coeff.is_one() {
            write!(f, "{}", q)
        } else if (-&self.coeff).is_one() {
            write!(f, "-{}", q)
        } else {
            write!(f, "{}*{}", self.coeff, q)
        }
    }
}
