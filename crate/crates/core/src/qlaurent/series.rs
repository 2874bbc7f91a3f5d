use std::fmt;

use num_traits::{One, Zero};

use super::{Exp, LaurentPoly, Monomial, Rational};
use crate::error::{Error, Result};

/// A power series in `q` known modulo `q^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    poly: LaurentPoly,
    prec: Exp,
}

impl Series {
    pub fn zero(prec: Exp) -> Self {
        Series {
            poly: LaurentPoly::zero(),
            prec,
        }
    }

    pub fn from_poly(p: LaurentPoly, prec: Exp) -> Self {
        Series {
            poly: p.truncate(prec),
            prec,
        }
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn prec(&self) -> Exp {
        self.prec
    }

    /// Lowest known exponent; `prec` when nothing below the cutoff survives.
    pub fn valuation(&self) -> Exp {
        self.poly.min_exp().unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        Series::from_poly(&self.poly + &o.poly, prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        Series::from_poly(&self.poly - &o.poly, prec)
    }

    pub fn neg(&self) -> Self {
        Series {
            poly: -&self.poly,
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = (self.prec + o.valuation()).min(o.prec + self.valuation());
        Series::from_poly(
            &self.poly.truncate(prec - o.valuation()) * &o.poly.truncate(prec - self.valuation()),
            prec,
        )
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        if m.is_zero() {
            return Series::zero(self.prec);
        }
        Series {
            poly: self.poly.mul_monomial(m),
            prec: self.prec + m.exp(),
        }
    }

    /// Multiplicative inverse; the leading term must be known.
    pub fn inv(&self) -> Result<Self> {
        let lead = self.poly.leading().ok_or_else(|| {
            Error::NotTruncatable("inverse of a series with unknown leading term".into())
        })?;
        let v = lead.exp();
        let unit = self.poly.mul_monomial(&lead.inv()?);
        let rel = self.prec - v;
        let lat = unit.lattice();
        let steps = (rel * lat).ceil().to_integer().max(0) as usize;
        let mut u = vec![Rational::zero(); steps];
        for (e, c) in unit.terms() {
            let i = (e * lat).to_integer() as usize;
            if i < steps {
                u[i] = c;
            }
        }
        let mut b: Vec<Rational> = Vec::with_capacity(steps);
        for n in 0..steps {
            if n == 0 {
                b.push(Rational::one());
                continue;
            }
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !u[k].is_zero() && !b[n - k].is_zero() {
                    acc -= &u[k] * &b[n - k];
                }
            }
            b.push(acc);
        }
        let inv_unit = LaurentPoly::from_terms(
            b.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Exp::new(i as i64, lat), c)),
        );
        let inv_lead = lead.inv()?;
        Ok(Series::from_poly(inv_unit.mul_monomial(&inv_lead), rel - v))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// `(a; base)_∞ mod q^prec`.
    pub fn poch_inf(a: &Monomial, base: &Monomial, prec: Exp) -> Result<Self> {
        Ok(Series::from_poly(poch_inf(a, base, prec)?, prec))
    }
}

/// `∏_{i≥0} (1 - a·base^i)` with every exponent `>= cutoff` discarded.
pub fn poch_inf(a: &Monomial, base: &Monomial, cutoff: Exp) -> Result<LaurentPoly> {
    if base.exp() <= Exp::zero() {
        return Err(Error::NotTruncatable(format!(
            "infinite product with base {} does not converge q-adically",
            base
        )));
    }
    if a.is_zero() {
        return Ok(LaurentPoly::one().truncate(cutoff));
    }
    let one = LaurentPoly::one();
    let mut head = LaurentPoly::one();
    let mut x = a.clone();
    while x.exp() <= Exp::zero() {
        head = &head * &(&one - &x.to_poly());
        x = x.mul(base);
    }
    let v = head.min_exp().unwrap_or(Exp::zero()).min(Exp::zero());
    let rel = cutoff - v;
    let mut tail = LaurentPoly::one();
    while x.exp() < rel {
        tail = (&tail * &(&one - &x.to_poly())).truncate(rel);
        x = x.mul(base);
    }
    Ok((&head * &tail).truncate(cutoff))
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(q^{})", self.poly, self.prec)
    }
}
