use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ast::{BinOp, CmpOp, Expr, IdentitySpec, Mode};
use crate::burge::q_kernel;
use crate::error::{Error, Result};
use crate::hyperg::{
    eval_bibasic, eval_phi, eval_w, terminating_length, BibasicSpec, PhiSpec, Terms, WSpec,
};
use crate::qbinom;
use crate::qlaurent::{rational_root, Exp, LaurentRatio, Monomial, Rational, Series};
use crate::wp_pairs::{seed, Bindings};

/// A runtime value. Arithmetic promotes along
/// `Num -> Mono -> Ratio -> Series`.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(Rational),
    Mono(Monomial),
    Ratio(LaurentRatio),
    Series(Series),
    List(Vec<Value>),
    Str(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(x) => write!(f, "{}", x),
            Value::Mono(m) => write!(f, "{}", m),
            Value::Ratio(r) => write!(f, "{}", r),
            Value::Series(s) => write!(f, "{} + O(q^{})", s.poly(), s.prec()),
            Value::List(xs) => {
                f.write_str("[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", x)?;
                }
                f.write_str("]")
            }
            Value::Str(s) => write!(f, "\"{}\"", s),
        }
    }
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Num(x) => x.is_zero(),
            Value::Mono(m) => m.is_zero(),
            Value::Ratio(r) => r.is_zero(),
            Value::Series(s) => s.is_zero(),
            _ => false,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Value::Num(_) => "number",
            Value::Mono(_) => "monomial",
            Value::Ratio(_) => "rational function",
            Value::Series(_) => "series",
            Value::List(_) => "list",
            Value::Str(_) => "string",
        }
    }

    pub fn to_ratio(&self) -> Result<LaurentRatio> {
        match self {
            Value::Num(x) => Ok(LaurentRatio::from_rational(x)),
            Value::Mono(m) => Ok(LaurentRatio::from_monomial(m)),
            Value::Ratio(r) => Ok(r.clone()),
            other => Err(Error::Eval(format!(
                "expected an exact value, got a {}",
                other.kind()
            ))),
        }
    }

    pub fn to_series(&self, prec: Exp) -> Result<Series> {
        match self {
            Value::Series(s) => Ok(s.clone()),
            other => other.to_ratio()?.to_series(prec),
        }
    }

    pub fn to_monomial(&self) -> Result<Monomial> {
        match self {
            Value::Num(x) => Ok(Monomial::constant(x.clone())),
            Value::Mono(m) => Ok(m.clone()),
            Value::Ratio(r) => r
                .as_monomial()
                .ok_or_else(|| Error::Eval(format!("expected a monomial, got {}", r))),
            other => Err(Error::Eval(format!(
                "expected a monomial, got a {}",
                other.kind()
            ))),
        }
    }
}

pub(crate) type Env = Vec<(String, Value)>;

fn lookup<'a>(env: &'a Env, name: &str) -> Result<&'a Value> {
    env.iter()
        .rev()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v)
        .ok_or_else(|| Error::Unknown {
            kind: "symbol",
            name: name.to_string(),
        })
}

fn to_exp(x: &Rational) -> Result<Exp> {
    match (x.numer().to_i64(), x.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Exp::new(n, d)),
        _ => Err(Error::Eval(format!("exponent {} is out of range", x))),
    }
}

fn num_of(v: &Value, what: &Expr) -> Result<Rational> {
    match v {
        Value::Num(x) => Ok(x.clone()),
        other => Err(Error::Eval(format!(
            "{} must be a number, got {}",
            what, other
        ))),
    }
}

fn int_of(v: &Value, what: &Expr) -> Result<i64> {
    let x = num_of(v, what)?;
    if !x.is_integer() {
        return Err(Error::Eval(format!(
            "{} must be an integer, got {}",
            what, x
        )));
    }
    x.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Eval(format!("{} is out of range", what)))
}

fn truth(b: bool) -> Value {
    Value::Num(if b { Rational::one() } else { Rational::zero() })
}

fn int(n: i64) -> Value {
    Value::Num(Rational::from_integer(n.into()))
}

/// Expression evaluator for one lattice and truncation setting.
#[derive(Clone, Debug)]
pub struct Evaluator {
    /// Exponents must lie on `(1/L)Z`; `None` disables the check.
    pub lattice: Option<i64>,
    /// Working precision in truncated mode.
    pub work: Option<Exp>,
}

impl Evaluator {
    pub fn exact(lattice: Option<i64>) -> Self {
        Evaluator {
            lattice,
            work: None,
        }
    }

    fn on_lattice(&self, m: Monomial, what: &Expr) -> Result<Monomial> {
        if let Some(l) = self.lattice {
            if !m.is_zero() && l % m.exp().denom() != 0 {
                return Err(Error::Lattice(format!(
                    "exponent {} in {} is off the lattice 1/{}",
                    m.exp(),
                    what,
                    l
                )));
            }
        }
        Ok(m)
    }

    fn series_mode(&self, a: &Value, b: &Value) -> Option<Exp> {
        match (a, b) {
            (Value::Series(s), _) | (_, Value::Series(s)) => {
                Some(self.work.unwrap_or_else(|| s.prec()))
            }
            _ => None,
        }
    }

    fn arith(&self, op: BinOp, a: Value, b: Value, e: &Expr) -> Result<Value> {
        use Value::*;
        let pole = || Error::Pole(format!("division by zero in {}", e));
        match (op, &a, &b) {
            (BinOp::Add, Num(x), Num(y)) => return Ok(Num(x + y)),
            (BinOp::Sub, Num(x), Num(y)) => return Ok(Num(x - y)),
            (BinOp::Mul, Num(x), Num(y)) => return Ok(Num(x * y)),
            (BinOp::Div, Num(x), Num(y)) => {
                return if y.is_zero() {
                    Err(pole())
                } else {
                    Ok(Num(x / y))
                };
            }
            (BinOp::Mul, Num(_) | Mono(_), Num(_) | Mono(_)) => {
                return Ok(Mono(a.to_monomial()?.mul(&b.to_monomial()?)));
            }
            (BinOp::Div, Num(_) | Mono(_), Num(_) | Mono(_)) => {
                let d = b.to_monomial()?;
                if d.is_zero() {
                    return Err(pole());
                }
                return Ok(Mono(a.to_monomial()?.div(&d)?));
            }
            (BinOp::Mul, Ratio(r), Num(_) | Mono(_)) => {
                return Ok(Ratio(r.mul_monomial(&b.to_monomial()?)))
            }
            (BinOp::Mul, Num(_) | Mono(_), Ratio(r)) => {
                return Ok(Ratio(r.mul_monomial(&a.to_monomial()?)))
            }
            _ => {}
        }
        if let Some(prec) = self.series_mode(&a, &b) {
            let (x, y) = (a.to_series(prec)?, b.to_series(prec)?);
            return Ok(Series(match op {
                BinOp::Add => x.add(&y),
                BinOp::Sub => x.sub(&y),
                BinOp::Mul => x.mul(&y),
                BinOp::Div => x.div(&y).map_err(|_| pole())?,
                BinOp::Pow => unreachable!(),
            }));
        }
        let (x, y) = (a.to_ratio()?, b.to_ratio()?);
        Ok(Ratio(match op {
            BinOp::Add => x.add(&y),
            BinOp::Sub => x.sub(&y),
            BinOp::Mul => x.mul(&y),
            BinOp::Div => {
                if y.is_zero() {
                    return Err(pole());
                }
                x.div(&y)?
            }
            BinOp::Pow => unreachable!(),
        }))
    }

    fn power(&self, base: Value, ev: &Value, e: &Expr) -> Result<Value> {
        let r = num_of(ev, e)?;
        if r.is_integer() {
            let n = r
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Eval(format!("exponent in {} is out of range", e)))?;
            return match base {
                Value::Num(x) => {
                    if x.is_zero() && n < 0 {
                        return Err(Error::Pole(format!("zero to a negative power in {}", e)));
                    }
                    let p = num_traits::pow::Pow::pow(&x, n.unsigned_abs() as u32);
                    Ok(Value::Num(if n < 0 { p.recip() } else { p }))
                }
                Value::Mono(m) => Ok(Value::Mono(self.on_lattice(m.pow(n)?, e)?)),
                Value::Ratio(x) => Ok(Value::Ratio(x.pow(n)?)),
                Value::Series(s) => {
                    let unit = if n < 0 { s.inv()? } else { s.clone() };
                    let mut acc =
                        Series::from_poly(crate::LaurentPoly::one(), s.prec().max(unit.prec()));
                    for _ in 0..n.unsigned_abs() {
                        acc = acc.mul(&unit);
                    }
                    Ok(Value::Series(acc))
                }
                other => Err(Error::Eval(format!(
                    "cannot raise a {} to a power",
                    other.kind()
                ))),
            };
        }
        let m = base.to_monomial()?;
        Ok(Value::Mono(
            self.on_lattice(m.pow_rational(to_exp(&r)?)?, e)?,
        ))
    }

    fn add_all(&self, terms: Vec<Value>) -> Result<Value> {
        if terms.iter().all(|t| matches!(t, Value::Num(_))) {
            let mut acc = Rational::zero();
            for t in &terms {
                if let Value::Num(x) = t {
                    acc += x;
                }
            }
            return Ok(Value::Num(acc));
        }
        let series_prec = terms
            .iter()
            .filter_map(|t| match t {
                Value::Series(s) => Some(s.prec()),
                _ => None,
            })
            .min();
        if let Some(prec) = self.work.or(series_prec) {
            let mut acc = Series::zero(prec);
            for t in &terms {
                if !t.is_zero() {
                    acc = acc.add(&t.to_series(prec)?);
                }
            }
            return Ok(Value::Series(acc));
        }
        let parts = terms
            .iter()
            .filter(|t| !t.is_zero())
            .map(|t| t.to_ratio())
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::Ratio(LaurentRatio::sum_all(&parts)))
    }

    fn monomials(&self, v: Value, what: &Expr) -> Result<Vec<Monomial>> {
        match v {
            Value::List(xs) => xs.iter().map(|x| x.to_monomial()).collect(),
            other => Err(Error::Eval(format!(
                "{} must be a list, got a {}",
                what,
                other.kind()
            ))),
        }
    }

    fn terms_for(&self, uppers: &[(&[Monomial], &Monomial)]) -> Terms {
        match self.work {
            Some(w)
                if uppers
                    .iter()
                    .all(|(u, b)| terminating_length(u, b).is_none()) =>
            {
                Terms::Truncate(w)
            }
            _ => Terms::Terminating,
        }
    }

    /// Zero, or invisible below the working precision in truncated mode.
    fn negligible(&self, v: &Value) -> bool {
        if v.is_zero() {
            return true;
        }
        let w = match self.work {
            Some(w) => w,
            None => return false,
        };
        match v {
            Value::Mono(m) => m.exp() >= w,
            Value::Ratio(r) => r.valuation().is_none_or(|x| x >= w),
            Value::Series(s) => s.valuation() >= w,
            _ => false,
        }
    }

    fn bounds(&self, lo: &Expr, hi: &Expr, env: &mut Env) -> Result<(i64, i64)> {
        let l = self.eval(lo, env)?;
        let h = self.eval(hi, env)?;
        Ok((int_of(&l, lo)?, int_of(&h, hi)?))
    }

    fn iterate(
        &self,
        var: &str,
        lo: i64,
        hi: i64,
        body: &Expr,
        env: &mut Env,
    ) -> Result<Vec<Value>> {
        let mut out = Vec::new();
        for j in lo..=hi {
            env.push((var.to_string(), int(j)));
            let v = self.eval(body, env);
            env.pop();
            out.push(v?);
        }
        Ok(out)
    }

    fn call(&self, name: &str, args: &[Expr], env: &mut Env, e: &Expr) -> Result<Value> {
        let var = |i: usize| match &args[i] {
            Expr::Sym(s) => s.clone(),
            _ => unreachable!("binder checked at parse time"),
        };
        match name {
            "if" => {
                let c = self.eval(&args[0], env)?;
                let c = num_of(&c, &args[0])?;
                return self.eval(if c.is_zero() { &args[2] } else { &args[1] }, env);
            }
            "sum" | "bsum" => {
                let (lo, hi) = self.bounds(&args[1], &args[2], env)?;
                let terms = self.iterate(&var(0), lo, hi, &args[3], env)?;
                if name == "bsum" && lo < hi {
                    for (j, t) in [(lo, &terms[0]), (hi, &terms[terms.len() - 1])] {
                        if !self.negligible(t) {
                            return Err(Error::Eval(format!(
                                "bilateral sum {}: boundary term at {} = {} is nonzero; widen the bounds",
                                e,
                                j,
                                t
                            )));
                        }
                    }
                }
                return self.add_all(terms);
            }
            "prod" => {
                let (lo, hi) = self.bounds(&args[1], &args[2], env)?;
                let mut acc = int(1);
                for t in self.iterate(&var(0), lo, hi, &args[3], env)? {
                    acc = self.arith(BinOp::Mul, acc, t, e)?;
                }
                return Ok(acc);
            }
            "msum" => {
                let c = self.eval(&args[1], env)?;
                let count = int_of(&c, &args[1])?;
                if count < 0 {
                    return Err(Error::Eval(format!(
                        "{}: negative index count {}",
                        e, count
                    )));
                }
                let (lo, hi) = self.bounds(&args[2], &args[3], env)?;
                let mut terms = Vec::new();
                if lo <= hi {
                    let mut idx = vec![lo; count as usize];
                    loop {
                        env.push((var(0), Value::List(idx.iter().map(|&i| int(i)).collect())));
                        let v = self.eval(&args[4], env);
                        env.pop();
                        terms.push(v?);
                        let mut k = idx.len();
                        loop {
                            if k == 0 {
                                return self.add_all(terms);
                            }
                            k -= 1;
                            if idx[k] < hi {
                                idx[k] += 1;
                                break;
                            }
                            idx[k] = lo;
                        }
                    }
                }
                return self.add_all(terms);
            }
            _ => {}
        }
        let vals = args
            .iter()
            .map(|a| self.eval(a, env))
            .collect::<Result<Vec<_>>>()?;
        let n = |i: usize| num_of(&vals[i], &args[i]);
        let i = |k: usize| int_of(&vals[k], &args[k]);
        let base = |k: usize| -> Result<Monomial> {
            match vals.get(k) {
                Some(v) => v.to_monomial(),
                None => Ok(Monomial::q()),
            }
        };
        match name {
            "qpow" => {
                let x = to_exp(&n(0)?)?;
                Ok(Value::Mono(self.on_lattice(Monomial::q_pow(x), e)?))
            }
            "sign" => Ok(int(if i(0)?.is_odd() { -1 } else { 1 })),
            "delta" => Ok(truth(n(0)?.is_zero())),
            "binom2" => {
                let m = n(0)?;
                Ok(Value::Num(
                    &m * (&m - Rational::one()) / Rational::from_integer(BigInt::from(2)),
                ))
            }
            "floor" => Ok(Value::Num(Rational::from_integer(
                n(0)?.floor().to_integer(),
            ))),
            "abs" => Ok(Value::Num(n(0)?.abs())),
            "min" | "max" => {
                let mut acc = n(0)?;
                for k in 1..vals.len() {
                    let x = n(k)?;
                    if (name == "min" && x < acc) || (name == "max" && x > acc) {
                        acc = x;
                    }
                }
                Ok(Value::Num(acc))
            }
            "sqrt" => match &vals[0] {
                Value::Num(x) => rational_root(x, 2)
                    .map(Value::Num)
                    .ok_or_else(|| Error::Inexact(format!("{} has no rational square root", x))),
                v => {
                    let m = v.to_monomial()?;
                    let r = m.sqrt().ok_or_else(|| {
                        Error::Lattice(format!("{} = {} has no exact square root", args[0], m))
                    })?;
                    Ok(Value::Mono(self.on_lattice(r, e)?))
                }
            },
            "square" => Ok(truth(match &vals[0] {
                Value::Num(x) => rational_root(x, 2).is_some(),
                v => v.to_monomial()?.sqrt().is_some(),
            })),
            "qbin" => Ok(Value::Ratio(LaurentRatio::from_poly(qbinom(
                i(0)?,
                i(1)?,
                &base(2)?,
            )))),
            "poch" => {
                let a = vals[0].to_monomial()?;
                Ok(Value::Ratio(LaurentRatio::poch(&a, &base(2)?, i(1)?)?))
            }
            "pochinf" => {
                let w = self
                    .work
                    .ok_or_else(|| Error::NotTruncatable(format!("{} needs truncated mode", e)))?;
                Ok(Value::Series(Series::poch_inf(
                    &vals[0].to_monomial()?,
                    &base(1)?,
                    w,
                )?))
            }
            "kernel" => Ok(Value::Ratio(LaurentRatio::from_poly(q_kernel(
                i(0)?,
                i(1)?,
                i(2)?,
                i(3)?,
            )))),
            "phi" => {
                let upper = self.monomials(vals[0].clone(), &args[0])?;
                let lower = self.monomials(vals[1].clone(), &args[1])?;
                let b = vals[2].to_monomial()?;
                let terms = self.terms_for(&[(&upper, &b)]);
                let spec = PhiSpec::new(upper, lower, b, vals[3].to_monomial()?, terms)?;
                Ok(Value::Ratio(eval_phi(&spec)?))
            }
            "W" => {
                let a1 = vals[0].to_monomial()?;
                let tail = self.monomials(vals[1].clone(), &args[1])?;
                let b = vals[2].to_monomial()?;
                let mut up = tail.clone();
                up.push(a1.clone());
                let terms = self.terms_for(&[(&up, &b)]);
                let spec = WSpec {
                    a1,
                    tail,
                    base: b,
                    argument: vals[3].to_monomial()?,
                    terms,
                };
                Ok(Value::Ratio(eval_w(&spec)?))
            }
            "bibasic" => {
                let l = |k: usize| self.monomials(vals[k].clone(), &args[k]);
                let (u1, l1, u2, l2) = (l(0)?, l(1)?, l(2)?, l(3)?);
                let (b1, b2) = (vals[4].to_monomial()?, vals[5].to_monomial()?);
                let terms = self.terms_for(&[(&u1, &b1), (&u2, &b2)]);
                let spec = BibasicSpec {
                    upper1: u1,
                    lower1: l1,
                    upper2: u2,
                    lower2: l2,
                    base1: b1,
                    base2: b2,
                    argument: vals[6].to_monomial()?,
                    terms,
                };
                Ok(Value::Ratio(eval_bibasic(&spec)?))
            }
            "alpha" | "beta" => {
                let id = match &vals[0] {
                    Value::Str(s) => s.clone(),
                    other => {
                        return Err(Error::Eval(format!(
                            "{}: pair id must be a string, got {}",
                            e, other
                        )))
                    }
                };
                let pair = seed(&id)?;
                let extra = &pair.required[2..];
                if vals.len() != 4 + extra.len() {
                    return Err(Error::Eval(format!(
                        "{}: pair {} takes n, a, k and {} more argument(s)",
                        e,
                        id,
                        extra.len()
                    )));
                }
                let mut b = Bindings::new();
                b.insert("a".into(), vals[2].to_monomial()?);
                b.insert("k".into(), vals[3].to_monomial()?);
                for (k, key) in extra.iter().enumerate() {
                    b.insert(key.clone(), vals[4 + k].to_monomial()?);
                }
                let r = if name == "alpha" {
                    pair.alpha(i(1)?, &b)?
                } else {
                    pair.beta(i(1)?, &b)?
                };
                Ok(Value::Ratio(r))
            }
            other => Err(Error::Unknown {
                kind: "builtin",
                name: other.to_string(),
            }),
        }
    }

    pub(crate) fn eval(&self, e: &Expr, env: &mut Env) -> Result<Value> {
        match e {
            Expr::Int(n) => Ok(int(*n)),
            Expr::Sym(s) => lookup(env, s).cloned(),
            Expr::Str(s) => Ok(Value::Str(s.clone())),
            Expr::List(xs) => Ok(Value::List(
                xs.iter()
                    .map(|x| self.eval(x, env))
                    .collect::<Result<_>>()?,
            )),
            Expr::Neg(x) => Ok(match self.eval(x, env)? {
                Value::Num(v) => Value::Num(-v),
                Value::Mono(m) => Value::Mono(m.neg()),
                Value::Ratio(r) => Value::Ratio(r.neg()),
                Value::Series(s) => Value::Series(s.neg()),
                other => return Err(Error::Eval(format!("cannot negate a {}", other.kind()))),
            }),
            Expr::Bin(BinOp::Pow, l, r) => {
                let b = self.eval(l, env)?;
                let x = self.eval(r, env)?;
                self.power(b, &x, e)
            }
            Expr::Bin(op, l, r) => {
                let a = self.eval(l, env)?;
                let b = self.eval(r, env)?;
                self.arith(*op, a, b, e)
            }
            Expr::Cmp(op, l, r) => {
                let a = self.eval(l, env)?;
                let b = self.eval(r, env)?;
                let (x, y) = (num_of(&a, l)?, num_of(&b, r)?);
                Ok(truth(match op {
                    CmpOp::Eq => x == y,
                    CmpOp::Ne => x != y,
                    CmpOp::Lt => x < y,
                    CmpOp::Le => x <= y,
                    CmpOp::Gt => x > y,
                    CmpOp::Ge => x >= y,
                }))
            }
            Expr::Index(x, i) => {
                let list = self.eval(x, env)?;
                let iv = self.eval(i, env)?;
                let k = int_of(&iv, i)?;
                match list {
                    Value::List(xs) => {
                        if k < 1 || k as usize > xs.len() {
                            return Err(Error::Eval(format!(
                                "index {} out of range 1..{} in {}",
                                k,
                                xs.len(),
                                e
                            )));
                        }
                        Ok(xs[k as usize - 1].clone())
                    }
                    other => Err(Error::Eval(format!(
                        "cannot index a {} in {}",
                        other.kind(),
                        e
                    ))),
                }
            }
            Expr::Call(name, args) => self.call(name, args, env, e),
        }
    }
}

/// Evaluates an expression in which only `q` and the given bindings are free.
pub fn eval_closed(e: &Expr, bindings: &[(String, Monomial)]) -> Result<Value> {
    let mut env: Env = vec![("q".into(), Value::Mono(Monomial::q()))];
    env.extend(
        bindings
            .iter()
            .map(|(k, v)| (k.clone(), Value::Mono(v.clone()))),
    );
    Evaluator::exact(None).eval(e, &mut env)
}

/// Evaluates a binding set to monomials, in order.
pub fn binding_values(
    spec: &IdentitySpec,
    set: &[(String, Expr)],
) -> Result<Vec<(String, Monomial)>> {
    let ev = Evaluator::exact(Some(spec.lattice));
    let mut env: Env = vec![("q".into(), Value::Mono(Monomial::q()))];
    let mut out = Vec::new();
    for (name, e) in set {
        let m = ev.eval(e, &mut env)?.to_monomial()?;
        let m = ev.on_lattice(m, e)?;
        env.push((name.clone(), Value::Mono(m.clone())));
        out.push((name.clone(), m));
    }
    Ok(out)
}

/// Both sides of one instance.
#[derive(Clone, Debug)]
pub enum Sides {
    Exact(LaurentRatio, LaurentRatio),
    /// Series known at least modulo `q^order`.
    Truncated {
        lhs: Series,
        rhs: Series,
        order: i64,
    },
}

impl Sides {
    pub fn agree(&self) -> bool {
        match self {
            Sides::Exact(l, r) => l.ratio_eq(r),
            Sides::Truncated { lhs, rhs, order } => {
                let cut = Exp::from_integer(*order);
                lhs.poly().truncate(cut) == rhs.poly().truncate(cut)
            }
        }
    }
}

fn instance_env(
    spec: &IdentitySpec,
    ev: &Evaluator,
    binds: &[(String, Monomial)],
    ints: &[(String, i64)],
    order: Option<i64>,
) -> Result<Option<Env>> {
    let mut env: Env = vec![("q".into(), Value::Mono(Monomial::q()))];
    if let Some(t) = order {
        env.push(("T".into(), int(t)));
    }
    env.extend(
        binds
            .iter()
            .map(|(k, v)| (k.clone(), Value::Mono(v.clone()))),
    );
    env.extend(ints.iter().map(|(k, v)| (k.clone(), int(*v))));
    for (name, e) in &spec.lets {
        let v = ev.eval(e, &mut env)?;
        env.push((name.clone(), v));
    }
    for c in &spec.filters {
        let v = ev.eval(c, &mut env)?;
        if num_of(&v, c)?.is_zero() {
            return Ok(None);
        }
    }
    for c in &spec.requires {
        let v = ev.eval(c, &mut env)?;
        if num_of(&v, c)?.is_zero() {
            return Err(Error::Eval(format!("constraint {} does not hold", c)));
        }
    }
    Ok(Some(env))
}

/// Evaluates both sides at one instance; `None` when a `where` filter
/// excludes it. `order` overrides the stanza's truncation order.
pub fn eval_sides(
    spec: &IdentitySpec,
    binds: &[(String, Monomial)],
    ints: &[(String, i64)],
    order: Option<i64>,
) -> Result<Option<Sides>> {
    let t = match (spec.mode, order) {
        (Mode::Exact, None) => None,
        (Mode::Exact, Some(_)) => {
            return Err(Error::Eval(format!(
                "{} is exact; a truncation order does not apply",
                spec.id
            )))
        }
        (Mode::Truncated(t), o) => Some(o.unwrap_or(t)),
    };
    let t = match t {
        None => {
            let ev = Evaluator::exact(Some(spec.lattice));
            let mut env = match instance_env(spec, &ev, binds, ints, None)? {
                Some(env) => env,
                None => return Ok(None),
            };
            let l = ev.eval(&spec.lhs, &mut env)?.to_ratio()?;
            let r = ev.eval(&spec.rhs, &mut env)?.to_ratio()?;
            return Ok(Some(Sides::Exact(l, r)));
        }
        Some(t) => t,
    };
    let target = Exp::from_integer(t);
    let mut slack = 10;
    for _ in 0..5 {
        let ev = Evaluator {
            lattice: Some(spec.lattice),
            work: Some(Exp::from_integer(t + slack)),
        };
        let w = ev.work.unwrap();
        let mut env = match instance_env(spec, &ev, binds, ints, Some(t))? {
            Some(env) => env,
            None => return Ok(None),
        };
        let l = ev.eval(&spec.lhs, &mut env)?.to_series(w)?;
        let r = ev.eval(&spec.rhs, &mut env)?.to_series(w)?;
        if l.prec() >= target && r.prec() >= target {
            return Ok(Some(Sides::Truncated {
                lhs: l,
                rhs: r,
                order: t,
            }));
        }
        slack *= 2;
    }
    Err(Error::NotTruncatable(format!(
        "{}: precision stays below q^{} even with extra working terms",
        spec.id, t
    )))
}
