use std::sync::Arc;

use super::{frac, get, mono, q, qe, sqrt_of, Bindings, Generator, WPPair};
use crate::error::{Error, Result};
use crate::hyperg::{eval_phi, PhiSpec, Terms};
use crate::qlaurent::{LaurentRatio, Monomial};

pub const SEED_IDS: [&str; 8] = [
    "unit",
    "singh",
    "p31",
    "p32",
    "p4",
    "bressoud2",
    "bressoud3",
    "watson",
];

/// `(x; base)_n (1 - x base^{2n}) / (1 - x)` without the division.
fn vwp(x: &Monomial, base: &Monomial, n: i64) -> Result<LaurentRatio> {
    if n == 0 {
        return Ok(LaurentRatio::one());
    }
    let head = LaurentRatio::poch(&x.mul(base), base, n - 1)?;
    Ok(head.mul(&LaurentRatio::binomial(&x.mul(&base.pow(2 * n)?))))
}

/// `∏_{i<n} (y - xy·q^i)`, i.e. `(x)_n y^n` with the product `xy` supplied.
fn scaled(y: &Monomial, xy: &Monomial, n: i64) -> Result<LaurentRatio> {
    if y.is_zero() {
        let m = xy.neg().pow(n)?.mul(&qe(n * (n - 1) / 2, 1));
        return Ok(mono(&m));
    }
    Ok(LaurentRatio::poch(&xy.div(y)?, &q(), n)?.mul_monomial(&y.pow(n)?))
}

fn ak(b: &Bindings) -> Result<(Monomial, Monomial)> {
    Ok((get(b, "a")?.clone(), get(b, "k")?.clone()))
}

fn gen<F>(f: F) -> Generator
where
    F: Fn(i64, &Bindings) -> Result<LaurentRatio> + Send + Sync + 'static,
{
    Arc::new(f)
}

fn unit() -> WPPair {
    let alpha = gen(|n, b| {
        let (a, k) = ak(b)?;
        let top = vwp(&a, &q(), n)?.mul(&scaled(&k.div(&a)?, &Monomial::one(), n)?);
        Ok(top.mul(&frac(&[], &[q(), k.mul(&q())], &q(), n)?))
    });
    let beta = gen(|n, _| {
        Ok(if n == 0 {
            LaurentRatio::one()
        } else {
            LaurentRatio::zero()
        })
    });
    WPPair::new("unit", alpha, beta, &["a", "k"], 1, "unit pair")
}

fn singh() -> WPPair {
    fn parts(b: &Bindings) -> Result<(Monomial, Monomial, Monomial, Monomial, Monomial, Monomial)> {
        let (a, k) = ak(b)?;
        let r1 = get(b, "rho1")?.clone();
        let r2 = get(b, "rho2")?.clone();
        let aq = a.mul(&q());
        let kc = aq.div(&r1.mul(&r2))?;
        let c = k.mul(&r1).mul(&r2).div(&aq)?;
        Ok((a, k, r1, r2, c, kc))
    }
    let alpha = gen(|n, b| {
        let (a, k, r1, r2, c, kc) = parts(b)?;
        let aq = a.mul(&q());
        let top = vwp(&a, &q(), n)?.mul(&scaled(&k.div(&a)?, &kc, n)?);
        let rest = frac(
            &[r1.clone(), r2.clone()],
            &[q(), aq.div(&r1)?, aq.div(&r2)?, q().mul(&c)],
            &q(),
            n,
        )?;
        Ok(top.mul(&rest))
    });
    let beta = gen(|n, b| {
        let (a, k, r1, r2, c, kc) = parts(b)?;
        let aq = a.mul(&q());
        frac(
            &[k.mul(&r1).div(&a)?, k.mul(&r2).div(&a)?, k.clone(), kc],
            &[aq.div(&r1)?, aq.div(&r2)?, q(), q().mul(&c)],
            &q(),
            n,
        )
    });
    WPPair::new(
        "singh",
        alpha,
        beta,
        &["a", "k", "rho1", "rho2"],
        1,
        "two-parameter pair",
    )
}

fn p31() -> WPPair {
    let alpha = gen(|n, b| {
        let (a, k) = ak(b)?;
        let q = q();
        let big = q.mul(&a).mul(&a).div(&k)?;
        let mut t = vwp(&a, &q, n)?.mul(&frac(&[], std::slice::from_ref(&q), &q, n)?);
        t = t.mul(&frac(
            std::slice::from_ref(&big),
            std::slice::from_ref(&k),
            &q,
            2 * n,
        )?);
        t = t.mul(&frac(&[k.div(&a.mul(&q))?], &[big.mul(&q)], &q, n)?);
        Ok(t.mul_monomial(&k.div(&a)?.pow(n)?))
    });
    let beta = gen(|n, b| {
        let (a, k) = ak(b)?;
        let x = k.mul(&k).div(&q().mul(&a).mul(&a))?;
        frac(&[x], &[q()], &q(), n)
    });
    WPPair::new(
        "p31",
        alpha,
        beta,
        &["a", "k"],
        1,
        "first pair of the return-to-start chain",
    )
}

fn p32() -> WPPair {
    let alpha = gen(|n, b| {
        let (a, k) = ak(b)?;
        let q = q();
        let q2 = q.pow(2)?;
        let s = sqrt_of(&k, "sqrt(k)")?;
        let mut t = vwp(&a, &q, n)?;
        t = t.mul(&frac(&[a.mul(&a).mul(&q).div(&k)?], &[q.mul(&k)], &q2, n)?);
        t = t.mul(&frac(
            &[a.div(&s)?, a.mul(&q).div(&s)?.neg(), k.div(&a)?],
            &[q.clone(), q.mul(&s), s.neg(), q.mul(&a).mul(&a).div(&k)?],
            &q,
            n,
        )?);
        Ok(t.mul_monomial(&k.div(&a)?.pow(n)?))
    });
    let beta = gen(|n, b| {
        let (a, k) = ak(b)?;
        let s = sqrt_of(&k, "sqrt(k)")?;
        frac(
            &[s.clone(), k.mul(&k).div(&a.mul(&a))?],
            &[q(), q().mul(&s)],
            &q(),
            n,
        )
    });
    WPPair::new(
        "p32",
        alpha,
        beta,
        &["a", "k"],
        2,
        "second pair of the return-to-start chain",
    )
}

fn p4() -> WPPair {
    let alpha = gen(|n, b| {
        if n % 2 != 0 {
            return Ok(LaurentRatio::zero());
        }
        let m = n / 2;
        let (a, k) = ak(b)?;
        let q2 = q().pow(2)?;
        let t = vwp(&a, &q2, m)?.mul(&frac(
            &[a.mul(&a).div(&k.mul(&k))?],
            &[q2.clone(), q2.mul(&k).mul(&k).div(&a)?],
            &q2,
            m,
        )?);
        Ok(t.mul_monomial(&k.div(&a)?.pow(n)?))
    });
    let beta = gen(|n, b| {
        let (a, k) = ak(b)?;
        let q = q();
        let q2 = q.pow(2)?;
        let mut t = frac(
            &[k.clone(), a.div(&k)?],
            &[q.clone(), q.mul(&k).mul(&k).div(&a)?],
            &q,
            n,
        )?;
        t = t.mul(&frac(&[k.mul(&k).mul(&q).div(&a)?], &[a.mul(&q)], &q2, n)?);
        Ok(t.mul_monomial(&k.div(&a)?.neg().pow(n)?))
    });
    WPPair::new(
        "p4",
        alpha,
        beta,
        &["a", "k"],
        1,
        "pair with vanishing odd alpha",
    )
}

fn bressoud2() -> WPPair {
    let alpha = gen(|n, b| {
        let (a, k) = ak(b)?;
        let p = qe(1, 2);
        let sa = sqrt_of(&a, "sqrt(a)")?;
        let t = vwp(&sa, &p, n)?.mul(&frac(
            &[p.mul(&a).div(&k)?],
            &[p.clone(), k.div(&sa)?],
            &p,
            n,
        )?);
        Ok(t.mul_monomial(&k.div(&a.mul(&p))?.pow(n)?))
    });
    let beta = gen(|n, b| {
        let (a, k) = ak(b)?;
        let p = qe(1, 2);
        let sa = sqrt_of(&a, "sqrt(a)")?;
        let mut t = frac(
            &[k.clone(), a.mul(&q()).div(&k)?],
            &[q(), k.mul(&k).div(&a)?],
            &q(),
            n,
        )?;
        t = t.mul(&frac(&[k.div(&sa)?.neg()], &[sa.mul(&p).neg()], &p, 2 * n)?);
        Ok(t.mul_monomial(&k.div(&a.mul(&p))?.pow(n)?))
    });
    WPPair::new(
        "bressoud2",
        alpha,
        beta,
        &["a", "k"],
        2,
        "half-base pair, second kind",
    )
}

fn bressoud3() -> WPPair {
    let alpha = gen(|n, b| {
        let (a, k) = ak(b)?;
        let p = qe(1, 2);
        let sa = sqrt_of(&a, "sqrt(a)")?;
        let head = if n == 0 {
            LaurentRatio::one()
        } else {
            let plus = LaurentRatio::binomial(&sa.neg());
            if plus.is_zero() {
                return Err(Error::Pole("1 + sqrt(a) vanishes".into()));
            }
            LaurentRatio::poch(&sa.mul(&p), &p, n - 1)?
                .mul(&LaurentRatio::binomial(&a.mul(&q().pow(2 * n)?)))
                .div(&plus)?
        };
        let t = head.mul(&frac(
            &[a.div(&k)?],
            &[p.clone(), k.mul(&p).div(&sa)?],
            &p,
            n,
        )?);
        Ok(t.mul_monomial(&k.div(&a.mul(&p))?.pow(n)?))
    });
    let beta = gen(|n, b| {
        let (a, k) = ak(b)?;
        let p = qe(1, 2);
        let q = q();
        let sa = sqrt_of(&a, "sqrt(a)")?;
        let t = frac(
            &[
                k.clone(),
                a.div(&k)?,
                k.mul(&p).div(&sa)?.neg(),
                k.mul(&q).div(&sa)?.neg(),
            ],
            &[
                q.clone(),
                q.mul(&k).mul(&k).div(&a)?,
                sa.neg(),
                sa.mul(&p).neg(),
            ],
            &q,
            n,
        )?;
        Ok(t.mul_monomial(&k.div(&a.mul(&p))?.pow(n)?))
    });
    WPPair::new(
        "bressoud3",
        alpha,
        beta,
        &["a", "k"],
        2,
        "half-base pair, third kind",
    )
}

fn watson() -> WPPair {
    let alpha = gen(|n, b| {
        let (a, k) = ak(b)?;
        let d = get(b, "delta")?.clone();
        let q = q();
        let aqk = a.mul(&q).div(&k)?;
        let t = vwp(&a, &q, n)?.mul(&frac(
            &[d.mul(&a), aqk.clone(), aqk.div(&d)?],
            &[q.clone(), q.div(&d)?, k.clone(), k.mul(&d)],
            &q,
            n,
        )?);
        Ok(t.mul_monomial(&k.mul(&k).div(&q.mul(&a).mul(&a))?.pow(n)?))
    });
    let beta = gen(|n, b| {
        let (a, k) = ak(b)?;
        let d = get(b, "delta")?.clone();
        let q = q();
        let pre = frac(
            &[k.div(&a)?, k.div(&a.mul(&d))?],
            &[q.clone(), q.div(&d)?],
            &q,
            n,
        )?;
        if pre.is_zero() {
            return Ok(pre);
        }
        let qn = q.pow(-n)?;
        let aqk = a.mul(&q).div(&k)?;
        let spec = PhiSpec::new(
            vec![d.mul(&qn), qn.clone(), aqk.clone(), a.mul(&d)],
            vec![k.mul(&d), aqk.mul(&qn), d.mul(&aqk).mul(&qn)],
            q.clone(),
            q.clone(),
            Terms::Terminating,
        )?;
        Ok(pre.mul(&eval_phi(&spec)?))
    });
    WPPair::new(
        "watson",
        alpha,
        beta,
        &["a", "k", "delta"],
        1,
        "pair from the 8phi7 transformation",
    )
}

/// Looks up a catalog seed.
pub fn seed(id: &str) -> Result<WPPair> {
    Ok(match id {
        "unit" => unit(),
        "singh" => singh(),
        "p31" => p31(),
        "p32" => p32(),
        "p4" => p4(),
        "bressoud2" => bressoud2(),
        "bressoud3" => bressoud3(),
        "watson" => watson(),
        _ => {
            return Err(Error::Unknown {
                kind: "pair",
                name: id.into(),
            })
        }
    })
}
