use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::One;

use super::{Exp, LaurentPoly, Monomial};
use crate::error::{Error, Result};

/// `(a; base)_n = ∏_{i<n} (1 - a·base^i)`.
pub fn pochhammer(a: &Monomial, base: &Monomial, n: i64) -> Result<LaurentPoly> {
    if n < 0 {
        return Err(Error::NegativeLength(n));
    }
    if base.is_zero() {
        return Err(Error::Eval("Pochhammer base must be nonzero".into()));
    }
    let one = LaurentPoly::one();
    let mut acc = LaurentPoly::one();
    let mut x = a.clone();
    for _ in 0..n {
        acc = &acc * &(&one - &x.to_poly());
        if acc.is_zero() {
            break;
        }
        x = x.mul(base);
    }
    Ok(acc)
}

fn cache() -> &'static Mutex<HashMap<(i64, i64), LaurentPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(i64, i64), LaurentPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `[n, k]_q` for `0 <= k <= n`, built from `[n-1, k-1]`.
fn qbinom_q(n: i64, k: i64) -> LaurentPoly {
    if k == 0 || k == n {
        return LaurentPoly::one();
    }
    if let Some(p) = cache().lock().unwrap().get(&(n, k)) {
        return p.clone();
    }
    let mut start = k;
    while start > 0 {
        if cache()
            .lock()
            .unwrap()
            .contains_key(&(n - k + start - 1, start - 1))
        {
            break;
        }
        start -= 1;
    }
    let one = LaurentPoly::one();
    let mut acc = if start == 0 {
        LaurentPoly::one()
    } else {
        cache().lock().unwrap()[&(n - k + start - 1, start - 1)].clone()
    };
    let q = LaurentPoly::q();
    for i in start.max(1)..=k {
        let top = n - k + i;
        acc = &acc * &(&one - &q.pow(top as u32));
        acc = acc
            .div_exact(&(&one - &q.pow(i as u32)))
            .expect("q-binomial quotient is exact");
        if i < top {
            cache().lock().unwrap().insert((top, i), acc.clone());
        }
    }
    acc
}

/// Gaussian binomial `[top, bottom]` in base `base`.
///
/// Zero for negative `bottom`; arbitrary integer `top` is allowed, with
/// `[top, bottom] = (base^{top-bottom+1}; base)_bottom / (base; base)_bottom`.
pub fn qbinom(top: i64, bottom: i64, base: &Monomial) -> LaurentPoly {
    if bottom < 0 {
        return LaurentPoly::zero();
    }
    if bottom == 0 {
        return LaurentPoly::one();
    }
    if base.coeff().is_one() {
        let e = base.exp();
        let p = if top >= 0 {
            if bottom > top {
                return LaurentPoly::zero();
            }
            qbinom_q(top, bottom.min(top - bottom))
        } else {
            // [n, k] = (-1)^k q^{kn - k(k-1)/2} [k - n - 1, k]
            let k = bottom;
            let shift = k * top - k * (k - 1) / 2;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let m = Monomial::new(
                super::Rational::from_integer(sign.into()),
                Exp::from_integer(shift),
            );
            let inner = qbinom_q(k - top - 1, k.min(-top - 1));
            inner.mul_monomial(&m)
        };
        return if e.is_one() { p } else { p.subs_pow(e) };
    }
    let one = LaurentPoly::one();
    let mut acc = LaurentPoly::one();
    for i in 1..=bottom {
        let num = base.pow(top - bottom + i).expect("nonzero base");
        let den = base.pow(i).expect("nonzero base");
        acc = &acc * &(&one - &num.to_poly());
        acc = acc
            .div_exact(&(&one - &den.to_poly()))
            .expect("q-binomial quotient is exact");
    }
    acc
}
