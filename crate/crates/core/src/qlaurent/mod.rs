//! Exact arithmetic core: rationals, lattice Laurent polynomials, factored
//! rational functions, truncated series, Pochhammer symbols and Gaussian
//! binomials.

mod monomial;
mod poly;
mod ratio;
mod series;
mod special;

pub use monomial::{rational_root, Monomial};
pub use poly::LaurentPoly;
pub use ratio::LaurentRatio;
pub use series::{poch_inf, Series};
pub use special::{pochhammer, qbinom};

/// Arbitrary-precision rational, the coefficient domain.
pub type Rational = num_rational::BigRational;

/// Exponent of `q`; always an exact rational.
pub type Exp = num_rational::Ratio<i64>;

/// `x.num · y.den == y.num · x.den`.
pub fn ratio_eq(x: &LaurentRatio, y: &LaurentRatio) -> bool {
    x.ratio_eq(y)
}

/// Parses `"p"` or `"p/r"` into an exponent.
pub fn exp(n: i64, d: i64) -> Exp {
    Exp::new(n, d)
}
