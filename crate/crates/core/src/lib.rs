//! Exact computer-algebra engine for WP-Bailey pairs, Burge pairs and the
//! finite and truncated q-series identities they generate.

pub mod burge;
pub mod corpus;
mod error;
pub mod hyperg;
pub mod qlaurent;
pub mod wp_pairs;

pub use error::{Error, Result};
pub use qlaurent::{
    pochhammer, qbinom, ratio_eq, Exp, LaurentPoly, LaurentRatio, Monomial, Rational, Series,
};
