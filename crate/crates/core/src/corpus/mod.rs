//! The identity DSL: stanza parser and printer, evaluator, verification
//! sweeps and the bundled catalog.

mod ast;
mod eval;
mod lexer;
mod parser;
mod verify;

use std::collections::BTreeSet;

pub use ast::{BinOp, CmpOp, Expr, IdentitySpec, IntParam, Mode};
pub use eval::{binding_values, eval_closed, eval_sides, Evaluator, Sides, Value};
pub use parser::{is_builtin, parse_bindings, parse_catalog, parse_expr, parse_identity};
pub use verify::{verify_identity, Failure, InstanceResult, Rendered, Report, Term, VerifyOptions};

use crate::error::{Error, Result};

const CATALOG: &[(&str, &str)] = &[
    ("pairs.wpt", include_str!("catalog/pairs.wpt")),
    ("polynomial.wpt", include_str!("catalog/polynomial.wpt")),
    ("burge.wpt", include_str!("catalog/burge.wpt")),
    ("truncated.wpt", include_str!("catalog/truncated.wpt")),
];

/// Every bundled stanza, in file order.
pub fn catalog() -> Result<Vec<IdentitySpec>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (file, text) in CATALOG {
        let specs = parse_catalog(text).map_err(|e| Error::Eval(format!("{}: {}", file, e)))?;
        for s in specs {
            if !seen.insert(s.id.clone()) {
                return Err(Error::Eval(format!(
                    "{}: duplicate identity id {}",
                    file, s.id
                )));
            }
            out.push(s);
        }
    }
    Ok(out)
}

/// Looks up a catalog stanza by id.
pub fn find(id: &str) -> Result<IdentitySpec> {
    catalog()?
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::Unknown {
            kind: "identity",
            name: id.to_string(),
        })
}
