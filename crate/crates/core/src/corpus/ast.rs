use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Sym(String),
    Str(String),
    List(Vec<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Index(Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntParam {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Compare modulo `q^T`.
    Truncated(i64),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Truncated(t) => write!(f, "truncated {}", t),
        }
    }
}

/// One parsed catalog stanza.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySpec {
    pub id: String,
    pub label: String,
    pub lattice: i64,
    pub ints: Vec<IntParam>,
    pub params: Vec<String>,
    /// Default binding sets; each assigns every declared parameter.
    pub bindings: Vec<Vec<(String, Expr)>>,
    pub lets: Vec<(String, Expr)>,
    /// Instances failing a `where` condition are skipped.
    pub filters: Vec<Expr>,
    /// Instances failing a `require` condition are reported as errors.
    pub requires: Vec<Expr>,
    pub mode: Mode,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl IdentitySpec {
    pub fn int_param(&self, name: &str) -> Option<&IntParam> {
        self.ints.iter().find(|p| p.name == name)
    }
}

impl BinOp {
    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 2,
            BinOp::Mul | BinOp::Div => 3,
            BinOp::Pow => 5,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

const PREC_CMP: u8 = 1;
const PREC_UNARY: u8 = 4;
const PREC_POSTFIX: u8 = 6;
const PREC_ATOM: u8 = 7;

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Cmp(..) => PREC_CMP,
            Expr::Bin(op, ..) => op.prec(),
            Expr::Neg(_) => PREC_UNARY,
            Expr::Index(..) => PREC_POSTFIX,
            _ => PREC_ATOM,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Int(n) => write!(f, "{}", n)?,
            Expr::Sym(s) => f.write_str(s)?,
            Expr::Str(s) => write!(f, "\"{}\"", s)?,
            Expr::List(xs) => {
                f.write_str("[")?;
                write_args(f, xs)?;
                f.write_str("]")?;
            }
            Expr::Neg(x) => {
                f.write_str("-")?;
                x.write(f, PREC_UNARY)?;
            }
            Expr::Bin(BinOp::Pow, l, r) => {
                l.write(f, PREC_POSTFIX)?;
                f.write_str("^")?;
                r.write(f, PREC_UNARY)?;
            }
            Expr::Bin(op, l, r) => {
                l.write(f, op.prec())?;
                f.write_str(op.symbol())?;
                r.write(f, op.prec() + 1)?;
            }
            Expr::Cmp(op, l, r) => {
                l.write(f, PREC_CMP + 1)?;
                write!(f, " {} ", op.symbol())?;
                r.write(f, PREC_CMP + 1)?;
            }
            Expr::Index(x, i) => {
                x.write(f, PREC_ATOM)?;
                f.write_str("[")?;
                i.write(f, 0)?;
                f.write_str("]")?;
            }
            Expr::Call(name, args) => {
                write!(f, "{}(", name)?;
                write_args(f, args)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, xs: &[Expr]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        x.write(f, 0)?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

fn write_assignments(f: &mut fmt::Formatter<'_>, xs: &[(String, Expr)]) -> fmt::Result {
    for (i, (name, e)) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{} = {}", name, e)?;
    }
    Ok(())
}

impl fmt::Display for IdentitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "identity \"{}\" {{", self.id)?;
        if !self.label.is_empty() {
            writeln!(f, "  label \"{}\"", self.label)?;
        }
        writeln!(f, "  lattice {}", self.lattice)?;
        for p in &self.ints {
            writeln!(f, "  int {} range {}..{}", p.name, p.lo, p.hi)?;
        }
        if !self.params.is_empty() {
            writeln!(f, "  param {}", self.params.join(", "))?;
        }
        for set in &self.bindings {
            f.write_str("  bind ")?;
            write_assignments(f, set)?;
            writeln!(f)?;
        }
        for (name, e) in &self.lets {
            writeln!(f, "  let {} = {}", name, e)?;
        }
        for c in &self.filters {
            writeln!(f, "  where {}", c)?;
        }
        for c in &self.requires {
            writeln!(f, "  require {}", c)?;
        }
        writeln!(f, "  mode {}", self.mode)?;
        writeln!(f, "  lhs {}", self.lhs)?;
        writeln!(f, "  rhs {}", self.rhs)?;
        writeln!(f, "}}")
    }
}
