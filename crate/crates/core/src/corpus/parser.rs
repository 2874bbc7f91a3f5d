use super::ast::{BinOp, CmpOp, Expr, IdentitySpec, IntParam, Mode};
use super::lexer::{tokenize, Tok, Token};
use crate::error::{Error, Result};

/// Builtin name, minimum and maximum arity (`usize::MAX` for variadic).
const BUILTINS: &[(&str, usize, usize)] = &[
    ("qpow", 1, 1),
    ("sign", 1, 1),
    ("qbin", 2, 3),
    ("poch", 2, 3),
    ("pochinf", 1, 2),
    ("delta", 1, 1),
    ("binom2", 1, 1),
    ("floor", 1, 1),
    ("min", 2, usize::MAX),
    ("max", 2, usize::MAX),
    ("abs", 1, 1),
    ("sqrt", 1, 1),
    ("square", 1, 1),
    ("sum", 4, 4),
    ("prod", 4, 4),
    ("bsum", 4, 4),
    ("msum", 5, 5),
    ("if", 3, 3),
    ("kernel", 4, 4),
    ("phi", 4, 4),
    ("W", 4, 4),
    ("bibasic", 7, 7),
    ("alpha", 4, usize::MAX),
    ("beta", 4, usize::MAX),
];

/// Builtins whose first argument names a bound summation variable.
const BINDERS: &[&str] = &["sum", "prod", "bsum", "msum"];

pub fn is_builtin(name: &str) -> bool {
    BUILTINS.iter().any(|b| b.0 == name)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: String) -> Result<T> {
        let t = self.here();
        Err(Error::Parse {
            line: t.line,
            col: t.col,
            msg,
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            self.error(format!(
                "expected {} but found {}",
                tok.describe(),
                self.peek().describe()
            ))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected a name but found {}", t.describe())),
        }
    }

    fn string(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected a string but found {}", t.describe())),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            ref t => self.error(format!("expected an integer but found {}", t.describe())),
        }
    }

    fn close(&mut self, open: &Token, tok: Tok) -> Result<()> {
        if self.eat(&tok) {
            return Ok(());
        }
        if *self.peek() == Tok::Eof {
            return Err(Error::Parse {
                line: open.line,
                col: open.col,
                msg: format!(
                    "unbalanced parenthesis: {} is never closed",
                    open.tok.describe()
                ),
            });
        }
        self.error(format!(
            "expected {} but found {}",
            tok.describe(),
            self.peek().describe()
        ))
    }

    fn expr(&mut self) -> Result<Expr> {
        let lhs = self.additive()?;
        let op = match self.peek() {
            Tok::EqEq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.additive()?;
        Ok(Expr::Cmp(op, Box::new(lhs), Box::new(rhs)))
    }

    fn additive(&mut self) -> Result<Expr> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.multiplicative()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn multiplicative(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.postfix()?;
        if self.eat(&Tok::Caret) {
            let e = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        while *self.peek() == Tok::LBrack {
            let open = self.bump();
            let i = self.expr()?;
            self.close(&open, Tok::RBrack)?;
            e = Expr::Index(Box::new(e), Box::new(i));
        }
        Ok(e)
    }

    fn args(&mut self, open: &Token, end: Tok) -> Result<Vec<Expr>> {
        let mut out = Vec::new();
        if self.eat(&end) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.close(open, end)?;
            return Ok(out);
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::Str(s))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    let open = self.bump();
                    let args = self.args(&open, Tok::RParen)?;
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Sym(name))
                }
            }
            Tok::LParen => {
                let open = self.bump();
                let e = self.expr()?;
                self.close(&open, Tok::RParen)?;
                Ok(e)
            }
            Tok::LBrack => {
                let open = self.bump();
                Ok(Expr::List(self.args(&open, Tok::RBrack)?))
            }
            t => self.error(format!("expected an expression but found {}", t.describe())),
        }
    }

    fn assignments(&mut self) -> Result<Vec<(String, Expr)>> {
        let mut out = Vec::new();
        loop {
            let name = self.ident()?;
            self.expect(Tok::Assign)?;
            out.push((name, self.expr()?));
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn stanza(&mut self) -> Result<IdentitySpec> {
        match self.peek() {
            Tok::Ident(s) if s == "identity" => {
                self.bump();
            }
            t => return self.error(format!("expected 'identity' but found {}", t.describe())),
        }
        let id = self.string()?;
        let open = self.expect(Tok::LBrace)?;
        let mut spec = IdentitySpec {
            id,
            label: String::new(),
            lattice: 1,
            ints: Vec::new(),
            params: Vec::new(),
            bindings: Vec::new(),
            lets: Vec::new(),
            filters: Vec::new(),
            requires: Vec::new(),
            mode: Mode::Exact,
            lhs: Expr::Int(0),
            rhs: Expr::Int(0),
        };
        let (mut lhs, mut rhs) = (None, None);
        loop {
            if self.eat(&Tok::RBrace) {
                break;
            }
            if *self.peek() == Tok::Eof {
                return Err(Error::Parse {
                    line: open.line,
                    col: open.col,
                    msg: "unbalanced brace: '{' is never closed".into(),
                });
            }
            let kw = self.ident()?;
            match kw.as_str() {
                "label" => spec.label = self.string()?,
                "lattice" => {
                    let l = self.int()?;
                    if l < 1 {
                        return self.error(format!("lattice must be positive, got {}", l));
                    }
                    spec.lattice = l;
                }
                "int" => {
                    let name = self.ident()?;
                    match self.ident()?.as_str() {
                        "range" => {}
                        other => {
                            return self.error(format!("expected 'range' but found '{}'", other))
                        }
                    }
                    let lo = self.int()?;
                    self.expect(Tok::DotDot)?;
                    let hi = self.int()?;
                    spec.ints.push(IntParam { name, lo, hi });
                }
                "param" => loop {
                    spec.params.push(self.ident()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                },
                "bind" => spec.bindings.push(self.assignments()?),
                "let" => {
                    let name = self.ident()?;
                    self.expect(Tok::Assign)?;
                    spec.lets.push((name, self.expr()?));
                }
                "where" => spec.filters.push(self.expr()?),
                "require" => spec.requires.push(self.expr()?),
                "mode" => {
                    spec.mode = match self.ident()?.as_str() {
                        "exact" => Mode::Exact,
                        "truncated" => Mode::Truncated(self.int()?),
                        other => return self.error(format!("unknown mode '{}'", other)),
                    }
                }
                "lhs" => lhs = Some(self.expr()?),
                "rhs" => rhs = Some(self.expr()?),
                other => return self.error(format!("unknown stanza item '{}'", other)),
            }
            self.eat(&Tok::Semi);
        }
        spec.lhs = lhs.ok_or_else(|| Error::Eval(format!("{}: missing lhs", spec.id)))?;
        spec.rhs = rhs.ok_or_else(|| Error::Eval(format!("{}: missing rhs", spec.id)))?;
        validate(&spec)?;
        for set in &spec.bindings {
            super::eval::binding_values(&spec, set)?;
        }
        Ok(spec)
    }
}

fn check(e: &Expr, scope: &mut Vec<String>) -> Result<()> {
    match e {
        Expr::Int(_) | Expr::Str(_) => Ok(()),
        Expr::Sym(s) => {
            if scope.iter().any(|x| x == s) {
                Ok(())
            } else {
                Err(Error::Unknown {
                    kind: "symbol",
                    name: s.clone(),
                })
            }
        }
        Expr::List(xs) => xs.iter().try_for_each(|x| check(x, scope)),
        Expr::Neg(x) => check(x, scope),
        Expr::Bin(_, l, r) | Expr::Cmp(_, l, r) | Expr::Index(l, r) => {
            check(l, scope)?;
            check(r, scope)
        }
        Expr::Call(name, args) => {
            let &(_, lo, hi) =
                BUILTINS
                    .iter()
                    .find(|b| b.0 == name)
                    .ok_or_else(|| Error::Unknown {
                        kind: "builtin",
                        name: name.clone(),
                    })?;
            if args.len() < lo || args.len() > hi {
                return Err(Error::Eval(format!(
                    "{} takes {} arguments, got {}",
                    name,
                    arity(lo, hi),
                    args.len()
                )));
            }
            if BINDERS.contains(&name.as_str()) {
                let var = match &args[0] {
                    Expr::Sym(v) => v.clone(),
                    other => {
                        return Err(Error::Eval(format!(
                            "{}: first argument must be a variable, got {}",
                            name, other
                        )))
                    }
                };
                let last = args.len() - 1;
                for a in &args[1..last] {
                    check(a, scope)?;
                }
                scope.push(var);
                let r = check(&args[last], scope);
                scope.pop();
                return r;
            }
            args.iter().try_for_each(|a| check(a, scope))
        }
    }
}

fn arity(lo: usize, hi: usize) -> String {
    if lo == hi {
        lo.to_string()
    } else if hi == usize::MAX {
        format!("at least {}", lo)
    } else {
        format!("{} to {}", lo, hi)
    }
}

fn validate(spec: &IdentitySpec) -> Result<()> {
    let mut declared: Vec<String> = vec!["q".into()];
    if let Mode::Truncated(t) = spec.mode {
        if t < 1 {
            return Err(Error::Eval(format!(
                "{}: truncation order must be positive",
                spec.id
            )));
        }
        declared.push("T".into());
    }
    let mut seen = declared.clone();
    for name in spec.ints.iter().map(|p| &p.name).chain(&spec.params) {
        if seen.contains(name) || is_builtin(name) {
            return Err(Error::Eval(format!(
                "{}: '{}' is declared twice or shadows a builtin",
                spec.id, name
            )));
        }
        seen.push(name.clone());
    }
    for p in &spec.ints {
        if p.lo > p.hi {
            return Err(Error::Eval(format!(
                "{}: empty range {}..{} for {}",
                spec.id, p.lo, p.hi, p.name
            )));
        }
    }
    if !spec.params.is_empty() && spec.bindings.is_empty() {
        return Err(Error::Eval(format!(
            "{}: parameters need at least one bind line",
            spec.id
        )));
    }
    for set in &spec.bindings {
        check_binding_set(spec, set)?;
    }
    let mut scope = seen;
    for (name, e) in &spec.lets {
        check(e, &mut scope)?;
        if scope.contains(name) {
            return Err(Error::Eval(format!(
                "{}: '{}' is declared twice",
                spec.id, name
            )));
        }
        scope.push(name.clone());
    }
    for e in spec.filters.iter().chain(&spec.requires) {
        check(e, &mut scope)?;
    }
    check(&spec.lhs, &mut scope)?;
    check(&spec.rhs, &mut scope)
}

/// Checks that a binding set assigns each declared parameter once, using
/// only `q` and parameters assigned before it.
pub(crate) fn check_binding_set(spec: &IdentitySpec, set: &[(String, Expr)]) -> Result<()> {
    let mut scope: Vec<String> = vec!["q".into()];
    for (name, e) in set {
        if !spec.params.contains(name) {
            return Err(Error::Unknown {
                kind: "parameter",
                name: name.clone(),
            });
        }
        if scope.contains(name) {
            return Err(Error::Eval(format!(
                "{}: '{}' is bound twice",
                spec.id, name
            )));
        }
        check(e, &mut scope)?;
        scope.push(name.clone());
    }
    for p in &spec.params {
        if !scope.contains(p) {
            return Err(Error::MissingBinding(p.clone()));
        }
    }
    Ok(())
}

/// Parses a file of stanzas.
pub fn parse_catalog(text: &str) -> Result<Vec<IdentitySpec>> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while *p.peek() != Tok::Eof {
        out.push(p.stanza()?);
    }
    Ok(out)
}

/// Parses exactly one stanza.
pub fn parse_identity(text: &str) -> Result<IdentitySpec> {
    let mut p = Parser::new(text)?;
    let s = p.stanza()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!(
            "unexpected {} after the stanza",
            p.peek().describe()
        ));
    }
    Ok(s)
}

/// Parses a standalone expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!(
            "unexpected {} after the expression",
            p.peek().describe()
        ));
    }
    Ok(e)
}

/// Parses `name = expr, name = expr, ...`.
pub fn parse_bindings(text: &str) -> Result<Vec<(String, Expr)>> {
    let mut p = Parser::new(text)?;
    if *p.peek() == Tok::Eof {
        return Ok(Vec::new());
    }
    let out = p.assignments()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!(
            "unexpected {} after the bindings",
            p.peek().describe()
        ));
    }
    Ok(out)
}
