//! Textual input language for ODEs and differential polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' ['-'] integer)?
//! base   := number | 'x' | 'y' "'"* | 'D(y,' integer ')'
//!         | 'D(' name (',' ('x'|'y'))+ ')' | name '(x,y)' | name | '(' expr ')'
//! ```
//!
//! An equation is `expr = expr`; a bare `expr` means `expr = 0`.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{DiffPolynomial as Poly, Func, Rational, Var};
use crate::rational::DiffRational;

/// A quasi-linear ODE `y^(n) + f = 0` with its parameters `P` and
/// undetermined functions `H`.
#[derive(Clone, PartialEq, Eq)]
pub struct ODEProblem {
    pub order: u32,
    pub f: DiffRational,
    pub params: Vec<Func>,
    pub funcs: Vec<Func>,
}

impl ODEProblem {
    pub fn has_parameters(&self) -> bool {
        !self.params.is_empty() || !self.funcs.is_empty()
    }

    /// `M`, the numerator of `f`.
    pub fn numerator(&self) -> &Poly {
        self.f.numer()
    }

    /// `N`, the denominator of `f`.
    pub fn denominator(&self) -> &Poly {
        self.f.denom()
    }

    /// Render in the input grammar; `parse_ode` reads it back.
    pub fn render(&self) -> String {
        format!(
            "{} + ({})/({}) = 0",
            Var::Jet(self.order),
            self.f.numer(),
            self.f.denom()
        )
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.iter().map(Func::name).collect()
    }

    pub fn func_names(&self) -> Vec<String> {
        self.funcs.iter().map(Func::name).collect()
    }
}

impl fmt::Debug for ODEProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Primes(u32),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = cs[st..i].iter().collect();
            out.push((st, Tok::Num(text.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push((st, Tok::Ident(cs[st..i].iter().collect())));
        } else if c == '\'' {
            let st = i;
            while i < cs.len() && cs[i] == '\'' {
                i += 1;
            }
            out.push((st, Tok::Primes((i - st) as u32)));
        } else if "+-*/^(),=".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Names declared as parameters or undetermined functions.
#[derive(Clone, Debug, Default)]
pub struct Names {
    pub params: Vec<String>,
    pub funcs: Vec<String>,
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    names: &'a Names,
}

fn reserved(name: &str) -> bool {
    matches!(name, "x" | "y" | "D" | "xi" | "eta" | "phi" | "psi")
        || (name.len() > 1 && name.starts_with('a') && name[1..].chars().all(|c| c.is_ascii_digit()))
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, c: char) -> Result<()> {
        if self.eat_op(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    fn integer(&mut self) -> Result<u32> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                u32::try_from(n).or_else(|_| self.err("integer too large"))
            }
            _ => self.err("expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<DiffRational> {
        let neg = if self.eat_op('-') {
            true
        } else {
            self.eat_op('+');
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat_op('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat_op('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffRational> {
        let mut acc = self.factor()?;
        loop {
            if self.eat_op('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat_op('/') {
                let at = self.here();
                let d = self.factor()?;
                acc = acc.div(&d).map_err(|_| Error::Syntax {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<DiffRational> {
        if self.eat_op('-') {
            return Ok(self.factor()?.neg());
        }
        let b = self.base()?;
        if self.eat_op('^') {
            let neg = self.eat_op('-');
            let at = self.here();
            let e = self.integer()?;
            let p = b.pow(e);
            if neg {
                return DiffRational::from_poly(Poly::one())
                    .div(&p)
                    .map_err(|_| Error::Syntax {
                        pos: at,
                        msg: "division by zero".into(),
                    });
            }
            return Ok(p);
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<DiffRational> {
        let poly = |p: Poly| Ok(DiffRational::from_poly(p));
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                poly(Poly::constant(Rational::from_integer(n)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "x" => poly(Poly::x()),
                    "y" => {
                        if let Some(Tok::Primes(k)) = self.peek().cloned() {
                            self.pos += 1;
                            poly(Poly::jet(k))
                        } else {
                            poly(Poly::y())
                        }
                    }
                    "D" => self.derivative().and_then(poly),
                    _ => {
                        if self.peek() == Some(&Tok::Op('(')) {
                            self.pos += 1;
                            self.xy_args()?;
                            poly(Poly::func(Func::named(&name)))
                        } else if self.names.params.contains(&name)
                            || self.names.funcs.contains(&name)
                        {
                            poly(Poly::func(Func::named(&name)))
                        } else {
                            Err(Error::UnknownSymbol(name))
                        }
                    }
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }

    fn xy_args(&mut self) -> Result<()> {
        let a = self.ident()?;
        self.expect_op(',')?;
        let b = self.ident()?;
        if a != "x" || b != "y" {
            return self.err("functions take the arguments (x,y)");
        }
        self.expect_op(')')
    }

    fn derivative(&mut self) -> Result<Poly> {
        self.expect_op('(')?;
        let name = self.ident()?;
        if self.eat_op('(') {
            self.xy_args()?;
        }
        self.expect_op(',')?;
        if name == "y" {
            let k = self.integer()?;
            self.expect_op(')')?;
            return Ok(Poly::jet(k));
        }
        let (mut dx, mut dy) = (0, 0);
        loop {
            match self.ident()?.as_str() {
                "x" => dx += 1,
                "y" => dy += 1,
                _ => return self.err("derivatives are taken with respect to x or y"),
            }
            if !self.eat_op(',') {
                break;
            }
        }
        self.expect_op(')')?;
        Ok(Poly::deriv(Func::named(&name), dx, dy))
    }
}

fn parse_rational(text: &str, names: &Names) -> Result<(DiffRational, Option<DiffRational>)> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        names,
    };
    let lhs = p.expr()?;
    let rhs = if p.eat_op('=') { Some(p.expr()?) } else { None };
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok((lhs, rhs))
}

/// Parse a polynomial expression such as a rendered simple-system equation.
pub fn parse_poly(text: &str) -> Result<Poly> {
    let (e, rhs) = parse_rational(text, &Names::default())?;
    let e = match rhs {
        Some(r) => e.sub(&r),
        None => e,
    };
    if !e.denom().is_constant() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "expected a polynomial".into(),
        });
    }
    let c = e.denom().constant_value().expect("constant");
    Ok(e.numer().scale(&c.recip()))
}

/// Parse `text` as an ODE of order at least two, solved for its highest
/// derivative.
pub fn parse_ode(text: &str, params: &[&str], funcs: &[&str]) -> Result<ODEProblem> {
    for n in params.iter().chain(funcs) {
        if reserved(n) {
            return Err(Error::ReservedName(n.to_string()));
        }
    }
    let names = Names {
        params: params.iter().map(|s| s.to_string()).collect(),
        funcs: funcs.iter().map(|s| s.to_string()).collect(),
    };
    let (lhs, rhs) = parse_rational(text, &names)?;
    let e = match rhs {
        Some(r) => lhs.sub(&r),
        None => lhs,
    };
    for d in e.numer().derivs().into_iter().chain(e.denom().derivs()) {
        let n = d.func.name();
        if names.params.contains(&n) {
            if d.order() > 0 {
                return Err(Error::UndeclaredFunction(n));
            }
        } else if !names.funcs.contains(&n) {
            return Err(Error::UndeclaredFunction(n));
        }
    }
    let num = e.numer();
    let n = num.max_jet().max(e.denom().max_jet());
    let n = match n {
        None => return Err(Error::HighestDerivativeMissing),
        Some(n) if n < 2 => return Err(Error::OrderTooLow),
        Some(n) => n,
    };
    let top = Var::Jet(n);
    if e.denom().contains_var(top) || num.degree(top) != 1 {
        return Err(Error::NotQuasiLinear);
    }
    let a = num.coefficient(top, 1);
    let b = num.coefficient(top, 0);
    let f = DiffRational::new(b, a)?;
    Ok(ODEProblem {
        order: n,
        f,
        params: params.iter().map(|s| Func::named(s)).collect(),
        funcs: funcs.iter().map(|s| Func::named(s)).collect(),
    })
}
