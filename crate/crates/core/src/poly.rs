//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! The ring variables are the independent variables `x`, `y`, the jet
//! variables `y', y'', ...` and the partial derivatives of unknown functions
//! of `(x, y)`. Every engine in the crate works on [`DiffPolynomial`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

static FUNC_NAMES: LazyLock<Mutex<Vec<String>>> = LazyLock::new(|| {
    Mutex::new(
        ["xi", "eta", "phi", "psi"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    )
});

/// Interned name of an unknown function of `(x, y)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Func(u32);

impl Func {
    pub const XI: Func = Func(0);
    pub const ETA: Func = Func(1);
    pub const PHI: Func = Func(2);
    pub const PSI: Func = Func(3);

    pub fn named(name: &str) -> Func {
        let mut names = FUNC_NAMES.lock().expect("function registry poisoned");
        if let Some(i) = names.iter().position(|n| n == name) {
            return Func(i as u32);
        }
        names.push(name.to_string());
        Func((names.len() - 1) as u32)
    }

    /// Coefficient `a_k` of the Laguerre-Forsyth target form.
    pub fn coefficient(k: usize) -> Func {
        Func::named(&format!("a{k}"))
    }

    pub fn name(&self) -> String {
        FUNC_NAMES.lock().expect("function registry poisoned")[self.0 as usize].clone()
    }
}

impl fmt::Debug for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A partial derivative `d^dx/dx^dx d^dy/dy^dy` of an unknown function.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Deriv {
    pub func: Func,
    pub dx: u32,
    pub dy: u32,
}

impl Deriv {
    pub fn new(func: Func, dx: u32, dy: u32) -> Self {
        Deriv { func, dx, dy }
    }

    pub fn order(&self) -> u32 {
        self.dx + self.dy
    }

    pub fn diff(&self, dir: Dir) -> Deriv {
        match dir {
            Dir::X => Deriv::new(self.func, self.dx + 1, self.dy),
            Dir::Y => Deriv::new(self.func, self.dx, self.dy + 1),
        }
    }

    /// True when `self` is a (not necessarily proper) derivative of `other`.
    pub fn is_derivative_of(&self, other: &Deriv) -> bool {
        self.func == other.func && self.dx >= other.dx && self.dy >= other.dy
    }
}

impl fmt::Debug for Deriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Var::Fn(*self))
    }
}

/// Direction of a partial derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    X,
    Y,
}

/// A ring variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    /// `y^(k)` for `k >= 1`; `y` itself is [`Var::Y`].
    Jet(u32),
    Fn(Deriv),
}

impl Var {
    pub fn func(f: Func) -> Var {
        Var::Fn(Deriv::new(f, 0, 0))
    }

    pub fn deriv(&self) -> Option<Deriv> {
        match self {
            Var::Fn(d) => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::Y => write!(f, "y"),
            Var::Jet(k) if *k <= 4 => write!(f, "y{}", "'".repeat(*k as usize)),
            Var::Jet(k) => write!(f, "D(y,{k})"),
            Var::Fn(d) if d.order() == 0 => write!(f, "{}(x,y)", d.func.name()),
            Var::Fn(d) => {
                write!(f, "D({}", d.func.name())?;
                for _ in 0..d.dx {
                    write!(f, ",x")?;
                }
                for _ in 0..d.dy {
                    write!(f, ",y")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Power product of variables, stored sorted by descending [`Var`].
///
/// Ordered lexicographically with the greatest variable most significant,
/// which is a monomial order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|p| std::cmp::Reverse(p.0));
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((v, e - f));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 > v {
                return None;
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Split off the power of `v`.
    pub fn split(&self, v: Var) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|&&(w, k)| {
                if w == v {
                    e = k;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (e, Monomial(rest))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|&(v, e)| {
                    let f = other.exponent(v);
                    (f > 0).then_some((v, e.min(f)))
                })
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.0.cmp(&b.0) {
                Ordering::Equal => match a.1.cmp(&b.1) {
                    Ordering::Equal => continue,
                    o => return o,
                },
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact polynomial over the jet and function-derivative variables.
///
/// Terms are kept in a map keyed by monomial; zero coefficients are never
/// stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

type Poly = DiffPolynomial;

impl DiffPolynomial {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat(n))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Rational::one(), Monomial::var(v, 1))
    }

    pub fn x() -> Self {
        Poly::var(Var::X)
    }

    pub fn y() -> Self {
        Poly::var(Var::Y)
    }

    /// The jet variable `y^(k)`; `k = 0` gives `y`.
    pub fn jet(k: u32) -> Self {
        if k == 0 {
            Poly::y()
        } else {
            Poly::var(Var::Jet(k))
        }
    }

    pub fn func(f: Func) -> Self {
        Poly::var(Var::func(f))
    }

    pub fn deriv(f: Func, dx: u32, dy: u32) -> Self {
        Poly::var(Var::Fn(Deriv::new(f, dx, dy)))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// Element of `Q`.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Leading term under the lex monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn derivs(&self) -> Vec<Deriv> {
        self.vars().into_iter().filter_map(|v| v.deriv()).collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn has_derivs(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.0.iter().any(|(v, _)| matches!(v, Var::Fn(_))))
    }

    pub fn has_jets(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.0.iter().any(|(v, _)| matches!(v, Var::Jet(_))))
    }

    /// Highest jet order present (`y` counts as order 0).
    pub fn max_jet(&self) -> Option<u32> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Jet(k) => Some(k),
                _ => None,
            })
            .max()
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out.entry(e).or_default().terms.insert(rest, c.clone());
        }
        out
    }

    pub fn coefficient(&self, v: Var, e: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (k, rest) = m.split(v);
            if k == e {
                out.terms.insert(rest, c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.clone(), d * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to a ring variable.
    pub fn diff_var(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            if e == 0 {
                continue;
            }
            let m2 = rest.mul(&Monomial::var(v, e - 1));
            out.add_term(m2, c * rat(e as i64));
        }
        out
    }

    /// Substitute polynomials for variables (simultaneously).
    pub fn substitute(&self, subs: &dyn Fn(Var) -> Option<Poly>) -> Poly {
        let mut cache: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Poly::constant(c.clone());
            for &(v, e) in &m.0 {
                match subs(v) {
                    Some(p) => {
                        let pe = cache.entry((v, e)).or_insert_with(|| p.pow(e));
                        factor = &factor * &*pe;
                    }
                    None => kept.push((v, e)),
                }
            }
            out = out + factor.mul_monomial(&Monomial(kept));
        }
        out
    }

    pub fn substitute_var(&self, v: Var, p: &Poly) -> Poly {
        if !self.contains_var(v) {
            return self.clone();
        }
        self.substitute(&|w| (w == v).then(|| p.clone()))
    }

    /// Evaluate `x` and `y` at rational values.
    pub fn eval_xy(&self, x0: &Rational, y0: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut kept = Vec::new();
            for &(v, e) in &m.0 {
                match v {
                    Var::X => c *= pow_rat(x0, e),
                    Var::Y => c *= pow_rat(y0, e),
                    _ => kept.push((v, e)),
                }
            }
            out.add_term(Monomial(kept), c);
        }
        out
    }

    /// Split into `sum coeff * monomial` where the monomials are over
    /// variables selected by `pred` and the coefficients avoid them.
    pub fn split_by(&self, pred: impl Fn(Var) -> bool) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (sel, rest): (Vec<_>, Vec<_>) = m.0.iter().partition(|(v, _)| pred(*v));
            out.entry(Monomial(sel))
                .or_default()
                .terms
                .insert(Monomial(rest), c.clone());
        }
        out
    }

    /// Largest rational `c` such that `self / c` has coprime integer
    /// coefficients with positive leading coefficient.
    pub fn numeric_content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        let mut c = Rational::new(num, den);
        if self.leading_coefficient().is_negative() {
            c = -c;
        }
        c
    }

    /// Divide out the numeric content.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.numeric_content();
        self.scale(&c.recip())
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        if d.len() == 1 {
            let mut q = Poly::zero();
            for (m, c) in &self.terms {
                q.terms.insert(m.div(&dm)?, c / &dc);
            }
            return Some(q);
        }
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading_term() {
            let tm = rm.div(&dm)?;
            let tc = rc / &dc;
            r = r - d.mul_monomial(&tm).scale(&tc);
            q.add_term(tm, tc);
        }
        Some(q)
    }

    fn main_var(&self) -> Option<Var> {
        self.terms
            .keys()
            .filter_map(|m| m.0.first().map(|&(v, _)| v))
            .max()
    }

    /// Content with respect to `v`: gcd of the coefficients in `v`.
    pub fn content_in(&self, v: Var) -> Poly {
        let mut g = Poly::zero();
        for c in self.coefficients_in(v).into_values() {
            g = gcd(&g, &c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g
    }

    /// Gcd of the coefficients with respect to all variables accepted by
    /// `pred`; the result involves only the remaining variables.
    pub fn content_by(&self, pred: impl Fn(Var) -> bool) -> Poly {
        let mut g = Poly::zero();
        let parts = self.split_by(pred);
        // smallest coefficients first keeps the gcd chain cheap
        let mut coeffs: Vec<Poly> = parts.into_values().collect();
        coeffs.sort_by_key(|c| c.len());
        for c in coeffs {
            g = gcd(&g, &c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g
    }

    /// Pseudo-remainder of `self` by `d` in the variable `v`, together with
    /// the number of multiplications by the leading coefficient of `d`.
    pub fn prem(&self, d: &Poly, v: Var) -> (Poly, u32) {
        let dd = d.degree(v);
        let lc = d.coefficient(v, dd);
        let tail = d - &lc.mul_monomial(&Monomial::var(v, dd));
        let mut r = self.clone();
        let mut k = 0;
        loop {
            let dr = r.degree(v);
            if r.is_zero() || dr < dd {
                return (r, k);
            }
            let lr = r.coefficient(v, dr);
            let rt = &r - &lr.mul_monomial(&Monomial::var(v, dr));
            // lc * r - lr * v^(dr-dd) * d, with the v^dr terms cancelling
            r = &(&lc * &rt) - &(&lr * &tail).mul_monomial(&Monomial::var(v, dr - dd));
            k += 1;
        }
    }

    /// Pseudo-quotient and remainder: `lc(d)^k * self = q * d + r`.
    pub fn pseudo_divide(&self, d: &Poly, v: Var) -> (Poly, Poly, u32) {
        let dd = d.degree(v);
        let lc = d.coefficient(v, dd);
        let mut r = self.clone();
        let mut q = Poly::zero();
        let mut k = 0;
        loop {
            let dr = r.degree(v);
            if r.is_zero() || dr < dd {
                return (q, r, k);
            }
            let lr = r.coefficient(v, dr);
            let t = lr.mul_monomial(&Monomial::var(v, dr - dd));
            q = &(&q * &lc) + &t;
            r = &(&r * &lc) - &(&t * d);
            k += 1;
        }
    }

    /// Positive-leading, integer-primitive normal form up to a rational unit.
    pub fn normalized(&self) -> Poly {
        self.primitive()
    }
}

fn pow_rat(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

/// Greatest common divisor over `Q`, normalized by [`DiffPolynomial::primitive`].
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.primitive();
    }
    // monomial fast path
    if a.len() == 1 || b.len() == 1 {
        let (m, other) = if a.len() == 1 { (a, b) } else { (b, a) };
        let mut g = m.leading_term().map(|(m, _)| m.clone()).unwrap_or_default();
        for mm in other.terms.keys() {
            g = g.gcd(mm);
            if g.is_one() {
                break;
            }
        }
        return Poly::term(Rational::one(), g);
    }
    let v = a.main_var().max(b.main_var()).expect("non-constant");
    let (da, db) = (a.degree(v), b.degree(v));
    if da == 0 {
        return gcd(a, &b.content_in(v));
    }
    if db == 0 {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree(v) < q.degree(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let (r, _) = p.prem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.degree(v) == 0 {
            return c.primitive();
        }
        let cr = r.content_in(v);
        p = q;
        q = r.div_exact(&cr).expect("content divides").primitive();
    }
    let cq = q.content_in(v);
    let g = q.div_exact(&cq).expect("content divides");
    (&c * &g).primitive()
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "{m:?}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        if self.len() < rhs.len() {
            return rhs + self;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        let mut acc: std::collections::HashMap<Monomial, Rational> =
            std::collections::HashMap::with_capacity(self.len() * rhs.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Poly {
        Poly::func(Func::named("u"))
    }

    #[test]
    fn monomial_order_is_lex_on_greatest_variable() {
        let a = Monomial::var(Var::Jet(1), 1);
        let b = Monomial::from_pairs(vec![(Var::X, 5), (Var::Y, 3)]);
        assert!(a > b);
        let c = Monomial::from_pairs(vec![(Var::Jet(1), 1), (Var::X, 1)]);
        assert!(c > a);
    }

    #[test]
    fn arithmetic_basics() {
        let p = &Poly::x() + &Poly::y();
        let sq = &p * &p;
        let expect = Poly::x().pow(2) + Poly::x() * Poly::y() * Poly::int(2) + Poly::y().pow(2);
        assert_eq!(sq, expect);
        assert!((&sq - &sq).is_zero());
    }

    #[test]
    fn exact_division_and_gcd() {
        let a = (Poly::x() + Poly::int(1)) * (Poly::y() - Poly::x());
        let b = (Poly::x() + Poly::int(1)) * (Poly::y() + Poly::int(2));
        let g = gcd(&a, &b);
        assert_eq!(g, Poly::x() + Poly::int(1));
        assert_eq!(a.div_exact(&g).unwrap(), Poly::y() - Poly::x());
        assert!(a.div_exact(&(Poly::y() + Poly::int(7))).is_none());
    }

    #[test]
    fn gcd_with_function_variables() {
        let f = u() * Poly::x() - Poly::y();
        let a = &f * &(u() + Poly::int(1));
        let b = &f * &f;
        assert_eq!(gcd(&a, &b), f.primitive());
    }

    #[test]
    fn pseudo_remainder_in_variable() {
        let v = Var::func(Func::named("u"));
        let p = u().pow(2) - Poly::int(1);
        let d = Poly::x() * u() - Poly::int(1);
        let (r, k) = p.prem(&d, v);
        // x^2 (u^2 - 1) = (x u + 1)(x u - 1) + (1 - x^2)
        assert_eq!(k, 2);
        assert_eq!(r, Poly::int(1) - Poly::x().pow(2));
        let (q, r2, k2) = p.pseudo_divide(&d, v);
        let lhs = p.scale(&rat(1)) * Poly::x().pow(k2);
        assert_eq!(lhs, &(&q * &d) + &r2);
    }

    #[test]
    fn primitive_normalizes_sign_and_content() {
        let p = Poly::x().scale(&ratio(-4, 3)) + Poly::int(2);
        assert_eq!(p.primitive(), Poly::x().scale(&rat(2)) - Poly::int(3));
    }
}
