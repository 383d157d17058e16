//! Differential Thomas decomposition of polynomial PDE systems in two
//! independent variables into disjoint simple systems.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::diffalg::partial;
use crate::error::{Error, Result};
use crate::janet::{self, Elem, Reducer};
use crate::poly::{gcd, Deriv, DiffPolynomial as Poly, Monomial, Var};
use crate::ranking::Ranking;
use crate::symmetry::strip_base_content;

/// Raw input: equations `= 0` and inequations `!= 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferentialSystem {
    pub equations: Vec<Poly>,
    pub inequations: Vec<Poly>,
}

impl DifferentialSystem {
    pub fn new(equations: Vec<Poly>, inequations: Vec<Poly>) -> Self {
        DifferentialSystem {
            equations,
            inequations,
        }
    }
}

/// Ceilings on the work done by one decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_branches: usize,
    pub max_terms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_branches: 512,
            max_terms: 200_000,
        }
    }
}

/// A passive, triangular system with nonvanishing initials and separants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSystem {
    /// Sorted by leader, highest first.
    pub equations: Vec<Poly>,
    pub inequations: Vec<Poly>,
    pub ranking: Ranking,
    elems: Vec<Elem>,
}

impl SimpleSystem {
    pub fn leaders(&self) -> Vec<Deriv> {
        self.elems.iter().map(|e| e.leader).collect()
    }

    pub fn initials(&self) -> Vec<Poly> {
        self.elems.iter().map(|e| e.init.clone()).collect()
    }

    pub fn separants(&self) -> Vec<Poly> {
        self.elems.iter().map(Elem::separant).collect()
    }

    /// Janet-multiplicative flags `(d/dx, d/dy)` per equation.
    pub fn multiplicative(&self) -> Vec<(bool, bool)> {
        janet::multiplicative(&self.elems)
    }

    /// Differential pseudo-remainder of `p`; zero iff `p` vanishes on every
    /// solution of the system.
    pub fn reduce(&self, p: &Poly) -> Result<Poly> {
        let mut simplify = |q: Poly| strip_base_content(&q);
        let mut r = Reducer::new(&self.elems, &self.ranking, usize::MAX);
        r.reduce(p, None, &mut simplify)
    }

    fn text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SimpleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.equations {
            writeln!(f, "{e} = 0")?;
        }
        for q in &self.inequations {
            writeln!(f, "{q} <> 0")?;
        }
        Ok(())
    }
}

/// Full differential pseudo-remainder of `p` modulo a simple system.
pub fn reduce_modulo(p: &Poly, s: &SimpleSystem) -> Poly {
    s.reduce(p).expect("unbounded reduction cannot hit a size limit")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub branches: usize,
    pub max_terms: usize,
}

/// Simple systems partitioning the solution set of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionResult {
    pub systems: Vec<SimpleSystem>,
    pub stats: Stats,
}

impl DecompositionResult {
    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }

    pub fn len(&self) -> usize {
        self.systems.len()
    }
}

pub fn thomas_decompose(d: &DifferentialSystem, r: &Ranking) -> Result<DecompositionResult> {
    thomas_decompose_with(d, r, Limits::default())
}

#[derive(Clone, Debug)]
struct Branch {
    t: Vec<Elem>,
    ineqs: Vec<Poly>,
    queue: Vec<Poly>,
}

enum Step {
    Go,
    Dead,
    Split(Box<Branch>, Box<Branch>),
}

enum Status {
    Zero,
    NonZero,
    Unknown(Poly),
}

struct Ctx<'a> {
    r: &'a Ranking,
    limits: Limits,
    stats: Stats,
}

fn normalize(p: Poly) -> Poly {
    strip_base_content(&p).normalized()
}

/// Only `x`, `y` and numbers: a unit of the coefficient field.
fn is_base(p: &Poly) -> bool {
    !p.has_derivs()
}

/// Divide out factors that are known to be nonzero.
fn divide_known(mut p: Poly, ineqs: &[Poly]) -> Poly {
    if p.is_zero() || is_base(&p) {
        return p;
    }
    let ds: BTreeSet<Deriv> = p.derivs().into_iter().collect();
    for q in ineqs {
        if q.len() > p.len() || !q.derivs().iter().all(|d| ds.contains(d)) {
            continue;
        }
        while let Some(t) = p.div_exact(q) {
            p = t;
            if is_base(&p) {
                return p;
            }
        }
    }
    p
}

/// Record `p != 0`, splitting off monomial factors: `v^k q != 0` holds iff
/// `v != 0` and `q != 0`.
fn add_ineq(ineqs: &mut Vec<Poly>, p: Poly) {
    let p = normalize(p);
    let mut content: Option<Monomial> = None;
    for (m, _) in p.terms() {
        content = Some(match content {
            None => m.clone(),
            Some(c) => c.gcd(m),
        });
    }
    let mut parts = Vec::new();
    let mut rest = p;
    if let Some(c) = content.filter(|c| !c.is_one()) {
        for (v, _) in c.factors() {
            if matches!(v, Var::Fn(_)) {
                parts.push(Poly::var(*v));
            }
        }
        rest = rest
            .div_exact(&Poly::term(crate::poly::rat(1), c.clone()))
            .expect("monomial content divides");
    }
    parts.push(normalize(rest));
    for q in parts {
        if !is_base(&q) && !ineqs.contains(&q) {
            ineqs.push(q);
        }
    }
}

fn split_leader(p: &Poly, v: Deriv) -> (Poly, Poly) {
    let var = Var::Fn(v);
    let d = p.degree(var);
    let init = p.coefficient(var, d);
    let tail = p - &init.mul_monomial(&Monomial::var(var, d));
    (init, tail)
}

impl Ctx<'_> {
    fn reduce(&mut self, b: &Branch, p: &Poly, known: bool) -> Result<Poly> {
        let ineqs = &b.ineqs;
        let mut simplify = |q: Poly| {
            let q = strip_base_content(&q);
            if known {
                divide_known(q, ineqs)
            } else {
                q
            }
        };
        let mut red = Reducer::new(&b.t, self.r, self.limits.max_terms);
        red.full = true;
        let out = red.reduce(p, None, &mut simplify)?;
        let out = simplify(out);
        self.stats.max_terms = self.stats.max_terms.max(out.len());
        Ok(out)
    }

    fn status(&mut self, b: &Branch, c: &Poly) -> Result<Status> {
        let c = self.reduce(b, c, true)?;
        if c.is_zero() {
            return Ok(Status::Zero);
        }
        if is_base(&c) {
            return Ok(Status::NonZero);
        }
        let c = normalize(c);
        if b.ineqs.contains(&c) {
            return Ok(Status::NonZero);
        }
        Ok(Status::Unknown(c))
    }

    fn split(&mut self, b: &Branch) -> Result<(Box<Branch>, Box<Branch>)> {
        self.stats.branches += 1;
        if self.stats.branches > self.limits.max_branches {
            return Err(Error::ResourceLimit(format!(
                "more than {} branches",
                self.limits.max_branches
            )));
        }
        Ok((Box::new(b.clone()), Box::new(b.clone())))
    }

    fn take_next(&self, b: &mut Branch) -> Option<Poly> {
        let r = self.r;
        let key = |p: &Poly| r.max(p.derivs().iter());
        let i = (0..b.queue.len()).min_by(|&i, &j| {
            match (key(&b.queue[i]), key(&b.queue[j])) {
                (None, None) => Ordering::Equal,
                (None, _) => Ordering::Less,
                (_, None) => Ordering::Greater,
                (Some(x), Some(y)) => r.cmp(&x, &y),
            }
            .then_with(|| b.queue[i].len().cmp(&b.queue[j].len()))
        })?;
        Some(b.queue.remove(i))
    }

    fn insert(&mut self, b: &mut Branch, e: Elem) -> Result<Step> {
        let v = e.leader;
        let mut kept = Vec::with_capacity(b.t.len() + 1);
        for o in std::mem::take(&mut b.t) {
            if o.leader.is_derivative_of(&v) {
                b.queue.push(o.poly);
            } else {
                kept.push(o);
            }
        }
        b.t = kept;
        b.t.push(e);
        self.check_ineqs(b, Some(v))
    }

    /// Re-reduce the inequations touched by `v` (all when `None`).
    fn check_ineqs(&mut self, b: &mut Branch, v: Option<Deriv>) -> Result<Step> {
        let touched = |q: &Poly| match v {
            None => true,
            Some(v) => q.derivs().iter().any(|d| d.is_derivative_of(&v)),
        };
        let mut out: Vec<Poly> = Vec::with_capacity(b.ineqs.len());
        let old = std::mem::take(&mut b.ineqs);
        for q in old {
            if !touched(&q) {
                if !out.contains(&q) {
                    out.push(q);
                }
                continue;
            }
            let red = self.reduce(b, &q, false)?;
            if red.is_zero() {
                return Ok(Step::Dead);
            }
            add_ineq(&mut out, red);
        }
        b.ineqs = out;
        // an inequation sharing a nontrivial factor with an equation of
        // the same leader removes that factor from the equation
        for qi in 0..b.ineqs.len() {
            let q = &b.ineqs[qi];
            let Some(lq) = self.r.max(q.derivs().iter()) else {
                continue;
            };
            let Some(ei) = b.t.iter().position(|e| e.leader == lq && e.degree >= 2) else {
                continue;
            };
            let g = gcd(&b.t[ei].poly, q);
            if g.degree(Var::Fn(lq)) == 0 {
                continue;
            }
            let e = b.t.remove(ei);
            let h = e.poly.div_exact(&g).expect("gcd divides");
            b.queue.push(h);
            return Ok(Step::Go);
        }
        Ok(Step::Go)
    }

    fn process_eq(&mut self, b: &mut Branch, p: Poly) -> Result<Step> {
        let p = self.reduce(b, &p, true)?;
        if p.is_zero() {
            return Ok(Step::Go);
        }
        if is_base(&p) {
            return Ok(Step::Dead);
        }
        let p = normalize(p);
        let v = self.r.max(p.derivs().iter()).expect("has derivatives");
        let (init, tail) = split_leader(&p, v);
        match self.status(b, &init)? {
            Status::Zero => {
                b.queue.push(tail);
                return Ok(Step::Go);
            }
            Status::NonZero => {}
            Status::Unknown(c) => {
                let (mut nz, mut z) = self.split(b)?;
                add_ineq(&mut nz.ineqs, c.clone());
                nz.queue.push(p);
                z.queue.push(c);
                z.queue.push(tail);
                return Ok(Step::Split(nz, z));
            }
        }
        if let Some(i) = b.t.iter().position(|e| e.leader == v) {
            // reduction left deg_v p below that of the stored element
            let old = b.t.remove(i);
            b.queue.push(old.poly);
        }
        let var = Var::Fn(v);
        let deg = p.degree(var);
        if deg >= 2 {
            let s = p.diff_var(var);
            let g = gcd(&p, &s);
            if g.degree(var) > 0 {
                b.queue.push(p.div_exact(&g).expect("gcd divides"));
                return Ok(Step::Go);
            }
            match self.status(b, &s)? {
                Status::Zero => {
                    b.queue.push(s);
                    b.queue.push(p);
                    return Ok(Step::Go);
                }
                Status::NonZero => {}
                Status::Unknown(c) => {
                    let (mut nz, mut z) = self.split(b)?;
                    add_ineq(&mut nz.ineqs, c.clone());
                    nz.queue.push(p.clone());
                    z.queue.push(c);
                    z.queue.push(p);
                    return Ok(Step::Split(nz, z));
                }
            }
        }
        let e = Elem::new(p, self.r).expect("has leader");
        self.insert(b, e)
    }

    /// Push every non-multiplicative prolongation that does not reduce to
    /// zero onto the queue. A prolongation whose leader lies in no Janet cone
    /// joins the system directly, completing the leader set.
    fn passivity(&mut self, b: &mut Branch) -> Result<()> {
        loop {
            let mult = janet::multiplicative(&b.t);
            let leaders: Vec<Deriv> = b.t.iter().map(|e| e.leader).collect();
            let mut missing = None;
            'scan: for (i, e) in b.t.iter().enumerate() {
                for d in janet::non_multiplicative(mult[i]) {
                    let w = e.leader.diff(d);
                    if janet::janet_divisor_in(&leaders, &mult, &w).is_none() {
                        missing = Some((i, d, w));
                        break 'scan;
                    }
                }
            }
            let Some((i, d, w)) = missing else {
                break;
            };
            let pr = partial(&b.t[i].poly, d);
            let mut simplify = |q: Poly| strip_base_content(&q);
            let mut red = Reducer::new(&b.t, self.r, self.limits.max_terms);
            let pr = red.reduce(&pr, Some(w), &mut simplify)?;
            let e = Elem::new(normalize(pr), self.r).expect("prolongation keeps its leader");
            debug_assert_eq!(e.leader, w);
            b.t.push(e);
        }
        let mult = janet::multiplicative(&b.t);
        let ineqs = &b.ineqs;
        let mut simplify = |q: Poly| divide_known(strip_base_content(&q), ineqs);
        let mut red = Reducer::new(&b.t, self.r, self.limits.max_terms);
        let mut found = Vec::new();
        for (i, e) in b.t.iter().enumerate() {
            for d in janet::non_multiplicative(mult[i]) {
                let pr = partial(&e.poly, d);
                let rr = red.reduce(&pr, None, &mut simplify)?;
                if !rr.is_zero() {
                    found.push(rr);
                }
            }
        }
        b.queue.extend(found);
        Ok(())
    }

    fn finish(&mut self, b: Branch) -> Result<SimpleSystem> {
        let mut elems = b.t;
        elems.sort_by(|a, c| self.r.cmp(&c.leader, &a.leader));
        let n = elems.len();
        let mut reduced = Vec::with_capacity(n);
        for i in 0..n {
            let mut simplify = |q: Poly| divide_known(strip_base_content(&q), &b.ineqs);
            let mut red = Reducer::new(&elems, self.r, self.limits.max_terms);
            red.skip = Some(i);
            let p = red.reduce(&elems[i].poly, Some(elems[i].leader), &mut simplify)?;
            reduced.push(normalize(divide_known(p, &b.ineqs)));
        }
        let elems: Vec<Elem> = reduced
            .into_iter()
            .map(|p| Elem::new(p, self.r).expect("leader kept"))
            .collect();
        let mut ineqs = b.ineqs;
        ineqs.sort_by_key(|q| q.to_string());
        Ok(SimpleSystem {
            equations: elems.iter().map(|e| e.poly.clone()).collect(),
            inequations: ineqs,
            ranking: self.r.clone(),
            elems,
        })
    }

    fn run_branch(&mut self, mut b: Branch) -> Result<Outcome> {
        loop {
            if let Some(p) = self.take_next(&mut b) {
                match self.process_eq(&mut b, p)? {
                    Step::Go => continue,
                    Step::Dead => return Ok(Outcome::Dead),
                    Step::Split(nz, z) => return Ok(Outcome::Split(nz, z)),
                }
            }
            if let Step::Dead = self.check_ineqs(&mut b, None)? {
                return Ok(Outcome::Dead);
            }
            if !b.queue.is_empty() {
                continue;
            }
            self.passivity(&mut b)?;
            if b.queue.is_empty() {
                return Ok(Outcome::Done(b));
            }
        }
    }
}

enum Outcome {
    Dead,
    Split(Box<Branch>, Box<Branch>),
    Done(Branch),
}

pub fn thomas_decompose_with(
    d: &DifferentialSystem,
    r: &Ranking,
    limits: Limits,
) -> Result<DecompositionResult> {
    let mut ctx = Ctx {
        r,
        limits,
        stats: Stats {
            branches: 1,
            max_terms: 0,
        },
    };
    let mut ineqs = Vec::new();
    for q in &d.inequations {
        if q.is_zero() {
            return Ok(DecompositionResult {
                systems: Vec::new(),
                stats: ctx.stats,
            });
        }
        add_ineq(&mut ineqs, q.clone());
    }
    let mut stack = vec![Branch {
        t: Vec::new(),
        ineqs,
        queue: d.equations.clone(),
    }];
    let mut systems = Vec::new();
    while let Some(b) = stack.pop() {
        match ctx.run_branch(b)? {
            Outcome::Done(b) => systems.push(ctx.finish(b)?),
            Outcome::Split(nz, z) => {
                // the nonvanishing branch is explored first
                stack.push(*z);
                stack.push(*nz);
            }
            Outcome::Dead => {}
        }
    }
    systems.sort_by(|a, b| {
        a.equations
            .len()
            .cmp(&b.equations.len())
            .then_with(|| a.text().cmp(&b.text()))
    });
    Ok(DecompositionResult {
        systems,
        stats: ctx.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Func};

    fn u() -> Func {
        Func::named("u")
    }

    fn v() -> Func {
        Func::named("v")
    }

    fn ranking() -> Ranking {
        Ranking::orderly(vec![u(), v()])
    }

    fn decompose(eqs: Vec<Poly>, ineqs: Vec<Poly>) -> DecompositionResult {
        thomas_decompose(&DifferentialSystem::new(eqs, ineqs), &ranking()).unwrap()
    }

    #[test]
    fn constant_function_is_already_simple() {
        let eqs = vec![Poly::deriv(u(), 1, 0), Poly::deriv(u(), 0, 1)];
        let r = decompose(eqs.clone(), vec![]);
        assert_eq!(r.len(), 1);
        let mut got = r.systems[0].equations.clone();
        got.sort_by_key(|p| p.to_string());
        let mut expect = eqs;
        expect.sort_by_key(|p| p.to_string());
        assert_eq!(got, expect);
        assert!(r.systems[0].inequations.is_empty());
    }

    #[test]
    fn contradictory_values() {
        let uu = Poly::func(u());
        let r = decompose(vec![uu.clone(), &uu - &Poly::one()], vec![]);
        assert!(r.is_empty());
    }

    #[test]
    fn initial_split_keeps_nonvanishing_branch() {
        let p = &(&Poly::func(v()) * &Poly::deriv(u(), 1, 0)) - &Poly::one();
        let r = decompose(vec![p.clone()], vec![]);
        assert_eq!(r.len(), 1);
        let s = &r.systems[0];
        assert_eq!(s.inequations, vec![Poly::func(v())]);
        assert!(reduce_modulo(&p, s).is_zero());
    }

    #[test]
    fn integrability_condition_is_found() {
        // u_x = y, u_y = x  is consistent; u_x = y, u_y = 0 is not
        let ok = decompose(
            vec![&Poly::deriv(u(), 1, 0) - &Poly::y(), &Poly::deriv(u(), 0, 1) - &Poly::x()],
            vec![],
        );
        assert_eq!(ok.len(), 1);
        let bad = decompose(
            vec![&Poly::deriv(u(), 1, 0) - &Poly::y(), Poly::deriv(u(), 0, 1)],
            vec![],
        );
        assert!(bad.is_empty());
    }

    #[test]
    fn inequation_reducing_to_zero_kills_branch() {
        let r = decompose(vec![Poly::deriv(u(), 1, 0)], vec![Poly::deriv(u(), 2, 0)]);
        assert!(r.is_empty());
        let r = decompose(vec![Poly::func(u())], vec![Poly::zero()]);
        assert!(r.is_empty());
    }

    #[test]
    fn square_free_part_replaces_powers() {
        let ux = Poly::deriv(u(), 1, 0);
        let r = decompose(vec![ux.pow(3)], vec![]);
        assert_eq!(r.len(), 1);
        assert_eq!(r.systems[0].equations, vec![ux]);
    }

    #[test]
    fn quadratic_leader_gets_separant_split() {
        // u_x^2 = v: the branch v = 0 forces u_x = 0
        let p = &Poly::deriv(u(), 1, 0).pow(2) - &Poly::func(v());
        let r = decompose(vec![p.clone()], vec![]);
        assert_eq!(r.len(), 2);
        for s in &r.systems {
            assert!(reduce_modulo(&p, s).is_zero());
            for (e, sep) in s.equations.iter().zip(s.separants()) {
                assert!(!reduce_modulo(&sep, s).is_zero(), "{e}");
            }
        }
    }

    #[test]
    fn outputs_are_passive() {
        let p = &(&Poly::func(v()) * &Poly::deriv(u(), 1, 0)) - &Poly::deriv(u(), 0, 1);
        let q = &Poly::deriv(v(), 1, 0) - &Poly::func(v());
        let r = decompose(vec![p, q], vec![]);
        assert!(!r.is_empty());
        for s in &r.systems {
            let mult = s.multiplicative();
            for (i, e) in s.equations.iter().enumerate() {
                for d in janet::non_multiplicative(mult[i]) {
                    assert!(reduce_modulo(&partial(e, d), s).is_zero());
                }
            }
        }
    }

    #[test]
    fn branches_are_disjoint() {
        let p = &(&Poly::func(v()) * &Poly::deriv(u(), 1, 0)) - &(&Poly::func(u()) * &Poly::deriv(v(), 0, 1));
        let r = decompose(vec![p], vec![]);
        assert!(r.len() >= 2);
        for (i, a) in r.systems.iter().enumerate() {
            for b in &r.systems[i + 1..] {
                let witness = a.inequations.iter().any(|q| reduce_modulo(q, b).is_zero())
                    || b.inequations.iter().any(|q| reduce_modulo(q, a).is_zero());
                assert!(witness, "no disjointness witness between\n{a}and\n{b}");
            }
        }
    }

    #[test]
    fn fresh_symbol_is_irreducible() {
        let r = decompose(vec![Poly::deriv(u(), 1, 0)], vec![]);
        let w = Poly::func(Func::named("w"));
        assert_eq!(reduce_modulo(&w, &r.systems[0]), w);
    }

    #[test]
    fn branch_budget_is_enforced() {
        let p = &(&Poly::func(v()) * &Poly::deriv(u(), 1, 0)) - &(&Poly::func(u()) * &Poly::deriv(v(), 0, 1));
        let limits = Limits {
            max_branches: 1,
            max_terms: 1000,
        };
        let d = DifferentialSystem::new(vec![p], vec![]);
        assert!(matches!(
            thomas_decompose_with(&d, &ranking(), limits),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn deterministic_output() {
        let p = &(&Poly::func(v()) * &Poly::deriv(u(), 1, 0)).scale(&rat(3)) - &Poly::func(u());
        let a = decompose(vec![p.clone()], vec![]);
        let b = decompose(vec![p], vec![]);
        assert_eq!(a, b);
    }
}
