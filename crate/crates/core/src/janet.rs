//! Janet division over `{d/dx, d/dy}` and involutive reduction, shared by the
//! linear completion and the Thomas decomposition.

use std::collections::HashMap;

use crate::diffalg::partial_n;
use crate::error::{Error, Result};
use crate::poly::{Deriv, DiffPolynomial as Poly, Dir, Var};
use crate::ranking::Ranking;

/// An equation together with its leader data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Elem {
    pub poly: Poly,
    pub leader: Deriv,
    pub degree: u32,
    pub init: Poly,
}

impl Elem {
    pub fn new(poly: Poly, r: &Ranking) -> Option<Elem> {
        let leader = r.max(poly.derivs().iter())?;
        let v = Var::Fn(leader);
        let degree = poly.degree(v);
        let init = poly.coefficient(v, degree);
        Some(Elem {
            poly,
            leader,
            degree,
            init,
        })
    }

    pub fn separant(&self) -> Poly {
        self.poly.diff_var(Var::Fn(self.leader))
    }
}

/// Janet-multiplicative flags `(x, y)` of each element.
///
/// `x` is multiplicative when the element's x-order is maximal among leaders
/// of the same function; `y` when its y-order is maximal among those with the
/// same x-order.
pub(crate) fn multiplicative(elems: &[Elem]) -> Vec<(bool, bool)> {
    multiplicative_for(&elems.iter().map(|e| e.leader).collect::<Vec<_>>())
}

pub(crate) fn multiplicative_for(leaders: &[Deriv]) -> Vec<(bool, bool)> {
    leaders
        .iter()
        .map(|l| {
            let same = leaders.iter().filter(|m| m.func == l.func);
            let max_dx = same.clone().map(|m| m.dx).max().unwrap_or(0);
            let max_dy = same
                .filter(|m| m.dx == l.dx)
                .map(|m| m.dy)
                .max()
                .unwrap_or(0);
            (l.dx == max_dx, l.dy == max_dy)
        })
        .collect()
}

pub(crate) fn non_multiplicative(flags: (bool, bool)) -> impl Iterator<Item = Dir> {
    let mut v = Vec::new();
    if !flags.0 {
        v.push(Dir::X);
    }
    if !flags.1 {
        v.push(Dir::Y);
    }
    v.into_iter()
}

/// Element whose Janet cone contains `w`, with the derivation taking its
/// leader to `w`.
pub(crate) fn janet_divisor_in(
    leaders: &[Deriv],
    mult: &[(bool, bool)],
    w: &Deriv,
) -> Option<(usize, (u32, u32))> {
    leaders.iter().enumerate().find_map(|(i, l)| {
        if !w.is_derivative_of(l) {
            return None;
        }
        let th = (w.dx - l.dx, w.dy - l.dy);
        ((th.0 == 0 || mult[i].0) && (th.1 == 0 || mult[i].1)).then_some((i, th))
    })
}

/// Involutive reducer over a fixed set of equations.
pub(crate) struct Reducer<'a> {
    pub elems: &'a [Elem],
    pub leaders: Vec<Deriv>,
    pub mult: Vec<(bool, bool)>,
    pub ranking: &'a Ranking,
    /// Elements excluded from use as divisors.
    pub skip: Option<usize>,
    /// Also reduce by non-multiplicative prolongations.
    pub full: bool,
    pub max_terms: usize,
    cache: HashMap<(usize, (u32, u32)), Poly>,
}

impl<'a> Reducer<'a> {
    pub fn new(elems: &'a [Elem], ranking: &'a Ranking, max_terms: usize) -> Self {
        Reducer {
            elems,
            leaders: elems.iter().map(|e| e.leader).collect(),
            mult: multiplicative(elems),
            ranking,
            skip: None,
            full: false,
            max_terms,
            cache: HashMap::new(),
        }
    }

    fn divisor(&self, w: &Deriv) -> Option<(usize, (u32, u32))> {
        let janet =
            janet_divisor_in(&self.leaders, &self.mult, w).filter(|(i, _)| Some(*i) != self.skip);
        if janet.is_some() || !self.full {
            return janet;
        }
        self.leaders
            .iter()
            .enumerate()
            .filter(|(i, l)| Some(*i) != self.skip && w.is_derivative_of(l))
            .map(|(i, l)| (i, (w.dx - l.dx, w.dy - l.dy)))
            .min_by_key(|(i, th)| (th.0 + th.1, *i))
    }

    fn prolonged(&mut self, i: usize, th: (u32, u32)) -> Poly {
        if th == (0, 0) {
            return self.elems[i].poly.clone();
        }
        self.cache
            .entry((i, th))
            .or_insert_with(|| partial_n(&self.elems[i].poly, th.0, th.1))
            .clone()
    }

    /// Janet-reduce `p`, calling `simplify` after each step. The derivative
    /// `keep`, when given, is left untouched.
    pub fn reduce(
        &mut self,
        p: &Poly,
        keep: Option<Deriv>,
        simplify: &mut dyn FnMut(Poly) -> Poly,
    ) -> Result<Poly> {
        let mut p = p.clone();
        loop {
            let mut ds = p.derivs();
            ds.sort_by(|a, b| self.ranking.cmp(b, a));
            let mut step = None;
            for w in ds {
                if Some(w) == keep {
                    continue;
                }
                if let Some((i, th)) = self.divisor(&w) {
                    if th != (0, 0) || p.degree(Var::Fn(w)) >= self.elems[i].degree {
                        step = Some((w, i, th));
                        break;
                    }
                }
            }
            let Some((w, i, th)) = step else {
                return Ok(p);
            };
            let d = self.prolonged(i, th);
            let (r, _) = p.prem(&d, Var::Fn(w));
            p = simplify(r);
            if p.len() > self.max_terms {
                return Err(Error::ResourceLimit(format!(
                    "polynomial with {} terms exceeds the limit of {}",
                    p.len(),
                    self.max_terms
                )));
            }
        }
    }
}

/// Minimal generators of the leader sets, completed to a Janet-complete set
/// of derivatives.
pub(crate) fn complete_leaders(leaders: &[Deriv]) -> Vec<Deriv> {
    let mut set: Vec<Deriv> = leaders
        .iter()
        .filter(|l| {
            !leaders
                .iter()
                .any(|m| m != *l && l.is_derivative_of(m))
        })
        .copied()
        .collect();
    set.sort();
    set.dedup();
    loop {
        let mult = multiplicative_for(&set);
        let mut added = false;
        for (i, l) in set.clone().iter().enumerate() {
            for d in non_multiplicative(mult[i]) {
                let w = l.diff(d);
                if janet_divisor_in(&set, &mult, &w).is_none() && !set.contains(&w) {
                    set.push(w);
                    added = true;
                }
            }
        }
        if !added {
            return set;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Func;

    #[test]
    fn janet_flags_for_staircase() {
        let f = Func::named("jf");
        let ls = vec![Deriv::new(f, 2, 0), Deriv::new(f, 1, 1), Deriv::new(f, 0, 2)];
        let m = multiplicative_for(&ls);
        assert_eq!(m, vec![(true, true), (false, true), (false, true)]);
    }

    #[test]
    fn completion_of_monomial_sets_covers_the_ideal() {
        let f = Func::named("jg");
        let ls = vec![Deriv::new(f, 0, 2), Deriv::new(f, 2, 0)];
        let done = complete_leaders(&ls);
        let mult = multiplicative_for(&done);
        for i in 0..6 {
            for j in 0..6 {
                let w = Deriv::new(f, i, j);
                let in_ideal = ls.iter().any(|l| w.is_derivative_of(l));
                assert_eq!(janet_divisor_in(&done, &mult, &w).is_some(), in_ideal, "{w:?}");
            }
        }
    }
}
