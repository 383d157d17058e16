//! Janet completion of linear PDE systems over `Q(x, y)`, parametric
//! derivative counting and truncated power-series solutions.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::diffalg::partial_n;
use crate::error::{Error, Result};
use crate::janet::{self, Elem, Reducer};
use crate::poly::{rat, Deriv, DiffPolynomial as Poly, Func, Rational, Var};
use crate::ranking::Ranking;
use crate::symmetry::{strip_base_content, DeterminingSystem};

const LINEAR_TERM_LIMIT: usize = 1_000_000;

/// Janet-complete, tail-reduced linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutiveSystem {
    pub equations: Vec<Poly>,
    pub leaders: Vec<Deriv>,
    /// Janet-multiplicative flags `(d/dx, d/dy)` per equation.
    pub multiplicative: Vec<(bool, bool)>,
    pub unknowns: Vec<Func>,
    pub ranking: Ranking,
}

/// Dimension of the solution space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionPolynomial {
    Finite(usize),
    Infinite,
}

fn check_linear(p: &Poly) -> Result<()> {
    for (m, _) in p.terms() {
        let deg: u32 = m
            .factors()
            .iter()
            .filter(|(v, _)| matches!(v, Var::Fn(_)))
            .map(|(_, e)| e)
            .sum();
        if deg > 1 {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("nonlinear term in linear system: {p}"),
            });
        }
    }
    Ok(())
}

/// Complete a determining system to Janet-involutive form.
pub fn janet_complete(s: &DeterminingSystem, r: &Ranking) -> Result<InvolutiveSystem> {
    complete_linear(&s.equations, &s.unknowns(), r)
}

/// Complete any linear system over `Q(x, y)` in the given unknowns.
pub fn complete_linear(eqs: &[Poly], unknowns: &[Func], r: &Ranking) -> Result<InvolutiveSystem> {
    for e in eqs {
        check_linear(e)?;
    }
    let mut simplify = |p: Poly| strip_base_content(&p);
    let mut t: Vec<Elem> = Vec::new();
    let mut queue: Vec<Poly> = eqs.to_vec();
    loop {
        while !queue.is_empty() {
            // smallest leader first
            queue.sort_by(|a, b| {
                let la = r.max(a.derivs().iter());
                let lb = r.max(b.derivs().iter());
                match (la, lb) {
                    (Some(x), Some(y)) => r.cmp(&y, &x),
                    (None, _) => std::cmp::Ordering::Greater,
                    (_, None) => std::cmp::Ordering::Less,
                }
            });
            let p = queue.pop().expect("nonempty");
            let p = Reducer::new(&t, r, LINEAR_TERM_LIMIT).reduce(&p, None, &mut simplify)?;
            if p.is_zero() {
                continue;
            }
            let Some(e) = Elem::new(p, r) else {
                return Err(Error::Inconsistent);
            };
            let (keep, moved): (Vec<Elem>, Vec<Elem>) = t
                .into_iter()
                .partition(|o| !(o.leader != e.leader && o.leader.is_derivative_of(&e.leader)));
            t = keep;
            queue.extend(moved.into_iter().map(|o| o.poly));
            t.push(e);
        }
        let mult = janet::multiplicative(&t);
        let mut reducer = Reducer::new(&t, r, LINEAR_TERM_LIMIT);
        for (i, el) in t.iter().enumerate() {
            for d in janet::non_multiplicative(mult[i]) {
                let pr = crate::diffalg::partial(&el.poly, d);
                let red = reducer.reduce(&pr, None, &mut simplify)?;
                if !red.is_zero() {
                    queue.push(red);
                }
            }
        }
        if queue.is_empty() {
            break;
        }
    }
    canonical_form(&t, unknowns, r)
}

/// Rebuild the unique fully reduced Janet basis over the Janet completion of
/// the minimal leader set.
fn canonical_form(t: &[Elem], unknowns: &[Func], r: &Ranking) -> Result<InvolutiveSystem> {
    let leaders: Vec<Deriv> = t.iter().map(|e| e.leader).collect();
    let mut target = janet::complete_leaders(&leaders);
    target.sort_by(|a, b| r.cmp(b, a));
    let mut simplify = |p: Poly| strip_base_content(&p);
    let mut reducer = Reducer::new(t, r, LINEAR_TERM_LIMIT);
    let mut equations = Vec::with_capacity(target.len());
    for l in &target {
        let (i, th) = janet::janet_divisor_in(&reducer.leaders, &reducer.mult, l)
            .ok_or(Error::Inconsistent)?;
        let base = partial_n(&t[i].poly, th.0, th.1);
        let red = reducer.reduce(&base, Some(*l), &mut simplify)?;
        equations.push(red);
    }
    let multiplicative = janet::multiplicative_for(&target);
    Ok(InvolutiveSystem {
        equations,
        leaders: target,
        multiplicative,
        unknowns: unknowns.to_vec(),
        ranking: r.clone(),
    })
}

impl InvolutiveSystem {
    fn divisor(&self, w: &Deriv) -> Option<(usize, (u32, u32))> {
        janet::janet_divisor_in(&self.leaders, &self.multiplicative, w)
    }

    /// Parametric derivatives, ordered by ranking (ascending); `None` when
    /// there are infinitely many.
    pub fn parametric_derivatives(&self) -> Option<Vec<Deriv>> {
        let mut out = Vec::new();
        for &f in &self.unknowns {
            let ls: Vec<&Deriv> = self.leaders.iter().filter(|l| l.func == f).collect();
            let bx = ls.iter().filter(|l| l.dy == 0).map(|l| l.dx).min()?;
            let by = ls.iter().filter(|l| l.dx == 0).map(|l| l.dy).min()?;
            for i in 0..bx {
                for j in 0..by {
                    let w = Deriv::new(f, i, j);
                    if !ls.iter().any(|l| w.is_derivative_of(l)) {
                        out.push(w);
                    }
                }
            }
        }
        out.sort_by(|a, b| self.ranking.cmp(a, b));
        Some(out)
    }

    /// Highest total order among parametric derivatives.
    pub fn max_parametric_order(&self) -> u32 {
        self.parametric_derivatives()
            .unwrap_or_default()
            .iter()
            .map(Deriv::order)
            .max()
            .unwrap_or(0)
    }

    pub fn initials(&self) -> Vec<Poly> {
        self.equations
            .iter()
            .zip(&self.leaders)
            .map(|(e, l)| e.coefficient(Var::Fn(*l), 1))
            .collect()
    }
}

/// Number of parametric derivatives.
pub fn dimension(s: &InvolutiveSystem) -> DimensionPolynomial {
    match s.parametric_derivatives() {
        Some(p) => DimensionPolynomial::Finite(p.len()),
        None => DimensionPolynomial::Infinite,
    }
}

/// Taylor data at a point, as exact coordinates in the parametric basis.
#[derive(Clone, Debug)]
pub struct SeriesSolution {
    pub point: (Rational, Rational),
    pub order: u32,
    pub parametric: Vec<Deriv>,
    /// Value of each derivative up to `order`, as a vector of coefficients
    /// on the parametric derivatives.
    pub values: BTreeMap<Deriv, Vec<Rational>>,
}

impl SeriesSolution {
    pub fn dimension(&self) -> usize {
        self.parametric.len()
    }

    /// Value of `w` for the basis solution with parametric index `k` set to 1.
    pub fn value(&self, w: &Deriv, k: usize) -> Rational {
        self.values
            .get(w)
            .map(|v| v[k].clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Evaluate a linear differential polynomial's derivative data.
    fn eval_linear(&self, p: &Poly, x0: &Rational, y0: &Rational) -> Option<Vec<Rational>> {
        let m = self.dimension();
        let mut acc = vec![Rational::zero(); m];
        for (mono, c) in p.eval_xy(x0, y0).terms() {
            let fs = mono.factors();
            match fs {
                [] => return None,
                [(Var::Fn(d), 1)] => {
                    let v = self.values.get(d)?;
                    for (a, b) in acc.iter_mut().zip(v) {
                        *a += c * b;
                    }
                }
                _ => return None,
            }
        }
        Some(acc)
    }

    /// Check that every basis element satisfies `eqs` through the orders the
    /// truncation determines.
    pub fn residual_is_zero(&self, eqs: &[Poly]) -> bool {
        let (x0, y0) = &self.point;
        for e in eqs {
            let ord = e.derivs().iter().map(Deriv::order).max().unwrap_or(0);
            if ord > self.order {
                continue;
            }
            let room = self.order - ord;
            for a in 0..=room {
                for b in 0..=(room - a) {
                    let pe = partial_n(e, a, b);
                    match self.eval_linear(&pe, x0, y0) {
                        Some(v) if v.iter().all(Zero::is_zero) => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }
}

/// Power-series solution of a finite-dimensional involutive linear system.
pub fn series_solution(
    s: &InvolutiveSystem,
    point: (Rational, Rational),
    order: u32,
) -> Result<SeriesSolution> {
    let (x0, y0) = &point;
    let singular = || Error::SingularPoint(x0.to_string(), y0.to_string());
    for init in s.initials() {
        if init.eval_xy(x0, y0).is_zero() {
            return Err(singular());
        }
    }
    let parametric = s.parametric_derivatives().ok_or(Error::InfiniteDimension)?;
    let m = parametric.len();
    let mut all: Vec<Deriv> = Vec::new();
    for &f in &s.unknowns {
        for tot in 0..=order {
            for i in 0..=tot {
                all.push(Deriv::new(f, i, tot - i));
            }
        }
    }
    all.sort_by(|a, b| s.ranking.cmp(a, b));
    let mut sol = SeriesSolution {
        point: point.clone(),
        order,
        parametric: parametric.clone(),
        values: BTreeMap::new(),
    };
    for w in all {
        if let Some(k) = parametric.iter().position(|p| *p == w) {
            let mut v = vec![Rational::zero(); m];
            v[k] = rat(1);
            sol.values.insert(w, v);
            continue;
        }
        let (i, th) = s.divisor(&w).ok_or(Error::InfiniteDimension)?;
        let eq = partial_n(&s.equations[i], th.0, th.1);
        let lead = eq.coefficient(Var::Fn(w), 1);
        let rest = &eq - &lead.mul_monomial(&crate::poly::Monomial::var(Var::Fn(w), 1));
        let lv = lead.eval_xy(x0, y0).constant_value().ok_or_else(singular)?;
        if lv.is_zero() {
            return Err(singular());
        }
        let rv = sol.eval_linear(&rest, x0, y0).ok_or(Error::TruncationInsufficient)?;
        let v: Vec<Rational> = rv.into_iter().map(|c| -c / &lv).collect();
        sol.values.insert(w, v);
    }
    Ok(sol)
}

/// Deterministic sequence of candidate expansion points:
/// `(0,0), (1,1), (1,2), (2,1), (2,2), (1,3), ...`.
pub fn expansion_points() -> impl Iterator<Item = (Rational, Rational)> {
    std::iter::once((rat(0), rat(0))).chain((2i64..).flat_map(|s| {
        (1..s).map(move |i| (rat(i), rat(s - i)))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ode;
    use crate::symmetry::{determining_system, symmetry_ranking};

    fn d(f: Func, i: u32, j: u32) -> Poly {
        Poly::deriv(f, i, j)
    }

    fn involutive(text: &str) -> InvolutiveSystem {
        let q = parse_ode(text, &[], &[]).unwrap();
        janet_complete(&determining_system(&q).unwrap(), &symmetry_ranking()).unwrap()
    }

    #[test]
    fn free_particle_dimension_eight() {
        let s = involutive("y'' = 0");
        assert_eq!(dimension(&s), DimensionPolynomial::Finite(8));
    }

    #[test]
    fn third_order_free_dimension_seven() {
        let s = involutive("y''' = 0");
        assert_eq!(dimension(&s), DimensionPolynomial::Finite(7));
    }

    #[test]
    fn already_involutive() {
        let eta = Func::ETA;
        let eqs = vec![d(eta, 1, 0), d(eta, 0, 1)];
        let s = complete_linear(&eqs, &[eta], &symmetry_ranking()).unwrap();
        assert_eq!(s.equations.len(), 2);
        assert_eq!(dimension(&s), DimensionPolynomial::Finite(1));
    }

    #[test]
    fn exponential_solution_space() {
        let xi = Func::XI;
        let eqs = vec![d(xi, 0, 1), &d(xi, 1, 0) - &d(xi, 0, 0)];
        let s = complete_linear(&eqs, &[xi], &symmetry_ranking()).unwrap();
        assert_eq!(dimension(&s), DimensionPolynomial::Finite(1));
    }

    #[test]
    fn zero_dimensional_and_infinite() {
        let eqs = vec![Poly::func(Func::XI), Poly::func(Func::ETA)];
        let s = complete_linear(&eqs, &[Func::XI, Func::ETA], &symmetry_ranking()).unwrap();
        assert_eq!(dimension(&s), DimensionPolynomial::Finite(0));
        let s = complete_linear(&[d(Func::XI, 1, 0)], &[Func::XI], &symmetry_ranking()).unwrap();
        assert_eq!(dimension(&s), DimensionPolynomial::Infinite);
    }

    #[test]
    fn idempotent_completion() {
        for text in ["y'' = 0", "y''' + y*y' = 0", "y'' + y'^2/y + y = 0"] {
            let s = involutive(text);
            let again = complete_linear(&s.equations, &s.unknowns, &s.ranking).unwrap();
            assert_eq!(again, s, "{text}");
        }
    }

    #[test]
    fn dimension_is_ranking_independent() {
        for text in ["y'' = 0", "y''' = 0", "y'' + y^2 = 0", "y''' + 3*y*y' = 0"] {
            let q = parse_ode(text, &[], &[]).unwrap();
            let ds = determining_system(&q).unwrap();
            let a = janet_complete(&ds, &symmetry_ranking()).unwrap();
            let b = janet_complete(&ds, &symmetry_ranking().with_y_first()).unwrap();
            assert_eq!(dimension(&a), dimension(&b), "{text}");
        }
    }

    #[test]
    fn series_basis_spans_projective_algebra() {
        let q = parse_ode("y'' = 0", &[], &[]).unwrap();
        let ds = determining_system(&q).unwrap();
        let s = janet_complete(&ds, &symmetry_ranking()).unwrap();
        let sol = series_solution(&s, (rat(0), rat(0)), 3).unwrap();
        assert_eq!(sol.dimension(), 8);
        assert!(sol.residual_is_zero(&ds.equations));
        assert!(sol.residual_is_zero(&s.equations));
    }

    #[test]
    fn constant_solutions() {
        let (xi, eta) = (Func::XI, Func::ETA);
        let eqs = vec![d(xi, 1, 0), d(xi, 0, 1), d(eta, 1, 0), d(eta, 0, 1)];
        let s = complete_linear(&eqs, &[xi, eta], &symmetry_ranking()).unwrap();
        let sol = series_solution(&s, (rat(0), rat(0)), 2).unwrap();
        assert_eq!(sol.parametric, vec![Deriv::new(eta, 0, 0), Deriv::new(xi, 0, 0)]);
        assert_eq!(sol.value(&Deriv::new(xi, 1, 1), 1), rat(0));
    }

    #[test]
    fn singular_point_rejected() {
        let xi = Func::XI;
        let eqs = vec![d(xi, 0, 1), &(&Poly::x() * &d(xi, 1, 0)) - &d(xi, 0, 0)];
        let s = complete_linear(&eqs, &[xi], &symmetry_ranking()).unwrap();
        assert!(matches!(
            series_solution(&s, (rat(0), rat(0)), 2),
            Err(Error::SingularPoint(..))
        ));
        assert!(series_solution(&s, (rat(1), rat(1)), 2).is_ok());
    }
}
