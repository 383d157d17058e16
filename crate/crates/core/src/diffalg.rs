//! Differential operations on [`DiffPolynomial`]: total and partial
//! derivatives, coefficient splitting, leaders and pseudo-reduction.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{rat, Deriv, DiffPolynomial as Poly, Dir, Monomial, Var};
use crate::ranking::Ranking;

/// Apply a derivation given by its action on each variable.
fn derivation(p: &Poly, delta: impl Fn(Var) -> Option<Poly>) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        for &(v, e) in m.factors() {
            let Some(dv) = delta(v) else { continue };
            if dv.is_zero() {
                continue;
            }
            let rest = m.div(&Monomial::var(v, 1)).expect("factor divides");
            let coeff = c * rat(e as i64);
            for (n, d) in dv.terms() {
                out.add_term(rest.mul(n), &coeff * d);
            }
        }
    }
    out
}

/// Total derivative `D_x` along `y = y(x)`.
pub fn total_derivative(p: &Poly) -> Poly {
    derivation(p, |v| {
        Some(match v {
            Var::X => Poly::one(),
            Var::Y => Poly::jet(1),
            Var::Jet(k) => Poly::jet(k + 1),
            Var::Fn(d) => {
                &Poly::var(Var::Fn(d.diff(Dir::X))) + &(&Poly::var(Var::Fn(d.diff(Dir::Y))) * &Poly::jet(1))
            }
        })
    })
}

/// Partial derivative in the ring of `(x, y)`-functions. Jet variables are
/// rejected.
pub fn partial_derivative(p: &Poly, dir: Dir) -> Result<Poly> {
    if p.has_jets() {
        return Err(Error::JetInPartial);
    }
    Ok(partial(p, dir))
}

pub(crate) fn partial(p: &Poly, dir: Dir) -> Poly {
    derivation(p, |v| match (v, dir) {
        (Var::X, Dir::X) | (Var::Y, Dir::Y) => Some(Poly::one()),
        (Var::X, _) | (Var::Y, _) | (Var::Jet(_), _) => None,
        (Var::Fn(d), dir) => Some(Poly::var(Var::Fn(d.diff(dir)))),
    })
}

/// Apply `d^dx/dx^dx d^dy/dy^dy`.
pub fn partial_n(p: &Poly, dx: u32, dy: u32) -> Poly {
    let mut q = p.clone();
    for _ in 0..dx {
        q = partial(&q, Dir::X);
    }
    for _ in 0..dy {
        q = partial(&q, Dir::Y);
    }
    q
}

/// Split `p` by monomials in the given variables; the returned coefficients
/// are free of them.
pub fn collect_coefficients(p: &Poly, vars: &[Var]) -> BTreeMap<Monomial, Poly> {
    p.split_by(|v| vars.contains(&v))
}

/// The jet variables `y', ..., y^(k)`.
pub fn jets_up_to(k: u32) -> Vec<Var> {
    (1..=k).map(Var::Jet).collect()
}

pub fn leader(p: &Poly, r: &Ranking) -> Result<Deriv> {
    r.max(p.derivs().iter()).ok_or(Error::NoLeader)
}

pub fn initial(p: &Poly, r: &Ranking) -> Result<Poly> {
    let v = Var::Fn(leader(p, r)?);
    Ok(p.coefficient(v, p.degree(v)))
}

pub fn separant(p: &Poly, r: &Ranking) -> Result<Poly> {
    let v = Var::Fn(leader(p, r)?);
    Ok(p.diff_var(v))
}

/// Outcome of [`prem`]: `I^a S^b p = sum c_theta * theta(q) + remainder`.
#[derive(Clone, Debug)]
pub struct PremResult {
    pub remainder: Poly,
    pub initial_power: u32,
    pub separant_power: u32,
    /// `((dx, dy), c_theta)` pairs.
    pub cofactors: Vec<((u32, u32), Poly)>,
}

/// Differential pseudo-remainder of `p` modulo `q` and all its derivatives.
pub fn prem(p: &Poly, q: &Poly, r: &Ranking) -> Result<PremResult> {
    let v = leader(q, r)?;
    let vv = Var::Fn(v);
    let d = q.degree(vv);
    let init = q.coefficient(vv, d);
    let sep = q.diff_var(vv);
    let mut rem = p.clone();
    let mut a = 0;
    let mut b = 0;
    let mut cof: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
    loop {
        let target = rem
            .derivs()
            .into_iter()
            .filter(|w| {
                w.is_derivative_of(&v) && (*w != v || rem.degree(vv) >= d)
            })
            .max_by(|a, b| r.cmp(a, b));
        let Some(w) = target else { break };
        let wv = Var::Fn(w);
        let k = rem.degree(wv);
        let lc = rem.coefficient(wv, k);
        let (mult, theta, divisor, shift) = if w == v {
            (init.clone(), (0, 0), q.clone(), k - d)
        } else {
            let th = (w.dx - v.dx, w.dy - v.dy);
            (sep.clone(), th, partial_n(q, th.0, th.1), k - 1)
        };
        let c = lc.mul_monomial(&Monomial::var(wv, shift));
        rem = &(&mult * &rem) - &(&c * &divisor);
        for e in cof.values_mut() {
            *e = &*e * &mult;
        }
        let slot = cof.entry(theta).or_default();
        *slot = &*slot + &c;
        if w == v {
            a += 1;
        } else {
            b += 1;
        }
    }
    Ok(PremResult {
        remainder: rem,
        initial_power: a,
        separant_power: b,
        cofactors: cof.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    })
}
