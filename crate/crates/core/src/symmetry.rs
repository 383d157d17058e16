//! Determining equations for Lie point symmetries `xi d/dx + eta d/dy`.

use crate::diffalg::{collect_coefficients, jets_up_to, leader, total_derivative};
use crate::error::{Error, Result};
use crate::parser::ODEProblem;
use crate::poly::{DiffPolynomial as Poly, Func, Var};
use crate::ranking::Ranking;

/// Infinitesimal generator prolonged to `y^(n)`.
#[derive(Clone, Debug)]
pub struct SymmetryGenerator {
    pub xi: Poly,
    pub eta: Poly,
    /// `eta^(k)` for `k = 0..=n`.
    pub prolonged: Vec<Poly>,
}

/// `eta^(k) = D_x eta^(k-1) - y^(k) D_x xi`, starting from `eta^(0) = eta`.
pub fn prolong(n: u32) -> SymmetryGenerator {
    let xi = Poly::func(Func::XI);
    let eta = Poly::func(Func::ETA);
    let dxi = total_derivative(&xi);
    let mut prolonged = vec![eta.clone()];
    for k in 1..=n {
        let prev = prolonged.last().expect("nonempty");
        let next = &total_derivative(prev) - &(&Poly::jet(k) * &dxi);
        prolonged.push(next);
    }
    SymmetryGenerator {
        xi,
        eta,
        prolonged,
    }
}

/// Linear homogeneous system for `(xi, eta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminingSystem {
    pub order: u32,
    pub equations: Vec<Poly>,
}

impl DeterminingSystem {
    pub fn unknowns(&self) -> [Func; 2] {
        [Func::XI, Func::ETA]
    }
}

/// Ranking `xi > eta`, orderly, `d/dx > d/dy`.
pub fn symmetry_ranking() -> Ranking {
    Ranking::orderly(vec![Func::XI, Func::ETA])
}

/// Divide out the `Q[x, y]` content of a polynomial that is linear in
/// function derivatives.
pub(crate) fn strip_base_content(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = p.content_by(|v| matches!(v, Var::Fn(_) | Var::Jet(_)));
    let q = if c.is_constant() {
        p.clone()
    } else {
        p.div_exact(&c).expect("content divides")
    };
    q.primitive()
}

/// The invariance condition split by jet monomials.
///
/// `y^(n)` is replaced by `-M/N` and the whole condition multiplied by `N^2`
/// before splitting over `y', ..., y^(n-1)`.
pub fn determining_system(q: &ODEProblem) -> Result<DeterminingSystem> {
    if q.has_parameters() {
        return Err(Error::ParametersPresent);
    }
    let n = q.order;
    let m = q.numerator();
    let nd = q.denominator();
    let g = prolong(n);
    let top = &g.prolonged[n as usize];
    let a = top.coefficient(Var::Jet(n), 0);
    let b = top.coefficient(Var::Jet(n), 1);
    debug_assert!(top.degree(Var::Jet(n)) <= 1);
    // N^2 f_v = M_v N - M N_v
    let scaled_partial = |v: Var| &(&m.diff_var(v) * nd) - &(m * &nd.diff_var(v));
    let mut cond = &(&nd.pow(2) * &a) - &(&(nd * m) * &b);
    cond = &cond + &(&g.xi * &scaled_partial(Var::X));
    cond = &cond + &(&g.eta * &scaled_partial(Var::Y));
    for k in 1..n {
        cond = &cond + &(&g.prolonged[k as usize] * &scaled_partial(Var::Jet(k)));
    }
    debug_assert!(cond.max_jet().unwrap_or(0) < n);
    let r = symmetry_ranking();
    let mut equations: Vec<Poly> = collect_coefficients(&cond, &jets_up_to(n - 1))
        .into_values()
        .map(|c| strip_base_content(&c))
        .filter(|c| !c.is_zero())
        .collect();
    equations.sort_by(|p, q| {
        let (lp, lq) = (leader(p, &r), leader(q, &r));
        match (lp, lq) {
            (Ok(a), Ok(b)) => r.cmp(&b, &a),
            _ => std::cmp::Ordering::Equal,
        }
        .then_with(|| p.to_string().cmp(&q.to_string()))
    });
    equations.dedup();
    Ok(DeterminingSystem { order: n, equations })
}

/// Evaluate a determining equation at explicit `(xi, eta)`.
pub fn apply_to(eq: &Poly, xi: &Poly, eta: &Poly) -> Poly {
    use crate::diffalg::partial_n;
    eq.substitute(&|v| match v {
        Var::Fn(d) if d.func == Func::XI => Some(partial_n(xi, d.dx, d.dy)),
        Var::Fn(d) if d.func == Func::ETA => Some(partial_n(eta, d.dx, d.dy)),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ode;
    use crate::poly::rat;

    fn d(f: Func, i: u32, j: u32) -> Poly {
        Poly::deriv(f, i, j)
    }

    #[test]
    fn first_prolongations() {
        let g = prolong(2);
        assert_eq!(g.prolonged[0], Poly::func(Func::ETA));
        let y1 = Poly::jet(1);
        let e1 = &(&d(Func::ETA, 1, 0) + &(&(&d(Func::ETA, 0, 1) - &d(Func::XI, 1, 0)) * &y1))
            - &(&d(Func::XI, 0, 1) * &y1.pow(2));
        assert_eq!(g.prolonged[1], e1);
        let with_zero_xi = g.prolonged[2].substitute(&|v| match v {
            Var::Fn(dv) if dv.func == Func::XI => Some(Poly::zero()),
            _ => None,
        });
        let e = Func::ETA;
        let expect = &(&(&d(e, 2, 0) + &(&d(e, 1, 1) * &y1).scale(&rat(2))) + &(&d(e, 0, 2) * &y1.pow(2)))
            + &(&d(e, 0, 1) * &Poly::jet(2));
        assert_eq!(with_zero_xi, expect);
    }

    #[test]
    fn free_particle_system() {
        let q = parse_ode("y'' = 0", &[], &[]).unwrap();
        let ds = determining_system(&q).unwrap();
        let (xi, eta) = (Func::XI, Func::ETA);
        let mut expect = vec![
            d(eta, 2, 0),
            (&d(eta, 1, 1).scale(&rat(2)) - &d(xi, 2, 0)).primitive(),
            (&d(eta, 0, 2) - &d(xi, 1, 1).scale(&rat(2))).primitive(),
            d(xi, 0, 2),
        ];
        let mut got = ds.equations.clone();
        expect.sort_by_key(|p| p.to_string());
        got.sort_by_key(|p| p.to_string());
        assert_eq!(got, expect);
    }

    #[test]
    fn oscillator_has_four_equations() {
        let q = parse_ode("y'' + y = 0", &[], &[]).unwrap();
        let ds = determining_system(&q).unwrap();
        assert_eq!(ds.equations.len(), 4);
        let free = ds
            .equations
            .iter()
            .find(|e| e.contains_var(Var::Fn(crate::poly::Deriv::new(Func::ETA, 2, 0))))
            .unwrap();
        assert!(free.contains_var(Var::func(Func::ETA)));
    }

    #[test]
    fn known_symmetries_annihilate() {
        // autonomous: xi = 1, eta = 0; linear homogeneous: xi = 0, eta = y
        let q = parse_ode("y''' + y*y' = 0", &[], &[]).unwrap();
        let ds = determining_system(&q).unwrap();
        for e in &ds.equations {
            assert!(apply_to(e, &Poly::one(), &Poly::zero()).is_zero());
        }
        let lin = parse_ode("y'' + x*y' + y = 0", &[], &[]).unwrap();
        let ds = determining_system(&lin).unwrap();
        for e in &ds.equations {
            assert!(apply_to(e, &Poly::zero(), &Poly::y()).is_zero());
        }
    }

    #[test]
    fn parameters_rejected() {
        let q = parse_ode("y'' + k*y = 0", &["k"], &[]).unwrap();
        assert_eq!(determining_system(&q), Err(Error::ParametersPresent));
    }

    #[test]
    fn linear_in_generator() {
        let q = parse_ode("y'' + y'^2/y = 0", &[], &[]).unwrap();
        let ds = determining_system(&q).unwrap();
        let (x, y) = (Poly::x(), Poly::y());
        let (xi1, eta1) = (&x * &y, y.pow(2));
        let (xi2, eta2) = (Poly::one(), &x + &y);
        for e in &ds.equations {
            let combo = apply_to(e, &(&xi1.scale(&rat(3)) - &xi2), &(&eta1.scale(&rat(3)) - &eta2));
            let sep = &apply_to(e, &xi1, &eta1).scale(&rat(3)) - &apply_to(e, &xi2, &eta2);
            assert_eq!(combo, sep);
        }
    }
}
