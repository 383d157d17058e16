//! The linearizing differential system for a point transformation
//! `u = phi(x, y)`, `t = psi(x, y)` and the decomposition-based test.

use crate::diffalg::{collect_coefficients, jets_up_to, total_derivative};
use crate::error::Result;
use crate::parser::ODEProblem;
use crate::poly::{DiffPolynomial as Poly, Dir, Func, Var};
use crate::ranking::Ranking;
use crate::rational::DiffRational;
use crate::symmetry::strip_base_content;
use crate::thomas::{thomas_decompose_with, DecompositionResult, DifferentialSystem, Limits};

/// `u = phi(x, y)`, `t = psi(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointTransformation {
    pub phi: Func,
    pub psi: Func,
}

impl Default for PointTransformation {
    fn default() -> Self {
        PointTransformation {
            phi: Func::PHI,
            psi: Func::PSI,
        }
    }
}

impl PointTransformation {
    /// `phi_x psi_y - phi_y psi_x`.
    pub fn jacobian(&self) -> Poly {
        let d = |f, dir| match dir {
            Dir::X => Poly::deriv(f, 1, 0),
            Dir::Y => Poly::deriv(f, 0, 1),
        };
        &(&d(self.phi, Dir::X) * &d(self.psi, Dir::Y)) - &(&d(self.phi, Dir::Y) * &d(self.psi, Dir::X))
    }

    /// `D_x psi = psi_x + psi_y y'`.
    pub fn dpsi(&self) -> Poly {
        total_derivative(&Poly::func(self.psi))
    }

    /// Numerators `P_k` with `u^(k) = P_k / (D_x psi)^(2k-1)`, `k = 1..=n`.
    /// For `k >= 2` the coefficient of `y^(k)` in `P_k` is `-J (D_x psi)^(k-2)`.
    pub fn pushforward_numerators(&self, n: u32) -> Vec<Poly> {
        let d = self.dpsi();
        let dd = total_derivative(&d);
        let mut out = vec![total_derivative(&Poly::func(self.phi))];
        for k in 1..n {
            let p = out.last().expect("nonempty");
            let e = Poly::int(2 * k as i64 - 1);
            let next = &(&total_derivative(p) * &d) - &(&(&e * p) * &dd);
            out.push(next);
        }
        out
    }
}

/// `u^(k)(t)` for `k = 1..=n` as rational functions of the jet.
pub fn pushforward_derivatives(n: u32) -> Vec<DiffRational> {
    let t = PointTransformation::default();
    let d = t.dpsi();
    t.pushforward_numerators(n)
        .into_iter()
        .enumerate()
        // D_x psi is irreducible and never divides P_k
        .map(|(i, p)| DiffRational::from_coprime(p, d.pow(2 * i as u32 + 1)))
        .collect()
}

/// `u'' = 0` for `n = 2`, otherwise `u^(n) + sum_{k<=n-3} a_k(t) u^(k) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetLinearForm {
    pub n: u32,
    pub coefficients: Vec<Func>,
}

impl TargetLinearForm {
    pub fn new(n: u32) -> Self {
        let coefficients = if n >= 3 {
            (0..=(n as usize - 3)).map(Func::coefficient).collect()
        } else {
            Vec::new()
        };
        TargetLinearForm { n, coefficients }
    }
}

/// Equations and the Jacobian inequation whose solutions are exactly the
/// linearizing transformations together with the target coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizingSystem {
    pub system: DifferentialSystem,
    pub transformation: PointTransformation,
    pub target: TargetLinearForm,
    pub ranking: Ranking,
    /// Undetermined functions and parameters of the input, in ranking order.
    pub extra: Vec<Func>,
}

/// `phi > psi > a_0 > ... > functions > parameters`, orderly, `d/dx > d/dy`.
pub fn linearizing_ranking(q: &ODEProblem) -> Ranking {
    let mut prec = vec![Func::PHI, Func::PSI];
    prec.extend(TargetLinearForm::new(q.order).coefficients);
    prec.extend(q.funcs.iter().copied());
    prec.extend(q.params.iter().copied());
    Ranking::orderly(prec)
}

pub fn linearizing_system(q: &ODEProblem) -> LinearizingSystem {
    let n = q.order;
    let tr = PointTransformation::default();
    let target = TargetLinearForm::new(n);
    let d = tr.dpsi();
    let num = tr.pushforward_numerators(n);
    // the target equation times (D_x psi)^(2n-1)
    let mut total = num[n as usize - 1].clone();
    for (k, a) in target.coefficients.iter().enumerate() {
        let a = Poly::func(*a);
        let term = if k == 0 {
            &Poly::func(tr.phi) * &d.pow(2 * n - 1)
        } else {
            &num[k - 1] * &d.pow(2 * (n - k as u32))
        };
        total = &total + &(&a * &term);
    }
    let top = Var::Jet(n);
    let a = total.coefficient(top, 0);
    let b = total.coefficient(top, 1);
    debug_assert!(total.degree(top) <= 1);
    let t = &(q.denominator() * &a) - &(q.numerator() * &b);
    let mut equations: Vec<Poly> = collect_coefficients(&t, &jets_up_to(n - 1))
        .into_values()
        .map(|c| strip_base_content(&c))
        .filter(|c| !c.is_zero())
        .collect();
    for p in &q.params {
        equations.push(Poly::deriv(*p, 1, 0));
        equations.push(Poly::deriv(*p, 0, 1));
    }
    for a in &target.coefficients {
        let e = &(&Poly::deriv(tr.psi, 0, 1) * &Poly::deriv(*a, 1, 0))
            - &(&Poly::deriv(tr.psi, 1, 0) * &Poly::deriv(*a, 0, 1));
        equations.push(e);
    }
    let mut extra = q.funcs.clone();
    extra.extend(q.params.iter().copied());
    LinearizingSystem {
        system: DifferentialSystem::new(equations, vec![tr.jacobian()]),
        ranking: linearizing_ranking(q),
        transformation: tr,
        target,
        extra,
    }
}

pub fn linearization_test_2(q: &ODEProblem) -> Result<DecompositionResult> {
    linearization_test_2_with(q, Limits::default())
}

pub fn linearization_test_2_with(q: &ODEProblem, limits: Limits) -> Result<DecompositionResult> {
    let ls = linearizing_system(q);
    thomas_decompose_with(&ls.system, &ls.ranking, limits)
}
