#![allow(dead_code)]

use odelin_core::diffalg::{partial_n, total_derivative};
use odelin_core::{parse_ode, DiffPolynomial as Poly, Func, ODEProblem, Var};

pub const FREE_PARTICLE: &str = "y'' = 0";
pub const THIRD_ORDER_FREE: &str = "y''' = 0";
pub const NOT_LINEARIZABLE_3: &str = "y''' - 6*y'/x^2 + 3*y'^2/x - 1/2*y'^3 = 0";
pub const EXP_SQUARE: &str = "y''' + 3*y'/y*(y'' - y') - 3*y'' + 2*y' - y = 0";
pub const LIE_FAMILY: &str = "y'' + F3*y'^3 + F2*y'^2 + F1*y' + F0 = 0";
pub const FOURTH_ORDER_H: &str = "2*x^2*y*y'''' + x^2*y^2 + h*y'*y''' + 16*x*y*y''' \
     + 6*x^2*y''^2 + 48*x*y'*y'' + 24*y*y'' + 24*y'^2 = 0";

/// `(y^2)^(n) + y^2 = 0`, the image of `u^(n) + u = 0` under `u = y^2`.
pub fn square_family(n: u32) -> String {
    let mut p = Poly::y().pow(2);
    for _ in 0..n {
        p = total_derivative(&p);
    }
    format!("{p} + y^2 = 0")
}

pub fn ode(text: &str) -> ODEProblem {
    parse_ode(text, &[], &[]).expect("fixture parses")
}

/// A parameter-free fixture with its expected linearizability.
pub struct Fixture {
    pub name: &'static str,
    pub text: String,
    pub linearizable: bool,
}

/// Linear equations disguised by `u = y^2`, `u = y + x^2`, `t = e^x`, and
/// non-linearizable controls.
pub fn corpus() -> Vec<Fixture> {
    let f = |name, text: &str, linearizable| Fixture {
        name,
        text: text.to_string(),
        linearizable,
    };
    vec![
        f("free particle", FREE_PARTICLE, true),
        f("u = y^2 in u'' = 0", "y'' + y'^2/y = 0", true),
        f("u = y + x^2 in u'' + u = 0", "y'' + y + x^2 + 2 = 0", true),
        f("t = e^x in u'' = 0", "y'' - y' = 0", true),
        f("hodograph of u'' = 0", "y'' + y'^3 = 0", true),
        f("u''' = 0", THIRD_ORDER_FREE, true),
        f("u = y + x^2 in u''' + u = 0", "y''' + y + x^2 = 0", true),
        f("u = y^2 in u''' = 0", "y''' + 3*y'*y''/y = 0", true),
        Fixture {
            name: "u = y^2 in u''' + u = 0",
            text: square_family(3),
            linearizable: true,
        },
        f("t = e^x, u = y^2", EXP_SQUARE, true),
        f("y'' + y^2", "y'' + y^2 = 0", false),
        f("y'' - y'^4", "y'' - y'^4 = 0", false),
        f("y''' + y^2", "y''' + y^2 = 0", false),
        f("third-order control", NOT_LINEARIZABLE_3, false),
    ]
}

/// Substitute explicit `(x, y)`-functions for unknowns and their derivatives.
pub fn substitute(p: &Poly, sol: &[(Func, Poly)]) -> Poly {
    p.substitute(&|v| match v {
        Var::Fn(d) => sol
            .iter()
            .find(|(f, _)| *f == d.func)
            .map(|(_, e)| partial_n(e, d.dx, d.dy)),
        _ => None,
    })
}

pub mod props {
    use odelin_core::diffalg::{initial, partial_n, prem, separant, total_derivative};
    use odelin_core::involution::{expansion_points, series_solution};
    use odelin_core::symmetry::symmetry_ranking;
    use odelin_core::{
        determining_system, janet_complete, Error, reduce_modulo, DiffPolynomial as Poly, Deriv, Func,
        LieAlgebraStructure, Monomial, ODEProblem, Rational, Ranking, SimpleSystem, Var,
    };
    use proptest::prelude::*;
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

    fn runner(cases: u32) -> TestRunner {
        TestRunner::new_with_rng(
            Config {
                cases,
                failure_persistence: None,
                ..Config::default()
            },
            TestRng::deterministic_rng(RngAlgorithm::ChaCha),
        )
    }

    pub fn small_poly() -> impl Strategy<Value = Poly> {
        let var = prop_oneof![
            Just(Var::X),
            Just(Var::Y),
            Just(Var::Jet(1)),
            Just(Var::Jet(2)),
            Just(Var::Jet(3)),
            Just(Var::func(Func::PHI)),
            Just(Var::Fn(Deriv::new(Func::PSI, 1, 0))),
            Just(Var::Fn(Deriv::new(Func::PSI, 0, 1))),
        ];
        prop::collection::vec((-5i64..6, prop::collection::vec((var, 1u32..3), 0..3)), 0..5)
            .prop_map(|ts| {
                Poly::from_terms(
                    ts.into_iter()
                        .map(|(c, vs)| (Monomial::from_pairs(vs), Rational::from_integer(c.into()))),
                )
            })
    }

    /// `D_x(pq) = D_x(p) q + p D_x(q)` and `D_x(p + q) = D_x p + D_x q`.
    pub fn leibniz(cases: u32) -> Result<(), String> {
        runner(cases)
            .run(&(small_poly(), small_poly()), |(p, q)| {
                let lhs = total_derivative(&(&p * &q));
                let rhs = &(&total_derivative(&p) * &q) + &(&p * &total_derivative(&q));
                prop_assert_eq!(lhs, rhs);
                prop_assert_eq!(
                    total_derivative(&(&p + &q)),
                    &total_derivative(&p) + &total_derivative(&q)
                );
                Ok(())
            })
            .map_err(|e| e.to_string())
    }

    /// `I^a S^b p - sum c_theta theta(q)` equals the remainder.
    pub fn prem_identity(cases: u32) -> Result<(), String> {
        let u = Func::PHI;
        let r = Ranking::orderly(vec![u, Func::PSI]);
        let divisors = [
            &(&Poly::deriv(Func::PSI, 1, 0) * &Poly::func(u)) - &Poly::y(),
            &(&Poly::func(Func::PSI) * &Poly::deriv(u, 0, 1).pow(2)) - &Poly::x(),
            &Poly::deriv(u, 1, 1) + &(&Poly::x() * &Poly::deriv(u, 1, 0)),
        ];
        runner(cases)
            .run(&(small_poly(), 0..divisors.len()), |(p, i)| {
                let q = &divisors[i];
                let p = p.substitute(&|v| match v {
                    Var::Jet(1) => Some(Poly::deriv(u, 1, 0)),
                    Var::Jet(2) => Some(Poly::deriv(u, 1, 1)),
                    Var::Jet(3) => Some(Poly::deriv(u, 0, 2)),
                    _ => None,
                });
                let res = prem(&p, q, &r).unwrap();
                let init = initial(q, &r).unwrap();
                let sep = separant(q, &r).unwrap();
                let mut lhs = &(&init.pow(res.initial_power) * &sep.pow(res.separant_power)) * &p;
                for ((dx, dy), c) in &res.cofactors {
                    lhs = &lhs - &(c * &partial_n(q, *dx, *dy));
                }
                prop_assert_eq!(lhs, res.remainder);
                Ok(())
            })
            .map_err(|e| e.to_string())
    }

    pub fn lie_algebra_axioms(l: &LieAlgebraStructure) -> Result<(), String> {
        if !l.is_antisymmetric() {
            return Err("structure constants not antisymmetric".into());
        }
        if !l.satisfies_jacobi() {
            return Err("Jacobi identity fails".into());
        }
        Ok(())
    }

    /// Some inequation of one system vanishes on the other, or some equation
    /// of one reduces to a nonzero constant modulo the other.
    pub fn disjoint(a: &SimpleSystem, b: &SimpleSystem) -> bool {
        let kills = |s: &SimpleSystem, t: &SimpleSystem| {
            s.inequations.iter().any(|q| reduce_modulo(q, t).is_zero())
                || s.equations.iter().any(|e| {
                    let r = reduce_modulo(e, t);
                    !r.is_zero() && r.is_constant()
                })
        };
        kills(a, b) || kills(b, a)
    }

    pub fn pairwise_disjoint(systems: &[SimpleSystem]) -> Result<(), String> {
        for (i, a) in systems.iter().enumerate() {
            for (j, b) in systems.iter().enumerate().skip(i + 1) {
                if !disjoint(a, b) {
                    return Err(format!("no disjointness witness for systems {i} and {j}"));
                }
            }
        }
        Ok(())
    }

    /// Every series basis computed at a nonsingular point satisfies each
    /// equation of the involutive determining system through the truncation
    /// order.
    pub fn series_residuals(q: &ODEProblem) -> Result<(), String> {
        let ds = determining_system(q).map_err(|e| e.to_string())?;
        let s = janet_complete(&ds, &symmetry_ranking()).map_err(|e| e.to_string())?;
        let order = s.max_parametric_order() + 2;
        let mut regular = 0;
        for point in expansion_points().take(6) {
            match series_solution(&s, point.clone(), order) {
                Ok(sol) => {
                    regular += 1;
                    if !sol.residual_is_zero(&s.equations) {
                        return Err(format!("nonzero residual at {point:?}"));
                    }
                }
                Err(Error::SingularPoint(..)) => {}
                Err(e) => return Err(e.to_string()),
            }
        }
        if regular == 0 {
            return Err("no regular expansion point".into());
        }
        Ok(())
    }
}
