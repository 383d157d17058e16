//! Structure constants of the symmetry algebra, derived algebra and the
//! symmetry-based linearization test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::involution::{
    dimension, expansion_points, janet_complete, series_solution, DimensionPolynomial,
    InvolutiveSystem, SeriesSolution,
};
use crate::parser::ODEProblem;
use crate::poly::{Deriv, Func, Rational};
use crate::symmetry::{determining_system, symmetry_ranking};

/// Truncated Taylor series in `(x - x0, y - y0)`, dense up to total order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series2 {
    order: u32,
    /// `c[i][j]` multiplies `(x - x0)^i (y - y0)^j`, `i + j <= order`.
    c: Vec<Vec<Rational>>,
}

fn factorial(n: u32) -> Rational {
    Rational::from_integer((1..=n).map(BigInt::from).product())
}

impl Series2 {
    pub fn zero(order: u32) -> Self {
        let c = (0..=order)
            .map(|i| vec![Rational::zero(); (order - i + 1) as usize])
            .collect();
        Series2 { order, c }
    }

    /// Build from derivative values `d^(i+j) f / dx^i dy^j` at the point.
    pub fn from_derivatives(order: u32, value: impl Fn(u32, u32) -> Rational) -> Self {
        let mut s = Series2::zero(order);
        for i in 0..=order {
            for j in 0..=(order - i) {
                s.c[i as usize][j as usize] = value(i, j) / (factorial(i) * factorial(j));
            }
        }
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, i: u32, j: u32) -> &Rational {
        &self.c[i as usize][j as usize]
    }

    /// Derivative value at the expansion point.
    pub fn derivative(&self, i: u32, j: u32) -> Rational {
        self.coeff(i, j) * factorial(i) * factorial(j)
    }

    pub fn truncate(&self, order: u32) -> Self {
        Series2::from_coeffs(order.min(self.order), |i, j| self.coeff(i, j).clone())
    }

    fn from_coeffs(order: u32, f: impl Fn(u32, u32) -> Rational) -> Self {
        let mut s = Series2::zero(order);
        for i in 0..=order {
            for j in 0..=(order - i) {
                s.c[i as usize][j as usize] = f(i, j);
            }
        }
        s
    }

    /// `d/dx`; the result is one order shorter.
    pub fn dx(&self) -> Self {
        let o = self.order.saturating_sub(1);
        if self.order == 0 {
            return Series2::zero(0);
        }
        Series2::from_coeffs(o, |i, j| self.coeff(i + 1, j) * Rational::from_integer((i + 1).into()))
    }

    pub fn dy(&self) -> Self {
        let o = self.order.saturating_sub(1);
        if self.order == 0 {
            return Series2::zero(0);
        }
        Series2::from_coeffs(o, |i, j| self.coeff(i, j + 1) * Rational::from_integer((j + 1).into()))
    }

    pub fn mul(&self, o: &Series2) -> Self {
        let ord = self.order.min(o.order);
        let mut s = Series2::zero(ord);
        for i in 0..=ord {
            for j in 0..=(ord - i) {
                let a = self.coeff(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..=(ord - i - j) {
                    for l in 0..=(ord - i - j - k) {
                        let b = o.coeff(k, l);
                        if !b.is_zero() {
                            s.c[(i + k) as usize][(j + l) as usize] += a * b;
                        }
                    }
                }
            }
        }
        s
    }

    pub fn add(&self, o: &Series2) -> Self {
        let ord = self.order.min(o.order);
        Series2::from_coeffs(ord, |i, j| self.coeff(i, j) + o.coeff(i, j))
    }

    pub fn sub(&self, o: &Series2) -> Self {
        let ord = self.order.min(o.order);
        Series2::from_coeffs(ord, |i, j| self.coeff(i, j) - o.coeff(i, j))
    }
}

/// A vector field `xi d/dx + eta d/dy` given by truncated series.
#[derive(Clone, Debug)]
pub struct SeriesField {
    pub xi: Series2,
    pub eta: Series2,
}

impl SeriesField {
    fn apply(&self, f: &Series2) -> Series2 {
        self.xi.mul(&f.dx()).add(&self.eta.mul(&f.dy()))
    }

    pub fn bracket(&self, o: &SeriesField) -> SeriesField {
        SeriesField {
            xi: self.apply(&o.xi).sub(&o.apply(&self.xi)),
            eta: self.apply(&o.eta).sub(&o.apply(&self.eta)),
        }
    }

    fn component(&self, d: &Deriv) -> &Series2 {
        if d.func == Func::XI {
            &self.xi
        } else {
            &self.eta
        }
    }
}

/// `[X_i, X_j] = sum_k C[i][j][k] X_k`, indices from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraStructure {
    pub m: usize,
    c: Vec<Vec<Vec<Rational>>>,
}

impl LieAlgebraStructure {
    /// Algebra with all structure constants zero.
    pub fn abelian(m: usize) -> Self {
        LieAlgebraStructure {
            m,
            c: vec![vec![vec![Rational::zero(); m]; m]; m],
        }
    }

    /// Build from `[X_i, X_j]` for `i < j`; the rest follows by antisymmetry.
    pub fn from_brackets(m: usize, table: &[((usize, usize), Vec<Rational>)]) -> Self {
        let mut l = LieAlgebraStructure::abelian(m);
        for ((i, j), v) in table {
            assert!(i < j && *j < m && v.len() == m, "bad bracket entry ({i}, {j})");
            l.c[*i][*j] = v.clone();
            l.c[*j][*i] = v.iter().map(|x| -x).collect();
        }
        l
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[i][j][k]
    }

    pub fn bracket_of_basis(&self, i: usize, j: usize) -> &[Rational] {
        &self.c[i][j]
    }

    /// Nonzero `C^k_{ij}` with `i < j`, as `(i, j, k, value)`.
    pub fn nonzero_constants(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                for k in 0..self.m {
                    if !self.c[i][j][k].is_zero() {
                        out.push((i, j, k, self.c[i][j][k].clone()));
                    }
                }
            }
        }
        out
    }

    /// Bracket of two elements given by coordinates.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.m];
        for (i, ui) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                let w = ui * vj;
                for (o, c) in out.iter_mut().zip(&self.c[i][j]) {
                    *o += &w * c;
                }
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.m).all(|i| {
            (0..self.m).all(|j| (0..self.m).all(|k| self.c[i][j][k] == -&self.c[j][i][k]))
        })
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let m = self.m;
        for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    for s in 0..m {
                        let mut acc = Rational::zero();
                        for l in 0..m {
                            acc += &self.c[i][j][l] * &self.c[l][k][s];
                            acc += &self.c[j][k][l] * &self.c[l][i][s];
                            acc += &self.c[k][i][l] * &self.c[l][j][s];
                        }
                        if !acc.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// The derived algebra `[L, L]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedAlgebraInfo {
    pub dimension: usize,
    pub abelian: bool,
    /// Integer row-echelon basis in coordinates of the generators.
    pub basis: Vec<Vec<Rational>>,
}

/// Fraction-free row echelon form; returns the nonzero rows, each primitive.
pub fn row_echelon(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..cols {
        let Some(p) = a.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let pivot = a.swap_remove(p);
        for r in a.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let (f, g) = (pivot[col].clone(), r[col].clone());
            for (x, y) in r.iter_mut().zip(&pivot) {
                *x = &*x * &f - y * &g;
            }
            make_primitive(r);
        }
        out.push(pivot);
        a.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    for r in out.iter_mut() {
        make_primitive(r);
    }
    out
}

fn make_primitive(r: &mut [BigInt]) {
    let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return;
    }
    let neg = r.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in r.iter_mut() {
        *x = &*x / &g;
        if neg {
            *x = -&*x;
        }
    }
}

pub fn derived_algebra(l: &LieAlgebraStructure) -> DerivedAlgebraInfo {
    let mut rows = Vec::new();
    for i in 0..l.m {
        for j in (i + 1)..l.m {
            rows.push(l.c[i][j].clone());
        }
    }
    let basis: Vec<Vec<Rational>> = row_echelon(&rows)
        .into_iter()
        .map(|r| r.into_iter().map(Rational::from_integer).collect())
        .collect();
    let abelian = basis.iter().enumerate().all(|(a, u)| {
        basis[a + 1..]
            .iter()
            .all(|v| l.bracket(u, v).iter().all(Zero::is_zero))
    });
    DerivedAlgebraInfo {
        dimension: basis.len(),
        abelian,
        basis,
    }
}

fn basis_fields(sol: &SeriesSolution, order: u32) -> Vec<SeriesField> {
    (0..sol.dimension())
        .map(|k| SeriesField {
            xi: Series2::from_derivatives(order, |i, j| sol.value(&Deriv::new(Func::XI, i, j), k)),
            eta: Series2::from_derivatives(order, |i, j| sol.value(&Deriv::new(Func::ETA, i, j), k)),
        })
        .collect()
}

/// Structure constants from a series solution whose truncation order is at
/// least one above the highest parametric order.
pub fn structure_constants_from(sol: &SeriesSolution) -> Result<LieAlgebraStructure> {
    let m = sol.dimension();
    let order = sol.order;
    let top = sol.parametric.iter().map(Deriv::order).max().unwrap_or(0);
    if order <= top {
        return Err(Error::TruncationInsufficient);
    }
    let fields = basis_fields(sol, order);
    let mut l = LieAlgebraStructure::abelian(m);
    for a in 0..m {
        for b in (a + 1)..m {
            let z = fields[a].bracket(&fields[b]);
            let coords: Vec<Rational> = sol
                .parametric
                .iter()
                .map(|p| z.component(p).derivative(p.dx, p.dy))
                .collect();
            // the bracket must be the stated combination through order - 1
            for f in [Func::XI, Func::ETA] {
                for i in 0..order {
                    for j in 0..(order - i) {
                        let w = Deriv::new(f, i, j);
                        let lhs = z.component(&w).derivative(i, j);
                        let rhs = coords
                            .iter()
                            .enumerate()
                            .fold(Rational::zero(), |acc, (k, c)| acc + c * sol.value(&w, k));
                        if lhs != rhs {
                            return Err(Error::TruncationInsufficient);
                        }
                    }
                }
            }
            l.c[b][a] = coords.iter().map(|x| -x).collect();
            l.c[a][b] = coords;
        }
    }
    assert!(l.is_antisymmetric() && l.satisfies_jacobi(), "structure constants violate Jacobi");
    Ok(l)
}

/// Series solution at the first regular expansion point of the spiral.
pub fn regular_series(s: &InvolutiveSystem, order: u32, skip: usize) -> Result<SeriesSolution> {
    for point in expansion_points().skip(skip).take(64) {
        match series_solution(s, point, order) {
            Ok(sol) if sol.residual_is_zero(&s.equations) => return Ok(sol),
            Ok(_) | Err(Error::SingularPoint(..)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SingularPoint("*".into(), "*".into()))
}

/// Structure constants of the symmetry algebra described by `s`.
pub fn structure_constants(s: &InvolutiveSystem) -> Result<LieAlgebraStructure> {
    structure_constants_with(s, None, 0).map(|(l, _)| l)
}

fn structure_constants_with(
    s: &InvolutiveSystem,
    order: Option<u32>,
    skip: usize,
) -> Result<(LieAlgebraStructure, SeriesSolution)> {
    if dimension(s) == DimensionPolynomial::Infinite {
        return Err(Error::InfiniteDimension);
    }
    let base = order.unwrap_or(0).max(s.max_parametric_order() + 1);
    for k in base..base + 4 {
        let sol = regular_series(s, k, skip)?;
        match structure_constants_from(&sol) {
            Ok(l) => return Ok((l, sol)),
            Err(Error::TruncationInsufficient) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::TruncationInsufficient)
}

/// Outcome of the symmetry-based test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Test1Report {
    pub n: u32,
    pub m: usize,
    pub algebra: LieAlgebraStructure,
    pub derived: DerivedAlgebraInfo,
    pub point: (Rational, Rational),
    pub series_order: u32,
    pub linearizable: bool,
}

/// Linearizability decision from `n`, `m` and the derived algebra.
pub fn verdict(n: u32, m: usize, derived: &DerivedAlgebraInfo) -> bool {
    let n_us = n as usize;
    match n {
        0 | 1 => false,
        2 => m == 8,
        _ => {
            m == n_us + 4
                || ((m == n_us + 1 || m == n_us + 2) && derived.abelian && derived.dimension == n_us)
        }
    }
}

pub fn linearization_test_1(q: &ODEProblem) -> Result<Test1Report> {
    linearization_test_1_with(q, None, 0)
}

/// Variant with an explicit minimum series order and a number of leading
/// expansion points to skip.
pub fn linearization_test_1_with(
    q: &ODEProblem,
    series_order: Option<u32>,
    skip_points: usize,
) -> Result<Test1Report> {
    let ds = determining_system(q)?;
    let s = janet_complete(&ds, &symmetry_ranking())?;
    let m = match dimension(&s) {
        DimensionPolynomial::Finite(m) => m,
        DimensionPolynomial::Infinite => return Err(Error::InfiniteDimension),
    };
    let (algebra, sol) = structure_constants_with(&s, series_order, skip_points)?;
    let derived = derived_algebra(&algebra);
    Ok(Test1Report {
        n: q.order,
        m,
        linearizable: verdict(q.order, m, &derived),
        algebra,
        derived,
        point: sol.point,
        series_order: sol.order,
    })
}
