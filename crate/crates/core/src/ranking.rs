use std::cmp::Ordering;

use crate::poly::{Deriv, Func};

/// Orderly ranking on partial derivatives of the unknown functions.
///
/// Derivatives are compared by total order first, then by function
/// precedence (earlier in the list is greater; unlisted functions rank below
/// all listed ones, by name), then degree-reverse-lexicographically on the
/// multi-index with the preferred derivation greater.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    precedence: Vec<Func>,
    x_first: bool,
}

impl Ranking {
    pub fn orderly(precedence: Vec<Func>) -> Self {
        Ranking {
            precedence,
            x_first: true,
        }
    }

    /// Same ranking with `d/dy` preferred over `d/dx`.
    pub fn with_y_first(mut self) -> Self {
        self.x_first = false;
        self
    }

    pub fn precedence(&self) -> &[Func] {
        &self.precedence
    }

    pub fn x_first(&self) -> bool {
        self.x_first
    }

    fn func_cmp(&self, a: Func, b: Func) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let pa = self.precedence.iter().position(|&f| f == a);
        let pb = self.precedence.iter().position(|&f| f == b);
        match (pa, pb) {
            (Some(i), Some(j)) => j.cmp(&i),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => b.name().cmp(&a.name()),
        }
    }

    pub fn cmp(&self, a: &Deriv, b: &Deriv) -> Ordering {
        a.order()
            .cmp(&b.order())
            .then_with(|| self.func_cmp(a.func, b.func))
            .then_with(|| {
                if self.x_first {
                    a.dx.cmp(&b.dx)
                } else {
                    a.dy.cmp(&b.dy)
                }
            })
    }

    pub fn max<'a>(&self, it: impl IntoIterator<Item = &'a Deriv>) -> Option<Deriv> {
        it.into_iter().copied().max_by(|a, b| self.cmp(a, b))
    }
}
