use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::poly::{gcd, DiffPolynomial as Poly};

/// Quotient of two differential polynomials in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffRational {
    num: Poly,
    den: Poly,
}

impl DiffRational {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    /// Caller guarantees `den != 0` and `gcd(num, den) = 1`.
    pub(crate) fn from_coprime(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        DiffRational { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        DiffRational {
            num: p,
            den: Poly::one(),
        }
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return DiffRational::from_poly(Poly::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let mut c = den.numeric_content();
        if c.is_negative() != den.leading_coefficient().is_negative() {
            c = -c;
        }
        let inv = c.recip();
        DiffRational {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::normalize(&self.num + &o.num, self.den.clone());
        }
        Self::normalize(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn neg(&self) -> Self {
        DiffRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalize(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn pow(&self, e: u32) -> Self {
        DiffRational {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }
}

impl fmt::Display for DiffRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for DiffRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn lowest_terms_and_sign() {
        let x = Poly::x();
        let num = &x * &(&x + &Poly::one());
        let den = (&x * &Poly::y()).scale(&rat(-2));
        let r = DiffRational::new(num, den).unwrap();
        assert_eq!(r.denom(), &(&Poly::y() * &Poly::one()));
        assert_eq!(r.numer(), &(&x + &Poly::one()).scale(&crate::poly::ratio(-1, 2)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(DiffRational::new(Poly::one(), Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_operations() {
        let a = DiffRational::new(Poly::one(), Poly::x()).unwrap();
        let b = DiffRational::new(Poly::one(), Poly::y()).unwrap();
        let s = a.add(&b);
        assert_eq!(s.numer(), &(&Poly::x() + &Poly::y()));
        assert!(s.sub(&s).is_zero());
        let q = s.div(&s).unwrap();
        assert_eq!(q, DiffRational::from_poly(Poly::one()));
    }
}
