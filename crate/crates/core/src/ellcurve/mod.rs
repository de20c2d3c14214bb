//! Long Weierstrass curves over O_K.

mod tate;

pub use tate::{good_outside, local_minimal_model, tate_reduce, ReductionInfo, ReductionKind};

use crate::num::Scalar;
use crate::quadfield::{is_square, FieldElem, Frac, QuadField};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("the Weierstrass equation is singular")]
    Singular,
    #[error("twisting parameter is zero")]
    ZeroTwist,
    #[error("coefficients belong to different fields")]
    FieldMismatch,
}

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with cached invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveOverK<T: Scalar> {
    k: QuadField,
    a: [FieldElem<T>; 5],
    b: [FieldElem<T>; 4],
    c4: FieldElem<T>,
    c6: FieldElem<T>,
    disc: FieldElem<T>,
    j: Frac<T>,
}

impl<T: Scalar> CurveOverK<T> {
    /// Coefficients in the order a1, a2, a3, a4, a6.
    pub fn new(a: [FieldElem<T>; 5]) -> Result<Self, CurveError> {
        let k = a[0].k;
        if a.iter().any(|x| x.k != k) {
            return Err(CurveError::FieldMismatch);
        }
        let [a1, a2, a3, a4, a6] = &a;
        let c = |n: i64| k.int(T::of(n));
        let b2 = a1 * a1 + &c(4) * a2;
        let b4 = &c(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + &c(4) * a6;
        let b8 = &(&(&(a1 * a1) * a6) + &(&c(4) * &(a2 * a6))) - &(&(a1 * a3) * a4)
            + &(a2 * &(a3 * a3))
            - (a4 * a4);
        let c4 = &b2 * &b2 - &c(24) * &b4;
        let c6 = -&(&b2 * &(&b2 * &b2)) + &c(36) * &(&b2 * &b4) - &c(216) * &b6;
        let disc = -&(&(&b2 * &b2) * &b8) - &c(8) * &(&b4 * &(&b4 * &b4)) - &c(27) * &(&b6 * &b6)
            + &c(9) * &(&b2 * &(&b4 * &b6));
        if disc.is_zero() {
            return Err(CurveError::Singular);
        }
        let j = Frac::quotient(&(&c4 * &(&c4 * &c4)), &disc);
        Ok(CurveOverK { k, a, b: [b2, b4, b6, b8], c4, c6, disc, j })
    }

    pub fn from_ints(k: &QuadField, a: [(i64, i64); 5]) -> Result<Self, CurveError> {
        Self::new(a.map(|(x, y)| k.elem(T::of(x), T::of(y))))
    }

    pub fn field(&self) -> QuadField {
        self.k
    }

    pub fn a(&self) -> &[FieldElem<T>; 5] {
        &self.a
    }

    pub fn b2(&self) -> &FieldElem<T> {
        &self.b[0]
    }

    pub fn b4(&self) -> &FieldElem<T> {
        &self.b[1]
    }

    pub fn b6(&self) -> &FieldElem<T> {
        &self.b[2]
    }

    pub fn b8(&self) -> &FieldElem<T> {
        &self.b[3]
    }

    pub fn c4(&self) -> &FieldElem<T> {
        &self.c4
    }

    pub fn c6(&self) -> &FieldElem<T> {
        &self.c6
    }

    pub fn disc(&self) -> &FieldElem<T> {
        &self.disc
    }

    pub fn j(&self) -> &Frac<T> {
        &self.j
    }

    /// (c4, c6, disc, j)
    pub fn invariants(&self) -> (FieldElem<T>, FieldElem<T>, FieldElem<T>, Frac<T>) {
        (self.c4.clone(), self.c6.clone(), self.disc.clone(), self.j.clone())
    }

    /// The model after x = x' + r, y = y' + s x' + t.
    pub fn rst(&self, r: &FieldElem<T>, s: &FieldElem<T>, t: &FieldElem<T>) -> Self {
        Self::new(rst_coeffs(&self.a, r, s, t)).expect("coordinate change preserves smoothness")
    }

    /// The model after x = u^2 x', y = u^3 y' for u = 1/lambda, i.e. a_i -> a_i lambda^i.
    pub fn scale(&self, lambda: &FieldElem<T>) -> Self {
        let l2 = lambda * lambda;
        let l3 = &l2 * lambda;
        let l4 = &l2 * &l2;
        let l6 = &l3 * &l3;
        let [a1, a2, a3, a4, a6] = &self.a;
        Self::new([a1 * lambda, a2 * &l2, a3 * &l3, a4 * &l4, a6 * &l6]).unwrap()
    }

    /// The quadratic twist by `u`: y^2 = x^3 + u b2 x^2 + 8 u^2 b4 x + 16 u^3 b6.
    pub fn quadratic_twist(&self, u: &FieldElem<T>) -> Result<Self, CurveError> {
        if u.is_zero() {
            return Err(CurveError::ZeroTwist);
        }
        let k = self.k;
        let u2 = u * u;
        let u3 = &u2 * u;
        let z = k.zero();
        let a2 = u * self.b2();
        let a4 = &(&k.int(T::of(8)) * &u2) * self.b4();
        let a6 = &(&k.int(T::of(16)) * &u3) * self.b6();
        Self::new([z.clone(), a2, z.clone(), a4, a6])
    }

    /// Monic cubic X^3 + b2 X^2 + 8 b4 X + 16 b6 whose roots are 4x(P) for
    /// the nonzero 2-torsion points P; coefficients constant term first.
    pub fn two_division_cubic(&self) -> [FieldElem<T>; 3] {
        let k = self.k;
        [
            &k.int(T::of(16)) * self.b6(),
            &k.int(T::of(8)) * self.b4(),
            self.b2().clone(),
        ]
    }

    pub fn to_big(&self) -> CurveOverK<BigInt> {
        CurveOverK::new(self.a.clone().map(|x| x.to_big())).unwrap()
    }
}

pub(crate) fn rst_coeffs<T: Scalar>(
    a: &[FieldElem<T>; 5],
    r: &FieldElem<T>,
    s: &FieldElem<T>,
    t: &FieldElem<T>,
) -> [FieldElem<T>; 5] {
    let k = a[0].k;
    let c = |n: i64| k.int(T::of(n));
    let [a1, a2, a3, a4, a6] = a;
    let n1 = a1 + &(&c(2) * s);
    let n2 = &(a2 - &(s * a1)) + &(&c(3) * r) - (s * s);
    let n3 = &(a3 + &(r * a1)) + &(&c(2) * t);
    let n4 = &(&(&(a4 - &(s * a3)) + &(&c(2) * &(r * a2))) - &(&(t + &(r * s)) * a1))
        + &(&c(3) * &(r * r))
        - (&c(2) * &(s * t));
    let n6 = &(&(&(&(a6 + &(r * a4)) + &(&(r * r) * a2)) + &(&(r * r) * r)) - &(t * a3)) - &(t * t)
        - (&(r * t) * a1);
    [n1, n2, n3, n4, n6]
}

impl CurveOverK<BigInt> {
    /// Whether two curves are isomorphic over K (generic j only: j != 0, 1728).
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        if self.j != other.j {
            return false;
        }
        if self.c4.is_zero() || self.c6.is_zero() {
            unimplemented!("isomorphism test needs j != 0, 1728");
        }
        // c4' = l^4 c4, c6' = l^6 c6  =>  c6' c4 / (c6 c4') = l^2
        let num = &other.c6 * &self.c4;
        let den = &self.c6 * &other.c4;
        // num/den is a square iff num * den is a square
        is_square(&(&num * &den)).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Curve;
    use num_traits::Signed;

    fn e0() -> Curve {
        let k = QuadField::new(6).unwrap();
        // a = sqrt 6: y^2 + a xy + (a+1) y = x^3 + (a+1) x^2 + (2a-1) x + (a-1)
        Curve::from_ints(&k, [(0, 1), (1, 1), (1, 1), (-1, 2), (-1, 1)]).unwrap()
    }

    #[test]
    fn e0_invariants() {
        let e = e0();
        assert_eq!(e.j().integral(), Some(e.field().int(BigInt::from(8000))));
        assert!(e.disc().norm().abs() == BigInt::from(1));
        let (c4, c6, d, _) = e.invariants();
        let k = e.field();
        assert_eq!(&(&c4 * &c4) * &c4 - &c6 * &c6, &k.int(BigInt::from(1728)) * &d);
    }

    #[test]
    fn twist_examples() {
        let e = e0();
        let k = e.field();
        let v = k.elem(BigInt::from(2), BigInt::from(-3));
        let sq = e.quadratic_twist(&(&v * &v)).unwrap();
        assert!(sq.is_isomorphic(&e));
        let u = k.elem(BigInt::from(5), BigInt::from(2));
        let t = e.quadratic_twist(&u).unwrap();
        assert_eq!(t.j(), e.j());
        assert!(!t.is_isomorphic(&e));
        assert!(t.quadratic_twist(&u).unwrap().is_isomorphic(&e));
        assert_eq!(e.quadratic_twist(&k.zero()), Err(CurveError::ZeroTwist));
    }

    #[test]
    fn j_zero_curve() {
        let k = QuadField::new(5).unwrap();
        let e = Curve::from_ints(&k, [(0, 0), (0, 0), (0, 0), (0, 0), (1, 0)]).unwrap();
        assert!(e.c4().is_zero());
        assert!(e.j().is_zero());
        assert_eq!(
            Curve::from_ints(&k, [(0, 0); 5]).unwrap_err(),
            CurveError::Singular
        );
    }

    #[test]
    fn generic_scalar_matches_bigint() {
        let k = QuadField::new(-2).unwrap();
        let a = [(1, 0), (-1, 1), (0, 1), (2, -1), (3, 0)];
        let small = CurveOverK::<i64>::from_ints(&k, a).unwrap();
        let big = Curve::from_ints(&k, a).unwrap();
        assert_eq!(small.to_big(), big);
    }
}
