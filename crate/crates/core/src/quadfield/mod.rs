//! Quadratic fields K = Q(sqrt d), their integers, primes and units.

mod primes;
mod roots;
mod units;

pub use primes::{split_prime, LocalPrime, PrimeOfK, Residue};
pub use roots::{is_square, roots_in_ok};
pub use units::{fundamental_unit, principal_generator, s_unit_square_classes};

use crate::arith::is_squarefree;
use crate::num::Scalar;
use num_bigint::BigInt;
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("d = {0} is not a squarefree integer other than 0 and 1")]
    BadD(i64),
    #[error("Q(sqrt {0}) is imaginary")]
    Imaginary(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BasisKind {
    /// omega = sqrt(d)
    Sqrt,
    /// omega = (1 + sqrt(d)) / 2
    Half,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadField {
    d: i64,
    disc: i64,
    basis: BasisKind,
}

impl QuadField {
    pub fn new(d: i64) -> Result<QuadField, FieldError> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(FieldError::BadD(d));
        }
        let (disc, basis) = if d.rem_euclid(4) == 1 {
            (d, BasisKind::Half)
        } else {
            (4 * d, BasisKind::Sqrt)
        };
        Ok(QuadField { d, disc, basis })
    }

    /// The field whose discriminant is the fundamental discriminant `disc`.
    pub fn from_disc(disc: i64) -> Result<QuadField, FieldError> {
        let d = if disc.rem_euclid(4) == 0 { disc / 4 } else { disc };
        let k = QuadField::new(d)?;
        if k.disc != disc {
            return Err(FieldError::BadD(d));
        }
        Ok(k)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    /// (t, n) with omega^2 = t*omega + n.
    pub fn omega_relation(&self) -> (i64, i64) {
        match self.basis {
            BasisKind::Half => (1, (self.d - 1) / 4),
            BasisKind::Sqrt => (0, self.d),
        }
    }

    /// The minimal polynomial of omega as (b, c) in T^2 + bT + c.
    pub fn min_poly(&self) -> (i64, i64) {
        let (t, n) = self.omega_relation();
        (-t, -n)
    }

    /// The minimal polynomial of omega written out, e.g. `T^2-T-1`.
    pub fn min_poly_label(&self) -> String {
        let (t, n) = self.omega_relation();
        let lin = if t == 1 { "-T" } else { "" };
        let cst = if n >= 0 { format!("-{n}") } else { format!("+{}", -n) };
        format!("T^2{lin}{cst}")
    }

    pub fn elem<T: Scalar>(&self, x: T, y: T) -> FieldElem<T> {
        FieldElem { x, y, k: *self }
    }

    pub fn int<T: Scalar>(&self, n: T) -> FieldElem<T> {
        FieldElem { x: n, y: T::zero(), k: *self }
    }

    pub fn zero<T: Scalar>(&self) -> FieldElem<T> {
        self.int(T::zero())
    }

    pub fn one<T: Scalar>(&self) -> FieldElem<T> {
        self.int(T::one())
    }

    pub fn omega<T: Scalar>(&self) -> FieldElem<T> {
        self.elem(T::zero(), T::one())
    }

    /// sqrt(d) as an element of O_K.
    pub fn sqrt_d<T: Scalar>(&self) -> FieldElem<T> {
        match self.basis {
            BasisKind::Sqrt => self.omega(),
            BasisKind::Half => self.elem(-T::one(), T::of(2)),
        }
    }

    /// (x + y sqrt d)/2 style constructor: returns the element (u + v sqrt d)/w
    /// when it lies in O_K.
    pub fn from_sqrt_coords<T: Scalar>(&self, u: T, v: T, w: T) -> Option<FieldElem<T>> {
        // u + v sqrt d = u + v(2 omega - 1) (Half) or u + v omega (Sqrt)
        let num = match self.basis {
            BasisKind::Sqrt => self.elem(u, v),
            BasisKind::Half => self.elem(u - v.clone(), v * T::of(2)),
        };
        num.div_int_exact(&w)
    }

    /// Images of omega under the two embeddings (real fields) or the real and
    /// imaginary parts of one complex embedding.
    pub fn omega_f64(&self) -> [f64; 2] {
        let s = (self.d.unsigned_abs() as f64).sqrt();
        match (self.basis, self.d > 0) {
            (BasisKind::Sqrt, true) => [s, -s],
            (BasisKind::Half, true) => [(1.0 + s) / 2.0, (1.0 - s) / 2.0],
            (BasisKind::Sqrt, false) => [0.0, s],
            (BasisKind::Half, false) => [0.5, s / 2.0],
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

/// x + y·omega in O_K.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem<T: Scalar> {
    pub x: T,
    pub y: T,
    pub k: QuadField,
}

impl<T: Scalar> FieldElem<T> {
    pub fn field(&self) -> QuadField {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn norm(&self) -> T {
        let (t, n) = self.k.omega_relation();
        self.x.clone() * self.x.clone() + T::of(t) * self.x.clone() * self.y.clone()
            - T::of(n) * self.y.clone() * self.y.clone()
    }

    pub fn trace(&self) -> T {
        let (t, _) = self.k.omega_relation();
        T::of(2) * self.x.clone() + T::of(t) * self.y.clone()
    }

    pub fn conj(&self) -> Self {
        let (t, _) = self.k.omega_relation();
        FieldElem {
            x: self.x.clone() + T::of(t) * self.y.clone(),
            y: -self.y.clone(),
            k: self.k,
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        FieldElem { x: self.x.clone() * c.clone(), y: self.y.clone() * c.clone(), k: self.k }
    }

    /// gcd of the two coordinates.
    pub fn content(&self) -> T {
        self.x.gcd(&self.y)
    }

    pub fn div_int_exact(&self, n: &T) -> Option<Self> {
        let (qx, rx) = self.x.div_rem(n);
        let (qy, ry) = self.y.div_rem(n);
        (rx.is_zero() && ry.is_zero()).then(|| FieldElem { x: qx, y: qy, k: self.k })
    }

    /// Exact quotient in O_K, if it exists.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        assert!(!other.is_zero(), "division by zero");
        (self * &other.conj()).div_int_exact(&other.norm())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut r = self.k.one();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        r
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    pub fn to_big(&self) -> FieldElem<BigInt> {
        FieldElem { x: self.x.to_bigint(), y: self.y.to_bigint(), k: self.k }
    }

    /// Approximate images under the two real embeddings.
    pub fn real_embeddings(&self) -> [f64; 2] {
        assert!(self.k.is_real());
        let w = self.k.omega_f64();
        let x = big_to_f64(&self.x.to_bigint());
        let y = big_to_f64(&self.y.to_bigint());
        [x + y * w[0], x + y * w[1]]
    }
}

pub(crate) fn big_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(if n.sign() == num_bigint::Sign::Minus {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

impl<T: Scalar> fmt::Display for FieldElem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.x, self.y)
    }
}

impl<'a, T: Scalar> Add<&'a FieldElem<T>> for &'a FieldElem<T> {
    type Output = FieldElem<T>;
    fn add(self, o: &FieldElem<T>) -> FieldElem<T> {
        debug_assert_eq!(self.k, o.k);
        FieldElem { x: self.x.clone() + o.x.clone(), y: self.y.clone() + o.y.clone(), k: self.k }
    }
}

impl<'a, T: Scalar> Sub<&'a FieldElem<T>> for &'a FieldElem<T> {
    type Output = FieldElem<T>;
    fn sub(self, o: &FieldElem<T>) -> FieldElem<T> {
        debug_assert_eq!(self.k, o.k);
        FieldElem { x: self.x.clone() - o.x.clone(), y: self.y.clone() - o.y.clone(), k: self.k }
    }
}

impl<'a, T: Scalar> Mul<&'a FieldElem<T>> for &'a FieldElem<T> {
    type Output = FieldElem<T>;
    fn mul(self, o: &FieldElem<T>) -> FieldElem<T> {
        debug_assert_eq!(self.k, o.k);
        let (t, n) = self.k.omega_relation();
        let yy = self.y.clone() * o.y.clone();
        let x = self.x.clone() * o.x.clone() + yy.clone() * T::of(n);
        let y = self.x.clone() * o.y.clone() + self.y.clone() * o.x.clone() + yy * T::of(t);
        FieldElem { x, y, k: self.k }
    }
}

impl<T: Scalar> Neg for &FieldElem<T> {
    type Output = FieldElem<T>;
    fn neg(self) -> FieldElem<T> {
        FieldElem { x: -self.x.clone(), y: -self.y.clone(), k: self.k }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr<FieldElem<T>> for FieldElem<T> {
            type Output = FieldElem<T>;
            fn $m(self, o: FieldElem<T>) -> FieldElem<T> {
                (&self).$m(&o)
            }
        }
        impl<'a, T: Scalar> $tr<&'a FieldElem<T>> for FieldElem<T> {
            type Output = FieldElem<T>;
            fn $m(self, o: &FieldElem<T>) -> FieldElem<T> {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for FieldElem<T> {
    type Output = FieldElem<T>;
    fn neg(self) -> FieldElem<T> {
        -&self
    }
}

/// An element of K written as num/den with den a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frac<T: Scalar> {
    pub num: FieldElem<T>,
    pub den: T,
}

impl<T: Scalar> Frac<T> {
    pub fn new(num: FieldElem<T>, den: T) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut g = num.content().gcd(&den);
        if den.is_negative() {
            g = -g;
        }
        Frac { num: num.div_int_exact(&g).unwrap(), den: den / g }
    }

    pub fn from_elem(e: FieldElem<T>) -> Self {
        Frac { num: e, den: T::one() }
    }

    /// a / b for field elements.
    pub fn quotient(a: &FieldElem<T>, b: &FieldElem<T>) -> Self {
        assert!(!b.is_zero(), "division by zero");
        Frac::new(a * &b.conj(), b.norm())
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn integral(&self) -> Option<FieldElem<T>> {
        self.is_integral().then(|| self.num.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.num.is_rational()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<T: Scalar> fmt::Display for Frac<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
