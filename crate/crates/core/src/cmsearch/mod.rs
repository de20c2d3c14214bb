//! CM search: class-number-two orders, their j-invariants over real
//! quadratic fields, twists with good reduction outside one prime, and
//! heavenly classification.

mod hilbert;
mod reference;
mod search;
mod twists;

pub use hilbert::hilbert_class_poly;
pub use reference::{reference_table, ReferenceRow, HARD_ROWS};
pub use search::{run_search, ClassSummary, FoundCurve, RowCheck, RowStatus, SearchReport, SearchRow, Totals};
pub use twists::{twist_search, Twist, TwistKind};

use crate::arith::{is_prime, is_squarefree, kronecker_prime, primes_up_to};
use crate::quadfield::roots_in_ok;
use crate::{Curve, Elem, QuadField};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

pub const MAX_ABS_DISC: i64 = 1000;
pub const ISOGENY_PRIME_BOUND: u64 = 163;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CmError {
    #[error("{0} is not a negative discriminant (0 or 1 mod 4)")]
    BadDiscriminant(i64),
    #[error("Hilbert class polynomial of {0} did not stabilise within the precision cap")]
    PrecisionExhausted(i64),
}

pub(crate) fn check_disc(d: i64) -> Result<(), CmError> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(CmError::BadDiscriminant(d));
    }
    Ok(())
}

/// An order Z + f O_L of discriminant d = f^2 disc(L), L = Q(sqrt -m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CmOrderDisc {
    pub d: i64,
    pub m: i64,
    pub f: i64,
    pub h: u32,
}

impl CmOrderDisc {
    pub fn new(d: i64) -> Result<CmOrderDisc, CmError> {
        check_disc(d)?;
        let (fund, f) = fundamental_part(d);
        let m = if fund % 4 == 0 { -fund / 4 } else { -fund };
        Ok(CmOrderDisc { d, m, f, h: class_number(d)? })
    }

    /// Discriminant of the maximal order of L.
    pub fn fundamental(&self) -> i64 {
        self.d / (self.f * self.f)
    }
}

/// (fundamental discriminant, conductor) with d = f^2 * fund.
pub fn fundamental_part(d: i64) -> (i64, i64) {
    let mut f = 1;
    let mut fund = d;
    let mut p = 2;
    while p * p <= fund.abs() {
        while fund % (p * p) == 0 && matches!((fund / (p * p)).rem_euclid(4), 0 | 1) {
            fund /= p * p;
            f *= p;
        }
        p += 1;
    }
    debug_assert!(crate::scarcity::is_fundamental(fund) || fund == -3 || fund == -4);
    (fund, f)
}

/// Reduced primitive forms (a, b, c) of discriminant d: |b| <= a <= c,
/// b >= 0 when |b| = a or a = c.
pub fn reduced_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let amax = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=amax {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                out.push((a, b, c));
            }
        }
    }
    out
}

pub fn class_number(d: i64) -> Result<u32, CmError> {
    check_disc(d)?;
    Ok(reduced_forms(d).len() as u32)
}

/// Every order discriminant with class number two and |d| <= 1000.
pub fn class_number_2_discs() -> Vec<CmOrderDisc> {
    (3..=MAX_ABS_DISC)
        .map(|n| -n)
        .filter(|d| matches!(d.rem_euclid(4), 0 | 1) && class_number(*d) == Ok(2))
        .map(|d| CmOrderDisc::new(d).unwrap())
        .collect()
}

/// Class-number-one discriminants, whose j-invariants are rational.
pub fn class_number_1_discs() -> Vec<CmOrderDisc> {
    (3..=MAX_ABS_DISC)
        .map(|n| -n)
        .filter(|d| matches!(d.rem_euclid(4), 0 | 1) && class_number(*d) == Ok(1))
        .map(|d| CmOrderDisc::new(d).unwrap())
        .collect()
}

/// Primes l <= 163 with (d/l) != -1 or l | f d: those at which a curve
/// with CM by the order can have a rational l-isogeny.
pub fn isogeny_prime_candidates(d: &CmOrderDisc) -> Vec<u64> {
    primes_up_to(ISOGENY_PRIME_BOUND)
        .into_iter()
        .filter(|&l| kronecker_prime(d.d, l) != -1 || (d.f * d.d) % l as i64 == 0)
        .collect()
}

/// The real quadratic field generated by the roots of a monic quadratic
/// x^2 + b x + c, with the roots in O_K.
pub fn root_field(b: &BigInt, c: &BigInt) -> Option<(QuadField, Vec<Elem>)> {
    let disc = b * b - 4 * c;
    let sq = squarefree_part(&disc)?;
    let k = QuadField::new(sq).ok()?;
    let roots = roots_in_ok(&k, &[k.int(c.clone()), k.int(b.clone())]);
    (roots.len() == 2).then_some((k, roots))
}

// Squarefree kernel of a nonzero integer whose prime factors are small.
fn squarefree_part(n: &BigInt) -> Option<i64> {
    let fs = crate::arith::factor_smooth(n, 100_000)?;
    let mut s: i64 = if n.sign() == num_bigint::Sign::Minus { -1 } else { 1 };
    for (p, e) in fs {
        if e % 2 == 1 {
            s = s.checked_mul(p as i64)?;
        }
    }
    debug_assert!(is_squarefree(s));
    (s != 1).then_some(s)
}

/// An integral model with the given j-invariant: y^2 = x^3 + 1 for j = 0,
/// y^2 = x^3 + x for j = 1728, otherwise
/// y^2 = x^3 - 3 j (j - 1728) x - 2 j (j - 1728)^2.
pub fn curve_from_j(j: &Elem) -> Curve {
    let k = j.k;
    let z = k.zero();
    let one = k.one();
    let c1728 = k.int(BigInt::from(1728));
    if j.is_zero() {
        return Curve::new([z.clone(), z.clone(), z.clone(), z, one]).unwrap();
    }
    if *j == c1728 {
        return Curve::new([z.clone(), z.clone(), z.clone(), one, z]).unwrap();
    }
    let t = j * &(j - &c1728);
    let a4 = &k.int(BigInt::from(-3)) * &t;
    let a6 = &(&k.int(BigInt::from(-2)) * &t) * &(j - &c1728);
    Curve::new([z.clone(), z.clone(), z, a4, a6]).unwrap()
}

/// Whether l is an odd prime with l = 3 mod 4 and m = l p for f = 1: the
/// shape forced on heavenly classes with l > 3 and maximal CM order.
pub fn genus_shape_ok(ell: u64, disc: &CmOrderDisc, field_d: i64) -> bool {
    if ell <= 3 {
        return true;
    }
    let shape = is_prime(ell) && ell % 4 == 3;
    if disc.f != 1 {
        return shape;
    }
    shape && disc.m == ell as i64 * field_d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(-4), Ok(1));
        assert_eq!(class_number(-15), Ok(2));
        assert_eq!(class_number(-235), Ok(2));
        assert_eq!(class_number(-36), Ok(2));
        assert_eq!(class_number(5), Err(CmError::BadDiscriminant(5)));
        assert_eq!(class_number(-6), Err(CmError::BadDiscriminant(-6)));
    }

    #[test]
    fn h2_list() {
        let l = class_number_2_discs();
        assert_eq!(l.len(), 29);
        let ds: Vec<i64> = l.iter().map(|c| c.d).collect();
        for d in [-15, -20, -24, -427, -112] {
            assert!(ds.contains(&d));
        }
        let c = CmOrderDisc::new(-112).unwrap();
        assert_eq!((c.m, c.f), (7, 4));
        assert_eq!(class_number_1_discs().len(), 13);
    }

    #[test]
    fn isogeny_candidates() {
        let c = CmOrderDisc::new(-72).unwrap();
        let l = isogeny_prime_candidates(&c);
        assert!(l.contains(&2) && l.contains(&3));
        let c = CmOrderDisc::new(-235).unwrap();
        let l = isogeny_prime_candidates(&c);
        assert!(l.contains(&47) && l.contains(&5));
        assert!(l.iter().all(|&p| kronecker_prime(-235, p) != -1 || 235 % p == 0));
    }

    #[test]
    fn models_have_their_j() {
        let k = QuadField::new(5).unwrap();
        let h = hilbert_class_poly(-235).unwrap();
        let (kk, roots) = root_field(&h[1], &h[0]).unwrap();
        assert_eq!(kk.d(), k.d());
        for j in roots {
            let e = curve_from_j(&j);
            assert_eq!(e.j().integral(), Some(j));
        }
        for j in [0i64, 1728] {
            let e = curve_from_j(&k.int(BigInt::from(j)));
            assert_eq!(e.j().integral(), Some(k.int(BigInt::from(j))));
        }
    }
}
