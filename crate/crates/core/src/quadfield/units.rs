use super::{BasisKind, FieldElem, FieldError, PrimeOfK, QuadField};
use crate::arith::isqrt;
use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};

/// The fundamental unit of a real quadratic field: the smallest unit > 1.
pub fn fundamental_unit(k: &QuadField) -> Result<FieldElem<BigInt>, FieldError> {
    if !k.is_real() {
        return Err(FieldError::Imaginary(k.d()));
    }
    let d = k.d() as u64;
    // Units (x + y sqrt d)/w with x^2 - d y^2 = ±w^2, found by scanning y.
    let w: u64 = if k.basis() == BasisKind::Half { 2 } else { 1 };
    for y in 1u64..100_000 {
        let dy2 = d * y * y;
        for n in [dy2 - w * w, dy2 + w * w] {
            let x = isqrt(n);
            if x * x == n && (w == 1 || (x + y).is_multiple_of(2)) {
                let u = k
                    .from_sqrt_coords(BigInt::from(x), BigInt::from(y), BigInt::from(w))
                    .unwrap();
                return Ok(u);
            }
        }
    }
    Ok(unit_by_continued_fraction(k))
}

// Convergents P/Q of omega with N(P - Q omega) = ±1 yield the unit
// conj(P - Q omega) > 1.
fn unit_by_continued_fraction(k: &QuadField) -> FieldElem<BigInt> {
    let (t, _) = k.omega_relation();
    let (dd, mut pp, mut qq): (i128, i128, i128) = match k.basis() {
        BasisKind::Sqrt => (k.d() as i128, 0, 1),
        BasisKind::Half => (k.d() as i128, 1, 2),
    };
    let s = dd.sqrt();
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    for _ in 0..1_000_000 {
        let a = (pp + s).div_euclid(qq);
        let p2 = BigInt::from(a) * &p1 + &p0;
        let q2 = BigInt::from(a) * &q1 + &q0;
        (p0, p1, q0, q1) = (p1, p2, q1, q2);
        let cand = k.elem(&p1 - &q1 * BigInt::from(t), q1.clone());
        if cand.is_unit() {
            return cand;
        }
        pp = a * qq - pp;
        qq = (dd - pp * pp) / qq;
    }
    panic!("continued fraction of omega did not produce a unit")
}

/// A generator of the smallest principal power of `pr`, with that power.
pub fn principal_generator(pr: &PrimeOfK) -> (FieldElem<BigInt>, u32) {
    let k = pr.k;
    if pr.is_inert() {
        return (k.int(BigInt::from(pr.p)), 1);
    }
    for e in 1..=6u32 {
        if let Some(g) = element_of_norm(&k, pr.p.pow(e), |g| pr.valuation(g) == Some(e)) {
            return (g, e);
        }
        assert!(e < 6, "no principal power of the prime above {} up to exponent 6", pr.p);
    }
    unreachable!()
}

// Searches x + y omega with |N| = n satisfying `accept`, scanning y upward.
fn element_of_norm(
    k: &QuadField,
    n: u64,
    accept: impl Fn(&FieldElem<BigInt>) -> bool,
) -> Option<FieldElem<BigInt>> {
    let (t, _) = k.omega_relation();
    // N(x + y w) = T  <=>  (2x + t y)^2 = D0 y^2 + 4T, D0 = t^2 + 4n
    let d0: i128 = match k.basis() {
        BasisKind::Half => k.d() as i128,
        BasisKind::Sqrt => 4 * k.d() as i128,
    };
    let ymax: i128 = if k.is_real() { 2_000_000 } else { (4 * n as i128 / -d0).sqrt() + 1 };
    for y in 0..=ymax {
        for target in [n as i128, -(n as i128)] {
            let disc = d0 * y * y + 4 * target;
            if disc < 0 {
                continue;
            }
            let s = disc.sqrt();
            if s * s != disc {
                continue;
            }
            for s in [s, -s] {
                let num = s - t as i128 * y;
                if num % 2 != 0 {
                    continue;
                }
                let g = k.elem(BigInt::from(num / 2), BigInt::from(y));
                if accept(&g) {
                    return Some(g);
                }
            }
        }
    }
    None
}

/// Generators of the S-unit group modulo squares: -1, the fundamental unit
/// (real fields), then for each prime above S a principal-power generator.
pub fn s_unit_generators(k: &QuadField, s: &[u64]) -> Vec<FieldElem<BigInt>> {
    let mut gens = vec![k.int(BigInt::from(-1))];
    if k.is_real() {
        gens.push(fundamental_unit(k).unwrap());
    }
    let mut ps: Vec<u64> = s.to_vec();
    ps.sort_unstable();
    ps.dedup();
    for p in ps {
        for pr in super::split_prime(k, p) {
            gens.push(principal_generator(&pr).0);
        }
    }
    gens
}

/// Representatives of the S-unit square classes: products over all subsets
/// of the generators, indexed by bitmask.
pub fn s_unit_square_classes(k: &QuadField, s: &[u64]) -> Vec<FieldElem<BigInt>> {
    let gens = s_unit_generators(k, s);
    subset_products(k, &gens)
}

pub(crate) fn subset_products(k: &QuadField, gens: &[FieldElem<BigInt>]) -> Vec<FieldElem<BigInt>> {
    let mut out = vec![k.one()];
    for g in gens {
        let more: Vec<_> = out.iter().map(|u| u * g).collect();
        out.extend(more);
    }
    out
}
