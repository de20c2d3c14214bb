//! Scarcity sieves: the sets N(l) and the vertical and horizontal
//! eliminations they drive.

use crate::arith::{is_prime, is_squarefree, jacobi, kronecker_prime, primes_up_to, sqrt_mod_prime};
use crate::quadfield::{split_prime, QuadField};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScarcityError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{ell} divides {n}")]
    Divisible { n: i64, ell: u64 },
}

/// r_l(N): the least positive r with r^2 = N mod l, or None for a non-residue.
pub fn sqrt_mod(n: i64, ell: u64) -> Result<Option<u64>, ScarcityError> {
    if ell < 3 || !is_prime(ell) {
        return Err(ScarcityError::NotOddPrime(ell));
    }
    let r = n.rem_euclid(ell as i64) as u64;
    if r == 0 {
        return Err(ScarcityError::Divisible { n, ell });
    }
    Ok(sqrt_mod_prime(r, ell))
}

/// N(l): primes p with (p/l) = 1 and r_l(4p) > 2 sqrt(p). Complete, since
/// p > l^2/16 forces r_l(4p) <= l/2 <= 2 sqrt(p).
pub fn n_set(ell: u64) -> Result<Vec<u64>, ScarcityError> {
    if ell < 3 || !is_prime(ell) {
        return Err(ScarcityError::NotOddPrime(ell));
    }
    Ok(primes_up_to(ell * ell / 16)
        .into_iter()
        .filter(|&p| p != ell && jacobi(p as i64, ell) == 1)
        .filter(|&p| {
            let r = sqrt_mod_prime(4 * p % ell, ell).unwrap();
            r * r > 4 * p
        })
        .collect())
}

/// Whether `disc` is the discriminant of a quadratic field.
pub fn is_fundamental(disc: i64) -> bool {
    match disc.rem_euclid(4) {
        1 => disc != 1 && is_squarefree(disc),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Quadratic field discriminants with 0 < |disc| <= bound, ordered by |disc|
/// and then sign (negative first).
pub fn fundamental_discriminants(bound: u64, real_only: bool) -> Vec<i64> {
    let n = bound as usize;
    let mut squarefree = vec![true; n + 1];
    for p in primes_up_to(crate::arith::isqrt(bound)) {
        let sq = (p * p) as usize;
        for m in (sq..=n).step_by(sq) {
            squarefree[m] = false;
        }
    }
    // disc = 1 mod 4 squarefree, or 4m with m = 2, 3 mod 4 squarefree
    let fundamental = |d: i64| match d.rem_euclid(4) {
        1 => squarefree[d.unsigned_abs() as usize],
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree[(d / 4).unsigned_abs() as usize],
        _ => false,
    };
    let mut out = Vec::new();
    for m in 3..=bound as i64 {
        if !real_only && fundamental(-m) {
            out.push(-m);
        }
        if fundamental(m) {
            out.push(m);
        }
    }
    out
}

/// The first prime of `primes` with residue degree 1 in the field of
/// discriminant `disc` (split or ramified), if any.
pub fn degree_one_witness(disc: i64, primes: &[u64]) -> Option<u64> {
    primes.iter().copied().find(|&p| kronecker_prime(disc, p) != -1)
}

/// Fields with |disc| <= disc_bound in which every p in N(l) is inert,
/// ordered as `fundamental_discriminants`.
pub fn vertical_sieve(ell: u64, disc_bound: u64, real_only: bool) -> Result<Vec<i64>, ScarcityError> {
    let ns = n_set(ell)?;
    let discs = fundamental_discriminants(disc_bound, real_only);
    Ok(discs
        .par_iter()
        .copied()
        .filter(|&d| degree_one_witness(d, &ns).is_none())
        .collect())
}

/// Rational primes p in (2, p_cap) that split in K, ascending.
pub fn split_primes_below(k: &QuadField, p_cap: u64) -> Vec<u64> {
    primes_up_to(p_cap.saturating_sub(1))
        .into_iter()
        .filter(|&p| p > 2 && split_prime(k, p).len() == 2)
        .collect()
}

/// The first split prime p with 4p < l and (p/l) = 1.
pub fn horizontal_witness(split: &[u64], ell: u64) -> Option<u64> {
    split
        .iter()
        .copied()
        .take_while(|&p| 4 * p < ell)
        .find(|&p| jacobi(p as i64, ell) == 1)
}

/// Primes l in [l_min, l_max] not excluded by any split prime p < p_cap.
pub fn horizontal_sieve(k: &QuadField, l_min: u64, l_max: u64, p_cap: u64) -> Vec<u64> {
    let split = split_primes_below(k, p_cap);
    let ells = primes_up_to(l_max);
    let start = ells.partition_point(|&l| l < l_min.max(3));
    ells[start..]
        .par_iter()
        .copied()
        .filter(|&l| horizontal_witness(&split, l).is_none())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HorizontalReport {
    pub d: i64,
    pub split_primes: Vec<u64>,
    pub l_min: u64,
    pub l_max: u64,
    pub survivors: Vec<u64>,
    /// Every prime l in (largest survivor, l_max] is eliminated.
    pub eliminated_above: u64,
}

pub fn horizontal_report(k: &QuadField, l_min: u64, l_max: u64, p_cap: u64) -> HorizontalReport {
    let survivors = horizontal_sieve(k, l_min, l_max, p_cap);
    let eliminated_above = survivors.last().copied().unwrap_or(l_min.saturating_sub(1));
    HorizontalReport {
        d: k.d(),
        split_primes: split_primes_below(k, p_cap),
        l_min,
        l_max,
        survivors,
        eliminated_above,
    }
}
