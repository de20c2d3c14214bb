//! Totient identity, Tate-Oort congruences and the non-balanced sieve.

use crate::arith::{isqrt, is_prime, ord2, pow_mod, primes_up_to, totient};
use crate::num::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest genus for which the totient identity is enumerated.
pub const MAX_GENUS: u32 = 8;

/// Values of e = e(E/K; l) * e_l for elliptic curves over quadratic fields.
pub const E_VALUES: [u32; 7] = [1, 2, 3, 4, 6, 8, 12];

/// Primes used by default to refute surviving non-balanced cases.
pub const REFINE_PRIMES: [u64; 2] = [2, 5];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("genus {0} is outside 1..={MAX_GENUS}")]
    GenusOutOfRange(u32),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TotientSolution {
    /// d -> n_d, positive entries only.
    pub multiplicities: BTreeMap<u64, u32>,
    pub lcm: u64,
    pub g: u32,
}

/// All multisets {d} with sum of phi(d) equal to 2g. With `constrained`,
/// n_1 and n_2 must be even.
pub fn totient_solutions(g: u32, constrained: bool) -> Result<Vec<TotientSolution>, CongruenceError> {
    if g == 0 || g > MAX_GENUS {
        return Err(CongruenceError::GenusOutOfRange(g));
    }
    let target = 2 * g as u64;
    // phi(d) >= sqrt(d / 2)
    let ds: Vec<(u64, u64)> = (1..=2 * target * target)
        .map(|d| (d, totient(d)))
        .filter(|&(_, ph)| ph <= target)
        .collect();
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    enumerate(&ds, 0, target, &mut current, &mut out);
    let mut sols: Vec<TotientSolution> = out
        .into_iter()
        .filter(|m: &BTreeMap<u64, u32>| {
            !constrained || (m.get(&1).copied().unwrap_or(0) % 2 == 0 && m.get(&2).copied().unwrap_or(0) % 2 == 0)
        })
        .map(|m| {
            let lcm = m.keys().fold(1u64, |acc, &d| acc.lcm(&d));
            TotientSolution { multiplicities: m, lcm, g }
        })
        .collect();
    sols.sort_by(|a, b| a.multiplicities.iter().cmp(b.multiplicities.iter()));
    Ok(sols)
}

fn enumerate(
    ds: &[(u64, u64)],
    start: usize,
    remaining: u64,
    current: &mut BTreeMap<u64, u32>,
    out: &mut Vec<BTreeMap<u64, u32>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for i in start..ds.len() {
        let (d, ph) = ds[i];
        if ph > remaining {
            continue;
        }
        *current.entry(d).or_insert(0) += 1;
        enumerate(ds, i, remaining - ph, current, out);
        let n = current.get_mut(&d).unwrap();
        *n -= 1;
        if *n == 0 {
            current.remove(&d);
        }
    }
}

/// Largest lcm over unconstrained totient solutions.
pub fn e_tilde(g: u32) -> Result<u64, CongruenceError> {
    Ok(totient_solutions(g, false)?.iter().map(|s| s.lcm).max().unwrap())
}

/// alpha^m + beta^m for the roots of T^2 - tau T + q.
pub fn lucas_power_trace<T: Scalar>(tau: &T, q: &T, m: u32) -> T {
    let (mut prev, mut cur) = (T::of(2), tau.clone());
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = tau.clone() * cur.clone() - q.clone() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Residues i in [0, l - 2] with e i = j mod (l - 1).
pub fn ij_solutions(l: u64, e: u64, j: u64) -> Vec<u64> {
    let m = l - 1;
    (0..m).filter(|&i| (e * i) % m == j % m).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedVerdict {
    pub ell: u64,
    pub e: u64,
    pub feasible: bool,
    pub reasons: Vec<String>,
}

/// Whether a balanced profile with index e can occur at l for an elliptic
/// curve over a quadratic field.
pub fn balanced_constraints(l: u64, e: u64) -> BalancedVerdict {
    let mut reasons = Vec::new();
    if ord2(e) <= ord2(l - 1) {
        reasons.push(format!("ord2({e}) <= ord2({})", l - 1));
    }
    if !e.is_multiple_of(4) {
        reasons.push(format!("4 does not divide {e}"));
    }
    if l % 4 != 3 {
        reasons.push(format!("{l} is not 3 mod 4"));
    }
    if e == 12 && l % 12 != 11 {
        reasons.push(format!("e = 12 needs l = 11 mod 12, got {}", l % 12));
    }
    BalancedVerdict { ell: l, e, feasible: reasons.is_empty(), reasons }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SieveRow {
    pub j1: u32,
    pub j2: u32,
    pub ells: Vec<u64>,
}

/// Weakly balanced, non-balanced pairs (j1, j2): j1 < j2, j1 + j2 = e.
pub fn candidate_pairs() -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = E_VALUES
        .iter()
        .flat_map(|&e| (0..=e).filter(move |&j| 2 * j < e).map(move |j| (j, e - j)))
        .collect();
    out.sort_unstable();
    out
}

fn tau_e_solvable(l: u64, p: u64, e: u32, j1: u32, j2: u32) -> bool {
    [1u32, 2].iter().any(|&f| {
        let q = p.pow(f);
        let w = isqrt(4 * q) as i128;
        let (qi, lb) = (q as i128, l as i128);
        let target = (pow_mod(q, j1 as u64, l) + pow_mod(q, j2 as u64, l)) as i128;
        (-w..=w).any(|t| (lucas_power_trace(&t, &qi, e) - target).rem_euclid(lb) == 0)
    })
}

/// Primes l in [l_min, l_max] that survive every p <= p_bound for the pair.
pub fn sieve_pair(j1: u32, j2: u32, p_bound: u64, l_min: u64, l_max: u64) -> Vec<u64> {
    let e = j1 + j2;
    let ps = primes_up_to(p_bound);
    primes_up_to(l_max)
        .into_iter()
        .filter(|&l| l >= l_min)
        .filter(|&l| (j1 as u64).is_multiple_of((e as u64).gcd(&(l - 1))))
        .filter(|&l| ps.iter().filter(|&&p| p != l).all(|&p| tau_e_solvable(l, p, e, j1, j2)))
        .collect()
}

/// Non-balanced Tate-Oort pairs and the primes l they survive, in (j1, j2)
/// order; pairs with no survivor are omitted.
pub fn nonbalanced_sieve(p_bound: u64, l_min: u64, l_max: u64) -> Vec<SieveRow> {
    use rayon::prelude::*;
    candidate_pairs()
        .into_par_iter()
        .map(|(j1, j2)| SieveRow { j1, j2, ells: sieve_pair(j1, j2, p_bound, l_min, l_max) })
        .filter(|r| !r.ells.is_empty())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Elimination {
    /// n_h = 1 in the totient identity forces l != 1 mod h.
    ResidueClass { h: u64 },
    /// No admissible i1 is compatible with the Hasse bound at the prime p.
    Hasse { p: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinedCase {
    pub j1: u32,
    pub j2: u32,
    pub e: u32,
    pub ell: u64,
    pub eliminated: Option<Elimination>,
    /// Exponents i1 still compatible with every checked prime.
    pub i1: Vec<u64>,
}

fn trace_fits(l: u64, p: u64, i1: u64) -> bool {
    let i2 = (1 + (l - 1) - i1 % (l - 1)) % (l - 1);
    [1u32, 2].iter().any(|&f| {
        let q = p.pow(f);
        let w = isqrt(4 * q) as i64;
        let r = ((pow_mod(q, i1, l) + pow_mod(q, i2, l)) % l) as i64;
        (-w..=w).any(|t| (t - r).rem_euclid(l as i64) == 0)
    })
}

/// Apply the residue-class and Hasse eliminations to sieve output.
pub fn refine_nonbalanced(rows: &[SieveRow], primes: &[u64]) -> Vec<RefinedCase> {
    let mut out = Vec::new();
    for row in rows {
        let e = row.j1 + row.j2;
        for &l in &row.ells {
            let base = RefinedCase { j1: row.j1, j2: row.j2, e, ell: l, eliminated: None, i1: Vec::new() };
            if row.j1 == 0 && (e == 8 || e == 12) {
                let h = e as u64 / 2;
                if l % h == 1 {
                    out.push(RefinedCase { eliminated: Some(Elimination::ResidueClass { h }), ..base });
                    continue;
                }
            }
            let mut alive = ij_solutions(l, e as u64, row.j1 as u64);
            let mut killer = None;
            for &p in primes.iter().filter(|&&p| p != l) {
                alive.retain(|&i1| trace_fits(l, p, i1));
                if alive.is_empty() {
                    killer = Some(p);
                    break;
                }
            }
            out.push(match killer {
                Some(p) => RefinedCase { eliminated: Some(Elimination::Hasse { p }), ..base },
                None => RefinedCase { i1: alive, ..base },
            });
        }
    }
    out
}

/// g (2^(n^2 e~(g)/2) + 1)^2, rounded up when the exponent is half-integral.
pub fn balanced_bound(n: u32, g: u32) -> Result<BigInt, CongruenceError> {
    let et = e_tilde(g)? as u32;
    Ok(half_power_bound(g, &BigInt::from(2), n * n * et))
}

/// Threshold g (q^(e/2) + 1)^2 beyond which heavenly implies balanced,
/// rounded up to an integer.
pub fn prime_balance_bound(g: u32, q: u64, e: u32) -> BigInt {
    half_power_bound(g, &BigInt::from(q), e)
}

// ceil(g (sqrt(b^k) + 1)^2) = g (b^k + 1) + ceil(sqrt(4 g^2 b^k))
fn half_power_bound(g: u32, b: &BigInt, k: u32) -> BigInt {
    let g = BigInt::from(g);
    let bk: BigInt = Pow::pow(b, k);
    let four = BigInt::from(4) * &g * &g * &bk;
    let mut s = four.sqrt();
    if &s * &s != four {
        s += BigInt::one();
    }
    g * (bk + BigInt::one()) + s
}

/// Whether `l` is usable as a sieve prime.
pub fn check_odd_prime(l: u64) -> Result<(), CongruenceError> {
    if l > 2 && is_prime(l) {
        Ok(())
    } else {
        Err(CongruenceError::NotOddPrime(l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas_small_values() {
        assert_eq!(lucas_power_trace(&3i64, &5, 2), -1);
        assert_eq!(lucas_power_trace(&3i64, &5, 3), -18);
        assert_eq!(lucas_power_trace(&7i64, &5, 0), 2);
        assert_eq!(lucas_power_trace(&BigInt::from(3), &BigInt::from(5), 3), BigInt::from(-18));
    }

    #[test]
    fn ij_examples() {
        assert_eq!(ij_solutions(29, 12, 4), vec![5, 12, 19, 26]);
        let s = ij_solutions(47, 4, 2);
        assert!(s.contains(&12) && s.contains(&35));
        assert_eq!(ij_solutions(31, 1, 7), vec![7]);
        assert!(ij_solutions(13, 4, 3).is_empty());
    }

    #[test]
    fn balanced_examples() {
        assert!(balanced_constraints(11, 4).feasible);
        assert!(!balanced_constraints(13, 4).feasible);
        assert!(balanced_constraints(23, 12).feasible);
        assert!(!balanced_constraints(19, 12).feasible);
    }

    #[test]
    fn bounds() {
        assert_eq!(balanced_bound(1, 1).unwrap(), BigInt::from(81));
        assert_eq!(balanced_bound(2, 1).unwrap(), BigInt::from(16785409));
        assert_eq!(prime_balance_bound(1, 2, 12), BigInt::from(4225));
        assert_eq!(prime_balance_bound(1, 4, 6), BigInt::from(4225));
        assert_eq!(prime_balance_bound(2, 3, 4), BigInt::from(200));
        // (sqrt 8 + 1)^2 = 9 + 4 sqrt 2 = 14.65...
        assert_eq!(prime_balance_bound(1, 2, 3), BigInt::from(15));
    }

    #[test]
    fn candidates_are_weakly_balanced() {
        for (j1, j2) in candidate_pairs() {
            assert!(j1 < j2 && E_VALUES.contains(&(j1 + j2)));
        }
        assert!(candidate_pairs().contains(&(4, 8)));
    }

    #[test]
    fn genus_range() {
        assert_eq!(totient_solutions(0, false), Err(CongruenceError::GenusOutOfRange(0)));
        assert_eq!(totient_solutions(9, true), Err(CongruenceError::GenusOutOfRange(9)));
    }
}
