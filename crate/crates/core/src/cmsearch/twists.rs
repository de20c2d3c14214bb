//! Twists by S-units with good reduction outside at most one rational prime.

use crate::arith::factor_smooth;
use crate::ellcurve::{tate_reduce, ReductionKind};
use crate::quadfield::{fundamental_unit, principal_generator, split_prime, PrimeOfK};
use crate::{Curve, Elem, QuadField};
use num_bigint::BigInt;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistKind {
    Quadratic,
    /// y^2 = x^3 + u x
    Quartic,
    /// y^2 = x^3 + u
    Sextic,
}

impl TwistKind {
    fn order(self) -> u32 {
        match self {
            TwistKind::Quadratic => 2,
            TwistKind::Quartic => 4,
            TwistKind::Sextic => 6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Twist {
    pub kind: TwistKind,
    pub u: Elem,
    pub curve: Curve,
    /// Rational primes below the primes of bad reduction.
    pub bad: Vec<u64>,
    exps: Vec<u32>,
}

struct Gen {
    g: Elem,
    order: u32,
    prime: Option<PrimeOfK>,
}

fn generators(k: &QuadField, s: &BTreeSet<u64>, kind: TwistKind) -> Vec<Gen> {
    let n = kind.order();
    let mut gens = vec![Gen { g: k.int(BigInt::from(-1)), order: 2, prime: None }];
    if k.is_real() {
        gens.push(Gen { g: fundamental_unit(k).unwrap(), order: n, prime: None });
    }
    for &p in s {
        for pr in split_prime(k, p) {
            let (g, e) = principal_generator(&pr);
            // with class number > 1 these generators miss S-unit classes
            assert_eq!(e, 1, "twist search needs principal primes above {p}");
            gens.push(Gen { g, order: n, prime: Some(pr) });
        }
    }
    gens
}

fn apply(base: &Curve, kind: TwistKind, u: &Elem) -> Curve {
    let k = base.field();
    let z = k.zero();
    match kind {
        TwistKind::Quadratic => base.quadratic_twist(u).unwrap(),
        TwistKind::Quartic => Curve::new([z.clone(), z.clone(), z.clone(), u.clone(), z]).unwrap(),
        TwistKind::Sextic => Curve::new([z.clone(), z.clone(), z.clone(), z, u.clone()]).unwrap(),
    }
}

/// Rational primes below the bad primes of E among those above `s`, or
/// None as soon as one outside `allowed` turns up.
fn bad_primes_within(e: &Curve, s: &BTreeSet<u64>, allowed: Option<u64>) -> Option<Vec<u64>> {
    let k = e.field();
    let mut bad = Vec::new();
    for &p in s {
        for pr in split_prime(&k, p) {
            if tate_reduce(e, &pr).kind != ReductionKind::Good {
                if Some(p) != allowed {
                    return None;
                }
                bad.push(p);
                break;
            }
        }
    }
    Some(bad)
}

/// Rational primes dividing the norm of the discriminant, together with 2
/// and 3.
pub fn bad_support(e: &Curve) -> BTreeSet<u64> {
    let n = e.disc().norm();
    let fs = factor_smooth(&n, 1_000_000).expect("discriminant norm has a large prime factor");
    let mut s: BTreeSet<u64> = fs.into_iter().map(|(p, _)| p).collect();
    s.insert(2);
    s.insert(3);
    s
}

// Exponent of a generator forced by good reduction at its prime (p >= 5),
// or None when no twist of this kind is good there.
fn forced_exponent(base: &Curve, kind: TwistKind, pr: &PrimeOfK) -> Option<u32> {
    match kind {
        TwistKind::Quadratic => match tate_reduce(base, pr).min_disc_val % 12 {
            0 => Some(0),
            6 => Some(1),
            _ => None,
        },
        // the bases y^2 = x^3 + x and y^2 = x^3 + 1 are good away from 6
        TwistKind::Quartic | TwistKind::Sextic => Some(0),
    }
}

/// Twists of `base` of the given kind by S-units, S = `s`, with bad
/// reduction at no rational prime outside {l}; every choice of l in
/// `ells` is tried along with l = none. Results are deduplicated by
/// exponent vector and ordered by it.
pub fn twists_outside_one_prime(base: &Curve, kind: TwistKind, s: &BTreeSet<u64>, ells: &[Option<u64>]) -> Vec<Twist> {
    let k = base.field();
    let gens = generators(&k, s, kind);
    let mut found: Vec<Twist> = Vec::new();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    for &ell in ells {
        let mut fixed: Vec<Option<u32>> = Vec::with_capacity(gens.len());
        let mut feasible = true;
        for g in &gens {
            match g.prime {
                Some(pr) if pr.p >= 5 && Some(pr.p) != ell => match forced_exponent(base, kind, &pr) {
                    Some(x) => fixed.push(Some(x)),
                    None => {
                        feasible = false;
                        break;
                    }
                },
                _ => fixed.push(None),
            }
        }
        if !feasible {
            continue;
        }
        let free: Vec<usize> = (0..gens.len()).filter(|&i| fixed[i].is_none()).collect();
        let total: u64 = free.iter().map(|&i| gens[i].order as u64).product();
        for idx in 0..total {
            let mut exps: Vec<u32> = fixed.iter().map(|f| f.unwrap_or(0)).collect();
            let mut rest = idx;
            for &i in &free {
                let o = gens[i].order as u64;
                exps[i] = (rest % o) as u32;
                rest /= o;
            }
            if seen.contains(&exps) {
                continue;
            }
            let mut u = k.one();
            for (g, &x) in gens.iter().zip(&exps) {
                for _ in 0..x {
                    u = &u * &g.g;
                }
            }
            let curve = apply(base, kind, &u);
            if let Some(bad) = bad_primes_within(&curve, s, ell) {
                seen.insert(exps.clone());
                found.push(Twist { kind, u, curve, bad, exps });
            }
        }
    }
    found.sort_by(|a, b| a.exps.cmp(&b.exps));
    found
}

/// Quadratic twists of E by S-units, S = {2, 3} and the primes of bad
/// reduction of E, that have good reduction outside {l} (everywhere when
/// `ell` is None).
pub fn twist_search(e: &Curve, ell: Option<u64>) -> Vec<Twist> {
    let s = bad_support(e);
    let mut ells = vec![None];
    if ell.is_some() {
        ells.push(ell);
    }
    twists_outside_one_prime(e, TwistKind::Quadratic, &s, &ells)
        .into_iter()
        .filter(|t| t.bad.iter().all(|&p| Some(p) == ell))
        .collect()
}
