//! Heavenly verdicts: good reduction outside l together with the torsion
//! degree condition, decided exactly at l = 2 and by Frobenius sampling
//! otherwise.

use crate::arith::{is_prime, mul_mod};
use crate::ellcurve::good_outside;
use crate::quadfield::{is_square, roots_in_ok, PrimeOfK};
use crate::traces::{trace_records_while, trace_set_from, TraceRecord};
use crate::{Curve, Elem};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    BadReduction { prime: PrimeOfK },
    TraceSetTooLarge { size: usize, bound: u64 },
    DegreeNotPowerOfTwo { degree: u32 },
    FrobeniusNotTriangular { prime: PrimeOfK, a: i64, q: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "witness", rename_all = "snake_case")]
pub enum Status {
    NotHeavenly(Witness),
    LikelyHeavenly,
    ProvenHeavenly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    TraceSet { size: usize, primes_used: usize, p_bound: u64 },
    Degree(u32),
    Sampled { primes_used: usize, p_bound: u64 },
    Reduction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeavenlyVerdict {
    pub ell: u64,
    pub status: Status,
    pub evidence: Evidence,
}

impl HeavenlyVerdict {
    pub fn is_heavenly(&self) -> bool {
        !matches!(self.status, Status::NotHeavenly(_))
    }
}

fn bad_outside(e: &Curve, ell: u64) -> Option<HeavenlyVerdict> {
    let (ok, bad) = good_outside(e, &[ell]);
    (!ok).then(|| HeavenlyVerdict {
        ell,
        status: Status::NotHeavenly(Witness::BadReduction { prime: bad[0].prime }),
        evidence: Evidence::Reduction,
    })
}

/// Whether a = q^i + q^(1-i) mod l for some i: the Frobenius char poly
/// splits with roots that are powers of the cyclotomic character.
pub fn chi_power_split(a: i64, q: u64, ell: u64) -> bool {
    let q = q % ell;
    if q == 0 {
        return true;
    }
    let a = a.rem_euclid(ell as i64) as u64;
    // r runs over the powers of q; the partner root is q / r = q * r^-1
    let mut r = 1u64;
    loop {
        let partner = mul_mod(q, crate::arith::inv_mod(r, ell).unwrap(), ell);
        if (r + partner) % ell == a {
            return true;
        }
        r = mul_mod(r, q, ell);
        if r == 1 {
            return false;
        }
    }
}

fn first_non_triangular(recs: &[TraceRecord], ell: u64) -> Option<&TraceRecord> {
    recs.iter().find(|r| !chi_power_split(r.a, r.q, ell))
}

/// Trace-cardinality test at l > 3: a trace set larger than (l+1)/2 rules
/// the curve out; otherwise the verdict is only likely.
pub fn heavenly_trace_test(e: &Curve, ell: u64, p_bound: u64, seed: u64) -> HeavenlyVerdict {
    assert!(ell > 3 && is_prime(ell), "trace test needs a prime l > 3");
    if let Some(v) = bad_outside(e, ell) {
        return v;
    }
    let bound = ell.div_ceil(2);
    let mut residues = std::collections::BTreeSet::new();
    let mut seen = 0;
    // stop early once the set is too large to be a proper subset
    let recs = trace_records_while(e, p_bound, &[ell], seed, |rs| {
        residues.extend(rs[seen..].iter().map(|r| r.a.rem_euclid(ell as i64) as u64));
        seen = rs.len();
        residues.len() as u64 <= bound
    });
    let ts = trace_set_from(&recs, ell, p_bound);
    let evidence = Evidence::TraceSet { size: ts.size(), primes_used: ts.primes_used, p_bound };
    let status = if ts.size() as u64 > bound {
        Status::NotHeavenly(Witness::TraceSetTooLarge { size: ts.size(), bound })
    } else if let Some(r) = first_non_triangular(&recs, ell) {
        Status::NotHeavenly(Witness::FrobeniusNotTriangular { prime: r.prime, a: r.a, q: r.q })
    } else {
        Status::LikelyHeavenly
    };
    assert!(
        !(status == Status::LikelyHeavenly && ts.size() as u64 > bound),
        "likely verdict with an oversized trace set"
    );
    HeavenlyVerdict { ell, status, evidence }
}

fn cubic_disc(a: &Elem, b: &Elem, c: &Elem) -> Elem {
    // X^3 + a X^2 + b X + c
    let k = a.k;
    let n = |v: i64| k.int(num_bigint::BigInt::from(v));
    let ab = a * b;
    let t1 = &ab * &ab;
    let t2 = &n(4) * &(&(b * b) * b);
    let t3 = &n(4) * &(&(&(a * a) * a) * c);
    let t4 = &n(27) * &(c * c);
    let t5 = &n(18) * &(&ab * c);
    &(&(&t1 - &t2) - &(&t3 + &t4)) + &t5
}

/// [K(E[2]) : K], the degree of the splitting field of the 2-division cubic.
pub fn two_torsion_degree(e: &Curve) -> u32 {
    let [c, b, a] = e.two_division_cubic();
    let k = e.field();
    let roots = roots_in_ok(&k, &[c.clone(), b.clone(), a.clone()]);
    match roots.first() {
        Some(r) => {
            if roots.len() > 1 {
                return 1;
            }
            // X^2 + (a + r) X + (b + r (a + r))
            let s = &a + r;
            let t = &b + &(r * &s);
            let disc = &(&s * &s) - &(&k.int(num_bigint::BigInt::from(4)) * &t);
            if is_square(&disc).is_some() {
                1
            } else {
                2
            }
        }
        None => {
            if is_square(&cubic_disc(&a, &b, &c)).is_some() {
                3
            } else {
                6
            }
        }
    }
}

/// Exact verdict at l = 2.
pub fn two_torsion_heavenly(e: &Curve) -> HeavenlyVerdict {
    let degree = two_torsion_degree(e);
    if let Some(mut v) = bad_outside(e, 2) {
        v.evidence = Evidence::Degree(degree);
        return v;
    }
    let status = if degree.is_power_of_two() {
        Status::ProvenHeavenly
    } else {
        Status::NotHeavenly(Witness::DegreeNotPowerOfTwo { degree })
    };
    HeavenlyVerdict { ell: 2, status, evidence: Evidence::Degree(degree) }
}

/// Sampling test at l = 3: every Frobenius char poly must be
/// (T - 1)(T - q) mod 3.
pub fn three_torsion_heavenly_sample(e: &Curve, p_bound: u64, seed: u64) -> HeavenlyVerdict {
    if let Some(v) = bad_outside(e, 3) {
        return v;
    }
    let recs = trace_records_while(e, p_bound, &[3], seed, |rs| first_non_triangular(rs, 3).is_none());
    let evidence = Evidence::Sampled { primes_used: recs.len(), p_bound };
    let status = match first_non_triangular(&recs, 3) {
        Some(r) => Status::NotHeavenly(Witness::FrobeniusNotTriangular { prime: r.prime, a: r.a, q: r.q }),
        None => Status::LikelyHeavenly,
    };
    HeavenlyVerdict { ell: 3, status, evidence }
}

/// Dispatches on l: exact at 2, sampled at 3, trace test above.
pub fn heavenly_verdict(e: &Curve, ell: u64, p_bound: u64, seed: u64) -> HeavenlyVerdict {
    match ell {
        2 => two_torsion_heavenly(e),
        3 => three_torsion_heavenly_sample(e, p_bound, seed),
        _ => heavenly_trace_test(e, ell, p_bound, seed),
    }
}
