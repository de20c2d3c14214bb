//! Frobenius traces at primes of K and their images mod l.

use crate::arith::{is_prime, is_square, jacobi, pow_mod, primes_up_to};
use crate::ellcurve::{local_minimal_model, ReductionInfo, ReductionKind};
use crate::pointcount::{count_points, CurveOverFq};
use crate::quadfield::{split_prime, LocalPrime, PrimeOfK};
use crate::Curve;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

pub const DEFAULT_P_BOUND: u64 = 25_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("bad reduction at the prime {}", .0.prime.label())]
    BadReduction(ReductionInfo),
    #[error("{0} is not a prime congruent to 3 mod 4")]
    NotThreeModFour(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub prime: PrimeOfK,
    pub a: i64,
    pub q: u64,
    pub a_mod_ell: Option<u64>,
}

impl TraceRecord {
    pub fn with_ell(mut self, ell: u64) -> Self {
        self.a_mod_ell = Some(self.a.rem_euclid(ell as i64) as u64);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSet {
    pub ell: u64,
    pub residues: BTreeSet<u64>,
    pub primes_used: usize,
    pub p_bound: u64,
}

impl TraceSet {
    pub fn size(&self) -> usize {
        self.residues.len()
    }
}

/// The reduction of a good model of E at the prime.
pub fn reduce_at(e: &Curve, lp: &LocalPrime) -> Result<CurveOverFq, TraceError> {
    let (info, model) = local_minimal_model(e, lp);
    if info.kind != ReductionKind::Good {
        return Err(TraceError::BadReduction(info));
    }
    let a = model.map(|c| lp.res(&c));
    Ok(CurveOverFq::new(lp.fq(), a).expect("good reduction has nonzero discriminant"))
}

/// a_p = Np + 1 - #E(F_p).
pub fn frobenius_trace(e: &Curve, pr: &PrimeOfK, seed: u64) -> Result<TraceRecord, TraceError> {
    let lp = LocalPrime::new(pr);
    let red = reduce_at(e, &lp)?;
    let q = red.q();
    let a = q as i64 + 1 - count_points(&red, seed) as i64;
    debug_assert!((a * a) as u64 <= 4 * q);
    Ok(TraceRecord { prime: *pr, a, q, a_mod_ell: None })
}

/// Traces at every prime above p < p_bound, skipping p in `exclude` and
/// primes of bad reduction, ordered by prime.
pub fn trace_records(e: &Curve, p_bound: u64, exclude: &[u64], seed: u64) -> Vec<TraceRecord> {
    trace_records_while(e, p_bound, exclude, seed, |_| true)
}

const SWEEP_CHUNK: usize = 256;

/// As `trace_records`, but rational primes are taken in fixed chunks and
/// the sweep stops after the first chunk at which `keep_going` fails. The
/// chunking does not depend on the thread count.
pub fn trace_records_while(
    e: &Curve,
    p_bound: u64,
    exclude: &[u64],
    seed: u64,
    mut keep_going: impl FnMut(&[TraceRecord]) -> bool,
) -> Vec<TraceRecord> {
    let k = e.field();
    let ps: Vec<u64> = primes_up_to(p_bound.saturating_sub(1))
        .into_iter()
        .filter(|p| !exclude.contains(p))
        .collect();
    let mut out = Vec::new();
    for chunk in ps.chunks(SWEEP_CHUNK) {
        let recs: Vec<TraceRecord> = chunk
            .par_iter()
            .flat_map_iter(|&p| {
                split_prime(&k, p)
                    .into_iter()
                    .filter_map(|pr| frobenius_trace(e, &pr, seed).ok())
                    .collect::<Vec<_>>()
            })
            .collect();
        out.extend(recs);
        if !keep_going(&out) {
            break;
        }
    }
    out
}

/// {a_p mod l} over good primes above p < p_bound, p != l.
pub fn trace_set(e: &Curve, ell: u64, p_bound: u64, seed: u64) -> TraceSet {
    let recs = trace_records(e, p_bound, &[ell], seed);
    trace_set_from(&recs, ell, p_bound)
}

pub fn trace_set_from(recs: &[TraceRecord], ell: u64, p_bound: u64) -> TraceSet {
    let residues = recs.iter().map(|r| r.a.rem_euclid(ell as i64) as u64).collect();
    TraceSet { ell, residues, primes_used: recs.len(), p_bound }
}

/// q^((l+1)/4) (1 + (p/l)^f) mod l: the trace of a balanced curve at a
/// prime of norm q = p^f.
pub fn predicted_trace(q: u64, p: u64, f: u32, ell: u64) -> Result<u64, TraceError> {
    if !is_prime(ell) || ell % 4 != 3 {
        return Err(TraceError::NotThreeModFour(ell));
    }
    if !is_prime(p) {
        return Err(TraceError::NotPrime(p));
    }
    let leg = jacobi(p as i64, ell).pow(f);
    let base = pow_mod(q % ell, (ell + 1) / 4, ell);
    Ok(base * (1 + leg) as u64 % ell)
}

/// The residues (2/l) F_l^x2 together with 0.
pub fn balanced_residues(ell: u64) -> BTreeSet<u64> {
    let two = if jacobi(2, ell) == 1 { 1 } else { ell - 1 };
    let mut out: BTreeSet<u64> = (1..ell).map(|x| two * x % ell * x % ell).collect();
    out.insert(0);
    out
}

/// Whether a record agrees with the balanced prediction; ramified primes
/// and primes above l are not covered and return None.
pub fn matches_prediction(r: &TraceRecord, ell: u64) -> Option<bool> {
    if r.prime.is_ramified() || r.prime.p == ell {
        return None;
    }
    let want = predicted_trace(r.q, r.prime.p, r.prime.f as u32, ell).ok()?;
    Some(r.a.rem_euclid(ell as i64) as u64 == want)
}

/// 4q = a^2 + |D| v^2 for some integer v.
pub fn cm_norm_identity(a: i64, q: u64, order_disc: i64) -> bool {
    let diff = 4 * q as i128 - (a as i128) * (a as i128);
    let dd = order_disc.unsigned_abs() as i128;
    diff >= 0 && dd > 0 && diff % dd == 0 && is_square((diff / dd) as u64)
}
