//! Tate's algorithm: reduction type of a local minimal model at a prime of K.

use super::rst_coeffs;
use crate::Curve;
use crate::ff::Fe;
use crate::quadfield::{split_prime, LocalPrime, PrimeOfK};
use crate::Elem;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionKind {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionInfo {
    pub prime: PrimeOfK,
    pub kind: ReductionKind,
    pub min_disc_val: u32,
}

pub fn tate_reduce(e: &Curve, pr: &PrimeOfK) -> ReductionInfo {
    local_minimal_model(e, &LocalPrime::new(pr)).0
}

/// Reduction data together with a model that is minimal at the prime.
/// Above 5 the model is the short form y^2 = x^3 - 27 c4 x - 54 c6 after
/// unscaling.
pub fn local_minimal_model(e: &Curve, lp: &LocalPrime) -> (ReductionInfo, [Elem; 5]) {
    let pr = lp.prime;
    let info = |kind, v| ReductionInfo { prime: pr, kind, min_disc_val: v };
    let k = e.field();
    if lp.p() >= 5 {
        let vd = lp.val(e.disc());
        let v4 = lp.val(e.c4());
        let v6 = lp.val(e.c6());
        let s = (v4 / 4).min(v6 / 6).min(vd / 12);
        let vmin = vd - 12 * s;
        let kind = if vmin == 0 {
            ReductionKind::Good
        } else if v4 == 4 * s {
            ReductionKind::Multiplicative
        } else {
            ReductionKind::Additive
        };
        let z = k.zero();
        let a4 = &k.int(BigInt::from(-27)) * &lp.unscale(e.c4(), 4 * s);
        let a6 = &k.int(BigInt::from(-54)) * &lp.unscale(e.c6(), 6 * s);
        return (info(kind, vmin), [z.clone(), z.clone(), z, a4, a6]);
    }
    tate_small(e, lp)
}

fn tate_small(e: &Curve, lp: &LocalPrime) -> (ReductionInfo, [Elem; 5]) {
    let pr = lp.prime;
    let p = lp.p();
    let fq = lp.fq();
    let k = e.field();
    let info = |kind, v| ReductionInfo { prime: pr, kind, min_disc_val: v };
    let pi = lp.pi.clone();
    let pi2 = &pi * &pi;
    let zero = k.zero();
    let lift = |z: Fe| lp.lift(z);
    let mut a = e.a().clone();
    let mut rounds = 0;
    loop {
        rounds += 1;
        assert!(rounds < 64, "Tate's algorithm did not terminate");
        let c = Curve::new(a.clone()).unwrap();
        let vd = lp.val(c.disc());
        if vd == 0 {
            return (info(ReductionKind::Good, 0), a);
        }
        if lp.val(c.c4()) == 0 {
            return (info(ReductionKind::Multiplicative, vd), a);
        }
        // move the singular point to (0, 0)
        let res = |x: &Elem| lp.res(x);
        let [a1, a2, a3, a4, a6] = a.clone();
        let (r, t) = if p == 2 {
            if lp.divides(c.b2()) {
                let r = fq.pth_root(res(&a4));
                let ra2 = fq.add(r, res(&a2));
                let v = fq.add(fq.mul(fq.add(fq.mul(ra2, r), res(&a4)), r), res(&a6));
                (r, fq.pth_root(v))
            } else {
                let inv = fq.inv(res(&a1));
                let r = fq.mul(inv, res(&a3));
                (r, fq.mul(inv, fq.add(res(&a4), fq.sqr(r))))
            }
        } else {
            let r = if lp.divides(c.b2()) {
                fq.pth_root(fq.neg(res(c.b6())))
            } else {
                fq.neg(fq.mul(fq.inv(res(c.b2())), res(c.b4())))
            };
            (r, fq.add(fq.mul(res(&a1), r), res(&a3)))
        };
        a = rst_coeffs(&a, &lift(r), &zero, &lift(t));
        let c = Curve::new(a.clone()).unwrap();
        debug_assert!(lp.divides(&a[2]) && lp.divides(&a[3]) && lp.divides(&a[4]));
        if lp.val(&a[4]) < 2 || lp.val(c.b8()) < 3 || lp.val(c.b6()) < 3 {
            return (info(ReductionKind::Additive, vd), a);
        }
        // arrange pi | a1, a2; pi^2 | a3, a4; pi^3 | a6
        let (s, t) = if p == 2 {
            let s = lift(fq.pth_root(res(&a[1])));
            let t = &pi * &lift(fq.pth_root(lp.res_div(&a[4], 2)));
            (s, t)
        } else {
            (a[0].clone(), a[2].clone())
        };
        a = rst_coeffs(&a, &zero, &s, &t);
        let b = lp.res_div(&a[1], 1);
        let cc = lp.res_div(&a[3], 2);
        let d = lp.res_div(&a[4], 3);
        let i = |n: i64| fq.int(n);
        let bb = fq.sqr(b);
        let ccc = fq.sqr(cc);
        let w = fq.add(
            fq.add(
                fq.sub(fq.mul(i(27), fq.sqr(d)), fq.mul(bb, ccc)),
                fq.mul(i(4), fq.mul(fq.mul(bb, b), d)),
            ),
            fq.sub(fq.mul(i(4), fq.mul(ccc, cc)), fq.mul(i(18), fq.mul(fq.mul(b, cc), d))),
        );
        let x = fq.sub(fq.mul(i(3), cc), bb);
        if !w.is_zero() {
            // three distinct roots: I0*
            return (info(ReductionKind::Additive, vd), a);
        }
        if !x.is_zero() {
            // one double root: In*
            return (info(ReductionKind::Additive, vd), a);
        }
        // triple root: move it to T = 0
        let r = if p == 2 { b } else { fq.pth_root(fq.neg(d)) };
        a = rst_coeffs(&a, &(&pi * &lift(r)), &zero, &zero);
        let a3t = lp.res_div(&a[2], 2);
        let a6t = lp.res_div(&a[4], 4);
        let qdisc = fq.add(fq.sqr(a3t), fq.mul(i(4), a6t));
        if !qdisc.is_zero() {
            // IV*
            return (info(ReductionKind::Additive, vd), a);
        }
        let y0 = if p == 2 { fq.pth_root(a6t) } else { fq.neg(fq.mul(a3t, fq.inv(i(2)))) };
        a = rst_coeffs(&a, &zero, &zero, &(&pi2 * &lift(y0)));
        if lp.val(&a[3]) < 4 || lp.val(&a[4]) < 6 {
            // III* or II*
            return (info(ReductionKind::Additive, vd), a);
        }
        // not minimal: divide a_i by pi^i
        a = [
            lp.unscale(&a[0], 1),
            lp.unscale(&a[1], 2),
            lp.unscale(&a[2], 3),
            lp.unscale(&a[3], 4),
            lp.unscale(&a[4], 6),
        ];
    }
}

/// Rational primes dividing a nonzero integer, by trial division with a
/// Pollard-rho finish on a 64-bit cofactor.
pub(crate) fn prime_support(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    for p in crate::arith::primes_up_to(100_000) {
        if n.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        if (&n % &pb).is_zero() {
            out.push(p);
            while (&n % &pb).is_zero() {
                n /= &pb;
            }
        }
    }
    if !n.is_one() {
        let m = n.to_u64().expect("norm has a large prime factor beyond the factoring range");
        let mut stack = vec![m];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if crate::arith::is_prime(m) {
                out.push(m);
            } else {
                let f = pollard_rho(m);
                stack.push(f);
                stack.push(m / f);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn pollard_rho(n: u64) -> u64 {
    use crate::arith::mul_mod;
    use num_integer::Integer;
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

/// Whether E has good reduction at every prime not above `s`; the second
/// component lists the offending primes, ordered by norm.
pub fn good_outside(e: &Curve, s: &[u64]) -> (bool, Vec<ReductionInfo>) {
    let k = e.field();
    let mut ps = prime_support(&e.disc().norm());
    ps.retain(|p| !s.contains(p));
    let mut bad = Vec::new();
    for p in ps {
        for pr in split_prime(&k, p) {
            let r = tate_reduce(e, &pr);
            if r.kind != ReductionKind::Good {
                bad.push(r);
            }
        }
    }
    bad.sort_by_key(|r| r.prime.sort_key());
    (bad.is_empty(), bad)
}
