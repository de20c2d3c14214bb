use super::{BasisKind, FieldElem, QuadField};
use crate::arith::{inv_mod, kronecker_prime, sqrt_mod_prime};
use crate::ff::{Fe, Fq};
use crate::num::Scalar;
use num_bigint::BigInt;
use serde::Serialize;

/// A prime ideal of O_K above the rational prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeOfK {
    pub p: u64,
    pub e: u8,
    pub f: u8,
    /// Root of m(T) mod p picking out this prime; absent when inert.
    pub root: Option<u64>,
    pub norm: u64,
    #[serde(skip)]
    pub k: QuadField,
}

fn min_poly_roots_mod(k: &QuadField, p: u64) -> Vec<u64> {
    let (b, c) = k.min_poly();
    let (b, c) = (b.rem_euclid(p as i64) as u64, c.rem_euclid(p as i64) as u64);
    if p == 2 {
        return (0..2).filter(|&x| (x * x + b * x + c) % 2 == 0).collect();
    }
    let disc = (b * b + 4 * (p - c)) % p;
    let Some(s) = sqrt_mod_prime(disc, p) else {
        return Vec::new();
    };
    let half = p.div_ceil(2);
    let mut r: Vec<u64> = [s, (p - s) % p]
        .iter()
        .map(|&s| (s + p - b) % p * half % p)
        .collect();
    r.sort_unstable();
    r.dedup();
    r
}

/// The primes of K above `p`, split primes ordered by root.
pub fn split_prime(k: &QuadField, p: u64) -> Vec<PrimeOfK> {
    assert!(crate::arith::is_prime(p), "{p} is not prime");
    let mk = |e: u8, f: u8, root: Option<u64>| PrimeOfK { p, e, f, root, norm: p.pow(f as u32), k: *k };
    match kronecker_prime(k.disc(), p) {
        0 => {
            let r = min_poly_roots_mod(k, p);
            vec![mk(2, 1, Some(r[0]))]
        }
        1 => min_poly_roots_mod(k, p).into_iter().map(|r| mk(1, 1, Some(r))).collect(),
        _ => vec![mk(1, 2, None)],
    }
}

impl PrimeOfK {
    pub fn is_split(&self) -> bool {
        self.e == 1 && self.f == 1
    }

    pub fn is_inert(&self) -> bool {
        self.f == 2
    }

    pub fn is_ramified(&self) -> bool {
        self.e == 2
    }

    /// Exact valuation; `None` for zero.
    pub fn valuation<T: Scalar>(&self, x: &FieldElem<T>) -> Option<u32> {
        if x.is_zero() {
            return None;
        }
        let pt = T::of(self.p as i64);
        let mut x = x.clone();
        let mut k = 0u32;
        while let Some(q) = x.div_int_exact(&pt) {
            x = q;
            k += 1;
        }
        let rest = if self.is_inert() {
            0
        } else if self.is_split() {
            let r = self.root.unwrap();
            let res = (x.x.mod_u64(self.p) + x.y.mod_u64(self.p) * r) % self.p;
            if res == 0 {
                int_val(&x.norm(), self.p)
            } else {
                0
            }
        } else {
            let v = int_val(&x.norm(), self.p);
            debug_assert!(v <= 1);
            v
        };
        Some(self.e as u32 * k + rest)
    }

    pub fn residue_field(&self) -> Residue {
        Residue::new(self)
    }

    /// Total order used for reports: by norm, then root.
    pub fn sort_key(&self) -> (u64, u64, u64) {
        (self.norm, self.p, self.root.unwrap_or(0))
    }

    pub fn label(&self) -> String {
        match self.root {
            Some(r) if self.is_split() => format!("{}:{}", self.p, r),
            _ => format!("{}", self.p),
        }
    }
}

fn int_val<T: Scalar>(n: &T, p: u64) -> u32 {
    let pt = T::of(p as i64);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&pt) {
        n = n / pt.clone();
        v += 1;
    }
    v
}

/// The reduction map O_K -> F_{N(p)} at a prime.
#[derive(Clone, Copy, Debug)]
pub struct Residue {
    pub fq: Fq,
    /// Image of omega.
    pub w: Fe,
}

impl Residue {
    fn new(pr: &PrimeOfK) -> Residue {
        let p = pr.p;
        if pr.f == 1 {
            return Residue { fq: Fq::prime(p), w: Fe { a: pr.root.unwrap(), b: 0 } };
        }
        let fq = Fq::quadratic(p);
        if p == 2 {
            // omega^2 = omega + c with c odd: omega is a root of t^2 + t + 1
            debug_assert_eq!(pr.k.basis(), BasisKind::Half);
            return Residue { fq, w: fq.gen() };
        }
        let (mb, mc) = fq.modulus().unwrap();
        let (beta, gamma) = pr.k.min_poly();
        let pi = p as i64;
        let big_d = (beta * beta - 4 * gamma).rem_euclid(pi) as u64;
        let delta = (mb * mb + 4 * (p - mc)) % p;
        let ratio = big_d * inv_mod(delta, p).unwrap() % p;
        let r = sqrt_mod_prime(ratio, p).expect("inert prime: ratio of non-residues is a square");
        // s = 2t + mb squares to delta
        let s = fq.elem(mb, 2);
        let root = fq.mul_int(fq.sub(fq.mul_int(s, r as i64), fq.int(beta)), p.div_ceil(2) as i64);
        Residue { fq, w: root }
    }

    pub fn map<T: Scalar>(&self, x: &FieldElem<T>) -> Fe {
        let p = self.fq.p();
        let a = Fe { a: x.x.mod_u64(p), b: 0 };
        let b = Fe { a: x.y.mod_u64(p), b: 0 };
        self.fq.add(a, self.fq.mul(b, self.w))
    }

    pub fn map_int(&self, n: &BigInt) -> Fe {
        Fe { a: crate::arith::mod_big(n, self.fq.p()), b: 0 }
    }

    /// A preimage in O_K with coordinates in [0, p).
    pub fn lift(&self, k: &QuadField, z: Fe) -> FieldElem<BigInt> {
        let p = self.fq.p();
        if self.fq.degree() == 1 {
            return k.int(BigInt::from(z.a));
        }
        let y = z.b * inv_mod(self.w.b, p).unwrap() % p;
        let x = (z.a + p - y * self.w.a % p) % p;
        k.elem(BigInt::from(x), BigInt::from(y))
    }
}

/// Local data at a prime: residue map and a uniformizer, with exact helpers
/// for dividing by powers of the uniformizer.
#[derive(Clone, Debug)]
pub struct LocalPrime {
    pub prime: PrimeOfK,
    pub res: Residue,
    pub pi: FieldElem<BigInt>,
    // 1/pi = lam_num / (p * mu) with mu a p-adic unit integer
    lam_num: FieldElem<BigInt>,
    mu_inv: Fe,
    k: QuadField,
}

impl LocalPrime {
    pub fn new(prime: &PrimeOfK) -> LocalPrime {
        let k = prime.k;
        let res = prime.residue_field();
        let p = prime.p;
        let pb = BigInt::from(p);
        if prime.is_inert() {
            return LocalPrime {
                prime: *prime,
                res,
                pi: k.int(pb),
                lam_num: k.one(),
                mu_inv: Fe::ONE,
                k,
            };
        }
        let pi = uniformizer(prime);
        let n = pi.norm();
        let mu = &n / &pb;
        let mu_res = crate::arith::mod_big(&mu, p);
        let mu_inv = Fe { a: inv_mod(mu_res, p).unwrap(), b: 0 };
        LocalPrime { prime: *prime, res, lam_num: pi.conj(), pi, mu_inv, k }
    }

    pub fn p(&self) -> u64 {
        self.prime.p
    }

    pub fn fq(&self) -> Fq {
        self.res.fq
    }

    pub fn val(&self, x: &FieldElem<BigInt>) -> u32 {
        self.prime.valuation(x).unwrap_or(u32::MAX)
    }

    pub fn divides(&self, x: &FieldElem<BigInt>) -> bool {
        self.val(x) > 0
    }

    pub fn res(&self, x: &FieldElem<BigInt>) -> Fe {
        self.res.map(x)
    }

    pub fn lift(&self, z: Fe) -> FieldElem<BigInt> {
        self.res.lift(&self.k, z)
    }

    /// x * (pibar/p)^n: equals x / pi^n up to an integral p-adic unit, and
    /// is integral whenever v(x) >= n.
    pub fn unscale(&self, x: &FieldElem<BigInt>, n: u32) -> FieldElem<BigInt> {
        let pb = BigInt::from(self.prime.p);
        let mut x = x.clone();
        for _ in 0..n {
            x = (&x * &self.lam_num)
                .div_int_exact(&pb)
                .expect("unscale needs v(x) >= n");
        }
        x
    }

    /// Residue of x / pi^n (requires v(x) >= n).
    pub fn res_div(&self, x: &FieldElem<BigInt>, n: u32) -> Fe {
        let fq = self.fq();
        let r = self.res(&self.unscale(x, n));
        fq.mul(r, fq.pow(self.mu_inv, n as u64))
    }
}

/// An element of valuation exactly one at `prime` (and zero at its
/// conjugate when split).
pub fn uniformizer(prime: &PrimeOfK) -> FieldElem<BigInt> {
    let k = prime.k;
    let p = prime.p as i64;
    if prime.is_inert() {
        return k.int(BigInt::from(p));
    }
    for y in 0..=2i64 {
        for x in 0..=2 * p {
            for x in [x, -x] {
                let e = k.elem(BigInt::from(x), BigInt::from(y));
                if e.is_zero() {
                    continue;
                }
                if int_val(&e.norm(), prime.p) == 1 && prime.valuation(&e) == Some(1) {
                    return e;
                }
            }
        }
    }
    unreachable!("a small uniformizer always exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    #[test]
    fn splitting_examples() {
        let q5 = k(5);
        let s7 = split_prime(&q5, 7);
        assert!(s7.len() == 1 && s7[0].is_inert());
        let s11 = split_prime(&q5, 11);
        assert_eq!(s11.len(), 2);
        let s5 = split_prime(&q5, 5);
        assert!(s5.len() == 1 && s5[0].is_ramified());
        assert!(split_prime(&q5, 2)[0].is_inert());
        assert_eq!(split_prime(&k(17), 2).len(), 2);
        assert!(split_prime(&k(6), 2)[0].is_ramified());
        assert!(split_prime(&k(7), 2)[0].is_ramified());
    }

    #[test]
    fn efg_sum_is_two() {
        for d in [5i64, 6, 7, -2, -15, 17, 21, 61, 2, 3] {
            let kk = k(d);
            for p in crate::arith::primes_up_to(200) {
                let ps = split_prime(&kk, p);
                let s: u32 = ps.iter().map(|q| (q.e * q.f) as u32).sum();
                assert_eq!(s, 2, "d={d} p={p}");
                for q in ps.iter().filter(|q| q.f == 1) {
                    let (b, c) = kk.min_poly();
                    let r = q.root.unwrap() as i64;
                    assert_eq!((r * r + b * r + c).rem_euclid(p as i64), 0);
                }
            }
        }
    }

    #[test]
    fn valuation_examples() {
        let q5 = k(5);
        let p5 = split_prime(&q5, 5)[0];
        assert_eq!(p5.valuation(&q5.int(5i64)), Some(2));
        assert_eq!(p5.valuation(&q5.sqrt_d::<i64>()), Some(1));
        for pr in split_prime(&k(6), 3) {
            assert_eq!(pr.valuation(&k(6).int(2i64)), Some(0));
        }
        for pr in split_prime(&q5, 11) {
            assert_eq!(pr.valuation(&q5.omega::<i64>()), Some(0));
        }
        assert_eq!(p5.valuation(&q5.zero::<i64>()), None);
    }

    #[test]
    fn residue_examples() {
        let q5 = k(5);
        for pr in split_prime(&q5, 11) {
            let r = pr.residue_field();
            let s = r.map(&q5.sqrt_d::<i64>());
            assert_eq!(s.a * s.a % 11, 5);
        }
        let q6 = k(6);
        let p3 = split_prime(&q6, 3)[0];
        assert_eq!(p3.residue_field().map(&q6.int(7i64)), Fe::ONE);
        // 6 is a square mod 5, so the first inert prime of Q(sqrt 6) is 7
        assert_eq!(split_prime(&q6, 5).len(), 2);
        let p7 = split_prime(&q6, 7)[0];
        assert!(p7.is_inert());
        let r = p7.residue_field();
        let s = r.map(&q6.sqrt_d::<i64>());
        assert_eq!(r.fq.sqr(s), r.fq.int(6));
        assert_ne!(s.b, 0);
    }

    #[test]
    fn residue_lift_roundtrip_and_uniformizers() {
        for d in [5i64, 6, 7, -2, 13, 21, -15] {
            let kk = k(d);
            for p in [2u64, 3, 5, 7, 11, 13] {
                for pr in split_prime(&kk, p) {
                    let lp = LocalPrime::new(&pr);
                    assert_eq!(lp.val(&lp.pi), 1);
                    for z in lp.fq().elements() {
                        assert_eq!(lp.res(&lp.lift(z)), z);
                    }
                    let x = &lp.pi * &kk.elem(BigInt::from(3), BigInt::from(1));
                    let x = &x * &lp.pi;
                    // residue of x/pi^2 agrees with (x/pi^2) computed exactly
                    let exact = super::super::Frac::quotient(&x, &(&lp.pi * &lp.pi));
                    let ex = exact.integral().unwrap();
                    assert_eq!(lp.res_div(&x, 2), lp.res(&ex));
                }
            }
        }
    }
}
