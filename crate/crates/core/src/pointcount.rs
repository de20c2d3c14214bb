//! Point counting over F_p and F_{p^2}.

use crate::arith::{factor, isqrt, lcm_u64};
use crate::ff::{Fe, Fq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use thiserror::Error;

/// Largest q counted exhaustively by default.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000;
/// Below this, BSGS is not used.
pub const BSGS_MIN_Q: u64 = 229;
const MAX_POINTS: usize = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("the reduced curve is singular")]
    Singular,
    #[error("q = {0} exceeds the exhaustive limit")]
    TooLarge(u64),
    #[error("quadratic character is undefined in characteristic 2")]
    EvenCharacteristic,
}

/// A Weierstrass curve over F_q (coefficients a1, a2, a3, a4, a6).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveOverFq {
    pub fq: Fq,
    pub a: [Fe; 5],
}

impl CurveOverFq {
    pub fn new(fq: Fq, a: [Fe; 5]) -> Result<Self, CountError> {
        let e = CurveOverFq { fq, a };
        if e.disc().is_zero() {
            return Err(CountError::Singular);
        }
        Ok(e)
    }

    pub fn from_ints(fq: Fq, a: [i64; 5]) -> Result<Self, CountError> {
        Self::new(fq, a.map(|x| fq.int(x)))
    }

    pub fn q(&self) -> u64 {
        self.fq.q()
    }

    pub fn b_invariants(&self) -> [Fe; 4] {
        let f = &self.fq;
        let [a1, a2, a3, a4, a6] = self.a;
        let b2 = f.add(f.sqr(a1), f.mul_int(a2, 4));
        let b4 = f.add(f.mul_int(a4, 2), f.mul(a1, a3));
        let b6 = f.add(f.sqr(a3), f.mul_int(a6, 4));
        let b8 = f.sub(
            f.add(
                f.add(f.mul(f.sqr(a1), a6), f.mul_int(f.mul(a2, a6), 4)),
                f.mul(a2, f.sqr(a3)),
            ),
            f.add(f.mul(f.mul(a1, a3), a4), f.sqr(a4)),
        );
        [b2, b4, b6, b8]
    }

    pub fn c_invariants(&self) -> (Fe, Fe) {
        let f = &self.fq;
        let [b2, b4, b6, _] = self.b_invariants();
        let c4 = f.sub(f.sqr(b2), f.mul_int(b4, 24));
        let c6 = f.sub(
            f.add(f.neg(f.mul(f.sqr(b2), b2)), f.mul_int(f.mul(b2, b4), 36)),
            f.mul_int(b6, 216),
        );
        (c4, c6)
    }

    pub fn disc(&self) -> Fe {
        let f = &self.fq;
        let [b2, b4, b6, b8] = self.b_invariants();
        let t1 = f.neg(f.mul(f.sqr(b2), b8));
        let t2 = f.mul_int(f.mul(f.sqr(b4), b4), 8);
        let t3 = f.mul_int(f.sqr(b6), 27);
        let t4 = f.mul_int(f.mul(f.mul(b2, b4), b6), 9);
        f.add(f.sub(f.sub(t1, t2), t3), t4)
    }
}

pub fn quadratic_character(fq: &Fq, x: Fe) -> Result<i32, CountError> {
    if fq.p() == 2 {
        return Err(CountError::EvenCharacteristic);
    }
    Ok(fq.chi(x))
}

/// Exact #E(F_q), point at infinity included, by summing over x.
pub fn count_exhaustive(e: &CurveOverFq) -> Result<u64, CountError> {
    count_exhaustive_limit(e, EXHAUSTIVE_LIMIT)
}

pub fn count_exhaustive_limit(e: &CurveOverFq, limit: u64) -> Result<u64, CountError> {
    let f = &e.fq;
    let q = f.q();
    if q > limit {
        return Err(CountError::TooLarge(q));
    }
    let [a1, a2, a3, a4, a6] = e.a;
    if f.p() == 2 {
        // y^2 + B y = g with B = a1 x + a3: one root if B = 0, otherwise two
        // or none according to the absolute trace of g / B^2.
        let mut n = 1u64;
        for x in f.elements() {
            let b = f.add(f.mul(a1, x), a3);
            let g = f.add(f.mul(f.add(f.mul(f.add(x, a2), x), a4), x), a6);
            if b.is_zero() {
                n += 1;
            } else {
                let c = f.div(g, f.sqr(b));
                let tr = if f.degree() == 1 { c } else { f.add(c, f.sqr(c)) };
                if tr.is_zero() {
                    n += 2;
                }
            }
        }
        return Ok(n);
    }
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    let [b2, b4, b6, _] = e.b_invariants();
    let p = f.p();
    let mut is_sq = vec![false; q as usize];
    for x in f.elements() {
        let s = f.sqr(x);
        is_sq[(s.a + p * s.b) as usize] = true;
    }
    let mut total: i64 = (q + 1) as i64;
    for x in f.elements() {
        let g = f.add(
            f.mul(f.add(f.mul(f.add(f.mul_int(x, 4), b2), x), f.mul_int(b4, 2)), x),
            b6,
        );
        if !g.is_zero() {
            total += if is_sq[(g.a + p * g.b) as usize] { 1 } else { -1 };
        }
    }
    Ok(total as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pt {
    x: Fe,
    y: Fe,
    inf: bool,
}

const INF: Pt = Pt { x: Fe::ZERO, y: Fe::ZERO, inf: true };

// Group law on y^2 = x^3 + a x + b (b is never needed).
struct Group<'a> {
    f: &'a Fq,
    a: Fe,
}

impl Group<'_> {
    fn add(&self, p: Pt, q: Pt) -> Pt {
        let f = self.f;
        if p.inf {
            return q;
        }
        if q.inf {
            return p;
        }
        let lam = if p.x == q.x {
            if p.y != q.y || p.y.is_zero() {
                return INF;
            }
            let num = f.add(f.mul_int(f.sqr(p.x), 3), self.a);
            f.div(num, f.mul_int(p.y, 2))
        } else {
            f.div(f.sub(q.y, p.y), f.sub(q.x, p.x))
        };
        let x3 = f.sub(f.sub(f.sqr(lam), p.x), q.x);
        let y3 = f.sub(f.mul(lam, f.sub(p.x, x3)), p.y);
        Pt { x: x3, y: y3, inf: false }
    }

    fn mul(&self, p: Pt, mut n: u64) -> Pt {
        let mut r = INF;
        let mut b = p;
        while n > 0 {
            if n & 1 == 1 {
                r = self.add(r, b);
            }
            b = self.add(b, b);
            n >>= 1;
        }
        r
    }

    // Some multiple of the order of p inside [lo, hi], which must contain the
    // group order.
    fn multiple_in(&self, p: Pt, lo: u64, hi: u64) -> u64 {
        let m = isqrt(hi - lo) + 1;
        let fp = self.f.p();
        let key = |pt: &Pt| pt.x.a + fp * pt.x.b;
        let mut table: HashMap<u64, Vec<(u64, Fe)>> = HashMap::with_capacity(m as usize);
        let mut jp = p;
        for j in 1..=m {
            if jp.inf {
                // order divides j; any multiple of j in range works
                return (lo.div_ceil(j)) * j;
            }
            table.entry(key(&jp)).or_default().push((j, jp.y));
            jp = self.add(jp, p);
        }
        let step = self.mul(p, m);
        let mut g = self.mul(p, lo);
        for i in 0..=m + 1 {
            let base = lo + i * m;
            if g.inf {
                return base;
            }
            // g = jP or g = -jP
            if let Some(&(j, y)) = table.get(&key(&g)).and_then(|hits| hits.first()) {
                return if y == g.y { base - j } else { base + j };
            }
            g = self.add(g, step);
        }
        panic!("no multiple of the point order in the Hasse interval: not a curve?");
    }

    fn order(&self, p: Pt, lo: u64, hi: u64) -> u64 {
        let mut n = self.multiple_in(p, lo, hi);
        debug_assert!(self.mul(p, n).inf);
        for (r, _) in factor(n) {
            while n.is_multiple_of(r) && self.mul(p, n / r).inf {
                n /= r;
            }
        }
        n
    }
}

/// Exact #E(F_q) by baby-step giant-step in the Hasse interval, combining
/// point orders on E and its quadratic twist until one candidate remains.
pub fn count_bsgs<R: Rng + ?Sized>(e: &CurveOverFq, rng: &mut R) -> u64 {
    let f = &e.fq;
    let q = f.q();
    if q <= BSGS_MIN_Q || f.p() < 5 {
        return count_exhaustive_limit(e, u64::MAX).unwrap();
    }
    let (c4, c6) = e.c_invariants();
    let a = f.mul_int(c4, -27);
    let b = f.mul_int(c6, -54);
    let w = isqrt(4 * q);
    let (lo, hi) = (q + 1 - w, q + 1 + w);
    let (mut l_e, mut l_t) = (1u64, 1u64);
    for attempt in 0..MAX_POINTS {
        let want = if attempt % 2 == 0 { 1 } else { -1 };
        let (x, s) = loop {
            let x = f.random(rng);
            let s = f.add(f.mul(f.add(f.sqr(x), a), x), b);
            if !s.is_zero() && f.chi(s) == want {
                break (x, s);
            }
        };
        // (x s, s^2) lies on Y^2 = X^3 + a s^2 X + b s^3, isomorphic to E or
        // to its twist according to chi(s).
        let s2 = f.sqr(s);
        let grp = Group { f, a: f.mul(a, s2) };
        let pt = Pt { x: f.mul(x, s), y: s2, inf: false };
        let ord = grp.order(pt, lo, hi);
        if want == 1 {
            l_e = lcm_u64(l_e, ord);
        } else {
            l_t = lcm_u64(l_t, ord);
        }
        let cands = candidates(q, lo, hi, l_e, l_t);
        assert!(!cands.is_empty(), "inconsistent point orders for q = {q}");
        if cands.len() == 1 {
            return cands[0];
        }
    }
    panic!("group order for q = {q} not determined after {MAX_POINTS} points");
}

fn candidates(q: u64, lo: u64, hi: u64, l_e: u64, l_t: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if l_e >= l_t {
        let mut n = lo.div_ceil(l_e) * l_e;
        while n <= hi {
            if (2 * q + 2 - n).is_multiple_of(l_t) {
                out.push(n);
            }
            n += l_e;
        }
    } else {
        let mut m = lo.div_ceil(l_t) * l_t;
        while m <= hi {
            if (2 * q + 2 - m).is_multiple_of(l_e) {
                out.push(2 * q + 2 - m);
            }
            m += l_t;
        }
        out.sort_unstable();
    }
    out
}

/// #E(F_q): exhaustive for small q, BSGS otherwise, with a RNG seeded from
/// `seed` and q so results never depend on call order.
pub fn count_points(e: &CurveOverFq, seed: u64) -> u64 {
    let q = e.q();
    if q <= BSGS_MIN_Q || e.fq.p() < 5 {
        return count_exhaustive_limit(e, u64::MAX).unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    count_bsgs(e, &mut rng)
}
