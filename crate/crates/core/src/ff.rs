//! Finite fields F_p and F_{p^2}.
//!
//! F_{p^2} is F_p[t]/(t^2 + bt + c) with (b, c) the lexicographically least
//! pair making the quadratic irreducible.

use crate::arith::{inv_mod, is_prime, pow_mod, sqrt_mod_prime};
use rand::Rng;
use serde::Serialize;

/// Element a + b·t; b is always 0 in a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Fe {
    pub a: u64,
    pub b: u64,
}

impl Fe {
    pub const ZERO: Fe = Fe { a: 0, b: 0 };
    pub const ONE: Fe = Fe { a: 1, b: 0 };

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fq {
    p: u64,
    f: u32,
    // modulus t^2 + mb t + mc, unused when f = 1
    mb: u64,
    mc: u64,
}

impl Fq {
    pub fn prime(p: u64) -> Fq {
        assert!(is_prime(p), "{p} is not prime");
        assert!(p < (1 << 31), "characteristic too large");
        Fq { p, f: 1, mb: 0, mc: 0 }
    }

    pub fn quadratic(p: u64) -> Fq {
        assert!(is_prime(p), "{p} is not prime");
        assert!(p < (1 << 31), "characteristic too large");
        if p == 2 {
            return Fq { p, f: 2, mb: 1, mc: 1 };
        }
        // With b = 0, t^2 + c is irreducible iff -c is a non-residue; the
        // smallest such c is lexicographically least overall.
        let c = (1..p)
            .find(|&c| pow_mod(p - c, (p - 1) / 2, p) == p - 1)
            .expect("odd primes have non-residues");
        Fq { p, f: 2, mb: 0, mc: c }
    }

    pub fn new(p: u64, f: u32) -> Fq {
        match f {
            1 => Fq::prime(p),
            2 => Fq::quadratic(p),
            _ => panic!("only degrees 1 and 2 are supported"),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }

    /// Coefficients (b, c) of the defining quadratic t^2 + bt + c.
    pub fn modulus(&self) -> Option<(u64, u64)> {
        (self.f == 2).then_some((self.mb, self.mc))
    }

    pub fn int(&self, n: i64) -> Fe {
        Fe { a: n.rem_euclid(self.p as i64) as u64, b: 0 }
    }

    pub fn elem(&self, a: u64, b: u64) -> Fe {
        assert!(self.f == 2 || b == 0);
        Fe { a: a % self.p, b: b % self.p }
    }

    /// The generator t of F_{p^2} over F_p.
    pub fn gen(&self) -> Fe {
        assert_eq!(self.f, 2);
        Fe { a: 0, b: 1 }
    }

    /// The i-th element in the canonical enumeration, i < q.
    pub fn nth(&self, i: u64) -> Fe {
        Fe { a: i % self.p, b: i / self.p }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.q()).map(move |i| self.nth(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        let a = rng.gen_range(0..self.p);
        let b = if self.f == 2 { rng.gen_range(0..self.p) } else { 0 };
        Fe { a, b }
    }

    #[inline]
    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        let p = self.p;
        let mut a = x.a + y.a;
        if a >= p {
            a -= p;
        }
        let mut b = x.b + y.b;
        if b >= p {
            b -= p;
        }
        Fe { a, b }
    }

    #[inline]
    pub fn neg(&self, x: Fe) -> Fe {
        let p = self.p;
        Fe {
            a: if x.a == 0 { 0 } else { p - x.a },
            b: if x.b == 0 { 0 } else { p - x.b },
        }
    }

    #[inline]
    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        let p = self.p;
        if self.f == 1 {
            return Fe { a: x.a * y.a % p, b: 0 };
        }
        // (x.a + x.b t)(y.a + y.b t) with t^2 = -mb t - mc
        let aa = x.a * y.a % p;
        let bb = x.b * y.b % p;
        let ab = (x.a * y.b + x.b * y.a) % p;
        let a = (aa + (p - self.mc) * bb) % p;
        let b = (ab + (p - self.mb) * bb) % p;
        Fe { a, b }
    }

    #[inline]
    pub fn sqr(&self, x: Fe) -> Fe {
        self.mul(x, x)
    }

    pub fn mul_int(&self, x: Fe, n: i64) -> Fe {
        self.mul(x, self.int(n))
    }

    /// Norm to F_p of an element of F_{p^2} (identity on F_p).
    pub fn norm(&self, x: Fe) -> u64 {
        if self.f == 1 {
            return x.a;
        }
        let n = self.mul(x, self.conj(x));
        debug_assert_eq!(n.b, 0);
        n.a
    }

    pub fn conj(&self, x: Fe) -> Fe {
        if self.f == 1 {
            return x;
        }
        let p = self.p;
        Fe { a: (x.a + p - x.b * self.mb % p) % p, b: (p - x.b) % p }
    }

    pub fn inv(&self, x: Fe) -> Fe {
        assert!(!x.is_zero(), "inverse of zero");
        if self.f == 1 {
            return Fe { a: inv_mod(x.a, self.p).unwrap(), b: 0 };
        }
        let c = self.conj(x);
        let n = self.mul(x, c).a;
        let ni = inv_mod(n, self.p).unwrap();
        Fe { a: c.a * ni % self.p, b: c.b * ni % self.p }
    }

    pub fn div(&self, x: Fe, y: Fe) -> Fe {
        self.mul(x, self.inv(y))
    }

    pub fn pow(&self, mut x: Fe, mut e: u64) -> Fe {
        let mut r = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, x);
            }
            x = self.sqr(x);
            e >>= 1;
        }
        r
    }

    /// Quadratic character: 0, 1 or -1.
    pub fn chi(&self, x: Fe) -> i32 {
        assert!(self.p != 2, "quadratic character needs odd characteristic");
        if x.is_zero() {
            return 0;
        }
        // chi(x) on F_{p^2} equals the Legendre symbol of its norm.
        let n = self.norm(x);
        if pow_mod(n, (self.p - 1) / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }

    /// Some square root, if one exists.
    pub fn sqrt(&self, x: Fe) -> Option<Fe> {
        if x.is_zero() {
            return Some(x);
        }
        if self.p == 2 {
            return Some(self.pth_root(x));
        }
        if self.f == 1 {
            return sqrt_mod_prime(x.a, self.p).map(|a| Fe { a, b: 0 });
        }
        if self.chi(x) != 1 {
            return None;
        }
        // Tonelli-Shanks in the cyclic group of order q - 1.
        let q = self.q();
        let mut m = q - 1;
        let mut s = 0;
        while m.is_multiple_of(2) {
            m /= 2;
            s += 1;
        }
        let z = self.elements().find(|&z| !z.is_zero() && self.chi(z) == -1).unwrap();
        let mut c = self.pow(z, m);
        let mut t = self.pow(x, m);
        let mut r = self.pow(x, m.div_ceil(2));
        let mut k = s;
        while t != Fe::ONE {
            let mut i = 0;
            let mut tt = t;
            while tt != Fe::ONE {
                tt = self.sqr(tt);
                i += 1;
            }
            let b = self.pow(c, 1 << (k - i - 1));
            k = i;
            c = self.sqr(b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// The unique p-th root (inverse Frobenius).
    pub fn pth_root(&self, x: Fe) -> Fe {
        self.pow(x, self.q() / self.p)
    }

    /// Whether a·X^2 + b·X + c has a root in the field.
    pub fn quadratic_has_root(&self, a: Fe, b: Fe, c: Fe) -> bool {
        if a.is_zero() {
            return !b.is_zero() || c.is_zero();
        }
        if self.p == 2 {
            return self.elements().any(|x| {
                let v = self.add(self.mul(self.add(self.mul(a, x), b), x), c);
                v.is_zero()
            });
        }
        let disc = self.sub(self.sqr(b), self.mul_int(self.mul(a, c), 4));
        self.chi(disc) >= 0
    }
}
