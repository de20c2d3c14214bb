//! Roots in O_K of monic polynomials, by Hensel lifting at a split prime.

use super::{split_prime, FieldElem, QuadField};
use crate::arith::{is_prime, kronecker_prime};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

/// All roots in O_K of the monic polynomial with coefficients `coeffs`
/// (constant term first, leading 1 implied), sorted by coordinates.
pub fn roots_in_ok(k: &QuadField, coeffs: &[FieldElem<BigInt>]) -> Vec<FieldElem<BigInt>> {
    let n = coeffs.len();
    assert!(n >= 1, "polynomial of degree zero");
    let mut out: Vec<FieldElem<BigInt>> = Vec::new();
    if coeffs[0].is_zero() {
        // factor out X
        out.push(k.zero());
        if n > 1 {
            out.extend(roots_in_ok(k, &coeffs[1..]));
        }
        out.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
        out.dedup();
        return out;
    }
    // A root's images are bounded by 1 + max |coefficient image|.
    let w = BigInt::from(k.d().unsigned_abs().sqrt() + 2);
    let r = coeffs
        .iter()
        .map(|c| c.x.abs() + c.y.abs() * &w)
        .max()
        .unwrap()
        + 1;
    let m: BigInt = &r * (BigInt::from(3) + &w * 2);
    let bound: BigInt = m * 2 + 1;

    let fe = |x: &FieldElem<BigInt>, at: &BigInt, modulus: &BigInt| -> BigInt {
        (&x.x + &x.y * at).mod_floor(modulus)
    };
    let eval = |c: &[BigInt], x: &BigInt, modulus: &BigInt| -> BigInt {
        let mut acc = BigInt::one();
        for ci in c.iter().rev() {
            acc = (acc * x + ci).mod_floor(modulus);
        }
        acc
    };
    let deriv = |c: &[BigInt], x: &BigInt, modulus: &BigInt| -> BigInt {
        // d/dX of X^n + sum c_i X^i
        let deg = c.len();
        let mut acc = BigInt::from(deg);
        for i in (1..deg).rev() {
            acc = (acc * x + &c[i] * BigInt::from(i)).mod_floor(modulus);
        }
        acc
    };

    let mut p = 5u64;
    loop {
        p += 1;
        assert!(p < 100_000, "no usable split prime: polynomial not squarefree?");
        if !is_prime(p) || kronecker_prime(k.disc(), p) != 1 {
            continue;
        }
        let pb = BigInt::from(p);
        let prs = split_prime(k, p);
        let (r1, r2) = (prs[0].root.unwrap(), prs[1].root.unwrap());
        // simple roots mod each prime
        let mut ok = true;
        let mut local: Vec<Vec<BigInt>> = Vec::new();
        for rr in [r1, r2] {
            let c: Vec<BigInt> = coeffs.iter().map(|x| fe(x, &BigInt::from(rr), &pb)).collect();
            let rts: Vec<BigInt> = (0..p)
                .map(BigInt::from)
                .filter(|x| eval(&c, x, &pb).is_zero())
                .collect();
            if rts.iter().any(|x| deriv(&c, x, &pb).is_zero()) {
                ok = false;
                break;
            }
            local.push(rts);
        }
        if !ok {
            continue;
        }
        let mut pn = pb.clone();
        while pn < bound {
            pn *= &pb;
        }
        let (b, cc) = k.min_poly();
        let mpoly = [BigInt::from(cc), BigInt::from(b)];
        let w1 = hensel(&mpoly, BigInt::from(r1), &pn, &eval, &deriv);
        let w2 = hensel(&mpoly, BigInt::from(r2), &pn, &eval, &deriv);
        let c1: Vec<BigInt> = coeffs.iter().map(|x| fe(x, &w1, &pn)).collect();
        let c2: Vec<BigInt> = coeffs.iter().map(|x| fe(x, &w2, &pn)).collect();
        let inv = (&w1 - &w2).mod_floor(&pn).modinv(&pn).expect("split prime separates roots");
        let half = &pn / 2;
        let sym = |x: BigInt| if x > half { x - &pn } else { x };
        for a in &local[0] {
            let a = hensel(&c1, a.clone(), &pn, &eval, &deriv);
            for bb in &local[1] {
                let bb = hensel(&c2, bb.clone(), &pn, &eval, &deriv);
                let y = ((&a - &bb) * &inv).mod_floor(&pn);
                let x = (&a - &y * &w1).mod_floor(&pn);
                let cand = k.elem(sym(x), sym(y));
                if eval_exact(k, coeffs, &cand).is_zero() {
                    out.push(cand);
                }
            }
        }
        out.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
        out.dedup();
        return out;
    }
}

fn hensel(
    c: &[BigInt],
    mut x: BigInt,
    modulus: &BigInt,
    eval: &dyn Fn(&[BigInt], &BigInt, &BigInt) -> BigInt,
    deriv: &dyn Fn(&[BigInt], &BigInt, &BigInt) -> BigInt,
) -> BigInt {
    loop {
        let fx = eval(c, &x, modulus);
        if fx.is_zero() {
            return x;
        }
        let d = deriv(c, &x, modulus).modinv(modulus).expect("simple root");
        x = (x - fx * d).mod_floor(modulus);
    }
}

/// Evaluates the monic polynomial at `x` exactly.
pub fn eval_exact(k: &QuadField, coeffs: &[FieldElem<BigInt>], x: &FieldElem<BigInt>) -> FieldElem<BigInt> {
    let mut acc = k.one();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// A square root in O_K, if `u` is a square.
pub fn is_square(u: &FieldElem<BigInt>) -> Option<FieldElem<BigInt>> {
    let k = u.k;
    if u.is_zero() {
        return Some(k.zero());
    }
    let n = u.norm();
    if n.is_negative() || n.sqrt().pow(2) != n {
        return None;
    }
    roots_in_ok(&k, &[-u, k.zero()]).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(k: &QuadField, x: i64, y: i64) -> FieldElem<BigInt> {
        k.elem(BigInt::from(x), BigInt::from(y))
    }

    #[test]
    fn cubic_roots() {
        for d in [5i64, 6, -2, -15, 61] {
            let k = QuadField::new(d).unwrap();
            let a = el(&k, 3, -7);
            let b = el(&k, -11, 2);
            let c = el(&k, 0, 5);
            // (X - a)(X - b)(X - c)
            let s1 = &(&a + &b) + &c;
            let s2 = &(&(&a * &b) + &(&a * &c)) + &(&b * &c);
            let s3 = &(&a * &b) * &c;
            let coeffs = [-&s3, s2, -&s1];
            let mut want = vec![a, b, c];
            want.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
            assert_eq!(roots_in_ok(&k, &coeffs), want, "d = {d}");
        }
    }

    #[test]
    fn squares() {
        let k = QuadField::new(6).unwrap();
        let x = el(&k, 12345, -678);
        let s = is_square(&(&x * &x)).unwrap();
        assert!(s == x || s == -&x);
        assert!(is_square(&el(&k, 5, 2)).is_none());
        assert!(is_square(&el(&k, 6, 0)).is_some());
        assert!(is_square(&el(&k, 2, 0)).is_none());
        let k5 = QuadField::new(5).unwrap();
        assert!(is_square(&el(&k5, 5, 0)).is_some());
        assert!(is_square(&el(&k5, 2, 0)).is_none());
        // omega^2 in Q(sqrt 5) is a square
        let w = el(&k5, 0, 1);
        assert!(is_square(&(&w * &w)).is_some());
    }
}
