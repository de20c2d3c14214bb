//! Hilbert class polynomials from the q-expansion of j, in fixed-point
//! complex arithmetic over BigInt.

use super::{reduced_forms, CmError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

const START_DIGITS: u32 = 30;
const MAX_DIGITS: u32 = 4000;

/// Fixed-point reals with `bits` fractional bits.
#[derive(Clone, Copy)]
struct Fix {
    bits: u32,
}

#[derive(Clone, Debug)]
struct Cx {
    re: BigInt,
    im: BigInt,
}

impl Fix {
    fn one(&self) -> BigInt {
        BigInt::one() << self.bits
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }

    fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a << self.bits).div_floor(b)
    }

    #[cfg(test)]
    fn int(&self, n: i64) -> BigInt {
        BigInt::from(n) << self.bits
    }

    fn sqrt_int(&self, n: u64) -> BigInt {
        (BigInt::from(n) << (2 * self.bits)).sqrt()
    }

    // atan(1/n) by its Taylor series
    fn atan_inv(&self, n: i64) -> BigInt {
        let n2 = BigInt::from(n * n);
        let mut power = self.one() / n;
        let mut sum = BigInt::zero();
        let mut k = 0i64;
        while !power.is_zero() {
            let term = &power / (2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power = &power / &n2;
            k += 1;
        }
        sum
    }

    fn pi(&self) -> BigInt {
        16 * self.atan_inv(5) - 4 * self.atan_inv(239)
    }

    // exp(x) for |x| < 1
    fn exp_small(&self, x: &BigInt) -> BigInt {
        let mut sum = self.one();
        let mut term = self.one();
        let mut n = 1i64;
        while !term.is_zero() {
            term = self.mul(&term, x) / n;
            sum += &term;
            n += 1;
        }
        sum
    }

    fn exp(&self, x: &BigInt) -> BigInt {
        // halve until |x| < 1, then square back
        let mut s = 0u32;
        let mut y = x.clone();
        while y.abs() >= self.one() {
            y >>= 1;
            s += 1;
        }
        let mut r = self.exp_small(&y);
        for _ in 0..s {
            r = self.mul(&r, &r);
        }
        r
    }

    fn cos_sin(&self, x: &BigInt) -> (BigInt, BigInt) {
        let (mut c, mut s) = (BigInt::zero(), BigInt::zero());
        let mut term = self.one();
        let mut n = 0i64;
        while !term.is_zero() {
            match n % 4 {
                0 => c += &term,
                1 => s += &term,
                2 => c -= &term,
                _ => s -= &term,
            }
            n += 1;
            term = self.mul(&term, x) / n;
        }
        (c, s)
    }

    fn cmul(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: self.mul(&a.re, &b.re) - self.mul(&a.im, &b.im),
            im: self.mul(&a.re, &b.im) + self.mul(&a.im, &b.re),
        }
    }

    fn cdiv(&self, a: &Cx, b: &Cx) -> Cx {
        let n = self.mul(&b.re, &b.re) + self.mul(&b.im, &b.im);
        let num = self.cmul(a, &Cx { re: b.re.clone(), im: -&b.im });
        Cx { re: self.div(&num.re, &n), im: self.div(&num.im, &n) }
    }

    fn cpow(&self, a: &Cx, mut e: u32) -> Cx {
        let mut base = a.clone();
        let mut acc = Cx { re: self.one(), im: BigInt::zero() };
        while e > 0 {
            if e & 1 == 1 {
                acc = self.cmul(&acc, &base);
            }
            base = self.cmul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn sigma3(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| d * d * d).sum()
}

/// j((-b + sqrt D) / 2a) as a fixed-point complex number.
fn j_value(fx: &Fix, pi: &BigInt, d: i64, a: i64, b: i64) -> Cx {
    // q = e^{2 pi i tau} = e^{-pi sqrt|D| / a} e^{-pi i b / a}
    let y = fx.mul(pi, &fx.sqrt_int(d.unsigned_abs())) / a;
    let theta = pi * b / a;
    let (c, s) = fx.cos_sin(&theta);
    let big = fx.exp(&y);
    let inv_q = Cx { re: fx.mul(&big, &c), im: fx.mul(&big, &s) };
    let small = fx.div(&fx.one(), &big);
    let q = Cx { re: fx.mul(&small, &c), im: -fx.mul(&small, &s) };
    // |q|^n below 2^-bits once n > bits ln 2 / y
    let yf = (d.unsigned_abs() as f64).sqrt() * std::f64::consts::PI / a as f64;
    let terms = ((fx.bits as f64 + 16.0) * std::f64::consts::LN_2 / yf).ceil() as u64 + 2;
    let mut powers = vec![Cx { re: fx.one(), im: BigInt::zero() }, q.clone()];
    for n in 2..=terms {
        let next = fx.cmul(&powers[n as usize - 1], &q);
        powers.push(next);
    }
    let mut e4 = Cx { re: fx.one(), im: BigInt::zero() };
    for n in 1..=terms {
        let c = BigInt::from(240 * sigma3(n));
        e4.re += &powers[n as usize].re * &c;
        e4.im += &powers[n as usize].im * &c;
    }
    // Euler product by the pentagonal number theorem
    let mut eta = Cx { re: fx.one(), im: BigInt::zero() };
    for k in 1u64.. {
        let g1 = k * (3 * k - 1) / 2;
        if g1 > terms {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for g in [g1, k * (3 * k + 1) / 2] {
            if g <= terms {
                eta.re += sign * &powers[g as usize].re;
                eta.im += sign * &powers[g as usize].im;
            }
        }
    }
    let num = fx.cmul(&fx.cpow(&e4, 3), &inv_q);
    fx.cdiv(&num, &fx.cpow(&eta, 24))
}

// Coefficients (constant first, monic) of prod (x - j_i) at `digits` digits.
fn poly_at(d: i64, digits: u32) -> Vec<Cx> {
    let fx = Fix { bits: (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64 };
    let pi = fx.pi();
    let mut poly = vec![Cx { re: fx.one(), im: BigInt::zero() }];
    for (a, b, _) in reduced_forms(d) {
        let j = j_value(&fx, &pi, d, a, b);
        // multiply by (x - j)
        let mut next = vec![Cx { re: BigInt::zero(), im: BigInt::zero() }; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1].re += &c.re;
            next[i + 1].im += &c.im;
            let t = fx.cmul(c, &j);
            next[i].re -= t.re;
            next[i].im -= t.im;
        }
        poly = next;
    }
    poly.into_iter().map(|c| scale_down(c, fx.bits)).collect()
}

// Keep 20 fractional bits so the rounding gap can be measured.
fn scale_down(c: Cx, bits: u32) -> Cx {
    Cx { re: c.re >> (bits - 20), im: c.im >> (bits - 20) }
}

// Nearest integers, if every coefficient is within 1e-4 of one and the
// imaginary parts vanish to that tolerance.
fn round_all(coeffs: &[Cx]) -> Option<Vec<BigInt>> {
    let unit = BigInt::one() << 20;
    let tol = BigInt::from(105); // 1e-4 * 2^20
    coeffs
        .iter()
        .map(|c| {
            let half: BigInt = &unit >> 1;
            let (q, r) = (&c.re + &half).div_mod_floor(&unit);
            let gap = (&r - &half).abs();
            (gap <= tol && c.im.abs() <= tol).then_some(q)
        })
        .collect()
}

/// The Hilbert class polynomial of discriminant `d`, constant term first,
/// leading coefficient 1 included. Precision doubles until every
/// coefficient rounds cleanly, and the result is confirmed at twice that
/// precision.
pub fn hilbert_class_poly(d: i64) -> Result<Vec<BigInt>, CmError> {
    super::check_disc(d)?;
    let mut digits = START_DIGITS;
    while digits <= MAX_DIGITS {
        if let Some(first) = round_all(&poly_at(d, digits)) {
            if round_all(&poly_at(d, 2 * digits)).as_ref() == Some(&first) {
                return Ok(first);
            }
        }
        digits *= 2;
    }
    Err(CmError::PrecisionExhausted(d))
}
