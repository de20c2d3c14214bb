use hvn_core::heavenly::*;
use hvn_core::quadfield::split_prime;
use hvn_core::{Curve, Elem, QuadField};
use num_bigint::BigInt;
use proptest::prelude::*;

fn e0() -> Curve {
    let k = QuadField::new(6).unwrap();
    Curve::from_ints(&k, [(0, 1), (1, 1), (1, 1), (-1, 2), (-1, 1)]).unwrap()
}

#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let n = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / n, (self.1 * o.0 - self.0 * o.1) / n)
    }
}

fn f(n: &BigInt) -> f64 {
    n.to_string().parse().unwrap()
}

// Images of an element under each embedding (two real, or one complex).
fn embed(a: &Elem) -> Vec<C> {
    let w = a.k.omega_f64();
    let (x, y) = (f(&a.x), f(&a.y));
    if a.k.is_real() {
        vec![C(x + y * w[0], 0.0), C(x + y * w[1], 0.0)]
    } else {
        vec![C(x + y * w[0], y * w[1])]
    }
}

// Durand-Kerner for a monic cubic.
fn cubic_roots(c: [C; 3]) -> [C; 3] {
    let ev = |z: C| z.mul(z).mul(z).add(c[2].mul(z).mul(z)).add(c[1].mul(z)).add(c[0]);
    let mut r = [C(1.0, 0.0), C(0.4, 0.9), C(-0.65, 0.72)];
    let scale = 1.0 + c.iter().map(|z| z.0.abs() + z.1.abs()).fold(0.0, f64::max);
    for z in r.iter_mut() {
        *z = C(z.0 * scale, z.1 * scale);
    }
    for _ in 0..500 {
        for i in 0..3 {
            let mut den = C(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    den = den.mul(r[i].sub(r[j]));
                }
            }
            r[i] = r[i].sub(ev(r[i]).div(den));
        }
    }
    r
}

// Lattice points x + y omega near the given embedded values.
fn candidates(k: &QuadField, vals: &[Vec<C>]) -> Vec<Elem> {
    let w = k.omega_f64();
    let mut out = Vec::new();
    if k.is_real() {
        for r in &vals[0] {
            for s in &vals[1] {
                let y = ((r.0 - s.0) / (w[0] - w[1])).round();
                let x = (r.0 - y * w[0]).round();
                out.push(k.elem(BigInt::from(x as i64), BigInt::from(y as i64)));
            }
        }
    } else {
        for z in &vals[0] {
            let y = (z.1 / w[1]).round();
            let x = (z.0 - y * w[0]).round();
            out.push(k.elem(BigInt::from(x as i64), BigInt::from(y as i64)));
        }
    }
    out
}

// Degree of the 2-division field by counting roots in K and testing the
// discriminant for squareness, both through numerics and exact checks.
fn oracle_degree(e: &Curve) -> u32 {
    let k = e.field();
    let [c, b, a] = e.two_division_cubic();
    let per_embedding: Vec<Vec<C>> = (0..embed(&a).len())
        .map(|i| cubic_roots([embed(&c)[i], embed(&b)[i], embed(&a)[i]]).to_vec())
        .collect();
    let is_root = |x: &Elem| (&(&(&(&(x * x) * x) + &(&a * &(x * x))) + &(&b * x)) + &c).is_zero();
    let mut roots: Vec<Elem> = candidates(&k, &per_embedding).into_iter().filter(|x| is_root(x)).collect();
    roots.sort_by(|p, q| (&p.x, &p.y).cmp(&(&q.x, &q.y)));
    roots.dedup();
    match roots.len() {
        3 => 1,
        1 => 2,
        0 => {
            // sqrt of disc = product of root differences
            let sq: Vec<Vec<C>> = per_embedding
                .iter()
                .map(|r| {
                    let v = r[0].sub(r[1]).mul(r[0].sub(r[2])).mul(r[1].sub(r[2]));
                    vec![v, C(-v.0, -v.1)]
                })
                .collect();
            let disc = {
                let ab = &a * &b;
                let n = |v: i64| k.int(BigInt::from(v));
                &(&(&(&ab * &ab) - &(&n(4) * &(&(&b * &b) * &b)))
                    - &(&(&n(4) * &(&(&(&a * &a) * &a) * &c)) + &(&n(27) * &(&c * &c))))
                    + &(&n(18) * &(&ab * &c))
            };
            if candidates(&k, &sq).iter().any(|s| (s * s) == disc) {
                3
            } else {
                6
            }
        }
        n => panic!("{n} roots in K"),
    }
}

fn curve_strategy() -> impl Strategy<Value = Curve> {
    let d = prop::sample::select(vec![2i64, 3, 5, 6, 7, 13, -1, -2, -3, -5, -7]);
    let coord = || (-3i64..=3, -2i64..=2);
    (d, 0u8..3, prop::array::uniform5(coord()), prop::array::uniform3(coord()))
        .prop_filter_map("singular", |(d, mode, g, r)| {
            let k = QuadField::new(d).unwrap();
            let el = |(x, y): (i64, i64)| k.elem(BigInt::from(x), BigInt::from(y));
            let z = k.zero();
            let a = match mode {
                0 => g.map(el),
                // y^2 = (x - r1)(x^2 + s x + t)
                1 => {
                    let (r1, s, t) = (el(r[0]), el(r[1]), el(r[2]));
                    let a2 = &s - &r1;
                    let a4 = &t - &(&r1 * &s);
                    let a6 = -(&r1 * &t);
                    [z.clone(), a2, z.clone(), a4, a6]
                }
                // three roots in K
                _ => {
                    let (r1, r2, r3) = (el(r[0]), el(r[1]), el(r[2]));
                    let a2 = -(&(&r1 + &r2) + &r3);
                    let a4 = &(&(&r1 * &r2) + &(&r1 * &r3)) + &(&r2 * &r3);
                    let a6 = -(&(&r1 * &r2) * &r3);
                    [z.clone(), a2, z.clone(), a4, a6]
                }
            };
            Curve::new(a).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]
    #[test]
    fn two_torsion_degree_matches_oracle(e in curve_strategy()) {
        prop_assert_eq!(two_torsion_degree(&e), oracle_degree(&e));
    }
}

#[test]
fn e0_heavenly_at_two_and_three() {
    let e = e0();
    let v2 = two_torsion_heavenly(&e);
    assert_eq!(v2.status, Status::ProvenHeavenly);
    assert!(matches!(v2.evidence, Evidence::Degree(d) if d.is_power_of_two()));
    let v3 = three_torsion_heavenly_sample(&e, 3000, 0);
    assert_eq!(v3.status, Status::LikelyHeavenly);
}

#[test]
fn irreducible_cubic_is_not_heavenly() {
    // y^2 = x^3 + x + 1 over Q(sqrt 5): cubic irreducible with discriminant -31 up to squares
    let k = QuadField::new(5).unwrap();
    let e = Curve::from_ints(&k, [(0, 0), (0, 0), (0, 0), (1, 0), (1, 0)]).unwrap();
    assert_eq!(two_torsion_degree(&e), 6);
    let v = two_torsion_heavenly(&e);
    // also bad at 31, which is reported first
    assert!(!v.is_heavenly());
}

#[test]
fn bad_reduction_witness() {
    let k = QuadField::new(5).unwrap();
    // y^2 + y = x^3 - x, discriminant 37
    let e = Curve::from_ints(&k, [(0, 0), (0, 0), (1, 0), (-1, 0), (0, 0)]).unwrap();
    let v = heavenly_trace_test(&e, 47, 500, 0);
    let pr = split_prime(&k, 37)[0];
    assert_eq!(v.status, Status::NotHeavenly(Witness::BadReduction { prime: pr }));
    let v = three_torsion_heavenly_sample(&e, 500, 0);
    assert!(matches!(v.status, Status::NotHeavenly(Witness::BadReduction { .. })));
}

#[test]
fn trace_test_rejects_e0_at_small_primes() {
    let e = e0();
    for ell in [5u64, 7, 11] {
        let small = heavenly_trace_test(&e, ell, 600, 0);
        let large = heavenly_trace_test(&e, ell, 3000, 0);
        assert!(matches!(small.status, Status::NotHeavenly(Witness::TraceSetTooLarge { .. })), "l = {ell}");
        assert!(!large.is_heavenly());
    }
}
