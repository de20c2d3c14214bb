use hvn_core::arith::{jacobi, kronecker_prime, mod_big, primes_up_to};
use hvn_core::quadfield::split_prime;
use hvn_core::traces::*;
use hvn_core::{Curve, Elem, QuadField};

fn e0() -> Curve {
    let k = QuadField::new(6).unwrap();
    Curve::from_ints(&k, [(0, 1), (1, 1), (1, 1), (-1, 2), (-1, 1)]).unwrap()
}

// a_p at a degree-one prime from the character sum over the given model.
fn char_sum_trace(e: &Curve, p: u64, root: u64) -> i64 {
    let ev = |c: &Elem| (mod_big(&c.x, p) + mod_big(&c.y, p) * root) % p;
    let (b2, b4, b6) = (ev(e.b2()), ev(e.b4()), ev(e.b6()));
    let mut s = 0i64;
    for x in 0..p {
        let v = (4 * x % p * x % p * x + b2 * x % p * x + 2 * b4 * x + b6) % p;
        s += jacobi(v as i64, p) as i64;
    }
    -s
}

#[test]
fn split_traces_match_character_sums() {
    let k = QuadField::new(5).unwrap();
    let curves = [
        e0(),
        Curve::from_ints(&k, [(0, 0), (0, 0), (1, 0), (-1, 0), (0, 0)]).unwrap(),
        Curve::from_ints(&k, [(1, 1), (0, -1), (0, 1), (3, 2), (-1, 4)]).unwrap(),
    ];
    for e in &curves {
        let nd = e.disc().norm();
        for p in primes_up_to(400).into_iter().filter(|&p| p >= 5) {
            if mod_big(&nd, p) == 0 {
                continue;
            }
            for pr in split_prime(&e.field(), p).into_iter().filter(|pr| pr.is_split()) {
                let rec = frobenius_trace(e, &pr, 0).unwrap();
                assert_eq!(rec.a, char_sum_trace(e, p, pr.root.unwrap()), "p = {p}");
            }
        }
    }
}

#[test]
fn records_satisfy_hasse() {
    for rec in trace_records(&e0(), 3000, &[], 7) {
        assert!((rec.a * rec.a) as u64 <= 4 * rec.q, "{rec:?}");
        assert_eq!(rec.q, rec.prime.norm);
    }
}

#[test]
fn e0_norm_identity_below_500() {
    let mut checked = 0;
    for rec in trace_records(&e0(), 500, &[], 0) {
        let p = rec.prime.p;
        if rec.prime.is_ramified() {
            continue;
        }
        if rec.prime.is_split() && kronecker_prime(-8, p) == -1 {
            assert_eq!(rec.a, 0, "p = {p}");
        } else {
            assert!(cm_norm_identity(rec.a, rec.q, -72), "{rec:?}");
            checked += 1;
        }
    }
    assert!(checked > 40);
}

#[test]
fn trace_sets_grow_with_bound() {
    let e = e0();
    let small = trace_set(&e, 11, 300, 0);
    let large = trace_set(&e, 11, 1500, 0);
    assert!(small.residues.is_subset(&large.residues));
    assert!(small.primes_used < large.primes_used);
}

#[test]
fn generic_curve_saturates() {
    // y^2 + y = x^3 - x over Q(sqrt 5): no CM, bad primes are skipped
    let k = QuadField::new(5).unwrap();
    let e = Curve::from_ints(&k, [(0, 0), (0, 0), (1, 0), (-1, 0), (0, 0)]).unwrap();
    for ell in [11u64, 23] {
        let ts = trace_set(&e, ell, 2000, 0);
        assert!(ts.size() as u64 > ell.div_ceil(2), "l = {ell}: {}", ts.size());
    }
}

#[test]
fn bad_reduction_is_an_error() {
    let k = QuadField::new(5).unwrap();
    let e = Curve::from_ints(&k, [(0, 0), (0, 0), (1, 0), (-1, 0), (0, 0)]).unwrap();
    // discriminant -37; 37 is inert in K
    let pr = split_prime(&k, 37)[0];
    assert!(matches!(frobenius_trace(&e, &pr, 0), Err(TraceError::BadReduction(_))));
}
