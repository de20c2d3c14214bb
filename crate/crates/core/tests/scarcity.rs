use hvn_core::arith::{is_prime, primes_up_to};
use hvn_core::quadfield::split_prime;
use hvn_core::scarcity::*;
use hvn_core::QuadField;
use proptest::prelude::*;

fn scan_root(n: i64, l: u64) -> Option<u64> {
    (1..l).find(|&r| ((r * r) as i64 - n).rem_euclid(l as i64) == 0)
}

proptest! {
    #[test]
    fn least_root_matches_scan(n in 1i64..100_000, li in 1usize..200) {
        let l = primes_up_to(1300)[li];
        prop_assume!(n % l as i64 != 0);
        let r = sqrt_mod(n, l).unwrap();
        prop_assert_eq!(r, scan_root(n, l));
        if let Some(r) = r {
            prop_assert_eq!(((r * r) as i64 - n).rem_euclid(l as i64), 0);
        }
    }
}

#[test]
fn n_set_matches_scan_oracle() {
    for l in [7u64, 11, 23, 47, 59, 103, 131] {
        let oracle: Vec<u64> = (2..=l * l / 16)
            .filter(|&p| is_prime(p) && p != l)
            .filter(|&p| match scan_root(4 * p as i64, l) {
                Some(r) => r * r > 4 * p && scan_root(p as i64, l).is_some(),
                None => false,
            })
            .collect();
        let ns = n_set(l).unwrap();
        assert_eq!(ns, oracle, "l = {l}");
        assert!(ns.iter().all(|&p| p <= l * l / 16));
    }
}

#[test]
fn vertical_survivors_have_no_degree_one_prime() {
    let ns = n_set(47).unwrap();
    let real = vertical_sieve(47, 3000, true).unwrap();
    assert_eq!(&real[..2], &[5, 2309]);
    let surv = vertical_sieve(47, 3000, false).unwrap();
    assert!(real.iter().all(|d| surv.contains(d)));
    for &d in &surv {
        let k = QuadField::from_disc(d).unwrap();
        for &p in &ns {
            let ps = split_prime(&k, p);
            assert!(ps.len() == 1 && ps[0].f == 2, "disc {d}, p {p}");
        }
    }
    assert!(vertical_sieve(47, 4, true).unwrap().is_empty());
}

#[test]
fn horizontal_is_monotone_in_cap() {
    let k = QuadField::new(7).unwrap();
    let mut prev: Option<Vec<u64>> = None;
    for cap in [20, 60, 120, 250] {
        let s = horizontal_sieve(&k, 5, 20_000, cap);
        if let Some(p) = &prev {
            assert!(s.iter().all(|l| p.contains(l)));
        }
        prev = Some(s);
    }
    let small = horizontal_sieve(&k, 5, 163, 250);
    assert!(small.contains(&5) && small.contains(&11));
}
