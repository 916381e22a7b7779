mod common;

use std::collections::BTreeMap;

use chartab::cyclo::{atlas_sqrt, field_contains_sqrt, Cyclotomic};
use chartab::numtheory::primes_up_to;
use chartab::powermap::resolve_quadratic_pair;
use chartab::{CharacterTable, ParaMap};
use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

fn element(n: u32, coeffs: &[i64]) -> Cyclotomic {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| Cyclotomic::root_of_unity_power(n, k as i64).scale(&common::rat(c, 1)))
        .sum()
}

fn arb_element() -> impl Strategy<Value = Cyclotomic> {
    (1u32..=24).prop_flat_map(|n| prop::collection::vec(-3i64..=3, n as usize).prop_map(move |c| element(n, &c)))
}

fn units(n: u32) -> Vec<i64> {
    (1..n as i64).filter(|k| k.gcd(&(n as i64)) == 1).collect()
}

proptest! {
    #![proptest_config(common::proptest_config(256))]

    #[test]
    fn ring_laws(a in arb_element(), b in arb_element(), c in arb_element()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn galois_composes(n in 2u32..=30, coeffs in prop::collection::vec(-2i64..=2, 30), i in 0usize..8, j in 0usize..8) {
        let x = element(n, &coeffs[..n as usize]);
        let u = units(n);
        let (a, b) = (u[i % u.len()], u[j % u.len()]);
        let lhs = x.galois(a).unwrap().galois(b).unwrap();
        prop_assert_eq!(lhs, x.galois(a * b % n as i64).unwrap());
    }

    #[test]
    fn galois_is_a_ring_map(a in arb_element(), b in arb_element(), k in 1i64..200) {
        let n = (a.conductor() as i64).lcm(&(b.conductor() as i64));
        prop_assume!(k.gcd(&n) == 1);
        let s = |x: &Cyclotomic| x.galois(k).unwrap();
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
    }

    #[test]
    fn conjugation_is_galois_minus_one(a in arb_element()) {
        prop_assert_eq!(a.complex_conjugate(), a.galois(-1).unwrap());
    }

    #[test]
    fn json_roundtrip(a in arb_element()) {
        prop_assert_eq!(Cyclotomic::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn nonzero_elements_invert(a in arb_element()) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(&a * &a.inverse().unwrap(), Cyclotomic::one());
    }
}

fn eval(x: &Cyclotomic) -> (f64, f64) {
    use num_traits::ToPrimitive;
    let n = x.conductor() as f64;
    x.terms().iter().fold((0.0, 0.0), |(re, im), (e, q)| {
        let a = 2.0 * std::f64::consts::PI * *e as f64 / n;
        let c = q.to_f64().unwrap();
        (re + c * a.cos(), im + c * a.sin())
    })
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
}

proptest! {
    #![proptest_config(common::proptest_config(256))]

    #[test]
    fn agrees_with_floating_point(a in arb_element(), b in arb_element(), k in 1i64..60) {
        let (x, y) = (eval(&a), eval(&b));
        prop_assert!(close(eval(&(&a + &b)), (x.0 + y.0, x.1 + y.1)));
        prop_assert!(close(eval(&(&a * &b)), (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)));
        prop_assert!(close(eval(&a.complex_conjugate()), (x.0, -x.1)));
        let n = a.conductor() as i64;
        prop_assume!(k.gcd(&n) == 1);
        let direct: Cyclotomic = a.terms().iter().map(|(e, q)| Cyclotomic::root_of_unity_power(a.conductor(), *e as i64 * k).scale(q)).sum();
        prop_assert!(close(eval(&a.galois(k).unwrap()), eval(&direct)));
    }
}

#[test]
fn roots_of_unity_sum_to_zero() {
    for n in 2..=40u32 {
        let s: Cyclotomic = (0..n as i64).map(|k| Cyclotomic::root_of_unity_power(n, k)).sum();
        assert!(s.is_zero(), "n = {n}");
        assert_eq!(Cyclotomic::root_of_unity(n).pow(n), Cyclotomic::one());
    }
}

// Prime factors of |d| for the discriminants under test.
const DISCRIMINANTS: &[(i64, &[u64])] = &[(-59, &[59]), (-71, &[71]), (-119, &[7, 17]), (-39, &[3, 13])];

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `(k/q)` for `q` a product of distinct odd primes, by Euler's criterion.
fn symbol(k: u64, primes: &[u64]) -> i64 {
    primes
        .iter()
        .map(|&p| match pow_mod(k, (p - 1) / 2, p) {
            0 => 0,
            1 => 1,
            _ => -1,
        })
        .product()
}

/// `Σ_k (k/q) ζ_q^{mk}`: the Gauss sum with `ζ` replaced by `ζ^m`.
fn gauss_sum(q: u64, primes: &[u64], m: u64) -> Cyclotomic {
    (1..q)
        .map(|k| Cyclotomic::root_of_unity_power(q as u32, (m * k % q) as i64).scale(&common::rat(symbol(k, primes), 1)))
        .sum()
}

#[test]
fn gauss_sums_are_atlas_roots() {
    for &(d, primes) in DISCRIMINANTS {
        let q = d.unsigned_abs();
        let g = gauss_sum(q, primes, 1);
        assert_eq!(g, atlas_sqrt(d), "d = {d}");
        assert_eq!(&g * &g, Cyclotomic::from_integer(d));
    }
}

#[test]
fn quadratic_pairs_follow_the_gauss_sum() {
    let t = CharacterTable::new("T", BigUint::from(3u32 * 127), vec![3u32.into(), 127u32.into(), 127u32.into()], vec![1, 127, 127]);
    for &(d, primes) in DISCRIMINANTS {
        let q = d.unsigned_abs();
        let g = gauss_sum(q, primes, 1);
        let ps: Vec<u64> = primes_up_to(113).into_iter().filter(|p| q % p != 0).collect();
        let mut maps = BTreeMap::new();
        for &p in &ps {
            let mut m = ParaMap::unbound(3);
            m.restrict(1, &[1, 2]).unwrap();
            m.restrict(2, &[1, 2]).unwrap();
            maps.insert(p, m);
        }
        let got = resolve_quadratic_pair(&t, &mut maps, (1, 2), d, &ps).unwrap();
        assert_eq!(got.len(), ps.len());
        for (p, fixes) in got {
            let direct = gauss_sum(q, primes, p) == g;
            assert_eq!(fixes, direct, "d = {d}, p = {p}");
            assert_eq!(fixes, symbol(p, primes) == 1, "d = {d}, p = {p}");
            let expect = if fixes { [1, 2] } else { [2, 1] };
            assert_eq!(maps[&p].entry(1).fixed(), Some(expect[0]));
            assert_eq!(maps[&p].entry(2).fixed(), Some(expect[1]));
        }
    }
}

#[test]
fn field_membership() {
    let b = atlas_sqrt(-7);
    let x = &Cyclotomic::from_integer(3) + &b;
    assert!(field_contains_sqrt(std::slice::from_ref(&x), -7));
    assert!(!field_contains_sqrt(&[x], -3));
    assert!(!field_contains_sqrt(&[Cyclotomic::from_integer(2)], -7));
}
