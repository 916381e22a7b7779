mod common;

use chartab::classfun::{induce_by_fusion, pull_back};
use chartab::headbuilder::{
    candidate_products, monster_order, normal_sylow_check, perm_char_centralizer, sylow_normalizer_orders, ClassSource,
    TableHead, MONSTER_ORDER,
};
use chartab::numtheory::{divisors, factorization_string};
use chartab::oracle::parse_generators;
use chartab::ClassData;
use common::group;
use num_bigint::BigUint;
use proptest::prelude::*;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn nums(v: &[BigUint]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

const MONSTER_FACTORS: &[(u64, u32)] =
    &[(2, 46), (3, 20), (5, 9), (7, 6), (11, 2), (13, 3), (17, 1), (19, 1), (23, 1), (29, 1), (31, 1), (41, 1), (47, 1), (59, 1), (71, 1)];

#[test]
fn monster_order_and_factorization() {
    let product: BigUint = MONSTER_FACTORS.iter().map(|&(p, e)| big(p).pow(e)).product();
    assert_eq!(product, monster_order());
    assert_eq!(MONSTER_ORDER.parse::<BigUint>().unwrap(), product);
    assert_eq!(
        factorization_string(&monster_order(), "·"),
        "2^46·3^20·5^9·7^6·11^2·13^3·17·19·23·29·31·41·47·59·71"
    );
}

#[test]
fn sylow_normalizer_candidates() {
    let m = monster_order();
    let pool = candidate_products(&big(3 * 29), &[(7, 6), (41, 1), (59, 1), (71, 1)]);
    assert_eq!(nums(&sylow_normalizer_orders(&m, 29, 28, pool)), ["87", "5133"]);

    let pool = divisors(&big(2 * 5 * 7u64.pow(6) * 59 * 71)).into_iter().map(|d| big(4 * 41) * d);
    assert_eq!(nums(&sylow_normalizer_orders(&m, 41, 1, pool)), ["1640", "163016"]);

    let pool = divisors(&big(58 * 7u64.pow(6) * 71)).into_iter().map(|d| big(59) * d);
    assert_eq!(nums(&sylow_normalizer_orders(&m, 59, 1, pool)), ["1711"]);

    let pool = divisors(&big(70 * 7u64.pow(5))).into_iter().map(|d| big(71) * d);
    assert_eq!(nums(&sylow_normalizer_orders(&m, 71, 1, pool)), ["2485"]);

    assert_eq!(nums(&normal_sylow_check(&big(5133), 59)), ["1"]);
    assert_eq!(nums(&normal_sylow_check(&big(163016), 71)), ["1"]);
}

#[test]
fn head_of_a5_from_subgroups() {
    let g = group("A5");
    let a4 = g.subgroup(&parse_generators("(1,2,3);(2,3,4)").unwrap()).unwrap();
    let d10 = g.subgroup(&parse_generators("(1,2,3,4,5);(2,5)(3,4)").unwrap()).unwrap();
    let ta4 = a4.character_table("A4").unwrap();
    let td10 = d10.character_table("D10").unwrap();
    let ta5 = g.character_table("A5").unwrap();

    // (1_A4)^A5 restricted to A4
    let fus = g.fusion_of(&a4);
    let pi = pull_back(&induce_by_fusion(&ta4, &ta5, &[ta4.trivial_character()], &fus).unwrap()[0], &fus).unwrap();

    let mut h = TableHead::new(big(60));
    let inv = ta4.positions_of_order(2);
    assert_eq!(perm_char_centralizer(&ta4, &pi, &inv).unwrap(), big(4));
    let c = h.extend_by_perm_char_value(&ta4, &pi, &inv).unwrap();
    assert_eq!(c, big(4));
    h.extend_by_perm_char_value(&ta4, &pi, &ta4.positions_of_order(3)).unwrap();
    assert!(!h.class_equation_holds());
    let fives = td10.positions_of_order(5);
    assert_eq!(h.extend_by_root_classes(&td10, fives[0]).unwrap(), 1);
    assert_eq!(h.extend_by_root_classes(&td10, fives[1]).unwrap(), 1);
    assert!(h.class_equation_holds());
    assert!(h.fusion_violations().is_empty());
    assert_eq!(h.log[0], "#I after order 2 element from A4: have 2 classes");
    assert_eq!(h.log[2], "#I after D10: found 1 classes, now have 4");

    let t = h.finalize("A5").unwrap();
    let mut mine: Vec<_> = t.orders.iter().zip(&t.centralizers).collect();
    let mut truth: Vec<_> = ta5.orders.iter().zip(&ta5.centralizers).collect();
    mine.sort();
    truth.sort();
    assert_eq!(mine, truth);

    let mut h2 = TableHead::new(big(60));
    h2.extend_by_centralizer_order(ClassSource::Order(2), big(4), &[]).unwrap();
    assert!(h2.finalize("x").is_err());
}

proptest! {
    #![proptest_config(common::proptest_config(64))]

    #[test]
    fn candidate_products_are_complete(e in prop::collection::vec(0u32..4, 3), base in 1u64..50) {
        let parts: Vec<(u64, u32)> = [101u64, 103, 107].iter().copied().zip(e.iter().copied()).collect();
        let out = candidate_products(&big(base), &parts);
        let count: u32 = e.iter().map(|x| x + 1).product();
        prop_assert_eq!(out.len() as u32, count);
        prop_assert!(out.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(out.iter().all(|x| x % big(base) == big(0)));
    }

    #[test]
    fn sylow_filter_matches_the_congruence(n in 2u64..5000, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let order = big(n);
        let got = sylow_normalizer_orders(&order, p, 1, divisors(&order));
        let want: Vec<BigUint> = (1..=n).filter(|x| n % x == 0 && (n / x) % p == 1).map(big).collect();
        prop_assert_eq!(got, want);
        let ns = normal_sylow_check(&order, p);
        prop_assert!(ns.iter().all(|d| &order % d == big(0) && d % big(p) == big(1)));
    }
}

#[test]
fn class_data_of_direct_products() {
    let s3 = common::table("S3");
    let c2 = common::table("C2");
    let t = chartab::CharacterTable::direct_product(&s3, &c2);
    assert_eq!(t.class_count(), 6);
    assert_eq!(t.orders, vec![1, 2, 2, 2, 3, 6]);
    assert!(t.validate().is_empty());
    assert_eq!(t.class_sizes().iter().sum::<BigUint>(), big(12));
}
