mod common;

use std::time::{Duration, Instant};

use chartab::classfun::{induced_cyclic, norm, reduce, CyclicMode};
use chartab::lattice::{integral_membership, lll_reduce, CharacterLattice};
use chartab::{CharacterTable, ClassData, ClassFunction};
use common::{same_set, table};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

/// Irreducibles found by reduce and LLL alone, and the final pool left.
pub fn reduce_and_lll(t: &CharacterTable) -> (Vec<ClassFunction>, Vec<ClassFunction>) {
    let all: Vec<usize> = (0..t.class_count()).collect();
    let mut pool = induced_cyclic(t, &all, CyclicMode::All).unwrap();
    let mut known = vec![t.trivial_character()];
    loop {
        let before = known.len();
        let r = reduce(t, &known, &pool).unwrap();
        known.extend(r.irreducibles);
        let l = lll_reduce(t, &r.remainders).unwrap();
        known.extend(l.irreducibles);
        let r = reduce(t, &known, &l.remainders).unwrap();
        known.extend(r.irreducibles);
        pool = r.remainders;
        if known.len() == before || pool.is_empty() {
            return (known, pool);
        }
    }
}

fn recover(name: &str) -> (usize, usize) {
    let truth = table(name);
    let all: Vec<usize> = (0..truth.class_count()).collect();
    let mut seed = vec![truth.trivial_character()];
    seed.extend(induced_cyclic(&truth, &all, CyclicMode::All).unwrap());
    for chi in &truth.irreducibles {
        assert!(integral_membership(&truth, &seed, chi).unwrap().is_some(), "{name}: {chi:?}");
    }
    let (mut known, pool) = reduce_and_lll(&truth);
    let by_reduction = known.len();
    let mut span = known.clone();
    span.extend(pool.iter().cloned());
    for chi in &truth.irreducibles {
        if !known.contains(chi) {
            assert!(integral_membership(&truth, &span, chi).unwrap().is_some(), "{name}: {chi:?} not in the lattice");
            known.push(chi.clone());
        }
    }
    assert!(known.iter().all(|c| norm(&truth, c).unwrap().is_one() && c.degree().unwrap() > BigInt::from(0)));
    assert!(same_set(&known, &truth.irreducibles), "{name}");
    (by_reduction, known.len())
}

#[test]
fn recovers_irreducibles_from_induced_cyclic_characters() {
    let start = Instant::now();
    for name in ["S5", "A6", "L3(2)", "A5", "S4"] {
        let (a, b) = recover(name);
        println!("{name}: {a} by reduction and LLL, {b} in total");
    }
    assert!(start.elapsed() < Duration::from_secs(30), "{:?}", start.elapsed());
}

#[test]
fn lattice_rank_and_membership() {
    let t = table("A5");
    let lat = CharacterLattice::new(&t, &t.irreducibles).unwrap();
    assert_eq!(lat.rank(), 5);
    let chi = t.irreducibles[1].add(&t.irreducibles[3].scale_int(&BigInt::from(-2)));
    let c = lat.solve(&t, &chi).unwrap().unwrap();
    let back = c.iter().zip(lat.basis()).fold(ClassFunction::zero(5), |acc, (k, b)| acc.add(&b.scale_int(k)));
    assert_eq!(back, chi);
    let half = t.irreducibles[4].scale(&common::rat(1, 2));
    assert!(integral_membership(&t, &t.irreducibles, &half).unwrap().is_none());
}

proptest! {
    #![proptest_config(common::proptest_config(24))]

    /// LLL on integer combinations of irreducibles keeps the lattice and
    /// only returns norm-1 vectors as irreducibles.
    #[test]
    fn lll_preserves_the_lattice(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 5), 1..5)) {
        let t = table("A5");
        let chars: Vec<ClassFunction> = rows
            .iter()
            .map(|r| r.iter().zip(&t.irreducibles).fold(ClassFunction::zero(5), |a, (&k, x)| a.add(&x.scale_int(&BigInt::from(k)))))
            .collect();
        let red = lll_reduce(&t, &chars).unwrap();
        for x in &red.irreducibles {
            prop_assert!(t.irreducibles.contains(x));
        }
        let mut out = red.irreducibles.clone();
        out.extend(red.remainders.iter().cloned());
        for c in &chars {
            prop_assert!(integral_membership(&t, &out, c).unwrap().is_some());
        }
        let sizes = t.class_sizes();
        prop_assert_eq!(sizes.iter().sum::<num_bigint::BigUint>(), t.order.clone());
    }
}
