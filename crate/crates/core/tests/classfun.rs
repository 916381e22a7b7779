mod common;

use chartab::classfun::{
    complete_rational_character, decompose, induced_cyclic, inner_product, norm, reduce, scalar_product, CyclicMode,
};
use chartab::{ClassData, ClassFunction};
use common::{table, GROUPS};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

#[test]
fn completion_is_sound_and_orthogonality_fills_the_last_value() {
    for (name, _) in GROUPS {
        let t = table(name);
        for chi in t.irreducibles.iter().skip(1).filter(|c| c.is_rational()) {
            let truth = chi.to_integers().unwrap();
            for hole in 1..t.class_count() {
                let mut partial: Vec<Option<BigInt>> = truth.iter().cloned().map(Some).collect();
                partial[hole] = None;
                let c = complete_rational_character(&t, &partial, false).unwrap();
                if let Some(v) = &c.values[hole] {
                    assert_eq!(v, &truth[hole], "{name}, class {hole}");
                }
                let c = complete_rational_character(&t, &partial, true).unwrap();
                assert_eq!(c.values[hole].as_ref(), Some(&truth[hole]), "{name}, class {hole}");
                assert!(c.unresolved.is_empty());
            }
        }
    }
}

#[test]
fn reduce_splits_off_known_constituents() {
    let t = table("S5");
    let irr = &t.irreducibles;
    let mixed = irr[1].add(&irr[2]).add(&irr[2]);
    let r = reduce(&t, &irr[..2], &[mixed, irr[3].add(&irr[0])]).unwrap();
    assert!(r.irreducibles.contains(&irr[3]));
    assert!(r.remainders.iter().all(|x| norm(&t, x).unwrap() > One::one()));
    let m = decompose(&t, irr, &r.remainders[0]).unwrap();
    assert_eq!(m.iter().filter(|x| !x.is_integer() || **x != num_rational::BigRational::from_integer(0.into())).count(), 1);
}

#[test]
fn induced_cyclic_characters_are_characters() {
    for (name, _) in GROUPS {
        let t = table(name);
        let all: Vec<usize> = (0..t.class_count()).collect();
        let lin = induced_cyclic(&t, &all, CyclicMode::LinearOnly).unwrap();
        let full = induced_cyclic(&t, &all, CyclicMode::All).unwrap();
        assert!(lin.len() <= full.len());
        for chi in &full {
            let m = decompose(&t, &t.irreducibles, chi).unwrap();
            assert!(m.iter().all(|x| x.is_integer() && *x >= num_rational::BigRational::from_integer(0.into())));
        }
        // the regular character is induced from the identity
        assert_eq!(full[0][0].to_integer().unwrap(), BigInt::from(t.order.clone()));
    }
}

proptest! {
    #![proptest_config(common::proptest_config(64))]

    #[test]
    fn inner_product_is_hermitian_and_bilinear(k in 0usize..GROUPS.len(), a in prop::collection::vec(-3i64..=3, 14), b in prop::collection::vec(-3i64..=3, 14)) {
        let t = table(GROUPS[k].0);
        let n = t.class_count();
        let comb = |c: &[i64]| t.irreducibles.iter().zip(c).fold(ClassFunction::zero(n), |s, (x, &k)| s.add(&x.scale_int(&BigInt::from(k))));
        let (x, y) = (comb(&a), comb(&b));
        let xy = inner_product(&t, &x, &y).unwrap();
        prop_assert_eq!(xy.complex_conjugate(), inner_product(&t, &y, &x).unwrap());
        let expect: i64 = a.iter().zip(&b).take(n).map(|(p, q)| p * q).sum();
        prop_assert_eq!(xy.to_integer(), Some(BigInt::from(expect)));
        prop_assert_eq!(scalar_product(&t, &x, &x).unwrap(), num_rational::BigRational::from_integer(a.iter().take(n).map(|v| v * v).sum::<i64>().into()));
        prop_assert_eq!(common::raw_inner(&t, &x, &y), xy);
        prop_assert_eq!(t.class_sizes().len(), n);
    }
}
