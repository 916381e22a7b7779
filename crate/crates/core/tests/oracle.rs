mod common;

use chartab::classfun::{decompose, induce_by_fusion, pull_back, symmetrize2, tensor};
use chartab::fusion::{possible_class_fusions, FusionOptions};
use chartab::oracle::parse_generators;
use chartab::powermap::power_class;
use chartab::{CharacterTable, ClassData, ClassFunction, Cyclotomic};
use common::{group, raw_inner, table, GROUPS};
use num_bigint::BigInt;
use num_traits::Signed;

/// (ambient, subgroup generators, subgroup name)
const PAIRS: &[(&str, &str, &str)] = &[
    ("S4", "(1,2,3);(2,3,4)", "A4"),
    ("S4", "(1,2,3,4);(1,3)", "D8"),
    ("S4", "(1,2,3);(1,2)", "S3"),
    ("S5", "(1,2,3,4,5);(1,2,3)", "A5"),
    ("S5", "(1,2,3,4);(1,2)", "S4"),
    ("A5", "(1,2,3);(2,3,4)", "A4"),
    ("A5", "(1,2,3,4,5);(2,5)(3,4)", "D10"),
    ("A6", "(1,2,3,4,5);(1,2,3)", "A5"),
    ("L3(2)", "(1,2,3,4,5,6,7);(2,3,5)(4,7,6)", "7:3"),
    ("Q8", "(1,2,3,4)(5,6,7,8)", "C4"),
];

fn sub_pair(amb: &str, gens: &str, name: &str) -> (CharacterTable, CharacterTable, Vec<usize>) {
    let g = group(amb);
    let h = g.subgroup(&parse_generators(gens).unwrap()).unwrap();
    (h.character_table(name).unwrap(), g.character_table(amb).unwrap(), g.fusion_of(&h))
}

#[test]
fn suite_covers_the_required_shapes() {
    assert!(GROUPS.len() >= 8);
    let tables: Vec<CharacterTable> = GROUPS.iter().map(|(n, _)| table(n)).collect();
    assert!(tables.iter().all(|t| t.order <= 2000u32.into()));
    let nonabelian = tables.iter().filter(|t| t.class_count() < t.order.to_string().parse::<usize>().unwrap()).count();
    let irrational = tables.iter().filter(|t| t.irreducibles.iter().any(|c| !c.is_rational())).count();
    assert!(nonabelian >= 8 && irrational >= 3);
    // D8 and Q8: same centralizers and degrees, told apart by element orders
    let (d8, q8) = (table("D8"), table("Q8"));
    let mut c = (d8.centralizers.clone(), q8.centralizers.clone());
    c.0.sort();
    c.1.sort();
    assert_eq!(c.0, c.1);
    assert_eq!(d8.irreducibles.iter().map(|x| x.degree()).collect::<Vec<_>>(), q8.irreducibles.iter().map(|x| x.degree()).collect::<Vec<_>>());
    assert_eq!(d8.positions_of_order(4).len(), 1);
    assert_eq!(q8.positions_of_order(4).len(), 3);
    assert!(chartab::table::transforming_permutations(&d8, &q8).unwrap().is_none());
}

#[test]
fn orthogonality_relations() {
    for (name, _) in GROUPS {
        let t = table(name);
        let n = t.class_count();
        assert_eq!(t.irreducibles.len(), n, "{name}");
        for (i, a) in t.irreducibles.iter().enumerate() {
            for (j, b) in t.irreducibles.iter().enumerate() {
                let expect = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                assert_eq!(raw_inner(&t, a, b), expect, "{name}: rows {i}, {j}");
            }
        }
        for x in 0..n {
            for y in 0..n {
                let s: Cyclotomic = t.irreducibles.iter().map(|c| &c[x] * &c[y].complex_conjugate()).sum();
                let expect = if x == y { Cyclotomic::from_integer(BigInt::from(t.centralizers[x].clone())) } else { Cyclotomic::zero() };
                assert_eq!(s, expect, "{name}: columns {x}, {y}");
            }
        }
        assert!(t.validate().is_empty(), "{name}: {:?}", t.validate());
    }
}

#[test]
fn frobenius_reciprocity() {
    for &(amb, gens, name) in PAIRS {
        let (h, g, map) = sub_pair(amb, gens, name);
        let ind = induce_by_fusion(&h, &g, &h.irreducibles, &map).unwrap();
        for (psi, psi_g) in h.irreducibles.iter().zip(&ind) {
            for chi in &g.irreducibles {
                let res = pull_back(chi, &map).unwrap();
                assert_eq!(raw_inner(&g, psi_g, chi), raw_inner(&h, psi, &res), "{name} < {amb}");
            }
        }
    }
}

#[test]
fn induced_trivial_matches_point_counts() {
    for &(amb, gens, name) in PAIRS {
        let g = group(amb);
        let hg = g.subgroup(&parse_generators(gens).unwrap()).unwrap();
        let (h, gt, map) = sub_pair(amb, gens, name);
        let ind = induce_by_fusion(&h, &gt, &[h.trivial_character()], &map).unwrap();
        assert_eq!(ind[0], ClassFunction::from_bigints(&g.permutation_character(&hg)), "{name} < {amb}");
    }
}

#[test]
fn symmetric_and_antisymmetric_squares() {
    for (name, _) in GROUPS {
        let t = table(name);
        for chi in &t.irreducibles {
            let (sym, alt) = symmetrize2(&t, chi).unwrap();
            assert_eq!(sym.add(&alt), tensor(chi, chi).unwrap(), "{name}");
            for i in 0..t.class_count() {
                let sq = &chi[power_class(&t, i, 2).unwrap()];
                let half = common::rat(1, 2);
                assert_eq!(sym[i], (&(&chi[i] * &chi[i]) + sq).scale(&half));
            }
            for part in [&sym, &alt] {
                let m = decompose(&t, &t.irreducibles, part).unwrap();
                assert!(m.iter().all(|x| x.is_integer() && !x.is_negative()), "{name}: {m:?}");
            }
        }
    }
}

#[test]
fn fusion_search_contains_the_true_fusion() {
    let mut hits = 0;
    for &(amb, gens, name) in PAIRS {
        let (h, g, map) = sub_pair(amb, gens, name);
        let found = possible_class_fusions(&h, &g, &FusionOptions::default());
        assert!(found.contains(&map), "{name} < {amb}: {map:?} not among {found:?}");
        hits += 1;
    }
    assert!(hits >= 5);
}

#[test]
fn tensor_products_decompose() {
    let t = table("A5");
    for a in &t.irreducibles {
        for b in &t.irreducibles {
            let m = decompose(&t, &t.irreducibles, &tensor(a, b).unwrap()).unwrap();
            assert!(m.iter().all(|x| x.is_integer() && !x.is_negative()));
        }
    }
    assert_eq!(t.centralizer_orders().len(), 5);
}
