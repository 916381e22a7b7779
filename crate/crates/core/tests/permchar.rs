mod common;

use chartab::oracle::{parse_generators, OracleGroup, DEFAULT_LIMIT};
use chartab::permchar::{check_perm_char_conditions, perm_chars_with_torso, trivial_induction_candidates};
use chartab::{ClassData, ClassFunction};
use num_bigint::BigInt;

#[test]
fn torso_search_finds_the_complement_character() {
    // A5 x 2 with the central involution (6,7)
    let g = OracleGroup::from_cycle_string("(1,2,3,4,5);(1,2,3);(6,7)", DEFAULT_LIMIT).unwrap();
    let t = g.character_table("A5x2").unwrap();
    let z = g.class_of_perm(&parse_generators("(6,7)").unwrap()[0]).unwrap();
    assert_eq!(t.centralizers[z], t.order);

    let with_z = g.subgroup(&parse_generators("(1,2,3);(2,3,4);(6,7)").unwrap()).unwrap();
    let pi0 = ClassFunction::from_bigints(&g.permutation_character(&with_z));
    let a4 = g.subgroup(&parse_generators("(1,2,3);(2,3,4)").unwrap()).unwrap();
    let truth = ClassFunction::from_bigints(&g.permutation_character(&a4));

    let torso = [Some(BigInt::from(10)), Some(BigInt::from(0))];
    let found = perm_chars_with_torso(&t, &torso, &[0, z], &pi0).unwrap();
    assert!(found.contains(&truth), "{truth:?} not among {found:?}");
    for pi in &found {
        assert_eq!(pi[0].to_integer(), Some(BigInt::from(10)));
        assert!(pi[z].is_zero());
        assert!(check_perm_char_conditions(&t, pi).passes());
    }
    assert!(perm_chars_with_torso(&t, &torso, &[0, 1], &pi0).is_err() || t.centralizers[1] == t.order);
}

#[test]
fn point_stabilizer_characters_pass_the_conditions() {
    for (name, gens) in common::GROUPS {
        let g = OracleGroup::from_cycle_string(gens, DEFAULT_LIMIT).unwrap();
        let t = g.character_table(name).unwrap();
        let pi = ClassFunction::from_bigints(&g.permutation_character(&g.subgroup(&[]).unwrap()));
        assert_eq!(pi[0].to_integer(), Some(BigInt::from(g.order())));
        assert!(check_perm_char_conditions(&t, &pi).passes(), "{name}");
        assert!(check_perm_char_conditions(&t, &t.trivial_character()).passes(), "{name}");
    }
}

#[test]
fn non_characters_are_rejected() {
    let t = common::table("A5");
    let bad = ClassFunction::from_integers([4, 0, 1, -1, -1]);
    assert!(!check_perm_char_conditions(&t, &bad).passes());
    let neg = ClassFunction::from_integers([5, -1, 2, 0, 0]);
    assert!(!check_perm_char_conditions(&t, &neg).passes());
    let d10 = ClassFunction::from_integers([6, 2, 0, 1, 1]);
    assert!(check_perm_char_conditions(&t, &d10).passes());
}

#[test]
fn induced_candidates_contain_the_true_one() {
    let g = common::group("A5");
    let h = g.subgroup(&parse_generators("(1,2,3);(2,3,4)").unwrap()).unwrap();
    let ta4 = h.character_table("A4").unwrap();
    let ta5 = g.character_table("A5").unwrap();
    let truth = ClassFunction::from_bigints(&g.permutation_character(&h));
    let cands = trivial_induction_candidates(&ta4, &ta5, true).unwrap();
    assert_eq!(cands, vec![truth]);
    assert_eq!(ta5.class_count(), 5);
}
