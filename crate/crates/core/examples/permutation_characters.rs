//! Permutation characters of 2 x A4: the induced trivial character of a
//! Klein four subgroup avoiding the centre, recovered by the torso search
//! from the character induced from its product with the centre.
//!
//! ```text
//! cargo run --example permutation_characters
//! ```

use chartab::oracle::{parse_generators, OracleGroup, DEFAULT_LIMIT};
use chartab::permchar::{check_perm_char_conditions, perm_chars_with_torso, trivial_induction_candidates};
use chartab::table::NormalSelector;
use chartab::ClassFunction;

fn main() {
    let g = OracleGroup::from_cycle_string("(1,2,3);(1,2)(3,4);(5,6)", DEFAULT_LIMIT).unwrap();
    let t = g.character_table("2xA4").unwrap();
    let u = g.subgroup(&parse_generators("(1,2)(3,4)(5,6);(1,3)(2,4)(5,6)").unwrap()).unwrap();
    let uz = g.subgroup(&parse_generators("(1,2)(3,4);(1,3)(2,4);(5,6)").unwrap()).unwrap();

    let pi = ClassFunction::from_bigints(&g.permutation_character(&u));
    let pi0 = ClassFunction::from_bigints(&g.permutation_character(&uz));
    println!("1_U^G        = {pi}");
    println!("1_(UZ)^G     = {pi0}");
    println!("conditions   : {} violations", check_perm_char_conditions(&t, &pi).violations.len());

    let centre = t.normal_subgroups(NormalSelector::Centre).unwrap().remove(0);
    println!("centre       = {:?}", centre.iter().map(|c| c + 1).collect::<Vec<_>>());
    let found = perm_chars_with_torso(&t, &[], &centre, &pi0).unwrap();
    println!("torso search : {} solution(s)", found.len());
    for chi in &found {
        println!("  {chi}  matches 1_U^G: {}", *chi == pi);
    }

    let ut = u.character_table("U").unwrap();
    let cands = trivial_induction_candidates(&ut, &t, false).unwrap();
    println!("induced trivial characters over all fusions of U: {}", cands.len());
    for chi in &cands {
        println!("  {chi}  kernel {:?}", t.kernel(chi).iter().map(|c| c + 1).collect::<Vec<_>>());
    }
    let faithful = trivial_induction_candidates(&ut, &t, true).unwrap();
    println!("with trivial kernel: {}", faithful.len());
}
