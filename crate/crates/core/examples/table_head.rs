//! A table head for A5 built from subgroup data: root classes, values of a
//! permutation character, and the class equation as the stopping test.
//!
//! ```text
//! cargo run --example table_head
//! ```

use chartab::classfun::{induce_by_fusion, pull_back};
use chartab::headbuilder::TableHead;
use chartab::numtheory::factorization_string;
use chartab::oracle::{parse_generators, OracleGroup, DEFAULT_LIMIT};
use num_bigint::BigUint;

fn main() {
    let g = OracleGroup::from_cycle_string("(1,2,3,4,5);(1,2,3)", DEFAULT_LIMIT).unwrap();
    let a5 = g.character_table("A5").unwrap();
    let a4g = g.subgroup(&parse_generators("(1,2,3);(2,3,4)").unwrap()).unwrap();
    let d10g = g.subgroup(&parse_generators("(1,2,3,4,5);(2,5)(3,4)").unwrap()).unwrap();
    let a4 = a4g.character_table("A4").unwrap();
    let d10 = d10g.character_table("D10").unwrap();

    let fus = g.fusion_of(&a4g);
    let pi = pull_back(&induce_by_fusion(&a4, &a5, &[a4.trivial_character()], &fus).unwrap()[0], &fus).unwrap();
    println!("(1_A4)^A5 on A4 = {pi}");

    let order = BigUint::from(60u32);
    println!("|G| = {}", factorization_string(&order, "*"));
    let mut h = TableHead::new(order);
    h.extend_by_perm_char_value(&a4, &pi, &[1]).unwrap();
    h.extend_by_perm_char_value(&a4, &pi, &[2, 3]).unwrap();
    for pos in [3, 4] {
        h.extend_by_root_classes(&d10, pos - 1).unwrap();
    }
    for line in &h.log {
        println!("{line}");
    }
    println!("class equation holds: {}", h.class_equation_holds());
    let t = h.finalize("A5").unwrap();
    println!("orders       {:?}", t.orders);
    println!("centralizers {:?}", t.centralizers.iter().map(ToString::to_string).collect::<Vec<_>>());
}
