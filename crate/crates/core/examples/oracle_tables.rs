//! Computes character tables of a few permutation groups from generators
//! and checks them against the structural invariants.
//!
//! ```text
//! cargo run --example oracle_tables
//! ```

use std::time::Instant;

use chartab::oracle::{OracleGroup, DEFAULT_LIMIT};
use chartab::ClassData;

const GROUPS: &[(&str, &str)] = &[
    ("S3", "(1,2,3);(1,2)"),
    ("D8", "(1,2,3,4);(1,3)"),
    ("Q8", "(1,2,3,4)(5,6,7,8);(1,5,3,7)(2,8,4,6)"),
    ("A5", "(1,2,3,4,5);(1,2,3)"),
    ("F21", "(1,2,3,4,5,6,7);(2,3,5)(4,7,6)"),
    ("L3(2)", "(1,2,3,4,5,6,7);(2,3)(4,7)"),
    ("A6", "(1,2,3,4,5);(4,5,6)"),
    ("M11", "(1,2,3,4,5,6,7,8,9,10,11);(3,7,11,8)(4,10,5,6)"),
];

fn main() {
    for (name, gens) in GROUPS {
        let start = Instant::now();
        let g = OracleGroup::from_cycle_string(gens, DEFAULT_LIMIT).expect("generators");
        let t = g.character_table(name).expect("table");
        let degrees: Vec<String> = t.irreducibles.iter().map(|c| c.degree().unwrap().to_string()).collect();
        println!(
            "{name}: order {}, {} classes, degrees [{}], violations {}, {:.2?}",
            t.order,
            t.class_count(),
            degrees.join(", "),
            t.validate().len(),
            start.elapsed()
        );
    }
    let a5 = OracleGroup::from_cycle_string("(1,2,3,4,5);(1,2,3)", DEFAULT_LIMIT).unwrap();
    let t = a5.character_table("A5").unwrap();
    println!("\nA5 irreducibles:");
    for chi in &t.irreducibles {
        let vals: Vec<String> = chi.iter().map(|v| v.to_string()).collect();
        println!("  [ {} ]", vals.join(", "));
    }
}
