//! Completing a rational character from a few known values: congruences
//! with power maps, the centralizer bound, and orthogonality to the
//! trivial character.
//!
//! ```text
//! cargo run --example character_completion
//! ```

use chartab::classfun::complete_rational_character;
use chartab::oracle::{OracleGroup, DEFAULT_LIMIT};
use num_bigint::BigInt;

fn main() {
    let g = OracleGroup::from_cycle_string("(1,2,3,4,5);(4,5,6)", DEFAULT_LIMIT).unwrap();
    let t = g.character_table("A6").unwrap();
    let chi = t.irreducibles.iter().rev().find(|c| c.is_rational()).unwrap();
    let truth = chi.to_integers().unwrap();
    println!("orders {:?}", t.orders);
    println!("truth  {truth:?}");

    let mut partial: Vec<Option<BigInt>> = truth.iter().cloned().map(Some).collect();
    for (i, o) in t.orders.iter().enumerate() {
        if *o > 3 {
            partial[i] = None;
        }
    }
    let c = complete_rational_character(&t, &partial, true).unwrap();
    for line in &c.log {
        println!("  {line}");
    }
    let vals: Vec<String> = c.values.iter().map(|v| v.as_ref().map_or("?".into(), ToString::to_string)).collect();
    println!("result [{}]", vals.join(", "));
    println!("unresolved classes {:?}", c.unresolved.iter().map(|x| x + 1).collect::<Vec<_>>());
}
