//! Irreducibles of A6 from induced cyclic characters: reduction by known
//! irreducibles, LLL reduction of the rest, membership in the lattice.
//!
//! ```text
//! cargo run --example lattice_irreducibles
//! ```

use chartab::classfun::{induced_cyclic, norm, reduce, CyclicMode};
use chartab::lattice::{integral_membership, lll_reduce};
use chartab::oracle::{OracleGroup, DEFAULT_LIMIT};
use chartab::ClassData;

fn main() {
    let g = OracleGroup::from_cycle_string("(1,2,3,4,5);(4,5,6)", DEFAULT_LIMIT).unwrap();
    let t = g.character_table("A6").unwrap();
    let all: Vec<usize> = (0..t.class_count()).collect();
    let cands = induced_cyclic(&t, &all, CyclicMode::All).unwrap();
    println!("{} induced cyclic characters", cands.len());

    let mut known = vec![t.trivial_character()];
    let r = reduce(&t, &known, &cands).unwrap();
    println!("reduce: {} irreducible(s), {} remainder(s)", r.irreducibles.len(), r.remainders.len());
    known.extend(r.irreducibles);
    let l = lll_reduce(&t, &r.remainders).unwrap();
    println!("lll:    {} irreducible(s), {} remainder(s)", l.irreducibles.len(), l.remainders.len());
    known.extend(l.irreducibles);
    let r = reduce(&t, &known, &l.remainders).unwrap();
    known.extend(r.irreducibles);
    println!("again:  {} known, {} remainder(s)", known.len(), r.remainders.len());

    let mut span = vec![t.trivial_character()];
    span.extend(cands.iter().cloned());
    for chi in &t.irreducibles {
        let coords = integral_membership(&t, &span, chi).unwrap();
        println!(
            "  {chi}  norm {}  recovered {}  in the lattice {}",
            norm(&t, chi).unwrap(),
            known.contains(chi),
            coords.is_some()
        );
    }
}
