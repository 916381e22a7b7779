//! Class fusions from subgroup tables into an ambient table, with and
//! without prescribed entries.
//!
//! ```text
//! cargo run --example class_fusions
//! ```

use chartab::fusion::{possible_class_fusions, Entry, FusionOptions};
use chartab::oracle::{parse_generators, OracleGroup, DEFAULT_LIMIT};
use chartab::{ClassData, ParaMap};

fn one_based(m: &[usize]) -> Vec<usize> {
    m.iter().map(|x| x + 1).collect()
}

fn main() {
    let g = OracleGroup::from_cycle_string("(1,2,3,4,5);(1,2)", DEFAULT_LIMIT).unwrap();
    let s5 = g.character_table("S5").unwrap();
    for (gens, id) in [("(1,2,3,4,5);(1,2,3)", "A5"), ("(1,2,3,4);(1,2)", "S4"), ("(1,2,3,4,5);(2,5)(3,4)", "D10")] {
        let h = g.subgroup(&parse_generators(gens).unwrap()).unwrap();
        let t = h.character_table(id).unwrap();
        let truth = g.fusion_of(&h);
        let all = possible_class_fusions(&t, &s5, &FusionOptions::default());
        println!("{id} -> S5: {} fusion(s), true one {:?} found: {}", all.len(), one_based(&truth), all.contains(&truth));
        for m in &all {
            println!("  {:?}", one_based(m));
        }
        let mut pre = ParaMap::unbound(t.class_count());
        pre.set(1, Entry::Fixed(truth[1]));
        let opts = FusionOptions { prescribed: Some(pre.clone()), ..Default::default() };
        println!("  with class 2 prescribed {}: {}", pre.to_json(), possible_class_fusions(&t, &s5, &opts).len());
    }
}
