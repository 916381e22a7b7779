//! Power maps of a table head determined from subgroup fusions: the head
//! of L3(2) from its Sylow normalizers 7:3 and S4.
//!
//! ```text
//! cargo run --example power_maps
//! ```

use std::collections::BTreeMap;

use chartab::oracle::{parse_generators, OracleGroup, DEFAULT_LIMIT};
use chartab::powermap::{indeterminateness_report, init_power_map, refine_by_fusions};
use chartab::{CharacterTable, ParaMap};

fn main() {
    let g = OracleGroup::from_cycle_string("(1,2,3,4,5,6,7);(2,3)(4,7)", DEFAULT_LIMIT).unwrap();
    let truth = g.character_table("L3(2)").unwrap();
    let head = CharacterTable::new("L3(2)", truth.order.clone(), truth.centralizers.clone(), truth.orders.clone());

    let mut maps: BTreeMap<u64, ParaMap> = [2, 3, 7].iter().map(|&p| (p, init_power_map(&head, p).unwrap())).collect();
    println!("from orders and centralizers alone:");
    for (p, ind) in indeterminateness_report(&maps) {
        println!("  p = {p}: indeterminateness {ind}, {}", maps[&p].to_json());
    }

    let mut subs = Vec::new();
    let mut fus = Vec::new();
    for (gens, id) in [("(1,2,3,4,5,6,7);(2,3,5)(4,7,6)", "7:3"), ("(2,3)(4,7);(2,4)(3,7);(3,5)(6,7)", "S4")] {
        let Ok(h) = g.subgroup(&parse_generators(gens).unwrap()) else {
            println!("{id}: generators not in the group");
            continue;
        };
        fus.push(ParaMap::from_fixed(&g.fusion_of(&h)));
        subs.push(h.character_table(id).unwrap());
    }
    let refs: Vec<&CharacterTable> = subs.iter().collect();
    let rounds = refine_by_fusions(&mut maps, &refs, &mut fus).unwrap();
    println!("after {rounds} round(s) with {} subgroup fusion(s):", refs.len());
    for (p, ind) in indeterminateness_report(&maps) {
        let ok = maps[&p].admits(&truth.power_maps[&p]);
        println!("  p = {p}: indeterminateness {ind}, {}, admits the true map: {ok}", maps[&p].to_json());
    }
}
