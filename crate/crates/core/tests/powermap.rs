mod common;

use std::collections::BTreeMap;

use chartab::numtheory::primes_up_to;
use chartab::oracle::parse_generators;
use chartab::powermap::{
    fixed_maps, indeterminateness_report, init_power_map, power_map, refine_by_commuting, refine_by_congruences,
    refine_by_fusions,
};
use chartab::{CharacterTable, ClassData, ParaMap};
use common::{group, table, GROUPS};

fn init_all(t: &CharacterTable) -> BTreeMap<u64, ParaMap> {
    let max = *t.orders.iter().max().unwrap();
    primes_up_to(max).into_iter().map(|p| (p, init_power_map(t, p).unwrap())).collect()
}

fn strip(t: &CharacterTable) -> CharacterTable {
    let mut h = t.clone();
    h.power_maps.clear();
    h.irreducibles.clear();
    h
}

#[test]
fn initial_maps_admit_the_true_maps() {
    for (name, _) in GROUPS {
        let t = table(name);
        for (p, m) in init_all(&strip(&t)) {
            assert!(m.admits(&t.power_maps[&p]), "{name}, p = {p}");
        }
    }
}

#[test]
fn subgroup_fusions_determine_the_a5_maps() {
    let g = group("A5");
    let truth = g.character_table("A5").unwrap();
    let head = strip(&truth);
    let mut subs = Vec::new();
    let mut fus = Vec::new();
    for (gens, id) in [("(1,2,3);(2,3,4)", "A4"), ("(1,2,3,4,5);(2,5)(3,4)", "D10")] {
        let h = g.subgroup(&parse_generators(gens).unwrap()).unwrap();
        fus.push(ParaMap::from_fixed(&g.fusion_of(&h)));
        subs.push(h.character_table(id).unwrap());
    }
    let mut maps = init_all(&head);
    let before: Vec<_> = indeterminateness_report(&maps);
    assert!(before.iter().any(|(_, x)| x != "1"));
    let refs: Vec<&CharacterTable> = subs.iter().collect();
    let rounds = refine_by_fusions(&mut maps, &refs, &mut fus).unwrap();
    assert!(rounds >= 1);
    let fixed = fixed_maps(&maps).unwrap();
    for (p, m) in &fixed {
        assert_eq!(m, &truth.power_maps[p], "p = {p}");
    }
}

#[test]
fn congruences_cut_down_candidates() {
    for (name, _) in GROUPS {
        let t = table(name);
        let head = strip(&t);
        for (p, mut m) in init_all(&head) {
            refine_by_congruences(&head, p, &mut m, &t.irreducibles).unwrap();
            assert!(m.admits(&t.power_maps[&p]), "{name}, p = {p}");
        }
    }
}

#[test]
fn commuting_maps_stay_consistent() {
    let t = table("L3(2)");
    let mut maps = init_all(&strip(&t));
    refine_by_commuting(&mut maps, 2, 3).unwrap();
    refine_by_commuting(&mut maps, 3, 2).unwrap();
    for (p, m) in &maps {
        assert!(m.admits(&t.power_maps[p]), "p = {p}");
    }
}

#[test]
fn composite_power_maps() {
    let t = table("A6");
    let m6 = power_map(&t, 6).unwrap();
    let m2 = &t.power_maps[&2];
    let m3 = &t.power_maps[&3];
    for i in 0..t.class_count() {
        assert_eq!(m6[i], m3[m2[i]]);
        assert_eq!(t.orders[m6[i]], t.orders[i] / num_integer::gcd(t.orders[i], 6));
    }
    assert_eq!(t.element_orders().len(), 7);
}
