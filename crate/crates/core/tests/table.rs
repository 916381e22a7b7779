mod common;

use std::collections::BTreeMap;

use chartab::fusion::{possible_class_fusions, FusionOptions};
use chartab::oracle::parse_generators;
use chartab::pipeline::sha256_hex;
use chartab::table::{is_table_automorphism, parse_cycles, transforming_permutations, NormalSelector};
use chartab::{CharacterTable, ClassData, ClassFunction, ParaMap};
use common::{data_dir, group, table, GROUPS};
use proptest::prelude::*;

#[test]
fn bundled_tables_match_their_checksums() {
    let sums = std::fs::read_to_string(data_dir().join("SHA256SUMS")).unwrap();
    let mut seen = 0;
    for line in sums.lines() {
        let (digest, file) = line.split_once("  ").unwrap();
        let bytes = std::fs::read(data_dir().join(file)).unwrap();
        assert_eq!(sha256_hex(&bytes), digest, "{file}");
        let t = CharacterTable::read_file(data_dir().join(file)).unwrap();
        assert!(t.validate().is_empty(), "{file}");
        assert!(t.has_complete_irreducibles(), "{file}");
        seen += 1;
    }
    assert_eq!(seen, 6);
}

#[test]
fn bundled_tables_agree_with_the_oracle() {
    for (file, name) in [("A5.tbl", "A5"), ("S4.tbl", "S4"), ("S5.tbl", "S5"), ("A6.tbl", "A6"), ("L3_2.tbl", "L3(2)"), ("F21.tbl", "7:3")] {
        let stored = CharacterTable::read_file(data_dir().join(file)).unwrap();
        let fresh = table(name);
        assert!(transforming_permutations(&stored, &fresh).unwrap().is_some(), "{file}");
    }
}

#[test]
fn json_roundtrip() {
    for (name, _) in GROUPS {
        let mut t = table(name);
        t.fusions.push(chartab::table::FusionRecord { sub: "1".into(), map: ParaMap::from_fixed(&[0]) });
        let back = CharacterTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t, "{name}");
    }
    let bad = serde_json::json!({"id": "x", "order": 2, "centralizers": [2], "orders": [1], "powerMaps": {"2": [0]}});
    assert!(CharacterTable::from_json(&bad).is_err());
}

#[test]
fn complex_conjugation_is_an_automorphism() {
    let t = table("A5");
    let fives = t.positions_of_order(5);
    let mut perm: Vec<usize> = (0..5).collect();
    perm.swap(fives[0], fives[1]);
    assert!(is_table_automorphism(&t, &perm).unwrap());
    let cyc = format!("({},{})", fives[0] + 1, fives[1] + 1);
    assert_eq!(parse_cycles(&cyc, 5).unwrap(), perm);
    let mut bad: Vec<usize> = (0..5).collect();
    bad.swap(1, 2);
    assert!(!is_table_automorphism(&t, &bad).unwrap());
}

#[test]
fn factor_tables_and_normal_subgroups() {
    let s4 = table("S4");
    let normal = s4.normal_subgroups(NormalSelector::All).unwrap();
    let sizes: Vec<u64> = normal.iter().map(|n| s4.element_count(n).try_into().unwrap()).collect();
    assert_eq!(sizes, vec![1, 4, 12, 24]);
    let v4 = s4.normal_subgroups(NormalSelector::PCore(2)).unwrap().remove(0);
    let (s3, map) = s4.factor_table(&v4).unwrap();
    assert!(s3.validate().is_empty());
    assert!(transforming_permutations(&s3, &table("S3")).unwrap().is_some());
    for chi in &s3.irreducibles {
        let infl = chartab::classfun::pull_back(chi, &map).unwrap();
        assert!(s4.irreducibles.contains(&infl));
    }
    let q8 = table("Q8");
    let z = q8.normal_subgroups(NormalSelector::Centre).unwrap().remove(0);
    assert_eq!(z.len(), 2);
    assert_eq!(q8.kernel(&q8.irreducibles[1]).len(), 3);
}

#[test]
fn prescribed_entries_and_restricting_characters() {
    let g = group("S5");
    let h = g.subgroup(&parse_generators("(1,2,3,4,5);(1,2,3)").unwrap()).unwrap();
    let (ta5, ts5, truth) = (h.character_table("A5").unwrap(), g.character_table("S5").unwrap(), g.fusion_of(&h));
    let all = possible_class_fusions(&ta5, &ts5, &FusionOptions::default());
    assert!(all.contains(&truth));
    let mut pre = ParaMap::unbound(ta5.class_count());
    for i in 0..3 {
        pre.set(i, chartab::fusion::Entry::Fixed(truth[i]));
    }
    let opts = FusionOptions { prescribed: Some(pre), chars: Some(ts5.irreducibles[..2].to_vec()), limit: None };
    let some = possible_class_fusions(&ta5, &ts5, &opts);
    assert!(some.contains(&truth));
    assert!(some.iter().all(|m| m[..3] == truth[..3]));
    let one = possible_class_fusions(&ta5, &ts5, &FusionOptions { limit: Some(1), ..Default::default() });
    assert_eq!(one.len(), 1);
}

#[test]
fn paramaps_serialize_one_based() {
    let mut m = ParaMap::unbound(3);
    m.set(0, chartab::fusion::Entry::Fixed(0));
    m.restrict(1, &[1, 2]).unwrap();
    let j = m.to_json();
    assert_eq!(ParaMap::from_json(&j).unwrap(), m);
    assert_eq!(m.indeterminateness(), None);
    m.restrict(2, &[2]).unwrap();
    assert_eq!(m.indeterminateness(), Some(2u32.into()));
}

fn shuffle(n: usize, seed: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for (i, s) in seed.iter().enumerate().take(n.saturating_sub(1)) {
        let j = i + s % (n - i);
        p.swap(i, j);
    }
    p
}

proptest! {
    #![proptest_config(common::proptest_config(32))]

    #[test]
    fn equivalence_survives_class_permutations(k in 0usize..GROUPS.len(), seed in prop::collection::vec(0usize..100, 12)) {
        let t = table(GROUPS[k].0);
        let n = t.class_count();
        let mut perm = shuffle(n, &seed);
        let pos = perm.iter().position(|&x| x == 0).unwrap();
        perm.swap(0, pos);
        let u = t.permute_classes(&perm);
        prop_assert!(u.validate().is_empty());
        let tp = transforming_permutations(&t, &u).unwrap().expect("equivalent");
        let mut rows: BTreeMap<&ClassFunction, ()> = BTreeMap::new();
        for chi in &u.irreducibles {
            rows.insert(chi, ());
        }
        for chi in &t.irreducibles {
            let mut moved = vec![chartab::Cyclotomic::zero(); n];
            for i in 0..n {
                moved[tp.columns[i]] = chi[i].clone();
                prop_assert_eq!(t.orders[i], u.orders[tp.columns[i]]);
            }
            prop_assert!(rows.contains_key(&ClassFunction::new(moved)));
        }
    }
}
