use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{init_fusion, merge_prescribed, test_consistency_maps, Entry, ParaMap};
use crate::classfun::{self, ClassFunction};
use crate::cyclo::Cyclotomic;
use crate::table::{CharacterTable, ClassData};

/// Options for [`possible_class_fusions`].
#[derive(Clone, Debug, Default)]
pub struct FusionOptions {
    /// Partial map the result must refine.
    pub prescribed: Option<ParaMap>,
    /// Characters of the ambient table whose restrictions must decompose;
    /// `None` means all irreducibles of the ambient table.
    pub chars: Option<Vec<ClassFunction>>,
    /// Stop after this many fusions.
    pub limit: Option<usize>,
}

struct Ctx<'a> {
    sub: &'a CharacterTable,
    amb: &'a CharacterTable,
    chars: Vec<ClassFunction>,
    sub_conj: Vec<ClassFunction>,
    sub_weights: Vec<BigRational>,
    amb_maps: BTreeMap<u64, ParaMap>,
    limit: Option<usize>,
    found: Vec<Vec<usize>>,
}

impl Ctx<'_> {
    /// Rule (b): every scalar product of a pulled-back character with a
    /// subgroup irreducible must be able to be a nonnegative integer.
    fn restrictions_possible(&self, map: &ParaMap) -> bool {
        for theta in &self.chars {
            for psi in &self.sub_conj {
                let mut exact = Cyclotomic::zero();
                let mut lo = BigRational::zero();
                let mut hi = BigRational::zero();
                let mut bounded = true;
                let mut varying = false;
                for (i, e) in map.entries().iter().enumerate() {
                    let c = e.candidates().expect("search maps are bound");
                    let w = &self.sub_weights[i];
                    let first = &theta[c[0]];
                    if c.iter().all(|&j| theta[j] == *first) {
                        exact += &(first * &psi[i]).scale(w);
                        continue;
                    }
                    varying = true;
                    if !bounded {
                        continue;
                    }
                    let Some(p) = psi[i].to_rational() else {
                        bounded = false;
                        continue;
                    };
                    let vals: Option<Vec<BigRational>> =
                        c.iter().map(|&j| theta[j].to_rational().map(|v| v * &p * w)).collect();
                    match vals {
                        Some(v) => {
                            lo += v.iter().min().unwrap();
                            hi += v.iter().max().unwrap();
                        }
                        None => bounded = false,
                    }
                }
                if !varying {
                    // determined: exact must be a nonnegative integer
                    match exact.to_rational() {
                        Some(q) if q.is_integer() && !q.is_negative() => {}
                        Some(_) => return false,
                        None => return false,
                    }
                    continue;
                }
                if !bounded {
                    continue;
                }
                let Some(base) = exact.to_rational() else { continue };
                let lo = &base + lo;
                let hi = &base + hi;
                let top = hi.floor();
                let bottom = lo.ceil().max(BigRational::zero());
                if top < bottom {
                    return false;
                }
            }
        }
        true
    }

    /// Rule (c): the induced trivial character is bounded by the index on
    /// every class and integral where no open entry can still add to it.
    fn induced_trivial_possible(&self, map: &ParaMap) -> bool {
        let n = self.amb.class_count();
        let mut fixed_sum = vec![BigRational::zero(); n];
        let mut open = vec![false; n];
        for (i, e) in map.entries().iter().enumerate() {
            match e {
                Entry::Fixed(j) => fixed_sum[*j] += &self.sub_weights[i],
                _ => {
                    for &j in e.candidates().unwrap() {
                        open[j] = true;
                    }
                }
            }
        }
        let index = BigRational::new(
            BigInt::from(self.amb.order.clone()),
            BigInt::from(self.sub.order.clone()),
        );
        for j in 0..n {
            if fixed_sum[j].is_zero() {
                continue;
            }
            let pi = &fixed_sum[j] * BigRational::from_integer(BigInt::from(self.amb.centralizers[j].clone()));
            if pi > index {
                return false;
            }
            if !open[j] && !pi.is_integer() {
                return false;
            }
        }
        true
    }

    fn search(&mut self, mut map: ParaMap) {
        if self.limit.is_some_and(|l| self.found.len() >= l) {
            return;
        }
        let mut amb_maps = self.amb_maps.clone();
        if !test_consistency_maps(&self.sub.power_maps, &mut map, &mut amb_maps) {
            return;
        }
        if !self.restrictions_possible(&map) || !self.induced_trivial_possible(&map) {
            return;
        }
        if let Some(fixed) = map.to_fixed() {
            if verify_fusion(self.sub, self.amb, &fixed, &self.chars) {
                self.found.push(fixed);
            }
            return;
        }
        let pos = map
            .open_positions()
            .into_iter()
            .min_by_key(|&i| (map.entry(i).size().unwrap_or(usize::MAX), i))
            .expect("map not fixed");
        let cands = map.entry(pos).candidates().unwrap().to_vec();
        for j in cands {
            let mut next = map.clone();
            next.set(pos, Entry::Fixed(j));
            self.search(next);
        }
    }
}

/// All fixed class fusions from `sub` into `amb` compatible with element
/// orders, centralizers, power maps, the prescribed map and the
/// decomposition conditions. Sorted and deduplicated.
pub fn possible_class_fusions(sub: &CharacterTable, amb: &CharacterTable, opts: &FusionOptions) -> Vec<Vec<usize>> {
    let Ok(mut map) = init_fusion(sub, amb) else {
        return Vec::new();
    };
    if let Some(pre) = &opts.prescribed {
        if merge_prescribed(&mut map, pre).is_err() {
            return Vec::new();
        }
    }
    let chars = opts.chars.clone().unwrap_or_else(|| amb.irreducibles.clone());
    let sub_weights = sub
        .centralizers
        .iter()
        .map(|c| BigRational::new(1.into(), BigInt::from(c.clone())))
        .collect();
    let sub_conj = sub.irreducibles.iter().map(ClassFunction::complex_conjugate).collect();
    let amb_maps = amb.power_maps.iter().map(|(&p, m)| (p, ParaMap::from_fixed(m))).collect();
    let mut ctx = Ctx { sub, amb, chars, sub_conj, sub_weights, amb_maps, limit: opts.limit, found: Vec::new() };
    ctx.search(map);
    let mut found = ctx.found;
    found.sort();
    found.dedup();
    found
}

/// Independent re-check of a fixed fusion: element orders, centralizer
/// divisibility, power-map commutativity, nonnegative integral
/// decomposition of the restricted characters, and integrality of the
/// induced trivial character.
pub fn verify_fusion(sub: &CharacterTable, amb: &CharacterTable, map: &[usize], chars: &[ClassFunction]) -> bool {
    if classfun::check_fusion_map(sub, amb, map).is_err() {
        return false;
    }
    if !super::commutes_with_power_maps(&sub.power_maps, map, &amb.power_maps) {
        return false;
    }
    if !sub.irreducibles.is_empty() {
        for theta in chars {
            let Ok(res) = classfun::pull_back(theta, map) else { return false };
            match classfun::decomposes_nonnegatively(sub, &sub.irreducibles, &res) {
                Ok(true) => {}
                _ => return false,
            }
        }
    }
    let Ok(pi) = classfun::induce_by_fusion(sub, amb, &[sub.trivial_character()], map) else {
        return false;
    };
    let index = BigInt::from(&amb.order / &sub.order);
    pi[0].iter().all(|v| v.to_integer().is_some_and(|x| !x.is_negative() && x <= index))
}
