//! Parametrized class maps and the solvers for class fusions.

mod paramap;
mod search;

use std::collections::BTreeMap;


use num_traits::Zero;
use thiserror::Error;

use crate::cyclo::Cyclotomic;
use crate::table::ClassData;

pub use paramap::{EmptyEntry, Entry, ParaMap};
pub use search::{possible_class_fusions, verify_fusion, FusionOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FusionError {
    #[error("no candidate image for subgroup class {0}")]
    EmptyCandidates(usize),
    #[error("fusion problem: prescribed entry for class {0} conflicts with the initialized map")]
    Conflict(usize),
    #[error("map entry {0} is unbound")]
    Unbound(usize),
    #[error("maps have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("position {0} out of range")]
    OutOfRange(usize),
}

/// Candidates for each subgroup class: ambient classes of equal element
/// order whose centralizer order is divisible by the subgroup's.
pub fn init_fusion<S: ClassData + ?Sized, A: ClassData + ?Sized>(sub: &S, amb: &A) -> Result<ParaMap, FusionError> {
    let mut out = Vec::with_capacity(sub.class_count());
    for i in 0..sub.class_count() {
        let o = sub.element_orders()[i];
        let c = &sub.centralizer_orders()[i];
        let cand: Vec<usize> = (0..amb.class_count())
            .filter(|&j| amb.element_orders()[j] == o && (&amb.centralizer_orders()[j] % c).is_zero())
            .collect();
        out.push(Entry::from_candidates(cand).ok_or(FusionError::EmptyCandidates(i))?);
    }
    Ok(ParaMap(out))
}

/// Intersects `map` with a prescribed partial map; a prescribed entry not
/// among the candidates is a conflict.
pub fn merge_prescribed(map: &mut ParaMap, prescribed: &ParaMap) -> Result<bool, FusionError> {
    if map.len() != prescribed.len() {
        return Err(FusionError::LengthMismatch(map.len(), prescribed.len()));
    }
    map.intersect(prescribed).map_err(|EmptyEntry(i)| FusionError::Conflict(i))
}

/// `outer ∘ inner`; a set entry of `inner` yields the union of the images.
pub fn composition_map(outer: &ParaMap, inner: &ParaMap) -> Result<ParaMap, FusionError> {
    let mut out = Vec::with_capacity(inner.len());
    for (i, e) in inner.entries().iter().enumerate() {
        let c = e.candidates().ok_or(FusionError::Unbound(i))?;
        let mut img = Vec::new();
        for &j in c {
            if j >= outer.len() {
                return Err(FusionError::OutOfRange(j));
            }
            img.extend_from_slice(outer.entry(j).candidates().ok_or(FusionError::Unbound(j))?);
        }
        out.push(Entry::from_candidates(img).ok_or(FusionError::Unbound(i))?);
    }
    Ok(ParaMap(out))
}

/// Values composed with a parametrized map: each position gets the sorted
/// set of attained values.
pub fn compose_values(values: &[Cyclotomic], map: &ParaMap) -> Result<Vec<Vec<Cyclotomic>>, FusionError> {
    map.entries()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let c = e.candidates().ok_or(FusionError::Unbound(i))?;
            let mut vals = Vec::with_capacity(c.len());
            for &j in c {
                vals.push(values.get(j).cloned().ok_or(FusionError::OutOfRange(j))?);
            }
            vals.sort();
            vals.dedup();
            Ok(vals)
        })
        .collect()
}

/// Positions refined by [`transfer_diagram`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Improvements {
    pub between: Vec<usize>,
    pub inside2: Vec<usize>,
}

impl Improvements {
    pub fn is_empty(&self) -> bool {
        self.between.is_empty() && self.inside2.is_empty()
    }
}

/// Inconsistency found by a propagation step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransferFailure {
    Between(usize),
    Inside2(usize),
}

/// Enforces `between ∘ inside1 = inside2 ∘ between` by shrinking candidate
/// sets of `between` and `inside2` until nothing changes. Only fixed
/// entries of `inside1` contribute.
pub fn transfer_diagram(
    inside1: &ParaMap,
    between: &mut ParaMap,
    inside2: &mut ParaMap,
) -> Result<Improvements, TransferFailure> {
    let mut imp = Improvements::default();
    loop {
        let mut changed = false;
        for i in 0..inside1.len() {
            let Some(i1) = inside1.entry(i).fixed() else { continue };
            let Some(bi) = between.entry(i).candidates().map(<[usize]>::to_vec) else { continue };
            let target = between.entry(i1).candidates().map(<[usize]>::to_vec);
            // between(i1) ⊆ ⋃_{b ∈ between(i)} inside2(b)
            let mut union: Option<Vec<usize>> = Some(Vec::new());
            for &b in &bi {
                match inside2.entry(b).candidates() {
                    Some(c) => union.as_mut().unwrap().extend_from_slice(c),
                    None => {
                        union = None;
                        break;
                    }
                }
            }
            if let Some(u) = union {
                match between.restrict(i1, &u) {
                    Ok(true) => {
                        changed = true;
                        imp.between.push(i1);
                    }
                    Ok(false) => {}
                    Err(_) => return Err(TransferFailure::Between(i1)),
                }
            }
            // between(i) ⊆ { b : inside2(b) meets between(i1) }
            if let Some(t) = &target {
                let t: Vec<usize> = between.entry(i1).candidates().map(<[usize]>::to_vec).unwrap_or_else(|| t.clone());
                let keep: Vec<usize> = bi
                    .iter()
                    .copied()
                    .filter(|&b| inside2.entry(b).candidates().is_none_or(|c| c.iter().any(|x| t.contains(x))))
                    .collect();
                match between.restrict(i, &keep) {
                    Ok(true) => {
                        changed = true;
                        imp.between.push(i);
                    }
                    Ok(false) => {}
                    Err(_) => return Err(TransferFailure::Between(i)),
                }
                // a fixed between(i) = b pins inside2(b) into between(i1)
                if let Some(b) = between.entry(i).fixed() {
                    match inside2.restrict(b, &t) {
                        Ok(true) => {
                            changed = true;
                            imp.inside2.push(b);
                        }
                        Ok(false) => {}
                        Err(_) => return Err(TransferFailure::Inside2(b)),
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    imp.between.sort_unstable();
    imp.between.dedup();
    imp.inside2.sort_unstable();
    imp.inside2.dedup();
    Ok(imp)
}

/// Transfer diagram with a fixed subgroup power map.
pub fn transfer_diagram_fixed(
    sub_power_map: &[usize],
    fusion: &mut ParaMap,
    amb_power_map: &mut ParaMap,
) -> Result<Improvements, TransferFailure> {
    transfer_diagram(&ParaMap::from_fixed(sub_power_map), fusion, amb_power_map)
}

/// Two power maps of one table commute; refines both against each other.
pub fn transfer_commuting(a: &mut ParaMap, b: &mut ParaMap) -> Result<bool, TransferFailure> {
    let mut any = false;
    loop {
        let snap_b = b.clone();
        let mut b2 = b.clone();
        let ia = transfer_diagram(&snap_b, a, &mut b2)?;
        b.intersect(&b2).map_err(|EmptyEntry(i)| TransferFailure::Inside2(i))?;
        let snap_a = a.clone();
        let mut a2 = a.clone();
        let ib = transfer_diagram(&snap_a, b, &mut a2)?;
        a.intersect(&a2).map_err(|EmptyEntry(i)| TransferFailure::Inside2(i))?;
        if ia.is_empty() && ib.is_empty() && a2 == *a && b2 == *b {
            break;
        }
        any = true;
    }
    Ok(any)
}

/// Iterates [`transfer_diagram`] over every prime with maps on both sides
/// until nothing changes; false iff some entry becomes empty.
pub fn test_consistency_maps(
    sub_maps: &BTreeMap<u64, Vec<usize>>,
    fusion: &mut ParaMap,
    amb_maps: &mut BTreeMap<u64, ParaMap>,
) -> bool {
    loop {
        let mut changed = false;
        for (p, sp) in sub_maps {
            let Some(ap) = amb_maps.get_mut(p) else { continue };
            match transfer_diagram_fixed(sp, fusion, ap) {
                Ok(imp) => changed |= !imp.is_empty(),
                Err(_) => return false,
            }
        }
        if !changed {
            return true;
        }
    }
}

/// Whether the fixed map `fusion` satisfies every power-map diagram.
pub fn commutes_with_power_maps(
    sub_maps: &BTreeMap<u64, Vec<usize>>,
    fusion: &[usize],
    amb_maps: &BTreeMap<u64, Vec<usize>>,
) -> bool {
    sub_maps.iter().all(|(p, sp)| {
        amb_maps.get(p).is_none_or(|ap| (0..fusion.len()).all(|i| fusion[sp[i]] == ap[fusion[i]]))
    })
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_diagram_no_change() {
        let id = ParaMap::identity(4);
        let mut b = ParaMap::identity(4);
        let mut c = ParaMap::identity(4);
        assert!(transfer_diagram(&id, &mut b, &mut c).unwrap().is_empty());
    }

    #[test]
    fn composition_set_entry() {
        let outer = ParaMap::from_fixed(&[0, 2, 2, 1]);
        let inner = ParaMap(vec![Entry::Set(vec![0, 3]), Entry::Fixed(1)]);
        let c = composition_map(&outer, &inner).unwrap();
        assert_eq!(c, ParaMap(vec![Entry::Set(vec![0, 1]), Entry::Fixed(2)]));
    }
}
