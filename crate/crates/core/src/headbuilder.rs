//! Incremental construction of a table head (centralizer orders, element
//! orders, partial fusions) from subgroup data, with an audit log.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::classfun::ClassFunction;
use crate::fusion::{Entry, ParaMap};
use crate::numtheory::{is_prime, smallest_prime_divisor};
use crate::powermap::power_class;
use crate::table::{CharacterTable, ClassData, FusionRecord};

pub use crate::numtheory::divisors_congruent_one;

/// `|M| = 2^46 3^20 5^9 7^6 11^2 13^3 17 19 23 29 31 41 47 59 71`.
pub const MONSTER_ORDER: &str = "808017424794512875886459904961710757005754368000000000";

pub fn monster_order() -> BigUint {
    BigUint::from_str(MONSTER_ORDER).expect("valid literal")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeadError {
    #[error("class {pos} of {sub} does not have prime element order")]
    NotPrimeOrder { sub: String, pos: usize },
    #[error("power maps of {0} are incomplete")]
    IncompletePowerMaps(String),
    #[error("classes cannot fuse")]
    ClassesCannotFuse,
    #[error("class {0} is out of range")]
    OutOfRange(usize),
    #[error("centralizer order {0} is not an integer")]
    NonIntegralCentralizer(BigRational),
    #[error("class equation fails: class lengths sum to {sum}, group order is {order}")]
    ClassEquation { sum: BigRational, order: BigUint },
    #[error("fusion from {sub}: {detail}")]
    InconsistentFusion { sub: String, detail: String },
}

/// A partial fusion stored in a head, with the class data of the subgroup
/// needed to check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadFusion {
    pub record: FusionRecord,
    pub orders: Vec<u64>,
    pub centralizers: Vec<BigUint>,
}

/// Where a new class comes from in [`TableHead::extend_by_centralizer_order`].
#[derive(Clone, Copy, Debug)]
pub enum ClassSource<'a> {
    Table(&'a CharacterTable),
    Order(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableHead {
    pub order: BigUint,
    pub centralizers: Vec<BigUint>,
    pub orders: Vec<u64>,
    pub fusions: Vec<HeadFusion>,
    pub log: Vec<String>,
}

impl ClassData for TableHead {
    fn group_order(&self) -> &BigUint {
        &self.order
    }
    fn centralizer_orders(&self) -> &[BigUint] {
        &self.centralizers
    }
    fn element_orders(&self) -> &[u64] {
        &self.orders
    }
    fn prime_power_map(&self, _p: u64) -> Option<&[usize]> {
        None
    }
}

impl TableHead {
    /// A head with only the identity class.
    pub fn new(order: BigUint) -> Self {
        TableHead { centralizers: vec![order.clone()], order, orders: vec![1], fusions: Vec::new(), log: Vec::new() }
    }

    pub fn class_count(&self) -> usize {
        self.orders.len()
    }

    fn push_class(&mut self, cent: BigUint, ord: u64) -> usize {
        self.centralizers.push(cent);
        self.orders.push(ord);
        self.orders.len() - 1
    }

    fn fusion_index(&mut self, sub: &CharacterTable) -> usize {
        if let Some(k) = self.fusions.iter().position(|f| f.record.sub == sub.id) {
            return k;
        }
        let mut map = ParaMap::unbound(sub.class_count());
        map.set(0, Entry::Fixed(0));
        self.fusions.push(HeadFusion {
            record: FusionRecord { sub: sub.id.clone(), map },
            orders: sub.orders.clone(),
            centralizers: sub.centralizers.clone(),
        });
        self.fusions.len() - 1
    }

    /// Appends a free-form audit line, e.g. an assumption or a choice.
    pub fn note(&mut self, line: impl Into<String>) {
        self.log.push(line.into());
    }

    /// Adds the classes of `sub` whose elements are roots of class `pos`
    /// (of prime order `p`) and have no prime divisor smaller than `p`.
    pub fn extend_by_root_classes(&mut self, sub: &CharacterTable, pos: usize) -> Result<usize, HeadError> {
        let p = *sub.orders.get(pos).ok_or(HeadError::OutOfRange(pos))?;
        if !is_prime(p) {
            return Err(HeadError::NotPrimeOrder { sub: sub.id.clone(), pos });
        }
        let mut map = ParaMap::unbound(sub.class_count());
        map.set(0, Entry::Fixed(0));
        let old = self.class_count();
        for i in 0..sub.class_count() {
            let ord = sub.orders[i];
            if !ord.is_multiple_of(p) || smallest_prime_divisor(ord) != Some(p) {
                continue;
            }
            let img = power_class(sub, i, ord / p).ok_or_else(|| HeadError::IncompletePowerMaps(sub.id.clone()))?;
            if img == pos {
                let k = self.push_class(sub.centralizers[i].clone(), ord);
                map.set(i, Entry::Fixed(k));
            }
        }
        self.fusions.push(HeadFusion {
            record: FusionRecord { sub: sub.id.clone(), map },
            orders: sub.orders.clone(),
            centralizers: sub.centralizers.clone(),
        });
        let found = self.class_count() - old;
        self.log.push(format!("#I after {}: found {found} classes, now have {}", sub.id, self.class_count()));
        Ok(found)
    }

    /// Appends one class with centralizer order `cent`. With a table as
    /// source, the classes `positions` of it are recorded as fusing into it.
    pub fn extend_by_centralizer_order(
        &mut self,
        source: ClassSource<'_>,
        cent: BigUint,
        positions: &[usize],
    ) -> Result<(), HeadError> {
        match source {
            ClassSource::Order(ord) => {
                self.push_class(cent, ord);
                self.log.push(format!("#I after order {ord} element: have {} classes", self.class_count()));
            }
            ClassSource::Table(sub) => {
                let mut ords: Vec<u64> = positions
                    .iter()
                    .map(|&i| sub.orders.get(i).copied().ok_or(HeadError::OutOfRange(i)))
                    .collect::<Result<_, _>>()?;
                ords.sort_unstable();
                ords.dedup();
                let [ord] = ords[..] else { return Err(HeadError::ClassesCannotFuse) };
                let k = self.push_class(cent, ord);
                let f = self.fusion_index(sub);
                for &i in positions {
                    self.fusions[f].record.map.set(i, Entry::Fixed(k));
                }
                self.log.push(format!("#I after order {ord} element from {}: have {} classes", sub.id, self.class_count()));
            }
        }
        Ok(())
    }

    /// `|C_G(g)| = π(g)·|H| / |g^G ∩ H|` for the classes `positions` of `H`
    /// that fuse into the new class, `π = (1_H^G)_H`.
    pub fn extend_by_perm_char_value(
        &mut self,
        sub: &CharacterTable,
        pi: &ClassFunction,
        positions: &[usize],
    ) -> Result<BigUint, HeadError> {
        let cent = perm_char_centralizer(sub, pi, positions)?;
        self.extend_by_centralizer_order(ClassSource::Table(sub), cent.clone(), positions)?;
        Ok(cent)
    }

    /// Element-order and centralizer-divisibility violations of the stored
    /// fusions.
    pub fn fusion_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for f in &self.fusions {
            for (i, e) in f.record.map.entries().iter().enumerate() {
                let Some(j) = e.fixed() else { continue };
                if j >= self.class_count() {
                    out.push(format!("{}: class {} maps outside the head", f.record.sub, i + 1));
                } else if f.orders[i] != self.orders[j] {
                    out.push(format!("{}: class {} has order {}, image has {}", f.record.sub, i + 1, f.orders[i], self.orders[j]));
                } else if !(&self.centralizers[j] % &f.centralizers[i]).is_zero() {
                    out.push(format!("{}: centralizer of class {} does not divide its image's", f.record.sub, i + 1));
                }
            }
        }
        out
    }

    pub fn class_length_sum(&self) -> BigRational {
        let o = BigInt::from(self.order.clone());
        self.centralizers.iter().map(|c| BigRational::new(o.clone(), BigInt::from(c.clone()))).sum()
    }

    pub fn class_equation_holds(&self) -> bool {
        self.class_length_sum() == BigRational::from_integer(BigInt::from(self.order.clone()))
    }

    /// Whether two heads agree on class data and on every fusion map,
    /// irrespective of the subgroup tables' names.
    pub fn same_class_data(&self, other: &TableHead) -> bool {
        self.order == other.order
            && self.centralizers == other.centralizers
            && self.orders == other.orders
            && self.fusions.len() == other.fusions.len()
            && self.fusions.iter().zip(&other.fusions).all(|(a, b)| a.record.map == b.record.map)
    }

    /// Freezes the head into a table without irreducibles or power maps.
    pub fn finalize(&self, id: &str) -> Result<CharacterTable, HeadError> {
        if !self.class_equation_holds() {
            return Err(HeadError::ClassEquation { sum: self.class_length_sum(), order: self.order.clone() });
        }
        if let Some(v) = self.fusion_violations().into_iter().next() {
            let sub = v.split(':').next().unwrap_or_default().to_string();
            return Err(HeadError::InconsistentFusion { sub, detail: v });
        }
        let mut t = CharacterTable::new(id, self.order.clone(), self.centralizers.clone(), self.orders.clone());
        t.fusions = self.fusions.iter().map(|f| f.record.clone()).collect();
        Ok(t)
    }
}

/// The centralizer order determined by a permutation character value.
pub fn perm_char_centralizer(sub: &CharacterTable, pi: &ClassFunction, positions: &[usize]) -> Result<BigUint, HeadError> {
    let mut vals: Vec<_> = positions
        .iter()
        .map(|&i| pi.get(i).cloned().ok_or(HeadError::OutOfRange(i)))
        .collect::<Result<_, _>>()?;
    vals.sort();
    vals.dedup();
    let [val] = &vals[..] else { return Err(HeadError::ClassesCannotFuse) };
    let val = val.to_rational().ok_or(HeadError::ClassesCannotFuse)?;
    let sizes = sub.class_sizes();
    let total: BigUint = positions.iter().map(|&i| &sizes[i]).sum();
    let cent = val * BigRational::from_integer(BigInt::from(sub.order.clone())) / BigRational::from_integer(BigInt::from(total));
    if !cent.is_integer() || cent <= BigRational::zero() {
        return Err(HeadError::NonIntegralCentralizer(cent));
    }
    Ok(cent.to_integer().to_biguint().expect("positive"))
}

/// All products `base · Π q_i^{e_i}` with `0 <= e_i <= max_i`, ascending.
pub fn candidate_products(base: &BigUint, parts: &[(u64, u32)]) -> Vec<BigUint> {
    let mut out = vec![base.clone()];
    for &(q, e) in parts {
        let q = BigUint::from(q);
        out = out
            .iter()
            .flat_map(|x| {
                let mut v = Vec::with_capacity(e as usize + 1);
                let mut y = x.clone();
                v.push(y.clone());
                for _ in 0..e {
                    y *= &q;
                    v.push(y.clone());
                }
                v
            })
            .collect();
    }
    out.sort();
    out.dedup();
    out
}

/// The candidates `x` (dividing `|G|/index`) with `|G| / (index·x) ≡ 1 mod
/// p`, ascending: the orders compatible with the Sylow congruence when
/// `index·x` is the order of a Sylow `p`-normalizer.
pub fn sylow_normalizer_orders(
    group_order: &BigUint,
    p: u64,
    index: u64,
    candidates: impl IntoIterator<Item = BigUint>,
) -> Vec<BigUint> {
    let p = BigUint::from(p);
    let mut out: Vec<BigUint> = candidates
        .into_iter()
        .filter(|x| {
            let n = x * BigUint::from(index);
            !n.is_zero() && (group_order % &n).is_zero() && (group_order / &n) % &p == BigUint::one()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Divisors of `n` congruent to 1 modulo `q`; `[1]` alone means a normal
/// Sylow `q`-subgroup is forced in a group of order `n`.
pub fn normal_sylow_check(n: &BigUint, q: u64) -> Vec<BigUint> {
    divisors_congruent_one(n, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn sylow_29() {
        let m = monster_order();
        let pool = candidate_products(&big(87), &[(7, 6), (41, 1), (59, 1), (71, 1)]);
        assert_eq!(sylow_normalizer_orders(&m, 29, 28, pool), vec![big(87), big(5133)]);
        assert_eq!(normal_sylow_check(&big(5133), 59), vec![big(1)]);
    }

    #[test]
    fn trivial_head_and_missing_class() {
        let mut h = TableHead::new(big(2));
        assert!(h.finalize("x").is_err());
        h.extend_by_centralizer_order(ClassSource::Order(2), big(2), &[]).unwrap();
        assert_eq!(h.log, vec!["#I after order 2 element: have 2 classes"]);
        assert_eq!(h.finalize("C2").unwrap().class_count(), 2);
        assert!(TableHead::new(big(1)).finalize("1").is_ok());
    }
}
