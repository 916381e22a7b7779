//! Character tables of small permutation groups by brute force: element
//! enumeration, conjugacy classes, class multiplication coefficients, and
//! Dixon's method over a prime field with cyclotomic lifting.
//!
//! Used to produce trusted fixtures for the rest of the crate.

mod dixon;
mod perm;

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use thiserror::Error;

use crate::classfun::ClassFunction;
use crate::cyclo::{normalize, Cyclotomic};
use crate::table::CharacterTable;

pub use perm::{parse_generators, Perm};

pub const DEFAULT_LIMIT: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("group order exceeds the limit of {0}")]
    TooLarge(usize),
    #[error("invalid generators: {0}")]
    InvalidGenerators(String),
    #[error("class matrices did not split over GF({0})")]
    NoSplit(u64),
    #[error("lifting failed for a character over GF({0})")]
    Lift(u64),
}

/// A permutation group with its elements and conjugacy classes.
#[derive(Clone, Debug)]
pub struct OracleGroup {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    /// Element indices per class; classes sorted by (element order, minimal element).
    pub classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    pub orders: Vec<u64>,
}

impl OracleGroup {
    pub fn from_generators(gens: &[Perm], limit: usize) -> Result<Self, OracleError> {
        let degree = gens.iter().map(Perm::degree).max().unwrap_or(1).max(1);
        let gens: Vec<Perm> = gens.iter().map(|g| g.extend(degree)).collect();
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let x = elements[i].then(g);
                if !index.contains_key(&x) {
                    if elements.len() >= limit {
                        return Err(OracleError::TooLarge(limit));
                    }
                    index.insert(x.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(x);
                }
            }
        }
        let n = elements.len();
        let mut sorted: Vec<usize> = (0..n).collect();
        sorted.sort_by(|&a, &b| elements[a].cmp(&elements[b]));
        let mut class_of = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for &s in &sorted {
            if class_of[s] != usize::MAX {
                continue;
            }
            let c = raw.len();
            let mut members = vec![s];
            class_of[s] = c;
            let mut k = 0;
            while k < members.len() {
                let x = elements[members[k]].clone();
                for g in &gens {
                    let y = index[&x.conjugate_by(g)];
                    if class_of[y] == usize::MAX {
                        class_of[y] = c;
                        members.push(y);
                    }
                }
                k += 1;
            }
            members.sort_by(|&a, &b| elements[a].cmp(&elements[b]));
            raw.push(members);
        }
        // raw classes are already in order of their minimal elements
        let mut order_of: Vec<(u64, usize)> = raw.iter().enumerate().map(|(c, m)| (elements[m[0]].order(), c)).collect();
        order_of.sort();
        let mut renumber = vec![0; raw.len()];
        for (new, &(_, old)) in order_of.iter().enumerate() {
            renumber[old] = new;
        }
        let classes: Vec<Vec<usize>> = order_of.iter().map(|&(_, old)| raw[old].clone()).collect();
        let orders = order_of.iter().map(|&(o, _)| o).collect();
        for c in class_of.iter_mut() {
            *c = renumber[*c];
        }
        Ok(OracleGroup { degree, generators: gens, elements, index, classes, class_of, orders })
    }

    pub fn from_cycle_string(s: &str, limit: usize) -> Result<Self, OracleError> {
        let gens = parse_generators(s).map_err(OracleError::InvalidGenerators)?;
        Self::from_generators(&gens, limit)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of_perm(&self, p: &Perm) -> Option<usize> {
        self.index.get(&p.extend(self.degree)).map(|&i| self.class_of[i])
    }

    pub fn representative(&self, c: usize) -> &Perm {
        &self.elements[self.classes[c][0]]
    }

    /// The subgroup generated by `gens`, which must lie in this group.
    pub fn subgroup(&self, gens: &[Perm]) -> Result<OracleGroup, OracleError> {
        let gens: Vec<Perm> = gens.iter().map(|g| g.extend(self.degree)).collect();
        if gens.iter().any(|g| !self.index.contains_key(g)) {
            return Err(OracleError::InvalidGenerators("not in the ambient group".into()));
        }
        OracleGroup::from_generators(&gens, self.order() + 1)
    }

    /// Class fusion of a subgroup, from its class representatives.
    pub fn fusion_of(&self, sub: &OracleGroup) -> Vec<usize> {
        (0..sub.class_count()).map(|c| self.class_of_perm(sub.representative(c)).expect("subgroup element")).collect()
    }

    /// `1_U^G(g) = |C_G(g)| |g^G ∩ U| / |U|` by counting elements.
    pub fn permutation_character(&self, sub: &OracleGroup) -> Vec<BigInt> {
        let mut hits = vec![0u64; self.class_count()];
        for u in &sub.elements {
            hits[self.class_of_perm(u).expect("subgroup element")] += 1;
        }
        (0..self.class_count())
            .map(|c| {
                let cent = (self.order() / self.classes[c].len()) as u64;
                BigInt::from(cent * hits[c] / sub.order() as u64)
            })
            .collect()
    }

    fn power_class(&self, c: usize, k: u64) -> usize {
        self.class_of_perm(&self.representative(c).pow(k)).unwrap()
    }

    /// The full character table. Irreducibles are sorted by degree, the
    /// trivial character first.
    pub fn character_table(&self, id: &str) -> Result<CharacterTable, OracleError> {
        let k = self.class_count();
        let order = self.order() as u64;
        let sizes: Vec<u64> = self.classes.iter().map(|c| c.len() as u64).collect();
        let exponent = self.orders.iter().fold(1u64, |a, &b| num_integer::lcm(a, b));
        let bound = 2 * (order as f64).sqrt().ceil() as u64;
        let p = dixon::lifting_prime(exponent, bound);

        // coefficients c[r][s][t]
        let mut coeff = vec![vec![vec![0u64; k]; k]; k];
        for t in 0..k {
            let z = self.representative(t);
            for (xi, x) in self.elements.iter().enumerate() {
                let y = x.inverse().then(z);
                let s = self.class_of[self.index[&y]];
                coeff[self.class_of[xi]][s][t] += 1;
            }
        }
        let mats: Vec<Vec<Vec<u64>>> =
            (1..k).map(|r| (0..k).map(|s| (0..k).map(|t| coeff[r][s][t] % p).collect()).collect()).collect();
        let vecs = dixon::common_eigenvectors(&mats, k, p).ok_or(OracleError::NoSplit(p))?;
        if vecs.len() != k {
            return Err(OracleError::NoSplit(p));
        }
        let inverse_class: Vec<usize> =
            (0..k).map(|c| self.class_of_perm(&self.representative(c).inverse()).unwrap()).collect();
        let z = dixon::root_of_unity(exponent, p);
        let powers: Vec<Vec<usize>> =
            (0..k).map(|c| (0..self.orders[c]).map(|l| self.power_class(c, l)).collect()).collect();

        let mut irr = Vec::with_capacity(k);
        for w in vecs {
            let w0inv = dixon::inv_mod(w[0], p);
            let w: Vec<u64> = w.iter().map(|x| x * w0inv % p).collect();
            let mut s = 0u64;
            for t in 0..k {
                s = (s + w[t] * w[inverse_class[t]] % p * dixon::inv_mod(sizes[t] % p, p)) % p;
            }
            let dsq = (order % p) * dixon::inv_mod(s, p) % p;
            let deg = (1..=(order as f64).sqrt() as u64 + 1).find(|d| d * d % p == dsq).ok_or(OracleError::Lift(p))?;
            let modp: Vec<u64> = (0..k).map(|t| w[t] * deg % p * dixon::inv_mod(sizes[t] % p, p) % p).collect();
            let mut vals = Vec::with_capacity(k);
            for c in 0..k {
                let o = self.orders[c];
                let zo = dixon::pow_mod(z, exponent / o, p);
                let oinv = dixon::inv_mod(o % p, p);
                let mut terms = Vec::new();
                for kk in 0..o {
                    let mut m = 0u64;
                    for l in 0..o {
                        let e = (o - (kk * l) % o) % o;
                        m = (m + modp[powers[c][l as usize]] * dixon::pow_mod(zo, e, p)) % p;
                    }
                    m = m * oinv % p;
                    if m > deg {
                        return Err(OracleError::Lift(p));
                    }
                    if m > 0 {
                        terms.push((kk as i64, BigRational::from_integer(BigInt::from(m))));
                    }
                }
                vals.push(normalize(o as u32, terms).expect("positive order"));
            }
            if vals[0] != Cyclotomic::from_integer(deg as i64) {
                return Err(OracleError::Lift(p));
            }
            irr.push(ClassFunction::new(vals));
        }
        let trivial = ClassFunction::new(vec![Cyclotomic::one(); k]);
        irr.sort_by(|a, b| (a.degree(), a != &trivial, a.values()).cmp(&(b.degree(), b != &trivial, b.values())));

        let max_order = self.orders.iter().copied().max().unwrap_or(1);
        let mut power_maps = BTreeMap::new();
        for q in crate::numtheory::primes_up_to(max_order) {
            power_maps.insert(q, (0..k).map(|c| self.power_class(c, q)).collect());
        }
        Ok(CharacterTable {
            id: id.to_string(),
            order: BigUint::from(order),
            centralizers: sizes.iter().map(|&s| BigUint::from(order / s)).collect(),
            orders: self.orders.clone(),
            power_maps,
            irreducibles: irr,
            fusions: Vec::new(),
        })
    }
}

/// Character table of the group generated by `gens`.
pub fn brute_force_table(gens: &[Perm], limit: usize, id: &str) -> Result<CharacterTable, OracleError> {
    OracleGroup::from_generators(gens, limit)?.character_table(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::ClassData;

    #[test]
    fn cyclic_two() {
        let g = OracleGroup::from_cycle_string("(1,2)", DEFAULT_LIMIT).unwrap();
        let t = g.character_table("C2").unwrap();
        let rows: Vec<Vec<i64>> = t
            .irreducibles
            .iter()
            .map(|c| c.iter().map(|v| i64::try_from(v.to_integer().unwrap()).unwrap()).collect())
            .collect();
        assert_eq!(rows, vec![vec![1, 1], vec![1, -1]]);
    }

    #[test]
    fn s3_degrees() {
        let t = brute_force_table(&parse_generators("(1,2,3);(1,2)").unwrap(), DEFAULT_LIMIT, "S3").unwrap();
        let degs: Vec<i64> = t.irreducibles.iter().map(|c| i64::try_from(c.degree().unwrap()).unwrap()).collect();
        assert_eq!(t.class_count(), 3);
        assert_eq!(degs, vec![1, 1, 2]);
        assert!(t.validate().is_empty());
    }

    #[test]
    fn limit_enforced() {
        let r = OracleGroup::from_cycle_string("(1,2,3,4,5);(1,2)", 50);
        assert_eq!(r.unwrap_err(), OracleError::TooLarge(50));
    }
}
