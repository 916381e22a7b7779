//! Character tables: the data model, structural validation, normal
//! subgroups, factor tables, direct products and equivalence checks.
//!
//! Classes are indexed from 0 and class 0 is the identity. The file format
//! and the command line use 1-based positions.

mod equivalence;
mod io;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::classfun::{self, ClassFunction};
use crate::cyclo::Cyclotomic;
use crate::fusion::ParaMap;
use crate::numtheory::prime_divisors;
use crate::powermap;

pub use equivalence::{
    fingerprint_bijection, is_table_automorphism, parse_cycles, transforming_permutations, TablePermutation,
};
pub use io::TableIoError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table {0} has no irreducible characters")]
    MissingIrreducibles(String),
    #[error("irreducibles of {0} are incomplete")]
    IncompleteIrreducibles(String),
    #[error("class set {0:?} is not a normal subgroup")]
    NotNormal(Vec<usize>),
    #[error("power map needed for the {1}-th power of class {0} is missing")]
    MissingPowerMap(usize, u64),
    #[error("class index {0} out of range")]
    ClassOutOfRange(usize),
}

/// A stored fusion from a subgroup table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRecord {
    pub sub: String,
    pub map: ParaMap,
}

/// Class-level data shared by complete tables and heads under construction.
pub trait ClassData {
    fn group_order(&self) -> &BigUint;
    fn centralizer_orders(&self) -> &[BigUint];
    fn element_orders(&self) -> &[u64];
    /// The `p`-th power map, if it is known and fixed.
    fn prime_power_map(&self, p: u64) -> Option<&[usize]>;

    fn class_count(&self) -> usize {
        self.element_orders().len()
    }

    fn class_sizes(&self) -> Vec<BigUint> {
        self.centralizer_orders().iter().map(|c| self.group_order() / c).collect()
    }

    /// Sorted positions of the classes of element order `n`.
    fn positions_of_order(&self, n: u64) -> Vec<usize> {
        (0..self.class_count()).filter(|&i| self.element_orders()[i] == n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub id: String,
    pub order: BigUint,
    pub centralizers: Vec<BigUint>,
    pub orders: Vec<u64>,
    pub power_maps: BTreeMap<u64, Vec<usize>>,
    pub irreducibles: Vec<ClassFunction>,
    pub fusions: Vec<FusionRecord>,
}

impl ClassData for CharacterTable {
    fn group_order(&self) -> &BigUint {
        &self.order
    }
    fn centralizer_orders(&self) -> &[BigUint] {
        &self.centralizers
    }
    fn element_orders(&self) -> &[u64] {
        &self.orders
    }
    fn prime_power_map(&self, p: u64) -> Option<&[usize]> {
        self.power_maps.get(&p).map(Vec::as_slice)
    }
}

/// A single failed invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    LengthMismatch { field: &'static str, len: usize, expected: usize },
    IdentityClass,
    ClassEquation,
    CentralizerDivides { class: usize },
    ElementOrderDivides { class: usize },
    PowerMapRange { p: u64, class: usize },
    PowerMapOrder { p: u64, class: usize },
    PowerMapCentralizer { p: u64, class: usize },
    CharacterLength { row: usize },
    DegreeNotPositive { row: usize },
    TooManyIrreducibles,
    FirstOrthogonality { i: usize, j: usize },
    SecondOrthogonality { i: usize, j: usize },
    FusionLength { sub: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            LengthMismatch { field, len, expected } => {
                write!(f, "{field} has length {len}, expected {expected}")
            }
            IdentityClass => write!(f, "class 1 is not the identity class"),
            ClassEquation => write!(f, "class sizes do not sum to the group order"),
            CentralizerDivides { class } => {
                write!(f, "centralizer order of class {} does not divide the group order", class + 1)
            }
            ElementOrderDivides { class } => {
                write!(f, "element order of class {} does not divide the group order", class + 1)
            }
            PowerMapRange { p, class } => write!(f, "{p}-th power map: image of class {} out of range", class + 1),
            PowerMapOrder { p, class } => write!(f, "{p}-th power map: wrong element order at class {}", class + 1),
            PowerMapCentralizer { p, class } => {
                write!(f, "{p}-th power map: centralizer of class {} does not divide its image's", class + 1)
            }
            CharacterLength { row } => write!(f, "character {} has the wrong length", row + 1),
            DegreeNotPositive { row } => write!(f, "character {} has no positive integer degree", row + 1),
            TooManyIrreducibles => write!(f, "more irreducibles than classes"),
            FirstOrthogonality { i, j } => write!(f, "first orthogonality fails for characters {} and {}", i + 1, j + 1),
            SecondOrthogonality { i, j } => write!(f, "second orthogonality fails for classes {} and {}", i + 1, j + 1),
            FusionLength { sub } => write!(f, "stored fusion from {sub} has entries out of range"),
        }
    }
}

/// Which normal subgroups to return.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalSelector {
    All,
    Centre,
    PCore(u64),
}

impl CharacterTable {
    /// A table without power maps, irreducibles or fusions.
    pub fn new(id: impl Into<String>, order: BigUint, centralizers: Vec<BigUint>, orders: Vec<u64>) -> Self {
        CharacterTable {
            id: id.into(),
            order,
            centralizers,
            orders,
            power_maps: BTreeMap::new(),
            irreducibles: Vec::new(),
            fusions: Vec::new(),
        }
    }

    pub fn has_complete_irreducibles(&self) -> bool {
        !self.irreducibles.is_empty() && self.irreducibles.len() == self.class_count()
    }

    pub fn fusion_from(&self, sub: &str) -> Option<&FusionRecord> {
        self.fusions.iter().find(|f| f.sub == sub)
    }

    /// Checks every structural invariant; an empty result means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.orders.len();
        if self.centralizers.len() != n {
            out.push(Violation::LengthMismatch { field: "centralizers", len: self.centralizers.len(), expected: n });
            return out;
        }
        if n == 0 || self.orders[0] != 1 || self.centralizers[0] != self.order {
            out.push(Violation::IdentityClass);
        }
        let mut sum = BigUint::zero();
        for (i, c) in self.centralizers.iter().enumerate() {
            if c.is_zero() || !(&self.order % c).is_zero() {
                out.push(Violation::CentralizerDivides { class: i });
            } else {
                sum += &self.order / c;
            }
        }
        if out.iter().all(|v| !matches!(v, Violation::CentralizerDivides { .. })) && sum != self.order {
            out.push(Violation::ClassEquation);
        }
        for (i, &o) in self.orders.iter().enumerate() {
            if o == 0 || !(&self.order % BigUint::from(o)).is_zero() {
                out.push(Violation::ElementOrderDivides { class: i });
            }
        }
        for (&p, map) in &self.power_maps {
            if map.len() != n {
                out.push(Violation::LengthMismatch { field: "power map", len: map.len(), expected: n });
                continue;
            }
            for (i, &j) in map.iter().enumerate() {
                if j >= n {
                    out.push(Violation::PowerMapRange { p, class: i });
                    continue;
                }
                if self.orders[j] != self.orders[i] / self.orders[i].gcd(&p) {
                    out.push(Violation::PowerMapOrder { p, class: i });
                }
                if !self.centralizers[i].is_zero() && !(&self.centralizers[j] % &self.centralizers[i]).is_zero() {
                    out.push(Violation::PowerMapCentralizer { p, class: i });
                }
            }
        }
        for rec in &self.fusions {
            if rec.map.entries().iter().any(|e| e.candidates().is_some_and(|c| c.iter().any(|&x| x >= n))) {
                out.push(Violation::FusionLength { sub: rec.sub.clone() });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut rows_ok = true;
        for (r, chi) in self.irreducibles.iter().enumerate() {
            if chi.len() != n {
                out.push(Violation::CharacterLength { row: r });
                rows_ok = false;
            } else if !chi.degree().is_some_and(|d| d > num_bigint::BigInt::zero()) {
                out.push(Violation::DegreeNotPositive { row: r });
            }
        }
        if self.irreducibles.len() > n {
            out.push(Violation::TooManyIrreducibles);
        }
        if !rows_ok {
            return out;
        }
        let irr = &self.irreducibles;
        for i in 0..irr.len() {
            for j in i..irr.len() {
                let ip = classfun::inner_product(self, &irr[i], &irr[j]).expect("lengths checked");
                let expect = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                if ip != expect {
                    out.push(Violation::FirstOrthogonality { i, j });
                }
            }
        }
        if self.has_complete_irreducibles() {
            let conj: Vec<ClassFunction> = irr.iter().map(ClassFunction::complex_conjugate).collect();
            for i in 0..n {
                for j in i..n {
                    let s: Cyclotomic = irr.iter().zip(&conj).map(|(x, y)| &x[i] * &y[j]).sum();
                    let expect = if i == j {
                        Cyclotomic::from_integer(num_bigint::BigInt::from(self.centralizers[i].clone()))
                    } else {
                        Cyclotomic::zero()
                    };
                    if s != expect {
                        out.push(Violation::SecondOrthogonality { i, j });
                    }
                }
            }
        }
        out
    }

    /// Number of group elements in a union of classes.
    pub fn element_count(&self, classes: &[usize]) -> BigUint {
        classes.iter().map(|&i| &self.order / &self.centralizers[i]).sum()
    }

    /// Kernel of a character, as a sorted class list.
    pub fn kernel(&self, chi: &ClassFunction) -> Vec<usize> {
        (0..chi.len()).filter(|&i| chi[i] == chi[0]).collect()
    }

    fn require_irreducibles(&self) -> Result<(), TableError> {
        if self.irreducibles.is_empty() {
            Err(TableError::MissingIrreducibles(self.id.clone()))
        } else if !self.has_complete_irreducibles() {
            Err(TableError::IncompleteIrreducibles(self.id.clone()))
        } else {
            Ok(())
        }
    }

    /// Normal subgroups as sorted class lists, ordered by size and then
    /// lexicographically.
    pub fn normal_subgroups(&self, sel: NormalSelector) -> Result<Vec<Vec<usize>>, TableError> {
        if sel == NormalSelector::Centre {
            let one = BigUint::one();
            let centre: Vec<usize> =
                (0..self.class_count()).filter(|&i| &self.order / &self.centralizers[i] == one).collect();
            return Ok(vec![centre]);
        }
        self.require_irreducibles()?;
        let mut family: BTreeSet<Vec<usize>> = BTreeSet::new();
        for chi in &self.irreducibles {
            family.insert(self.kernel(chi));
        }
        // close under intersection
        loop {
            let list: Vec<Vec<usize>> = family.iter().cloned().collect();
            let mut grew = false;
            for a in 0..list.len() {
                for b in a + 1..list.len() {
                    let inter: Vec<usize> = list[a].iter().copied().filter(|x| list[b].binary_search(x).is_ok()).collect();
                    grew |= family.insert(inter);
                }
            }
            if !grew {
                break;
            }
        }
        let mut all: Vec<(BigUint, Vec<usize>)> = family.into_iter().map(|s| (self.element_count(&s), s)).collect();
        all.sort();
        match sel {
            NormalSelector::All => Ok(all.into_iter().map(|(_, s)| s).collect()),
            NormalSelector::PCore(p) => {
                let best = all
                    .into_iter()
                    .filter(|(size, _)| is_power_of(size, p))
                    .max_by(|a, b| a.0.cmp(&b.0))
                    .map(|(_, s)| s)
                    .unwrap_or_else(|| vec![0]);
                Ok(vec![best])
            }
            NormalSelector::Centre => unreachable!(),
        }
    }

    /// Factor table by a normal subgroup given as a class list, with the
    /// fusion map from this table's classes onto the factor's.
    pub fn factor_table(&self, kernel: &[usize]) -> Result<(CharacterTable, Vec<usize>), TableError> {
        self.require_irreducibles()?;
        let mut kernel = kernel.to_vec();
        kernel.sort_unstable();
        kernel.dedup();
        let chars: Vec<&ClassFunction> = self
            .irreducibles
            .iter()
            .filter(|chi| kernel.iter().all(|&k| chi[k] == chi[0]))
            .collect();
        let generated: Vec<usize> =
            (0..self.class_count()).filter(|&i| chars.iter().all(|chi| chi[i] == chi[0])).collect();
        if generated != kernel || kernel.first() != Some(&0) {
            return Err(TableError::NotNormal(kernel));
        }
        let n = self.class_count();
        let mut fiber_of = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..n {
            if fiber_of[i] != usize::MAX {
                continue;
            }
            let f = reps.len();
            reps.push(i);
            for j in i..n {
                if fiber_of[j] == usize::MAX && chars.iter().all(|chi| chi[i] == chi[j]) {
                    fiber_of[j] = f;
                }
            }
        }
        let m = reps.len();
        let factor_irr: Vec<ClassFunction> =
            chars.iter().map(|chi| ClassFunction::new(reps.iter().map(|&r| chi[r].clone()).collect())).collect();
        let kernel_group: BTreeSet<usize> = kernel.iter().copied().collect();
        let mut centralizers = Vec::with_capacity(m);
        let mut orders = Vec::with_capacity(m);
        for f in 0..m {
            let s: Cyclotomic = factor_irr.iter().map(|chi| &chi[f] * &chi[f].complex_conjugate()).sum();
            let c = s.to_integer().and_then(|c| c.to_biguint()).expect("column norms are positive integers");
            centralizers.push(c);
            let r = reps[f];
            let ord = self.orders[r];
            let mut fo = ord;
            for d in crate::numtheory::divisors(&BigUint::from(ord)) {
                let d = crate::numtheory::big_to_u64(&num_bigint::BigInt::from(d)).unwrap();
                let pc = powermap::power_class(self, r, d).ok_or(TableError::MissingPowerMap(r, d))?;
                if kernel_group.contains(&pc) {
                    fo = d;
                    break;
                }
            }
            orders.push(fo);
        }
        let mut power_maps = BTreeMap::new();
        for (&p, map) in &self.power_maps {
            power_maps.insert(p, reps.iter().map(|&r| fiber_of[map[r]]).collect());
        }
        let cardinality = self.element_count(&kernel);
        let names: Vec<String> = kernel.iter().map(|k| (k + 1).to_string()).collect();
        let table = CharacterTable {
            id: format!("{}/[{}]", self.id, names.join(",")),
            order: &self.order / cardinality,
            centralizers,
            orders,
            power_maps,
            irreducibles: factor_irr,
            fusions: Vec::new(),
        };
        Ok((table, fiber_of))
    }

    /// Direct product; class `(i, j)` sits at `i * n2 + j`.
    pub fn direct_product(t1: &CharacterTable, t2: &CharacterTable) -> CharacterTable {
        let n2 = t2.class_count();
        let mut centralizers = Vec::new();
        let mut orders = Vec::new();
        for i in 0..t1.class_count() {
            for j in 0..n2 {
                centralizers.push(&t1.centralizers[i] * &t2.centralizers[j]);
                orders.push(t1.orders[i].lcm(&t2.orders[j]));
            }
        }
        let max_order = orders.iter().copied().max().unwrap_or(1);
        let mut power_maps = BTreeMap::new();
        for p in crate::numtheory::primes_up_to(max_order) {
            let (Some(a), Some(b)) = (powermap::derived_prime_map(t1, p), powermap::derived_prime_map(t2, p)) else {
                continue;
            };
            let map = (0..t1.class_count()).flat_map(|i| (0..n2).map(move |j| (i, j))).map(|(i, j)| a[i] * n2 + b[j]).collect();
            power_maps.insert(p, map);
        }
        let mut irreducibles = Vec::new();
        for x in &t1.irreducibles {
            for y in &t2.irreducibles {
                let vals = (0..t1.class_count()).flat_map(|i| (0..n2).map(move |j| (i, j))).map(|(i, j)| &x[i] * &y[j]).collect();
                irreducibles.push(ClassFunction::new(vals));
            }
        }
        CharacterTable {
            id: format!("{}x{}", t1.id, t2.id),
            order: &t1.order * &t2.order,
            centralizers,
            orders,
            power_maps,
            irreducibles,
            fusions: Vec::new(),
        }
    }

    /// The same table with classes reordered: class `i` of the result is
    /// class `perm[i]` of `self`. Stored fusions are dropped.
    pub fn permute_classes(&self, perm: &[usize]) -> CharacterTable {
        let mut inv = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        CharacterTable {
            id: self.id.clone(),
            order: self.order.clone(),
            centralizers: perm.iter().map(|&p| self.centralizers[p].clone()).collect(),
            orders: perm.iter().map(|&p| self.orders[p]).collect(),
            power_maps: self
                .power_maps
                .iter()
                .map(|(&q, m)| (q, perm.iter().map(|&p| inv[m[p]]).collect()))
                .collect(),
            irreducibles: self
                .irreducibles
                .iter()
                .map(|chi| ClassFunction::new(perm.iter().map(|&p| chi[p].clone()).collect()))
                .collect(),
            fusions: Vec::new(),
        }
    }

    /// Primes for which a power map is needed: those dividing some element order.
    pub fn relevant_primes(&self) -> Vec<u64> {
        let mut ps: BTreeSet<u64> = BTreeSet::new();
        for &o in &self.orders {
            ps.extend(prime_divisors(o));
        }
        ps.into_iter().collect()
    }

    pub fn trivial_character(&self) -> ClassFunction {
        ClassFunction::new(vec![Cyclotomic::one(); self.class_count()])
    }
}

fn is_power_of(n: &BigUint, p: u64) -> bool {
    let p = BigUint::from(p);
    let mut n = n.clone();
    while (&n % &p).is_zero() && !n.is_zero() {
        n /= &p;
    }
    n.is_one()
}
