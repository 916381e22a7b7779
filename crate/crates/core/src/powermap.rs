//! Prime power maps: initialization, composites, Galois resolution of
//! quadratic pairs, and an optional congruence refinement.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use num_rational::BigRational;

use thiserror::Error;

use crate::classfun::ClassFunction;
use crate::cyclo::{atlas_sqrt, Cyclotomic};
use crate::fusion::{Entry, ParaMap};
use crate::numtheory::{factor_u64, smallest_prime_divisor};
use crate::table::{CharacterTable, ClassData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PowerMapError {
    #[error("no {p}-th power candidates for class {class}")]
    EmptyCandidates { p: u64, class: usize },
    #[error("the {0}-th power map is not known")]
    MissingPrimeMap(u64),
    #[error("the {0}-th power map is not fixed")]
    NotFixed(u64),
    #[error("prime {p} is not coprime to element order {order}")]
    NotCoprime { p: u64, order: u64 },
    #[error("{p}-th power map: assignment for class {class} contradicts known candidates")]
    Conflict { p: u64, class: usize },
    #[error("classes {0} and {1} have different element orders")]
    NotAPair(usize, usize),
    #[error("{p}-th power map inconsistent with the fusion from {sub} (class {class})")]
    Transfer { p: u64, sub: String, class: usize },
}

/// Class of `g^n` for `g` in class `i`, by repeatedly applying stored prime
/// maps. `None` if a needed prime map is missing.
pub fn power_class<T: ClassData + ?Sized>(t: &T, i: usize, n: u64) -> Option<usize> {
    let ord = t.element_orders()[i];
    let r = n % ord;
    if r == 0 {
        return Some(0);
    }
    if r == 1 {
        return Some(i);
    }
    let p = smallest_prime_divisor(r)?;
    let j = t.prime_power_map(p)?[i];
    power_class(t, j, r / p)
}

/// The `n`-th power map as a class list.
pub fn power_map<T: ClassData + ?Sized>(t: &T, n: u64) -> Result<Vec<usize>, PowerMapError> {
    if n == 0 {
        return Ok(vec![0; t.class_count()]);
    }
    (0..t.class_count())
        .map(|i| {
            let r = n % t.element_orders()[i];
            power_class(t, i, n).ok_or_else(|| {
                let missing = factor_u64(r.max(1))
                    .into_iter()
                    .map(|(p, _)| p)
                    .find(|&p| t.prime_power_map(p).is_none())
                    .unwrap_or(1);
                PowerMapError::MissingPrimeMap(missing)
            })
        })
        .collect()
}

/// Stored `p`-th map, or, for classes of order prime to `p`, the Galois
/// image read off the irreducibles.
pub fn derived_prime_map(t: &CharacterTable, p: u64) -> Option<Vec<usize>> {
    if let Some(m) = t.power_maps.get(&p) {
        return Some(m.clone());
    }
    if !t.has_complete_irreducibles() {
        return None;
    }
    let n = t.class_count();
    let columns: Vec<Vec<&Cyclotomic>> = (0..n).map(|i| t.irreducibles.iter().map(|c| &c[i]).collect()).collect();
    (0..n)
        .map(|i| {
            let o = t.orders[i];
            if o == 1 {
                return Some(i);
            }
            if o.is_multiple_of(p) {
                return None;
            }
            let img: Vec<Cyclotomic> = t.irreducibles.iter().map(|c| c[i].galois(p as i64).unwrap()).collect();
            (0..n).find(|&j| t.orders[j] == o && columns[j].iter().zip(&img).all(|(a, b)| *a == b))
        })
        .collect()
}

/// Candidates for the `p`-th power map from element orders and centralizer
/// divisibility.
pub fn init_power_map<T: ClassData + ?Sized>(t: &T, p: u64) -> Result<ParaMap, PowerMapError> {
    let n = t.class_count();
    let orders = t.element_orders();
    let cents = t.centralizer_orders();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if orders[i] == 1 {
            out.push(Entry::Fixed(i));
            continue;
        }
        let target = orders[i] / orders[i].gcd(&p);
        let cand: Vec<usize> =
            (0..n).filter(|&j| orders[j] == target && (&cents[j] % &cents[i]).is_zero()).collect();
        out.push(Entry::from_candidates(cand).ok_or(PowerMapError::EmptyCandidates { p, class: i })?);
    }
    Ok(ParaMap(out))
}

/// Assignments made by [`resolve_quadratic_pair`]: prime, and whether the
/// pair is fixed (`true`) or swapped.
pub type PairAssignment = (u64, bool);

/// For a pair of Galois-conjugate classes with character field
/// `Q(sqrt(d))`, the `p`-th power map fixes both classes iff
/// `ζ ↦ ζ^p` fixes `sqrt(d)`, and swaps them otherwise.
pub fn resolve_quadratic_pair<T: ClassData + ?Sized>(
    t: &T,
    maps: &mut BTreeMap<u64, ParaMap>,
    pair: (usize, usize),
    d: i64,
    primes: &[u64],
) -> Result<Vec<PairAssignment>, PowerMapError> {
    let (a, b) = pair;
    let order = t.element_orders()[a];
    if t.element_orders()[b] != order {
        return Err(PowerMapError::NotAPair(a, b));
    }
    let s = atlas_sqrt(d);
    let mut out = Vec::new();
    for &p in primes {
        if order.is_multiple_of(p) {
            return Err(PowerMapError::NotCoprime { p, order });
        }
        let fixes = s.galois(p as i64).expect("p coprime to conductor of sqrt(d)") == s;
        let (ia, ib) = if fixes { (a, b) } else { (b, a) };
        if let Some(m) = maps.get_mut(&p) {
            m.restrict(a, &[ia]).map_err(|_| PowerMapError::Conflict { p, class: a })?;
            m.restrict(b, &[ib]).map_err(|_| PowerMapError::Conflict { p, class: b })?;
        }
        out.push((p, fixes));
    }
    Ok(out)
}

/// Removes candidates `j` for the `p`-th power of class `i` unless
/// `χ(j) ≡ χ(i)^p (mod p)` for every given character, the congruence taken
/// coefficient-wise in the Zumbroich basis. Returns whether anything shrank.
pub fn refine_by_congruences<T: ClassData + ?Sized>(
    t: &T,
    p: u64,
    map: &mut ParaMap,
    chars: &[ClassFunction],
) -> Result<bool, PowerMapError> {
    let mut changed = false;
    let pq = BigRational::from_integer(BigInt::from(p));
    for i in 0..t.class_count() {
        let Some(c) = map.entry(i).candidates().map(<[usize]>::to_vec) else { continue };
        if c.len() < 2 {
            continue;
        }
        let powered: Vec<Cyclotomic> = chars.iter().map(|chi| chi[i].pow(p as u32)).collect();
        let keep: Vec<usize> = c
            .into_iter()
            .filter(|&j| {
                chars.iter().zip(&powered).all(|(chi, pw)| {
                    let diff = (&chi[j] - pw).scale(&pq.recip());
                    diff.is_integral()
                })
            })
            .collect();
        changed |= map.restrict(i, &keep).map_err(|_| PowerMapError::EmptyCandidates { p, class: i })?;
    }
    Ok(changed)
}

/// Indeterminateness of each map, in prime order.
pub fn indeterminateness_report(maps: &BTreeMap<u64, ParaMap>) -> Vec<(u64, String)> {
    maps.iter()
        .map(|(&p, m)| (p, m.indeterminateness().map_or_else(|| "unbound".to_string(), |x| x.to_string())))
        .collect()
}

/// Fixed maps of all primes, if every map is fixed.
pub fn fixed_maps(maps: &BTreeMap<u64, ParaMap>) -> Result<BTreeMap<u64, Vec<usize>>, PowerMapError> {
    maps.iter()
        .map(|(&p, m)| m.to_fixed().map(|f| (p, f)).ok_or(PowerMapError::NotFixed(p)))
        .collect()
}


/// One application of [`transfer_diagram`](crate::fusion::transfer_diagram)
/// for every prime map in `primes` (all if `None`) and every subgroup
/// fusion. Returns whether anything changed.
pub fn transfer_pass(
    maps: &mut BTreeMap<u64, ParaMap>,
    primes: Option<&[u64]>,
    subs: &[&CharacterTable],
    fusions: &mut [ParaMap],
) -> Result<bool, PowerMapError> {
    use crate::fusion::{transfer_diagram, TransferFailure};
    let mut changed = false;
    for (&p, amb) in maps.iter_mut() {
        if primes.is_some_and(|ps| !ps.contains(&p)) {
            continue;
        }
        for (s, fus) in subs.iter().zip(fusions.iter_mut()) {
            let sub_map = ParaMap::from_fixed(&power_map(*s, p)?);
            let imp = transfer_diagram(&sub_map, fus, amb).map_err(|e| {
                let class = match e {
                    TransferFailure::Between(i) | TransferFailure::Inside2(i) => i,
                };
                PowerMapError::Transfer { p, sub: s.id.clone(), class }
            })?;
            changed |= !imp.is_empty();
        }
    }
    Ok(changed)
}

/// An initial [`transfer_pass`] followed by further passes until one
/// changes nothing. Returns the number of passes after the initial one.
pub fn refine_by_fusions(
    maps: &mut BTreeMap<u64, ParaMap>,
    subs: &[&CharacterTable],
    fusions: &mut [ParaMap],
) -> Result<usize, PowerMapError> {
    transfer_pass(maps, None, subs, fusions)?;
    let mut rounds = 0;
    loop {
        rounds += 1;
        if !transfer_pass(maps, None, subs, fusions)? {
            return Ok(rounds);
        }
    }
}

/// Refines map `a` by its commuting with map `b`: `a ∘ b = b ∘ a`.
pub fn refine_by_commuting(maps: &mut BTreeMap<u64, ParaMap>, a: u64, b: u64) -> Result<bool, PowerMapError> {
    use crate::fusion::transfer_diagram;
    let inside1 = maps.get(&a).cloned().ok_or(PowerMapError::MissingPrimeMap(a))?;
    let mut between = maps.get(&b).cloned().ok_or(PowerMapError::MissingPrimeMap(b))?;
    let mut inside2 = inside1.clone();
    let imp = transfer_diagram(&inside1, &mut between, &mut inside2)
        .map_err(|_| PowerMapError::Conflict { p: b, class: 0 })?;
    maps.insert(a, inside2);
    maps.insert(b, between);
    Ok(!imp.is_empty())
}
