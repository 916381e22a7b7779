use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;

use super::{CharacterTable, ClassData, TableError};
use crate::cyclo::Cyclotomic;

/// A class bijection with the matching bijection of irreducibles.
/// `columns[i]` is the class of the second table matching class `i` of the
/// first; `rows[r]` likewise for irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TablePermutation {
    pub columns: Vec<usize>,
    pub rows: Vec<usize>,
}

fn hash_of<T: Hash>(x: &T) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

fn require_complete(t: &CharacterTable) -> Result<(), TableError> {
    if t.irreducibles.is_empty() {
        Err(TableError::MissingIrreducibles(t.id.clone()))
    } else if !t.has_complete_irreducibles() {
        Err(TableError::IncompleteIrreducibles(t.id.clone()))
    } else {
        Ok(())
    }
}

#[derive(Hash, PartialEq, Eq, Clone)]
struct BaseKey {
    order: u64,
    centralizer: BigUint,
    column: Vec<Cyclotomic>,
}

fn base_keys(t: &CharacterTable) -> Vec<BaseKey> {
    (0..t.class_count())
        .map(|i| {
            let mut column: Vec<Cyclotomic> = t.irreducibles.iter().map(|chi| chi[i].clone()).collect();
            column.sort();
            BaseKey { order: t.orders[i], centralizer: t.centralizers[i].clone(), column }
        })
        .collect()
}

/// Joint colour refinement of the classes of both tables by their invariants
/// and power-map images.
fn refine_colours(t1: &CharacterTable, t2: &CharacterTable, primes: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let mut ids: HashMap<BaseKey, usize> = HashMap::new();
    let mut colour = |keys: Vec<BaseKey>| -> Vec<usize> {
        keys.into_iter()
            .map(|k| {
                let n = ids.len();
                *ids.entry(k).or_insert(n)
            })
            .collect()
    };
    let mut c1 = colour(base_keys(t1));
    let mut c2 = colour(base_keys(t2));
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut step = |t: &CharacterTable, c: &[usize]| -> Vec<usize> {
            (0..c.len())
                .map(|i| {
                    let imgs = primes.iter().map(|p| c[t.power_maps[p][i]]).collect();
                    let n = ids.len();
                    *ids.entry((c[i], imgs)).or_insert(n)
                })
                .collect()
        };
        let n1 = step(t1, &c1);
        let n2 = step(t2, &c2);
        let before = count_distinct(&c1, &c2);
        let after = count_distinct(&n1, &n2);
        c1 = n1;
        c2 = n2;
        if after == before {
            return (c1, c2);
        }
    }
}

fn count_distinct(a: &[usize], b: &[usize]) -> usize {
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

struct Search<'a> {
    t1: &'a CharacterTable,
    t2: &'a CharacterTable,
    primes: Vec<u64>,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    vh1: Vec<Vec<u64>>,
    vh2: Vec<Vec<u64>>,
    sigma: Vec<Option<usize>>,
    used: Vec<bool>,
    rows2: HashMap<&'a [Cyclotomic], usize>,
}

impl Search<'_> {
    fn consistent(&self, i: usize, j: usize) -> bool {
        for p in &self.primes {
            let m1 = &self.t1.power_maps[p];
            let m2 = &self.t2.power_maps[p];
            if let Some(s) = self.sigma[m1[i]] {
                if s != m2[j] {
                    return false;
                }
            } else if m1[i] == i && m2[j] != j {
                return false;
            }
        }
        true
    }

    fn rows_agree(&self, h1: &[u64], h2: &[u64]) -> bool {
        let mut a = h1.to_vec();
        let mut b = h2.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    fn run(&mut self, depth: usize, h1: Vec<u64>, h2: Vec<u64>) -> Option<TablePermutation> {
        if depth == self.order.len() {
            return self.finish();
        }
        let i = self.order[depth];
        for jj in 0..self.candidates[i].len() {
            let j = self.candidates[i][jj];
            if self.used[j] || !self.consistent(i, j) {
                continue;
            }
            self.sigma[i] = Some(j);
            // predecessors under power maps that are already placed
            let ok = (0..self.t1.class_count()).all(|k| {
                self.sigma[k].is_none_or(|sk| {
                    self.primes.iter().all(|p| {
                        let m1 = &self.t1.power_maps[p];
                        m1[k] != i || self.t2.power_maps[p][sk] == j
                    })
                })
            });
            if ok {
                let salt = hash_of(&depth);
                let n1: Vec<u64> =
                    h1.iter().zip(&self.vh1).map(|(h, row)| h.wrapping_mul(0x100000001b3) ^ (row[i] ^ salt)).collect();
                let n2: Vec<u64> =
                    h2.iter().zip(&self.vh2).map(|(h, row)| h.wrapping_mul(0x100000001b3) ^ (row[j] ^ salt)).collect();
                if self.rows_agree(&n1, &n2) {
                    self.used[j] = true;
                    if let Some(found) = self.run(depth + 1, n1, n2) {
                        return Some(found);
                    }
                    self.used[j] = false;
                }
            }
            self.sigma[i] = None;
        }
        None
    }

    fn finish(&self) -> Option<TablePermutation> {
        let n = self.t1.class_count();
        let columns: Vec<usize> = self.sigma.iter().map(|s| s.unwrap()).collect();
        let mut inv = vec![0; n];
        for (i, &j) in columns.iter().enumerate() {
            inv[j] = i;
        }
        let mut rows = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for chi in &self.t1.irreducibles {
            let moved: Vec<Cyclotomic> = (0..n).map(|j| chi[inv[j]].clone()).collect();
            let r = *self.rows2.get(moved.as_slice())?;
            if std::mem::replace(&mut seen[r], true) {
                return None;
            }
            rows.push(r);
        }
        Some(TablePermutation { columns, rows })
    }
}

/// Searches for a class bijection carrying `t1` to `t2` that preserves
/// element orders, centralizer orders, the common power maps and the set
/// of irreducibles.
pub fn transforming_permutations(
    t1: &CharacterTable,
    t2: &CharacterTable,
) -> Result<Option<TablePermutation>, TableError> {
    require_complete(t1)?;
    require_complete(t2)?;
    let n = t1.class_count();
    if n != t2.class_count() || t1.order != t2.order {
        return Ok(None);
    }
    let primes: Vec<u64> = t1.power_maps.keys().filter(|p| t2.power_maps.contains_key(p)).copied().collect();
    let (c1, c2) = refine_colours(t1, t2, &primes);
    let mut s1 = c1.clone();
    let mut s2 = c2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return Ok(None);
    }
    let candidates: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| c2[j] == c1[i]).collect()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));
    let vh = |t: &CharacterTable| -> Vec<Vec<u64>> {
        t.irreducibles.iter().map(|chi| chi.iter().map(hash_of).collect()).collect()
    };
    let rows2: HashMap<&[Cyclotomic], usize> =
        t2.irreducibles.iter().enumerate().map(|(r, chi)| (chi.as_slice(), r)).collect();
    let mut search = Search {
        t1,
        t2,
        primes,
        order,
        candidates,
        vh1: vh(t1),
        vh2: vh(t2),
        sigma: vec![None; n],
        used: vec![false; n],
        rows2,
    };
    Ok(search.run(0, vec![0; n], vec![0; n]))
}

/// Whether `perm` (image of class `i` is `perm[i]`) is an automorphism of
/// the table: it preserves element orders, centralizers, every stored
/// power map and the set of irreducibles.
pub fn is_table_automorphism(t: &CharacterTable, perm: &[usize]) -> Result<bool, TableError> {
    require_complete(t)?;
    let n = t.class_count();
    if perm.len() != n {
        return Ok(false);
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Ok(false);
        }
    }
    for i in 0..n {
        if t.orders[perm[i]] != t.orders[i] || t.centralizers[perm[i]] != t.centralizers[i] {
            return Ok(false);
        }
    }
    for m in t.power_maps.values() {
        if (0..n).any(|i| perm[m[i]] != m[perm[i]]) {
            return Ok(false);
        }
    }
    let rows: std::collections::HashSet<&[Cyclotomic]> = t.irreducibles.iter().map(|c| c.as_slice()).collect();
    for chi in &t.irreducibles {
        let moved: Vec<Cyclotomic> = (0..n).map(|i| chi[perm[i]].clone()).collect();
        if !rows.contains(moved.as_slice()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Matches the classes of `head` to those of `reference` by the
/// fingerprint (element order, centralizer order, the values of the given
/// characters and of their compositions with the 2nd power map), then
/// resolves ambiguous fibers so that every prime power map stored in both
/// tables commutes with the matching. `columns[i]` is the reference class
/// for class `i` of `head`.
pub fn fingerprint_bijection(
    head: &CharacterTable,
    head_chars: &[crate::ClassFunction],
    reference: &CharacterTable,
    ref_chars: &[crate::ClassFunction],
) -> Option<Vec<usize>> {
    let n = head.class_count();
    if n != reference.class_count() || head_chars.len() != ref_chars.len() {
        return None;
    }
    let print = |t: &CharacterTable, chars: &[crate::ClassFunction], i: usize| {
        let sq = t.power_maps.get(&2).map(|m| m[i]);
        let vals: Vec<(Cyclotomic, Option<Cyclotomic>)> =
            chars.iter().map(|c| (c[i].clone(), sq.map(|j| c[j].clone()))).collect();
        (t.orders[i], t.centralizers[i].clone(), vals)
    };
    let f1: Vec<_> = (0..n).map(|i| print(head, head_chars, i)).collect();
    let f2: Vec<_> = (0..n).map(|i| print(reference, ref_chars, i)).collect();
    let candidates: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| f2[j] == f1[i]).collect()).collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let primes: Vec<u64> = head.power_maps.keys().filter(|p| reference.power_maps.contains_key(p)).copied().collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));
    let mut sigma = vec![None; n];
    let mut used = vec![false; n];
    fn compatible(
        head: &CharacterTable,
        reference: &CharacterTable,
        primes: &[u64],
        sigma: &[Option<usize>],
        i: usize,
        j: usize,
    ) -> bool {
        for p in primes {
            let (m1, m2) = (&head.power_maps[p], &reference.power_maps[p]);
            if sigma[m1[i]].is_some_and(|x| x != m2[j]) && m1[i] != i {
                return false;
            }
            if m1[i] == i && m2[j] != j {
                return false;
            }
            for (k, &img) in m1.iter().enumerate() {
                if img == i {
                    if let Some(sk) = sigma[k] {
                        if m2[sk] != j {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
    fn go(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        head: &CharacterTable,
        reference: &CharacterTable,
        primes: &[u64],
        sigma: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&i) = order.get(depth) else { return true };
        for &j in &candidates[i] {
            if used[j] || !compatible(head, reference, primes, sigma, i, j) {
                continue;
            }
            sigma[i] = Some(j);
            used[j] = true;
            if go(depth + 1, order, candidates, head, reference, primes, sigma, used) {
                return true;
            }
            sigma[i] = None;
            used[j] = false;
        }
        false
    }
    if go(0, &order, &candidates, head, reference, &primes, &mut sigma, &mut used) {
        Some(sigma.into_iter().map(|x| x.expect("complete")).collect())
    } else {
        None
    }
}

/// Parses cycle notation with 1-based points, e.g. `(143,144)(222,223)`,
/// into a 0-based image list on `n` points.
pub fn parse_cycles(s: &str, n: usize) -> Result<Vec<usize>, String> {
    let mut perm: Vec<usize> = (0..n).collect();
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| format!("malformed cycle notation {s:?}"))?;
        rest = body.1;
        if body.0.is_empty() {
            continue;
        }
        let pts = body
            .0
            .split(',')
            .map(|x| x.parse::<usize>().ok().filter(|&k| k >= 1 && k <= n).map(|k| k - 1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| format!("bad point in {s:?}"))?;
        for k in 0..pts.len() {
            perm[pts[k]] = pts[(k + 1) % pts.len()];
        }
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles() {
        assert_eq!(parse_cycles("(1,2)(3,5,4)", 5).unwrap(), vec![1, 0, 4, 2, 3]);
        assert_eq!(parse_cycles("()", 2).unwrap(), vec![0, 1]);
        assert!(parse_cycles("(1,7)", 3).is_err());
    }
}
