use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde_json::{json, Value};

/// One position of a parametrized map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Unbound,
    Fixed(usize),
    /// Sorted, at least two elements.
    Set(Vec<usize>),
}

impl Entry {
    /// `None` for an empty candidate list.
    pub fn from_candidates(mut c: Vec<usize>) -> Option<Entry> {
        c.sort_unstable();
        c.dedup();
        match c.len() {
            0 => None,
            1 => Some(Entry::Fixed(c[0])),
            _ => Some(Entry::Set(c)),
        }
    }

    /// Candidate slice; `None` if unbound.
    pub fn candidates(&self) -> Option<&[usize]> {
        match self {
            Entry::Unbound => None,
            Entry::Fixed(x) => Some(std::slice::from_ref(x)),
            Entry::Set(s) => Some(s),
        }
    }

    pub fn fixed(&self) -> Option<usize> {
        match self {
            Entry::Fixed(x) => Some(*x),
            _ => None,
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.candidates().is_some_and(|c| c.binary_search(&x).is_ok())
    }

    pub fn size(&self) -> Option<usize> {
        self.candidates().map(<[usize]>::len)
    }
}

/// A class map whose entries are fixed, candidate sets, or unbound.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParaMap(pub Vec<Entry>);

/// Returned when an intersection leaves no candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptyEntry(pub usize);

impl ParaMap {
    pub fn unbound(n: usize) -> Self {
        ParaMap(vec![Entry::Unbound; n])
    }

    pub fn identity(n: usize) -> Self {
        ParaMap((0..n).map(Entry::Fixed).collect())
    }

    pub fn from_fixed(map: &[usize]) -> Self {
        ParaMap(map.iter().copied().map(Entry::Fixed).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.0
    }

    pub fn entry(&self, i: usize) -> &Entry {
        &self.0[i]
    }

    pub fn set(&mut self, i: usize, e: Entry) {
        self.0[i] = e;
    }

    /// Product of candidate-set sizes, `None` while an entry is unbound.
    pub fn indeterminateness(&self) -> Option<BigUint> {
        let mut acc = BigUint::one();
        for e in &self.0 {
            acc *= e.size()? as u64;
        }
        Some(acc)
    }

    pub fn to_fixed(&self) -> Option<Vec<usize>> {
        self.0.iter().map(Entry::fixed).collect()
    }

    pub fn is_fixed(&self) -> bool {
        self.0.iter().all(|e| matches!(e, Entry::Fixed(_)))
    }

    /// Positions that are still sets or unbound.
    pub fn open_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i].fixed().is_none()).collect()
    }

    /// Intersects entry `i` with `allowed`. An unbound entry becomes
    /// `allowed`. Returns whether the entry shrank.
    pub fn restrict(&mut self, i: usize, allowed: &[usize]) -> Result<bool, EmptyEntry> {
        let next = match &self.0[i] {
            Entry::Unbound => Entry::from_candidates(allowed.to_vec()),
            e => {
                let cur = e.candidates().unwrap();
                let kept: Vec<usize> = cur.iter().copied().filter(|x| allowed.contains(x)).collect();
                if kept.len() == cur.len() {
                    return Ok(false);
                }
                Entry::from_candidates(kept)
            }
        };
        match next {
            None => Err(EmptyEntry(i)),
            Some(e) => {
                let changed = e != self.0[i];
                self.0[i] = e;
                Ok(changed)
            }
        }
    }

    /// Entrywise intersection with another map; unbound entries of `other`
    /// impose nothing.
    pub fn intersect(&mut self, other: &ParaMap) -> Result<bool, EmptyEntry> {
        let mut changed = false;
        for i in 0..self.len() {
            if let Some(c) = other.0[i].candidates() {
                changed |= self.restrict(i, c)?;
            }
        }
        Ok(changed)
    }

    /// Whether the fixed map `map` is compatible with every entry.
    pub fn admits(&self, map: &[usize]) -> bool {
        map.len() == self.len()
            && self.0.iter().zip(map).all(|(e, &x)| matches!(e, Entry::Unbound) || e.contains(x))
    }

    /// 1-based JSON encoding: integer, list of integers, or null.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|e| match e {
                    Entry::Unbound => Value::Null,
                    Entry::Fixed(x) => json!(x + 1),
                    Entry::Set(s) => json!(s.iter().map(|x| x + 1).collect::<Vec<_>>()),
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let arr = v.as_array().ok_or("parametrized map must be a list")?;
        let one = |x: &Value| -> Result<usize, String> {
            x.as_u64()
                .filter(|&k| k >= 1)
                .map(|k| k as usize - 1)
                .ok_or_else(|| format!("bad class index {x}"))
        };
        let mut out = Vec::with_capacity(arr.len());
        for (i, x) in arr.iter().enumerate() {
            out.push(match x {
                Value::Null => Entry::Unbound,
                Value::Array(list) => {
                    let c = list.iter().map(one).collect::<Result<Vec<_>, _>>()?;
                    Entry::from_candidates(c).ok_or_else(|| format!("empty candidate list at position {}", i + 1))?
                }
                _ => Entry::Fixed(one(x)?),
            });
        }
        Ok(ParaMap(out))
    }
}

impl fmt::Display for ParaMap {
    /// GAP-like, 1-based: `[ 1, [ 3, 4 ], 2, , 5 ]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[ ")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match e {
                Entry::Unbound => {}
                Entry::Fixed(x) => write!(f, "{}", x + 1)?,
                Entry::Set(s) => {
                    let items: Vec<String> = s.iter().map(|x| (x + 1).to_string()).collect();
                    write!(f, "[ {} ]", items.join(", "))?;
                }
            }
        }
        write!(f, " ]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restrict_and_indeterminateness() {
        let mut m = ParaMap(vec![Entry::Fixed(0), Entry::Set(vec![1, 2, 3]), Entry::Set(vec![4, 5])]);
        assert_eq!(m.indeterminateness(), Some(BigUint::from(6u32)));
        assert_eq!(m.restrict(1, &[2, 3, 9]), Ok(true));
        assert_eq!(m.restrict(2, &[5]), Ok(true));
        assert_eq!(m.entry(2), &Entry::Fixed(5));
        assert_eq!(m.restrict(0, &[7]), Err(EmptyEntry(0)));
        assert_eq!(m.indeterminateness(), Some(BigUint::from(2u32)));
    }

    #[test]
    fn json_roundtrip() {
        let m = ParaMap(vec![Entry::Fixed(0), Entry::Set(vec![2, 3]), Entry::Unbound]);
        let v = m.to_json();
        assert_eq!(v, json!([1, [3, 4], null]));
        assert_eq!(ParaMap::from_json(&v).unwrap(), m);
        assert_eq!(m.to_string(), "[ 1, [ 3, 4 ],  ]");
    }
}
