use std::fmt;

/// A permutation of `0..degree` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// `other^-1 * self * other` in left-to-right composition.
    pub fn conjugate_by(&self, other: &Perm) -> Perm {
        other.inverse().then(self).then(other)
    }

    pub fn pow(&self, mut n: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            n >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut ord: u64 = 1;
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }

    /// Parses cycle notation with 1-based points, e.g. `(1,2,3)(4,5)`.
    pub fn parse(s: &str, degree: usize) -> Result<Perm, String> {
        let points = crate::table::parse_cycles(s, degree)?;
        Ok(Perm(points.into_iter().map(|x| x as u32).collect()))
    }

    /// Largest point mentioned in a cycle string.
    pub fn max_point(s: &str) -> usize {
        s.split(|c: char| !c.is_ascii_digit()).filter_map(|x| x.parse::<usize>().ok()).max().unwrap_or(1)
    }

    /// Extends to a larger degree by fixing the new points.
    pub fn extend(&self, degree: usize) -> Perm {
        let mut v = self.0.clone();
        v.extend(self.0.len() as u32..degree as u32);
        Perm(v)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for s in 0..self.0.len() {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push((x + 1).to_string());
                x = self.0[x] as usize;
            }
            write!(f, "({})", cyc.join(","))?;
            any = true;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a `;`-separated generator list; all generators share the degree
/// of the largest point mentioned.
pub fn parse_generators(s: &str) -> Result<Vec<Perm>, String> {
    let parts: Vec<&str> = s.split(';').map(str::trim).filter(|x| !x.is_empty()).collect();
    if parts.is_empty() {
        return Err("no generators given".into());
    }
    let degree = parts.iter().map(|p| Perm::max_point(p)).max().unwrap_or(1);
    parts.iter().map(|p| Perm::parse(p, degree)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_order() {
        let a = Perm::parse("(1,2,3)", 3).unwrap();
        let b = Perm::parse("(1,2)", 3).unwrap();
        assert_eq!(a.order(), 3);
        assert_eq!(a.then(&b).order(), 2);
        assert!(a.pow(3).is_identity());
        assert_eq!(a.to_string(), "(1,2,3)");
        assert_eq!(b.conjugate_by(&a).order(), 2);
    }
}
