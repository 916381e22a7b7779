use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row Hermite normal form with transform: `transform * m = hnf`. Pivots
/// are positive, entries above a pivot reduced into `[0, pivot)`, zero rows
/// last. The pivot in each column is the entry of smallest absolute value,
/// ties broken by the lowest row.
pub fn hnf_with_transform(m: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h = m.to_vec();
    let mut u: Vec<Vec<BigInt>> =
        (0..rows).map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pick = (r..rows).filter(|&k| !h[k][c].is_zero()).min_by(|&a, &b| {
                h[a][c].abs().cmp(&h[b][c].abs()).then(a.cmp(&b))
            });
            let Some(p) = pick else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for k in r + 1..rows {
                if h[k][c].is_zero() {
                    continue;
                }
                let q = h[k][c].div_floor(&h[r][c]);
                sub_row(&mut h, k, r, &q);
                sub_row(&mut u, k, r, &q);
                if !h[k][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        for k in 0..r {
            let q = h[k][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                sub_row(&mut h, k, r, &q);
                sub_row(&mut u, k, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (h, u, pivots)
}

fn sub_row(m: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    let (a, b) = if target < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// A lattice of integer vectors given by generators, in Hermite form.
#[derive(Clone, Debug)]
pub struct IntLattice {
    /// Nonzero Hermite rows.
    pub basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    /// `basis[i] = Σ_j transform[i][j] * generators[j]`.
    transform: Vec<Vec<BigInt>>,
}

impl IntLattice {
    pub fn new(generators: &[Vec<BigInt>]) -> Self {
        let (h, u, pivots) = hnf_with_transform(generators);
        let r = pivots.len();
        IntLattice { basis: h[..r].to_vec(), pivots, transform: u[..r].to_vec() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates with respect to the Hermite basis, if `v` is in the lattice.
    pub fn solve_basis(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let (q, rem) = rest[pc].div_rem(&row[pc]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, y) in rest.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
            coeffs.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coeffs)
    }

    /// Coefficients with respect to the original generators.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let a = self.solve_basis(v)?;
        let n = self.transform.first().map_or(0, Vec::len);
        let mut out = vec![BigInt::zero(); n];
        for (ai, row) in a.iter().zip(&self.transform) {
            for (o, t) in out.iter_mut().zip(row) {
                *o += ai * t;
            }
        }
        Some(out)
    }

    /// Transform rows expressing the Hermite basis in the generators.
    pub fn transform(&self) -> &[Vec<BigInt>] {
        &self.transform
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn hnf_small() {
        let m = vec![v(&[2, 4, 4]), v(&[-6, 6, 12]), v(&[10, 4, 16])];
        let (h, u, piv) = hnf_with_transform(&m);
        // transform * m = h
        for i in 0..3 {
            for j in 0..3 {
                let s: BigInt = (0..3).map(|k| &u[i][k] * &m[k][j]).sum();
                assert_eq!(s, h[i][j]);
            }
        }
        assert_eq!(piv.len(), 3);
        assert!(h[0][0] > BigInt::zero());
    }

    #[test]
    fn membership() {
        let gens = vec![v(&[2, 0]), v(&[0, 3]), v(&[2, 3])];
        let l = IntLattice::new(&gens);
        assert_eq!(l.rank(), 2);
        assert!(l.solve(&v(&[1, 0])).is_none());
        let c = l.solve(&v(&[4, 6])).unwrap();
        let recon: Vec<BigInt> = (0..2).map(|j| (0..3).map(|i| &c[i] * &gens[i][j]).sum()).collect();
        assert_eq!(recon, v(&[4, 6]));
    }
}
