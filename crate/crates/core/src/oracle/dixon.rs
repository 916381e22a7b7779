//! Simultaneous eigenvectors of the class matrices over a prime field.

pub(super) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub(super) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Smallest prime `p ≡ 1 (mod e)` with `p > bound`.
pub(super) fn lifting_prime(e: u64, bound: u64) -> u64 {
    let mut p = e + 1;
    while p <= bound || !crate::numtheory::is_prime(p) {
        p += e;
    }
    p
}

/// A primitive `e`-th root of unity mod `p`, derived from the smallest
/// generator of the multiplicative group.
pub(super) fn root_of_unity(e: u64, p: u64) -> u64 {
    let qs = crate::numtheory::prime_divisors(p - 1);
    let g = (2..p).find(|&g| qs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).expect("field has a generator");
    pow_mod(g, (p - 1) / e, p)
}

/// Row echelon basis with pivot columns; rows are normalized to pivot 1
/// and reduced with respect to each other.
#[derive(Clone, Debug)]
pub(super) struct Subspace {
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

fn rref(mut m: Vec<Vec<u64>>, p: u64) -> Subspace {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..m.len()).find(|&k| m[k][c] != 0) else { continue };
        m.swap(r, k);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for k in 0..m.len() {
            if k != r && m[k][c] != 0 {
                let f = m[k][c];
                for j in 0..cols {
                    m[k][j] = (m[k][j] + p - f * m[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Subspace { rows: m, pivots }
}

/// Null space of a square matrix acting on column vectors.
fn null_space(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let e = rref(a.to_vec(), p);
    let free: Vec<usize> = (0..n).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in e.rows.iter().zip(&e.pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Splits `F_p^k` into common eigenspaces of the matrices `mats` (each acts
/// on column vectors). Returns one spanning vector per 1-dimensional
/// eigenspace, or `None` if the space does not split completely.
pub(super) fn common_eigenvectors(mats: &[Vec<Vec<u64>>], k: usize, p: u64) -> Option<Vec<Vec<u64>>> {
    let id: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
    let mut spaces = vec![rref(id, p)];
    for a in mats {
        if spaces.iter().all(|s| s.rows.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for s in spaces {
            let d = s.rows.len();
            if d == 1 {
                next.push(s);
                continue;
            }
            // restricted action in the basis s.rows: coordinates are the
            // entries at the pivot columns
            let images: Vec<Vec<u64>> = s
                .rows
                .iter()
                .map(|b| (0..k).map(|i| a[i].iter().zip(b).fold(0, |acc, (x, y)| (acc + x * y) % p)).collect())
                .collect();
            let coords: Vec<Vec<u64>> = images.iter().map(|v| s.pivots.iter().map(|&c| v[c]).collect()).collect();
            // column j of r is coords[j]
            let r: Vec<Vec<u64>> = (0..d).map(|i| (0..d).map(|j| coords[j][i]).collect()).collect();
            let mut total = 0;
            for lambda in 0..p {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|i| (0..d).map(|j| if i == j { (r[i][j] + p - lambda) % p } else { r[i][j] }).collect())
                    .collect();
                let ns = null_space(&shifted, p);
                if ns.is_empty() {
                    continue;
                }
                total += ns.len();
                let vecs: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|c| {
                        (0..k)
                            .map(|col| s.rows.iter().zip(c).fold(0, |acc, (row, x)| (acc + row[col] * x) % p))
                            .collect()
                    })
                    .collect();
                next.push(rref(vecs, p));
                if total == d {
                    break;
                }
            }
            if total != d {
                return None;
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.rows.len() != 1) {
        return None;
    }
    Some(spaces.into_iter().map(|s| s.rows.into_iter().next().unwrap()).collect())
}
