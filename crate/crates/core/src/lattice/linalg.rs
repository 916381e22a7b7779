use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::Cyclotomic;

/// Row echelon form over the cyclotomics, returning pivot columns.
fn echelon(mut m: Vec<Vec<Cyclotomic>>) -> (Vec<Vec<Cyclotomic>>, Vec<usize>) {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else { continue };
        m.swap(r, k);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
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
    (m, pivots)
}

pub fn rank_mat(m: &[Vec<Cyclotomic>]) -> usize {
    echelon(m.to_vec()).1.len()
}

/// A vector `x` with `x * mat = rhs` (rows of `mat` combined), if one exists.
pub fn solution_mat(mat: &[Vec<Cyclotomic>], rhs: &[Cyclotomic]) -> Option<Vec<Cyclotomic>> {
    let rows = mat.len();
    if rows == 0 {
        return rhs.iter().all(Cyclotomic::is_zero).then(Vec::new);
    }
    let cols = rhs.len();
    // Solve mat^T x = rhs: augment the transpose.
    let aug: Vec<Vec<Cyclotomic>> = (0..cols)
        .map(|j| {
            let mut row: Vec<Cyclotomic> = (0..rows).map(|i| mat[i][j].clone()).collect();
            row.push(rhs[j].clone());
            row
        })
        .collect();
    let (e, pivots) = echelon(aug);
    if pivots.last() == Some(&rows) {
        return None;
    }
    let mut x = vec![Cyclotomic::zero(); rows];
    for (row, &pc) in e.iter().zip(&pivots) {
        x[pc] = row[rows].clone();
    }
    Some(x)
}

/// Rational Gaussian elimination: solves `a x = b` for square invertible `a`.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let k = (c..n).find(|&k| !m[k][c].is_zero())?;
        m.swap(c, k);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        let pr = m[c].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Inverse of a square rational matrix.
pub fn inverse_rational(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let k = (c..n).find(|&k| !m[k][c].is_zero())?;
        m.swap(c, k);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        let pr = m[c].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: i64) -> Cyclotomic {
        Cyclotomic::from_integer(x)
    }

    #[test]
    fn solve_small() {
        let mat = vec![vec![c(1), c(0), c(1)], vec![c(0), c(1), c(1)]];
        assert_eq!(solution_mat(&mat, &[c(2), c(3), c(5)]), Some(vec![c(2), c(3)]));
        assert_eq!(solution_mat(&mat, &[c(2), c(3), c(4)]), None);
        assert_eq!(rank_mat(&mat), 2);
    }
}
