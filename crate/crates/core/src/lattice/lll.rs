use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Result of [`lll_gram`]: `transform` rows express the reduced basis in
/// the input basis, `gram` is the Gram matrix of the reduced basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LllResult {
    pub transform: Vec<Vec<BigInt>>,
    pub gram: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DependentBasis;

struct State {
    n: usize,
    g: Vec<Vec<BigInt>>,
    h: Vec<Vec<BigInt>>,
    lambda: Vec<Vec<BigInt>>,
    // d[0] = 1, d[i + 1] = Gram determinant of the first i + 1 vectors
    d: Vec<BigInt>,
}

impl State {
    fn redi(&mut self, k: usize, l: usize) {
        let dl = &self.d[l + 1];
        if (&self.lambda[k][l] * BigInt::from(2)).abs() <= *dl {
            return;
        }
        // nearest integer to lambda / d_l
        let q = (&self.lambda[k][l] * BigInt::from(2) + dl).div_floor(&(dl * BigInt::from(2)));
        if q.is_zero() {
            return;
        }
        let hl = self.h[l].clone();
        for (x, y) in self.h[k].iter_mut().zip(&hl) {
            *x -= &q * y;
        }
        // b_k <- b_k - q b_l in the Gram matrix
        let n = self.n;
        let gkl = self.g[k][l].clone();
        let gll = self.g[l][l].clone();
        for j in 0..n {
            if j != k {
                let v = &self.g[k][j] - &q * &self.g[l][j];
                self.g[k][j] = v.clone();
                self.g[j][k] = v;
            }
        }
        self.g[k][k] = &self.g[k][k] - &q * &gkl * 2 + &q * &q * gll;
        self.lambda[k][l] = &self.lambda[k][l] - &q * &self.d[l + 1];
        for i in 0..l {
            let v = &self.lambda[k][i] - &q * &self.lambda[l][i];
            self.lambda[k][i] = v;
        }
    }

    fn swapi(&mut self, k: usize, kmax: usize) {
        self.h.swap(k, k - 1);
        self.g.swap(k, k - 1);
        for row in self.g.iter_mut() {
            row.swap(k, k - 1);
        }
        for j in 0..k - 1 {
            let (a, b) = (self.lambda[k][j].clone(), self.lambda[k - 1][j].clone());
            self.lambda[k][j] = b;
            self.lambda[k - 1][j] = a;
        }
        let lam = self.lambda[k][k - 1].clone();
        let dk = self.d[k + 1].clone();
        let dk1 = self.d[k].clone();
        let dk2 = self.d[k - 1].clone();
        let b = (&dk2 * &dk + &lam * &lam) / &dk1;
        for i in k + 1..=kmax {
            let t = self.lambda[i][k].clone();
            self.lambda[i][k] = (&dk * &self.lambda[i][k - 1] - &lam * &t) / &dk1;
            self.lambda[i][k - 1] = (&b * &t + &lam * &self.lambda[i][k]) / &dk;
        }
        self.d[k] = b;
    }
}

/// Integral LLL with `δ = 3/4` on a positive definite integral Gram
/// matrix, entirely in integer arithmetic.
pub fn lll_gram(gram: &[Vec<BigInt>]) -> Result<LllResult, DependentBasis> {
    let n = gram.len();
    let id = (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut s = State {
        n,
        g: gram.to_vec(),
        h: id,
        lambda: vec![vec![BigInt::zero(); n]; n],
        d: vec![BigInt::zero(); n + 1],
    };
    if n == 0 {
        return Ok(LllResult { transform: Vec::new(), gram: Vec::new() });
    }
    s.d[0] = BigInt::one();
    s.d[1] = s.g[0][0].clone();
    if s.d[1].is_zero() {
        return Err(DependentBasis);
    }
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = s.g[k][j].clone();
                for i in 0..j {
                    u = (&s.d[i + 1] * &u - &s.lambda[k][i] * &s.lambda[j][i]) / &s.d[i];
                }
                if j < k {
                    s.lambda[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(DependentBasis);
                    }
                    s.d[k + 1] = u;
                }
            }
        }
        loop {
            s.redi(k, k - 1);
            let lam = &s.lambda[k][k - 1];
            let lhs = &s.d[k + 1] * &s.d[k - 1] * 4;
            let rhs = &s.d[k] * &s.d[k] * 3 - lam * lam * 4;
            if lhs < rhs {
                s.swapi(k, kmax);
                if k > 1 {
                    k -= 1;
                }
            } else {
                for l in (0..k - 1).rev() {
                    s.redi(k, l);
                }
                k += 1;
                break;
            }
        }
    }
    Ok(LllResult { transform: s.h, gram: s.g })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn gram(b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        b.iter().map(|x| b.iter().map(|y| x.iter().zip(y).map(|(a, c)| a * c).sum()).collect()).collect()
    }

    #[test]
    fn reduces_classic_example() {
        let b = m(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        let r = lll_gram(&gram(&b)).unwrap();
        let diag: Vec<BigInt> = (0..3).map(|i| r.gram[i][i].clone()).collect();
        assert_eq!(diag, vec![BigInt::from(1), BigInt::from(2), BigInt::from(5)]);
        // reduced Gram equals Gram of transformed basis
        let nb: Vec<Vec<BigInt>> = r
            .transform
            .iter()
            .map(|t| (0..3).map(|j| (0..3).map(|i| &t[i] * &b[i][j]).sum()).collect())
            .collect();
        assert_eq!(gram(&nb), r.gram);
    }

    #[test]
    fn dependent_detected() {
        let b = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(lll_gram(&gram(&b)), Err(DependentBasis));
    }
}
