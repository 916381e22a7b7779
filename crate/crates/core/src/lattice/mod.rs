//! Lattices of virtual characters: exact LLL reduction under the character
//! inner product and integral membership tests.

mod hnf;
mod linalg;
mod lll;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::classfun::{scalar_product, ClassFunError, ClassFunction};
use crate::table::ClassData;

pub use hnf::{hnf_with_transform, IntLattice};
pub use linalg::{inverse_rational, rank_mat, solution_mat, solve_rational};
pub use lll::{lll_gram, DependentBasis, LllResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("scalar product of {0} and {1} is not an integer")]
    NonIntegralGram(usize, usize),
    #[error(transparent)]
    ClassFun(#[from] ClassFunError),
}

/// Output of [`lll_reduce`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LllReduction {
    pub irreducibles: Vec<ClassFunction>,
    pub remainders: Vec<ClassFunction>,
    /// Gram matrix of the remainders.
    pub gram: Vec<Vec<BigInt>>,
}

fn combine(coeffs: &[BigInt], vecs: &[ClassFunction]) -> ClassFunction {
    let n = vecs.first().map_or(0, |v| v.len());
    let mut out = ClassFunction::zero(n);
    for (c, v) in coeffs.iter().zip(vecs) {
        if !c.is_zero() {
            out = out.add(&v.scale_int(c));
        }
    }
    out
}

fn integral_gram<T: ClassData + ?Sized>(t: &T, chars: &[ClassFunction]) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    let n = chars.len();
    let mut g = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let s = scalar_product(t, &chars[i], &chars[j])?;
            if !s.is_integer() {
                return Err(LatticeError::NonIntegralGram(i, j));
            }
            g[i][j] = s.to_integer();
            g[j][i] = g[i][j].clone();
        }
    }
    Ok(g)
}

/// Greedy choice of a maximal linearly independent subset by incremental
/// Gram–Schmidt on the Gram matrix.
fn independent_subset(g: &[Vec<BigInt>]) -> Vec<usize> {
    let n = g.len();
    let mut chosen: Vec<usize> = Vec::new();
    let mut inv: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..n {
        let mut trial = chosen.clone();
        trial.push(i);
        let sub: Vec<Vec<BigRational>> = trial
            .iter()
            .map(|&a| trial.iter().map(|&b| BigRational::from_integer(g[a][b].clone())).collect())
            .collect();
        // Schur complement of the new vector against the chosen ones
        let v: Vec<BigRational> = chosen.iter().map(|&a| BigRational::from_integer(g[a][i].clone())).collect();
        let proj: BigRational = (0..chosen.len())
            .map(|r| (0..chosen.len()).map(|c| &v[r] * &inv[r][c] * &v[c]).sum::<BigRational>())
            .sum();
        let residual = BigRational::from_integer(g[i][i].clone()) - proj;
        if residual.is_positive() {
            chosen = trial;
            inv = inverse_rational(&sub).expect("positive definite");
        }
    }
    chosen
}

/// A lattice spanned by virtual characters, stored through rational
/// coordinates over an independent subset of the generators.
#[derive(Clone, Debug)]
pub struct CharacterLattice {
    pub generators: Vec<ClassFunction>,
    subset: Vec<usize>,
    gram_inverse: Vec<Vec<BigRational>>,
    denominator: BigInt,
    ints: IntLattice,
}

impl CharacterLattice {
    pub fn new<T: ClassData + ?Sized>(t: &T, generators: &[ClassFunction]) -> Result<Self, LatticeError> {
        let g = integral_gram(t, generators)?;
        Ok(Self::from_gram(generators, &g))
    }

    fn from_gram(generators: &[ClassFunction], g: &[Vec<BigInt>]) -> Self {
        let subset = independent_subset(g);
        let gss: Vec<Vec<BigRational>> = subset
            .iter()
            .map(|&a| subset.iter().map(|&b| BigRational::from_integer(g[a][b].clone())).collect())
            .collect();
        let gram_inverse = inverse_rational(&gss).unwrap_or_default();
        let coords: Vec<Vec<BigRational>> = (0..generators.len())
            .map(|j| {
                let rhs: Vec<BigRational> = subset.iter().map(|&a| BigRational::from_integer(g[a][j].clone())).collect();
                mat_vec(&gram_inverse, &rhs)
            })
            .collect();
        let denominator = coords.iter().flatten().fold(BigInt::one(), |d, q| d.lcm(q.denom()));
        let rows: Vec<Vec<BigInt>> = coords.iter().map(|c| scale_to_int(c, &denominator)).collect();
        let ints = IntLattice::new(&rows);
        CharacterLattice { generators: generators.to_vec(), subset, gram_inverse, denominator, ints }
    }

    pub fn rank(&self) -> usize {
        self.subset.len()
    }

    /// Integer coefficients `c` with `target = Σ c_i generators[i]`, if the
    /// target lies in the lattice. Verified value by value.
    pub fn solve<T: ClassData + ?Sized>(&self, t: &T, target: &ClassFunction) -> Result<Option<Vec<BigInt>>, LatticeError> {
        let rhs: Vec<BigRational> =
            self.subset.iter().map(|&a| scalar_product(t, &self.generators[a], target)).collect::<Result<_, _>>()?;
        let x = mat_vec(&self.gram_inverse, &rhs);
        let scaled: Vec<BigRational> = x.iter().map(|q| q * BigRational::from_integer(self.denominator.clone())).collect();
        if scaled.iter().any(|q| !q.is_integer()) {
            return Ok(None);
        }
        let ints: Vec<BigInt> = scaled.iter().map(|q| q.to_integer()).collect();
        let Some(c) = self.ints.solve(&ints) else { return Ok(None) };
        if combine(&c, &self.generators) != *target {
            return Ok(None);
        }
        Ok(Some(c))
    }

    /// A basis of the lattice, as integer combinations of the generators.
    pub fn basis(&self) -> Vec<ClassFunction> {
        self.ints.transform().iter().map(|row| combine(row, &self.generators)).collect()
    }
}

fn mat_vec(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn scale_to_int(v: &[BigRational], d: &BigInt) -> Vec<BigInt> {
    v.iter().map(|q| (q * BigRational::from_integer(d.clone())).to_integer()).collect()
}

/// LLL-reduces the lattice spanned by `chars` (δ = 3/4). Reduced vectors
/// of norm 1 are returned as irreducibles with positive degree; the others
/// as remainders.
pub fn lll_reduce<T: ClassData + ?Sized>(t: &T, chars: &[ClassFunction]) -> Result<LllReduction, LatticeError> {
    if chars.is_empty() {
        return Ok(LllReduction::default());
    }
    let g = integral_gram(t, chars)?;
    let lat = CharacterLattice::from_gram(chars, &g);
    let u = lat.ints.transform();
    // Gram of the Hermite basis: U G U^T
    let ug: Vec<Vec<BigInt>> = u
        .iter()
        .map(|row| (0..chars.len()).map(|j| row.iter().zip(&g).map(|(a, gr)| a * &gr[j]).sum()).collect())
        .collect();
    let gb: Vec<Vec<BigInt>> =
        ug.iter().map(|r| u.iter().map(|s| r.iter().zip(s).map(|(a, b)| a * b).sum()).collect()).collect();
    let red = lll_gram(&gb).expect("Hermite basis is independent");
    let basis = lat.basis();
    let mut out = LllReduction::default();
    let mut rem_idx = Vec::new();
    for (k, row) in red.transform.iter().enumerate() {
        let v = combine(row, &basis);
        if red.gram[k][k].is_one() {
            let v = if v.degree().is_some_and(|d| d.is_negative()) { v.neg() } else { v };
            out.irreducibles.push(v);
        } else {
            rem_idx.push(k);
            out.remainders.push(v);
        }
    }
    out.gram = rem_idx.iter().map(|&a| rem_idx.iter().map(|&b| red.gram[a][b].clone()).collect()).collect();
    Ok(out)
}

/// Integer coefficients expressing `target` in the generators `basis`, if
/// `target` lies in their integral span.
pub fn integral_membership<T: ClassData + ?Sized>(
    t: &T,
    basis: &[ClassFunction],
    target: &ClassFunction,
) -> Result<Option<Vec<BigInt>>, LatticeError> {
    CharacterLattice::new(t, basis)?.solve(t, target)
}
