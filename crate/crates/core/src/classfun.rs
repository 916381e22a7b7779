//! Class functions and the operations the verification needs on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cyclo::Cyclotomic;
use crate::fusion::ParaMap;
use crate::numtheory::{chinese_remainder, prime_divisors};
use crate::powermap;
use crate::table::ClassData;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassFunError {
    #[error("class function has length {got}, table has {expected} classes")]
    LengthMismatch { got: usize, expected: usize },
    #[error("scalar product is not rational")]
    Irrational,
    #[error("fusion map is inconsistent at subgroup class {0}")]
    InconsistentMap(usize),
    #[error("map entry {0} is not a fixed class")]
    UnboundEntry(usize),
    #[error("power map needed for class {0} is missing")]
    MissingPowerMap(usize),
    #[error("class {class}: congruence and bound admit no value")]
    Contradiction { class: usize },
}

/// Values of a class function, one per class, in class order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ClassFunction(Vec<Cyclotomic>);

impl ClassFunction {
    pub fn new(values: Vec<Cyclotomic>) -> Self {
        ClassFunction(values)
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(values: I) -> Self {
        ClassFunction(values.into_iter().map(Cyclotomic::from_integer).collect())
    }

    pub fn from_bigints(values: &[BigInt]) -> Self {
        ClassFunction(values.iter().cloned().map(Cyclotomic::from_integer).collect())
    }

    pub fn zero(n: usize) -> Self {
        ClassFunction(vec![Cyclotomic::zero(); n])
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Cyclotomic> {
        self.0
    }

    pub fn as_slice(&self) -> &[Cyclotomic] {
        &self.0
    }

    /// Value at the identity class if it is a rational integer.
    pub fn degree(&self) -> Option<BigInt> {
        self.0.first()?.to_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Cyclotomic::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.0.iter().all(Cyclotomic::is_rational)
    }

    /// Integer values, if all values are rational integers.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0.iter().map(Cyclotomic::to_integer).collect()
    }

    pub fn complex_conjugate(&self) -> Self {
        ClassFunction(self.0.iter().map(Cyclotomic::complex_conjugate).collect())
    }

    pub fn galois(&self, k: i64) -> Result<Self, crate::cyclo::CycloError> {
        Ok(ClassFunction(self.0.iter().map(|v| v.galois(k)).collect::<Result<_, _>>()?))
    }

    pub fn add(&self, other: &Self) -> Self {
        ClassFunction(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        ClassFunction(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        ClassFunction(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        ClassFunction(self.0.iter().map(|a| a.scale(q)).collect())
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(k.clone()))
    }

    /// `self - q * other` without forming the intermediate scaled function.
    fn sub_multiple(&self, q: &BigRational, other: &Self) -> Self {
        ClassFunction(self.0.iter().zip(&other.0).map(|(a, b)| a - &b.scale(q)).collect())
    }
}

impl Deref for ClassFunction {
    type Target = [Cyclotomic];
    fn deref(&self) -> &[Cyclotomic] {
        &self.0
    }
}

impl Index<usize> for ClassFunction {
    type Output = Cyclotomic;
    fn index(&self, i: usize) -> &Cyclotomic {
        &self.0[i]
    }
}

impl fmt::Display for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[ ")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, " ]")
    }
}

impl ClassFunction {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.0.iter().map(Cyclotomic::to_json).collect())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let a = v.as_array().ok_or("class function must be a JSON list")?;
        a.iter().map(|x| Cyclotomic::from_json(x).map_err(|e| e.to_string())).collect()
    }
}

/// A JSON list of class functions; a single flat list is read as one.
pub fn chars_from_json(v: &serde_json::Value) -> Result<Vec<ClassFunction>, String> {
    let a = v.as_array().ok_or("expected a JSON list")?;
    if a.iter().all(|x| x.is_array()) && !a.is_empty() {
        a.iter().map(ClassFunction::from_json).collect()
    } else {
        Ok(vec![ClassFunction::from_json(v)?])
    }
}

impl FromIterator<Cyclotomic> for ClassFunction {
    fn from_iter<I: IntoIterator<Item = Cyclotomic>>(iter: I) -> Self {
        ClassFunction(iter.into_iter().collect())
    }
}

fn check_len<T: ClassData + ?Sized>(t: &T, f: &ClassFunction) -> Result<(), ClassFunError> {
    if f.len() == t.class_count() {
        Ok(())
    } else {
        Err(ClassFunError::LengthMismatch { got: f.len(), expected: t.class_count() })
    }
}

/// `(1/|G|) Σ |class_i| χ(i) conj(ψ(i))` as a cyclotomic number.
pub fn inner_product<T: ClassData + ?Sized>(
    t: &T,
    chi: &ClassFunction,
    psi: &ClassFunction,
) -> Result<Cyclotomic, ClassFunError> {
    check_len(t, chi)?;
    check_len(t, psi)?;
    let cents = t.centralizer_orders();
    // Rational values are the common case; sum them with one denominator.
    let mut rational = BigRational::zero();
    let mut other = Cyclotomic::zero();
    for i in 0..chi.len() {
        if chi[i].is_zero() || psi[i].is_zero() {
            continue;
        }
        let c = BigRational::from_integer(BigInt::from(cents[i].clone()));
        match (chi[i].to_rational(), psi[i].to_rational()) {
            (Some(a), Some(b)) => rational += a * b / c,
            _ => other += &(&chi[i] * &psi[i].complex_conjugate()).scale(&c.recip()),
        }
    }
    Ok(&other + &Cyclotomic::from_rational(rational))
}

/// Scalar product of class functions whose product is rational-valued in
/// total (always the case for characters).
pub fn scalar_product<T: ClassData + ?Sized>(
    t: &T,
    chi: &ClassFunction,
    psi: &ClassFunction,
) -> Result<BigRational, ClassFunError> {
    inner_product(t, chi, psi)?.to_rational().ok_or(ClassFunError::Irrational)
}

pub fn norm<T: ClassData + ?Sized>(t: &T, chi: &ClassFunction) -> Result<BigRational, ClassFunError> {
    scalar_product(t, chi, chi)
}

/// Scalar products with each of `irr`.
pub fn decompose<T: ClassData + ?Sized>(
    t: &T,
    irr: &[ClassFunction],
    chi: &ClassFunction,
) -> Result<Vec<BigRational>, ClassFunError> {
    irr.iter().map(|x| scalar_product(t, chi, x)).collect()
}

/// Whether every scalar product with `irr` is a nonnegative integer.
pub fn decomposes_nonnegatively<T: ClassData + ?Sized>(
    t: &T,
    irr: &[ClassFunction],
    chi: &ClassFunction,
) -> Result<bool, ClassFunError> {
    Ok(decompose(t, irr, chi)?.iter().all(|m| m.is_integer() && !m.is_negative()))
}

pub fn tensor(chi: &ClassFunction, psi: &ClassFunction) -> Result<ClassFunction, ClassFunError> {
    if chi.len() != psi.len() {
        return Err(ClassFunError::LengthMismatch { got: psi.len(), expected: chi.len() });
    }
    Ok(chi.iter().zip(psi.iter()).map(|(a, b)| a * b).collect())
}

/// Checks that a total fusion map respects element orders and
/// centralizer divisibility.
pub fn check_fusion_map<S: ClassData + ?Sized, A: ClassData + ?Sized>(
    sub: &S,
    amb: &A,
    map: &[usize],
) -> Result<(), ClassFunError> {
    if map.len() != sub.class_count() {
        return Err(ClassFunError::LengthMismatch { got: map.len(), expected: sub.class_count() });
    }
    for (i, &j) in map.iter().enumerate() {
        let ok = j < amb.class_count()
            && sub.element_orders()[i] == amb.element_orders()[j]
            && (&amb.centralizer_orders()[j] % &sub.centralizer_orders()[i]).is_zero();
        if !ok {
            return Err(ClassFunError::InconsistentMap(i));
        }
    }
    Ok(())
}

/// `χ^G(j) = |C_G(j)| Σ_{map(i)=j} χ(i)/|C_H(i)|`.
pub fn induce_by_fusion<S: ClassData + ?Sized, A: ClassData + ?Sized>(
    sub: &S,
    amb: &A,
    chars: &[ClassFunction],
    map: &[usize],
) -> Result<Vec<ClassFunction>, ClassFunError> {
    check_fusion_map(sub, amb, map)?;
    let n = amb.class_count();
    chars
        .iter()
        .map(|chi| {
            check_len(sub, chi)?;
            let mut vals = vec![Cyclotomic::zero(); n];
            for (i, &j) in map.iter().enumerate() {
                let w = BigRational::new(1.into(), BigInt::from(sub.centralizer_orders()[i].clone()));
                vals[j] += &chi[i].scale(&w);
            }
            for (j, v) in vals.iter_mut().enumerate() {
                if !v.is_zero() {
                    *v = v.scale(&BigRational::from_integer(BigInt::from(amb.centralizer_orders()[j].clone())));
                }
            }
            Ok(ClassFunction(vals))
        })
        .collect()
}

/// Restriction or inflation: `result(i) = f(map(i))`.
pub fn pull_back(f: &ClassFunction, map: &[usize]) -> Result<ClassFunction, ClassFunError> {
    map.iter()
        .map(|&j| f.0.get(j).cloned().ok_or(ClassFunError::InconsistentMap(j)))
        .collect()
}

/// Pull-back along a parametrized map whose entries must all be fixed.
pub fn pull_back_para(f: &ClassFunction, map: &ParaMap) -> Result<ClassFunction, ClassFunError> {
    let fixed: Vec<usize> = map
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| e.fixed().ok_or(ClassFunError::UnboundEntry(i)))
        .collect::<Result<_, _>>()?;
    pull_back(f, &fixed)
}

/// Symmetric and antisymmetric squares.
pub fn symmetrize2<T: ClassData + ?Sized>(
    t: &T,
    chi: &ClassFunction,
) -> Result<(ClassFunction, ClassFunction), ClassFunError> {
    check_len(t, chi)?;
    let half = BigRational::new(1.into(), 2.into());
    let mut sym = Vec::with_capacity(chi.len());
    let mut alt = Vec::with_capacity(chi.len());
    for i in 0..chi.len() {
        let sq = powermap::power_class(t, i, 2).ok_or(ClassFunError::MissingPowerMap(i))?;
        let a = &chi[i] * &chi[i];
        sym.push((&a + &chi[sq]).scale(&half));
        alt.push((&a - &chi[sq]).scale(&half));
    }
    Ok((ClassFunction(sym), ClassFunction(alt)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicMode {
    /// Every linear character of each cyclic subgroup, the trivial one included.
    All,
    /// Only the trivial character of each cyclic subgroup.
    LinearOnly,
}

/// Characters induced from the cyclic subgroups generated by
/// representatives of `classes`, deduplicated in first-seen order.
pub fn induced_cyclic<T: ClassData + ?Sized>(
    t: &T,
    classes: &[usize],
    mode: CyclicMode,
) -> Result<Vec<ClassFunction>, ClassFunError> {
    let n = t.class_count();
    let cents = t.centralizer_orders();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for &c in classes {
        let d = t.element_orders()[c];
        let images: Vec<usize> = (0..d)
            .map(|k| powermap::power_class(t, c, k).ok_or(ClassFunError::MissingPowerMap(c)))
            .collect::<Result<_, _>>()?;
        let exps: Vec<u64> = match mode {
            CyclicMode::All => (0..d).collect(),
            CyclicMode::LinearOnly => vec![0],
        };
        let scale: Vec<BigRational> =
            (0..n).map(|x| BigRational::new(BigInt::from(cents[x].clone()), BigInt::from(d))).collect();
        for e in exps {
            let mut sums: BTreeMap<usize, Vec<(i64, BigRational)>> = BTreeMap::new();
            for (k, &x) in images.iter().enumerate() {
                sums.entry(x).or_default().push((((e * k as u64) % d) as i64, BigRational::one()));
            }
            let mut vals = vec![Cyclotomic::zero(); n];
            for (x, terms) in sums {
                let v = crate::cyclo::normalize(d as u32, terms).expect("positive order");
                vals[x] = v.scale(&scale[x]);
            }
            let f = ClassFunction(vals);
            if seen.insert(f.clone()) {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// Result of [`reduce`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reduction {
    pub irreducibles: Vec<ClassFunction>,
    pub remainders: Vec<ClassFunction>,
}

fn project_out<T: ClassData + ?Sized>(
    t: &T,
    chi: &ClassFunction,
    known: &[ClassFunction],
) -> Result<ClassFunction, ClassFunError> {
    let mut chi = chi.clone();
    for iota in known {
        let m = scalar_product(t, &chi, iota)?;
        if !m.is_zero() {
            chi = chi.sub_multiple(&m, iota);
        }
    }
    Ok(chi)
}

/// Removes all constituents in `known` from each of `chars`. Norm-1
/// results become new irreducibles (sign fixed by the degree) and are used
/// to reduce the rest in turn.
pub fn reduce<T: ClassData + ?Sized>(
    t: &T,
    known: &[ClassFunction],
    chars: &[ClassFunction],
) -> Result<Reduction, ClassFunError> {
    let mut pending: Vec<ClassFunction> = Vec::new();
    for chi in chars {
        check_len(t, chi)?;
        let r = project_out(t, chi, known)?;
        if !r.is_zero() {
            pending.push(r);
        }
    }
    let mut new_irr: Vec<ClassFunction> = Vec::new();
    loop {
        let mut found = Vec::new();
        let mut rest = Vec::new();
        for chi in pending {
            if norm(t, &chi)?.is_one() {
                let chi = if chi.degree().is_some_and(|d| d.is_negative()) { chi.neg() } else { chi };
                if !found.contains(&chi) && !new_irr.contains(&chi) {
                    found.push(chi);
                }
            } else {
                rest.push(chi);
            }
        }
        if found.is_empty() {
            pending = rest;
            break;
        }
        pending = Vec::new();
        for chi in rest {
            let r = project_out(t, &chi, &found)?;
            if !r.is_zero() {
                pending.push(r);
            }
        }
        new_irr.extend(found);
    }
    let mut remainders = Vec::new();
    let mut seen = BTreeSet::new();
    for chi in pending {
        if seen.insert(chi.clone()) {
            remainders.push(chi);
        }
    }
    Ok(Reduction { irreducibles: new_irr, remainders })
}

/// Outcome of [`complete_rational_character`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Completion {
    pub values: Vec<Option<BigInt>>,
    /// One line per class examined by the congruence step, then the
    /// orthogonality fill if it happened.
    pub log: Vec<String>,
    /// Classes examined whose value could not be decided.
    pub unresolved: Vec<usize>,
    pub orthogonality_sum: Option<BigInt>,
}

/// Fills missing values of a rational character from the congruences
/// `χ(g) ≡ χ(g^p) mod p` and the bound `χ(g)^2 < |C(g)|`, then, if exactly
/// one value is still missing and `orthogonal_to_trivial`, from
/// `Σ |class_i| χ(i) = 0`.
pub fn complete_rational_character<T: ClassData + ?Sized>(
    t: &T,
    partial: &[Option<BigInt>],
    orthogonal_to_trivial: bool,
) -> Result<Completion, ClassFunError> {
    let n = t.class_count();
    if partial.len() != n {
        return Err(ClassFunError::LengthMismatch { got: partial.len(), expected: n });
    }
    let mut chi = partial.to_vec();
    let mut log = Vec::new();
    let mut unresolved = Vec::new();
    let missing: Vec<usize> = (0..n).filter(|&i| chi[i].is_none()).collect();
    for &i in &missing {
        let ord = t.element_orders()[i];
        let divs = prime_divisors(ord);
        let images: Option<Vec<usize>> =
            divs.iter().map(|&p| t.prime_power_map(p).map(|m| m[i])).collect();
        let Some(images) = images else {
            unresolved.push(i);
            continue;
        };
        let Some(known) = images.iter().map(|&j| chi[j].clone()).collect::<Option<Vec<BigInt>>>() else {
            unresolved.push(i);
            continue;
        };
        let moduli: Vec<BigInt> = divs.iter().map(|&p| BigInt::from(p)).collect();
        let congr: Vec<BigInt> = known.iter().zip(&moduli).map(|(v, p)| v.mod_floor(p)).collect();
        let (res, modulus) = chinese_remainder(&congr, &moduli).expect("distinct primes");
        let c = BigInt::from(t.centralizer_orders()[i].clone());
        log.push(format!("|g| = {ord}, |C_M(g)| = {c}: value {res} modulo {modulus}"));
        let two_m = &modulus * 2;
        let hi = &res + &two_m;
        let lo = &res - &two_m;
        if &hi * &hi >= c && &lo * &lo >= c {
            let cand: Vec<BigInt> = [-1i32, 0, 1]
                .iter()
                .map(|&k| &res + &modulus * k)
                .filter(|a| a * a < c)
                .collect();
            match cand.len() {
                0 => return Err(ClassFunError::Contradiction { class: i }),
                1 => chi[i] = Some(cand[0].clone()),
                _ => unresolved.push(i),
            }
        } else {
            unresolved.push(i);
        }
    }
    let still: Vec<usize> = (0..n).filter(|&i| chi[i].is_none()).collect();
    let mut orthogonality_sum = None;
    if orthogonal_to_trivial && still.len() == 1 {
        let sizes: Vec<BigUint> = t.class_sizes();
        let m = still[0];
        let sum: BigInt = (0..n)
            .filter(|&i| i != m)
            .map(|i| BigInt::from(sizes[i].clone()) * chi[i].as_ref().unwrap())
            .sum();
        let size = BigInt::from(sizes[m].clone());
        let (q, r) = (-&sum).div_rem(&size);
        if r.is_zero() {
            log.push(format!("orthogonality: sum {sum}, value {q} on class {}", m + 1));
            chi[m] = Some(q);
            unresolved.retain(|&x| x != m);
        }
        orthogonality_sum = Some(sum);
    }
    Ok(Completion { values: chi, log, unresolved, orthogonality_sum })
}
