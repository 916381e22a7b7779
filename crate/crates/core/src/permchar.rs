//! Permutation characters: induced trivial characters over all possible
//! fusions, necessary conditions, and the search with a prescribed torso
//! and a central involution.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::classfun::{self, ClassFunError, ClassFunction};
use crate::cyclo::Cyclotomic;
use crate::fusion::{possible_class_fusions, FusionOptions};
use crate::numtheory::to_bigint;
use crate::table::{CharacterTable, ClassData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermCharError {
    #[error("no class fusion from {sub} into {amb}")]
    NoFusion { sub: String, amb: String },
    #[error("table {0} has no complete set of irreducibles")]
    MissingIrreducibles(String),
    #[error("torso is inconsistent with the nonfaithful character: {0}")]
    TorsoInconsistent(String),
    #[error("class {0} does not form a central subgroup of order 2 with the identity")]
    NotCentralInvolution(usize),
    #[error(transparent)]
    ClassFun(#[from] ClassFunError),
}

/// The distinct characters `1_H^G` over all possible fusions `H -> G`,
/// sorted. With `faithful_only`, only those with trivial kernel are kept.
pub fn trivial_induction_candidates(
    sub: &CharacterTable,
    amb: &CharacterTable,
    faithful_only: bool,
) -> Result<Vec<ClassFunction>, PermCharError> {
    let fusions = possible_class_fusions(sub, amb, &FusionOptions::default());
    if fusions.is_empty() {
        return Err(PermCharError::NoFusion { sub: sub.id.clone(), amb: amb.id.clone() });
    }
    let triv = [sub.trivial_character()];
    let mut out = Vec::new();
    for map in &fusions {
        out.push(classfun::induce_by_fusion(sub, amb, &triv, map)?.remove(0));
    }
    out.sort();
    out.dedup();
    if faithful_only {
        out.retain(|pi| amb.kernel(pi) == [0]);
    }
    Ok(out)
}

/// A failed necessary condition for a permutation character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermCharViolation {
    LengthMismatch,
    DegreeNotDivisor,
    NotInteger(usize),
    Negative(usize),
    ExceedsDegree(usize),
    PowerDecreases { class: usize, p: u64 },
    FixedPointsNotIntegral(usize),
    MultiplicityNotInteger(usize),
    NegativeMultiplicity(usize),
    NoTrivialConstituent,
}

impl fmt::Display for PermCharViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch => write!(f, "length differs from the class count"),
            Self::DegreeNotDivisor => write!(f, "degree does not divide the group order"),
            Self::NotInteger(i) => write!(f, "value on class {} is not a rational integer", i + 1),
            Self::Negative(i) => write!(f, "value on class {} is negative", i + 1),
            Self::ExceedsDegree(i) => write!(f, "value on class {} exceeds the degree", i + 1),
            Self::PowerDecreases { class, p } => {
                write!(f, "value on class {} exceeds the value on its {p}-th power", class + 1)
            }
            Self::FixedPointsNotIntegral(i) => write!(f, "class {} meets the point stabilizer in a non-integral count", i + 1),
            Self::MultiplicityNotInteger(i) => write!(f, "multiplicity of irreducible {} is not an integer", i + 1),
            Self::NegativeMultiplicity(i) => write!(f, "multiplicity of irreducible {} is negative", i + 1),
            Self::NoTrivialConstituent => write!(f, "the trivial character is not a constituent"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PermCharReport {
    pub violations: Vec<PermCharViolation>,
}

impl PermCharReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the standard necessary conditions on a candidate `π = 1_H^G`.
/// Multiplicity conditions are only tested if `t` has complete irreducibles.
pub fn check_perm_char_conditions(t: &CharacterTable, pi: &ClassFunction) -> PermCharReport {
    let mut v = Vec::new();
    if pi.len() != t.class_count() || pi.is_empty() {
        return PermCharReport { violations: vec![PermCharViolation::LengthMismatch] };
    }
    let ints: Vec<Option<BigInt>> = pi.iter().map(|x| x.to_integer()).collect();
    for (i, x) in ints.iter().enumerate() {
        match x {
            None => v.push(PermCharViolation::NotInteger(i)),
            Some(x) if x.is_negative() => v.push(PermCharViolation::Negative(i)),
            _ => {}
        }
    }
    let degree = ints[0].clone().filter(|d| d.is_positive());
    let order = to_bigint(&t.order);
    let sub_order = match &degree {
        Some(d) if (&order % d).is_zero() => Some(&order / d),
        _ => {
            v.push(PermCharViolation::DegreeNotDivisor);
            None
        }
    };
    if let Some(d) = &degree {
        for (i, x) in ints.iter().enumerate() {
            if x.as_ref().is_some_and(|x| x > d) {
                v.push(PermCharViolation::ExceedsDegree(i));
            }
        }
    }
    for (&p, map) in &t.power_maps {
        for (i, &j) in map.iter().enumerate() {
            if let (Some(a), Some(b)) = (&ints[i], ints.get(j).and_then(|x| x.as_ref())) {
                if a > b {
                    v.push(PermCharViolation::PowerDecreases { class: i, p });
                }
            }
        }
    }
    if let Some(h) = &sub_order {
        for (i, x) in ints.iter().enumerate() {
            if let Some(x) = x {
                if !(x * h % to_bigint(&t.centralizers[i])).is_zero() {
                    v.push(PermCharViolation::FixedPointsNotIntegral(i));
                }
            }
        }
    }
    if t.has_complete_irreducibles() {
        if let Ok(mults) = classfun::decompose(t, &t.irreducibles, pi) {
            for (k, m) in mults.iter().enumerate() {
                if !m.is_integer() {
                    v.push(PermCharViolation::MultiplicityNotInteger(k));
                } else if m.is_negative() {
                    v.push(PermCharViolation::NegativeMultiplicity(k));
                }
            }
            let triv = t.irreducibles.iter().position(|chi| chi.iter().all(|x| *x == Cyclotomic::one()));
            if triv.is_none_or(|k| mults[k] < BigRational::one()) {
                v.push(PermCharViolation::NoTrivialConstituent);
            }
        }
    }
    PermCharReport { violations: v }
}

/// Galois orbits of `chars`, each as the rational sum of
/// its members together with the orbit length.
fn rational_orbits(chars: &[&ClassFunction]) -> Vec<(Vec<BigRational>, usize)> {
    let mut seen = vec![false; chars.len()];
    let mut out = Vec::new();
    for a in 0..chars.len() {
        if seen[a] {
            continue;
        }
        let n = chars[a].iter().fold(1u64, |acc, x| acc.lcm(&u64::from(x.conductor())));
        let mut members = vec![a];
        seen[a] = true;
        for k in 2..n {
            if k.gcd(&n) != 1 {
                continue;
            }
            let img = chars[a].galois(k as i64).expect("k is coprime to the conductor");
            if let Some(b) = (0..chars.len()).find(|&b| !seen[b] && *chars[b] == img) {
                seen[b] = true;
                members.push(b);
            }
        }
        let sum: Vec<BigRational> = (0..chars[a].len())
            .map(|i| {
                let s: Cyclotomic = members.iter().map(|&b| chars[b][i].clone()).sum();
                s.to_rational().expect("orbit sums are rational")
            })
            .collect();
        out.push((sum, members.len()));
    }
    out
}

struct Search<'a> {
    table: &'a CharacterTable,
    torso: Vec<Option<BigRational>>,
    degree: BigRational,
    orbits: Vec<(Vec<BigRational>, usize)>,
    // per class, min and max of value/degree over orbits k..
    suffix_min: Vec<Vec<BigRational>>,
    suffix_max: Vec<Vec<BigRational>>,
    norm_budget: BigInt,
    found: Vec<ClassFunction>,
}

impl Search<'_> {
    fn feasible(&self, values: &[BigRational], next: usize, rem: &BigRational) -> bool {
        if next == self.orbits.len() {
            return rem.is_zero();
        }
        let r = rem.clone();
        for (g, val) in values.iter().enumerate() {
            let lo = val + &r * &self.suffix_min[next][g];
            let hi = val + &r * &self.suffix_max[next][g];
            if hi.is_negative() || lo > self.degree {
                return false;
            }
            if let Some(t) = &self.torso[g] {
                if *t < lo || *t > hi {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize, values: Vec<BigRational>, rem: BigRational, norm_used: BigInt) {
        if k == self.orbits.len() {
            if !rem.is_zero() || self.torso.iter().zip(&values).any(|(t, v)| t.as_ref().is_some_and(|t| t != v)) {
                return;
            }
            if values.iter().any(|x| !x.is_integer()) {
                return;
            }
            let pi = ClassFunction::from_bigints(&values.iter().map(|x| x.to_integer()).collect::<Vec<_>>());
            if check_perm_char_conditions(self.table, &pi).passes() {
                self.found.push(pi);
            }
            return;
        }
        let (psi, len) = self.orbits[k].clone();
        let deg = psi[0].clone();
        let max_m = (&rem / &deg).floor().to_integer();
        let mut m = BigInt::zero();
        while m <= max_m {
            let used = &norm_used + &m * &m * BigInt::from(len);
            if used > self.norm_budget {
                break;
            }
            let mq = BigRational::from_integer(m.clone());
            let next_vals: Vec<BigRational> = values.iter().zip(&psi).map(|(v, x)| v + &mq * x).collect();
            let next_rem = &rem - &mq * &deg;
            if self.feasible(&next_vals, k + 1, &next_rem) {
                self.run(k + 1, next_vals, next_rem, used);
            }
            m += 1;
        }
    }
}

/// All permutation characters `π = π₀ + θ` of `t` where `π₀` is the given
/// character with the central involution `z` in its kernel, `θ` is a
/// nonnegative combination of irreducibles `χ` with `χ(z) = -χ(1)`, the
/// values prescribed by `torso` are met and every necessary condition
/// holds. Results are sorted.
pub fn perm_chars_with_torso(
    t: &CharacterTable,
    torso: &[Option<BigInt>],
    centre: &[usize],
    nonfaithful: &ClassFunction,
) -> Result<Vec<ClassFunction>, PermCharError> {
    if !t.has_complete_irreducibles() {
        return Err(PermCharError::MissingIrreducibles(t.id.clone()));
    }
    let n = t.class_count();
    let z = match centre {
        [0, z] | [z, 0] if *z != 0 => *z,
        _ => return Err(PermCharError::TorsoInconsistent("the normal subgroup must be [1, z]".into())),
    };
    if z >= n || t.orders[z] != 2 || t.centralizers[z] != t.order {
        return Err(PermCharError::NotCentralInvolution(z));
    }
    if nonfaithful.len() != n {
        return Err(ClassFunError::LengthMismatch { got: nonfaithful.len(), expected: n }.into());
    }
    let pi0: Vec<BigRational> = nonfaithful
        .iter()
        .map(|x| x.to_rational().ok_or(PermCharError::TorsoInconsistent("nonfaithful character is not rational".into())))
        .collect::<Result<_, _>>()?;
    if pi0[z] != pi0[0] {
        return Err(PermCharError::TorsoInconsistent("z is not in the kernel of the nonfaithful character".into()));
    }
    let mut tor: Vec<Option<BigRational>> = (0..n)
        .map(|i| torso.get(i).cloned().flatten().map(BigRational::from_integer))
        .collect();
    let degree = &pi0[0] * BigRational::from_integer(2.into());
    match &tor[0] {
        Some(d) if *d != degree => {
            return Err(PermCharError::TorsoInconsistent(format!("degree {d} differs from twice {}", pi0[0])))
        }
        _ => tor[0] = Some(degree.clone()),
    }
    match &tor[z] {
        Some(v) if !v.is_zero() => return Err(PermCharError::TorsoInconsistent(format!("value {v} at z is not 0"))),
        _ => tor[z] = Some(BigRational::zero()),
    }

    let faithful: Vec<&ClassFunction> = t.irreducibles.iter().filter(|chi| chi[z] == -&chi[0]).collect();
    let mut orbits = rational_orbits(&faithful);
    orbits.sort_by(|a, b| b.0[0].cmp(&a.0[0]));
    let k = orbits.len();
    let mut suffix_min = vec![vec![BigRational::zero(); n]; k + 1];
    let mut suffix_max = vec![vec![BigRational::zero(); n]; k + 1];
    for o in (0..k).rev() {
        for g in 0..n {
            let r = &orbits[o].0[g] / &orbits[o].0[0];
            let (lo, hi) = if o + 1 == k {
                (r.clone(), r)
            } else {
                (r.clone().min(suffix_min[o + 1][g].clone()), r.max(suffix_max[o + 1][g].clone()))
            };
            suffix_min[o][g] = lo;
            suffix_max[o][g] = hi;
        }
    }
    let pi0_norm = classfun::norm(t, nonfaithful)?;
    let budget = (&degree - pi0_norm).floor().to_integer();
    let mut s = Search {
        table: t,
        torso: tor,
        degree: degree.clone(),
        orbits,
        suffix_min,
        suffix_max,
        norm_budget: budget,
        found: Vec::new(),
    };
    let rem = pi0[0].clone();
    if s.feasible(&pi0, 0, &rem) {
        s.run(0, pi0, rem, BigInt::zero());
    }
    let mut out = s.found;
    out.sort();
    out.dedup();
    Ok(out)
}
