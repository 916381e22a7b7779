//! Exact arithmetic in cyclotomic fields.
//!
//! Every [`Cyclotomic`] is kept in a canonical form: the conductor is the
//! smallest `n` with the value in `Q(ζ_n)`, and the coefficients are taken
//! with respect to the Zumbroich basis of that field. Two values are equal
//! exactly when their representations are equal, so `PartialEq`, `Hash` and
//! `Ord` are all derived.

pub mod json;
mod sqrt;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numtheory::{factor_u64, gcd_u64, inv_mod, lcm_u64};

pub use json::CycloJsonError;
pub use sqrt::{atlas_sqrt, field_contains_sqrt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("exponent {k} is not coprime to conductor {n}")]
    NotCoprime { k: i64, n: u32 },
    #[error("conductor must be positive")]
    ZeroConductor,
}

/// An element of a cyclotomic field in normalized Zumbroich form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclotomic {
    conductor: u32,
    // Sorted by exponent, no zero coefficients.
    terms: Vec<(u32, BigRational)>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        if q.is_zero() {
            Self::zero()
        } else {
            Cyclotomic { conductor: 1, terms: vec![(0, q)] }
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// The primitive root of unity `ζ_n = exp(2πi/n)`.
    pub fn root_of_unity(n: u32) -> Self {
        Self::root_of_unity_power(n, 1)
    }

    /// `ζ_n^k`.
    pub fn root_of_unity_power(n: u32, k: i64) -> Self {
        assert!(n > 0, "conductor must be positive");
        let e = k.rem_euclid(n as i64);
        normalize(n, [(e, BigRational::one())]).expect("positive conductor")
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Basis exponents and their coefficients, ascending by exponent.
    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match (self.conductor, self.terms.as_slice()) {
            (1, []) => Some(BigRational::zero()),
            (1, [(0, q)]) => Some(q.clone()),
            _ => None,
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// True iff the value is an algebraic integer. The Zumbroich basis is an
    /// integral basis, so this is coefficient-wise integrality.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }

    /// The field automorphism `ζ ↦ ζ^k`.
    pub fn galois(&self, k: i64) -> Result<Self, CycloError> {
        let n = self.conductor;
        if n == 1 {
            return Ok(self.clone());
        }
        let km = k.rem_euclid(n as i64) as u64;
        if gcd_u64(km, n as u64) != 1 {
            return Err(CycloError::NotCoprime { k, n });
        }
        let mapped = self
            .terms
            .iter()
            .map(|(e, c)| (((*e as u64 * km) % n as u64) as i64, c.clone()));
        normalize(n, mapped)
    }

    pub fn complex_conjugate(&self) -> Self {
        self.galois(-1).expect("-1 is coprime to every conductor")
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse, computed as the product of the nontrivial
    /// Galois conjugates divided by the (rational) norm.
    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        let n = self.conductor as u64;
        let mut others = Self::one();
        for k in 2..n {
            if gcd_u64(k, n) == 1 {
                others = &others * &self.galois(k as i64)?;
            }
        }
        let norm = (&others * self)
            .to_rational()
            .expect("norm of a cyclotomic is rational");
        Ok(others.scale(&norm.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycloError> {
        Ok(self * &other.inverse()?)
    }

    /// Coefficients of the value as an element of `Q(ζ_n)`, for a multiple
    /// `n` of the conductor, over the Zumbroich basis of `Q(ζ_n)`.
    pub fn coefficients_in(&self, n: u32) -> Vec<(u32, BigRational)> {
        assert!(n.is_multiple_of(self.conductor), "field does not contain the value");
        let step = n / self.conductor;
        let den = denominator_of(self);
        let mut dense = vec![BigInt::zero(); n as usize];
        for (e, c) in &self.terms {
            dense[(e * step) as usize] += c.numer() * (&den / c.denom());
        }
        reduce_to_basis(n, &mut dense);
        dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e as u32, BigRational::new(c, den.clone())))
            .collect()
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for Cyclotomic {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for Cyclotomic {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

/// Builds the canonical representation of `Σ c_e ζ_n^e`. Exponents may be
/// arbitrary integers and repeated.
pub fn normalize<I>(conductor: u32, coeffs: I) -> Result<Cyclotomic, CycloError>
where
    I: IntoIterator<Item = (i64, BigRational)>,
{
    if conductor == 0 {
        return Err(CycloError::ZeroConductor);
    }
    let n = conductor;
    let coeffs: Vec<(i64, BigRational)> = coeffs.into_iter().collect();
    let den = coeffs.iter().fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()));
    let mut dense = Dense::new(n, den);
    for (e, c) in &coeffs {
        dense.add_rational(e.rem_euclid(n as i64) as u32, c, false);
    }
    Ok(dense.finish())
}

fn denominator_of(x: &Cyclotomic) -> BigInt {
    x.terms.iter().fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()))
}

/// Integer numerators over a common denominator, indexed by exponent.
struct Dense {
    n: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Dense {
    fn new(n: u32, den: BigInt) -> Self {
        Dense { n, num: vec![BigInt::zero(); n as usize], den }
    }

    fn add_rational(&mut self, e: u32, c: &BigRational, negate: bool) {
        let v = c.numer() * (&self.den / c.denom());
        if negate {
            self.num[e as usize] -= v;
        } else {
            self.num[e as usize] += v;
        }
    }

    fn finish(mut self) -> Cyclotomic {
        reduce_to_basis(self.n, &mut self.num);
        let (n, num) = reduce_conductor(self.n, self.num);
        let den = self.den;
        Cyclotomic {
            conductor: n,
            terms: num
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e as u32, BigRational::new(c, den.clone())))
                .collect(),
        }
    }
}

struct PrimeComponent {
    p: u32,
    nu: u32,
    prime_power: u32,
    // inverse of n / p^nu modulo p^nu
    cofactor_inv: u32,
}

impl PrimeComponent {
    fn components(n: u32) -> Vec<PrimeComponent> {
        factor_u64(n as u64)
            .into_iter()
            .map(|(p, nu)| {
                let p = p as u32;
                let prime_power = p.pow(nu);
                let cofactor = (n / prime_power) % prime_power;
                let cofactor_inv = inv_mod(cofactor as u64, prime_power as u64).unwrap_or(0) as u32;
                PrimeComponent { p, nu, prime_power, cofactor_inv }
            })
            .collect()
    }

    /// Top base-p digit of the p-component of exponent `e`.
    fn top_digit(&self, e: u32) -> u32 {
        let j = ((e % self.prime_power) as u64 * self.cofactor_inv as u64 % self.prime_power as u64) as u32;
        j / self.p.pow(self.nu - 1)
    }

    fn is_basis(&self, e: u32) -> bool {
        let b = self.top_digit(e);
        if self.p == 2 {
            b == 0
        } else {
            b != 0
        }
    }
}

/// Rewrites a dense coefficient vector over `ζ_n^0 .. ζ_n^{n-1}` in the
/// Zumbroich basis of `Q(ζ_n)`, one prime at a time.
fn reduce_to_basis(n: u32, dense: &mut [BigInt]) {
    for comp in PrimeComponent::components(n) {
        let shift = n / comp.p;
        for e in 0..n {
            if dense[e as usize].is_zero() || comp.is_basis(e) {
                continue;
            }
            let c = std::mem::take(&mut dense[e as usize]);
            if comp.p == 2 {
                // ζ^e = -ζ^(e + n/2)
                dense[((e + shift) % n) as usize] -= &c;
            } else {
                // ζ^e = -Σ_{t=1}^{p-1} ζ^(e + t n/p)
                for t in 1..comp.p {
                    dense[((e + t * shift) % n) as usize] -= &c;
                }
            }
        }
    }
}

/// Given Zumbroich coordinates in `Q(ζ_n)`, moves to the smallest subfield
/// `Q(ζ_m)` containing the value.
fn reduce_conductor(mut n: u32, mut dense: Vec<BigInt>) -> (u32, Vec<BigInt>) {
    'outer: loop {
        if n == 1 {
            return (1, dense);
        }
        let support: Vec<u32> = (0..n).filter(|&e| !dense[e as usize].is_zero()).collect();
        if support.is_empty() {
            return (1, vec![BigInt::zero()]);
        }
        for comp in PrimeComponent::components(n) {
            let p = comp.p;
            if p == 2 && comp.nu == 1 {
                // Q(ζ_2m) = Q(ζ_m); basis exponents are all even here.
                let m = n / 2;
                let mut next = vec![BigInt::zero(); m as usize];
                for &e in &support {
                    next[(e / 2) as usize] = std::mem::take(&mut dense[e as usize]);
                }
                n = m;
                dense = next;
                continue 'outer;
            }
            if comp.nu >= 2 {
                if support.iter().all(|e| e % p == 0) {
                    let m = n / p;
                    let mut next = vec![BigInt::zero(); m as usize];
                    for &e in &support {
                        next[(e / p) as usize] = std::mem::take(&mut dense[e as usize]);
                    }
                    n = m;
                    dense = next;
                    continue 'outer;
                }
                continue;
            }
            // p odd, p || n: the value lies in Q(ζ_{n/p}) iff the coefficients
            // agree along each coset e0 + t n/p, t = 1..p-1.
            let shift = n / p;
            let mut ok = true;
            let mut seen = vec![false; n as usize];
            let mut groups: Vec<u32> = Vec::new();
            for &e in &support {
                let b = comp.top_digit(e);
                let e0 = (e + n - (b * shift) % n) % n;
                if std::mem::replace(&mut seen[e0 as usize], true) {
                    continue;
                }
                let c = &dense[((e0 + shift) % n) as usize];
                if (2..p).any(|t| dense[((e0 + t * shift) % n) as usize] != *c) {
                    ok = false;
                    break;
                }
                groups.push(e0);
            }
            if ok {
                let m = n / p;
                let mut next = vec![BigInt::zero(); m as usize];
                for e0 in groups {
                    next[(e0 / p) as usize] = -std::mem::take(&mut dense[((e0 + shift) % n) as usize]);
                }
                n = m;
                dense = next;
                continue 'outer;
            }
        }
        return (n, dense);
    }
}

fn combine(a: &Cyclotomic, b: &Cyclotomic, negate_b: bool) -> Cyclotomic {
    if a.conductor == 1 && b.conductor == 1 {
        let qa = a.to_rational().unwrap();
        let qb = b.to_rational().unwrap();
        return Cyclotomic::from_rational(if negate_b { qa - qb } else { qa + qb });
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b } else { b.clone() };
    }
    let n = lcm_u64(a.conductor as u64, b.conductor as u64) as u32;
    let mut dense = Dense::new(n, denominator_of(a).lcm(&denominator_of(b)));
    let sa = n / a.conductor;
    for (e, c) in &a.terms {
        dense.add_rational(e * sa, c, false);
    }
    let sb = n / b.conductor;
    for (e, c) in &b.terms {
        dense.add_rational(e * sb, c, negate_b);
    }
    dense.finish()
}

fn multiply(a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
    if a.is_zero() || b.is_zero() {
        return Cyclotomic::zero();
    }
    if let Some(q) = a.to_rational() {
        return b.scale(&q);
    }
    if let Some(q) = b.to_rational() {
        return a.scale(&q);
    }
    let n = lcm_u64(a.conductor as u64, b.conductor as u64) as u32;
    let sa = n / a.conductor;
    let sb = n / b.conductor;
    let da = denominator_of(a);
    let db = denominator_of(b);
    let an: Vec<(u64, BigInt)> =
        a.terms.iter().map(|(e, c)| ((e * sa) as u64, c.numer() * (&da / c.denom()))).collect();
    let bn: Vec<(u64, BigInt)> =
        b.terms.iter().map(|(e, c)| ((e * sb) as u64, c.numer() * (&db / c.denom()))).collect();
    let mut dense = Dense::new(n, da * db);
    for (ea, ca) in &an {
        for (eb, cb) in &bn {
            let e = (ea + eb) % n as u64;
            dense.num[e as usize] += ca * cb;
        }
    }
    dense.finish()
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        combine(self, rhs, false)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        combine(self, rhs, true)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        multiply(self, rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Cyclotomic {
    /// GAP-style notation, e.g. `783*E(3)^2` or `-1/2*E(5)+E(5)^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if let Some(q) = self.to_rational() {
            return write!(f, "{q}");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let root = match e {
                0 => String::new(),
                1 => format!("E({})", self.conductor),
                _ => format!("E({})^{}", self.conductor, e),
            };
            let neg = c.is_negative();
            if neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let a = c.abs();
            if root.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{root}")?;
            } else {
                write!(f, "{a}*{root}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Whether `e` is a Zumbroich basis exponent for conductor `n`.
pub fn is_basis_exponent(n: u32, e: u32) -> bool {
    PrimeComponent::components(n).iter().all(|c| c.is_basis(e))
}
