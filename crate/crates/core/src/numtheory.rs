//! Small integer helpers shared by the solvers: primes, factorizations,
//! divisors, CRT and the Jacobi symbol.

use num_bigint::{BigInt, BigUint, ToBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `p` with `p <= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// Prime factorization of a machine integer as `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor_u64(n).into_iter().map(|(p, _)| p).collect()
}

pub fn smallest_prime_divisor(n: u64) -> Option<u64> {
    factor_u64(n).first().map(|&(p, _)| p)
}

fn pow_mod_big(base: &BigUint, exp: &BigUint, m: &BigUint) -> BigUint {
    base.modpow(exp, m)
}

/// Miller-Rabin with the first twelve prime bases; deterministic below 3.3e24
/// and a strong probable-prime test beyond.
pub fn is_probable_prime_big(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for b in BASES {
        let mut x = pow_mod_big(&BigUint::from(b), &d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Factorization of an arbitrary positive integer. Trial division up to
/// `10^6`; a remaining cofactor is reported as a single factor (it is prime
/// whenever it passes [`is_probable_prime_big`]).
pub fn factor_big(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p: u64 = 2;
    while p <= 1_000_000 {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        if (&n % &bp).is_zero() {
            let mut e = 0;
            while (&n % &bp).is_zero() {
                n /= &bp;
                e += 1;
            }
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

/// Prime-power factorization string, e.g. `2^46*3^20*...*71` for
/// `sep = "*"`.
pub fn factorization_string(n: &BigUint, sep: &str) -> String {
    factor_big(n)
        .into_iter()
        .map(|(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join(sep)
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in factor_big(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut q = d.clone();
            next.push(q.clone());
            for _ in 0..e {
                q *= &p;
                next.push(q.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Divisors of `n` that are congruent to 1 modulo `q`.
pub fn divisors_congruent_one(n: &BigUint, q: u64) -> Vec<BigUint> {
    let q = BigUint::from(q);
    divisors(n)
        .into_iter()
        .filter(|d| (d % &q).is_one())
        .collect()
}

/// Chinese remainder of `residues[i] mod moduli[i]` for pairwise coprime
/// moduli. Returns the residue in `[0, prod)` and the product.
pub fn chinese_remainder(residues: &[BigInt], moduli: &[BigInt]) -> Option<(BigInt, BigInt)> {
    let mut r = BigInt::zero();
    let mut m = BigInt::one();
    for (a, n) in residues.iter().zip(moduli) {
        let g = m.extended_gcd(n);
        if !g.gcd.is_one() {
            return None;
        }
        // r + m * t == a (mod n)  =>  t = (a - r) * m^{-1} (mod n)
        let t = ((a - &r) * &g.x).mod_floor(n);
        r += &m * t;
        m *= n;
        r = r.mod_floor(&m);
    }
    Some((r, m))
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i64).extended_gcd(&(m as i64));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i64) as u64)
}

pub fn big_to_u64(n: &BigInt) -> Option<u64> {
    if n.is_negative() {
        None
    } else {
        n.to_u64()
    }
}

pub fn to_bigint(n: &BigUint) -> BigInt {
    n.to_bigint().expect("unsigned always converts")
}

/// Squarefree part (with sign) and square root of the square cofactor:
/// `n = root^2 * free`.
pub fn squarefree_split(n: i64) -> (i64, u64) {
    assert!(n != 0);
    let sign = if n < 0 { -1 } else { 1 };
    let mut free: i64 = sign;
    let mut root: u64 = 1;
    for (p, e) in factor_u64(n.unsigned_abs()) {
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p as i64;
        }
    }
    (free, root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_matches_euler_criterion_for_primes() {
        for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
            for a in 1..p {
                let euler = BigUint::from(a).modpow(&BigUint::from((p - 1) / 2), &BigUint::from(p));
                let expect = if euler.is_one() { 1 } else { -1 };
                assert_eq!(jacobi(a as i64, p), expect, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn crt_small() {
        let r: Vec<BigInt> = vec![2.into(), 18.into()];
        let m: Vec<BigInt> = vec![3.into(), 19.into()];
        let (res, modulus) = chinese_remainder(&r, &m).unwrap();
        assert_eq!(modulus, BigInt::from(57));
        assert_eq!(res, BigInt::from(56));
    }

    #[test]
    fn divisors_of_small() {
        let d: Vec<u64> = divisors(&BigUint::from(12u32))
            .iter()
            .map(|x| x.to_u64().unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_split(-12), (-3, 2));
        assert_eq!(squarefree_split(50), (2, 5));
        assert_eq!(squarefree_split(-1), (-1, 1));
    }

    #[test]
    fn factor_string() {
        assert_eq!(factorization_string(&BigUint::from(360u32), "*"), "2^3*3^2*5");
    }
}
