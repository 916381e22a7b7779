use num_rational::BigRational;
use num_traits::One;

use super::{normalize, Cyclotomic};
use crate::numtheory::{gcd_u64, jacobi, lcm_u64, squarefree_split};

/// A square root of `d` as a cyclotomic number.
///
/// For odd squarefree `m` the Gauss sum `Σ (a/m) ζ_m^a` squares to `±m`;
/// the factors `-1` and `±2` are covered by `ζ_4` and `ζ_8 ∓ ζ_8^3`. The
/// square part of `d` is pulled out as a positive integer.
pub fn atlas_sqrt(d: i64) -> Cyclotomic {
    assert!(d != 0, "atlas_sqrt of zero");
    let (free, root) = squarefree_split(d);
    let abs = free.unsigned_abs();
    let (two, m) = if abs % 2 == 0 { (true, abs / 2) } else { (false, abs) };

    let (gauss, mstar) = if m == 1 {
        (Cyclotomic::one(), 1i64)
    } else {
        let terms = (1..m).filter_map(|a| {
            let s = jacobi(a as i64, m);
            (s != 0).then(|| (a as i64, BigRational::from_integer(s.into())))
        });
        let g = normalize(m as u32, terms).expect("positive conductor");
        let mstar = if m % 4 == 1 { m as i64 } else { -(m as i64) };
        (g, mstar)
    };

    // free = mstar * rest, rest in {1, -1, 2, -2}
    let rest = free / mstar;
    let one = BigRational::one;
    let factor = match rest {
        1 => Cyclotomic::one(),
        -1 => Cyclotomic::root_of_unity(4),
        2 => normalize(8, [(1, one()), (3, -one())]).unwrap(),
        -2 => normalize(8, [(1, one()), (3, one())]).unwrap(),
        _ => unreachable!("squarefree cofactor {rest} (two={two})"),
    };
    (&gauss * &factor).scale(&BigRational::from_integer(root.into()))
}

/// Whether `sqrt(d)` lies in the field generated over the rationals by
/// `values`: every Galois automorphism fixing all values must fix it.
pub fn field_contains_sqrt(values: &[Cyclotomic], d: i64) -> bool {
    let s = atlas_sqrt(d);
    let n = values
        .iter()
        .fold(s.conductor() as u64, |acc, v| lcm_u64(acc, v.conductor() as u64));
    for k in 2..n.max(2) {
        if gcd_u64(k, n) != 1 {
            continue;
        }
        let k = k as i64;
        let fixes_all = values.iter().all(|v| v.galois(k).as_ref() == Ok(v));
        if fixes_all && s.galois(k).as_ref() != Ok(&s) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_minus_one() {
        assert_eq!(atlas_sqrt(-1), Cyclotomic::root_of_unity(4));
    }

    #[test]
    fn sqrt_five_gauss_sum() {
        let z = |k| Cyclotomic::root_of_unity_power(5, k);
        let expect = &(&(&z(1) - &z(2)) - &z(3)) + &z(4);
        assert_eq!(atlas_sqrt(5), expect);
    }

    #[test]
    fn squares_up_to_200() {
        for d in -200i64..=200 {
            if d == 0 {
                continue;
            }
            let s = atlas_sqrt(d);
            assert_eq!(&s * &s, Cyclotomic::from_integer(d), "d={d}");
        }
    }

    #[test]
    fn containment_examples() {
        assert!(!field_contains_sqrt(&[Cyclotomic::one()], 5));
        assert!(field_contains_sqrt(&[atlas_sqrt(-39)], -39));
        assert!(field_contains_sqrt(&[Cyclotomic::root_of_unity(3)], -3));
        assert!(!field_contains_sqrt(&[Cyclotomic::root_of_unity(3)], 3));
        assert!(field_contains_sqrt(&[Cyclotomic::root_of_unity(12)], 3));
    }
}
