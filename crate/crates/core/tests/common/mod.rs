#![allow(dead_code)]

use std::path::PathBuf;

use chartab::oracle::{OracleGroup, DEFAULT_LIMIT};
use chartab::{CharacterTable, ClassData, ClassFunction, Cyclotomic};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Small permutation groups with known structure.
pub const GROUPS: &[(&str, &str)] = &[
    ("C2", "(1,2)"),
    ("S3", "(1,2,3);(1,2)"),
    ("D8", "(1,2,3,4);(1,3)"),
    ("Q8", "(1,2,3,4)(5,6,7,8);(1,5,3,7)(2,8,4,6)"),
    ("D10", "(1,2,3,4,5)(6,7,8,9,10);(1,6)(2,10)(3,9)(4,8)(5,7)"),
    ("A4", "(1,2,3);(2,3,4)"),
    ("7:3", "(1,2,3,4,5,6,7);(2,3,5)(4,7,6)"),
    ("S4", "(1,2,3,4);(1,2)"),
    ("A5", "(1,2,3,4,5);(1,2,3)"),
    ("S5", "(1,2,3,4,5);(1,2)"),
    ("L3(2)", "(1,2,3,4,5,6,7);(2,3)(4,7)"),
    ("A6", "(1,2,3,4,5);(4,5,6)"),
];

pub fn gens_of(name: &str) -> &'static str {
    GROUPS.iter().find(|(n, _)| *n == name).map(|(_, g)| *g).expect("known group")
}

pub fn group(name: &str) -> OracleGroup {
    OracleGroup::from_cycle_string(gens_of(name), DEFAULT_LIMIT).expect("generators")
}

pub fn table(name: &str) -> CharacterTable {
    group(name).character_table(name).expect("oracle table")
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn scripts_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scripts")
}

pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// `Σ_i χ(i) conj(ψ(i)) / |C(i)|`, written out without the library helpers.
pub fn raw_inner<T: ClassData + ?Sized>(t: &T, chi: &ClassFunction, psi: &ClassFunction) -> Cyclotomic {
    let mut s = Cyclotomic::zero();
    for i in 0..t.class_count() {
        let w = BigRational::new(BigInt::from(1), BigInt::from(t.centralizer_orders()[i].clone()));
        s += &(&chi[i] * &psi[i].complex_conjugate()).scale(&w);
    }
    s
}

/// Whether two lists of characters agree as multisets.
pub fn same_set(a: &[ClassFunction], b: &[ClassFunction]) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort();
    y.sort();
    x == y
}

pub fn proptest_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config { cases, failure_persistence: None, ..Default::default() }
}
