//! One line per acceptance criterion. Criteria 6 to 10 replay
//! `scripts/monster.chs` against the directory named by `CHARTAB_DATA` and
//! report SKIP when it is unset or lacks tables.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use chartab::classfun::{induce_by_fusion, induced_cyclic, pull_back, reduce, symmetrize2, tensor, CyclicMode};
use chartab::cyclo::Cyclotomic;
use chartab::fusion::{possible_class_fusions, FusionOptions};
use chartab::headbuilder::{candidate_products, monster_order, normal_sylow_check, sylow_normalizer_orders};
use chartab::lattice::{integral_membership, lll_reduce};
use chartab::numtheory::{divisors, factorization_string, primes_up_to};
use chartab::oracle::parse_generators;
use chartab::pipeline::{run_script, PipelineError, Report, RunOptions, StepStatus};
use chartab::powermap::resolve_quadratic_pair;
use chartab::{CharacterTable, ClassData, ParaMap};
use common::{group, raw_inner, same_set, table, GROUPS};
use num_bigint::BigUint;

#[derive(PartialEq)]
enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn nums(v: &[BigUint]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sylow() -> Result<String, String> {
    let m = monster_order();
    let cases: [(u64, u64, Vec<BigUint>, &[&str]); 4] = [
        (29, 28, candidate_products(&big(87), &[(7, 6), (41, 1), (59, 1), (71, 1)]), &["87", "5133"]),
        (41, 1, divisors(&big(2 * 5 * 7u64.pow(6) * 59 * 71)).into_iter().map(|d| big(164) * d).collect(), &["1640", "163016"]),
        (59, 1, divisors(&big(58 * 7u64.pow(6) * 71)).into_iter().map(|d| big(59) * d).collect(), &["1711"]),
        (71, 1, divisors(&big(70 * 7u64.pow(5))).into_iter().map(|d| big(71) * d).collect(), &["2485"]),
    ];
    let mut out = Vec::new();
    for (p, index, pool, want) in cases {
        let got = nums(&sylow_normalizer_orders(&m, p, index, pool));
        check(got == want, format!("p = {p}: {got:?}"))?;
        out.push(format!("p={p} {{{}}}", got.join(", ")));
    }
    for (n, q) in [(5133, 59), (163016, 71)] {
        let got = nums(&normal_sylow_check(&big(n), q));
        check(got == ["1"], format!("{n} mod {q}: {got:?}"))?;
    }
    Ok(format!("{}; normal Sylow forced for 5133 (59) and 163016 (71)", out.join(", ")))
}

fn factorization() -> Result<String, String> {
    let s = factorization_string(&monster_order(), "·");
    check(s == "2^46·3^20·5^9·7^6·11^2·13^3·17·19·23·29·31·41·47·59·71", s.clone())?;
    Ok(s)
}

const PAIRS: &[(&str, &str, &str)] = &[
    ("S4", "(1,2,3);(2,3,4)", "A4"),
    ("S4", "(1,2,3,4);(1,3)", "D8"),
    ("S5", "(1,2,3,4,5);(1,2,3)", "A5"),
    ("S5", "(1,2,3,4);(1,2)", "S4"),
    ("A5", "(1,2,3,4,5);(2,5)(3,4)", "D10"),
    ("A6", "(1,2,3,4,5);(1,2,3)", "A5"),
    ("L3(2)", "(1,2,3,4,5,6,7);(2,3,5)(4,7,6)", "7:3"),
];

fn oracle_suite() -> Result<String, String> {
    let tables: Vec<CharacterTable> = GROUPS.iter().map(|(n, _)| table(n)).collect();
    check(tables.iter().all(|t| t.order <= big(2000)), "order above 2000")?;
    for want in ["D8", "Q8", "D10", "A5"] {
        check(GROUPS.iter().any(|(n, _)| *n == want), format!("{want} missing"))?;
    }
    check(tables.iter().any(|t| t.irreducibles.iter().any(|c| !c.is_rational())), "no irrational table")?;
    for t in &tables {
        let n = t.class_count();
        for (i, a) in t.irreducibles.iter().enumerate() {
            for (j, b) in t.irreducibles.iter().enumerate() {
                let e = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                check(raw_inner(t, a, b) == e, format!("{}: row orthogonality {i},{j}", t.id))?;
            }
            let (sym, alt) = symmetrize2(t, a).map_err(|e| e.to_string())?;
            check(sym.add(&alt) == tensor(a, a).unwrap(), format!("{}: squares", t.id))?;
        }
        for x in 0..n {
            for y in 0..n {
                let s: Cyclotomic = t.irreducibles.iter().map(|c| &c[x] * &c[y].complex_conjugate()).sum();
                let e = if x == y { Cyclotomic::from_integer(num_bigint::BigInt::from(t.centralizers[x].clone())) } else { Cyclotomic::zero() };
                check(s == e, format!("{}: column orthogonality {x},{y}", t.id))?;
            }
        }
    }
    let mut found = 0;
    for &(amb, gens, name) in PAIRS {
        let g = group(amb);
        let h = g.subgroup(&parse_generators(gens).unwrap()).map_err(|e| e.to_string())?;
        let (th, tg, map) = (h.character_table(name).unwrap(), g.character_table(amb).unwrap(), g.fusion_of(&h));
        let ind = induce_by_fusion(&th, &tg, &th.irreducibles, &map).unwrap();
        for (psi, psi_g) in th.irreducibles.iter().zip(&ind) {
            for chi in &tg.irreducibles {
                let res = pull_back(chi, &map).unwrap();
                check(raw_inner(&tg, psi_g, chi) == raw_inner(&th, psi, &res), format!("Frobenius {name} < {amb}"))?;
            }
        }
        if possible_class_fusions(&th, &tg, &FusionOptions::default()).contains(&map) {
            found += 1;
        }
    }
    check(found >= 5, format!("true fusion found for {found} pairs"))?;
    Ok(format!("{} groups; true fusion among candidates for {found}/{} pairs", tables.len(), PAIRS.len()))
}

fn lll_recovery() -> Result<String, String> {
    let start = Instant::now();
    let mut done = Vec::new();
    for name in ["S5", "A6", "L3(2)"] {
        let t = table(name);
        let all: Vec<usize> = (0..t.class_count()).collect();
        let mut pool = induced_cyclic(&t, &all, CyclicMode::All).map_err(|e| e.to_string())?;
        let mut known = vec![t.trivial_character()];
        let mut span = known.clone();
        span.extend(pool.iter().cloned());
        loop {
            let before = known.len();
            let r = reduce(&t, &known, &pool).unwrap();
            known.extend(r.irreducibles);
            let l = lll_reduce(&t, &r.remainders).map_err(|e| e.to_string())?;
            known.extend(l.irreducibles);
            pool = l.remainders;
            if known.len() == before || pool.is_empty() {
                break;
            }
        }
        for chi in &known {
            check(integral_membership(&t, &span, chi).unwrap().is_some(), format!("{name}: not in the span"))?;
        }
        check(same_set(&known, &t.irreducibles), format!("{name}: {} of {} recovered", known.len(), t.class_count()))?;
        done.push(name);
    }
    let dt = start.elapsed();
    check(dt < Duration::from_secs(30), format!("{dt:?}"))?;
    Ok(format!("{} recovered in {:.1}s", done.join(", "), dt.as_secs_f64()))
}

fn gauss_sums() -> Result<String, String> {
    let cases: &[(i64, &[u64])] = &[(-59, &[59]), (-71, &[71]), (-119, &[7, 17]), (-39, &[3, 13])];
    let symbol = |k: u64, ps: &[u64]| -> i64 {
        ps.iter()
            .map(|&p| {
                let r = (0..(p - 1) / 2).fold(1u64, |a, _| a * (k % p) % p);
                if r == 1 { 1 } else if r == 0 { 0 } else { -1 }
            })
            .product()
    };
    let gauss = |q: u64, ps: &[u64], m: u64| -> Cyclotomic {
        (1..q).map(|k| Cyclotomic::root_of_unity_power(q as u32, (m * k % q) as i64).scale(&common::rat(symbol(k, ps), 1))).sum()
    };
    let t = CharacterTable::new("T", big(381), vec![big(3), big(127), big(127)], vec![1, 127, 127]);
    let mut checked = 0;
    for &(d, ps) in cases {
        let q = d.unsigned_abs();
        let g = gauss(q, ps, 1);
        check(&g * &g == Cyclotomic::from_integer(d), format!("Gauss sum for {d}"))?;
        let primes: Vec<u64> = primes_up_to(113).into_iter().filter(|p| q % p != 0).collect();
        let mut maps: BTreeMap<u64, ParaMap> = BTreeMap::new();
        for (p, fixes) in resolve_quadratic_pair(&t, &mut maps, (1, 2), d, &primes).map_err(|e| e.to_string())? {
            check(fixes == (gauss(q, ps, p) == g), format!("d = {d}, p = {p}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (d, p) pairs agree"))
}

/// Line ranges of `monster.chs` belonging to criteria 6 to 10.
fn section_ranges(src: &str) -> Vec<(usize, usize)> {
    let marks = [
        "# the permutation character of the Monster",
        "# conjugacy classes",
        "# power maps",
        "# the values of the degree 196883 character",
        "# the irreducibles",
    ];
    let starts: Vec<usize> = marks
        .iter()
        .map(|m| src.lines().position(|l| l.starts_with(m)).expect("section marker") + 1)
        .collect();
    let end = src.lines().count() + 1;
    (0..starts.len()).map(|k| (starts[k], starts.get(k + 1).copied().unwrap_or(end))).collect()
}

fn judge(report: &Report, (lo, hi): (usize, usize)) -> Outcome {
    let inside: Vec<_> = report.steps.iter().filter(|s| s.line >= lo && s.line < hi).collect();
    if let Some(f) = inside.iter().find(|s| s.status == StepStatus::Fail) {
        return match &report.error {
            Some(PipelineError::MissingData { id, .. }) => Outcome::Skip(format!("table {id} not in CHARTAB_DATA")),
            Some(e) => Outcome::Fail(format!("line {}: {e}", f.line)),
            None => Outcome::Fail(format!("line {}", f.line)),
        };
    }
    let reached = report.passed() || report.steps.iter().any(|s| s.line >= hi);
    if reached && !inside.is_empty() {
        return Outcome::Pass(format!("{} steps on lines {lo}..{}", inside.len(), hi - 1));
    }
    match &report.error {
        Some(PipelineError::MissingData { id, .. }) => Outcome::Skip(format!("table {id} not in CHARTAB_DATA")),
        Some(e) => Outcome::Skip(format!("not reached: {e}")),
        None => Outcome::Fail("no steps".into()),
    }
}

fn data_gated() -> Vec<Outcome> {
    let Some(dir) = std::env::var_os("CHARTAB_DATA").map(PathBuf::from) else {
        return (0..5).map(|_| Outcome::Skip("CHARTAB_DATA not set".into())).collect();
    };
    let script = common::scripts_dir().join("monster.chs");
    let src = std::fs::read_to_string(&script).unwrap();
    let report = run_script(&script, &dir, &RunOptions::default());
    section_ranges(&src).into_iter().map(|r| judge(&report, r)).collect()
}

fn run_one(f: fn() -> Result<String, String>) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => Outcome::Pass(s),
        Ok(Err(e)) => Outcome::Fail(e),
        Err(_) => Outcome::Fail("panicked".into()),
    }
}

#[test]
fn acceptance() {
    let names = [
        "Sylow filtering",
        "order of M factorized",
        "oracle suite",
        "LLL recovery of irreducibles",
        "quadratic pairs vs Gauss sums",
        "permutation characters on 2.B",
        "classes of the head",
        "power-map indeterminateness",
        "completion of the degree 196883 character",
        "irreducibles of M",
    ];
    let mut outcomes = vec![run_one(sylow), run_one(factorization), run_one(oracle_suite), run_one(lll_recovery), run_one(gauss_sums)];
    outcomes.extend(data_gated());
    let mut failed = Vec::new();
    for (k, (name, o)) in names.iter().zip(&outcomes).enumerate() {
        let (tag, detail) = match o {
            Outcome::Pass(s) => ("PASS", s),
            Outcome::Fail(s) => ("FAIL", s),
            Outcome::Skip(s) => ("SKIP", s),
        };
        println!("criterion {:>2} {tag} {name}: {detail}", k + 1);
        if matches!(o, Outcome::Fail(_)) || (k < 5 && !matches!(o, Outcome::Pass(_))) {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
