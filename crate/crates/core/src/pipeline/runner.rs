use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use super::script::Step;
use super::{PipelineError, Report, StepReport, StepStatus};
use crate::classfun::{self, ClassFunction, CyclicMode};
use crate::cyclo::{field_contains_sqrt, Cyclotomic};
use crate::fusion::{self, possible_class_fusions, Entry, FusionOptions, ParaMap};
use crate::headbuilder::{self, ClassSource, TableHead};
use crate::lattice::{self, CharacterLattice};
use crate::numtheory::{divisors, factorization_string, primes_up_to};
use crate::oracle::{brute_force_table, parse_generators, DEFAULT_LIMIT};
use crate::permchar;
use crate::powermap;
use crate::table::{fingerprint_bijection, parse_cycles, transforming_permutations, CharacterTable, ClassData, NormalSelector};

/// Power maps and fusion approximations under refinement.
#[derive(Clone, Debug)]
pub struct SolverState {
    pub table: String,
    pub primes: Vec<u64>,
    pub maps: BTreeMap<u64, ParaMap>,
    /// `(subtable variable, fusion approximation)`.
    pub fusions: Vec<(String, ParaMap)>,
}

#[derive(Clone, Debug)]
pub enum Value {
    Table(Box<CharacterTable>),
    Chars(Vec<ClassFunction>),
    Head(Box<TableHead>),
    Solver(Box<SolverState>),
    Fusions(Vec<Vec<usize>>),
    Partial(Vec<Option<BigInt>>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Table(_) => "table",
            Value::Chars(_) => "character list",
            Value::Head(_) => "table head",
            Value::Solver(_) => "power-map state",
            Value::Fusions(_) => "fusion list",
            Value::Partial(_) => "partial character",
        }
    }
}

pub struct Runner {
    pub data_dir: PathBuf,
    pub out_dir: Option<PathBuf>,
    pub vars: BTreeMap<String, Value>,
    pub audit: Vec<String>,
}

type StepResult = Result<Vec<String>, PipelineError>;

fn err(step: &Step, msg: impl Into<String>) -> PipelineError {
    PipelineError::Step { line: step.line, kind: step.kind.clone(), msg: msg.into() }
}

fn checkpoint(step: &Step, what: &str, expected: impl ToString, got: impl ToString) -> Result<(), PipelineError> {
    let (e, g) = (expected.to_string(), got.to_string());
    if e == g {
        Ok(())
    } else {
        Err(PipelineError::Checkpoint { line: step.line, what: what.to_string(), expected: e, got: g })
    }
}

/// `a^b`, `n!` and `*`-products of such terms, with an optional sign;
/// `monster` stands for the order of the Monster.
pub fn parse_int_expr(s: &str) -> Option<BigInt> {
    let s = s.trim();
    if s == "monster" {
        return Some(BigInt::from(headbuilder::monster_order()));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let mut acc = BigInt::one();
    for term in body.split('*') {
        let term = term.trim();
        let v = if let Some(n) = term.strip_suffix('!') {
            let n: u64 = n.parse().ok()?;
            (1..=n).map(BigInt::from).product()
        } else if let Some((b, e)) = term.split_once('^') {
            BigInt::from_str(b).ok()?.pow(e.parse::<u32>().ok()?)
        } else {
            BigInt::from_str(term).ok()?
        };
        acc *= v;
    }
    Some(if neg { -acc } else { acc })
}

fn list_items(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

impl Runner {
    pub fn new(data_dir: impl Into<PathBuf>, out_dir: Option<PathBuf>) -> Self {
        Runner { data_dir: data_dir.into(), out_dir, vars: BTreeMap::new(), audit: Vec::new() }
    }

    pub fn run(&mut self, steps: &[Step]) -> Report {
        let mut report = Report::default();
        for step in steps {
            let result = self.step(step);
            match result {
                Ok(lines) => report.steps.push(StepReport { line: step.line, kind: step.kind.clone(), status: StepStatus::Pass, lines }),
                Err(e) => {
                    report.steps.push(StepReport {
                        line: step.line,
                        kind: step.kind.clone(),
                        status: StepStatus::Fail,
                        lines: vec![e.to_string()],
                    });
                    report.error = Some(e);
                    break;
                }
            }
        }
        report.audit = self.audit.clone();
        report
    }

    // parameter access

    fn req<'s>(&self, step: &'s Step, key: &str) -> Result<&'s str, PipelineError> {
        step.get(key).ok_or_else(|| err(step, format!("missing parameter `{key}`")))
    }

    fn var(&self, step: &Step, name: &str) -> Result<&Value, PipelineError> {
        self.vars.get(name).ok_or_else(|| err(step, format!("unknown variable `{name}`")))
    }

    fn table(&self, step: &Step, key: &str) -> Result<&CharacterTable, PipelineError> {
        let name = self.req(step, key)?;
        match self.var(step, name)? {
            Value::Table(t) => Ok(t),
            v => Err(err(step, format!("`{name}` is a {}, not a table", v.kind()))),
        }
    }

    fn table_by_name(&self, step: &Step, name: &str) -> Result<&CharacterTable, PipelineError> {
        match self.var(step, name)? {
            Value::Table(t) => Ok(t),
            v => Err(err(step, format!("`{name}` is a {}, not a table", v.kind()))),
        }
    }

    fn chars_by_name(&self, step: &Step, name: &str) -> Result<&Vec<ClassFunction>, PipelineError> {
        match self.var(step, name)? {
            Value::Chars(c) => Ok(c),
            v => Err(err(step, format!("`{name}` is a {}, not a character list", v.kind()))),
        }
    }

    fn chars(&self, step: &Step, key: &str) -> Result<&Vec<ClassFunction>, PipelineError> {
        let name = self.req(step, key)?;
        self.chars_by_name(step, name)
    }

    fn head(&self, step: &Step, key: &str) -> Result<&TableHead, PipelineError> {
        let name = self.req(step, key)?;
        match self.var(step, name)? {
            Value::Head(h) => Ok(h),
            v => Err(err(step, format!("`{name}` is a {}, not a table head", v.kind()))),
        }
    }

    fn head_mut(&mut self, step: &Step, key: &str) -> Result<&mut TableHead, PipelineError> {
        let name = self.req(step, key)?.to_string();
        match self.vars.get_mut(&name) {
            Some(Value::Head(h)) => Ok(h),
            _ => Err(err(step, format!("`{name}` is not a table head"))),
        }
    }

    fn solver(&self, step: &Step, key: &str) -> Result<&SolverState, PipelineError> {
        let name = self.req(step, key)?;
        match self.var(step, name)? {
            Value::Solver(s) => Ok(s),
            v => Err(err(step, format!("`{name}` is a {}, not a power-map state", v.kind()))),
        }
    }

    fn fusions(&self, step: &Step, key: &str) -> Result<&Vec<Vec<usize>>, PipelineError> {
        let name = self.req(step, key)?;
        match self.var(step, name)? {
            Value::Fusions(f) => Ok(f),
            v => Err(err(step, format!("`{name}` is a {}, not a fusion list", v.kind()))),
        }
    }

    fn int(&self, step: &Step, key: &str) -> Result<BigInt, PipelineError> {
        let s = self.req(step, key)?;
        parse_int_expr(s).ok_or_else(|| err(step, format!("`{key}={s}` is not an integer expression")))
    }

    fn uint(&self, step: &Step, key: &str) -> Result<BigUint, PipelineError> {
        self.int(step, key)?.to_biguint().ok_or_else(|| err(step, format!("`{key}` must be nonnegative")))
    }

    fn u64_param(&self, step: &Step, key: &str) -> Result<u64, PipelineError> {
        self.int(step, key)?.to_u64().ok_or_else(|| err(step, format!("`{key}` is out of range")))
    }

    fn read_list_file(&self, step: &Step, file: &str) -> Result<Vec<Option<BigInt>>, PipelineError> {
        let path = self.data_dir.join(file);
        let text = std::fs::read_to_string(&path)
            .map_err(|_| PipelineError::MissingData { id: file.to_string(), path: path.clone() })?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| err(step, format!("{}: {e}", path.display())))?;
        let arr = v.as_array().ok_or_else(|| err(step, format!("{}: expected a JSON list", path.display())))?;
        arr.iter()
            .map(|x| match x {
                serde_json::Value::Null => Ok(None),
                x => crate::cyclo::json::int_from_json(x).map(Some).map_err(|e| err(step, e.to_string())),
            })
            .collect()
    }

    /// Comma-separated integer expressions, `_` for unknown, or `@file` for
    /// a JSON list (null for unknown) in the data directory.
    fn partial_list(&self, step: &Step, key: &str) -> Result<Vec<Option<BigInt>>, PipelineError> {
        let s = self.req(step, key)?;
        if let Some(file) = s.strip_prefix('@') {
            return self.read_list_file(step, file);
        }
        list_items(s)
            .map(|x| {
                if x == "_" {
                    Ok(None)
                } else {
                    parse_int_expr(x).map(Some).ok_or_else(|| err(step, format!("bad list entry `{x}`")))
                }
            })
            .collect()
    }

    fn int_list(&self, step: &Step, key: &str) -> Result<Vec<BigInt>, PipelineError> {
        self.partial_list(step, key)?
            .into_iter()
            .map(|x| x.ok_or_else(|| err(step, format!("`{key}` may not contain unknowns"))))
            .collect()
    }

    /// 1-based class positions with `a..b` ranges, returned 0-based.
    fn classes(&self, step: &Step, key: &str, n: usize) -> Result<Vec<usize>, PipelineError> {
        let s = self.req(step, key)?;
        parse_class_list(s, n).map_err(|m| err(step, format!("`{key}`: {m}")))
    }

    fn set(&mut self, name: &str, v: Value) {
        self.vars.insert(name.to_string(), v);
    }

    fn out_name<'s>(&self, step: &'s Step) -> Result<&'s str, PipelineError> {
        self.req(step, "as")
    }

    fn expect_usize(&self, step: &Step, key: &str, got: usize) -> Result<(), PipelineError> {
        if let Some(e) = step.get(key) {
            checkpoint(step, key, e, got)?;
        }
        Ok(())
    }

    fn step(&mut self, step: &Step) -> StepResult {
        match step.kind.as_str() {
            "load" => self.load(step),
            "oracle" => self.oracle(step),
            "factor" => self.factor(step),
            "product" => self.product(step),
            "save" => self.save(step),
            "chars" => self.select_chars(step),
            "sum" => self.sum(step),
            "concat" => self.concat(step),
            "decompose" => self.decompose(step),
            "induce" => self.induce(step),
            "inflate" | "restrict" => self.inflate(step),
            "stored-fusion" => self.stored_fusion(step),
            "permchars" => self.permchars(step),
            "induced-cyclic" => self.induced_cyclic(step),
            "symmetrize" => self.symmetrize(step),
            "reduce" => self.reduce(step),
            "lll" => self.lll(step),
            "oracle-permute" => self.oracle_permute(step),
            "oracle-extract" => self.oracle_extract(step),
            "set-irreducibles" => self.set_irreducibles(step),
            "head-new" => self.head_new(step),
            "copy" => self.copy(step),
            "extend-head" => self.extend_head(step),
            "permchar-centralizer" => self.permchar_centralizer(step),
            "sylow" => self.sylow(step),
            "normal-sylow" => self.normal_sylow(step),
            "finalize" => self.finalize(step),
            "solve-powermaps" => self.solve_powermaps(step),
            "resolve-pair" => self.resolve_pair(step),
            "commute-powermaps" => self.commute_powermaps(step),
            "check-consistency" => self.check_consistency(step),
            "choose" => self.choose(step),
            "apply-powermaps" => self.apply_powermaps(step),
            "fuse" => self.fuse(step),
            "partial-character" => self.partial_character(step),
            "decompose-restriction" => self.decompose_restriction(step),
            "complete-character" => self.complete_character(step),
            "assert" => self.assert(step),
            k => Err(err(step, format!("unknown step kind `{k}`"))),
        }
    }

    // data

    fn load(&mut self, step: &Step) -> StepResult {
        let id = self.req(step, "id")?;
        let file = step.get("file").map(str::to_string).unwrap_or_else(|| format!("{id}.tbl"));
        let path = self.data_dir.join(&file);
        if !path.exists() {
            return Err(PipelineError::MissingData { id: id.to_string(), path });
        }
        let bytes = std::fs::read(&path).map_err(|e| err(step, format!("{}: {e}", path.display())))?;
        let digest = sha256_hex(&bytes);
        if let Some(want) = step.get("sha256") {
            checkpoint(step, "sha256", want.to_ascii_lowercase(), &digest)?;
        }
        let text = String::from_utf8(bytes).map_err(|_| err(step, format!("{}: not UTF-8", path.display())))?;
        let t = CharacterTable::from_json_str(&text).map_err(|e| err(step, format!("{}: {e}", path.display())))?;
        let name = step.get("as").unwrap_or(id);
        let line = format!("loaded {} from {file}: {} classes, sha256 {digest}", t.id, t.class_count());
        self.set(name, Value::Table(Box::new(t)));
        Ok(vec![line])
    }

    fn oracle(&mut self, step: &Step) -> StepResult {
        let gens = parse_generators(self.req(step, "gens")?).map_err(|e| err(step, e))?;
        let id = self.req(step, "id")?;
        let limit = match step.get("limit") {
            Some(_) => self.u64_param(step, "limit")? as usize,
            None => DEFAULT_LIMIT,
        };
        let t = brute_force_table(&gens, limit, id).map_err(|e| err(step, e.to_string()))?;
        let line = format!("oracle table {id}: order {}, {} classes", t.order, t.class_count());
        self.set(step.get("as").unwrap_or(id), Value::Table(Box::new(t)));
        Ok(vec![line])
    }

    fn factor(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?;
        let kernel = self.classes(step, "kernel", t.class_count())?;
        let (mut f, map) = t.factor_table(&kernel).map_err(|e| err(step, e.to_string()))?;
        let kl: Vec<String> = kernel.iter().map(|k| (k + 1).to_string()).collect();
        f.id = step.get("id").map(str::to_string).unwrap_or_else(|| format!("{}/[ {} ]", t.id, kl.join(", ")));
        let line = format!("factor {}: {} classes", f.id, f.class_count());
        if let Some(fname) = step.get("fusion") {
            self.set(fname, Value::Fusions(vec![map]));
        }
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Table(Box::new(f)));
        Ok(vec![line])
    }

    fn product(&mut self, step: &Step) -> StepResult {
        let a = self.table(step, "a")?;
        let b = self.table(step, "b")?;
        let mut p = CharacterTable::direct_product(a, b);
        p.id = step.get("id").map(str::to_string).unwrap_or_else(|| format!("{}x{}", a.id, b.id));
        let line = format!("direct product {}: {} classes", p.id, p.class_count());
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Table(Box::new(p)));
        Ok(vec![line])
    }

    fn save(&mut self, step: &Step) -> StepResult {
        let name = self.req(step, "var")?;
        let file = self.req(step, "file")?;
        let Some(dir) = &self.out_dir else {
            return Ok(vec![format!("{name}: not written (no output directory)")]);
        };
        let path = dir.join(file);
        match self.var(step, name)? {
            Value::Table(t) => t.write_file(&path).map_err(|e| err(step, e.to_string()))?,
            Value::Head(h) => {
                let t = h.finalize("head").map_err(|e| err(step, e.to_string()))?;
                t.write_file(&path).map_err(|e| err(step, e.to_string()))?;
            }
            v => return Err(err(step, format!("cannot save a {}", v.kind()))),
        }
        Ok(vec![format!("wrote {}", path.display())])
    }

    // class functions

    fn select_chars(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?;
        let mut chars = match step.get("of").unwrap_or("irr") {
            "irr" => t.irreducibles.clone(),
            "trivial" => vec![t.trivial_character()],
            o => return Err(err(step, format!("unknown selection `{o}`"))),
        };
        if step.get("max-degree").is_some() {
            let bound = self.int(step, "max-degree")?;
            chars.retain(|c| c.degree().is_some_and(|d| d <= bound));
        }
        if step.get("select").is_some() {
            let sel = self.classes(step, "select", chars.len())?;
            chars = sel.into_iter().map(|i| chars[i].clone()).collect();
        }
        self.expect_usize(step, "expect-count", chars.len())?;
        let degrees: Vec<String> = chars.iter().map(|c| c[0].to_string()).collect();
        if let Some(e) = step.get("expect-degrees") {
            checkpoint(step, "expect-degrees", e, degrees.join(","))?;
        }
        let line = format!("{} characters, degrees [ {} ]", chars.len(), degrees.join(", "));
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Chars(chars));
        Ok(vec![line])
    }

    fn sum(&mut self, step: &Step) -> StepResult {
        let names: Vec<&str> = list_items(self.req(step, "chars")?).collect();
        let mut acc: Option<ClassFunction> = None;
        for n in names {
            for c in self.chars_by_name(step, n)? {
                acc = Some(match acc {
                    None => c.clone(),
                    Some(a) => {
                        if a.len() != c.len() {
                            return Err(err(step, "characters of different lengths"));
                        }
                        a.add(c)
                    }
                });
            }
        }
        let acc = acc.ok_or_else(|| err(step, "nothing to sum"))?;
        if let Some(e) = step.get("expect-degree") {
            checkpoint(step, "expect-degree", e, &acc[0])?;
        }
        let line = format!("degree {}", acc[0]);
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Chars(vec![acc]));
        Ok(vec![line])
    }

    fn concat(&mut self, step: &Step) -> StepResult {
        let mut out: Vec<ClassFunction> = Vec::new();
        for n in list_items(self.req(step, "chars")?) {
            for c in self.chars_by_name(step, n)? {
                if step.get("dedup") != Some("true") || !out.contains(c) {
                    out.push(c.clone());
                }
            }
        }
        self.expect_usize(step, "expect-count", out.len())?;
        let line = format!("{} characters", out.len());
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Chars(out));
        Ok(vec![line])
    }

    fn decompose(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?;
        let irr = match step.get("irr") {
            Some(n) => self.chars_by_name(step, n)?.clone(),
            None => t.irreducibles.clone(),
        };
        let mut lines = Vec::new();
        for chi in self.chars(step, "chars")? {
            let m = classfun::decompose(t, &irr, chi).map_err(|e| err(step, e.to_string()))?;
            let ms: Vec<String> = m.iter().map(ToString::to_string).collect();
            if let Some(e) = step.get("expect-mults") {
                let e: Vec<String> = list_items(e).map(str::to_string).collect();
                checkpoint(step, "expect-mults", e.join(","), ms.join(","))?;
            }
            if let Some(e) = step.get("expect-max") {
                checkpoint(step, "expect-max", e, m.iter().max().map(ToString::to_string).unwrap_or_default())?;
            }
            if let Some(e) = step.get("expect-positions") {
                for group in e.split_whitespace() {
                    let (val, pos) = group.split_once(':').ok_or_else(|| err(step, "expect-positions needs m:list groups"))?;
                    let got: Vec<String> =
                        ms.iter().enumerate().filter(|(_, x)| x.as_str() == val).map(|(i, _)| (i + 1).to_string()).collect();
                    let want: Vec<&str> = list_items(pos).collect();
                    checkpoint(step, &format!("positions of multiplicity {val}"), want.join(","), got.join(","))?;
                }
            }
            lines.push(format!("multiplicities [ {} ]", ms.join(", ")));
        }
        Ok(lines)
    }

    fn chars_for(&self, step: &Step, t: &CharacterTable) -> Result<Vec<ClassFunction>, PipelineError> {
        Ok(match self.req(step, "chars")? {
            "trivial" => vec![t.trivial_character()],
            "irr" => t.irreducibles.clone(),
            name => self.chars_by_name(step, name)?.clone(),
        })
    }

    fn induce(&mut self, step: &Step) -> StepResult {
        let sub = self.table(step, "sub")?;
        let amb = self.table(step, "amb")?;
        let chars = self.chars_for(step, sub)?;
        let maps = match step.get("fusion") {
            Some(_) => self.fusions(step, "fusion")?.clone(),
            None => possible_class_fusions(sub, amb, &FusionOptions::default()),
        };
        if maps.is_empty() {
            return Err(err(step, format!("no class fusion from {} into {}", sub.id, amb.id)));
        }
        let mut out: Vec<ClassFunction> = Vec::new();
        for map in &maps {
            for c in classfun::induce_by_fusion(sub, amb, &chars, map).map_err(|e| err(step, e.to_string()))? {
                out.push(c);
            }
        }
        if step.get("distinct") != Some("false") {
            out.sort();
            out.dedup();
        }
        let mut lines = vec![format!("{} fusion(s), {} distinct induced character(s)", maps.len(), out.len())];
        self.expect_usize(step, "expect-candidates", out.len())?;
        if step.get("faithful") == Some("true") {
            out.retain(|pi| amb.kernel(pi) == [0]);
            lines.push(format!("{} with trivial kernel", out.len()));
        }
        self.expect_usize(step, "expect-count", out.len())?;
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Chars(out));
        Ok(lines)
    }

    fn inflate(&mut self, step: &Step) -> StepResult {
        let from = self.table(step, "from")?;
        let to = self.table(step, "to")?;
        let map = self.fusions(step, "fusion")?.first().cloned().ok_or_else(|| err(step, "empty fusion list"))?;
        if map.len() != to.class_count() || map.iter().any(|&j| j >= from.class_count()) {
            return Err(err(step, "fusion does not map the target table onto the factor"));
        }
        let out: Vec<ClassFunction> = self
            .chars(step, "chars")?
            .iter()
            .map(|c| classfun::pull_back(c, &map))
            .collect::<Result<_, _>>()
            .map_err(|e| err(step, e.to_string()))?;
        let line = format!("{} character(s) pulled back to {}", out.len(), to.id);
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Chars(out));
        Ok(vec![line])
    }

    fn stored_fusion(&mut self, step: &Step) -> StepResult {
        let sub = self.table(step, "sub")?;
        let amb = self.table(step, "amb")?;
        let rec = amb
            .fusion_from(&sub.id)
            .ok_or_else(|| err(step, format!("no stored fusion between {} and {}", sub.id, amb.id)))?;
        let map = rec.map.to_fixed().ok_or_else(|| err(step, "stored fusion is not fixed"))?;
        let line = format!("stored fusion {} -> {}", rec.sub, amb.id);
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Fusions(vec![map]));
        Ok(vec![line])
    }

    fn permchars(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?;
        let pi0 = self.chars(step, "nonfaithful")?.first().cloned().ok_or_else(|| err(step, "empty nonfaithful list"))?;
        // default torso: twice the degree of the known character, 0 at the centre
        let torso = match step.get("torso") {
            Some(_) => self.partial_list(step, "torso")?,
            None => {
                let d = pi0.degree().ok_or_else(|| err(step, "nonfaithful character has no integral degree"))?;
                vec![Some(d * 2), Some(BigInt::zero())]
            }
        };
        let centre = match step.get("centre").unwrap_or("centre") {
            "centre" => t.normal_subgroups(NormalSelector::Centre).map_err(|e| err(step, e.to_string()))?.remove(0),
            _ => self.classes(step, "centre", t.class_count())?,
        };
        let found = permchar::perm_chars_with_torso(t, &torso, &centre, &pi0).map_err(|e| err(step, e.to_string()))?;
        self.expect_usize(step, "expect-count", found.len())?;
        let line = format!("{} solution(s)", found.len());
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Chars(found));
        Ok(vec![line])
    }

    fn induced_cyclic(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?;
        let classes = match step.get("classes") {
            Some(_) => self.classes(step, "classes", t.class_count())?,
            None => (1..t.class_count()).collect(),
        };
        let mode = match step.get("mode").unwrap_or("all") {
            "all" => CyclicMode::All,
            "linear" => CyclicMode::LinearOnly,
            m => return Err(err(step, format!("unknown mode `{m}`"))),
        };
        let out = classfun::induced_cyclic(t, &classes, mode).map_err(|e| err(step, e.to_string()))?;
        self.expect_usize(step, "expect-count", out.len())?;
        let line = format!("{} induced cyclic characters", out.len());
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Chars(out));
        Ok(vec![line])
    }

    fn symmetrize(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?;
        let mut out = Vec::new();
        for chi in self.chars(step, "chars")? {
            let (s, a) = classfun::symmetrize2(t, chi).map_err(|e| err(step, e.to_string()))?;
            out.push(a);
            out.push(s);
        }
        let line = format!("{} symmetrizations", out.len());
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Chars(out));
        Ok(vec![line])
    }

    fn store_split(&mut self, step: &Step, irr: Vec<ClassFunction>, rem: Vec<ClassFunction>) -> StepResult {
        self.expect_usize(step, "expect-irr", irr.len())?;
        self.expect_usize(step, "expect-rem", rem.len())?;
        let line = format!("{} irreducible(s), {} remainder(s)", irr.len(), rem.len());
        if let Some(n) = step.get("irr") {
            self.set(n, Value::Chars(irr));
        }
        if let Some(n) = step.get("rem") {
            self.set(n, Value::Chars(rem));
        }
        Ok(vec![line])
    }

    fn reduce(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?;
        let known = self.chars(step, "known")?;
        let chars = self.chars(step, "chars")?;
        let r = classfun::reduce(t, known, chars).map_err(|e| err(step, e.to_string()))?;
        self.store_split(step, r.irreducibles, r.remainders)
    }

    fn lll(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?;
        let chars = self.chars(step, "chars")?;
        let r = lattice::lll_reduce(t, chars).map_err(|e| err(step, e.to_string()))?;
        self.store_split(step, r.irreducibles, r.remainders)
    }

    fn oracle_permute(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?;
        let head_chars = self.chars(step, "chars")?;
        let reference = self.table(step, "reference")?;
        let sel = self.classes(step, "ref-chars", reference.irreducibles.len())?;
        let ref_chars: Vec<ClassFunction> = sel.iter().map(|&i| reference.irreducibles[i].clone()).collect();
        let print = |tb: &CharacterTable, chars: &[ClassFunction], i: usize| {
            let sq = tb.power_maps.get(&2).map(|m| m[i]);
            let v: Vec<String> = chars.iter().map(|c| format!("{}/{}", c[i], sq.map(|j| c[j].to_string()).unwrap_or_default())).collect();
            (tb.orders[i], tb.centralizers[i].clone(), v)
        };
        let mut f1: Vec<_> = (0..t.class_count()).map(|i| print(t, head_chars, i)).collect();
        let mut f2: Vec<_> = (0..reference.class_count()).map(|i| print(reference, &ref_chars, i)).collect();
        f1.sort();
        f1.dedup();
        f2.sort();
        f2.dedup();
        self.expect_usize(step, "expect-distinct", f1.len())?;
        if f1 != f2 {
            return Err(err(step, "the fingerprint sets of the two tables differ"));
        }
        let cols = fingerprint_bijection(t, head_chars, reference, &ref_chars)
            .ok_or_else(|| err(step, "no fingerprint bijection compatible with the power maps"))?;
        let oracle: Vec<ClassFunction> =
            reference.irreducibles.iter().map(|chi| cols.iter().map(|&j| chi[j].clone()).collect()).collect();
        let moved: Vec<String> =
            cols.iter().enumerate().filter(|(i, j)| i != *j).map(|(i, j)| format!("{}->{}", i + 1, j + 1)).collect();
        let mut lines = vec![
            format!("{} distinct fingerprints", f1.len()),
            format!("column matching moves {} classes", moved.len()),
        ];
        if !moved.is_empty() {
            lines.push(format!("moves {}", moved.join(" ")));
        }
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Chars(oracle));
        Ok(lines)
    }

    fn oracle_extract(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?;
        let gens = self.chars(step, "lattice")?;
        let oracle = self.chars(step, "oracle")?;
        let known_name = self.req(step, "known")?.to_string();
        let mut known = self.chars_by_name(step, &known_name)?.clone();
        let lat = CharacterLattice::new(t, gens).map_err(|e| err(step, e.to_string()))?;
        let mut added = 0;
        for phi in oracle {
            let Some(c) = lat.solve(t, phi).map_err(|e| err(step, e.to_string()))? else { continue };
            let chi = c
                .iter()
                .zip(gens)
                .filter(|(k, _)| !k.is_zero())
                .fold(ClassFunction::zero(t.class_count()), |acc, (k, g)| acc.add(&g.scale_int(k)));
            let n = classfun::norm(t, &chi).map_err(|e| err(step, e.to_string()))?;
            if !n.is_one() {
                return Err(err(step, format!("lattice vector matching an oracle character has norm {n}")));
            }
            if !known.contains(&chi) {
                known.push(chi);
                added += 1;
            }
        }
        self.expect_usize(step, "expect-known", known.len())?;
        let line = format!("lattice rank {}, {added} new, {} known", lat.rank(), known.len());
        self.set(&known_name, Value::Chars(known));
        Ok(vec![line])
    }

    fn set_irreducibles(&mut self, step: &Step) -> StepResult {
        let chars = self.chars(step, "chars")?.clone();
        let name = self.req(step, "table")?.to_string();
        let Some(Value::Table(t)) = self.vars.get_mut(&name) else {
            return Err(err(step, format!("`{name}` is not a table")));
        };
        t.irreducibles = chars;
        Ok(vec![format!("{} now has {} irreducibles", t.id, t.irreducibles.len())])
    }

    // heads

    fn head_new(&mut self, step: &Step) -> StepResult {
        let order = self.uint(step, "order")?;
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Head(Box::new(TableHead::new(order))));
        Ok(vec![])
    }

    fn copy(&mut self, step: &Step) -> StepResult {
        let from = self.req(step, "from")?;
        let v = self.var(step, from)?.clone();
        let name = self.out_name(step)?.to_string();
        self.set(&name, v);
        Ok(vec![])
    }

    fn extend_head(&mut self, step: &Step) -> StepResult {
        let mode = self.req(step, "mode")?;
        let before = self.head(step, "head")?.log.len();
        let mut lines = Vec::new();
        match mode {
            "roots" => {
                let sub = self.table(step, "sub")?.clone();
                let pos = self.classes(step, "pos", sub.class_count())?;
                let [pos] = pos[..] else { return Err(err(step, "`pos` must be one class")) };
                let found = self.head_mut(step, "head")?.extend_by_root_classes(&sub, pos).map_err(|e| err(step, e.to_string()))?;
                self.expect_usize(step, "expect-found", found)?;
            }
            "centralizer" => {
                let cent = self.uint(step, "cent")?;
                if step.get("sub").is_some() {
                    let sub = self.table(step, "sub")?.clone();
                    let pos = self.classes(step, "positions", sub.class_count())?;
                    self.head_mut(step, "head")?
                        .extend_by_centralizer_order(ClassSource::Table(&sub), cent, &pos)
                        .map_err(|e| err(step, e.to_string()))?;
                } else {
                    let ord = self.u64_param(step, "order")?;
                    self.head_mut(step, "head")?
                        .extend_by_centralizer_order(ClassSource::Order(ord), cent, &[])
                        .map_err(|e| err(step, e.to_string()))?;
                }
            }
            "permchar" => {
                let sub = self.table(step, "sub")?.clone();
                let pi = self.chars(step, "pi")?.first().cloned().ok_or_else(|| err(step, "empty character list"))?;
                let pos = self.classes(step, "positions", sub.class_count())?;
                let cent =
                    self.head_mut(step, "head")?.extend_by_perm_char_value(&sub, &pi, &pos).map_err(|e| err(step, e.to_string()))?;
                if let Some(e) = step.get("expect-cent") {
                    checkpoint(step, "expect-cent", parse_int_expr(e).map(|x| x.to_string()).unwrap_or_default(), &cent)?;
                }
                lines.push(format!("centralizer order {cent}"));
            }
            m => return Err(err(step, format!("unknown mode `{m}`"))),
        }
        let h = self.head(step, "head")?;
        let new_log: Vec<String> = h.log[before..].to_vec();
        let n = h.class_count();
        let bad = h.fusion_violations();
        if let Some(v) = bad.first() {
            return Err(err(step, format!("fusion inconsistency: {v}")));
        }
        self.expect_usize(step, "expect-classes", n)?;
        self.audit.extend(new_log.iter().cloned());
        lines.splice(0..0, new_log);
        Ok(lines)
    }

    fn permchar_centralizer(&mut self, step: &Step) -> StepResult {
        let sub = self.table(step, "sub")?;
        let pi = self.chars(step, "pi")?.first().ok_or_else(|| err(step, "empty character list"))?;
        let pos = self.classes(step, "positions", sub.class_count())?;
        let cents: Vec<BigUint> = pos
            .iter()
            .map(|&i| headbuilder::perm_char_centralizer(sub, pi, &[i]))
            .collect::<Result<_, _>>()
            .map_err(|e| err(step, e.to_string()))?;
        let times = if step.get("times").is_some() { self.uint(step, "times")? } else { BigUint::one() };
        let got: Vec<String> = cents.iter().map(|c| (c * &times).to_string()).collect();
        if step.get("expect").is_some() {
            let want: Vec<String> = self.int_list(step, "expect")?.iter().map(ToString::to_string).collect();
            checkpoint(step, "expect", want.join(","), got.join(","))?;
        }
        Ok(vec![format!("[ {} ]", got.join(", "))])
    }

    fn sylow(&mut self, step: &Step) -> StepResult {
        let order = self.uint(step, "order")?;
        let p = self.u64_param(step, "p")?;
        let index = if step.get("index").is_some() { self.u64_param(step, "index")? } else { 1 };
        let base = self.uint(step, "base")?;
        let pool: Vec<BigUint> = if let Some(parts) = step.get("parts") {
            let mut v = Vec::new();
            for item in list_items(parts) {
                let (q, e) = item.split_once('^').unwrap_or((item, "1"));
                let q: u64 = q.parse().map_err(|_| err(step, format!("bad part `{item}`")))?;
                let e: u32 = e.parse().map_err(|_| err(step, format!("bad part `{item}`")))?;
                v.push((q, e));
            }
            headbuilder::candidate_products(&base, &v)
        } else {
            let n = self.uint(step, "divisors-of")?;
            divisors(&n).into_iter().map(|d| &base * d).collect()
        };
        let good = headbuilder::sylow_normalizer_orders(&order, p, index, pool);
        let got: Vec<String> = good.iter().map(ToString::to_string).collect();
        if step.get("expect").is_some() {
            let want: Vec<String> = self.int_list(step, "expect")?.iter().map(ToString::to_string).collect();
            checkpoint(step, "expect", want.join(","), got.join(","))?;
        }
        Ok(vec![format!("[ {} ]", got.join(", "))])
    }

    fn normal_sylow(&mut self, step: &Step) -> StepResult {
        let n = self.uint(step, "n")?;
        let q = self.u64_param(step, "q")?;
        let got: Vec<String> = headbuilder::normal_sylow_check(&n, q).iter().map(ToString::to_string).collect();
        if step.get("expect").is_some() {
            let want: Vec<String> = self.int_list(step, "expect")?.iter().map(ToString::to_string).collect();
            checkpoint(step, "expect", want.join(","), got.join(","))?;
        }
        Ok(vec![format!("[ {} ]", got.join(", "))])
    }

    fn finalize(&mut self, step: &Step) -> StepResult {
        let h = self.head(step, "head")?;
        let id = step.get("id").unwrap_or("head");
        let t = h.finalize(id).map_err(|e| err(step, e.to_string()))?;
        self.expect_usize(step, "expect-classes", t.class_count())?;
        let line = format!("{}: {} classes, class equation holds", t.id, t.class_count());
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Table(Box::new(t)));
        Ok(vec![line])
    }

    // power maps and fusions

    fn solver_mut(&mut self, step: &Step, key: &str) -> Result<&mut SolverState, PipelineError> {
        let name = self.req(step, key)?.to_string();
        match self.vars.get_mut(&name) {
            Some(Value::Solver(s)) => Ok(s),
            _ => Err(err(step, format!("`{name}` is not a power-map state"))),
        }
    }

    /// Class fusions from `names`, initialized from the records of `head`.
    fn head_fusions(&self, step: &Step, t: &CharacterTable, names: &[&str]) -> Result<Vec<(String, ParaMap)>, PipelineError> {
        let h = self.head(step, "head")?;
        let mut out = Vec::new();
        for &s in names {
            let sub = self.table_by_name(step, s)?;
            let rec = h
                .fusions
                .iter()
                .find(|f| f.record.sub == sub.id)
                .ok_or_else(|| err(step, format!("head has no fusion record from {}", sub.id)))?;
            let mut fus = fusion::init_fusion(sub, t).map_err(|e| err(step, e.to_string()))?;
            fusion::merge_prescribed(&mut fus, &rec.record.map).map_err(|e| err(step, format!("fusion from {}: {e}", sub.id)))?;
            out.push((s.to_string(), fus));
        }
        Ok(out)
    }

    fn solve_powermaps(&mut self, step: &Step) -> StepResult {
        let state_name = self.req(step, "state")?.to_string();
        let mut lines = Vec::new();
        let mut state = match self.vars.get(&state_name) {
            Some(Value::Solver(s)) => (**s).clone(),
            _ => {
                let t = self.table(step, "table")?;
                let subs: Vec<&str> = list_items(self.req(step, "subs")?).collect();
                let max = t.orders.iter().copied().max().unwrap_or(1);
                let primes = primes_up_to(max);
                let mut maps = BTreeMap::new();
                for &p in &primes {
                    maps.insert(p, powermap::init_power_map(t, p).map_err(|e| err(step, e.to_string()))?);
                }
                let fusions = self.head_fusions(step, t, &subs)?;
                SolverState { table: self.req(step, "table")?.to_string(), primes, maps, fusions }
            }
        };
        if let Some(add) = step.get("add") {
            let t = self.table_by_name(step, &state.table)?;
            let names: Vec<&str> = list_items(add).collect();
            for (n, f) in self.head_fusions(step, t, &names)? {
                if state.fusions.iter().any(|(m, _)| *m == n) {
                    return Err(err(step, format!("state already has a fusion from {n}")));
                }
                state.fusions.push((n, f));
            }
        }
        let active: Vec<usize> = match step.get("only") {
            Some(o) => {
                let names: Vec<&str> = list_items(o).collect();
                let idx: Vec<usize> =
                    state.fusions.iter().enumerate().filter(|(_, (n, _))| names.contains(&n.as_str())).map(|(i, _)| i).collect();
                if idx.len() != names.len() {
                    return Err(err(step, "`only` names a fusion the state does not have"));
                }
                idx
            }
            None => (0..state.fusions.len()).collect(),
        };
        let subs: Vec<&CharacterTable> =
            active.iter().map(|&i| self.table_by_name(step, &state.fusions[i].0)).collect::<Result<_, _>>()?;
        let mut fus: Vec<ParaMap> = active.iter().map(|&i| state.fusions[i].1.clone()).collect();
        let primes: Option<Vec<u64>> = match step.get("primes") {
            Some(ps) => Some(list_items(ps).map(|p| p.parse().map_err(|_| err(step, format!("bad prime `{p}`")))).collect::<Result<_, _>>()?),
            None => None,
        };
        let e2s = |e: powermap::PowerMapError| err(step, e.to_string());
        match step.get("mode").unwrap_or("fixpoint") {
            "once" => {
                let changed = powermap::transfer_pass(&mut state.maps, primes.as_deref(), &subs, &mut fus).map_err(e2s)?;
                lines.push(format!("one pass, {}", if changed { "improved" } else { "no improvement" }));
            }
            "fixpoint" => {
                if primes.is_some() {
                    return Err(err(step, "`primes` needs mode=once"));
                }
                let rounds = powermap::refine_by_fusions(&mut state.maps, &subs, &mut fus).map_err(e2s)?;
                for _ in 0..rounds {
                    self.audit.push("#I start a round".into());
                }
                lines.push(format!("initial pass and {rounds} round(s)"));
                self.expect_usize(step, "expect-rounds", rounds)?;
            }
            m => return Err(err(step, format!("unknown mode `{m}`"))),
        }
        for (&i, g) in active.iter().zip(fus) {
            state.fusions[i].1 = g;
        }
        let indet = indeterminateness_list(&state);
        lines.push(format!("indeterminateness [ {indet} ]"));
        if let Some(e) = step.get("expect-indet") {
            checkpoint(step, "expect-indet", expand_repeats(e), &indet)?;
        }
        self.set(&state_name, Value::Solver(Box::new(state)));
        Ok(lines)
    }

    fn commute_powermaps(&mut self, step: &Step) -> StepResult {
        let a = self.u64_param(step, "a")?;
        let b = self.u64_param(step, "b")?;
        let st = self.solver_mut(step, "state")?;
        powermap::refine_by_commuting(&mut st.maps, a, b).map_err(|e| err(step, e.to_string()))?;
        let indet = indeterminateness_list(st);
        if let Some(e) = step.get("expect-indet") {
            checkpoint(step, "expect-indet", expand_repeats(e), &indet)?;
        }
        Ok(vec![format!("indeterminateness [ {indet} ]")])
    }

    fn check_consistency(&mut self, step: &Step) -> StepResult {
        let st = self.solver(step, "state")?.clone();
        let mut maps = st.maps.clone();
        let mut fusions = st.fusions.clone();
        let mut lines = Vec::new();
        for (name, fus) in fusions.iter_mut() {
            let sub = self.table_by_name(step, name)?;
            if !fusion::test_consistency_maps(&sub.power_maps, fus, &mut maps) {
                return Err(err(step, format!("fusion from {} is inconsistent with the power maps", sub.id)));
            }
            lines.push(format!("{}: consistent", sub.id));
        }
        let st = self.solver_mut(step, "state")?;
        st.maps = maps;
        st.fusions = fusions;
        Ok(lines)
    }

    fn resolve_pair(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?.clone();
        let pair = self.classes(step, "classes", t.class_count())?;
        let [a, b] = pair[..] else { return Err(err(step, "`classes` must list two classes")) };
        let d = self.int(step, "d")?.to_i64().ok_or_else(|| err(step, "`d` out of range"))?;
        let mut lines = Vec::new();
        if let Some(src) = step.get("field-from") {
            let sub = self.table_by_name(step, src)?;
            let pos = self.classes(step, "field-class", sub.class_count())?;
            let vals: Vec<Cyclotomic> = sub.irreducibles.iter().map(|c| c[pos[0]].clone()).collect();
            let ok = field_contains_sqrt(&vals, d);
            lines.push(format!("sqrt({d}) in the character field on class {} of {}: {ok}", pos[0] + 1, sub.id));
            if !ok {
                return Err(err(step, format!("sqrt({d}) does not lie in the given character field")));
            }
        }
        let order = t.orders[a];
        let state = self.solver_mut(step, "state")?;
        let primes: Vec<u64> = state.primes.iter().copied().filter(|p| order % p != 0).collect();
        let res = powermap::resolve_quadratic_pair(&t, &mut state.maps, (a, b), d, &primes).map_err(|e| err(step, e.to_string()))?;
        let fixed: Vec<String> = res.iter().filter(|r| r.1).map(|r| r.0.to_string()).collect();
        lines.push(format!("primes fixing the pair: {}", fixed.join(",")));
        Ok(lines)
    }

    fn choose(&mut self, step: &Step) -> StepResult {
        let just = self.req(step, "justification")?.to_string();
        let line;
        if let Some(from) = step.get("from") {
            let v = self.var(step, from)?.clone();
            let name = self.out_name(step)?.to_string();
            self.set(&name, v);
            line = format!("#I choice: {name} := {from} ({just})");
        } else {
            let state_name = self.req(step, "state")?.to_string();
            let n = {
                let st = self.solver(step, "state")?;
                let t = self.table_by_name(step, &st.table)?;
                t.class_count()
            };
            if let Some(sub_name) = step.get("fusion") {
                let sub_n = self.table_by_name(step, sub_name)?.class_count();
                let cls = self.classes(step, "class", sub_n)?;
                let vals = self.classes(step, "value", n)?;
                if cls.len() != vals.len() {
                    return Err(err(step, "`class` and `value` differ in length"));
                }
                let st = self.solver_mut(step, "state")?;
                let fus = st
                    .fusions
                    .iter_mut()
                    .find(|(s, _)| s == sub_name)
                    .map(|(_, f)| f)
                    .ok_or_else(|| err(step, format!("no fusion from {sub_name} in {state_name}")))?;
                for (&c, &v) in cls.iter().zip(&vals) {
                    if !fus.entry(c).contains(v) && !matches!(fus.entry(c), Entry::Unbound) {
                        return Err(err(step, format!("class {} cannot fuse to {}", c + 1, v + 1)));
                    }
                    fus.set(c, Entry::Fixed(v));
                }
                line = format!("#I choice: fusion {sub_name} {} ({just})", step.get("class").unwrap_or_default());
            } else {
                let p = self.u64_param(step, "p")?;
                let cls = self.classes(step, "class", n)?;
                let vals = match step.get("value-of") {
                    Some(_) => {
                        let src = self.classes(step, "value-of", n)?;
                        let st = self.solver(step, "state")?;
                        let m = st.maps.get(&p).ok_or_else(|| err(step, format!("no {p}-th power map in the state")))?;
                        src.iter()
                            .map(|&c| m.entry(c).fixed().ok_or_else(|| err(step, format!("{p}-th power of class {} is not fixed", c + 1))))
                            .collect::<Result<Vec<_>, _>>()?
                    }
                    None => self.classes(step, "value", n)?,
                };
                if cls.len() != vals.len() {
                    return Err(err(step, "`class` and `value` differ in length"));
                }
                let st = self.solver_mut(step, "state")?;
                let m = st.maps.get_mut(&p).ok_or_else(|| err(step, format!("no {p}-th power map in the state")))?;
                for (&c, &v) in cls.iter().zip(&vals) {
                    m.restrict(c, &[v]).map_err(|_| err(step, format!("class {} cannot have {p}-th power {}", c + 1, v + 1)))?;
                }
                line = format!("#I choice: {p}-th power map on {} ({just})", step.get("class").unwrap_or_default());
            }
        }
        self.audit.push(line.clone());
        Ok(vec![line])
    }

    fn apply_powermaps(&mut self, step: &Step) -> StepResult {
        let st = self.solver(step, "state")?;
        let fixed = powermap::fixed_maps(&st.maps).map_err(|e| err(step, e.to_string()))?;
        let name = self.req(step, "table")?.to_string();
        let Some(Value::Table(t)) = self.vars.get_mut(&name) else {
            return Err(err(step, format!("`{name}` is not a table")));
        };
        t.power_maps = fixed;
        let v = t.validate();
        if let Some(x) = v.first() {
            return Err(err(step, format!("table invalid after setting power maps: {x}")));
        }
        Ok(vec![format!("{} power maps set on {}", t.power_maps.len(), t.id)])
    }

    fn fuse(&mut self, step: &Step) -> StepResult {
        let sub = self.table(step, "sub")?;
        let amb = self.table(step, "amb")?;
        let mut opts = FusionOptions::default();
        if step.get("state").is_some() {
            let sub_name = self.req(step, "sub")?;
            let st = self.solver(step, "state")?;
            opts.prescribed = st.fusions.iter().find(|(s, _)| s == sub_name).map(|(_, f)| f.clone());
        }
        if step.get("head").is_some() {
            let h = self.head(step, "head")?;
            opts.prescribed = h.fusions.iter().find(|f| f.record.sub == sub.id).map(|f| f.record.map.clone());
        }
        if step.get("chars").is_some() {
            opts.chars = Some(self.chars(step, "chars")?.clone());
        }
        let found = possible_class_fusions(sub, amb, &opts);
        self.expect_usize(step, "expect-count", found.len())?;
        if step.get("expect-some") == Some("true") && found.is_empty() {
            return Err(checkpoint(step, "expect-some", "at least one", 0).unwrap_err());
        }
        let line = format!("{} possible class fusion(s) {} -> {}", found.len(), sub.id, amb.id);
        let name = self.out_name(step)?.to_string();
        self.set(&name, Value::Fusions(found));
        Ok(vec![line])
    }

    // character completion

    fn fusion_for(&self, step: &Step, sub: &CharacterTable) -> Result<ParaMap, PipelineError> {
        if step.get("state").is_some() {
            let sub_name = self.req(step, "sub")?;
            let st = self.solver(step, "state")?;
            return st
                .fusions
                .iter()
                .find(|(s, _)| s == sub_name)
                .map(|(_, f)| f.clone())
                .ok_or_else(|| err(step, format!("no fusion from {sub_name} in the state")));
        }
        let h = self.head(step, "head")?;
        h.fusions
            .iter()
            .find(|f| f.record.sub == sub.id)
            .map(|f| f.record.map.clone())
            .ok_or_else(|| err(step, format!("head has no fusion record from {}", sub.id)))
    }

    fn partial_mut(&mut self, step: &Step, n: usize) -> Result<&mut Vec<Option<BigInt>>, PipelineError> {
        let name = self.req(step, "target")?.to_string();
        if !self.vars.contains_key(&name) {
            self.set(&name, Value::Partial(vec![None; n]));
        }
        match self.vars.get_mut(&name) {
            Some(Value::Partial(p)) if p.len() == n => Ok(p),
            _ => Err(err(step, format!("`{name}` is not a partial character of length {n}"))),
        }
    }

    fn partial_character(&mut self, step: &Step) -> StepResult {
        let n = self.head(step, "head")?.class_count();
        let sub = self.table(step, "sub")?.clone();
        let rest = self.chars(step, "char")?.first().cloned().ok_or_else(|| err(step, "empty character list"))?;
        let map = self.fusion_for(step, &sub)?;
        let chi = self.partial_mut(step, n)?;
        for (i, e) in map.entries().iter().enumerate() {
            let Some(j) = e.fixed() else { continue };
            let v = rest[i].to_integer().ok_or_else(|| err(step, format!("value on class {} is not an integer", i + 1)))?;
            match &chi[j] {
                Some(old) if *old != v => return Err(err(step, format!("inconsistency on class {}", j + 1))),
                _ => chi[j] = Some(v),
            }
        }
        let known = chi.iter().filter(|x| x.is_some()).count();
        self.expect_usize(step, "expect-known", known)?;
        Ok(vec![format!("{known} values known")])
    }

    fn decompose_restriction(&mut self, step: &Step) -> StepResult {
        let n = self.head(step, "head")?.class_count();
        let sub = self.table(step, "sub")?.clone();
        let map = self.fusion_for(step, &sub)?;
        let chi = self.partial_mut(step, n)?.clone();
        let degree = chi[0].clone().ok_or_else(|| err(step, "degree unknown"))?;
        let cand: Vec<&ClassFunction> =
            sub.irreducibles.iter().filter(|x| x.degree().is_some_and(|d| d <= degree)).collect();
        let knownpos: Vec<usize> = (0..map.len()).filter(|&i| map.entry(i).fixed().is_some_and(|j| chi[j].is_some())).collect();
        let rest: Vec<Cyclotomic> = knownpos
            .iter()
            .map(|&i| Cyclotomic::from_integer(chi[map.entry(i).fixed().expect("fixed")].clone().expect("known")))
            .collect();
        let mat: Vec<Vec<Cyclotomic>> = cand.iter().map(|c| knownpos.iter().map(|&i| c[i].clone()).collect()).collect();
        let rank = lattice::rank_mat(&mat);
        let mut lines = vec![format!("{} candidates, rank {rank}", cand.len())];
        self.expect_usize(step, "expect-candidates", cand.len())?;
        self.expect_usize(step, "expect-rank", rank)?;
        let sol = lattice::solution_mat(&mat, &rest);
        let sol_str = sol
            .as_ref()
            .map_or_else(|| "fail".to_string(), |s| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
        lines.push(format!("solution {}", if sol.is_some() { format!("[ {} ]", sol_str.replace(',', ", ")) } else { sol_str.clone() }));
        if let Some(e) = step.get("expect-solution") {
            let e: Vec<&str> = list_items(e).collect();
            checkpoint(step, "expect-solution", e.join(","), &sol_str)?;
        }
        if step.get("fill") == Some("true") {
            let sol = sol.ok_or_else(|| err(step, "no solution to fill from"))?;
            let mut r = ClassFunction::zero(sub.class_count());
            for (c, x) in sol.iter().zip(&cand) {
                r = r.add(&ClassFunction::new(x.iter().map(|v| v * c).collect()));
            }
            let target = self.partial_mut(step, n)?;
            for (i, e) in map.entries().iter().enumerate() {
                if let Some(j) = e.fixed() {
                    let v = r[i].to_integer().ok_or_else(|| err(step, "restriction has a non-integral value"))?;
                    target[j] = Some(v);
                }
            }
            let known = target.iter().filter(|x| x.is_some()).count();
            self.expect_usize(step, "expect-known", known)?;
            lines.push(format!("{known} values known"));
        }
        Ok(lines)
    }

    fn complete_character(&mut self, step: &Step) -> StepResult {
        let t = self.table(step, "table")?.clone();
        let name = self.req(step, "target")?.to_string();
        let partial = match self.var(step, &name)? {
            Value::Partial(p) => p.clone(),
            v => return Err(err(step, format!("`{name}` is a {}, not a partial character", v.kind()))),
        };
        let missing: Vec<String> = partial.iter().enumerate().filter(|(_, x)| x.is_none()).map(|(i, _)| (i + 1).to_string()).collect();
        if let Some(e) = step.get("expect-missing") {
            checkpoint(step, "expect-missing", list_items(e).collect::<Vec<_>>().join(","), missing.join(","))?;
        }
        let orth = step.get("orth") == Some("true");
        let c = classfun::complete_rational_character(&t, &partial, orth).map_err(|e| err(step, e.to_string()))?;
        let mut lines = c.log.iter().map(|l| format!("#I {l}")).collect::<Vec<_>>();
        self.audit.extend(lines.iter().cloned());
        if let Some(e) = step.get("expect-congruences") {
            let got: Vec<String> = c
                .log
                .iter()
                .filter_map(|l| l.split_once(": value ").map(|(_, r)| r.replace(" modulo ", "/")))
                .collect();
            checkpoint(step, "expect-congruences", list_items(e).collect::<Vec<_>>().join(","), got.join(","))?;
        }
        if let Some(e) = step.get("expect-sum") {
            let got = c.orthogonality_sum.as_ref().map(ToString::to_string).unwrap_or_else(|| "none".into());
            checkpoint(step, "expect-sum", parse_int_expr(e).map(|x| x.to_string()).unwrap_or_else(|| e.to_string()), got)?;
        }
        if let Some(e) = step.get("expect-value") {
            let (cls, val) = e.split_once(':').ok_or_else(|| err(step, "expect-value needs class:value"))?;
            let k: usize = cls.parse().map_err(|_| err(step, "bad class"))?;
            let got = c.values.get(k.wrapping_sub(1)).cloned().flatten().map(|x| x.to_string()).unwrap_or_else(|| "unknown".into());
            checkpoint(step, "expect-value", val, got)?;
        }
        let still = c.values.iter().filter(|x| x.is_none()).count();
        lines.push(format!("{still} value(s) still missing"));
        if let Some(out) = step.get("as") {
            if still > 0 {
                return Err(err(step, "character is not complete"));
            }
            let vals: Vec<BigInt> = c.values.iter().map(|x| x.clone().expect("complete")).collect();
            self.set(out, Value::Chars(vec![ClassFunction::from_bigints(&vals)]));
        }
        self.set(&name, Value::Partial(c.values));
        Ok(lines)
    }

    // assertions

    fn assert(&mut self, step: &Step) -> StepResult {
        let kind = self.req(step, "kind")?;
        match kind {
            "count" => {
                let name = self.req(step, "var")?;
                let n = match self.var(step, name)? {
                    Value::Chars(c) => c.len(),
                    Value::Fusions(f) => f.len(),
                    Value::Table(t) => t.class_count(),
                    Value::Head(h) => h.class_count(),
                    Value::Partial(p) => p.iter().filter(|x| x.is_some()).count(),
                    Value::Solver(s) => s.maps.len(),
                };
                checkpoint(step, "count", self.req(step, "equals")?, n)?;
                Ok(vec![format!("{name}: {n}")])
            }
            "norms" => {
                let t = self.table(step, "table")?;
                let mut norms: Vec<String> = self
                    .chars(step, "chars")?
                    .iter()
                    .map(|c| classfun::norm(t, c).map(|x| x.to_string()))
                    .collect::<Result<_, _>>()
                    .map_err(|e| err(step, e.to_string()))?;
                norms.sort();
                norms.dedup();
                checkpoint(step, "norms", self.req(step, "equals")?, norms.join(","))?;
                Ok(vec![format!("norms [ {} ]", norms.join(", "))])
            }
            "class-equation" => {
                let h = self.head(step, "head")?;
                if !h.class_equation_holds() {
                    return Err(checkpoint(step, "class equation", &h.order, h.class_length_sum()).unwrap_err());
                }
                Ok(vec!["class equation holds".into()])
            }
            "same-heads" => {
                let a = self.head(step, "a")?;
                let b = self.head(step, "b")?;
                checkpoint(step, "same class data", true, a.same_class_data(b))?;
                Ok(vec!["heads agree".into()])
            }
            "equivalent" => {
                let a = self.table(step, "a")?;
                let b = self.table(step, "b")?;
                let p = transforming_permutations(a, b).map_err(|e| err(step, e.to_string()))?;
                checkpoint(step, "equivalent", true, p.is_some())?;
                Ok(vec![format!("{} and {} are equivalent", a.id, b.id)])
            }
            "validate" => {
                let t = self.table(step, "table")?;
                let v = t.validate();
                if let Some(x) = v.first() {
                    return Err(err(step, format!("{} violation(s), first: {x}", v.len())));
                }
                Ok(vec![format!("{} passes validation", t.id)])
            }
            "factorization" => {
                let n = self.uint(step, "order")?;
                let sep = step.get("sep").unwrap_or("*");
                let f = factorization_string(&n, sep);
                checkpoint(step, "factorization", self.req(step, "equals")?, &f)?;
                Ok(vec![f])
            }
            "automorphism" => {
                let t = self.table(step, "table")?;
                let perm = parse_cycles(self.req(step, "perm")?, t.class_count()).map_err(|e| err(step, e))?;
                let ok = crate::table::is_table_automorphism(t, &perm).map_err(|e| err(step, e.to_string()))?;
                checkpoint(step, "automorphism", true, ok)?;
                Ok(vec![format!("{} is a table automorphism", step.get("perm").unwrap_or_default())])
            }
            "field-contains" => {
                let t = self.table(step, "table")?;
                let pos = self.classes(step, "class", t.class_count())?;
                let d = self.int(step, "d")?.to_i64().ok_or_else(|| err(step, "`d` out of range"))?;
                let vals: Vec<Cyclotomic> = t.irreducibles.iter().map(|c| c[pos[0]].clone()).collect();
                let ok = field_contains_sqrt(&vals, d);
                checkpoint(step, "field contains sqrt", self.req(step, "equals").unwrap_or("true"), ok)?;
                Ok(vec![format!("sqrt({d}) in field: {ok}")])
            }
            "indeterminateness" => {
                let st = self.solver(step, "state")?;
                let got = indeterminateness_list(st);
                checkpoint(step, "indeterminateness", expand_repeats(self.req(step, "equals")?), &got)?;
                Ok(vec![got])
            }
            "values" => {
                let name = self.req(step, "var")?;
                let want: Vec<String> = self.int_list(step, "equals")?.iter().map(ToString::to_string).collect();
                let mut got: Vec<String> = match self.var(step, name)? {
                    Value::Chars(c) => c.first().map(|c| c.iter().map(ToString::to_string).collect()).unwrap_or_default(),
                    Value::Partial(p) => p.iter().map(|x| x.as_ref().map_or("_".into(), ToString::to_string)).collect(),
                    v => return Err(err(step, format!("cannot compare values of a {}", v.kind()))),
                };
                if step.get("classes").is_some() {
                    let cls = self.classes(step, "classes", got.len())?;
                    got = cls.iter().map(|&i| got[i].clone()).collect();
                }
                checkpoint(step, "values", want.join(","), got.join(","))?;
                Ok(vec![format!("[ {} ]", got.join(", "))])
            }
            "int-value" => {
                let got = match self.var(step, self.req(step, "var")?)? {
                    Value::Head(h) => {
                        let k = self.classes(step, "class", h.class_count())?[0];
                        h.centralizers[k].to_string()
                    }
                    v => return Err(err(step, format!("no centralizer data in a {}", v.kind()))),
                };
                checkpoint(step, "centralizer", self.int(step, "equals")?, got)?;
                Ok(vec![])
            }
            "index" => {
                let t = self.table(step, "table")?;
                let pi = self.chars(step, "chars")?.first().ok_or_else(|| err(step, "empty character list"))?;
                let d = pi.degree().ok_or_else(|| err(step, "degree is not an integer"))?;
                let got = d * BigInt::from(t.order.clone());
                checkpoint(step, "degree times order", self.int(step, "equals")?, &got)?;
                Ok(vec![got.to_string()])
            }
            "class-sizes" => {
                let t = self.table(step, "table")?;
                let cls = self.classes(step, "classes", t.class_count())?;
                let got: Vec<String> = cls.iter().map(|&i| (&t.order / &t.centralizers[i]).to_string()).collect();
                let want: Vec<String> = self.int_list(step, "equals")?.iter().map(ToString::to_string).collect();
                checkpoint(step, "class sizes", want.join(","), got.join(","))?;
                Ok(vec![format!("[ {} ]", got.join(", "))])
            }
            "same-maps" => {
                let a = self.solver(step, "a")?;
                let b = self.solver(step, "b")?;
                checkpoint(step, "same power maps", true, a.maps == b.maps)?;
                Ok(vec!["power maps agree".into()])
            }
            "centralizers" => {
                let (cents, n): (Vec<BigUint>, usize) = match self.var(step, self.req(step, "var")?)? {
                    Value::Table(t) => (t.centralizers.clone(), t.class_count()),
                    Value::Head(h) => (h.centralizers.clone(), h.class_count()),
                    v => return Err(err(step, format!("no centralizer data in a {}", v.kind()))),
                };
                let cls = self.classes(step, "classes", n)?;
                let got: Vec<String> = cls.iter().map(|&i| cents[i].to_string()).collect();
                let want: Vec<String> = self.int_list(step, "equals")?.iter().map(ToString::to_string).collect();
                checkpoint(step, "centralizers", want.join(","), got.join(","))?;
                Ok(vec![format!("[ {} ]", got.join(", "))])
            }
            "positions" => {
                let (orders, cents, order): (Vec<u64>, Vec<BigUint>, BigUint) = match self.var(step, self.req(step, "var")?)? {
                    Value::Table(t) => (t.orders.clone(), t.centralizers.clone(), t.order.clone()),
                    Value::Head(h) => (h.orders.clone(), h.centralizers.clone(), h.order.clone()),
                    v => return Err(err(step, format!("no class data in a {}", v.kind()))),
                };
                let want_order = if step.get("order").is_some() { Some(self.u64_param(step, "order")?) } else { None };
                let want_cent = if step.get("cent").is_some() { Some(self.uint(step, "cent")?) } else { None };
                let want_size = if step.get("size").is_some() { Some(self.uint(step, "size")?) } else { None };
                let cent_div = if step.get("cent-divisible-by").is_some() { Some(self.uint(step, "cent-divisible-by")?) } else { None };
                let got: Vec<String> = (0..orders.len())
                    .filter(|&i| want_order.is_none_or(|o| orders[i] == o))
                    .filter(|&i| want_cent.as_ref().is_none_or(|c| cents[i] == *c))
                    .filter(|&i| want_size.as_ref().is_none_or(|z| &order / &cents[i] == *z))
                    .filter(|&i| cent_div.as_ref().is_none_or(|d| (&cents[i] % d).is_zero()))
                    .map(|i| (i + 1).to_string())
                    .collect();
                if step.get("count").is_some() {
                    checkpoint(step, "number of positions", self.u64_param(step, "count")?, got.len())?;
                } else {
                    let want: Vec<String> = parse_class_list(self.req(step, "equals")?, orders.len())
                        .map_err(|m| err(step, m))?
                        .iter()
                        .map(|i| (i + 1).to_string())
                        .collect();
                    checkpoint(step, "positions", want.join(","), got.join(","))?;
                }
                Ok(vec![format!("[ {} ]", got.join(", "))])
            }
            "power-map" => {
                let t = self.table(step, "table")?;
                let p = self.u64_param(step, "p")?;
                let cls = self.classes(step, "classes", t.class_count())?;
                let m = powermap::power_map(t, p).map_err(|e| err(step, e.to_string()))?;
                let got: Vec<String> = cls.iter().map(|&i| (m[i] + 1).to_string()).collect();
                let want: Vec<String> = list_items(self.req(step, "equals")?).map(str::to_string).collect();
                checkpoint(step, "power map values", want.join(","), got.join(","))?;
                Ok(vec![format!("[ {} ]", got.join(", "))])
            }
            "rational-values" => {
                let t = self.table(step, "table")?;
                let k = self.classes(step, "class", t.class_count())?[0];
                let rational = t.irreducibles.iter().all(|c| c[k].is_rational());
                checkpoint(step, "all values rational", self.req(step, "equals")?, rational)?;
                Ok(vec![format!("class {}: rational values {rational}", k + 1)])
            }
            "normal-subgroups" => {
                let t = self.table(step, "table")?;
                let sel = match step.get("p-core") {
                    Some(_) => NormalSelector::PCore(self.u64_param(step, "p-core")?),
                    None if step.get("centre").is_some() => NormalSelector::Centre,
                    None => NormalSelector::All,
                };
                let mut all = t.normal_subgroups(sel).map_err(|e| err(step, e.to_string()))?;
                if step.get("size").is_some() {
                    let z = self.uint(step, "size")?;
                    all.retain(|n| t.element_count(n) == z);
                }
                let got: Vec<String> =
                    all.iter().map(|n| n.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")).collect();
                let want: Vec<String> = self
                    .req(step, "equals")?
                    .split(';')
                    .map(|g| parse_class_list(g, t.class_count()).map(|v| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")))
                    .collect::<Result<_, _>>()
                    .map_err(|m| err(step, m))?;
                checkpoint(step, "normal subgroups", want.join(";"), got.join(";"))?;
                Ok(vec![format!("[ {} ]", got.join(" ; "))])
            }
            k => Err(err(step, format!("unknown assertion `{k}`"))),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Expands `vxk` items of a comma list to `k` copies of `v`.
fn expand_repeats(s: &str) -> String {
    let mut out = Vec::new();
    for item in list_items(s) {
        match item.split_once('x').and_then(|(v, k)| k.parse::<usize>().ok().map(|k| (v, k))) {
            Some((v, k)) => out.extend(std::iter::repeat_n(v, k)),
            None => out.push(item),
        }
    }
    out.join(",")
}

/// Indeterminateness of each prime map in ascending prime order.
fn indeterminateness_list(st: &SolverState) -> String {
    st.maps
        .values()
        .map(|m| m.indeterminateness().map_or_else(|| "unbound".into(), |x| x.to_string()))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_class_list(s: &str, n: usize) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in list_items(s) {
        let (a, b) = match item.split_once("..") {
            Some((a, b)) => (a, if b.is_empty() { None } else { Some(b) }),
            None => (item, Some(item)),
        };
        let a: usize = a.parse().map_err(|_| format!("bad class `{item}`"))?;
        let b: usize = match b {
            Some(b) => b.parse().map_err(|_| format!("bad class `{item}`"))?,
            None => n,
        };
        if a == 0 || b > n || a > b {
            return Err(format!("class range `{item}` outside 1..{n}"));
        }
        out.extend(a - 1..b);
    }
    Ok(out)
}
