//! Line-oriented script format: `kind key=value ...`, one step per line.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: `choose` needs a non-empty justification")]
    MissingJustification { line: usize },
    #[error("line {line}: unknown step kind `{kind}`")]
    UnknownKind { line: usize, kind: String },
}

/// Step kinds with the parameters each accepts.
const SCHEMA: &[(&str, &[&str])] = &[
    ("load", &["id", "file", "sha256", "as"]),
    ("oracle", &["gens", "id", "limit", "as"]),
    ("factor", &["table", "kernel", "id", "fusion", "as"]),
    ("product", &["a", "b", "id", "as"]),
    ("save", &["var", "file"]),
    ("chars", &["table", "of", "max-degree", "select", "expect-count", "expect-degrees", "as"]),
    ("sum", &["chars", "expect-degree", "as"]),
    ("concat", &["chars", "dedup", "expect-count", "as"]),
    ("decompose", &["table", "irr", "chars", "expect-mults", "expect-max", "expect-positions"]),
    ("induce", &["sub", "amb", "chars", "fusion", "distinct", "expect-candidates", "faithful", "expect-count", "as"]),
    ("inflate", &["from", "to", "fusion", "chars", "as"]),
    ("restrict", &["from", "to", "fusion", "chars", "as"]),
    ("stored-fusion", &["sub", "amb", "as"]),
    ("permchars", &["table", "nonfaithful", "torso", "centre", "expect-count", "as"]),
    ("induced-cyclic", &["table", "classes", "mode", "expect-count", "as"]),
    ("symmetrize", &["table", "chars", "as"]),
    ("reduce", &["table", "known", "chars", "irr", "rem", "expect-irr", "expect-rem"]),
    ("lll", &["table", "chars", "irr", "rem", "expect-irr", "expect-rem"]),
    ("oracle-permute", &["table", "chars", "reference", "ref-chars", "expect-distinct", "as"]),
    ("oracle-extract", &["table", "lattice", "oracle", "known", "expect-known"]),
    ("set-irreducibles", &["table", "chars"]),
    ("head-new", &["order", "as"]),
    ("copy", &["from", "as"]),
    (
        "extend-head",
        &["head", "mode", "sub", "pos", "expect-found", "cent", "positions", "order", "pi", "expect-cent", "expect-classes"],
    ),
    ("permchar-centralizer", &["sub", "pi", "positions", "times", "expect"]),
    ("sylow", &["order", "p", "index", "base", "parts", "divisors-of", "expect"]),
    ("normal-sylow", &["n", "q", "expect"]),
    ("finalize", &["head", "id", "as", "expect-classes"]),
    ("solve-powermaps", &["state", "table", "head", "subs", "add", "only", "primes", "mode", "expect-rounds", "expect-indet"]),
    ("resolve-pair", &["table", "state", "classes", "d", "field-from", "field-class"]),
    ("commute-powermaps", &["state", "a", "b", "expect-indet"]),
    ("check-consistency", &["state"]),
    ("choose", &["justification", "from", "as", "state", "fusion", "class", "value", "p", "value-of"]),
    ("apply-powermaps", &["state", "table"]),
    ("fuse", &["sub", "amb", "state", "head", "chars", "expect-count", "expect-some", "as"]),
    ("partial-character", &["head", "target", "sub", "state", "char", "expect-known"]),
    (
        "decompose-restriction",
        &["head", "target", "sub", "state", "expect-candidates", "expect-rank", "expect-solution", "fill", "expect-known"],
    ),
    (
        "complete-character",
        &["table", "target", "orth", "expect-missing", "expect-congruences", "expect-sum", "expect-value", "as"],
    ),
    ("assert", &["kind"]),
];

/// Assertion kinds with the parameters each accepts besides `kind`.
pub const ASSERTIONS: &[(&str, &[&str])] = &[
    ("count", &["var", "equals"]),
    ("norms", &["table", "chars", "equals"]),
    ("class-equation", &["head"]),
    ("same-heads", &["a", "b"]),
    ("equivalent", &["a", "b"]),
    ("validate", &["table"]),
    ("factorization", &["order", "sep", "equals"]),
    ("automorphism", &["table", "perm"]),
    ("field-contains", &["table", "class", "d", "equals"]),
    ("indeterminateness", &["state", "equals"]),
    ("values", &["var", "classes", "equals"]),
    ("int-value", &["var", "class", "equals"]),
    ("index", &["table", "chars", "equals"]),
    ("class-sizes", &["table", "classes", "equals"]),
    ("same-maps", &["a", "b"]),
    ("centralizers", &["var", "classes", "equals"]),
    ("positions", &["var", "order", "cent", "size", "cent-divisible-by", "count", "equals"]),
    ("power-map", &["table", "p", "classes", "equals"]),
    ("rational-values", &["table", "class", "equals"]),
    ("normal-subgroups", &["table", "p-core", "centre", "size", "equals"]),
];

pub const KINDS: &[&str] = &[
    "load",
    "oracle",
    "factor",
    "product",
    "save",
    "chars",
    "sum",
    "concat",
    "decompose",
    "induce",
    "inflate",
    "restrict",
    "stored-fusion",
    "permchars",
    "induced-cyclic",
    "symmetrize",
    "reduce",
    "lll",
    "oracle-permute",
    "oracle-extract",
    "set-irreducibles",
    "head-new",
    "copy",
    "extend-head",
    "permchar-centralizer",
    "sylow",
    "normal-sylow",
    "finalize",
    "solve-powermaps",
    "resolve-pair",
    "commute-powermaps",
    "check-consistency",
    "choose",
    "apply-powermaps",
    "fuse",
    "partial-character",
    "decompose-restriction",
    "complete-character",
    "assert",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub line: usize,
    pub kind: String,
    pub params: BTreeMap<String, String>,
    pub text: String,
}

impl Step {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }
}

fn tokenize(line: &str, no: usize) -> Result<Vec<String>, ParseError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut any = false;
    let mut chars = line.chars();
    while let Some(c) = chars.next() {
        match c {
            '"' => {
                quoted = !quoted;
                any = true;
            }
            '\\' if quoted => match chars.next() {
                Some(n) => cur.push(n),
                None => return Err(ParseError::Syntax { line: no, msg: "dangling escape".into() }),
            },
            c if c.is_whitespace() && !quoted => {
                if any || !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                    any = false;
                }
            }
            c => cur.push(c),
        }
    }
    if quoted {
        return Err(ParseError::Syntax { line: no, msg: "unterminated quote".into() });
    }
    if any || !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

/// Parses a whole script. Comments start with `#` as the first non-blank
/// character; a trailing `\` continues the step on the next line.
pub fn parse_script(src: &str) -> Result<Vec<Step>, ParseError> {
    let mut steps = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (i, raw) in src.lines().enumerate() {
        let no = i + 1;
        let trimmed = raw.trim();
        if pending.is_none() && (trimmed.is_empty() || trimmed.starts_with('#')) {
            continue;
        }
        let (start, mut text) = pending.take().unwrap_or((no, String::new()));
        if let Some(body) = trimmed.strip_suffix('\\') {
            text.push_str(body);
            text.push(' ');
            pending = Some((start, text));
            continue;
        }
        text.push_str(trimmed);
        steps.push(parse_step(start, &text)?);
    }
    if let Some((start, _)) = pending {
        return Err(ParseError::Syntax { line: start, msg: "continuation at end of file".into() });
    }
    Ok(steps)
}

fn parse_step(no: usize, text: &str) -> Result<Step, ParseError> {
    let toks = tokenize(text, no)?;
    let Some((kind, rest)) = toks.split_first() else {
        return Err(ParseError::Syntax { line: no, msg: "empty step".into() });
    };
    if !KINDS.contains(&kind.as_str()) {
        return Err(ParseError::UnknownKind { line: no, kind: kind.clone() });
    }
    let mut params = BTreeMap::new();
    for t in rest {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| ParseError::Syntax { line: no, msg: format!("expected key=value, got `{t}`") })?;
        if k.is_empty() {
            return Err(ParseError::Syntax { line: no, msg: format!("empty key in `{t}`") });
        }
        if params.insert(k.to_string(), v.to_string()).is_some() {
            return Err(ParseError::Syntax { line: no, msg: format!("duplicate key `{k}`") });
        }
    }
    check_keys(no, kind, &params)?;
    if kind == "choose" && params.get("justification").is_none_or(|j| j.trim().is_empty()) {
        return Err(ParseError::MissingJustification { line: no });
    }
    Ok(Step { line: no, kind: kind.clone(), params, text: text.to_string() })
}

fn check_keys(no: usize, kind: &str, params: &BTreeMap<String, String>) -> Result<(), ParseError> {
    let mut allowed: Vec<&str> = SCHEMA.iter().find(|(k, _)| *k == kind).map(|(_, a)| a.to_vec()).unwrap_or_default();
    if kind == "assert" {
        let Some(a) = params.get("kind") else {
            return Err(ParseError::Syntax { line: no, msg: "`assert` needs kind=".into() });
        };
        let extra = ASSERTIONS
            .iter()
            .find(|(k, _)| k == a)
            .ok_or_else(|| ParseError::Syntax { line: no, msg: format!("unknown assertion `{a}`") })?;
        allowed.extend_from_slice(extra.1);
    }
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(ParseError::Syntax { line: no, msg: format!("`{kind}` takes no parameter `{k}`") }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_quotes_comments_and_continuations() {
        let src = "# comment\n\nload id=2.B file=\"two B.tbl\"\nassert kind=count \\\n  var=x equals=3\n";
        let s = parse_script(src).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].get("file"), Some("two B.tbl"));
        assert_eq!(s[1].line, 4);
        assert_eq!(s[1].get("equals"), Some("3"));
    }

    #[test]
    fn choose_requires_justification() {
        assert!(matches!(
            parse_script("choose state=m p=2 class=3 value=4"),
            Err(ParseError::MissingJustification { line: 1 })
        ));
        assert!(parse_script("choose state=m p=2 class=3 value=4 justification=\"table automorphism\"").is_ok());
    }

    #[test]
    fn rejects_unknown_kind_and_duplicates() {
        assert!(matches!(parse_script("frobnicate x=1"), Err(ParseError::UnknownKind { .. })));
        assert!(parse_script("load id=a id=b").is_err());
        assert!(parse_script("load id=a colour=red").is_err());
        assert!(parse_script("assert kind=count var=x equal=3").is_err());
        assert!(parse_script("assert kind=nonsense").is_err());
    }
}
