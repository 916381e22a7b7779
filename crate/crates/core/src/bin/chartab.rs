use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use chartab::classfun::chars_from_json;
use chartab::fusion::{self, possible_class_fusions, FusionOptions, ParaMap};
use chartab::oracle::{brute_force_table, parse_generators, DEFAULT_LIMIT};
use chartab::pipeline::{run_script, RunOptions};
use chartab::{permchar, powermap, CharacterTable, ClassData};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;

#[derive(Parser)]
#[command(name = "chartab", version, about = "Exact character-table computations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay a script; exit status 0 iff every checkpoint passes.
    Run {
        script: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory for tables written by `save` steps.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the structural conditions on a table file.
    Validate { table: PathBuf },
    /// List all class fusions from SUB into AMB.
    Fusions {
        sub: PathBuf,
        amb: PathBuf,
        /// ParaMap JSON with prescribed entries.
        #[arg(long)]
        prescribed: Option<PathBuf>,
        /// JSON list of characters of SUB to restrict the search with.
        #[arg(long)]
        chars: Option<PathBuf>,
    },
    /// Determine the prime power maps of a head from its subgroup fusions.
    Powermaps {
        head: PathBuf,
        /// Directory of subgroup tables whose fusions the head records.
        #[arg(long)]
        fusions: PathBuf,
    },
    /// Permutation characters extending a known one by faithful constituents.
    Permchars {
        #[arg(long)]
        torso: PathBuf,
        #[arg(long)]
        nonfaithful: PathBuf,
        /// Class of the central involution (1-based).
        #[arg(long)]
        centre: usize,
        table: PathBuf,
    },
    /// Character table of a permutation group by brute force.
    Oracle {
        gens: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "G")]
        id: String,
    },
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_table(path: &Path) -> Result<CharacterTable> {
    CharacterTable::read_file(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Run { script, data, report, out } => {
            let r = run_script(&script, &data, &RunOptions { out_dir: out });
            let mut text = r.to_string();
            if let Some(e) = &r.error {
                text.push_str(&format!("error: {e}\n"));
            }
            if !r.audit.is_empty() {
                text.push_str("audit log:\n");
                for l in &r.audit {
                    text.push_str(l);
                    text.push('\n');
                }
            }
            print!("{text}");
            if let Some(p) = report {
                std::fs::write(&p, &text).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(r.passed())
        }
        Cmd::Validate { table } => {
            let t = read_table(&table)?;
            let v = t.validate();
            for x in &v {
                println!("{x}");
            }
            println!("{}: {} classes, {} irreducibles, {} violation(s)", t.id, t.class_count(), t.irreducibles.len(), v.len());
            Ok(v.is_empty())
        }
        Cmd::Fusions { sub, amb, prescribed, chars } => {
            let s = read_table(&sub)?;
            let a = read_table(&amb)?;
            let mut opts = FusionOptions::default();
            if let Some(p) = prescribed {
                opts.prescribed = Some(ParaMap::from_json(&read_json(&p)?).map_err(anyhow::Error::msg)?);
            }
            if let Some(c) = chars {
                opts.chars = Some(chars_from_json(&read_json(&c)?).map_err(anyhow::Error::msg)?);
            }
            let found = possible_class_fusions(&s, &a, &opts);
            for f in &found {
                println!("{}", ParaMap::from_fixed(f).to_json());
            }
            eprintln!("{} fusion(s)", found.len());
            Ok(!found.is_empty())
        }
        Cmd::Powermaps { head, fusions } => {
            let t = read_table(&head)?;
            let mut subs = Vec::new();
            let mut entries: Vec<_> = std::fs::read_dir(&fusions)
                .with_context(|| format!("reading {}", fusions.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "tbl"))
                .collect();
            entries.sort();
            for p in entries {
                let s = read_table(&p)?;
                if let Some(rec) = t.fusion_from(&s.id) {
                    let mut m = fusion::init_fusion(&s, &t)?;
                    fusion::merge_prescribed(&mut m, &rec.map)?;
                    subs.push((s, m));
                }
            }
            if subs.is_empty() {
                bail!("no table in {} has a fusion recorded in {}", fusions.display(), t.id);
            }
            let max = t.orders.iter().copied().max().unwrap_or(1);
            let mut maps = BTreeMap::new();
            for p in chartab::numtheory::primes_up_to(max) {
                maps.insert(p, powermap::init_power_map(&t, p)?);
            }
            let tables: Vec<&CharacterTable> = subs.iter().map(|(s, _)| s).collect();
            let mut fus: Vec<ParaMap> = subs.iter().map(|(_, m)| m.clone()).collect();
            let rounds = powermap::refine_by_fusions(&mut maps, &tables, &mut fus)?;
            println!("{rounds} round(s) using {} subgroup fusion(s)", tables.len());
            let mut fixed = true;
            for (p, ind) in powermap::indeterminateness_report(&maps) {
                println!("p = {p}: indeterminateness {ind}");
                println!("{}", maps[&p].to_json());
                fixed &= ind == "1";
            }
            Ok(fixed)
        }
        Cmd::Permchars { torso, nonfaithful, centre, table } => {
            let t = read_table(&table)?;
            let torso: Vec<Option<BigInt>> = read_json(&torso)?
                .as_array()
                .context("torso must be a JSON list")?
                .iter()
                .map(|x| match x {
                    serde_json::Value::Null => Ok(None),
                    x => chartab::cyclo::json::int_from_json(x).map(Some).map_err(anyhow::Error::from),
                })
                .collect::<Result<_>>()?;
            let pi0 = chars_from_json(&read_json(&nonfaithful)?).map_err(anyhow::Error::msg)?;
            let Some(pi0) = pi0.first() else { bail!("empty nonfaithful character list") };
            if centre == 0 || centre > t.class_count() {
                bail!("centre class {centre} outside 1..{}", t.class_count());
            }
            let found = permchar::perm_chars_with_torso(&t, &torso, &[0, centre - 1], pi0)?;
            for pi in &found {
                println!("{}", pi.to_json());
            }
            eprintln!("{} solution(s)", found.len());
            Ok(!found.is_empty())
        }
        Cmd::Oracle { gens, out, id } => {
            let g = parse_generators(&gens).map_err(anyhow::Error::msg)?;
            let t = brute_force_table(&g, DEFAULT_LIMIT, &id)?;
            t.write_file(&out).with_context(|| format!("writing {}", out.display()))?;
            println!("{}: order {}, {} classes -> {}", t.id, t.order, t.class_count(), out.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
