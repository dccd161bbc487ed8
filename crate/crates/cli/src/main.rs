use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use dessin_core::constructions::{verify, ExampleRun, Example4Group, GOLDEN_IDS};
use dessin_core::counting::{count_report, pgl2_aut_order, symmetric_aut_order, CharacterTable64};
use dessin_core::linfp::MatGroupHandle;
use dessin_core::triangle::{catalog, classify_pair, rh_genus, singerman_lookup, PairCase, TriangleType};
use dessin_core::{Error, PermGroup, Permutation};

#[derive(Parser)]
#[command(name = "dessins", version, about = "Regular dessins from generating triples")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Rebuild an example and check its published claims (`all` runs the golden manifest).
    Verify { id: String },
    /// Riemann–Hurwitz genus of a regular dessin.
    Genus {
        #[arg(long = "type")]
        ty: TriangleType,
        #[arg(long)]
        order: BigUint,
    },
    /// Count triples of the given orders by brute force and, with a table, by the Frobenius formula.
    Count {
        /// One of sym:d, alt:d, pgl2:p, psl2:p, ex4:n.
        #[arg(long)]
        group: GroupSpec,
        #[arg(long)]
        orders: TriangleType,
        #[arg(long = "char-table")]
        char_table: Option<PathBuf>,
    },
    /// Which of the four cases a pair of types falls into.
    Classify {
        #[arg(long)]
        type1: TriangleType,
        #[arg(long)]
        type2: TriangleType,
    },
    /// Look up inclusions between triangle groups.
    Catalog {
        #[arg(long)]
        sub: Option<TriangleType>,
        #[arg(long = "super")]
        sup: Option<TriangleType>,
        /// Parameter for the infinite families.
        #[arg(long)]
        param: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug)]
enum GroupSpec {
    Sym(usize),
    Alt(usize),
    Pgl2(u64),
    Psl2(u64),
    Ex4(u32),
}

impl FromStr for GroupSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<GroupSpec, String> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| format!("expected kind:param, got {s:?}"))?;
        let n: u64 = arg.parse().map_err(|_| format!("bad parameter {arg:?}"))?;
        match kind {
            "sym" => Ok(GroupSpec::Sym(n as usize)),
            "alt" => Ok(GroupSpec::Alt(n as usize)),
            "pgl2" => Ok(GroupSpec::Pgl2(n)),
            "psl2" => Ok(GroupSpec::Psl2(n)),
            "ex4" => Ok(GroupSpec::Ex4(n as u32)),
            _ => Err(format!("unknown group family {kind:?}")),
        }
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupSpec::Sym(d) => write!(f, "sym:{d}"),
            GroupSpec::Alt(d) => write!(f, "alt:{d}"),
            GroupSpec::Pgl2(p) => write!(f, "pgl2:{p}"),
            GroupSpec::Psl2(p) => write!(f, "psl2:{p}"),
            GroupSpec::Ex4(n) => write!(f, "ex4:{n}"),
        }
    }
}

fn symmetric(d: usize, even: bool) -> dessin_core::Result<PermGroup> {
    if d < 2 {
        return Ok(PermGroup::trivial(d.max(1)));
    }
    let full: Vec<usize> = (1..=d).collect();
    if !even {
        return PermGroup::from_generators(&[Permutation::from_cycles(&[[1, 2]], d)?, Permutation::from_cycles(&[full], d)?]);
    }
    let gens: Vec<Permutation> = (3..=d)
        .map(|k| Permutation::from_cycles(&[[1, 2, k]], d))
        .collect::<dessin_core::Result<_>>()?;
    if gens.is_empty() {
        return Ok(PermGroup::trivial(d));
    }
    PermGroup::from_generators(&gens)
}

fn build_group(spec: GroupSpec) -> anyhow::Result<(PermGroup, Option<BigUint>)> {
    Ok(match spec {
        GroupSpec::Sym(d) => (symmetric(d, false)?, Some(symmetric_aut_order(d))),
        GroupSpec::Alt(d) => (symmetric(d, true)?, None),
        GroupSpec::Pgl2(p) => (MatGroupHandle::pgl2(p)?.group().clone(), pgl2_aut_order(p).ok()),
        GroupSpec::Psl2(p) => (MatGroupHandle::psl2(p)?.group().clone(), pgl2_aut_order(p).ok()),
        GroupSpec::Ex4(n) => {
            let g = Example4Group::new(n)?;
            let gens = [g.a(), g.b(), g.c()].map(|e| g.regular_permutation(&e));
            (PermGroup::from_generators(&gens)?, None)
        }
    })
}

enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Check(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::UnknownExample(_) | Error::Parse { .. } => Failure::Usage(e.into()),
            _ => Failure::Check(e.into()),
        }
    }
}

struct Output {
    json: Value,
    text: String,
    pass: bool,
}

fn run_text(run: &ExampleRun) -> String {
    let mut out = format!("{} {}\n", if run.pass { "PASS" } else { "FAIL" }, run.id);
    for c in &run.claims {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        out.push_str(&format!("  {mark} {}: {}", c.claim, c.computed));
        if !c.pass {
            out.push_str(&format!(" (expected {})", c.expected));
        }
        out.push('\n');
    }
    out
}

fn cmd_verify(id: &str) -> Result<Output, Failure> {
    let ids: Vec<&str> = if id == "all" { GOLDEN_IDS.to_vec() } else { vec![id] };
    let mut runs = Vec::new();
    for id in &ids {
        eprintln!("verifying {id}");
        let run = verify(id)?;
        for c in run.claims.iter().filter(|c| !c.pass) {
            eprintln!("{id}: claim failed: {} (expected {}, computed {})", c.claim, c.expected, c.computed);
        }
        runs.push(run);
    }
    let pass = runs.iter().all(|r| r.pass);
    let text = runs.iter().map(run_text).collect::<String>();
    let json = if id == "all" {
        json!({ "pass": pass, "runs": runs })
    } else {
        serde_json::to_value(&runs[0]).context("serializing report")?
    };
    Ok(Output { json, text, pass })
}

fn cmd_genus(ty: &TriangleType, order: &BigUint) -> Result<Output, Failure> {
    let genus = rh_genus(ty, order)?;
    Ok(Output {
        json: json!({ "type": ty, "order": serde_json::Number::from_str(&order.to_string()).context("order")?,
                      "genus": serde_json::Number::from_str(&genus.to_string()).context("genus")? }),
        text: format!("{genus}\n"),
        pass: true,
    })
}

fn cmd_count(spec: GroupSpec, orders: &TriangleType, table: Option<&PathBuf>) -> Result<Output, Failure> {
    let table = match table {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Usage)?;
            Some(CharacterTable64::parse(&text)?)
        }
        None => None,
    };
    let (g, aut) = build_group(spec)?;
    eprintln!("counting {orders} triples in {spec} of order {}", g.order());
    let report = count_report(&spec.to_string(), &g, orders, table.as_ref(), aut.as_ref())?;
    let mut text = format!("brute: {}\n", report.brute_count);
    if let Some(f) = report.frobenius_count {
        text.push_str(&format!("frobenius: {f}\n"));
    }
    text.push_str(&format!("generating: {}\n", report.epi_count));
    if let Some(k) = report.kernel_count {
        text.push_str(&format!("kernels: {k}\n"));
    }
    Ok(Output {
        json: serde_json::to_value(&report).context("serializing report")?,
        text,
        pass: true,
    })
}

fn cmd_classify(t1: &TriangleType, t2: &TriangleType) -> Result<Output, Failure> {
    let (case, n) = match classify_pair(t1, t2) {
        PairCase::Case1 => ("case1", None),
        PairCase::Case2 { n } => ("case2", Some(n)),
        PairCase::Case3Or4 { n } => ("case3-or-4", Some(n)),
        PairCase::None => ("none", None),
    };
    let text = match n {
        Some(n) => format!("{case} n={n}\n"),
        None => format!("{case}\n"),
    };
    Ok(Output {
        json: json!({ "type1": t1, "type2": t2, "case": case, "n": n }),
        text,
        pass: true,
    })
}

fn cmd_catalog(sub: Option<&TriangleType>, sup: Option<&TriangleType>, param: Option<u64>) -> Result<Output, Failure> {
    let rows = match (sub, sup) {
        (Some(s), Some(t)) => singerman_lookup(s, t).into_iter().collect(),
        (None, None) => catalog(param),
        _ => return Err(Failure::Usage(anyhow!("give both --sub and --super, or neither"))),
    };
    let text = if rows.is_empty() {
        "no inclusion\n".to_string()
    } else {
        rows.iter()
            .map(|r| format!("({}) {} < {} index {}{}\n", r.label, r.sub, r.sup, r.index, if r.normal { " normal" } else { "" }))
            .collect()
    };
    Ok(Output {
        json: serde_json::to_value(&rows).context("serializing catalog")?,
        text,
        pass: true,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { id } => cmd_verify(id),
        Command::Genus { ty, order } => cmd_genus(ty, order),
        Command::Count { group, orders, char_table } => cmd_count(*group, orders, char_table.as_ref()),
        Command::Classify { type1, type2 } => cmd_classify(type1, type2),
        Command::Catalog { sub, sup, param } => cmd_catalog(sub.as_ref(), sup.as_ref(), *param),
    };
    match result {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json values serialize") + "\n",
                Format::Text => out.text,
            };
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
