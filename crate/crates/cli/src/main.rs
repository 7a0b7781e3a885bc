use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};
use setspectra::acceptance::{run_all, AcceptanceConfig};
use setspectra::branching::{branching_process_with, valid_levels};
use setspectra::halfground::{random_pair_family_with, shattered_k_sets, spectrum_completeness};
use setspectra::scan::crossover_scan;
use setspectra::search::exhaustive_max_spectrum;
use setspectra::spectrum::{
    build_family_in, compare_star_vs_a, family_size_bp, formula_a, formula_bp, formula_star, formula_tilde_bp,
    intersection_spectrum_with, partitioned_spectrum_with, FamilyRecipe, Regime,
};
use setspectra::sunflower::find_sunflower_with;
use setspectra::transversal::{alpha, covering_number, minimal_transversals_with};
use setspectra::{Error, Limits, SetFamily};

const BUDGET_VAR: &str = "SETSPECTRA_BUDGET";

#[derive(Parser)]
#[command(name = "setspectra", version, about = "Intersection spectra of intersecting set families")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    Star,
    #[value(name = "A")]
    A,
    #[value(name = "Bp")]
    Bp,
    #[value(name = "HM")]
    Hm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Star,
    #[value(name = "A")]
    A,
    #[value(name = "Bp")]
    Bp,
    Compare,
    Tilde,
}

#[derive(clap::Args)]
struct FamilySource {
    /// Construct a named family instead of reading one.
    #[arg(long, value_enum, conflicts_with = "input", required_unless_present = "input")]
    builtin: Option<Builtin>,
    /// Family JSON file: {"n": .., "k": .., "sets": [[..], ..]}.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, requires = "builtin")]
    n: Option<usize>,
    #[arg(long, requires = "builtin")]
    k: Option<usize>,
    /// Core size for `--builtin Bp`.
    #[arg(long)]
    p: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Pairwise intersection spectrum of a family.
    Spectrum {
        #[command(flatten)]
        source: FamilySource,
        /// Also split the count by minimal-transversal level.
        #[arg(long)]
        levels: bool,
    },
    /// Closed-form counts; `n` may be arbitrarily large.
    Formula {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        n: BigUint,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Minimal transversal basis with its structural checks.
    Basis {
        #[command(flatten)]
        source: FamilySource,
    },
    /// Weighted branching process for one level, or every valid level.
    Branch {
        #[command(flatten)]
        source: FamilySource,
        #[arg(long = "l")]
        level: Option<usize>,
    },
    /// Exhaustive search over maximal intersecting k-uniform families.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Worker threads for the search (0: all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Compare |I(B_p)| with |I(B_q)| over a range of n.
    Scan {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long)]
        from: Option<u64>,
        #[arg(long)]
        to: Option<u64>,
    },
    /// Random family on [2k] taking one set from each complementary pair.
    Random2k {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the full acceptance suite.
    VerifyAll {
        #[arg(long)]
        seed: Option<u64>,
    },
}

enum Failure {
    Usage(String),
    /// A failed check; carries the report when one should still be written.
    Verification(String, Option<Value>),
    Capacity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity { .. } => Failure::Capacity(e.to_string()),
            Error::Consistency(_) | Error::Counterexample(_) => Failure::Verification(e.to_string(), None),
            Error::Contract(_) | Error::InvalidFamily(_) | Error::Json(_) => Failure::Usage(e.to_string()),
        }
    }
}

type Run<T> = Result<T, Failure>;

fn load_family(src: &FamilySource, limits: &Limits) -> Run<SetFamily> {
    if let Some(path) = &src.input {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return Ok(SetFamily::from_json(&text)?);
    }
    let (Some(builtin), Some(n), Some(k)) = (src.builtin, src.n, src.k) else {
        return Err(Failure::Usage("--builtin needs --n and --k".into()));
    };
    let recipe = match builtin {
        Builtin::Star => FamilyRecipe::star(n, k),
        Builtin::A => FamilyRecipe::a(n, k),
        Builtin::Hm => FamilyRecipe::hm(n, k),
        Builtin::Bp => FamilyRecipe::bp(n, k, src.p.ok_or_else(|| Failure::Usage("--builtin Bp needs --p".into()))?),
    };
    if builtin != Builtin::Bp && src.p.is_some() {
        return Err(Failure::Usage("--p only applies to --builtin Bp".into()));
    }
    Ok(build_family_in(&recipe, Regime::Standard, limits)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn s(x: &BigUint) -> Value {
    Value::String(x.to_string())
}

fn formula(which: Which, n: &BigUint, k: u64, p: Option<u64>) -> Run<Value> {
    let need_p = || p.ok_or_else(|| Failure::Usage("--which Bp/tilde needs --p".into()));
    Ok(match which {
        Which::Star => json!({ "count": s(&formula_star(n, k)?) }),
        Which::A => json!({ "count": s(&formula_a(n, k)?) }),
        Which::Bp => json!({ "count": s(&formula_bp(n, k, need_p()?)?) }),
        Which::Compare => {
            let c = compare_star_vs_a(n, k)?;
            json!({
                "star": s(&c.star),
                "a": s(&c.a),
                "ratio": c.ratio.to_string(),
                "below_two_thirds": c.below_two_thirds,
                "below_refined": c.below_refined,
            })
        }
        Which::Tilde => {
            let p = need_p()?;
            let count = formula_bp(n, k, p)?;
            let tilde = formula_tilde_bp(n, k, p)?;
            let star = formula_star(n, k)?;
            let star_tilde = formula_tilde_bp(n, k, 1)?;
            json!({
                "count": s(&count),
                "tilde_count": s(&tilde),
                "family_size": s(&family_size_bp(n, k, p)?),
                "star_count": s(&star),
                "star_tilde_count": s(&star_tilde),
                "exceeds_star": count > star,
                "tilde_exceeds_star_tilde": tilde > star_tilde,
            })
        }
    })
}

fn basis(f: &SetFamily, limits: &Limits) -> Run<Value> {
    let b = minimal_transversals_with(f, limits)?;
    let k = b.k;
    let mut report = to_value(&b);
    let sunflower_free = find_sunflower_with(&b.basis, k + 1, limits)?.is_none();
    let checks = json!({
        "antichain": b.basis.is_antichain(),
        "intersecting": b.basis.is_intersecting(),
        "reconstruction": b.generate() == *f,
        "sunflower_free": sunflower_free,
        "tau_equals_t": covering_number(&b.basis) == Some(b.t),
    });
    let all_ok = checks.as_object().unwrap().values().all(|v| v == &Value::Bool(true));
    let obj = report.as_object_mut().unwrap();
    obj.insert("k".into(), json!(k));
    obj.insert("alpha".into(), json!(alpha(&b)?));
    obj.insert(
        "levels".into(),
        b.levels.iter().map(|(l, fam)| (l.to_string(), json!(fam.len()))).collect::<serde_json::Map<_, _>>().into(),
    );
    obj.insert("checks".into(), checks);
    if b.t == k {
        let cap = BigUint::from(k).pow(k as u32);
        obj.insert(
            "tau_equals_k".into(),
            json!({ "family_size": f.len(), "k_pow_k": s(&cap), "holds": BigUint::from(f.len()) <= cap }),
        );
    }
    if !all_ok {
        let msg = format!("basis checks failed: {}", obj["checks"]);
        return Err(Failure::Verification(msg, Some(report)));
    }
    Ok(report)
}

fn branch(f: &SetFamily, level: Option<usize>, limits: &Limits) -> Run<Value> {
    let b = minimal_transversals_with(f, limits)?;
    match level {
        Some(l) => Ok(to_value(&branching_process_with(&b, l, limits)?)),
        None => {
            let runs = valid_levels(&b)
                .into_iter()
                .map(|l| branching_process_with(&b, l, limits).map(|o| to_value(&o)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(json!({ "runs": runs }))
        }
    }
}

fn random2k(k: usize, seed: u64, limits: &Limits) -> Run<Value> {
    let f = random_pair_family_with(k, seed, limits)?;
    let (shattered, total) = shattered_k_sets(&f)?;
    Ok(json!({
        "family": to_value(&f),
        "intersecting": f.is_intersecting(),
        "seed": seed,
        "almost_shattered": shattered,
        "k_sets": total,
        "completeness": to_value(&spectrum_completeness(&f)?),
    }))
}

fn verify_all(seed: Option<u64>) -> Run<Value> {
    let mut cfg = AcceptanceConfig::default();
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let reports = run_all(&cfg);
    for r in &reports {
        eprintln!("{r}");
    }
    let passed = reports.iter().all(|r| r.passed);
    let criteria: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail }))
        .collect();
    let report = json!({ "seed": cfg.seed, "passed": passed, "criteria": criteria });
    if passed {
        Ok(report)
    } else {
        Err(Failure::Verification("acceptance suite failed".into(), Some(report)))
    }
}

fn execute(command: Command, limits: &mut Limits) -> Run<Value> {
    match command {
        Command::Spectrum { source, levels } => {
            let f = load_family(&source, limits)?;
            if levels {
                let b = minimal_transversals_with(&f, limits)?;
                Ok(to_value(&partitioned_spectrum_with(&f, &b, limits)?))
            } else {
                Ok(to_value(&intersection_spectrum_with(&f, limits)?))
            }
        }
        Command::Formula { which, n, k, p } => formula(which, &n, k, p),
        Command::Basis { source } => basis(&load_family(&source, limits)?, limits),
        Command::Branch { source, level } => branch(&load_family(&source, limits)?, level, limits),
        Command::Search { n, k, threads } => {
            limits.threads = threads;
            Ok(to_value(&exhaustive_max_spectrum(n, k, limits)?))
        }
        Command::Scan { k, p, q, from, to } => {
            let from = from.unwrap_or(2 * k + 1);
            let to = to.unwrap_or(10 * k);
            if from > to {
                return Err(Failure::Usage(format!("empty range {from}..={to}")));
            }
            Ok(to_value(&crossover_scan(k, p, q, from..=to)?))
        }
        Command::Random2k { k, seed } => random2k(k, seed, limits),
        Command::VerifyAll { seed } => verify_all(seed),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Tables become one CSV row per element; anything else is a single row of
/// its top-level fields with nested values written as JSON.
fn render_csv(report: &Value) -> String {
    let rows: Vec<&Value> = match report {
        Value::Object(m) => match m.get("rows").or_else(|| m.get("runs")).or_else(|| m.get("criteria")) {
            Some(Value::Array(rows)) if rows.iter().all(Value::is_object) && !rows.is_empty() => rows.iter().collect(),
            _ => vec![report],
        },
        _ => vec![report],
    };
    let header: Vec<String> = match rows[0] {
        Value::Object(m) => m.keys().cloned().collect(),
        _ => vec!["value".into()],
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).unwrap();
    for row in rows {
        let record: Vec<String> = match row {
            Value::Object(m) => header.iter().map(|h| m.get(h).map(cell).unwrap_or_default()).collect(),
            other => vec![cell(other)],
        };
        w.write_record(&record).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn emit(report: &Value, format: Format, out: Option<&PathBuf>) -> Run<()> {
    let text = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(report).unwrap()),
        Format::Csv => render_csv(report),
    };
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::default();
    if let Ok(spec) = std::env::var(BUDGET_VAR) {
        if let Err(e) = limits.apply_overrides(&spec) {
            eprintln!("error: {BUDGET_VAR}: {e}");
            return ExitCode::from(2);
        }
    }
    let result = execute(cli.command, &mut limits).and_then(|report| emit(&report, cli.format, cli.out.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg, report)) => {
            if let Some(report) = report {
                let _ = emit(&report, cli.format, cli.out.as_ref());
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Capacity(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
