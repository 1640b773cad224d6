use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use equisurf::invariant::{InvariantRecord, OddPrime};
use equisurf::orbit::{default_budget, orbit_count, OrbitReport, SurfaceModel, BUDGET_ENV};
use equisurf::oracle::check::compare_word;
use equisurf::oracle::{run_oracle_check, CheckScope, CheckSummary};
use equisurf::surgery::random::{random_word, WordConfig};
use equisurf::surgery::{atlas, classify, evaluate, normalize, parse, print, AtlasRow, Classification};
use equisurf::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const EXIT_MISMATCH: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_SURGERY: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_ORACLE: u8 = 5;

#[derive(Parser)]
#[command(name = "equisurf", version, about = "Surgery calculus and orbit checks for surfaces with an odd-prime cyclic action")]
struct Cli {
    /// The odd prime p.
    #[arg(short, long, global = true, default_value_t = 3)]
    p: u32,
    #[command(flatten)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Format {
    /// JSON output (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Aligned text output.
    #[arg(long, global = true, conflicts_with = "json")]
    table: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a surgery word to its invariant record.
    Eval { word: String },
    /// Classify a JSON invariant record or a surgery word.
    Classify { input: String },
    /// Canonical family of the surface a surgery word builds.
    Normalize { word: String },
    /// Count nonzero orbits of the mapping class group action on H1(.; Z/p).
    Orbits {
        /// closed-nonorientable:r, closed-orientable:g or boundary:m.
        model: String,
        /// Exit with status 1 unless the orbit count equals this.
        #[arg(long)]
        expect: Option<usize>,
        /// Largest state space to enumerate.
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<u64>,
    },
    /// Rebuild explicit cell complexes and compare them with the calculus.
    OracleCheck {
        /// examples, surgeries, ding or all.
        scope: String,
        /// Also compare this many random words generated from the seed.
        #[arg(long, default_value_t = 200)]
        words: u64,
        /// Seed for the random word sweep; without it no sweep runs.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Every family member up to a β bound.
    Atlas {
        #[arg(long, default_value_t = 8)]
        beta_max: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::NotOddPrime(_) | Error::UnknownExample(_) => EXIT_PARSE,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::InvalidScheme(_) | Error::InvalidAction(_) | Error::PlanViolation(_) => EXIT_ORACLE,
            _ => EXIT_SURGERY,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn emit<T: Serialize>(table: bool, value: &T, render: impl FnOnce(&T) -> String) {
    if table {
        print!("{}", render(value));
    } else {
        println!("{}", serde_json::to_string(value).expect("output types serialize"));
    }
}

fn record_table(r: &InvariantRecord) -> String {
    let rot = r.rotations.as_ref().map_or("-".to_string(), |v| format!("{v:?}"));
    format!(
        "{:<4} {:<15} {:>6} {:>4}  rotations\n{:<4} {:<15} {:>6} {:>4}  {rot}\n",
        "p",
        "orientability",
        "beta",
        "F",
        r.p,
        if r.orientable { "orientable" } else { "non-orientable" },
        r.beta,
        r.fixed_points
    )
}

fn classification_table(c: &Classification) -> String {
    let status = match c {
        Classification::Unique { .. } => "unique",
        Classification::Ambiguous { .. } => "ambiguous",
        Classification::Unmatched { .. } => "unmatched",
    };
    let mut out = format!("{status}\n");
    for class in c.candidates() {
        out += &format!("  {:<24} beta={:<4} F={}\n", class.name(), class.beta(), class.fixed_points());
    }
    out
}

fn orbit_table(r: &OrbitReport) -> String {
    let mut out = format!(
        "{} p={} rank={} states={} nonzero_orbits={}\n",
        r.model, r.p, r.rank, r.state_count, r.nonzero_orbits
    );
    for (v, size) in r.representatives.iter().zip(&r.orbit_sizes) {
        out += &format!("  {v:?} size={size}\n");
    }
    out
}

fn atlas_table(rows: &Vec<AtlasRow>) -> String {
    let mut out = format!("{:<24} {:<15} {:>5} {:>4}  rotations\n", "family", "orientability", "beta", "F");
    for r in rows {
        let rot = r.rotations.as_ref().map_or("-".to_string(), |v| format!("{v:?}"));
        let flag = if r.ambiguous_without_rotations { "  ambiguous-without-rotations" } else { "" };
        out += &format!(
            "{:<24} {:<15} {:>5} {:>4}  {rot}{flag}\n",
            r.name,
            if r.orientable { "orientable" } else { "non-orientable" },
            r.beta,
            r.fixed_points
        );
    }
    out
}

#[derive(Serialize)]
struct OracleOutput {
    #[serde(flatten)]
    summary: CheckSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<Sweep>,
}

#[derive(Serialize)]
struct Sweep {
    seed: u64,
    words: u64,
    mismatches: Vec<String>,
}

fn oracle_table(o: &OracleOutput) -> String {
    let s = &o.summary;
    let mut out = format!("p={} passed={} failed={}\n", s.p, s.passed, s.failed);
    for item in &s.items {
        let tag = if item.ok { "ok  " } else { "FAIL" };
        out += &format!("{tag} {:<10} {:<40} {}\n", format!("{:?}", item.scope).to_lowercase(), item.subject, item.detail);
    }
    if let Some(sw) = &o.sweep {
        out += &format!("sweep seed={} words={} mismatches={}\n", sw.seed, sw.words, sw.mismatches.len());
        for m in &sw.mismatches {
            out += &format!("FAIL {m}\n");
        }
    }
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    let p = OddPrime::new(cli.p)?;
    let table = cli.format.table;
    match cli.command {
        Command::Eval { word } => {
            let rec = evaluate(&parse(&word, p)?)?;
            emit(table, &rec, record_table);
        }
        Command::Classify { input } => {
            let rec = if input.trim_start().starts_with('{') {
                serde_json::from_str::<InvariantRecord>(&input)
                    .map_err(|e| fail(EXIT_PARSE, format!("invalid record JSON: {e}")))?
            } else {
                evaluate(&parse(&input, p)?)?
            };
            emit(table, &classify(&rec)?, classification_table);
        }
        Command::Normalize { word } => {
            emit(table, &normalize(&parse(&word, p)?)?, classification_table);
        }
        Command::Orbits { model, expect, budget } => {
            let model: SurfaceModel = model.parse()?;
            let report = orbit_count(model, p, budget.unwrap_or_else(default_budget))?;
            emit(table, &report, orbit_table);
            if let Some(want) = expect {
                if report.nonzero_orbits != want {
                    return Err(fail(
                        EXIT_MISMATCH,
                        format!("expected {want} nonzero orbits, found {}", report.nonzero_orbits),
                    ));
                }
            }
        }
        Command::OracleCheck { scope, words, seed } => {
            let scope: CheckScope = scope.parse()?;
            let summary = run_oracle_check(scope, p)?;
            let sweep = seed.map(|seed| {
                let cfg = WordConfig { plus_only: true, ..WordConfig::default() };
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mismatches = (0..words)
                    .filter_map(|_| {
                        let w = random_word(&mut rng, p, &cfg);
                        compare_word(&w).err().map(|d| format!("{}: {d}", print(&w)))
                    })
                    .collect();
                Sweep { seed, words, mismatches }
            });
            let out = OracleOutput { summary, sweep };
            emit(table, &out, oracle_table);
            let failures: Vec<String> = out
                .summary
                .failures()
                .map(|i| format!("{}: {}", i.subject, i.detail))
                .chain(out.sweep.iter().flat_map(|s| s.mismatches.iter().cloned()))
                .collect();
            if !failures.is_empty() {
                return Err(fail(EXIT_ORACLE, format!("oracle mismatch:\n  {}", failures.join("\n  "))));
            }
        }
        Command::Atlas { beta_max } => {
            emit(table, &atlas(p, beta_max), atlas_table);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
