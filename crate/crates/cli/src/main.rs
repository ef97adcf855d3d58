//! d4check: verify ρ_{F,S} ∈ 8ℤ₂ and D(T) ∈ 32ℤ₂[[T]] for a quartic cyclic
//! K/F, or for every row of a corpus file.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

use dihedral_iwasawa::corpus::{self, CorpusRow};
use dihedral_iwasawa::lseries::{assemble_with, build_context, oracle_checks, report_from_assembly, Backend, CharacterSelector, ContextOptions, Convention, VerdictReport};
use dihedral_iwasawa::{Error, MomentTable};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PRECISION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "d4check", version, about = "2-adic congruence checks for dihedral quartic extensions of real quadratic fields")]
struct Args {
    /// Discriminant d_F of the real quadratic field F.
    #[arg(long, allow_hyphen_values = false)]
    dfield: Option<i64>,
    /// Conductor f of K/F (a rational integer).
    #[arg(long)]
    cond: Option<u64>,
    /// Number of coefficients of D(T).
    #[arg(long, default_value_t = 30)]
    coeffs: usize,
    /// Target precision in bits.
    #[arg(long, default_value_t = 8)]
    target_prec: i64,
    /// Working precision in bits (default: derived from the Newton loss).
    #[arg(long)]
    work_prec: Option<i64>,
    /// `shintani` or `moments:<file>`.
    #[arg(long, default_value = "shintani")]
    backend: String,
    /// Norm bound when searching for the auxiliary prime c.
    #[arg(long, default_value_t = 2000)]
    c_search_bound: u64,
    /// Use the k-th admissible auxiliary prime instead of the smallest.
    #[arg(long, default_value_t = 0)]
    c_index: usize,
    /// Orientation of the class representatives: inv or noinv.
    #[arg(long, default_value = "inv")]
    convention: String,
    /// Pick the character whose field K has this discriminant.
    #[arg(long)]
    dk: Option<u128>,
    /// Pick the k-th admissible character.
    #[arg(long)]
    character_index: Option<usize>,
    /// Run the interpolation and consistency oracles as well.
    #[arg(long)]
    oracle_checks: bool,
    /// Select a non-dihedral character; success means the verdict fails.
    #[arg(long)]
    negative_control: bool,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Run every row of a corpus file (`@reference` and `@negative` name the bundled ones).
    #[arg(long)]
    corpus: Option<String>,
    /// Worker threads for corpus runs.
    #[arg(long)]
    jobs: Option<usize>,
    /// Include wall-clock timings in reports (makes them non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Precision(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(_) | Error::Parse(_) | Error::NoCharacter(_) | Error::SearchExhausted(_) | Error::NotSquarefree(_) | Error::NotCoprime => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Precision(e.to_string()),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Precision(_) => EXIT_PRECISION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Precision(m) => m,
        }
    }
}

struct Settings {
    opts: ContextOptions,
    backend: Backend,
    oracle: bool,
    timings: bool,
}

fn settings(args: &Args) -> Result<Settings, Failure> {
    let convention: Convention = args.convention.parse()?;
    let backend = match args.backend.as_str() {
        "shintani" => Backend::Shintani,
        b => match b.strip_prefix("moments:") {
            Some(path) if !path.is_empty() => Backend::Moments(MomentTable::read_all(path.as_ref())?),
            _ => return Err(Failure::Usage(format!("unknown backend {b:?}; use shintani or moments:<file>"))),
        },
    };
    let selector = match (args.dk, args.character_index) {
        (Some(_), Some(_)) => return Err(Failure::Usage("--dk and --character-index are exclusive".into())),
        (Some(dk), None) => CharacterSelector::Discriminant(dk),
        (None, Some(i)) => CharacterSelector::Index(i),
        (None, None) => CharacterSelector::First,
    };
    let opts = ContextOptions {
        n_coeffs: args.coeffs,
        m_target: args.target_prec,
        m_work: args.work_prec,
        c_search_bound: args.c_search_bound,
        c_index: args.c_index,
        convention,
        selector,
        negative_control: args.negative_control,
    };
    Ok(Settings { opts, backend, oracle: args.oracle_checks, timings: args.timings })
}

fn run_one(d_f: i64, f: u64, opts: &ContextOptions, s: &Settings) -> Result<VerdictReport, Failure> {
    let ctx = build_context(d_f, f, opts)?;
    let asm = assemble_with(&ctx, &s.backend)?;
    let t = Instant::now();
    let oracle = oracle_checks(&ctx, &asm, s.oracle)?;
    let oracle_ms = t.elapsed().as_millis();
    if s.oracle && !oracle.all_pass() {
        return Err(Failure::Precision(format!("oracle checks disagree: {}", serde_json::to_string(&oracle).unwrap_or_default())));
    }
    let mut rep = report_from_assembly(&ctx, &asm, oracle, s.backend.name(), opts.negative_control);
    match (&mut rep.timings, s.timings) {
        (Some(t), true) => t.oracle_ms = oracle_ms,
        _ => rep.timings = None,
    }
    Ok(rep)
}

fn write_report<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<String, Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Precision(e.to_string()))? + "\n";
    if let Some(p) = path {
        std::fs::write(p, &text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
    }
    Ok(text)
}

fn single(args: &Args, s: &Settings) -> Result<u8, Failure> {
    let (Some(d_f), Some(f)) = (args.dfield, args.cond) else {
        return Err(Failure::Usage("--dfield and --cond are required (or use --corpus)".into()));
    };
    let rep = run_one(d_f, f, &s.opts, s)?;
    let text = write_report(&args.report, &rep)?;
    print!("{text}");
    Ok(if rep.verdict != args.negative_control { 0 } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct RowResult {
    row: CorpusRow,
    verdict: Option<bool>,
    as_expected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<VerdictReport>,
}

#[derive(Serialize, Default)]
struct ClassCount {
    class: String,
    rows: usize,
    as_expected: usize,
}

#[derive(Serialize)]
struct Summary {
    rows: usize,
    as_expected: usize,
    unexpected: usize,
    errors: usize,
    by_class: Vec<ClassCount>,
}

#[derive(Serialize)]
struct CorpusReport {
    summary: Summary,
    results: Vec<RowResult>,
}

fn corpus_run(name: &str, args: &Args, s: &Settings) -> Result<u8, Failure> {
    let rows = match name {
        "@reference" => corpus::reference_corpus(),
        "@negative" => corpus::negative_controls(),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            corpus::parse_corpus(&text)?
        }
    };
    let run_row = |row: &CorpusRow| -> RowResult {
        let mut opts = s.opts.clone();
        opts.selector = CharacterSelector::Discriminant(row.d_k);
        opts.negative_control = row.negative_control;
        match run_one(row.d_f, row.f, &opts, s) {
            Ok(rep) => RowResult { row: row.clone(), verdict: Some(rep.verdict), as_expected: row.expected(rep.verdict), error: None, report: Some(rep) },
            Err(e) => RowResult { row: row.clone(), verdict: None, as_expected: false, error: Some(e.message().to_string()), report: None },
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        if j == 0 {
            return Err(Failure::Usage("--jobs must be positive".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Failure::Usage(e.to_string()))?;
    let results: Vec<RowResult> = pool.install(|| rows.par_iter().map(run_row).collect());
    for r in &results {
        let status = match (r.verdict, &r.error) {
            (_, Some(e)) => format!("ERROR {e}"),
            (Some(v), None) => format!("{} ({})", if v { "pass" } else { "fail" }, if r.as_expected { "expected" } else { "UNEXPECTED" }),
            _ => unreachable!(),
        };
        println!("{:>6} {:>4} {:>20} {:<8} {status}", r.row.d_f, r.row.f, r.row.d_k, r.row.class);
    }
    let by_class = ["ramified", "inert", "split"]
        .iter()
        .map(|c| ClassCount {
            class: c.to_string(),
            rows: results.iter().filter(|r| r.row.class == *c).count(),
            as_expected: results.iter().filter(|r| r.row.class == *c && r.as_expected).count(),
        })
        .collect();
    let errors = results.iter().filter(|r| r.error.is_some()).count();
    let as_expected = results.iter().filter(|r| r.as_expected).count();
    let summary = Summary { rows: results.len(), as_expected, unexpected: results.len() - as_expected - errors, errors, by_class };
    println!("{} rows: {} as expected, {} unexpected, {} errors", summary.rows, summary.as_expected, summary.unexpected, summary.errors);
    let code = if summary.unexpected > 0 {
        EXIT_FAIL
    } else if errors > 0 {
        EXIT_PRECISION
    } else {
        0
    };
    write_report(&args.report, &CorpusReport { summary, results })?;
    Ok(code)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = settings(&args).and_then(|s| match &args.corpus {
        Some(c) => {
            if args.dfield.is_some() || args.cond.is_some() {
                return Err(Failure::Usage("--corpus cannot be combined with --dfield/--cond".into()));
            }
            corpus_run(c, &args, &s)
        }
        None => single(&args, &s),
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("d4check: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
