//! Command-line front end: argument parsing, rendering and exit codes.
//!
//! [`run`] takes the classifier as a parameter so callers (and tests) can
//! substitute their own verdicts.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fermat5::classify::{
    admissible_types, paper_check, refute_low_degree_with, ClassificationReport, Classifier,
    ClassifyError, Contradiction, DegreeVerdict,
};
use fermat5::curve::{CoefficientMatrix, CurveMap};
use fermat5::fixtures;
use fermat5::search::{self, Dedup, SearchError, SearchSummary, SearchTask, MAX_SEARCH_DEGREE};

pub mod exit {
    pub const OK: i32 = 0;
    /// Internal or computational failure.
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    /// Input did not parse or validate, or is out of range.
    pub const INVALID: i32 = 3;
    /// A recomputed value differs from the expected one.
    pub const MISMATCH: i32 = 4;
    /// A verdict that would be a counterexample to the known bounds.
    pub const CONTRADICTS_PAPER: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(
    name = "fermat5",
    version,
    about = "Rational curves on the characteristic-2 Fermat quintic fourfold"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Directory holding degree8.curve and degree9.curve.
    #[arg(long, global = true)]
    pub fixtures: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute the bundled curves' splitting types and the degree tables.
    VerifyPaper,
    /// Splitting types of a curve file.
    Split { path: PathBuf },
    /// Free / very free verdicts for a curve file.
    Classify { path: PathBuf },
    /// Splitting types compatible with freeness, per degree.
    EnumerateTypes {
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 9)]
        to: usize,
    },
    /// Non-freeness trace for a degree-4 or degree-5 curve file.
    Refute { path: PathBuf },
    /// Exhaustive search over GF(2).
    Search(SearchArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    /// Run only this shard (0-based).
    #[arg(long)]
    pub shard: Option<usize>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = DedupArg::Exact)]
    pub dedup: DedupArg,
    /// Identify each curve with its S <-> T swap.
    #[arg(long)]
    pub swap_symmetry: bool,
    /// Permit degree 9 regardless of the configured cap.
    #[arg(long)]
    pub allow_degree_9: bool,
    #[arg(long)]
    pub memory_budget_mb: Option<usize>,
    /// Classify every curve instead of prefiltering by the freeness rank test.
    #[arg(long)]
    pub classify_all: bool,
    /// In degrees 4 and 5, also build and replay a non-freeness trace for every curve.
    #[arg(long)]
    pub refute: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DedupArg {
    Exact,
    Permutation,
}

/// Expected results for one bundled curve.
struct Expected {
    file: &'static str,
    degree: usize,
    omega: [i64; 5],
    extended: [i64; 5],
    tangent_min: i64,
    free: bool,
    very_free: bool,
}

const EXPECTED: [Expected; 2] = [
    Expected {
        file: "degree8.curve",
        degree: 8,
        omega: [-10, -10, -10, -9, -9],
        extended: [0, 0, 0, 4, 4],
        tangent_min: 0,
        free: true,
        very_free: false,
    },
    Expected {
        file: "degree9.curve",
        degree: 9,
        omega: [-11, -11, -11, -11, -10],
        extended: [1, 1, 1, 1, 5],
        tangent_min: 1,
        free: true,
        very_free: true,
    },
];

/// Rank of the multiplication matrix of the degree-8 curve in multiplier
/// degree 1.
const EXPECTED_MATRIX_RANK: usize = 10;

fn free_possible(d: usize) -> bool {
    !matches!(d, 1 | 2 | 3 | 6 | 7)
}

fn very_free_possible(d: usize) -> bool {
    d == 5 || d == 9
}

/// Error carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn contradiction(c: &Contradiction, curve: &CurveMap) -> Failure {
        Failure::new(
            exit::CONTRADICTS_PAPER,
            format!(
                "CONTRADICTS KNOWN BOUNDS: {} (degree {})\n{curve}",
                c.reason, c.degree
            ),
        )
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Failure {
        let code = match e {
            ClassifyError::Curve(_) | ClassifyError::WrongDegree(_) => exit::INVALID,
            _ => exit::FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Failure {
        match e {
            SearchError::ContradictsPaper(c, curve) => Failure::contradiction(&c, &curve),
            SearchError::Classify(c) => c.into(),
            SearchError::PrefilterMismatch { .. } => Failure::new(exit::FAILURE, e.to_string()),
            _ => Failure::new(exit::INVALID, e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::new(exit::FAILURE, e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(
    args: I,
    classifier: &dyn Classifier,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli, classifier, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, classifier: &dyn Classifier, out: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::VerifyPaper => verify_paper(cli, classifier, out),
        Command::Split { path } => split(cli.format, path, classifier, out, false),
        Command::Classify { path } => split(cli.format, path, classifier, out, true),
        Command::EnumerateTypes { from, to } => enumerate_types(cli.format, *from, *to, out),
        Command::Refute { path } => refute(cli.format, path, classifier, out),
        Command::Search(args) => search_cmd(cli.format, args, classifier, out),
    }
}

fn load_curve(path: &Path) -> Result<CurveMap, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(exit::INVALID, format!("{}: {e}", path.display())))?;
    CurveMap::parse(&text)
        .map_err(|e| Failure::new(exit::INVALID, format!("{}: {e}", path.display())))
}

pub fn render_report(r: &ClassificationReport) -> String {
    format!(
        "degree: {}\nomega: {}\nextended: {}\ntangent: {}\nfree: {}\nvery_free: {}\ncase_4b: {}\n",
        r.degree, r.omega, r.extended, r.tangent, r.free, r.very_free, r.e_case_4b_flag
    )
}

fn render_verdict(r: &ClassificationReport) -> String {
    format!(
        "degree: {}\nfree: {}\nvery_free: {}\ncase_4b: {}\n",
        r.degree, r.free, r.very_free, r.e_case_4b_flag
    )
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text =
        serde_json::to_string(value).map_err(|e| Failure::new(exit::FAILURE, e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn split(
    format: Format,
    path: &Path,
    classifier: &dyn Classifier,
    out: &mut dyn Write,
    verdict_only: bool,
) -> Outcome {
    let curve = load_curve(path)?;
    let report = classifier.classify(&curve)?;
    match format {
        Format::Json => json_line(out, &report)?,
        Format::Text if verdict_only => write!(out, "{}", render_verdict(&report))?,
        Format::Text => write!(out, "{}", render_report(&report))?,
    }
    if let Some(c) = paper_check(&report) {
        return Err(Failure::contradiction(&c, &curve));
    }
    Ok(exit::OK)
}

fn render_types(v: &DegreeVerdict) -> String {
    let list = |types: &[Vec<i64>]| {
        if types.is_empty() {
            "none".to_string()
        } else {
            types
                .iter()
                .map(|t| {
                    format!(
                        "({})",
                        t.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
                    )
                })
                .collect::<Vec<_>>()
                .join(" ")
        }
    };
    format!(
        "degree {}: free {}, very free {}\n  free e: {}\n  free f: {}\n  very free e: {}\n  very free f: {}\n",
        v.degree,
        if v.free_possible { "possible" } else { "impossible" },
        if v.very_free_possible { "possible" } else { "impossible" },
        list(&v.admissible_free_e_types),
        list(&v.admissible_free_f_types),
        list(&v.admissible_very_free_e_types),
        list(&v.admissible_very_free_f_types),
    )
}

fn enumerate_types(format: Format, from: usize, to: usize, out: &mut dyn Write) -> Outcome {
    if from == 0 || from > to {
        return Err(Failure::new(
            exit::INVALID,
            format!("bad degree range {from}..{to}"),
        ));
    }
    let table: Vec<DegreeVerdict> = (from..=to).map(admissible_types).collect();
    match format {
        Format::Json => json_line(out, &table)?,
        Format::Text => {
            for v in &table {
                write!(out, "{}", render_types(v))?;
            }
        }
    }
    Ok(exit::OK)
}

fn refute(
    format: Format,
    path: &Path,
    classifier: &dyn Classifier,
    out: &mut dyn Write,
) -> Outcome {
    let curve = load_curve(path)?;
    let d = curve.degree();
    if d != 4 && d != 5 {
        return Err(ClassifyError::WrongDegree(d).into());
    }
    let report = classifier.classify(&curve)?;
    if let Some(c) = paper_check(&report) {
        return Err(Failure::contradiction(&c, &curve));
    }
    let trace = refute_low_degree_with(classifier, &curve)?;
    match format {
        Format::Json => json_line(out, &trace)?,
        Format::Text => {
            writeln!(out, "degree: {}", trace.degree)?;
            writeln!(out, "case: {:?}", trace.case)?;
            for step in &trace.steps {
                writeln!(out, "  {step:?}")?;
            }
            writeln!(out, "free: {}", trace.free)?;
        }
    }
    Ok(exit::OK)
}

fn matrix_rows(m: &CoefficientMatrix) -> Vec<String> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.bits().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

#[derive(Serialize)]
struct CurveCheck {
    file: String,
    report: ClassificationReport,
    mismatches: Vec<String>,
}

fn check_curve(e: &Expected, report: &ClassificationReport) -> Vec<String> {
    let mut diff = Vec::new();
    let mut compare = |what: &str, got: String, want: String| {
        if got != want {
            diff.push(format!("{}: {what}: expected {want}, got {got}", e.file));
        }
    };
    compare("degree", report.degree.to_string(), e.degree.to_string());
    compare(
        "omega",
        format!("{:?}", report.omega.entries),
        format!("{:?}", e.omega),
    );
    compare(
        "extended",
        format!("{:?}", report.extended.entries),
        format!("{:?}", e.extended),
    );
    compare(
        "tangent minimum",
        report.tangent.min().to_string(),
        e.tangent_min.to_string(),
    );
    compare(
        "tangent sum",
        report.tangent.sum().to_string(),
        e.degree.to_string(),
    );
    compare("free", report.free.to_string(), e.free.to_string());
    compare(
        "very_free",
        report.very_free.to_string(),
        e.very_free.to_string(),
    );
    diff
}

fn verify_paper(cli: &Cli, classifier: &dyn Classifier, out: &mut dyn Write) -> Outcome {
    let dir = cli.fixtures.clone().unwrap_or_else(fixtures::directory);
    let mut checks = Vec::new();
    let mut curves = Vec::new();
    let mut contradiction = None;
    for e in &EXPECTED {
        let curve = load_curve(&dir.join(e.file))?;
        let report = classifier.classify(&curve)?;
        if contradiction.is_none() {
            contradiction = paper_check(&report).map(|c| (c, curve.clone()));
        }
        checks.push(CurveCheck {
            file: e.file.to_string(),
            mismatches: check_curve(e, &report),
            report,
        });
        curves.push(curve);
    }
    let matrix = curves[0].multiplication_matrix(1);
    let rank = matrix.rank();
    let mut table_mismatches = Vec::new();
    if rank != EXPECTED_MATRIX_RANK {
        table_mismatches.push(format!(
            "matrix rank: expected {EXPECTED_MATRIX_RANK}, got {rank}"
        ));
    }
    let table: Vec<DegreeVerdict> = (1..=9).map(admissible_types).collect();
    for v in &table {
        if v.free_possible != free_possible(v.degree) {
            table_mismatches.push(format!(
                "degree {}: free possible expected {}, got {}",
                v.degree,
                free_possible(v.degree),
                v.free_possible
            ));
        }
        if v.very_free_possible != very_free_possible(v.degree) {
            table_mismatches.push(format!(
                "degree {}: very free possible expected {}, got {}",
                v.degree,
                very_free_possible(v.degree),
                v.very_free_possible
            ));
        }
    }
    let all_mismatches: Vec<String> = checks
        .iter()
        .flat_map(|c| c.mismatches.iter().cloned())
        .chain(table_mismatches.iter().cloned())
        .collect();
    let ok = all_mismatches.is_empty();

    match cli.format {
        Format::Json => json_line(
            out,
            &json!({
                "curves": checks,
                "matrix": { "rows": matrix_rows(&matrix), "rank": rank },
                "types": table,
                "mismatches": all_mismatches,
                "ok": ok,
            }),
        )?,
        Format::Text => {
            for (c, curve) in checks.iter().zip(&curves) {
                writeln!(out, "== {}", c.file)?;
                write!(out, "{curve}")?;
                write!(out, "{}", render_report(&c.report))?;
                writeln!(
                    out,
                    "match: {}",
                    if c.mismatches.is_empty() { "yes" } else { "NO" }
                )?;
            }
            writeln!(
                out,
                "== degree-8 multiplication matrix, multiplier degree 1"
            )?;
            for row in matrix_rows(&matrix) {
                writeln!(out, "{row}")?;
            }
            writeln!(out, "rank: {rank}")?;
            writeln!(out, "== admissible types")?;
            for v in &table {
                write!(out, "{}", render_types(v))?;
            }
            for m in &all_mismatches {
                writeln!(out, "MISMATCH {m}")?;
            }
            writeln!(
                out,
                "result: {}",
                if ok { "all values match" } else { "mismatch" }
            )?;
        }
    }
    if let Some((c, curve)) = contradiction {
        return Err(Failure::contradiction(&c, &curve));
    }
    if !ok {
        return Err(Failure::new(exit::MISMATCH, all_mismatches.join("\n")));
    }
    Ok(exit::OK)
}

fn search_cmd(
    format: Format,
    args: &SearchArgs,
    classifier: &dyn Classifier,
    out: &mut dyn Write,
) -> Outcome {
    let mut task = SearchTask::new(args.degree);
    task.dedup = match args.dedup {
        DedupArg::Exact => Dedup::Exact,
        DedupArg::Permutation => Dedup::Permutation,
    };
    task.swap_symmetry = args.swap_symmetry;
    task.shard_count = args.shards;
    task.shard = args.shard;
    task.degree_cap = if args.allow_degree_9 {
        MAX_SEARCH_DEGREE
    } else {
        search::degree_cap_from_env()
    };
    if let Some(mb) = args.memory_budget_mb {
        task.memory_budget = mb << 20;
    }
    task.threads = args
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));

    let refute_each = args.refute && matches!(args.degree, 4 | 5);
    let outcome = if args.classify_all || refute_each {
        search::classify_each(&task, classifier, |curve, _| {
            if refute_each {
                let trace = refute_low_degree_with(classifier, curve)?;
                trace.replay(curve)?;
            }
            Ok(())
        })?
    } else {
        search::find_free(&task, classifier)?
    };
    for r in &outcome.results {
        match format {
            Format::Json => json_line(out, &json!({ "curve": r.curve, "report": r.report }))?,
            Format::Text => {
                write!(out, "{}", r.curve)?;
                json_line(out, &r.report)?;
                writeln!(out)?;
            }
        }
    }
    write_summary(format, &outcome.summary, out)?;
    Ok(exit::OK)
}

fn write_summary(format: Format, s: &SearchSummary, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => json_line(out, &json!({ "summary": s })),
        Format::Text => {
            writeln!(
                out,
                "summary: degree={} enumerated={} valid={} free={} very_free={} case_4b={}",
                s.degree, s.enumerated, s.valid, s.free, s.very_free, s.case_4b
            )?;
            Ok(())
        }
    }
}
