//! testel: a command-line workbench for test-element experiments in free
//! groups and surface groups.
//!
//! Every subcommand runs one library operation and prints a single JSON
//! document on standard output (human summary on standard error). Identical
//! flags and seed produce byte-identical documents, independently of the
//! worker count. Exit codes: 0 success, 2 validation error, 3 internal
//! invariant violation.

mod doc;
mod store;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use testel_core::density::{
    bound_calculator, census, classify, net_coverage_audit_with, verify_covering_chain, BoundName,
    Bucket, CensusRecord, DensityError, NamedSet,
};
use testel_core::stallings::StallingsError;
use testel_core::surface::{Perm, SurfaceError, SurfaceKind, SurfacePresentation};
use testel_core::testel::{
    endo_fixer_search, net_project_free_with, CosetProjector, NonOrientableNet, OrientableNet,
    QuotientSpec, TestelError,
};
use testel_core::word::{
    ball, ball_size, ball_size_u64, sphere_size, Letter, SphereIter, Word, WordError,
};

use doc::{
    emit, AuditDoc, BallDoc, BoundDoc, CensusDoc, CertificateDoc, CosetDoc, CoveringDoc, Document,
    NetDoc, ReduceDoc,
};

const ENV_OUT_DIR: &str = "TESTEL_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "testel",
    version,
    about = "Test-element constructions, certificates and density counts in free and surface groups",
    after_help = "Words use whitespace-separated tokens `x<i>` and `x<i>^-1`; the empty string \
                  (or `1`) is the identity. Set TESTEL_OUT_DIR to give census runs a default \
                  store directory."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Freely reduce a word and report its length
    Reduce(ReduceArgs),
    /// Exact ball/sphere sizes, optionally streaming the words to a file
    Ball(BallArgs),
    /// Project a word to a nearby test-element candidate with a trace
    Net(NetArgs),
    /// Target a kernel coset of a finite quotient with a candidate
    Coset(CosetArgs),
    /// Search for an endomorphism fixing the word without being an automorphism
    Endo(EndoArgs),
    /// Classify a whole ball into positive/negative/unknown buckets
    Census(CensusArgs),
    /// Evaluate a named density or net bound
    Bounds(BoundsArgs),
    /// Check covering-chain inequalities or audit net coverage exhaustively
    Verify(VerifyArgs),
}

enum CliError {
    Usage(String),
    Internal(String),
}

impl From<WordError> for CliError {
    fn from(e: WordError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<SurfaceError> for CliError {
    fn from(e: SurfaceError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<StallingsError> for CliError {
    fn from(e: StallingsError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<TestelError> for CliError {
    fn from(e: TestelError) -> CliError {
        match e {
            TestelError::SubsetSearchExhausted | TestelError::Internal(_) => {
                CliError::Internal(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<DensityError> for CliError {
    fn from(e: DensityError) -> CliError {
        match e {
            DensityError::NetViolation(_) => CliError::Internal(e.to_string()),
            DensityError::Testel(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Usage(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Reduce(args) => cmd_reduce(args),
        Command::Ball(args) => cmd_ball(args),
        Command::Net(args) => cmd_net(args),
        Command::Coset(args) => cmd_coset(args),
        Command::Endo(args) => cmd_endo(args),
        Command::Census(args) => cmd_census(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal invariant violation: {msg}");
            ExitCode::from(3)
        }
    }
}

// ---------------------------------------------------------------------------
// group selection

#[derive(Args)]
struct GroupArgs {
    /// Free group of this rank
    #[arg(long, value_name = "RANK", conflicts_with = "surface")]
    free: Option<usize>,
    /// Surface group: `orientable:<genus>` or `nonorientable:<genus>`
    #[arg(long, value_name = "KIND:GENUS")]
    surface: Option<String>,
}

enum Group {
    Free(usize),
    Surface(SurfacePresentation),
}

impl Group {
    fn alphabet_rank(&self) -> usize {
        match self {
            Group::Free(rank) => *rank,
            Group::Surface(pres) => pres.alphabet_rank(),
        }
    }

    fn presentation(&self) -> Option<&SurfacePresentation> {
        match self {
            Group::Free(_) => None,
            Group::Surface(pres) => Some(pres),
        }
    }

    fn describe(&self) -> String {
        match self {
            Group::Free(rank) => format!("free:{rank}"),
            Group::Surface(pres) => match pres.kind {
                SurfaceKind::Orientable => format!("orientable:{}", pres.genus),
                SurfaceKind::NonOrientable => format!("nonorientable:{}", pres.genus),
            },
        }
    }
}

impl GroupArgs {
    fn resolve(&self) -> Result<Group, CliError> {
        match (&self.free, &self.surface) {
            (Some(rank), None) => {
                if *rank < 1 {
                    return Err(CliError::Usage("rank must be at least 1".into()));
                }
                Ok(Group::Free(*rank))
            }
            (None, Some(spec)) => {
                let (kind, genus) = spec
                    .split_once(':')
                    .ok_or_else(|| CliError::Usage(format!("bad surface spec `{spec}`")))?;
                let genus: usize = genus
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad genus in `{spec}`")))?;
                let pres = match kind {
                    "orientable" => SurfacePresentation::orientable(genus)?,
                    "nonorientable" => SurfacePresentation::non_orientable(genus)?,
                    _ => return Err(CliError::Usage(format!("bad surface kind `{kind}`"))),
                };
                Ok(Group::Surface(pres))
            }
            _ => Err(CliError::Usage(
                "choose exactly one of --free or --surface".into(),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// reduce

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    word: String,
}

#[derive(serde::Serialize)]
struct ReduceConfig {
    rank: usize,
    word: String,
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), CliError> {
    if args.rank < 1 {
        return Err(CliError::Usage("rank must be at least 1".into()));
    }
    let word = Word::parse(args.rank, &args.word)?;
    let summary = format!("reduced to `{word}` (length {})", word.len());
    emit(
        &Document {
            tool: "testel",
            command: "reduce",
            config: ReduceConfig {
                rank: args.rank,
                word: args.word,
            },
            result: ReduceDoc {
                reduced: word.to_string(),
                length: word.len(),
            },
        },
        &summary,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// ball

#[derive(Args)]
struct BallArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    radius: usize,
    /// Also write the ball's words, one per line, to this file
    #[arg(long, value_name = "PATH")]
    words: Option<PathBuf>,
    /// Enumeration cap for --words (counting alone is exact at any radius)
    #[arg(long, default_value_t = 10)]
    max_radius: usize,
}

#[derive(serde::Serialize)]
struct BallConfig {
    rank: usize,
    radius: usize,
}

fn cmd_ball(args: BallArgs) -> Result<(), CliError> {
    if args.rank < 1 {
        return Err(CliError::Usage("rank must be at least 1".into()));
    }
    let total = ball_size(args.rank, args.radius);
    let spheres: Vec<String> = (0..=args.radius)
        .map(|k| sphere_size(args.rank, k).to_string())
        .collect();

    let words_written = match &args.words {
        None => None,
        Some(path) => {
            if args.radius > args.max_radius {
                return Err(CliError::Usage(format!(
                    "radius {} exceeds --max-radius {} for enumeration",
                    args.radius, args.max_radius
                )));
            }
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            let mut count = 0u64;
            for w in ball(args.rank, args.radius) {
                writeln!(file, "{w}")?;
                count += 1;
            }
            Some(count)
        }
    };

    let summary = format!("|B({})| = {total} in rank {}", args.radius, args.rank);
    emit(
        &Document {
            tool: "testel",
            command: "ball",
            config: BallConfig {
                rank: args.rank,
                radius: args.radius,
            },
            result: BallDoc {
                ball_size: total.to_string(),
                sphere_sizes: spheres,
                words_written,
            },
        },
        &summary,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// net

#[derive(Args)]
struct NetArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    word: String,
    /// Construction prime (orientable only; free uses 2, non-orientable 3)
    #[arg(long)]
    prime: Option<u32>,
    /// Endomorphism vetting bound for appended subsets
    #[arg(long, default_value_t = 2)]
    vet_bound: usize,
    #[arg(long, default_value_t = 3)]
    max_endo_bound: usize,
    #[arg(long, default_value_t = 5000)]
    max_cosets: usize,
}

#[derive(serde::Serialize)]
struct NetConfig {
    group: String,
    word: String,
    prime: u32,
    vet_bound: usize,
}

fn cmd_net(args: NetArgs) -> Result<(), CliError> {
    if args.vet_bound > args.max_endo_bound {
        return Err(CliError::Usage(format!(
            "--vet-bound {} exceeds --max-endo-bound {}",
            args.vet_bound, args.max_endo_bound
        )));
    }
    let group = args.group.resolve()?;
    let word = Word::parse(group.alphabet_rank(), &args.word)?;

    let (prime, result) = match &group {
        Group::Free(rank) => {
            if args.prime.is_some_and(|p| p != 2) {
                return Err(CliError::Usage(
                    "the free net construction runs at p = 2".into(),
                ));
            }
            (2, net_project_free_with(&word, *rank, args.vet_bound)?)
        }
        Group::Surface(pres) if pres.kind == SurfaceKind::Orientable => {
            let p = args.prime.unwrap_or(5);
            let net = OrientableNet::with_options(pres.genus, p, args.vet_bound, args.max_cosets)?;
            (p, net.project(&word)?)
        }
        Group::Surface(pres) => {
            if args.prime.is_some_and(|p| p != 3) {
                return Err(CliError::Usage(
                    "the non-orientable net construction runs at p = 3".into(),
                ));
            }
            let net = NonOrientableNet::with_options(pres.genus, args.vet_bound)?;
            (3, net.project(&word)?)
        }
    };

    let summary = format!(
        "candidate at distance {} <= {} (output length {})",
        result.distance,
        result.bound,
        result.output.len()
    );
    emit(
        &Document {
            tool: "testel",
            command: "net",
            config: NetConfig {
                group: group.describe(),
                word: args.word,
                prime,
                vet_bound: args.vet_bound,
            },
            result: NetDoc::from_result(&result),
        },
        &summary,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// coset

#[derive(Args)]
struct CosetArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    word: String,
    /// Generator image as disjoint cycles on 1-based points, e.g. "(1 2)";
    /// repeat once per generator, `id` for the identity
    #[arg(long = "image", value_name = "CYCLES")]
    images: Vec<String>,
    /// Permutation degree (defaults to the largest point mentioned)
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = 2)]
    vet_bound: usize,
    #[arg(long, default_value_t = 3)]
    max_endo_bound: usize,
}

#[derive(serde::Serialize)]
struct CosetConfig {
    group: String,
    word: String,
    images: Vec<String>,
    degree: usize,
    vet_bound: usize,
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    let mut rest = text.trim();
    if rest == "id" || rest.is_empty() {
        return Ok(Vec::new());
    }
    let mut cycles = Vec::new();
    while !rest.is_empty() {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        let Some(stripped) = rest.strip_prefix('(') else {
            return Err(CliError::Usage(format!("bad cycle notation `{text}`")));
        };
        let Some(end) = stripped.find(')') else {
            return Err(CliError::Usage(format!("unclosed cycle in `{text}`")));
        };
        let inner = &stripped[..end];
        let mut cycle = Vec::new();
        for token in inner.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let point: usize = token
                .parse()
                .ok()
                .filter(|&x| x >= 1)
                .ok_or_else(|| CliError::Usage(format!("bad point `{token}` in `{text}`")))?;
            cycle.push(point - 1);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = &stripped[end + 1..];
    }
    Ok(cycles)
}

fn build_images(texts: &[String], degree_flag: Option<usize>) -> Result<Vec<Perm>, CliError> {
    let all_cycles: Vec<Vec<Vec<usize>>> = texts
        .iter()
        .map(|t| parse_cycles(t))
        .collect::<Result<_, _>>()?;
    let max_point = all_cycles
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .map(|p| p + 1)
        .unwrap_or(1);
    let degree = match degree_flag {
        None => max_point,
        Some(d) if d >= max_point && d >= 1 => d,
        Some(d) => {
            return Err(CliError::Usage(format!(
                "--degree {d} is below the largest mentioned point {max_point}"
            )))
        }
    };
    all_cycles
        .iter()
        .zip(texts)
        .map(|(cycles, text)| {
            Perm::from_cycles(degree, cycles)
                .ok_or_else(|| CliError::Usage(format!("overlapping cycles in `{text}`")))
        })
        .collect()
}

fn cmd_coset(args: CosetArgs) -> Result<(), CliError> {
    if args.vet_bound > args.max_endo_bound {
        return Err(CliError::Usage(format!(
            "--vet-bound {} exceeds --max-endo-bound {}",
            args.vet_bound, args.max_endo_bound
        )));
    }
    let group = args.group.resolve()?;
    let rank = group.alphabet_rank();
    if args.images.len() != rank {
        return Err(CliError::Usage(format!(
            "expected {rank} --image flags (one per generator), got {}",
            args.images.len()
        )));
    }
    let images = build_images(&args.images, args.degree)?;
    let degree = images[0].degree();
    let word = Word::parse(rank, &args.word)?;

    let projector = CosetProjector::new(
        group.presentation(),
        rank,
        QuotientSpec { images },
        args.vet_bound,
    )?;
    let result = projector.project(&word)?;

    let summary = format!(
        "coset candidate with p = {}, |quotient| = {}, cost {} (output length {})",
        result.trace.prime,
        result.trace.quotient_order,
        result.trace.total_cost(),
        result.output.len()
    );
    emit(
        &Document {
            tool: "testel",
            command: "coset",
            config: CosetConfig {
                group: group.describe(),
                word: args.word,
                images: args.images,
                degree,
                vet_bound: args.vet_bound,
            },
            result: CosetDoc::from_result(&result),
        },
        &summary,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// endo

#[derive(Args)]
struct EndoArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    word: String,
    /// Image length bound for the exhaustive search
    #[arg(long, default_value_t = 2)]
    bound: usize,
    #[arg(long, default_value_t = 3)]
    max_endo_bound: usize,
}

#[derive(serde::Serialize)]
struct EndoConfig {
    group: String,
    word: String,
    bound: usize,
}

fn cmd_endo(args: EndoArgs) -> Result<(), CliError> {
    if args.bound > args.max_endo_bound {
        return Err(CliError::Usage(format!(
            "--bound {} exceeds --max-endo-bound {}",
            args.bound, args.max_endo_bound
        )));
    }
    let group = args.group.resolve()?;
    let word = Word::parse(group.alphabet_rank(), &args.word)?;
    let certificate = endo_fixer_search(&word, args.bound, group.presentation());
    let result = CertificateDoc::from_certificate(&certificate);
    let summary = format!("certificate status: {}", result.status);
    emit(
        &Document {
            tool: "testel",
            command: "endo",
            config: EndoConfig {
                group: group.describe(),
                word: args.word,
                bound: args.bound,
            },
            result,
        },
        &summary,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// census

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    radius: usize,
    #[arg(long, default_value_t = 2)]
    vet_bound: usize,
    /// Recorded for provenance; the exhaustive census is deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; never affects the output document
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Append-only store (default: $TESTEL_OUT_DIR/census.log when set)
    #[arg(long, value_name = "PATH")]
    store: Option<PathBuf>,
    /// Export every stored record to CSV after the run
    #[arg(long, value_name = "PATH")]
    export_csv: Option<PathBuf>,
    /// Classification budget; runs past it are flagged incomplete
    #[arg(long, default_value_t = 500_000)]
    max_elements: u64,
    #[arg(long, default_value_t = 10)]
    max_radius: usize,
    #[arg(long, default_value_t = 3)]
    max_endo_bound: usize,
}

#[derive(serde::Serialize)]
struct CensusConfig {
    rank: usize,
    radius: usize,
    vet_bound: usize,
    seed: u64,
    max_elements: u64,
}

fn parallel_census(
    rank: usize,
    radius: usize,
    vet_bound: usize,
    seed: u64,
    workers: usize,
) -> Result<CensusRecord, CliError> {
    let mut totals = (0u64, 0u64, 0u64);
    let mut shard_results: Vec<Result<(u64, u64, u64), DensityError>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|tid| {
                scope.spawn(move || -> Result<(u64, u64, u64), DensityError> {
                    let mut counts = (0u64, 0u64, 0u64);
                    for shard in (tid..2 * rank).step_by(workers) {
                        let prefix = Word::from_letters(rank, [Letter::from_ord(shard)]).unwrap();
                        for len in 1..=radius {
                            for w in SphereIter::with_prefix(&prefix, len) {
                                match classify(&w, vet_bound)?.0 {
                                    Bucket::Positive => counts.0 += 1,
                                    Bucket::Negative => counts.1 += 1,
                                    Bucket::Unknown => counts.2 += 1,
                                }
                            }
                        }
                    }
                    Ok(counts)
                })
            })
            .collect();
        shard_results = handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .collect();
    });
    for shard in shard_results {
        let (p, n, u) = shard?;
        totals = (totals.0 + p, totals.1 + n, totals.2 + u);
    }
    match classify(&Word::identity(rank), vet_bound)?.0 {
        Bucket::Positive => totals.0 += 1,
        Bucket::Negative => totals.1 += 1,
        Bucket::Unknown => totals.2 += 1,
    }
    Ok(CensusRecord {
        rank,
        radius,
        vetting_bound: vet_bound,
        positive: totals.0,
        negative: totals.1,
        unknown: totals.2,
        ball_size: totals.0 + totals.1 + totals.2,
        seed,
        timestamp: None,
        complete: true,
    })
}

fn cmd_census(args: CensusArgs) -> Result<(), CliError> {
    if args.rank < 1 {
        return Err(CliError::Usage("rank must be at least 1".into()));
    }
    if args.radius > args.max_radius {
        return Err(CliError::Usage(format!(
            "radius {} exceeds --max-radius {}",
            args.radius, args.max_radius
        )));
    }
    if args.vet_bound > args.max_endo_bound {
        return Err(CliError::Usage(format!(
            "--vet-bound {} exceeds --max-endo-bound {}",
            args.vet_bound, args.max_endo_bound
        )));
    }
    let store_path = args
        .store
        .clone()
        .or_else(|| std::env::var_os(ENV_OUT_DIR).map(|dir| PathBuf::from(dir).join("census.log")));

    let existing = match &store_path {
        Some(path) => store::read_records(path)?,
        None => Vec::new(),
    };

    let record =
        match store::find_complete(&existing, args.rank, args.radius, args.vet_bound, args.seed) {
            Some(found) => {
                eprintln!("reusing stored record");
                found.clone()
            }
            None => {
                let full_ball_fits =
                    ball_size_u64(args.rank, args.radius).is_some_and(|b| b <= args.max_elements);
                let mut record = if args.workers > 1 && full_ball_fits {
                    parallel_census(
                        args.rank,
                        args.radius,
                        args.vet_bound,
                        args.seed,
                        args.workers,
                    )?
                } else {
                    if args.workers > 1 {
                        eprintln!("budgeted run: falling back to one worker");
                    }
                    census(
                        args.rank,
                        args.radius,
                        args.vet_bound,
                        args.seed,
                        args.max_elements,
                    )?
                };
                record.timestamp = Some(
                    SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0),
                );
                if let Some(path) = &store_path {
                    if let Some(parent) = path.parent() {
                        if !parent.as_os_str().is_empty() {
                            std::fs::create_dir_all(parent)?;
                        }
                    }
                    store::append_record(path, &record)?;
                }
                record
            }
        };

    if let Some(csv_path) = &args.export_csv {
        let records = match &store_path {
            Some(path) => store::read_records(path)?,
            None => vec![record.clone()],
        };
        store::export_csv(&records, csv_path)?;
    }

    let summary = format!(
        "B({}) rank {}: {} positive, {} negative, {} unknown of {}{}",
        args.radius,
        args.rank,
        record.positive,
        record.negative,
        record.unknown,
        record.ball_size,
        if record.complete { "" } else { " (incomplete)" },
    );
    emit(
        &Document {
            tool: "testel",
            command: "census",
            config: CensusConfig {
                rank: args.rank,
                radius: args.radius,
                vet_bound: args.vet_bound,
                seed: args.seed,
                max_elements: args.max_elements,
            },
            result: CensusDoc::from_record(&record),
        },
        &summary,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// bounds

#[derive(Args)]
struct BoundsArgs {
    /// One of freeC, nonorC, orC, freeNet, orNet, nonorNet, krss
    #[arg(long)]
    name: String,
    /// Genus (or rank, for the free-group bounds)
    #[arg(long, alias = "n")]
    genus: usize,
}

#[derive(serde::Serialize)]
struct BoundsConfig {
    name: String,
    genus: usize,
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), CliError> {
    let name: BoundName = args.name.parse()?;
    let report = bound_calculator(name, args.genus)?;
    let summary = match &report.exact {
        Some((numerator, denominator)) if denominator == "1" => {
            format!("{}({}) = {}", report.name, report.parameter, numerator)
        }
        Some((numerator, denominator)) => format!(
            "{}({}) = {}/{} ~ {}",
            report.name, report.parameter, numerator, denominator, report.decimal
        ),
        None => format!("{}({}) ~ {}", report.name, report.parameter, report.decimal),
    };
    emit(
        &Document {
            tool: "testel",
            command: "bounds",
            config: BoundsConfig {
                name: args.name,
                genus: args.genus,
            },
            result: BoundDoc::from_report(&report),
        },
        &summary,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

#[derive(Args)]
struct VerifyArgs {
    /// `covering` (covering-chain inequalities) or `net-audit`
    #[arg(long)]
    check: String,
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    radius: usize,
    /// Covering set: even, all, or identity
    #[arg(long)]
    set: Option<String>,
    /// Covering translate (repeat; `1` is the identity)
    #[arg(long = "translate", value_name = "WORD")]
    translates: Vec<String>,
    #[arg(long, default_value_t = 2)]
    vet_bound: usize,
    #[arg(long, default_value_t = 10)]
    max_radius: usize,
    #[arg(long, default_value_t = 3)]
    max_endo_bound: usize,
}

#[derive(serde::Serialize)]
struct VerifyConfig {
    check: String,
    rank: usize,
    radius: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    set: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    translates: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vet_bound: Option<usize>,
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    if args.radius > args.max_radius {
        return Err(CliError::Usage(format!(
            "radius {} exceeds --max-radius {}",
            args.radius, args.max_radius
        )));
    }
    if args.vet_bound > args.max_endo_bound {
        return Err(CliError::Usage(format!(
            "--vet-bound {} exceeds --max-endo-bound {}",
            args.vet_bound, args.max_endo_bound
        )));
    }
    match args.check.as_str() {
        "covering" => {
            let set: NamedSet = args
                .set
                .as_deref()
                .ok_or_else(|| CliError::Usage("--set is required for covering".into()))?
                .parse()?;
            if args.translates.is_empty() {
                return Err(CliError::Usage(
                    "at least one --translate is required".into(),
                ));
            }
            let translates: Vec<Word> = args
                .translates
                .iter()
                .map(|t| Word::parse(args.rank, t))
                .collect::<Result<_, _>>()?;
            let report =
                verify_covering_chain(|w| set.contains(w), &translates, args.rank, args.radius)?;
            let summary = format!(
                "covering: {}, injection: {}, chain: {}",
                pass(report.covering_ok),
                pass(report.injection_ok),
                pass(report.chain_ok),
            );
            emit(
                &Document {
                    tool: "testel",
                    command: "verify",
                    config: VerifyConfig {
                        check: args.check,
                        rank: args.rank,
                        radius: args.radius,
                        set: Some(set.as_str().into()),
                        translates: args.translates,
                        vet_bound: None,
                    },
                    result: CoveringDoc::from_report(&report),
                },
                &summary,
            );
            Ok(())
        }
        "net-audit" => {
            let report = net_coverage_audit_with(args.rank, args.radius, args.vet_bound)?;
            let summary = format!(
                "net audit over {} words: max distance {} <= {}",
                report.total, report.max_distance, report.bound
            );
            emit(
                &Document {
                    tool: "testel",
                    command: "verify",
                    config: VerifyConfig {
                        check: args.check,
                        rank: args.rank,
                        radius: args.radius,
                        set: None,
                        translates: Vec::new(),
                        vet_bound: Some(args.vet_bound),
                    },
                    result: AuditDoc::from_report(&report),
                },
                &summary,
            );
            Ok(())
        }
        other => Err(CliError::Usage(format!("unknown check `{other}`"))),
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
