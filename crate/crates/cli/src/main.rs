mod cache;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thh_core::monadic::{builtin_suite, parse_suite, verify_suite};
use thh_core::models::{catalogue, model, Presentation};
use thh_core::splitting::MAX_DEGREE;
use thh_core::{
    compute_thh, cyclic_bar, run_suite, tensor_with_simplicial_set, two_sided_bar, CoefficientRing, CyclicFaceSign,
    Error, FiniteSimplicialSet, FreeGca, SuiteName, ThhResult, ThhTarget, VerifyOptions,
};

use cache::{sha256_hex, Cache};
use output::{Envelope, Format, ModelRow, Output, Table, SCHEMA_VERSION};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Largest circle subdivision accepted by `homology tensor-circle`.
const MAX_SUBDIVISION: usize = 8;

#[derive(Parser)]
#[command(name = "thhcalc", version, about = "Exact THH and bar-construction calculator")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Prime for F_p coefficients.
    #[arg(long, global = true)]
    prime: Option<u32>,
    /// Highest degree reported (hard cap 40).
    #[arg(long, global = true, default_value_t = 20)]
    max_degree: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Result cache directory; caching is off when unset.
    #[arg(long, global = true, env = "THH_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Print timings and cache activity on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// THH of HZ2, HZp(p), HZ or MU.
    Thh {
        /// HZ2, HZ, MU, HZp(p), or HZp together with --prime.
        name: String,
    },
    /// Homology of a bar construction of an algebra read from a JSON file.
    Homology {
        #[arg(value_enum)]
        kind: HomologyKind,
        file: PathBuf,
        /// Number of vertices of the circle for tensor-circle.
        #[arg(long, default_value_t = 1)]
        subdivide: usize,
    },
    /// The catalogue of space models.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Colimits of semilattices.
    Monadic {
        #[command(subcommand)]
        action: MonadicAction,
    },
    /// Run a property suite; exits 1 when any property fails.
    Verify {
        #[arg(value_enum)]
        suite: VerifySuite,
        #[arg(long, value_enum, hide = true)]
        fault: Option<Fault>,
    },
}

#[derive(Subcommand)]
enum ModelsAction {
    List,
    Show { name: String },
}

#[derive(Subcommand)]
enum MonadicAction {
    /// Check both coequalizer formulas on a suite file, or the built-in suite.
    Verify {
        #[arg(long)]
        suite: Option<PathBuf>,
    },
    /// Print the built-in suite in the text format.
    Builtin,
}

#[derive(Clone, Copy, ValueEnum)]
enum HomologyKind {
    Bar,
    Cyclic,
    TensorCircle,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifySuite {
    Splitting,
    Bars,
    Monadic,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    /// Drop the Koszul sign on the wrap-around face of the cyclic bar.
    DropCyclicKoszul,
}

enum Failure {
    Usage(String),
    Refused(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeBound(_) | Error::TruncationExceeded { .. } | Error::TruncationBoundary { .. } => {
                Failure::Refused(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Outcome {
    output: Output,
    passed: bool,
}

impl Outcome {
    fn ok(output: Output) -> Self {
        Outcome { output, passed: true }
    }
}

struct Request {
    command: &'static str,
    /// Canonical description of the inputs, hashed for the digest.
    inputs: Value,
    cacheable: bool,
}

impl Request {
    fn digest(&self) -> String {
        let canonical = json!({ "operation": self.command, "inputs": self.inputs, "toolVersion": TOOL_VERSION });
        sha256_hex(canonical.to_string().as_bytes())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(3)
        }
    }
}

fn ring_of(config: &RunConfig) -> Result<CoefficientRing, Failure> {
    match config.prime {
        Some(p) => Ok(CoefficientRing::prime_field(p)?),
        None => Ok(CoefficientRing::Integers),
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let config = &cli.config;
    if config.max_degree > MAX_DEGREE {
        return Err(Failure::Refused(format!("--max-degree {} is above the hard cap {MAX_DEGREE}", config.max_degree)));
    }
    if let Some(p) = config.prime {
        CoefficientRing::prime_field(p)?;
    }
    let n = config.max_degree;
    let start = Instant::now();
    let (request, compute): (Request, Box<dyn FnOnce() -> Result<Outcome, Failure>>) = match &cli.command {
        Command::Thh { name } => {
            let target = match (name.as_str(), config.prime) {
                ("HZp", Some(p)) => ThhTarget::HZp(p),
                ("HZp", None) => return Err(Failure::Usage("HZp needs --prime".into())),
                (other, _) => other.parse::<ThhTarget>()?,
            };
            let request = Request { command: "thh", inputs: json!({ "spectrum": target.to_string(), "maxDegree": n }), cacheable: true };
            (request, Box::new(move || thh(target, n)))
        }
        Command::Homology { kind, file, subdivide } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
            let algebra = FreeGca::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            if let Some(p) = config.prime {
                if algebra.ring() != CoefficientRing::PrimeField(p) {
                    return Err(Failure::Usage(format!("--prime {p} does not match the algebra's ring {}", algebra.ring())));
                }
            }
            let (kind, v) = (*kind, *subdivide);
            if matches!(kind, HomologyKind::TensorCircle) && !(1..=MAX_SUBDIVISION).contains(&v) {
                return Err(Failure::Refused(format!("--subdivide must lie in 1..={MAX_SUBDIVISION}")));
            }
            let kind_name = kind.to_possible_value().expect("named").get_name().to_string();
            let request = Request {
                command: "homology",
                inputs: json!({ "kind": kind_name, "algebra": algebra, "subdivide": v, "maxDegree": n }),
                cacheable: true,
            };
            (request, Box::new(move || homology(kind, &algebra, v, n)))
        }
        Command::Models { action: ModelsAction::List } => {
            let request = Request { command: "models list", inputs: json!({}), cacheable: false };
            (request, Box::new(|| Ok(Outcome::ok(models_list()))))
        }
        Command::Models { action: ModelsAction::Show { name } } => {
            let ring = ring_of(config)?;
            let name = name.clone();
            let request = Request {
                command: "models show",
                inputs: json!({ "name": name, "ring": ring.to_string(), "maxDegree": n }),
                cacheable: false,
            };
            (request, Box::new(move || models_show(&name, ring, n)))
        }
        Command::Monadic { action: MonadicAction::Builtin } => {
            print!("{}", thh_core::monadic::render_suite(&builtin_suite()));
            return Ok(true);
        }
        Command::Monadic { action: MonadicAction::Verify { suite } } => {
            let (suite, source) = match suite {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                    let parsed = parse_suite(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    (parsed, json!({ "suiteDigest": sha256_hex(text.as_bytes()) }))
                }
                None => (builtin_suite(), json!({ "suite": "builtin" })),
            };
            let request = Request { command: "monadic verify", inputs: source, cacheable: false };
            (
                request,
                Box::new(move || {
                    let report = verify_suite(&suite);
                    let passed = report.passed();
                    Ok(Outcome { output: Output::Monadic { passed, report }, passed })
                }),
            )
        }
        Command::Verify { suite, fault } => {
            let suites: Vec<SuiteName> = match suite {
                VerifySuite::Splitting => vec![SuiteName::Splitting],
                VerifySuite::Bars => vec![SuiteName::Bars],
                VerifySuite::Monadic => vec![SuiteName::Monadic],
                VerifySuite::All => SuiteName::ALL.to_vec(),
            };
            let options = VerifyOptions {
                cyclic_face_sign: match fault {
                    Some(Fault::DropCyclicKoszul) => CyclicFaceSign::Unsigned,
                    None => CyclicFaceSign::Koszul,
                },
            };
            let names: Vec<String> = suites.iter().map(|s| s.to_string()).collect();
            let request = Request {
                command: "verify",
                inputs: json!({ "suites": names, "fault": fault.is_some() }),
                cacheable: false,
            };
            (
                request,
                Box::new(move || {
                    let reports: Vec<_> = suites.into_iter().map(|s| run_suite(s, options)).collect();
                    let passed = reports.iter().all(|r| r.passed());
                    Ok(Outcome { output: Output::Verify { passed, reports }, passed })
                }),
            )
        }
    };

    let digest = request.digest();
    let cache = match (&config.cache_dir, config.no_cache || !request.cacheable) {
        (Some(dir), false) => match Cache::new(dir) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("warning: cache disabled: {}: {e}", dir.display());
                None
            }
        },
        _ => None,
    };
    let cached = cache
        .as_ref()
        .and_then(|c| c.get(&digest))
        .and_then(|v| serde_json::from_value::<Table>(v).ok());
    let outcome = match cached {
        Some(table) => {
            if config.verbose > 0 {
                eprintln!("cache hit {digest}");
            }
            Outcome::ok(Output::Table(table))
        }
        None => {
            let outcome = compute()?;
            if let (Some(c), Output::Table(t)) = (&cache, &outcome.output) {
                let value = serde_json::to_value(t).expect("tables serialize");
                if let Err(e) = c.put(&digest, &value) {
                    eprintln!("warning: could not write cache entry: {e}");
                }
            }
            outcome
        }
    };
    let elapsed = start.elapsed().as_millis();
    if config.verbose > 0 {
        eprintln!("{} finished in {elapsed} ms", request.command);
    }
    let rendered = match config.format {
        Format::Table => outcome.output.render_table(),
        Format::Csv => outcome.output.render_csv(),
        Format::Json => {
            let envelope = Envelope {
                schema_version: SCHEMA_VERSION,
                tool_version: TOOL_VERSION,
                command: request.command,
                input_digest: &digest,
                wall_time_ms: elapsed,
                payload: serde_json::to_value(&outcome.output).expect("payloads serialize"),
            };
            serde_json::to_string_pretty(&envelope).expect("envelope serializes") + "\n"
        }
    };
    print!("{rendered}");
    Ok(outcome.passed)
}

fn thh(target: ThhTarget, n: usize) -> Result<Outcome, Failure> {
    let title = format!("THH({target}) through degree {n}");
    let table = match compute_thh(target, n)? {
        ThhResult::Group(g) => Table::Group { title, rows: g.entries().to_vec() },
        ThhResult::Ranks(r) => Table::ranks(title, "Z".into(), r.ranks()),
    };
    Ok(Outcome::ok(Output::Table(table)))
}

fn homology(kind: HomologyKind, algebra: &FreeGca, v: usize, n: usize) -> Result<Outcome, Failure> {
    // Complexes truncated at n + 1 determine homology through degree n.
    let top = n + 1;
    let a = algebra.with_truncation(top);
    let (complex, what) = match kind {
        HomologyKind::Bar => (two_sided_bar(&a, top)?, "B(k, A, k)".to_string()),
        HomologyKind::Cyclic => (cyclic_bar(&a, top)?, "cyclic bar".to_string()),
        HomologyKind::TensorCircle => {
            let s = if v == 1 { FiniteSimplicialSet::circle_standard() } else { FiniteSimplicialSet::circle_subdivided(v)? };
            (tensor_with_simplicial_set(&a, &s, top)?, format!("A (x) circle with {v} vertices"))
        }
    };
    let title = format!("homology of {what} for {algebra} through degree {n}");
    let h = complex.homology_all();
    let table = match a.ring() {
        CoefficientRing::Integers => Table::Group { title, rows: h.entries().to_vec() },
        ring => Table::ranks(title, ring.to_string(), &h.free_ranks()),
    };
    Ok(Outcome::ok(Output::Table(table)))
}

fn models_list() -> Output {
    let rows = catalogue()
        .iter()
        .map(|m| ModelRow {
            name: m.name.to_string(),
            delooping_of: m.delooping_of.map(str::to_string),
            rings: m.rings.to_string(),
            description: m.description.to_string(),
        })
        .collect();
    Output::Models { rows }
}

fn models_show(name: &str, ring: CoefficientRing, n: usize) -> Result<Outcome, Failure> {
    let table = match model(name, ring, n)? {
        Presentation::Algebra(a) => {
            let ranks = a.poincare_series(n)?;
            Table::ranks(format!("{name}: {a}"), ring.to_string(), ranks.ranks())
        }
        Presentation::Group(g) => Table::Group { title: format!("{name} over {ring}"), rows: g.entries().to_vec() },
    };
    Ok(Outcome::ok(Output::Table(table)))
}
