use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use lensbook::braid::parse_syllables_for;
use lensbook::corpus::{corpus, CorpusSpec};
use lensbook::verify::{audit_json, certified_h1, expected_h1};
use lensbook::{
    audit, extract, initial_diagram, render_svg, round_trip, run, MoveTrace, OpenBook, OpenBookJson, PipelineError,
    PlatInput,
};

/// Planar open books for L(p,1) and S^1 x S^2 from a plat presentation of
/// the binding knot.
#[derive(Debug, Parser)]
#[command(name = "lensbook", version)]
struct Args {
    /// Input file: `n=<int> p=<int>` followed by syllables `a(i,j)^k`.
    #[arg(long, conflicts_with_all = ["word", "n", "p"])]
    input: Option<PathBuf>,
    /// Syllables of the pure braid word, e.g. "a(1,2) a(2,3)^-1".
    #[arg(long, requires_all = ["n", "p"])]
    word: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long, value_name = "PATH")]
    emit_json: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    emit_svg: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    emit_trace: Option<PathBuf>,
    /// Replay `--trace` from the input instead of running the pipeline.
    #[arg(long, requires = "trace")]
    verify_only: bool,
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Open book JSON to check against the replayed endpoint.
    #[arg(long, value_name = "PATH", requires = "verify_only")]
    json: Option<PathBuf>,
    /// Self-test on this many random inputs.
    #[arg(long, value_name = "COUNT", conflicts_with_all = ["input", "word", "verify_only"])]
    fuzz: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Hypothesis(PipelineError),
    Other(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Other(s)
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_input(args: &Args) -> Result<PlatInput, String> {
    if let Some(path) = &args.input {
        return PlatInput::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()));
    }
    match (args.n, args.p) {
        (Some(n), Some(p)) => {
            let word = parse_syllables_for(n, args.word.as_deref().unwrap_or("")).map_err(|e| e.to_string())?;
            Ok(PlatInput::new(word, p))
        }
        _ => Err("give --input <path>, or --n and --p with an optional --word".into()),
    }
}

/// Checks shared by the normal and verify-only paths.
fn verify(input: &PlatInput, book: &OpenBook, endpoint: &lensbook::MixedDiagram, trace: &MoveTrace) -> Vec<String> {
    let mut failures = Vec::new();
    let initial = initial_diagram(input);
    let report = round_trip(&initial, endpoint, trace);
    if let Some(d) = report.divergence {
        let tag = trace.moves.get(d.at).map_or(String::new(), |m| format!(" `{m}`"));
        failures.push(format!("round-trip: move {}{tag}: {}", d.at, d.detail));
    }
    let want = expected_h1(input.p);
    match certified_h1(endpoint) {
        Ok(h) if h == want => {}
        Ok(h) => failures.push(format!("h1: got {h:?}, expected {want:?}")),
        Err(e) => failures.push(format!("h1: {e}")),
    }
    let audit = audit(book, endpoint);
    failures.extend(audit.failures().map(|c| format!("{}: {}", c.name, c.detail)));
    failures
}

fn pipeline(args: &Args) -> Result<(), Failure> {
    let input = load_input(args)?;
    let r = run(&input).map_err(|e| match e {
        PipelineError::HypothesisViolated { .. } => Failure::Hypothesis(e),
        e => Failure::Other(e.to_string()),
    })?;
    let book = extract(&r.endpoint, &r.trace).map_err(|e| e.to_string())?;
    let json = book.to_json();
    if let Some(path) = &args.emit_json {
        write(path, &format!("{json}\n"))?;
    }
    if let Some(path) = &args.emit_svg {
        write(path, &render_svg(&book, &r.trace))?;
    }
    if let Some(path) = &args.emit_trace {
        write(path, &r.trace.to_text())?;
    }
    println!("{json}");
    let failures = verify(&input, &book, &r.endpoint, &r.trace);
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Other(failures.join("\n")))
    }
}

fn verify_only(args: &Args) -> Result<(), Failure> {
    let input = load_input(args)?;
    let trace_path = args.trace.as_deref().expect("clap enforces --trace");
    let trace = MoveTrace::parse(&read(trace_path)?).map_err(|e| format!("{}: {e}", trace_path.display()))?;
    let endpoint = trace.replay(&initial_diagram(&input)).map_err(|(at, e)| {
        let mv = &trace.moves[at];
        format!("replay: move {at} `{mv}`: {e}")
    })?;
    let book = extract(&endpoint, &trace).map_err(|e| e.to_string())?;
    let mut failures = verify(&input, &book, &endpoint, &trace);
    if let Some(path) = &args.json {
        let given = OpenBookJson::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
        let report = audit_json(&given, &endpoint);
        failures.extend(report.failures().map(|c| format!("json {}: {}", c.name, c.detail)));
        if given != OpenBookJson::from(&book) {
            failures.push("json: differs from the open book read off the replayed trace".into());
        }
    }
    println!("{} moves replayed, {} checks failed", trace.len(), failures.len());
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Other(failures.join("\n")))
    }
}

fn fuzz(count: usize, seed: u64) -> Result<(), Failure> {
    let mut failures = Vec::new();
    for input in corpus(seed, count, &CorpusSpec::default()) {
        let outcome = run(&input).map_err(|e| e.to_string()).and_then(|r| {
            let book = extract(&r.endpoint, &r.trace).map_err(|e| e.to_string())?;
            Ok(verify(&input, &book, &r.endpoint, &r.trace))
        });
        match outcome {
            Ok(f) if f.is_empty() => {}
            Ok(f) => failures.push(format!("{input}: {}", f.join("; "))),
            Err(e) => failures.push(format!("{input}: {e}")),
        }
    }
    println!("{count} inputs, seed {seed}, {} failures", failures.len());
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Other(failures.join("\n")))
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = if let Some(count) = args.fuzz {
        fuzz(count, args.seed)
    } else if args.verify_only {
        verify_only(&args)
    } else {
        pipeline(&args)
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Hypothesis(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
