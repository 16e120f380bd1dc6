use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crformal::hypersurface::Convention;
use crformal::verify::SuiteStatus;
use crformal_cli::grammar::{self, Suite};
use crformal_cli::run::{self, Overrides, Report, TaskFilter, DEFAULT_DEGREE, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "crformal",
    version,
    about = "Exact formal CR geometry: classify hypersurfaces, analyze maps, verify theorem suites"
)]
struct Cli {
    /// Truncation degree D (default 10, or the document's `degree`).
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Complexification convention for Im w: `2i` (default) or `i`.
    #[arg(long, global = true, value_parser = parse_convention)]
    complexify: Option<Convention>,
    /// Seed for randomized generic-rank evaluation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report to this path (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Document file; stdin when omitted or `-`.
    file: Option<PathBuf>,
    /// Inline document text instead of a file.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    text: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify hypersurfaces (type, class C, holomorphic nondegeneracy).
    Classify(Input),
    /// Analyze maps given by `check-map H : M -> M2` statements.
    CheckMap(Input),
    /// Run `prolong` statements.
    Prolong(Input),
    /// Run every task in a document.
    Run(Input),
    /// Run a theorem suite over the shipped instance registry.
    Verify {
        #[arg(default_value = "all", value_parser = ["finite_type", "infinite_type", "linear_part", "all"])]
        suite: String,
    },
    /// Check the standard example families against their expected behaviour.
    Examples,
    /// Print the input grammar.
    PrintGrammar,
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse()
}

fn read_input(input: &Input) -> std::io::Result<String> {
    if let Some(t) = &input.text {
        return Ok(t.clone());
    }
    match &input.file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn summary(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "degree {}  convention {}  seed {}  input sha256 {}",
        report.degree,
        report.convention,
        report.seed,
        &report.input_digest[..16]
    );
    for t in &report.tasks {
        let kind = t["task"].as_str().unwrap_or("?");
        let _ = match kind {
            "classify" => writeln!(
                out,
                "classify {}: {} type{}, class C {}, holomorphically nondegenerate {}",
                t["name"].as_str().unwrap_or("?"),
                t["type"].as_str().unwrap_or("?"),
                t["m"]
                    .as_u64()
                    .map(|m| format!(" m = {m}"))
                    .unwrap_or_default(),
                t["class_c"]["status"].as_str().unwrap_or("error"),
                t["holomorphically_nondegenerate"]["status"]
                    .as_str()
                    .unwrap_or("error"),
            ),
            "check-map" => writeln!(
                out,
                "check-map {} : {} -> {}: sends_into {}, CR-transversal {}, trord {}, Jac = {}",
                t["map"].as_str().unwrap_or("?"),
                t["source"].as_str().unwrap_or("?"),
                t["target"].as_str().unwrap_or("?"),
                t["sends_into"]["status"].as_str().unwrap_or("?"),
                t["cr_transversal"]["status"].as_str().unwrap_or("?"),
                t["trord"].as_str().unwrap_or("error"),
                t["jacobian"].as_str().unwrap_or("?"),
            ),
            "prolong" => writeln!(
                out,
                "prolong {} to alpha {}: {} jets, round trip {}, highest jet read {}",
                t["a"].as_str().unwrap_or("?"),
                t["alpha"],
                t["jets"].as_array().map_or(0, |j| j.len()),
                t["round_trip"],
                t["max_jet_accessed"],
            ),
            "example" => writeln!(
                out,
                "[{}] {}: {}",
                if t["agrees"] == true {
                    "ok"
                } else {
                    "MISMATCH"
                },
                t["name"].as_str().unwrap_or("?"),
                t["observed"].as_str().unwrap_or("?"),
            ),
            _ => writeln!(out, "{kind}: {t}"),
        };
    }
    for r in &report.suites {
        let status = match r.status {
            SuiteStatus::Confirmed => "confirmed",
            SuiteStatus::HypothesisNotCertified => "hypothesis not certified",
            SuiteStatus::Inconclusive => "inconclusive",
            SuiteStatus::Falsified => "FALSIFIED",
        };
        let _ = writeln!(out, "{status:>24}  {}  [{}]", r.theorem, r.instance);
    }
    if let Some(res) = &report.remark_convention {
        for r in res {
            let _ = writeln!(
                out,
                "basic example under convention {}: sends_into {:?}",
                r.convention, r.sends_into.status
            );
        }
    }
    for e in &report.errors {
        let _ = writeln!(out, "error: {e}");
    }
    let s = &report.summary;
    if !report.suites.is_empty() || s.errors > 0 {
        let _ = writeln!(
            out,
            "{} confirmed, {} hypothesis not certified, {} inconclusive, {} FALSIFIED, {} errors",
            s.confirmed, s.hypothesis_not_certified, s.inconclusive, s.falsified, s.errors
        );
    }
    out
}

/// Write to stdout, ignoring a closed pipe.
fn write_stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(report: &Report, json: Option<&PathBuf>) -> ExitCode {
    match json {
        Some(p) if p.as_os_str() == "-" => write_stdout(&(report.to_json() + "\n")),
        Some(p) => {
            if let Err(e) = std::fs::write(p, report.to_json() + "\n") {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(1);
            }
            write_stdout(&summary(report));
        }
        None => write_stdout(&summary(report)),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ov = Overrides {
        degree: cli.degree,
        convention: cli.complexify,
        seed: cli.seed,
    };
    let degree = cli.degree.unwrap_or(DEFAULT_DEGREE);
    let convention = cli.complexify.unwrap_or_default();
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let (input, filter) = match &cli.command {
        Command::Classify(i) => (i, TaskFilter::Classify),
        Command::CheckMap(i) => (i, TaskFilter::CheckMap),
        Command::Prolong(i) => (i, TaskFilter::Prolong),
        Command::Run(i) => (i, TaskFilter::All),
        Command::Verify { suite } => {
            let suite = Suite::parse(suite).expect("validated by clap");
            return emit(
                &run::run_suite(suite, degree, convention, seed),
                cli.json.as_ref(),
            );
        }
        Command::Examples => {
            return emit(
                &run::run_examples(degree, convention, seed),
                cli.json.as_ref(),
            )
        }
        Command::PrintGrammar => {
            write_stdout(&format!("{}\n", grammar::GRAMMAR));
            return ExitCode::SUCCESS;
        }
    };
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let doc = match grammar::parse(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    emit(
        &run::run_document(&text, &doc, filter, ov),
        cli.json.as_ref(),
    )
}
