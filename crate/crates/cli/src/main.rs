use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use toric_bridge::{corpus, Error, Result};
use toric_bridge_cli::commands::{self, Options, Outcome};
use toric_bridge_cli::instance::{nef_instance, product_projective_instance, Instance};
use toric_bridge_cli::*;

#[derive(Parser, Debug)]
#[command(name = "toric-bridge", version, about = "Reflexive Gorenstein cones, degree decompositions and determinantal bridges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Decomposition pair, 1-based (default 1 2).
    #[arg(long, global = true, num_args = 2, value_names = ["I", "J"])]
    pair: Option<Vec<usize>>,
    /// Number of points sampled on the determinantal locus.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Prime for coefficients and sampling [default: 10007, or the instance's field].
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Random seed [default: 0, or the instance's seed].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Exit with status 2 when the report carries warnings.
    #[arg(long, global = true)]
    strict: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Add wall-clock timing to the report (breaks byte stability).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polar dual of a polytope and a reflexivity certificate.
    Dualize { input: PathBuf },
    /// Dual nef-partition.
    Nefdual { input: PathBuf },
    /// Reflexive Gorenstein cone pair.
    Cone { input: PathBuf },
    /// Decompositions of the dual degree element with block partitions.
    Decompose { input: PathBuf },
    /// Bridge matrices and determinants for a pair of decompositions.
    Bridge { input: PathBuf },
    /// Sampling evidence for birationality of a pair.
    Verify { input: PathBuf },
    /// Dual nef-partition, cone, decompositions, bridge and evidence.
    Pipeline { input: PathBuf },
    /// Emit a built-in instance file.
    Example {
        /// product-projective, two-segment, square, p3-split or p4-three-parts.
        name: String,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        t: usize,
    },
}

fn read_input(path: &PathBuf) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_end(&mut buf).map(|_| ())
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_end(&mut buf).map(|_| ()))
    };
    res.map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    Ok(buf)
}

fn parse(bytes: &[u8]) -> Result<Instance> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::Input("input is not UTF-8".into()))?;
    Instance::parse(text)
}

fn example(name: &str, n: usize, t: usize) -> Result<Outcome> {
    let inst = match name {
        "product-projective" => product_projective_instance(n, t)?,
        other => match corpus::by_name(other) {
            Some(np) => nef_instance(&np?)?,
            None => {
                return Err(Error::Input(format!(
                    "unknown example {other:?}; known: product-projective, {}",
                    corpus::NAMES.join(", ")
                )))
            }
        },
    };
    Ok(Outcome { result: inst.to_json(), warnings: Vec::new(), failure: None })
}

fn emit(text: &str, output: &Option<PathBuf>) -> std::result::Result<(), String> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let c = &cli.common;
    let pair = match c.pair.as_deref() {
        Some([i, j]) => Some((*i, *j)),
        _ => None,
    };
    let opts = Options { pair, samples: c.samples, prime: c.prime, seed: c.seed };
    let started = Instant::now();

    let (name, input) = match &cli.command {
        Command::Dualize { input } => ("dualize", Some(input)),
        Command::Nefdual { input } => ("nefdual", Some(input)),
        Command::Cone { input } => ("cone", Some(input)),
        Command::Decompose { input } => ("decompose", Some(input)),
        Command::Bridge { input } => ("bridge", Some(input)),
        Command::Verify { input } => ("verify", Some(input)),
        Command::Pipeline { input } => ("pipeline", Some(input)),
        Command::Example { .. } => ("example", None),
    };
    let mut echo = json!({"name": name});
    if let Some(p) = input {
        echo["input"] = json!(p.display().to_string());
    }
    if matches!(name, "bridge" | "verify" | "pipeline") {
        echo["pair"] = json!(opts.pair.map(|(i, j)| [i, j]));
        echo["prime"] = json!(opts.prime);
        echo["seed"] = json!(opts.seed);
    }
    if matches!(name, "verify" | "pipeline") {
        echo["samples"] = json!(opts.samples);
    }

    let run = || -> Result<(Option<String>, Outcome)> {
        if let Command::Example { name, n, t } = &cli.command {
            return Ok((None, example(name, *n, *t)?));
        }
        let bytes = read_input(input.expect("non-example commands take an input"))?;
        let inst = parse(&bytes)?;
        let outcome = match &cli.command {
            Command::Dualize { .. } => commands::dualize(&inst)?,
            Command::Nefdual { .. } => commands::nefdual(&inst)?,
            Command::Cone { .. } => commands::cone(&inst)?,
            Command::Decompose { .. } => commands::decompose(&inst)?,
            Command::Bridge { .. } => commands::bridge(&inst, &opts)?,
            Command::Verify { .. } => commands::verify(&inst, &opts)?,
            Command::Pipeline { .. } => commands::pipeline(&inst, &opts)?,
            Command::Example { .. } => unreachable!(),
        };
        Ok((Some(digest(&bytes)), outcome))
    };

    match run() {
        Ok((digest, outcome)) => {
            let report = if name == "example" {
                outcome.result
            } else {
                let mut r = envelope(echo, digest, outcome.result, &outcome.warnings);
                if c.timing {
                    r["timing_ms"] = Value::from(started.elapsed().as_millis() as u64);
                }
                r
            };
            if let Err(e) = emit(&render(&report, c.pretty), &c.output) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            if let Some(err) = outcome.failure {
                eprintln!("error: {err}");
                return ExitCode::from(exit_code(&err));
            }
            if c.strict && !outcome.warnings.is_empty() {
                for w in &outcome.warnings {
                    eprintln!("warning: {w}");
                }
                return ExitCode::from(EXIT_STRICT);
            }
            ExitCode::from(EXIT_OK)
        }
        Err(err) => {
            let kind = if err.is_internal() { "internal" } else { "input" };
            let report = json!({"command": echo, "error": {"kind": kind, "message": err.to_string()}});
            eprint!("{}", render(&report, c.pretty));
            ExitCode::from(exit_code(&err))
        }
    }
}
