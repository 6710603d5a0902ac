mod args;
mod commands;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use args::{Cli, Command};
use commands::Output;
use fingap_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("{0}")]
    Io(String),
    #[error("bad JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for malformed input, 1 for a computation that did not succeed.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Json(_) => 2,
            CliError::Io(_) => 1,
            CliError::Engine(e) => match e {
                Error::InvalidInput(_)
                | Error::InvalidGaps { .. }
                | Error::Parse { .. }
                | Error::InvalidLattice(_)
                | Error::InvalidConfiguration(_)
                | Error::NonPolynomial(_) => 2,
                _ => 1,
            },
        }
    }
}

#[derive(Serialize, Deserialize, Debug)]
struct OutputRecord {
    name: String,
    sha256: String,
    bytes: usize,
}

#[derive(Serialize, Deserialize, Debug)]
struct RunManifest {
    command: String,
    /// Arguments after the program name, as given.
    parameters: Vec<String>,
    engine_version: String,
    seed: u64,
    outputs: Vec<OutputRecord>,
    wall_time: f64,
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Indicial(_) => "indicial",
        Command::HomogCheck(_) => "homog-check",
        Command::Constraints(_) => "constraints",
        Command::Locus(_) => "locus",
        Command::Reconstruct(_) => "reconstruct",
        Command::Jtable(_) => "jtable",
        Command::Commute(_) => "commute",
        Command::Cm2Residuals(_) => "cm2-residuals",
        Command::Cm3Crit(_) => "cm3-crit",
        Command::Cryst3Crit(_) => "cryst3-crit",
        Command::InozemtsevGrad(_) => "inozemtsev-grad",
        Command::Monodromy(_) => "monodromy",
        Command::VerifyPaper(_) => "verify-paper",
        Command::Replay(_) => "replay",
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    use commands as c;
    match &cli.command {
        Command::Indicial(a) => c::indicial(a),
        Command::HomogCheck(a) => c::homog_check(a),
        Command::Constraints(a) => c::constraints(a),
        Command::Locus(a) => c::locus(a),
        Command::Reconstruct(a) => c::reconstruct(a),
        Command::Jtable(a) => c::jtable(a),
        Command::Commute(a) => c::commute(a),
        Command::Cm2Residuals(a) => c::cm2_residuals(a),
        Command::Cm3Crit(a) => c::cm3_crit(a),
        Command::Cryst3Crit(a) => c::cryst3_crit(a),
        Command::InozemtsevGrad(a) => c::inozemtsev_grad(a),
        Command::Monodromy(a) => c::monodromy(a),
        Command::VerifyPaper(a) => c::verify_paper(a, cli.seed),
        Command::Replay(a) => replay(&a.from),
    }
}

/// Drop `--output`/`--manifest` (and their values) from an argument list.
fn strip_io_flags(params: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for p in params {
        if skip {
            skip = false;
        } else if p == "--output" || p == "--manifest" {
            skip = true;
        } else if !(p.starts_with("--output=") || p.starts_with("--manifest=")) {
            out.push(p.clone());
        }
    }
    out
}

fn replay(path: &str) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let manifest: RunManifest = serde_json::from_str(&text)?;
    let argv = std::iter::once("fingap".to_string()).chain(strip_io_flags(&manifest.parameters));
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(format!("stored arguments: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::Usage("a manifest of a replay cannot be replayed".into()));
    }
    let rerun = run(&cli)?;
    let hash = sha256_hex(&rerun.text);
    let expected = manifest.outputs.first().map(|o| o.sha256.as_str()).unwrap_or("");
    let same = hash == expected;
    let mut report = String::new();
    report.push_str(&format!("command: {}\n", manifest.command));
    report.push_str(&format!("recorded version: {}, current: {}\n", manifest.engine_version, fingap_core::VERSION));
    report.push_str(&format!("recorded sha256: {expected}\nreplayed sha256: {hash}\n"));
    report.push_str(if same { "identical\n" } else { "DIFFERENT\n" });
    Ok(Output { text: report, mismatch: !same })
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let name = match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.text) {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(1);
            }
            path.clone()
        }
        None => {
            print!("{}", out.text);
            "stdout".to_string()
        }
    };
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            command: command_name(&cli.command).to_string(),
            parameters: std::env::args().skip(1).collect(),
            engine_version: fingap_core::VERSION.to_string(),
            seed: cli.seed,
            outputs: vec![OutputRecord { name, sha256: sha256_hex(&out.text), bytes: out.text.len() }],
            wall_time: commands::seconds(start.elapsed()),
        };
        let written = output::json(&manifest)
            .and_then(|s| std::fs::write(path, s).map_err(|e| CliError::Io(format!("{path}: {e}"))));
        if let Err(e) = written {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    if out.mismatch {
        eprintln!("verification failed");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
