use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use spaceability_cli::{csv, run, CliError, Command, Config, Scenario, Space};

/// Norms, rearrangements, inclusion checks and witness constructions for
/// function spaces on [0, 1].
///
/// Exit status: 0 when the result converged or every claim verified, 2 when
/// inconclusive, 1 on verification failure or input error.
#[derive(Parser)]
#[command(name = "spaceability", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Norm of a function or sequence.
    Norm(Query),
    /// Decreasing rearrangement of a function.
    Rearrange(Query),
    /// Inclusion between two spaces of one family (first in second).
    Check(Query),
    /// Build and verify a witness construction.
    Witness(Query),
    /// Run a JSON scenario file.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Lorentz,
    Marcinkiewicz,
    Orlicz,
    Nakano,
    SeqNakano,
}

#[derive(Args, Default)]
struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write sampled values as `t,value` rows.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct Query {
    /// Construction: spanning, marcinkiewicz, lorentz-escape, orlicz-escape,
    /// orlicz-union, index, nakano-seq, escaping-exponent or nakano-function.
    /// Short codes: 1, 4, 5, 6, 7, 8, 10, 11, union.
    #[arg(long)]
    theorem: Option<String>,
    #[arg(long, value_enum)]
    space: Option<SpaceArg>,
    /// Function: indicator:a,b | powersing:c,s,α,a,b | pow:α, joined by `;`.
    /// Sequences (seq-nakano): terms:c1,c2,... | geom:a,r.
    #[arg(long = "fn", allow_hyphen_values = true)]
    function: Option<String>,
    /// Generator: pow:α | powlog:α,β | exp:p. Repeatable.
    #[arg(long)]
    psi: Vec<String>,
    /// Generator: pow:α | powlog:α,β | exp:p. Repeatable.
    #[arg(long)]
    phi: Vec<String>,
    /// Exponent: const:q | step:q1,t,q2 | affine:q0,q1. Repeatable.
    /// Sequences: const:q | harmonic:limit,amplitude.
    #[arg(long)]
    exponent: Vec<String>,
    /// Sequence weights geom:scale,ratio.
    #[arg(long)]
    weights: Option<String>,
    /// Target exponent value of the union construction.
    #[arg(long)]
    r: Option<f64>,
    /// Relative tolerance a converged result must meet.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Octaves for norms, truncation size for witnesses.
    #[arg(long)]
    horizon: Option<usize>,
    /// Partial integrals beyond this certify divergence.
    #[arg(long)]
    divergence_threshold: Option<f64>,
    #[command(flatten)]
    output: Output,
}

fn scenario(command: Command, q: Query) -> Scenario {
    let text = |v: Vec<String>| v.into_iter().map(Value::String).collect();
    Scenario {
        command,
        space: q.space.map(|s| match s {
            SpaceArg::Lorentz => Space::Lorentz,
            SpaceArg::Marcinkiewicz => Space::Marcinkiewicz,
            SpaceArg::Orlicz => Space::Orlicz,
            SpaceArg::Nakano => Space::Nakano,
            SpaceArg::SeqNakano => Space::SeqNakano,
        }),
        theorem: q.theorem,
        function: q.function.map(Value::String),
        psi: text(q.psi),
        phi: text(q.phi),
        exponent: text(q.exponent),
        weights: q.weights,
        r: q.r,
        config: Config { tolerance: q.tolerance, horizon: q.horizon, divergence_threshold: q.divergence_threshold },
        out: q.output.out.map(|p| p.display().to_string()),
        csv: q.output.csv.map(|p| p.display().to_string()),
    }
}

fn load(path: &PathBuf, output: Output) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut s = Scenario::from_json(&text)?;
    // flags override the file
    if let Some(p) = output.out {
        s.out = Some(p.display().to_string());
    }
    if let Some(p) = output.csv {
        s.csv = Some(p.display().to_string());
    }
    Ok(s)
}

fn write(path: &str, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::Io(format!("{path}: {e}")))
}

fn execute(s: &Scenario) -> Result<i32, CliError> {
    let out = run(s)?;
    let json = serde_json::to_string_pretty(&out.report).expect("reports serialize");
    match &s.out {
        Some(path) => write(path, &(json + "\n"))?,
        // a closed pipe downstream is not an error of ours
        None => match writeln!(std::io::stdout(), "{json}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(CliError::Io(e.to_string())),
            _ => {}
        },
    }
    if let Some(path) = &s.csv {
        let rows = out.samples.as_deref().ok_or_else(|| CliError::Schema("this command has no CSV output".into()))?;
        write(path, &csv(rows))?;
    }
    Ok(out.exit)
}

fn main() -> ExitCode {
    // clap's own usage status is 2, which here means inconclusive
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let scenario = match cli.command {
        Cmd::Norm(q) => Ok(scenario(Command::Norm, q)),
        Cmd::Rearrange(q) => Ok(scenario(Command::Rearrange, q)),
        Cmd::Check(q) => Ok(scenario(Command::Check, q)),
        Cmd::Witness(q) => Ok(scenario(Command::Witness, q)),
        Cmd::Run { scenario, output } => load(&scenario, output),
    };
    match scenario.and_then(|s| execute(&s)) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
