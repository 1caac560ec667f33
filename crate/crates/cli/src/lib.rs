//! Scenario runner behind the `spaceability` binary.
//!
//! Every invocation, whether built from flags or read from a scenario file,
//! becomes one [`Scenario`]. All descriptors are parsed before any
//! computation starts, so schema errors never follow partial work.

pub mod descriptor;

use descriptor::Spec;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use spaceability::constructions::{
    escaping_exponent, index_witness, lorentz_escape, marcinkiewicz_witness, nakano_function_witness,
    nakano_seq_witness, orlicz_escape, orlicz_union_witness, spanning_report, IndexOptions, NakanoFunctionOptions,
    NakanoSeqOptions, Outcome,
};
use spaceability::generators::{ConcaveGenerator, ConvexGenerator, ExponentFunction};
use spaceability::inclusions::{
    essential_range, lorentz_inclusion, marcinkiewicz_inclusion, nakano_inclusion, orlicz_inclusion, LimitKind,
};
use spaceability::norms::{
    lorentz_norm_with, luxemburg_norm_with, marcinkiewicz_norm_with, nakano_norm_with, seq_nakano_norm_with,
    NormConfig, WeightedSeq,
};
use spaceability::{decreasing_rearrangement, NormResult, PiecewiseFunction, Status, WitnessReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed scenario or descriptor; nothing was computed.
    #[error("schema error: {0}")]
    Schema(String),
    /// Well-formed input that violates a mathematical precondition.
    #[error("precondition error: {0}")]
    Precondition(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<spaceability::Error> for CliError {
    fn from(e: spaceability::Error) -> Self {
        match e {
            spaceability::Error::Precondition(m) => CliError::Precondition(m),
            e => CliError::Precondition(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Norm,
    Rearrange,
    Check,
    Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    Lorentz,
    Marcinkiewicz,
    Orlicz,
    Nakano,
    SeqNakano,
}

/// Numeric knobs. Unset fields keep the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub tolerance: Option<f64>,
    /// Octaves for norms; the truncation size of a witness otherwise.
    pub horizon: Option<usize>,
    pub divergence_threshold: Option<f64>,
}

impl Config {
    fn norm_config(&self) -> NormConfig {
        let mut c = NormConfig::default();
        if let Some(t) = self.tolerance {
            c.tolerance = t;
        }
        if let Some(h) = self.horizon {
            c.octaves = h;
        }
        if let Some(d) = self.divergence_threshold {
            c.divergence_threshold = d;
        }
        c
    }
}

/// One unit of work. Descriptor fields hold mini-language strings or the JSON
/// schema forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub command: Command,
    #[serde(default)]
    pub space: Option<Space>,
    #[serde(default)]
    pub theorem: Option<String>,
    #[serde(default, rename = "fn")]
    pub function: Option<Value>,
    #[serde(default)]
    pub psi: Vec<Value>,
    #[serde(default)]
    pub phi: Vec<Value>,
    #[serde(default)]
    pub exponent: Vec<Value>,
    /// Weights of a sequence space, `geom:scale,ratio`.
    #[serde(default)]
    pub weights: Option<String>,
    /// Target exponent value for the union construction.
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default)]
    pub config: Config,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub csv: Option<String>,
}

impl Scenario {
    pub fn new(command: Command) -> Self {
        Scenario {
            command,
            space: None,
            theorem: None,
            function: None,
            psi: Vec::new(),
            phi: Vec::new(),
            exponent: Vec::new(),
            weights: None,
            r: None,
            config: Config::default(),
            out: None,
            csv: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(format!("scenario: {e}")))
    }
}

/// Result of a run: the JSON report, optional CSV rows and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: Value,
    pub samples: Option<Vec<(f64, f64)>>,
    pub exit: i32,
}

const CSV_POINTS: usize = 1000;
/// Sets summed analytically by the union construction when no horizon is set.
const UNION_SETS: usize = 4096;

fn one(specs: &[Value], what: &str) -> Result<Spec, CliError> {
    match specs {
        [v] => Ok(Spec::from_value(v)),
        [] => Err(CliError::Schema(format!("missing --{what}"))),
        _ => Err(CliError::Schema(format!("expected exactly one --{what}"))),
    }
}

fn two(specs: &[Value], what: &str) -> Result<(Spec, Spec), CliError> {
    match specs {
        [a, b] => Ok((Spec::from_value(a), Spec::from_value(b))),
        _ => Err(CliError::Schema(format!("expected two --{what} values, got {}", specs.len()))),
    }
}

fn function(s: &Scenario) -> Result<PiecewiseFunction, CliError> {
    Spec::from_value(s.function.as_ref().ok_or_else(|| CliError::Schema("missing --fn".into()))?).function()
}

fn all<T>(specs: &[Value], parse: impl Fn(&Spec) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    specs.iter().map(|v| parse(&Spec::from_value(v))).collect()
}

fn norm_exit(r: &NormResult) -> i32 {
    match r.status {
        Status::Converged => 0,
        Status::Inconclusive => 2,
        _ => 1,
    }
}

fn witness_exit(r: &WitnessReport) -> i32 {
    if r.all_verified() {
        return 0;
    }
    let open = r.claims.iter().filter(|c| !c.satisfied).any(|c| match &c.outcome {
        Outcome::Norm(n) => n.status == Status::Inconclusive,
        Outcome::Limit(l) => l.kind == LimitKind::Inconclusive,
        _ => false,
    });
    if open {
        2
    } else {
        1
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Parsed inputs of a witness run, all validated up front.
enum Witness {
    Spanning(PiecewiseFunction, usize),
    Marcinkiewicz(ConcaveGenerator, Vec<ConcaveGenerator>),
    Lorentz(PiecewiseFunction, ConcaveGenerator),
    Orlicz(PiecewiseFunction, ConvexGenerator),
    Union(ConvexGenerator, Vec<ConvexGenerator>),
    Index(ConvexGenerator, IndexOptions),
    Sequence(NakanoSeqOptions),
    Escaping(PiecewiseFunction, ExponentFunction),
    NakanoUnion(ExponentFunction, f64, NakanoFunctionOptions),
}

fn parse_witness(s: &Scenario) -> Result<Witness, CliError> {
    let theorem = s.theorem.as_deref().ok_or_else(|| CliError::Schema("missing --theorem".into()))?;
    let horizon = s.config.horizon;
    Ok(match theorem {
        "1" | "spanning" => Witness::Spanning(function(s)?, horizon.unwrap_or(8)),
        "4" | "marcinkiewicz" => Witness::Marcinkiewicz(one(&s.psi, "psi")?.concave()?, all(&s.phi, Spec::concave)?),
        "5" | "lorentz-escape" => Witness::Lorentz(function(s)?, one(&s.psi, "psi")?.concave()?),
        "6" | "orlicz-escape" => Witness::Orlicz(function(s)?, one(&s.psi, "psi")?.convex()?),
        "7" | "orlicz-union" => Witness::Union(one(&s.psi, "psi")?.convex()?, all(&s.phi, Spec::convex)?),
        "8" | "index" => {
            let opts = IndexOptions::new(horizon.unwrap_or(3), all(&s.phi, Spec::convex)?);
            Witness::Index(one(&s.psi, "psi")?.convex()?, opts)
        }
        "10" | "nakano-seq" => {
            let mut opts = NakanoSeqOptions::default();
            if let Some(p) = s.exponent.first() {
                let Value::String(text) = p else {
                    return Err(CliError::Schema("sequence exponent must be text (const:p or harmonic:l,a)".into()));
                };
                let probe = descriptor::sequence("terms:1", text, "geom:1,0.5", 1)?;
                opts.exponents = probe.exponents;
            }
            if let Some(w) = &s.weights {
                opts.weights = descriptor::weights(w)?;
            }
            if let Some(h) = horizon {
                opts.terms = h;
            }
            Witness::Sequence(opts)
        }
        "11" | "escaping-exponent" => Witness::Escaping(function(s)?, one(&s.exponent, "exponent")?.exponent()?),
        "union" | "nakano-function" => {
            let p = s.exponent.first().ok_or_else(|| CliError::Schema("missing --exponent".into()))?;
            let p = Spec::from_value(p).exponent()?;
            let probes = all(&s.exponent[1..], Spec::exponent)?;
            let r = s.r.ok_or_else(|| CliError::Schema("missing --r".into()))?;
            let mut opts = NakanoFunctionOptions::new(probes);
            opts.horizon = horizon.unwrap_or(UNION_SETS);
            Witness::NakanoUnion(p, r, opts)
        }
        other => {
            return Err(CliError::Schema(format!("unknown construction `{other}`; see `spaceability witness --help`")))
        }
    })
}

fn run_witness(s: &Scenario) -> Result<RunOutput, CliError> {
    let w = parse_witness(s)?;
    let (report, samples) = match w {
        Witness::Spanning(x, n) => (spanning_report(&x, n)?, None),
        Witness::Marcinkiewicz(psi, phis) => (marcinkiewicz_witness(&psi, &phis)?, None),
        Witness::Lorentz(x, psi) => {
            let (r, phi) = lorentz_escape(&x, &psi)?;
            let samples = (1..=CSV_POINTS).map(|i| i as f64 / CSV_POINTS as f64).map(|t| (t, phi.value(t))).collect();
            (r, Some(samples))
        }
        Witness::Orlicz(x, psi) => (orlicz_escape(&x, &psi)?.0, None),
        Witness::Union(psi, phis) => (orlicz_union_witness(&psi, &phis)?, None),
        Witness::Index(psi, opts) => (index_witness(&psi, &opts)?, None),
        Witness::Sequence(opts) => (nakano_seq_witness(&opts)?, None),
        Witness::NakanoUnion(p, r, opts) => (nakano_function_witness(&p, r, &opts)?, None),
        Witness::Escaping(f, p) => {
            let e = escaping_exponent(&f, &p)?;
            let exit = norm_exit(&e.modular);
            let samples = (1..=CSV_POINTS).map(|i| i as f64 / CSV_POINTS as f64).map(|t| (t, e.q.value(t))).collect();
            return Ok(RunOutput { report: to_value(&e), samples: Some(samples), exit });
        }
    };
    let exit = witness_exit(&report);
    Ok(RunOutput { report: to_value(&report), samples, exit })
}

enum NormInput {
    Lorentz(PiecewiseFunction, ConcaveGenerator),
    Marcinkiewicz(PiecewiseFunction, ConcaveGenerator),
    Orlicz(PiecewiseFunction, ConvexGenerator),
    Nakano(PiecewiseFunction, ExponentFunction),
    Seq(WeightedSeq),
}

fn run_norm(s: &Scenario) -> Result<RunOutput, CliError> {
    let space = s.space.ok_or_else(|| CliError::Schema("missing --space".into()))?;
    let input = match space {
        Space::Lorentz => NormInput::Lorentz(function(s)?, one(&s.phi, "phi")?.concave()?),
        Space::Marcinkiewicz => NormInput::Marcinkiewicz(function(s)?, one(&s.phi, "phi")?.concave()?),
        Space::Orlicz => NormInput::Orlicz(function(s)?, one(&s.psi, "psi")?.convex()?),
        Space::Nakano => NormInput::Nakano(function(s)?, one(&s.exponent, "exponent")?.exponent()?),
        Space::SeqNakano => {
            let x = s.function.as_ref().ok_or_else(|| CliError::Schema("missing --fn".into()))?;
            let seq = match x {
                Value::String(text) => {
                    let p = match one(&s.exponent, "exponent")? {
                        Spec::Text(t) => t,
                        Spec::Json(_) => return Err(CliError::Schema("sequence exponent must be text".into())),
                    };
                    let w = s.weights.as_deref().ok_or_else(|| CliError::Schema("missing --weights".into()))?;
                    descriptor::sequence(text, &p, w, s.config.horizon.unwrap_or(10_000))?
                }
                v => serde_json::from_value(v.clone()).map_err(|e| CliError::Schema(format!("sequence: {e}")))?,
            };
            NormInput::Seq(seq)
        }
    };
    let cfg = s.config.norm_config();
    let (r, f) = match input {
        NormInput::Lorentz(x, phi) => (lorentz_norm_with(&x, &phi, &cfg), Some(x)),
        NormInput::Marcinkiewicz(x, phi) => (marcinkiewicz_norm_with(&x, &phi, &cfg), Some(x)),
        NormInput::Orlicz(x, psi) => (luxemburg_norm_with(&x, &psi, &cfg), Some(x)),
        NormInput::Nakano(x, p) => (nakano_norm_with(&x, &p, &cfg), Some(x)),
        NormInput::Seq(x) => (seq_nakano_norm_with(&x, &cfg), None),
    };
    let samples = f.map(|x| x.sample(CSV_POINTS));
    Ok(RunOutput { exit: norm_exit(&r), report: to_value(&r), samples })
}

fn run_rearrange(s: &Scenario) -> Result<RunOutput, CliError> {
    let x = function(s)?;
    let xs = decreasing_rearrangement(&x);
    let samples = xs.as_function().sample(CSV_POINTS);
    Ok(RunOutput { report: to_value(xs.as_function()), samples: Some(samples), exit: 0 })
}

fn run_check(s: &Scenario) -> Result<RunOutput, CliError> {
    let space = s.space.ok_or_else(|| CliError::Schema("missing --space".into()))?;
    // the first space is tested for inclusion in the second
    let report = match space {
        Space::Lorentz | Space::Marcinkiewicz => {
            let (a, b) = two(&s.phi, "phi")?;
            let (a, b) = (a.concave()?, b.concave()?);
            if space == Space::Lorentz {
                lorentz_inclusion(&a, &b)
            } else {
                marcinkiewicz_inclusion(&a, &b)
            }
        }
        Space::Orlicz => {
            let (a, b) = two(&s.psi, "psi")?;
            orlicz_inclusion(&a.convex()?, &b.convex()?)
        }
        Space::Nakano => {
            let (a, b) = two(&s.exponent, "exponent")?;
            let (p, q) = (a.exponent()?, b.exponent()?);
            let holds = nakano_inclusion(&q, &p);
            let report = serde_json::json!({
                "holds": holds,
                "range_first": essential_range(&p),
                "range_second": essential_range(&q),
            });
            return Ok(RunOutput { report, samples: None, exit: if holds { 0 } else { 1 } });
        }
        Space::SeqNakano => return Err(CliError::Schema("check does not support seq-nakano".into())),
    };
    let exit = match report.holds {
        Some(true) => 0,
        Some(false) => 1,
        None => 2,
    };
    Ok(RunOutput { report: to_value(&report), samples: None, exit })
}

/// Runs one scenario. Errors are input or precondition failures.
pub fn run(s: &Scenario) -> Result<RunOutput, CliError> {
    match s.command {
        Command::Norm => run_norm(s),
        Command::Rearrange => run_rearrange(s),
        Command::Check => run_check(s),
        Command::Witness => run_witness(s),
    }
}

/// `t,value` rows with a header.
pub fn csv(samples: &[(f64, f64)]) -> String {
    let mut out = String::from("t,value\n");
    for (t, v) in samples {
        out.push_str(&format!("{t},{v}\n"));
    }
    out
}
