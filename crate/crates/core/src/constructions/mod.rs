//! Witness constructions. Each operation builds the explicit objects of a
//! spaceability argument and re-verifies every claim about them through the
//! norm engines, collecting the outcomes in a [`WitnessReport`].
//!
//! Infinite constructions are truncated at the horizons recorded in the report.

mod nakano;
mod orlicz;

pub use nakano::{
    escaping_exponent, nakano_function_witness, nakano_seq_probe_terms, nakano_seq_witness, EscapingExponent,
    NakanoFunctionOptions, NakanoSeqOptions,
};
pub use orlicz::{b_rule, b_rule_bound, index_witness, orlicz_escape, orlicz_union_witness, IndexOptions};

use crate::error::{Error, Result};
use crate::funcrep::{decreasing_rearrangement, PiecewiseFunction};
use crate::generators::{ConcaveGenerator, EscapeGenerator};
use crate::inclusions::{classify_decay, small_o_at_zero, LimitKind, LimitVerdict};
use crate::norms::{lorentz_norm, marcinkiewicz_norm, NormResult, Status};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// What a claim requires of its outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "expect", rename_all = "snake_case")]
pub enum Expect {
    Converged,
    /// Converged with `|value − target| ≤ tol`.
    ConvergedNear {
        target: f64,
        tol: f64,
    },
    /// Converged with `value ≤ bound`.
    ConvergedAtMost {
        bound: f64,
    },
    Diverged,
    TendsToZero,
    /// A check `value ≤ bound` or a flag that must be true.
    Holds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Norm(NormResult),
    Limit(LimitVerdict),
    Check {
        #[serde(with = "crate::serde_ext")]
        value: f64,
        #[serde(with = "crate::serde_ext")]
        bound: f64,
    },
    Flag {
        value: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub description: String,
    pub expected: Expect,
    pub outcome: Outcome,
    pub satisfied: bool,
}

impl Claim {
    pub fn new(description: impl Into<String>, expected: Expect, outcome: Outcome) -> Self {
        let satisfied = Self::judge(expected, &outcome);
        Claim { description: description.into(), expected, outcome, satisfied }
    }

    pub fn norm(description: impl Into<String>, expected: Expect, r: NormResult) -> Self {
        Self::new(description, expected, Outcome::Norm(r))
    }

    pub fn check(description: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(description, Expect::Holds, Outcome::Check { value, bound })
    }

    pub fn flag(description: impl Into<String>, value: bool) -> Self {
        Self::new(description, Expect::Holds, Outcome::Flag { value })
    }

    fn judge(expected: Expect, outcome: &Outcome) -> bool {
        match (expected, outcome) {
            (Expect::Converged, Outcome::Norm(r)) => r.status == Status::Converged,
            (Expect::ConvergedNear { target, tol }, Outcome::Norm(r)) => {
                r.status == Status::Converged && (r.value - target).abs() <= tol
            }
            (Expect::ConvergedAtMost { bound }, Outcome::Norm(r)) => r.status == Status::Converged && r.value <= bound,
            (Expect::Diverged, Outcome::Norm(r)) => r.status == Status::Diverged,
            (Expect::TendsToZero, Outcome::Limit(v)) => v.kind == LimitKind::TendsToZero,
            (Expect::Holds, Outcome::Check { value, bound }) => value <= bound,
            (Expect::Holds, Outcome::Flag { value }) => *value,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    AllVerified,
    Failures(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub theorem: String,
    pub objects: Value,
    pub claims: Vec<Claim>,
    pub horizon: BTreeMap<String, f64>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl WitnessReport {
    pub(crate) fn assemble(
        theorem: &str,
        objects: Map<String, Value>,
        claims: Vec<Claim>,
        horizon: &[(&str, f64)],
        notes: Vec<String>,
    ) -> Self {
        let failed: Vec<String> = claims.iter().filter(|c| !c.satisfied).map(|c| c.description.clone()).collect();
        let verdict = if failed.is_empty() { Verdict::AllVerified } else { Verdict::Failures(failed) };
        WitnessReport {
            theorem: theorem.to_string(),
            objects: Value::Object(objects),
            claims,
            horizon: horizon.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            verdict,
            notes,
        }
    }

    pub fn all_verified(&self) -> bool {
        self.verdict == Verdict::AllVerified
    }

    pub fn claim(&self, prefix: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.description.starts_with(prefix))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub(crate) fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// `x_k = T_{a_k, r_k}(x)` with `a_k = 1 − 2^{1−k}`, `r_k = 2^{−k}`, `k = 1..=n`.
pub fn spanning_sequence(x: &PiecewiseFunction, n: usize) -> Result<Vec<PiecewiseFunction>> {
    if x.is_zero() {
        return Err(Error::Degenerate("spanning sequence of the zero function".into()));
    }
    (1..=n as i32).map(|k| x.translate_dilate(1.0 - 2f64.powi(1 - k), 2f64.powi(-k))).collect()
}

/// The disjoint sequence together with the checks the spanning argument uses:
/// disjoint supports tiling `(0, 1 − 2^{−n}]`, the dilation law for supports,
/// and `|Σ λ_k x_k| ≥ |λ_i| |x_i|` at sample points.
pub fn spanning_report(x: &PiecewiseFunction, n: usize) -> Result<WitnessReport> {
    let xs = spanning_sequence(x, n)?;
    let lam_x = x.support_measure();
    let mut claims = Vec::new();

    let disjoint = xs.iter().enumerate().all(|(i, xi)| {
        let (a, b) = (1.0 - 2f64.powi(1 - (i as i32 + 1)), 1.0 - 2f64.powi(-(i as i32 + 1)));
        xi.segments().iter().all(|s| s.lo >= a && s.hi <= b)
    });
    claims.push(Claim::flag("supports lie in pairwise disjoint dyadic intervals", disjoint));
    let tiles: Vec<(f64, f64)> = (1..=n as i32).map(|k| (1.0 - 2f64.powi(1 - k), 1.0 - 2f64.powi(-k))).collect();
    let gap = tiles.windows(2).map(|w| (w[1].0 - w[0].1).abs()).fold(0.0, f64::max);
    let cover = (tiles.iter().map(|t| t.1 - t.0).sum::<f64>() - (1.0 - 2f64.powi(-(n as i32)))).abs();
    claims.push(Claim::check("intervals tile (0, 1 - 2^-n] without gap or overlap", gap.max(cover), 1e-15));
    claims.push(Claim::flag("every term is nonzero", xs.iter().all(|xi| !xi.is_zero())));
    let law = xs
        .iter()
        .enumerate()
        .map(|(i, xi)| (xi.support_measure() - 2f64.powi(-(i as i32 + 1)) * lam_x).abs())
        .fold(0.0, f64::max);
    claims.push(Claim::check("support measure of x_k equals 2^-k times that of x", law, 1e-14));

    let coeffs: Vec<f64> = (1..=n).map(|k| if k % 2 == 0 { -1.0 } else { 1.0 } / k as f64).collect();
    let sum = crate::funcrep::disjoint_sum(&xs, &coeffs)?;
    let mut worst: f64 = 0.0;
    for (i, xi) in xs.iter().enumerate() {
        for t in xi.breakpoints().windows(2).flat_map(|w| [0.25, 0.5, 0.75].map(|f| w[0] + f * (w[1] - w[0]))) {
            let lhs = sum.evaluate(t).abs();
            let rhs = coeffs[i].abs() * xi.evaluate(t).abs();
            worst = worst.max(rhs - lhs);
        }
    }
    claims.push(Claim::check("|sum of l_k x_k| >= |l_i| |x_i| at sample points", worst, 1e-12 * x_scale(x)));

    let mut objects = Map::new();
    objects.insert("x".into(), to_value(x));
    objects.insert("sequence".into(), to_value(&xs));
    objects.insert("coefficients".into(), to_value(&coeffs));
    Ok(WitnessReport::assemble("spanning", objects, claims, &[("terms", n as f64)], Vec::new()))
}

fn x_scale(x: &PiecewiseFunction) -> f64 {
    x.breakpoints().windows(2).map(|w| x.evaluate(0.5 * (w[0] + w[1])).abs()).fold(1.0, f64::max)
}

/// `ψ′` lies on the unit sphere of `M(ψ)` but outside every `M(φ)` with
/// `φ ≪ ψ`.
pub fn marcinkiewicz_witness(psi: &ConcaveGenerator, phis: &[ConcaveGenerator]) -> Result<WitnessReport> {
    let verdicts: Vec<LimitVerdict> = phis.iter().map(|phi| small_o_at_zero(phi, psi)).collect();
    let violators: Vec<String> = phis
        .iter()
        .zip(&verdicts)
        .filter(|(_, v)| !v.tends_to_zero())
        .map(|(phi, v)| format!("{} ({:?})", serde_json::to_string(phi).unwrap_or_default(), v.kind))
        .collect();
    if !violators.is_empty() {
        return Err(Error::Precondition(format!("not small-o of psi at 0: {}", violators.join(", "))));
    }
    let dpsi = psi.derivative()?;
    let mut claims = vec![Claim::norm(
        "M(psi)-norm of psi' equals 1",
        Expect::ConvergedNear { target: 1.0, tol: 1e-6 },
        marcinkiewicz_norm(&dpsi, psi),
    )];
    for (i, phi) in phis.iter().enumerate() {
        claims.push(Claim::new(
            format!("phi[{i}] is small-o of psi at 0"),
            Expect::TendsToZero,
            Outcome::Limit(verdicts[i].clone()),
        ));
        claims.push(Claim::norm(
            format!("M(phi[{i}])-norm of psi' is infinite"),
            Expect::Diverged,
            marcinkiewicz_norm(&dpsi, phi),
        ));
    }
    let mut objects = Map::new();
    objects.insert("psi".into(), to_value(psi));
    objects.insert("phis".into(), to_value(&phis));
    objects.insert("witness".into(), to_value(&dpsi));
    Ok(WitnessReport::assemble("marcinkiewicz", objects, claims, &[("octaves", 60.0)], Vec::new()))
}

/// Builds `φ(t) = ∫₀ᵗ ψ′ F^{−1/2}` with `F(s) = ∫₀ˢ x*ψ′`, so that `x ∈ Λ(φ)`
/// while `ψ ≪ φ`.
pub fn lorentz_escape(x: &PiecewiseFunction, psi: &ConcaveGenerator) -> Result<(WitnessReport, ConcaveGenerator)> {
    if x.is_zero() {
        return Err(Error::Degenerate("escape from the zero function".into()));
    }
    let base_norm = lorentz_norm(x, psi);
    if !base_norm.is_converged() {
        return Err(Error::Precondition(format!("Lambda(psi)-norm of x is {:?}", base_norm.status)));
    }
    let xs = decreasing_rearrangement(x);
    let esc = EscapeGenerator::new(xs, psi.clone())?;
    let f1 = esc.f_total();
    let bound = 2.0 * f1.sqrt() * (1.0 + 1e-6);

    let mut claims = vec![Claim::norm("Lambda(psi)-norm of x is finite", Expect::Converged, base_norm)];
    let grid: Vec<f64> = (0..=240).map(|j| esc.y(2f64.powf(-(j as f64) / 4.0))).collect();
    claims.push(Claim::flag("y is nonincreasing", grid.windows(2).all(|w| w[1] >= w[0])));
    let inv: Vec<f64> = (1..=60).map(|k| esc.f_at(2f64.powi(-k)).sqrt()).collect();
    let (kind, trend) = classify_decay(&inv);
    claims.push(Claim::new(
        "y(2^-k) grows without bound",
        Expect::TendsToZero,
        Outcome::Limit(LimitVerdict { kind, samples: inv, trend, exact: None }),
    ));
    let phi = ConcaveGenerator::Tabulated(Box::new(esc));
    claims.push(Claim::new(
        "psi is small-o of phi at 0",
        Expect::TendsToZero,
        Outcome::Limit(small_o_at_zero(psi, &phi)),
    ));
    claims.push(Claim::norm(
        "Lambda(phi)-norm of x is at most 2 sqrt(F(1))",
        Expect::ConvergedAtMost { bound },
        lorentz_norm(x, &phi),
    ));

    let mut objects = Map::new();
    objects.insert("x".into(), to_value(x));
    objects.insert("psi".into(), to_value(psi));
    objects.insert("f_total".into(), json!(f1));
    objects.insert(
        "phi_samples".into(),
        to_value(&(0..=20).map(|k| (2f64.powi(-2 * k), phi.value(2f64.powi(-2 * k)))).collect::<Vec<_>>()),
    );
    let report = WitnessReport::assemble("lorentz-escape", objects, claims, &[("octaves", 64.0)], Vec::new());
    Ok((report, phi))
}
