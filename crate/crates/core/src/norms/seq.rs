//! Weighted Nakano sequence spaces `ℓ_{(p_n)}(w_n)`.
//!
//! Coefficients are stored as `ln|x_n|` so that terms like `(j·w_k)^{−1/q}` with
//! `w_k = 2^{−k}` and `k` in the hundreds of thousands stay representable.

use super::{modular_bisection, Evidence, NormConfig, NormResult, Status};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum ExponentRule {
    /// `p_n = p`.
    Constant { p: f64 },
    /// `p_n = limit + amplitude/n`.
    Harmonic { limit: f64, amplitude: f64 },
}

impl ExponentRule {
    pub fn at(&self, n: u64) -> f64 {
        match self {
            ExponentRule::Constant { p } => *p,
            ExponentRule::Harmonic { limit, amplitude } => limit + amplitude / n.max(1) as f64,
        }
    }

    /// `(inf p_n, sup p_n)` over `n ≥ 1`.
    pub fn range(&self) -> (f64, f64) {
        match self {
            ExponentRule::Constant { p } => (*p, *p),
            ExponentRule::Harmonic { limit, amplitude } => {
                let first = limit + amplitude;
                (limit.min(first), limit.max(first))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum WeightRule {
    /// `w_n = scale · ratio^n`.
    Geometric { scale: f64, ratio: f64 },
}

impl WeightRule {
    pub fn ln_at(&self, n: u64) -> f64 {
        match self {
            WeightRule::Geometric { scale, ratio } => scale.ln() + n as f64 * ratio.ln(),
        }
    }

    /// Certifies `Σ w_n < ∞` by the geometric comparison.
    pub fn certify(&self) -> Result<f64> {
        match self {
            WeightRule::Geometric { scale, ratio } => {
                if !(*scale > 0.0 && *ratio > 0.0 && *ratio < 1.0) {
                    return Err(Error::Precondition(format!(
                        "weights scale·ratio^n need scale > 0 and 0 < ratio < 1, got ({scale}, {ratio})"
                    )));
                }
                Ok(scale * ratio / (1.0 - ratio))
            }
        }
    }
}

/// Bound on the part of the modular not listed explicitly, at scale `s = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum TailRule {
    Zero,
    /// Dominated by `Σ_{i≥0} e^{ln_first + i·ln_ratio}` with `ln_ratio < 0`.
    Geometric {
        ln_first: f64,
        ln_ratio: f64,
    },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSeq {
    /// `(n, ln|x_n|)` for the explicit nonzero terms, `n ≥ 1`.
    pub terms: Vec<(u64, f64)>,
    pub exponents: ExponentRule,
    pub weights: WeightRule,
    pub tail: TailRule,
}

impl WeightedSeq {
    pub fn new(terms: Vec<(u64, f64)>, exponents: ExponentRule, weights: WeightRule, tail: TailRule) -> Result<Self> {
        weights.certify()?;
        if exponents.range().0 < 1.0 {
            return Err(Error::Precondition("sequence exponents must be >= 1".into()));
        }
        if let TailRule::Geometric { ln_ratio, .. } = tail {
            if ln_ratio >= 0.0 {
                return Err(Error::Precondition("geometric tail needs ratio < 1".into()));
            }
        }
        Ok(WeightedSeq { terms, exponents, weights, tail })
    }

    /// Single term `x_n = c`.
    pub fn single(n: u64, c: f64, exponents: ExponentRule, weights: WeightRule) -> Result<Self> {
        Self::new(vec![(n, c.abs().ln())], exponents, weights, TailRule::Zero)
    }

    /// `ln(|x_n/s|^{p_n} w_n)` for each explicit term.
    pub fn ln_terms(&self, s: f64) -> impl Iterator<Item = f64> + '_ {
        let ls = s.ln();
        self.terms.iter().map(move |&(n, la)| self.exponents.at(n) * (la - ls) + self.weights.ln_at(n))
    }

    fn tail_bound(&self, s: f64) -> Option<f64> {
        match self.tail {
            TailRule::Zero => Some(0.0),
            TailRule::Unknown => None,
            TailRule::Geometric { ln_first, ln_ratio } => {
                let (pmin, pmax) = self.exponents.range();
                let scale = s.powf(-pmin).max(s.powf(-pmax));
                Some(ln_first.exp() / -ln_ratio.exp_m1() * scale)
            }
        }
    }
}

/// `ln Σ e^{l_i}` in a fixed summation order.
pub(crate) fn log_sum_exp(ls: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = ls.clone().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + ls.map(|l| (l - m).exp()).sum::<f64>().ln()
}

/// `Σ |x_n/s|^{p_n} w_n`: explicit terms plus the tail bound, which is also
/// reported as the error.
pub fn seq_nakano_modular(x: &WeightedSeq, s: f64) -> NormResult {
    let ln_terms: Vec<f64> = x.ln_terms(s).collect();
    let explicit = log_sum_exp(ln_terms.iter().copied()).exp();
    let mut evidence = Vec::new();
    let mut acc = 0.0;
    let mut next = 1usize;
    for (i, l) in ln_terms.iter().enumerate() {
        acc += l.exp();
        if i + 1 == next || i + 1 == ln_terms.len() {
            evidence.push(Evidence { cutoff: (i + 1) as f64, partial: acc });
            next *= 2;
        }
    }
    match x.tail_bound(s) {
        Some(tail) => {
            NormResult { value: explicit + tail, abs_error: tail, status: Status::Converged, evidence, slope: None }
        }
        None => NormResult {
            value: explicit,
            abs_error: f64::INFINITY,
            status: Status::Inconclusive,
            evidence,
            slope: None,
        },
    }
}

/// `inf{s > 0 : Σ |x_n/s|^{p_n} w_n ≤ 1}`.
pub fn seq_nakano_norm(x: &WeightedSeq) -> NormResult {
    seq_nakano_norm_with(x, &NormConfig::default())
}

pub fn seq_nakano_norm_with(x: &WeightedSeq, cfg: &NormConfig) -> NormResult {
    if x.terms.is_empty() && x.tail == TailRule::Zero {
        return NormResult::exact(0.0);
    }
    // the tail bound enters as error, so tolerance is met only if it is negligible
    modular_bisection(&|s| seq_nakano_modular(x, s), cfg)
}
