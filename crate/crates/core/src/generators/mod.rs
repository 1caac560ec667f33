//! Concave generators (class Φ), convex generators (class Ψ) and exponent
//! functions, with the derived quantities used by the norm engines.

mod escape;

pub use escape::EscapeGenerator;

use crate::error::{Error, Result};
use crate::funcrep::{Form, Orientation, PiecewiseFunction, Segment, Shape};
use serde::{Deserialize, Serialize};

/// An increasing concave `φ: [0, 1] → [0, ∞)` with `φ(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
pub enum ConcaveGenerator {
    /// `t^α · ln(e/t)^β`. `α = β = 0` is the unit step `χ_{(0,1]}`.
    PowLog { alpha: f64, beta: f64 },
    /// `φ(t) = ∫₀ᵗ ψ′(s) F(s)^{−1/2} ds` with `F(s) = ∫₀ˢ x*ψ′`.
    Tabulated(Box<EscapeGenerator>),
}

impl ConcaveGenerator {
    pub fn power(alpha: f64) -> Self {
        ConcaveGenerator::PowLog { alpha, beta: 0.0 }
    }

    pub fn pow_log(alpha: f64, beta: f64) -> Self {
        ConcaveGenerator::PowLog { alpha, beta }
    }

    /// Validated constructor.
    pub fn try_pow_log(alpha: f64, beta: f64) -> Result<Self> {
        let g = Self::pow_log(alpha, beta);
        g.validate()?;
        Ok(g)
    }

    /// `(α, β)` for closed-family members.
    pub fn params(&self) -> Option<(f64, f64)> {
        match self {
            ConcaveGenerator::PowLog { alpha, beta } => Some((*alpha, *beta)),
            ConcaveGenerator::Tabulated(_) => None,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            ConcaveGenerator::PowLog { alpha, beta } => {
                if t <= 0.0 {
                    return 0.0;
                }
                let mut v = if *alpha == 0.0 { 1.0 } else { t.powf(*alpha) };
                if *beta != 0.0 {
                    v *= (1.0 - t.ln()).powf(*beta);
                }
                v
            }
            ConcaveGenerator::Tabulated(e) => e.value(t),
        }
    }

    /// `φ′(t)` for `t ∈ (0, 1]`.
    pub fn slope(&self, t: f64) -> f64 {
        match self {
            ConcaveGenerator::PowLog { .. } => {
                let s = self.slope_shape().expect("closed family");
                s.at_v(t)
            }
            ConcaveGenerator::Tabulated(e) => e.slope(t),
        }
    }

    /// `φ′` as an analytic shape in `t`, for closed-family members.
    pub fn slope_shape(&self) -> Option<Shape> {
        let (alpha, beta) = self.params()?;
        let base = Shape {
            coeff: 0.0,
            alpha: 0.0,
            beta: 0.0,
            kappa: 0.0,
            shift: 0.0,
            scale: 1.0,
            orientation: Orientation::Right,
        };
        Some(if alpha == 0.0 {
            // d/dt L^β = −β t^{−1} L^{β−1}
            Shape { coeff: -beta, alpha: -1.0, beta: beta - 1.0, ..base }
        } else if beta == 0.0 {
            Shape { coeff: alpha, alpha: alpha - 1.0, ..base }
        } else {
            Shape { coeff: alpha, alpha: alpha - 1.0, beta, kappa: -beta / alpha, ..base }
        })
    }

    /// `φ′` on `(0, 1]` as a nonincreasing piecewise function; nonnegative for
    /// members of the class.
    pub fn derivative(&self) -> Result<PiecewiseFunction> {
        let shape =
            self.slope_shape().ok_or_else(|| Error::NotClosedForm("derivative of a tabulated generator".into()))?;
        if self.params() == Some((0.0, 0.0)) {
            return Ok(PiecewiseFunction::zero());
        }
        let seg = Segment::new(0.0, 1.0, Form::from_shape(shape))?;
        Ok(PiecewiseFunction::from_segment(seg))
    }

    /// `φ̃(t) = t/φ(t)`, re-validated.
    pub fn tilde(&self) -> Result<ConcaveGenerator> {
        let (alpha, beta) =
            self.params().ok_or_else(|| Error::NotClosedForm("tilde of a tabulated generator".into()))?;
        let g = ConcaveGenerator::PowLog { alpha: 1.0 - alpha, beta: -beta };
        g.validate()?;
        Ok(g)
    }

    /// Class check: `φ(0) = 0`, `φ` nondecreasing and `φ′` nonincreasing on a
    /// geometric grid `2^{−j/4}`, `j ≤ 240`.
    pub fn validate(&self) -> Result<()> {
        if let ConcaveGenerator::PowLog { alpha, beta } = self {
            if !(alpha.is_finite() && beta.is_finite()) || *alpha < 0.0 || *alpha > 1.0 {
                return Err(Error::ClassViolation(format!("alpha = {alpha} outside [0, 1]")));
            }
            if *alpha == 0.0 && *beta > 0.0 {
                return Err(Error::ClassViolation(format!("alpha = 0 needs beta <= 0, got {beta}")));
            }
        }
        let grid: Vec<f64> = (0..=240).map(|j| 2f64.powf(-(j as f64) / 4.0)).collect();
        let mut prev_value = f64::INFINITY;
        let mut prev_slope = 0.0;
        for &t in &grid {
            let (v, s) = (self.value(t), self.slope(t));
            if !(v.is_finite() && s.is_finite()) || s < -1e-12 * v.max(1.0) {
                return Err(Error::ClassViolation(format!("not increasing at t = {t:e}")));
            }
            if v > prev_value * (1.0 + 1e-12) {
                return Err(Error::ClassViolation(format!("not increasing at t = {t:e}")));
            }
            if s < prev_slope * (1.0 - 1e-9) {
                return Err(Error::ClassViolation(format!("not concave at t = {t:e}")));
            }
            prev_value = v;
            prev_slope = s;
        }
        Ok(())
    }
}

/// A convex `ψ: [0, ∞) → [0, ∞)` with `ψ(0) = 0` and `ψ(∞) = ∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
pub enum ConvexGenerator {
    /// `t^p · ln(e + t)^q`.
    PowLog { p: f64, q: f64 },
    /// `e^{t^p} − 1`.
    ExpPow { p: f64 },
    /// `ψ` on `[0, 2]`, `b_n ψ` on `(2^n, 2^{n+1}]`; `b_n` is frozen at its
    /// last listed value beyond the table.
    Scaled { base: Box<ConvexGenerator>, factors: Vec<f64> },
}

impl ConvexGenerator {
    pub fn power(p: f64) -> Self {
        ConvexGenerator::PowLog { p, q: 0.0 }
    }

    pub fn pow_log(p: f64, q: f64) -> Self {
        ConvexGenerator::PowLog { p, q }
    }

    pub fn exp_pow(p: f64) -> Self {
        ConvexGenerator::ExpPow { p }
    }

    /// The exponent `p` of a pure power `t^p`.
    pub fn pure_power(&self) -> Option<f64> {
        match self {
            ConvexGenerator::PowLog { p, q } if *q == 0.0 => Some(*p),
            _ => None,
        }
    }

    fn factor(factors: &[f64], t: f64) -> f64 {
        if t <= 2.0 || factors.is_empty() {
            return 1.0;
        }
        let n = (t.log2().ceil() as usize).saturating_sub(1).max(1);
        factors[(n - 1).min(factors.len() - 1)]
    }

    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            ConvexGenerator::PowLog { p, q } => {
                let v = t.powf(*p);
                if *q == 0.0 {
                    v
                } else {
                    v * (std::f64::consts::E + t).ln().powf(*q)
                }
            }
            ConvexGenerator::ExpPow { p } => t.powf(*p).exp_m1(),
            ConvexGenerator::Scaled { base, factors } => Self::factor(factors, t) * base.value(t),
        }
    }

    /// `ln ψ(t)`, finite far beyond the overflow point of `ψ`.
    pub fn ln_value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match self {
            ConvexGenerator::PowLog { p, q } => {
                let mut l = p * t.ln();
                if *q != 0.0 {
                    l += q * (std::f64::consts::E + t).ln().ln();
                }
                l
            }
            ConvexGenerator::ExpPow { p } => {
                let u = t.powf(*p);
                if u > 30.0 {
                    u + (-(-u).exp()).ln_1p()
                } else {
                    u.exp_m1().ln()
                }
            }
            ConvexGenerator::Scaled { base, factors } => Self::factor(factors, t).ln() + base.ln_value(t),
        }
    }

    /// Class check: `ψ(0) = 0`, nondecreasing slopes on the grid `2^{j/4}`,
    /// `j ∈ [−80, 240]`, and `ψ(2^60)/ψ(1) > 10^6`. The scaled form is
    /// discontinuous at `2^n` and only its base is checked.
    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexGenerator::PowLog { p, q } => {
                if !(p.is_finite() && q.is_finite()) || *p < 1.0 || *q < 0.0 {
                    return Err(Error::ClassViolation(format!("powlog needs p >= 1, q >= 0: ({p}, {q})")));
                }
            }
            ConvexGenerator::ExpPow { p } => {
                if !p.is_finite() || *p < 1.0 {
                    return Err(Error::ClassViolation(format!("exp needs p >= 1, got {p}")));
                }
            }
            ConvexGenerator::Scaled { base, factors } => {
                if factors.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
                    return Err(Error::ClassViolation("scale factors must be positive".into()));
                }
                return base.validate();
            }
        }
        if self.value(0.0) != 0.0 {
            return Err(Error::ClassViolation("psi(0) != 0".into()));
        }
        let mut prev: Option<(f64, f64)> = None;
        let mut prev_slope = 0.0;
        for j in -80..=240 {
            let t = 2f64.powf(j as f64 / 4.0);
            let v = self.value(t);
            if !v.is_finite() {
                break;
            }
            if let Some((t0, v0)) = prev {
                let s = (v - v0) / (t - t0);
                if s < prev_slope * (1.0 - 1e-9) - 1e-300 {
                    return Err(Error::ClassViolation(format!("not convex near t = {t:e}")));
                }
                prev_slope = s;
            }
            prev = Some((t, v));
        }
        if self.ln_value(2f64.powi(60)) - self.ln_value(1.0) <= 1e6f64.ln() {
            return Err(Error::ClassViolation("psi is bounded on the grid".into()));
        }
        Ok(())
    }

    /// `Δ2` at infinity from the ratios `ψ(2^{k+1})/ψ(2^k)`, `k = 1..60`.
    pub fn delta2_check(&self) -> Delta2Report {
        let log_ratios: Vec<f64> =
            (1..=60).map(|k| self.ln_value(2f64.powi(k + 1)) - self.ln_value(2f64.powi(k))).collect();
        let exact = self.delta2_exact();
        let w = &log_ratios[log_ratios.len() - 10..];
        let growing = w.windows(2).all(|p| p[1] > p[0]);
        let status = if growing && (w[9] > 1e12f64.ln() || w[9] > 2.0 * w[0]) {
            Delta2Status::Fails
        } else {
            let spread =
                w.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - w.iter().cloned().fold(f64::INFINITY, f64::min);
            let increments_shrink = w.windows(3).all(|p| (p[2] - p[1]).abs() <= (p[1] - p[0]).abs() + 1e-12);
            if spread < 1e-2 * w[9].abs().max(1.0) || (increments_shrink && !growing) {
                Delta2Status::Holds
            } else {
                Delta2Status::Inconclusive
            }
        };
        let sup_ratio = log_ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp();
        Delta2Report { status, sup_ratio, log_ratios, exact }
    }

    fn delta2_exact(&self) -> Option<bool> {
        match self {
            ConvexGenerator::PowLog { .. } => Some(true),
            ConvexGenerator::ExpPow { .. } => Some(false),
            ConvexGenerator::Scaled { base, factors } => {
                let bounded = factors.windows(2).all(|w| w[1] <= 2.0 * w[0]);
                base.delta2_exact().map(|b| b && bounded)
            }
        }
    }

    /// Orlicz indices at infinity; exact for the closed families.
    pub fn orlicz_indices(&self) -> OrliczIndices {
        match self {
            ConvexGenerator::PowLog { p, .. } => OrliczIndices { p_inf: *p, q_inf: *p, exact: true },
            ConvexGenerator::ExpPow { .. } => OrliczIndices { p_inf: f64::INFINITY, q_inf: f64::INFINITY, exact: true },
            ConvexGenerator::Scaled { .. } => self.orlicz_indices_numeric(),
        }
    }

    /// Index estimates from monotonicity of `ψ(t)/t^r` on `t = 2^{j/4} ∈ [2^20, 2^60]`,
    /// bisected on `r` to `1e−6`.
    pub fn orlicz_indices_numeric(&self) -> OrliczIndices {
        let grid: Vec<(f64, f64)> = (80..=240)
            .map(|j| {
                let lt = j as f64 / 4.0 * std::f64::consts::LN_2;
                (lt, self.ln_value(lt.exp()))
            })
            .collect();
        let diffs = |r: f64| grid.windows(2).map(move |w| (w[1].1 - r * w[1].0) - (w[0].1 - r * w[0].0));
        let increasing = |r: f64| diffs(r).all(|d| d >= -1e-12);
        let decreasing = |r: f64| diffs(r).all(|d| d <= 1e-12);
        let cap = 1e3;
        let p_inf = if increasing(cap) {
            f64::INFINITY
        } else if !increasing(0.0) {
            0.0
        } else {
            bisect_predicate(0.0, cap, increasing)
        };
        let q_inf = if !decreasing(cap) { f64::INFINITY } else { bisect_predicate(0.0, cap, |r| !decreasing(r)) };
        OrliczIndices { p_inf, q_inf, exact: false }
    }
}

/// Largest `r` in `[lo, hi]` with `pred(r)` true, assuming `pred` true then false.
fn bisect_predicate(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Delta2Status {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta2Report {
    pub status: Delta2Status,
    /// Largest observed `ψ(2t)/ψ(t)`.
    #[serde(with = "crate::serde_ext")]
    pub sup_ratio: f64,
    /// `ln(ψ(2^{k+1})/ψ(2^k))` for `k = 1..60`.
    pub log_ratios: Vec<f64>,
    /// Known answer for closed-family members.
    pub exact: Option<bool>,
}

impl Delta2Report {
    pub fn holds(&self) -> bool {
        self.status == Delta2Status::Holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrliczIndices {
    #[serde(with = "crate::serde_ext")]
    pub p_inf: f64,
    #[serde(with = "crate::serde_ext")]
    pub q_inf: f64,
    pub exact: bool,
}

/// One affine piece of an exponent function on `(lo, hi]` (the first piece
/// includes 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPiece {
    pub lo: f64,
    pub hi: f64,
    pub start: f64,
    pub end: f64,
}

impl ExponentPiece {
    pub fn is_constant(&self) -> bool {
        self.start == self.end
    }

    pub fn value(&self, t: f64) -> f64 {
        if self.is_constant() {
            self.start
        } else {
            self.start + (self.end - self.start) * (t - self.lo) / (self.hi - self.lo)
        }
    }

    pub fn min(&self) -> f64 {
        self.start.min(self.end)
    }

    pub fn max(&self) -> f64 {
        self.start.max(self.end)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Measure of `{t ∈ piece : lo < p(t) < hi}`.
    pub fn measure_between(&self, lo: f64, hi: f64) -> f64 {
        if self.is_constant() {
            return if self.start > lo && self.start < hi { self.width() } else { 0.0 };
        }
        let (a, b) = (self.min(), self.max());
        let overlap = (hi.min(b) - lo.max(a)).max(0.0);
        overlap / (b - a) * self.width()
    }
}

/// A piecewise-affine exponent `p: [0, 1] → [1, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExponentRepr", into = "ExponentRepr")]
pub struct ExponentFunction {
    pieces: Vec<ExponentPiece>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
enum ExponentRepr {
    Const { q: f64 },
    Step { q1: f64, t: f64, q2: f64 },
    Affine { q0: f64, q1: f64 },
    Piecewise { pieces: Vec<ExponentPiece> },
}

impl TryFrom<ExponentRepr> for ExponentFunction {
    type Error = Error;
    fn try_from(r: ExponentRepr) -> Result<Self> {
        match r {
            ExponentRepr::Const { q } => ExponentFunction::constant(q),
            ExponentRepr::Step { q1, t, q2 } => ExponentFunction::step(q1, t, q2),
            ExponentRepr::Affine { q0, q1 } => ExponentFunction::affine(q0, q1),
            ExponentRepr::Piecewise { pieces } => ExponentFunction::new(pieces),
        }
    }
}

impl From<ExponentFunction> for ExponentRepr {
    fn from(e: ExponentFunction) -> Self {
        ExponentRepr::Piecewise { pieces: e.pieces }
    }
}

impl ExponentFunction {
    /// Pieces must tile `[0, 1]` in order with values in `[1, ∞)`.
    pub fn new(mut pieces: Vec<ExponentPiece>) -> Result<Self> {
        pieces.retain(|p| p.hi > p.lo);
        if pieces.is_empty() {
            return Err(Error::Descriptor("exponent needs at least one piece".into()));
        }
        let mut at = 0.0;
        for p in &pieces {
            if p.lo != at {
                return Err(Error::Descriptor(format!("exponent pieces must tile [0, 1]: gap at {at}")));
            }
            if !(p.start.is_finite() && p.end.is_finite()) || p.min() < 1.0 {
                return Err(Error::Descriptor(format!("exponent values must lie in [1, inf): {p:?}")));
            }
            at = p.hi;
        }
        if at != 1.0 {
            return Err(Error::Descriptor(format!("exponent pieces end at {at}, not 1")));
        }
        Ok(ExponentFunction { pieces })
    }

    pub fn constant(q: f64) -> Result<Self> {
        Self::new(vec![ExponentPiece { lo: 0.0, hi: 1.0, start: q, end: q }])
    }

    /// `q1` on `[0, t]`, `q2` on `(t, 1]`.
    pub fn step(q1: f64, t: f64, q2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Descriptor(format!("step point {t} outside [0, 1]")));
        }
        Self::new(vec![
            ExponentPiece { lo: 0.0, hi: t, start: q1, end: q1 },
            ExponentPiece { lo: t, hi: 1.0, start: q2, end: q2 },
        ])
    }

    /// Affine from `q0` at 0 to `q1` at 1.
    pub fn affine(q0: f64, q1: f64) -> Result<Self> {
        Self::new(vec![ExponentPiece { lo: 0.0, hi: 1.0, start: q0, end: q1 }])
    }

    pub fn pieces(&self) -> &[ExponentPiece] {
        &self.pieces
    }

    pub fn piece_at(&self, t: f64) -> &ExponentPiece {
        let i = self.pieces.partition_point(|p| p.hi < t);
        &self.pieces[i.min(self.pieces.len() - 1)]
    }

    pub fn value(&self, t: f64) -> f64 {
        self.piece_at(t).value(t)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.pieces.iter().map(|p| p.lo).collect();
        b.push(1.0);
        b
    }

    /// `(p⁻, p⁺)`.
    pub fn stats(&self) -> (f64, f64) {
        let lo = self.pieces.iter().map(|p| p.min()).fold(f64::INFINITY, f64::min);
        let hi = self.pieces.iter().map(|p| p.max()).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    pub fn is_constant(&self) -> Option<f64> {
        let (lo, hi) = self.stats();
        (lo == hi).then_some(lo)
    }

    /// The same function with extra breakpoints inserted.
    pub fn refine(&self, extra: &[f64]) -> ExponentFunction {
        let mut cuts = self.breakpoints();
        cuts.extend(extra.iter().copied().filter(|t| *t > 0.0 && *t < 1.0));
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let pieces = cuts
            .windows(2)
            .map(|w| {
                let p = self.piece_at(0.5 * (w[0] + w[1]));
                ExponentPiece { lo: w[0], hi: w[1], start: p.value(w[0]), end: p.value(w[1]) }
            })
            .collect();
        ExponentFunction { pieces }
    }

    /// Adds `delta(piece index)` to each piece.
    pub fn shifted_pieces(&self, delta: impl Fn(usize, &ExponentPiece) -> f64) -> ExponentFunction {
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d = delta(i, p);
                ExponentPiece { start: p.start + d, end: p.end + d, ..*p }
            })
            .collect();
        ExponentFunction { pieces }
    }
}

pub fn exponent_stats(p: &ExponentFunction) -> (f64, f64) {
    p.stats()
}

/// The generator descriptor schema `{class, family, params}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum Descriptor {
    Phi(ConcaveGenerator),
    Psi(ConvexGenerator),
    Exponent(ExponentFunction),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;

    #[test]
    fn derivative_examples() {
        let d = ConcaveGenerator::power(1.0).derivative().unwrap();
        assert_eq!(d.evaluate(0.3), 1.0);
        let d = ConcaveGenerator::power(0.5).derivative().unwrap();
        assert!((d.evaluate(0.25) - 1.0).abs() < 1e-15);
        let g = ConcaveGenerator::pow_log(0.5, 1.0);
        let d = g.derivative().unwrap();
        let (v, _) = adaptive_simpson(&|u: f64| d.evaluate(0.25 * u * u) * 0.5 * u, 0.0, 1.0, 1e-13);
        assert!((v - g.value(0.25)).abs() < 1e-8, "{v} vs {}", g.value(0.25));
    }

    #[test]
    fn tilde_examples() {
        let t = ConcaveGenerator::power(1.0).tilde().unwrap();
        assert_eq!(t.value(0.3), 1.0);
        assert_eq!(t.value(0.0), 0.0);
        assert_eq!(ConcaveGenerator::power(0.5).tilde().unwrap(), ConcaveGenerator::power(0.5));
        let t = ConcaveGenerator::power(1.0 / 3.0).tilde().unwrap();
        assert!((t.value(0.125) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn class_violations() {
        assert!(ConcaveGenerator::try_pow_log(1.5, 0.0).is_err());
        assert!(ConcaveGenerator::try_pow_log(0.5, 2.0).is_err());
        assert!(ConvexGenerator::power(0.5).validate().is_err());
        assert!(ConvexGenerator::power(1.0).validate().is_ok());
        assert!(ConvexGenerator::exp_pow(1.0).validate().is_ok());
        assert!(ConvexGenerator::pow_log(2.0, 3.0).validate().is_ok());
    }

    #[test]
    fn delta2_examples() {
        let r = ConvexGenerator::power(3.0).delta2_check();
        assert!(r.holds());
        assert!((r.sup_ratio - 8.0).abs() < 1e-9);
        assert_eq!(ConvexGenerator::exp_pow(1.0).delta2_check().status, Delta2Status::Fails);
        let r = ConvexGenerator::pow_log(2.0, 1.0).delta2_check();
        assert!(r.holds());
        assert!((r.log_ratios[59].exp() - 4.0).abs() < 0.1);
    }

    #[test]
    fn index_examples() {
        let i = ConvexGenerator::power(2.5).orlicz_indices();
        assert_eq!((i.p_inf, i.q_inf, i.exact), (2.5, 2.5, true));
        let n = ConvexGenerator::power(2.5).orlicz_indices_numeric();
        assert!((n.p_inf - 2.5).abs() < 1e-6 && (n.q_inf - 2.5).abs() < 1e-6);
        // log factors leave an O(q / ln t) bias at the window start
        let n = ConvexGenerator::pow_log(2.0, 3.0).orlicz_indices_numeric();
        assert!(n.p_inf >= 2.0 && n.p_inf < 2.0 + 3.0 / (20.0 * std::f64::consts::LN_2));
        assert!(n.q_inf >= n.p_inf && n.q_inf < 2.0 + 3.0 / (20.0 * std::f64::consts::LN_2) + 1e-3);
        assert_eq!(ConvexGenerator::exp_pow(1.0).orlicz_indices().q_inf, f64::INFINITY);
        assert_eq!(ConvexGenerator::exp_pow(1.0).orlicz_indices_numeric().q_inf, f64::INFINITY);
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(ExponentFunction::constant(2.0).unwrap().stats(), (2.0, 2.0));
        assert_eq!(ExponentFunction::step(3.0, 0.5, 2.0).unwrap().stats(), (2.0, 3.0));
        let a = ExponentFunction::affine(2.0, 3.0).unwrap();
        assert_eq!(a.stats(), (2.0, 3.0));
        assert_eq!(a.value(0.25), 2.25);
        assert!(ExponentFunction::constant(0.5).is_err());
    }

    #[test]
    fn descriptor_json() {
        let d: Descriptor =
            serde_json::from_str(r#"{"class":"Phi","family":"powlog","params":{"alpha":0.5,"beta":1}}"#).unwrap();
        assert_eq!(d, Descriptor::Phi(ConcaveGenerator::pow_log(0.5, 1.0)));
        let d: Descriptor =
            serde_json::from_str(r#"{"class":"Exponent","family":"step","params":{"q1":3,"t":0.5,"q2":2}}"#).unwrap();
        let Descriptor::Exponent(e) = &d else { panic!() };
        assert_eq!(e.value(0.25), 3.0);
        let back: Descriptor = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
        let p = Descriptor::Psi(ConvexGenerator::exp_pow(1.0));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"class":"Psi","family":"exppow","params":{"p":1.0}}"#);
    }
}
