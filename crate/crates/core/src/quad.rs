//! Quadrature with convergence and divergence certificates.
//!
//! Integrals over a segment are split into geometric cells
//! `[ε·2^{−k−1}, ε·2^{−k}]` toward each endpoint that may be singular, each
//! cell integrated by adaptive Simpson. The sequence of cell integrals decides
//! the status: geometric decay gives `Converged` with an extrapolated tail,
//! non-decaying cells (or partial sums beyond the divergence threshold) give
//! `Diverged`, anything else is `Inconclusive`.

use crate::funcrep::Point;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Converged,
    Diverged,
    Inconclusive,
}

/// A truncated value at a cutoff: the integral with `(0, cutoff)` removed, or
/// the ratio at `t = cutoff` for suprema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub cutoff: f64,
    #[serde(with = "crate::serde_ext")]
    pub partial: f64,
}

/// A computed norm or modular with its certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    #[serde(with = "crate::serde_ext")]
    pub value: f64,
    #[serde(with = "crate::serde_ext")]
    pub abs_error: f64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<Evidence>,
    /// Least-squares slope of `log2(partial)` per octave over the final window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
}

impl NormResult {
    pub fn exact(value: f64) -> Self {
        NormResult { value, abs_error: 0.0, status: Status::Converged, evidence: Vec::new(), slope: None }
    }

    pub fn diverged(evidence: Vec<Evidence>, slope: Option<f64>) -> Self {
        NormResult { value: f64::INFINITY, abs_error: f64::INFINITY, status: Status::Diverged, evidence, slope }
    }

    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }

    pub fn is_diverged(&self) -> bool {
        self.status == Status::Diverged
    }

    /// Sum of two independent contributions.
    pub fn plus(self, other: NormResult) -> NormResult {
        let status = match (self.status, other.status) {
            (Status::Diverged, _) | (_, Status::Diverged) => Status::Diverged,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Converged,
        };
        let take_other =
            (other.status == Status::Diverged && self.status != Status::Diverged) || self.evidence.is_empty();
        let (evidence, slope) = if take_other { (other.evidence, other.slope) } else { (self.evidence, self.slope) };
        NormResult {
            value: self.value + other.value,
            abs_error: self.abs_error + other.abs_error,
            status,
            evidence,
            slope,
        }
    }

    /// Difference of two finite contributions; errors add.
    pub(crate) fn minus(self, other: NormResult) -> NormResult {
        let value = -other.value;
        self.plus(NormResult { value, ..other })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Relative tolerance a `Converged` result must meet.
    pub tolerance: f64,
    /// Number of geometric cells toward a singular endpoint.
    pub octaves: usize,
    /// Truncated values beyond this certify divergence.
    pub divergence_threshold: f64,
    /// Number of trailing octaves used for trend fits.
    pub window: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { tolerance: 1e-9, octaves: 60, divergence_threshold: 1e12, window: 10 }
    }
}

impl QuadConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        QuadConfig { tolerance, ..Default::default() }
    }
}

/// Adaptive Simpson with Richardson correction. Returns `(value, error estimate)`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> (f64, f64) {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    if !whole.is_finite() {
        return (f64::INFINITY, f64::INFINITY);
    }
    let tol = (rel_tol * whole.abs()).max(1e-300);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let sum = left + right;
    if !sum.is_finite() {
        return (f64::INFINITY, f64::INFINITY);
    }
    let diff = sum - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol || m <= a || m >= b {
        return (sum + diff / 15.0, diff.abs() / 15.0);
    }
    let (lv, le) = simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    let (rv, re) = simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    (lv + rv, le + re)
}

fn cell_tolerance(cfg: &QuadConfig) -> f64 {
    (cfg.tolerance * 1e-2).max(1e-13)
}

/// Least-squares slope of `ys` against their index.
pub fn fitted_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return 0.0;
    }
    let mx = (n - 1.0) / 2.0;
    let my = ys.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mx;
        num += dx * (y - my);
        den += dx * dx;
    }
    num / den
}

/// Integral over distances `d ∈ (0, width]` from a possibly singular endpoint.
/// `g(d)` is the integrand at distance `d`.
pub fn integrate_toward_singularity(g: &dyn Fn(f64) -> f64, width: f64, cfg: &QuadConfig) -> NormResult {
    let k_max = cfg.octaves.max(cfg.window + 2);
    let ctol = cell_tolerance(cfg);
    let mut cells = Vec::with_capacity(k_max);
    let mut quad_err = 0.0;
    let mut evidence = Vec::with_capacity(k_max);
    let mut partial = 0.0;
    for k in 0..k_max {
        let b = width * 2f64.powi(-(k as i32));
        let a = 0.5 * b;
        let (v, e) = adaptive_simpson(g, a, b, ctol);
        if !v.is_finite() {
            evidence.push(Evidence { cutoff: a, partial: f64::INFINITY });
            return NormResult::diverged(evidence, None);
        }
        cells.push(v);
        quad_err += e;
        partial += v;
        evidence.push(Evidence { cutoff: a, partial });
    }
    classify(&cells, partial, quad_err, evidence, cfg)
}

fn classify(signed: &[f64], partial: f64, quad_err: f64, evidence: Vec<Evidence>, cfg: &QuadConfig) -> NormResult {
    let cells: Vec<f64> = signed.iter().map(|c| c.abs()).collect();
    let n = cells.len();
    let w = cfg.window.min(n - 1);
    let tail_partials: Vec<f64> = evidence[n - w..].iter().map(|e| e.partial.abs().max(1e-300).log2()).collect();
    let slope = fitted_slope(&tail_partials);
    let last = cells[n - 1];
    if partial.abs() > cfg.divergence_threshold {
        return NormResult::diverged(evidence, Some(slope));
    }
    if cells[n - w..].iter().all(|c| *c == 0.0) {
        return NormResult {
            value: partial,
            abs_error: quad_err,
            status: Status::Converged,
            evidence,
            slope: Some(slope),
        };
    }
    let ratio = |span: usize| -> f64 {
        let first = cells[n - 1 - span];
        if first <= 0.0 {
            return if last > 0.0 { f64::INFINITY } else { 0.0 };
        }
        (last / first).powf(1.0 / span as f64)
    };
    let r8 = ratio(8.min(n - 1));
    let r4 = ratio(4.min(n - 1));
    let increasing = evidence[n - w..].windows(2).all(|p| p[1].partial.abs() > p[0].partial.abs());
    if r8 >= 1.0 - 1e-6 && increasing && slope > 0.0 {
        return NormResult::diverged(evidence, Some(slope));
    }
    let last_signed = signed[n - 1];
    let tail_of = |r: f64| if r < 1.0 { last_signed * r / (1.0 - r) } else { f64::INFINITY };
    let (t8, t4) = (tail_of(r8), tail_of(r4));
    let value = partial + t8;
    // Slowly varying factors (logarithms) make the cell ratio drift by some δ
    // per octave. A tail summed at a frozen ratio then misses about
    // c·δ·(4/(1−r)² + 1/(1−r)³), the first term from the lag of the mean ratio.
    let ratios: Vec<f64> = cells[n - w..].windows(2).filter(|p| p[0] > 0.0).map(|p| p[1] / p[0]).collect();
    let drift = if ratios.len() >= 3 { fitted_slope(&ratios).abs() } else { 0.0 };
    let drift_error = if r8 < 1.0 { last * drift * (4.0 / (1.0 - r8).powi(2) + 1.0 / (1.0 - r8).powi(3)) } else { 0.0 };
    let abs_error = (t8 - t4).abs() + drift_error + 1e-12 * t8 + quad_err;
    let status = if abs_error <= cfg.tolerance * value.abs().max(f64::MIN_POSITIVE) {
        Status::Converged
    } else {
        Status::Inconclusive
    };
    NormResult { value, abs_error, status, evidence, slope: Some(slope) }
}

/// Integral of `g` over the segment `(lo, hi]`, with geometric refinement toward
/// the endpoints flagged as possibly singular.
pub fn integrate_segment(
    lo: f64,
    hi: f64,
    singular_lo: bool,
    singular_hi: bool,
    g: &dyn Fn(Point) -> f64,
    cfg: &QuadConfig,
) -> NormResult {
    let w = hi - lo;
    if w <= 0.0 {
        return NormResult::exact(0.0);
    }
    match (singular_lo, singular_hi) {
        (false, false) => {
            let cells = 8;
            let mut total = 0.0;
            let mut err = 0.0;
            for i in 0..cells {
                let a = w * i as f64 / cells as f64;
                let b = w * (i + 1) as f64 / cells as f64;
                let (v, e) = adaptive_simpson(&|d| g(Point::from_lo(lo, hi, d)), a, b, cell_tolerance(cfg));
                if !v.is_finite() {
                    return NormResult::diverged(vec![Evidence { cutoff: lo + a, partial: f64::INFINITY }], None);
                }
                total += v;
                err += e;
            }
            let status = if err <= cfg.tolerance * total.abs().max(f64::MIN_POSITIVE) {
                Status::Converged
            } else {
                Status::Inconclusive
            };
            NormResult { value: total, abs_error: err, status, evidence: Vec::new(), slope: None }
        }
        (true, false) => {
            let mut r = integrate_toward_singularity(&|d| g(Point::from_lo(lo, hi, d)), w, cfg);
            for e in &mut r.evidence {
                e.cutoff += lo;
            }
            r
        }
        (false, true) => {
            let mut r = integrate_toward_singularity(&|d| g(Point::from_hi(lo, hi, d)), w, cfg);
            for e in &mut r.evidence {
                e.cutoff = hi - e.cutoff;
            }
            r
        }
        (true, true) => {
            let mid = lo + 0.5 * w;
            let left = integrate_toward_singularity(&|d| g(Point::from_lo(lo, hi, d)), 0.5 * w, cfg);
            let right = integrate_toward_singularity(&|d| g(Point::from_hi(lo, hi, d)), hi - mid, cfg);
            left.plus(right)
        }
    }
}
