//! Ordering relations between generators, inclusion criteria between the
//! associated spaces, and essential ranges of exponent functions.
//!
//! Limits at `0` are sampled at `t = 2^{−k}`, limits at `∞` at `t = 2^{k}`.

use crate::generators::{ConcaveGenerator, ConvexGenerator, ExponentFunction};
use crate::quad::fitted_slope;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    TendsToZero,
    BoundedAway,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitVerdict {
    pub kind: LimitKind,
    /// `φ(2^{−k})/ψ(2^{−k})` for `k = 1..=60`.
    #[serde(with = "crate::serde_ext::vec")]
    pub samples: Vec<f64>,
    /// Slope of `log2` of the samples per octave over the last 10 octaves.
    pub trend: f64,
    /// Closed-form answer when both generators are closed-family members.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<LimitKind>,
}

impl LimitVerdict {
    pub fn tends_to_zero(&self) -> bool {
        self.kind == LimitKind::TendsToZero
    }
}

/// Classifies positive samples of a ratio as `k → ∞`.
///
/// `TendsToZero` needs the last 8 samples strictly decreasing and either the
/// final sample below `1e−6`, or the reciprocal growing without bound at least
/// like a positive power of `k` (which covers logarithmic decay in `t`).
pub fn classify_decay(samples: &[f64]) -> (LimitKind, f64) {
    let n = samples.len();
    let w = 10.min(n);
    let logs: Vec<f64> = samples[n - w..].iter().map(|r| r.max(1e-300).log2()).collect();
    let trend = fitted_slope(&logs);
    if samples.iter().any(|r| !r.is_finite() || *r < 0.0) {
        let kind = if samples[n - 1] == f64::INFINITY { LimitKind::BoundedAway } else { LimitKind::Inconclusive };
        return (kind, trend);
    }
    let last8 = &samples[n - 8.min(n)..];
    let decreasing = last8.windows(2).all(|p| p[1] < p[0]);
    if decreasing {
        if samples[n - 1] < 1e-6 {
            return (LimitKind::TendsToZero, trend);
        }
        // ln(1/r_k) against ln k: a positive, stable exponent means 1/r → ∞
        let pts: Vec<(f64, f64)> = (n - w..n).map(|i| (((i + 1) as f64).ln(), (1.0 / samples[i]).ln())).collect();
        let recips_grow = pts.windows(2).all(|p| p[1].1 > p[0].1);
        let local: Vec<f64> = pts.windows(2).map(|p| (p[1].1 - p[0].1) / (p[1].0 - p[0].0)).collect();
        let gamma = local.iter().sum::<f64>() / local.len() as f64;
        let stable = local.iter().all(|g| (g - gamma).abs() <= 0.5 * gamma.abs());
        let inv_last = 1.0 / samples[n - 1];
        if recips_grow && stable && gamma >= 0.25 && inv_last > 1.0 / samples[n - w] {
            // the reciprocal may be growing toward a finite limit: require the
            // growth not to decelerate faster than a power of k
            let d: Vec<f64> = samples[n - w..].windows(2).map(|p| p[0] - p[1]).collect();
            let rho = (d[d.len() - 1] / d[0]).powf(1.0 / (d.len() - 1) as f64);
            if rho > 0.7 {
                return (LimitKind::TendsToZero, trend);
            }
        }
        // geometric convergence of the decrements to a positive limit
        let d: Vec<f64> = samples[n - w..].windows(2).map(|p| p[0] - p[1]).collect();
        let m = d.len();
        let rho = (d[m - 1] / d[0]).powf(1.0 / (m - 1) as f64);
        if rho < 0.9 {
            let limit = samples[n - 1] - d[m - 1] * rho / (1.0 - rho);
            if limit > 0.5 * samples[n - 1] {
                return (LimitKind::BoundedAway, trend);
            }
        }
        return (LimitKind::Inconclusive, trend);
    }
    let nondecreasing = last8.windows(2).all(|p| p[1] >= p[0] * (1.0 - 1e-12));
    if nondecreasing && samples[n - 1] > 0.0 {
        return (LimitKind::BoundedAway, trend);
    }
    (LimitKind::Inconclusive, trend)
}

fn exact_small_o(phi: &ConcaveGenerator, psi: &ConcaveGenerator) -> Option<LimitKind> {
    let (a, b) = phi.params()?;
    let (c, d) = psi.params()?;
    // φ/ψ = t^{a−c} ln(e/t)^{b−d}
    Some(if a > c || (a == c && b < d) { LimitKind::TendsToZero } else { LimitKind::BoundedAway })
}

/// `φ ≪ ψ`: whether `φ(t)/ψ(t) → 0` as `t → 0`.
pub fn small_o_at_zero(phi: &ConcaveGenerator, psi: &ConcaveGenerator) -> LimitVerdict {
    let samples: Vec<f64> = (1..=60).map(|k| 2f64.powi(-k)).map(|t| phi.value(t) / psi.value(t)).collect();
    let (kind, trend) = classify_decay(&samples);
    LimitVerdict { kind, samples, trend, exact: exact_small_o(phi, psi) }
}

/// Outcome of a bounded-ratio search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    /// `None` when the samples neither stabilize nor certifiably blow up.
    pub holds: Option<bool>,
    /// Supremum of the ratio over the grid.
    #[serde(with = "crate::serde_ext")]
    pub constant: f64,
    /// Threshold `T` of the eventual comparison (Orlicz only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Where the ratio is largest, or the last grid point when it diverges.
    pub location: f64,
    /// `(t, ratio)` at whole octaves.
    pub samples: Vec<(f64, f64)>,
}

impl InclusionReport {
    pub fn holds(&self) -> bool {
        self.holds == Some(true)
    }
}

/// Whether `ln r(t)` stays bounded along `t_j = 2^{±j/4}`, `j = 0..=240`.
fn bounded_ratio(ln_ratio: &dyn Fn(f64) -> f64, toward_zero: bool) -> InclusionReport {
    let t_of = |j: i32| 2f64.powf(if toward_zero { -(j as f64) } else { j as f64 } / 4.0);
    let grid: Vec<(f64, f64)> = (0..=240).map(|j| (t_of(j), ln_ratio(t_of(j)))).collect();
    let samples: Vec<(f64, f64)> = grid.iter().step_by(4).map(|&(t, l)| (t, l.exp())).collect();
    let (mut loc, mut sup) = (grid[0].0, f64::NEG_INFINITY);
    for &(t, l) in &grid {
        if l > sup {
            sup = l;
            loc = t;
        }
    }
    let n = samples.len();
    let tail: Vec<f64> = samples[n - 11..].iter().map(|s| s.1.ln() / std::f64::consts::LN_2).collect();
    let slope = fitted_slope(&tail);
    let increasing = tail.windows(2).all(|p| p[1] > p[0]);
    let holds = if grid.iter().any(|g| g.1.is_nan()) {
        None
    } else if sup == f64::INFINITY || (increasing && (sup > 1e12f64.ln() || slope > 1e-3)) {
        loc = samples[n - 1].0;
        Some(false)
    } else if increasing && slope > 1e-9 {
        None
    } else {
        Some(true)
    };
    let constant = if holds == Some(false) { f64::INFINITY } else { sup.exp() };
    InclusionReport { holds, constant, threshold: None, location: loc, samples }
}

/// `Λ(φ) ⊂ Λ(ψ)`, i.e. `ψ ≤ Cφ` on `(0, 1]`.
pub fn lorentz_inclusion(phi: &ConcaveGenerator, psi: &ConcaveGenerator) -> InclusionReport {
    bounded_ratio(&|t| psi.value(t).ln() - phi.value(t).ln(), true)
}

/// `M(φ) ⊂ M(ψ)`, i.e. `φ ≤ Cψ` on `(0, 1]`.
pub fn marcinkiewicz_inclusion(phi: &ConcaveGenerator, psi: &ConcaveGenerator) -> InclusionReport {
    bounded_ratio(&|t| phi.value(t).ln() - psi.value(t).ln(), true)
}

/// `L^φ ⊂ L^ψ`, i.e. `ψ(t) ≤ c φ(t)` for `t ≥ T`. Reported with `T = 1` and
/// `c` the supremum of `ψ/φ` over `[1, 2^60]`.
pub fn orlicz_inclusion(phi: &ConvexGenerator, psi: &ConvexGenerator) -> InclusionReport {
    let mut r = bounded_ratio(&|t| psi.ln_value(t) - phi.ln_value(t), false);
    r.threshold = Some(1.0);
    r
}

/// `q_ψ^∞ < p_φ^∞` with margin `1e−6`.
pub fn index_gap(psi: &ConvexGenerator, phi: &ConvexGenerator) -> bool {
    psi.orlicz_indices().q_inf < phi.orlicz_indices().p_inf - 1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DssSearch {
    Found {
        /// `(x_k, a_k)` with `Σ a_k = 1`.
        points: Vec<(f64, f64)>,
        /// Smallest `ln(C Σa_kφ(tx_k)) − ln(Σa_kψ(tx_k))` on the validation grid.
        margin: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        warning: Option<String>,
    },
    NotFound {
        tried: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        warning: Option<String>,
    },
}

impl DssSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, DssSearch::Found { .. })
    }
}

/// Bounded search for points `x_k ∈ [1, 2^20]` (quarter-octave grid, `n ≤ 4`)
/// and weights `a_k ≥ 0` with `Σ a_k ψ(t x_k) ≤ C Σ a_k φ(t x_k)` for `t ≥ 1`.
/// Weights come from nonnegative least squares on a quarter-octave `t`-grid up
/// to `2^40`; returned witnesses hold on a 10× denser grid. `NotFound` does
/// not refute the relation.
pub fn dss_orlicz_search(psi: &ConvexGenerator, phi: &ConvexGenerator, c: f64, budget: usize) -> DssSearch {
    let warning = match (psi.delta2_check().holds(), phi.delta2_check().holds()) {
        (true, true) => None,
        _ => Some("a generator fails the Delta2 check; the DSS criterion is stated for separable spaces".into()),
    };
    let xs: Vec<f64> = (0..=80).map(|j| 2f64.powf(j as f64 / 4.0)).collect();
    let coarse_t: Vec<f64> = (0..=160).map(|i| 2f64.powf(i as f64 / 4.0)).collect();
    let dense_t: Vec<f64> = (0..=1600).map(|i| 2f64.powf(i as f64 / 40.0)).collect();
    let lnc = c.ln();
    let validate = |pts: &[(f64, f64)]| -> Option<f64> {
        let mut margin = f64::INFINITY;
        for &t in &dense_t {
            let lhs = crate::norms::log_sum_exp(pts.iter().map(|&(x, a)| a.ln() + psi.ln_value(t * x)));
            let rhs = lnc + crate::norms::log_sum_exp(pts.iter().map(|&(x, a)| a.ln() + phi.ln_value(t * x)));
            if !(lhs.is_finite() && rhs.is_finite()) {
                return None;
            }
            margin = margin.min(rhs - lhs);
        }
        (margin >= -1e-12).then_some(margin)
    };
    let mut tried = 0;
    for &x in &xs {
        if tried >= budget {
            return DssSearch::NotFound { tried, warning };
        }
        tried += 1;
        if let Some(margin) = validate(&[(x, 1.0)]) {
            return DssSearch::Found { points: vec![(x, 1.0)], margin, warning };
        }
    }
    // combinations on an octave subgrid
    let sub: Vec<f64> = xs.iter().copied().step_by(4).collect();
    for n in 2..=4usize {
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            if tried >= budget {
                return DssSearch::NotFound { tried, warning };
            }
            tried += 1;
            let pts: Vec<f64> = idx.iter().map(|&i| sub[i]).collect();
            if let Some(a) = nnls_weights(psi, phi, lnc, &pts, &coarse_t) {
                let cand: Vec<(f64, f64)> = pts.iter().copied().zip(a).filter(|p| p.1 > 0.0).collect();
                if let Some(margin) = validate(&cand) {
                    return DssSearch::Found { points: cand, margin, warning };
                }
            }
            if !next_combination(&mut idx, sub.len()) {
                break;
            }
        }
    }
    DssSearch::NotFound { tried, warning }
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Rows `g_k(t) = ψ(t x_k) − Cφ(t x_k)` squashed by `tanh` of their scale-free
/// form; solves `min ‖G a + 1‖` over `a ≥ 0` and normalizes `Σ a = 1`.
fn nnls_weights(psi: &ConvexGenerator, phi: &ConvexGenerator, lnc: f64, xs: &[f64], ts: &[f64]) -> Option<Vec<f64>> {
    let rows: Vec<Vec<f64>> = ts
        .iter()
        .map(|&t| xs.iter().map(|&x| (0.5 * (psi.ln_value(t * x) - lnc - phi.ln_value(t * x))).tanh()).collect())
        .collect();
    let b: Vec<f64> = vec![-1.0; rows.len()];
    let a = nnls(&rows, &b)?;
    let s: f64 = a.iter().sum();
    (s > 0.0).then(|| a.iter().map(|v| v / s).collect())
}

/// Nonnegative least squares `min ‖A a − b‖, a ≥ 0` for a handful of columns,
/// solved exactly by enumerating supports.
pub fn nnls(rows: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = rows.first()?.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let m = support.len();
        let mut ata = vec![vec![0.0; m]; m];
        let mut atb = vec![0.0; m];
        for (row, bi) in rows.iter().zip(b) {
            for (i, &ci) in support.iter().enumerate() {
                atb[i] += row[ci] * bi;
                for (j, &cj) in support.iter().enumerate() {
                    ata[i][j] += row[ci] * row[cj];
                }
            }
        }
        let Some(sol) = solve(ata, atb) else { continue };
        if sol.iter().any(|v| *v < 0.0) {
            continue;
        }
        let mut a = vec![0.0; n];
        for (i, &ci) in support.iter().enumerate() {
            a[ci] = sol[i];
        }
        let res: f64 = rows
            .iter()
            .zip(b)
            .map(|(row, bi)| {
                let r = row.iter().zip(&a).map(|(x, y)| x * y).sum::<f64>() - bi;
                r * r
            })
            .sum();
        if best.as_ref().is_none_or(|(r, _)| res < *r) {
            best = Some((res, a));
        }
    }
    best.map(|b| b.1)
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(r);
            for (x, y) in lower[0][col..n].iter_mut().zip(&upper[col][col..n]) {
                *x -= f * y;
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// A closed subset of `[1, ∞)` as sorted, disjoint closed intervals (points
/// are degenerate intervals).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssentialRange {
    intervals: Vec<(f64, f64)>,
}

impl EssentialRange {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Self {
        intervals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        EssentialRange { intervals: merged }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, q: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= q && q <= b)
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.intervals[0].0, self.intervals[self.intervals.len() - 1].1)
    }
}

/// `R_{p(·)}`: values of constant pieces plus value intervals of affine pieces.
pub fn essential_range(p: &ExponentFunction) -> EssentialRange {
    EssentialRange::new(p.pieces().iter().filter(|q| q.width() > 0.0).map(|q| (q.min(), q.max())).collect())
}

/// `L^{q(·)} ⊂ L^{p(·)}`, i.e. `p ≤ q` a.e., compared exactly at the ends of
/// every piece of the common refinement.
pub fn nakano_inclusion(p: &ExponentFunction, q: &ExponentFunction) -> bool {
    let mut cuts = p.breakpoints();
    cuts.extend(q.breakpoints());
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    cuts.windows(2).filter(|w| w[1] > w[0]).all(|w| {
        let mid = 0.5 * (w[0] + w[1]);
        let (pp, qq) = (p.piece_at(mid), q.piece_at(mid));
        [w[0], w[1]].iter().all(|&t| pp.value(t) <= qq.value(t) + 1e-12)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_o_examples() {
        let v = small_o_at_zero(&ConcaveGenerator::power(1.0), &ConcaveGenerator::power(0.5));
        assert_eq!(v.kind, LimitKind::TendsToZero);
        assert_eq!(v.exact, Some(LimitKind::TendsToZero));
        let g = ConcaveGenerator::power(0.5);
        let v = small_o_at_zero(&g, &g);
        assert_eq!((v.kind, v.exact), (LimitKind::BoundedAway, Some(LimitKind::BoundedAway)));
        let v = small_o_at_zero(&ConcaveGenerator::power(0.5), &ConcaveGenerator::pow_log(0.5, 1.0));
        assert_eq!((v.kind, v.exact), (LimitKind::TendsToZero, Some(LimitKind::TendsToZero)));
        let v = small_o_at_zero(&ConcaveGenerator::power(0.5), &ConcaveGenerator::power(1.0));
        assert_eq!(v.kind, LimitKind::BoundedAway);
    }

    #[test]
    fn decay_to_positive_limit_is_bounded_away() {
        let s: Vec<f64> = (1..=60).map(|k| 1.0 + 2f64.powf(-(k as f64) / 4.0)).collect();
        assert_eq!(classify_decay(&s).0, LimitKind::BoundedAway);
    }

    #[test]
    fn lorentz_and_marcinkiewicz_inclusion() {
        let (t, sq) = (ConcaveGenerator::power(1.0), ConcaveGenerator::power(0.5));
        let r = lorentz_inclusion(&sq, &t);
        assert!(r.holds() && r.constant <= 1.0 + 1e-15);
        let r = lorentz_inclusion(&t, &sq);
        assert_eq!(r.holds, Some(false));
        let r = lorentz_inclusion(&sq, &sq);
        assert!(r.holds() && r.constant == 1.0);
        assert!(marcinkiewicz_inclusion(&t, &sq).holds());
        assert_eq!(marcinkiewicz_inclusion(&sq, &t).holds, Some(false));
        let r = lorentz_inclusion(&sq, &ConcaveGenerator::pow_log(0.5, 1.0));
        assert_eq!(r.holds, Some(false));
    }

    #[test]
    fn orlicz_inclusion_examples() {
        let r = orlicz_inclusion(&ConvexGenerator::power(2.0), &ConvexGenerator::power(1.0));
        assert!(r.holds() && r.constant == 1.0 && r.threshold == Some(1.0));
        assert_eq!(orlicz_inclusion(&ConvexGenerator::power(1.0), &ConvexGenerator::power(2.0)).holds, Some(false));
        assert!(orlicz_inclusion(&ConvexGenerator::power(3.0), &ConvexGenerator::pow_log(2.0, 1.0)).holds());
    }

    #[test]
    fn dss_examples() {
        let t2 = ConvexGenerator::power(2.0);
        match dss_orlicz_search(&t2, &t2, 1.0, 100) {
            DssSearch::Found { points, .. } => assert_eq!(points, vec![(1.0, 1.0)]),
            other => panic!("{other:?}"),
        }
        let t1 = ConvexGenerator::power(1.0);
        for c in [0.01, 0.5, 3.0] {
            match dss_orlicz_search(&t1, &t2, c, 100) {
                DssSearch::Found { points, .. } => assert!(points[0].0 >= 1.0 / c),
                other => panic!("{other:?}"),
            }
        }
        assert!(!dss_orlicz_search(&t2, &t1, 0.5, 500).is_found());
        match dss_orlicz_search(&ConvexGenerator::exp_pow(1.0), &ConvexGenerator::exp_pow(1.0), 1.0, 10) {
            DssSearch::Found { warning, .. } => assert!(warning.is_some()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nnls_small_system() {
        // columns (1,0), (0,1): target (−1, 2) clamps the first weight at 0
        let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(nnls(&rows, &[-1.0, 2.0]).unwrap(), vec![0.0, 2.0]);
    }

    #[test]
    fn index_gap_examples() {
        assert!(index_gap(&ConvexGenerator::power(2.0), &ConvexGenerator::power(3.0)));
        assert!(!index_gap(&ConvexGenerator::power(2.0), &ConvexGenerator::power(2.0)));
        assert!(index_gap(&ConvexGenerator::pow_log(2.0, 1.0), &ConvexGenerator::power(2.5)));
    }

    #[test]
    fn essential_range_examples() {
        let r = essential_range(&ExponentFunction::constant(2.0).unwrap());
        assert_eq!(r.intervals(), &[(2.0, 2.0)]);
        let r = essential_range(&ExponentFunction::step(3.0, 0.5, 2.0).unwrap());
        assert_eq!(r.intervals(), &[(2.0, 2.0), (3.0, 3.0)]);
        let r = essential_range(&ExponentFunction::affine(2.0, 3.0).unwrap());
        assert_eq!(r.intervals(), &[(2.0, 3.0)]);
        assert!(r.contains(2.5) && !r.contains(3.5));
    }

    #[test]
    fn nakano_inclusion_examples() {
        let two = ExponentFunction::constant(2.0).unwrap();
        assert!(nakano_inclusion(&two, &ExponentFunction::constant(3.0).unwrap()));
        assert!(nakano_inclusion(&two, &two));
        let p = ExponentFunction::step(3.0, 0.5, 2.0).unwrap();
        assert!(!nakano_inclusion(&p, &ExponentFunction::constant(2.5).unwrap()));
    }
}
