use super::{to_value, Claim, Expect, WitnessReport};
use crate::error::{Error, Result};
use crate::funcrep::{PiecewiseFunction, Segment};
use crate::generators::{ExponentFunction, ExponentPiece};
use crate::inclusions::{essential_range, nakano_inclusion};
use crate::norms::{
    log_sum_exp, nakano_modular_with, nakano_norm, seq_nakano_norm, Evidence, ExponentRule, NormConfig, NormResult,
    Status, TailRule, WeightRule, WeightedSeq,
};
use crate::quad::fitted_slope;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map};
use std::f64::consts::LN_2;

const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NakanoSeqOptions {
    /// `p_n`; the limit exponent is its limit.
    pub exponents: ExponentRule,
    pub weights: WeightRule,
    /// Blocks `m = 1..=M` per vector.
    pub blocks: usize,
    /// Disjoint vectors `x_1..x_V`.
    pub vectors: usize,
    /// Terms per block.
    pub terms: usize,
    pub probes: Vec<ExponentRule>,
}

impl Default for NakanoSeqOptions {
    fn default() -> Self {
        NakanoSeqOptions {
            exponents: ExponentRule::Constant { p: 1.0 },
            weights: WeightRule::Geometric { scale: 1.0, ratio: 0.5 },
            blocks: 12,
            vectors: 2,
            terms: 10_000,
            probes: [1.1, 1.5, 2.0].iter().map(|&p| ExponentRule::Constant { p }).collect(),
        }
    }
}

fn limit_of(rule: &ExponentRule) -> f64 {
    match rule {
        ExponentRule::Constant { p } => *p,
        ExponentRule::Harmonic { limit, .. } => *limit,
    }
}

/// `sup_{k ≥ from} p_k`.
fn sup_from(rule: &ExponentRule, from: u64) -> f64 {
    match rule {
        ExponentRule::Constant { p } => *p,
        ExponentRule::Harmonic { limit, amplitude } => limit + amplitude.max(0.0) / from.max(1) as f64,
    }
}

/// Indices of `Ω_{m,n}`: `r + 1 + B(j − 1)` with `r = (m−1)V + (n−1)`, `B = MV`.
fn omega(m: usize, n: usize, opts: &NakanoSeqOptions, j: usize) -> u64 {
    let big_b = (opts.blocks * opts.vectors) as u64;
    let r = ((m - 1) * opts.vectors + (n - 1)) as u64;
    r + 1 + big_b * (j as u64 - 1)
}

/// Block `x_{m,n}` with `a_{k_j} = (j w_{k_j})^{−1/q_m}` times `factor`, and a
/// geometric bound for its terms beyond the horizon.
fn seq_block(m: usize, n: usize, q: f64, ln_factor: f64, opts: &NakanoSeqOptions) -> Result<WeightedSeq> {
    let terms: Vec<(u64, f64)> = (1..=opts.terms)
        .map(|j| {
            let k = omega(m, n, opts, j);
            (k, ln_factor - ((j as f64).ln() + opts.weights.ln_at(k)) / q)
        })
        .collect();
    let first = omega(m, n, opts, opts.terms + 1);
    let sup_p = sup_from(&opts.exponents, first);
    let lw = opts.weights.ln_at(first);
    let e = 1.0 - sup_p / q;
    let tail = if e > 0.0 && lw < 0.0 {
        let (pmin, pmax) = opts.exponents.range();
        let scale = (pmin * ln_factor).max(pmax * ln_factor);
        let ln_step = match opts.weights {
            WeightRule::Geometric { ratio, .. } => ratio.ln() * (opts.blocks * opts.vectors) as f64,
        };
        TailRule::Geometric { ln_first: e * lw + scale, ln_ratio: e * ln_step }
    } else {
        TailRule::Unknown
    };
    WeightedSeq::new(terms, opts.exponents, opts.weights, tail)
}

/// Partial sums of `Σ |x_k|^{q_k} w_k` in index order, as a divergence
/// certificate: `Diverged` when the final partial sum exceeds `1e12` or the
/// log-partial sums keep increasing with positive slope.
fn probe_modular(terms: &[(u64, f64)], probe: &ExponentRule, weights: &WeightRule) -> NormResult {
    let mut sorted = terms.to_vec();
    sorted.sort_by_key(|t| t.0);
    let ls: Vec<f64> = sorted.iter().map(|&(k, la)| probe.at(k) * la + weights.ln_at(k)).collect();
    log_partial_certificate(&ls)
}

/// Certificate from terms given as logarithms.
fn log_partial_certificate(ls: &[f64]) -> NormResult {
    let mut evidence = Vec::new();
    let mut lacc = f64::NEG_INFINITY;
    let mut logs = Vec::new();
    let mut next = 1usize;
    for (i, &l) in ls.iter().enumerate() {
        lacc = log_sum_exp([lacc, l].into_iter());
        if i + 1 == next || i + 1 == ls.len() {
            evidence.push(Evidence { cutoff: (i + 1) as f64, partial: lacc.exp() });
            logs.push(lacc / LN_2);
            next *= 2;
        }
    }
    let w = &logs[logs.len().saturating_sub(10)..];
    let slope = fitted_slope(w);
    let increasing = w.windows(2).all(|p| p[1] > p[0]);
    if lacc > DIVERGENCE_THRESHOLD.ln() || (increasing && w.len() >= 4 && slope > 0.0) {
        NormResult {
            value: f64::INFINITY,
            abs_error: f64::INFINITY,
            status: Status::Diverged,
            evidence,
            slope: Some(slope),
        }
    } else {
        NormResult {
            value: lacc.exp(),
            abs_error: f64::INFINITY,
            status: Status::Inconclusive,
            evidence,
            slope: Some(slope),
        }
    }
}

/// Disjoint vectors `x_n = Σ_m 2^{−m} x_{m,n}` of a weighted Nakano sequence
/// space, each in the space and outside every probe space.
pub fn nakano_seq_witness(opts: &NakanoSeqOptions) -> Result<WitnessReport> {
    opts.weights.certify()?;
    let p = limit_of(&opts.exponents);
    if p < 1.0 || opts.exponents.range().0 < 1.0 {
        return Err(Error::Precondition("exponents must be >= 1".into()));
    }
    if opts.blocks == 0 || opts.vectors == 0 || opts.terms == 0 {
        return Err(Error::Precondition("blocks, vectors and terms must be positive".into()));
    }
    let mut claims = Vec::new();
    let mut notes = Vec::new();
    let mut vectors = Vec::new();
    for n in 1..=opts.vectors {
        let mut terms = Vec::new();
        let mut firsts = Vec::new();
        let mut ln_ratio = f64::NEG_INFINITY;
        let mut unknown_tail = false;
        let mut worst: f64 = 0.0;
        for m in 1..=opts.blocks {
            let q = p + 1.0 / m as f64;
            let raw = seq_block(m, n, q, 0.0, opts)?;
            let c = seq_nakano_norm(&raw);
            if !c.is_converged() {
                worst = f64::INFINITY;
                continue;
            }
            let unit = seq_block(m, n, q, -c.value.ln(), opts)?;
            let check = seq_nakano_norm(&unit);
            worst = worst.max(if check.is_converged() { (check.value - 1.0).abs() } else { f64::INFINITY });
            let placed = seq_block(m, n, q, -c.value.ln() - m as f64 * LN_2, opts)?;
            match placed.tail {
                TailRule::Geometric { ln_first, ln_ratio: lr } => {
                    firsts.push(ln_first);
                    ln_ratio = ln_ratio.max(lr);
                }
                TailRule::Zero => {}
                TailRule::Unknown => unknown_tail = true,
            }
            terms.extend(placed.terms);
        }
        claims.push(Claim::check(format!("blocks of x_{n} have unit norm"), worst, 1e-8));
        let tail = if unknown_tail {
            TailRule::Unknown
        } else if firsts.is_empty() {
            TailRule::Zero
        } else {
            TailRule::Geometric { ln_first: log_sum_exp(firsts.iter().copied()), ln_ratio }
        };
        let x = WeightedSeq::new(terms, opts.exponents, opts.weights, tail)?;
        claims.push(Claim::norm(format!("x_{n} lies in the space"), Expect::Converged, seq_nakano_norm(&x)));
        for (i, probe) in opts.probes.iter().enumerate() {
            let q_lim = limit_of(probe);
            if q_lim <= p {
                if n == 1 {
                    notes.push(format!("probe {i} skipped: its limit exponent does not exceed {p}"));
                }
                continue;
            }
            if n == 1 && !(1..=opts.blocks).any(|m| p + 1.0 / (m as f64) < q_lim) {
                notes.push(format!("probe {i}: no block with q_m below the probe within the horizon"));
            }
            claims.push(Claim::norm(
                format!("probe {i} modular of x_{n} is infinite"),
                Expect::Diverged,
                probe_modular(&x.terms, probe, &opts.weights),
            ));
        }
        vectors.push(x);
    }
    if matches!(opts.exponents, ExponentRule::Harmonic { .. }) {
        notes.push("variable exponents: blocks use q_m = lim p_n + 1/m coordinatewise, as in the constant case".into());
    }
    let mut objects = Map::new();
    objects.insert("options".into(), to_value(opts));
    objects.insert("limit".into(), json!(p));
    objects.insert(
        "vectors".into(),
        to_value(&vectors.iter().map(|v| json!({"terms": v.terms.len(), "tail": v.tail})).collect::<Vec<_>>()),
    );
    let horizon = [("blocks", opts.blocks as f64), ("terms", opts.terms as f64), ("vectors", opts.vectors as f64)];
    Ok(WitnessReport::assemble("nakano-seq", objects, claims, &horizon, notes))
}

/// Exact terms of one probe series at a given horizon, for oracles.
pub fn nakano_seq_probe_terms(opts: &NakanoSeqOptions, n: usize, probe: &ExponentRule) -> Result<Vec<f64>> {
    let p = limit_of(&opts.exponents);
    let mut ls = Vec::new();
    for m in 1..=opts.blocks {
        let q = p + 1.0 / m as f64;
        let c = seq_nakano_norm(&seq_block(m, n, q, 0.0, opts)?).value;
        let b = seq_block(m, n, q, -c.ln() - m as f64 * LN_2, opts)?;
        ls.extend(b.terms.iter().map(|&(k, la)| (k, probe.at(k) * la + opts.weights.ln_at(k))));
    }
    ls.sort_by_key(|t| t.0);
    Ok(ls.into_iter().map(|t| t.1).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NakanoFunctionOptions {
    /// Blocks `m = 1..=M`, `q_m = r + 1/m`.
    pub blocks: usize,
    /// Sets materialized as a function.
    pub materialized: usize,
    /// Sets summed analytically.
    pub horizon: usize,
    pub probes: Vec<ExponentFunction>,
}

impl NakanoFunctionOptions {
    pub fn new(probes: Vec<ExponentFunction>) -> Self {
        NakanoFunctionOptions { blocks: 12, materialized: 36, horizon: 4096, probes }
    }
}

/// Disjoint sets `B_n` with `λ(B_n) = L·2^{−n}`, shrinking toward a point
/// where `p` takes the value `r`.
struct Extraction {
    scale: f64,
    /// Accumulation point and the side the sets lie on.
    point: f64,
    from_right: bool,
    constant: bool,
}

impl Extraction {
    fn find(p: &ExponentFunction, r: f64) -> Result<Extraction> {
        if let Some(pc) = p.pieces().iter().find(|q| q.is_constant() && q.start == r && q.width() > 0.0) {
            return Ok(Extraction { scale: pc.width(), point: pc.hi, from_right: false, constant: true });
        }
        let pc = p
            .pieces()
            .iter()
            .find(|q| !q.is_constant() && q.min() <= r && r <= q.max())
            .ok_or_else(|| Error::Extraction(format!("no piece of p attains {r}")))?;
        let slope = (pc.end - pc.start) / pc.width();
        let t_r = (pc.lo + (r - pc.start) / slope).clamp(pc.lo, pc.hi);
        let from_right = t_r < pc.hi;
        let side = if from_right { pc.hi - t_r } else { t_r - pc.lo };
        // NaN-safe: a NaN side is degenerate too
        if side.is_nan() || side <= 0.0 {
            return Err(Error::Extraction("degenerate piece".into()));
        }
        Ok(Extraction { scale: side.min(0.5 / slope.abs()), point: t_r, from_right, constant: false })
    }

    fn ln_measure(&self, n: usize) -> f64 {
        self.scale.ln() - n as f64 * LN_2
    }

    /// `B_n` as an interval `(a, b]`.
    fn interval(&self, n: usize) -> (f64, f64) {
        let l = self.scale;
        if self.constant {
            let lo = self.point - l;
            return (lo + l * (1.0 - 2f64.powi(1 - n as i32)), lo + l * (1.0 - 2f64.powi(-(n as i32))));
        }
        let (near, far) = (l * 2f64.powi(-(n as i32)), l * 2f64.powi(1 - n as i32));
        if self.from_right {
            (self.point + near, self.point + far)
        } else {
            (self.point - far, self.point - near)
        }
    }
}

/// `(inf, sup)` of `q` over `(a, b]`.
fn range_on(q: &ExponentFunction, a: f64, b: f64) -> (f64, f64) {
    q.pieces().iter().filter(|pc| pc.hi > a && pc.lo < b).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), pc| {
        let (u, v) = (pc.value(a.max(pc.lo)), pc.value(b.min(pc.hi)));
        (lo.min(u.min(v)), hi.max(u.max(v)))
    })
}

/// Limit of `q` at the accumulation point from the side of the sets.
fn side_limit(q: &ExponentFunction, e: &Extraction) -> f64 {
    let pc: &ExponentPiece = if e.from_right {
        q.pieces().iter().find(|pc| pc.lo <= e.point && e.point < pc.hi).unwrap_or_else(|| q.piece_at(e.point))
    } else {
        q.piece_at(e.point)
    };
    pc.value(e.point)
}

/// `Σ a_n χ_{B_n}` with `B_n ⊂ p^{−1}(r − 1/n, r + 1/n)`, in `L^{p(·)}` but
/// outside every `L^{q(·)}` with `q ≥ p` and `r ∉ R_{q(·)}`.
pub fn nakano_function_witness(p: &ExponentFunction, r: f64, opts: &NakanoFunctionOptions) -> Result<WitnessReport> {
    if !essential_range(p).contains(r) {
        return Err(Error::Precondition(format!("{r} is not in the essential range of p")));
    }
    if opts.horizon <= opts.materialized || opts.horizon <= opts.blocks || opts.blocks == 0 {
        return Err(Error::Precondition("horizon must exceed the materialized sets and the block count".into()));
    }
    let ex = Extraction::find(p, r)?;
    let block_of = |n: usize| ((n - 1) % opts.blocks + 1, (n - 1) / opts.blocks + 1);
    let ln_a = |n: usize| {
        let (m, j) = block_of(n);
        -((j as f64).ln() + ex.ln_measure(n)) / (r + 1.0 / m as f64)
    };

    let mut claims = Vec::new();
    let mut segs = Vec::new();
    let mut dev: f64 = 0.0;
    let mut sup_p = Vec::new();
    for n in 1..=opts.materialized {
        let (a, b) = ex.interval(n);
        let (lo, hi) = range_on(p, a, b);
        dev = dev.max(n as f64 * (hi - r).abs().max((lo - r).abs()));
        sup_p.push(hi);
        segs.push(Segment::constant(a, b, ln_a(n).exp())?);
    }
    claims.push(Claim::check("n |p - r| < 1 on every materialized B_n", dev, 1.0 - 1e-12));
    let f = PiecewiseFunction::new(segs)?;

    // remainder of the modular beyond the materialized sets, bounded term by term
    let s: f64 = 1.0;
    let big_p = r + 1.0 / opts.horizon as f64;
    let mid: Vec<f64> = (opts.materialized + 1..=opts.horizon)
        .map(|n| {
            let (a, b) = ex.interval(n);
            let (lo, hi) = if a < b { range_on(p, a, b) } else { (r, r) };
            let la = ln_a(n) - s.ln();
            let e = if la >= 0.0 { hi.max(r + 0.0) } else { lo };
            e * la + ex.ln_measure(n)
        })
        .collect();
    let mut tail = ex.scale * 2f64.powi(-(opts.horizon as i32));
    for m in 1..=opts.blocks {
        let first = (opts.horizon + 1..).find(|&n| block_of(n).0 == m).unwrap();
        let e = 1.0 - big_p / (r + 1.0 / m as f64);
        tail += (e * ex.ln_measure(first)).exp() / (1.0 - 2f64.powf(-(opts.blocks as f64) * e));
    }
    let materialized = nakano_modular_with(&f, p, s, &NormConfig::default());
    let remainder = log_sum_exp(mid.iter().copied()).exp() + tail;
    let total = NormResult {
        value: materialized.value + remainder,
        abs_error: materialized.abs_error + remainder,
        status: materialized.status,
        evidence: materialized.evidence.clone(),
        slope: None,
    };
    claims.push(Claim::norm("p-modular of f is finite", Expect::Converged, total));

    let mut notes = Vec::new();
    let mut n0s = Vec::new();
    for (i, q) in opts.probes.iter().enumerate() {
        if !nakano_inclusion(p, q) || essential_range(q).contains(r) {
            notes.push(format!("probe {i} skipped: needs q >= p and r outside its essential range"));
            continue;
        }
        let limit = side_limit(q, &ex);
        let infs: Vec<f64> = (1..=60).map(|n| ex.interval(n)).map(|(a, b)| range_on(q, a, b).0).collect();
        let n0 = (1..60).find(|&n0| {
            let floor = r + 1.0 / n0 as f64;
            limit > floor && infs[n0..].iter().all(|v| *v > floor)
        });
        let Some(n0) = n0 else {
            claims.push(Claim::flag(format!("probe {i}: q exceeds r + 1/n0 near the sets"), false));
            continue;
        };
        if n0 >= opts.blocks {
            notes.push(format!("probe {i}: n0 = {n0} leaves no block with q_m < r + 1/n0"));
        }
        n0s.push(json!({"probe": i, "n0": n0}));
        let e = r + 1.0 / n0 as f64;
        let ls: Vec<f64> = (n0 + 1..=opts.horizon).map(|n| e * ln_a(n) + ex.ln_measure(n)).collect();
        claims.push(Claim::norm(
            format!("probe {i} lower sum is infinite"),
            Expect::Diverged,
            log_partial_certificate(&ls),
        ));
    }

    let mut objects = Map::new();
    objects.insert("p".into(), to_value(p));
    objects.insert("r".into(), json!(r));
    objects.insert("options".into(), to_value(opts));
    objects.insert("f".into(), to_value(&f));
    objects.insert("sup_p".into(), to_value(&sup_p));
    objects.insert("n0".into(), to_value(&n0s));
    let horizon =
        [("blocks", opts.blocks as f64), ("materialized", opts.materialized as f64), ("sets", opts.horizon as f64)];
    Ok(WitnessReport::assemble("nakano-function", objects, claims, &horizon, notes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapingExponent {
    /// `p` on `A_{n₀}`, `p + 1` elsewhere.
    pub q: ExponentFunction,
    pub n0: u64,
    /// `λ(A_{n₀})`, `A_n = {|f| > n}`.
    pub level_measure: f64,
    /// Measure of `{q ≠ p}`.
    pub raised_measure: f64,
    /// Scale `s` with `ρ_q(f/s)` finite.
    pub scale: f64,
    pub modular: NormResult,
}

/// The exponent `q = p·χ_{A_{n₀}} + (p + 1)·χ_{[0,1]∖A_{n₀}}`, showing that
/// `f ∈ L^{q(·)}` for some `q ≥ p`, `q ≠ p`.
pub fn escaping_exponent(f: &PiecewiseFunction, p: &ExponentFunction) -> Result<EscapingExponent> {
    let norm = nakano_norm(f, p);
    if !norm.is_converged() {
        return Err(Error::Precondition(format!("L^p(.) norm of f is {:?}", norm.status)));
    }
    let level = |n: u64| f.distribution_function(n as f64);
    let mut hi = 1u64;
    while level(hi) >= 1.0 {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // level(lo) >= 1 or lo == 0; level(hi) < 1
    while hi - lo > 1 && lo > 0 {
        let mid = lo + (hi - lo) / 2;
        if level(mid) < 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let n0 = hi;
    let s0 = n0 as f64;
    let mut cuts = f.breakpoints();
    for mp in f.monotone_pieces() {
        let d = mp.measure_above(s0, true);
        cuts.push(mp.segment.lo);
        cuts.push(mp.segment.hi);
        cuts.push(if mp.increasing { mp.segment.hi - d } else { mp.segment.lo + d });
    }
    let refined = p.refine(&cuts);
    let q = refined.shifted_pieces(|_, pc| if f.evaluate(0.5 * (pc.lo + pc.hi)).abs() > s0 { 0.0 } else { 1.0 });
    let raised_measure: f64 =
        q.pieces().iter().zip(refined.pieces()).filter(|(a, b)| a.start != b.start).map(|(a, _)| a.width()).sum();

    let cfg = NormConfig::default();
    let mut scale = 1.0;
    let mut modular = nakano_modular_with(f, &q, scale, &cfg);
    while !modular.is_converged() && scale < 1e12 {
        scale *= 2.0;
        modular = nakano_modular_with(f, &q, scale, &cfg);
    }
    Ok(EscapingExponent { q, n0, level_measure: level(n0), raised_measure, scale, modular })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_opts() -> NakanoSeqOptions {
        NakanoSeqOptions { terms: 400, blocks: 12, ..Default::default() }
    }

    #[test]
    fn seq_witness_is_verified() {
        let r = nakano_seq_witness(&small_opts()).unwrap();
        assert!(r.all_verified(), "{}", r.to_json());
    }

    #[test]
    fn harmonic_exponents_mirror_constant_case() {
        let opts = NakanoSeqOptions {
            exponents: ExponentRule::Harmonic { limit: 1.0, amplitude: 0.5 },
            probes: vec![ExponentRule::Harmonic { limit: 1.5, amplitude: 0.1 }],
            ..small_opts()
        };
        let r = nakano_seq_witness(&opts).unwrap();
        assert!(r.all_verified(), "{}", r.to_json());
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn seq_witness_rejects_growing_weights() {
        let opts = NakanoSeqOptions { weights: WeightRule::Geometric { scale: 1.0, ratio: 1.0 }, ..small_opts() };
        assert!(nakano_seq_witness(&opts).is_err());
    }

    #[test]
    fn function_witness_constant_exponent() {
        let p = ExponentFunction::constant(2.0).unwrap();
        let opts = NakanoFunctionOptions::new(vec![ExponentFunction::constant(2.5).unwrap()]);
        let r = nakano_function_witness(&p, 2.0, &opts).unwrap();
        assert!(r.all_verified(), "{}", r.to_json());
        assert!(matches!(nakano_function_witness(&p, 3.0, &opts), Err(Error::Precondition(_))));
    }

    #[test]
    fn function_witness_affine_exponent() {
        let p = ExponentFunction::affine(2.0, 3.0).unwrap();
        // q = p + 1 on (0.4, 0.6], p elsewhere: 2.5 is no longer essential
        let q = ExponentFunction::new(vec![
            ExponentPiece { lo: 0.0, hi: 0.4, start: 2.0, end: 2.4 },
            ExponentPiece { lo: 0.4, hi: 0.6, start: 3.4, end: 3.6 },
            ExponentPiece { lo: 0.6, hi: 1.0, start: 2.6, end: 3.0 },
        ])
        .unwrap();
        let r = nakano_function_witness(&p, 2.5, &NakanoFunctionOptions::new(vec![q])).unwrap();
        assert!(r.all_verified(), "{}", r.to_json());
    }

    #[test]
    fn escaping_exponent_of_quartic_root() {
        let f = PiecewiseFunction::from_segment(Segment::power(0.0, 1.0, 1.0, 0.0, -0.25).unwrap());
        let p = ExponentFunction::constant(2.0).unwrap();
        let e = escaping_exponent(&f, &p).unwrap();
        assert_eq!(e.n0, 2);
        assert!((e.level_measure - 1.0 / 16.0).abs() < 1e-15);
        assert!((e.raised_measure - 15.0 / 16.0).abs() < 1e-12);
        assert!(e.modular.is_converged());
        assert_eq!(e.q.value(0.01), 2.0);
        assert_eq!(e.q.value(0.5), 3.0);
    }

    #[test]
    fn escaping_exponent_of_bounded_function() {
        let f = PiecewiseFunction::indicator(0.0, 1.0, 0.5).unwrap();
        let e = escaping_exponent(&f, &ExponentFunction::constant(1.5).unwrap()).unwrap();
        assert_eq!(e.n0, 1);
        assert!((e.raised_measure - 1.0).abs() < 1e-15);
    }
}
