use super::{to_value, Claim, Expect, WitnessReport};
use crate::error::{Error, Result};
use crate::funcrep::{disjoint_sum, PiecewiseFunction, Segment};
use crate::generators::ConvexGenerator;
use crate::inclusions::{index_gap, orlicz_inclusion};
use crate::norms::{luxemburg_norm, orlicz_modular, orlicz_modular_with, NormConfig};
use crate::quad::{NormResult, Status};
use serde_json::{json, Map};

const LEVELS: usize = 60;

/// `b₁ = 1`, `b_{n+1} = max(b_n, min(2b_n, S_{n+1}^{−1/2}))` with
/// `S_n = Σ_{k≥n} c_k`, where `c[0] = c₁` and `tail = Σ_{k>len} c_k`.
pub fn b_rule(c: &[f64], tail: f64) -> Vec<f64> {
    let mut s = vec![tail; c.len() + 1];
    for i in (0..c.len()).rev() {
        s[i] = s[i + 1] + c[i];
    }
    let mut b = Vec::with_capacity(c.len());
    if c.is_empty() {
        return b;
    }
    b.push(1.0);
    for i in 1..c.len() {
        let prev = b[i - 1];
        let cap = if s[i] > 0.0 { s[i].powf(-0.5) } else { f64::INFINITY };
        b.push(prev.max((2.0 * prev).min(cap)));
    }
    b
}

/// Upper bound for `Σ b_n c_n` under [`b_rule`]: `2√S₁` when `S₁ ≤ 1`,
/// `S₁ + 1` otherwise.
pub fn b_rule_bound(s1: f64) -> f64 {
    if s1 <= 1.0 {
        2.0 * s1.sqrt()
    } else {
        s1 + 1.0
    }
}

/// Modular at growing quadrature horizons. A stepwise-scaled generator changes
/// its factor every few octaves, so the default horizon can stop mid-step.
fn settled_modular(x: &PiecewiseFunction, phi: &ConvexGenerator, s: f64) -> NormResult {
    let mut r = orlicz_modular(x, phi, s);
    for octaves in [120, 240, 480] {
        if r.status != Status::Inconclusive {
            break;
        }
        r = orlicz_modular_with(x, phi, s, &NormConfig { octaves, ..NormConfig::default() });
    }
    r
}

/// `Σ_{n≤N} b_n c_n + b_N · tail`.
fn weighted_total(b: &[f64], c: &[f64], tail: f64) -> f64 {
    b.iter().zip(c).map(|(b, c)| b * c).sum::<f64>() + b.last().copied().unwrap_or(1.0) * tail
}

/// Geometric tail beyond the last level, exact when the final ratios agree.
fn level_tail(c: &[f64], beyond: f64) -> (f64, bool) {
    if beyond == 0.0 {
        return (0.0, true);
    }
    let last: Vec<f64> = c[c.len() - 5..].to_vec();
    if last.iter().any(|v| *v <= 0.0) {
        return (f64::INFINITY, false);
    }
    let ratios: Vec<f64> = last.windows(2).map(|w| w[1] / w[0]).collect();
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    if hi >= 1.0 {
        return (f64::INFINITY, false);
    }
    (c[c.len() - 1] * hi / (1.0 - hi), hi - lo <= 1e-9 * hi)
}

/// Builds `φ = b_n ψ` on `(2^n, 2^{n+1}]` with `b_n → ∞` slowly enough that
/// `x ∈ L^φ ⊊ L^ψ`.
pub fn orlicz_escape(x: &PiecewiseFunction, psi: &ConvexGenerator) -> Result<(WitnessReport, ConvexGenerator)> {
    let norm = luxemburg_norm(x, psi);
    if !norm.is_converged() {
        return Err(Error::Precondition(format!("L^psi norm of x is {:?}", norm.status)));
    }
    let d2 = psi.delta2_check();
    if !d2.holds() {
        return Err(Error::Precondition("psi does not satisfy the Delta2 condition at infinity".into()));
    }
    let level = |n: usize| x.measure_at_least(2f64.powi(n as i32));
    let c: Vec<f64> =
        (1..=LEVELS).map(|n| psi.value(2f64.powi(n as i32)) * (level(n) - level(n + 1)).max(0.0)).collect();
    let (tail, tail_exact) = level_tail(&c, level(LEVELS + 1));
    let s1 = c.iter().sum::<f64>() + tail;
    let mut notes = Vec::new();
    let degenerate = s1 == 0.0;
    let b: Vec<f64> = if degenerate {
        notes.push("x is essentially bounded by 2: every level set is null, b_n = n".into());
        (1..=LEVELS).map(|n| n as f64).collect()
    } else {
        b_rule(&c, tail)
    };
    let phi = ConvexGenerator::Scaled { base: Box::new(psi.clone()), factors: b.clone() };
    let total = weighted_total(&b, &c, tail);

    let mut claims = vec![Claim::norm("L^psi norm of x is finite", Expect::Converged, norm)];
    claims.push(Claim::flag("tail of the level sums is in closed form", tail_exact));
    claims.push(Claim::flag("b_n is nondecreasing", b.windows(2).all(|w| w[1] >= w[0])));
    let max_ratio = b.windows(2).map(|w| w[1] / w[0]).fold(1.0, f64::max);
    claims.push(Claim::check("b_{n+1}/b_n <= 2", max_ratio, 2.0));
    let last = *b.last().unwrap();
    let unbounded = if degenerate { true } else { last > 1e3 || tail <= 1e-12 * s1 };
    claims.push(Claim::flag("b_n grows without bound", unbounded));
    claims.push(Claim::check("sum of b_n c_n within the summation bound", total, b_rule_bound(s1)));
    if s1 > 1.0 {
        notes.push(format!("S_1 = {s1} > 1: the bound used is S_1 + 1 instead of 2 sqrt(S_1)"));
    }
    claims.push(Claim::flag("L^phi is contained in L^psi", orlicz_inclusion(&phi, psi).holds()));
    let bound = psi.value(2.0) * (1.0 - level(1)) + d2.sup_ratio * total;
    claims.push(Claim::norm(
        "phi-modular of x is finite",
        Expect::ConvergedAtMost { bound: bound * (1.0 + 1e-9) },
        settled_modular(x, &phi, 1.0),
    ));

    let mut objects = Map::new();
    objects.insert("x".into(), to_value(x));
    objects.insert("psi".into(), to_value(psi));
    objects.insert("c".into(), to_value(&c));
    objects.insert("tail".into(), json!(tail));
    objects.insert("s1".into(), json!(s1));
    objects.insert("b".into(), to_value(&b));
    objects.insert("phi".into(), to_value(&phi));
    let report = WitnessReport::assemble("orlicz-escape", objects, claims, &[("levels", LEVELS as f64)], notes);
    Ok((report, phi))
}

/// A function on `(0, 1]` in `L^ψ` but outside `L^φ`, for closed-family pairs.
fn catalog_witness(psi: &ConvexGenerator, phi: &ConvexGenerator) -> Result<PiecewiseFunction> {
    use ConvexGenerator::*;
    let miss = || {
        Error::CatalogMiss(format!(
            "({}, {})",
            serde_json::to_string(psi).unwrap(),
            serde_json::to_string(phi).unwrap()
        ))
    };
    let seg = match (psi, phi) {
        (PowLog { p, .. }, PowLog { p: pp, .. }) if pp > p => {
            let gamma = 0.5 * (1.0 / p + 1.0 / pp);
            Segment::power(0.0, 1.0, 1.0, 0.0, -gamma)?
        }
        // exp(t^{−r/(2p)}) blows up within a few octaves at any scale
        (PowLog { p, .. }, ExpPow { .. }) => Segment::power(0.0, 1.0, 1.0, 0.0, -0.5 / p)?,
        _ => return Err(miss()),
    };
    Ok(PiecewiseFunction::from_segment(seg))
}

const PROBE_SCALES: [f64; 3] = [0.25, 1.0, 4.0];

/// `x = Σ 2^{−n} x_n` with `x_n` supported on `(2^{−n}, 2^{1−n}]`, of unit
/// `L^ψ` norm and outside `L^{φ_n}`.
pub fn orlicz_union_witness(psi: &ConvexGenerator, phis: &[ConvexGenerator]) -> Result<WitnessReport> {
    for (i, phi) in phis.iter().enumerate() {
        if !orlicz_inclusion(phi, psi).holds() {
            return Err(Error::Precondition(format!("L^phi[{i}] is not contained in L^psi")));
        }
    }
    let mut blocks = Vec::new();
    let mut claims = Vec::new();
    for (i, phi) in phis.iter().enumerate() {
        let n = i as i32 + 1;
        let g = catalog_witness(psi, phi)?.translate_dilate(2f64.powi(-n), 2f64.powi(-n))?;
        let c = luxemburg_norm(&g, psi);
        if !c.is_converged() {
            return Err(Error::CatalogMiss(format!("catalog witness for phi[{i}] has L^psi norm {:?}", c.status)));
        }
        let xn = g.scaled(1.0 / c.value);
        let check = luxemburg_norm(&xn, psi);
        claims.push(Claim::norm(
            format!("block {n} has unit L^psi norm"),
            Expect::ConvergedNear { target: 1.0, tol: 1e-8 },
            check,
        ));
        let restricted = xn.scaled(2f64.powi(-n));
        for s in PROBE_SCALES {
            claims.push(Claim::norm(
                format!("phi[{i}]-modular of block {n} at scale {s} is infinite"),
                Expect::Diverged,
                orlicz_modular(&restricted, phi, s),
            ));
        }
        blocks.push(xn);
    }
    let coeffs: Vec<f64> = (1..=blocks.len() as i32).map(|n| 2f64.powi(-n)).collect();
    let x = if blocks.is_empty() { PiecewiseFunction::zero() } else { disjoint_sum(&blocks, &coeffs)? };
    claims.insert(
        0,
        Claim::norm("L^psi norm of x is at most 1", Expect::ConvergedAtMost { bound: 1.0 }, luxemburg_norm(&x, psi)),
    );

    let mut objects = Map::new();
    objects.insert("psi".into(), to_value(psi));
    objects.insert("phis".into(), to_value(&phis));
    objects.insert("x".into(), to_value(&x));
    Ok(WitnessReport::assemble(
        "orlicz-union",
        objects,
        claims,
        &[("blocks", phis.len() as f64), ("octaves", 60.0)],
        Vec::new(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexOptions {
    pub count: usize,
    pub probes: Vec<ConvexGenerator>,
    pub scales: Vec<f64>,
}

impl IndexOptions {
    pub fn new(count: usize, probes: Vec<ConvexGenerator>) -> Self {
        IndexOptions { count, probes, scales: PROBE_SCALES.to_vec() }
    }
}

/// `x = Σ_{n≤N} 2^{−n} x̂_n`, `x̂_n` the normalized
/// `(t − 2^{−n−1})^{−1/q_n}` on `(2^{−n−1}, 2^{−n}]` with `q_n = q_ψ^∞ + 1/n`.
pub fn index_witness(psi: &ConvexGenerator, opts: &IndexOptions) -> Result<WitnessReport> {
    if !psi.delta2_check().holds() {
        return Err(Error::Precondition("psi does not satisfy the Delta2 condition at infinity".into()));
    }
    let q_inf = psi.orlicz_indices().q_inf;
    if !q_inf.is_finite() {
        return Err(Error::Precondition("upper index of psi is infinite".into()));
    }
    let mut claims = Vec::new();
    let mut blocks = Vec::new();
    let mut exponents = Vec::new();
    for n in 1..=opts.count as i32 {
        let q = q_inf + 1.0 / n as f64;
        let (lo, hi) = (2f64.powi(-n - 1), 2f64.powi(-n));
        let raw = PiecewiseFunction::from_segment(Segment::power(lo, hi, 1.0, lo, -1.0 / q)?);
        let c = luxemburg_norm(&raw, psi);
        if !c.is_converged() {
            return Err(Error::Precondition(format!("block {n} has L^psi norm {:?}", c.status)));
        }
        let xn = raw.scaled(1.0 / c.value);
        claims.push(Claim::norm(
            format!("block {n} has unit L^psi norm"),
            Expect::ConvergedNear { target: 1.0, tol: 1e-8 },
            luxemburg_norm(&xn, psi),
        ));
        blocks.push(xn);
        exponents.push(q);
    }
    let coeffs: Vec<f64> = (1..=blocks.len() as i32).map(|n| 2f64.powi(-n)).collect();
    let x = if blocks.is_empty() { PiecewiseFunction::zero() } else { disjoint_sum(&blocks, &coeffs)? };
    claims.insert(0, Claim::norm("psi-modular of x is finite", Expect::Converged, orlicz_modular(&x, psi, 1.0)));
    claims.insert(0, Claim::norm("L^psi norm of x is finite", Expect::Converged, luxemburg_norm(&x, psi)));
    let mut notes = Vec::new();
    for (i, phi) in opts.probes.iter().enumerate() {
        if !index_gap(psi, phi) {
            notes.push(format!("probe {i} skipped: no index gap"));
            continue;
        }
        for &s in &opts.scales {
            claims.push(Claim::norm(
                format!("probe {i} modular at scale {s} is infinite"),
                Expect::Diverged,
                orlicz_modular(&x, phi, s),
            ));
        }
    }

    let mut objects = Map::new();
    objects.insert("psi".into(), to_value(psi));
    objects.insert("q_inf".into(), json!(q_inf));
    objects.insert("exponents".into(), to_value(&exponents));
    objects.insert("probes".into(), to_value(&opts.probes));
    objects.insert("x".into(), to_value(&x));
    Ok(WitnessReport::assemble("index", objects, claims, &[("blocks", opts.count as f64), ("octaves", 60.0)], notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Outcome;

    #[test]
    fn b_rule_on_geometric_levels() {
        let c: Vec<f64> = (1..=60).map(|n| 15.0 / 16.0 * 4f64.powi(-n)).collect();
        let tail = c[59] / 3.0;
        let b = b_rule(&c, tail);
        let s1: f64 = c.iter().sum::<f64>() + tail;
        assert!((s1 - 0.3125).abs() < 1e-15);
        assert!(weighted_total(&b, &c, tail) <= 2.0 * s1.sqrt());
        assert!(b.windows(2).all(|w| w[1] >= w[0] && w[1] <= 2.0 * w[0]));
    }

    #[test]
    fn two_root_bound_needs_small_total() {
        // S₁ = 4: the first term alone already exceeds 2√S₁ - ε
        let eps = 1e-3;
        let c = [4.0 - eps, eps];
        let b = b_rule(&c, 0.0);
        let total = weighted_total(&b, &c, 0.0);
        assert!(total > 2.0 * 4f64.sqrt());
        assert!(total <= b_rule_bound(4.0));
    }

    #[test]
    fn escape_from_quartic_root() {
        let x = PiecewiseFunction::from_segment(Segment::power(0.0, 1.0, 1.0, 0.0, -0.25).unwrap());
        let (r, phi) = orlicz_escape(&x, &ConvexGenerator::power(2.0)).unwrap();
        assert!(r.all_verified(), "{}", r.to_json());
        assert!(phi.value(2f64.powi(40)) > 1e3 * 2f64.powi(80));
    }

    #[test]
    fn escape_from_bounded_function() {
        let x = PiecewiseFunction::indicator(0.0, 1.0, 1.0).unwrap();
        let (r, _) = orlicz_escape(&x, &ConvexGenerator::power(2.0)).unwrap();
        assert!(!r.notes.is_empty());
        assert!(r.all_verified(), "{}", r.to_json());
    }

    #[test]
    fn union_of_two_cubic_and_quartic() {
        let r = orlicz_union_witness(
            &ConvexGenerator::power(2.0),
            &[ConvexGenerator::power(3.0), ConvexGenerator::power(4.0)],
        )
        .unwrap();
        assert!(r.all_verified(), "{}", r.to_json());
        let r = orlicz_union_witness(&ConvexGenerator::power(2.0), &[]).unwrap();
        assert!(r.all_verified());
        let e = orlicz_union_witness(&ConvexGenerator::power(2.0), &[ConvexGenerator::pow_log(2.0, 1.0)]);
        assert!(matches!(e, Err(Error::CatalogMiss(_))));
    }

    #[test]
    fn union_with_exponential_members() {
        let r = orlicz_union_witness(&ConvexGenerator::power(2.0), &[ConvexGenerator::exp_pow(1.0)]).unwrap();
        assert!(r.all_verified(), "{}", r.to_json());
        // log-power witnesses between two exponential generators diverge only past the octave horizon
        let e = orlicz_union_witness(&ConvexGenerator::exp_pow(1.0), &[ConvexGenerator::exp_pow(2.0)]);
        assert!(matches!(e, Err(Error::CatalogMiss(_))));
    }

    #[test]
    fn index_witness_square_against_cube() {
        let opts = IndexOptions::new(3, vec![ConvexGenerator::power(3.0), ConvexGenerator::power(2.0)]);
        let r = index_witness(&ConvexGenerator::power(2.0), &opts).unwrap();
        assert!(r.all_verified(), "{}", r.to_json());
        assert_eq!(r.notes.len(), 1);
        let Outcome::Norm(m) = &r.claims[1].outcome else { panic!() };
        assert!(m.is_converged());
        assert!(matches!(index_witness(&ConvexGenerator::exp_pow(1.0), &opts), Err(Error::Precondition(_))));
    }
}
