//! The escape generator `φ(t) = ∫₀ᵗ ψ′(s) F(s)^{−1/2} ds`, `F(s) = ∫₀ˢ x*ψ′`.
//!
//! `F` is tabulated on 16 nodes per octave down to `2^{−64}` (plus the
//! breakpoints of `x*`) and completed between nodes by adaptive Simpson, so
//! values carry quadrature error only. Below the last node both `F` and `φ`
//! are extended as powers with the local log-slope.

use super::ConcaveGenerator;
use crate::error::{Error, Result};
use crate::funcrep::MonotoneFunction;
use crate::quad::{adaptive_simpson, integrate_toward_singularity, QuadConfig};
use serde::{Deserialize, Serialize};

const OCTAVES: i32 = 64;
const PER_OCTAVE: i32 = 16;
const LOCAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "EscapeRepr", into = "EscapeRepr")]
pub struct EscapeGenerator {
    base: ConcaveGenerator,
    x: MonotoneFunction,
    nodes: Vec<f64>,
    f_nodes: Vec<f64>,
    f_gamma: f64,
    /// `φ(2^{−k})` for `k = 0..=OCTAVES`.
    phi_cuts: Vec<f64>,
    phi_gamma: f64,
}

#[derive(Serialize, Deserialize)]
struct EscapeRepr {
    base: ConcaveGenerator,
    x: MonotoneFunction,
}

impl TryFrom<EscapeRepr> for EscapeGenerator {
    type Error = Error;
    fn try_from(r: EscapeRepr) -> Result<Self> {
        EscapeGenerator::new(r.x, r.base)
    }
}

impl From<EscapeGenerator> for EscapeRepr {
    fn from(e: EscapeGenerator) -> Self {
        EscapeRepr { base: e.base, x: e.x }
    }
}

impl PartialEq for EscapeGenerator {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.x == other.x
    }
}

impl EscapeGenerator {
    /// `x` must be a decreasing rearrangement; `base` a closed-family generator.
    pub fn new(x: MonotoneFunction, base: ConcaveGenerator) -> Result<Self> {
        if base.params().is_none() {
            return Err(Error::NotClosedForm("escape base must be a closed-family generator".into()));
        }
        if x.is_degenerate() {
            return Err(Error::Degenerate("escape generator of the zero function".into()));
        }
        let mut e = EscapeGenerator {
            base,
            x,
            nodes: Vec::new(),
            f_nodes: Vec::new(),
            f_gamma: 1.0,
            phi_cuts: Vec::new(),
            phi_gamma: 0.5,
        };
        e.tabulate_f()?;
        e.tabulate_phi()?;
        Ok(e)
    }

    pub fn base(&self) -> &ConcaveGenerator {
        &self.base
    }

    pub fn rearranged(&self) -> &MonotoneFunction {
        &self.x
    }

    fn h(&self, t: f64) -> f64 {
        let v = self.x.evaluate(t);
        if v == 0.0 {
            0.0
        } else {
            v * self.base.slope(t)
        }
    }

    fn tabulate_f(&mut self) -> Result<()> {
        let t_min = 2f64.powi(-OCTAVES);
        let mut nodes: Vec<f64> =
            (0..=OCTAVES * PER_OCTAVE).map(|j| 2f64.powf(-(j as f64) / PER_OCTAVE as f64)).collect();
        nodes.extend(self.x.breakpoints().into_iter().filter(|b| *b > t_min && *b < 1.0));
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup();
        let head = integrate_toward_singularity(&|d| self.h(d), t_min, &QuadConfig::with_tolerance(1e-6));
        if !head.is_converged() {
            return Err(Error::Precondition(format!("x* psi' is not integrable near 0 (status {:?})", head.status)));
        }
        let mut f = Vec::with_capacity(nodes.len());
        let mut acc = head.value;
        f.push(acc);
        for w in nodes.windows(2) {
            acc += adaptive_simpson(&|t| self.h(t), w[0], w[1], LOCAL_TOL).0;
            f.push(acc);
        }
        if !(acc.is_finite() && acc > 0.0) {
            return Err(Error::Precondition(format!("F(1) = {acc} is not a positive finite number")));
        }
        self.f_gamma = if head.value > 0.0 { t_min * self.h(t_min) / head.value } else { 1.0 };
        self.nodes = nodes;
        self.f_nodes = f;
        Ok(())
    }

    /// `F(t) = ∫₀ᵗ x*ψ′`.
    pub fn f_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return *self.f_nodes.last().unwrap();
        }
        let t_min = self.nodes[0];
        if t <= t_min {
            return self.f_nodes[0] * (t / t_min).powf(self.f_gamma);
        }
        let i = self.nodes.partition_point(|n| *n <= t) - 1;
        let base = self.f_nodes[i];
        if self.nodes[i] == t {
            return base;
        }
        base + adaptive_simpson(&|s| self.h(s), self.nodes[i], t, LOCAL_TOL).0
    }

    /// `F(1)`.
    pub fn f_total(&self) -> f64 {
        *self.f_nodes.last().unwrap()
    }

    /// `y(t) = F(t)^{−1/2}`.
    pub fn y(&self, t: f64) -> f64 {
        self.f_at(t).powf(-0.5)
    }

    pub fn slope(&self, t: f64) -> f64 {
        self.base.slope(t) * self.y(t)
    }

    fn tabulate_phi(&mut self) -> Result<()> {
        let c_min = 2f64.powi(-OCTAVES);
        let head = integrate_toward_singularity(&|d| self.slope(d), c_min, &QuadConfig::with_tolerance(1e-6));
        if !head.is_converged() {
            return Err(Error::Precondition("psi' F^{-1/2} is not integrable near 0".into()));
        }
        let mut cuts = vec![0.0; OCTAVES as usize + 1];
        cuts[OCTAVES as usize] = head.value;
        for k in (0..OCTAVES).rev() {
            let (a, b) = (2f64.powi(-k - 1), 2f64.powi(-k));
            cuts[k as usize] = cuts[k as usize + 1] + adaptive_simpson(&|t| self.slope(t), a, b, LOCAL_TOL).0;
        }
        self.phi_gamma = c_min * self.slope(c_min) / head.value;
        self.phi_cuts = cuts;
        Ok(())
    }

    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return self.phi_cuts[0];
        }
        let c_min = 2f64.powi(-OCTAVES);
        if t <= c_min {
            return self.phi_cuts[OCTAVES as usize] * (t / c_min).powf(self.phi_gamma);
        }
        let k = (-t.log2()).floor().min(OCTAVES as f64) as i32;
        let ck = 2f64.powi(-k);
        let (k, ck) = if ck > t { (k + 1, 0.5 * ck) } else { (k, ck) };
        let base = self.phi_cuts[k as usize];
        if ck == t {
            return base;
        }
        base + adaptive_simpson(&|s| self.slope(s), ck, t, LOCAL_TOL).0
    }
}
