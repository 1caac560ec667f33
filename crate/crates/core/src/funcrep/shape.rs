//! Analytic segment shapes.
//!
//! Every non-rearranged segment is a member of one family
//!
//! ```text
//! g(v) = c · v^α · L^β · (1 + κ/L),   L = ln(e/v) = 1 − ln v,
//! ```
//!
//! where `v` is a local coordinate measured from a shift point, either to the
//! right (`v = (t − shift)/scale`) or to the left (`v = (shift − t)/scale`).
//! Constants (`α = β = κ = 0`) and shifted powers (`β = κ = 0`) are the two
//! special cases with closed-form inverses and integrals.

use serde::{Deserialize, Serialize};

/// Direction in which the local coordinate grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `v = (t − shift) / scale`, singular point on the left.
    #[default]
    Right,
    /// `v = (shift − t) / scale`, singular point on the right.
    Left,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Right => Orientation::Left,
            Orientation::Left => Orientation::Right,
        }
    }
}

/// A point inside a segment `(lo, hi]`, carrying the distances to both ends so
/// that shapes anchored at an endpoint can be evaluated without cancellation.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub t: f64,
    pub from_lo: f64,
    pub from_hi: f64,
}

impl Point {
    pub fn at(lo: f64, hi: f64, t: f64) -> Self {
        Point { t, from_lo: t - lo, from_hi: hi - t }
    }

    /// Point at distance `d` from `lo`.
    pub fn from_lo(lo: f64, hi: f64, d: f64) -> Self {
        Point { t: lo + d, from_lo: d, from_hi: (hi - lo) - d }
    }

    /// Point at distance `d` from `hi`.
    pub fn from_hi(lo: f64, hi: f64, d: f64) -> Self {
        Point { t: hi - d, from_lo: (hi - lo) - d, from_hi: d }
    }
}

/// The analytic shape `c · v^α · L^β · (1 + κ/L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    pub coeff: f64,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    pub shift: f64,
    pub scale: f64,
    pub orientation: Orientation,
}

impl Shape {
    pub fn constant(c: f64) -> Self {
        Shape { coeff: c, alpha: 0.0, beta: 0.0, kappa: 0.0, shift: 0.0, scale: 1.0, orientation: Orientation::Right }
    }

    pub fn power(c: f64, shift: f64, alpha: f64) -> Self {
        Shape { coeff: c, alpha, beta: 0.0, kappa: 0.0, shift, scale: 1.0, orientation: Orientation::Right }
    }

    pub fn is_constant(&self) -> bool {
        self.coeff == 0.0 || (self.alpha == 0.0 && self.beta == 0.0 && self.kappa == 0.0)
    }

    /// Pure shifted power: closed-form inverse and antiderivative.
    pub fn is_power(&self) -> bool {
        self.beta == 0.0 && self.kappa == 0.0
    }

    /// Distance `u ≥ 0` from the shift point, using the exact endpoint distance
    /// when the shift coincides with an endpoint of the segment.
    #[inline]
    pub fn local(&self, lo: f64, hi: f64, p: Point) -> f64 {
        match self.orientation {
            Orientation::Right => {
                if self.shift == lo {
                    p.from_lo
                } else {
                    p.t - self.shift
                }
            }
            Orientation::Left => {
                if self.shift == hi {
                    p.from_hi
                } else {
                    self.shift - p.t
                }
            }
        }
    }

    /// Value as a function of the scaled local coordinate `v`.
    pub fn at_v(&self, v: f64) -> f64 {
        if self.is_constant() {
            return self.coeff;
        }
        if v <= 0.0 {
            return self.coeff * self.limit_at_zero();
        }
        let mut g = if self.alpha == 0.0 { 1.0 } else { v.powf(self.alpha) };
        if self.beta != 0.0 || self.kappa != 0.0 {
            let l = 1.0 - v.ln();
            if self.beta != 0.0 {
                g *= l.powf(self.beta);
            }
            if self.kappa != 0.0 {
                g *= 1.0 + self.kappa / l;
            }
        }
        self.coeff * g
    }

    /// `lim_{v→0+} g(v)/c`.
    fn limit_at_zero(&self) -> f64 {
        if self.alpha > 0.0 || (self.alpha == 0.0 && self.beta < 0.0) {
            0.0
        } else if self.alpha < 0.0 || self.beta > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    }

    pub fn eval(&self, lo: f64, hi: f64, p: Point) -> f64 {
        if self.is_constant() {
            return self.coeff;
        }
        self.at_v(self.local(lo, hi, p) / self.scale)
    }

    /// Whether the zero of the local coordinate sits on an endpoint of `(lo, hi]`,
    /// returning which one (`Some(true)` = lo).
    pub fn anchored_end(&self, lo: f64, hi: f64) -> Option<bool> {
        if self.is_constant() {
            return None;
        }
        match self.orientation {
            Orientation::Right if self.shift == lo => Some(true),
            Orientation::Left if self.shift == hi => Some(false),
            _ => None,
        }
    }

    /// Transport under `t ↦ a + r·t`.
    pub fn dilate(&self, a: f64, r: f64) -> Shape {
        Shape { shift: a + r * self.shift, scale: r * self.scale, ..*self }
    }

    /// Transport under `t ↦ t + d`.
    pub fn translate(&self, d: f64) -> Shape {
        Shape { shift: self.shift + d, ..*self }
    }

    /// Transport under the reflection `t ↦ k − t`.
    pub fn reflect(&self, k: f64) -> Shape {
        Shape { shift: k - self.shift, orientation: self.orientation.flipped(), ..*self }
    }

    pub fn scaled(&self, factor: f64) -> Shape {
        Shape { coeff: self.coeff * factor, ..*self }
    }

    /// `d ln|g| / d ln v` at `v`.
    pub fn log_slope(&self, v: f64) -> f64 {
        if self.beta == 0.0 && self.kappa == 0.0 {
            return self.alpha;
        }
        let l = 1.0 - v.ln();
        self.alpha - (self.beta * l + self.kappa * (self.beta - 1.0)) / (l * (l + self.kappa))
    }

    /// Values of `v ∈ (0, 1)` where `|g|` may change monotonicity: critical
    /// points of `ln g` and the zero of the factor `(1 + κ/L)`.
    pub fn critical_v(&self) -> Vec<f64> {
        if self.is_constant() || (self.beta == 0.0 && self.kappa == 0.0) {
            return Vec::new();
        }
        let mut ls = Vec::new();
        let (a2, a1, a0) = (self.alpha, self.alpha * self.kappa - self.beta, -self.kappa * (self.beta - 1.0));
        if a2 == 0.0 {
            if a1 != 0.0 {
                ls.push(-a0 / a1);
            }
        } else {
            let disc = a1 * a1 - 4.0 * a2 * a0;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                ls.push((-a1 + sq) / (2.0 * a2));
                ls.push((-a1 - sq) / (2.0 * a2));
            }
        }
        if self.kappa != 0.0 {
            ls.push(-self.kappa);
        }
        let mut vs: Vec<f64> = ls.into_iter().filter(|l| l.is_finite() && *l > 1.0).map(|l| (1.0 - l).exp()).collect();
        vs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vs.dedup();
        vs
    }

    /// Exact inverse of `|g|` for pure powers: the `v` with `|c| v^α = s`.
    pub fn power_inverse_v(&self, s: f64) -> Option<f64> {
        if !self.is_power() || self.alpha == 0.0 {
            return None;
        }
        Some((s / self.coeff.abs()).powf(1.0 / self.alpha))
    }

    /// `∫ g` over local coordinate `u ∈ [u0, u1]` for pure powers.
    pub fn power_integral_local(&self, u0: f64, u1: f64) -> Option<f64> {
        if !self.is_power() {
            return None;
        }
        if self.is_constant() {
            return Some(self.coeff * (u1 - u0));
        }
        let (v0, v1) = (u0 / self.scale, u1 / self.scale);
        let e = self.alpha + 1.0;
        let val = if e == 0.0 {
            if v0 <= 0.0 {
                f64::INFINITY
            } else {
                (v1 / v0).ln()
            }
        } else if e < 0.0 && v0 <= 0.0 {
            f64::INFINITY
        } else {
            (v1.powf(e) - v0.powf(e)) / e
        };
        Some(self.coeff * self.scale * val)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_values() {
        let s = Shape::power(1.0, 0.0, -0.5);
        assert_eq!(s.eval(0.0, 1.0, Point::at(0.0, 1.0, 0.25)), 2.0);
        let w = Shape::power(1.0, 0.25, -1.0 / 3.0);
        let v = w.eval(0.25, 0.5, Point::at(0.25, 0.5, 0.375));
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn limits_at_anchor() {
        let s = Shape::power(1.0, 0.0, -0.5);
        assert_eq!(s.eval(0.0, 1.0, Point::from_lo(0.0, 1.0, 0.0)), f64::INFINITY);
        let l = Shape { beta: -1.0, ..Shape::power(1.0, 0.0, 0.0) };
        assert_eq!(l.at_v(0.0), 0.0);
    }

    #[test]
    fn reflection_round_trip() {
        let s = Shape::power(2.0, 0.1, 0.7);
        let r = s.reflect(1.0).reflect(1.0);
        assert!((r.shift - s.shift).abs() < 1e-15);
        assert_eq!(r.orientation, s.orientation);
    }

    #[test]
    fn logpower_critical_point() {
        // v^{1/2} L^1 peaks where L = β/α = 2.
        let s = Shape { beta: 1.0, ..Shape::power(1.0, 0.0, 0.5) };
        let vs = s.critical_v();
        assert_eq!(vs.len(), 1);
        assert!((vs[0] - (-1.0f64).exp()).abs() < 1e-15);
        assert!(s.log_slope(vs[0]).abs() < 1e-12);
    }

    #[test]
    fn power_integral() {
        let s = Shape::power(1.0, 0.0, -0.5);
        assert!((s.power_integral_local(0.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        let d = Shape::power(1.0, 0.0, -1.0);
        assert_eq!(d.power_integral_local(0.0, 1.0).unwrap(), f64::INFINITY);
    }
}
