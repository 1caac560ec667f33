//! Exact piecewise representation of measurable functions on `[0, 1]`.
//!
//! A [`PiecewiseFunction`] is a finite list of segments on pairwise disjoint
//! half-open intervals `(a, b]`; it vanishes outside their union. Segments carry
//! either an analytic [`Shape`] or a [`Rearranged`] band, the implicit inverse of
//! a summed distribution function produced by [`decreasing_rearrangement`].

mod rearrange;
mod shape;

pub use rearrange::decreasing_rearrangement;
pub use shape::{Orientation, Point, Shape};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const ANCHOR_TOL: f64 = 1e-12;

fn one() -> f64 {
    1.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

fn is_right(o: &Orientation) -> bool {
    *o == Orientation::Right
}

/// Segment form, serialized as `{"form": tag, "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "params", rename_all = "lowercase")]
pub enum Form {
    Constant {
        c: f64,
    },
    Power {
        c: f64,
        shift: f64,
        alpha: f64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
        #[serde(default, skip_serializing_if = "is_right")]
        orientation: Orientation,
    },
    #[serde(rename = "logpower")]
    LogPower {
        c: f64,
        shift: f64,
        alpha: f64,
        beta: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        kappa: f64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
        #[serde(default, skip_serializing_if = "is_right")]
        orientation: Orientation,
    },
    Rearranged(Rearranged),
}

impl Form {
    pub fn from_shape(s: Shape) -> Form {
        if s.is_constant() {
            Form::Constant { c: s.coeff }
        } else if s.is_power() {
            Form::Power { c: s.coeff, shift: s.shift, alpha: s.alpha, scale: s.scale, orientation: s.orientation }
        } else {
            Form::LogPower {
                c: s.coeff,
                shift: s.shift,
                alpha: s.alpha,
                beta: s.beta,
                kappa: s.kappa,
                scale: s.scale,
                orientation: s.orientation,
            }
        }
    }

    pub fn shape(&self) -> Option<Shape> {
        match *self {
            Form::Constant { c } => Some(Shape::constant(c)),
            Form::Power { c, shift, alpha, scale, orientation } => {
                Some(Shape { coeff: c, alpha, beta: 0.0, kappa: 0.0, shift, scale, orientation })
            }
            Form::LogPower { c, shift, alpha, beta, kappa, scale, orientation } => {
                Some(Shape { coeff: c, alpha, beta, kappa, shift, scale, orientation })
            }
            Form::Rearranged(_) => None,
        }
    }
}

/// One band of a decreasing rearrangement where several monotone pieces are
/// active at once. On its segment `(lo, hi]` the value at `t` is `coeff · s`
/// where `s ∈ [level_lo, level_hi]` solves `Σ μ_i(s) = offset + (t − lo)`, with
/// `μ_i(s)` the measure of `{|piece_i| > s}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rearranged {
    pub pieces: Vec<MonoPiece>,
    #[serde(with = "crate::serde_ext")]
    pub level_lo: f64,
    #[serde(with = "crate::serde_ext")]
    pub level_hi: f64,
    pub offset: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub coeff: f64,
}

impl Rearranged {
    pub(crate) fn inner_measure(&self, s: f64, strict: bool) -> f64 {
        self.pieces.iter().map(|p| p.measure_above(s, strict)).sum()
    }

    /// Inner level at distance `d` from the start of the band.
    pub(crate) fn level_at(&self, d: f64) -> f64 {
        let target = self.offset + d;
        let mut a = self.level_lo;
        let mut b = self.level_hi;
        if !b.is_finite() {
            b = a.max(1.0);
            let mut n = 0;
            while self.inner_measure(b, true) > target && n < 2000 {
                a = b;
                b *= 2.0;
                n += 1;
            }
            if n == 2000 {
                return f64::INFINITY;
            }
        }
        // Σμ(s) is nonincreasing: keep Σμ(a) > target ≥ Σμ(b).
        for _ in 0..400 {
            let mid = if a > 0.0 && b / a > 4.0 { (a * b).sqrt() } else { 0.5 * (a + b) };
            if mid <= a || mid >= b {
                break;
            }
            if self.inner_measure(mid, true) > target {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}

/// A segment restricted to a subinterval on which `|f|` is monotone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonoPiece {
    pub segment: Segment,
    pub increasing: bool,
}

impl MonoPiece {
    pub fn width(&self) -> f64 {
        self.segment.hi - self.segment.lo
    }

    /// `|f|` at the low-value end (a limit when that end is open).
    pub fn min_value(&self) -> f64 {
        match &self.segment.form {
            Form::Rearranged(r) => r.level_lo * r.coeff.abs(),
            _ => {
                let s = &self.segment;
                let p = if self.increasing { Point::from_lo(s.lo, s.hi, 0.0) } else { Point::from_hi(s.lo, s.hi, 0.0) };
                s.eval_point(p).abs()
            }
        }
    }

    /// `|f|` at the high-value end, possibly `+∞`.
    pub fn max_value(&self) -> f64 {
        match &self.segment.form {
            Form::Rearranged(r) => r.level_hi * r.coeff.abs(),
            _ => {
                let s = &self.segment;
                let p = if self.increasing { Point::from_hi(s.lo, s.hi, 0.0) } else { Point::from_lo(s.lo, s.hi, 0.0) };
                s.eval_point(p).abs()
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        match &self.segment.form {
            Form::Rearranged(r) => r.level_lo == r.level_hi,
            f => f.shape().map(|s| s.is_constant()).unwrap_or(false),
        }
    }

    /// Point at distance `d` from the high-value end.
    fn point_from_top(&self, d: f64) -> Point {
        let s = &self.segment;
        if self.increasing {
            Point::from_hi(s.lo, s.hi, d)
        } else {
            Point::from_lo(s.lo, s.hi, d)
        }
    }

    /// Measure of `{t in piece : |f(t)| > s}` (or `≥ s` when `strict` is false).
    pub fn measure_above(&self, s: f64, strict: bool) -> f64 {
        let w = self.width();
        if let Form::Rearranged(r) = &self.segment.form {
            let c = r.coeff.abs();
            if c == 0.0 {
                return 0.0;
            }
            let level = s / c;
            if level < r.level_lo || (!strict && level == r.level_lo) {
                return w;
            }
            if level > r.level_hi || (strict && level == r.level_hi) {
                return 0.0;
            }
            return (r.inner_measure(level, strict) - r.offset).clamp(0.0, w);
        }
        let (lo_v, hi_v) = (self.min_value(), self.max_value());
        let above = |v: f64| if strict { v > s } else { v >= s };
        if self.is_constant() {
            return if above(hi_v) { w } else { 0.0 };
        }
        if !above(hi_v) && hi_v.is_finite() {
            return 0.0;
        }
        if s < lo_v || (!strict && s == lo_v) {
            return w;
        }
        if s >= hi_v {
            return 0.0;
        }
        self.distance_to_level(s)
    }

    /// Distance `δ` from the high-value end at which `|f|` drops to `s`.
    pub fn distance_to_level(&self, s: f64) -> f64 {
        let seg = &self.segment;
        let w = self.width();
        let shape = seg.form.shape().expect("shape piece");
        if let Some(v) = shape.power_inverse_v(s) {
            let u = v * shape.scale;
            let t = match shape.orientation {
                Orientation::Right => shape.shift + u,
                Orientation::Left => shape.shift - u,
            };
            let top_at_lo = !self.increasing;
            let d = match (shape.anchored_end(seg.lo, seg.hi), top_at_lo) {
                (Some(true), true) | (Some(false), false) => u,
                (_, true) => t - seg.lo,
                (_, false) => seg.hi - t,
            };
            return d.clamp(0.0, w);
        }
        let f = |d: f64| seg.eval_point(self.point_from_top(d)).abs();
        let (mut a, mut b) = (0.0f64, w);
        for _ in 0..600 {
            let mid = if a == 0.0 {
                b / 16.0
            } else if b / a > 4.0 {
                (a * b).sqrt()
            } else {
                0.5 * (a + b)
            };
            if mid <= a || mid >= b {
                break;
            }
            if f(mid) > s {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}

/// A segment on the half-open interval `(lo, hi]`.
///
/// Serialized as `{"interval": [lo, hi], "form": tag, "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SegmentRepr", from = "SegmentRepr")]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub form: Form,
}

#[derive(Serialize, Deserialize)]
struct SegmentRepr {
    interval: [f64; 2],
    #[serde(flatten)]
    form: Form,
}

impl From<Segment> for SegmentRepr {
    fn from(s: Segment) -> Self {
        SegmentRepr { interval: [s.lo, s.hi], form: s.form }
    }
}

impl From<SegmentRepr> for Segment {
    fn from(r: SegmentRepr) -> Self {
        Segment { lo: r.interval[0], hi: r.interval[1], form: r.form }
    }
}

impl Segment {
    /// Unchecked constructor for internally produced segments.
    pub(crate) fn raw(lo: f64, hi: f64, form: Form) -> Segment {
        Segment { lo, hi, form }
    }

    pub fn new(lo: f64, hi: f64, form: Form) -> Result<Segment> {
        let seg = Segment::raw(lo, hi, form);
        seg.validate()?;
        Ok(seg)
    }

    pub fn shape(lo: f64, hi: f64, shape: Shape) -> Result<Segment> {
        Segment::new(lo, hi, Form::from_shape(shape))
    }

    pub fn constant(lo: f64, hi: f64, c: f64) -> Result<Segment> {
        Segment::new(lo, hi, Form::Constant { c })
    }

    /// `c · (t − s)^α` on `(lo, hi]`.
    pub fn power(lo: f64, hi: f64, c: f64, s: f64, alpha: f64) -> Result<Segment> {
        Segment::shape(lo, hi, Shape::power(c, s, alpha))
    }

    /// `c · (t − s)^α · ln(e/(t − s))^β` on `(lo, hi]`.
    pub fn log_power(lo: f64, hi: f64, c: f64, s: f64, alpha: f64, beta: f64) -> Result<Segment> {
        Segment::shape(lo, hi, Shape { beta, ..Shape::power(c, s, alpha) })
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (self.lo, self.hi);
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(Error::InvalidSegment(format!(
                "interval ({lo}, {hi}] is not a nonempty subinterval of (0, 1]"
            )));
        }
        match &self.form {
            Form::Rearranged(r) => {
                if !(r.level_lo >= 0.0 && r.level_lo <= r.level_hi) {
                    return Err(Error::InvalidSegment("rearranged band levels out of order".into()));
                }
                for p in &r.pieces {
                    p.segment.validate()?;
                }
            }
            form => {
                let s = form.shape().unwrap();
                if !s.coeff.is_finite() || !s.alpha.is_finite() || !s.beta.is_finite() || !s.kappa.is_finite() {
                    return Err(Error::InvalidSegment("non-finite shape parameter".into()));
                }
                if s.is_constant() {
                    return Ok(());
                }
                if !(s.scale > 0.0 && s.scale.is_finite()) {
                    return Err(Error::InvalidSegment(format!("scale must be positive, got {}", s.scale)));
                }
                let vmax = match s.orientation {
                    Orientation::Right => {
                        if s.shift > lo + ANCHOR_TOL {
                            return Err(Error::InvalidSegment(format!("shift {} lies inside ({lo}, {hi}]", s.shift)));
                        }
                        (hi - s.shift) / s.scale
                    }
                    Orientation::Left => {
                        if s.shift < hi - ANCHOR_TOL {
                            return Err(Error::InvalidSegment(format!("shift {} lies inside ({lo}, {hi}]", s.shift)));
                        }
                        (s.shift - lo) / s.scale
                    }
                };
                if (s.beta != 0.0 || s.kappa != 0.0) && vmax > 1.0 + 1e-12 {
                    return Err(Error::InvalidSegment(format!(
                        "log-power local coordinate reaches {vmax} > 1, where ln(e/v) < 1"
                    )));
                }
                for i in 1..8 {
                    let v = self.eval((lo * (8 - i) as f64 + hi * i as f64) / 8.0);
                    if !v.is_finite() {
                        return Err(Error::InvalidSegment("value is not finite at an interior point".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo < t && t <= self.hi
    }

    pub fn eval_point(&self, p: Point) -> f64 {
        match &self.form {
            Form::Rearranged(r) => r.coeff * r.level_at(p.from_lo),
            form => form.shape().unwrap().eval(self.lo, self.hi, p),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !self.contains(t) {
            return 0.0;
        }
        self.eval_point(Point::at(self.lo, self.hi, t))
    }

    /// Which endpoint the value may blow up or degenerate at (`Some(true)` = lo).
    pub fn anchored_end(&self) -> Option<bool> {
        match &self.form {
            Form::Rearranged(r) if !r.level_hi.is_finite() => Some(true),
            Form::Rearranged(_) => None,
            f => f.shape().unwrap().anchored_end(self.lo, self.hi),
        }
    }

    pub fn scaled(&self, c: f64) -> Segment {
        let form = match &self.form {
            Form::Rearranged(r) => Form::Rearranged(Rearranged { coeff: r.coeff * c, ..r.clone() }),
            f => Form::from_shape(f.shape().unwrap().scaled(c)),
        };
        Segment::raw(self.lo, self.hi, form)
    }

    /// Image under `T_{a,r}`: the segment moved to `(a + r·lo, a + r·hi]`.
    pub fn transported(&self, a: f64, r: f64) -> Segment {
        let (lo, hi) = (a + r * self.lo, a + r * self.hi);
        let form = match &self.form {
            Form::Rearranged(rr) => Form::Rearranged(Rearranged {
                pieces: rr
                    .pieces
                    .iter()
                    .map(|p| MonoPiece { segment: p.segment.transported(a, r), increasing: p.increasing })
                    .collect(),
                offset: rr.offset * r,
                ..rr.clone()
            }),
            f => {
                let s = f.shape().unwrap();
                let mut t = s.dilate(a, r);
                // keep endpoint anchors exact
                match s.anchored_end(self.lo, self.hi) {
                    Some(true) => t.shift = lo,
                    Some(false) => t.shift = hi,
                    None => {}
                }
                Form::from_shape(t)
            }
        };
        Segment::raw(lo, hi, form)
    }

    /// Split into maximal subintervals on which `|f|` is monotone.
    pub fn monotone_pieces(&self) -> Vec<MonoPiece> {
        let shape = match &self.form {
            Form::Rearranged(_) => return vec![MonoPiece { segment: self.clone(), increasing: false }],
            f => f.shape().unwrap(),
        };
        if shape.coeff == 0.0 {
            return Vec::new();
        }
        if shape.is_constant() {
            return vec![MonoPiece { segment: self.clone(), increasing: false }];
        }
        let to_t = |v: f64| match shape.orientation {
            Orientation::Right => shape.shift + v * shape.scale,
            Orientation::Left => shape.shift - v * shape.scale,
        };
        let mut cuts: Vec<f64> =
            shape.critical_v().into_iter().map(to_t).filter(|t| *t > self.lo && *t < self.hi).collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut bounds = vec![self.lo];
        bounds.extend(cuts);
        bounds.push(self.hi);
        bounds
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| {
                let mut form_shape = shape;
                let (lo, hi) = (w[0], w[1]);
                // preserve anchoring on sub-pieces that keep the anchored endpoint
                if shape.anchored_end(self.lo, self.hi) == Some(true) && lo == self.lo {
                    form_shape.shift = lo;
                }
                if shape.anchored_end(self.lo, self.hi) == Some(false) && hi == self.hi {
                    form_shape.shift = hi;
                }
                let mid = 0.5 * (lo + hi);
                let u = match shape.orientation {
                    Orientation::Right => mid - shape.shift,
                    Orientation::Left => shape.shift - mid,
                };
                let dv_dt = if shape.orientation == Orientation::Right { 1.0 } else { -1.0 };
                let increasing = shape.log_slope(u / shape.scale) * dv_dt > 0.0;
                MonoPiece { segment: Segment::raw(lo, hi, Form::from_shape(form_shape)), increasing }
            })
            .collect()
    }
}

/// A function on `[0, 1]` given by finitely many segments on disjoint
/// intervals, identically zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Segment>", into = "Vec<Segment>")]
pub struct PiecewiseFunction {
    segments: Vec<Segment>,
}

impl TryFrom<Vec<Segment>> for PiecewiseFunction {
    type Error = Error;
    fn try_from(segments: Vec<Segment>) -> Result<Self> {
        for s in &segments {
            s.validate()?;
        }
        PiecewiseFunction::new(segments)
    }
}

impl From<PiecewiseFunction> for Vec<Segment> {
    fn from(f: PiecewiseFunction) -> Self {
        f.segments
    }
}

impl PiecewiseFunction {
    /// Builds a function from segments, rejecting positive-measure overlaps.
    pub fn new(mut segments: Vec<Segment>) -> Result<Self> {
        segments.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        for w in segments.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(Error::Overlap(w[1].lo, w[0].hi.min(w[1].hi)));
            }
        }
        Ok(PiecewiseFunction { segments })
    }

    pub fn zero() -> Self {
        PiecewiseFunction { segments: Vec::new() }
    }

    pub fn from_segment(s: Segment) -> Self {
        PiecewiseFunction { segments: vec![s] }
    }

    /// `c · χ_{(a,b]}`.
    pub fn indicator(a: f64, b: f64, c: f64) -> Result<Self> {
        Ok(Self::from_segment(Segment::constant(a, b, c)?))
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Zero almost everywhere.
    pub fn is_zero(&self) -> bool {
        self.segments.iter().all(|s| s.monotone_pieces().iter().all(|p| p.max_value() == 0.0))
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        let idx = self.segments.partition_point(|s| s.hi < t);
        match self.segments.get(idx) {
            Some(s) if s.contains(t) => s.eval(t),
            _ => 0.0,
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.segments.iter().flat_map(|s| [s.lo, s.hi]).collect();
        b.dedup();
        b
    }

    pub fn monotone_pieces(&self) -> Vec<MonoPiece> {
        self.segments.iter().flat_map(|s| s.monotone_pieces()).collect()
    }

    /// `λ{t : |f(t)| > s}`.
    pub fn distribution_function(&self, s: f64) -> f64 {
        if s < 0.0 {
            return 1.0;
        }
        self.monotone_pieces().iter().map(|p| p.measure_above(s, true)).sum()
    }

    /// `λ{t : |f(t)| ≥ s}`.
    pub fn measure_at_least(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 1.0;
        }
        self.monotone_pieces().iter().map(|p| p.measure_above(s, false)).sum()
    }

    /// Measure of the set where `f ≠ 0`.
    pub fn support_measure(&self) -> f64 {
        self.distribution_function(0.0)
    }

    /// `T_{a,r}(f)(t) = f((t − a)/r) χ_{(a, a+r]}(t)`.
    pub fn translate_dilate(&self, a: f64, r: f64) -> Result<Self> {
        if !((0.0..1.0).contains(&a) && r > 0.0 && r <= 1.0 - a + 1e-15) {
            return Err(Error::InvalidTransport { a, r });
        }
        let segments = self
            .segments
            .iter()
            .map(|s| s.transported(a, r))
            .map(|mut s| {
                s.hi = s.hi.min(1.0);
                s
            })
            .collect();
        Ok(PiecewiseFunction { segments })
    }

    pub fn scaled(&self, c: f64) -> Self {
        PiecewiseFunction { segments: self.segments.iter().map(|s| s.scaled(c)).collect() }
    }

    /// Samples `(t, f(t))` at `n` equally spaced points in `(0, 1]`.
    pub fn sample(&self, n: usize) -> Vec<(f64, f64)> {
        (1..=n).map(|i| i as f64 / n as f64).map(|t| (t, self.evaluate(t))).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// A [`PiecewiseFunction`] that is nonincreasing on `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonotoneFunction(PiecewiseFunction);

impl MonotoneFunction {
    /// Wraps `f` after checking monotonicity on a grid.
    pub fn new(f: PiecewiseFunction) -> Result<Self> {
        let m = MonotoneFunction(f);
        if let Some(t) = m.monotonicity_violation(4096) {
            return Err(Error::ClassViolation(format!("function increases near t = {t}")));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(f: PiecewiseFunction) -> Self {
        MonotoneFunction(f)
    }

    pub fn zero() -> Self {
        MonotoneFunction(PiecewiseFunction::zero())
    }

    /// The rearrangement of the zero function is flagged rather than rejected.
    pub fn is_degenerate(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_function(&self) -> &PiecewiseFunction {
        &self.0
    }

    pub fn into_function(self) -> PiecewiseFunction {
        self.0
    }

    /// First grid point where the function increases by more than a relative
    /// `1e−6`, if any. Power bands of width near `1e−10` anchored at absolute
    /// positions carry about that much coordinate rounding.
    pub fn monotonicity_violation(&self, n: usize) -> Option<f64> {
        let mut grid: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        grid.extend((1..200).map(|k| 2f64.powf(-(k as f64) / 4.0)));
        // values exactly at breakpoints are a null set, and a band floor may
        // sit closer to its anchor than the coordinates can resolve
        grid.extend(self.0.breakpoints().iter().flat_map(|b| [b * (1.0 + 1e-9), b * (1.0 - 1e-9)]));
        grid.retain(|t| *t > 0.0 && *t <= 1.0);
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut prev = f64::INFINITY;
        for t in grid {
            let v = self.0.evaluate(t);
            if v > prev * (1.0 + 1e-6) + 1e-300 {
                return Some(t);
            }
            prev = v;
        }
        None
    }
}

impl std::ops::Deref for MonotoneFunction {
    type Target = PiecewiseFunction;
    fn deref(&self) -> &PiecewiseFunction {
        &self.0
    }
}

/// Pointwise sum `Σ c_i f_i` of functions with pairwise disjoint supports.
pub fn disjoint_sum(fs: &[PiecewiseFunction], coeffs: &[f64]) -> Result<PiecewiseFunction> {
    if fs.len() != coeffs.len() {
        return Err(Error::InvalidSegment(format!("{} functions but {} coefficients", fs.len(), coeffs.len())));
    }
    let segments = fs.iter().zip(coeffs).flat_map(|(f, c)| f.segments.iter().map(move |s| s.scaled(*c))).collect();
    PiecewiseFunction::new(segments)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn evaluate_examples() {
        let ind = PiecewiseFunction::indicator(0.0, 0.5, 1.0).unwrap();
        assert_eq!(ind.evaluate(0.25), 1.0);
        assert_eq!(ind.evaluate(0.75), 0.0);
        let p = PiecewiseFunction::from_segment(Segment::power(0.0, 1.0, 1.0, 0.0, -0.5).unwrap());
        assert_eq!(p.evaluate(0.25), 2.0);
        let w = PiecewiseFunction::from_segment(Segment::power(0.25, 0.5, 1.0, 0.25, -1.0 / 3.0).unwrap());
        assert!(approx(w.evaluate(0.375), 2.0, 1e-14));
    }

    #[test]
    fn distribution_examples() {
        let ind = PiecewiseFunction::indicator(0.0, 0.5, 1.0).unwrap();
        assert_eq!(ind.distribution_function(0.5), 0.5);
        assert_eq!(ind.distribution_function(1.0), 0.0);
        let id = PiecewiseFunction::from_segment(Segment::power(0.0, 1.0, 1.0, 0.0, 1.0).unwrap());
        assert!(approx(id.distribution_function(1.0 / 3.0), 2.0 / 3.0, 1e-15));
        let p = PiecewiseFunction::from_segment(Segment::power(0.0, 1.0, 1.0, 0.0, -0.5).unwrap());
        assert!(approx(p.distribution_function(2.0), 0.25, 1e-15));
    }

    #[test]
    fn logpower_distribution_by_bisection() {
        // t^{-1/2} ln(e/t) is decreasing on (0,1]
        let f = PiecewiseFunction::from_segment(Segment::log_power(0.0, 1.0, 1.0, 0.0, -0.5, 1.0).unwrap());
        let s = 5.0;
        let m = f.distribution_function(s);
        assert!(approx(f.evaluate(m), s, 1e-9));
    }

    #[test]
    fn transport_examples() {
        let id = PiecewiseFunction::from_segment(Segment::power(0.0, 1.0, 1.0, 0.0, 1.0).unwrap());
        assert_eq!(id.translate_dilate(0.0, 1.0).unwrap(), id);
        let one = PiecewiseFunction::indicator(0.0, 1.0, 1.0).unwrap();
        let moved = one.translate_dilate(0.5, 0.25).unwrap();
        assert_eq!(moved, PiecewiseFunction::indicator(0.5, 0.75, 1.0).unwrap());
        let half = id.translate_dilate(0.5, 0.5).unwrap();
        assert!(approx(half.evaluate(0.75), 0.5, 1e-15));
        assert!(matches!(id.translate_dilate(0.5, 0.6), Err(Error::InvalidTransport { .. })));
        assert!(id.translate_dilate(1.0, 0.1).is_err());
    }

    #[test]
    fn disjoint_sum_examples() {
        let a = PiecewiseFunction::indicator(0.0, 0.5, 1.0).unwrap();
        let b = PiecewiseFunction::indicator(0.5, 1.0, 1.0).unwrap();
        assert_eq!(disjoint_sum(std::slice::from_ref(&a), &[1.0]).unwrap(), a);
        let s = disjoint_sum(&[a.clone(), b], &[2.0, -3.0]).unwrap();
        assert_eq!(s.evaluate(0.75).abs(), 3.0);
        let c = PiecewiseFunction::indicator(0.25, 0.75, 1.0).unwrap();
        assert!(matches!(disjoint_sum(&[a, c], &[1.0, 1.0]), Err(Error::Overlap(..))));
    }

    #[test]
    fn rejects_bad_segments() {
        assert!(Segment::constant(0.5, 0.5, 1.0).is_err());
        assert!(Segment::constant(0.0, 1.5, 1.0).is_err());
        assert!(Segment::power(0.2, 0.5, 1.0, 0.3, -0.5).is_err());
        assert!(Segment::log_power(0.0, 1.0, 1.0, -1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = PiecewiseFunction::new(vec![
            Segment::constant(0.0, 0.25, 3.0).unwrap(),
            Segment::power(0.25, 0.5, 1.0 / 3.0, 0.25, -0.3).unwrap(),
            Segment::log_power(0.5, 1.0, 0.1, 0.5, 0.5, 2.0).unwrap(),
        ])
        .unwrap();
        let text = f.to_json();
        assert!(text.contains("\"interval\""));
        assert!(text.contains("\"logpower\""));
        let back = PiecewiseFunction::from_json(&text).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn json_rejects_overlap() {
        let text = r#"[{"interval":[0,0.5],"form":"constant","params":{"c":1}},
                       {"interval":[0.25,1],"form":"constant","params":{"c":1}}]"#;
        assert!(PiecewiseFunction::from_json(text).is_err());
    }
}
