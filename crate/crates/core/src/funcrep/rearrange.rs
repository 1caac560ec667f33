//! Decreasing rearrangement `x*(t) = inf{s ≥ 0 : λ_x(s) ≤ t}`.
//!
//! The monotone pieces of `|x|` are sorted by value range. Critical levels (the
//! end values of every piece) cut the level axis into bands; on each band the
//! rearrangement is either a translate or reflection of the single active
//! piece, or, when several pieces are active, an implicit [`Rearranged`]
//! segment that inverts their summed distribution function. Constant pieces
//! produce flat steps at their level.

use super::{Form, MonoPiece, MonotoneFunction, PiecewiseFunction, Rearranged, Segment};

pub fn decreasing_rearrangement(f: &PiecewiseFunction) -> MonotoneFunction {
    let pieces: Vec<MonoPiece> = f.monotone_pieces().into_iter().filter(|p| p.max_value() > 0.0).collect();
    if pieces.is_empty() {
        return MonotoneFunction::zero();
    }
    let above = |s: f64| -> f64 {
        if s.is_infinite() {
            0.0
        } else {
            pieces.iter().map(|p| p.measure_above(s, true)).sum()
        }
    };
    let at_least = |s: f64| -> f64 {
        if s.is_infinite() {
            0.0
        } else {
            pieces.iter().map(|p| p.measure_above(s, false)).sum()
        }
    };

    let mut levels: Vec<f64> =
        pieces.iter().flat_map(|p| [p.min_value(), p.max_value()]).filter(|v| v.is_finite() && *v > 0.0).collect();
    levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    levels.dedup();
    let mut ladder = Vec::with_capacity(levels.len() + 2);
    if pieces.iter().any(|p| p.max_value().is_infinite()) {
        ladder.push(f64::INFINITY);
    }
    ladder.extend(levels.iter().copied());
    ladder.push(0.0);

    let mut segments = Vec::new();
    for &level in &levels {
        let (t0, t1) = (above(level), at_least(level));
        if t1 > t0 {
            segments.push(Segment::raw(t0, t1, Form::Constant { c: level }));
        }
    }
    for w in ladder.windows(2) {
        let (hi, lo) = (w[0], w[1]);
        let t0 = at_least(hi);
        let t1 = above(lo);
        if t1 <= t0 {
            continue;
        }
        let active: Vec<&MonoPiece> =
            pieces.iter().filter(|p| !p.is_constant() && p.min_value() <= lo && p.max_value() >= hi).collect();
        match active.as_slice() {
            [] => {}
            [p] => segments.push(transport_band(p, hi, t0, t1)),
            many => {
                let pieces: Vec<MonoPiece> = many.iter().map(|p| (*p).clone()).collect();
                let offset = pieces.iter().map(|p| if hi.is_finite() { p.measure_above(hi, true) } else { 0.0 }).sum();
                segments.push(Segment::raw(
                    t0,
                    t1,
                    Form::Rearranged(Rearranged { pieces, level_lo: lo, level_hi: hi, offset, coeff: 1.0 }),
                ));
            }
        }
    }
    segments.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
    // Rounding can leave sub-ulp overlaps between adjacent bands.
    for i in 1..segments.len() {
        if segments[i].lo < segments[i - 1].hi {
            segments[i].lo = segments[i - 1].hi;
        }
    }
    segments.retain(|s| s.hi > s.lo);
    MonotoneFunction::new_unchecked(PiecewiseFunction { segments })
}

/// The part of a single piece with values below `hi`, moved to start at `t0`.
fn transport_band(p: &MonoPiece, hi: f64, t0: f64, t1: f64) -> Segment {
    let seg = &p.segment;
    let top = if hi.is_finite() { p.measure_above(hi, true) } else { 0.0 };
    let reaches_bottom = t1 - t0 >= p.width() - top - 1e-15 * p.width().max(1.0);
    if let Form::Rearranged(r) = &seg.form {
        return Segment::raw(
            t0,
            t1,
            Form::Rearranged(Rearranged { offset: r.offset + top, coeff: r.coeff.abs(), ..r.clone() }),
        );
    }
    // x* rearranges |f|
    let mut shape = seg.form.shape().unwrap();
    shape.coeff = shape.coeff.abs();
    let anchored = shape.anchored_end(seg.lo, seg.hi);
    let moved = if !p.increasing {
        let mut s = shape.translate(t0 - (seg.lo + top));
        if anchored == Some(true) && top == 0.0 {
            s.shift = t0;
        }
        if anchored == Some(false) && reaches_bottom {
            s.shift = t1;
        }
        s
    } else {
        let k = t0 + (seg.hi - top);
        let mut s = shape.reflect(k);
        if anchored == Some(false) && top == 0.0 {
            s.shift = t0;
        }
        if anchored == Some(true) && reaches_bottom {
            s.shift = t1;
        }
        s
    };
    Segment::raw(t0, t1, Form::from_shape(moved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::Segment;

    fn pw(segs: Vec<Segment>) -> PiecewiseFunction {
        PiecewiseFunction::new(segs).unwrap()
    }

    #[test]
    fn reflection_of_identity() {
        let f = pw(vec![Segment::power(0.0, 1.0, 1.0, 0.0, 1.0).unwrap()]);
        let r = decreasing_rearrangement(&f);
        for t in [0.1, 0.25, 0.5, 0.9] {
            assert!((r.evaluate(t) - (1.0 - t)).abs() < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn indicator_block_slides_left() {
        let f = PiecewiseFunction::indicator(0.5, 0.75, 3.0).unwrap();
        let r = decreasing_rearrangement(&f);
        assert_eq!(r.as_function(), &PiecewiseFunction::indicator(0.0, 0.25, 3.0).unwrap());
    }

    #[test]
    fn shifted_singularity_moves_to_origin() {
        let f = pw(vec![Segment::power(0.25, 0.5, 1.0, 0.25, -1.0 / 3.0).unwrap()]);
        let r = decreasing_rearrangement(&f);
        for t in [1e-9, 0.01, 0.1, 0.2] {
            assert!((r.evaluate(t) - t.powf(-1.0 / 3.0)).abs() < 1e-12 * t.powf(-1.0 / 3.0));
        }
        assert_eq!(r.evaluate(0.3), 0.0);
    }

    #[test]
    fn negative_pieces_rearrange_their_modulus() {
        let f =
            pw(vec![Segment::constant(0.0, 0.25, 0.5).unwrap(), Segment::power(0.25, 1.0, -2.0, 0.25, 1.0).unwrap()]);
        let r = decreasing_rearrangement(&f);
        for t in [0.1, 0.5, 0.7] {
            assert!(r.evaluate(t) >= 0.0, "t = {t}");
            assert!((r.distribution_function(r.evaluate(t)) - f.distribution_function(r.evaluate(t))).abs() < 1e-12);
        }
        assert!((r.evaluate(0.5) - 2.0 * (0.75 - 0.5)).abs() < 1e-14);
    }

    #[test]
    fn zero_is_degenerate() {
        assert!(decreasing_rearrangement(&PiecewiseFunction::zero()).is_degenerate());
        let z = PiecewiseFunction::indicator(0.0, 0.5, 0.0).unwrap();
        assert!(decreasing_rearrangement(&z).is_degenerate());
    }

    #[test]
    fn overlapping_ranges_use_implicit_band() {
        let f = pw(vec![
            Segment::power(0.0, 0.5, 1.0, 0.0, 1.0).unwrap(),
            Segment::power(0.5, 1.0, 1.0, 0.5, 1.0).unwrap(),
        ]);
        // two copies of t on halves: x*(t) = (1 − t)/2
        let r = decreasing_rearrangement(&f);
        for t in [0.1, 0.4, 0.7] {
            assert!((r.evaluate(t) - (1.0 - t) / 2.0).abs() < 1e-12);
        }
        assert!(r.monotonicity_violation(1000).is_none());
    }

    #[test]
    fn mixed_pieces_are_equimeasurable() {
        let f = pw(vec![
            Segment::constant(0.0, 0.2, 2.0).unwrap(),
            Segment::power(0.2, 0.6, 0.5, 0.2, -0.5).unwrap(),
            Segment::log_power(0.6, 1.0, 1.0, 0.6, 0.5, 1.0).unwrap(),
        ]);
        let r = decreasing_rearrangement(&f);
        for k in -10..10 {
            let s = 2f64.powi(k);
            let (a, b) = (f.distribution_function(s), r.distribution_function(s));
            assert!((a - b).abs() < 1e-10, "s = {s}: {a} vs {b}");
        }
        assert!(r.monotonicity_violation(2000).is_none());
    }
}
