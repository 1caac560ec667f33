//! Fixtures shared by the benchmarks.

use spaceability::{PiecewiseFunction, Segment};

/// Five pieces mixing singular, vanishing and constant parts, with overlapping
/// value ranges so the rearrangement has to merge bands.
pub fn mixed() -> PiecewiseFunction {
    PiecewiseFunction::new(vec![
        Segment::power(0.0, 0.2, 0.8, 0.0, -0.3).unwrap(),
        Segment::constant(0.2, 0.35, 1.5).unwrap(),
        Segment::power(0.35, 0.6, 2.0, 0.35, 0.5).unwrap(),
        Segment::power(0.6, 0.8, -1.2, 0.6, 1.5).unwrap(),
        Segment::constant(0.8, 1.0, 0.4).unwrap(),
    ])
    .unwrap()
}

/// `t^{−α}` on `(0, 1]`.
pub fn singular(alpha: f64) -> PiecewiseFunction {
    PiecewiseFunction::from_segment(Segment::power(0.0, 1.0, 1.0, 0.0, -alpha).unwrap())
}
