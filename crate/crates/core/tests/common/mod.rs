#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spaceability::{Orientation, PiecewiseFunction, Segment, Shape};

/// One segment `c · v^α` of a random test function, `v` measured from `lo`
/// (or from `hi` when `left`).
#[derive(Debug, Clone, Copy)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub c: f64,
    pub alpha: f64,
    pub left: bool,
}

impl Piece {
    pub fn segment(&self) -> Segment {
        let (shift, orientation) = if self.left { (self.hi, Orientation::Left) } else { (self.lo, Orientation::Right) };
        if self.alpha == 0.0 {
            Segment::constant(self.lo, self.hi, self.c).unwrap()
        } else {
            Segment::shape(self.lo, self.hi, Shape { shift, orientation, ..Shape::power(self.c, shift, self.alpha) })
                .unwrap()
        }
    }

    /// `∫ |c v^α|^p` over the piece.
    pub fn lp_integral(&self, p: f64) -> f64 {
        let w = self.hi - self.lo;
        self.c.abs().powf(p) * w.powf(self.alpha * p + 1.0) / (self.alpha * p + 1.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let v = if self.left { self.hi - t } else { t - self.lo };
        if self.alpha == 0.0 {
            self.c
        } else {
            self.c * v.powf(self.alpha)
        }
    }
}

/// Up to five pieces on random cuts, some left empty, exponents in
/// `[alpha_min, 2]` or constant.
pub fn random_pieces(rng: &mut ChaCha8Rng, alpha_min: f64) -> Vec<Piece> {
    loop {
        let k = rng.gen_range(1..=5);
        let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(0.02..0.98)).collect();
        cuts.push(0.0);
        cuts.push(1.0);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            if w[1] - w[0] <= 1e-3 || !rng.gen_bool(0.85) {
                continue;
            }
            let sign = if rng.gen_bool(0.3) { -1.0 } else { 1.0 };
            let alpha = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(alpha_min..2.0) };
            pieces.push(Piece {
                lo: w[0],
                hi: w[1],
                c: sign * rng.gen_range(0.2..3.0),
                alpha,
                left: rng.gen_bool(0.5),
            });
        }
        if !pieces.is_empty() {
            return pieces;
        }
    }
}

pub fn build(pieces: &[Piece]) -> PiecewiseFunction {
    PiecewiseFunction::new(pieces.iter().map(|p| p.segment()).collect()).unwrap()
}

pub fn random_function(rng: &mut ChaCha8Rng, alpha_min: f64) -> (PiecewiseFunction, Vec<Piece>) {
    let pieces = random_pieces(rng, alpha_min);
    (build(&pieces), pieces)
}

/// Analytic `‖f‖_p`.
pub fn lp_oracle(pieces: &[Piece], p: f64) -> f64 {
    pieces.iter().map(|q| q.lp_integral(p)).sum::<f64>().powf(1.0 / p)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
