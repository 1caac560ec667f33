//! Norms, rearrangements and witness constructions for function spaces on `[0, 1]`.

pub mod constructions;
pub mod error;
pub mod funcrep;
pub mod generators;
pub mod inclusions;
pub mod norms;
pub mod quad;
pub(crate) mod serde_ext;

pub use constructions::{Claim, Expect, Outcome, Verdict, WitnessReport};
pub use error::{Error, Result};
pub use funcrep::{
    decreasing_rearrangement, disjoint_sum, Form, MonoPiece, MonotoneFunction, Orientation, PiecewiseFunction, Segment,
    Shape,
};
pub use generators::{ConcaveGenerator, ConvexGenerator, Descriptor, ExponentFunction, ExponentPiece};
pub use inclusions::{EssentialRange, LimitKind, LimitVerdict};
pub use quad::{NormResult, Status};
