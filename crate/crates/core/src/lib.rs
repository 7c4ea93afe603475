//! Exact computation on probabilistic normed spaces built from step
//! distribution functions.
//!
//! The crate provides, in dependency order: step distribution functions
//! with the Sibley metric ([`distfn`]), t-norms and triangle-function
//! convolutions ([`trifn`]), vectors and probabilistic norms
//! ([`pnspace`]), quotient spaces ([`quotient`]), and completeness
//! experiments ([`complete`]). Everything is exact where step structure
//! permits; sampled checks say so in their reports.

pub mod complete;
pub mod distfn;
pub mod error;
pub mod pnspace;
pub mod quotient;
pub mod report;
pub mod sample;
pub mod spacefile;
pub mod trifn;
pub mod vector;

pub use complete::{
    CauchyVerdict, ContinuityVerdict, DeltaSchedule, LimitVerdict, PointSequence, Scenario,
    SequenceRule, SigmaProduct,
};
pub use distfn::{min_gap, sibley, DistFn, SibleyDistance};
pub use error::{PnError, Result};
pub use pnspace::{NormRule, PNSpace, ProbNormed, SpaceKind};
pub use quotient::{QuotientSpace, QuotientStrategy, SampleSchedule, Subspace};
pub use report::{CheckOutcome, VerificationReport};
pub use spacefile::{load_space_spec, SpaceSpec};
pub use trifn::{CustomTNorm, TNorm, TriangleFn};
pub use vector::{LinearMap, NormKind, Vector};
