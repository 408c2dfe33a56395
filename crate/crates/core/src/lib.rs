pub mod arith;
pub mod classify;
pub mod geometry;
pub mod graded;
pub mod pairs;
pub mod segdiv;
pub mod symbolic;
pub mod toric;

pub use arith::{GaussianRational, MPoly, Poly1, Rational, RationalFunction};
pub use classify::{mj_equiv, pair_equiv, EquivDecision, IsoWitness};
pub use geometry::{Affine, Base, BaseFunction, CurveBase, PresentedBase, PrimeDivisor, WeilQDivisor};
pub use graded::{build_graded, GradedSlice, InvolutionData};
pub use pairs::{dpd_validate, phs_validate, DpdPair, PhsPair};
pub use segdiv::{Segment, SegmentalDivisor};
pub use toric::{downgrade, Downgrade, LatticeMap};
