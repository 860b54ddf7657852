//! Exact arithmetic for reduced ideals of real quadratic fields.
//!
//! A real quadratic field `Q(sqrt(D))` with discriminant `D > 0` has finitely
//! many reduced fractional ideals, each of the shape `Z + f Z` with
//! `f = (b + sqrt(D)) / (2a)`. This crate enumerates them, decides for each
//! one whether some positive metric makes `1` a shortest lattice vector
//! ("1-reduced"), and implements the shortest-vector reduction map that sends
//! an arbitrary (module, metric) pair to a 1-reduced ideal.
//!
//! All decisions are made in exact arithmetic: arbitrary-precision integers,
//! rationals, and elements `(p + q sqrt(D)) / r` of the field itself. Floating
//! point appears only in display helpers and the distance diagnostic.

pub mod classifier;
pub mod field;
pub mod ideal;
pub mod lattice;
pub mod pi;
pub mod reducer;
pub mod sweep;

pub use classifier::{classify, ClassificationRecord, ConeVerdict};
pub use field::{FieldCtx, Int, QElem, Rat};
pub use ideal::{enumerate_reduced, IdealForm, Module2};
pub use lattice::{Basis2, Metric};
pub use reducer::{reduce_ideal, ReductionResult};
