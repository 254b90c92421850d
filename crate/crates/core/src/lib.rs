//! Quantum channels as Kraus-operator sets: classification (trace
//! preservation, unitality), Choi transforms, and numerical extremality
//! tests for the convex sets of CPT, UCP and UCPT maps, including the
//! tensor-product behaviour of extremality.

pub mod catalog;
pub mod channel;
pub mod choi;
pub mod eigen;
pub mod error;
pub mod extremal;
pub mod gram;
pub mod matrix;
pub mod tolerance;

pub use catalog::NamedChannel;
pub use channel::{ChannelClass, Classification, KrausSet, ResidualCheck};
pub use choi::ChoiMatrix;
pub use error::{Error, Result};
pub use extremal::{ExtremalityOutcome, ExtremalityReport, Verdict};
pub use gram::{GramMatrix, RankDiagnostics};
pub use matrix::{ComplexMatrix, C64};
pub use tolerance::TolerancePolicy;
