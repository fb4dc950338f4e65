//! Numerical toolkit for exploring Kazhdan sets: spectral measures on the
//! circle and on ℝ^d, Weyl/Cesàro character sums in exact mod-1 arithmetic,
//! commutant projections for finite-dimensional unitary representations,
//! truncated infinite tensor products, and matrix coefficients of the
//! Heisenberg and affine groups.

pub mod fixed;
pub mod groups;
pub mod io;
pub mod kazhdan;
pub mod linalg;
pub mod measure;
pub mod realmeasure;
pub mod repr;
pub mod tensorprod;
pub mod weyl;

pub use fixed::Angle;
pub use groups::{AffineElement, AffineSign, GroupError, HeisenbergElement, WindowFunction};
pub use kazhdan::{KazhdanError, WitnessVerdict};
pub use measure::{CircleMeasure, FourierCoefficient, MeasureError};
pub use realmeasure::{Component1d, RealMeasure, RealMeasureError};
pub use repr::{BlockDecomposition, RepError, UnitaryRep};
pub use tensorprod::{RepSequence, TensorError};
pub use weyl::{IntegerSequence, WeylError, WeylReport};
