//! Gibbsian dyadic algebra, the two conventions for the gradient of a vector
//! field, the rate-of-strain / rate-of-rotation decomposition, and the same
//! results in the geometric algebra of ℝ³.

pub mod check;
pub mod cli;
pub mod dyadics;
pub mod error;
pub mod fields;
mod format;
pub mod ga;
pub mod kinematics;
pub mod notation;
pub mod sampling;

pub use dyadics::Tensor3;
pub use error::{DyadicError, FieldError, FieldSpecError, GaError};
pub use fields::{BlackBoxField, PolyField, VectorField};
pub use ga::{Blade, Multivector, Vec3};
pub use kinematics::KinematicsReport;
