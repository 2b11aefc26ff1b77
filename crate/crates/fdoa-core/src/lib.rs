//! Exact construction and analysis of the FDOA curves of the planar
//! two-sensor problem.
//!
//! Sensors sit at `(1, 0)` and `(-1, 0)`. The curves are modelled in complex
//! projective space over the Gaussian rationals, with an optional quadratic
//! extension, so every polynomial identity is checked with zero tolerance.

pub mod error;
pub mod identities;
pub mod linalg;
pub mod maps;
pub mod model;
pub mod point;
pub mod poly;
pub mod scalar;
pub mod singularities;
pub mod tracer;
pub mod univar;

pub use error::{Error, Result, ScalarError};
pub use model::{FrameTransform, Scenario};
pub use point::ProjPoint;
pub use poly::{Frame, HomogPoly};
pub use scalar::{Extension, GaussQ, Scalar};
