//! Cohomological Mackey functors, minimal resolutions and section cohomology
//! for finite p-groups over F_p.

pub mod error;
pub mod group;
pub mod homology;
pub mod linalg;
pub mod mackey;
pub mod module;
pub mod resolution;
pub mod seco;
pub mod tower;

pub use error::{MackeyError, Result};
pub use linalg::{check_exact, ExactVerdict, FpMatrix, FpSubquotient, Prime};
