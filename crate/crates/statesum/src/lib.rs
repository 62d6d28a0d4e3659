//! Exact lattice state-sum models on triangulated surfaces.
//!
//! The core is generic over the scalar field (`cyclo::Scalar`); the aliases at the
//! crate root fix the scalar to the cyclotomic type [`cyclo::Cyclo`].

pub mod algebra;
pub mod defect;
pub mod engine;
pub mod error;
pub mod frobenius;
pub mod group;
pub mod km;
pub mod linalg;
pub mod report;
pub mod spin;
pub mod spin_structure;
pub mod surface;

pub use cyclo::{Cyclo, Scalar};
pub use error::{Error, Result};
pub use report::Report;

pub type Algebra = algebra::Algebra<Cyclo>;
pub type Frobenius = frobenius::Frobenius<Cyclo>;
pub type Element = algebra::Element<Cyclo>;
pub type CrossingData = spin::CrossingData<Cyclo>;
pub type BimoduleData = defect::BimoduleData<Cyclo>;
