//! Cohomological equations over circle rotations, conformal model flows for contact,
//! symplectic and volume forms, and the fixed-point obstruction to invariant tensors.

pub mod precision;
pub mod rotation;
pub mod flows;
pub mod obstruction;
pub mod constraint;
pub mod cli;
