//! Landau analysis for planar Feynman diagrams, modelled as incidence problems of
//! lines in projective 3-space.
//!
//! The crate computes LS degrees and SLS degree vectors from multidegrees, solves
//! fibers of the Landau map numerically and exactly, evaluates LS discriminants and
//! SLS resultants, builds rational fibers with Grassmann–Cayley formulas, runs
//! reality and copositivity experiments on totally positive data, and constructs
//! the associated plabic graphs.

pub mod cli;
pub mod error;
pub mod diagram;
pub mod discriminant;
pub mod enumeration;
pub mod positivity;
pub mod positroid;
pub mod rational;
pub mod geometry;
pub mod scalars;
pub mod schubert;

pub use error::{LandauError, Result};
