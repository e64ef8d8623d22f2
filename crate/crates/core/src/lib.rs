//! Exact computation of left-invariant generalized complex structures on
//! nilpotent Lie algebras.
//!
//! The layers build on each other: [`scalars`] (exact rings and linear
//! algebra), [`exterior`] (forms, polyvectors, Clifford action), [`nilalg`]
//! (the Chevalley–Eilenberg differential and Courant bracket),
//! [`cohomology`], [`gcs`] (pure spinors), [`transforms`] (B- and β-fields)
//! and [`catalog`] (the six-dimensional classification and its checks).

pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod exterior;
pub mod gcs;
pub mod nilalg;
pub mod scalars;
pub mod transforms;

pub use error::{Error, Result};
