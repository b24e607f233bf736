//! Verification laboratory for eigenfamilies, harmonic morphisms and proper
//! p-harmonic functions on the unitary and quaternionic unitary groups.
//!
//! The tension field and conformality operator are evaluated exactly from
//! second-order jets of polynomial functions along one-parameter subgroups.
//! The p-harmonic constructions are checked symbolically on the span of
//! `z^a·log^b z`.

pub mod cli;
pub mod compositions;
pub mod duality;
pub mod error;
pub mod families;
pub mod lie;
pub mod pharmonic;
pub mod poly;
pub mod tension;

pub use error::{Error, Result};
