//! Postprocessing toolkit for quantum random number generators.
//!
//! The crate covers the full path from a modeled physical source to
//! near-uniform output bits:
//!
//! * [`entropy`] evaluates the per-sample min-entropy of a Gaussian source
//!   digitized by an ADC, plus Shannon and photon-number upper bounds.
//! * [`toeplitz`] and [`trevisan`] are seeded extractors that turn a source
//!   with known min-entropy into bits that are ε-close to uniform.
//! * [`stattests`] is a small randomness battery and autocorrelation analysis
//!   used to sanity check raw and extracted data.
//! * [`simulator`] generates reproducible synthetic source data.
//!
//! All bit strings travel as [`BitVector`], which uses MSB-first bit order
//! within each byte.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitstream;
pub mod distance;
mod error;
pub mod entropy;
pub mod gf2m;
pub mod pipeline;
pub mod simulator;
pub mod stattests;
pub mod toeplitz;
pub mod trevisan;

pub use bitstream::{BitVector, FileFormat};
pub use entropy::{EntropyReport, SourceModel};
pub use error::{Error, Result};
pub use gf2m::{FieldElement, FieldSpec};
pub use simulator::{ClassicalNoise, SimConfig};
pub use stattests::{AutocorrReport, TestReport};
pub use toeplitz::ToeplitzParams;
pub use trevisan::{TrevisanParams, WeakDesign};
