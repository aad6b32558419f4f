//! Exact linear algebra over `F_q` for the quotient
//! `ind_{IZ}^G 1 / (Im T12, Ker T12)` on a ball: membership in `Im T` and in
//! the ideal, equality of classes, `I(1)`-invariant classes, and normal forms
//! of pro-p Hecke words modulo the annihilator of `[id, 1]`.
//!
//! The ideal decision is complete: a vector of `ind_IZ 1` lies in the ideal
//! iff its transfer to `ind_KZ 1` lies in `Im T`, and a preimage under `T` of
//! a function supported in `B(n)` is supported in `B(n - 1)`.

mod certificate;
mod invariants;
mod oracle;
pub mod subspace;
mod words;

pub use certificate::{Certificate, Completeness, GeneratorFamily, Verdict};
pub use invariants::{InvariantReport, PredictedCheck};
pub use oracle::{Oracle, SpanFamily};
pub use subspace::{Insertion, SparseVec, Subspace};
pub use words::hecke_word_normal_form;

use gf_core::GfError;
use induced_modules::InducedError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Induced(#[from] InducedError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("dimension mismatch: ambient {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("radius {needed} does not fit in a ball of radius {radius}")]
    OutOfBall { needed: u32, radius: u32 },
    #[error("cutoff {cutoff} needs a ball of radius {needed}, have {radius}")]
    CutoffExceeded { cutoff: u32, needed: u32, radius: u32 },
    #[error("word of length {len} exceeds the bound {max}")]
    WordTooLong { len: usize, max: usize },
    #[error("decision routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("certificate does not recombine to its target: {0}")]
    BadCertificate(String),
}
