//! Truncated rings of integers `O / pi^N` of p-adic fields with residue field
//! GF(q), Teichmueller digit expansions, and elements of the fraction field
//! at bounded precision.

mod digits;
mod felem;
mod params;
mod ring;

pub use digits::ODigits;
pub use felem::FElem;
pub use params::{LocalParams, Model};
pub use ring::{LocalRing, RingElem, MAX_COEFFS};

use gf_core::GfError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("precision exhausted: need {needed} digits, {available} known")]
    PrecisionExhausted { needed: i64, available: i64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation {val} is below {by}")]
    NotDivisible { val: u32, by: u32 },
    #[error("element is not integral (valuation {0})")]
    NotIntegral(i32),
    #[error("index {index} out of range 0..={max}")]
    BadIndex { index: usize, max: usize },
}
