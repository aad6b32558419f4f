//! 2x2 matrices over a p-adic field, membership in the standard compact open
//! subgroups, and coset normal forms for vertices `G/KZ`, oriented edges
//! `G/IZ` and the pro-p refinement `G/I(1)Z` of the Bruhat-Tits tree.

mod ball;
mod labels;
mod mat;
mod reduce;

pub use ball::{BallIndex, PropReduction};
pub use labels::{EdgeLabel, Family, LabelParseError, PropCosetLabel, VertexLabel};
pub use mat::{Mat2, Subgroup, Tree};
pub use reduce::Witness;

use local_ring::LocalError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error("singular matrix")]
    Singular,
    #[error("edge {0} lies outside the ball of radius {1}")]
    OutOfBall(String, u32),
    #[error("witness for {label} fails membership in {group:?}")]
    WitnessFailed { label: String, group: Subgroup },
    #[error("precision exhausted while reducing at level {level}: {source}")]
    ReductionPrecision { level: i32, source: LocalError },
}
