//! Finitely supported vectors in the compactly induced representations
//! `ind_{IZ}^G chi`, `ind_{I(1)Z}^G eta^r` and `ind_{KZ}^G 1`, restricted to a
//! ball of the Bruhat-Tits tree, with the left `G`-action and the Hecke
//! operators acting on them.
//!
//! Every operator is evaluated by expanding its coset formula into matrices
//! and reducing each product back to a canonical representative through a
//! membership-checked witness.

mod families;
mod hecke;
mod space;

pub use families::FamilyKind;
pub use hecke::{IwahoriOp, PropOp};
pub use space::{FormalSum, Induced, SpaceTag};

use gf_core::{GfError, HChar};
use tree_cosets::TreeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InducedError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("{op} acts on {expected}, not on {got}")]
    WrongSpace { op: &'static str, expected: &'static str, got: SpaceTag },
    #[error("spaces differ: {0} and {1}")]
    SpaceMismatch(SpaceTag, SpaceTag),
    #[error("character {chi} does not restrict to eta^{r} on the centre")]
    CharacterMismatch { chi: HChar, r: u32 },
    #[error("coordinate {0} is not in the ball")]
    BadKey(usize),
    #[error("bad family parameters: {0}")]
    BadFamily(String),
}
