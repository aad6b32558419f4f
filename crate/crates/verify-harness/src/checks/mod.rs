//! The check bodies, grouped by the layer they exercise.

pub mod foundation;
pub mod infra;
pub mod invariance;
pub mod operators;
pub mod reduction;
pub mod reverse;
pub mod table;
