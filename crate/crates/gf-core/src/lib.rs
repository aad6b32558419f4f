//! Arithmetic in GF(q) for q <= 81, characters of the diagonal torus
//! `H = (F_q^x)^2`, and polynomial interpolation of functions `F_q^n -> F_q`.

mod chars;
mod conway;
mod field;
mod poly;

pub use chars::HChar;
pub use conway::conway_polynomial;
pub use field::{is_irreducible, FqElem, FqField, MAX_Q};
pub use poly::{interpolate, interpolate_fn, point_of_index, MPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GfError {
    #[error("unsupported field GF({p}^{f}): need p prime and p^f <= 81")]
    UnsupportedField { p: u32, f: u32 },
    #[error("modulus is not monic irreducible")]
    BadModulus,
    #[error("element code {code} out of range for q = {q}")]
    BadCode { code: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("character evaluated at a zero entry")]
    ZeroArgument,
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
}
