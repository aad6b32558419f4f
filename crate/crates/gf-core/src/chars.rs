use std::fmt;

use crate::{FqElem, FqField, GfError};

/// A character `a^r d^s` of the diagonal torus `H = (F_q^x)^2`, sending
/// `diag([x], [y])` to `x^r y^s`. Exponents are kept reduced mod `q - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HChar {
    r: u32,
    s: u32,
    order: u32,
}

impl HChar {
    pub fn new(k: &FqField, r: i64, s: i64) -> Self {
        let order = k.q() - 1;
        let m = i64::from(order);
        HChar { r: r.rem_euclid(m) as u32, s: s.rem_euclid(m) as u32, order }
    }

    pub fn trivial(k: &FqField) -> Self {
        Self::new(k, 0, 0)
    }

    /// `(d/a)^j`, i.e. `a^{-j} d^j`.
    pub fn d_over_a(k: &FqField, j: i64) -> Self {
        Self::new(k, -j, j)
    }

    /// All `(q-1)^2` characters of `H`.
    pub fn all(k: &FqField) -> Vec<HChar> {
        let m = i64::from(k.q() - 1);
        (0..m).flat_map(|r| (0..m).map(move |s| (r, s))).map(|(r, s)| Self::new(k, r, s)).collect()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_trivial(&self) -> bool {
        self.r == 0 && self.s == 0
    }

    /// `chi^w = a^s d^r`.
    pub fn conj_w(&self) -> Self {
        HChar { r: self.s, s: self.r, order: self.order }
    }

    pub fn product(&self, other: &HChar) -> Self {
        debug_assert_eq!(self.order, other.order);
        HChar {
            r: (self.r + other.r) % self.order,
            s: (self.s + other.s) % self.order,
            order: self.order,
        }
    }

    /// Value at `diag([x], [y])`.
    pub fn eval(&self, k: &FqField, x: FqElem, y: FqElem) -> Result<FqElem, GfError> {
        if x.is_zero() || y.is_zero() {
            return Err(GfError::ZeroArgument);
        }
        Ok(k.mul(k.pow(x, u64::from(self.r)), k.pow(y, u64::from(self.s))))
    }
}

impl fmt::Display for HChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^{}d^{}", self.r, self.s)
    }
}
