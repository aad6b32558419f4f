use gf_core::FqElem;

use crate::{LocalError, LocalRing, RingElem};

/// Teichmueller digits `(d_0, .., d_{N-1})` of an element `sum [d_i] pi^i`
/// of `O / pi^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ODigits {
    digits: Vec<FqElem>,
}

impl ODigits {
    pub fn digits(&self) -> &[FqElem] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digit(&self, i: usize) -> FqElem {
        self.digits.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|d| d.is_zero())
    }

    /// `[x]_m`: digits at positions `>= m` set to zero.
    pub fn truncate(&self, m: usize) -> Result<ODigits, LocalError> {
        if m > self.digits.len() {
            return Err(LocalError::BadIndex { index: m, max: self.digits.len() });
        }
        let mut digits = self.digits.clone();
        for d in &mut digits[m..] {
            *d = FqElem::ZERO;
        }
        Ok(ODigits { digits })
    }
}

impl LocalRing {
    /// Pads `digits` with zeros to length N.
    pub fn digits(&self, digits: &[FqElem]) -> Result<ODigits, LocalError> {
        let n = self.prec() as usize;
        if digits.len() > n {
            return Err(LocalError::PrecisionExhausted { needed: digits.len() as i64, available: n as i64 });
        }
        let q = self.q();
        if let Some(bad) = digits.iter().find(|d| d.code() >= q) {
            return Err(gf_core::GfError::BadCode { code: bad.code(), q }.into());
        }
        let mut v = digits.to_vec();
        v.resize(n, FqElem::ZERO);
        Ok(ODigits { digits: v })
    }

    pub fn to_digits(&self, x: &RingElem) -> ODigits {
        ODigits { digits: self.digits_of(x) }
    }

    /// The first `n` digits of `x`.
    pub fn to_digits_n(&self, x: &RingElem, n: usize) -> Result<Vec<FqElem>, LocalError> {
        if n > self.prec() as usize {
            return Err(LocalError::PrecisionExhausted { needed: n as i64, available: i64::from(self.prec()) });
        }
        let mut d = self.digits_of(x);
        d.truncate(n);
        Ok(d)
    }

    pub fn from_digits(&self, x: &ODigits) -> RingElem {
        self.from_digit_slice(x.digits())
    }

    /// Digits of `[mu]`, i.e. `(mu, 0, 0, ..)`.
    pub fn teich_digits(&self, mu: FqElem) -> ODigits {
        self.to_digits(&self.teich(mu))
    }

    pub fn digits_add(&self, x: &ODigits, y: &ODigits) -> ODigits {
        self.to_digits(&self.add(&self.from_digits(x), &self.from_digits(y)))
    }

    pub fn digits_mul(&self, x: &ODigits, y: &ODigits) -> ODigits {
        self.to_digits(&self.mul(&self.from_digits(x), &self.from_digits(y)))
    }

    pub fn digits_neg(&self, x: &ODigits) -> ODigits {
        self.to_digits(&self.neg(&self.from_digits(x)))
    }

    pub fn digits_unit_inv(&self, x: &ODigits) -> Result<ODigits, LocalError> {
        Ok(self.to_digits(&self.unit_inv(&self.from_digits(x))?))
    }
}
