use std::fmt;

use gf_core::FqElem;

use crate::{LocalError, LocalRing, RingElem};

const EXACT: i32 = i32::MAX;

/// An element `pi^val * unit` of `F` whose unit is known modulo `pi^rel`.
///
/// `rel = 0` encodes zero: known to be divisible by `pi^val`, or exactly zero
/// when `val` is the sentinel. Both kinds of zero report `is_zero`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FElem {
    val: i32,
    unit: RingElem,
    rel: u32,
}

impl fmt::Debug for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rel == 0 {
            if self.val == EXACT {
                write!(f, "0")
            } else {
                write!(f, "O(pi^{})", self.val)
            }
        } else {
            write!(f, "pi^{}*{:?}+O(rel {})", self.val, self.unit, self.rel)
        }
    }
}

impl FElem {
    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    /// Valuation, `None` for zero.
    pub fn val(&self) -> Option<i32> {
        (self.rel > 0).then_some(self.val)
    }

    /// `val` for nonzero elements, `i32::MAX` for zero.
    pub fn val_or_max(&self) -> i32 {
        if self.rel > 0 {
            self.val
        } else {
            EXACT
        }
    }

    /// The element is known modulo `pi^abs_prec`; `i32::MAX` when exact zero.
    pub fn abs_prec(&self) -> i32 {
        if self.rel == 0 {
            self.val
        } else {
            self.val + self.rel as i32
        }
    }

    pub fn rel_prec(&self) -> u32 {
        self.rel
    }

    pub fn unit(&self) -> &RingElem {
        &self.unit
    }

    pub fn is_exact_zero(&self) -> bool {
        self.rel == 0 && self.val == EXACT
    }
}

impl LocalRing {
    pub fn f_zero(&self) -> FElem {
        FElem { val: EXACT, unit: RingElem::default(), rel: 0 }
    }

    fn f_inexact_zero(&self, abs: i32) -> FElem {
        FElem { val: abs, unit: RingElem::default(), rel: 0 }
    }

    /// `pi^shift * x` for `x` in `O/pi^N`, known to `N` digits past the shift.
    /// The zero class becomes `O(pi^{shift + N})`.
    pub fn f_from_ring_shifted(&self, x: &RingElem, shift: i32) -> FElem {
        match self.val(x) {
            None => self.f_inexact_zero(shift + self.prec() as i32),
            Some(v) => {
                let unit = self.div_pi_pow(x, v).expect("v is the valuation");
                FElem { val: shift + v as i32, unit, rel: self.prec() - v }
            }
        }
        .normalized_for(self)
    }

    pub fn f_from_ring(&self, x: &RingElem) -> FElem {
        self.f_from_ring_shifted(x, 0)
    }

    pub fn f_one(&self) -> FElem {
        self.f_from_int(1)
    }

    pub fn f_from_int(&self, n: i64) -> FElem {
        if n == 0 {
            return self.f_zero();
        }
        self.f_from_ring(&self.from_int(n))
    }

    pub fn f_teich(&self, mu: FqElem) -> FElem {
        self.f_from_digits(&[mu], 0)
    }

    /// `pi^k`.
    pub fn f_pi_pow(&self, k: i32) -> FElem {
        FElem { val: k, unit: self.one(), rel: self.prec() }
    }

    /// `sum_i [d_i] pi^{i + shift}`; all-zero digits give the exact zero.
    pub fn f_from_digits(&self, digits: &[FqElem], shift: i32) -> FElem {
        match digits.iter().position(|d| !d.is_zero()) {
            None => self.f_zero(),
            Some(lead) => self.f_from_ring_shifted(&self.from_digit_slice(&digits[lead..]), shift + lead as i32),
        }
    }

    pub fn f_neg(&self, x: &FElem) -> FElem {
        if x.rel == 0 {
            return *x;
        }
        FElem { unit: self.neg(&x.unit), ..*x }
    }

    pub fn f_add(&self, x: &FElem, y: &FElem) -> FElem {
        let abs = x.abs_prec().min(y.abs_prec());
        if x.rel == 0 && y.rel == 0 {
            return self.f_inexact_zero(abs).normalized_for(self);
        }
        let v = x.val_or_max().min(y.val_or_max());
        if v >= abs {
            return self.f_inexact_zero(abs);
        }
        let shifted = |z: &FElem| -> RingElem {
            if z.rel == 0 {
                self.zero()
            } else {
                self.mul_pi_pow(&z.unit, (z.val - v) as u32)
            }
        };
        let width = (abs - v) as u32;
        let s = self.reduce(&self.add(&shifted(x), &shifted(y)), width);
        match self.val(&s) {
            Some(k) if k < width => {
                let unit = self.reduce(&self.div_pi_pow(&s, k).expect("k is the valuation"), width - k);
                FElem { val: v + k as i32, unit, rel: width - k }
            }
            _ => self.f_inexact_zero(abs),
        }
    }

    pub fn f_sub(&self, x: &FElem, y: &FElem) -> FElem {
        self.f_add(x, &self.f_neg(y))
    }

    pub fn f_mul(&self, x: &FElem, y: &FElem) -> FElem {
        match (x.rel, y.rel) {
            (0, _) | (_, 0) => {
                if x.is_exact_zero() || y.is_exact_zero() {
                    return self.f_zero();
                }
                // O(pi^a) * y has absolute precision a + val(y) (or a + b)
                let abs = x.abs_prec().saturating_add(y.val_or_max().min(y.abs_prec()))
                    .min(y.abs_prec().saturating_add(x.val_or_max().min(x.abs_prec())));
                self.f_inexact_zero(abs)
            }
            (a, b) => {
                let rel = a.min(b);
                let unit = self.reduce(&self.mul(&x.unit, &y.unit), rel);
                FElem { val: x.val + y.val, unit, rel }
            }
        }
    }

    pub fn f_inv(&self, x: &FElem) -> Result<FElem, LocalError> {
        if x.is_exact_zero() {
            return Err(LocalError::DivisionByZero);
        }
        if x.rel == 0 {
            return Err(LocalError::PrecisionExhausted { needed: i64::from(x.val) + 1, available: i64::from(x.val) });
        }
        let unit = self.reduce(&self.unit_inv(&x.unit)?, x.rel);
        Ok(FElem { val: -x.val, unit, rel: x.rel })
    }

    pub fn f_div(&self, x: &FElem, y: &FElem) -> Result<FElem, LocalError> {
        Ok(self.f_mul(x, &self.f_inv(y)?))
    }

    /// `x * pi^k`.
    pub fn f_shift(&self, x: &FElem, k: i32) -> FElem {
        if x.is_exact_zero() {
            return *x;
        }
        FElem { val: x.val + k, ..*x }
    }

    /// Whether `x - y` is zero at the precision both are known to.
    pub fn f_eq(&self, x: &FElem, y: &FElem) -> bool {
        self.f_sub(x, y).is_zero()
    }

    /// Teichmueller digits of `x` at positions `lo..hi` (positions are
    /// exponents of `pi`).
    pub fn f_digits(&self, x: &FElem, lo: i32, hi: i32) -> Result<Vec<FqElem>, LocalError> {
        if hi > x.abs_prec() {
            return Err(LocalError::PrecisionExhausted { needed: i64::from(hi), available: i64::from(x.abs_prec()) });
        }
        if lo >= hi {
            return Ok(Vec::new());
        }
        let mut out = vec![FqElem::ZERO; (hi - lo) as usize];
        if x.rel > 0 {
            let unit_digits = self.digits_of(&x.unit);
            for pos in lo.max(x.val)..hi {
                out[(pos - lo) as usize] = unit_digits[(pos - x.val) as usize];
            }
        }
        Ok(out)
    }

    /// `[x]_m`: the Teichmueller expansion of `x` cut below `pi^m`. Exact.
    pub fn f_truncate(&self, x: &FElem, m: i32) -> Result<FElem, LocalError> {
        if x.rel == 0 || x.val >= m {
            if m > x.abs_prec() {
                return Err(LocalError::PrecisionExhausted { needed: i64::from(m), available: i64::from(x.abs_prec()) });
            }
            return Ok(self.f_zero());
        }
        let d = self.f_digits(x, x.val, m)?;
        Ok(self.f_from_digits(&d, x.val))
    }

    /// The image of `x` in `O/pi^m`; `x` must be integral and known mod `pi^m`.
    pub fn f_lift_to_ring(&self, x: &FElem, m: u32) -> Result<RingElem, LocalError> {
        let m = m.min(self.prec());
        if x.rel > 0 && x.val < 0 {
            return Err(LocalError::NotIntegral(x.val));
        }
        if i64::from(m) > i64::from(x.abs_prec()) {
            return Err(LocalError::PrecisionExhausted { needed: i64::from(m), available: i64::from(x.abs_prec()) });
        }
        if x.rel == 0 || x.val as u32 >= m {
            return Ok(self.zero());
        }
        Ok(self.reduce(&self.mul_pi_pow(&x.unit, x.val as u32), m))
    }

    /// Residue of an integral element in F_q.
    pub fn f_reduce_mod_p(&self, x: &FElem) -> Result<FqElem, LocalError> {
        Ok(self.residue(&self.f_lift_to_ring(x, 1)?))
    }
}

impl FElem {
    fn normalized_for(self, ring: &LocalRing) -> FElem {
        if self.rel == 0 {
            return self;
        }
        FElem { unit: ring.reduce(&self.unit, self.rel), ..self }
    }
}

#[cfg(test)]
mod tests {
    use crate::{LocalParams, LocalRing};

    fn ring() -> LocalRing {
        LocalRing::new(LocalParams::new(3, 2, 1, 8).unwrap()).unwrap()
    }

    #[test]
    fn valuation_bookkeeping() {
        let r = ring();
        let u = r.f_add(&r.f_one(), &r.f_pi_pow(1));
        let x = r.f_mul(&r.f_pi_pow(3), &u);
        assert_eq!(x.val(), Some(3));
        let y = r.f_mul(&r.f_pi_pow(1), &u);
        let z = r.f_inv(&y).unwrap();
        let one = r.f_mul(&y, &z);
        assert!(r.f_eq(&one, &r.f_one()));
        assert_eq!(one.rel_prec(), r.prec());
    }

    #[test]
    fn cancellation_gives_zero() {
        let r = ring();
        let x = r.f_add(&r.f_teich(r.field().from_int(2)), &r.f_pi_pow(-2));
        assert!(r.f_sub(&x, &x).is_zero());
        assert!(r.f_inv(&r.f_zero()).is_err());
    }

    #[test]
    fn precision_is_not_fabricated() {
        let r = ring();
        // 1 + pi^3 - 1 keeps N - 3 relative digits
        let a = r.f_add(&r.f_one(), &r.f_pi_pow(3));
        let d = r.f_sub(&a, &r.f_one());
        assert_eq!(d.val(), Some(3));
        assert_eq!(d.abs_prec(), r.prec() as i32);
        assert!(r.f_digits(&d, 0, r.prec() as i32 + 1).is_err());
    }

    #[test]
    fn truncation_of_negative_valuation() {
        let r = ring();
        let x = r.f_add(&r.f_pi_pow(-1), &r.f_add(&r.f_one(), &r.f_pi_pow(2)));
        let t = r.f_truncate(&x, 1).unwrap();
        assert!(r.f_eq(&t, &r.f_add(&r.f_pi_pow(-1), &r.f_one())));
        assert!(r.f_truncate(&x, -1).unwrap().is_zero());
    }
}
