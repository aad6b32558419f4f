use std::fmt;
use std::sync::Arc;

use crate::conway::{conway_polynomial, is_prime};
use crate::GfError;

/// Largest supported field size.
pub const MAX_Q: u32 = 81;

/// An element of GF(q), encoded by its power-basis coordinates read as a
/// base-p integer: `code = c_0 + c_1 p + ... + c_{f-1} p^{f-1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(u8);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn code(self) -> u32 {
        u32::from(self.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    frob: Vec<u8>,
    // log[x] for x != 0, exp[k] = g^k for 0 <= k < q-1
    log: Vec<u32>,
    exp: Vec<u8>,
}

/// GF(p^f) modelled as F_p[X]/(Conway polynomial). Cloning is cheap.
#[derive(Clone)]
pub struct FqField(Arc<Tables>);

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.f == other.0.f
    }
}

impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.f)
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let f = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (f..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &m) in modulus.iter().enumerate().take(f) {
            let idx = k - f + j;
            prod[idx] = (prod[idx] + (p - c) * m % p) % p;
        }
    }
    prod.truncate(f);
    prod
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + (p - lead) * bj % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Exhaustive check that a monic polynomial over F_p has no monic factor of
/// degree between 1 and deg/2.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push(c % p);
                c /= p;
            }
            cand.push(1);
            if poly_rem(modulus, &cand, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl FqField {
    /// Builds GF(p^f) from the embedded Conway table.
    pub fn new(p: u32, f: u32) -> Result<Self, GfError> {
        if !is_prime(p) || f == 0 || p.checked_pow(f).is_none_or(|q| q > MAX_Q) {
            return Err(GfError::UnsupportedField { p, f });
        }
        let modulus = conway_polynomial(p, f).ok_or(GfError::UnsupportedField { p, f })?;
        Self::with_modulus(p, modulus)
    }

    /// Builds GF(p^f) from an explicit monic modulus (ascending coefficients).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, GfError> {
        let f = modulus.len() as u32 - 1;
        if !is_prime(p) || f == 0 || p.checked_pow(f).is_none_or(|q| q > MAX_Q) {
            return Err(GfError::UnsupportedField { p, f });
        }
        if modulus[f as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(GfError::BadModulus);
        }
        if !is_irreducible(&modulus, p) {
            return Err(GfError::BadModulus);
        }
        let q = p.pow(f);
        let qs = q as usize;
        let to_vec = |code: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(f as usize);
            let mut c = code;
            for _ in 0..f {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let from_vec = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let vecs: Vec<Vec<u32>> = (0..q).map(to_vec).collect();

        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u32> = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = from_vec(&s) as u8;
                mul[a * qs + b] = from_vec(&poly_mulmod(&vecs[a], &vecs[b], &modulus, p)) as u8;
            }
        }
        let neg: Vec<u8> = (0..qs)
            .map(|a| from_vec(&vecs[a].iter().map(|&x| (p - x) % p).collect::<Vec<_>>()) as u8)
            .collect();

        // X mod modulus generates the unit group for a Conway modulus; fall back
        // to a search so arbitrary irreducible moduli still work.
        let x_code = if f == 1 { (p - modulus[0]) % p } else { p };
        let mut generator = None;
        for cand in std::iter::once(x_code).chain(1..q) {
            if cand == 0 {
                continue;
            }
            let mut order = 1u32;
            let mut cur = cand as usize;
            while cur != 1 {
                cur = mul[cur * qs + cand as usize] as usize;
                order += 1;
            }
            if order == q - 1 {
                generator = Some(cand);
                break;
            }
        }
        let g = generator.expect("finite field has a primitive element") as usize;
        let mut exp = vec![0u8; (q - 1) as usize];
        let mut log = vec![0u32; qs];
        let mut cur = 1usize;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = cur as u8;
            log[cur] = k as u32;
            cur = mul[cur * qs + g] as usize;
        }
        let mut inv = vec![0u8; qs];
        for a in 1..qs {
            let k = (q - 1 - log[a]) % (q - 1);
            inv[a] = exp[k as usize];
        }
        let frob: Vec<u8> = (0..qs)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    exp[((u64::from(log[a]) * u64::from(p)) % u64::from(q - 1)) as usize]
                }
            })
            .collect();
        Ok(FqField(Arc::new(Tables { p, f, q, modulus, add, mul, neg, inv, frob, log, exp })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.f
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus, ascending coefficients.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn elem(&self, code: u32) -> Result<FqElem, GfError> {
        if code < self.0.q {
            Ok(FqElem(code as u8))
        } else {
            Err(GfError::BadCode { code, q: self.0.q })
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem, GfError> {
        if coeffs.len() > self.0.f as usize {
            return Err(GfError::BadCode { code: u32::MAX, q: self.0.q });
        }
        let p = self.0.p;
        let code = coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c % p);
        Ok(FqElem(code as u8))
    }

    pub fn coeffs(&self, x: FqElem) -> Vec<u32> {
        let p = self.0.p;
        let mut c = x.code();
        (0..self.0.f)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(i64::from(self.0.p)) as u8)
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    /// The fixed primitive element (the class of X for a Conway modulus).
    pub fn generator(&self) -> FqElem {
        if self.0.q == 2 {
            FqElem::ONE
        } else {
            FqElem(self.0.exp[1])
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + Clone {
        (0..self.0.q).map(|c| FqElem(c as u8))
    }

    pub fn units(&self) -> impl Iterator<Item = FqElem> + Clone {
        (1..self.0.q).map(|c| FqElem(c as u8))
    }

    #[inline]
    fn idx(&self, a: FqElem, b: FqElem) -> usize {
        a.0 as usize * self.0.q as usize + b.0 as usize
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.0.add[self.idx(a, b)])
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.0.mul[self.idx(a, b)])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem, GfError> {
        if a.is_zero() {
            Err(GfError::DivisionByZero)
        } else {
            Ok(FqElem(self.0.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k` with the convention `0^0 = 1`.
    pub fn pow(&self, a: FqElem, k: u64) -> FqElem {
        if k == 0 {
            return FqElem::ONE;
        }
        if a.is_zero() {
            return FqElem::ZERO;
        }
        let order = u64::from(self.0.q - 1);
        let e = (u64::from(self.0.log[a.0 as usize]) * (k % order)) % order;
        FqElem(self.0.exp[e as usize])
    }

    /// `a^k` for a signed exponent; `a` must be nonzero when `k < 0`.
    pub fn pow_signed(&self, a: FqElem, k: i64) -> Result<FqElem, GfError> {
        if k >= 0 {
            return Ok(self.pow(a, k as u64));
        }
        let inv = self.inv(a)?;
        Ok(self.pow(inv, k.unsigned_abs()))
    }

    /// Absolute Frobenius `x -> x^p`.
    #[inline]
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        FqElem(self.0.frob[a.0 as usize])
    }

    /// Discrete log to the base `generator()`.
    pub fn log(&self, a: FqElem) -> Result<u32, GfError> {
        if a.is_zero() {
            Err(GfError::ZeroArgument)
        } else {
            Ok(self.0.log[a.0 as usize])
        }
    }

    /// `sum_{z in F_q} z^l`, computed from the closed form.
    pub fn power_sum(&self, l: u64) -> FqElem {
        let m = u64::from(self.0.q - 1);
        if l >= 1 && l.is_multiple_of(m) {
            self.from_int(-1)
        } else {
            FqElem::ZERO
        }
    }

    /// Characteristic-p exponents `p^0, .., p^{f-1}`.
    pub fn p_powers(&self) -> Vec<u32> {
        (0..self.0.f).map(|l| self.0.p.pow(l)).collect()
    }

    /// Whether `k` is `p^l` for some `0 <= l < f`.
    pub fn is_p_power_exponent(&self, k: u32) -> bool {
        self.p_powers().contains(&k)
    }

    /// An F_p-basis of F_q (the power basis).
    pub fn fp_basis(&self) -> Vec<FqElem> {
        (0..self.0.f).map(|j| FqElem(self.0.p.pow(j) as u8)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_inverse_of_generator() {
        let k = FqField::new(2, 2).unwrap();
        let x = k.generator();
        let x2 = k.mul(x, x);
        assert_eq!(k.inv(x).unwrap(), x2);
        assert_eq!(x2, k.add(x, k.one()));
    }

    #[test]
    fn rejects_large_and_composite() {
        assert!(FqField::new(3, 5).is_err());
        assert!(FqField::new(4, 1).is_err());
        assert!(FqField::new(83, 1).is_err());
        assert!(FqField::new(79, 1).is_ok());
    }

    #[test]
    fn inv_zero_fails() {
        let k = FqField::new(5, 1).unwrap();
        assert_eq!(k.inv(FqElem::ZERO), Err(GfError::DivisionByZero));
    }

    #[test]
    fn zero_to_zero_is_one() {
        let k = FqField::new(3, 2).unwrap();
        assert_eq!(k.pow(FqElem::ZERO, 0), FqElem::ONE);
        assert_eq!(k.pow(FqElem::ZERO, 3), FqElem::ZERO);
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert_eq!(FqField::with_modulus(2, vec![1, 0, 1]), Err(GfError::BadModulus));
    }
}
