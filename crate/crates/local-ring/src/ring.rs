use std::fmt;
use std::sync::Arc;

use gf_core::{FqElem, FqField};

use crate::{LocalError, LocalParams};

/// Upper bound on `e * f`, the number of integer coordinates of an element.
pub const MAX_COEFFS: usize = 8;

/// An element of `O / pi^N` in the concrete model: coordinate `i * f + j`
/// is the coefficient of `X^j pi^i` (`0 <= i < e`, `0 <= j < f`), an integer
/// modulo `p^{ceil((N - i) / e)}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RingElem {
    c: [u64; MAX_COEFFS],
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{:?}", self.c)
    }
}

impl RingElem {
    pub fn coords(&self) -> &[u64; MAX_COEFFS] {
        &self.c
    }
}

struct Inner {
    params: LocalParams,
    field: FqField,
    e: usize,
    f: usize,
    p: u64,
    // p^{M_i}, M_i = ceil((prec - i) / e), one per power of pi below e
    block_mod: Vec<u64>,
    top: u64,
    lift: Vec<u64>,
    teich: Vec<RingElem>,
}

/// The ring `O / pi^N` for fixed `(p, e, f, N)`. Cloning is cheap.
#[derive(Clone)]
pub struct LocalRing(Arc<Inner>);

impl fmt::Debug for LocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.0.params;
        write!(f, "O(p={},e={},f={})/pi^{}", p.p, p.e, p.f, p.prec)
    }
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

impl LocalRing {
    pub fn new(params: LocalParams) -> Result<Self, LocalError> {
        let field = FqField::new(params.p, params.f)?;
        let (e, f) = (params.e as usize, params.f as usize);
        if e * f > MAX_COEFFS {
            return Err(LocalError::Unsupported(format!("e*f = {} exceeds {}", e * f, MAX_COEFFS)));
        }
        let p = u64::from(params.p);
        let prec = params.prec as usize;
        let m0 = prec.div_ceil(e);
        let top = p
            .checked_pow(m0 as u32)
            .filter(|&t| t < (1u64 << 62))
            .ok_or_else(|| LocalError::Unsupported(format!("precision {} too large for p = {}", prec, p)))?;
        let block_mod: Vec<u64> = (0..e)
            .map(|i| {
                let m = prec.saturating_sub(i).div_ceil(e);
                p.pow(m as u32)
            })
            .collect();
        let lift: Vec<u64> = field.modulus().iter().map(|&c| u64::from(c)).collect();
        let mut ring = LocalRing(Arc::new(Inner {
            params,
            field: field.clone(),
            e,
            f,
            p,
            block_mod,
            top,
            lift,
            teich: Vec::new(),
        }));
        let teich: Vec<RingElem> = field.elements().map(|mu| ring.compute_teich(mu)).collect();
        Arc::get_mut(&mut ring.0).expect("unique during construction").teich = teich;
        Ok(ring)
    }

    pub fn params(&self) -> &LocalParams {
        &self.0.params
    }

    pub fn field(&self) -> &FqField {
        &self.0.field
    }

    pub fn prec(&self) -> u32 {
        self.0.params.prec
    }

    pub fn e(&self) -> u32 {
        self.0.params.e
    }

    pub fn q(&self) -> u32 {
        self.0.field.q()
    }

    fn normalize(&self, mut x: RingElem) -> RingElem {
        let inner = &self.0;
        for i in 0..inner.e {
            let m = inner.block_mod[i];
            for j in 0..inner.f {
                x.c[i * inner.f + j] %= m;
            }
        }
        x
    }

    pub fn zero(&self) -> RingElem {
        RingElem::default()
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        let top = self.0.top;
        let mut x = RingElem::default();
        x.c[0] = (i128::from(n).rem_euclid(i128::from(top))) as u64;
        self.normalize(x)
    }

    /// The uniformizer: `p` when `e = 1`, otherwise the root of `X^e - p`.
    pub fn uniformizer(&self) -> RingElem {
        if self.0.e == 1 {
            self.from_int(self.0.p as i64)
        } else {
            let mut x = RingElem::default();
            x.c[self.0.f] = 1;
            self.normalize(x)
        }
    }

    pub fn is_zero(&self, x: &RingElem) -> bool {
        x.c.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &RingElem, y: &RingElem) -> RingElem {
        let inner = &self.0;
        let mut out = RingElem::default();
        for i in 0..inner.e {
            let m = inner.block_mod[i];
            for j in 0..inner.f {
                let k = i * inner.f + j;
                out.c[k] = (x.c[k] + y.c[k]) % m;
            }
        }
        out
    }

    pub fn neg(&self, x: &RingElem) -> RingElem {
        let inner = &self.0;
        let mut out = RingElem::default();
        for i in 0..inner.e {
            let m = inner.block_mod[i];
            for j in 0..inner.f {
                let k = i * inner.f + j;
                out.c[k] = (m - x.c[k] % m) % m;
            }
        }
        out
    }

    pub fn sub(&self, x: &RingElem, y: &RingElem) -> RingElem {
        self.add(x, &self.neg(y))
    }

    // Product in W = Z[X]/(lifted modulus) modulo p^{M_0}.
    fn w_mul(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let inner = &self.0;
        let (f, top) = (inner.f, inner.top);
        let mut prod = [0u64; 2 * MAX_COEFFS];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = (prod[i + j] + mulmod(x, y, top)) % top;
                }
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..f {
                let sub = mulmod(c, inner.lift[j], top);
                prod[k - f + j] = (prod[k - f + j] + top - sub) % top;
            }
        }
        out[..f].copy_from_slice(&prod[..f]);
    }

    pub fn mul(&self, x: &RingElem, y: &RingElem) -> RingElem {
        let inner = &self.0;
        let (e, f, top, p) = (inner.e, inner.f, inner.top, inner.p);
        let mut acc = [0u64; MAX_COEFFS];
        let mut t = [0u64; MAX_COEFFS];
        for i in 0..e {
            let a = &x.c[i * f..(i + 1) * f];
            if a.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..e {
                let b = &y.c[j * f..(j + 1) * f];
                if b.iter().all(|&c| c == 0) {
                    continue;
                }
                self.w_mul(a, b, &mut t);
                let (k, scale) = if i + j >= e { (i + j - e, p) } else { (i + j, 1) };
                for l in 0..f {
                    let v = mulmod(t[l], scale, top);
                    acc[k * f + l] = (acc[k * f + l] + v) % top;
                }
            }
        }
        self.normalize(RingElem { c: acc })
    }

    pub fn pow(&self, x: &RingElem, mut k: u64) -> RingElem {
        let mut acc = self.one();
        let mut b = *x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            k >>= 1;
        }
        acc
    }

    /// Residue class in F_q.
    pub fn residue(&self, x: &RingElem) -> FqElem {
        let p = self.0.p;
        let coeffs: Vec<u32> = x.c[..self.0.f].iter().map(|&c| (c % p) as u32).collect();
        self.0.field.from_coeffs(&coeffs).expect("f coordinates")
    }

    fn lift_residue(&self, mu: FqElem) -> RingElem {
        let mut x = RingElem::default();
        for (j, c) in self.0.field.coeffs(mu).into_iter().enumerate() {
            x.c[j] = u64::from(c);
        }
        self.normalize(x)
    }

    fn compute_teich(&self, mu: FqElem) -> RingElem {
        let q = u64::from(self.0.field.q());
        let mut y = self.lift_residue(mu);
        loop {
            let next = self.pow(&y, q);
            if next == y {
                return y;
            }
            y = next;
        }
    }

    /// Teichmueller representative `[mu]`.
    pub fn teich(&self, mu: FqElem) -> RingElem {
        self.0.teich[mu.code() as usize]
    }

    /// pi-adic valuation, `None` for zero.
    pub fn val(&self, x: &RingElem) -> Option<u32> {
        let inner = &self.0;
        let p = inner.p;
        let mut best: Option<u32> = None;
        for i in 0..inner.e {
            for j in 0..inner.f {
                let mut c = x.c[i * inner.f + j];
                if c == 0 {
                    continue;
                }
                let mut v = 0u32;
                while c.is_multiple_of(p) {
                    c /= p;
                    v += 1;
                }
                let cand = i as u32 + inner.e as u32 * v;
                best = Some(best.map_or(cand, |b| b.min(cand)));
            }
        }
        best
    }

    /// Multiplication by `pi^k`.
    pub fn mul_pi_pow(&self, x: &RingElem, k: u32) -> RingElem {
        let inner = &self.0;
        let (e, f, p, top) = (inner.e, inner.f, inner.p, inner.top);
        let mut cur = *x;
        for _ in 0..k {
            let mut next = RingElem::default();
            for i in 0..e {
                for j in 0..f {
                    let c = cur.c[i * f + j];
                    if i + 1 < e {
                        next.c[(i + 1) * f + j] = c;
                    } else {
                        next.c[j] = mulmod(c, p, top);
                    }
                }
            }
            cur = self.normalize(next);
            if self.is_zero(&cur) {
                break;
            }
        }
        cur
    }

    /// Exact division by `pi^k`. The result is only meaningful modulo
    /// `pi^{N - k}`; the top `k` digits are filled with zeros.
    pub fn div_pi_pow(&self, x: &RingElem, k: u32) -> Result<RingElem, LocalError> {
        if let Some(v) = self.val(x) {
            if v < k {
                return Err(LocalError::NotDivisible { val: v, by: k });
            }
        }
        let inner = &self.0;
        let (e, f, p) = (inner.e, inner.f, inner.p);
        let mut cur = *x;
        for _ in 0..k {
            let mut next = RingElem::default();
            for i in 0..e {
                for j in 0..f {
                    let c = cur.c[i * f + j];
                    if i >= 1 {
                        next.c[(i - 1) * f + j] = c;
                    } else {
                        debug_assert_eq!(c % p, 0);
                        next.c[(e - 1) * f + j] = c / p;
                    }
                }
            }
            cur = self.normalize(next);
        }
        Ok(self.reduce(&cur, self.prec().saturating_sub(k)))
    }

    /// Canonical representative modulo `pi^m`.
    pub fn reduce(&self, x: &RingElem, m: u32) -> RingElem {
        let inner = &self.0;
        let (e, f, p) = (inner.e, inner.f, inner.p);
        let m = m.min(self.prec()) as usize;
        let mut out = *x;
        for i in 0..e {
            let md = p.pow(m.saturating_sub(i).div_ceil(e) as u32);
            for j in 0..f {
                out.c[i * f + j] %= md;
            }
        }
        out
    }

    /// Inverse of a unit.
    pub fn unit_inv(&self, x: &RingElem) -> Result<RingElem, LocalError> {
        let r = self.residue(x);
        let r_inv = self.0.field.inv(r).map_err(|_| LocalError::NotAUnit)?;
        let two = self.from_int(2);
        let mut y = self.teich(r_inv);
        // Newton: y <- y (2 - x y)
        loop {
            let next = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
            if next == y {
                return Ok(y);
            }
            y = next;
        }
    }

    /// Teichmueller digits `x = sum [d_i] pi^i`, all `N` of them.
    pub fn digits_of(&self, x: &RingElem) -> Vec<FqElem> {
        let n = self.prec();
        let mut out = Vec::with_capacity(n as usize);
        let mut cur = *x;
        for i in 0..n {
            let d = self.residue(&cur);
            out.push(d);
            if i + 1 < n {
                let rest = self.sub(&cur, &self.teich(d));
                cur = self.div_pi_pow(&rest, 1).expect("residue removed");
            }
        }
        out
    }

    /// `sum [d_i] pi^i` for the given digits (extra digits beyond N ignored).
    pub fn from_digit_slice(&self, digits: &[FqElem]) -> RingElem {
        let n = (self.prec() as usize).min(digits.len());
        let mut acc = self.zero();
        for i in (0..n).rev() {
            acc = self.mul_pi_pow(&acc, 1);
            acc = self.add(&acc, &self.teich(digits[i]));
        }
        acc
    }

    /// Digit 1 of `[x] + [y]`.
    pub fn carry_z(&self, x: FqElem, y: FqElem) -> FqElem {
        let s = self.add(&self.teich(x), &self.teich(y));
        let d = self.digits_of(&s);
        d.get(1).copied().unwrap_or(FqElem::ZERO)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, e: u32, f: u32, prec: u32) -> LocalRing {
        LocalRing::new(LocalParams::new(p, e, f, prec).unwrap()).unwrap()
    }

    #[test]
    fn uniformizer_power_is_p() {
        let r = ring(3, 2, 1, 6);
        let pi = r.uniformizer();
        assert_eq!(r.mul(&pi, &pi), r.from_int(3));
        assert_eq!(r.val(&pi), Some(1));
        assert_eq!(r.val(&r.from_int(9)), Some(4));
    }

    #[test]
    fn one_plus_one_in_ramified_three() {
        let r = ring(3, 2, 1, 6);
        let k = r.field().clone();
        let two = r.add(&r.one(), &r.one());
        let d = r.digits_of(&two);
        assert_eq!(d, vec![k.from_int(2), k.zero(), k.one(), k.zero(), k.zero(), k.zero()]);
    }

    #[test]
    fn teich_of_two_mod_three_is_minus_one() {
        let r = ring(3, 1, 1, 6);
        assert_eq!(r.teich(r.field().from_int(2)), r.from_int(-1));
    }

    #[test]
    fn unit_inverse() {
        let r = ring(2, 1, 2, 8);
        let x = r.add(&r.teich(r.field().generator()), &r.uniformizer());
        let y = r.unit_inv(&x).unwrap();
        assert_eq!(r.mul(&x, &y), r.one());
        assert!(matches!(r.unit_inv(&r.uniformizer()), Err(LocalError::NotAUnit)));
    }

    #[test]
    fn div_pi_checks() {
        let r = ring(5, 2, 1, 6);
        let pi = r.uniformizer();
        assert_eq!(r.div_pi_pow(&r.mul(&pi, &pi), 2).unwrap(), r.one());
        assert!(r.div_pi_pow(&pi, 2).is_err());
    }
}
