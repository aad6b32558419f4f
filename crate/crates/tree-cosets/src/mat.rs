use gf_core::FqElem;
use local_ring::{FElem, LocalError, LocalRing};

use crate::TreeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: FElem,
    pub b: FElem,
    pub c: FElem,
    pub d: FElem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subgroup {
    K,
    I,
    I1,
    Z,
    KZ,
    IZ,
    I1Z,
}

/// Arithmetic context for matrices over `F` at the ring's working precision.
#[derive(Clone, Debug)]
pub struct Tree {
    ring: LocalRing,
    checked: bool,
}

impl Tree {
    pub fn new(ring: LocalRing) -> Self {
        Tree { ring, checked: false }
    }

    /// In checked mode every reduction also re-multiplies its witness.
    pub fn checked(mut self, on: bool) -> Self {
        self.checked = on;
        self
    }

    pub fn is_checked(&self) -> bool {
        self.checked
    }

    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }

    pub fn q(&self) -> u32 {
        self.ring.q()
    }

    pub fn mat(&self, a: FElem, b: FElem, c: FElem, d: FElem) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity(&self) -> Mat2 {
        let r = &self.ring;
        self.mat(r.f_one(), r.f_zero(), r.f_zero(), r.f_one())
    }

    pub fn diag(&self, x: FElem, y: FElem) -> Mat2 {
        let z = self.ring.f_zero();
        self.mat(x, z, z, y)
    }

    pub fn scalar(&self, x: FElem) -> Mat2 {
        self.diag(x, x)
    }

    /// `(1 x; 0 1)`
    pub fn u(&self, x: FElem) -> Mat2 {
        let r = &self.ring;
        self.mat(r.f_one(), x, r.f_zero(), r.f_one())
    }

    /// `(1 0; x 1)`
    pub fn l(&self, x: FElem) -> Mat2 {
        let r = &self.ring;
        self.mat(r.f_one(), r.f_zero(), x, r.f_one())
    }

    pub fn alpha(&self) -> Mat2 {
        self.diag(self.ring.f_one(), self.ring.f_pi_pow(1))
    }

    pub fn beta(&self) -> Mat2 {
        let r = &self.ring;
        self.mat(r.f_zero(), r.f_one(), r.f_pi_pow(1), r.f_zero())
    }

    pub fn w(&self) -> Mat2 {
        let r = &self.ring;
        self.mat(r.f_zero(), r.f_one(), r.f_one(), r.f_zero())
    }

    pub fn n_s(&self) -> Mat2 {
        let r = &self.ring;
        self.mat(r.f_zero(), r.f_from_int(-1), r.f_one(), r.f_zero())
    }

    /// `[x]` as a field element.
    pub fn teich(&self, x: FqElem) -> FElem {
        self.ring.f_teich(x)
    }

    /// `sum_i [d_i] pi^i`, an element of `I_n` for `n = digits.len()`.
    pub fn digits(&self, digits: &[FqElem]) -> FElem {
        self.ring.f_from_digits(digits, 0)
    }

    pub fn mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let r = &self.ring;
        let dot = |p: &FElem, q: &FElem, s: &FElem, t: &FElem| r.f_add(&r.f_mul(p, q), &r.f_mul(s, t));
        Mat2 {
            a: dot(&x.a, &y.a, &x.b, &y.c),
            b: dot(&x.a, &y.b, &x.b, &y.d),
            c: dot(&x.c, &y.a, &x.d, &y.c),
            d: dot(&x.c, &y.b, &x.d, &y.d),
        }
    }

    /// Left-to-right product of a word.
    pub fn product<'a>(&self, word: impl IntoIterator<Item = &'a Mat2>) -> Mat2 {
        word.into_iter().fold(self.identity(), |acc, g| self.mul(&acc, g))
    }

    pub fn det(&self, x: &Mat2) -> FElem {
        let r = &self.ring;
        r.f_sub(&r.f_mul(&x.a, &x.d), &r.f_mul(&x.b, &x.c))
    }

    pub fn inv(&self, x: &Mat2) -> Result<Mat2, TreeError> {
        let r = &self.ring;
        let det = self.det(x);
        let dinv = match r.f_inv(&det) {
            Ok(v) => v,
            Err(LocalError::DivisionByZero) => return Err(TreeError::Singular),
            Err(e) => return Err(e.into()),
        };
        Ok(Mat2 {
            a: r.f_mul(&x.d, &dinv),
            b: r.f_neg(&r.f_mul(&x.b, &dinv)),
            c: r.f_neg(&r.f_mul(&x.c, &dinv)),
            d: r.f_mul(&x.a, &dinv),
        })
    }

    pub fn scale(&self, x: &Mat2, s: &FElem) -> Mat2 {
        let r = &self.ring;
        Mat2 { a: r.f_mul(&x.a, s), b: r.f_mul(&x.b, s), c: r.f_mul(&x.c, s), d: r.f_mul(&x.d, s) }
    }

    /// Entrywise equality at the known precision.
    pub fn eq(&self, x: &Mat2, y: &Mat2) -> bool {
        let r = &self.ring;
        r.f_eq(&x.a, &y.a) && r.f_eq(&x.b, &y.b) && r.f_eq(&x.c, &y.c) && r.f_eq(&x.d, &y.d)
    }

    fn integral(&self, x: &FElem) -> Result<bool, LocalError> {
        match x.val() {
            Some(v) => Ok(v >= 0),
            None if x.abs_prec() >= 0 => Ok(true),
            None => Err(LocalError::PrecisionExhausted { needed: 0, available: i64::from(x.abs_prec()) }),
        }
    }

    fn in_k(&self, x: &Mat2) -> Result<bool, LocalError> {
        for e in [&x.a, &x.b, &x.c, &x.d] {
            if !self.integral(e)? {
                return Ok(false);
            }
        }
        let det = self.det(x);
        match det.val() {
            Some(v) => Ok(v == 0),
            None => Err(LocalError::PrecisionExhausted { needed: 1, available: i64::from(det.abs_prec()) }),
        }
    }

    fn residue(&self, x: &FElem) -> Result<FqElem, LocalError> {
        self.ring.f_reduce_mod_p(x)
    }

    /// `pi^{-k} x` with `2k = val(det x)`, or `None` when the valuation is odd.
    pub fn central_normalize(&self, x: &Mat2) -> Result<Option<(i32, Mat2)>, TreeError> {
        let det = self.det(x);
        let v = det.val().ok_or(TreeError::Singular)?;
        if v % 2 != 0 {
            return Ok(None);
        }
        let k = v / 2;
        let s = self.ring.f_pi_pow(-k);
        Ok(Some((k, self.scale(x, &s))))
    }

    pub fn is_in(&self, x: &Mat2, group: Subgroup) -> Result<bool, TreeError> {
        Ok(match group {
            Subgroup::K => self.in_k(x)?,
            Subgroup::I => self.in_k(x)? && self.residue(&x.c)?.is_zero(),
            Subgroup::I1 => {
                let one = FqElem::ONE;
                self.is_in(x, Subgroup::I)? && self.residue(&x.a)? == one && self.residue(&x.d)? == one
            }
            Subgroup::Z => {
                let r = &self.ring;
                x.b.is_zero() && x.c.is_zero() && !x.a.is_zero() && r.f_eq(&x.a, &x.d)
            }
            Subgroup::KZ | Subgroup::IZ | Subgroup::I1Z => {
                let Some((_, y)) = self.central_normalize(x)? else { return Ok(false) };
                match group {
                    Subgroup::KZ => self.in_k(&y)?,
                    Subgroup::IZ => self.is_in(&y, Subgroup::I)?,
                    _ => self.is_in(&y, Subgroup::I)? && self.residue(&y.a)? == self.residue(&y.d)?,
                }
            }
        })
    }

    /// Generators of `I(1)` modulo its depth-`depth` congruence subgroup:
    /// `u([b] pi^j)`, `l([c] pi^{j+1})`, `diag(1 + [a] pi^{j+1}, 1)`,
    /// `diag(1, 1 + [a] pi^{j+1})` for `0 <= j < depth` and `a, b, c` in the
    /// standard F_p-basis of F_q.
    pub fn i1_generators(&self, depth: u32) -> Vec<Mat2> {
        let r = &self.ring;
        let basis = r.field().fp_basis();
        let mut out = Vec::with_capacity(4 * depth as usize * basis.len());
        for j in 0..depth as i32 {
            for &x in &basis {
                let t = r.f_shift(&self.teich(x), j);
                let t1 = r.f_shift(&self.teich(x), j + 1);
                let one_plus = r.f_add(&r.f_one(), &t1);
                out.push(self.u(t));
                out.push(self.l(t1));
                out.push(self.diag(one_plus, r.f_one()));
                out.push(self.diag(r.f_one(), one_plus));
            }
        }
        out
    }
}
