use gf_core::{FqElem, HChar};
use tree_cosets::Mat2;

use crate::{FormalSum, Induced, InducedError, SpaceTag};

/// Generators of the Iwahori-Hecke algebra acting on `ind_{IZ}^G 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IwahoriOp {
    T10,
    T12,
    Tm10,
}

/// Generators of the pro-p-Iwahori-Hecke algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropOp {
    Tbeta,
    Tns,
    /// `T_h` for `h = diag([x], [y])`.
    Th(FqElem, FqElem),
    E(HChar),
}

impl Induced {
    fn teich_entry(&self, x: FqElem) -> local_ring::FElem {
        self.tree().teich(x)
    }

    /// `(1 0; pi [l] pi)` for every `l` in `F_q`.
    fn t12_kernel(&self) -> Vec<Mat2> {
        let t = self.tree();
        let r = t.ring();
        self.field()
            .elements()
            .map(|l| t.mat(r.f_one(), r.f_zero(), r.f_shift(&self.teich_entry(l), 1), r.f_pi_pow(1)))
            .collect()
    }

    /// `(pi [l]; 0 1)` for every `l` in `F_q`.
    fn child_kernel(&self) -> Vec<Mat2> {
        let t = self.tree();
        let r = t.ring();
        self.field().elements().map(|l| t.mat(r.f_pi_pow(1), self.teich_entry(l), r.f_zero(), r.f_one())).collect()
    }

    /// `u([l]) (0 1; -1 0)` for every `l` in `F_q`.
    fn ns_kernel(&self) -> Vec<Mat2> {
        let t = self.tree();
        let r = t.ring();
        let ns_inv = t.mat(r.f_zero(), r.f_one(), r.f_from_int(-1), r.f_zero());
        self.field().elements().map(|l| t.mul(&t.u(self.teich_entry(l)), &ns_inv)).collect()
    }

    fn diag_inv(&self, x: FqElem, y: FqElem) -> Result<Mat2, InducedError> {
        let k = self.field();
        Ok(self.tree().diag(self.teich_entry(k.inv(x)?), self.teich_entry(k.inv(y)?)))
    }

    /// `sum_h chi(h) h^{-1}` over `h = diag([x], [y])` in `H`.
    fn idempotent_kernel(&self, chi: HChar) -> Result<Vec<(Mat2, FqElem)>, InducedError> {
        let k = self.field();
        let mut out = Vec::new();
        for x in k.units() {
            for y in k.units() {
                out.push((self.diag_inv(x, y)?, chi.eval(k, x, y)?));
            }
        }
        Ok(out)
    }

    /// `sum_j c_j [g m_j, 1]` for every term `[g, 1]` of `v`.
    pub fn right_convolve(&self, v: &FormalSum, kernel: &[(Mat2, FqElem)]) -> Result<FormalSum, InducedError> {
        let k = self.field();
        let tag = v.tag();
        let mut out = FormalSum::zero(tag);
        for (key, c) in v.terms() {
            let g = self.rep(tag, key)?;
            for (m, coeff) in kernel {
                let (to, factor) = self.locate(tag, &self.tree().mul(&g, m))?;
                out.add_term(k, to, k.mul(k.mul(factor, *coeff), c));
            }
        }
        Ok(out)
    }

    /// `sum_j c_j m_j . v`.
    pub fn left_combine(&self, v: &FormalSum, kernel: &[(Mat2, FqElem)]) -> Result<FormalSum, InducedError> {
        let k = self.field();
        let mut out = FormalSum::zero(v.tag());
        for (m, coeff) in kernel {
            out = out.axpy(k, *coeff, &self.act_left(m, v)?)?;
        }
        Ok(out)
    }

    fn ones(mats: Vec<Mat2>) -> Vec<(Mat2, FqElem)> {
        mats.into_iter().map(|m| (m, FqElem::ONE)).collect()
    }

    pub fn iwahori_op(&self, op: IwahoriOp, v: &FormalSum) -> Result<FormalSum, InducedError> {
        if !v.tag().is_iz_trivial() {
            return Err(InducedError::WrongSpace { op: "iwahori_op", expected: "ind_IZ(1)", got: v.tag() });
        }
        let kernel = match op {
            IwahoriOp::T10 => vec![self.tree().beta()],
            IwahoriOp::T12 => self.t12_kernel(),
            IwahoriOp::Tm10 => self.child_kernel(),
        };
        self.right_convolve(v, &Self::ones(kernel))
    }

    /// The spherical operator: the sum over the `q + 1` neighbours.
    pub fn spherical_t(&self, v: &FormalSum) -> Result<FormalSum, InducedError> {
        if v.tag() != SpaceTag::IndKZ {
            return Err(InducedError::WrongSpace { op: "spherical_t", expected: "ind_KZ(1)", got: v.tag() });
        }
        let mut kernel = self.child_kernel();
        kernel.push(self.tree().alpha());
        self.right_convolve(v, &Self::ones(kernel))
    }

    pub fn prop_hecke(&self, op: PropOp, v: &FormalSum) -> Result<FormalSum, InducedError> {
        if !matches!(v.tag(), SpaceTag::IndI1Z(_)) {
            return Err(InducedError::WrongSpace { op: "prop_hecke", expected: "ind_I1Z(eta^r)", got: v.tag() });
        }
        let kernel = match op {
            PropOp::Tbeta => Self::ones(vec![self.tree().beta()]),
            PropOp::Tns => Self::ones(self.ns_kernel()),
            PropOp::Th(x, y) => vec![(self.diag_inv(x, y)?, FqElem::ONE)],
            PropOp::E(chi) => self.idempotent_kernel(chi)?,
        };
        self.right_convolve(v, &kernel)
    }

    /// `e_chi v` for every character `chi`, in `HChar::all` order. The `|H|`
    /// translates of `v` are computed once and shared by all characters.
    pub fn prop_idempotents(&self, v: &FormalSum) -> Result<Vec<(HChar, FormalSum)>, InducedError> {
        if !matches!(v.tag(), SpaceTag::IndI1Z(_)) {
            return Err(InducedError::WrongSpace { op: "prop_idempotents", expected: "ind_I1Z(eta^r)", got: v.tag() });
        }
        self.combine_translates(v, |m, v| self.right_convolve(v, &[(*m, FqElem::ONE)]))
    }

    /// Invariant-side counterpart of [`Induced::prop_idempotents`].
    pub fn invariant_idempotents(&self, v: &FormalSum) -> Result<Vec<(HChar, FormalSum)>, InducedError> {
        if !matches!(v.tag(), SpaceTag::IndIZ(_)) {
            return Err(InducedError::WrongSpace { op: "invariant_idempotents", expected: "ind_IZ(chi)", got: v.tag() });
        }
        self.combine_translates(v, |m, v| self.act_left(m, v))
    }

    fn combine_translates(
        &self,
        v: &FormalSum,
        translate: impl Fn(&Mat2, &FormalSum) -> Result<FormalSum, InducedError>,
    ) -> Result<Vec<(HChar, FormalSum)>, InducedError> {
        let k = self.field();
        let units: Vec<FqElem> = k.units().collect();
        let mut translates = Vec::with_capacity(units.len() * units.len());
        for &x in &units {
            for &y in &units {
                translates.push(((x, y), translate(&self.diag_inv(x, y)?, v)?));
            }
        }
        let mut out = Vec::new();
        for chi in HChar::all(k) {
            let mut acc = FormalSum::zero(v.tag());
            for ((x, y), tv) in &translates {
                acc = acc.axpy(k, chi.eval(k, *x, *y)?, tv)?;
            }
            out.push((chi, acc));
        }
        Ok(out)
    }

    /// The right action of the pro-p-Iwahori-Hecke algebra on `I(1)`-invariant
    /// vectors of `ind_{IZ}`, written through the left `G`-action.
    pub fn invariant_hecke(&self, op: PropOp, v: &FormalSum) -> Result<FormalSum, InducedError> {
        if !matches!(v.tag(), SpaceTag::IndIZ(_)) {
            return Err(InducedError::WrongSpace { op: "invariant_hecke", expected: "ind_IZ(chi)", got: v.tag() });
        }
        let t = self.tree();
        let kernel = match op {
            PropOp::Tbeta => vec![(t.inv(&t.beta())?, FqElem::ONE)],
            PropOp::Tns => {
                let ns_inv = t.inv(&t.n_s())?;
                Self::ones(self.field().elements().map(|l| t.mul(&t.u(self.teich_entry(l)), &ns_inv)).collect())
            }
            PropOp::Th(x, y) => vec![(self.diag_inv(x, y)?, FqElem::ONE)],
            PropOp::E(chi) => self.idempotent_kernel(chi)?,
        };
        self.left_combine(v, &kernel)
    }
}
