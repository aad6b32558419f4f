use gf_core::{FqElem, HChar};
use tree_cosets::Mat2;

use crate::{FormalSum, Induced, InducedError, SpaceTag};

/// The two standard families of `ind_{IZ}` vectors indexed by `I_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `s_n^k = sum mu_{n-1}^k [g0_{n,mu}, 1]`
    S,
    /// `t_n^k = sum mu_{n-1}^k [g0_{n-1,[mu]_{n-1}} u([mu_{n-1}]) w, 1]`
    T,
}

impl Induced {
    /// `g0_{n,mu}` for the digit string `mu`.
    pub fn g0(&self, mu: &[FqElem]) -> Mat2 {
        let t = self.tree();
        let r = t.ring();
        t.mat(r.f_pi_pow(mu.len() as i32), t.digits(mu), r.f_zero(), r.f_one())
    }

    /// The matrix a family attaches to `mu in I_n`.
    pub fn family_matrix(&self, kind: FamilyKind, mu: &[FqElem]) -> Mat2 {
        let t = self.tree();
        match kind {
            FamilyKind::S => self.g0(mu),
            FamilyKind::T => {
                let (head, last) = mu.split_at(mu.len() - 1);
                t.product([&self.g0(head), &t.u(t.teich(last[0])), &t.w()])
            }
        }
    }

    /// `sum_{mu in I_n} c(mu) [m(mu), 1]` with `m` the family matrix.
    pub fn family_sum(
        &self,
        kind: FamilyKind,
        n: u32,
        mut coeff: impl FnMut(&[FqElem]) -> FqElem,
    ) -> Result<FormalSum, InducedError> {
        if n == 0 {
            return Err(InducedError::BadFamily("n must be at least 1".into()));
        }
        self.sum_over_digits(self.iz(), n, |mu| Some((self.family_matrix(kind, mu), coeff(mu))))
    }

    /// `s_n^k` or `t_n^k`, with `0^0 = 1`.
    pub fn make_family(&self, kind: FamilyKind, n: u32, k: u32) -> Result<FormalSum, InducedError> {
        let field = self.field();
        if k >= field.q() {
            return Err(InducedError::BadFamily(format!("exponent {k} exceeds q - 1")));
        }
        self.family_sum(kind, n, |mu| field.pow(mu[mu.len() - 1], u64::from(k)))
    }

    /// The `G`-map `ind_{IZ} 1 -> ind_{KZ} 1` sending `[g, 1]` to `[g, 1]`.
    pub fn transfer_iz_to_kz(&self, v: &FormalSum) -> Result<FormalSum, InducedError> {
        if !v.tag().is_iz_trivial() {
            return Err(InducedError::WrongSpace { op: "transfer_iz_to_kz", expected: "ind_IZ(1)", got: v.tag() });
        }
        let ball = self.ball();
        let terms = v.terms().map(|(key, c)| {
            let source = ball.edge(key).source();
            (ball.vertex_pos(&source).expect("edge endpoints lie in the ball"), c)
        });
        Ok(FormalSum::from_terms(self.field(), SpaceTag::IndKZ, terms.collect::<Vec<_>>()))
    }

    /// The `G`-map `ind_{I(1)Z} eta^r -> ind_{IZ} chi` sending `[g, 1]` to
    /// `[g, 1]`; it kills the image of every other idempotent.
    pub fn transfer_to_iz(&self, chi: HChar, v: &FormalSum) -> Result<FormalSum, InducedError> {
        let SpaceTag::IndI1Z(r) = v.tag() else {
            return Err(InducedError::WrongSpace { op: "transfer_to_iz", expected: "ind_I1Z(eta^r)", got: v.tag() });
        };
        self.check_central(chi, r)?;
        let field = self.field();
        let units = self.ball().units();
        let mut out = FormalSum::zero(SpaceTag::IndIZ(chi));
        for (key, c) in v.terms() {
            let fiber = units[key % units.len()];
            let factor = chi.eval(field, FqElem::ONE, fiber)?;
            out.add_term(field, key / units.len(), field.mul(factor, c));
        }
        Ok(out)
    }

    fn check_central(&self, chi: HChar, r: u32) -> Result<(), InducedError> {
        let order = self.field().q() - 1;
        if (chi.r() + chi.s()) % order == r % order {
            Ok(())
        } else {
            Err(InducedError::CharacterMismatch { chi, r })
        }
    }

    /// The `IZ`-equivariant embedding of the `chi = a^{r-s} d^s` component:
    /// `[g, 1] -> -sum_{l != 0} l^{-s} [g diag(1, [l]), 1]`.
    pub fn embed_char_component(&self, r: u32, v: &FormalSum) -> Result<FormalSum, InducedError> {
        let SpaceTag::IndIZ(chi) = v.tag() else {
            return Err(InducedError::WrongSpace { op: "embed_char_component", expected: "ind_IZ(chi)", got: v.tag() });
        };
        self.check_central(chi, r)?;
        let field = self.field();
        let ball = self.ball();
        let mut out = FormalSum::zero(SpaceTag::IndI1Z(r));
        for (key, c) in v.terms() {
            for &l in ball.units() {
                let coeff = field.neg(field.pow_signed(l, -i64::from(chi.s()))?);
                out.add_term(field, ball.prop_index(key, l), field.mul(coeff, c));
            }
        }
        Ok(out)
    }
}
