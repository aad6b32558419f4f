use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use gf_core::{FqElem, FqField, HChar};
use tree_cosets::{BallIndex, Mat2, Tree, TreeError};

use crate::InducedError;

/// The induced representation a [`FormalSum`] lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceTag {
    /// `ind_{IZ}^G chi`; `chi` is trivial on `pi`.
    IndIZ(HChar),
    /// `ind_{I(1)Z}^G eta^r`.
    IndI1Z(u32),
    /// `ind_{KZ}^G` of the trivial weight.
    IndKZ,
}

impl SpaceTag {
    pub fn iz_trivial(k: &FqField) -> Self {
        SpaceTag::IndIZ(HChar::trivial(k))
    }

    pub fn is_iz_trivial(&self) -> bool {
        matches!(self, SpaceTag::IndIZ(chi) if chi.is_trivial())
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::IndIZ(chi) => write!(f, "ind_IZ({chi})"),
            SpaceTag::IndI1Z(r) => write!(f, "ind_I1Z(eta^{r})"),
            SpaceTag::IndKZ => write!(f, "ind_KZ(1)"),
        }
    }
}

/// A sparse `F_q`-combination of cosets. Keys are coordinates of a
/// [`BallIndex`]: edge positions for `IndIZ`, `prop_index` values for
/// `IndI1Z`, vertex positions for `IndKZ`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalSum {
    tag: SpaceTag,
    terms: BTreeMap<usize, FqElem>,
}

impl FormalSum {
    pub fn zero(tag: SpaceTag) -> Self {
        FormalSum { tag, terms: BTreeMap::new() }
    }

    pub fn delta(tag: SpaceTag, key: usize) -> Self {
        let mut v = Self::zero(tag);
        v.terms.insert(key, FqElem::ONE);
        v
    }

    pub fn from_terms(k: &FqField, tag: SpaceTag, terms: impl IntoIterator<Item = (usize, FqElem)>) -> Self {
        let mut v = Self::zero(tag);
        for (key, c) in terms {
            v.add_term(k, key, c);
        }
        v
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, FqElem)> + '_ {
        self.terms.iter().map(|(&key, &c)| (key, c))
    }

    pub fn coeff(&self, key: usize) -> FqElem {
        self.terms.get(&key).copied().unwrap_or(FqElem::ZERO)
    }

    /// Number of nonzero terms; `is_zero` is the emptiness test.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_key(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, k: &FqField, key: usize, c: FqElem) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert(FqElem::ZERO);
        *slot = k.add(*slot, c);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn same_space(&self, other: &FormalSum) -> Result<(), InducedError> {
        if self.tag == other.tag {
            Ok(())
        } else {
            Err(InducedError::SpaceMismatch(self.tag, other.tag))
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, k: &FqField, c: FqElem, other: &FormalSum) -> Result<FormalSum, InducedError> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (key, x) in other.terms() {
            out.add_term(k, key, k.mul(c, x));
        }
        Ok(out)
    }

    pub fn add(&self, k: &FqField, other: &FormalSum) -> Result<FormalSum, InducedError> {
        self.axpy(k, FqElem::ONE, other)
    }

    pub fn sub(&self, k: &FqField, other: &FormalSum) -> Result<FormalSum, InducedError> {
        self.axpy(k, k.neg(FqElem::ONE), other)
    }

    pub fn scale(&self, k: &FqField, c: FqElem) -> FormalSum {
        if c.is_zero() {
            return FormalSum::zero(self.tag);
        }
        FormalSum { tag: self.tag, terms: self.terms.iter().map(|(&key, &x)| (key, k.mul(c, x))).collect() }
    }

    pub fn neg(&self, k: &FqField) -> FormalSum {
        self.scale(k, k.neg(FqElem::ONE))
    }

    /// Same coefficients, reinterpreted in another space with the same keys.
    pub fn retag(&self, tag: SpaceTag) -> FormalSum {
        FormalSum { tag, terms: self.terms.clone() }
    }
}

/// The three induced spaces over one ball, with the coset reductions that
/// turn matrices into coordinates.
#[derive(Clone, Debug)]
pub struct Induced {
    ball: Arc<BallIndex>,
    field: FqField,
    vertex_reps: Vec<Mat2>,
}

impl Induced {
    pub fn new(ball: Arc<BallIndex>) -> Self {
        let tree = ball.tree();
        let field = tree.ring().field().clone();
        let vertex_reps = ball.vertices().iter().map(|v| tree.vertex_rep(v)).collect();
        Induced { ball, field, vertex_reps }
    }

    pub fn ball(&self) -> &BallIndex {
        &self.ball
    }

    pub fn ball_arc(&self) -> &Arc<BallIndex> {
        &self.ball
    }

    pub fn tree(&self) -> &Tree {
        self.ball.tree()
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn iz(&self) -> SpaceTag {
        SpaceTag::iz_trivial(&self.field)
    }

    /// Number of coordinates of the space within the ball.
    pub fn dim(&self, tag: SpaceTag) -> usize {
        match tag {
            SpaceTag::IndIZ(_) => self.ball.len(),
            SpaceTag::IndI1Z(_) => self.ball.prop_len(),
            SpaceTag::IndKZ => self.ball.vertices().len(),
        }
    }

    /// Coordinates lying within radius `r`; they form a prefix of the keys.
    pub fn dim_within(&self, tag: SpaceTag, r: u32) -> usize {
        match tag {
            SpaceTag::IndIZ(_) => self.ball.count_within(r),
            SpaceTag::IndI1Z(_) => self.ball.count_within(r) * self.ball.units().len(),
            SpaceTag::IndKZ => self.ball.vertices().partition_point(|v| v.distance() <= r),
        }
    }

    pub fn rep(&self, tag: SpaceTag, key: usize) -> Result<Mat2, InducedError> {
        let rep = match tag {
            SpaceTag::IndIZ(_) => (key < self.ball.len()).then(|| *self.ball.rep(key)),
            SpaceTag::IndI1Z(_) => (key < self.ball.prop_len()).then(|| self.tree().prop_rep(&self.ball.prop_label(key))),
            SpaceTag::IndKZ => self.vertex_reps.get(key).copied(),
        };
        rep.ok_or(InducedError::BadKey(key))
    }

    /// Tree radius of a coordinate: edge radius, or vertex distance.
    pub fn key_radius(&self, tag: SpaceTag, key: usize) -> u32 {
        match tag {
            SpaceTag::IndIZ(_) => self.ball.edge(key).radius(),
            SpaceTag::IndI1Z(_) => self.ball.edge(key / self.ball.units().len()).radius(),
            SpaceTag::IndKZ => self.ball.vertices()[key].distance(),
        }
    }

    pub fn key_label(&self, tag: SpaceTag, key: usize) -> String {
        match tag {
            SpaceTag::IndIZ(_) => self.ball.edge(key).to_string(),
            SpaceTag::IndI1Z(_) => self.ball.prop_label(key).to_string(),
            SpaceTag::IndKZ => self.ball.vertices()[key].to_string(),
        }
    }

    /// `[g, 1] = c [rep, 1]`: the coordinate of `g` and the character factor `c`
    /// picked up by moving the witness across the comma.
    pub fn locate(&self, tag: SpaceTag, g: &Mat2) -> Result<(usize, FqElem), InducedError> {
        let k = &self.field;
        match tag {
            SpaceTag::IndIZ(chi) => {
                let (pos, w) = self.ball.reduce_edge(g)?;
                let (a, d) = w.diag.expect("IZ witnesses carry their diagonal");
                Ok((pos, chi.eval(k, a, d)?))
            }
            SpaceTag::IndI1Z(r) => {
                let red = self.ball.reduce_prop(g)?;
                Ok((self.ball.prop_index(red.edge, red.fiber), k.pow(red.nu, u64::from(r))))
            }
            SpaceTag::IndKZ => {
                let (label, _) = self.tree().reduce_vertex(g)?;
                let pos = self
                    .ball
                    .vertex_pos(&label)
                    .ok_or_else(|| TreeError::OutOfBall(label.to_string(), self.ball.radius()))?;
                Ok((pos, FqElem::ONE))
            }
        }
    }

    /// `[g, 1]` as a vector.
    pub fn delta_at(&self, tag: SpaceTag, g: &Mat2) -> Result<FormalSum, InducedError> {
        let (key, c) = self.locate(tag, g)?;
        Ok(FormalSum::from_terms(&self.field, tag, [(key, c)]))
    }

    /// `g . v`.
    pub fn act_left(&self, g: &Mat2, v: &FormalSum) -> Result<FormalSum, InducedError> {
        let tag = v.tag();
        let mut out = FormalSum::zero(tag);
        for (key, c) in v.terms() {
            let h = self.tree().mul(g, &self.rep(tag, key)?);
            let (to, factor) = self.locate(tag, &h)?;
            out.add_term(&self.field, to, self.field.mul(factor, c));
        }
        Ok(out)
    }

    /// Largest tree radius among the support; 0 for the zero vector.
    pub fn support_radius(&self, v: &FormalSum) -> u32 {
        v.terms().map(|(key, _)| self.key_radius(v.tag(), key)).max().unwrap_or(0)
    }

    /// Ordered `label -> coefficient` lines, the coefficient given by its code.
    pub fn dump(&self, v: &FormalSum) -> String {
        let mut s = String::new();
        for (key, c) in v.terms() {
            s.push_str(&format!("{} -> {}\n", self.key_label(v.tag(), key), c.code()));
        }
        s
    }

    /// `sum_{mu in I_n} f(mu)` where `f` returns a matrix `g` and a coefficient
    /// `c`, contributing `c [g, 1]`.
    pub fn sum_over_digits(
        &self,
        tag: SpaceTag,
        n: u32,
        mut f: impl FnMut(&[FqElem]) -> Option<(Mat2, FqElem)>,
    ) -> Result<FormalSum, InducedError> {
        let k = &self.field;
        let q = k.q() as usize;
        let mut out = FormalSum::zero(tag);
        let total = q.pow(n);
        for idx in 0..total {
            let mu = gf_core::point_of_index(k, n as usize, idx);
            if let Some((g, c)) = f(&mu) {
                if c.is_zero() {
                    continue;
                }
                let (key, factor) = self.locate(tag, &g)?;
                out.add_term(k, key, k.mul(factor, c));
            }
        }
        Ok(out)
    }
}
