use std::collections::BTreeMap;

use gf_core::{FqElem, FqField};
use induced_modules::{FormalSum, SpaceTag};

use crate::OracleError;

/// Sparse coordinate vector; zero entries are never stored.
pub type SparseVec = BTreeMap<usize, FqElem>;

/// `dst += c * src`.
pub fn axpy(k: &FqField, dst: &mut SparseVec, c: FqElem, src: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (&key, &x) in src {
        let slot = dst.entry(key).or_insert(FqElem::ZERO);
        *slot = k.add(*slot, k.mul(c, x));
        if slot.is_zero() {
            dst.remove(&key);
        }
    }
}

fn scaled(k: &FqField, v: &SparseVec, c: FqElem) -> SparseVec {
    v.iter().map(|(&key, &x)| (key, k.mul(c, x))).filter(|(_, x)| !x.is_zero()).collect()
}

pub fn sparse_of(v: &FormalSum) -> SparseVec {
    v.terms().collect()
}

pub fn formal_of(k: &FqField, tag: SpaceTag, v: &SparseVec) -> FormalSum {
    FormalSum::from_terms(k, tag, v.iter().map(|(&key, &c)| (key, c)))
}

/// Outcome of adding a vector to a [`Subspace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Added,
    /// The vector was already in the span. For a tracked subspace this is
    /// the linear relation it completes among the recorded generators.
    Dependent(SparseVec),
}

/// A subspace of `F_q^ambient` in reduced row-echelon form. The pivot of a
/// row is its largest coordinate, so that for ball coordinates (ordered by
/// radius) the rows with small pivots span the intersection with a ball.
///
/// A tracked subspace also records each row as a combination of the
/// generators it was built from.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: FqField,
    ambient: usize,
    rows: Vec<SparseVec>,
    combos: Option<Vec<SparseVec>>,
    pivots: BTreeMap<usize, usize>,
}

impl Subspace {
    pub fn new(field: &FqField, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, rows: Vec::new(), combos: None, pivots: BTreeMap::new() }
    }

    pub fn tracked(field: &FqField, ambient: usize) -> Self {
        Subspace { combos: Some(Vec::new()), ..Self::new(field, ambient) }
    }

    pub fn span<'a>(
        field: &FqField,
        ambient: usize,
        vectors: impl IntoIterator<Item = &'a SparseVec>,
    ) -> Result<Self, OracleError> {
        let mut out = Self::new(field, ambient);
        for v in vectors {
            out.insert(v)?;
        }
        Ok(out)
    }

    /// Span of `vectors`, with generator `i` recorded as the `i`-th vector.
    pub fn tracked_span<'a>(
        field: &FqField,
        ambient: usize,
        vectors: impl IntoIterator<Item = &'a SparseVec>,
    ) -> Result<Self, OracleError> {
        let mut out = Self::tracked(field, ambient);
        for (i, v) in vectors.into_iter().enumerate() {
            out.insert_with(v, SparseVec::from([(i, FqElem::ONE)]))?;
        }
        Ok(out)
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_tracked(&self) -> bool {
        self.combos.is_some()
    }

    /// Echelon rows in insertion order.
    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Pivot coordinates in increasing order.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// `dim(self ∩ span{e_i : i < prefix})`.
    pub fn rank_below(&self, prefix: usize) -> usize {
        self.pivots.range(..prefix).count()
    }

    /// Basis of `self ∩ span{e_i : i < prefix}`.
    pub fn basis_below(&self, prefix: usize) -> impl Iterator<Item = &SparseVec> + '_ {
        self.pivots.range(..prefix).map(|(_, &row)| &self.rows[row])
    }

    fn check(&self, v: &SparseVec) -> Result<(), OracleError> {
        match v.keys().next_back() {
            Some(&key) if key >= self.ambient => Err(OracleError::DimensionMismatch { expected: self.ambient, got: key + 1 }),
            _ => Ok(()),
        }
    }

    /// Splits `v = residual + sum_p v_p row_p` over the pivots `p` in its
    /// support. The residual vanishes iff `v` is in the span; the second
    /// component expresses `v - residual` in the generators (empty when
    /// untracked).
    pub fn reduce(&self, v: &SparseVec) -> Result<(SparseVec, SparseVec), OracleError> {
        self.check(v)?;
        let k = &self.field;
        let mut residual = v.clone();
        let mut combo = SparseVec::new();
        for (key, &c) in v {
            if let Some(&row) = self.pivots.get(key) {
                axpy(k, &mut residual, k.neg(c), &self.rows[row]);
                if let Some(combos) = &self.combos {
                    axpy(k, &mut combo, c, &combos[row]);
                }
            }
        }
        Ok((residual, combo))
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, OracleError> {
        Ok(self.reduce(v)?.0.is_empty())
    }

    pub fn insert(&mut self, v: &SparseVec) -> Result<Insertion, OracleError> {
        self.insert_with(v, SparseVec::new())
    }

    /// Adds `v`, recorded as the generator combination `combo`.
    pub fn insert_with(&mut self, v: &SparseVec, combo: SparseVec) -> Result<Insertion, OracleError> {
        let k = self.field.clone();
        let (mut residual, used) = self.reduce(v)?;
        let mut combo = combo;
        if self.combos.is_some() {
            axpy(&k, &mut combo, k.neg(FqElem::ONE), &used);
        }
        let Some((&pivot, &lead)) = residual.iter().next_back() else {
            return Ok(Insertion::Dependent(if self.combos.is_some() { combo } else { SparseVec::new() }));
        };
        let scale = k.inv(lead)?;
        residual = scaled(&k, &residual, scale);
        combo = scaled(&k, &combo, scale);
        for i in 0..self.rows.len() {
            let c = self.rows[i].get(&pivot).copied().unwrap_or(FqElem::ZERO);
            if c.is_zero() {
                continue;
            }
            axpy(&k, &mut self.rows[i], k.neg(c), &residual);
            if let Some(combos) = &mut self.combos {
                axpy(&k, &mut combos[i], k.neg(c), &combo);
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(residual);
        if let Some(combos) = &mut self.combos {
            combos.push(combo);
        }
        Ok(Insertion::Added)
    }

    fn same_ambient(&self, other: &Subspace) -> Result<(), OracleError> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(OracleError::DimensionMismatch { expected: self.ambient, got: other.ambient })
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, OracleError> {
        self.same_ambient(other)?;
        let mut out = Subspace::new(&self.field, self.ambient);
        for v in self.rows.iter().chain(&other.rows) {
            out.insert(v)?;
        }
        Ok(out)
    }

    /// Every relation `sum a_i x_i + sum b_j y_j = 0` between the two bases
    /// gives the common vector `sum b_j y_j`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, OracleError> {
        self.same_ambient(other)?;
        let k = &self.field;
        let mut joint = Subspace::tracked(k, self.ambient);
        for (i, v) in self.rows.iter().enumerate() {
            joint.insert_with(v, SparseVec::from([(i, FqElem::ONE)]))?;
        }
        let offset = self.rows.len();
        let mut out = Subspace::new(k, self.ambient);
        for (j, v) in other.rows.iter().enumerate() {
            if let Insertion::Dependent(relation) = joint.insert_with(v, SparseVec::from([(offset + j, FqElem::ONE)]))? {
                let mut common = SparseVec::new();
                for (&idx, &c) in relation.range(offset..) {
                    axpy(k, &mut common, c, &other.rows[idx - offset]);
                }
                out.insert(&common)?;
            }
        }
        Ok(out)
    }

    /// Reduces the rows of `vectors` modulo `self`, keeping those that
    /// enlarge the span, as residuals.
    pub fn complement_residuals<'a>(
        &self,
        vectors: impl IntoIterator<Item = &'a SparseVec>,
    ) -> Result<Vec<SparseVec>, OracleError> {
        let mut grown = Subspace { combos: None, ..self.clone() };
        let mut out = Vec::new();
        for v in vectors {
            let (residual, _) = grown.reduce(v)?;
            if grown.insert(&residual)? == Insertion::Added {
                out.push(residual);
            }
        }
        Ok(out)
    }
}
