use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use gf_core::{FqElem, FqField};
use induced_modules::{FormalSum, Induced, InducedError, IwahoriOp, PropOp, SpaceTag};

use crate::subspace::{formal_of, sparse_of, Insertion, SparseVec, Subspace};
use crate::{Certificate, Completeness, GeneratorFamily, OracleError, Verdict};

/// Generator family of a cutoff-bounded span search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpanFamily {
    /// `T12 e`, `(T10 + Tm10) e` over edge deltas of `ind_IZ 1`.
    IwahoriIdeal,
    /// `T_ns e`, `T_beta (T_ns + 1) e`, `e_chi e` (`chi != 1`) over deltas of
    /// `ind_I(1)Z eta^r`.
    ProPIdeal { r: u32 },
}

impl SpanFamily {
    pub fn generator_family(self) -> GeneratorFamily {
        match self {
            SpanFamily::IwahoriIdeal => GeneratorFamily::IwahoriIdeal,
            SpanFamily::ProPIdeal { r } => GeneratorFamily::ProPIdeal { r },
        }
    }

    /// How far past the cutoff the generators reach.
    fn reach(self) -> u32 {
        match self {
            SpanFamily::IwahoriIdeal => 1,
            SpanFamily::ProPIdeal { .. } => 2,
        }
    }
}

struct SpanTable {
    generators: Vec<FormalSum>,
    span: Subspace,
}

type Cache<K, V> = Mutex<HashMap<K, Arc<V>>>;

fn cached<K: Eq + Hash + Copy, V>(
    cache: &Cache<K, V>,
    key: K,
    build: impl FnOnce() -> Result<V, OracleError>,
) -> Result<Arc<V>, OracleError> {
    if let Some(hit) = cache.lock().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let value = Arc::new(build()?);
    Ok(cache.lock().expect("cache lock").entry(key).or_insert(value).clone())
}

/// Membership decisions for the submodules cut out by Hecke operators,
/// over one ball. Subspaces are built on first use and cached.
pub struct Oracle {
    ind: Induced,
    checked: bool,
    image_t: Cache<u32, Subspace>,
    ideal_caps: Cache<u32, Subspace>,
    spans: Cache<(SpanFamily, u32), SpanTable>,
}

impl Oracle {
    pub fn new(ind: Induced) -> Self {
        Oracle {
            ind,
            checked: false,
            image_t: Mutex::default(),
            ideal_caps: Mutex::default(),
            spans: Mutex::default(),
        }
    }

    /// In checked mode every member certificate is recombined and compared
    /// with its target before it is returned.
    pub fn checked(mut self, on: bool) -> Self {
        self.checked = on;
        self
    }

    pub fn is_checked(&self) -> bool {
        self.checked
    }

    pub fn induced(&self) -> &Induced {
        &self.ind
    }

    pub fn field(&self) -> &FqField {
        self.ind.field()
    }

    fn radius(&self) -> u32 {
        self.ind.ball().radius()
    }

    /// `span{T e_u : dist(u) <= r - 1}`, tracked by vertex key. For a vertex
    /// function supported in `B(r)` this is all of `Im T` it can meet.
    pub fn image_t(&self, r: u32) -> Result<Arc<Subspace>, OracleError> {
        if r > self.radius() + 1 {
            return Err(OracleError::OutOfBall { needed: r, radius: self.radius() });
        }
        cached(&self.image_t, r, || {
            let sources = if r == 0 { 0 } else { self.ind.dim_within(SpaceTag::IndKZ, r - 1) };
            let images = (0..sources)
                .map(|u| Ok(sparse_of(&self.ind.spherical_t(&FormalSum::delta(SpaceTag::IndKZ, u))?)))
                .collect::<Result<Vec<_>, InducedError>>()?;
            Subspace::tracked_span(self.field(), self.ind.dim(SpaceTag::IndKZ), &images)
        })
    }

    /// Complete decision of `v in Im T` for a vertex function `v`.
    pub fn decide_im_t(&self, v: &FormalSum) -> Result<Certificate, OracleError> {
        if v.tag() != SpaceTag::IndKZ {
            return Err(InducedError::WrongSpace { op: "decide_im_t", expected: "ind_KZ(1)", got: v.tag() }.into());
        }
        let r = self.ind.support_radius(v);
        let (residual, combo) = self.image_t(r)?.reduce(&sparse_of(v))?;
        let mut cert = Certificate {
            verdict: Verdict::NonMember,
            combination: None,
            completeness: Completeness::CompleteDecision,
            generators: GeneratorFamily::SphericalImage,
            cutoff: r.saturating_sub(1),
        };
        if residual.is_empty() {
            cert.verdict = Verdict::Member;
            cert.combination = Some(combo.into_iter().collect());
            if self.checked {
                self.verify_spherical(&cert, v)?;
            }
        }
        Ok(cert)
    }

    fn verify_spherical(&self, cert: &Certificate, target: &FormalSum) -> Result<(), OracleError> {
        let k = self.field();
        let mut rebuilt = FormalSum::zero(SpaceTag::IndKZ);
        for &(u, c) in cert.combination.iter().flatten() {
            rebuilt = rebuilt.axpy(k, c, &self.ind.spherical_t(&FormalSum::delta(SpaceTag::IndKZ, u))?)?;
        }
        if &rebuilt == target {
            Ok(())
        } else {
            Err(OracleError::BadCertificate(format!("spherical combination misses {}", self.ind.dump(target))))
        }
    }

    fn require_iz_trivial(v: &FormalSum, op: &'static str) -> Result<(), OracleError> {
        if v.tag().is_iz_trivial() {
            Ok(())
        } else {
            Err(InducedError::WrongSpace { op, expected: "ind_IZ(1)", got: v.tag() }.into())
        }
    }

    /// Complete decision of `v in (Im T12, Ker T12)` through the transfer to
    /// vertex functions. The combination refers to `T e_u`.
    pub fn decide_ideal(&self, v: &FormalSum) -> Result<Certificate, OracleError> {
        Self::require_iz_trivial(v, "decide_ideal")?;
        self.decide_im_t(&self.ind.transfer_iz_to_kz(v)?)
    }

    /// [`Oracle::decide_ideal`] together with a direct span search at
    /// `cutoff`; a member found by the search must be a member of the
    /// complete route.
    pub fn decide_ideal_cross_checked(
        &self,
        v: &FormalSum,
        cutoff: u32,
    ) -> Result<(Certificate, Certificate), OracleError> {
        let complete = self.decide_ideal(v)?;
        let search = self.span_search(v, SpanFamily::IwahoriIdeal, cutoff)?;
        if search.is_member() && !complete.is_member() {
            return Err(OracleError::RouteDisagreement(format!(
                "span search finds a member the transfer route rejects:\n{}",
                self.ind.dump(v)
            )));
        }
        Ok((complete, search))
    }

    pub fn equal_in_quotient(&self, v: &FormalSum, w: &FormalSum) -> Result<(bool, Certificate), OracleError> {
        let cert = self.decide_ideal(&v.sub(self.field(), w)?)?;
        Ok((cert.is_member(), cert))
    }

    fn span_table(&self, family: SpanFamily, cutoff: u32) -> Result<Arc<SpanTable>, OracleError> {
        let needed = cutoff + family.reach();
        if needed > self.radius() {
            return Err(OracleError::CutoffExceeded { cutoff, needed, radius: self.radius() });
        }
        cached(&self.spans, (family, cutoff), || {
            let ind = &self.ind;
            let k = self.field();
            let mut generators = Vec::new();
            match family {
                SpanFamily::IwahoriIdeal => {
                    for key in 0..ind.dim_within(ind.iz(), cutoff) {
                        let e = FormalSum::delta(ind.iz(), key);
                        generators.push(ind.iwahori_op(IwahoriOp::T12, &e)?);
                        let t10 = ind.iwahori_op(IwahoriOp::T10, &e)?;
                        generators.push(t10.add(k, &ind.iwahori_op(IwahoriOp::Tm10, &e)?)?);
                    }
                }
                SpanFamily::ProPIdeal { r } => {
                    let tag = SpaceTag::IndI1Z(r);
                    for key in 0..ind.dim_within(tag, cutoff) {
                        let e = FormalSum::delta(tag, key);
                        let ns = ind.prop_hecke(PropOp::Tns, &e)?;
                        generators.push(ns.clone());
                        generators.push(ind.prop_hecke(PropOp::Tbeta, &ns.add(k, &e)?)?);
                        for (chi, image) in ind.prop_idempotents(&e)? {
                            if !chi.is_trivial() {
                                generators.push(image);
                            }
                        }
                    }
                }
            }
            let tag = generators.first().map(FormalSum::tag);
            let ambient = tag.map_or(0, |t| ind.dim(t));
            let sparse: Vec<SparseVec> = generators.iter().map(sparse_of).collect();
            let span = Subspace::tracked_span(k, ambient, &sparse)?;
            Ok(SpanTable { generators, span })
        })
    }

    /// Span of a generator family at `cutoff`, untracked coordinates.
    pub fn family_span(&self, family: SpanFamily, cutoff: u32) -> Result<Subspace, OracleError> {
        Ok(self.span_table(family, cutoff)?.span.clone())
    }

    /// Sound for membership only: absence is reported as
    /// `NotFoundUpToCutoff`.
    pub fn span_search(&self, v: &FormalSum, family: SpanFamily, cutoff: u32) -> Result<Certificate, OracleError> {
        let expected = match family {
            SpanFamily::IwahoriIdeal => self.ind.iz(),
            SpanFamily::ProPIdeal { r } => SpaceTag::IndI1Z(r),
        };
        if v.tag() != expected {
            return Err(InducedError::WrongSpace { op: "span_search", expected: "the family's space", got: v.tag() }.into());
        }
        let table = self.span_table(family, cutoff)?;
        self.search_in(v, &table.span, &table.generators, family.generator_family(), cutoff)
    }

    /// Span search over an explicit generator list.
    pub fn span_search_in(&self, v: &FormalSum, generators: &[FormalSum], cutoff: u32) -> Result<Certificate, OracleError> {
        let ambient = self.ind.dim(v.tag());
        let mut sparse = Vec::with_capacity(generators.len());
        for g in generators {
            if g.tag() != v.tag() {
                return Err(InducedError::SpaceMismatch(v.tag(), g.tag()).into());
            }
            sparse.push(sparse_of(g));
        }
        let span = Subspace::tracked_span(self.field(), ambient, &sparse)?;
        self.search_in(v, &span, generators, GeneratorFamily::Custom, cutoff)
    }

    fn search_in(
        &self,
        v: &FormalSum,
        span: &Subspace,
        generators: &[FormalSum],
        family: GeneratorFamily,
        cutoff: u32,
    ) -> Result<Certificate, OracleError> {
        let (residual, combo) = span.reduce(&sparse_of(v))?;
        let member = residual.is_empty();
        let cert = Certificate {
            verdict: if member { Verdict::Member } else { Verdict::NotFoundUpToCutoff },
            combination: member.then(|| combo.into_iter().collect()),
            completeness: Completeness::CutoffBounded,
            generators: family,
            cutoff,
        };
        if member && self.checked {
            let k = self.field();
            let mut rebuilt = FormalSum::zero(v.tag());
            for &(i, c) in cert.combination.iter().flatten() {
                rebuilt = rebuilt.axpy(k, c, &generators[i])?;
            }
            if &rebuilt != v {
                return Err(OracleError::BadCertificate(format!("span combination misses {}", self.ind.dump(v))));
            }
        }
        Ok(cert)
    }

    /// Residual of the transfer of `f` modulo `Im T`; linear in `f`, zero iff
    /// `f` lies in the ideal (given `r` bounds the support of the transfer).
    pub(crate) fn ideal_residual(&self, f: &FormalSum, r: u32) -> Result<SparseVec, OracleError> {
        let image = self.image_t(r)?;
        Ok(image.reduce(&sparse_of(&self.ind.transfer_iz_to_kz(f)?))?.0)
    }

    /// Largest vertex distance among the sources of the edges of `B(n)`.
    pub(crate) fn source_radius(&self, n: u32) -> u32 {
        let ball = self.ind.ball();
        (0..self.ind.dim_within(self.ind.iz(), n)).map(|key| ball.edge(key).source().distance()).max().unwrap_or(0)
    }

    /// Kernel of a linear map given on the basis `e_j`, `j < dim`, as
    /// combinations of those basis vectors.
    pub(crate) fn kernel(
        &self,
        dim: usize,
        images: impl Fn(usize) -> Result<SparseVec, OracleError>,
        target_dim: usize,
    ) -> Result<Vec<SparseVec>, OracleError> {
        let mut elim = Subspace::tracked(self.field(), target_dim);
        let mut out = Vec::new();
        for j in 0..dim {
            if let Insertion::Dependent(relation) = elim.insert_with(&images(j)?, SparseVec::from([(j, FqElem::ONE)]))? {
                out.push(relation);
            }
        }
        Ok(out)
    }

    /// Kernel of `op` restricted to the vectors of `tag` supported on `B(n)`.
    pub fn kernel_on_ball(
        &self,
        tag: SpaceTag,
        n: u32,
        op: impl Fn(&FormalSum) -> Result<FormalSum, OracleError>,
    ) -> Result<Subspace, OracleError> {
        // images may live in any space, so their coordinates are unbounded
        let kernel = self.kernel(self.ind.dim_within(tag, n), |j| Ok(sparse_of(&op(&FormalSum::delta(tag, j))?)), usize::MAX)?;
        Subspace::span(self.field(), self.ind.dim(tag), &kernel)
    }

    /// `(Im T12, Ker T12)` intersected with the vectors supported on `B(n)`,
    /// in `ind_IZ 1` coordinates. Complete.
    pub fn ideal_cap(&self, n: u32) -> Result<Arc<Subspace>, OracleError> {
        if n > self.radius() {
            return Err(OracleError::OutOfBall { needed: n, radius: self.radius() });
        }
        cached(&self.ideal_caps, n, || {
            let tag = self.ind.iz();
            let r = self.source_radius(n);
            let kernel = self.kernel(
                self.ind.dim_within(tag, n),
                |j| self.ideal_residual(&FormalSum::delta(tag, j), r),
                self.ind.dim(SpaceTag::IndKZ),
            )?;
            Subspace::span(self.field(), self.ind.dim(tag), &kernel)
        })
    }

    /// The canonical representative of the class of `v`: its residual modulo
    /// the ideal vectors supported within its own radius.
    pub fn quotient_residual(&self, v: &FormalSum) -> Result<FormalSum, OracleError> {
        Self::require_iz_trivial(v, "quotient_residual")?;
        let cap = self.ideal_cap(self.ind.support_radius(v))?;
        Ok(formal_of(self.field(), v.tag(), &cap.reduce(&sparse_of(v))?.0))
    }

    /// `v . word` on classes of `ind_IZ 1`, one letter at a time, replacing
    /// the running vector by its canonical representative after each step.
    pub fn act_word(&self, v: &FormalSum, word: &[PropOp]) -> Result<FormalSum, OracleError> {
        let mut current = self.quotient_residual(v)?;
        for &letter in word {
            current = self.quotient_residual(&self.ind.invariant_hecke(letter, &current)?)?;
        }
        Ok(current)
    }
}
