//! Shared state of one run: the model, its ball tables and oracle, seeded
//! randomness and the vectors most checks start from.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use gf_core::{FqElem, FqField, GfError};
use induced_modules::{FamilyKind, FormalSum, Induced, InducedError};
use local_ring::{LocalError, LocalParams, LocalRing};
use quotient_oracle::{InvariantReport, Oracle, OracleError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tree_cosets::{BallIndex, Mat2, Tree, TreeError};

use crate::config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("outside the statement's hypotheses: {0}")]
    OutOfDomain(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Induced(#[from] InducedError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Harness(String),
}

impl CheckError {
    /// The computation needed cosets beyond the ball.
    pub fn is_out_of_ball(&self) -> bool {
        let in_tree = |e: &InducedError| matches!(e, InducedError::Tree(TreeError::OutOfBall(..)));
        match self {
            CheckError::Tree(TreeError::OutOfBall(..)) => true,
            CheckError::Induced(e) => in_tree(e),
            CheckError::Oracle(OracleError::OutOfBall { .. } | OracleError::CutoffExceeded { .. }) => true,
            CheckError::Oracle(OracleError::Induced(e)) => in_tree(e),
            _ => false,
        }
    }
}

/// The verdict of a check that ran to completion.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub reason: Option<String>,
    pub witness: Value,
}

impl Outcome {
    pub fn pass(witness: Value) -> Self {
        Outcome { passed: true, reason: None, witness }
    }

    pub fn fail(reason: impl Into<String>, witness: Value) -> Self {
        Outcome { passed: false, reason: Some(reason.into()), witness }
    }

    /// Pass when `ok`, otherwise fail with `reason`.
    pub fn expect(ok: bool, reason: impl Into<String>, witness: Value) -> Self {
        if ok {
            Self::pass(witness)
        } else {
            Self::fail(reason, witness)
        }
    }
}

pub type CheckResult = Result<Outcome, CheckError>;

pub struct Ctx {
    config: RunConfig,
    oracle: Oracle,
    invariant_reports: Mutex<BTreeMap<u32, Arc<InvariantReport>>>,
}

/// FNV-1a, to give each check its own stream from the run seed.
fn fnv(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

impl Ctx {
    pub fn new(config: &RunConfig) -> Result<Self, CheckError> {
        let ring = LocalRing::new(LocalParams::new(config.p, config.e, config.f, config.prec)?)?;
        let tree = Tree::new(ring).checked(config.checked);
        let ball = BallIndex::new(&tree, config.ball)?;
        let oracle = Oracle::new(Induced::new(Arc::new(ball))).checked(config.checked);
        Ok(Ctx { config: config.clone(), oracle, invariant_reports: Mutex::new(BTreeMap::new()) })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn ind(&self) -> &Induced {
        self.oracle.induced()
    }

    pub fn tree(&self) -> &Tree {
        self.ind().tree()
    }

    pub fn k(&self) -> &FqField {
        self.oracle.field()
    }

    pub fn q(&self) -> u32 {
        self.k().q()
    }

    pub fn radius(&self) -> u32 {
        self.config.ball
    }

    pub fn samples(&self) -> usize {
        self.config.samples
    }

    /// Random coefficient functions drawn per family check.
    pub fn coefficient_draws(&self) -> usize {
        (self.config.samples / 5).max(1)
    }

    /// Exponents `p^l`, `0 <= l < f`.
    pub fn p_powers(&self) -> Vec<u32> {
        self.k().p_powers()
    }

    pub fn need_ball(&self, radius: u32, what: &str) -> Result<(), CheckError> {
        if self.radius() < radius {
            return Err(CheckError::OutOfDomain(format!("{what} needs a ball of radius {radius}, have {}", self.radius())));
        }
        Ok(())
    }

    pub fn need(&self, holds: bool, what: &str) -> Result<(), CheckError> {
        if holds {
            Ok(())
        } else {
            Err(CheckError::OutOfDomain(what.to_string()))
        }
    }

    /// `q > 3` and `ef > 1`, the standing hypotheses of the invariance results.
    pub fn in_invariance_domain(&self) -> bool {
        self.q() > 3 && self.config.e * self.config.f > 1
    }

    pub fn rng(&self, stream: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.config.seed ^ fnv(stream))
    }

    pub fn random_elem(&self, rng: &mut impl Rng) -> FqElem {
        self.field_elem(rng.gen_range(0..self.q()))
    }

    pub fn random_unit(&self, rng: &mut impl Rng) -> FqElem {
        self.field_elem(rng.gen_range(1..self.q()))
    }

    pub fn random_digits(&self, rng: &mut impl Rng, n: usize) -> Vec<FqElem> {
        (0..n).map(|_| self.random_elem(rng)).collect()
    }

    /// `([x] + pi a, b; pi c, [y] + pi d)` with random digits at full
    /// precision.
    pub fn iwahori_element(&self, rng: &mut impl Rng, x: FqElem, y: FqElem) -> Mat2 {
        let t = self.tree();
        let r = t.ring();
        let n = r.prec() as usize;
        let mut digits = |lead: Option<FqElem>| {
            let mut d = self.random_digits(rng, n);
            if let Some(l) = lead {
                d.insert(0, l);
                d.truncate(n);
            }
            t.digits(&d)
        };
        let a = digits(Some(x));
        let b = digits(None);
        let c = r.f_shift(&digits(None), 1);
        let d = digits(Some(y));
        t.mat(a, b, c, d)
    }

    pub fn random_i1(&self, rng: &mut impl Rng) -> Mat2 {
        self.iwahori_element(rng, FqElem::ONE, FqElem::ONE)
    }

    pub fn random_iwahori(&self, rng: &mut impl Rng) -> Mat2 {
        let (x, y) = (self.random_unit(rng), self.random_unit(rng));
        self.iwahori_element(rng, x, y)
    }

    /// A random `ind_IZ 1` vector with `terms` terms supported on `B(radius)`.
    pub fn random_iz_vector(&self, rng: &mut impl Rng, radius: u32, terms: usize) -> FormalSum {
        let ind = self.ind();
        let dim = ind.dim_within(ind.iz(), radius);
        let pairs: Vec<(usize, FqElem)> = (0..terms).map(|_| (rng.gen_range(0..dim), self.random_unit(rng))).collect();
        FormalSum::from_terms(self.k(), ind.iz(), pairs)
    }

    pub fn id_class(&self) -> FormalSum {
        FormalSum::delta(self.ind().iz(), 0)
    }

    pub fn beta_class(&self) -> Result<FormalSum, CheckError> {
        Ok(self.ind().delta_at(self.ind().iz(), &self.tree().beta())?)
    }

    pub fn s(&self, n: u32, k: u32) -> Result<FormalSum, CheckError> {
        Ok(self.ind().make_family(FamilyKind::S, n, k)?)
    }

    pub fn t(&self, n: u32, k: u32) -> Result<FormalSum, CheckError> {
        Ok(self.ind().make_family(FamilyKind::T, n, k)?)
    }

    pub fn beta_times(&self, v: &FormalSum) -> Result<FormalSum, CheckError> {
        Ok(self.ind().act_left(&self.tree().beta(), v)?)
    }

    /// `[g0_{n, mu}, 1]` summed with coefficients `c(mu)`; `n = 0` is `c() [id]`.
    pub fn g0_sum(&self, n: u32, mut c: impl FnMut(&[FqElem]) -> FqElem) -> Result<FormalSum, CheckError> {
        let ind = self.ind();
        Ok(ind.sum_over_digits(ind.iz(), n, |mu| Some((ind.g0(mu), c(mu))))?)
    }

    pub fn in_ideal(&self, v: &FormalSum) -> Result<bool, CheckError> {
        Ok(self.oracle.decide_ideal(v)?.is_member())
    }

    pub fn provably_outside_ideal(&self, v: &FormalSum) -> Result<bool, CheckError> {
        Ok(self.oracle.decide_ideal(v)?.is_complete_non_member())
    }

    pub fn equal_in_quotient(&self, v: &FormalSum, w: &FormalSum) -> Result<bool, CheckError> {
        Ok(self.oracle.equal_in_quotient(v, w)?.0)
    }

    /// The solver's invariant space on `B(n)` with `I(1)` generators to
    /// depth `n + 2`, computed once per run.
    pub fn invariant_report(&self, n: u32) -> Result<Arc<InvariantReport>, CheckError> {
        if let Some(report) = self.invariant_reports.lock().expect("not poisoned").get(&n) {
            return Ok(report.clone());
        }
        let report = Arc::new(self.oracle.invariant_space(n, n + 2)?);
        self.invariant_reports.lock().expect("not poisoned").insert(n, report.clone());
        Ok(report)
    }

    /// The element with `code`, which must lie below `q`.
    pub fn field_elem(&self, code: u32) -> FqElem {
        self.k().elem(code).expect("code below q")
    }
}
