//! Reductions of the `s` and `t` families modulo `Im T12` and modulo the
//! ideal `(Im T12, Ker T12)`.

use gf_core::FqElem;
use induced_modules::{FamilyKind, FormalSum, InducedError, IwahoriOp};
use quotient_oracle::subspace::sparse_of;
use quotient_oracle::Subspace;
use rand::Rng;
use serde_json::{json, Value};

use crate::context::{CheckError, CheckResult, Ctx, Outcome};

/// `Im T12` on a ball, decided two ways: exactly through
/// `Im T12 = Ker(T10 + Tm10)`, and by a span search over `T12` images of
/// deltas.
struct ImageT12 {
    cutoff: u32,
    span: Subspace,
}

#[derive(Clone, Copy, Debug, Default)]
struct Membership {
    exact: bool,
    search: bool,
}

impl ImageT12 {
    fn new(ctx: &Ctx, cutoff: u32) -> Result<Self, CheckError> {
        ctx.need_ball(cutoff + 1, "T12 images")?;
        let ind = ctx.ind();
        let tag = ind.iz();
        let images = (0..ind.dim_within(tag, cutoff))
            .map(|key| Ok(sparse_of(&ind.iwahori_op(IwahoriOp::T12, &FormalSum::delta(tag, key))?)))
            .collect::<Result<Vec<_>, InducedError>>()?;
        Ok(ImageT12 { cutoff, span: Subspace::span(ctx.k(), ind.dim(tag), &images)? })
    }

    fn decide(&self, ctx: &Ctx, v: &FormalSum) -> Result<Membership, CheckError> {
        let ind = ctx.ind();
        if ind.support_radius(v) > self.cutoff {
            return Err(CheckError::Harness(format!("vector beyond the search cutoff {}", self.cutoff)));
        }
        let t10 = ind.iwahori_op(IwahoriOp::T10, v)?;
        let exact = t10.add(ctx.k(), &ind.iwahori_op(IwahoriOp::Tm10, v)?)?.is_zero();
        Ok(Membership { exact, search: self.span.contains(&sparse_of(v))? })
    }
}

/// A random function on `F_q^m`, indexed like `point_of_index`.
fn random_table(ctx: &Ctx, rng: &mut impl Rng, m: usize) -> Vec<FqElem> {
    (0..ctx.q().pow(m as u32)).map(|_| ctx.random_elem(rng)).collect()
}

fn table_at(ctx: &Ctx, table: &[FqElem], mu: &[FqElem]) -> FqElem {
    let q = ctx.q() as usize;
    table[mu.iter().rev().fold(0, |acc, x| acc * q + x.code() as usize)]
}

/// Coefficient functions: the constant 1, then random draws.
fn coefficient_tables(ctx: &Ctx, rng: &mut impl Rng, m: usize) -> Vec<Vec<FqElem>> {
    let mut out = vec![vec![FqElem::ONE; ctx.q().pow(m as u32) as usize]];
    out.extend((0..ctx.coefficient_draws()).map(|_| random_table(ctx, rng, m)));
    out
}

fn top_power(ctx: &Ctx, mu: FqElem, k: u32) -> FqElem {
    ctx.k().pow(mu, u64::from(k))
}

/// `sum_mu c([mu]_{n-1}) mu_{n-1}^k [g0_{n-1,[mu]} u([mu_{n-1}]) w]` reduces
/// modulo `Im T12` to `0`, or to `-sum c [g0_{n-1}]` when `k = q - 1`.
pub fn tnk_reduction(ctx: &Ctx) -> CheckResult {
    let ind = ctx.ind();
    let k = ctx.k();
    let q = ctx.q();
    let mut rng = ctx.rng("lemma_tnk_reduction");
    let max_n = 3.min(ctx.radius().saturating_sub(1));
    ctx.need(max_n >= 1, "needs a ball of radius 2")?;
    let image = ImageT12::new(ctx, max_n)?;
    let (mut vectors, mut failures) = (0, Vec::new());
    for n in 1..=max_n {
        let m = (n - 1) as usize;
        for table in coefficient_tables(ctx, &mut rng, m) {
            for exponent in 0..q {
                let v = ind.family_sum(FamilyKind::T, n, |mu| {
                    k.mul(table_at(ctx, &table, &mu[..m]), top_power(ctx, mu[m], exponent))
                })?;
                let target = if exponent == q - 1 {
                    v.add(k, &ctx.g0_sum(n - 1, |head| table_at(ctx, &table, head))?)?
                } else {
                    v
                };
                let found = image.decide(ctx, &target)?;
                vectors += 1;
                if !(found.exact && found.search) && failures.len() < 5 {
                    failures.push(json!({ "n": n, "k": exponent, "exact": found.exact, "search": found.search }));
                }
            }
        }
    }
    let witness = json!({ "max_n": max_n, "vectors": vectors, "failures": failures });
    Ok(Outcome::expect(failures.is_empty(), "a t-type sum does not reduce as stated", witness))
}

/// `sum_mu c([mu]_{n-2}) mu_{n-2}^k [g0_{n,mu}]` is `0` modulo the ideal, or
/// `sum c [g0_{n-2}]` when `k = q - 1`; also the exact identity expressing
/// it as `Tm10` of a level `n - 1` sum.
pub fn snk_reduction(ctx: &Ctx) -> CheckResult {
    let k = ctx.k();
    let q = ctx.q();
    let mut rng = ctx.rng("lemma_snk_reduction");
    ctx.need_ball(2, "level-2 sums")?;
    let max_n = 3.min(ctx.radius());
    let (mut vectors, mut failures) = (0, Vec::new());
    for n in 2..=max_n {
        let m = (n - 2) as usize;
        for table in coefficient_tables(ctx, &mut rng, m) {
            for exponent in 0..q {
                let coeff = |mu: &[FqElem]| k.mul(table_at(ctx, &table, &mu[..m]), top_power(ctx, mu[m], exponent));
                let f = ctx.g0_sum(n, coeff)?;
                let lower = ctx.g0_sum(n - 1, coeff)?;
                let identity = ctx.ind().iwahori_op(IwahoriOp::Tm10, &lower)? == f;
                let expected = if exponent == q - 1 {
                    ctx.g0_sum(n - 2, |head| table_at(ctx, &table, head))?
                } else {
                    FormalSum::zero(f.tag())
                };
                let congruent = ctx.equal_in_quotient(&f, &expected)?;
                vectors += 1;
                if !(identity && congruent) && failures.len() < 5 {
                    failures.push(json!({ "n": n, "k": exponent, "tm10_identity": identity, "congruent": congruent }));
                }
            }
        }
    }
    let witness = json!({ "max_n": max_n, "vectors": vectors, "failures": failures });
    Ok(Outcome::expect(failures.is_empty(), "an s-type sum does not reduce as stated", witness))
}

pub fn t_family(ctx: &Ctx) -> CheckResult {
    let k = ctx.k();
    let q = ctx.q();
    let max_n = 3.min(ctx.radius().saturating_sub(1));
    ctx.need(max_n >= 2, "needs a ball of radius 3")?;
    let image = ImageT12::new(ctx, max_n)?;
    let mut failures: Vec<Value> = Vec::new();
    for n in 1..=max_n {
        for exponent in 0..q - 1 {
            let found = image.decide(ctx, &ctx.t(n, exponent)?)?;
            if !(found.exact && found.search) {
                failures.push(json!({ "claim": "t_n^k in Im T12", "n": n, "k": exponent }));
            }
        }
    }
    let t12_s10 = ctx.ind().iwahori_op(IwahoriOp::T12, &ctx.s(1, 0)?)?;
    let observation = t12_s10 == ctx.t(1, 0)?.neg(k);
    let t1_top = ctx.equal_in_quotient(&ctx.t(1, q - 1)?, &ctx.id_class().neg(k))?;
    let t2_top = ctx.equal_in_quotient(&ctx.t(2, q - 1)?, &ctx.beta_class()?)?;
    for (claim, holds) in [
        ("-t_1^0 = T12 s_1^0", observation),
        ("t_1^{q-1} = -[id]", t1_top),
        ("t_2^{q-1} = [beta]", t2_top),
    ] {
        if !holds {
            failures.push(json!({ "claim": claim }));
        }
    }
    let witness = json!({ "max_n": max_n, "failures": failures });
    Ok(Outcome::expect(failures.is_empty(), "a t-family reduction fails", witness))
}

/// `t_n^{q-1}` vanishes in the quotient for `n >= 3`.
pub fn tn_top_power_vanishes(ctx: &Ctx) -> CheckResult {
    ctx.need_ball(3, "t_3")?;
    let q = ctx.q();
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    for n in 3..=ctx.radius() {
        let t = match ctx.t(n, q - 1) {
            Ok(t) => t,
            Err(e) if e.is_out_of_ball() && n > 3 => break,
            Err(e) => return Err(e),
        };
        checked.push(n);
        if !ctx.in_ideal(&t)? {
            failures.push(n);
        }
    }
    let witness = json!({ "n": checked, "nonzero_at": failures });
    Ok(Outcome::expect(failures.is_empty(), "t_n^{q-1} is nonzero in the quotient", witness))
}

/// `s_1^0 = -[beta]` and `s_n^0 = 0` in the quotient, with
/// `s_n^0 = Tm10^n [id]` exactly.
pub fn sn0_reduction(ctx: &Ctx) -> CheckResult {
    let k = ctx.k();
    let ind = ctx.ind();
    let mut power = ctx.id_class();
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 1..=ctx.radius() {
        power = ind.iwahori_op(IwahoriOp::Tm10, &power)?;
        let s = ctx.s(n, 0)?;
        let expected = if n == 1 { ctx.beta_class()?.neg(k) } else { FormalSum::zero(s.tag()) };
        let exact = power == s;
        let congruent = ctx.equal_in_quotient(&s, &expected)?;
        ok &= exact && congruent;
        rows.push(json!({ "n": n, "tm10_power_exact": exact, "congruent": congruent }));
    }
    Ok(Outcome::expect(ok, "an s_n^0 reduction fails", json!({ "cases": rows })))
}

/// `u(-pi^{n-1}) s_n^k - s_n^k` for `2 <= k <= q - 1` not a power of `p`:
/// the difference formula holds exactly and the difference is provably
/// outside the ideal.
pub fn snk_not_invariant(ctx: &Ctx) -> CheckResult {
    let k = ctx.k();
    let t = ctx.tree();
    let r = t.ring();
    let exponents: Vec<u32> = (2..ctx.q()).filter(|&e| !k.is_p_power_exponent(e)).collect();
    ctx.need(!exponents.is_empty(), "every exponent in [2, q-1] is a power of p")?;
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 1..=3.min(ctx.radius()) {
        let mover = t.u(r.f_neg(&r.f_pi_pow(n as i32 - 1)));
        for &exponent in &exponents {
            let s = ctx.s(n, exponent)?;
            let difference = ctx.ind().act_left(&mover, &s)?.sub(k, &s)?;
            let formula = ctx.ind().family_sum(FamilyKind::S, n, |mu| {
                let top = mu[mu.len() - 1];
                k.sub(top_power(ctx, k.add(top, FqElem::ONE), exponent), top_power(ctx, top, exponent))
            })?;
            let exact = difference == formula;
            let outside = ctx.provably_outside_ideal(&difference)?;
            ok &= exact && outside;
            rows.push(json!({ "n": n, "k": exponent, "difference_formula": exact, "complete_non_member": outside }));
        }
    }
    Ok(Outcome::expect(ok, "a difference lies in the ideal", json!({ "cases": rows })))
}

/// `u(-1) s_1^{p^l} - s_1^{p^l} = s_1^0`, congruent to `-[beta] != 0`.
pub fn s1_not_invariant(ctx: &Ctx) -> CheckResult {
    let k = ctx.k();
    let t = ctx.tree();
    let r = t.ring();
    let mover = t.u(r.f_neg(&r.f_one()));
    let s10 = ctx.s(1, 0)?;
    let minus_beta = ctx.beta_class()?.neg(k);
    let mut rows = Vec::new();
    let mut ok = true;
    for exponent in ctx.p_powers() {
        let s = ctx.s(1, exponent)?;
        let difference = ctx.ind().act_left(&mover, &s)?.sub(k, &s)?;
        let exact = difference == s10;
        let congruent = ctx.equal_in_quotient(&difference, &minus_beta)?;
        let outside = ctx.provably_outside_ideal(&difference)?;
        ok &= exact && congruent && outside;
        rows.push(json!({
            "exponent": exponent,
            "difference_is_s_1_0": exact,
            "congruent_to_minus_beta": congruent,
            "complete_non_member": outside,
        }));
    }
    Ok(Outcome::expect(ok, "s_1^{p^l} behaves otherwise", json!({ "cases": rows })))
}
