//! `I(1)`-invariance of the `s` family, its boundary cases, and the solver
//! cross-checks of the invariant basis.

use gf_core::{interpolate, point_of_index, FqElem, HChar};
use induced_modules::FormalSum;
use quotient_oracle::SparseVec;
use serde_json::{json, Value};
use tree_cosets::Mat2;

use crate::context::{CheckError, CheckResult, Ctx, Outcome};

/// Largest digit table interpolated by the solver cross-checks.
const MAX_POINTS: usize = 729;

/// Fewest movers tried by the invariance check.
const MIN_MOVERS: usize = 200;

/// The deterministic generators of `I(1)` to depth `radius + 2`, in the
/// order of `Tree::i1_generators`.
fn generators(ctx: &Ctx) -> Vec<Mat2> {
    ctx.tree().i1_generators(ctx.radius() + 2)
}

/// Human-readable name of generator `index`.
fn describe_generator(ctx: &Ctx, index: usize) -> String {
    let per_depth = 4 * ctx.config().f as usize;
    let (depth, rest) = (index / per_depth, index % per_depth);
    let basis = rest / 4;
    match rest % 4 {
        0 => format!("u(b{basis} pi^{depth})"),
        1 => format!("l(b{basis} pi^{})", depth + 1),
        2 => format!("diag(1 + b{basis} pi^{}, 1)", depth + 1),
        _ => format!("diag(1, 1 + b{basis} pi^{})", depth + 1),
    }
}

fn is_lower_unipotent(ctx: &Ctx, index: usize) -> bool {
    index % (4 * ctx.config().f as usize) % 4 == 1
}

/// Indices of the movers `g` with `g v - v` outside the ideal, and whether
/// each of those is a complete non-membership.
fn moved_by(ctx: &Ctx, v: &FormalSum, movers: &[Mat2]) -> Result<Vec<(usize, bool)>, CheckError> {
    let mut out = Vec::new();
    for (index, g) in movers.iter().enumerate() {
        let difference = ctx.ind().act_left(g, v)?.sub(ctx.k(), v)?;
        let cert = ctx.oracle().decide_ideal(&difference)?;
        if !cert.is_member() {
            out.push((index, cert.is_complete_non_member()));
        }
    }
    Ok(out)
}

/// `g s_n^{p^l} - s_n^{p^l}` lies in the ideal for every `g` in `I(1)` when
/// `q > 3` and `ef > 1`; for `q <= 3`, `s_2^{p^l}` is moved.
pub fn s_invariance(ctx: &Ctx) -> CheckResult {
    ctx.need_ball(2, "s_2")?;
    let mut movers = generators(ctx);
    let deterministic = movers.len();
    let mut rng = ctx.rng("prop_s2_invariance");
    while movers.len() < MIN_MOVERS.max(deterministic) {
        movers.push(ctx.random_i1(&mut rng));
    }
    let describe = |index: usize| {
        if index < deterministic {
            describe_generator(ctx, index)
        } else {
            format!("random #{}", index - deterministic)
        }
    };
    let mut cases = Vec::new();
    let mut all_fixed = true;
    let mut s2_provably_moved = true;
    for n in 2..=3.min(ctx.radius()) {
        for exponent in ctx.p_powers() {
            let moved = moved_by(ctx, &ctx.s(n, exponent)?, &movers)?;
            all_fixed &= moved.is_empty();
            if n == 2 {
                s2_provably_moved &= moved.iter().any(|&(_, complete)| complete);
            }
            cases.push(json!({
                "n": n,
                "exponent": exponent,
                "moved_by": moved.iter().take(3).map(|&(i, _)| describe(i)).collect::<Vec<_>>(),
                "moved_count": moved.len(),
            }));
        }
    }
    let witness = json!({ "movers": movers.len(), "generators": deterministic, "cases": cases });
    if ctx.in_invariance_domain() {
        Ok(Outcome::expect(all_fixed, "an s_n^{p^l} is moved by an element of I(1)", witness))
    } else if ctx.q() <= 3 {
        Ok(Outcome::expect(s2_provably_moved, "s_2^{p^l} is not provably moved for q <= 3", witness))
    } else {
        Err(CheckError::OutOfDomain(format!("ef = 1 with q > 3 (observed all fixed: {all_fixed})")))
    }
}

/// If `s_2^k` is invariant then so is `s_3^k`, for every `0 <= k < q`.
pub fn inductive_step(ctx: &Ctx) -> CheckResult {
    ctx.need_ball(3, "s_3")?;
    let movers = generators(ctx);
    let mut cases = Vec::new();
    let mut ok = true;
    for exponent in 0..ctx.q() {
        let lower = moved_by(ctx, &ctx.s(2, exponent)?, &movers)?.is_empty();
        let upper = moved_by(ctx, &ctx.s(3, exponent)?, &movers)?.is_empty();
        ok &= !lower || upper;
        cases.push(json!({ "k": exponent, "s2_invariant": lower, "s3_invariant": upper }));
    }
    Ok(Outcome::expect(ok, "invariance does not propagate from n = 2 to n = 3", json!({ "cases": cases })))
}

/// `diag([a], [d]) s_n^{p^l} = (d/a)^{p^l} s_n^{p^l}`, and the idempotents
/// pick out exactly that character.
pub fn eigenvalues_of_sn(ctx: &Ctx) -> CheckResult {
    ctx.need_ball(2, "s_2")?;
    let k = ctx.k();
    let t = ctx.tree();
    let ind = ctx.ind();
    let mut failures = Vec::new();
    let mut tried = 0;
    for n in 2..=ctx.radius() {
        for exponent in ctx.p_powers() {
            let s = ctx.s(n, exponent)?;
            for a in k.units() {
                for d in k.units() {
                    let scaled = ind.act_left(&t.diag(t.teich(a), t.teich(d)), &s)?;
                    let eigenvalue = k.pow(k.div(d, a)?, u64::from(exponent));
                    tried += 1;
                    if scaled != s.scale(k, eigenvalue) && failures.len() < 5 {
                        failures.push(json!({ "n": n, "exponent": exponent, "a": a.code(), "d": d.code() }));
                    }
                }
            }
            let expected = HChar::d_over_a(k, i64::from(exponent));
            for (chi, image) in ind.invariant_idempotents(&s)? {
                let holds = if chi == expected { image == s } else { image.is_zero() };
                if !holds && failures.len() < 5 {
                    failures.push(json!({ "n": n, "exponent": exponent, "idempotent": chi.to_string() }));
                }
            }
        }
    }
    let witness = json!({ "torus_elements": tried, "failures": failures });
    Ok(Outcome::expect(failures.is_empty(), "an eigencharacter differs", witness))
}

pub fn linear_independence(ctx: &Ctx) -> CheckResult {
    ctx.need(ctx.in_invariance_domain(), "needs q > 3 and ef > 1")?;
    let n = ctx.radius();
    let predicted = ctx.oracle().predicted_invariants(n)?;
    let cap = ctx.oracle().ideal_cap(n)?;
    let vectors: Vec<SparseVec> = predicted.iter().map(|(_, v)| quotient_oracle::subspace::sparse_of(v)).collect();
    let rank = cap.complement_residuals(&vectors)?.len();
    let witness = json!({
        "radius": n,
        "vectors": predicted.iter().map(|(name, _)| name.clone()).collect::<Vec<_>>(),
        "rank_modulo_ideal": rank,
    });
    Ok(Outcome::expect(rank == predicted.len(), "the predicted vectors are dependent modulo the ideal", witness))
}

/// For `q = 2, 3`: `s_2^1` is moved by a lower unipotent generator; for
/// `q = 3` with `ef > 1`, `s_3^1` is fixed by all generators. Over `Q_3` the
/// invariants are `[id]`, `[beta]` only, so there `s_3^1` is just recorded.
pub fn q3_s31(ctx: &Ctx) -> CheckResult {
    ctx.need(ctx.q() <= 3, "stated for q = 2, 3")?;
    ctx.need_ball(3, "s_3")?;
    let movers = generators(ctx);
    let lower: Vec<usize> = moved_by(ctx, &ctx.s(2, 1)?, &movers)?
        .into_iter()
        .filter(|&(i, complete)| complete && is_lower_unipotent(ctx, i))
        .map(|(i, _)| i)
        .collect();
    let s3_moved = moved_by(ctx, &ctx.s(3, 1)?, &movers)?;
    let s3_fixed = s3_moved.is_empty();
    let s3_claim_applies = ctx.q() == 3 && ctx.config().e * ctx.config().f > 1;
    let ok = !lower.is_empty() && (!s3_claim_applies || s3_fixed);
    let witness = json!({
        "generators": movers.len(),
        "s2_moved_by_lower_unipotents": lower.iter().map(|&i| describe_generator(ctx, i)).collect::<Vec<_>>(),
        "s3_invariant": s3_fixed,
        "s3_claim_applies": s3_claim_applies,
    });
    Ok(Outcome::expect(ok, "the q = 2, 3 boundary behaves otherwise", witness))
}

/// Deltas of `B(n)` with the `[g0_{n, mu}]` keys located, as
/// `(domain, key of mu, inverse factor of mu)`.
struct LevelDomain {
    domain: Vec<FormalSum>,
    top: Vec<(usize, FqElem)>,
}

fn level_domain(ctx: &Ctx, n: u32) -> Result<LevelDomain, CheckError> {
    let ind = ctx.ind();
    let k = ctx.k();
    let tag = ind.iz();
    let domain = (0..ind.dim_within(tag, n)).map(|key| FormalSum::delta(tag, key)).collect();
    let mut top = Vec::new();
    for idx in 0..ctx.q().pow(n) as usize {
        let (key, factor) = ind.locate(tag, &ind.g0(&point_of_index(k, n as usize, idx)))?;
        top.push((key, k.inv(factor)?));
    }
    Ok(LevelDomain { domain, top })
}

/// Monomials of the `a`-part of a fixed combination, as exponent vectors.
fn a_part_monomials(ctx: &Ctx, level: &LevelDomain, n: u32, combo: &SparseVec) -> Result<Vec<Vec<u32>>, CheckError> {
    let k = ctx.k();
    let values: Vec<FqElem> = level
        .top
        .iter()
        .map(|&(key, inv)| k.mul(combo.get(&key).copied().unwrap_or(FqElem::ZERO), inv))
        .collect();
    let poly = interpolate(k, n as usize, &values)?;
    Ok(poly.terms().map(|(e, _)| e.to_vec()).collect())
}

fn cross_check_levels(ctx: &Ctx) -> Vec<u32> {
    (1..=3.min(ctx.radius())).filter(|&n| ctx.q().pow(n) as usize <= MAX_POINTS).collect()
}

/// Top-digit exponents of the `a`-parts of the combinations on `B(n)` fixed
/// by `movers` that are neither `0` nor a power of `p`.
fn bad_top_exponents(
    ctx: &Ctx,
    level: &LevelDomain,
    n: u32,
    movers: &[Mat2],
    counterexamples: &mut Vec<Value>,
) -> Result<(usize, Vec<u32>), CheckError> {
    let k = ctx.k();
    let fixed = ctx.oracle().fixed_combinations(&level.domain, movers)?;
    let mut bad = std::collections::BTreeSet::new();
    for combo in &fixed {
        for exponents in a_part_monomials(ctx, level, n, combo)? {
            let top = exponents[n as usize - 1];
            if top != 0 && !k.is_p_power_exponent(top) {
                bad.insert(top);
                if counterexamples.len() < 3 {
                    counterexamples.push(json!({ "n": n, "monomial_exponents": exponents }));
                }
            }
        }
    }
    Ok((fixed.len(), bad.into_iter().collect()))
}

/// Solver cross-check: for `f` on `B(n)` fixed by `u(-pi^{n-1})` modulo the
/// ideal, the exponents of `mu_{n-1}` in `a_mu` are `0` or powers of `p`.
///
/// As for the smaller digits, the witness reruns the solver with
/// `u(-[b] pi^{n-1})` for `b` over an `F_p`-basis.
pub fn invariant_form_top_digit(ctx: &Ctx) -> CheckResult {
    let t = ctx.tree();
    let r = t.ring();
    let mut cases = Vec::new();
    let mut counterexamples: Vec<Value> = Vec::new();
    for n in cross_check_levels(ctx) {
        let level = level_domain(ctx, n)?;
        let top = n as i32 - 1;
        let stated = [t.u(r.f_neg(&r.f_pi_pow(top)))];
        let (fixed, bad) = bad_top_exponents(ctx, &level, n, &stated, &mut counterexamples)?;
        let translations: Vec<Mat2> =
            ctx.k().fp_basis().into_iter().map(|b| t.u(r.f_neg(&r.f_shift(&t.teich(b), top)))).collect();
        let (fixed_all, bad_all) = bad_top_exponents(ctx, &level, n, &translations, &mut Vec::new())?;
        cases.push(json!({
            "n": n,
            "fixed_dimension": fixed,
            "offending_top_exponents": bad,
            "all_translations": { "fixed_dimension": fixed_all, "offending_top_exponents": bad_all },
        }));
    }
    ctx.need(!cases.is_empty(), "digit tables too large")?;
    let witness = json!({ "cases": cases, "counterexamples": counterexamples });
    Ok(Outcome::expect(
        counterexamples.is_empty(),
        "a fixed combination has a top-digit exponent that is not a power of p",
        witness,
    ))
}

/// Fixed combinations on `B(n)` under `movers`, with the number of `a`-part
/// monomials that have a nonzero top exponent and a nonzero smaller one.
fn smaller_digit_dependence(
    ctx: &Ctx,
    level: &LevelDomain,
    n: u32,
    movers: &[Mat2],
    counterexamples: &mut Vec<Value>,
) -> Result<(usize, usize), CheckError> {
    let fixed = ctx.oracle().fixed_combinations(&level.domain, movers)?;
    let mut offending = 0;
    for combo in &fixed {
        for exponents in a_part_monomials(ctx, level, n, combo)? {
            let (lower, top) = exponents.split_at(n as usize - 1);
            if top[0] != 0 && lower.iter().any(|&e| e != 0) {
                offending += 1;
                if counterexamples.len() < 3 {
                    counterexamples.push(json!({ "n": n, "monomial_exponents": exponents }));
                }
            }
        }
    }
    Ok((fixed.len(), offending))
}

/// Solver cross-check: for `f` on `B(n)` fixed by `u(-pi^j)`, `j < n`, the
/// part of `a_mu` with nonzero `mu_{n-1}`-exponent involves no smaller digit.
///
/// The witness also reruns the solver with `u(-[b] pi^j)` for `b` over an
/// `F_p`-basis, i.e. invariance under every digit translation.
pub fn independence_smaller_digits(ctx: &Ctx) -> CheckResult {
    let t = ctx.tree();
    let r = t.ring();
    let levels: Vec<u32> = cross_check_levels(ctx).into_iter().filter(|&n| n >= 2).collect();
    ctx.need(!levels.is_empty(), "needs a level n >= 2 within the digit-table bound")?;
    let mut cases = Vec::new();
    let mut counterexamples: Vec<Value> = Vec::new();
    for n in levels {
        let level = level_domain(ctx, n)?;
        let stated: Vec<Mat2> = (0..n as i32).map(|j| t.u(r.f_neg(&r.f_pi_pow(j)))).collect();
        let (fixed, offending) = smaller_digit_dependence(ctx, &level, n, &stated, &mut counterexamples)?;
        let mut translations = Vec::new();
        for j in 0..n as i32 {
            for b in ctx.k().fp_basis() {
                translations.push(t.u(r.f_neg(&r.f_shift(&t.teich(b), j))));
            }
        }
        let (fixed_all, offending_all) = smaller_digit_dependence(ctx, &level, n, &translations, &mut Vec::new())?;
        cases.push(json!({
            "n": n,
            "fixed_dimension": fixed,
            "offending_monomials": offending,
            "all_translations": { "fixed_dimension": fixed_all, "offending_monomials": offending_all },
        }));
    }
    let witness = json!({ "cases": cases, "counterexamples": counterexamples });
    Ok(Outcome::expect(counterexamples.is_empty(), "a fixed combination depends on a smaller digit", witness))
}

fn predicted_dimension(ctx: &Ctx, n: u32) -> usize {
    let f = ctx.config().f as usize;
    let n = n as usize;
    2 + f * n.saturating_sub(1) + f * n.saturating_sub(2)
}

/// The invariant classes with representatives on `B(n)` are exactly the
/// span of the predicted basis vectors there.
pub fn basis_dimension(ctx: &Ctx) -> CheckResult {
    ctx.need(ctx.in_invariance_domain(), "needs q > 3 and ef > 1")?;
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 1..=ctx.radius() {
        let report = ctx.invariant_report(n)?;
        let expected = predicted_dimension(ctx, n);
        let predicted_pass = report.predicted.iter().all(|c| c.passes());
        let holds = report.dim_quotient_invariants == expected
            && report.predicted.len() == expected
            && report.predicted_rank == expected
            && predicted_pass
            && report.ideal_cap_inside_solutions;
        ok &= holds;
        rows.push(json!({
            "n": n,
            "dim_quotient_invariants": report.dim_quotient_invariants,
            "predicted": expected,
            "predicted_rank": report.predicted_rank,
            "predicted_individually_pass": predicted_pass,
            "ideal_cap_inside_solutions": report.ideal_cap_inside_solutions,
            "generators": report.generators,
        }));
    }
    Ok(Outcome::expect(ok, "the solver's invariants differ from the predicted basis", json!({ "radii": rows })))
}

/// The invariant dimension grows strictly with the radius from `n = 1`.
pub fn invariants_grow(ctx: &Ctx) -> CheckResult {
    ctx.need(ctx.in_invariance_domain(), "needs q > 3 and ef > 1")?;
    ctx.need_ball(2, "two radii")?;
    let dims = (1..=ctx.radius())
        .map(|n| Ok(ctx.invariant_report(n)?.dim_quotient_invariants))
        .collect::<Result<Vec<_>, CheckError>>()?;
    let strictly = dims.windows(2).all(|w| w[1] > w[0]);
    let witness = json!({ "from_radius": 1, "dims": dims });
    Ok(Outcome::expect(strictly, "the invariant dimension stalls", witness))
}
