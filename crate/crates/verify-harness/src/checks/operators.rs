//! Iwahori and pro-p Hecke operators: relations, image and kernel
//! containments, the comparison between the two inductions.

use gf_core::{FqElem, HChar};
use induced_modules::{FormalSum, IwahoriOp, PropOp, SpaceTag};
use quotient_oracle::subspace::sparse_of;
use quotient_oracle::{OracleError, Subspace};
use rand::Rng;
use serde_json::json;
use tree_cosets::VertexLabel;

use crate::context::{CheckError, CheckResult, Ctx, Outcome};

fn op(ctx: &Ctx, which: IwahoriOp, v: &FormalSum) -> Result<FormalSum, CheckError> {
    Ok(ctx.ind().iwahori_op(which, v)?)
}

/// `(T10 + Tm10) v`.
fn sum_op(ctx: &Ctx, v: &FormalSum) -> Result<FormalSum, OracleError> {
    let ind = ctx.ind();
    Ok(ind.iwahori_op(IwahoriOp::T10, v)?.add(ctx.k(), &ind.iwahori_op(IwahoriOp::Tm10, v)?)?)
}

/// Radius of the deltas on which a composite of three operators stays in
/// the ball.
fn operator_radius(ctx: &Ctx) -> Result<u32, CheckError> {
    ctx.need_ball(2, "three-operator composites")?;
    Ok((ctx.radius() - 2).min(2))
}

pub fn iwahori_relations(ctx: &Ctx) -> CheckResult {
    use IwahoriOp::*;
    let n = operator_radius(ctx)?;
    let ind = ctx.ind();
    let k = ctx.k();
    let deltas = ind.dim_within(ind.iz(), n);
    let mut broken = Vec::new();
    for key in 0..deltas {
        let v = FormalSum::delta(ind.iz(), key);
        let t10 = op(ctx, T10, &v)?;
        let t12 = op(ctx, T12, &v)?;
        let relations = [
            ("T10^2 = Id", op(ctx, T10, &t10)? == v),
            ("T12 T10 T12 = -T12", op(ctx, T12, &op(ctx, T10, &t12)?)? == t12.neg(k)),
            ("Tm10 = T10 T12 T10", op(ctx, Tm10, &v)? == op(ctx, T10, &op(ctx, T12, &t10)?)?),
        ];
        for (name, holds) in relations {
            if !holds && broken.len() < 5 {
                broken.push(json!({ "relation": name, "delta": ind.key_label(ind.iz(), key) }));
            }
        }
    }
    let witness = json!({ "radius": n, "deltas": deltas, "broken": broken });
    Ok(Outcome::expect(broken.is_empty(), "a relation fails on a delta", witness))
}

/// Both parts: `Im T12 = Ker(T10 + Tm10)` and `Ker T12 = Im(T10 + Tm10)`,
/// as composite vanishing on deltas and rank equalities on the ball.
pub fn l1_image_kernel(ctx: &Ctx) -> CheckResult {
    let n = operator_radius(ctx)?;
    let oracle = ctx.oracle();
    let ind = ctx.ind();
    let k = ctx.k();
    let tag = ind.iz();
    let deltas = ind.dim_within(tag, n);
    let ambient = ind.dim(tag);
    let t12 = |v: &FormalSum| -> Result<FormalSum, OracleError> { Ok(ind.iwahori_op(IwahoriOp::T12, v)?) };

    let mut t12_images = Vec::with_capacity(deltas);
    let mut sum_images = Vec::with_capacity(deltas);
    let mut composites_vanish = true;
    for key in 0..deltas {
        let v = FormalSum::delta(tag, key);
        let a = t12(&v)?;
        let b = sum_op(ctx, &v)?;
        composites_vanish &= sum_op(ctx, &a)?.is_zero() && t12(&b)?.is_zero();
        t12_images.push(sparse_of(&a));
        sum_images.push(sparse_of(&b));
    }
    let image_t12 = Subspace::span(k, ambient, &t12_images)?;
    let image_sum = Subspace::span(k, ambient, &sum_images)?;

    let kernel_sum = oracle.kernel_on_ball(tag, n, |v| sum_op(ctx, v))?;
    let kernel_t12 = oracle.kernel_on_ball(tag, n, t12)?;
    let mut first_contained = true;
    for row in kernel_sum.basis() {
        first_contained &= image_t12.contains(row)?;
    }
    let mut second_contained = true;
    for row in kernel_t12.basis() {
        second_contained &= image_sum.contains(row)?;
    }
    let first_ranks = (kernel_sum.rank(), image_t12.rank_below(deltas));
    let second_ranks = (kernel_t12.rank(), image_sum.rank_below(deltas));
    let ok = composites_vanish
        && first_contained
        && second_contained
        && first_ranks.0 == first_ranks.1
        && second_ranks.0 == second_ranks.1;
    let witness = json!({
        "radius": n,
        "deltas": deltas,
        "composites_vanish": composites_vanish,
        "ker_sum_in_im_t12": first_contained,
        "ker_t12_in_im_sum": second_contained,
        "rank_ker_sum_vs_im_t12": [first_ranks.0, first_ranks.1],
        "rank_ker_t12_vs_im_sum": [second_ranks.0, second_ranks.1],
    });
    Ok(Outcome::expect(ok, "an image/kernel equality fails on the ball", witness))
}

/// Necessary condition for `Im T`: a function on a sphere in the image is
/// constant on every set of siblings.
pub fn image_t_constant_on_siblings(ctx: &Ctx) -> CheckResult {
    let ind = ctx.ind();
    let k = ctx.k();
    let ball = ind.ball();
    let oracle = ctx.oracle();
    let mut rng = ctx.rng("lemma_image_t_constant_on_siblings");
    let mut tested = 0;
    let mut members = 0;
    let mut violations = Vec::new();
    for n in 1..=ctx.radius() {
        let sphere: Vec<&VertexLabel> = ball.vertices().iter().filter(|v| v.distance() == n).collect();
        let parents: Vec<VertexLabel> = {
            let mut p: Vec<VertexLabel> = sphere.iter().filter_map(|v| v.parent()).collect();
            p.sort();
            p.dedup();
            p
        };
        for trial in 0..ctx.samples().min(40) {
            // even trials: a value per parent (sibling-constant), odd: per vertex
            let per_parent: Vec<FqElem> = parents.iter().map(|_| ctx.random_elem(&mut rng)).collect();
            let mut f = FormalSum::zero(SpaceTag::IndKZ);
            for v in &sphere {
                let c = if trial % 2 == 0 {
                    let parent = v.parent().expect("positive distance");
                    per_parent[parents.binary_search(&parent).expect("listed")]
                } else {
                    ctx.random_elem(&mut rng)
                };
                f.add_term(k, ball.vertex_pos(v).expect("sphere lies in the ball"), c);
            }
            if f.is_zero() {
                continue;
            }
            tested += 1;
            if oracle.decide_im_t(&f)?.is_member() {
                members += 1;
                let constant = sphere.iter().all(|v| {
                    sphere
                        .iter()
                        .filter(|w| w.parent() == v.parent())
                        .all(|w| f.coeff(ball.vertex_pos(w).unwrap_or(0)) == f.coeff(ball.vertex_pos(v).unwrap_or(0)))
                });
                if !constant && violations.len() < 3 {
                    violations.push(ind.dump(&f));
                }
            }
        }
    }
    let witness = json!({ "functions": tested, "members": members, "violations": violations });
    Ok(Outcome::expect(violations.is_empty(), "a member of Im T varies between siblings", witness))
}

/// `[w beta]` is nonzero in the quotient and the operator
/// `sum_l (1 0; [l] 1)` separates `[id]` from `[beta]`, which pins every
/// endomorphism to a scalar.
pub fn endo_algebra_scalars(ctx: &Ctx) -> CheckResult {
    ctx.need_ball(2, "the lower unipotent sum")?;
    let ind = ctx.ind();
    let t = ctx.tree();
    let k = ctx.k();
    let tag = ind.iz();
    let w = ind.delta_at(tag, &t.w())?;
    let w_beta = ind.delta_at(tag, &t.mul(&t.w(), &t.beta()))?;
    let w_beta_nonzero = ctx.provably_outside_ideal(&w_beta)?;

    let alpha_inv = t.inv(&t.alpha())?;
    let lhs = op(ctx, IwahoriOp::T12, &ind.delta_at(tag, &alpha_inv)?)?;
    let mut lower = FormalSum::zero(tag);
    let mut lower_beta = FormalSum::zero(tag);
    let mut via_w = FormalSum::zero(tag);
    for l in k.elements() {
        let low = t.l(t.teich(l));
        lower = lower.add(k, &ind.delta_at(tag, &low)?)?;
        lower_beta = lower_beta.add(k, &ind.delta_at(tag, &t.mul(&low, &t.beta()))?)?;
        via_w = via_w.add(k, &ind.delta_at(tag, &t.mul(&t.w(), &ind.g0(&[l])))?)?;
    }
    let t12_alpha_inv = lhs == lower;
    let lower_beta_is_w_sum = lower_beta == via_w && op(ctx, IwahoriOp::Tm10, &w)? == via_w;
    let congruent = ctx.equal_in_quotient(&via_w, &w_beta.neg(k))?;
    // the lower unipotent sum kills [id] and not [beta] in the quotient
    let kills_id = ctx.in_ideal(&lower)?;
    let keeps_beta = ctx.provably_outside_ideal(&lower_beta)?;
    let ok = w_beta_nonzero && t12_alpha_inv && lower_beta_is_w_sum && congruent && kills_id && keeps_beta;
    let witness = json!({
        "w_beta_complete_non_member": w_beta_nonzero,
        "t12_alpha_inverse_exact": t12_alpha_inv,
        "lower_beta_equals_tm10_w": lower_beta_is_w_sum,
        "tm10_w_congruent_to_minus_w_beta": congruent,
        "lower_sum_kills_id": kills_id,
        "lower_sum_keeps_beta": keeps_beta,
    });
    Ok(Outcome::expect(ok, "a step of the scalar argument fails", witness))
}

/// The character components `ind_IZ(a^{r-s} d^s) -> ind_I1Z(eta^r)` are
/// `IZ`-equivariant and sum to the identity on `[id]`.
pub fn direct_sum_decomposition(ctx: &Ctx) -> CheckResult {
    ctx.need_ball(2, "sampled vectors")?;
    let ind = ctx.ind();
    let t = ctx.tree();
    let k = ctx.k();
    let order = i64::from(ctx.q() - 1);
    let mut rng = ctx.rng("lemma_direct_sum_decomposition");
    let radius = (ctx.radius() - 1).min(2);
    let mut equivariance_failures = 0;
    for _ in 0..ctx.samples() {
        let r = rng.gen_range(0..order);
        let s = rng.gen_range(0..order);
        let chi = HChar::new(k, r - s, s);
        let v = ctx.random_iz_vector(&mut rng, radius, 3).retag(SpaceTag::IndIZ(chi));
        let z = t.scalar(t.ring().f_pi_pow(rng.gen_range(-1..2)));
        let i = t.mul(&z, &ctx.random_iwahori(&mut rng));
        let lhs = ind.embed_char_component(r as u32, &ind.act_left(&i, &v)?)?;
        let rhs = ind.act_left(&i, &ind.embed_char_component(r as u32, &v)?)?;
        let back = ind.transfer_to_iz(chi, &lhs)? == ind.act_left(&i, &v)?;
        if lhs != rhs || !back {
            equivariance_failures += 1;
        }
    }
    let id_iz = ctx.id_class();
    let mut sums_to_identity = true;
    for r in 0..order {
        let tag = SpaceTag::IndI1Z(r as u32);
        let mut total = FormalSum::zero(tag);
        for s in 0..order {
            let chi = HChar::new(k, r - s, s);
            total = total.add(k, &ind.embed_char_component(r as u32, &id_iz.retag(SpaceTag::IndIZ(chi)))?)?;
        }
        sums_to_identity &= total == FormalSum::delta(tag, ind.ball().prop_index(0, FqElem::ONE));
    }
    let ok = equivariance_failures == 0 && sums_to_identity;
    let witness = json!({
        "samples": ctx.samples(),
        "equivariance_failures": equivariance_failures,
        "components_sum_to_identity": sums_to_identity,
    });
    Ok(Outcome::expect(ok, "the decomposition is not equivariant or not complete", witness))
}

/// On every `B(1)` delta of `ind_I1Z 1`: the idempotents sum to the
/// identity, and transfer sends `T_ns`, `T_beta`, `e_chi` to `T12 T10`,
/// `T10` and `0` (`chi` nontrivial).
pub fn comparison_iwahori_pro_p(ctx: &Ctx) -> CheckResult {
    ctx.need_ball(3, "T12 T10 of B(1) deltas")?;
    let ind = ctx.ind();
    let k = ctx.k();
    let triv = HChar::trivial(k);
    let tag = SpaceTag::IndI1Z(0);
    let deltas = ind.dim_within(tag, 1);
    let mut failures = Vec::new();
    for key in 0..deltas {
        let v = FormalSum::delta(tag, key);
        let mut total = FormalSum::zero(tag);
        let mut others_vanish = true;
        for (chi, image) in ind.prop_idempotents(&v)? {
            total = total.add(k, &image)?;
            if !chi.is_trivial() {
                others_vanish &= ind.transfer_to_iz(triv, &image)?.is_zero();
            }
        }
        let down = ind.transfer_to_iz(triv, &v)?;
        let ns = ind.transfer_to_iz(triv, &ind.prop_hecke(PropOp::Tns, &v)?)?;
        let tb = ind.transfer_to_iz(triv, &ind.prop_hecke(PropOp::Tbeta, &v)?)?;
        let checks = [
            ("idempotents sum to identity", total == v),
            ("T_ns -> T12 T10", ns == op(ctx, IwahoriOp::T12, &op(ctx, IwahoriOp::T10, &down)?)?),
            ("T_beta -> T10", tb == op(ctx, IwahoriOp::T10, &down)?),
            ("nontrivial e_chi -> 0", others_vanish),
        ];
        for (name, holds) in checks {
            if !holds && failures.len() < 5 {
                failures.push(json!({ "property": name, "delta": ind.key_label(tag, key) }));
            }
        }
    }
    let witness = json!({ "deltas": deltas, "failures": failures });
    Ok(Outcome::expect(failures.is_empty(), "the comparison fails on a delta", witness))
}
