//! The reverse functor applied to the invariants, at ball level.

use gf_core::HChar;
use induced_modules::{FormalSum, PropOp, SpaceTag};
use quotient_oracle::SpanFamily;
use serde_json::json;

use crate::context::{CheckResult, Ctx, Outcome};

/// Cutoff at which the two quotient ranks are compared.
const RANK_CUTOFF: u32 = 2;

/// The generators of the right ideal, applied to `B(1)` deltas of
/// `ind_I(1)Z 1`, transfer into the ideal of `ind_IZ 1`; and the transferred
/// quotient has the rank of the Iwahori quotient on `B(2)`.
pub fn summand_reverse_functor(ctx: &Ctx) -> CheckResult {
    ctx.need_ball(RANK_CUTOFF + 2, "the pro-p span at cutoff 2")?;
    ctx.need(RANK_CUTOFF <= ctx.config().max_cutoff, "max_cutoff below 2")?;
    let k = ctx.k();
    let ind = ctx.ind();
    let oracle = ctx.oracle();
    let prop = SpaceTag::IndI1Z(0);
    let trivial = HChar::trivial(k);

    let mut generators = 0;
    let mut outside = Vec::new();
    for key in 0..ind.dim_within(prop, 1) {
        let e = FormalSum::delta(prop, key);
        let ns = ind.prop_hecke(PropOp::Tns, &e)?;
        let mut images = vec![("T_ns", ns.clone()), ("T_beta (T_ns + 1)", ind.prop_hecke(PropOp::Tbeta, &ns.add(k, &e)?)?)];
        for (chi, image) in ind.prop_idempotents(&e)? {
            if !chi.is_trivial() {
                images.push(("e_chi", image));
            }
        }
        for (name, image) in images {
            generators += 1;
            let transferred = ind.transfer_to_iz(trivial, &image)?;
            let cert = oracle.decide_ideal(&transferred)?;
            if !cert.is_member() && outside.len() < 5 {
                outside.push(format!("{name} on {}", ind.key_label(prop, key)));
            }
        }
    }

    let edges = ind.dim_within(ind.iz(), RANK_CUTOFF);
    let prop_keys = ind.dim_within(prop, RANK_CUTOFF);
    let pro_p_span = oracle.family_span(SpanFamily::ProPIdeal { r: 0 }, RANK_CUTOFF)?;
    let iwahori_span = oracle.family_span(SpanFamily::IwahoriIdeal, RANK_CUTOFF)?;
    let pro_p_rank = prop_keys - pro_p_span.rank_below(prop_keys);
    let iwahori_rank = edges - iwahori_span.rank_below(edges);
    let complete_rank = edges - oracle.ideal_cap(RANK_CUTOFF)?.rank();
    let ranks_agree = pro_p_rank == iwahori_rank && iwahori_rank == complete_rank;

    let witness = json!({
        "generators": generators,
        "not_in_ideal": outside,
        "cutoff": RANK_CUTOFF,
        "pro_p_quotient_rank": pro_p_rank,
        "iwahori_quotient_rank": iwahori_rank,
        "complete_quotient_rank": complete_rank,
    });
    Ok(Outcome::expect(outside.is_empty() && ranks_agree, "the transferred quotient differs", witness))
}
