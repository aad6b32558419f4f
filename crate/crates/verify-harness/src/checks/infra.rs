//! Properties of the harness and oracle rather than of the mathematics.

use induced_modules::{FormalSum, IwahoriOp};
use quotient_oracle::OracleError;
use rand::Rng;
use serde_json::json;

use crate::context::{CheckError, CheckResult, Ctx, Outcome};
use crate::report::Report;
use crate::runner::run_checks;

/// The complete decision agrees with the cutoff-bounded span search on
/// random vectors and on random combinations of the ideal generators.
pub fn route_agreement(ctx: &Ctx) -> CheckResult {
    let k = ctx.k();
    let ind = ctx.ind();
    let cutoff = ctx.config().max_cutoff.min(ctx.radius() - 1);
    let mut rng = ctx.rng("infra_route_agreement");
    let edges = ind.dim_within(ind.iz(), cutoff);
    let (mut members, mut non_members, mut found_by_search) = (0, 0, 0);
    let mut disagreements = Vec::new();
    for trial in 0..ctx.samples() {
        let v = if trial % 2 == 0 {
            let terms = rng.gen_range(1..4);
            ctx.random_iz_vector(&mut rng, cutoff, terms)
        } else {
            let mut v = FormalSum::zero(ind.iz());
            for _ in 0..rng.gen_range(1..4) {
                let e = FormalSum::delta(ind.iz(), rng.gen_range(0..edges));
                let generator = if rng.gen_bool(0.5) {
                    ind.iwahori_op(IwahoriOp::T12, &e)?
                } else {
                    ind.iwahori_op(IwahoriOp::T10, &e)?.add(k, &ind.iwahori_op(IwahoriOp::Tm10, &e)?)?
                };
                v = v.axpy(k, ctx.random_unit(&mut rng), &generator)?;
            }
            v
        };
        match ctx.oracle().decide_ideal_cross_checked(&v, cutoff) {
            Ok((complete, search)) => {
                if complete.is_member() {
                    members += 1;
                } else {
                    non_members += 1;
                }
                if search.is_member() {
                    found_by_search += 1;
                }
                // a combination of generators must be found by both routes
                if trial % 2 == 1 && !(complete.is_member() && search.is_member()) && disagreements.len() < 5 {
                    disagreements.push(ind.dump(&v));
                }
            }
            Err(OracleError::RouteDisagreement(dump)) if disagreements.len() < 5 => disagreements.push(dump),
            Err(OracleError::RouteDisagreement(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let witness = json!({
        "cutoff": cutoff,
        "vectors": ctx.samples(),
        "members": members,
        "non_members": non_members,
        "found_by_search": found_by_search,
        "disagreements": disagreements,
    });
    Ok(Outcome::expect(disagreements.is_empty(), "the decision routes disagree", witness))
}

/// Checks rerun by the determinism check: cheap, and touching every layer.
const DETERMINISM_PROBE: [&str; 4] =
    ["identity_first_digit_carry", "infra_route_agreement", "lemma_tnk_reduction", "lemma_eigenvalues_of_sn"];

/// Two runs of the same configuration give identical reports up to timing,
/// and the JSON report parses back to itself.
pub fn report_determinism(ctx: &Ctx) -> CheckResult {
    let config = ctx.config().clone().with_ball(ctx.radius().min(2)).map_err(|e| CheckError::Harness(e.to_string()))?;
    let config = config.with_checks(&DETERMINISM_PROBE);
    let run = || {
        run_checks(&config).map(|r| r.without_timing()).map_err(|e| CheckError::Harness(e.to_string()))
    };
    let (first, second) = (run()?, run()?);
    let json = first.to_json();
    let identical = json == second.to_json();
    let parsed: Report = serde_json::from_str(&json).map_err(|e| CheckError::Harness(e.to_string()))?;
    let round_trips = parsed.to_json() == json;
    let witness = json!({
        "checks": DETERMINISM_PROBE,
        "ball": config.ball,
        "identical": identical,
        "round_trips": round_trips,
        "bytes": json.len(),
    });
    Ok(Outcome::expect(identical && round_trips, "reports differ between identical runs", witness))
}
