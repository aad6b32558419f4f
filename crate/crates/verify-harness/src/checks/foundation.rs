//! Field, ring and coset-table checks.

use gf_core::{interpolate, point_of_index, FqElem, MPoly};
use induced_modules::SpaceTag;
use rand::Rng;
use serde_json::json;
use tree_cosets::{EdgeLabel, PropCosetLabel, Subgroup, TreeError};

use crate::config::RawConfig;
use crate::context::{CheckResult, Ctx, Outcome};

/// Largest number of points `q^n` interpolated per function.
const MAX_POINTS: usize = 729;

pub fn functions_are_polynomials(ctx: &Ctx) -> CheckResult {
    let k = ctx.k();
    let q = ctx.q() as usize;
    let mut rng = ctx.rng("lemma_functions_are_polynomials");
    let mut functions = 0;
    let mut counterexample = None;
    for n in 1..=3usize {
        let points = q.pow(n as u32);
        if points > MAX_POINTS {
            break;
        }
        for _ in 0..ctx.samples() {
            // random function: interpolate and evaluate back
            let values: Vec<FqElem> = (0..points).map(|_| ctx.random_elem(&mut rng)).collect();
            let poly = interpolate(k, n, &values)?;
            let reduced = (0..n).all(|i| poly.degree_in(i) < ctx.q());
            let mut agrees = true;
            for (idx, &value) in values.iter().enumerate() {
                agrees &= poly.eval(k, &point_of_index(k, n, idx))? == value;
            }
            // random reduced polynomial: evaluate and interpolate back
            let terms: Vec<(Vec<u32>, FqElem)> = (0..rng.gen_range(0..6))
                .map(|_| ((0..n).map(|_| rng.gen_range(0..ctx.q())).collect(), ctx.random_elem(&mut rng)))
                .collect();
            let original = MPoly::from_terms(k, n, terms)?;
            let table = (0..points).map(|idx| original.eval(k, &point_of_index(k, n, idx))).collect::<Result<Vec<_>, _>>()?;
            let recovered = interpolate(k, n, &table)? == original;
            functions += 1;
            if !(reduced && agrees && recovered) && counterexample.is_none() {
                counterexample = Some(json!({ "n": n, "reduced": reduced, "agrees": agrees, "recovered": recovered }));
            }
        }
    }
    let witness = json!({ "functions": functions, "counterexample": counterexample });
    Ok(Outcome::expect(counterexample.is_none(), "a function is not matched by its reduced polynomial", witness))
}

pub fn codec_roundtrip(ctx: &Ctx) -> CheckResult {
    let k = ctx.k();
    let ind = ctx.ind();
    let ball = ind.ball();
    let mut failures = Vec::new();
    for code in 0..ctx.q() {
        let x = k.elem(code)?;
        if x.code() != code || k.from_coeffs(&k.coeffs(x))? != x {
            failures.push(format!("field code {code}"));
        }
    }
    for (pos, edge) in ball.edges().iter().enumerate() {
        let parsed = EdgeLabel::parse(&edge.to_string(), k).map_err(|e| crate::context::CheckError::Harness(e.0))?;
        if &parsed != edge || ball.edge_pos(&parsed) != Some(pos) {
            failures.push(format!("edge {edge}"));
        }
    }
    let prop_keys = ind.dim_within(SpaceTag::IndI1Z(0), ctx.radius().min(2));
    for index in 0..prop_keys {
        let label = ball.prop_label(index);
        let parsed =
            PropCosetLabel::parse(&label.to_string(), k).map_err(|e| crate::context::CheckError::Harness(e.0))?;
        if parsed != label || ball.prop_index(ball.edge_pos(&parsed.edge).unwrap_or(usize::MAX), parsed.fiber) != index {
            failures.push(format!("pro-p coset {label}"));
        }
    }
    let config = ctx.config();
    let reparsed = RawConfig::parse(&config.to_kv()).and_then(RawConfig::resolve);
    if reparsed.as_ref() != Ok(config) {
        failures.push("run configuration".to_string());
    }
    let witness = json!({
        "field_codes": ctx.q(),
        "edges": ball.len(),
        "pro_p_cosets": prop_keys,
        "failures": failures,
    });
    Ok(Outcome::expect(failures.is_empty(), "a codec does not round-trip", witness))
}

/// `C(p, j) / p mod p`.
fn binomial_over_p(p: u32, j: u32) -> u64 {
    let mut c: u128 = 1;
    for i in 0..j {
        c = c * u128::from(p - i) / u128::from(i + 1);
    }
    ((c / u128::from(p)) % u128::from(p)) as u64
}

/// Digit 1 of `[x] + [y]` from the Witt vector addition polynomial:
/// `-sum_{0<j<p} (C(p,j)/p) x^{jq/p} y^{(p-j)q/p}` when `pi = p`, and `0`
/// when `p` is divisible by `pi^2`.
fn witt_carry(ctx: &Ctx, x: FqElem, y: FqElem) -> FqElem {
    let k = ctx.k();
    if ctx.config().e > 1 {
        return FqElem::ZERO;
    }
    let p = ctx.config().p;
    let root = u64::from(ctx.q() / p);
    let mut sum = FqElem::ZERO;
    for j in 1..p {
        let c = k.from_int(binomial_over_p(p, j) as i64);
        let term = k.mul(k.pow(x, u64::from(j) * root), k.pow(y, u64::from(p - j) * root));
        sum = k.add(sum, k.mul(c, term));
    }
    k.neg(sum)
}

pub fn carry_oracle(ctx: &Ctx) -> CheckResult {
    let k = ctx.k();
    let ring = ctx.tree().ring();
    let mut mismatches = Vec::new();
    for x in k.elements() {
        for y in k.elements() {
            let digits = ring.digits_of(&ring.add(&ring.teich(x), &ring.teich(y)));
            let first = digits.first().copied().unwrap_or(FqElem::ZERO);
            let carry = ring.carry_z(x, y);
            if first != k.add(x, y) || carry != witt_carry(ctx, x, y) {
                mismatches.push(json!({ "x": x.code(), "y": y.code(), "carry": carry.code() }));
            }
        }
    }
    let pairs = ctx.q() * ctx.q();
    let witness = json!({ "pairs": pairs, "mismatches": mismatches });
    Ok(Outcome::expect(mismatches.is_empty(), "carry differs from the Witt polynomial", witness))
}

/// `(1 + pi a, b; pi c, 1 + pi d)(pi [l]; 0 1) = (pi [l + b_0]; 0 1) i` with
/// `i` in `I(1)`.
pub fn identity_first_digit_carry(ctx: &Ctx) -> CheckResult {
    let t = ctx.tree();
    let r = t.ring();
    let k = ctx.k();
    let mut rng = ctx.rng("identity_first_digit_carry");
    let trials = ctx.samples().max(200);
    let mut failures = 0;
    for _ in 0..trials {
        let g = ctx.random_i1(&mut rng);
        let l = ctx.random_elem(&mut rng);
        let b0 = r.f_digits(&g.b, 0, 1)?[0];
        let left = t.mul(&g, &t.mat(r.f_pi_pow(1), t.teich(l), r.f_zero(), r.f_one()));
        let shifted = t.mat(r.f_pi_pow(1), t.teich(k.add(l, b0)), r.f_zero(), r.f_one());
        let i = t.mul(&t.inv(&shifted)?, &left);
        if !t.is_in(&i, Subgroup::I1)? || !t.eq(&t.mul(&shifted, &i), &left) {
            failures += 1;
        }
    }
    let witness = json!({ "trials": trials, "failures": failures });
    Ok(Outcome::expect(failures == 0, "a quotient matrix leaves I(1)", witness))
}

pub fn witness_soundness(ctx: &Ctx) -> CheckResult {
    let t = ctx.tree();
    let r = t.ring();
    let ball = ctx.ind().ball();
    let mut rng = ctx.rng("infra_witness_soundness");
    let mut letters = vec![t.beta(), t.w(), t.n_s(), t.alpha(), t.inv(&t.alpha())?];
    letters.extend(t.i1_generators(2));
    for _ in 0..4 {
        letters.push(t.u(t.teich(ctx.random_elem(&mut rng))));
        letters.push(ctx.random_iwahori(&mut rng));
    }
    let start = ball.count_within(ctx.radius().saturating_sub(1));
    let target = ctx.samples().max(200);
    let (mut landed, mut tried, mut failures) = (0usize, 0usize, Vec::new());
    while landed < target && tried < 50 * target {
        tried += 1;
        let mut g = *ball.rep(rng.gen_range(0..start));
        for _ in 0..rng.gen_range(0..=4) {
            g = t.mul(&letters[rng.gen_range(0..letters.len())], &g);
        }
        let (pos, w) = match ball.reduce_edge(&g) {
            Ok(found) => found,
            Err(TreeError::OutOfBall(..)) => continue,
            Err(e) => return Err(e.into()),
        };
        landed += 1;
        let mut sound = t.eq(&t.mul(ball.rep(pos), &w.matrix), &g) && t.is_in(&w.matrix, Subgroup::IZ)?;
        let pro_p = ball.reduce_prop(&g)?;
        let label = PropCosetLabel { edge: ball.edge(pos).clone(), fiber: pro_p.fiber };
        sound &= pro_p.edge == pos
            && t.eq(&t.mul(&t.prop_rep(&label), &pro_p.witness.matrix), &g)
            && t.is_in(&pro_p.witness.matrix, Subgroup::I1Z)?;
        // right invariance under IZ
        let z = t.scalar(r.f_pi_pow(rng.gen_range(-1..2)));
        let moved = t.mul(&g, &t.mul(&z, &ctx.random_iwahori(&mut rng)));
        sound &= ball.reduce_edge(&moved)?.0 == pos;
        if !sound && failures.len() < 5 {
            failures.push(ball.edge(pos).to_string());
        }
    }
    let witness = json!({ "words": landed, "tried": tried, "failures": failures });
    if landed < target {
        return Ok(Outcome::fail("too few random words land in the ball", witness));
    }
    Ok(Outcome::expect(failures.is_empty(), "a witness fails its membership predicate", witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_over_p() {
        assert_eq!(binomial_over_p(2, 1), 1);
        assert_eq!((1..3).map(|j| binomial_over_p(3, j)).collect::<Vec<_>>(), vec![1, 1]);
        // C(5,2)/5 = 2
        assert_eq!(binomial_over_p(5, 2), 2);
        assert_eq!(binomial_over_p(7, 3), 5);
    }
}
