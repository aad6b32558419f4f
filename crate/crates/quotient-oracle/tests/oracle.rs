use std::sync::{Arc, OnceLock};

use gf_core::{FqElem, HChar};
use induced_modules::{FamilyKind, FormalSum, Induced, IwahoriOp, PropOp, SpaceTag};
use local_ring::{LocalParams, LocalRing};
use quotient_oracle::subspace::sparse_of;
use quotient_oracle::{
    hecke_word_normal_form, Completeness, GeneratorFamily, Insertion, Oracle, OracleError, SpanFamily, Subspace,
    Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tree_cosets::{BallIndex, Mat2, Tree, VertexLabel};

fn build(p: u32, e: u32, f: u32, radius: u32) -> Oracle {
    let ring = LocalRing::new(LocalParams::new(p, e, f, 9).unwrap()).unwrap();
    let tree = Tree::new(ring).checked(true);
    Oracle::new(Induced::new(Arc::new(BallIndex::new(&tree, radius).unwrap()))).checked(true)
}

fn q4() -> &'static Oracle {
    static CELL: OnceLock<Oracle> = OnceLock::new();
    CELL.get_or_init(|| build(2, 1, 2, 4))
}

fn q5() -> &'static Oracle {
    static CELL: OnceLock<Oracle> = OnceLock::new();
    CELL.get_or_init(|| build(5, 2, 1, 4))
}

fn random_coeff(oracle: &Oracle, rng: &mut impl Rng) -> FqElem {
    oracle.field().elem(rng.gen_range(0..oracle.field().q())).unwrap()
}

fn random_vector(oracle: &Oracle, rng: &mut impl Rng, tag: SpaceTag, radius: u32, terms: usize) -> FormalSum {
    let ind = oracle.induced();
    let dim = ind.dim_within(tag, radius);
    let mut v = FormalSum::zero(tag);
    for _ in 0..terms {
        let c = random_coeff(oracle, rng);
        v.add_term(oracle.field(), rng.gen_range(0..dim), c);
    }
    v
}

fn beta_class(oracle: &Oracle) -> FormalSum {
    let ind = oracle.induced();
    ind.delta_at(ind.iz(), &ind.tree().beta()).unwrap()
}

fn id_class(oracle: &Oracle) -> FormalSum {
    FormalSum::delta(oracle.induced().iz(), 0)
}

#[test]
fn zero_is_a_member_with_empty_combination() {
    let oracle = q4();
    let cert = oracle.decide_im_t(&FormalSum::zero(SpaceTag::IndKZ)).unwrap();
    assert_eq!(cert.verdict, Verdict::Member);
    assert_eq!(cert.combination, Some(vec![]));
    assert_eq!(cert.completeness, Completeness::CompleteDecision);
}

#[test]
fn siblings_with_different_values_are_not_in_the_image() {
    for oracle in [q4(), q5()] {
        let k = oracle.field();
        let ind = oracle.induced();
        let parent = VertexLabel::root().child(k.one());
        let units: Vec<FqElem> = k.units().collect();
        let (a, b) = (parent.child(units[0]), parent.child(units[1]));
        let mut f = FormalSum::delta(SpaceTag::IndKZ, ind.ball().vertex_pos(&a).unwrap());
        f.add_term(k, ind.ball().vertex_pos(&b).unwrap(), k.generator());
        let cert = oracle.decide_im_t(&f).unwrap();
        assert!(cert.is_complete_non_member());
        // constancy on siblings is necessary only: T also hits the parent's parent
        let mut all = FormalSum::zero(SpaceTag::IndKZ);
        for x in k.elements() {
            all.add_term(k, ind.ball().vertex_pos(&parent.child(x)).unwrap(), k.one());
        }
        assert!(!oracle.decide_im_t(&all).unwrap().is_member());
    }
}

#[test]
fn images_of_t_recover_their_preimage() {
    for oracle in [q4(), q5()] {
        let ind = oracle.induced();
        let k = oracle.field();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pre = random_vector(oracle, &mut rng, SpaceTag::IndKZ, 2, 6);
            let image = ind.spherical_t(&pre).unwrap();
            let cert = oracle.decide_im_t(&image).unwrap();
            assert_eq!(cert.verdict, Verdict::Member);
            assert_eq!(cert.generators, GeneratorFamily::SphericalImage);
            let recovered = FormalSum::from_terms(k, SpaceTag::IndKZ, cert.combination.unwrap());
            assert_eq!(recovered, pre);
        }
    }
}

#[test]
fn ideal_decisions_of_standard_vectors() {
    for oracle in [q4(), q5()] {
        let ind = oracle.induced();
        let k = oracle.field();
        let t = ind.tree();
        assert!(oracle.decide_ideal(&ind.make_family(FamilyKind::S, 2, 0).unwrap()).unwrap().is_member());
        let w_beta = ind.delta_at(ind.iz(), &t.mul(&t.w(), &t.beta())).unwrap();
        assert!(oracle.decide_ideal(&w_beta).unwrap().is_complete_non_member());
        for kk in 0..k.q() - 1 {
            let t1 = ind.make_family(FamilyKind::T, 1, kk).unwrap();
            assert!(oracle.decide_ideal(&t1).unwrap().is_member(), "t_1^{kk}");
        }
        assert!(oracle.decide_ideal(&id_class(oracle)).unwrap().is_complete_non_member());
    }
}

#[test]
fn class_equalities_of_the_t_family() {
    for oracle in [q4(), q5()] {
        let ind = oracle.induced();
        let k = oracle.field();
        let top = k.q() - 1;
        let id = id_class(oracle);
        let beta = beta_class(oracle);
        let eq = |v: &FormalSum, w: &FormalSum| oracle.equal_in_quotient(v, w).unwrap().0;
        assert!(eq(&ind.make_family(FamilyKind::T, 1, top).unwrap(), &id.neg(k)));
        assert!(eq(&ind.make_family(FamilyKind::T, 2, top).unwrap(), &beta));
        assert!(eq(&ind.make_family(FamilyKind::S, 1, 0).unwrap(), &beta.neg(k)));
        assert!(!eq(&id, &beta));
    }
}

#[test]
fn transfer_and_span_routes_agree() {
    for oracle in [q4(), q5()] {
        let ind = oracle.induced();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut samples = vec![
            ind.make_family(FamilyKind::S, 2, 0).unwrap(),
            ind.make_family(FamilyKind::T, 1, 1).unwrap(),
            id_class(oracle),
        ];
        for _ in 0..10 {
            let e = random_vector(oracle, &mut rng, ind.iz(), 1, 3);
            samples.push(ind.iwahori_op(IwahoriOp::T12, &e).unwrap());
            samples.push(random_vector(oracle, &mut rng, ind.iz(), 2, 4));
        }
        for v in &samples {
            let (complete, search) = oracle.decide_ideal_cross_checked(v, 2).unwrap();
            assert_eq!(search.completeness, Completeness::CutoffBounded);
            if search.is_member() {
                assert!(complete.is_member());
            }
        }
    }
}

#[test]
fn span_search_is_monotone_in_the_cutoff() {
    let oracle = q4();
    let ind = oracle.induced();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let e = random_vector(oracle, &mut rng, ind.iz(), 1, 2);
        let v = ind.iwahori_op(IwahoriOp::T12, &e).unwrap();
        for m in 1..=3 {
            let cert = oracle.span_search(&v, SpanFamily::IwahoriIdeal, m).unwrap();
            assert!(cert.is_member(), "cutoff {m}");
        }
    }
    assert!(matches!(
        oracle.span_search(&id_class(oracle), SpanFamily::IwahoriIdeal, 4),
        Err(OracleError::CutoffExceeded { .. })
    ));
}

#[test]
fn span_search_reports_absence_as_cutoff_bounded() {
    let oracle = q4();
    let ind = oracle.induced();
    let span = oracle.family_span(SpanFamily::IwahoriIdeal, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut outside = None;
    while outside.is_none() {
        let v = random_vector(oracle, &mut rng, ind.iz(), 2, 5);
        let mut grown = span.clone();
        if grown.insert(&sparse_of(&v)).unwrap() == Insertion::Added {
            assert_eq!(grown.rank(), span.rank() + 1);
            outside = Some(v);
        }
    }
    let cert = oracle.span_search(&outside.unwrap(), SpanFamily::IwahoriIdeal, 3).unwrap();
    assert_eq!(cert.verdict, Verdict::NotFoundUpToCutoff);
    assert!(cert.combination.is_none());
}

#[test]
fn idempotent_images_are_found_among_idempotent_images() {
    let oracle = q4();
    let ind = oracle.induced();
    let k = oracle.field();
    let tag = SpaceTag::IndI1Z(0);
    let chi = HChar::new(k, 1, 2);
    let generators: Vec<FormalSum> = (0..ind.dim_within(tag, 1))
        .map(|key| ind.prop_hecke(PropOp::E(chi), &FormalSum::delta(tag, key)).unwrap())
        .collect();
    let g = ind.tree().mul(&ind.tree().beta(), &ind.tree().alpha());
    let v = ind.prop_hecke(PropOp::E(chi), &ind.delta_at(tag, &g).unwrap()).unwrap();
    let radius = ind.support_radius(&v);
    assert!(radius <= 1);
    let cert = oracle.span_search_in(&v, &generators, radius).unwrap();
    assert!(cert.is_member());
    assert_eq!(cert.generators, GeneratorFamily::Custom);
}

#[test]
fn lemma_l1_containments_on_b2() {
    for oracle in [q4(), q5()] {
        let ind = oracle.induced();
        let k = oracle.field();
        let tag = ind.iz();
        let sum_op = |v: &FormalSum| -> Result<FormalSum, OracleError> {
            let a = ind.iwahori_op(IwahoriOp::T10, v)?;
            Ok(a.add(k, &ind.iwahori_op(IwahoriOp::Tm10, v)?)?)
        };
        for key in 0..ind.dim_within(tag, 2) {
            let image = ind.iwahori_op(IwahoriOp::T12, &FormalSum::delta(tag, key)).unwrap();
            assert!(sum_op(&image).unwrap().is_zero());
        }
        let kernel = oracle.kernel_on_ball(tag, 2, sum_op).unwrap();
        let b2 = ind.dim_within(tag, 2);
        let images = Subspace::span(
            k,
            ind.dim(tag),
            &(0..ind.dim_within(tag, 2))
                .map(|key| sparse_of(&ind.iwahori_op(IwahoriOp::T12, &FormalSum::delta(tag, key)).unwrap()))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        for row in kernel.basis() {
            assert!(images.contains(row).unwrap());
        }
        assert_eq!(kernel.rank(), images.rank_below(b2));
        assert!(kernel.rank() > 0);
    }
}

#[test]
fn ideal_is_stable_under_translation() {
    let oracle = q4();
    let ind = oracle.induced();
    let t = ind.tree();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let movers: Vec<Mat2> = t.i1_generators(3).into_iter().chain([t.w(), t.beta(), t.alpha()]).collect();
    for _ in 0..20 {
        let e = random_vector(oracle, &mut rng, ind.iz(), 1, 2);
        let f = ind.iwahori_op(IwahoriOp::T12, &e).unwrap();
        assert!(oracle.decide_ideal(&f).unwrap().is_member());
        let g = &movers[rng.gen_range(0..movers.len())];
        assert!(oracle.decide_ideal(&ind.act_left(g, &f).unwrap()).unwrap().is_member());
    }
}

#[test]
fn ideal_cap_matches_membership() {
    let oracle = q5();
    let ind = oracle.induced();
    let cap = oracle.ideal_cap(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let v = random_vector(oracle, &mut rng, ind.iz(), 2, 3);
        assert_eq!(cap.contains(&sparse_of(&v)).unwrap(), oracle.decide_ideal(&v).unwrap().is_member());
    }
    for row in cap.basis() {
        let v = FormalSum::from_terms(oracle.field(), ind.iz(), row.iter().map(|(&key, &c)| (key, c)));
        assert!(oracle.decide_ideal(&v).unwrap().is_member());
    }
}

#[test]
fn invariant_dimensions_on_small_balls() {
    for (oracle, expected) in [(q4(), [2, 2, 4, 8]), (q5(), [2, 2, 3, 5])] {
        for (n, &dim) in expected.iter().enumerate() {
            let report = oracle.invariant_space(n as u32, n as u32 + 2).unwrap();
            assert_eq!(report.dim_quotient_invariants, dim, "q={} N={n}", oracle.field().q());
            assert!(report.ideal_cap_inside_solutions);
            assert!(report.predicted.iter().all(|c| c.passes()));
            assert_eq!(report.predicted_rank, report.predicted.len());
            assert_eq!(report.representatives.len(), dim);
        }
    }
}

#[test]
fn invariant_dimension_is_stable_in_the_generator_depth() {
    for oracle in [q4(), q5()] {
        let base = oracle.invariant_space(2, 4).unwrap();
        let deeper = oracle.invariant_space(2, 5).unwrap();
        assert_eq!(base.dim_quotient_invariants, deeper.dim_quotient_invariants);
        assert_eq!(base.dim_solutions, deeper.dim_solutions);
    }
}

#[test]
fn predicted_vectors_are_independent_on_b3() {
    let oracle = q4();
    let vectors = oracle.predicted_invariants(3).unwrap();
    assert_eq!(vectors.len(), 8);
    let sparse: Vec<_> = vectors.iter().map(|(_, v)| sparse_of(v)).collect();
    let span = Subspace::span(oracle.field(), oracle.induced().dim(oracle.induced().iz()), &sparse).unwrap();
    assert_eq!(span.rank(), 8);
}

#[test]
fn random_words_match_their_normal_forms() {
    for oracle in [q4(), q5()] {
        let k = oracle.field();
        let chars = HChar::all(k);
        let units: Vec<FqElem> = k.units().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..25 {
            let len = rng.gen_range(0..=6);
            let word: Vec<PropOp> = (0..len)
                .map(|_| match rng.gen_range(0..6) {
                    0 | 1 => PropOp::Tbeta,
                    2 | 3 => PropOp::Tns,
                    4 => PropOp::E(chars[rng.gen_range(0..chars.len())]),
                    _ => PropOp::Th(units[rng.gen_range(0..units.len())], units[rng.gen_range(0..units.len())]),
                })
                .collect();
            assert_eq!(oracle.validate_normal_form(&word).unwrap(), (true, true), "{word:?}");
        }
        assert!(hecke_word_normal_form(k, &[PropOp::Tbeta; 7], 6).is_err());
    }
}

#[test]
fn class_representatives_are_canonical() {
    let oracle = q4();
    let ind = oracle.induced();
    let k = oracle.field();
    let beta = beta_class(oracle);
    let t2 = ind.make_family(FamilyKind::T, 2, k.q() - 1).unwrap();
    assert_eq!(oracle.quotient_residual(&t2).unwrap(), beta);
    let s2 = ind.make_family(FamilyKind::S, 2, 0).unwrap();
    assert!(oracle.quotient_residual(&s2).unwrap().is_zero());
}
