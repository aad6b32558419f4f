//! Coset reduction against the combinatorial tree: ball counts from the
//! `(q+1)`-regular tree, witness soundness on random words, right invariance
//! and faithfulness of the finite quotient of `I(1)`.

use gf_core::FqElem;
use local_ring::{FElem, LocalParams, LocalRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tree_cosets::{BallIndex, EdgeLabel, Family, Mat2, PropCosetLabel, Subgroup, Tree, TreeError, VertexLabel};

const MODELS: &[(u32, u32, u32)] = &[(2, 1, 2), (5, 2, 1), (3, 2, 1), (2, 1, 3), (3, 1, 2)];

fn tree(p: u32, e: u32, f: u32, prec: u32) -> Tree {
    Tree::new(LocalRing::new(LocalParams::new(p, e, f, prec).unwrap()).unwrap()).checked(true)
}

// vertices within distance r, by breadth-first search on labels
fn bfs_count(k: &gf_core::FqField, r: u32) -> usize {
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![VertexLabel::root()];
    seen.insert(VertexLabel::root());
    for _ in 0..r {
        let mut next = Vec::new();
        for v in &frontier {
            for n in v.neighbours(k) {
                if seen.insert(n.clone()) {
                    next.push(n);
                }
            }
        }
        frontier = next;
    }
    seen.len()
}

#[test]
fn ball_counts_match_closed_forms_and_bfs() {
    for &(p, e, f) in MODELS {
        let t = tree(p, e, f, 7);
        let q = t.q() as usize;
        let k = t.ring().field().clone();
        for n in 0..=3u32 {
            if q.pow(n) > 800 {
                continue;
            }
            let b = BallIndex::new(&t, n).unwrap();
            let geo = |m: u32| -> usize { (1..=m).map(|i| q.pow(i)).sum() };
            let closed = 2 + 2 * geo(n) + 2 * geo(n.saturating_sub(1));
            assert_eq!(b.len(), closed, "q={q} N={n}");
            // every edge with both ends within n, in both orientations, plus the root edge
            let v = bfs_count(&k, n);
            assert_eq!(b.len(), if n == 0 { 2 } else { 2 * (v - 1) }, "q={q} N={n}");
            assert_eq!(b.vertices().len(), bfs_count(&k, n + 1));
            assert_eq!(b.count_within(n), b.len());
            if n == 1 {
                assert_eq!(v, 1 + (q + 1));
            }
        }
    }
    let t = tree(2, 1, 2, 7);
    assert_eq!(BallIndex::new(&t, 3).unwrap().len(), 210);
    let t = tree(5, 2, 1, 7);
    assert_eq!(BallIndex::new(&t, 3).unwrap().len(), 372);
    // q = 2: the root has three neighbours
    let k2 = gf_core::FqField::new(2, 1).unwrap();
    assert_eq!(VertexLabel::root().neighbours(&k2).len(), 3);
}

#[test]
fn ball_zero_is_identity_and_beta() {
    let t = tree(2, 1, 2, 6);
    let b = BallIndex::new(&t, 0).unwrap();
    assert_eq!(b.edges(), &[EdgeLabel::identity(), EdgeLabel::beta()]);
    assert_eq!(b.reduce_edge(&t.identity()).unwrap().0, 0);
    assert_eq!(b.reduce_edge(&t.beta()).unwrap().0, 1);
}

#[test]
fn canonical_representatives_reduce_to_themselves() {
    for &(p, e, f) in MODELS {
        let t = tree(p, e, f, 7);
        let radius = if t.q() > 5 { 2 } else { 3 };
        let b = BallIndex::new(&t, radius).unwrap();
        for (pos, label) in b.edges().iter().enumerate() {
            let (got, w) = b.reduce_edge(b.rep(pos)).unwrap();
            assert_eq!(got, pos, "{label}");
            assert!(t.eq(&w.matrix, &t.identity()));
            assert_eq!(t.edge_label(b.rep(pos)).unwrap(), *label);
            let (a, d) = (label.source(), label.target());
            assert!(a.neighbours(t.ring().field()).contains(&d));
        }
    }
}

fn rand_digits(rng: &mut ChaCha8Rng, t: &Tree, n: usize) -> Vec<FqElem> {
    let k = t.ring().field();
    (0..n).map(|_| k.elem(rng.gen_range(0..k.q())).unwrap()).collect()
}

fn rand_integral(rng: &mut ChaCha8Rng, t: &Tree, shift: i32) -> FElem {
    let d = rand_digits(rng, t, 5);
    t.ring().f_from_digits(&d, shift)
}

fn rand_unit(rng: &mut ChaCha8Rng, t: &Tree) -> FElem {
    let k = t.ring().field();
    let lead = k.elem(rng.gen_range(1..k.q())).unwrap();
    let r = t.ring();
    r.f_add(&t.teich(lead), &rand_integral(rng, t, 1))
}

fn rand_iz(rng: &mut ChaCha8Rng, t: &Tree) -> Mat2 {
    let r = t.ring();
    let i = t.mat(rand_unit(rng, t), rand_integral(rng, t, 0), rand_integral(rng, t, 1), rand_unit(rng, t));
    let z = r.f_mul(&r.f_pi_pow(rng.gen_range(-2..3)), &rand_unit(rng, t));
    t.scale(&i, &z)
}

fn rand_i1z(rng: &mut ChaCha8Rng, t: &Tree) -> Mat2 {
    let r = t.ring();
    let one_plus = |rng: &mut ChaCha8Rng| r.f_add(&r.f_one(), &rand_integral(rng, t, 1));
    let i = t.mat(one_plus(rng), rand_integral(rng, t, 0), rand_integral(rng, t, 1), one_plus(rng));
    let z = r.f_mul(&r.f_pi_pow(rng.gen_range(-2..3)), &rand_unit(rng, t));
    t.scale(&i, &z)
}

fn alphabet(rng: &mut ChaCha8Rng, t: &Tree) -> Vec<Mat2> {
    let r = t.ring();
    let mut out = vec![t.beta(), t.w(), t.n_s(), t.alpha(), t.inv(&t.alpha()).unwrap()];
    out.extend(t.i1_generators(3));
    for _ in 0..4 {
        let x = t.teich(rand_digits(rng, t, 1)[0]);
        out.push(t.u(x));
        let (a, d) = (rand_unit(rng, t), rand_unit(rng, t));
        out.push(t.diag(a, d));
    }
    out.push(t.scalar(r.f_pi_pow(1)));
    out
}

#[test]
fn witnesses_are_sound_on_random_words() {
    for &(p, e, f) in &MODELS[..3] {
        let t = tree(p, e, f, 7);
        let b = BallIndex::new(&t, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7 + u64::from(p * 10 + e));
        let letters = alphabet(&mut rng, &t);
        let start = b.count_within(1);
        let mut landed = 0;
        let mut tried = 0;
        while landed < 500 {
            tried += 1;
            assert!(tried < 20_000, "too few words land in B(3)");
            let len = rng.gen_range(0..=6);
            let mut g = *b.rep(rng.gen_range(0..start));
            for _ in 0..len {
                g = t.mul(&letters[rng.gen_range(0..letters.len())], &g);
            }
            match b.reduce_edge(&g) {
                Ok((pos, w)) => {
                    landed += 1;
                    assert!(t.eq(&t.mul(b.rep(pos), &w.matrix), &g));
                    assert!(t.is_in(&w.matrix, Subgroup::IZ).unwrap());
                    assert_eq!(&t.edge_label(&g).unwrap(), b.edge(pos));
                    let pr = b.reduce_prop(&g).unwrap();
                    let label = PropCosetLabel { edge: b.edge(pos).clone(), fiber: pr.fiber };
                    assert!(t.eq(&t.mul(&t.prop_rep(&label), &pr.witness.matrix), &g));
                    assert!(t.is_in(&pr.witness.matrix, Subgroup::I1Z).unwrap());
                }
                Err(TreeError::OutOfBall(..)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn reduction_is_right_invariant() {
    for &(p, e, f) in MODELS {
        let t = tree(p, e, f, 7);
        let b = BallIndex::new(&t, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(p + e + f));
        for pos in (0..b.len()).step_by(3) {
            let g = *b.rep(pos);
            let base = b.reduce_prop(&g).unwrap();
            for _ in 0..5 {
                let (got, _) = b.reduce_edge(&t.mul(&g, &rand_iz(&mut rng, &t))).unwrap();
                assert_eq!(got, pos);
                let pr = b.reduce_prop(&t.mul(&g, &rand_i1z(&mut rng, &t))).unwrap();
                assert_eq!((pr.edge, pr.fiber), (base.edge, base.fiber));
            }
        }
        // 50 samples on one edge
        let g = *b.rep(b.len() - 1);
        for _ in 0..50 {
            assert_eq!(b.reduce_edge(&t.mul(&g, &rand_iz(&mut rng, &t))).unwrap().0, b.len() - 1);
        }
    }
}

#[test]
fn deep_congruence_elements_act_trivially() {
    for &(p, e, f) in &MODELS[..3] {
        let n = 2;
        let t = tree(p, e, f, 8);
        let b = BallIndex::new(&t, n + 1).unwrap();
        let r = t.ring();
        for a in r.field().units() {
            let h = t.diag(r.f_add(&r.f_one(), &r.f_shift(&t.teich(a), n as i32 + 2)), r.f_one());
            for pos in 0..b.count_within(n) {
                let g = t.mul(&h, b.rep(pos));
                assert_eq!(b.reduce_edge(&g).unwrap().0, pos);
                assert_eq!(b.reduce_prop(&g).unwrap().fiber, FqElem::ONE);
            }
        }
    }
}

#[test]
fn reduction_examples() {
    let t = tree(2, 1, 2, 7);
    let r = t.ring().clone();
    let k = r.field().clone();
    let b = BallIndex::new(&t, 3).unwrap();
    for lam in k.units() {
        let pr = b.reduce_prop(&t.diag(r.f_one(), t.teich(lam))).unwrap();
        assert_eq!((pr.edge, pr.fiber, pr.nu), (0, lam, FqElem::ONE));
        for l1 in k.units() {
            let pr = b.reduce_prop(&t.diag(t.teich(l1), t.teich(lam))).unwrap();
            assert_eq!((pr.edge, pr.fiber, pr.nu), (0, k.div(lam, l1).unwrap(), l1));
        }
    }
    // beta g^0_{n,lam} = g^1_{n,lam} w
    for pos in 0..b.len() {
        let e = b.edge(pos);
        if e.family != Family::G0 || e.level > 2 {
            continue;
        }
        let (got, _) = b.reduce_edge(&t.mul(&t.beta(), b.rep(pos))).unwrap();
        let want = EdgeLabel { family: Family::G1w, level: e.level, lam: e.lam.clone(), mu: FqElem::ZERO };
        assert_eq!(b.edge(got), &want);
    }
    // u(-pi^{n-1}) lies in the generated group: it is the inverse of u(pi^{n-1})
    let gens = t.i1_generators(3);
    for n in 1..=3 {
        let u = t.u(r.f_neg(&r.f_pi_pow(n - 1)));
        assert!(gens.iter().any(|g| t.eq(&t.inv(g).unwrap(), &u) || t.eq(g, &u)));
    }
    assert_eq!(gens.len(), 4 * 3 * 2);
    assert!(matches!(BallIndex::new(&t, 1).unwrap().reduce_edge(&t.vertex_rep(&VertexLabel { side: 0, level: 3, lam: vec![FqElem::ZERO; 3] })), Err(TreeError::OutOfBall(..))));
}
