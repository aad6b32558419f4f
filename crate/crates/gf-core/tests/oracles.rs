//! Independent oracles for the field layer: Conway polynomials recomputed by
//! brute-force search, axioms checked exhaustively, closed forms checked
//! against direct summation.

use gf_core::{conway_polynomial, interpolate, interpolate_fn, point_of_index, FqElem, FqField, HChar, MPoly};
use proptest::prelude::*;
use std::sync::OnceLock;

const SMALL: &[(u32, u32)] = &[(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2)];
const LARGE: &[(u32, u32)] = &[(2, 4), (5, 2), (3, 3), (7, 2), (2, 6), (3, 4)];

// Naive F_p[x]/(m) arithmetic, vectors of ascending coefficients.
fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let n = m.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (n..prod.len()).rev() {
        let c = prod[k];
        if c != 0 {
            for j in 0..=n {
                prod[k - n + j] = (prod[k - n + j] + (p - c) * m[j]) % p;
            }
        }
    }
    prod.truncate(n);
    prod.resize(n, 0);
    prod
}

fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let n = m.len() - 1;
    let mut acc = vec![0u64; n];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn x_of(n: usize) -> Vec<u64> {
    let mut x = vec![0u64; n];
    if n == 1 {
        x[0] = 0;
    } else {
        x[1] = 1;
    }
    x
}

fn brute_force_conway(p: u64, n: usize, lower: &dyn Fn(usize) -> Vec<u64>) -> Vec<u64> {
    let order = p.pow(n as u32) - 1;
    let primes = prime_factors(order);
    let total = p.pow(n as u32);
    // Lexicographic in (a_{n-1}, .., a_0) where the coefficient of x^i is (-1)^{n-i} a_i.
    for rank in 0..total {
        let mut a = vec![0u64; n];
        let mut r = rank;
        for i in 0..n {
            a[i] = r % p;
            r /= p;
        }
        let mut m = vec![0u64; n + 1];
        m[n] = 1;
        for i in 0..n {
            let ai = a[i];
            m[i] = if (n - i).is_multiple_of(2) { ai } else { (p - ai) % p };
        }
        if m[0] == 0 {
            continue;
        }
        // root is the class of x; for n = 1 it is -m[0]
        let root: Vec<u64> = if n == 1 { vec![(p - m[0]) % p] } else { x_of(n) };
        let one = {
            let mut v = vec![0u64; n];
            v[0] = 1;
            v
        };
        if powmod(&root, order, &m, p) != one {
            continue;
        }
        if primes.iter().any(|&r| powmod(&root, order / r, &m, p) == one) {
            continue;
        }
        let compatible = (1..n).filter(|d| n.is_multiple_of(*d)).all(|d| {
            let e = order / (p.pow(d as u32) - 1);
            let y = powmod(&root, e, &m, p);
            let c = lower(d);
            // evaluate c at y
            let mut acc = vec![0u64; n];
            for &coef in c.iter().rev() {
                acc = mulmod(&acc, &y, &m, p);
                acc[0] = (acc[0] + coef) % p;
            }
            acc.iter().all(|&v| v == 0)
        });
        if compatible {
            return m;
        }
    }
    panic!("no Conway polynomial found for ({p},{n})");
}

#[test]
fn conway_table_matches_brute_force_search() {
    let mut checked = 0;
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79] {
        let mut f = 1;
        while p.pow(f) <= 81 {
            let mut found: Vec<Vec<u64>> = vec![vec![]];
            for d in 1..=f as usize {
                let lower = |k: usize| found[k].clone();
                let c = brute_force_conway(u64::from(p), d, &lower);
                found.push(c);
            }
            let table: Vec<u64> = conway_polynomial(p, f).unwrap().iter().map(|&c| u64::from(c)).collect();
            assert_eq!(table, found[f as usize], "Conway polynomial for ({p},{f})");
            checked += 1;
            f += 1;
        }
    }
    assert_eq!(checked, 32);
}

#[test]
fn f4_and_f9_moduli() {
    assert_eq!(FqField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
    assert_eq!(FqField::new(3, 2).unwrap().modulus(), &[2, 2, 1]);
    // X^2+X+1 is the only irreducible monic quadratic over F_2
    let irreducible: Vec<u32> =
        (0..4).filter(|&c| gf_core::is_irreducible(&[c % 2, c / 2, 1], 2)).collect();
    assert_eq!(irreducible, vec![3]);
}

#[test]
fn f4_inverse_by_multiplication_table() {
    let k = FqField::new(2, 2).unwrap();
    let x = k.generator();
    let x2 = k.mul(x, x);
    let x3 = k.mul(x2, x);
    assert_eq!(x3, k.one());
    let inv = k.elements().find(|&y| k.mul(x, y) == k.one()).unwrap();
    assert_eq!(k.inv(x).unwrap(), inv);
    assert_eq!(inv, k.add(x, k.one()));
}

fn axioms_hold(k: &FqField, a: FqElem, b: FqElem, c: FqElem) -> bool {
    k.add(k.add(a, b), c) == k.add(a, k.add(b, c))
        && k.mul(k.mul(a, b), c) == k.mul(a, k.mul(b, c))
        && k.mul(a, k.add(b, c)) == k.add(k.mul(a, b), k.mul(a, c))
        && k.add(a, b) == k.add(b, a)
        && k.mul(a, b) == k.mul(b, a)
        && k.add(a, k.neg(a)) == k.zero()
        && (a.is_zero() || k.mul(a, k.inv(a).unwrap()) == k.one())
}

#[test]
fn axioms_exhaustive_small_fields() {
    for &(p, f) in SMALL {
        let k = FqField::new(p, f).unwrap();
        for a in k.elements() {
            for b in k.elements() {
                for c in k.elements() {
                    assert!(axioms_hold(&k, a, b, c), "{k:?} {a} {b} {c}");
                }
            }
        }
    }
}

fn large_fields() -> &'static [FqField] {
    static FIELDS: OnceLock<Vec<FqField>> = OnceLock::new();
    FIELDS.get_or_init(|| LARGE.iter().map(|&(p, f)| FqField::new(p, f).unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]
    #[test]
    fn axioms_sampled_large_fields(idx in 0usize..6, a in 0u32..81, b in 0u32..81, c in 0u32..81) {
        let k = &large_fields()[idx];
        let q = k.q();
        let (a, b, c) = (k.elem(a % q).unwrap(), k.elem(b % q).unwrap(), k.elem(c % q).unwrap());
        prop_assert!(axioms_hold(k, a, b, c));
    }
}

#[test]
fn group_order_and_frobenius() {
    for &(p, f) in SMALL.iter().chain(LARGE) {
        let k = FqField::new(p, f).unwrap();
        for x in k.elements() {
            if !x.is_zero() {
                assert_eq!(k.pow(x, u64::from(k.q() - 1)), k.one());
            }
            let mut y = x;
            for _ in 0..f {
                y = k.frobenius(y);
            }
            assert_eq!(y, x);
            assert_eq!(k.frobenius(x), k.pow(x, u64::from(p)));
        }
    }
}

#[test]
fn power_sum_matches_direct_summation() {
    for &(p, f) in SMALL.iter().chain(LARGE) {
        let k = FqField::new(p, f).unwrap();
        for l in 0..=3 * u64::from(k.q() - 1) {
            // direct sum with the honest value 0^0 = 1, so l = 0 gives q = 0
            let direct = k.elements().fold(k.zero(), |acc, z| k.add(acc, k.pow(z, l)));
            assert_eq!(k.power_sum(l), direct, "{k:?} l={l}");
        }
    }
    let f4 = FqField::new(2, 2).unwrap();
    assert_eq!(f4.power_sum(3), f4.one());
    assert_eq!(f4.power_sum(0), f4.zero());
    let f5 = FqField::new(5, 1).unwrap();
    assert_eq!(f5.power_sum(2), f5.zero());
}

#[test]
fn characters_multiplicative_exhaustive() {
    for &(p, f) in SMALL {
        let k = FqField::new(p, f).unwrap();
        let units: Vec<FqElem> = k.units().collect();
        for chi in HChar::all(&k) {
            for &a in &units {
                for &d in &units {
                    let v = chi.eval(&k, a, d).unwrap();
                    for &a2 in &units {
                        for &d2 in &units {
                            let prod = chi.eval(&k, k.mul(a, a2), k.mul(d, d2)).unwrap();
                            assert_eq!(prod, k.mul(v, chi.eval(&k, a2, d2).unwrap()));
                        }
                    }
                }
            }
            assert_eq!(chi.conj_w().conj_w(), chi);
        }
        let triv = HChar::trivial(&k);
        assert!(triv.is_trivial());
        for &a in &units {
            assert_eq!(triv.eval(&k, a, a).unwrap(), k.one());
        }
    }
}

fn random_poly(k: &FqField, n: usize, coeffs: &[u32]) -> MPoly {
    let q = k.q() as usize;
    let terms = (0..q.pow(n as u32)).map(|idx| {
        let e: Vec<u32> = point_of_index(k, n, idx).iter().map(|x| x.code()).collect();
        (e, k.elem(coeffs[idx % coeffs.len()] % k.q()).unwrap())
    });
    MPoly::from_terms(k, n, terms).unwrap()
}

proptest! {
    #[test]
    fn interpolation_inverts_evaluation(idx in 0usize..4, n in 1usize..=2, coeffs in prop::collection::vec(0u32..5, 1..40)) {
        let (p, f) = [(2, 1), (3, 1), (2, 2), (5, 1)][idx];
        let k = FqField::new(p, f).unwrap();
        let poly = random_poly(&k, n, &coeffs);
        let values: Vec<FqElem> = (0..(k.q() as usize).pow(n as u32))
            .map(|i| poly.eval(&k, &point_of_index(&k, n, i)).unwrap())
            .collect();
        let back = interpolate(&k, n, &values).unwrap();
        prop_assert_eq!(&back, &poly);
        for i in 0..n {
            prop_assert!(back.degree_in(i) < k.q());
        }
    }
}

#[test]
fn interpolation_of_all_maps_f2_squared() {
    // every one of the 2^4 functions F_2^2 -> F_2 round-trips
    let k = FqField::new(2, 1).unwrap();
    for mask in 0u32..16 {
        let poly = interpolate_fn(&k, 2, |x| {
            let idx = x[0].code() + 2 * x[1].code();
            k.from_int(i64::from((mask >> idx) & 1))
        })
        .unwrap();
        for idx in 0..4 {
            let pt = point_of_index(&k, 2, idx);
            assert_eq!(poly.eval(&k, &pt).unwrap().code(), (mask >> idx) & 1);
        }
    }
}
