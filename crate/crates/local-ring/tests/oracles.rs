//! The model ring checked against a naive independent implementation:
//! integer coefficient grids for `X^j pi^i` under a single modulus `p^M`,
//! Teichmueller lifts by brute exponentiation, digits re-extracted by hand.

use gf_core::{conway_polynomial, FqElem, FqField};
use local_ring::{LocalError, LocalParams, LocalRing, Model, RingElem};
use proptest::prelude::*;
use std::sync::OnceLock;

const MODELS: &[(u32, u32, u32)] = &[(2, 1, 2), (3, 2, 1), (2, 2, 2), (5, 1, 1), (3, 1, 2), (2, 3, 1), (5, 2, 1), (2, 1, 3)];
const PREC: u32 = 7;

struct Naive {
    p: i128,
    e: usize,
    f: usize,
    modulus: i128,
    lift: Vec<i128>,
    k: FqField,
    n: usize,
    teich_table: Vec<Grid>,
}

type Grid = Vec<Vec<i128>>;

impl Naive {
    fn new(p: u32, e: u32, f: u32, n: u32) -> Self {
        let m = n.div_ceil(e) + 1;
        let mut naive = Naive {
            p: i128::from(p),
            e: e as usize,
            f: f as usize,
            modulus: i128::from(p).pow(m),
            lift: conway_polynomial(p, f).unwrap().iter().map(|&c| i128::from(c)).collect(),
            k: FqField::new(p, f).unwrap(),
            n: n as usize,
            teich_table: Vec::new(),
        };
        naive.teich_table = naive.k.elements().map(|mu| naive.compute_teich(mu)).collect();
        naive
    }

    fn zero(&self) -> Grid {
        vec![vec![0; self.f]; self.e]
    }

    fn add(&self, a: &Grid, b: &Grid) -> Grid {
        let mut out = self.zero();
        for i in 0..self.e {
            for j in 0..self.f {
                out[i][j] = (a[i][j] + b[i][j]).rem_euclid(self.modulus);
            }
        }
        out
    }

    fn sub(&self, a: &Grid, b: &Grid) -> Grid {
        let mut out = self.zero();
        for i in 0..self.e {
            for j in 0..self.f {
                out[i][j] = (a[i][j] - b[i][j]).rem_euclid(self.modulus);
            }
        }
        out
    }

    fn mul(&self, a: &Grid, b: &Grid) -> Grid {
        let (e, f) = (self.e, self.f);
        // full product in pi-degree < 2e and X-degree < 2f
        let mut big = vec![vec![0i128; 2 * f]; 2 * e];
        for i1 in 0..e {
            for j1 in 0..f {
                for i2 in 0..e {
                    for j2 in 0..f {
                        big[i1 + i2][j1 + j2] = (big[i1 + i2][j1 + j2] + a[i1][j1] * b[i2][j2]).rem_euclid(self.modulus);
                    }
                }
            }
        }
        for row in big.iter_mut() {
            for d in (f..2 * f).rev() {
                let c = row[d];
                row[d] = 0;
                for j in 0..f {
                    row[d - f + j] = (row[d - f + j] - c * self.lift[j]).rem_euclid(self.modulus);
                }
            }
        }
        let mut out = self.zero();
        for i in 0..2 * e {
            let (target, scale) = if i >= e { (i - e, self.p) } else { (i, 1) };
            for j in 0..f {
                out[target][j] = (out[target][j] + scale * big[i][j]).rem_euclid(self.modulus);
            }
        }
        out
    }

    fn pow(&self, a: &Grid, k: u64) -> Grid {
        let mut acc = self.zero();
        acc[0][0] = 1;
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    fn teich(&self, mu: FqElem) -> Grid {
        self.teich_table[mu.code() as usize].clone()
    }

    fn compute_teich(&self, mu: FqElem) -> Grid {
        let mut y = self.zero();
        for (j, c) in self.k.coeffs(mu).into_iter().enumerate() {
            y[0][j] = i128::from(c);
        }
        let q = u64::from(self.k.q());
        let rounds = self.e * self.n + 4;
        for _ in 0..rounds {
            y = self.pow(&y, q);
        }
        y
    }

    fn pi(&self) -> Grid {
        let mut x = self.zero();
        if self.e == 1 {
            x[0][0] = self.p;
        } else {
            x[1][0] = 1;
        }
        x
    }

    fn from_digits(&self, d: &[FqElem]) -> Grid {
        let mut acc = self.zero();
        let pi = self.pi();
        for &mu in d.iter().rev() {
            acc = self.add(&self.mul(&acc, &pi), &self.teich(mu));
        }
        acc
    }

    fn residue(&self, x: &Grid) -> FqElem {
        let c: Vec<u32> = x[0].iter().map(|&v| (v.rem_euclid(self.p)) as u32).collect();
        self.k.from_coeffs(&c).unwrap()
    }

    fn div_pi(&self, x: &Grid) -> Grid {
        let mut out = self.zero();
        for i in 0..self.e {
            for j in 0..self.f {
                if i + 1 < self.e {
                    out[i][j] = x[i + 1][j];
                } else {
                    assert_eq!(x[0][j] % self.p, 0);
                    out[i][j] = x[0][j] / self.p;
                }
            }
        }
        out
    }

    fn digits(&self, x: &Grid) -> Vec<FqElem> {
        let mut cur = x.clone();
        let mut out = Vec::new();
        for _ in 0..self.n {
            let d = self.residue(&cur);
            out.push(d);
            cur = self.div_pi(&self.sub(&cur, &self.teich(d)));
        }
        out
    }
}

fn rings() -> &'static [(LocalRing, Naive)] {
    static R: OnceLock<Vec<(LocalRing, Naive)>> = OnceLock::new();
    R.get_or_init(|| {
        MODELS
            .iter()
            .map(|&(p, e, f)| {
                (LocalRing::new(LocalParams::new(p, e, f, PREC).unwrap()).unwrap(), Naive::new(p, e, f, PREC))
            })
            .collect()
    })
}

fn digit_vec(k: &FqField, raw: &[u32]) -> Vec<FqElem> {
    raw.iter().map(|&c| k.elem(c % k.q()).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200 * MODELS.len() as u32))]
    #[test]
    fn arithmetic_matches_naive_model(idx in 0..MODELS.len(), xs in prop::collection::vec(0u32..8, PREC as usize), ys in prop::collection::vec(0u32..8, PREC as usize)) {
        let (ring, naive) = &rings()[idx];
        let k = ring.field();
        let (xd, yd) = (digit_vec(k, &xs), digit_vec(k, &ys));
        let (x, y) = (ring.digits(&xd).unwrap(), ring.digits(&yd).unwrap());
        let (nx, ny) = (naive.from_digits(&xd), naive.from_digits(&yd));
        prop_assert_eq!(ring.digits_add(&x, &y).digits().to_vec(), naive.digits(&naive.add(&nx, &ny)));
        prop_assert_eq!(ring.digits_mul(&x, &y).digits().to_vec(), naive.digits(&naive.mul(&nx, &ny)));
        prop_assert_eq!(ring.digits_neg(&x).digits().to_vec(), naive.digits(&naive.sub(&naive.zero(), &nx)));
    }

    #[test]
    fn codec_round_trip(idx in 0..MODELS.len(), coords in prop::collection::vec(any::<u64>(), 8)) {
        let (ring, _) = &rings()[idx];
        let x = random_elem(ring, &coords);
        prop_assert_eq!(ring.from_digits(&ring.to_digits(&x)), x);
        let d = ring.to_digits(&x);
        prop_assert_eq!(ring.to_digits(&ring.from_digits(&d)), d);
    }

    #[test]
    fn truncation_composes(idx in 0..MODELS.len(), coords in prop::collection::vec(any::<u64>(), 8), m in 0usize..=PREC as usize, n in 0usize..=PREC as usize) {
        let (ring, _) = &rings()[idx];
        let x = ring.to_digits(&random_elem(ring, &coords));
        let (m, n) = (m.min(n), m.max(n));
        let xn = x.truncate(n).unwrap();
        prop_assert_eq!(xn.truncate(n).unwrap(), xn.clone());
        prop_assert_eq!(xn.truncate(m).unwrap(), x.truncate(m).unwrap());
        // the truncation agrees with x modulo pi^n
        let diff = ring.sub(&ring.from_digits(&x), &ring.from_digits(&xn));
        prop_assert!(ring.val(&diff).is_none_or(|v| v as usize >= n));
    }

    #[test]
    fn unit_inverse_is_inverse(idx in 0..MODELS.len(), coords in prop::collection::vec(any::<u64>(), 8)) {
        let (ring, _) = &rings()[idx];
        let x = random_elem(ring, &coords);
        match ring.unit_inv(&x) {
            Ok(y) => prop_assert_eq!(ring.mul(&x, &y), ring.one()),
            Err(e) => {
                prop_assert_eq!(e, LocalError::NotAUnit);
                prop_assert!(ring.residue(&x).is_zero());
            }
        }
    }

    #[test]
    fn field_elements_follow_ring(idx in 0..MODELS.len(), a in prop::collection::vec(any::<u64>(), 8), b in prop::collection::vec(any::<u64>(), 8), sa in -3i32..3, sb in -3i32..3) {
        let (ring, _) = &rings()[idx];
        let (x, y) = (random_elem(ring, &a), random_elem(ring, &b));
        let fx = ring.f_from_ring_shifted(&x, sa);
        let fy = ring.f_from_ring_shifted(&y, sb);
        let prod = ring.f_mul(&fx, &fy);
        let expect = ring.f_from_ring_shifted(&ring.mul(&x, &y), sa + sb);
        prop_assert!(ring.f_eq(&prod, &expect));
        if !prod.is_zero() {
            prop_assert_eq!(prod.val(), Some(fx.val().unwrap() + fy.val().unwrap()));
        }
        if let Ok(q) = ring.f_div(&prod, &fy) {
            prop_assert!(ring.f_eq(&q, &fx));
        }
        let sum = ring.f_add(&fx, &fy);
        let back = ring.f_sub(&sum, &fy);
        prop_assert!(ring.f_eq(&back, &fx));
        prop_assert!(ring.f_sub(&fx, &fx).is_zero());
    }
}

fn random_elem(ring: &LocalRing, coords: &[u64]) -> RingElem {
    let k = ring.field();
    let digits: Vec<FqElem> = coords
        .iter()
        .flat_map(|c| c.to_le_bytes())
        .take(ring.prec() as usize)
        .map(|b| k.elem(u32::from(b) % k.q()).unwrap())
        .collect();
    ring.from_digit_slice(&digits)
}

#[test]
fn teichmueller_lifts_are_fixed_points() {
    for (ring, naive) in rings() {
        let q = u64::from(ring.q());
        for mu in ring.field().elements() {
            let t = ring.teich(mu);
            assert_eq!(ring.pow(&t, q), t);
            let d = ring.teich_digits(mu);
            assert_eq!(d.digit(0), mu);
            assert!(d.digits()[1..].iter().all(|x| x.is_zero()));
            assert_eq!(ring.to_digits(&t).digits(), naive.digits(&naive.teich(mu)).as_slice());
        }
    }
}

#[test]
fn teichmueller_multiplicativity_unramified_f4() {
    let ring = LocalRing::new(LocalParams::new(2, 1, 2, 6).unwrap()).unwrap();
    let k = ring.field().clone();
    for mu in k.elements() {
        for nu in k.elements() {
            let d = ring.to_digits(&ring.mul(&ring.teich(mu), &ring.teich(nu)));
            assert_eq!(d.digit(0), k.mul(mu, nu));
            assert!(d.digits()[1..].iter().all(|x| x.is_zero()));
        }
    }
}

// (x~^q + y~^q - (x~ + y~)^q) / p mod p for arbitrary lifts in W; well defined
// because x~^q is congruent to [x] modulo p^2.
fn carry_closed_form(naive: &Naive, x: FqElem, y: FqElem) -> FqElem {
    let lift = |mu: FqElem| {
        let mut g = naive.zero();
        for (j, c) in naive.k.coeffs(mu).into_iter().enumerate() {
            g[0][j] = i128::from(c);
        }
        g
    };
    let q = u64::from(naive.k.q());
    let (lx, ly) = (lift(x), lift(y));
    let num = naive.sub(&naive.add(&naive.pow(&lx, q), &naive.pow(&ly, q)), &naive.pow(&naive.add(&lx, &ly), q));
    let coords: Vec<u32> = num[0].iter().map(|&c| {
        assert_eq!(c % naive.p, 0);
        ((c / naive.p).rem_euclid(naive.p)) as u32
    }).collect();
    naive.k.from_coeffs(&coords).unwrap()
}

#[test]
fn carry_matches_oracles_exhaustively() {
    let mut configs = 0;
    for p in [2u32, 3, 5, 7] {
        for f in 1..=3u32 {
            if p.pow(f) > 9 {
                continue;
            }
            for e in 1..=3u32 {
                if e * f > 8 {
                    continue;
                }
                let ring = LocalRing::new(LocalParams::new(p, e, f, 4).unwrap()).unwrap();
                let naive = Naive::new(p, e, f, 4);
                let k = ring.field().clone();
                for x in k.elements() {
                    for y in k.elements() {
                        let z = ring.carry_z(x, y);
                        let direct = naive.digits(&naive.add(&naive.teich(x), &naive.teich(y)))[1];
                        assert_eq!(z, direct, "p={p} e={e} f={f} x={x} y={y}");
                        if e > 1 {
                            assert!(z.is_zero());
                        } else {
                            assert_eq!(z, carry_closed_form(&naive, x, y), "p={p} f={f} x={x} y={y}");
                        }
                        if y.is_zero() {
                            assert!(z.is_zero());
                        }
                    }
                }
                configs += 1;
            }
        }
    }
    // (p, f) = (2, 3) allows e = 1, 2 only
    assert_eq!(configs, 7 * 3 - 1);
}

#[test]
fn worked_examples() {
    let r = LocalRing::new(LocalParams::new(3, 1, 1, 6).unwrap()).unwrap();
    let k = r.field().clone();
    assert_eq!(r.carry_z(k.one(), k.one()), k.one());
    assert_eq!(r.teich(k.from_int(2)), r.from_int(-1));
    // 2 = [2] + 3 [1] with [2] = -1
    assert_eq!(r.to_digits(&r.from_int(2)).digits()[..3], [k.from_int(2), k.one(), k.zero()]);

    let r = LocalRing::new(LocalParams::new(3, 2, 1, 6).unwrap()).unwrap();
    let one = r.teich_digits(k.one());
    let two = r.digits_add(&one, &one);
    assert_eq!(two.digits(), &[k.from_int(2), k.zero(), k.one(), k.zero(), k.zero(), k.zero()]);
    assert_eq!(r.params().model, Model::Eisenstein);
    assert_eq!(r.mul(&r.uniformizer(), &r.uniformizer()), r.from_int(3));

    assert_eq!(LocalParams::new(2, 1, 2, 6).unwrap().model, Model::Unramified);
    assert_eq!(LocalParams::new(2, 2, 2, 6).unwrap().model, Model::Mixed);
    assert!(LocalParams::new(4, 1, 1, 6).is_err());
    assert!(LocalParams::new(3, 1, 5, 6).is_err());

    let zero = r.digits(&[]).unwrap();
    assert!(matches!(r.digits_unit_inv(&zero), Err(LocalError::NotAUnit)));
    assert!(r.to_digits_n(&r.one(), 7).is_err());
}

#[test]
fn field_element_examples() {
    let r = LocalRing::new(LocalParams::new(5, 2, 1, 6).unwrap()).unwrap();
    let u = r.f_add(&r.f_teich(r.field().from_int(3)), &r.f_pi_pow(1));
    let x = r.f_mul(&r.f_pi_pow(3), &u);
    assert_eq!(x.val(), Some(3));
    let a = r.f_mul(&r.f_pi_pow(1), &u);
    let b = r.f_mul(&r.f_pi_pow(-1), &r.f_inv(&u).unwrap());
    let one = r.f_mul(&a, &b);
    assert!(r.f_eq(&one, &r.f_one()));
    assert_eq!(one.rel_prec(), r.prec());
    assert!(r.f_add(&x, &r.f_neg(&x)).is_zero());
    assert_eq!(r.f_reduce_mod_p(&u).unwrap(), r.field().from_int(3));
    assert!(matches!(r.f_lift_to_ring(&r.f_pi_pow(-1), 1), Err(LocalError::NotIntegral(-1))));
    assert!(matches!(r.f_div(&x, &r.f_zero()), Err(LocalError::DivisionByZero)));
}
