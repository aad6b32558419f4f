//! Conway polynomials for every GF(p^f) with p^f <= 81.

/// Coefficients `c_0, .., c_{f-1}, 1` (ascending powers) for `f >= 2`.
/// Degree-one entries are generated from the least primitive root instead.
const TABLE: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn least_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let mut factors = Vec::new();
    let mut m = order;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&r| pow_mod(g, order / r, p) != 1))
        .expect("every prime has a primitive root")
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let m = u64::from(p);
    let mut acc = 1u64;
    let mut base = u64::from(b) % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u32
}

/// The Conway polynomial for `(p, f)`, or `None` when it is not tabulated.
pub fn conway_polynomial(p: u32, f: u32) -> Option<Vec<u32>> {
    if !is_prime(p) || f == 0 {
        return None;
    }
    if f == 1 {
        let g = least_primitive_root(p);
        return Some(vec![(p - g) % p, 1]);
    }
    TABLE
        .iter()
        .find(|&&(tp, tf, _)| tp == p && tf == f)
        .map(|&(_, _, c)| c.to_vec())
}
