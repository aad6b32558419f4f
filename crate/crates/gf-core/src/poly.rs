use std::collections::BTreeMap;

use crate::{FqElem, FqField, GfError};

/// A polynomial in `nvars` variables over GF(q) whose degree in each
/// variable is at most `q - 1`, so it is determined by its values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FqElem>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    /// Builds a reduced polynomial; exponents `>= q` are folded using `x^q = x`.
    pub fn from_terms(
        k: &FqField,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, FqElem)>,
    ) -> Result<Self, GfError> {
        let q1 = k.q() - 1;
        let mut out = MPoly::zero(nvars);
        for (mut e, c) in terms {
            if e.len() != nvars {
                return Err(GfError::Arity { expected: nvars, got: e.len() });
            }
            for x in e.iter_mut() {
                if *x > q1 {
                    *x = (*x - 1) % q1 + 1;
                }
            }
            out.add_term(k, e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, k: &FqField, e: Vec<u32>, c: FqElem) {
        let entry = self.terms.entry(e).or_insert(FqElem::ZERO);
        *entry = k.add(*entry, c);
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], FqElem)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent of variable `i` among the stored terms.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn eval(&self, k: &FqField, point: &[FqElem]) -> Result<FqElem, GfError> {
        if point.len() != self.nvars {
            return Err(GfError::Arity { expected: self.nvars, got: point.len() });
        }
        let mut acc = FqElem::ZERO;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (&x, &d) in point.iter().zip(e) {
                t = k.mul(t, k.pow(x, u64::from(d)));
            }
            acc = k.add(acc, t);
        }
        Ok(acc)
    }
}

/// Coefficients of `1 - (X - a)^{q-1}`, the indicator of `{a}`.
fn indicator_coeffs(k: &FqField, a: FqElem) -> Vec<FqElem> {
    let q = k.q() as usize;
    let mut poly = vec![FqElem::ZERO; q];
    poly[0] = FqElem::ONE;
    let na = k.neg(a);
    for deg in 0..q - 1 {
        // multiply by (X - a)
        for i in (0..=deg + 1).rev() {
            let shifted = if i > 0 { poly[i - 1] } else { FqElem::ZERO };
            poly[i] = k.add(shifted, k.mul(poly[i], na));
        }
    }
    let mut out: Vec<FqElem> = poly.iter().map(|&c| k.neg(c)).collect();
    out[0] = k.add(out[0], FqElem::ONE);
    out
}

/// Points of `F_q^n` in the order used by [`interpolate`]: the index of a
/// point is `sum_i code(x_i) q^i`.
pub fn point_of_index(k: &FqField, n: usize, mut idx: usize) -> Vec<FqElem> {
    let q = k.q() as usize;
    (0..n)
        .map(|_| {
            let c = idx % q;
            idx /= q;
            k.elem(c as u32).expect("index below q")
        })
        .collect()
}

/// The unique reduced polynomial taking `values[idx]` at `point_of_index(idx)`.
pub fn interpolate(k: &FqField, n: usize, values: &[FqElem]) -> Result<MPoly, GfError> {
    let q = k.q() as usize;
    let total = q.checked_pow(n as u32).ok_or(GfError::Arity { expected: 0, got: n })?;
    if values.len() != total {
        return Err(GfError::Arity { expected: total, got: values.len() });
    }
    let basis: Vec<Vec<FqElem>> = k.elements().map(|a| indicator_coeffs(k, a)).collect();
    let mut data = values.to_vec();
    let mut stride = 1usize;
    let mut fibre = vec![FqElem::ZERO; q];
    for _axis in 0..n {
        for base in 0..total {
            if !(base / stride).is_multiple_of(q) {
                continue;
            }
            for c in fibre.iter_mut() {
                *c = FqElem::ZERO;
            }
            for a in 0..q {
                let v = data[base + a * stride];
                if v.is_zero() {
                    continue;
                }
                for (slot, &b) in fibre.iter_mut().zip(&basis[a]) {
                    *slot = k.add(*slot, k.mul(v, b));
                }
            }
            for (d, &c) in fibre.iter().enumerate() {
                data[base + d * stride] = c;
            }
        }
        stride *= q;
    }
    let mut poly = MPoly::zero(n);
    for (idx, &c) in data.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut e = Vec::with_capacity(n);
        let mut r = idx;
        for _ in 0..n {
            e.push((r % q) as u32);
            r /= q;
        }
        poly.terms.insert(e, c);
    }
    Ok(poly)
}

/// Interpolates a function given as a closure on points.
pub fn interpolate_fn(
    k: &FqField,
    n: usize,
    mut f: impl FnMut(&[FqElem]) -> FqElem,
) -> Result<MPoly, GfError> {
    let q = k.q() as usize;
    let total = q.pow(n as u32);
    let values: Vec<FqElem> = (0..total).map(|i| f(&point_of_index(k, n, i))).collect();
    interpolate(k, n, &values)
}
