use std::collections::HashMap;

use gf_core::FqElem;

use crate::{EdgeLabel, Family, Mat2, PropCosetLabel, Subgroup, Tree, TreeError, VertexLabel, Witness};

/// Result of reducing modulo `I(1)Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropReduction {
    /// Position of the edge in the ball.
    pub edge: usize,
    pub fiber: FqElem,
    /// Teichmueller unit of the central part of the witness.
    pub nu: FqElem,
    pub witness: Witness,
}

/// All edges of `B(N)` and all vertices within distance `N + 1`, in a fixed
/// order (by radius, then label), with the lookup tables used by reduction.
#[derive(Clone, Debug)]
pub struct BallIndex {
    tree: Tree,
    radius: u32,
    edges: Vec<EdgeLabel>,
    edge_pos: HashMap<EdgeLabel, usize>,
    reps: Vec<Mat2>,
    rep_invs: Vec<Mat2>,
    pairs: HashMap<(VertexLabel, VertexLabel), usize>,
    vertices: Vec<VertexLabel>,
    vertex_pos: HashMap<VertexLabel, usize>,
    // number of edges of radius <= r, indexed by r
    prefix: Vec<usize>,
    units: Vec<FqElem>,
}

fn all_digit_strings(units: &[FqElem], zero: FqElem, n: u32) -> Vec<Vec<FqElem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|s| {
                std::iter::once(zero).chain(units.iter().copied()).map(move |d| {
                    let mut t = s.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

impl BallIndex {
    pub fn new(tree: &Tree, radius: u32) -> Result<Self, TreeError> {
        let k = tree.ring().field().clone();
        let units: Vec<FqElem> = k.units().collect();
        let strings = |n: u32| all_digit_strings(&units, FqElem::ZERO, n);

        let mut vertices = Vec::new();
        for level in 0..=radius + 1 {
            for lam in strings(level) {
                vertices.push(VertexLabel { side: 0, level, lam });
            }
        }
        for level in 0..=radius {
            for lam in strings(level) {
                vertices.push(VertexLabel { side: 1, level, lam });
            }
        }
        vertices.sort_by(|a, b| (a.distance(), a).cmp(&(b.distance(), b)));

        let mut edges = Vec::new();
        for family in Family::ALL {
            for level in 0..=radius {
                for lam in strings(level) {
                    let mus: Vec<FqElem> = if family.is_twisted() { k.elements().collect() } else { vec![FqElem::ZERO] };
                    for mu in mus {
                        let e = EdgeLabel { family, level, lam: lam.clone(), mu };
                        if e.radius() <= radius {
                            edges.push(e);
                        }
                    }
                }
            }
        }
        edges.sort_by(|a, b| (a.radius(), a).cmp(&(b.radius(), b)));

        let alpha = tree.alpha();
        let mut reps = Vec::with_capacity(edges.len());
        let mut rep_invs = Vec::with_capacity(edges.len());
        let mut pairs = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            let rep = tree.edge_rep(e);
            let src = tree.vertex_label(&rep)?;
            let dst = tree.vertex_label(&tree.mul(&rep, &alpha))?;
            if src != e.source() || dst != e.target() {
                return Err(TreeError::WitnessFailed { label: e.to_string(), group: Subgroup::IZ });
            }
            rep_invs.push(tree.inv(&rep)?);
            reps.push(rep);
            pairs.insert((src, dst), i);
        }
        let prefix = (0..=radius).map(|r| edges.partition_point(|e| e.radius() <= r)).collect();
        let edge_pos = edges.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let vertex_pos = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Ok(BallIndex { tree: tree.clone(), radius, edges, edge_pos, reps, rep_invs, pairs, vertices, vertex_pos, prefix, units })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeLabel] {
        &self.edges
    }

    pub fn edge(&self, pos: usize) -> &EdgeLabel {
        &self.edges[pos]
    }

    pub fn edge_pos(&self, e: &EdgeLabel) -> Option<usize> {
        self.edge_pos.get(e).copied()
    }

    pub fn rep(&self, pos: usize) -> &Mat2 {
        &self.reps[pos]
    }

    /// Number of edges of radius at most `r` (they come first).
    pub fn count_within(&self, r: u32) -> usize {
        self.prefix[r.min(self.radius) as usize]
    }

    pub fn vertices(&self) -> &[VertexLabel] {
        &self.vertices
    }

    pub fn vertex_pos(&self, v: &VertexLabel) -> Option<usize> {
        self.vertex_pos.get(v).copied()
    }

    /// Nonzero elements of F_q in fibre order.
    pub fn units(&self) -> &[FqElem] {
        &self.units
    }

    pub fn reduce_edge(&self, g: &Mat2) -> Result<(usize, Witness), TreeError> {
        let t = &self.tree;
        let src = t.vertex_label(g)?;
        let dst = t.vertex_label(&t.mul(g, &t.alpha()))?;
        let pos = *self
            .pairs
            .get(&(src.clone(), dst.clone()))
            .ok_or_else(|| TreeError::OutOfBall(format!("{src} -> {dst}"), self.radius))?;
        let w = t.witness(&self.edges[pos], &self.reps[pos], &self.rep_invs[pos], g, Subgroup::IZ)?;
        Ok((pos, w))
    }

    /// Index of `(edge, fiber)` among the `I(1)Z`-cosets of the ball.
    pub fn prop_index(&self, edge: usize, fiber: FqElem) -> usize {
        edge * self.units.len() + fiber.code() as usize - 1
    }

    pub fn prop_label(&self, index: usize) -> PropCosetLabel {
        let n = self.units.len();
        PropCosetLabel { edge: self.edges[index / n].clone(), fiber: self.units[index % n] }
    }

    pub fn prop_len(&self) -> usize {
        self.edges.len() * self.units.len()
    }

    pub fn reduce_prop(&self, g: &Mat2) -> Result<PropReduction, TreeError> {
        let (edge, w) = self.reduce_edge(g)?;
        let t = &self.tree;
        let k = t.ring().field();
        let (a, d) = w.diag.expect("IZ witnesses carry their diagonal");
        let fiber = k.div(d, a).expect("witness diagonal is a unit");
        let label = PropCosetLabel { edge: self.edges[edge].clone(), fiber };
        let shift = t.diag(t.ring().f_one(), t.teich(fiber));
        let rep = t.mul(&self.reps[edge], &shift);
        let rep_inv = t.mul(&t.inv(&shift)?, &self.rep_invs[edge]);
        let witness = t.witness(&label, &rep, &rep_inv, g, Subgroup::I1Z)?;
        Ok(PropReduction { edge, fiber, nu: a, witness })
    }
}
