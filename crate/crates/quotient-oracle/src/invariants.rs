use induced_modules::{FamilyKind, FormalSum, SpaceTag};
use tree_cosets::Mat2;

use crate::subspace::{axpy, formal_of, sparse_of, Insertion, SparseVec, Subspace};
use crate::{Oracle, OracleError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictedCheck {
    pub name: String,
    pub in_solutions: bool,
    pub nonzero_in_quotient: bool,
}

impl PredictedCheck {
    pub fn passes(&self) -> bool {
        self.in_solutions && self.nonzero_in_quotient
    }
}

/// `I(1)`-invariant classes of the quotient with representatives on `B(N)`.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub radius: u32,
    /// Depth of the `I(1)` generating set used.
    pub depth: u32,
    pub generators: usize,
    pub dim_solutions: usize,
    pub dim_ideal_cap_ball: usize,
    pub dim_quotient_invariants: usize,
    /// The ideal vectors on the ball are invariant classes (zero); a false
    /// value would mean the ideal is not stable.
    pub ideal_cap_inside_solutions: bool,
    /// Residual representatives of a basis of `Solutions / IdealCap`.
    pub representatives: Vec<FormalSum>,
    pub predicted: Vec<PredictedCheck>,
    /// Rank of the predicted vectors modulo the ideal.
    pub predicted_rank: usize,
}

impl Oracle {
    /// The invariant basis the theory predicts, restricted to `B(n)`:
    /// `[id]`, `[beta]`, `s_m^{p^l}` for `2 <= m <= n`, and `beta s_m^{p^l}`
    /// for `2 <= m <= n - 1`.
    pub fn predicted_invariants(&self, n: u32) -> Result<Vec<(String, FormalSum)>, OracleError> {
        let ind = self.induced();
        let t = ind.tree();
        let mut out = vec![
            ("[id,1]".to_string(), FormalSum::delta(ind.iz(), 0)),
            ("[beta,1]".to_string(), ind.delta_at(ind.iz(), &t.beta())?),
        ];
        let powers = self.field().p_powers();
        for m in 2..=n {
            for &l in &powers {
                out.push((format!("s_{m}^{l}"), ind.make_family(FamilyKind::S, m, l)?));
            }
        }
        for m in 2..n {
            for &l in &powers {
                let s = ind.make_family(FamilyKind::S, m, l)?;
                out.push((format!("beta s_{m}^{l}"), ind.act_left(&t.beta(), &s)?));
            }
        }
        Ok(out)
    }

    /// Combinations `sum c_j domain[j]` whose class is fixed by every mover,
    /// as sparse coefficient vectors over the domain indices. The movers must
    /// preserve distances to the root (elements of `I`).
    ///
    /// The conditions `g f - f in ideal` are linear in `f`: the complete
    /// decision is solvability of `T x = transfer(g f - f)`, i.e. vanishing of
    /// a residual modulo a fixed echelon basis. The kernel is refined one
    /// mover at a time.
    pub fn fixed_combinations(&self, domain: &[FormalSum], movers: &[Mat2]) -> Result<Vec<SparseVec>, OracleError> {
        let ind = self.induced();
        let k = self.field();
        let n = domain.iter().map(|v| ind.support_radius(v)).max().unwrap_or(0);
        let r = self.source_radius(n);
        let vertex_dim = ind.dim(SpaceTag::IndKZ);
        let mut kernel: Vec<SparseVec> =
            (0..domain.len()).map(|j| SparseVec::from([(j, gf_core::FqElem::ONE)])).collect();
        for g in movers {
            let mut residuals = Vec::with_capacity(domain.len());
            for v in domain {
                let moved = ind.act_left(g, v)?.sub(k, v)?;
                residuals.push(self.ideal_residual(&moved, r)?);
            }
            let mut elim = Subspace::tracked(k, vertex_dim);
            let mut next = Vec::new();
            for combo in kernel {
                let mut image = SparseVec::new();
                for (&j, &c) in &combo {
                    axpy(k, &mut image, c, &residuals[j]);
                }
                if let Insertion::Dependent(relation) = elim.insert_with(&image, combo)? {
                    next.push(relation);
                }
            }
            kernel = next;
        }
        Ok(kernel)
    }

    /// Solves for the vectors on `B(n)` whose class is fixed by every
    /// generator of `I(1)` up to `depth`, and compares with the prediction.
    pub fn invariant_space(&self, n: u32, depth: u32) -> Result<InvariantReport, OracleError> {
        let ind = self.induced();
        let k = self.field();
        let radius = ind.ball().radius();
        if n > radius {
            return Err(OracleError::OutOfBall { needed: n, radius });
        }
        let tag = ind.iz();
        let dim = ind.dim_within(tag, n);
        let generators = ind.tree().i1_generators(depth);

        let domain: Vec<FormalSum> = (0..dim).map(|j| FormalSum::delta(tag, j)).collect();
        let kernel = self.fixed_combinations(&domain, &generators)?;

        let ambient = ind.dim(tag);
        let solutions = Subspace::span(k, ambient, &kernel)?;
        let cap = self.ideal_cap(n)?;
        let mut ideal_cap_inside_solutions = true;
        for row in cap.basis() {
            ideal_cap_inside_solutions &= solutions.contains(row)?;
        }
        let representatives =
            cap.complement_residuals(solutions.basis())?.iter().map(|v| formal_of(k, tag, v)).collect();

        let predicted_vectors = self.predicted_invariants(n)?;
        let mut predicted = Vec::new();
        for (name, v) in &predicted_vectors {
            let sparse = sparse_of(v);
            predicted.push(PredictedCheck {
                name: name.clone(),
                in_solutions: solutions.contains(&sparse)?,
                nonzero_in_quotient: !cap.contains(&sparse)?,
            });
        }
        let sparse_predicted: Vec<SparseVec> = predicted_vectors.iter().map(|(_, v)| sparse_of(v)).collect();
        let predicted_rank = cap.complement_residuals(&sparse_predicted)?.len();

        Ok(InvariantReport {
            radius: n,
            depth,
            generators: generators.len(),
            dim_solutions: solutions.rank(),
            dim_ideal_cap_ball: cap.rank(),
            dim_quotient_invariants: solutions.rank() - cap.rank(),
            ideal_cap_inside_solutions,
            representatives,
            predicted,
            predicted_rank,
        })
    }
}
