use gf_core::FqElem;
use local_ring::LocalError;

use crate::{EdgeLabel, Family, Mat2, PropCosetLabel, Subgroup, Tree, TreeError, VertexLabel};

/// Certificate that `g = rep * matrix` with `matrix` in `group`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub matrix: Mat2,
    pub group: Subgroup,
    /// `k` with `pi^{-k} matrix` in the compact part.
    pub central: i32,
    /// Residues of the diagonal of `pi^{-k} matrix` (Iwahori-type groups only).
    pub diag: Option<(FqElem, FqElem)>,
}

fn precision(level: i32) -> impl FnOnce(LocalError) -> TreeError {
    move |source| TreeError::ReductionPrecision { level, source }
}

impl Tree {
    pub fn vertex_rep(&self, v: &VertexLabel) -> Mat2 {
        let r = self.ring();
        let lam = self.digits(&v.lam);
        let n = v.level as i32;
        if v.side == 0 {
            self.mat(r.f_pi_pow(n), lam, r.f_zero(), r.f_one())
        } else {
            self.mat(r.f_one(), r.f_zero(), r.f_shift(&lam, 1), r.f_pi_pow(n + 1))
        }
    }

    pub fn edge_rep(&self, e: &EdgeLabel) -> Mat2 {
        let g = self.vertex_rep(&e.source());
        let w = self.w();
        let uw = || self.mul(&self.u(self.teich(e.mu)), &w);
        match e.family {
            Family::G0 => g,
            Family::G0Uw => self.mul(&g, &uw()),
            Family::G1w => self.mul(&g, &w),
            Family::G1wUw => self.product([&g, &w, &uw()]),
        }
    }

    pub fn prop_rep(&self, p: &PropCosetLabel) -> Mat2 {
        let r = self.ring();
        self.mul(&self.edge_rep(&p.edge), &self.diag(r.f_one(), self.teich(p.fiber)))
    }

    /// The vertex `g KZ`, by column reduction over `O` and central scaling.
    pub fn vertex_label(&self, g: &Mat2) -> Result<VertexLabel, TreeError> {
        let r = self.ring();
        let det = self.det(g);
        let vdet = det.val().ok_or(TreeError::Singular)?;
        let (num, den, other) = if g.d.val_or_max() <= g.c.val_or_max() { (g.b, g.d, g.c) } else { (g.a, g.c, g.d) };
        let vden = den.val().ok_or(TreeError::Local(LocalError::PrecisionExhausted {
            needed: i64::from(vdet),
            available: i64::from(den.abs_prec()),
        }))?;
        if other.is_zero() && other.abs_prec() <= vden {
            return Err(TreeError::ReductionPrecision {
                level: vden,
                source: LocalError::PrecisionExhausted { needed: i64::from(vden) + 1, available: i64::from(other.abs_prec()) },
            });
        }
        let m = vdet - 2 * vden;
        let y = r.f_div(&num, &den)?;
        let y = r.f_truncate(&y, m).map_err(precision(m))?;
        let zeros = |n: i32| vec![FqElem::ZERO; n as usize];
        let label = match y.val() {
            None if m >= 0 => VertexLabel { side: 0, level: m as u32, lam: zeros(m) },
            None => VertexLabel { side: 1, level: (-m - 1) as u32, lam: zeros(-m - 1) },
            Some(v) if v >= 0 => VertexLabel { side: 0, level: m as u32, lam: r.f_digits(&y, 0, m)? },
            Some(v) => {
                let k = -v;
                let n = m + 2 * k - 1;
                let unit = r.f_shift(&y, k);
                let lam = r.f_shift(&r.f_inv(&unit)?, k - 1);
                VertexLabel { side: 1, level: n as u32, lam: r.f_digits(&lam, 0, n).map_err(precision(n))? }
            }
        };
        Ok(label)
    }

    /// `rep^{-1} g`, checked against `group`.
    pub(crate) fn witness(
        &self,
        label: &dyn std::fmt::Display,
        rep: &Mat2,
        rep_inv: &Mat2,
        g: &Mat2,
        group: Subgroup,
    ) -> Result<Witness, TreeError> {
        let matrix = self.mul(rep_inv, g);
        let failed = || TreeError::WitnessFailed { label: label.to_string(), group };
        if !self.is_in(&matrix, group)? {
            return Err(failed());
        }
        if self.is_checked() && !self.eq(&self.mul(rep, &matrix), g) {
            return Err(failed());
        }
        let (central, scaled) = self.central_normalize(&matrix)?.ok_or_else(failed)?;
        let diag = match group {
            Subgroup::IZ | Subgroup::I1Z | Subgroup::I | Subgroup::I1 => {
                let r = self.ring();
                Some((r.f_reduce_mod_p(&scaled.a)?, r.f_reduce_mod_p(&scaled.d)?))
            }
            _ => None,
        };
        Ok(Witness { matrix, group, central, diag })
    }

    pub fn reduce_vertex(&self, g: &Mat2) -> Result<(VertexLabel, Witness), TreeError> {
        let label = self.vertex_label(g)?;
        let rep = self.vertex_rep(&label);
        let rep_inv = self.inv(&rep)?;
        let w = self.witness(&label, &rep, &rep_inv, g, Subgroup::KZ)?;
        Ok((label, w))
    }

    /// The oriented edge `(g KZ, g alpha KZ)` classified directly from its
    /// two vertices, without a ball table.
    pub fn edge_label(&self, g: &Mat2) -> Result<EdgeLabel, TreeError> {
        let src = self.vertex_label(g)?;
        let dst = self.vertex_label(&self.mul(g, &self.alpha()))?;
        EdgeLabel::from_vertices(&src, &dst)
            .ok_or_else(|| TreeError::WitnessFailed { label: format!("{src} -> {dst}"), group: Subgroup::IZ })
    }
}
