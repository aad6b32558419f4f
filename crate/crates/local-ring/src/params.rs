use crate::LocalError;

/// Which concrete model of `O` is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// `e = 1`: `W(F_q)` with uniformizer `p`.
    Unramified,
    /// `f = 1`, `e > 1`: `Z_p[pi] / (pi^e - p)`.
    Eisenstein,
    /// `e, f > 1`: `W(F_q)[pi] / (pi^e - p)`.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalParams {
    pub p: u32,
    pub e: u32,
    pub f: u32,
    /// Number of pi-adic digits kept.
    pub prec: u32,
    pub model: Model,
}

impl LocalParams {
    pub fn new(p: u32, e: u32, f: u32, prec: u32) -> Result<Self, LocalError> {
        if e == 0 || f == 0 || prec == 0 {
            return Err(LocalError::Unsupported(format!("e={e}, f={f}, prec={prec} must be positive")));
        }
        // validates p and q against the field limits
        gf_core::FqField::new(p, f)?;
        let model = match (e, f) {
            (1, _) => Model::Unramified,
            (_, 1) => Model::Eisenstein,
            _ => Model::Mixed,
        };
        Ok(LocalParams { p, e, f, prec, model })
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.f)
    }
}
