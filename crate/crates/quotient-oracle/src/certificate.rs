use std::fmt;

use gf_core::FqElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Member,
    NonMember,
    NotFoundUpToCutoff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Completeness {
    /// Backed by an exhaustive finite system; non-membership is proven.
    CompleteDecision,
    /// Only the generators up to the cutoff were searched.
    CutoffBounded,
}

/// What the indices of a certificate's combination refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorFamily {
    /// `T e_u` for the vertex `u` with that key.
    SphericalImage,
    /// Index `2i` is `T12 e_i`, index `2i + 1` is `(T10 + Tm10) e_i`, for
    /// the edge key `i`.
    IwahoriIdeal,
    /// Index `(2 + |H| - 1) i + j` for the prop key `i`: `j = 0` is
    /// `T_ns e_i`, `j = 1` is `T_beta (T_ns + 1) e_i`, then `e_chi e_i` for
    /// the nontrivial characters in `HChar::all` order.
    ProPIdeal { r: u32 },
    /// Positions in a caller-supplied generator list.
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Present iff the verdict is `Member`.
    pub combination: Option<Vec<(usize, FqElem)>>,
    pub completeness: Completeness,
    pub generators: GeneratorFamily,
    /// Radius of the generating deltas that were used.
    pub cutoff: u32,
}

impl Certificate {
    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }

    /// A proven non-membership.
    pub fn is_complete_non_member(&self) -> bool {
        self.verdict == Verdict::NonMember && self.completeness == Completeness::CompleteDecision
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Member => "member",
            Verdict::NonMember => "non_member",
            Verdict::NotFoundUpToCutoff => "not_found_up_to_cutoff",
        })
    }
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Completeness::CompleteDecision => "complete_decision",
            Completeness::CutoffBounded => "cutoff_bounded",
        })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, cutoff {}", self.verdict, self.completeness, self.cutoff)?;
        if let Some(combo) = &self.combination {
            write!(f, ", {} generators", combo.len())?;
        }
        f.write_str(")")
    }
}
