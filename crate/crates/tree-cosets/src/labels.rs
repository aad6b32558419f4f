use std::fmt;

use gf_core::{FqElem, FqField};

/// The vertex `g^side_{level, lam} KZ`, `lam` in `I_level` given by its digits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel {
    pub side: u8,
    pub level: u32,
    pub lam: Vec<FqElem>,
}

impl VertexLabel {
    pub fn root() -> Self {
        VertexLabel { side: 0, level: 0, lam: Vec::new() }
    }

    /// Distance from the root vertex.
    pub fn distance(&self) -> u32 {
        self.level + u32::from(self.side)
    }

    /// The neighbour one step closer to the root (`None` at the root).
    pub fn parent(&self) -> Option<VertexLabel> {
        match (self.side, self.level) {
            (0, 0) => None,
            (1, 0) => Some(VertexLabel::root()),
            (side, n) => Some(VertexLabel { side, level: n - 1, lam: self.lam[..n as usize - 1].to_vec() }),
        }
    }

    /// The child reached by appending digit `mu`; the root's children are
    /// `g^0_{1,mu}` together with `alpha`, see [`VertexLabel::neighbours`].
    pub fn child(&self, mu: FqElem) -> VertexLabel {
        let mut lam = self.lam.clone();
        lam.push(mu);
        VertexLabel { side: self.side, level: self.level + 1, lam }
    }

    /// All `q + 1` neighbours.
    pub fn neighbours(&self, k: &FqField) -> Vec<VertexLabel> {
        let mut out: Vec<VertexLabel> = k.elements().map(|mu| self.child(mu)).collect();
        match self.parent() {
            Some(p) => out.push(p),
            None => out.push(VertexLabel { side: 1, level: 0, lam: Vec::new() }),
        }
        out
    }
}

/// The four families of representatives of `G/IZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `g^0_{n,lam}`
    G0,
    /// `g^0_{n,lam} u([mu]) w`
    G0Uw,
    /// `g^1_{n,lam} w`
    G1w,
    /// `g^1_{n,lam} w u([mu]) w`
    G1wUw,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::G0, Family::G0Uw, Family::G1w, Family::G1wUw];

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> Option<Family> {
        Family::ALL.get(i as usize).copied()
    }

    pub fn is_twisted(self) -> bool {
        matches!(self, Family::G0Uw | Family::G1wUw)
    }

    pub fn side(self) -> u8 {
        match self {
            Family::G0 | Family::G0Uw => 0,
            Family::G1w | Family::G1wUw => 1,
        }
    }
}

/// An oriented edge `(g KZ, g alpha KZ)`; `mu` is zero for untwisted families.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabel {
    pub family: Family,
    pub level: u32,
    pub lam: Vec<FqElem>,
    pub mu: FqElem,
}

impl EdgeLabel {
    pub fn identity() -> Self {
        EdgeLabel { family: Family::G0, level: 0, lam: Vec::new(), mu: FqElem::ZERO }
    }

    /// The edge `beta IZ`.
    pub fn beta() -> Self {
        EdgeLabel { family: Family::G1w, level: 0, lam: Vec::new(), mu: FqElem::ZERO }
    }

    pub fn source(&self) -> VertexLabel {
        VertexLabel { side: self.family.side(), level: self.level, lam: self.lam.clone() }
    }

    pub fn target(&self) -> VertexLabel {
        let src = self.source();
        match self.family {
            Family::G0 | Family::G1w => src.parent().unwrap_or(VertexLabel { side: 1, level: 0, lam: Vec::new() }),
            Family::G0Uw | Family::G1wUw => src.child(self.mu),
        }
    }

    /// Classifies an oriented pair of adjacent vertices.
    pub fn from_vertices(source: &VertexLabel, target: &VertexLabel) -> Option<EdgeLabel> {
        let side = source.side;
        let (family, mu) = if source.parent().as_ref() == Some(target)
            || (source == &VertexLabel::root() && target.side == 1 && target.level == 0)
        {
            (if side == 0 { Family::G0 } else { Family::G1w }, FqElem::ZERO)
        } else if target.side == side
            && target.level == source.level + 1
            && target.lam[..source.level as usize] == source.lam[..]
        {
            (if side == 0 { Family::G0Uw } else { Family::G1wUw }, target.lam[source.level as usize])
        } else {
            return None;
        };
        Some(EdgeLabel { family, level: source.level, lam: source.lam.clone(), mu })
    }

    /// Smallest `m` with this edge in the ball `B(m)`: both endpoints within
    /// distance `m` of the root, except that the two orientations of the
    /// edge at the root lie in `B(0)`.
    pub fn radius(&self) -> u32 {
        match (self.family, self.level) {
            (Family::G0, n) => n,
            (Family::G1w, 0) => 0,
            _ => self.source().distance().max(self.target().distance()),
        }
    }
}

/// A coset of `G/I(1)Z`: the edge together with the fibre coordinate of
/// `IZ / I(1)Z`, represented by `rep(edge) diag(1, [fiber])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropCosetLabel {
    pub edge: EdgeLabel,
    pub fiber: FqElem,
}

fn digit_string(digits: &[FqElem]) -> String {
    digits.iter().map(|d| d.code().to_string()).collect::<Vec<_>>().join(".")
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V[i={} n={} lam={}]", self.side, self.level, digit_string(&self.lam))
    }
}

impl EdgeLabel {
    fn fmt_fields(&self) -> String {
        let mut digits = self.lam.clone();
        if self.family.is_twisted() {
            digits.push(self.mu);
        }
        format!("i={} n={} lam={} fam={}", self.family.side(), self.level, digit_string(&digits), self.family.index())
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E[{}]", self.fmt_fields())
    }
}

impl fmt::Display for PropCosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E[{} fib={}]", self.edge.fmt_fields(), self.fiber.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse label {0:?}")]
pub struct LabelParseError(pub String);

fn parse_fields(s: &str, k: &FqField) -> Result<(EdgeLabel, Option<FqElem>), LabelParseError> {
    let err = || LabelParseError(s.to_string());
    let body = s.strip_prefix("E[").and_then(|r| r.strip_suffix(']')).ok_or_else(err)?;
    let mut side = None;
    let mut level = None;
    let mut digits: Option<Vec<FqElem>> = None;
    let mut fam = None;
    let mut fib = None;
    for part in body.split(' ') {
        let (key, value) = part.split_once('=').ok_or_else(err)?;
        let num = |v: &str| v.parse::<u32>().map_err(|_| err());
        let elem = |v: &str| num(v).and_then(|c| k.elem(c).map_err(|_| err()));
        match key {
            "i" => side = Some(num(value)?),
            "n" => level = Some(num(value)?),
            "lam" if value.is_empty() => digits = Some(Vec::new()),
            "lam" => {
                digits = Some(
                    value
                        .split('.')
                        .map(elem)
                        .collect::<Result<_, _>>()?,
                )
            }
            "fam" => fam = Some(num(value)?),
            "fib" => fib = Some(elem(value)?),
            _ => return Err(err()),
        }
    }
    let family = Family::from_index(fam.ok_or_else(err)? as u8).ok_or_else(err)?;
    let level = level.ok_or_else(err)?;
    let mut lam = digits.ok_or_else(err)?;
    if side.ok_or_else(err)? != u32::from(family.side()) {
        return Err(err());
    }
    let mu = if family.is_twisted() { lam.pop().ok_or_else(err)? } else { FqElem::ZERO };
    if lam.len() != level as usize {
        return Err(err());
    }
    Ok((EdgeLabel { family, level, lam, mu }, fib))
}

impl EdgeLabel {
    /// Inverse of `Display`; digit codes are validated against `k`.
    pub fn parse(s: &str, k: &FqField) -> Result<Self, LabelParseError> {
        match parse_fields(s, k)? {
            (edge, None) => Ok(edge),
            _ => Err(LabelParseError(s.to_string())),
        }
    }
}

impl PropCosetLabel {
    pub fn parse(s: &str, k: &FqField) -> Result<Self, LabelParseError> {
        match parse_fields(s, k)? {
            (edge, Some(fiber)) => Ok(PropCosetLabel { edge, fiber }),
            _ => Err(LabelParseError(s.to_string())),
        }
    }
}
