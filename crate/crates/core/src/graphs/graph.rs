use std::fmt;

use super::{components, CanonicalMonomial, ColorSignature, FColor, Leg, VColor};
use crate::combinatorics::Permutation;
use crate::{Error, Result};

/// A flag: the vertex it is attached to, its partner under the involution
/// (itself for an external line) and its color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlagData {
    pub vertex: usize,
    pub partner: usize,
    pub color: FColor,
}

/// Unchecked graph data. Vertex and flag ids are the vector indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphParts {
    pub vertex_colors: Vec<VColor>,
    /// `enumeration[v]` is the number `enu(v)` in `1..=n`.
    pub enumeration: Vec<usize>,
    pub flags: Vec<FlagData>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    IncidenceOutOfRange { flag: usize },
    PartnerOutOfRange { flag: usize },
    NotAnInvolution { flag: usize },
    EnumerationLength,
    EnumerationNotBijective,
    UnknownVertexColor { vertex: usize },
    UnknownFieldColor { flag: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::IncidenceOutOfRange { flag } => {
                write!(f, "flag {flag} is attached to a missing vertex")
            }
            Violation::PartnerOutOfRange { flag } => write!(f, "flag {flag} has a missing partner"),
            Violation::NotAnInvolution { flag } => write!(f, "s(s({flag})) != {flag}"),
            Violation::EnumerationLength => write!(f, "enumeration does not cover every vertex"),
            Violation::EnumerationNotBijective => {
                write!(f, "enumeration is not a bijection onto 1..n")
            }
            Violation::UnknownVertexColor { vertex } => {
                write!(f, "vertex {vertex} has an unknown color")
            }
            Violation::UnknownFieldColor { flag } => write!(f, "flag {flag} has an unknown color"),
        }
    }
}

/// Every violated structural invariant, in a fixed order.
pub fn validate(parts: &GraphParts, sig: &ColorSignature) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = parts.vertex_colors.len();
    if n == 0 {
        out.push(Violation::NoVertices);
    }
    for (v, c) in parts.vertex_colors.iter().enumerate() {
        if c.0 >= sig.vertex_colors().len() {
            out.push(Violation::UnknownVertexColor { vertex: v });
        }
    }
    if parts.enumeration.len() != n {
        out.push(Violation::EnumerationLength);
    } else {
        let mut sorted = parts.enumeration.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(k, &e)| e != k + 1) {
            out.push(Violation::EnumerationNotBijective);
        }
    }
    let nf = parts.flags.len();
    for (k, fl) in parts.flags.iter().enumerate() {
        if fl.vertex >= n {
            out.push(Violation::IncidenceOutOfRange { flag: k });
        }
        if fl.color.0 >= sig.field_colors().len() {
            out.push(Violation::UnknownFieldColor { flag: k });
        }
        if fl.partner >= nf {
            out.push(Violation::PartnerOutOfRange { flag: k });
        } else if parts.flags[fl.partner].partner != k {
            out.push(Violation::NotAnInvolution { flag: k });
        }
    }
    out
}

/// A validated enumerated colored graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedGraph {
    parts: GraphParts,
}

impl DecoratedGraph {
    pub fn new(parts: GraphParts, sig: &ColorSignature) -> Result<Self> {
        let violations = validate(&parts, sig);
        if violations.is_empty() {
            Ok(DecoratedGraph { parts })
        } else {
            let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
            Err(Error::InvalidGraph(text.join("; ")))
        }
    }

    pub fn parts(&self) -> &GraphParts {
        &self.parts
    }

    pub fn vertex_count(&self) -> usize {
        self.parts.vertex_colors.len()
    }

    fn is_external(&self, flag: usize) -> bool {
        self.parts.flags[flag].partner == flag
    }

    /// Inner edges as vertex pairs, one entry per edge.
    fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let fl = &self.parts.flags;
        fl.iter().enumerate().filter(|(k, f)| f.partner > *k).map(move |(_, f)| (f.vertex, fl[f.partner].vertex))
    }

    pub fn has_tadpole(&self) -> bool {
        self.edges().any(|(a, b)| a == b)
    }

    pub fn is_connected(&self) -> bool {
        components(self.vertex_count(), self.edges()) == 1
    }

    pub fn is_1pi(&self) -> bool {
        if self.vertex_count() < 2 || self.has_tadpole() || !self.is_connected() {
            return false;
        }
        let edges: Vec<(usize, usize)> = self.edges().collect();
        (0..edges.len()).all(|cut| {
            let rest = edges.iter().enumerate().filter(|(k, _)| *k != cut).map(|(_, e)| *e);
            components(self.vertex_count(), rest) == 1
        })
    }

    fn check_subset(&self, subset: &[usize]) -> Result<Vec<bool>> {
        if subset.is_empty() {
            return Err(Error::InvalidArgument("empty vertex subset".into()));
        }
        let mut member = vec![false; self.vertex_count()];
        for &v in subset {
            if v >= member.len() || member[v] {
                return Err(Error::InvalidArgument(format!("{subset:?} is not a vertex subset")));
            }
            member[v] = true;
        }
        Ok(member)
    }

    /// Rank of each enumeration value among `values`, 1-based.
    fn monotone(values: &[usize]) -> Vec<usize> {
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        values.iter().map(|v| sorted.binary_search(v).expect("present") + 1).collect()
    }

    /// `Γ_J`: vertices `J`, the flags on them, and the induced enumeration.
    pub fn subgraph(&self, subset: &[usize]) -> Result<Self> {
        let member = self.check_subset(subset)?;
        let mut vertex_id = vec![usize::MAX; self.vertex_count()];
        for (k, &v) in subset.iter().enumerate() {
            vertex_id[v] = k;
        }
        let kept: Vec<usize> = (0..self.parts.flags.len()).filter(|&k| member[self.parts.flags[k].vertex]).collect();
        let mut flag_id = vec![usize::MAX; self.parts.flags.len()];
        for (k, &f) in kept.iter().enumerate() {
            flag_id[f] = k;
        }
        let flags = kept
            .iter()
            .map(|&f| {
                let d = self.parts.flags[f];
                let partner = if member[self.parts.flags[d.partner].vertex] { flag_id[d.partner] } else { flag_id[f] };
                FlagData { vertex: vertex_id[d.vertex], partner, color: d.color }
            })
            .collect();
        let enu: Vec<usize> = subset.iter().map(|&v| self.parts.enumeration[v]).collect();
        Ok(DecoratedGraph {
            parts: GraphParts {
                vertex_colors: subset.iter().map(|&v| self.parts.vertex_colors[v]).collect(),
                enumeration: Self::monotone(&enu),
                flags,
            },
        })
    }

    /// `Γ/(J, L)`: `J` is shrunk to a new vertex `v_J` of color `L`, numbered by `min enu(J)`.
    pub fn contract(&self, subset: &[usize], color: VColor) -> Result<Self> {
        let member = self.check_subset(subset)?;
        let mut vertex_id = vec![usize::MAX; self.vertex_count()];
        let mut vertex_colors = vec![color];
        let mut enu = vec![subset.iter().map(|&v| self.parts.enumeration[v]).min().expect("nonempty")];
        for v in 0..self.vertex_count() {
            if member[v] {
                vertex_id[v] = 0;
            } else {
                vertex_id[v] = vertex_colors.len();
                vertex_colors.push(self.parts.vertex_colors[v]);
                enu.push(self.parts.enumeration[v]);
            }
        }
        let fl = &self.parts.flags;
        let kept: Vec<usize> = (0..fl.len())
            .filter(|&k| self.is_external(k) || !(member[fl[k].vertex] && member[fl[fl[k].partner].vertex]))
            .collect();
        let mut flag_id = vec![usize::MAX; fl.len()];
        for (k, &f) in kept.iter().enumerate() {
            flag_id[f] = k;
        }
        let flags = kept
            .iter()
            .map(|&f| FlagData { vertex: vertex_id[fl[f].vertex], partner: flag_id[fl[f].partner], color: fl[f].color })
            .collect();
        Ok(DecoratedGraph { parts: GraphParts { vertex_colors, enumeration: Self::monotone(&enu), flags } })
    }

    /// Right action on enumerations: `enu'(v) = σ⁻¹(enu(v))`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.vertex_count() {
            return Err(Error::ArityMismatch { expected: self.vertex_count(), found: sigma.len() });
        }
        let inv = sigma.inverse();
        let mut parts = self.parts.clone();
        for e in parts.enumeration.iter_mut() {
            *e = inv.apply(*e);
        }
        Ok(DecoratedGraph { parts })
    }

    pub fn to_monomial(&self) -> CanonicalMonomial {
        let p = &self.parts;
        let mut vertices = vec![VColor(0); self.vertex_count()];
        for (v, &e) in p.enumeration.iter().enumerate() {
            vertices[e - 1] = p.vertex_colors[v];
        }
        let leg = |f: usize| Leg::new(p.enumeration[p.flags[f].vertex], p.flags[f].color);
        let externals = (0..p.flags.len()).filter(|&k| self.is_external(k)).map(leg).collect();
        let propagators =
            (0..p.flags.len()).filter(|&k| p.flags[k].partner > k).map(|k| (leg(k), leg(p.flags[k].partner))).collect();
        CanonicalMonomial::new(vertices, externals, propagators).expect("validated graph")
    }

    /// A representative graph: vertex `i-1` is numbered `i`, flags in generator order.
    pub fn from_monomial(m: &CanonicalMonomial, sig: &ColorSignature) -> Result<Self> {
        let mut flags = Vec::new();
        for l in m.externals() {
            let k = flags.len();
            flags.push(FlagData { vertex: l.slot - 1, partner: k, color: l.color });
        }
        for (a, b) in m.propagators() {
            let k = flags.len();
            flags.push(FlagData { vertex: a.slot - 1, partner: k + 1, color: a.color });
            flags.push(FlagData { vertex: b.slot - 1, partner: k, color: b.color });
        }
        let parts = GraphParts { vertex_colors: m.vertex_colors().to_vec(), enumeration: (1..=m.n()).collect(), flags };
        DecoratedGraph::new(parts, sig)
    }
}
