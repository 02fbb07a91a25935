//! Decorated, enumerated, colored graphs and their canonical monomials.
//!
//! A graph is a set of vertices and a set of flags (half-edges) with an
//! incidence map `∂: flags → vertices` and an involution `s` on flags. Fixed
//! points of `s` are external lines; two-element orbits are inner edges.
//! Vertices carry colors from `C_v`, flags carry colors from `C_f`, and an
//! enumeration numbers the vertices `1..n`.
//!
//! Isomorphism classes of such graphs are in bijection with monomials in the
//! generators `L(i)`, `φ(i)` and `<φ(i)|ψ(j)>`, so [`CanonicalMonomial`] is the
//! working representation and [`DecoratedGraph`] is kept for construction and
//! cross-checking.

use std::collections::BTreeSet;
use std::fmt;

use crate::{Error, Result};

mod graph;
mod monomial;

pub use graph::{validate, DecoratedGraph, FlagData, GraphParts, Violation};
pub use monomial::{CanonicalMonomial, Leg};

/// Index of a vertex color in its [`ColorSignature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VColor(pub usize);

/// Index of a field color in its [`ColorSignature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FColor(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Boson,
    Fermion,
}

/// Vertex colors `C_v` and field colors `C_f`.
///
/// Names are kept sorted, so comparing color indices compares names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorSignature {
    vertex_colors: Vec<String>,
    field_colors: Vec<String>,
}

fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("`{name}` is not a valid color name")))
    }
}

impl ColorSignature {
    /// Only bosonic fields are accepted.
    pub fn new<V, F, S>(vertex_colors: V, fields: F) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        F: IntoIterator<Item = (S, Parity)>,
        S: Into<String>,
    {
        let vertex_colors: Vec<String> = vertex_colors.into_iter().map(Into::into).collect();
        let mut field_colors = Vec::new();
        for (name, parity) in fields {
            let name = name.into();
            if parity == Parity::Fermion {
                return Err(Error::Fermionic(name));
            }
            field_colors.push(name);
        }
        if vertex_colors.is_empty() {
            return Err(Error::InvalidModel("no vertex colors".into()));
        }
        let mut seen = BTreeSet::new();
        for name in vertex_colors.iter().chain(&field_colors) {
            check_name(name)?;
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidModel(format!("color name `{name}` is used twice")));
            }
        }
        let mut vertex_colors = vertex_colors;
        vertex_colors.sort();
        field_colors.sort();
        Ok(ColorSignature { vertex_colors, field_colors })
    }

    pub fn vertex_colors(&self) -> &[String] {
        &self.vertex_colors
    }

    pub fn field_colors(&self) -> &[String] {
        &self.field_colors
    }

    pub fn vertex_color(&self, name: &str) -> Option<VColor> {
        self.vertex_colors.iter().position(|n| n == name).map(VColor)
    }

    pub fn field_color(&self, name: &str) -> Option<FColor> {
        self.field_colors.iter().position(|n| n == name).map(FColor)
    }

    pub fn vertex_name(&self, c: VColor) -> &str {
        &self.vertex_colors[c.0]
    }

    pub fn field_name(&self, c: FColor) -> &str {
        &self.field_colors[c.0]
    }

    pub fn all_vertex_colors(&self) -> impl Iterator<Item = VColor> {
        (0..self.vertex_colors.len()).map(VColor)
    }
}

impl fmt::Display for ColorSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_v = {{{}}}, C_f = {{{}}}", self.vertex_colors.join(", "), self.field_colors.join(", "))
    }
}

/// Union-find connectivity on `0..n`.
pub(crate) fn components(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = n;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}
