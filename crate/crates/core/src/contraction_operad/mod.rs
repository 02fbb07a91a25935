//! The contraction operad on diagram classes and its physical suboperads.
//!
//! An element of arity `n` assigns to every diagram class `Γ` with `n`
//! vertices a formal combination `Σ_L q(Γ, L) L` of vertex colors. Partial
//! composition contracts the consecutive block `J = {i, …, i+j−1}`:
//!
//! ```text
//! q(Γ, K) = Σ_L q'(Γ_J, L) · q''(Γ/(J, L), K).
//! ```
//!
//! A [`QftModel`] fixes admissible connections, vertex types and the 1PI and
//! tadpole requirements; [`model_operad`] realises the intersection of the
//! corresponding suboperads over the finitely many diagrams each arity admits.

use std::collections::BTreeSet;

use crate::graphs::{CanonicalMonomial, ColorSignature, FColor, Leg, VColor};
use crate::{Error, Result};

mod closure;
mod enumerate;
mod map;
mod operad;
mod system;

pub use closure::{closure_check, ClosureReport};
pub(crate) use enumerate::matchings;
pub use enumerate::{enumerate_diagrams, universe_diagrams, DEFAULT_CAP};
pub use map::ContractionMap;
pub use operad::{model_operad, ContractionOperad};
pub use system::SystemFilter;

/// A one-vertex diagram allowed in the theory: a vertex color and its corolla.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexType {
    pub name: String,
    pub color: VColor,
    /// Flag colors, kept sorted.
    pub corolla: Vec<FColor>,
}

impl VertexType {
    pub fn new(name: impl Into<String>, color: VColor, mut corolla: Vec<FColor>) -> Self {
        corolla.sort();
        VertexType { name: name.into(), color, corolla }
    }

    pub fn monomial(&self) -> CanonicalMonomial {
        CanonicalMonomial::corolla(self.color, &self.corolla)
    }
}

/// Colors, admissible connections `Adm`, vertex types `T` and the 1PI/tadpole flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QftModel {
    signature: ColorSignature,
    admissible: BTreeSet<(FColor, FColor)>,
    vertex_types: Vec<VertexType>,
    require_1pi: bool,
    forbid_tadpoles: bool,
}

impl QftModel {
    /// With `close_admissible` the set `Adm` is closed under swapping; without
    /// it `Adm` is taken as given, and an asymmetric set makes admissibility
    /// depend on the orientation of a propagator.
    pub fn new(
        signature: ColorSignature,
        admissible: impl IntoIterator<Item = (FColor, FColor)>,
        vertex_types: Vec<VertexType>,
        require_1pi: bool,
        forbid_tadpoles: bool,
        close_admissible: bool,
    ) -> Result<Self> {
        let nf = signature.field_colors().len();
        let nv = signature.vertex_colors().len();
        let mut adm = BTreeSet::new();
        for (a, b) in admissible {
            if a.0 >= nf || b.0 >= nf {
                return Err(Error::InvalidModel("admissible pair uses an unknown field".into()));
            }
            adm.insert((a, b));
            if close_admissible {
                adm.insert((b, a));
            }
        }
        if adm.is_empty() {
            return Err(Error::InvalidModel("the set of admissible connections is empty".into()));
        }
        if vertex_types.is_empty() {
            return Err(Error::InvalidModel("no vertex types".into()));
        }
        let mut names = BTreeSet::new();
        let mut shapes = BTreeSet::new();
        for t in &vertex_types {
            if t.color.0 >= nv || t.corolla.iter().any(|c| c.0 >= nf) {
                return Err(Error::InvalidModel(format!("vertex type `{}` uses an unknown color", t.name)));
            }
            let ok = !t.name.is_empty() && t.name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidModel(format!("`{}` is not a valid vertex type name", t.name)));
            }
            if !names.insert(t.name.clone()) {
                return Err(Error::InvalidModel(format!("vertex type name `{}` is used twice", t.name)));
            }
            if !shapes.insert(t.monomial()) {
                return Err(Error::InvalidModel(format!("vertex type `{}` is listed twice", t.name)));
            }
        }
        Ok(QftModel { signature, admissible: adm, vertex_types, require_1pi, forbid_tadpoles })
    }

    pub fn signature(&self) -> &ColorSignature {
        &self.signature
    }

    pub fn admissible(&self) -> &BTreeSet<(FColor, FColor)> {
        &self.admissible
    }

    pub fn is_admissible_symmetric(&self) -> bool {
        self.admissible.iter().all(|&(a, b)| self.admissible.contains(&(b, a)))
    }

    pub fn vertex_types(&self) -> &[VertexType] {
        &self.vertex_types
    }

    pub fn require_1pi(&self) -> bool {
        self.require_1pi
    }

    pub fn forbid_tadpoles(&self) -> bool {
        self.forbid_tadpoles
    }

    /// Whether the propagator `<a|b>`, in normal-form orientation, is admissible.
    pub fn admits(&self, a: Leg, b: Leg) -> bool {
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        self.admissible.contains(&(x.color, y.color))
    }

    /// Position in `T` of a one-vertex diagram.
    pub fn type_index(&self, m: &CanonicalMonomial) -> Option<usize> {
        if m.n() != 1 || !m.propagators().is_empty() {
            return None;
        }
        let color = m.vertex_color(1);
        let corolla = m.external_colors();
        self.vertex_types.iter().position(|t| t.color == color && t.corolla == corolla)
    }

    pub fn type_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_types.iter().position(|t| t.name == name)
    }

    pub fn type_names(&self) -> Vec<String> {
        self.vertex_types.iter().map(|t| t.name.clone()).collect()
    }

    /// The system `S_1PI ∩ S_Adm ∩ S_T` (1PI only when required).
    pub fn system(&self) -> SystemFilter {
        let mut parts = Vec::new();
        if self.require_1pi {
            parts.push(SystemFilter::one_pi());
        }
        parts.push(SystemFilter::admissible(self));
        parts.push(SystemFilter::vertex_types(self));
        SystemFilter::intersection(parts)
    }
}

#[cfg(test)]
mod tests;
