use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use super::QftModel;
use crate::graphs::{CanonicalMonomial, FColor, VColor};

type Predicate = dyn Fn(&CanonicalMonomial, VColor) -> bool + Send + Sync;

#[derive(Clone)]
enum Kind {
    All,
    OnePi,
    Admissible { admissible: BTreeSet<(FColor, FColor)>, forbid_tadpoles: bool },
    VertexTypes { types: BTreeSet<CanonicalMonomial> },
    Intersection(Vec<SystemFilter>),
    Custom(Arc<Predicate>),
}

/// A system of subsets `S(n) ⊆ Dgm(n) × C_v`, with memoised membership.
pub struct SystemFilter {
    kind: Kind,
    cache: Mutex<HashMap<(CanonicalMonomial, VColor), bool>>,
}

impl Clone for SystemFilter {
    fn clone(&self) -> Self {
        SystemFilter::from_kind(self.kind.clone())
    }
}

impl fmt::Debug for SystemFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::All => write!(f, "All"),
            Kind::OnePi => write!(f, "OnePi"),
            Kind::Admissible { forbid_tadpoles, .. } => write!(f, "Admissible(forbid_tadpoles = {forbid_tadpoles})"),
            Kind::VertexTypes { types } => write!(f, "VertexTypes({} types)", types.len()),
            Kind::Intersection(parts) => f.debug_list().entries(parts).finish(),
            Kind::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl SystemFilter {
    fn from_kind(kind: Kind) -> Self {
        SystemFilter { kind, cache: Mutex::new(HashMap::new()) }
    }

    /// Every pair `(Γ, L)`.
    pub fn all() -> Self {
        Self::from_kind(Kind::All)
    }

    /// 1PI diagrams, any color.
    pub fn one_pi() -> Self {
        Self::from_kind(Kind::OnePi)
    }

    /// `Adm`-admissible diagrams, without tadpoles when the model forbids them.
    pub fn admissible(model: &QftModel) -> Self {
        Self::from_kind(Kind::Admissible {
            admissible: model.admissible().clone(),
            forbid_tadpoles: model.forbid_tadpoles(),
        })
    }

    /// Pairs whose single vertices and full contraction all lie in `T`.
    pub fn vertex_types(model: &QftModel) -> Self {
        Self::from_kind(Kind::VertexTypes { types: model.vertex_types().iter().map(|t| t.monomial()).collect() })
    }

    pub fn intersection(parts: Vec<SystemFilter>) -> Self {
        Self::from_kind(Kind::Intersection(parts))
    }

    pub fn custom(f: impl Fn(&CanonicalMonomial, VColor) -> bool + Send + Sync + 'static) -> Self {
        Self::from_kind(Kind::Custom(Arc::new(f)))
    }

    fn evaluate(&self, m: &CanonicalMonomial, color: VColor) -> bool {
        match &self.kind {
            Kind::All => true,
            Kind::OnePi => m.is_1pi(),
            Kind::Admissible { admissible, forbid_tadpoles } => {
                !(*forbid_tadpoles && m.has_tadpole())
                    && m.propagators().iter().all(|(a, b)| admissible.contains(&(a.color, b.color)))
            }
            Kind::VertexTypes { types } => {
                (1..=m.n()).all(|s| types.contains(&CanonicalMonomial::corolla(m.vertex_color(s), &m.corolla_at(s))))
                    && types.contains(&m.contract_all(color))
            }
            Kind::Intersection(parts) => parts.iter().all(|p| p.contains(m, color)),
            Kind::Custom(f) => f(m, color),
        }
    }

    /// Whether `(Γ, L) ∈ S(n)`.
    pub fn contains(&self, m: &CanonicalMonomial, color: VColor) -> bool {
        if matches!(self.kind, Kind::All) {
            return true;
        }
        let key = (m.clone(), color);
        if let Some(&hit) = self.cache.lock().expect("cache poisoned").get(&key) {
            return hit;
        }
        let value = self.evaluate(m, color);
        self.cache.lock().expect("cache poisoned").insert(key, value);
        value
    }
}
