use std::fmt::Write as _;

use super::{components, ColorSignature, FColor, VColor};
use crate::combinatorics::Permutation;
use crate::{Error, Result};

/// A field at a vertex slot, `φ(i)`; ordered by slot, then color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leg {
    pub slot: usize,
    pub color: FColor,
}

impl Leg {
    pub fn new(slot: usize, color: FColor) -> Self {
        Leg { slot, color }
    }
}

fn ordered(a: Leg, b: Leg) -> (Leg, Leg) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The monomial `M_Γ` of an enumerated graph, in normal form.
///
/// Slot `i` (1-based) carries exactly one vertex generator; every external
/// flag contributes `φ(i)` and every inner edge `<φ(i)|ψ(j)>` with
/// `(i, φ) <= (j, ψ)`. Both multisets are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalMonomial {
    vertices: Vec<VColor>,
    externals: Vec<Leg>,
    propagators: Vec<(Leg, Leg)>,
}

impl CanonicalMonomial {
    /// Normalises the generator lists; slots must lie in `1..=vertices.len()`.
    pub fn new(vertices: Vec<VColor>, mut externals: Vec<Leg>, propagators: Vec<(Leg, Leg)>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::InvalidGraph("a monomial needs at least one vertex".into()));
        }
        let bad = |l: &Leg| l.slot == 0 || l.slot > n;
        if externals.iter().any(bad) || propagators.iter().any(|(a, b)| bad(a) || bad(b)) {
            return Err(Error::InvalidGraph(format!("field index outside 1..={n}")));
        }
        externals.sort();
        let mut propagators: Vec<(Leg, Leg)> = propagators.into_iter().map(|(a, b)| ordered(a, b)).collect();
        propagators.sort();
        Ok(CanonicalMonomial { vertices, externals, propagators })
    }

    /// The single vertex `L(1)` carrying the given external legs.
    pub fn corolla(color: VColor, legs: &[FColor]) -> Self {
        let externals = legs.iter().map(|&c| Leg::new(1, c)).collect();
        CanonicalMonomial::new(vec![color], externals, Vec::new()).expect("slot 1 exists")
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_colors(&self) -> &[VColor] {
        &self.vertices
    }

    pub fn vertex_color(&self, slot: usize) -> VColor {
        self.vertices[slot - 1]
    }

    pub fn externals(&self) -> &[Leg] {
        &self.externals
    }

    pub fn propagators(&self) -> &[(Leg, Leg)] {
        &self.propagators
    }

    /// Sorted colors of all flags at a slot, external and internal.
    pub fn corolla_at(&self, slot: usize) -> Vec<FColor> {
        let mut out: Vec<FColor> = self.externals.iter().filter(|l| l.slot == slot).map(|l| l.color).collect();
        for (a, b) in &self.propagators {
            for l in [a, b] {
                if l.slot == slot {
                    out.push(l.color);
                }
            }
        }
        out.sort();
        out
    }

    /// Sorted colors of the external legs.
    pub fn external_colors(&self) -> Vec<FColor> {
        let mut out: Vec<FColor> = self.externals.iter().map(|l| l.color).collect();
        out.sort();
        out
    }

    pub fn has_tadpole(&self) -> bool {
        self.propagators.iter().any(|(a, b)| a.slot == b.slot)
    }

    pub fn is_connected(&self) -> bool {
        components(self.n(), self.propagators.iter().map(|(a, b)| (a.slot - 1, b.slot - 1))) == 1
    }

    /// Connected, at least two vertices, no tadpoles, and connected after cutting any inner edge.
    pub fn is_1pi(&self) -> bool {
        if self.n() < 2 || self.has_tadpole() || !self.is_connected() {
            return false;
        }
        (0..self.propagators.len()).all(|cut| {
            let edges = self
                .propagators
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != cut)
                .map(|(_, (a, b))| (a.slot - 1, b.slot - 1));
            components(self.n(), edges) == 1
        })
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::InvalidArgument("empty vertex subset".into()));
        }
        if subset.windows(2).any(|w| w[0] >= w[1]) || subset.iter().any(|&s| s == 0 || s > self.n()) {
            return Err(Error::InvalidArgument(format!("{subset:?} is not an increasing subset of 1..={}", self.n())));
        }
        Ok(())
    }

    /// `Γ_J` for an increasing slot subset `J`, renumbered monotonically.
    ///
    /// Inner edges with one end in `J` become external flags at that end.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        self.check_subset(subset)?;
        let mut new_slot = vec![0; self.n() + 1];
        for (k, &s) in subset.iter().enumerate() {
            new_slot[s] = k + 1;
        }
        let vertices = subset.iter().map(|&s| self.vertices[s - 1]).collect();
        let mut externals: Vec<Leg> = self
            .externals
            .iter()
            .filter(|l| new_slot[l.slot] > 0)
            .map(|l| Leg::new(new_slot[l.slot], l.color))
            .collect();
        let mut propagators = Vec::new();
        for (a, b) in &self.propagators {
            match (new_slot[a.slot], new_slot[b.slot]) {
                (0, 0) => {}
                (x, 0) => externals.push(Leg::new(x, a.color)),
                (0, y) => externals.push(Leg::new(y, b.color)),
                (x, y) => propagators.push((Leg::new(x, a.color), Leg::new(y, b.color))),
            }
        }
        CanonicalMonomial::new(vertices, externals, propagators)
    }

    /// Slot map of `Γ/J`: the contracted vertex takes the place of `min J`.
    fn contraction_slots(&self, subset: &[usize]) -> Vec<usize> {
        let min = subset[0];
        let mut new_slot = vec![0; self.n() + 1];
        let mut next = 0;
        for s in 1..=self.n() {
            if s == min || subset.binary_search(&s).is_err() {
                next += 1;
                new_slot[s] = next;
            }
        }
        for &s in subset {
            new_slot[s] = new_slot[min];
        }
        new_slot
    }

    /// `Γ/(J, L)`: the vertices of `J` are merged into one vertex of color `L`
    /// and the inner edges of `Γ_J` disappear.
    pub fn contract(&self, subset: &[usize], color: VColor) -> Result<Self> {
        self.check_subset(subset)?;
        let new_slot = self.contraction_slots(subset);
        let inside = |s: usize| subset.binary_search(&s).is_ok();
        let mut vertices = Vec::with_capacity(self.n() - subset.len() + 1);
        for s in 1..=self.n() {
            if s == subset[0] {
                vertices.push(color);
            } else if !inside(s) {
                vertices.push(self.vertices[s - 1]);
            }
        }
        let externals = self.externals.iter().map(|l| Leg::new(new_slot[l.slot], l.color)).collect();
        let propagators = self
            .propagators
            .iter()
            .filter(|(a, b)| !(inside(a.slot) && inside(b.slot)))
            .map(|(a, b)| (Leg::new(new_slot[a.slot], a.color), Leg::new(new_slot[b.slot], b.color)))
            .collect();
        CanonicalMonomial::new(vertices, externals, propagators)
    }

    /// Contraction of every vertex: one vertex of color `L` with the external legs.
    pub fn contract_all(&self, color: VColor) -> Self {
        CanonicalMonomial::corolla(color, &self.external_colors())
    }

    /// Right action on enumerations: the vertex numbered `i` is renumbered `σ⁻¹(i)`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.n() {
            return Err(Error::ArityMismatch { expected: self.n(), found: sigma.len() });
        }
        let inv = sigma.inverse();
        let vertices = (1..=self.n()).map(|k| self.vertices[sigma.apply(k) - 1]).collect();
        let map = |l: &Leg| Leg::new(inv.apply(l.slot), l.color);
        let externals = self.externals.iter().map(map).collect();
        let propagators = self.propagators.iter().map(|(a, b)| (map(a), map(b))).collect();
        CanonicalMonomial::new(vertices, externals, propagators)
    }

    /// Generators sorted by kind, then by text: vertices, propagators, fields.
    pub fn render(&self, sig: &ColorSignature) -> String {
        let leg = |l: &Leg| format!("{}({})", sig.field_name(l.color), l.slot);
        let mut vertices: Vec<String> =
            self.vertices.iter().enumerate().map(|(k, &c)| format!("{}({})", sig.vertex_name(c), k + 1)).collect();
        let mut propagators: Vec<String> =
            self.propagators.iter().map(|(a, b)| format!("<{}|{}>", leg(a), leg(b))).collect();
        let mut externals: Vec<String> = self.externals.iter().map(leg).collect();
        vertices.sort();
        propagators.sort();
        externals.sort();
        let mut out = String::new();
        for (k, g) in vertices.iter().chain(&propagators).chain(&externals).enumerate() {
            if k > 0 {
                out.push('*');
            }
            let _ = write!(out, "{g}");
        }
        out
    }

    /// Parses the `*`-separated generator grammar; generators may come in any order.
    pub fn parse(text: &str, sig: &ColorSignature) -> Result<Self> {
        fn named(g: &str) -> Result<(&str, usize)> {
            let g = g.trim();
            let open = g.find('(').ok_or_else(|| Error::Parse(format!("missing `(` in `{g}`")))?;
            let idx = g[open + 1..].strip_suffix(')').ok_or_else(|| Error::Parse(format!("missing `)` in `{g}`")))?;
            let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("bad index in `{g}`")))?;
            if idx == 0 {
                return Err(Error::Parse(format!("indices start at 1 in `{g}`")));
            }
            Ok((&g[..open], idx))
        }
        let field = |g: &str| -> Result<Leg> {
            let (name, idx) = named(g)?;
            let c = sig.field_color(name).ok_or_else(|| Error::Parse(format!("unknown field color `{name}`")))?;
            Ok(Leg::new(idx, c))
        };
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty monomial".into()));
        }
        let mut vertices: Vec<(usize, VColor)> = Vec::new();
        let mut externals = Vec::new();
        let mut propagators = Vec::new();
        for g in text.split('*').map(str::trim) {
            if let Some(inner) = g.strip_prefix('<') {
                let inner = inner.strip_suffix('>').ok_or_else(|| Error::Parse(format!("missing `>` in `{g}`")))?;
                let (a, b) = inner.split_once('|').ok_or_else(|| Error::Parse(format!("missing `|` in `{g}`")))?;
                propagators.push((field(a)?, field(b)?));
            } else {
                let (name, idx) = named(g)?;
                if let Some(c) = sig.vertex_color(name) {
                    vertices.push((idx, c));
                } else if sig.field_color(name).is_some() {
                    externals.push(field(g)?);
                } else {
                    return Err(Error::Parse(format!("unknown color `{name}`")));
                }
            }
        }
        vertices.sort();
        let n = vertices.len();
        for (k, (idx, _)) in vertices.iter().enumerate() {
            if *idx != k + 1 {
                return Err(Error::Parse(format!("vertex generators must cover 1..={n} exactly once in `{text}`")));
            }
        }
        let vertices = vertices.into_iter().map(|(_, c)| c).collect();
        CanonicalMonomial::new(vertices, externals, propagators).map_err(|e| Error::Parse(e.to_string()))
    }
}
