//! The Wick generating operator and the morphism `R̃ : R_{Adm,T} → End(F^T)`.
//!
//! For vertex types `v_1, …, v_n` the Wick sum adds up every way of joining
//! flags of distinct vertices by admissible propagators. A contraction map
//! `Q` then sends a tuple of types to
//!
//! ```text
//! R̃_n(Q)(v_1 ⊗ … ⊗ v_n) = Σ_Γ w(Γ) Σ_L q(Γ, L) · [Γ/(Vert Γ, L)],
//! ```
//!
//! read back as an element of `F^T`. Applied to a group element this gives
//! the renormalization-group action on coupling constants as a formal
//! diffeomorphism.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::contraction_operad::{matchings, ContractionMap, ContractionOperad, QftModel};
use crate::formal_diffeo::{tuples, SeriesElement, TruncationOrder};
use crate::graphs::{CanonicalMonomial, ColorSignature, FColor, Leg, VColor};
use crate::operad_group::{group_to_series, EndOperad, GroupElement, MultilinearMap, OperadGroup};
use crate::{parse_rational, Error, Rational, Result};

/// A weighted sum of `n`-vertex diagram classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramSum {
    n: usize,
    terms: BTreeMap<CanonicalMonomial, Rational>,
}

impl DiagramSum {
    pub fn zero(n: usize) -> Self {
        DiagramSum { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, m: CanonicalMonomial, c: Rational) -> Result<()> {
        if m.n() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, found: m.n() });
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
        Ok(())
    }

    pub fn coefficient(&self, m: &CanonicalMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> &BTreeMap<CanonicalMonomial, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lines `COEFF * MONOMIAL`, sorted by monomial text.
    pub fn render(&self, sig: &ColorSignature) -> String {
        let mut lines: Vec<(String, &Rational)> = self.terms.iter().map(|(m, c)| (m.render(sig), c)).collect();
        lines.sort();
        let mut out = String::new();
        for (m, c) in lines {
            let _ = writeln!(out, "{c} * {m}");
        }
        out
    }

    pub fn parse(text: &str, n: usize, sig: &ColorSignature) -> Result<Self> {
        let mut out = DiagramSum::zero(n);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (c, m) = line.split_once(" * ").ok_or_else(|| Error::Parse(format!("missing ` * ` in `{line}`")))?;
            out.add(CanonicalMonomial::parse(m, sig)?, parse_rational(c)?).map_err(|e| Error::Parse(e.to_string()))?;
        }
        Ok(out)
    }
}

fn corollas(model: &QftModel, types: &[usize]) -> Result<(Vec<VColor>, Vec<Leg>)> {
    if types.is_empty() {
        return Err(Error::InvalidArgument("at least one vertex is needed".into()));
    }
    let mut vertices = Vec::new();
    let mut flags = Vec::new();
    for (s, &t) in types.iter().enumerate() {
        let vt = model
            .vertex_types()
            .get(t)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex type index {t}")))?;
        vertices.push(vt.color);
        flags.extend(vt.corolla.iter().map(|&c| Leg::new(s + 1, c)));
    }
    Ok((vertices, flags))
}

/// Sum over every involution of the corolla flags of `v_1(1) ⋯ v_n(n)` that
/// joins only admissible pairs on distinct vertices, each pairing counted once.
pub fn wick_enumerate(model: &QftModel, types: &[usize]) -> Result<DiagramSum> {
    let (vertices, flags) = corollas(model, types)?;
    let mut out = DiagramSum::zero(types.len());
    let allowed = |a: Leg, b: Leg| a.slot != b.slot && model.admits(a, b);
    matchings(&flags, &allowed, &mut |partner| {
        let externals = (0..flags.len()).filter(|&k| partner[k] == k).map(|k| flags[k]).collect();
        let propagators = (0..flags.len()).filter(|&k| partner[k] > k).map(|k| (flags[k], flags[partner[k]])).collect();
        out.add(CanonicalMonomial::new(vertices.clone(), externals, propagators)?, Rational::one())
    })?;
    Ok(out)
}

/// Generators of the commutative polynomial algebra the Wick operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Generator {
    Vertex(usize, VColor),
    Propagator(Leg, Leg),
    Field(Leg),
}

type Monomial = BTreeMap<Generator, u32>;
type Polynomial = BTreeMap<Monomial, Rational>;

/// `⟨φ(i)|ψ(j)⟩ ∂²/∂φ(i)∂ψ(j)` applied to a polynomial.
fn apply_edge(p: &Polynomial, a: Leg, b: Leg) -> Polynomial {
    let mut out = Polynomial::new();
    for (m, c) in p {
        let ea = m.get(&Generator::Field(a)).copied().unwrap_or(0);
        let eb = m.get(&Generator::Field(b)).copied().unwrap_or(0);
        if ea == 0 || eb == 0 {
            continue;
        }
        let mut next = m.clone();
        for (g, e) in [(Generator::Field(a), ea), (Generator::Field(b), eb)] {
            if e == 1 {
                next.remove(&g);
            } else {
                next.insert(g, e - 1);
            }
        }
        *next.entry(Generator::Propagator(a, b)).or_insert(0) += 1;
        *out.entry(next).or_insert_with(Rational::zero) += c * Rational::from_integer((ea * eb).into());
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn add_into(acc: &mut Polynomial, p: Polynomial, scale: &Rational) {
    for (m, c) in p {
        let slot = acc.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c * scale;
        if slot.is_zero() {
            acc.remove(&m);
        }
    }
}

/// `∏_{i<j} exp(Σ_{(φ,ψ) ∈ Adm} ⟨φ(i)|ψ(j)⟩ ∂²/∂φ(i)∂ψ(j))` applied to
/// `v_1(1) ⋯ v_n(n)` in the polynomial algebra on vertex, field and propagator
/// generators. Every exponential series terminates since the field degrees
/// are finite.
pub fn wick_differential(model: &QftModel, types: &[usize]) -> Result<DiagramSum> {
    let n = types.len();
    if n == 0 {
        return Err(Error::InvalidArgument("at least one vertex is needed".into()));
    }
    let mut start = Monomial::new();
    for (s, &t) in types.iter().enumerate() {
        let vt = model
            .vertex_types()
            .get(t)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex type index {t}")))?;
        start.insert(Generator::Vertex(s + 1, vt.color), 1);
        for &c in &vt.corolla {
            *start.entry(Generator::Field(Leg::new(s + 1, c))).or_insert(0) += 1;
        }
    }
    let mut poly: Polynomial = [(start, Rational::one())].into_iter().collect();
    for i in 1..=n {
        for j in i + 1..=n {
            let edges: Vec<(FColor, FColor)> = model.admissible().iter().copied().collect();
            // exp(D) = Σ_k D^k / k!, where D sums the admissible edge operators
            let mut acc = poly.clone();
            let mut power = poly.clone();
            let mut k = 1usize;
            loop {
                let mut next = Polynomial::new();
                for &(phi, psi) in &edges {
                    add_into(&mut next, apply_edge(&power, Leg::new(i, phi), Leg::new(j, psi)), &Rational::one());
                }
                if next.is_empty() {
                    break;
                }
                let scale = Rational::one() / crate::factorial(k);
                add_into(&mut acc, next.clone(), &scale);
                power = next;
                k += 1;
            }
            poly = acc;
        }
    }
    let mut out = DiagramSum::zero(n);
    for (m, c) in poly {
        let mut vertices = vec![VColor(0); n];
        let mut externals = Vec::new();
        let mut propagators = Vec::new();
        for (g, e) in m {
            for _ in 0..e {
                match g {
                    Generator::Vertex(s, c) => vertices[s - 1] = c,
                    Generator::Field(l) => externals.push(l),
                    Generator::Propagator(a, b) => propagators.push((a, b)),
                }
            }
        }
        out.add(CanonicalMonomial::new(vertices, externals, propagators)?, c)?;
    }
    Ok(out)
}

/// `Q̂(d) = Σ_Γ d(Γ) Σ_L q(Γ, L) · Γ/(Vert Γ, L)`, a sum of one-vertex diagrams.
pub fn hat_q(q: &ContractionMap, d: &DiagramSum) -> Result<DiagramSum> {
    if q.arity() != d.n() {
        return Err(Error::ArityMismatch { expected: q.arity(), found: d.n() });
    }
    let mut out = DiagramSum::zero(1);
    for (m, w) in d.terms() {
        if d.n() == 1 && !q.unit_coefficient().is_zero() {
            out.add(m.contract_all(m.vertex_color(1)), w * q.unit_coefficient())?;
        }
        if let Some(row) = q.row(m) {
            for (l, c) in row {
                out.add(m.contract_all(*l), w * c)?;
            }
        }
    }
    Ok(out)
}

/// Coupling constants: one coordinate of `F^T` per vertex type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionVector {
    coefficients: Vec<Rational>,
}

impl InteractionVector {
    pub fn zero(model: &QftModel) -> Self {
        InteractionVector { coefficients: vec![Rational::zero(); model.vertex_types().len()] }
    }

    /// From `(type name, value)` pairs; unnamed types are zero.
    pub fn from_named<'a>(model: &QftModel, values: impl IntoIterator<Item = (&'a str, Rational)>) -> Result<Self> {
        let mut out = Self::zero(model);
        for (name, v) in values {
            let k = model
                .type_by_name(name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex type `{name}`")))?;
            out.coefficients[k] += v;
        }
        Ok(out)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Image of the couplings under a formal diffeomorphism of `F^T`.
    pub fn transform(&self, s: &SeriesElement) -> Result<Self> {
        Ok(InteractionVector { coefficients: s.evaluate(&self.coefficients)? })
    }
}

/// The morphism `R̃` for one model, with Wick sums cached per type tuple.
pub struct RgMorphism<'a> {
    carrier: &'a ContractionOperad,
    permissive: bool,
    wick: Mutex<HashMap<Vec<usize>, Arc<DiagramSum>>>,
}

impl<'a> RgMorphism<'a> {
    /// Contractions that leave `T` are errors.
    pub fn new(carrier: &'a ContractionOperad) -> Self {
        RgMorphism { carrier, permissive: false, wick: Mutex::new(HashMap::new()) }
    }

    /// Contractions that leave `T` are dropped.
    pub fn permissive(carrier: &'a ContractionOperad) -> Self {
        RgMorphism { carrier, permissive: true, wick: Mutex::new(HashMap::new()) }
    }

    pub fn model(&self) -> &QftModel {
        self.carrier.model()
    }

    pub fn dim(&self) -> usize {
        self.model().vertex_types().len()
    }

    fn wick(&self, types: &[usize]) -> Result<Arc<DiagramSum>> {
        if let Some(w) = self.wick.lock().expect("cache poisoned").get(types) {
            return Ok(w.clone());
        }
        let w = Arc::new(wick_enumerate(self.model(), types)?);
        self.wick.lock().expect("cache poisoned").insert(types.to_vec(), w.clone());
        Ok(w)
    }

    /// `R̃_n(Q)` as a multilinear map on `F^T`.
    pub fn morphism(&self, q: &ContractionMap) -> Result<MultilinearMap> {
        let model = self.model();
        let n = q.arity();
        let dim = self.dim();
        let columns = tuples(dim, n)
            .into_par_iter()
            .map(|mu| -> Result<Vec<(usize, Vec<usize>, Rational)>> {
                let image = hat_q(q, self.wick(&mu)?.as_ref())?;
                let mut col = Vec::new();
                for (v, c) in image.terms() {
                    match model.type_index(v) {
                        Some(nu) => col.push((nu, mu.clone(), c.clone())),
                        None if self.permissive => {}
                        None => return Err(Error::OutsideVertexTypes(v.render(model.signature()))),
                    }
                }
                Ok(col)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = MultilinearMap::zero(dim, n);
        for (nu, mu, c) in columns.into_iter().flatten() {
            out.set(nu, &mu, c);
        }
        Ok(out)
    }

    /// The image of `g` in the group of formal diffeomorphisms of `F^T`.
    ///
    /// `g` must have `S_n`-invariant components, otherwise the image is not a
    /// series and `NotInvariant` is returned.
    pub fn rg_action(&self, g: &GroupElement<ContractionMap>) -> Result<SeriesElement> {
        let end = EndOperad::new(self.dim())?;
        let group = OperadGroup::new(&end, TruncationOrder::new(g.order())?);
        let components = g.components().iter().map(|q| self.morphism(q)).collect::<Result<Vec<_>>>()?;
        group_to_series(&group.element(components)?, self.dim())
    }
}

#[cfg(test)]
mod tests;
