use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rand::{Rng, RngCore};
use rayon::prelude::*;

use super::{enumerate_diagrams, universe_diagrams, ContractionMap, QftModel, SystemFilter, DEFAULT_CAP};
use crate::combinatorics::Permutation;
use crate::graphs::{CanonicalMonomial, VColor};
use crate::operad_group::Operad;
use crate::{random_nonzero_rational, random_rational, Error, Rational, Result};

#[derive(Debug)]
struct Domain {
    list: Vec<CanonicalMonomial>,
    members: HashSet<CanonicalMonomial>,
}

/// The suboperad of the contraction operad cut out by a system `S`, over
/// the finitely many diagram classes each arity admits.
#[derive(Debug)]
pub struct ContractionOperad {
    model: QftModel,
    system: SystemFilter,
    universal: bool,
    cap: usize,
    domains: Mutex<HashMap<usize, Arc<Domain>>>,
}

/// The suboperad `R_{Adm,T}` of a model (intersected with the 1PI part when required).
pub fn model_operad(model: &QftModel) -> ContractionOperad {
    ContractionOperad::new(model.clone(), model.system(), DEFAULT_CAP)
}

impl ContractionOperad {
    /// Arity-`n` elements live on the model's diagrams `Γ` with some `(Γ, L) ∈ S(n)`.
    pub fn new(model: QftModel, system: SystemFilter, cap: usize) -> Self {
        ContractionOperad { model, system, universal: false, cap, domains: Mutex::new(HashMap::new()) }
    }

    /// The full contraction operad restricted to maps supported on
    /// [`universe_diagrams`]; composition is exact there.
    pub fn universal(model: QftModel, cap: usize) -> Self {
        ContractionOperad {
            model,
            system: SystemFilter::all(),
            universal: true,
            cap,
            domains: Mutex::new(HashMap::new()),
        }
    }

    pub fn model(&self) -> &QftModel {
        &self.model
    }

    pub fn system(&self) -> &SystemFilter {
        &self.system
    }

    fn domain_data(&self, n: usize) -> Result<Arc<Domain>> {
        if let Some(d) = self.domains.lock().expect("cache poisoned").get(&n) {
            return Ok(d.clone());
        }
        let candidates = if self.universal {
            universe_diagrams(&self.model, n, self.cap)?
        } else {
            enumerate_diagrams(&self.model, n, self.cap)?
        };
        let list: Vec<CanonicalMonomial> = candidates.into_iter().filter(|m| !self.colors_for(m).is_empty()).collect();
        let members = list.iter().cloned().collect();
        let d = Arc::new(Domain { list, members });
        self.domains.lock().expect("cache poisoned").insert(n, d.clone());
        Ok(d)
    }

    /// Diagram classes an arity-`n` element may be supported on, sorted by text.
    pub fn domain(&self, n: usize) -> Result<Vec<CanonicalMonomial>> {
        Ok(self.domain_data(n)?.list.clone())
    }

    fn colors_for(&self, m: &CanonicalMonomial) -> Vec<VColor> {
        self.model.signature().all_vertex_colors().filter(|&c| self.system.contains(m, c)).collect()
    }

    /// Whether `(Γ, L)` is a coordinate of the carrier.
    pub fn in_carrier(&self, m: &CanonicalMonomial, color: VColor) -> Result<bool> {
        Ok(self.domain_data(m.n())?.members.contains(m) && self.system.contains(m, color))
    }

    /// Fails with `OutsideCarrier` on the first coordinate not in the carrier.
    pub fn check_element(&self, q: &ContractionMap) -> Result<()> {
        for (m, c, _) in q.iter() {
            if !self.in_carrier(m, c)? {
                let sig = self.model.signature();
                return Err(Error::OutsideCarrier(format!("{} -> {}", m.render(sig), sig.vertex_name(c))));
            }
        }
        Ok(())
    }

    /// Parses one element of the given arity and checks it lies in the carrier.
    pub fn parse_element(&self, text: &str, arity: usize) -> Result<ContractionMap> {
        let q = ContractionMap::parse(text, arity, self.model.signature())?;
        self.check_element(&q)?;
        Ok(q)
    }

    /// Splits rendered lines by vertex count into components of arities `2..=order`.
    /// Lines with more than `order` vertices give `OrderMismatch`.
    pub fn parse_components(&self, text: &str, order: usize) -> Result<Vec<ContractionMap>> {
        let sig = self.model.signature();
        let mut by_arity: BTreeMap<usize, String> = BTreeMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let m = line.split("->").next().unwrap_or_default();
            let n = CanonicalMonomial::parse(m, sig)?.n();
            if n > order {
                return Err(Error::OrderMismatch(n, order));
            }
            if n < 2 {
                return Err(Error::Parse(format!("`{line}` has a single vertex; components start in arity 2")));
            }
            let buf = by_arity.entry(n).or_default();
            buf.push_str(line);
            buf.push('\n');
        }
        (2..=order).map(|n| self.parse_element(by_arity.get(&n).map_or("", String::as_str), n)).collect()
    }

    /// Drops every coordinate outside `s`.
    pub fn restrict(&self, q: &ContractionMap, s: &SystemFilter) -> ContractionMap {
        let mut out = ContractionMap::zero(q.arity());
        out.set_unit(q.unit_coefficient().clone());
        for (m, c, v) in q.iter() {
            if s.contains(m, c) {
                out.add_entry(m.clone(), c, v.clone()).expect("same arity");
            }
        }
        out
    }

    /// Whether every nonzero coordinate lies in `s`.
    pub fn in_suboperad(&self, q: &ContractionMap, s: &SystemFilter) -> bool {
        q.iter().all(|(m, c, _)| s.contains(m, c))
    }

    fn check(&self, a: &ContractionMap) -> Result<()> {
        if a.arity() == 0 {
            return Err(Error::InvalidArgument("arity 0".into()));
        }
        if a.arity() != 1 && !a.unit_coefficient().is_zero() {
            return Err(Error::InvalidArgument("unit part outside arity 1".into()));
        }
        Ok(())
    }

    /// The composite of the explicit parts only.
    fn pcomp_entries(&self, a: &ContractionMap, i: usize, b: &ContractionMap) -> Result<ContractionMap> {
        let big = a.arity() + b.arity() - 1;
        if a.entries().is_empty() || b.entries().is_empty() {
            return Ok(ContractionMap::zero(big));
        }
        let block: Vec<usize> = (i..i + b.arity()).collect();
        let domain = self.domain_data(big)?;
        let rows: Vec<(CanonicalMonomial, BTreeMap<VColor, Rational>)> = domain
            .list
            .par_iter()
            .map(|m| -> Result<Option<(CanonicalMonomial, BTreeMap<VColor, Rational>)>> {
                let Some(inner) = b.row(&m.restrict(&block)?) else {
                    return Ok(None);
                };
                let mut row: BTreeMap<VColor, Rational> = BTreeMap::new();
                for (l, qb) in inner {
                    if let Some(outer) = a.row(&m.contract(&block, *l)?) {
                        for (k, qa) in outer {
                            *row.entry(*k).or_insert_with(Rational::zero) += qb * qa;
                        }
                    }
                }
                Ok(Some((m.clone(), row)))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(ContractionMap::from_rows(big, rows))
    }
}

impl Operad for ContractionOperad {
    type Elem = ContractionMap;

    fn unit(&self) -> ContractionMap {
        ContractionMap::unit(Rational::from_integer(1.into()))
    }

    fn zero(&self, arity: usize) -> ContractionMap {
        ContractionMap::zero(arity)
    }

    fn arity(&self, a: &ContractionMap) -> usize {
        a.arity()
    }

    fn add(&self, a: &ContractionMap, b: &ContractionMap) -> Result<ContractionMap> {
        if a.arity() != b.arity() {
            return Err(Error::ArityMismatch { expected: a.arity(), found: b.arity() });
        }
        let mut out = a.clone();
        out.set_unit(a.unit_coefficient() + b.unit_coefficient());
        for (m, c, q) in b.iter() {
            out.add_entry(m.clone(), c, q.clone())?;
        }
        Ok(out)
    }

    fn scale(&self, a: &ContractionMap, c: &Rational) -> ContractionMap {
        let mut out = ContractionMap::from_rows(
            a.arity(),
            a.entries().iter().map(|(m, row)| (m.clone(), row.iter().map(|(k, q)| (*k, q * c)).collect())),
        );
        out.set_unit(a.unit_coefficient() * c);
        out
    }

    fn is_zero(&self, a: &ContractionMap) -> bool {
        a.is_zero()
    }

    /// `q^σ(Γ, L) = q(Γ·σ, L)`, so that `Q ↦ Q^σ` matches the action on multilinear maps.
    fn act(&self, a: &ContractionMap, sigma: &Permutation) -> Result<ContractionMap> {
        self.check(a)?;
        if sigma.len() != a.arity() {
            return Err(Error::ArityMismatch { expected: a.arity(), found: sigma.len() });
        }
        if sigma.is_identity() {
            return Ok(a.clone());
        }
        let inv = sigma.inverse();
        let rows =
            a.entries().iter().map(|(m, row)| Ok((m.relabel(&inv)?, row.clone()))).collect::<Result<Vec<_>>>()?;
        let mut out = ContractionMap::from_rows(a.arity(), rows);
        out.set_unit(a.unit_coefficient().clone());
        Ok(out)
    }

    fn pcomp(&self, a: &ContractionMap, i: usize, b: &ContractionMap) -> Result<ContractionMap> {
        self.check(a)?;
        self.check(b)?;
        if i == 0 || i > a.arity() {
            return Err(Error::SlotOutOfRange { slot: i, arity: a.arity() });
        }
        // (c·u + A) ∘_i (c'·u + B) = cc'·u + c·B + c'·A + A ∘_i B
        let mut out = self.pcomp_entries(a, i, b)?;
        let (ca, cb) = (a.unit_coefficient(), b.unit_coefficient());
        if !ca.is_zero() {
            out = self.add(&out, &self.scale(&ContractionMap::from_rows(b.arity(), b.entries().clone()), ca))?;
        }
        if !cb.is_zero() {
            out = self.add(&out, &self.scale(&ContractionMap::from_rows(a.arity(), a.entries().clone()), cb))?;
        }
        if a.arity() == 1 && b.arity() == 1 {
            out.set_unit(ca * cb);
        }
        Ok(out)
    }

    /// A few random coordinates of the carrier, plus a random unit part in arity 1.
    fn sample(&self, arity: usize, rng: &mut dyn RngCore) -> ContractionMap {
        let mut out = ContractionMap::zero(arity);
        if arity == 1 {
            out.set_unit(random_rational(rng));
        }
        let Ok(domain) = self.domain_data(arity) else {
            return out;
        };
        if domain.list.is_empty() {
            return out;
        }
        for _ in 0..domain.list.len().min(3) {
            let m = &domain.list[rng.gen_range(0..domain.list.len())];
            let colors = self.colors_for(m);
            let c = colors[rng.gen_range(0..colors.len())];
            out.add_entry(m.clone(), c, random_nonzero_rational(rng)).expect("arity matches");
        }
        out
    }

    fn render(&self, a: &ContractionMap) -> String {
        a.render(self.model.signature())
    }
}
