use std::collections::BTreeMap;

use num_traits::Zero;

use crate::graphs::{CanonicalMonomial, ColorSignature, VColor};
use crate::{parse_rational, Error, Rational, Result};

/// A finitely supported map `Γ ↦ Σ_L q(Γ, L) L` on `n`-vertex diagram classes.
///
/// In arity 1 the operad unit is carried formally by `unit`, since it is
/// supported on every one-vertex diagram. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMap {
    arity: usize,
    unit: Rational,
    entries: BTreeMap<CanonicalMonomial, BTreeMap<VColor, Rational>>,
}

impl ContractionMap {
    pub fn zero(arity: usize) -> Self {
        ContractionMap { arity, unit: Rational::zero(), entries: BTreeMap::new() }
    }

    /// `c` times the unit, in arity 1.
    pub fn unit(c: Rational) -> Self {
        ContractionMap { arity: 1, unit: c, entries: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Coefficient of the formal unit; zero outside arity 1.
    pub fn unit_coefficient(&self) -> &Rational {
        &self.unit
    }

    pub(crate) fn set_unit(&mut self, c: Rational) {
        self.unit = c;
    }

    /// Adds `c · L` to the value at `m`.
    pub fn add_entry(&mut self, m: CanonicalMonomial, color: VColor, c: Rational) -> Result<()> {
        if m.n() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: m.n() });
        }
        if c.is_zero() {
            return Ok(());
        }
        let row = self.entries.entry(m.clone()).or_default();
        let slot = row.entry(color).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            row.remove(&color);
            if row.is_empty() {
                self.entries.remove(&m);
            }
        }
        Ok(())
    }

    /// `q(m, L)`, zero when absent.
    pub fn get(&self, m: &CanonicalMonomial, color: VColor) -> Rational {
        self.entries.get(m).and_then(|row| row.get(&color)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn row(&self, m: &CanonicalMonomial) -> Option<&BTreeMap<VColor, Rational>> {
        self.entries.get(m)
    }

    pub fn entries(&self) -> &BTreeMap<CanonicalMonomial, BTreeMap<VColor, Rational>> {
        &self.entries
    }

    /// Nonzero `(Γ, L, q)` triples.
    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalMonomial, VColor, &Rational)> {
        self.entries.iter().flat_map(|(m, row)| row.iter().map(move |(c, q)| (m, *c, q)))
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero() && self.entries.is_empty()
    }

    pub(crate) fn from_rows(
        arity: usize,
        rows: impl IntoIterator<Item = (CanonicalMonomial, BTreeMap<VColor, Rational>)>,
    ) -> Self {
        let mut entries = BTreeMap::new();
        for (m, mut row) in rows {
            row.retain(|_, q| !q.is_zero());
            if !row.is_empty() {
                entries.insert(m, row);
            }
        }
        ContractionMap { arity, unit: Rational::zero(), entries }
    }

    /// Lines `MONOMIAL -> COLOR : p/q`, sorted; the unit renders as `unit : c`.
    pub fn render(&self, sig: &ColorSignature) -> String {
        let mut lines: Vec<String> =
            self.iter().map(|(m, c, q)| format!("{} -> {} : {}", m.render(sig), sig.vertex_name(c), q)).collect();
        lines.sort();
        if !self.unit.is_zero() {
            lines.insert(0, format!("unit : {}", self.unit));
        }
        lines.iter().map(|l| format!("{l}\n")).collect()
    }

    /// Inverse of [`render`](Self::render). Blank lines and `#` comments are skipped.
    pub fn parse(text: &str, arity: usize, sig: &ColorSignature) -> Result<Self> {
        let mut out = ContractionMap::zero(arity);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (lhs, coeff) = line.rsplit_once(':').ok_or_else(|| Error::Parse(format!("missing `:` in `{line}`")))?;
            let coeff = parse_rational(coeff)?;
            if lhs.trim() == "unit" {
                if arity != 1 {
                    return Err(Error::Parse("the unit only exists in arity 1".into()));
                }
                out.unit += coeff;
                continue;
            }
            let (m, color) = lhs.split_once("->").ok_or_else(|| Error::Parse(format!("missing `->` in `{line}`")))?;
            let m = CanonicalMonomial::parse(m, sig)?;
            let color = sig
                .vertex_color(color.trim())
                .ok_or_else(|| Error::Parse(format!("unknown vertex color `{}`", color.trim())))?;
            if m.n() != arity {
                return Err(Error::Parse(format!("`{line}` has {} vertices, expected {arity}", m.n())));
            }
            out.add_entry(m, color, coeff)?;
        }
        Ok(out)
    }
}
