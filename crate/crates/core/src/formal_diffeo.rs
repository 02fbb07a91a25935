//! Truncated multivariate formal power series without constant term.
//!
//! A series `f: V → V` with `V = F^N` is stored through its symmetric
//! coefficient tensors, normalised so that
//!
//! ```text
//! f_ν(x) = Σ_n 1/n! Σ_{μ_1..μ_n} f_{ν;μ_1..μ_n} x_{μ_1} ⋯ x_{μ_n}.
//! ```
//!
//! Only the sorted representative of each index multiset is stored. Two
//! compositions are provided: [`compose_direct`] substitutes polynomials
//! literally and serves as the oracle for [`faa_di_bruno_compose`], which
//! evaluates the partition sum coefficient by coefficient.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::combinatorics::{enumerate_set_partitions, SetPartition};
use crate::{factorial, parse_rational, Error, Rational, Result};

/// Truncation order `m >= 1`: degrees above `m` are discarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncationOrder(usize);

impl TruncationOrder {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
        }
        Ok(TruncationOrder(m))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

type DegreeCoeffs = BTreeMap<(usize, Vec<usize>), Rational>;

/// A truncated formal diffeomorphism (or general series without constant term).
///
/// Indices are 0-based coordinates; rendering uses labels, by default `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesElement {
    dim: usize,
    order: usize,
    /// `coeffs[n-1]` holds degree `n`, keyed by `(ν, sorted μ)`; zeros are never stored.
    coeffs: Vec<DegreeCoeffs>,
}

impl SeriesElement {
    pub fn zero(dim: usize, order: TruncationOrder) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("series dimension must be at least 1".into()));
        }
        Ok(SeriesElement { dim, order: order.get(), coeffs: vec![BTreeMap::new(); order.get()] })
    }

    pub fn identity(dim: usize, order: TruncationOrder) -> Result<Self> {
        let mut s = Self::zero(dim, order)?;
        for nu in 0..dim {
            s.set_coeff(nu, &[nu], Rational::one())?;
        }
        Ok(s)
    }

    /// One-variable series from ordinary power-series coefficients:
    /// `poly[k]` multiplies `x^k`; `poly[0]` must be zero.
    pub fn from_univariate(order: TruncationOrder, poly: &[Rational]) -> Result<Self> {
        let mut s = Self::zero(1, order)?;
        for (k, c) in poly.iter().enumerate() {
            if k == 0 {
                if !c.is_zero() {
                    return Err(Error::InvalidArgument("series must not have a constant term".into()));
                }
                continue;
            }
            if k > order.get() {
                break;
            }
            s.set_coeff(0, &vec![0; k], c * factorial(k))?;
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `f_{ν;μ}` for any ordering of `μ`.
    pub fn coeff(&self, nu: usize, mu: &[usize]) -> Rational {
        if mu.is_empty() || mu.len() > self.order {
            return Rational::zero();
        }
        let mut key = mu.to_vec();
        key.sort_unstable();
        self.coeffs[mu.len() - 1].get(&(nu, key)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set_coeff(&mut self, nu: usize, mu: &[usize], value: Rational) -> Result<()> {
        let n = mu.len();
        if n == 0 || n > self.order {
            return Err(Error::InvalidArgument(format!("degree {n} outside 1..={}", self.order)));
        }
        if nu >= self.dim || mu.iter().any(|&i| i >= self.dim) {
            return Err(Error::InvalidArgument(format!("index outside 0..{}", self.dim)));
        }
        let mut key = mu.to_vec();
        key.sort_unstable();
        if value.is_zero() {
            self.coeffs[n - 1].remove(&(nu, key));
        } else {
            self.coeffs[n - 1].insert((nu, key), value);
        }
        Ok(())
    }

    /// Stored nonzero coefficients of degree `n`, keyed by `(ν, sorted μ)`.
    pub fn degree(&self, n: usize) -> impl Iterator<Item = (&(usize, Vec<usize>), &Rational)> {
        self.coeffs.get(n.wrapping_sub(1)).into_iter().flat_map(|m| m.iter())
    }

    /// Value of the truncated series at the point `x`.
    pub fn evaluate(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(x.len(), self.dim));
        }
        let mut out = vec![Rational::zero(); self.dim];
        for (p, poly) in to_polys(self).iter().enumerate() {
            for (e, c) in &poly.terms {
                let mut term = c.clone();
                for (k, &power) in e.iter().enumerate() {
                    for _ in 0..power {
                        term *= &x[k];
                    }
                }
                out[p] += term;
            }
        }
        Ok(out)
    }

    /// Whether the linear part is the identity matrix.
    pub fn is_pointed(&self) -> bool {
        let lin = &self.coeffs[0];
        lin.len() == self.dim && (0..self.dim).all(|nu| lin.get(&(nu, vec![nu])).is_some_and(One::is_one))
    }

    /// Lines `nu; mu1,...,mun : p/q`, sorted by index tuple.
    pub fn render(&self, labels: Option<&[String]>) -> String {
        let label = |i: usize| match labels {
            Some(l) => l[i].clone(),
            None => (i + 1).to_string(),
        };
        let mut entries: Vec<(Vec<usize>, &Rational)> = Vec::new();
        for degree in &self.coeffs {
            for ((nu, mu), c) in degree {
                let mut key = vec![*nu];
                key.extend(mu);
                entries.push((key, c));
            }
        }
        entries.sort();
        let mut out = String::new();
        for (key, c) in entries {
            let mus: Vec<String> = key[1..].iter().map(|&i| label(i)).collect();
            let _ = writeln!(out, "{}; {} : {}", label(key[0]), mus.join(","), c);
        }
        out
    }

    /// Inverse of [`render`](Self::render).
    pub fn parse(text: &str, dim: usize, order: TruncationOrder, labels: Option<&[String]>) -> Result<Self> {
        let lookup = |name: &str| -> Result<usize> {
            let name = name.trim();
            match labels {
                Some(l) => l
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| Error::Parse(format!("unknown coordinate label `{name}`"))),
                None => name
                    .parse::<usize>()
                    .ok()
                    .filter(|&i| (1..=dim).contains(&i))
                    .map(|i| i - 1)
                    .ok_or_else(|| Error::Parse(format!("bad coordinate `{name}`"))),
            }
        };
        let mut s = Self::zero(dim, order)?;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (lhs, value) =
                line.rsplit_once(" : ").ok_or_else(|| Error::Parse(format!("missing ` : ` in `{line}`")))?;
            let (nu, mus) = lhs.split_once(';').ok_or_else(|| Error::Parse(format!("missing `;` in `{line}`")))?;
            let nu = lookup(nu)?;
            let mu = mus.split(',').map(lookup).collect::<Result<Vec<_>>>()?;
            let c = parse_rational(value)?;
            if !s.coeff(nu, &mu).is_zero() {
                return Err(Error::Parse(format!("duplicate coefficient in `{line}`")));
            }
            s.set_coeff(nu, &mu, c).map_err(|e| Error::Parse(e.to_string()))?;
        }
        Ok(s)
    }
}

fn check_compatible(g: &SeriesElement, f: &SeriesElement) -> Result<()> {
    if g.dim != f.dim {
        return Err(Error::DimensionMismatch(g.dim, f.dim));
    }
    if g.order != f.order {
        return Err(Error::OrderMismatch(g.order, f.order));
    }
    Ok(())
}

/// Sorted multisets of size `n` drawn from `0..dim`.
pub fn multisets(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, dim: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i, dim, n, cur, out);
            cur.pop();
        }
    }
    rec(0, dim, n, &mut cur, &mut out);
    out
}

/// Every tuple in `0..dim` of length `k`, lexicographically.
pub fn tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..dim).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Truncated polynomial in `nvars` variables, keyed by exponent vector.
#[derive(Debug, Clone)]
struct TruncatedPoly {
    order: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl TruncatedPoly {
    fn constant_one(nvars: usize, order: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; nvars], Rational::one());
        TruncatedPoly { order, terms }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (a, x) in &self.terms {
            let da: u32 = a.iter().sum();
            for (b, y) in &other.terms {
                let db: u32 = b.iter().sum();
                if (da + db) as usize > self.order {
                    continue;
                }
                let e: Vec<u32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                *terms.entry(e).or_insert_with(Rational::zero) += x * y;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        TruncatedPoly { order: self.order, terms }
    }
}

fn exponent_factorial(e: &[u32]) -> Rational {
    e.iter().fold(Rational::one(), |acc, &k| acc * factorial(k as usize))
}

/// Component polynomials `f_ν(x)` of a series.
fn to_polys(s: &SeriesElement) -> Vec<TruncatedPoly> {
    let mut polys: Vec<TruncatedPoly> =
        (0..s.dim).map(|_| TruncatedPoly { order: s.order, terms: BTreeMap::new() }).collect();
    for degree in &s.coeffs {
        for ((nu, mu), c) in degree {
            let mut e = vec![0u32; s.dim];
            for &i in mu {
                e[i] += 1;
            }
            let value = c / exponent_factorial(&e);
            *polys[*nu].terms.entry(e).or_insert_with(Rational::zero) += value;
        }
    }
    polys
}

/// `g(f(x))` by literal substitution of polynomials, discarding degrees above `m`.
pub fn compose_direct(g: &SeriesElement, f: &SeriesElement) -> Result<SeriesElement> {
    check_compatible(g, f)?;
    let (dim, m) = (g.dim, g.order);
    let f_polys = to_polys(f);
    // powers[ρ][e] = f_ρ(x)^e
    let powers: Vec<Vec<TruncatedPoly>> = f_polys
        .iter()
        .map(|p| {
            let mut v = vec![TruncatedPoly::constant_one(dim, m)];
            for e in 1..=m {
                let next = v[e - 1].mul(p);
                v.push(next);
            }
            v
        })
        .collect();
    let g_polys = to_polys(g);
    let mut h = SeriesElement::zero(dim, TruncationOrder(m))?;
    for (nu, gp) in g_polys.iter().enumerate() {
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (beta, c) in &gp.terms {
            let mut term = TruncatedPoly::constant_one(dim, m);
            for (rho, &e) in beta.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[rho][e as usize]);
                }
            }
            for (alpha, d) in term.terms {
                *acc.entry(alpha).or_insert_with(Rational::zero) += c * d;
            }
        }
        for (alpha, c) in acc {
            let mu: Vec<usize> =
                alpha.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect();
            if mu.is_empty() || c.is_zero() {
                continue;
            }
            let value = c * exponent_factorial(&alpha);
            h.set_coeff(nu, &mu, value)?;
        }
    }
    Ok(h)
}

/// Coefficient `h_{ν;μ}` of `g ∘ f` from the partition sum.
fn fdb_coefficient(
    g: &SeriesElement,
    f: &SeriesElement,
    partitions: &[SetPartition],
    nu: usize,
    mu: &[usize],
) -> Rational {
    let mut total = Rational::zero();
    for p in partitions {
        let k = p.len();
        if g.coeffs[k - 1].is_empty() {
            continue;
        }
        let block_mus: Vec<Vec<usize>> = p.blocks().iter().map(|b| b.iter().map(|&i| mu[i - 1]).collect()).collect();
        for rho in tuples(g.dim, k) {
            let gc = g.coeff(nu, &rho);
            if gc.is_zero() {
                continue;
            }
            let mut prod = gc;
            for (r, bm) in rho.iter().zip(&block_mus) {
                let fc = f.coeff(*r, bm);
                if fc.is_zero() {
                    prod = Rational::zero();
                    break;
                }
                prod *= fc;
            }
            total += prod;
        }
    }
    total
}

/// `g ∘ f` from the Faà di Bruno partition sum, degree by degree.
pub fn faa_di_bruno_compose(g: &SeriesElement, f: &SeriesElement) -> Result<SeriesElement> {
    check_compatible(g, f)?;
    let mut h = SeriesElement::zero(g.dim, TruncationOrder(g.order))?;
    for n in 1..=g.order {
        let partitions = enumerate_set_partitions(n)?;
        for mu in multisets(g.dim, n) {
            for nu in 0..g.dim {
                let c = fdb_coefficient(g, f, &partitions, nu, &mu);
                h.set_coeff(nu, &mu, c)?;
            }
        }
    }
    Ok(h)
}

/// Composition inverse of a pointed series, solved degree by degree.
pub fn invert_series(f: &SeriesElement) -> Result<SeriesElement> {
    if !f.is_pointed() {
        return Err(Error::NotPointed);
    }
    let mut inv = SeriesElement::identity(f.dim, TruncationOrder(f.order))?;
    for n in 2..=f.order {
        // with (f⁻¹)_n still zero, the degree-n part of f⁻¹ ∘ f is f_n plus lower cross terms
        let partitions = enumerate_set_partitions(n)?;
        for mu in multisets(f.dim, n) {
            for nu in 0..f.dim {
                let rest = fdb_coefficient(&inv, f, &partitions, nu, &mu);
                inv.set_coeff(nu, &mu, -rest)?;
            }
        }
    }
    Ok(inv)
}

/// Symmetric tensor of fixed degree, stored by sorted representatives.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymmetricTensor {
    degree: usize,
    entries: BTreeMap<Vec<usize>, Rational>,
}

impl SymmetricTensor {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Value at any ordering of the indices.
    pub fn get(&self, mu: &[usize]) -> Rational {
        let mut key = mu.to_vec();
        key.sort_unstable();
        self.entries.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn representatives(&self) -> &BTreeMap<Vec<usize>, Rational> {
        &self.entries
    }

    /// All index tuples with their values.
    pub fn to_full(&self) -> BTreeMap<Vec<usize>, Rational> {
        let mut out = BTreeMap::new();
        for (key, c) in &self.entries {
            for perm in crate::combinatorics::Permutation::all(key.len()) {
                let t: Vec<usize> = perm.images().iter().map(|&i| key[i - 1]).collect();
                out.insert(t, c.clone());
            }
        }
        out
    }
}

/// Averages a fixed-degree coefficient map over all permutations of its indices.
///
/// Every key of `tensor` must have length `degree`.
pub fn symmetrize(tensor: &BTreeMap<Vec<usize>, Rational>, degree: usize) -> Result<SymmetricTensor> {
    let mut acc: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (mu, c) in tensor {
        if mu.len() != degree {
            return Err(Error::ArityMismatch { expected: degree, found: mu.len() });
        }
        let mut key = mu.clone();
        key.sort_unstable();
        *acc.entry(key).or_insert_with(Rational::zero) += c;
    }
    let nfact = factorial(degree);
    let mut entries = BTreeMap::new();
    for (key, sum) in acc {
        let mut mult = Rational::one();
        let mut run = 1;
        for w in key.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                mult *= factorial(run);
                run = 1;
            }
        }
        mult *= factorial(run);
        let value = sum * mult / &nfact;
        if !value.is_zero() {
            entries.insert(key, value);
        }
    }
    Ok(SymmetricTensor { degree, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn order(m: usize) -> TruncationOrder {
        TruncationOrder::new(m).unwrap()
    }

    fn x_plus_x2() -> SeriesElement {
        SeriesElement::from_univariate(order(4), &[int(0), int(1), int(1)]).unwrap()
    }

    #[test]
    fn univariate_normalisation() {
        let f = x_plus_x2();
        assert_eq!(f.coeff(0, &[0]), int(1));
        assert_eq!(f.coeff(0, &[0, 0]), int(2));
        assert!(f.is_pointed());
    }

    #[test]
    fn direct_composition_of_x_plus_x_squared() {
        // (x + x²) + (x + x²)² = x + 2x² + 2x³ + x⁴
        let f = x_plus_x2();
        let h = compose_direct(&f, &f).unwrap();
        let expected = SeriesElement::from_univariate(order(4), &[int(0), int(1), int(2), int(2), int(1)]).unwrap();
        assert_eq!(h, expected);
        assert_eq!(h.coeff(0, &[0, 0]), int(4));
        assert_eq!(h.coeff(0, &[0, 0, 0]), int(12));
        assert_eq!(h.coeff(0, &[0, 0, 0, 0]), int(24));
        assert_eq!(faa_di_bruno_compose(&f, &f).unwrap(), h);
    }

    #[test]
    fn identity_is_two_sided() {
        let f = x_plus_x2();
        let id = SeriesElement::identity(1, order(4)).unwrap();
        assert_eq!(compose_direct(&id, &f).unwrap(), f);
        assert_eq!(compose_direct(&f, &id).unwrap(), f);
        assert_eq!(faa_di_bruno_compose(&id, &f).unwrap(), f);
        assert_eq!(faa_di_bruno_compose(&f, &id).unwrap(), f);
    }

    #[test]
    fn low_degree_faa_di_bruno() {
        let mut f = SeriesElement::identity(1, order(3)).unwrap();
        let mut g = SeriesElement::identity(1, order(3)).unwrap();
        f.set_coeff(0, &[0, 0], rat(2, 3)).unwrap();
        f.set_coeff(0, &[0, 0, 0], int(5)).unwrap();
        g.set_coeff(0, &[0, 0], int(-7)).unwrap();
        g.set_coeff(0, &[0, 0, 0], rat(1, 2)).unwrap();
        let h = faa_di_bruno_compose(&g, &f).unwrap();
        assert_eq!(h.coeff(0, &[0, 0]), rat(2, 3) + int(-7));
        assert_eq!(h.coeff(0, &[0, 0, 0]), int(5) + int(3) * int(-7) * rat(2, 3) + rat(1, 2));
    }

    #[test]
    fn inverse_of_x_plus_x_squared() {
        let f = x_plus_x2();
        let inv = invert_series(&f).unwrap();
        let expected = SeriesElement::from_univariate(order(4), &[int(0), int(1), int(-1), int(2), int(-5)]).unwrap();
        assert_eq!(inv, expected);
        let id = SeriesElement::identity(1, order(4)).unwrap();
        assert_eq!(compose_direct(&inv, &f).unwrap(), id);
        assert_eq!(compose_direct(&f, &inv).unwrap(), id);
    }

    #[test]
    fn inverse_degree_two_is_negation() {
        let mut f = SeriesElement::identity(2, order(2)).unwrap();
        f.set_coeff(0, &[0, 1], rat(3, 4)).unwrap();
        f.set_coeff(1, &[1, 1], int(2)).unwrap();
        let inv = invert_series(&f).unwrap();
        assert_eq!(inv.coeff(0, &[1, 0]), rat(-3, 4));
        assert_eq!(inv.coeff(1, &[1, 1]), int(-2));
        let id = SeriesElement::identity(2, order(2)).unwrap();
        assert_eq!(invert_series(&id).unwrap(), id);
    }

    #[test]
    fn inversion_needs_pointed_series() {
        let f = SeriesElement::from_univariate(order(3), &[int(0), int(2)]).unwrap();
        assert_eq!(invert_series(&f), Err(Error::NotPointed));
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let a = SeriesElement::identity(1, order(3)).unwrap();
        let b = SeriesElement::identity(2, order(3)).unwrap();
        let c = SeriesElement::identity(1, order(4)).unwrap();
        assert_eq!(compose_direct(&a, &b), Err(Error::DimensionMismatch(1, 2)));
        assert_eq!(faa_di_bruno_compose(&a, &c), Err(Error::OrderMismatch(3, 4)));
        assert!(TruncationOrder::new(0).is_err());
    }

    #[test]
    fn symmetrize_examples() {
        let mut t = BTreeMap::new();
        t.insert(vec![0, 1], int(1));
        t.insert(vec![1, 0], int(0));
        let s = symmetrize(&t, 2).unwrap();
        assert_eq!(s.get(&[0, 1]), rat(1, 2));
        assert_eq!(s.get(&[1, 0]), rat(1, 2));
        assert_eq!(s.representatives().len(), 1);

        let zero = symmetrize(&BTreeMap::new(), 3).unwrap();
        assert!(zero.representatives().is_empty());

        let mut full = BTreeMap::new();
        full.insert(vec![0, 0, 1], rat(2, 5));
        full.insert(vec![0, 1, 0], rat(2, 5));
        full.insert(vec![1, 0, 0], rat(2, 5));
        let s = symmetrize(&full, 3).unwrap();
        assert_eq!(s.to_full(), full);
        assert_eq!(symmetrize(&s.to_full(), 3).unwrap(), s);
    }

    #[test]
    fn render_and_parse_round_trip() {
        let mut f = SeriesElement::identity(2, order(3)).unwrap();
        f.set_coeff(1, &[1, 0], rat(-3, 7)).unwrap();
        f.set_coeff(0, &[0, 0, 1], int(4)).unwrap();
        let text = f.render(None);
        assert_eq!(text, "1; 1 : 1\n1; 1,1,2 : 4\n2; 1,2 : -3/7\n2; 2 : 1\n");
        assert_eq!(SeriesElement::parse(&text, 2, order(3), None).unwrap(), f);
        let labels = vec!["a".to_string(), "b".to_string()];
        let named = f.render(Some(&labels));
        assert!(named.contains("b; a,b : -3/7"));
        assert_eq!(SeriesElement::parse(&named, 2, order(3), Some(&labels)).unwrap(), f);
    }
}
