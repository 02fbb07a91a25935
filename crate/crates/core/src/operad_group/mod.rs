//! Symmetric operads, and the group and Lie algebra attached to each of them.
//!
//! Elements of the group `G̃(P)` are sequences `(id, a_2, …, a_m)` with
//! `a_n ∈ P(n)`, multiplied by
//!
//! ```text
//! (g ∙ f)_n = Σ_Π act(γ(g_k; f_{j_1}, …, f_{j_k}), σ_Π)
//! ```
//!
//! where `Π` runs over the canonical partitions of `{1..n}` with block sizes
//! `j_1..j_k`. The Lie algebra consists of sequences `(0, ℓ_2, …, ℓ_m)` with
//! the pre-Lie product obtained by keeping only partitions with a single
//! non-singleton block.

use std::collections::HashMap;
use std::fmt::Debug;

use num_traits::One;
use rand::RngCore;
use rayon::prelude::*;

use crate::combinatorics::{enumerate_set_partitions, nonempty_subsets, Permutation, SetPartition};
use crate::formal_diffeo::TruncationOrder;
use crate::{factorial, int, Error, Rational, Result};

mod axioms;
mod end_operad;

pub use axioms::{check_operad_axioms, AssociatorSymmetry, AxiomCheckConfig, AxiomReport};
pub use end_operad::{group_to_series, series_to_group, EndOperad, MultilinearMap};

/// A symmetric operad over the rationals, given by its linear structure,
/// right `S_n` actions, partial compositions and unit.
///
/// The axioms are not enforced by the type; [`check_operad_axioms`] tests them.
pub trait Operad: Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    /// The arity-one unit.
    fn unit(&self) -> Self::Elem;

    fn zero(&self, arity: usize) -> Self::Elem;

    fn arity(&self, a: &Self::Elem) -> usize;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn scale(&self, a: &Self::Elem, c: &Rational) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Right action of `σ ∈ S_n`.
    fn act(&self, a: &Self::Elem, sigma: &Permutation) -> Result<Self::Elem>;

    /// `a ∘_i b`, inserting `b` at slot `i` (1-based).
    fn pcomp(&self, a: &Self::Elem, i: usize, b: &Self::Elem) -> Result<Self::Elem>;

    /// A random sparse element of the given arity.
    fn sample(&self, arity: usize, rng: &mut dyn RngCore) -> Self::Elem;

    fn render(&self, a: &Self::Elem) -> String;

    /// `γ(a; b_1, …, b_k)`, inserting right to left so earlier slots keep their index.
    fn gamma(&self, a: &Self::Elem, bs: &[Self::Elem]) -> Result<Self::Elem> {
        let k = self.arity(a);
        if bs.len() != k {
            return Err(Error::ArityMismatch { expected: k, found: bs.len() });
        }
        let mut out = a.clone();
        for (l, b) in bs.iter().enumerate().rev() {
            out = self.pcomp(&out, l + 1, b)?;
        }
        Ok(out)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.add(a, &self.scale(b, &int(-1)))
    }
}

fn sum<O: Operad>(op: &O, arity: usize, terms: impl IntoIterator<Item = O::Elem>) -> Result<O::Elem> {
    let mut acc = op.zero(arity);
    for t in terms {
        acc = op.add(&acc, &t)?;
    }
    Ok(acc)
}

/// An element `(id, a_2, …, a_m)` of `G̃(P)`; the arity-one unit is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<E> {
    order: usize,
    components: Vec<E>,
}

/// An element `(0, ℓ_2, …, ℓ_m)` of the Lie algebra of `G̃(P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement<E> {
    order: usize,
    components: Vec<E>,
}

macro_rules! component_accessors {
    ($t:ident) => {
        impl<E> $t<E> {
            pub fn order(&self) -> usize {
                self.order
            }

            /// Component of arity `n` for `2 <= n <= m`.
            pub fn component(&self, n: usize) -> Option<&E> {
                n.checked_sub(2).and_then(|k| self.components.get(k))
            }

            /// Components of arities `2..=m`.
            pub fn components(&self) -> &[E] {
                &self.components
            }

            pub fn into_components(self) -> Vec<E> {
                self.components
            }

            /// Image in the quotient by everything above arity `m'`.
            pub fn truncate(&self, order: TruncationOrder) -> Result<Self>
            where
                E: Clone,
            {
                let m = order.get();
                if m > self.order {
                    return Err(Error::OrderMismatch(m, self.order));
                }
                Ok($t { order: m, components: self.components[..m - 1].to_vec() })
            }
        }
    };
}

component_accessors!(GroupElement);
component_accessors!(LieElement);

/// Outer operand of an insertion sum, with the arity-one part made explicit.
#[derive(Clone, Copy)]
enum Outer<'e, E> {
    Unit,
    Elem(&'e E),
    Zero,
}

/// The group `G̃(P)` and its Lie algebra, truncated at order `m`.
pub struct OperadGroup<'a, O: Operad> {
    op: &'a O,
    order: usize,
}

impl<'a, O: Operad> OperadGroup<'a, O> {
    pub fn new(op: &'a O, order: TruncationOrder) -> Self {
        OperadGroup { op, order: order.get() }
    }

    pub fn operad(&self) -> &'a O {
        self.op
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn check_components(&self, components: &[O::Elem]) -> Result<()> {
        if components.len() + 1 != self.order {
            return Err(Error::OrderMismatch(components.len() + 1, self.order));
        }
        for (k, c) in components.iter().enumerate() {
            let found = self.op.arity(c);
            if found != k + 2 {
                return Err(Error::ArityMismatch { expected: k + 2, found });
            }
        }
        Ok(())
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order != self.order {
            return Err(Error::OrderMismatch(order, self.order));
        }
        Ok(())
    }

    /// Builds a group element from its components of arities `2..=m`.
    pub fn element(&self, components: Vec<O::Elem>) -> Result<GroupElement<O::Elem>> {
        self.check_components(&components)?;
        Ok(GroupElement { order: self.order, components })
    }

    /// Builds a Lie element from its components of arities `2..=m`.
    pub fn lie_element(&self, components: Vec<O::Elem>) -> Result<LieElement<O::Elem>> {
        self.check_components(&components)?;
        Ok(LieElement { order: self.order, components })
    }

    pub fn identity(&self) -> GroupElement<O::Elem> {
        GroupElement { order: self.order, components: (2..=self.order).map(|n| self.op.zero(n)).collect() }
    }

    pub fn lie_zero(&self) -> LieElement<O::Elem> {
        LieElement { order: self.order, components: (2..=self.order).map(|n| self.op.zero(n)).collect() }
    }

    /// Component `n` of `g ∙ f`, reading `g_1 = f_1 = id`.
    fn product_component(&self, g: &[O::Elem], f: &[O::Elem], n: usize) -> Result<O::Elem> {
        let op = self.op;
        let partitions = enumerate_set_partitions(n)?;
        let mut terms: HashMap<Vec<usize>, Option<O::Elem>> = HashMap::new();
        for p in &partitions {
            let sizes = p.block_sizes();
            if terms.contains_key(&sizes) {
                continue;
            }
            let k = sizes.len();
            let term = if k == 1 {
                Some(f[n - 2].clone())
            } else if k == n {
                Some(g[n - 2].clone())
            } else {
                let outer = &g[k - 2];
                let mut t = if op.is_zero(outer) { None } else { Some(outer.clone()) };
                for (l, &j) in sizes.iter().enumerate().rev() {
                    let Some(cur) = t.as_ref() else { break };
                    if j > 1 {
                        let inner = &f[j - 2];
                        t = if op.is_zero(inner) { None } else { Some(op.pcomp(cur, l + 1, inner)?) };
                    }
                }
                t
            };
            terms.insert(sizes, term.filter(|t| !op.is_zero(t)));
        }
        let acted: Vec<O::Elem> = partitions
            .par_iter()
            .filter_map(|p| terms[&p.block_sizes()].as_ref().map(|t| op.act(t, &p.permutation())))
            .collect::<Result<_>>()?;
        sum(op, n, acted)
    }

    /// The product `g ∙ f`.
    pub fn product(&self, g: &GroupElement<O::Elem>, f: &GroupElement<O::Elem>) -> Result<GroupElement<O::Elem>> {
        self.check_order(g.order)?;
        self.check_order(f.order)?;
        let components =
            (2..=self.order).map(|n| self.product_component(&g.components, &f.components, n)).collect::<Result<_>>()?;
        Ok(GroupElement { order: self.order, components })
    }

    /// Two-sided inverse, solved degree by degree.
    pub fn inverse(&self, f: &GroupElement<O::Elem>) -> Result<GroupElement<O::Elem>> {
        self.check_order(f.order)?;
        let mut inv = self.identity();
        for n in 2..=self.order {
            // inv_n is still zero here, so the product's component n is f_n plus lower terms
            let rest = self.product_component(&inv.components, &f.components, n)?;
            inv.components[n - 2] = self.op.scale(&rest, &int(-1));
        }
        Ok(inv)
    }

    /// `Σ_J act(outer_k ∘_{min J} inner_j, σ_{Π_J})` over subsets `J` with `|J| >= 2`.
    fn insertion_component<'e>(
        &self,
        outer: impl Fn(usize) -> Outer<'e, O::Elem> + Sync,
        inner: &[O::Elem],
        n: usize,
    ) -> Result<O::Elem>
    where
        O::Elem: 'e,
    {
        let op = self.op;
        let subsets: Vec<Vec<usize>> = nonempty_subsets(n).into_iter().filter(|s| s.len() >= 2).collect();
        let terms: Vec<O::Elem> = subsets
            .par_iter()
            .map(|subset| -> Result<Option<O::Elem>> {
                let j = subset.len();
                let k = n - j + 1;
                let f = &inner[j - 2];
                if op.is_zero(f) {
                    return Ok(None);
                }
                let composed = match outer(k) {
                    Outer::Zero => return Ok(None),
                    Outer::Unit => f.clone(),
                    Outer::Elem(g) if op.is_zero(g) => return Ok(None),
                    Outer::Elem(g) => op.pcomp(g, subset[0], f)?,
                };
                let sigma = SetPartition::from_subset(subset, n)?.permutation();
                Ok(Some(op.act(&composed, &sigma)?))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        sum(op, n, terms)
    }

    /// The pre-Lie product `f ⋆ g`: single-block insertions of `f` into `g`.
    pub fn prelie(&self, f: &LieElement<O::Elem>, g: &LieElement<O::Elem>) -> Result<LieElement<O::Elem>> {
        self.check_order(f.order)?;
        self.check_order(g.order)?;
        let outer = |k: usize| {
            if k == 1 {
                Outer::Zero
            } else {
                Outer::Elem(&g.components[k - 2])
            }
        };
        let components =
            (2..=self.order).map(|n| self.insertion_component(outer, &f.components, n)).collect::<Result<_>>()?;
        Ok(LieElement { order: self.order, components })
    }

    /// `[f, g] = f ⋆ g − g ⋆ f`.
    pub fn bracket(&self, f: &LieElement<O::Elem>, g: &LieElement<O::Elem>) -> Result<LieElement<O::Elem>> {
        let fg = self.prelie(f, g)?;
        let gf = self.prelie(g, f)?;
        self.lie_sub(&fg, &gf)
    }

    pub fn lie_add(&self, a: &LieElement<O::Elem>, b: &LieElement<O::Elem>) -> Result<LieElement<O::Elem>> {
        self.check_order(a.order)?;
        self.check_order(b.order)?;
        let components =
            a.components.iter().zip(&b.components).map(|(x, y)| self.op.add(x, y)).collect::<Result<_>>()?;
        Ok(LieElement { order: self.order, components })
    }

    pub fn lie_sub(&self, a: &LieElement<O::Elem>, b: &LieElement<O::Elem>) -> Result<LieElement<O::Elem>> {
        self.lie_add(a, &self.lie_scale(b, &int(-1)))
    }

    pub fn lie_scale(&self, a: &LieElement<O::Elem>, c: &Rational) -> LieElement<O::Elem> {
        LieElement { order: a.order, components: a.components.iter().map(|x| self.op.scale(x, c)).collect() }
    }

    pub fn lie_is_zero(&self, a: &LieElement<O::Elem>) -> bool {
        a.components.iter().all(|x| self.op.is_zero(x))
    }

    /// Time-one value of the flow `g' = ℓ ⋆ g`, `g(0) = id`.
    ///
    /// Writing `g(t) = Σ_p t^p g^(p)`, the flow gives `g^(p+1) = ℓ ⋆ g^(p) / (p+1)`,
    /// and `g^(p)` vanishes below arity `p+1`, so `p < m` suffices.
    pub fn exp(&self, l: &LieElement<O::Elem>) -> Result<GroupElement<O::Elem>> {
        self.check_order(l.order)?;
        let mut total = self.identity();
        let mut level: Option<Vec<O::Elem>> = None;
        for p in 0..self.order - 1 {
            let coeff = Rational::one() / int(p as i64 + 1);
            let next: Vec<O::Elem> = {
                let outer = |k: usize| match (&level, k) {
                    (None, 1) => Outer::Unit,
                    (None, _) => Outer::Zero,
                    (Some(_), 1) => Outer::Zero,
                    (Some(lv), k) => Outer::Elem(&lv[k - 2]),
                };
                (2..=self.order)
                    .map(|n| self.insertion_component(outer, &l.components, n).map(|x| self.op.scale(&x, &coeff)))
                    .collect::<Result<_>>()?
            };
            for (t, x) in total.components.iter_mut().zip(&next) {
                *t = self.op.add(t, x)?;
            }
            level = Some(next);
        }
        Ok(total)
    }

    /// The unique `ℓ` with `exp(ℓ) = g`, solved degree by degree.
    pub fn log(&self, g: &GroupElement<O::Elem>) -> Result<LieElement<O::Elem>> {
        self.check_order(g.order)?;
        let mut l = self.lie_zero();
        for n in 2..=self.order {
            // exp(ℓ)_n = ℓ_n + terms in lower components
            let e = self.exp(&l)?;
            l.components[n - 2] = self.op.sub(&g.components[n - 2], &e.components[n - 2])?;
        }
        Ok(l)
    }

    fn average(&self, a: &O::Elem) -> Result<O::Elem> {
        let n = self.op.arity(a);
        let perms = Permutation::all(n);
        let acted: Vec<O::Elem> = perms.par_iter().map(|s| self.op.act(a, s)).collect::<Result<_>>()?;
        let total = sum(self.op, n, acted)?;
        Ok(self.op.scale(&total, &(Rational::one() / factorial(n))))
    }

    /// Projection of every component onto its `S_n`-invariants.
    pub fn symmetrize(&self, g: &GroupElement<O::Elem>) -> Result<GroupElement<O::Elem>> {
        let components = g.components.iter().map(|a| self.average(a)).collect::<Result<_>>()?;
        Ok(GroupElement { order: g.order, components })
    }

    /// Whether every component is fixed by its `S_n` action, i.e. `g ∈ G(P)`.
    pub fn is_invariant(&self, g: &GroupElement<O::Elem>) -> Result<bool> {
        for a in &g.components {
            let n = self.op.arity(a);
            for s in Permutation::all(n) {
                if self.op.act(a, &s)? != *a {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// First arity whose component is not invariant.
    pub fn first_non_invariant(&self, g: &GroupElement<O::Elem>) -> Result<Option<usize>> {
        for (k, a) in g.components.iter().enumerate() {
            for s in Permutation::all(k + 2) {
                if self.op.act(a, &s)? != *a {
                    return Ok(Some(k + 2));
                }
            }
        }
        Ok(None)
    }

    pub fn random_element(&self, rng: &mut dyn RngCore) -> GroupElement<O::Elem> {
        GroupElement { order: self.order, components: (2..=self.order).map(|n| self.op.sample(n, rng)).collect() }
    }

    pub fn random_invariant_element(&self, rng: &mut dyn RngCore) -> Result<GroupElement<O::Elem>> {
        let g = self.random_element(rng);
        self.symmetrize(&g)
    }

    pub fn random_lie_element(&self, rng: &mut dyn RngCore) -> LieElement<O::Elem> {
        LieElement { order: self.order, components: (2..=self.order).map(|n| self.op.sample(n, rng)).collect() }
    }

    /// Whether components `2..=m'` all vanish, i.e. `g` lies in the normal subgroup `G̃_{m'}`.
    pub fn vanishes_through(&self, g: &GroupElement<O::Elem>, m: usize) -> bool {
        g.components.iter().take(m.saturating_sub(1)).all(|a| self.op.is_zero(a))
    }

    /// Renders components of arities `2..=m` in order, skipping zeros.
    pub fn render(&self, components: &[O::Elem]) -> String {
        components.iter().filter(|a| !self.op.is_zero(a)).map(|a| self.op.render(a)).collect()
    }
}

#[cfg(test)]
mod tests;
