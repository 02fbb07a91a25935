use std::fmt;

use rayon::prelude::*;

use super::{universe_diagrams, QftModel, SystemFilter};
use crate::combinatorics::{nonempty_subsets, Permutation};
use crate::graphs::CanonicalMonomial;
use crate::Result;

/// Outcome of an exhaustive closure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub max_arity: usize,
    pub diagrams: usize,
    pub counterexample: Option<String>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for ClosureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "closure holds on {} diagrams up to {} vertices", self.diagrams, self.max_arity),
            Some(c) => write!(f, "closure fails: {c}"),
        }
    }
}

fn check_one(s: &SystemFilter, model: &QftModel, m: &CanonicalMonomial) -> Result<Option<String>> {
    let sig = model.signature();
    let colors: Vec<_> = sig.all_vertex_colors().collect();
    let n = m.n();
    for sigma in Permutation::all(n) {
        let r = m.relabel(&sigma)?;
        for &k in &colors {
            if s.contains(m, k) != s.contains(&r, k) {
                return Ok(Some(format!(
                    "not S_{n}-invariant: ({}, {}) vs relabelling by {sigma}",
                    m.render(sig),
                    sig.vertex_name(k)
                )));
            }
        }
    }
    for block in nonempty_subsets(n) {
        let sub = m.restrict(&block)?;
        for &l in &colors {
            if !s.contains(&sub, l) {
                continue;
            }
            let quotient = m.contract(&block, l)?;
            for &k in &colors {
                if s.contains(&quotient, k) && !s.contains(m, k) {
                    return Ok(Some(format!(
                        "({}, {}) with J = {block:?}, L = {} is not in S although both pieces are",
                        m.render(sig),
                        sig.vertex_name(k),
                        sig.vertex_name(l)
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Checks `S_n`-invariance and the gluing condition
/// `(Γ_J, L) ∈ S ∧ (Γ/(J, L), K) ∈ S ⇒ (Γ, K) ∈ S` on every diagram of
/// [`universe_diagrams`] with at most `max_arity` vertices and every subset `J`.
pub fn closure_check(s: &SystemFilter, model: &QftModel, max_arity: usize, cap: usize) -> Result<ClosureReport> {
    let mut diagrams = 0;
    for n in 1..=max_arity {
        let universe = universe_diagrams(model, n, cap)?;
        diagrams += universe.len();
        let found = universe
            .par_iter()
            .map(|m| check_one(s, model, m))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        if let Some(c) = found {
            return Ok(ClosureReport { max_arity, diagrams, counterexample: Some(c) });
        }
    }
    Ok(ClosureReport { max_arity, diagrams, counterexample: None })
}
