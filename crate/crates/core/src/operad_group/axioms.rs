//! Randomized verification of the symmetric-operad axioms.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Operad, OperadGroup};
use crate::combinatorics::Permutation;
use crate::formal_diffeo::TruncationOrder;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheckConfig {
    /// Number of random `(a, b, c)` samples.
    pub samples: usize,
    /// Largest arity of a sampled element.
    pub max_arity: usize,
    /// Largest arity of any composite that gets built.
    pub max_composite: usize,
    pub seed: u64,
    /// Order of the Lie elements used to probe the pre-Lie associator; below 4 it is skipped.
    pub associator_order: usize,
}

impl Default for AxiomCheckConfig {
    fn default() -> Self {
        AxiomCheckConfig { samples: 20, max_arity: 3, max_composite: 4, seed: 0, associator_order: 4 }
    }
}

/// Which pair of arguments the pre-Lie associator `(x⋆y)⋆z − x⋆(y⋆z)` is symmetric in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssociatorSymmetry {
    /// Symmetric in `x, y`.
    Left,
    /// Symmetric in `y, z`.
    Right,
    Both,
    Neither,
    NotProbed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: usize,
    pub counterexample: Option<String>,
    pub associator: AssociatorSymmetry,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => writeln!(f, "operad axioms: pass ({} identities checked)", self.checks)?,
            Some(c) => writeln!(f, "operad axioms: FAIL after {} identities\n{c}", self.checks)?,
        }
        write!(f, "pre-Lie associator symmetry: {:?}", self.associator)
    }
}

fn arity_triples(cfg: &AxiomCheckConfig) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 1..=cfg.max_arity {
        for b in 1..=cfg.max_arity {
            for c in 1..=cfg.max_arity {
                if a + b + c - 2 <= cfg.max_composite {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

fn random_permutation(n: usize, rng: &mut impl Rng) -> Permutation {
    let all = Permutation::all(n);
    all[rng.gen_range(0..all.len())].clone()
}

struct Sample<'o, O: Operad> {
    op: &'o O,
    a: O::Elem,
    b: O::Elem,
    c: O::Elem,
    checks: usize,
}

impl<O: Operad> Sample<'_, O> {
    fn expect(&mut self, what: String, lhs: O::Elem, rhs: O::Elem) -> std::result::Result<(), String> {
        self.checks += 1;
        if lhs == rhs {
            return Ok(());
        }
        let op = self.op;
        Err(format!(
            "{what}\n-- a --\n{}-- b --\n{}-- c --\n{}-- lhs --\n{}-- rhs --\n{}",
            op.render(&self.a),
            op.render(&self.b),
            op.render(&self.c),
            op.render(&lhs),
            op.render(&rhs)
        ))
    }

    fn run(&mut self, rng: &mut impl Rng) -> Result<std::result::Result<(), String>> {
        let op = self.op;
        let (a, b, c) = (self.a.clone(), self.b.clone(), self.c.clone());
        let (na, nb) = (op.arity(&a), op.arity(&b));
        let unit = op.unit();
        macro_rules! check {
            ($what:expr, $lhs:expr, $rhs:expr) => {
                if let Err(e) = self.expect($what, $lhs, $rhs) {
                    return Ok(Err(e));
                }
            };
        }

        check!("unit ∘_1 a = a".into(), op.pcomp(&unit, 1, &a)?, a.clone());
        for i in 1..=na {
            check!(format!("a ∘_{i} unit = a"), op.pcomp(&a, i, &unit)?, a.clone());
        }
        for i in 1..=na {
            let ab = op.pcomp(&a, i, &b)?;
            for l in 1..=nb {
                let bc = op.pcomp(&b, l, &c)?;
                check!(
                    format!("sequential: (a ∘_{i} b) ∘_{} c = a ∘_{i} (b ∘_{l} c)", i + l - 1),
                    op.pcomp(&ab, i + l - 1, &c)?,
                    op.pcomp(&a, i, &bc)?
                );
            }
            for l in i + 1..=na {
                let ac = op.pcomp(&a, l, &c)?;
                check!(
                    format!("parallel: (a ∘_{i} b) ∘_{} c = (a ∘_{l} c) ∘_{i} b", l + nb - 1),
                    op.pcomp(&ab, l + nb - 1, &c)?,
                    op.pcomp(&ac, i, &b)?
                );
            }
        }

        let sigma = random_permutation(na, rng);
        let tau = random_permutation(nb, rng);
        let rho = random_permutation(na, rng);
        check!(
            format!("action law with σ = {sigma}, ρ = {rho}"),
            op.act(&op.act(&a, &sigma)?, &rho)?,
            op.act(&a, &rho.compose(&sigma))?
        );
        let a_sigma = op.act(&a, &sigma)?;
        let b_tau = op.act(&b, &tau)?;
        for i in 1..=na {
            let p = sigma.inverse().apply(i);
            let sizes: Vec<usize> = (1..=na).map(|q| if q == i { nb } else { 1 }).collect();
            check!(
                format!("outer equivariance: act(a, {sigma}) ∘_{i} b"),
                op.pcomp(&a_sigma, i, &b)?,
                op.act(&op.pcomp(&a, p, &b)?, &sigma.block_expand(&sizes))?
            );
            let mut images: Vec<usize> = (1..=na + nb - 1).collect();
            for t in 1..=nb {
                images[i - 1 + t - 1] = i - 1 + tau.apply(t);
            }
            let tau_ext = Permutation::from_images(images)?;
            check!(
                format!("inner equivariance: a ∘_{i} act(b, {tau})"),
                op.pcomp(&a, i, &b_tau)?,
                op.act(&op.pcomp(&a, i, &b)?, &tau_ext)?
            );
        }
        Ok(Ok(()))
    }
}

fn probe_associator<O: Operad>(op: &O, cfg: &AxiomCheckConfig) -> Result<AssociatorSymmetry> {
    if cfg.associator_order < 4 {
        return Ok(AssociatorSymmetry::NotProbed);
    }
    let group = OperadGroup::new(op, TruncationOrder::new(cfg.associator_order)?);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let (mut left, mut right) = (true, true);
    type L<O> = super::LieElement<<O as Operad>::Elem>;
    let assoc = |x: &L<O>, y: &L<O>, z: &L<O>| -> Result<L<O>> {
        let xy_z = group.prelie(&group.prelie(x, y)?, z)?;
        let x_yz = group.prelie(x, &group.prelie(y, z)?)?;
        group.lie_sub(&xy_z, &x_yz)
    };
    for _ in 0..3 {
        let x = group.random_lie_element(&mut rng);
        let y = group.random_lie_element(&mut rng);
        let z = group.random_lie_element(&mut rng);
        let xyz = assoc(&x, &y, &z)?;
        left &= xyz == assoc(&y, &x, &z)?;
        right &= xyz == assoc(&x, &z, &y)?;
    }
    Ok(match (left, right) {
        (true, true) => AssociatorSymmetry::Both,
        (true, false) => AssociatorSymmetry::Left,
        (false, true) => AssociatorSymmetry::Right,
        (false, false) => AssociatorSymmetry::Neither,
    })
}

/// Checks unit laws, sequential and parallel associativity, both
/// equivariance relations and the action law on random samples.
///
/// Samples are independent and seeded by index, so the report does not depend
/// on scheduling; the first failing sample in index order is reported.
pub fn check_operad_axioms<O: Operad>(op: &O, cfg: &AxiomCheckConfig) -> Result<AxiomReport> {
    let triples = arity_triples(cfg);
    let outcomes: Vec<(usize, std::result::Result<(), String>)> = (0..cfg.samples)
        .into_par_iter()
        .map(|idx| -> Result<_> {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(1_000_003).wrapping_add(idx as u64));
            let (na, nb, nc) = triples[idx % triples.len()];
            let mut sample = Sample {
                op,
                a: op.sample(na, &mut rng),
                b: op.sample(nb, &mut rng),
                c: op.sample(nc, &mut rng),
                checks: 0,
            };
            let outcome = sample.run(&mut rng)?;
            Ok((sample.checks, outcome))
        })
        .collect::<Result<_>>()?;
    let mut checks = 0;
    let mut counterexample = None;
    for (n, outcome) in outcomes {
        checks += n;
        if let Err(e) = outcome {
            counterexample = Some(e);
            break;
        }
    }
    let associator = probe_associator(op, cfg)?;
    Ok(AxiomReport { checks, counterexample, associator })
}
