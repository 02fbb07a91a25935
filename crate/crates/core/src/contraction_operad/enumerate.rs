use std::collections::BTreeSet;

use super::QftModel;
use crate::graphs::{CanonicalMonomial, FColor, Leg, VColor};
use crate::{Error, Result};

/// Default bound on the number of distinct diagrams an enumeration may produce.
pub const DEFAULT_CAP: usize = 100_000;

/// Calls `visit` once per partial matching of `flags` whose pairs pass `allowed`.
/// `partner[k] == k` marks an external flag.
pub(crate) fn matchings(
    flags: &[Leg],
    allowed: &dyn Fn(Leg, Leg) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    fn go(
        flags: &[Leg],
        allowed: &dyn Fn(Leg, Leg) -> bool,
        partner: &mut Vec<Option<usize>>,
        visit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        let Some(f) = partner.iter().position(Option::is_none) else {
            let done: Vec<usize> = partner.iter().map(|p| p.expect("assigned")).collect();
            return visit(&done);
        };
        partner[f] = Some(f);
        go(flags, allowed, partner, visit)?;
        for g in f + 1..flags.len() {
            if partner[g].is_none() && allowed(flags[f], flags[g]) {
                partner[f] = Some(g);
                partner[g] = Some(f);
                go(flags, allowed, partner, visit)?;
                partner[g] = None;
            }
        }
        partner[f] = None;
        Ok(())
    }
    let mut partner = vec![None; flags.len()];
    go(flags, allowed, &mut partner, visit)
}

/// All monomials on `n` slots whose slot `i` is `corollas[choice[i]]`, for
/// every choice, with the pairings `allowed` admits and that `keep` accepts.
fn enumerate_over(
    corollas: &[(VColor, Vec<FColor>)],
    n: usize,
    cap: usize,
    allowed: &dyn Fn(Leg, Leg) -> bool,
    keep: &dyn Fn(&CanonicalMonomial) -> bool,
) -> Result<BTreeSet<CanonicalMonomial>> {
    let mut out = BTreeSet::new();
    if n == 0 || corollas.is_empty() {
        return Ok(out);
    }
    let mut choice = vec![0usize; n];
    loop {
        let vertices: Vec<VColor> = choice.iter().map(|&c| corollas[c].0).collect();
        let flags: Vec<Leg> = choice
            .iter()
            .enumerate()
            .flat_map(|(s, &c)| corollas[c].1.iter().map(move |&col| Leg::new(s + 1, col)))
            .collect();
        matchings(&flags, allowed, &mut |partner| {
            let externals = (0..flags.len()).filter(|&k| partner[k] == k).map(|k| flags[k]).collect();
            let propagators =
                (0..flags.len()).filter(|&k| partner[k] > k).map(|k| (flags[k], flags[partner[k]])).collect();
            let m = CanonicalMonomial::new(vertices.clone(), externals, propagators)?;
            if keep(&m) {
                out.insert(m);
                if out.len() > cap {
                    return Err(Error::CapExceeded(cap));
                }
            }
            Ok(())
        })?;
        // odometer over the slot choices
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < corollas.len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

fn sorted_by_render(set: BTreeSet<CanonicalMonomial>, model: &QftModel) -> Vec<CanonicalMonomial> {
    let mut keyed: Vec<(String, CanonicalMonomial)> =
        set.into_iter().map(|m| (m.render(model.signature()), m)).collect();
    keyed.sort();
    keyed.into_iter().map(|(_, m)| m).collect()
}

/// Diagram classes with `n` vertices drawn from `T`, joined by admissible
/// propagators; tadpole-free and 1PI when the model asks for it. Sorted by
/// rendered text.
pub fn enumerate_diagrams(model: &QftModel, n: usize, cap: usize) -> Result<Vec<CanonicalMonomial>> {
    let corollas: Vec<(VColor, Vec<FColor>)> =
        model.vertex_types().iter().map(|t| (t.color, t.corolla.clone())).collect();
    let forbid = model.forbid_tadpoles() || model.require_1pi();
    let allowed = |a: Leg, b: Leg| !(forbid && a.slot == b.slot) && model.admits(a, b);
    let keep = |m: &CanonicalMonomial| !model.require_1pi() || m.is_1pi();
    Ok(sorted_by_render(enumerate_over(&corollas, n, cap, &allowed, &keep)?, model))
}

/// The test universe for closure checks: every vertex carries the corolla of
/// some type in `T` under any vertex color, and flags pair up arbitrarily.
pub fn universe_diagrams(model: &QftModel, n: usize, cap: usize) -> Result<Vec<CanonicalMonomial>> {
    let shapes: BTreeSet<Vec<FColor>> = model.vertex_types().iter().map(|t| t.corolla.clone()).collect();
    let corollas: Vec<(VColor, Vec<FColor>)> =
        model.signature().all_vertex_colors().flat_map(|c| shapes.iter().map(move |s| (c, s.clone()))).collect();
    Ok(sorted_by_render(enumerate_over(&corollas, n, cap, &|_, _| true, &|_| true)?, model))
}
