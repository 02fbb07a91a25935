//! Ready-made models used throughout the tests and the CLI examples.

use crate::contraction_operad::{QftModel, VertexType};
use crate::graphs::{ColorSignature, FColor, Parity, VColor};

/// One scalar field `phi`, one vertex color `L`, `Adm = {(phi, phi)}`, 1PI
/// and tadpole-free, with `T = {tau = (L; phi phi), tau0 = (L; ∅)}`.
///
/// `tau0` is the vacuum vertex that 1PI vacuum diagrams contract to.
pub fn phi_squared() -> QftModel {
    let sig = ColorSignature::new(["L"], [("phi", Parity::Boson)]).expect("valid names");
    let phi = FColor(0);
    let types = vec![VertexType::new("tau", VColor(0), vec![phi, phi]), VertexType::new("tau0", VColor(0), vec![])];
    QftModel::new(sig, [(phi, phi)], types, true, true, true).expect("valid model")
}

fn qed_signature() -> ColorSignature {
    ColorSignature::new(["L"], [("A", Parity::Boson), ("psi", Parity::Boson), ("psibar", Parity::Boson)])
        .expect("valid names")
}

fn qed_with(extra: bool) -> QftModel {
    let sig = qed_signature();
    let (a, psi, psibar) = (FColor(0), FColor(1), FColor(2));
    let mut types = vec![VertexType::new("g", VColor(0), vec![a, psi, psibar])];
    if extra {
        types.push(VertexType::new("z_A", VColor(0), vec![a, a]));
        types.push(VertexType::new("z_psi", VColor(0), vec![psi, psibar]));
    }
    QftModel::new(sig, [(a, a), (psi, psibar)], types, true, true, true).expect("valid model")
}

/// Fields `A, psi, psibar` (treated as bosons), `Adm = {(A,A), (psi,psibar), (psibar,psi)}`,
/// `T = {g = (L; A psi psibar)}`, 1PI and tadpole-free.
pub fn qed() -> QftModel {
    qed_with(false)
}

/// [`qed`] with the self-energy types `z_A = (L; A A)` and `z_psi = (L; psi psibar)` added to `T`,
/// so that two-vertex 1PI diagrams contract into `T`.
pub fn qed_with_self_energies() -> QftModel {
    qed_with(true)
}

/// A scalar model without the 1PI requirement, so that compositions rarely vanish:
/// `T = {t3 = (L; phi phi phi), t2 = (L; phi phi), t1 = (L; phi), t0 = (L; ∅)}`,
/// `Adm = {(phi, phi)}`, tadpole-free.
pub fn phi_cubed() -> QftModel {
    let sig = ColorSignature::new(["L"], [("phi", Parity::Boson)]).expect("valid names");
    let phi = FColor(0);
    let types = (0..=3).rev().map(|k| VertexType::new(format!("t{k}"), VColor(0), vec![phi; k])).collect();
    QftModel::new(sig, [(phi, phi)], types, false, true, true).expect("valid model")
}
