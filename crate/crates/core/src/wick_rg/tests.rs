use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::combinatorics::Permutation;
use crate::contraction_operad::{model_operad, VertexType};
use crate::fixtures::{phi_cubed, phi_squared, qed, qed_with_self_energies};
use crate::formal_diffeo::faa_di_bruno_compose;
use crate::graphs::Parity;
use crate::operad_group::Operad;
use crate::{int, rat};

fn monomial(model: &QftModel, text: &str) -> CanonicalMonomial {
    CanonicalMonomial::parse(text, model.signature()).unwrap()
}

fn coefficients(model: &QftModel, d: &DiagramSum) -> Vec<(String, Rational)> {
    let mut out: Vec<(String, Rational)> =
        d.terms().iter().map(|(m, c)| (m.render(model.signature()), c.clone())).collect();
    out.sort();
    out
}

#[test]
fn single_vertex_wick_sum() {
    let model = qed();
    let d = wick_enumerate(&model, &[0]).unwrap();
    assert_eq!(coefficients(&model, &d), [("L(1)*A(1)*psi(1)*psibar(1)".to_string(), int(1))]);
    assert_eq!(wick_differential(&model, &[0]).unwrap(), d);
    assert!(wick_enumerate(&model, &[]).is_err());
    assert!(wick_enumerate(&model, &[1]).is_err());
}

#[test]
fn two_one_leg_vertices() {
    let sig = ColorSignature::new(["L"], [("phi", Parity::Boson)]).unwrap();
    let t = vec![VertexType::new("t1", VColor(0), vec![FColor(0)])];
    let model = QftModel::new(sig, [(FColor(0), FColor(0))], t, false, true, true).unwrap();
    let d = wick_enumerate(&model, &[0, 0]).unwrap();
    assert_eq!(
        coefficients(&model, &d),
        [("L(1)*L(2)*<phi(1)|phi(2)>".to_string(), int(1)), ("L(1)*L(2)*phi(1)*phi(2)".to_string(), int(1))]
    );
    assert_eq!(wick_differential(&model, &[0, 0]).unwrap(), d);
}

#[test]
fn phi_squared_two_vertex_multiplicities() {
    let model = phi_squared();
    let d = wick_enumerate(&model, &[0, 0]).unwrap();
    assert_eq!(
        coefficients(&model, &d),
        [
            ("L(1)*L(2)*<phi(1)|phi(2)>*<phi(1)|phi(2)>".to_string(), int(2)),
            ("L(1)*L(2)*<phi(1)|phi(2)>*phi(1)*phi(2)".to_string(), int(4)),
            ("L(1)*L(2)*phi(1)*phi(1)*phi(2)*phi(2)".to_string(), int(1)),
        ]
    );
    assert_eq!(wick_differential(&model, &[0, 0]).unwrap(), d);
}

#[test]
fn qed_two_vertex_wick_sum() {
    // three independent admissible cross edges: A–A and the two fermion orientations
    let model = qed();
    let d = wick_enumerate(&model, &[0, 0]).unwrap();
    assert_eq!(d.len(), 8);
    assert!(d.terms().values().all(|c| *c == int(1)));
    assert_eq!(d.coefficient(&monomial(&model, "L(1)*L(2)*<A(1)|A(2)>*<psi(1)|psibar(2)>*psi(2)*psibar(1)")), int(1));
    assert_eq!(wick_differential(&model, &[0, 0]).unwrap(), d);
}

#[test]
fn enumeration_matches_differential_formula() {
    for model in [qed_with_self_energies(), phi_cubed()] {
        let t = model.vertex_types().len();
        for n in 1..=3 {
            for types in tuples(t, n) {
                let flags: usize = types.iter().map(|&k| model.vertex_types()[k].corolla.len()).sum();
                if flags > 8 {
                    continue;
                }
                let e = wick_enumerate(&model, &types).unwrap();
                assert!(e.terms().values().all(|c| c.is_integer() && *c > int(0)));
                assert_eq!(wick_differential(&model, &types).unwrap(), e, "{types:?}");
            }
        }
    }
}

#[test]
fn diagram_sum_text_round_trip() {
    let model = phi_squared();
    let d = wick_enumerate(&model, &[0, 0]).unwrap();
    let text = d.render(model.signature());
    assert!(text.starts_with("2 * L(1)*L(2)*<phi(1)|phi(2)>*<phi(1)|phi(2)>\n"));
    assert_eq!(DiagramSum::parse(&text, 2, model.signature()).unwrap(), d);
}

fn double_edge(model: &QftModel, c: Rational) -> ContractionMap {
    let mut q = ContractionMap::zero(2);
    q.add_entry(monomial(model, "L(1)*L(2)*<phi(1)|phi(2)>*<phi(1)|phi(2)>"), VColor(0), c).unwrap();
    q
}

#[test]
fn hat_of_double_edge() {
    let model = phi_squared();
    let q = double_edge(&model, rat(5, 3));
    let d = wick_enumerate(&model, &[0, 0]).unwrap();
    let h = hat_q(&q, &d).unwrap();
    assert_eq!(coefficients(&model, &h), [("L(1)".to_string(), rat(10, 3))]);
    assert!(hat_q(&ContractionMap::zero(2), &d).unwrap().is_empty());
    assert!(hat_q(&q, &wick_enumerate(&model, &[0]).unwrap()).is_err());
}

#[test]
fn morphism_of_double_edge() {
    let model = phi_squared();
    let op = model_operad(&model);
    let rg = RgMorphism::new(&op);
    let c = rat(-7, 2);
    let f = rg.morphism(&double_edge(&model, c.clone())).unwrap();
    let (tau, tau0) = (0, 1);
    for (nu, mu, v) in f.nonzero() {
        assert_eq!((nu, mu.as_slice(), v), (tau0, [tau, tau].as_slice(), &(int(2) * &c)));
    }
    assert_eq!(f.nonzero().count(), 1);
    assert!(rg.morphism(&ContractionMap::zero(2)).unwrap().nonzero().next().is_none());
    assert_eq!(rg.morphism(&op.unit()).unwrap(), MultilinearMap::identity(2));
}

#[test]
fn contraction_outside_types_is_an_error() {
    let model = qed();
    let op = model_operad(&model);
    let mut q = ContractionMap::zero(2);
    q.add_entry(monomial(&model, "L(1)*L(2)*<A(1)|A(2)>*<psi(1)|psibar(2)>*psi(2)*psibar(1)"), VColor(0), int(1))
        .unwrap();
    assert!(matches!(RgMorphism::new(&op).morphism(&q), Err(Error::OutsideVertexTypes(_))));
    let projected = RgMorphism::permissive(&op).morphism(&q).unwrap();
    assert!(projected.nonzero().next().is_none());
}

fn end_of(rg: &RgMorphism) -> EndOperad {
    EndOperad::new(rg.dim()).unwrap()
}

#[test]
fn morphism_law_and_equivariance() {
    for model in [phi_squared(), qed_with_self_energies(), phi_cubed()] {
        let op = model_operad(&model);
        let rg = RgMorphism::new(&op);
        let end = end_of(&rg);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..6 {
            for (na, nb) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                let a = op.sample(na, &mut rng);
                let b = op.sample(nb, &mut rng);
                for i in 1..=na {
                    let lhs = rg.morphism(&op.pcomp(&a, i, &b).unwrap()).unwrap();
                    let rhs = end.pcomp(&rg.morphism(&a).unwrap(), i, &rg.morphism(&b).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            let q = op.sample(3, &mut rng);
            for s in Permutation::all(3) {
                let lhs = rg.morphism(&op.act(&q, &s).unwrap()).unwrap();
                assert_eq!(lhs, end.act(&rg.morphism(&q).unwrap(), &s).unwrap());
            }
        }
    }
}

#[test]
fn rg_action_examples() {
    let model = phi_squared();
    let op = model_operad(&model);
    let rg = RgMorphism::new(&op);
    let group = OperadGroup::new(&op, TruncationOrder::new(2).unwrap());
    let identity = rg.rg_action(&group.identity()).unwrap();
    assert_eq!(identity, SeriesElement::identity(2, TruncationOrder::new(2).unwrap()).unwrap());
    let c = rat(3, 4);
    let g = group.element(vec![double_edge(&model, c.clone())]).unwrap();
    let s = rg.rg_action(&g).unwrap();
    let labels = model.type_names();
    assert_eq!(s.render(Some(&labels)), "tau; tau : 1\ntau0; tau,tau : 3/2\ntau0; tau0 : 1\n");
    // couplings (g, g0) ↦ (g, g0 + c g²) with the 1/2! of the series normalisation
    let x = InteractionVector::from_named(&model, [("tau", int(2)), ("tau0", int(1))]).unwrap();
    assert_eq!(x.transform(&s).unwrap().coefficients(), [int(2), int(1) + int(4) * &c]);
}

#[test]
fn rg_action_requires_invariant_components() {
    // a 3-valent vertex at slot 1 joined to a 1-valent vertex at slot 2, but not the mirror image
    let model = phi_cubed();
    let op = model_operad(&model);
    let rg = RgMorphism::new(&op);
    let group = OperadGroup::new(&op, TruncationOrder::new(2).unwrap());
    let mut q = ContractionMap::zero(2);
    q.add_entry(monomial(&model, "L(1)*L(2)*<phi(1)|phi(2)>*phi(1)*phi(1)"), VColor(0), int(1)).unwrap();
    op.check_element(&q).unwrap();
    let g = group.element(vec![q]).unwrap();
    assert!(matches!(rg.rg_action(&g), Err(Error::NotInvariant(2))));
    assert!(rg.rg_action(&group.symmetrize(&g).unwrap()).is_ok());
}

#[test]
fn rg_action_is_a_homomorphism() {
    for model in [qed_with_self_energies(), phi_cubed()] {
        let op = model_operad(&model);
        let rg = RgMorphism::new(&op);
        let group = OperadGroup::new(&op, TruncationOrder::new(3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..3 {
            let g = group.random_invariant_element(&mut rng).unwrap();
            let h = group.random_invariant_element(&mut rng).unwrap();
            let lhs = rg.rg_action(&group.product(&g, &h).unwrap()).unwrap();
            let rhs = faa_di_bruno_compose(&rg.rg_action(&g).unwrap(), &rg.rg_action(&h).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
