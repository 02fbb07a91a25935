use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::formal_diffeo::{faa_di_bruno_compose, SeriesElement};
use crate::{int, rat};

fn order(m: usize) -> TruncationOrder {
    TruncationOrder::new(m).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn end_unit_and_arities() {
    let op = EndOperad::new(2).unwrap();
    let u = op.unit();
    assert_eq!(*u.get(0, &[0]), int(1));
    assert_eq!(*u.get(0, &[1]), int(0));
    let mut r = rng(1);
    let f = op.sample(2, &mut r);
    let g = op.sample(2, &mut r);
    assert_eq!(op.arity(&op.pcomp(&f, 1, &g).unwrap()), 3);
    assert!(EndOperad::new(0).is_err());
    assert_eq!(op.pcomp(&f, 3, &g), Err(Error::SlotOutOfRange { slot: 3, arity: 2 }));
}

#[test]
fn end_action_permutes_inputs() {
    let op = EndOperad::new(2).unwrap();
    let mut f = MultilinearMap::zero(2, 2);
    f.set(0, &[0, 1], int(5));
    let swapped = op.act(&f, &Permutation::transposition(2, 1, 2).unwrap()).unwrap();
    assert_eq!(*swapped.get(0, &[1, 0]), int(5));
    assert_eq!(*swapped.get(0, &[0, 1]), int(0));
}

#[test]
fn product_in_degree_two_is_sum() {
    let op = EndOperad::new(2).unwrap();
    let group = OperadGroup::new(&op, order(4));
    let mut r = rng(2);
    let g = group.random_element(&mut r);
    let f = group.random_element(&mut r);
    let gf = group.product(&g, &f).unwrap();
    let expected = op.add(g.component(2).unwrap(), f.component(2).unwrap()).unwrap();
    assert_eq!(gf.component(2), Some(&expected));
    let id = group.identity();
    assert_eq!(group.product(&g, &id).unwrap(), g);
    assert_eq!(group.product(&id, &g).unwrap(), g);
}

#[test]
fn inverse_negates_degree_two() {
    let op = EndOperad::new(2).unwrap();
    let group = OperadGroup::new(&op, order(4));
    let f = group.random_element(&mut rng(3));
    let inv = group.inverse(&f).unwrap();
    assert_eq!(inv.component(2).unwrap(), &op.scale(f.component(2).unwrap(), &int(-1)));
    assert_eq!(group.product(&f, &inv).unwrap(), group.identity());
    assert_eq!(group.product(&inv, &f).unwrap(), group.identity());
    assert_eq!(group.inverse(&group.identity()).unwrap(), group.identity());
}

#[test]
fn one_dimensional_product_is_faa_di_bruno() {
    let op = EndOperad::new(1).unwrap();
    let group = OperadGroup::new(&op, order(4));
    let f = SeriesElement::from_univariate(order(4), &[int(0), int(1), int(1)]).unwrap();
    let g = SeriesElement::from_univariate(order(4), &[int(0), int(1), rat(1, 2), int(-3)]).unwrap();
    let prod = group.product(&series_to_group(&g).unwrap(), &series_to_group(&f).unwrap()).unwrap();
    assert_eq!(group_to_series(&prod, 1).unwrap(), faa_di_bruno_compose(&g, &f).unwrap());
}

#[test]
fn prelie_degree_three_has_three_terms() {
    let op = EndOperad::new(2).unwrap();
    let group = OperadGroup::new(&op, order(3));
    let mut r = rng(4);
    let f2 = op.sample(2, &mut r);
    let g2 = op.sample(2, &mut r);
    let f = group.lie_element(vec![f2.clone(), op.zero(3)]).unwrap();
    let g = group.lie_element(vec![g2.clone(), op.zero(3)]).unwrap();
    let fg = group.prelie(&f, &g).unwrap();
    assert!(op.is_zero(fg.component(2).unwrap()));
    let mut expected = op.zero(3);
    for subset in [vec![1, 2], vec![1, 3], vec![2, 3]] {
        let sigma = SetPartition::from_subset(&subset, 3).unwrap().permutation();
        let term = op.act(&op.pcomp(&g2, subset[0], &f2).unwrap(), &sigma).unwrap();
        expected = op.add(&expected, &term).unwrap();
    }
    assert_eq!(fg.component(3), Some(&expected));
}

#[test]
fn prelie_is_bilinear_and_bracket_antisymmetric() {
    let op = EndOperad::new(2).unwrap();
    let group = OperadGroup::new(&op, order(4));
    let mut r = rng(5);
    let f = group.random_lie_element(&mut r);
    let g = group.random_lie_element(&mut r);
    let zero = group.lie_zero();
    assert!(group.lie_is_zero(&group.prelie(&f, &zero).unwrap()));
    assert!(group.lie_is_zero(&group.prelie(&zero, &g).unwrap()));
    assert!(group.lie_is_zero(&group.bracket(&f, &f).unwrap()));
    let fg = group.bracket(&f, &g).unwrap();
    let gf = group.bracket(&g, &f).unwrap();
    assert_eq!(fg, group.lie_scale(&gf, &int(-1)));
}

#[test]
fn exp_and_log_low_degrees() {
    let op = EndOperad::new(2).unwrap();
    let group = OperadGroup::new(&op, order(4));
    let mut r = rng(6);
    let l = group.random_lie_element(&mut r);
    let e = group.exp(&l).unwrap();
    assert_eq!(e.component(2), l.component(2));
    assert_eq!(group.exp(&group.lie_zero()).unwrap(), group.identity());
    assert!(group.lie_is_zero(&group.log(&group.identity()).unwrap()));
    let g = group.random_element(&mut r);
    let lg = group.log(&g).unwrap();
    assert_eq!(lg.component(2), g.component(2));
    assert_eq!(group.exp(&lg).unwrap(), g);
    assert_eq!(group.log(&e).unwrap(), l);
}

#[test]
fn truncation_examples() {
    let op = EndOperad::new(1).unwrap();
    let group = OperadGroup::new(&op, order(4));
    let mut r = rng(7);
    let g = group.random_element(&mut r);
    let f = group.random_element(&mut r);
    let t1 = g.truncate(order(1)).unwrap();
    assert!(t1.components().is_empty());
    let t3 = g.truncate(order(3)).unwrap();
    assert_eq!(t3.truncate(order(3)).unwrap(), t3);
    let small = OperadGroup::new(&op, order(3));
    assert_eq!(
        group.product(&g, &f).unwrap().truncate(order(3)).unwrap(),
        small.product(&t3, &f.truncate(order(3)).unwrap()).unwrap()
    );
    assert!(g.truncate(order(5)).is_err());
}

#[test]
fn symmetrize_projects_onto_invariants() {
    let op = EndOperad::new(2).unwrap();
    let group = OperadGroup::new(&op, order(4));
    let g = group.random_element(&mut rng(8));
    let s = group.symmetrize(&g).unwrap();
    assert!(group.is_invariant(&s).unwrap());
    assert_eq!(group.symmetrize(&s).unwrap(), s);
    assert!(s.components().iter().all(MultilinearMap::is_symmetric));
    assert_eq!(group.first_non_invariant(&s).unwrap(), None);
    assert!(matches!(group_to_series(&g, 2), Err(Error::NotInvariant(_))));
}

#[test]
fn gamma_with_unit_padding_is_partial_composition() {
    let op = EndOperad::new(2).unwrap();
    let mut r = rng(9);
    for (k, j) in [(2, 2), (3, 2), (2, 3)] {
        let g = op.sample(k, &mut r);
        let f = op.sample(j, &mut r);
        for slot in 1..=k {
            let mut bs = vec![op.unit(); k];
            bs[slot - 1] = f.clone();
            assert_eq!(op.gamma(&g, &bs).unwrap(), op.pcomp(&g, slot, &f).unwrap());
        }
    }
}

#[test]
fn end_operad_satisfies_axioms() {
    let op = EndOperad::new(2).unwrap();
    let report = check_operad_axioms(&op, &AxiomCheckConfig::default()).unwrap();
    assert!(report.passed(), "{report}");
    assert!(report.checks > 100);
    assert_ne!(report.associator, AssociatorSymmetry::NotProbed);
}

/// `End_V` with a partial composition that ignores the slot index.
struct SlotBlind(EndOperad);

impl Operad for SlotBlind {
    type Elem = MultilinearMap;
    fn unit(&self) -> MultilinearMap {
        self.0.unit()
    }
    fn zero(&self, arity: usize) -> MultilinearMap {
        self.0.zero(arity)
    }
    fn arity(&self, a: &MultilinearMap) -> usize {
        a.arity()
    }
    fn add(&self, a: &MultilinearMap, b: &MultilinearMap) -> Result<MultilinearMap> {
        self.0.add(a, b)
    }
    fn scale(&self, a: &MultilinearMap, c: &Rational) -> MultilinearMap {
        self.0.scale(a, c)
    }
    fn is_zero(&self, a: &MultilinearMap) -> bool {
        self.0.is_zero(a)
    }
    fn act(&self, a: &MultilinearMap, sigma: &Permutation) -> Result<MultilinearMap> {
        self.0.act(a, sigma)
    }
    fn pcomp(&self, a: &MultilinearMap, _i: usize, b: &MultilinearMap) -> Result<MultilinearMap> {
        self.0.pcomp(a, 1, b)
    }
    fn sample(&self, arity: usize, rng: &mut dyn RngCore) -> MultilinearMap {
        self.0.sample(arity, rng)
    }
    fn render(&self, a: &MultilinearMap) -> String {
        self.0.render(a)
    }
}

#[test]
fn corrupted_composition_is_caught() {
    let op = SlotBlind(EndOperad::new(2).unwrap());
    let cfg = AxiomCheckConfig { associator_order: 0, ..AxiomCheckConfig::default() };
    let report = check_operad_axioms(&op, &cfg).unwrap();
    assert!(!report.passed());
    assert!(report.counterexample.unwrap().contains("-- lhs --"));
}
