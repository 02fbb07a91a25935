use std::sync::OnceLock;

use operad_rg::combinatorics::{enumerate_set_partitions, Permutation};
use operad_rg::contraction_operad::{enumerate_diagrams, model_operad, ContractionMap, ContractionOperad, DEFAULT_CAP};
use operad_rg::fixtures::{phi_cubed, qed_with_self_energies};
use operad_rg::formal_diffeo::{
    compose_direct, faa_di_bruno_compose, invert_series, multisets, SeriesElement, TruncationOrder,
};
use operad_rg::graphs::{CanonicalMonomial, DecoratedGraph};
use operad_rg::operad_group::{EndOperad, Operad, OperadGroup};
use operad_rg::wick_rg::{wick_enumerate, DiagramSum};
use operad_rg::{rat, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

fn permutation_triple() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1usize..=6).prop_flat_map(|n| (permutation(n), permutation(n), permutation(n)))
}

/// Bell numbers from the Bell triangle.
fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 1..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    if n == 0 {
        1
    } else {
        *row.last().unwrap()
    }
}

fn pointed(dim: usize, m: usize, seed: u64) -> SeriesElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = SeriesElement::identity(dim, TruncationOrder::new(m).unwrap()).unwrap();
    for n in 2..=m {
        for nu in 0..dim {
            for mu in multisets(dim, n) {
                if rng.gen_bool(0.5) {
                    s.set_coeff(nu, &mu, rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))).unwrap();
                }
            }
        }
    }
    s
}

fn phi3_diagrams(n: usize) -> &'static [CanonicalMonomial] {
    static CACHE: OnceLock<Vec<Vec<CanonicalMonomial>>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (0..=3)
            .map(|n| if n == 0 { vec![] } else { enumerate_diagrams(&phi_cubed(), n, DEFAULT_CAP).unwrap() })
            .collect()
    })[n]
}

fn qed_se_operad() -> &'static ContractionOperad {
    static OP: OnceLock<ContractionOperad> = OnceLock::new();
    OP.get_or_init(|| model_operad(&qed_with_self_energies()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permutations_form_a_group((a, b, c) in permutation_triple()) {
        let n = a.len();
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert!(a.inverse().compose(&a).is_identity());
        for i in 1..=n {
            prop_assert_eq!(a.compose(&b).apply(i), a.apply(b.apply(i)));
        }
    }

    #[test]
    fn set_partitions_are_counted_by_bell_numbers(n in 1usize..=7) {
        let parts = enumerate_set_partitions(n).unwrap();
        prop_assert_eq!(parts.len(), bell(n));
        for p in &parts {
            let mut seen: Vec<usize> = p.blocks().iter().flatten().copied().collect();
            seen.sort_unstable();
            prop_assert_eq!(seen, (1..=n).collect::<Vec<_>>());
            prop_assert_eq!(p.permutation().len(), n);
        }
    }

    #[test]
    fn faa_di_bruno_agrees_with_substitution(dim in 1usize..=3, m in 2usize..=4, seed in any::<u64>()) {
        let g = pointed(dim, m, seed);
        let f = pointed(dim, m, seed.wrapping_add(1));
        prop_assert_eq!(faa_di_bruno_compose(&g, &f).unwrap(), compose_direct(&g, &f).unwrap());
    }

    #[test]
    fn series_inverse_and_text(dim in 1usize..=2, m in 2usize..=5, seed in any::<u64>()) {
        let f = pointed(dim, m, seed);
        let id = SeriesElement::identity(dim, TruncationOrder::new(m).unwrap()).unwrap();
        let inv = invert_series(&f).unwrap();
        prop_assert_eq!(faa_di_bruno_compose(&f, &inv).unwrap(), id.clone());
        prop_assert_eq!(faa_di_bruno_compose(&inv, &f).unwrap(), id);
        prop_assert_eq!(invert_series(&inv).unwrap(), f.clone());
        let text = f.render(None);
        prop_assert_eq!(SeriesElement::parse(&text, dim, TruncationOrder::new(m).unwrap(), None).unwrap(), f);
    }

    #[test]
    fn univariate_evaluation_is_the_polynomial(seed in any::<u64>(), num in -9i64..=9, den in 1i64..=5) {
        let f = pointed(1, 4, seed);
        let t = rat(num, den);
        let mut expected = t.clone();
        let mut factorial = Rational::from_integer(1.into());
        for n in 2..=4i64 {
            factorial *= Rational::from_integer(n.into());
            let power = (0..n).fold(rat(1, 1), |acc, _| acc * &t);
            expected += f.coeff(0, &vec![0; n as usize]) / &factorial * power;
        }
        prop_assert_eq!(f.evaluate(&[t]).unwrap(), vec![expected]);
    }

    #[test]
    fn monomial_relabelling_is_a_right_action(n in 1usize..=3, k in any::<prop::sample::Index>(), s in any::<u64>(), t in any::<u64>()) {
        let model = phi_cubed();
        let sig = model.signature();
        let list = phi3_diagrams(n);
        let m = &list[k.index(list.len())];
        let all = Permutation::all(n);
        let (s, t) = (&all[s as usize % all.len()], &all[t as usize % all.len()]);
        let r = m.relabel(s).unwrap();
        prop_assert_eq!(r.relabel(t).unwrap(), m.relabel(&s.compose(t)).unwrap());
        prop_assert_eq!(r.is_connected(), m.is_connected());
        prop_assert_eq!(r.is_1pi(), m.is_1pi());
        prop_assert_eq!(r.has_tadpole(), m.has_tadpole());
        prop_assert_eq!(r.external_colors(), m.external_colors());
        prop_assert_eq!(&CanonicalMonomial::parse(&m.render(sig), sig).unwrap(), m);
        prop_assert_eq!(&DecoratedGraph::from_monomial(m, sig).unwrap().to_monomial(), m);
    }

    #[test]
    fn contraction_action_law_and_text(n in 1usize..=3, seed in any::<u64>(), s in any::<u64>(), t in any::<u64>()) {
        let op = qed_se_operad();
        let q = op.sample(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let all = Permutation::all(n);
        let (s, t) = (&all[s as usize % all.len()], &all[t as usize % all.len()]);
        prop_assert_eq!(op.act(&op.act(&q, s).unwrap(), t).unwrap(), op.act(&q, &t.compose(s)).unwrap());
        let sig = op.model().signature();
        prop_assert_eq!(ContractionMap::parse(&q.render(sig), n, sig).unwrap(), q);
    }

    #[test]
    fn contraction_unit_laws(n in 1usize..=3, seed in any::<u64>()) {
        let op = qed_se_operad();
        let q = op.sample(n, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(op.pcomp(&op.unit(), 1, &q).unwrap(), q.clone());
        for i in 1..=n {
            prop_assert_eq!(op.pcomp(&q, i, &op.unit()).unwrap(), q.clone());
        }
    }

    #[test]
    fn end_group_log_exp_round_trip(seed in any::<u64>()) {
        let end = EndOperad::new(1).unwrap();
        let group = OperadGroup::new(&end, TruncationOrder::new(3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = group.random_element(&mut rng);
        prop_assert_eq!(group.exp(&group.log(&g).unwrap()).unwrap(), g.clone());
        let inv = group.inverse(&g).unwrap();
        prop_assert!(group.vanishes_through(&group.product(&g, &inv).unwrap(), 3));
    }

    #[test]
    fn wick_sums_round_trip(types in prop::collection::vec(0usize..3, 1..=3)) {
        let model = qed_with_self_energies();
        let d = wick_enumerate(&model, &types).unwrap();
        prop_assert!(!d.is_empty());
        let sig = model.signature();
        prop_assert_eq!(DiagramSum::parse(&d.render(sig), types.len(), sig).unwrap(), d);
    }
}
