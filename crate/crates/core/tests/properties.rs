use proptest::prelude::*;

use raag_core::lattice::LatticeIdeal;
use raag_core::monoid::Letter;
use raag_core::oracle::tail_member;
use raag_core::spectrum::{member, SpectrumPoint};
use raag_core::star_algebra::{defect, defect_by_products, multiply_monomials, Monomial};
use raag_core::{ArtinMonoid, Gen, PresentationGraph, Trace};

/// A graph on `n ⩽ 5` vertices with edges chosen by the bit pattern.
fn graph() -> impl Strategy<Value = PresentationGraph> {
    (1usize..=5, any::<u16>()).prop_map(|(n, pattern)| {
        let names: Vec<String> = ["a", "b", "c", "d", "f"][..n].iter().map(|s| s.to_string()).collect();
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if pattern >> bit & 1 == 1 {
                    edges.push((names[i].clone(), names[j].clone()));
                }
                bit += 1;
            }
        }
        PresentationGraph::new(&names, &edges).unwrap()
    })
}

fn word(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(any::<u8>(), 0..=max_len)
}

fn trace(m: &ArtinMonoid, w: &[u8]) -> Trace {
    let letters: Vec<Gen> = w.iter().map(|&g| g % m.rank() as u8).collect();
    m.normal_form(&letters).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_is_idempotent_and_canonical(g in graph(), w in word(8), swap in any::<usize>()) {
        let m = ArtinMonoid::new(g);
        let letters: Vec<Gen> = w.iter().map(|&x| x % m.rank() as u8).collect();
        let x = m.normal_form(&letters).unwrap();
        prop_assert!(m.is_normal(x.letters()));
        prop_assert_eq!(m.normal_form(x.letters()).unwrap(), x.clone());
        // Swapping a commuting adjacent pair does not change the trace.
        if letters.len() >= 2 {
            let i = swap % (letters.len() - 1);
            if m.commutes(letters[i], letters[i + 1]) {
                let mut other = letters.clone();
                other.swap(i, i + 1);
                prop_assert_eq!(m.normal_form(&other).unwrap(), x);
            }
        }
    }

    #[test]
    fn join_is_an_upper_bound_with_matching_residuals(g in graph(), a in word(5), b in word(5)) {
        let m = ArtinMonoid::new(g);
        let (x, y) = (trace(&m, &a), trace(&m, &b));
        let j = m.join(&x, &y);
        prop_assert_eq!(j.clone(), m.join(&y, &x));
        prop_assert_eq!(j.is_none(), m.residual(&x, &y).is_none());
        if let Some(j) = j {
            prop_assert!(m.left_divides(&x, &j) && m.left_divides(&y, &j));
            prop_assert!(j.len() <= x.len() + y.len());
            prop_assert_eq!(m.abelianize(&j), m.abelianize(&x).pointwise_max(&m.abelianize(&y)));
            prop_assert_eq!(m.multiply(&x, &m.residual(&x, &y).unwrap()), j.clone());
            prop_assert_eq!(m.multiply(&y, &m.residual(&y, &x).unwrap()), j);
        }
        let xy = m.multiply(&x, &y);
        prop_assert!(m.left_divides(&x, &xy));
        prop_assert_eq!(m.join(&x, &xy), Some(xy.clone()));
        prop_assert_eq!(m.left_quotient(&x, &xy), Some(y));
    }

    #[test]
    fn join_is_associative(g in graph(), a in word(3), b in word(3), c in word(3)) {
        let m = ArtinMonoid::new(g);
        let (x, y, z) = (trace(&m, &a), trace(&m, &b), trace(&m, &c));
        let l = m.join(&x, &y).and_then(|j| m.join(&j, &z));
        let r = m.join(&y, &z).and_then(|j| m.join(&x, &j));
        prop_assert_eq!(l, r);
    }

    #[test]
    fn group_words_reduce_and_split(g in graph(), w in prop::collection::vec((any::<u8>(), any::<bool>()), 0..8)) {
        let m = ArtinMonoid::new(g);
        let letters: Vec<Letter> = w.iter().map(|&(s, inv)| {
            let s = s % m.rank() as u8;
            if inv { Letter::neg(s) } else { Letter::pos(s) }
        }).collect();
        let x = m.group_reduce(&letters);
        prop_assert!(m.group_multiply(&x, &m.group_invert(&x)).is_identity());
        prop_assert_eq!(m.group_reduce(x.letters()), x.clone());
        if let Some((u, v)) = m.split_fraction(&x) {
            prop_assert_eq!(m.fraction(&u, &v), x);
        }
    }

    #[test]
    fn tail_membership_matches_positivity(g in graph(), tail in word(3), w in prop::collection::vec((any::<u8>(), any::<bool>()), 0..6)) {
        let m = ArtinMonoid::new(g);
        let t = trace(&m, &tail);
        let letters: Vec<Letter> = w.iter().map(|&(s, inv)| {
            let s = s % m.rank() as u8;
            if inv { Letter::neg(s) } else { Letter::pos(s) }
        }).collect();
        let x = m.group_reduce(&letters);
        prop_assert_eq!(member(&m, &SpectrumPoint::Tail(t.clone()), &x), tail_member(&m, &t, &x));
    }

    #[test]
    fn monomial_adjoint_reverses_products(g in graph(), w in prop::collection::vec(word(2), 4)) {
        let m = ArtinMonoid::new(g);
        let a = Monomial::new(trace(&m, &w[0]), trace(&m, &w[1]));
        let b = Monomial::new(trace(&m, &w[2]), trace(&m, &w[3]));
        let lhs = multiply_monomials(&m, &a, &b).map(|p| p.adjoint());
        let rhs = multiply_monomials(&m, &b.adjoint(), &a.adjoint());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn defect_expansions_agree(g in graph(), h in prop::collection::vec(word(3), 0..4)) {
        let m = ArtinMonoid::new(g);
        let h: Vec<Trace> = h.iter().map(|w| trace(&m, w)).collect();
        prop_assert_eq!(defect(&m, &h), defect_by_products(&m, &h));
    }

    #[test]
    fn graph_formats_round_trip(g in graph()) {
        prop_assert_eq!(PresentationGraph::parse(&g.export_text()).unwrap(), g.clone());
        prop_assert_eq!(PresentationGraph::parse(&g.export_json()).unwrap(), g.clone());
        prop_assert_eq!(g.opposite().opposite(), g);
    }

    #[test]
    fn ideal_lattice_laws(n in 1usize..=4, a in prop::collection::vec(any::<u8>(), 0..4), b in prop::collection::vec(any::<u8>(), 0..4)) {
        let mask = (1u64 << n) - 1;
        let i = LatticeIdeal::new(n, a.iter().map(|&s| s as u64 & mask)).unwrap();
        let j = LatticeIdeal::new(n, b.iter().map(|&s| s as u64 & mask)).unwrap();
        prop_assert_eq!(LatticeIdeal::new(n, i.generators().iter().copied()).unwrap(), i.clone());
        prop_assert!(i.leq(&i.join(&j)) && i.meet(&j).leq(&i));
        prop_assert_eq!(i.leq(&j), i.join(&j) == j);
        prop_assert_eq!(i.leq(&j), i.meet(&j) == i);
        for c in 0..=mask {
            prop_assert_eq!(i.join(&j).contains(c), i.contains(c) || j.contains(c));
            prop_assert_eq!(i.meet(&j).contains(c), i.contains(c) && j.contains(c));
        }
    }
}
