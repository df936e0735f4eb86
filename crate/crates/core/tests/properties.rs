use proptest::prelude::*;

use landokh::graph::is_isomorphic;
use landokh::homotopy::{join, reduce, reduce_with, replay, suspend, HomotopyType, ReduceOptions};
use landokh::khovanov::{complex_at_j, j_min_formula};
use landokh::lando::{interleaves, lando_graph};
use landokh::linkdiag::KauffmanState;
use landokh::pretzel::standard_pd;
use landokh::simplicial::independence_complex;
use landokh::{Graph, LinkDiagram, PretzelSpec};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn pretzel_strategy(max_box: i64) -> impl Strategy<Value = PretzelSpec> {
    let signed = (1..=max_box, any::<bool>()).prop_map(|(x, neg)| if neg { -x } else { x });
    (signed.clone(), signed.clone(), signed).prop_map(|(a, b, c)| PretzelSpec::from_signed(a, b, c).unwrap())
}

fn sphere_strategy() -> impl Strategy<Value = HomotopyType> {
    prop_oneof![
        Just(HomotopyType::Contractible),
        proptest::collection::vec(0i64..4, 1..4).prop_map(|mut d| {
            d.sort();
            HomotopyType::Wedge(d)
        }),
        Just(HomotopyType::empty()),
    ]
}

fn relabel(d: &LinkDiagram, perm: &[usize]) -> LinkDiagram {
    let tuples = d.crossings().iter().map(|x| x.arcs.map(|a| perm[a - 1])).collect();
    LinkDiagram::from_tuples(tuples).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn one_flip_changes_circles_by_one(spec in pretzel_strategy(4), mask in any::<u64>(), x in any::<usize>()) {
        let d = standard_pd(&spec);
        let c = d.crossing_count();
        let m = mask & ((1u64 << c) - 1);
        let x = x % c;
        let a = d.circle_count(m) as i64;
        let b = d.circle_count(m ^ (1 << x)) as i64;
        prop_assert_eq!((a - b).abs(), 1);
    }

    #[test]
    fn relabelling_arcs_keeps_invariants(spec in pretzel_strategy(4), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let d = standard_pd(&spec);
        let mut perm: Vec<usize> = (1..=d.arc_count()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let e = relabel(&d, &perm);
        prop_assert_eq!(d.writhe(), e.writhe());
        prop_assert_eq!(d.circle_count(0), e.circle_count(0));
        prop_assert_eq!(j_min_formula(&d), j_min_formula(&e));
        let gd = lando_graph(&d.smooth(&d.all_a_state()).unwrap()).graph;
        let ge = lando_graph(&e.smooth(&e.all_a_state()).unwrap()).graph;
        prop_assert!(is_isomorphic(&gd, &ge));
    }

    #[test]
    fn boundary_squares_to_zero(spec in pretzel_strategy(3), dj in 0i64..4) {
        let d = standard_pd(&spec);
        let cx = complex_at_j(&d, j_min_formula(&d) + 2 * dj, 16).unwrap();
        prop_assert!(cx.check_d_squared().is_ok());
    }

    #[test]
    fn interleaving_is_symmetric(spec in pretzel_strategy(4)) {
        let d = standard_pd(&spec);
        let sd = d.smooth(&KauffmanState::all(d.crossing_count(), landokh::Label::B)).unwrap();
        let adm: Vec<_> = sd.chords.iter().filter(|c| c.is_admissible()).collect();
        for a in &adm {
            for b in &adm {
                if a.circle_a == b.circle_a {
                    prop_assert_eq!(interleaves(a, b).unwrap(), interleaves(b, a).unwrap());
                }
            }
        }
    }

    #[test]
    fn homology_and_cohomology_agree(g in graph_strategy(9)) {
        let k = independence_complex(&g, 24).unwrap();
        let h = k.reduced_homology();
        let co = k.reduced_cohomology();
        prop_assert_eq!(h.betti_numbers(), co.betti_numbers());
        for e in &h.entries {
            prop_assert_eq!(co.torsion(e.degree + 1), &e.torsion[..]);
        }
        let chi: i64 = h.betti_numbers().iter().map(|&(d, b)| if d.rem_euclid(2) == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(chi, k.reduced_euler_characteristic());
    }

    #[test]
    fn reduce_is_sound(g in graph_strategy(10)) {
        let res = reduce(&g);
        let h = independence_complex(&g, 24).unwrap().reduced_homology();
        if let Some(t) = res.certified() {
            prop_assert!(t.matches_homology(&h), "{} vs {}", t, h.to_json());
            prop_assert_eq!(replay(&g, &res.trace).unwrap(), t.clone());
        } else {
            prop_assert!(res.homology_of_residual.is_some());
        }
        let plain = reduce_with(&g, &ReduceOptions { memoize: false, ..Default::default() });
        prop_assert_eq!(plain.outcome, res.outcome);
    }

    #[test]
    fn disjoint_union_is_join(g in graph_strategy(5), h in graph_strategy(5)) {
        let (a, b) = (reduce(&g), reduce(&h));
        if let (Some(x), Some(y)) = (a.certified(), b.certified()) {
            let u = g.disjoint_union(&h);
            let predicted = join(x, y);
            let hom = independence_complex(&u, 24).unwrap().reduced_homology();
            prop_assert!(predicted.matches_homology(&hom));
        }
    }

    #[test]
    fn join_algebra(a in sphere_strategy(), b in sphere_strategy(), c in sphere_strategy()) {
        prop_assert_eq!(join(&a, &b), join(&b, &a));
        prop_assert_eq!(join(&join(&a, &b), &c), join(&a, &join(&b, &c)));
        prop_assert_eq!(suspend(&a), join(&a, &HomotopyType::sphere(0)));
        prop_assert_eq!(join(&a, &HomotopyType::empty()), a.clone());
    }

    #[test]
    fn diagram_json_roundtrip(spec in pretzel_strategy(4)) {
        let d = standard_pd(&spec);
        let back = LinkDiagram::from_json(&d.to_json()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn dot_roundtrip(g in graph_strategy(9)) {
        prop_assert_eq!(Graph::parse(&g.to_dot(None)).unwrap(), g);
    }
}
