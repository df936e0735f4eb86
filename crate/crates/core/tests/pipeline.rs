use landokh::homotopy::{reduce, HomotopyType};
use landokh::khovanov::{extreme_complex, j_min_bruteforce, j_min_formula};
use landokh::lando::{extreme_kh_via_lando, lando_graph_of};
use landokh::linkdiag::parse_pd;
use landokh::pretzel::{grading_metadata, standard_pd, tilde_pd_pq_negr};
use landokh::simplicial::independence_complex;
use landokh::verify::{FIGURE_EIGHT, TREFOIL};
use landokh::{Error, Graph, LinkDiagram, PretzelSpec};

fn both_routes(d: &LinkDiagram) -> Vec<(i64, usize)> {
    let brute = extreme_complex(d, 16).unwrap().homology().unwrap();
    let lando = extreme_kh_via_lando(d, 24).unwrap();
    assert_eq!(brute, lando);
    brute.betti_numbers()
}

#[test]
fn trefoil_extreme_group() {
    let d = parse_pd(TREFOIL, false).unwrap();
    assert_eq!(j_min_formula(&d), -9);
    assert_eq!(both_routes(&d), vec![(-3, 1)]);
}

#[test]
fn figure_eight_extreme_group() {
    let d = parse_pd(FIGURE_EIGHT, false).unwrap();
    assert_eq!(j_min_bruteforce(&d, 16).unwrap(), j_min_formula(&d));
    let h = both_routes(&d);
    assert_eq!(h.len(), 1);
}

#[test]
fn pretzel_111_matches_trefoil() {
    let d = standard_pd(&"P(1,1,1)".parse().unwrap());
    assert_eq!(d.negative_count(), 3);
    assert_eq!(j_min_formula(&d), -9);
    assert_eq!(both_routes(&d), vec![(-3, 1)]);
}

#[test]
fn pretzel_234_at_predicted_grading() {
    let spec: PretzelSpec = "P(2,3,4)".parse().unwrap();
    let d = standard_pd(&spec);
    let n = d.negative_count() as i64;
    assert_eq!(j_min_formula(&d), 9 - 3 * n - 3);
    assert_eq!(both_routes(&d), vec![(-n, 1)]);
    let m = grading_metadata(&spec).unwrap();
    assert_eq!((m.expected_i, m.expected_j_underline), (-n, 9 - 3 * n - 3));
}

#[test]
fn deformed_diagram_route() {
    // r = 3: S^2 in the graph, Z at i = -n
    let spec = PretzelSpec::from_signed(2, 2, -3).unwrap();
    let m = grading_metadata(&spec).unwrap();
    let d = tilde_pd_pq_negr(2, 2, 3).unwrap();
    assert_eq!(j_min_formula(&d), m.j_min);
    let h = extreme_kh_via_lando(&d, 24).unwrap();
    assert_eq!(h.betti_numbers(), vec![(m.expected_i, 1)]);
    assert!(reduce(&lando_graph_of(&d).graph).certified() == Some(&HomotopyType::sphere(2)));
}

#[test]
fn reduce_shorthands() {
    let c9 = reduce(&Graph::cycle(9).unwrap());
    assert_eq!(c9.certified(), Some(&HomotopyType::Wedge(vec![2, 2])));
    assert_eq!(reduce(&Graph::path(6)).certified(), Some(&HomotopyType::Contractible));
    assert_eq!(reduce(&Graph::complete(4)).certified(), Some(&HomotopyType::Wedge(vec![0, 0, 0])));
    let r3 = reduce(&Graph::star_rays(3));
    let h = independence_complex(&Graph::star_rays(3), 24).unwrap().reduced_homology();
    assert!(r3.certified().unwrap().matches_homology(&h));
}

#[test]
fn lando_dot_parses_back() {
    let d = tilde_pd_pq_negr(1, 2, 2).unwrap();
    let g = lando_graph_of(&d);
    let back = Graph::parse(&g.to_dot()).unwrap();
    assert_eq!(back, g.graph);
}

#[test]
fn caps_are_errors() {
    let d = standard_pd(&"P(6,6,6)".parse().unwrap());
    assert!(matches!(extreme_complex(&d, 16), Err(Error::CapExceeded { .. })));
    assert!(matches!(independence_complex(&Graph::new(30), 24), Err(Error::CapExceeded { .. })));
}

#[test]
fn empty_lando_graph_reports_minus_n() {
    let d = standard_pd(&"P(-2,-2,-3)".parse().unwrap());
    assert_eq!(lando_graph_of(&d).graph.vertex_count(), 0);
    let h = extreme_kh_via_lando(&d, 24).unwrap();
    assert_eq!(h.betti_numbers(), vec![(-(d.negative_count() as i64), 1)]);
}
