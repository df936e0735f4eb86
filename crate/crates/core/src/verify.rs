//! Regression suites over parameter grids. Each suite returns one row per
//! case; reports carry no timings so reruns are byte-identical.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{is_isomorphic, Graph};
use crate::homotopy::{reduce, reduce_with, replay, verify_glue_property, verify_subdivision_property, HomotopyType, ReduceOptions};
use crate::khovanov::{complex_at_j, extreme_complex, j_min_bruteforce, j_min_formula};
use crate::lando::{extreme_kh_via_lando, lando_graph_of};
use crate::linkdiag::{parse_pd, LinkDiagram};
use crate::pretzel::{
    case_tag, expected_homotopy, grading_metadata, lando_main1, lando_main2, standard_pd, tilde_pd_pq_negr, CaseTag,
    Family, PretzelSpec,
};
use crate::simplicial::{independence_complex, HomologyEntry, HomologyProfile};

pub const SUITES: &[&str] = &["props", "gms", "jmin", "main1", "main2", "glue", "grading"];

pub const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
pub const FIGURE_EIGHT: &str = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]";

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub crossings: usize,
    pub vertices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { crossings: crate::DEFAULT_CROSSING_CAP, vertices: crate::DEFAULT_VERTEX_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// Whether every extreme homology group computed for the row was torsion-free.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion_free: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub rows: Vec<RowReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RowReport> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }
}

fn row(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> RowReport {
    RowReport { name: name.into(), pass, detail: detail.into(), torsion_free: None }
}

fn err_row(name: impl Into<String>, e: &Error) -> RowReport {
    row(name, false, format!("error: {e}"))
}

pub fn run_suite(name: &str, seed: u64, caps: Caps) -> Result<SuiteReport> {
    let rows = match name {
        "props" => props(caps),
        "gms" => gms(seed, caps),
        "jmin" => jmin(caps),
        "main1" => main1(caps),
        "main2" => main2(caps),
        "glue" => glue(seed),
        "grading" => grading(seed, caps),
        _ => return Err(Error::Parse(format!("unknown suite `{name}` (expected one of {})", SUITES.join(", ")))),
    };
    Ok(SuiteReport { suite: name.to_string(), seed, rows })
}

/// Homotopy type of I(L_n), `n` counting edges.
pub fn expected_path_type(n: usize) -> HomotopyType {
    let k = n.div_ceil(3) as i64;
    if n % 3 == 0 {
        HomotopyType::Contractible
    } else {
        HomotopyType::sphere(k - 1)
    }
}

/// Homotopy type of I(C_n), `n ≥ 2`.
pub fn expected_cycle_type(n: usize) -> HomotopyType {
    let k = ((n + 1) / 3) as i64;
    if n % 3 == 0 {
        HomotopyType::Wedge(vec![k - 1, k - 1])
    } else {
        HomotopyType::sphere(k - 1)
    }
}

fn type_row(name: String, g: &Graph, expected: &HomotopyType, caps: Caps) -> RowReport {
    let res = reduce(g);
    let Some(got) = res.certified() else {
        return row(name, false, "unresolved");
    };
    if got != expected {
        return row(name, false, format!("reduce gave {got}, expected {expected}"));
    }
    if replay(g, &res.trace).as_ref() != Ok(got) {
        return row(name, false, "trace does not replay");
    }
    match independence_complex(g, caps.vertices) {
        Ok(k) => {
            let h = k.reduced_homology();
            let ok = expected.matches_homology(&h);
            row(name, ok, format!("{got}; homology {}", h.to_json()))
        }
        Err(e) => err_row(name, &e),
    }
}

fn props(caps: Caps) -> Vec<RowReport> {
    let mut rows = Vec::new();
    for n in 1..=15 {
        rows.push(type_row(format!("L_{n}"), &Graph::path(n), &expected_path_type(n), caps));
    }
    for n in 2..=15 {
        rows.push(type_row(format!("C_{n}"), &Graph::cycle(n).unwrap(), &expected_cycle_type(n), caps));
    }
    rows
}

/// All `(p, q, r)` with positive entries and sum at most `max_sum`, in all
/// eight sign patterns.
pub fn pretzel_corpus(max_sum: usize) -> Vec<PretzelSpec> {
    let mut out = Vec::new();
    for p in 1..max_sum {
        for q in 1..max_sum {
            for r in 1..max_sum {
                if p + q + r > max_sum {
                    continue;
                }
                for s in 0..8 {
                    let sg = |bit: usize, x: usize| if s >> bit & 1 == 1 { -(x as i64) } else { x as i64 };
                    out.push(PretzelSpec::from_signed(sg(0, p), sg(1, q), sg(2, r)).unwrap());
                }
            }
        }
    }
    out
}

fn named_knots() -> Vec<(String, LinkDiagram)> {
    vec![
        ("trefoil".to_string(), parse_pd(TREFOIL, false).unwrap()),
        ("figure-eight".to_string(), parse_pd(FIGURE_EIGHT, false).unwrap()),
    ]
}

fn gms_check(d: &LinkDiagram, caps: Caps) -> Result<(bool, HomologyProfile, HomologyProfile)> {
    let brute = extreme_complex(d, caps.crossings)?.homology()?;
    let lando = extreme_kh_via_lando(d, caps.vertices)?;
    Ok((brute == lando, brute, lando))
}

fn gms(seed: u64, caps: Caps) -> Vec<RowReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus: Vec<(String, LinkDiagram)> =
        pretzel_corpus(9).iter().map(|s| (s.to_string(), standard_pd(s))).collect();
    corpus.extend(named_knots());
    let mut rows = Vec::new();
    for (name, d) in corpus {
        let r = gms_check(&d, caps).and_then(|(ok, brute, lando)| {
            let mut ok = ok;
            let mut torsion_free = brute.is_torsion_free() && lando.is_torsion_free();
            // the Khovanov complex must not depend on the crossing order
            for _ in 0..3 {
                let mut order: Vec<usize> = (0..d.crossing_count()).collect();
                order.shuffle(&mut rng);
                let h = extreme_complex(&d.with_crossing_order(order)?, caps.crossings)?.homology()?;
                torsion_free &= h.is_torsion_free();
                ok &= h == brute;
            }
            Ok((ok, torsion_free, format!("brute {} lando {}", brute.to_json(), lando.to_json())))
        });
        rows.push(match r {
            Ok((ok, tf, detail)) => RowReport { torsion_free: Some(tf), ..row(name, ok, detail) },
            Err(e) => err_row(name, &e),
        });
    }
    rows
}

fn jmin(caps: Caps) -> Vec<RowReport> {
    let mut corpus: Vec<(String, LinkDiagram)> =
        pretzel_corpus(12).iter().map(|s| (s.to_string(), standard_pd(s))).collect();
    corpus.extend(named_knots());
    let mut rows: Vec<RowReport> = corpus
        .into_iter()
        .map(|(name, d)| match j_min_bruteforce(&d, caps.crossings) {
            Ok(b) => {
                let f = j_min_formula(&d);
                row(name, b == f, format!("bruteforce {b} formula {f}"))
            }
            Err(e) => err_row(name, &e),
        })
        .collect();
    for p in 1..=10 {
        for q in 1..=10 {
            for r in 1..=3 {
                if p + q + 3 * r > 12 {
                    continue;
                }
                let name = format!("deformed P({p},{q},-{r})");
                let d = tilde_pd_pq_negr(p, q, r).unwrap();
                let meta = grading_metadata(&PretzelSpec::from_signed(p as i64, q as i64, -(r as i64)).unwrap()).unwrap();
                rows.push(match j_min_bruteforce(&d, caps.crossings) {
                    Ok(b) => {
                        let f = j_min_formula(&d);
                        let ok = b == f && f == meta.j_min && f == meta.expected_j_underline;
                        row(name, ok, format!("bruteforce {b} formula {f} predicted {}", meta.j_min))
                    }
                    Err(e) => err_row(name, &e),
                });
            }
        }
    }
    rows
}

fn main1_row(p: usize, q: usize, r: usize, caps: Caps) -> Result<RowReport> {
    let name = format!("P({p},{q},-{r})");
    let built = lando_main1(p, q, r)?;
    let from_diagram = lando_graph_of(&tilde_pd_pq_negr(p, q, r)?);
    let iso = is_isomorphic(&built.graph, &from_diagram.graph);
    let expected = HomotopyType::sphere(r as i64 - 1);
    let res = reduce(&built.graph);
    let got = res.certified().map_or("unresolved".to_string(), |t| t.to_string());
    let h = independence_complex(&built.graph, caps.vertices)?.reduced_cohomology();
    let pass = iso && res.certified() == Some(&expected) && expected.matches_homology(&h);
    let detail = format!("isomorphic {iso}; reduce {got}, expected {expected}; cohomology {}", h.to_json());
    Ok(RowReport { torsion_free: Some(h.is_torsion_free()), ..row(name, pass, detail) })
}

fn main1(caps: Caps) -> Vec<RowReport> {
    let mut rows = Vec::new();
    for p in 1..=4 {
        for q in 1..=4 {
            for r in 1..=4 {
                rows.push(main1_row(p, q, r, caps).unwrap_or_else(|e| err_row(format!("P({p},{q},-{r})"), &e)));
            }
        }
    }
    rows
}

/// Largest graph whose independence complex is confirmed by SNF in `main2`.
pub const MAIN2_HOMOLOGY_VERTICES: usize = 20;

fn main2_row(p: usize, q: usize, r: usize, caps: Caps) -> Result<RowReport> {
    let spec = PretzelSpec::from_signed(p as i64, -(q as i64), -(r as i64))?;
    let name = spec.to_string();
    let expected = expected_homotopy(&spec)?;
    let opts = ReduceOptions { vertex_cap: caps.vertices, memoize: true };
    let mut pass = true;
    let mut detail = Vec::new();
    for raw in [false, true] {
        let g = lando_main2(p, q, r, raw)?;
        let res = reduce_with(&g.graph, &opts);
        let got = res.certified().map_or("unresolved".to_string(), |t| t.to_string());
        pass &= res.certified() == Some(&expected);
        detail.push(format!("{}reduce {got}", if raw { "raw " } else { "" }));
    }
    let g = lando_main2(p, q, r, false)?.graph;
    let mut torsion_free = None;
    if g.vertex_count() <= MAIN2_HOMOLOGY_VERTICES.min(caps.vertices) {
        let h = independence_complex(&g, caps.vertices)?.reduced_cohomology();
        pass &= expected.matches_homology(&h);
        torsion_free = Some(h.is_torsion_free());
        detail.push(format!("cohomology {}", h.to_json()));
    }
    detail.push(format!("expected {expected}"));
    Ok(RowReport { torsion_free, ..row(name, pass, detail.join("; ")) })
}

fn main2(caps: Caps) -> Vec<RowReport> {
    let mut rows = Vec::new();
    for p in 1..=6 {
        for q in 1..=6 {
            for r in 1..=6 {
                if case_tag(p, q, r) == CaseTag::Excluded {
                    continue;
                }
                rows.push(main2_row(p, q, r, caps).unwrap_or_else(|e| err_row(format!("P({p},-{q},-{r})"), &e)));
            }
        }
    }
    rows
}

/// Random graph on 2..=7 vertices with at least one edge.
pub fn random_small_graph(rng: &mut impl Rng) -> Graph {
    loop {
        let n = rng.gen_range(2..=7);
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.5) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        if g.edge_count() > 0 {
            return g;
        }
    }
}

fn glue(seed: u64) -> Vec<RowReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..20)
        .map(|k| {
            let g = random_small_graph(&mut rng);
            let name = format!("graph {k}: {:?}", g.edges());
            match (verify_subdivision_property(&g), verify_glue_property(&g)) {
                (Ok(a), Ok(b)) => row(name, a && b, format!("subdivision {a}, glue C_8 {b}")),
                (Err(e), _) | (_, Err(e)) => err_row(name, &e),
            }
        })
        .collect()
}

fn single(i: i64, rank: usize) -> HomologyProfile {
    HomologyProfile { entries: vec![HomologyEntry { degree: i, betti: rank, torsion: Vec::new() }] }
}

/// Ten specs per family with every box at most 4, drawn without replacement.
pub fn grading_samples(seed: u64) -> Vec<PretzelSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for signs in [[1, 1, 1], [-1, -1, -1], [1, 1, -1], [1, -1, -1]] {
        let mut pool = Vec::new();
        for p in 1..=4i64 {
            for q in 1..=4i64 {
                for r in 1..=4i64 {
                    let s = PretzelSpec::from_signed(signs[0] * p, signs[1] * q, signs[2] * r).unwrap();
                    if s.case_tag() != Some(CaseTag::Excluded) {
                        pool.push(s);
                    }
                }
            }
        }
        out.extend(pool.choose_multiple(&mut rng, 10).copied());
    }
    out
}

fn grading_row(spec: &PretzelSpec, caps: Caps) -> Result<RowReport> {
    let meta = grading_metadata(spec)?;
    let want = single(meta.expected_i, meta.expected_rank);
    let d = standard_pd(spec);
    let mut notes = Vec::new();
    let mut pass = true;
    // nothing below the predicted j
    let lo = j_min_formula(&d);
    if (meta.expected_j_underline - lo).rem_euclid(2) != 0 {
        pass = false;
        notes.push(format!("predicted j {} has the wrong parity", meta.expected_j_underline));
    }
    let mut j = lo;
    while j < meta.expected_j_underline {
        let h = complex_at_j(&d, j, caps.crossings)?.homology()?;
        if !h.is_zero() {
            pass = false;
            notes.push(format!("nonzero at j={j}: {}", h.to_json()));
        }
        j += 2;
    }
    let h = complex_at_j(&d, meta.expected_j_underline, caps.crossings)?.homology()?;
    pass &= h == want;
    notes.push(format!("j={} {}", meta.expected_j_underline, h.to_json()));
    match meta.family {
        Family::TwoPositive => {
            let tilde = tilde_pd_pq_negr(spec.p, spec.q, spec.r)?;
            let via = extreme_kh_via_lando(&tilde, caps.vertices)?;
            pass &= via == want;
            notes.push(format!("deformed diagram {}", via.to_json()));
        }
        Family::OnePositive => {
            let g = lando_main2(spec.p, spec.q, spec.r, false)?;
            let via = match reduce(&g.graph).certified() {
                Some(HomotopyType::Wedge(ds)) => {
                    let mut e: Vec<(i64, usize)> = Vec::new();
                    for &dim in ds {
                        let i = dim + 1 - meta.n_tilde as i64;
                        match e.last_mut() {
                            Some(l) if l.0 == i => l.1 += 1,
                            _ => e.push((i, 1)),
                        }
                    }
                    e
                }
                other => {
                    pass = false;
                    notes.push(format!("reduce gave {other:?}"));
                    Vec::new()
                }
            };
            pass &= via == want.betti_numbers();
            notes.push(format!("graph spheres in degrees {via:?}"));
        }
        _ => {}
    }
    let name = match meta.case {
        Some(c) => format!("{spec} case {c}"),
        None => spec.to_string(),
    };
    let detail = format!(
        "n={} predicted (i={}, j={}, rank {}); {}",
        meta.n,
        meta.expected_i,
        meta.expected_j_underline,
        meta.expected_rank,
        notes.join("; ")
    );
    Ok(RowReport { torsion_free: Some(h.is_torsion_free()), ..row(name, pass, detail) })
}

fn grading(seed: u64, caps: Caps) -> Vec<RowReport> {
    grading_samples(seed)
        .iter()
        .map(|s| grading_row(s, caps).unwrap_or_else(|e| err_row(s.to_string(), &e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_tables() {
        assert_eq!(expected_path_type(3), HomotopyType::Contractible);
        assert_eq!(expected_path_type(4), HomotopyType::sphere(1));
        assert_eq!(expected_path_type(1), HomotopyType::sphere(0));
        assert_eq!(expected_cycle_type(9), HomotopyType::Wedge(vec![2, 2]));
        assert_eq!(expected_cycle_type(2), HomotopyType::sphere(0));
        assert_eq!(expected_cycle_type(7), HomotopyType::sphere(1));
        assert_eq!(expected_cycle_type(8), HomotopyType::sphere(2));
    }

    #[test]
    fn corpus_size() {
        assert_eq!(pretzel_corpus(9).len(), 84 * 8);
    }

    #[test]
    fn samples_are_seeded() {
        assert_eq!(grading_samples(7), grading_samples(7));
        assert_eq!(grading_samples(7).len(), 40);
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 0, Caps::default()).is_err());
    }
}
