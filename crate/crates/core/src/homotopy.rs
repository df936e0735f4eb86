//! Homotopy types of independence complexes: wedge-of-spheres algebra and a
//! rule-based reduction engine that certifies types with a replayable trace.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{find_isomorphism, invariant_key, Graph};
use crate::simplicial::{independence_complex, HomologyProfile};

/// Contractible, or a wedge of spheres listed by (sorted) dimension.
/// `Wedge([-1])` is the empty complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "spheres", rename_all = "lowercase")]
pub enum HomotopyType {
    Contractible,
    Wedge(Vec<i64>),
}

impl HomotopyType {
    pub fn empty() -> Self {
        HomotopyType::Wedge(vec![-1])
    }

    pub fn sphere(d: i64) -> Self {
        HomotopyType::Wedge(vec![d])
    }

    /// Wedge of spheres of the given dimensions; an empty list is contractible.
    pub fn wedge_of(mut dims: Vec<i64>) -> Result<Self> {
        if dims.is_empty() {
            return Ok(HomotopyType::Contractible);
        }
        dims.sort_unstable();
        if dims[0] < -1 || (dims[0] == -1 && dims.len() > 1) {
            return Err(Error::WedgeWithEmptyComplex);
        }
        Ok(HomotopyType::Wedge(dims))
    }

    pub fn is_empty_complex(&self) -> bool {
        matches!(self, HomotopyType::Wedge(d) if d == &[-1])
    }

    /// Reduced Betti numbers `(degree, rank)` this type predicts.
    pub fn betti_numbers(&self) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = Vec::new();
        if let HomotopyType::Wedge(ds) = self {
            for &d in ds {
                match out.last_mut() {
                    Some(last) if last.0 == d => last.1 += 1,
                    _ => out.push((d, 1)),
                }
            }
        }
        out
    }

    /// True iff the homology is exactly what this type predicts (and torsion-free).
    pub fn matches_homology(&self, h: &HomologyProfile) -> bool {
        h.is_torsion_free() && h.betti_numbers() == self.betti_numbers()
    }
}

impl fmt::Display for HomotopyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyType::Contractible => write!(f, "pt"),
            HomotopyType::Wedge(ds) => {
                let parts: Vec<String> = ds.iter().map(|d| format!("S^{d}")).collect();
                write!(f, "{}", parts.join(" v "))
            }
        }
    }
}

pub fn suspend(h: &HomotopyType) -> HomotopyType {
    match h {
        HomotopyType::Contractible => HomotopyType::Contractible,
        HomotopyType::Wedge(ds) => HomotopyType::Wedge(ds.iter().map(|d| d + 1).collect()),
    }
}

pub fn wedge(a: &HomotopyType, b: &HomotopyType) -> Result<HomotopyType> {
    if a.is_empty_complex() || b.is_empty_complex() {
        return Err(Error::WedgeWithEmptyComplex);
    }
    match (a, b) {
        (HomotopyType::Contractible, x) | (x, HomotopyType::Contractible) => Ok(x.clone()),
        (HomotopyType::Wedge(x), HomotopyType::Wedge(y)) => {
            let mut d = x.clone();
            d.extend(y);
            HomotopyType::wedge_of(d)
        }
    }
}

pub fn join(a: &HomotopyType, b: &HomotopyType) -> HomotopyType {
    match (a, b) {
        (HomotopyType::Contractible, _) | (_, HomotopyType::Contractible) => HomotopyType::Contractible,
        (HomotopyType::Wedge(x), HomotopyType::Wedge(y)) => {
            let mut d: Vec<i64> = x.iter().flat_map(|p| y.iter().map(move |q| p + q + 1)).collect();
            d.sort_unstable();
            HomotopyType::Wedge(d)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseCase {
    Empty,
    Path,
    Cycle,
    Complete,
}

/// One applied rule. Vertices are named by their labels in the input graph;
/// a contracted path keeps the label of its first end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum Step {
    R0 { isolated: usize },
    R1 { components: Vec<Vec<usize>>, branches: Vec<Vec<Step>> },
    /// `size`: edges for paths, vertices otherwise.
    R2 { base: BaseCase, size: usize },
    R3 { removed: usize, dominated: usize },
    R4 { removed: usize, dominated: usize, deletion: Vec<Step>, link: Vec<Step> },
    R5 { contracted: [usize; 4] },
    Unresolved { vertices: Vec<usize> },
}

impl Step {
    fn relabel(&self, f: &dyn Fn(usize) -> usize) -> Step {
        let many = |t: &[Step]| t.iter().map(|s| s.relabel(f)).collect::<Vec<_>>();
        match self {
            Step::R0 { isolated } => Step::R0 { isolated: f(*isolated) },
            Step::R1 { components, branches } => Step::R1 {
                components: components.iter().map(|c| c.iter().map(|&v| f(v)).collect()).collect(),
                branches: branches.iter().map(|b| many(b)).collect(),
            },
            Step::R2 { .. } => self.clone(),
            Step::R3 { removed, dominated } => Step::R3 { removed: f(*removed), dominated: f(*dominated) },
            Step::R4 { removed, dominated, deletion, link } => Step::R4 {
                removed: f(*removed),
                dominated: f(*dominated),
                deletion: many(deletion),
                link: many(link),
            },
            Step::R5 { contracted } => Step::R5 { contracted: contracted.map(f) },
            Step::Unresolved { vertices } => Step::Unresolved { vertices: vertices.iter().map(|&v| f(v)).collect() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Certified(HomotopyType),
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl Residual {
    pub fn to_dot(&self) -> String {
        let pos: HashMap<usize, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::new(self.vertices.len());
        for &(u, v) in &self.edges {
            g.add_edge(pos[&u], pos[&v]).unwrap();
        }
        let names: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        g.to_dot(Some(&names))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionResult {
    #[serde(rename = "type")]
    pub outcome: Outcome,
    pub trace: Vec<Step>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Residual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology_of_residual: Option<HomologyProfile>,
}

impl ReductionResult {
    pub fn certified(&self) -> Option<&HomotopyType> {
        match &self.outcome {
            Outcome::Certified(h) => Some(h),
            Outcome::Unresolved => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }
}

#[derive(Clone, Debug)]
pub struct ReduceOptions {
    /// Vertex cap for the homology of an unresolved residual.
    pub vertex_cap: usize,
    pub memoize: bool,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { vertex_cap: crate::DEFAULT_VERTEX_CAP, memoize: true }
    }
}

/// Graph whose vertices carry labels, kept in increasing label order.
#[derive(Clone, Debug)]
struct Work {
    g: Graph,
    labels: Vec<usize>,
}

impl Work {
    fn without(&self, drop: &BTreeSet<usize>) -> Work {
        let keep: Vec<usize> = (0..self.g.vertex_count()).filter(|v| !drop.contains(v)).collect();
        Work { g: self.g.induced(&keep), labels: keep.iter().map(|&v| self.labels[v]).collect() }
    }

    fn sub(&self, keep: &[usize]) -> Work {
        Work { g: self.g.induced(keep), labels: keep.iter().map(|&v| self.labels[v]).collect() }
    }

    fn index_of(&self, label: usize) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }
}

fn base_case(g: &Graph) -> Option<(BaseCase, usize, HomotopyType)> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n < 2 {
        return None;
    }
    let degs: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    if m == n - 1 && degs.iter().all(|&d| d <= 2) {
        let k = m.div_ceil(3) as i64;
        let t = if m % 3 == 0 { HomotopyType::Contractible } else { HomotopyType::sphere(k - 1) };
        return Some((BaseCase::Path, m, t));
    }
    if n >= 3 && degs.iter().all(|&d| d == 2) {
        let t = match n % 3 {
            0 => {
                let k = (n / 3) as i64;
                HomotopyType::Wedge(vec![k - 1, k - 1])
            }
            1 => HomotopyType::sphere(((n - 1) / 3) as i64 - 1),
            _ => HomotopyType::sphere(((n + 1) / 3) as i64 - 1),
        };
        return Some((BaseCase::Cycle, n, t));
    }
    if m == n * (n - 1) / 2 {
        return Some((BaseCase::Complete, n, HomotopyType::Wedge(vec![0; n - 1])));
    }
    None
}

/// First `(v, w)` in index order with `v` dominating `w`: `N(w) \ {v} ⊆ N(v)`.
fn domination(g: &Graph, adjacent: bool) -> Option<(usize, usize)> {
    let n = g.vertex_count();
    for v in 0..n {
        for w in 0..n {
            if v == w || g.has_edge(v, w) != adjacent {
                continue;
            }
            let nv = g.neighbors(v);
            if g.neighbors(w).iter().all(|x| *x == v || nv.contains(x)) {
                return Some((v, w));
            }
        }
    }
    None
}

/// Smallest `(v, a, b, w)` with `v–a–b–w` a path, `deg a = deg b = 2`,
/// `v ≠ w` and `v`, `w` non-adjacent.
fn csorba_path(g: &Graph) -> Option<[usize; 4]> {
    let n = g.vertex_count();
    let mut best: Option<[usize; 4]> = None;
    for a in 0..n {
        if g.degree(a) != 2 {
            continue;
        }
        let na: Vec<usize> = g.neighbors(a).iter().copied().collect();
        for (i, &b) in na.iter().enumerate() {
            if g.degree(b) != 2 {
                continue;
            }
            let v = na[1 - i];
            let w = *g.neighbors(b).iter().find(|&&x| x != a).unwrap();
            if v == w || g.has_edge(v, w) {
                continue;
            }
            let cand = [v, a, b, w];
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    best
}

fn contract(work: &Work, [v, a, b, w]: [usize; 4]) -> Work {
    let mut g = work.g.clone();
    let nw: Vec<usize> = g.neighbors(w).iter().copied().filter(|&x| x != b).collect();
    for x in nw {
        g.add_edge(v, x).expect("contraction creates no loop");
    }
    let tmp = Work { g, labels: work.labels.clone() };
    tmp.without(&[a, b, w].into_iter().collect())
}

struct MemoEntry {
    graph: Graph,
    labels: Vec<usize>,
    result: HomotopyType,
    trace: Vec<Step>,
}

struct Engine {
    memo: HashMap<u64, Vec<MemoEntry>>,
    memoize: bool,
    stuck: Option<Work>,
}

impl Engine {
    fn solve(&mut self, work: Work) -> (Option<HomotopyType>, Vec<Step>) {
        let key = (self.memoize && work.g.vertex_count() >= 4).then(|| invariant_key(&work.g));
        if let Some(k) = key {
            if let Some(entries) = self.memo.get(&k) {
                for e in entries {
                    if let Some(phi) = find_isomorphism(&e.graph, &work.g) {
                        let map: HashMap<usize, usize> =
                            e.labels.iter().enumerate().map(|(i, &l)| (l, work.labels[phi[i]])).collect();
                        let trace = e.trace.iter().map(|s| s.relabel(&|l| map[&l])).collect();
                        return (Some(e.result.clone()), trace);
                    }
                }
            }
        }
        let original = work.clone();
        let (res, trace) = self.solve_uncached(work);
        if let (Some(k), Some(r)) = (key, &res) {
            self.memo.entry(k).or_default().push(MemoEntry {
                graph: original.g,
                labels: original.labels,
                result: r.clone(),
                trace: trace.clone(),
            });
        }
        (res, trace)
    }

    fn solve_uncached(&mut self, mut work: Work) -> (Option<HomotopyType>, Vec<Step>) {
        let mut steps = Vec::new();
        let mut suspensions = 0;
        let res = loop {
            let g = &work.g;
            let n = g.vertex_count();
            if n == 0 {
                steps.push(Step::R2 { base: BaseCase::Empty, size: 0 });
                break Some(HomotopyType::empty());
            }
            if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
                steps.push(Step::R0 { isolated: work.labels[v] });
                break Some(HomotopyType::Contractible);
            }
            let comps = g.components();
            if comps.len() > 1 {
                let mut acc = Some(HomotopyType::empty());
                let mut branches = Vec::new();
                for c in &comps {
                    let (r, t) = self.solve(work.sub(c));
                    branches.push(t);
                    acc = match (acc, r) {
                        (Some(a), Some(b)) => Some(join(&a, &b)),
                        _ => None,
                    };
                }
                let components = comps.iter().map(|c| c.iter().map(|&v| work.labels[v]).collect()).collect();
                steps.push(Step::R1 { components, branches });
                break acc;
            }
            if let Some((base, size, t)) = base_case(g) {
                steps.push(Step::R2 { base, size });
                break Some(t);
            }
            if let Some((v, w)) = domination(g, false) {
                steps.push(Step::R3 { removed: work.labels[v], dominated: work.labels[w] });
                work = work.without(&[v].into_iter().collect());
                continue;
            }
            if let Some((v, w)) = domination(g, true) {
                let (a, ta) = self.solve(work.without(&[v].into_iter().collect()));
                let mut closed: BTreeSet<usize> = g.neighbors(v).clone();
                closed.insert(v);
                let (b, tb) = self.solve(work.without(&closed));
                steps.push(Step::R4 { removed: work.labels[v], dominated: work.labels[w], deletion: ta, link: tb });
                break match (a, b) {
                    (Some(a), Some(b)) => Some(wedge(&a, &suspend(&b)).expect("deletion branch is nonempty")),
                    _ => None,
                };
            }
            if let Some(p) = csorba_path(g) {
                steps.push(Step::R5 { contracted: p.map(|x| work.labels[x]) });
                work = contract(&work, p);
                suspensions += 1;
                continue;
            }
            steps.push(Step::Unresolved { vertices: work.labels.clone() });
            if self.stuck.is_none() {
                self.stuck = Some(work.clone());
            }
            break None;
        };
        let res = res.map(|mut t| {
            for _ in 0..suspensions {
                t = suspend(&t);
            }
            t
        });
        (res, steps)
    }
}

pub fn reduce(g: &Graph) -> ReductionResult {
    reduce_with(g, &ReduceOptions::default())
}

pub fn reduce_with(g: &Graph, opts: &ReduceOptions) -> ReductionResult {
    let mut engine = Engine { memo: HashMap::new(), memoize: opts.memoize, stuck: None };
    let work = Work { g: g.clone(), labels: (0..g.vertex_count()).collect() };
    let (res, trace) = engine.solve(work);
    match res {
        Some(t) => ReductionResult { outcome: Outcome::Certified(t), trace, residual: None, homology_of_residual: None },
        None => {
            let stuck = engine.stuck.expect("unresolved branch records its residual");
            let homology = independence_complex(&stuck.g, opts.vertex_cap).ok().map(|k| k.reduced_homology());
            let edges = stuck.g.edges().into_iter().map(|(u, v)| (stuck.labels[u], stuck.labels[v])).collect();
            ReductionResult {
                outcome: Outcome::Unresolved,
                trace,
                residual: Some(Residual { vertices: stuck.labels, edges }),
                homology_of_residual: homology,
            }
        }
    }
}

/// Re-applies a trace to `g`, checking every rule's precondition, and returns
/// the homotopy type the trace composes to.
pub fn replay(g: &Graph, trace: &[Step]) -> Result<HomotopyType> {
    let work = Work { g: g.clone(), labels: (0..g.vertex_count()).collect() };
    replay_work(work, trace)
}

fn replay_work(mut work: Work, trace: &[Step]) -> Result<HomotopyType> {
    let bad = |what: &str| Error::Precondition(format!("trace does not apply: {what}"));
    let mut suspensions = 0;
    let mut result = None;
    for (k, step) in trace.iter().enumerate() {
        if result.is_some() {
            return Err(bad("steps after a terminal rule"));
        }
        let idx = |l: usize| work.index_of(l).ok_or_else(|| bad("unknown vertex"));
        let terminal = k + 1 == trace.len();
        match step {
            Step::R0 { isolated } => {
                if work.g.degree(idx(*isolated)?) != 0 {
                    return Err(bad("R0 vertex not isolated"));
                }
                result = Some(HomotopyType::Contractible);
            }
            Step::R1 { components, branches } => {
                let comps = work.g.components();
                let labelled: Vec<Vec<usize>> =
                    comps.iter().map(|c| c.iter().map(|&v| work.labels[v]).collect()).collect();
                if &labelled != components || branches.len() != comps.len() || comps.len() < 2 {
                    return Err(bad("R1 components"));
                }
                let mut acc = HomotopyType::empty();
                for (c, b) in comps.iter().zip(branches) {
                    acc = join(&acc, &replay_work(work.sub(c), b)?);
                }
                result = Some(acc);
            }
            Step::R2 { base, size } => {
                let t = if work.g.vertex_count() == 0 {
                    (*base == BaseCase::Empty && *size == 0).then(HomotopyType::empty)
                } else {
                    base_case(&work.g).filter(|(b, s, _)| b == base && s == size).map(|x| x.2)
                };
                result = Some(t.ok_or_else(|| bad("R2 base case"))?);
            }
            Step::R3 { removed, dominated } => {
                let (v, w) = (idx(*removed)?, idx(*dominated)?);
                let nv = work.g.neighbors(v);
                if v == w || work.g.has_edge(v, w) || !work.g.neighbors(w).iter().all(|x| nv.contains(x)) {
                    return Err(bad("R3 domination"));
                }
                work = work.without(&[v].into_iter().collect());
            }
            Step::R4 { removed, dominated, deletion, link } => {
                let (v, w) = (idx(*removed)?, idx(*dominated)?);
                let nv = work.g.neighbors(v).clone();
                if !work.g.has_edge(v, w) || !work.g.neighbors(w).iter().all(|x| *x == v || nv.contains(x)) {
                    return Err(bad("R4 domination"));
                }
                let a = replay_work(work.without(&[v].into_iter().collect()), deletion)?;
                let mut closed = nv;
                closed.insert(v);
                let b = replay_work(work.without(&closed), link)?;
                result = Some(wedge(&a, &suspend(&b))?);
            }
            Step::R5 { contracted } => {
                let p = [idx(contracted[0])?, idx(contracted[1])?, idx(contracted[2])?, idx(contracted[3])?];
                let [v, a, b, w] = p;
                let g = &work.g;
                let ok = g.degree(a) == 2
                    && g.degree(b) == 2
                    && g.has_edge(v, a)
                    && g.has_edge(a, b)
                    && g.has_edge(b, w)
                    && v != w
                    && !g.has_edge(v, w);
                if !ok {
                    return Err(bad("R5 path"));
                }
                work = contract(&work, p);
                suspensions += 1;
            }
            Step::Unresolved { .. } => return Err(bad("trace is unresolved")),
        }
        if result.is_some() && !terminal {
            return Err(bad("steps after a terminal rule"));
        }
    }
    let mut t = result.ok_or_else(|| bad("trace ends without a terminal rule"))?;
    for _ in 0..suspensions {
        t = suspend(&t);
    }
    Ok(t)
}

/// Gluing `C_8` along the first edge should suspend twice.
pub fn verify_glue_property(g: &Graph) -> Result<bool> {
    shift_property(g, |g, u, v| g.glue_cycle(u, v, 8), 2)
}

/// Replacing the first edge by a 4-edge path should suspend once.
pub fn verify_subdivision_property(g: &Graph) -> Result<bool> {
    shift_property(g, |g, u, v| g.subdivide_edge(u, v), 1)
}

fn shift_property(g: &Graph, build: impl Fn(&Graph, usize, usize) -> Result<Graph>, shift: i64) -> Result<bool> {
    if g.vertex_count() > 7 {
        return Err(Error::Precondition("graph must have at most 7 vertices".into()));
    }
    let Some(&(u, v)) = g.edges().first() else {
        return Err(Error::Precondition("graph needs at least one edge".into()));
    };
    let h = build(g, u, v)?;
    let before = independence_complex(g, 64)?.reduced_homology();
    let after = independence_complex(&h, 64)?.reduced_homology();
    Ok(after == before.shifted(shift))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(d: i64) -> HomotopyType {
        HomotopyType::sphere(d)
    }

    #[test]
    fn algebra_examples() {
        assert_eq!(suspend(&HomotopyType::Wedge(vec![1, 1])), HomotopyType::Wedge(vec![2, 2]));
        assert_eq!(suspend(&HomotopyType::empty()), s(0));
        assert_eq!(suspend(&HomotopyType::Contractible), HomotopyType::Contractible);
        assert_eq!(wedge(&s(1), &HomotopyType::Contractible).unwrap(), s(1));
        assert_eq!(wedge(&s(0), &s(0)).unwrap(), HomotopyType::Wedge(vec![0, 0]));
        assert_eq!(wedge(&HomotopyType::Contractible, &HomotopyType::Contractible).unwrap(), HomotopyType::Contractible);
        assert_eq!(wedge(&HomotopyType::empty(), &s(0)), Err(Error::WedgeWithEmptyComplex));
        assert_eq!(join(&s(0), &s(0)), s(1));
        assert_eq!(join(&HomotopyType::Wedge(vec![0, 0]), &s(0)), HomotopyType::Wedge(vec![1, 1]));
        assert_eq!(join(&HomotopyType::empty(), &s(3)), s(3));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&Graph::cycle(6).unwrap()).certified(), Some(&HomotopyType::Wedge(vec![1, 1])));
        assert_eq!(reduce(&Graph::star_rays(3)).certified(), Some(&s(2)));
        assert_eq!(reduce(&Graph::cycle(9).unwrap()).certified(), Some(&HomotopyType::Wedge(vec![2, 2])));
        assert_eq!(reduce(&Graph::path(6)).certified(), Some(&HomotopyType::Contractible));
        assert_eq!(reduce(&Graph::complete(4)).certified(), Some(&HomotopyType::Wedge(vec![0, 0, 0])));
    }

    #[test]
    fn trace_json_shape() {
        // a long cycle with a pendant is reduced by R5 on the cycle side
        let g = Graph::star_rays(4);
        let r = reduce(&g);
        let json = r.to_json();
        assert!(json.contains("\"rule\""), "{json}");
        assert_eq!(replay(&g, &r.trace).unwrap(), *r.certified().unwrap());
    }

    #[test]
    fn glue_examples() {
        assert!(verify_glue_property(&Graph::path(1)).unwrap());
        assert!(verify_glue_property(&Graph::cycle(3).unwrap()).unwrap());
        assert!(verify_glue_property(&Graph::new(2)).is_err());
    }
}
