//! Three-strand pretzel links: standard and deformed PD codes, direct
//! Lando-graph constructions and the expected extreme gradings.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homotopy::HomotopyType;
use crate::lando::{LandoGraph, Provenance};
use crate::linkdiag::planar::{Over, PlanarBuilder, NE, NW, SE, SW};
use crate::linkdiag::{LinkDiagram, Sign};

/// `P(±p, ±q, ±r)`: twist-box sizes and the sign of each box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PretzelSpec {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub signs: [Sign; 3],
}

/// Sign patterns up to cyclic rotation of the boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `P(p, q, r)`
    AllPositive,
    /// `P(−p, −q, −r)`
    AllNegative,
    /// `P(p, q, −r)`
    TwoPositive,
    /// `P(p, −q, −r)`
    OnePositive,
}

/// The five cases for `P(p, −q, −r)` plus the open one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// p ≥ q = r
    EqualAtMostP,
    /// p + 1 = q = r
    EqualPPlusOne,
    /// q ≤ p, q < r
    QSmaller,
    /// r ≤ p, r < q
    RSmaller,
    /// p < min{q, r} − 1
    PSmall,
    /// min{q, r} = p + 1, q ≠ r
    Excluded,
}

impl CaseTag {
    pub fn number(self) -> Option<u8> {
        match self {
            CaseTag::EqualAtMostP => Some(1),
            CaseTag::EqualPPlusOne => Some(2),
            CaseTag::QSmaller => Some(3),
            CaseTag::RSmaller => Some(4),
            CaseTag::PSmall => Some(5),
            CaseTag::Excluded => None,
        }
    }
}

pub fn case_tag(p: usize, q: usize, r: usize) -> CaseTag {
    if q.min(r) == p + 1 && q != r {
        CaseTag::Excluded
    } else if q == r && p >= q {
        CaseTag::EqualAtMostP
    } else if q == r && p + 1 == q {
        CaseTag::EqualPPlusOne
    } else if q <= p && q < r {
        CaseTag::QSmaller
    } else if r <= p && r < q {
        CaseTag::RSmaller
    } else {
        debug_assert!(p + 1 < q.min(r));
        CaseTag::PSmall
    }
}

impl PretzelSpec {
    pub fn new(p: usize, q: usize, r: usize, signs: [Sign; 3]) -> Result<Self> {
        if p == 0 || q == 0 || r == 0 {
            return Err(Error::Precondition("pretzel box sizes must be positive".into()));
        }
        Ok(PretzelSpec { p, q, r, signs })
    }

    /// From signed box sizes, e.g. `(2, -3, -4)`.
    pub fn from_signed(a: i64, b: i64, c: i64) -> Result<Self> {
        let sg = |x: i64| if x < 0 { Sign::Negative } else { Sign::Positive };
        Self::new(a.unsigned_abs() as usize, b.unsigned_abs() as usize, c.unsigned_abs() as usize, [sg(a), sg(b), sg(c)])
    }

    pub fn signed(&self) -> [i64; 3] {
        let v = [self.p, self.q, self.r];
        std::array::from_fn(|k| i64::from(i8::from(self.signs[k])) * v[k] as i64)
    }

    pub fn crossing_count(&self) -> usize {
        self.p + self.q + self.r
    }

    /// The cyclic rotation in canonical sign order (+++, −−−, ++−, +−−).
    pub fn canonical(&self) -> (Family, PretzelSpec) {
        let s = self.signed();
        let positives = s.iter().filter(|&&x| x > 0).count();
        let rot = |k: usize| Self::from_signed(s[k % 3], s[(k + 1) % 3], s[(k + 2) % 3]).unwrap();
        match positives {
            3 => (Family::AllPositive, *self),
            0 => (Family::AllNegative, *self),
            2 => {
                let neg = s.iter().position(|&x| x < 0).unwrap();
                (Family::TwoPositive, rot(neg + 1))
            }
            _ => {
                let pos = s.iter().position(|&x| x > 0).unwrap();
                (Family::OnePositive, rot(pos))
            }
        }
    }

    pub fn family(&self) -> Family {
        self.canonical().0
    }

    /// Case of the canonical `P(p, −q, −r)` rotation, if this is that family.
    pub fn case_tag(&self) -> Option<CaseTag> {
        match self.canonical() {
            (Family::OnePositive, c) => Some(case_tag(c.p, c.q, c.r)),
            _ => None,
        }
    }
}

impl fmt::Display for PretzelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.signed();
        write!(f, "P({a},{b},{c})")
    }
}

impl FromStr for PretzelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected P(p,q,r) with nonzero integers, got `{s}`"));
        let inner = s.trim().strip_prefix('P').and_then(|t| t.trim().strip_prefix('(')).and_then(|t| t.strip_suffix(')'));
        let parts: Vec<i64> = inner
            .ok_or_else(bad)?
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match parts[..] {
            [a, b, c] if a != 0 && b != 0 && c != 0 => Self::from_signed(a, b, c),
            _ => Err(bad()),
        }
    }
}

/// Columns of crossing indices, bottom to top.
fn standard_builder(spec: &PretzelSpec) -> (PlanarBuilder, [Vec<usize>; 3]) {
    let mut b = PlanarBuilder::new();
    let sizes = [spec.p, spec.q, spec.r];
    let cols: [Vec<usize>; 3] = std::array::from_fn(|k| {
        let kind = match spec.signs[k] {
            Sign::Positive => Over::Rising,
            Sign::Negative => Over::Falling,
        };
        let ids: Vec<usize> = (0..sizes[k]).map(|_| b.add_crossing(kind)).collect();
        for w in ids.windows(2) {
            b.connect((w[0], NW), (w[1], SW));
            b.connect((w[0], NE), (w[1], SE));
        }
        ids
    });
    let top = |k: usize| *cols[k].last().unwrap();
    let bot = |k: usize| cols[k][0];
    b.connect((top(0), NW), (top(2), NE));
    b.connect((top(0), NE), (top(1), NW));
    b.connect((top(1), NE), (top(2), NW));
    b.connect((bot(0), SW), (bot(2), SE));
    b.connect((bot(0), SE), (bot(1), SW));
    b.connect((bot(1), SE), (bot(2), SW));
    (b, cols)
}

/// Standard three-column diagram. Crossings are numbered column by column,
/// bottom to top.
pub fn standard_pd(spec: &PretzelSpec) -> LinkDiagram {
    standard_builder(spec).0.to_diagram().expect("pretzel closure is a valid diagram")
}

fn tilde_builder(p: usize, q: usize, r: usize) -> Result<PlanarBuilder> {
    let spec = PretzelSpec::new(p, q, r, [Sign::Positive, Sign::Positive, Sign::Negative])?;
    let (mut b, [c1, c2, c3]) = standard_builder(&spec);
    // bottom: the strand from column 3 is pushed across column 1's bottom arc
    b.insert_r2(((c3[0], SE), (c1[0], SW)), ((c2[0], SW), (c1[0], SE)), true);
    // the top arc from column 2 is pulled down across each non-exceptional
    // column-3 crossing
    let a = (c2[q - 1], NE);
    let mut bp = (c3[r - 1], NW);
    for k in (0..r - 1).rev() {
        let (x, _) = b.insert_r2((a, bp), ((c3[k], NW), (c3[k + 1], SW)), true);
        bp = (x, SW);
    }
    Ok(b)
}

/// `P(p, q, −r)` deformed by Reidemeister II moves so that its all-A state has
/// a single circle: `p + q + 3r` crossings.
pub fn tilde_pd_pq_negr(p: usize, q: usize, r: usize) -> Result<LinkDiagram> {
    tilde_builder(p, q, r)?.to_diagram()
}

fn named(names: Vec<String>, edges: &[(usize, usize)]) -> LandoGraph {
    let graph = Graph::from_edges(names.len(), edges).expect("construction edges are valid");
    LandoGraph { graph, provenance: names.into_iter().map(Provenance::Named).collect() }
}

/// Lando graph of the deformed `P(p, q, −r)`, built directly. Vertex `v`
/// corresponds to crossing `v` of [`tilde_pd_pq_negr`].
pub fn lando_main1(p: usize, q: usize, r: usize) -> Result<LandoGraph> {
    if p == 0 || q == 0 || r == 0 {
        return Err(Error::Precondition("pretzel box sizes must be positive".into()));
    }
    let big = p + q + r;
    let n = big + 2 * r;
    let mut names = vec![String::new(); n];
    let u = |i: usize| i;
    let v = |j: usize| p + j;
    let t = |k: usize| p + q + k;
    let (xb, yb) = (big, big + 1);
    // pair s of the column-3 moves sits at crossing r-2-s
    let xk = |k: usize| big + 2 + 2 * (r - 2 - k);
    let yk = |k: usize| big + 3 + 2 * (r - 2 - k);
    for i in 0..p {
        names[u(i)] = format!("u{}", i + 1);
    }
    for j in 0..q {
        names[v(j)] = format!("v{}", j + 1);
    }
    for k in 0..r {
        names[t(k)] = format!("t{}", k + 1);
    }
    names[xb] = "xb".into();
    names[yb] = "yb".into();
    let mut edges = vec![(yb, xb)];
    edges.extend((0..p).map(|i| (yb, u(i))));
    for j in 0..q {
        edges.push((yb, v(j)));
        edges.push((v(j), t(0)));
    }
    for k in 0..r - 1 {
        names[xk(k)] = format!("x{}", k + 1);
        names[yk(k)] = format!("y{}", k + 1);
        edges.extend([(yk(k), t(k)), (yk(k), t(k + 1)), (yk(k), xk(k))]);
    }
    Ok(named(names, &edges))
}

/// Lando graph for `P(p, −q, −r)` built from its layered schema: `m =
/// min{p, q−1, r−1}` layers, `p − m` copies of `x` joined to both tops `z′`
/// and `z`, and `q − m − 1` (resp. `r − m − 1`) small-trees hanging off `z′`
/// (resp. `z`). Small-trees are 2-paths, or with `raw` a vertex carrying two
/// leaves.
pub fn lando_main2(p: usize, q: usize, r: usize, raw: bool) -> Result<LandoGraph> {
    if p == 0 || q == 0 || r == 0 {
        return Err(Error::Precondition("pretzel box sizes must be positive".into()));
    }
    if case_tag(p, q, r) == CaseTag::Excluded {
        return Err(Error::ExcludedCase(format!("P({p},-{q},-{r}): min(q,r) = p+1 with q != r")));
    }
    let m = p.min(q - 1).min(r - 1);
    let mut names: Vec<String> = Vec::new();
    let mut add = |s: String| {
        names.push(s);
        names.len() - 1
    };
    // layer l in 1..=m+1; the top layer only has a and d
    let mut a = Vec::new();
    let mut d = Vec::new();
    let mut rest = Vec::new();
    for l in 1..=m + 1 {
        a.push(add(format!("a{l}")));
        d.push(add(format!("d{l}")));
        if l <= m {
            let ids: Vec<usize> = ["b", "c", "e", "f"].iter().map(|s| add(format!("{s}{l}"))).collect();
            rest.push([ids[0], ids[1], ids[2], ids[3]]);
        }
    }
    let mut edges = Vec::new();
    for l in 0..m {
        let [b, c, e, f] = rest[l];
        edges.extend([(a[l], c), (b, c), (d[l], f), (e, f), (a[l + 1], b), (d[l + 1], e), (a[l], d[l + 1])]);
    }
    let (zp, z) = (a[m], d[m]);
    for i in 0..p - m {
        let x = add(format!("x{}", i + 1));
        edges.extend([(x, zp), (x, z)]);
    }
    let mut tree = |root: usize, tag: &str, k: usize, edges: &mut Vec<(usize, usize)>| {
        let t = add(format!("{tag}{k}"));
        let l1 = add(format!("{tag}{k}'"));
        edges.extend([(root, t), (t, l1)]);
        if raw {
            let l2 = add(format!("{tag}{k}''"));
            edges.push((t, l2));
        }
    };
    for k in 0..q - m - 1 {
        tree(zp, "s", k + 1, &mut edges);
    }
    for k in 0..r - m - 1 {
        tree(z, "t", k + 1, &mut edges);
    }
    Ok(named(names, &edges))
}

/// Expected homotopy type of the independence complex of the relevant Lando
/// graph: the standard diagram for +++ and −−−, otherwise the deformed one.
pub fn expected_homotopy(spec: &PretzelSpec) -> Result<HomotopyType> {
    let (family, c) = spec.canonical();
    let (q, r) = (c.q as i64, c.r as i64);
    Ok(match family {
        Family::AllPositive | Family::AllNegative => HomotopyType::empty(),
        Family::TwoPositive => HomotopyType::sphere(r - 1),
        Family::OnePositive => match case_tag(c.p, c.q, c.r) {
            CaseTag::EqualAtMostP => HomotopyType::Wedge(vec![q + r - 2, q + r - 2]),
            CaseTag::EqualPPlusOne | CaseTag::QSmaller | CaseTag::RSmaller => HomotopyType::sphere(q + r - 2),
            CaseTag::PSmall => HomotopyType::sphere(q + r - 3),
            CaseTag::Excluded => return Err(Error::ExcludedCase(c.to_string())),
        },
    })
}

/// Where the extreme homology of a pretzel link is expected to live.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradingMetadata {
    pub spec: String,
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<u8>,
    /// Crossings of the diagram whose Lando graph is used.
    pub c_tilde: usize,
    pub n_tilde: usize,
    /// Negative crossings of the standard diagram.
    pub n: usize,
    pub j_min: i64,
    pub expected_i: i64,
    pub expected_j_underline: i64,
    pub expected_rank: usize,
}

pub fn grading_metadata(spec: &PretzelSpec) -> Result<GradingMetadata> {
    let (family, cs) = spec.canonical();
    let n = standard_pd(&cs).negative_count();
    let (p, q, r) = (cs.p, cs.q, cs.r);
    let c = p + q + r;
    let (ni, pi, qi) = (n as i64, p as i64, q as i64);
    let ri = r as i64;
    let mut case = None;
    // (c_tilde, n_tilde, |s_A|, i, rank)
    let (c_tilde, n_tilde, s_a, expected_i, rank) = match family {
        Family::AllPositive => (c, n, 3, -ni, 1),
        Family::AllNegative => (c, n, c - 1, -ni, 1),
        Family::TwoPositive => (p + q + 3 * r, n + r, 1, -ni, 1),
        Family::OnePositive => {
            let tag = case_tag(p, q, r);
            case = tag.number();
            match tag {
                CaseTag::EqualAtMostP => (c + 3 * q - 3, n + q - 1, 1, qi - ni, 2),
                CaseTag::EqualPPlusOne => (c + 3 * p, n + p, 1, pi + 1 - ni, 1),
                CaseTag::QSmaller => (c + 3 * (q - 1) + 2 * (r - q), n + r - 1, 1, qi - ni, 1),
                CaseTag::RSmaller => (c + 3 * (r - 1) + 2 * (q - r), n + q - 1, 1, ri - ni, 1),
                CaseTag::PSmall => (c + 3 * p + 2 * (q - p - 1) + 2 * (r - p - 1), n + q + r - p - 2, 1, pi - ni, 1),
                CaseTag::Excluded => return Err(Error::ExcludedCase(cs.to_string())),
            }
        }
    };
    let j_min = c_tilde as i64 - 3 * n_tilde as i64 - s_a as i64;
    Ok(GradingMetadata {
        spec: cs.to_string(),
        family,
        case,
        c_tilde,
        n_tilde,
        n,
        j_min,
        expected_i,
        expected_j_underline: j_min,
        expected_rank: rank,
    })
}

impl GradingMetadata {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;
    use crate::homotopy::reduce;
    use crate::lando::lando_graph_of;

    fn spec(s: &str) -> PretzelSpec {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(spec("P(2, -3,-4)").to_string(), "P(2,-3,-4)");
        assert!("P(0,1,2)".parse::<PretzelSpec>().is_err());
        assert!("P(1,2)".parse::<PretzelSpec>().is_err());
        assert!("Q(1,2,3)".parse::<PretzelSpec>().is_err());
    }

    #[test]
    fn rotations() {
        let (f, c) = spec("P(-3,2,-4)").canonical();
        assert_eq!((f, c.to_string()), (Family::OnePositive, "P(2,-4,-3)".to_string()));
        let (f, c) = spec("P(-3,2,4)").canonical();
        assert_eq!((f, c.to_string()), (Family::TwoPositive, "P(2,4,-3)".to_string()));
    }

    #[test]
    fn case_tags() {
        assert_eq!(case_tag(3, 3, 3), CaseTag::EqualAtMostP);
        assert_eq!(case_tag(2, 3, 3), CaseTag::EqualPPlusOne);
        assert_eq!(case_tag(3, 2, 5), CaseTag::QSmaller);
        assert_eq!(case_tag(3, 5, 2), CaseTag::RSmaller);
        assert_eq!(case_tag(1, 3, 4), CaseTag::PSmall);
        assert_eq!(case_tag(2, 3, 4), CaseTag::Excluded);
        assert!(matches!(lando_main2(2, 3, 4, false), Err(Error::ExcludedCase(_))));
    }

    #[test]
    fn standard_diagrams() {
        let d = standard_pd(&spec("P(1,1,1)"));
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.circle_count(0), 3);
        let d = standard_pd(&spec("P(-1,-1,-1)"));
        assert_eq!(d.circle_count(0), 2);
        let d = standard_pd(&spec("P(2,3,4)"));
        assert_eq!(d.crossing_count(), 9);
        assert_eq!(lando_graph_of(&d).graph.vertex_count(), 0);
    }

    #[test]
    fn deformed_diagram_counts() {
        for (p, q, r) in [(1, 1, 1), (2, 2, 3), (3, 1, 2)] {
            let d = tilde_pd_pq_negr(p, q, r).unwrap();
            let n = standard_pd(&PretzelSpec::from_signed(p as i64, q as i64, -(r as i64)).unwrap()).negative_count();
            assert_eq!(d.crossing_count(), p + q + 3 * r);
            assert_eq!(d.negative_count(), n + r);
            assert_eq!(d.circle_count(0), 1);
        }
        assert_eq!(tilde_pd_pq_negr(2, 2, 3).unwrap().crossing_count(), 13);
    }

    #[test]
    fn main1_matches_diagram() {
        for (p, q, r) in [(1, 1, 1), (2, 1, 3), (3, 2, 2)] {
            let g = lando_graph_of(&tilde_pd_pq_negr(p, q, r).unwrap());
            assert!(is_isomorphic(&g.graph, &lando_main1(p, q, r).unwrap().graph));
        }
    }

    #[test]
    fn main2_examples() {
        let h = |p, q, r| reduce(&lando_main2(p, q, r, false).unwrap().graph).certified().cloned();
        assert_eq!(h(3, 3, 3), Some(HomotopyType::Wedge(vec![4, 4])));
        assert_eq!(h(1, 3, 3), Some(HomotopyType::sphere(3)));
        assert_eq!(h(7, 7, 7), Some(HomotopyType::Wedge(vec![12, 12])));
        let raw = reduce(&lando_main2(1, 4, 5, true).unwrap().graph);
        assert_eq!(raw.certified(), Some(&HomotopyType::sphere(6)));
    }

    #[test]
    fn expected_types() {
        assert_eq!(expected_homotopy(&spec("P(2,3,4)")).unwrap(), HomotopyType::empty());
        assert_eq!(expected_homotopy(&spec("P(2,2,-3)")).unwrap(), HomotopyType::sphere(2));
        assert_eq!(expected_homotopy(&spec("P(2,-4,-5)")).unwrap(), HomotopyType::sphere(6));
    }

    #[test]
    fn metadata() {
        let m = grading_metadata(&spec("P(2,2,-3)")).unwrap();
        assert_eq!(m.j_min, m.c_tilde as i64 - 3 * m.n_tilde as i64 - 1);
        assert_eq!(m.expected_j_underline, 2 + 2 - 3 * m.n as i64 - 1);
        assert_eq!(m.expected_i, -(m.n as i64));
        let m = grading_metadata(&spec("P(3,-2,-2)")).unwrap();
        assert_eq!((m.expected_rank, m.expected_i), (2, 2 - m.n as i64));
        assert!(grading_metadata(&spec("P(2,-3,-4)")).is_err());
    }
}
