//! PD-coded oriented link diagrams, Kauffman states and smoothings.
//!
//! A crossing `X[a,b,c,d]` lists its four arcs counterclockwise starting at the
//! incoming under-arc. The under strand runs slot 0 → slot 2; the crossing is
//! positive when the over strand runs slot 3 → slot 1.

pub mod planar;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Positive,
    Negative,
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            _ => Err(format!("crossing sign must be ±1, got {v}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub arcs: [usize; 4],
    pub sign: Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KauffmanState {
    pub labels: Vec<Label>,
}

impl KauffmanState {
    pub fn all(c: usize, l: Label) -> Self {
        KauffmanState { labels: vec![l; c] }
    }

    /// Bit `x` set means crossing `x` is B-labelled.
    pub fn from_mask(c: usize, mask: u64) -> Self {
        KauffmanState { labels: (0..c).map(|x| if mask >> x & 1 == 1 { Label::B } else { Label::A }).collect() }
    }

    pub fn mask(&self) -> u64 {
        self.labels.iter().enumerate().filter(|(_, &l)| l == Label::B).fold(0, |m, (x, _)| m | 1 << x)
    }

    /// σ = #A − #B.
    pub fn sigma(&self) -> i64 {
        self.labels.iter().map(|&l| if l == Label::A { 1 } else { -1 }).sum()
    }
}

/// One smoothing bridge per side; positions index the bridges along a circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    pub crossing: usize,
    #[serde(rename = "circleA")]
    pub circle_a: usize,
    #[serde(rename = "posA")]
    pub pos_a: usize,
    #[serde(rename = "circleB")]
    pub circle_b: usize,
    #[serde(rename = "posB")]
    pub pos_b: usize,
}

impl Chord {
    pub fn is_admissible(&self) -> bool {
        self.circle_a == self.circle_b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothedDiagram {
    /// Arc labels along each circle; bridge `k` sits right after arc `k`.
    pub circles: Vec<Vec<usize>>,
    pub chords: Vec<Chord>,
}

impl SmoothedDiagram {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    /// Number of chord endpoints on circle `k`.
    pub fn endpoints_on(&self, k: usize) -> usize {
        self.circles[k].len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    arc_count: usize,
    /// Oriented arc cycles, one per link component.
    components: Vec<Vec<usize>>,
    crossing_order: Vec<usize>,
    #[serde(default, skip_serializing_if = "is_zero")]
    free_loops: usize,
    #[serde(skip)]
    rank: Vec<usize>,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("X[{},{},{},{}]", x.arcs[0], x.arcs[1], x.arcs[2], x.arcs[3]))
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// Parses PD notation. Accepts `X[a,b,c,d]` tokens separated by whitespace or
/// commas, optionally wrapped in `PD[...]`.
pub fn parse_pd(text: &str, allow_empty: bool) -> Result<LinkDiagram> {
    let mut s = text.trim();
    if let Some(rest) = s.strip_prefix("PD[") {
        s = rest.strip_suffix(']').ok_or_else(|| Error::MalformedToken(text.trim().to_string()))?;
    }
    let mut tuples = Vec::new();
    let mut rest = s;
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        if rest.is_empty() {
            break;
        }
        let end = rest.find(']').ok_or_else(|| Error::MalformedToken(rest.to_string()))?;
        let tok = &rest[..=end];
        rest = &rest[end + 1..];
        let inner = tok
            .strip_prefix("X[")
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::MalformedToken(tok.to_string()))?;
        let nums: Vec<usize> = inner
            .split(',')
            .map(|n| n.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::MalformedToken(tok.to_string()))?;
        if nums.len() != 4 || nums.contains(&0) {
            return Err(Error::MalformedToken(tok.to_string()));
        }
        tuples.push([nums[0], nums[1], nums[2], nums[3]]);
    }
    if tuples.is_empty() {
        return if allow_empty { Ok(LinkDiagram::unknot()) } else { Err(Error::EmptyDiagram) };
    }
    LinkDiagram::from_tuples(tuples)
}

impl LinkDiagram {
    /// The 0-crossing diagram of the unknot.
    pub fn unknot() -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            arc_count: 0,
            components: vec![Vec::new()],
            crossing_order: Vec::new(),
            free_loops: 1,
            rank: Vec::new(),
        }
    }

    pub fn from_tuples(tuples: Vec<[usize; 4]>) -> Result<Self> {
        if tuples.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        let arc_count = tuples.iter().flatten().copied().max().unwrap();
        // occurrences of each arc label as (crossing, slot)
        let mut occ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); arc_count + 1];
        for (x, t) in tuples.iter().enumerate() {
            for (s, &a) in t.iter().enumerate() {
                occ[a].push((x, s));
            }
        }
        for (a, o) in occ.iter().enumerate().skip(1) {
            if o.len() != 2 {
                return Err(Error::ArcCountViolation { arc: a, count: o.len() });
            }
        }
        let other = |a: usize, at: (usize, usize)| if occ[a][0] == at { occ[a][1] } else { occ[a][0] };

        // Walk from arc `a` entering at `head`; returns the arcs in order and
        // the arrival slots at each crossing passed.
        let walk = |a: usize, head: (usize, usize)| {
            let mut arcs = vec![a];
            let mut arrivals = Vec::new();
            let mut at = head;
            loop {
                arrivals.push(at);
                let (x, s) = at;
                let out = (x, (s + 2) % 4);
                let next = tuples[x][out.1];
                let nhead = other(next, out);
                if next == a && nhead == head {
                    break;
                }
                arcs.push(next);
                at = nhead;
            }
            (arcs, arrivals)
        };

        let mut seen = vec![false; arc_count + 1];
        let mut over_in: Vec<Option<usize>> = vec![None; tuples.len()];
        let mut components = Vec::new();
        for a in 1..=arc_count {
            if seen[a] {
                continue;
            }
            let fwd = walk(a, occ[a][1]);
            let (fwd_ok, rev) = fwd.1.iter().fold((0, 0), |(f, r), &(_, s)| match s {
                0 => (f + 1, r),
                2 => (f, r + 1),
                _ => (f, r),
            });
            if fwd_ok > 0 && rev > 0 {
                return Err(Error::InconsistentOrientation(a));
            }
            let chosen = if rev > 0 {
                walk(a, occ[a][0])
            } else if fwd_ok > 0 {
                fwd
            } else {
                let bwd = walk(a, occ[a][0]);
                let nf = fwd.0.get(1).copied().unwrap_or(a);
                let nb = bwd.0.get(1).copied().unwrap_or(a);
                if nb < nf {
                    bwd
                } else {
                    fwd
                }
            };
            for &arc in &chosen.0 {
                seen[arc] = true;
            }
            for &(x, s) in &chosen.1 {
                if s == 1 || s == 3 {
                    over_in[x] = Some(s);
                }
            }
            components.push(chosen.0);
        }
        let crossings = tuples
            .iter()
            .zip(&over_in)
            .map(|(t, o)| Crossing {
                arcs: *t,
                sign: if *o == Some(3) { Sign::Positive } else { Sign::Negative },
            })
            .collect::<Vec<_>>();
        let c = crossings.len();
        Ok(LinkDiagram {
            crossings,
            arc_count,
            components,
            crossing_order: (0..c).collect(),
            free_loops: 0,
            rank: (0..c).collect(),
        })
    }

    /// Same diagram with a different crossing order for boundary signs.
    pub fn with_crossing_order(&self, order: Vec<usize>) -> Result<Self> {
        let c = self.crossings.len();
        let mut rank = vec![usize::MAX; c];
        for (i, &x) in order.iter().enumerate() {
            if x >= c || rank[x] != usize::MAX {
                return Err(Error::Precondition("crossing order is not a permutation".into()));
            }
            rank[x] = i;
        }
        if order.len() != c {
            return Err(Error::Precondition("crossing order is not a permutation".into()));
        }
        let mut d = self.clone();
        d.crossing_order = order;
        d.rank = rank;
        Ok(d)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn crossing_order(&self) -> &[usize] {
        &self.crossing_order
    }

    /// Position of crossing `x` in the crossing order.
    pub fn rank_of(&self, x: usize) -> usize {
        self.rank[x]
    }

    pub fn positive_count(&self) -> usize {
        self.crossings.iter().filter(|x| x.sign == Sign::Positive).count()
    }

    pub fn negative_count(&self) -> usize {
        self.crossings.len() - self.positive_count()
    }

    pub fn writhe(&self) -> i64 {
        self.positive_count() as i64 - self.negative_count() as i64
    }

    pub fn all_a_state(&self) -> KauffmanState {
        KauffmanState::all(self.crossings.len(), Label::A)
    }

    /// Slot pairs joined by the smoothing of crossing `x`.
    fn bridges(label: Label) -> [(usize, usize); 2] {
        match label {
            Label::A => [(0, 1), (2, 3)],
            Label::B => [(0, 3), (1, 2)],
        }
    }

    /// Number of circles of the smoothing with B-set `mask`, and the circle
    /// index of every arc (index 0 unused). Circles are numbered by their
    /// smallest arc label.
    pub fn circle_labels(&self, mask: u64) -> (usize, Vec<usize>) {
        let n = self.arc_count;
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (x, cr) in self.crossings.iter().enumerate() {
            let l = if mask >> x & 1 == 1 { Label::B } else { Label::A };
            for (s, t) in Self::bridges(l) {
                let (ra, rb) = (find(&mut parent, cr.arcs[s]), find(&mut parent, cr.arcs[t]));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let mut id = vec![usize::MAX; n + 1];
        let mut circle_of = vec![usize::MAX; n + 1];
        let mut count = 0;
        for a in 1..=n {
            let r = find(&mut parent, a);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            circle_of[a] = id[r];
        }
        (count + self.free_loops, circle_of)
    }

    pub fn circle_count(&self, mask: u64) -> usize {
        self.circle_labels(mask).0
    }

    pub fn smooth(&self, state: &KauffmanState) -> Result<SmoothedDiagram> {
        let c = self.crossings.len();
        if state.labels.len() != c {
            return Err(Error::IncompleteState { expected: c, got: state.labels.len() });
        }
        let n = self.arc_count;
        let mut occ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n + 1];
        for (x, cr) in self.crossings.iter().enumerate() {
            for (s, &a) in cr.arcs.iter().enumerate() {
                occ[a].push((x, s));
            }
        }
        let partner = |x: usize, s: usize| -> (usize, usize) {
            let [p, q] = Self::bridges(state.labels[x]);
            let t = if p.0 == s {
                p.1
            } else if p.1 == s {
                p.0
            } else if q.0 == s {
                q.1
            } else {
                q.0
            };
            // bridge id: 0 for the pair containing slot 0
            let b = if p.0 == s || p.1 == s { 0 } else { 1 };
            (t, b)
        };
        let mut used = vec![false; n + 1];
        let mut circles = Vec::new();
        let mut bridge_at: Vec<[(usize, usize); 2]> = vec![[(usize::MAX, 0); 2]; c];
        for a in 1..=n {
            if used[a] {
                continue;
            }
            let k = circles.len();
            let mut arcs = Vec::new();
            let (mut cur, mut at) = (a, occ[a][1]);
            loop {
                used[cur] = true;
                let pos = arcs.len();
                arcs.push(cur);
                let (x, s) = at;
                let (t, b) = partner(x, s);
                bridge_at[x][b] = (k, pos);
                let next = self.crossings[x].arcs[t];
                let entry = (x, t);
                let exit = if occ[next][0] == entry { occ[next][1] } else { occ[next][0] };
                if next == a && exit == occ[a][1] {
                    break;
                }
                cur = next;
                at = exit;
            }
            circles.push(arcs);
        }
        for _ in 0..self.free_loops {
            circles.push(Vec::new());
        }
        let chords = bridge_at
            .iter()
            .enumerate()
            .map(|(x, b)| Chord { crossing: x, circle_a: b[0].0, pos_a: b[0].1, circle_b: b[1].0, pos_b: b[1].1 })
            .collect();
        Ok(SmoothedDiagram { circles, chords })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: LinkDiagram = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let tuples: Vec<[usize; 4]> = d.crossings.iter().map(|x| x.arcs).collect();
        if tuples.is_empty() {
            return Ok(LinkDiagram::unknot());
        }
        let rebuilt = LinkDiagram::from_tuples(tuples)?;
        if rebuilt.crossings != d.crossings {
            return Err(Error::Parse("crossing signs disagree with orientation".into()));
        }
        rebuilt.with_crossing_order(d.crossing_order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

    #[test]
    fn trefoil_parse() {
        let d = parse_pd(TREFOIL, false).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(d.components().len(), 1);
        assert_eq!(d.writhe(), -3);
        assert_eq!(d.components()[0], vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn trefoil_smoothings() {
        let d = parse_pd(TREFOIL, false).unwrap();
        let sa = d.smooth(&d.all_a_state()).unwrap();
        assert_eq!(sa.circle_count(), 3);
        assert_eq!(d.circle_count(0b111), 2);
        assert_eq!(sa.chords.len(), 3);
    }

    #[test]
    fn empty_and_kinks() {
        assert_eq!(parse_pd("", false), Err(Error::EmptyDiagram));
        let u = parse_pd("  ", true).unwrap();
        assert_eq!(u.writhe(), 0);
        let s = u.smooth(&u.all_a_state()).unwrap();
        assert_eq!((s.circle_count(), s.chords.len()), (1, 0));
        let k = parse_pd("X[1,1,2,2]", false).unwrap();
        assert_eq!(k.writhe(), 1);
        let k2 = parse_pd("X[2,1,1,2]", false).unwrap();
        assert_eq!(k2.writhe(), -1);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_pd("X[1,2,3]", false), Err(Error::MalformedToken(_))));
        assert!(matches!(parse_pd("Y[1,2,3,4]", false), Err(Error::MalformedToken(_))));
        assert!(matches!(parse_pd("X[1,2,2,1] X[1,3,3,4]", false), Err(Error::ArcCountViolation { .. })));
        // two under-passes pointing opposite ways along one component
        assert!(matches!(parse_pd("X[1,3,2,4] X[1,4,2,3]", false), Err(Error::InconsistentOrientation(_))));
        let d = parse_pd(TREFOIL, false).unwrap();
        assert!(matches!(d.smooth(&KauffmanState::all(2, Label::A)), Err(Error::IncompleteState { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let d = parse_pd(TREFOIL, false).unwrap().with_crossing_order(vec![2, 0, 1]).unwrap();
        let back = LinkDiagram::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn masks() {
        let s = KauffmanState::from_mask(4, 0b1010);
        assert_eq!(s.mask(), 0b1010);
        assert_eq!(s.sigma(), 0);
    }
}
