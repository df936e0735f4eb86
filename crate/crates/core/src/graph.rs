use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Simple undirected loopless graph on vertices `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    /// Adds `u -- v`. Parallel edges collapse; loops are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::LoopedGraph(u));
        }
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(Error::Precondition(format!("edge ({u},{v}) out of range for {n} vertices")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb.range(u + 1..) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// Subgraph induced on `keep` (renumbered in the order given).
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.adj.len()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::new(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                if pos[w] != usize::MAX {
                    g.adj[i].insert(pos[w]);
                }
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.adj.len();
        let mut g = self.clone();
        for nb in &other.adj {
            g.adj.push(nb.iter().map(|&w| w + off).collect());
        }
        g
    }

    /// Path with `edges` edges (`edges + 1` vertices).
    pub fn path(edges: usize) -> Graph {
        let mut g = Graph::new(edges + 1);
        for i in 0..edges {
            g.add_edge(i, i + 1).unwrap();
        }
        g
    }

    /// Cycle on `n` vertices. `n = 2` collapses to a single edge.
    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 2 {
            return Err(Error::LoopedGraph(0));
        }
        let mut g = Graph::path(n - 1);
        g.add_edge(n - 1, 0)?;
        Ok(g)
    }

    pub fn complete(m: usize) -> Graph {
        let mut g = Graph::new(m);
        for u in 0..m {
            for v in u + 1..m {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    /// Star with `rays` rays of length two around a centre (vertex 0).
    pub fn star_rays(rays: usize) -> Graph {
        let mut g = Graph::new(1 + 2 * rays);
        for k in 0..rays {
            g.add_edge(0, 1 + 2 * k).unwrap();
            g.add_edge(1 + 2 * k, 2 + 2 * k).unwrap();
        }
        g
    }

    /// Replace edge `u -- v` by a path with 4 edges.
    pub fn subdivide_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::Precondition(format!("no edge ({u},{v})")));
        }
        let mut g = self.clone();
        g.remove_edge(u, v);
        let a = g.add_vertex();
        let b = g.add_vertex();
        let c = g.add_vertex();
        for (x, y) in [(u, a), (a, b), (b, c), (c, v)] {
            g.add_edge(x, y)?;
        }
        Ok(g)
    }

    /// Glue a cycle `C_n` along the edge `u -- v` (the edge is kept).
    pub fn glue_cycle(&self, u: usize, v: usize, n: usize) -> Result<Graph> {
        if !self.has_edge(u, v) || n < 3 {
            return Err(Error::Precondition(format!("cannot glue C_{n} on ({u},{v})")));
        }
        let mut g = self.clone();
        let mut prev = u;
        for _ in 0..n - 2 {
            let x = g.add_vertex();
            g.add_edge(prev, x)?;
            prev = x;
        }
        g.add_edge(prev, v)?;
        Ok(g)
    }

    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        let name = |v: usize| match labels {
            Some(l) => format!("\"{}\"", l[v]),
            None => v.to_string(),
        };
        let mut s = String::from("graph G {\n");
        for v in 0..self.adj.len() {
            if self.adj[v].is_empty() {
                let _ = writeln!(s, "  {};", name(v));
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  {} -- {};", name(u), name(v));
        }
        s.push_str("}\n");
        s
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        self.adj.iter().map(|a| a.iter().copied().collect()).collect()
    }

    /// Parses either a DOT subset (`graph { a -- b; c; }`) or `u v` edge-list lines.
    /// Integer vertex names are used as indices; other names are numbered by first appearance.
    pub fn parse(text: &str) -> Result<Graph> {
        let body = match (text.find('{'), text.rfind('}')) {
            (Some(a), Some(b)) if a < b => {
                let head = text[..a].trim();
                if !(head.starts_with("graph") || head.starts_with("strict graph")) {
                    return Err(Error::Parse(format!("expected undirected DOT graph, got `{head}`")));
                }
                text[a + 1..b].replace(';', "\n")
            }
            _ => text.to_string(),
        };
        let mut items: Vec<Vec<String>> = Vec::new();
        for raw in body.lines() {
            let line = raw.split(['#']).next().unwrap().trim();
            let line = line.split("//").next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            // attribute lists are ignored
            let mut stripped = String::new();
            let mut depth = 0;
            for ch in line.chars() {
                match ch {
                    '[' => depth += 1,
                    ']' => depth -= 1,
                    _ if depth == 0 => stripped.push(ch),
                    _ => {}
                }
            }
            let line = stripped.trim();
            if line.is_empty() || matches!(line, "node" | "edge" | "graph") {
                continue;
            }
            if line.contains("->") || line.contains('=') {
                return Err(Error::Parse(format!("unsupported DOT syntax: `{line}`")));
            }
            let toks: Vec<String> = if line.contains("--") {
                line.split("--").map(|t| t.trim().trim_matches('"').to_string()).collect()
            } else {
                line.split_whitespace().map(|t| t.trim_matches('"').to_string()).collect()
            };
            if toks.iter().any(|t| t.is_empty()) || toks.len() > 2 && !line.contains("--") {
                return Err(Error::Parse(format!("bad line `{line}`")));
            }
            items.push(toks);
        }
        let numeric = items.iter().flatten().all(|t| t.parse::<usize>().is_ok());
        let mut names: BTreeMap<String, usize> = BTreeMap::new();
        let mut order = 0usize;
        let mut id = |t: &str| -> usize {
            if numeric {
                t.parse().unwrap()
            } else {
                *names.entry(t.to_string()).or_insert_with(|| {
                    order += 1;
                    order - 1
                })
            }
        };
        let mut edges = Vec::new();
        let mut n = 0;
        for toks in &items {
            let ids: Vec<usize> = toks.iter().map(|t| id(t)).collect();
            for &v in &ids {
                n = n.max(v + 1);
            }
            for w in ids.windows(2) {
                edges.push((w[0], w[1]));
            }
        }
        Graph::from_edges(n, &edges)
    }
}

/// Colour refinement (1-dimensional Weisfeiler-Leman). Colours are hashes, so
/// they are comparable across graphs.
pub fn refine_colors(g: &Graph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut colors: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    let mut classes = count_classes(&colors);
    for _ in 0..n {
        let next: Vec<u64> = (0..n)
            .map(|v| {
                let mut nb: Vec<u64> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                let mut h = DefaultHasher::new();
                colors[v].hash(&mut h);
                nb.hash(&mut h);
                h.finish()
            })
            .collect();
        let c = count_classes(&next);
        colors = next;
        if c == classes {
            break;
        }
        classes = c;
    }
    colors
}

fn count_classes(c: &[u64]) -> usize {
    c.iter().collect::<BTreeSet<_>>().len()
}

/// Isomorphism-invariant key (equal for isomorphic graphs; collisions possible).
pub fn invariant_key(g: &Graph) -> u64 {
    let mut c = refine_colors(g);
    c.sort_unstable();
    let mut h = DefaultHasher::new();
    g.vertex_count().hash(&mut h);
    g.edge_count().hash(&mut h);
    c.hash(&mut h);
    h.finish()
}

/// Returns `phi` with `phi[v]` the image in `h` of vertex `v` of `g`.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let cg = refine_colors(g);
    let ch = refine_colors(h);
    let mut sg = cg.clone();
    let mut sh = ch.clone();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return None;
    }
    // rarest colour classes first, then by BFS so each new vertex touches mapped ones
    let mut freq: HashMap<u64, usize> = HashMap::new();
    for &c in &cg {
        *freq.entry(c).or_default() += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let start = (0..n).filter(|&v| !placed[v]).min_by_key(|&v| (freq[&cg[v]], v)).unwrap();
        placed[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nb: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| !placed[w]).collect();
            nb.sort_by_key(|&w| (freq[&cg[w]], w));
            for w in nb {
                placed[w] = true;
                queue.push_back(w);
            }
        }
    }
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if iso_search(g, h, &cg, &ch, &order, 0, &mut phi, &mut used) {
        Some(phi)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn iso_search(
    g: &Graph,
    h: &Graph,
    cg: &[u64],
    ch: &[u64],
    order: &[usize],
    k: usize,
    phi: &mut [usize],
    used: &mut [bool],
) -> bool {
    if k == order.len() {
        return true;
    }
    let v = order[k];
    for x in 0..h.vertex_count() {
        if used[x] || ch[x] != cg[v] {
            continue;
        }
        let ok = order[..k].iter().all(|&u| g.has_edge(u, v) == h.has_edge(phi[u], x));
        if !ok {
            continue;
        }
        phi[v] = x;
        used[x] = true;
        if iso_search(g, h, cg, ch, order, k + 1, phi, used) {
            return true;
        }
        used[x] = false;
        phi[v] = usize::MAX;
    }
    false
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}
