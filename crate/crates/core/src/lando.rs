//! Lando graphs: admissible A-chords of the all-A smoothing and their
//! interleavings.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linkdiag::{Chord, LinkDiagram, SmoothedDiagram};
use crate::simplicial::{independence_complex, HomologyProfile};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Provenance {
    /// Crossing index of the chord in its diagram.
    Crossing(usize),
    /// Name of a vertex in a directly constructed graph.
    Named(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Crossing(x) => write!(f, "{x}"),
            Provenance::Named(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LandoGraph {
    pub graph: Graph,
    pub provenance: Vec<Provenance>,
}

/// Equality ignores provenance.
impl PartialEq for LandoGraph {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl LandoGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for (v, p) in self.provenance.iter().enumerate() {
            s.push_str(&format!("  {v} [label=\"{p}\"];\n"));
        }
        for (u, v) in self.graph.edges() {
            s.push_str(&format!("  {u} -- {v};\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Vertex<'a> {
            id: usize,
            provenance: &'a Provenance,
            neighbors: Vec<usize>,
        }
        let vs: Vec<Vertex> = self
            .provenance
            .iter()
            .enumerate()
            .map(|(id, p)| Vertex { id, provenance: p, neighbors: self.graph.neighbors(id).iter().copied().collect() })
            .collect();
        serde_json::to_string(&vs).unwrap()
    }
}

pub fn admissible_chords(sd: &SmoothedDiagram) -> Vec<Chord> {
    sd.chords.iter().filter(|c| c.is_admissible()).cloned().collect()
}

/// Whether two admissible chords on the same circle have alternating endpoints.
pub fn interleaves(c1: &Chord, c2: &Chord) -> Result<bool> {
    if !c1.is_admissible() || !c2.is_admissible() || c1.circle_a != c2.circle_a {
        return Err(Error::DifferentCircles);
    }
    let (a, b) = (c1.pos_a.min(c1.pos_b), c1.pos_a.max(c1.pos_b));
    let inside = |p: usize| a < p && p < b;
    Ok(inside(c2.pos_a) != inside(c2.pos_b))
}

pub fn lando_graph(sd: &SmoothedDiagram) -> LandoGraph {
    let chords = admissible_chords(sd);
    let mut g = Graph::new(chords.len());
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if chords[i].circle_a == chords[j].circle_a && interleaves(&chords[i], &chords[j]).unwrap() {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    LandoGraph { graph: g, provenance: chords.iter().map(|c| Provenance::Crossing(c.crossing)).collect() }
}

/// Lando graph of the all-A state of `d`.
pub fn lando_graph_of(d: &LinkDiagram) -> LandoGraph {
    lando_graph(&d.smooth(&d.all_a_state()).expect("all-A state labels every crossing"))
}

/// Extreme Khovanov homology through the independence complex:
/// `KH^{i, j_min} = H̃^{i-1+n}(I(G))`, reported in the homological degree `i`.
pub fn extreme_kh_via_lando(d: &LinkDiagram, vertex_cap: usize) -> Result<HomologyProfile> {
    let g = lando_graph_of(d);
    let k = independence_complex(&g.graph, vertex_cap)?;
    Ok(k.reduced_cohomology().shifted(1 - d.negative_count() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::parse_pd;

    fn chord(a: usize, b: usize) -> Chord {
        Chord { crossing: 0, circle_a: 0, pos_a: a, circle_b: 0, pos_b: b }
    }

    #[test]
    fn interleaving_examples() {
        assert!(interleaves(&chord(0, 2), &chord(1, 3)).unwrap());
        assert!(!interleaves(&chord(0, 1), &chord(2, 3)).unwrap());
        assert!(!interleaves(&chord(0, 3), &chord(1, 2)).unwrap());
        let other = Chord { circle_a: 1, circle_b: 1, ..chord(1, 3) };
        assert_eq!(interleaves(&chord(0, 2), &other), Err(Error::DifferentCircles));
    }

    #[test]
    fn kinks() {
        // negative kink: one A-circle, the chord is admissible
        let d = parse_pd("X[1,2,2,1]", false).unwrap();
        assert_eq!(d.writhe(), -1);
        let sd = d.smooth(&d.all_a_state()).unwrap();
        assert_eq!(sd.circle_count(), 1);
        assert_eq!(admissible_chords(&sd).len(), 1);
        assert_eq!(lando_graph(&sd).graph.vertex_count(), 1);
        // positive kink: the A-smoothing splits off the loop
        let d = parse_pd("X[1,1,2,2]", false).unwrap();
        let sd = d.smooth(&d.all_a_state()).unwrap();
        assert_eq!(sd.circle_count(), 2);
        assert!(admissible_chords(&sd).is_empty());
    }

    #[test]
    fn trefoil_graph_is_empty() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]", false).unwrap();
        assert_eq!(lando_graph_of(&d).graph.vertex_count(), 0);
        let h = extreme_kh_via_lando(&d, 24).unwrap();
        assert_eq!(h.betti_numbers(), vec![(-3, 1)]);
    }

    #[test]
    fn unknot_via_lando() {
        let h = extreme_kh_via_lando(&LinkDiagram::unknot(), 24).unwrap();
        assert_eq!(h.betti_numbers(), vec![(0, 1)]);
    }
}
