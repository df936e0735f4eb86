//! Building PD codes from crossings placed in the plane.
//!
//! Each crossing is an "X" with four ports listed counterclockwise:
//! SW, SE, NE, NW. Ports are wired together pairwise; the PD code is read off
//! by traversing the strands.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::linkdiag::LinkDiagram;

pub const SW: usize = 0;
pub const SE: usize = 1;
pub const NE: usize = 2;
pub const NW: usize = 3;

pub type Port = (usize, usize);

/// Which diagonal passes over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Over {
    /// SW–NE strand on top.
    Rising,
    /// SE–NW strand on top.
    Falling,
}

#[derive(Clone, Debug, Default)]
pub struct PlanarBuilder {
    kinds: Vec<Over>,
    wire: BTreeMap<Port, Port>,
}

impl PlanarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_crossing(&mut self, over: Over) -> usize {
        self.kinds.push(over);
        self.kinds.len() - 1
    }

    pub fn crossing_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn connect(&mut self, a: Port, b: Port) {
        assert!(!self.wire.contains_key(&a) && !self.wire.contains_key(&b), "port already wired");
        self.wire.insert(a, b);
        self.wire.insert(b, a);
    }

    pub fn partner(&self, p: Port) -> Port {
        self.wire[&p]
    }

    fn disconnect(&mut self, a: Port) -> Port {
        let b = self.wire.remove(&a).expect("port not wired");
        self.wire.remove(&b);
        b
    }

    /// Reidemeister II move pushing strand `e1 = (a, b)` across strand
    /// `e2 = (c, d)`. Strands are given in travel direction; the face they
    /// share lies to the right of `e1` and to the left of `e2`.
    /// Returns the two new crossings.
    pub fn insert_r2(&mut self, e1: (Port, Port), e2: (Port, Port), first_over: bool) -> (usize, usize) {
        let (a, b) = e1;
        let (c, d) = e2;
        assert_eq!(self.disconnect(a), b);
        assert_eq!(self.disconnect(c), d);
        let (kx, ky) = if first_over { (Over::Rising, Over::Falling) } else { (Over::Falling, Over::Rising) };
        let x = self.add_crossing(kx);
        let y = self.add_crossing(ky);
        self.connect(a, (x, SW));
        self.connect(c, (x, SE));
        self.connect((x, NE), (y, SE));
        self.connect((x, NW), (y, SW));
        self.connect((y, NW), b);
        self.connect((y, NE), d);
        (x, y)
    }

    /// Reads off a PD code. Strands are traversed from the lowest unvisited
    /// port, so earlier crossings seed the orientation.
    pub fn to_tuples(&self) -> Vec<[usize; 4]> {
        let c = self.kinds.len();
        let mut label: BTreeMap<Port, usize> = BTreeMap::new();
        let mut incoming: Vec<[bool; 4]> = vec![[false; 4]; c];
        let mut next = 1;
        for x in 0..c {
            for s in 0..4 {
                if label.contains_key(&(x, s)) {
                    continue;
                }
                let start = (x, s);
                let mut cur = start;
                loop {
                    let arr = self.partner(cur);
                    label.insert(cur, next);
                    label.insert(arr, next);
                    next += 1;
                    incoming[arr.0][arr.1] = true;
                    cur = (arr.0, (arr.1 + 2) % 4);
                    if cur == start {
                        break;
                    }
                }
            }
        }
        (0..c)
            .map(|x| {
                let under = match self.kinds[x] {
                    Over::Rising => [SE, NW],
                    Over::Falling => [SW, NE],
                };
                let u = if incoming[x][under[0]] { under[0] } else { under[1] };
                std::array::from_fn(|k| label[&(x, (u + k) % 4)])
            })
            .collect()
    }

    pub fn to_diagram(&self) -> Result<LinkDiagram> {
        LinkDiagram::from_tuples(self.to_tuples())
    }

    /// Crossing sign from the geometry (used to cross-check the PD reading).
    pub fn geometric_signs(&self) -> Vec<i8> {
        let dir = |s: usize| -> (i64, i64) {
            match s {
                SW => (-1, -1),
                SE => (1, -1),
                NE => (1, 1),
                _ => (-1, 1),
            }
        };
        let c = self.kinds.len();
        let mut incoming: Vec<[bool; 4]> = vec![[false; 4]; c];
        let mut seen = std::collections::BTreeSet::new();
        for x in 0..c {
            for s in 0..4 {
                if seen.contains(&(x, s)) {
                    continue;
                }
                let start = (x, s);
                let mut cur = start;
                loop {
                    let arr = self.partner(cur);
                    seen.insert(cur);
                    seen.insert(arr);
                    incoming[arr.0][arr.1] = true;
                    cur = (arr.0, (arr.1 + 2) % 4);
                    if cur == start {
                        break;
                    }
                }
            }
        }
        (0..c)
            .map(|x| {
                let (over, under) = match self.kinds[x] {
                    Over::Rising => ([SW, NE], [SE, NW]),
                    Over::Falling => ([SE, NW], [SW, NE]),
                };
                let heading = |pair: [usize; 2]| {
                    let (from, to) = if incoming[x][pair[0]] { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
                    let (a, b) = (dir(from), dir(to));
                    (b.0 - a.0, b.1 - a.1)
                };
                let o = heading(over);
                let u = heading(under);
                if o.0 * u.1 - o.1 * u.0 > 0 {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_twist_closure() {
        // one crossing with NW–NE and SW–SE closed up: an unknot with a kink
        let mut b = PlanarBuilder::new();
        let x = b.add_crossing(Over::Rising);
        b.connect((x, NW), (x, NE));
        b.connect((x, SW), (x, SE));
        let d = b.to_diagram().unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.components().len(), 1);
        let geo = b.geometric_signs();
        assert_eq!(i8::from(d.crossings()[0].sign), geo[0]);
    }
}
