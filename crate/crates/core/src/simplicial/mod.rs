//! Independence complexes and integer (co)homology.

mod snf;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use snf::{smith_normal_form, SmithForm, SparseMatrix};

pub(crate) fn ser_bigs<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for d in v {
        match u64::try_from(d) {
            Ok(x) => seq.serialize_element(&x)?,
            Err(_) => seq.serialize_element(&d.to_string())?,
        }
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyEntry {
    #[serde(rename = "i")]
    pub degree: i64,
    pub betti: usize,
    #[serde(serialize_with = "ser_bigs")]
    pub torsion: Vec<BigUint>,
}

/// Nonzero groups only, ordered by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HomologyProfile {
    pub entries: Vec<HomologyEntry>,
}

impl HomologyProfile {
    pub fn betti(&self, d: i64) -> usize {
        self.entries.iter().find(|e| e.degree == d).map_or(0, |e| e.betti)
    }

    pub fn torsion(&self, d: i64) -> &[BigUint] {
        self.entries.iter().find(|e| e.degree == d).map_or(&[], |e| &e.torsion)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.entries.iter().all(|e| e.torsion.is_empty())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(degree, betti)` for every degree with nonzero free rank.
    pub fn betti_numbers(&self) -> Vec<(i64, usize)> {
        self.entries.iter().filter(|e| e.betti > 0).map(|e| (e.degree, e.betti)).collect()
    }

    pub fn shifted(&self, by: i64) -> HomologyProfile {
        HomologyProfile {
            entries: self.entries.iter().map(|e| HomologyEntry { degree: e.degree + by, ..e.clone() }).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }
}

/// Homology of a graded complex given by its group ranks and maps.
/// Each map is `(from, to, matrix)` with `matrix` of shape `size(to) × size(from)`.
pub fn graded_homology(sizes: &BTreeMap<i64, usize>, maps: &[(i64, i64, &SparseMatrix)]) -> HomologyProfile {
    let mut out_rank: BTreeMap<i64, usize> = BTreeMap::new();
    let mut incoming: BTreeMap<i64, SmithForm> = BTreeMap::new();
    for &(from, to, m) in maps {
        let s = smith_normal_form(m);
        *out_rank.entry(from).or_default() += s.rank;
        incoming.insert(to, s);
    }
    let mut entries = Vec::new();
    for (&d, &n) in sizes {
        let inr = incoming.get(&d).map_or(0, |s| s.rank);
        let betti = n - out_rank.get(&d).copied().unwrap_or(0) - inr;
        let torsion = incoming.get(&d).map_or_else(Vec::new, |s| s.torsion());
        if betti > 0 || !torsion.is_empty() {
            entries.push(HomologyEntry { degree: d, betti, torsion });
        }
    }
    HomologyProfile { entries }
}

/// Augmented simplicial complex with faces stored as vertex bitmasks,
/// `faces[k]` holding the faces of cardinality `k` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    vertex_count: usize,
    faces: Vec<Vec<u64>>,
}

pub fn independence_complex(g: &Graph, cap: usize) -> Result<Complex> {
    let n = g.vertex_count();
    if n > cap.min(64) {
        return Err(Error::CapExceeded { what: "vertex count", value: n, cap: cap.min(64) });
    }
    let nb: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
    let mut faces: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    // preorder DFS over increasing vertex sequences yields lexicographic order
    fn rec(start: usize, set: u64, size: usize, blocked: u64, n: usize, nb: &[u64], faces: &mut Vec<Vec<u64>>) {
        faces[size].push(set);
        for v in start..n {
            if blocked >> v & 1 == 0 {
                rec(v + 1, set | 1 << v, size + 1, blocked | nb[v], n, nb, faces);
            }
        }
    }
    rec(0, 0, 0, 0, n, &nb, &mut faces);
    while faces.len() > 1 && faces.last().is_some_and(|f| f.is_empty()) {
        faces.pop();
    }
    Ok(Complex { vertex_count: n, faces })
}

impl Complex {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Top dimension (−1 for the complex `{∅}`).
    pub fn dim(&self) -> i64 {
        self.faces.len() as i64 - 2
    }

    /// `(f_{-1}, f_0, f_1, ...)`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|f| f.len()).collect()
    }

    pub fn face_count(&self) -> usize {
        self.faces.iter().map(|f| f.len()).sum()
    }

    /// Faces of dimension `d` as sorted vertex lists.
    pub fn faces_of_dim(&self, d: i64) -> Vec<Vec<usize>> {
        let k = (d + 1) as usize;
        self.faces.get(k).map_or_else(Vec::new, |fs| fs.iter().map(|&m| bits(m)).collect())
    }

    fn size(&self, d: i64) -> usize {
        if d < -1 {
            return 0;
        }
        self.faces.get((d + 1) as usize).map_or(0, |f| f.len())
    }

    fn index(&self, d: i64) -> HashMap<u64, usize> {
        self.faces[(d + 1) as usize].iter().enumerate().map(|(i, &m)| (m, i)).collect()
    }

    /// ∂_d : C_d → C_{d−1}, `∂σ = Σ (−1)^i (σ − v_i)`, for `0 ≤ d ≤ dim`.
    pub fn boundary_matrix(&self, d: i64) -> SparseMatrix {
        let (rows, cols) = (self.size(d - 1), self.size(d));
        if cols == 0 || rows == 0 {
            return SparseMatrix::zeros(rows, cols);
        }
        let idx = self.index(d - 1);
        let columns = self.faces[(d + 1) as usize]
            .iter()
            .map(|&f| bits(f).iter().enumerate().map(|(i, &v)| (idx[&(f & !(1 << v))], sign(i))).collect())
            .collect();
        SparseMatrix::from_columns(rows, columns)
    }

    /// δ_d : C^d → C^{d+1}, `δσ = Σ_v (−1)^k (σ ∪ v)` with `k` the number of
    /// vertices of σ after `v`, for `−1 ≤ d < dim`.
    pub fn coboundary_matrix(&self, d: i64) -> SparseMatrix {
        let (rows, cols) = (self.size(d + 1), self.size(d));
        if cols == 0 || rows == 0 {
            return SparseMatrix::zeros(rows, cols);
        }
        let idx = self.index(d);
        let mut t = Vec::new();
        for (r, &tau) in self.faces[(d + 2) as usize].iter().enumerate() {
            for v in bits(tau) {
                let sigma = tau & !(1 << v);
                let after = (sigma >> v).count_ones() as usize;
                t.push((r, idx[&sigma], sign(after)));
            }
        }
        SparseMatrix::from_triplets(rows, cols, &t)
    }

    fn sizes(&self) -> BTreeMap<i64, usize> {
        (-1..=self.dim()).map(|d| (d, self.size(d))).collect()
    }

    pub fn reduced_homology(&self) -> HomologyProfile {
        let mats: Vec<(i64, SparseMatrix)> = (0..=self.dim()).map(|d| (d, self.boundary_matrix(d))).collect();
        let maps: Vec<(i64, i64, &SparseMatrix)> = mats.iter().map(|(d, m)| (*d, d - 1, m)).collect();
        graded_homology(&self.sizes(), &maps)
    }

    pub fn reduced_cohomology(&self) -> HomologyProfile {
        let mats: Vec<(i64, SparseMatrix)> = (-1..self.dim()).map(|d| (d, self.coboundary_matrix(d))).collect();
        let maps: Vec<(i64, i64, &SparseMatrix)> = mats.iter().map(|(d, m)| (*d, d + 1, m)).collect();
        graded_homology(&self.sizes(), &maps)
    }

    /// Reduced Euler characteristic `Σ_{d ≥ −1} (−1)^d f_d`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        (-1..=self.dim()).map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * self.size(d) as i64).sum()
    }
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn bits(mut m: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    v
}

/// f-vector and reduced homology as JSON.
pub fn complex_summary_json(k: &Complex, h: &HomologyProfile) -> String {
    #[derive(Serialize)]
    struct Summary<'a> {
        f_vector: Vec<usize>,
        homology: &'a HomologyProfile,
    }
    serde_json::to_string(&Summary { f_vector: k.f_vector(), homology: h }).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_is_sphere_minus_one() {
        let k = independence_complex(&Graph::new(0), 24).unwrap();
        assert_eq!(k.f_vector(), vec![1]);
        let h = k.reduced_homology();
        assert_eq!(h.betti_numbers(), vec![(-1, 1)]);
        assert_eq!(k.reduced_cohomology(), h);
    }

    #[test]
    fn edge_and_c6() {
        let k = independence_complex(&Graph::path(1), 24).unwrap();
        assert_eq!(k.f_vector(), vec![1, 2]);
        assert_eq!(k.reduced_homology().betti_numbers(), vec![(0, 1)]);
        let c6 = independence_complex(&Graph::cycle(6).unwrap(), 24).unwrap();
        assert_eq!(c6.f_vector(), vec![1, 6, 9, 2]);
        assert_eq!(c6.reduced_homology().betti_numbers(), vec![(1, 2)]);
        assert_eq!(c6.reduced_cohomology().betti_numbers(), vec![(1, 2)]);
    }

    #[test]
    fn path_l4() {
        let k = independence_complex(&Graph::path(4), 24).unwrap();
        assert_eq!(k.reduced_homology().betti_numbers(), vec![(1, 1)]);
    }

    #[test]
    fn cap_is_loud() {
        let g = Graph::new(30);
        assert!(matches!(independence_complex(&g, 24), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn lexicographic_faces() {
        let k = independence_complex(&Graph::new(3), 24).unwrap();
        assert_eq!(k.faces_of_dim(1), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn differentials_square_to_zero() {
        let k = independence_complex(&Graph::cycle(7).unwrap(), 24).unwrap();
        for d in 1..=k.dim() {
            assert!(k.boundary_matrix(d - 1).mul(&k.boundary_matrix(d)).is_zero());
        }
        for d in -1..k.dim() - 1 {
            assert!(k.coboundary_matrix(d + 1).mul(&k.coboundary_matrix(d)).is_zero());
        }
    }
}
