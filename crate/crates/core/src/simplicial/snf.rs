//! Exact Smith normal form of sparse integer matrices.
//!
//! Unit pivots are eliminated first on the sparse structure in `i64`
//! (checked arithmetic, smallest row first, shortest column among the unit
//! entries of that row). Whatever is left has no unit entries and goes to a
//! dense arbitrary-precision elimination pivoting on the smallest absolute
//! value. Any `i64` overflow restarts the whole matrix in the dense path.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols: vec![Vec::new(); cols] }
    }

    /// Duplicate positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for &(r, c, v) in entries {
            assert!(r < rows && c < cols, "triplet out of range");
            m.cols[c].push((r, v));
        }
        for col in &mut m.cols {
            col.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
            for &(r, v) in col.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *col = merged;
        }
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut t = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(r, c, &t)
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<(usize, i64)>>) -> Self {
        let c = cols.len();
        let t: Vec<(usize, usize, i64)> =
            cols.into_iter().enumerate().flat_map(|(j, col)| col.into_iter().map(move |(i, v)| (i, j, v))).collect();
        Self::from_triplets(rows, c, &t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.cols[j].binary_search_by_key(&i, |e| e.0).map_or(0, |k| self.cols[j][k].1)
    }

    /// Triplets in column-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        self.cols.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |&(i, v)| (i, j, v))).collect()
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<(usize, usize, i64)> = self.triplets().into_iter().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(self.cols(), self.rows, &t)
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch");
        let mut t = Vec::new();
        for (j, col) in rhs.cols.iter().enumerate() {
            for &(k, v) in col {
                for &(i, w) in &self.cols[k] {
                    t.push((i, j, w * v));
                }
            }
        }
        Self::from_triplets(self.rows, rhs.cols(), &t)
    }

    /// Sparse triplet text: a `rows cols nnz` header, then `row col value` lines.
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols(), self.nnz());
        for (i, j, v) in self.triplets() {
            let _ = writeln!(s, "{i} {j} {v}");
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |l: &str| Error::Parse(format!("bad triplet line `{l}`"));
        let head = lines.next().ok_or_else(|| Error::Parse("empty matrix dump".into()))?;
        let h: Vec<usize> = head.split_whitespace().map(|t| t.parse().map_err(|_| bad(head))).collect::<Result<_>>()?;
        if h.len() != 3 {
            return Err(bad(head));
        }
        let mut t = Vec::new();
        for l in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad(l));
            }
            let i: usize = f[0].parse().map_err(|_| bad(l))?;
            let j: usize = f[1].parse().map_err(|_| bad(l))?;
            let v: i64 = f[2].parse().map_err(|_| bad(l))?;
            if i >= h[0] || j >= h[1] {
                return Err(bad(l));
            }
            t.push((i, j, v));
        }
        Ok(Self::from_triplets(h[0], h[1], &t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    pub rank: usize,
    /// Nonzero diagonal entries d1 | d2 | ... (length = rank).
    #[serde(serialize_with = "crate::simplicial::ser_bigs")]
    pub invariant_factors: Vec<BigUint>,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigUint> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(m: &SparseMatrix) -> SmithForm {
    let mut factors: Vec<BigInt> = match sparse_unit_phase(m) {
        Ok((units, rest)) => {
            let mut f = vec![BigInt::one(); units];
            f.extend(dense_snf(rest));
            f
        }
        Err(Overflow) => dense_snf(to_dense(m)),
    };
    normalize_chain(&mut factors);
    SmithForm { rank: factors.len(), invariant_factors: factors.into_iter().map(|d| d.magnitude().clone()).collect() }
}

struct Overflow;

fn col_get(col: &[(usize, i64)], r: usize) -> Option<i64> {
    col.binary_search_by_key(&r, |e| e.0).ok().map(|k| col[k].1)
}

/// Eliminates unit pivots; returns their number and the dense remainder.
fn sparse_unit_phase(m: &SparseMatrix) -> std::result::Result<(usize, Vec<Vec<BigInt>>), Overflow> {
    let nrows = m.rows;
    let mut cols = m.cols.clone();
    let mut row_cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nrows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, _) in col {
            row_cols[i].insert(j);
        }
    }
    let mut row_alive = vec![true; nrows];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..nrows).filter(|&r| !row_cols[r].is_empty()).map(|r| Reverse((row_cols[r].len(), r))).collect();
    let mut units = 0;
    let mut scratch: Vec<(usize, i64)> = Vec::new();
    while let Some(Reverse((len, r))) = heap.pop() {
        if !row_alive[r] || row_cols[r].len() != len || len == 0 {
            continue;
        }
        let pivot = row_cols[r]
            .iter()
            .copied()
            .filter(|&c| col_get(&cols[c], r).is_some_and(|v| v.abs() == 1))
            .min_by_key(|&c| (cols[c].len(), c));
        let Some(pc) = pivot else { continue };
        let p = col_get(&cols[pc], r).unwrap();
        let pcol = std::mem::take(&mut cols[pc]);
        let others: Vec<usize> = row_cols[r].iter().copied().filter(|&c| c != pc).collect();
        for c2 in others {
            let a = col_get(&cols[c2], r).unwrap();
            let f = a * p;
            // cols[c2] -= f * pcol
            scratch.clear();
            let old = std::mem::take(&mut cols[c2]);
            let (mut i, mut k) = (0, 0);
            while i < old.len() || k < pcol.len() {
                let take_old = k >= pcol.len() || (i < old.len() && old[i].0 < pcol[k].0);
                let take_new = i >= old.len() || (k < pcol.len() && pcol[k].0 < old[i].0);
                if take_old {
                    scratch.push(old[i]);
                    i += 1;
                } else if take_new {
                    let row = pcol[k].0;
                    let v = f.checked_mul(pcol[k].1).and_then(|x| 0i64.checked_sub(x)).ok_or(Overflow)?;
                    scratch.push((row, v));
                    row_cols[row].insert(c2);
                    heap.push(Reverse((row_cols[row].len(), row)));
                    k += 1;
                } else {
                    let row = old[i].0;
                    let v = f.checked_mul(pcol[k].1).and_then(|x| old[i].1.checked_sub(x)).ok_or(Overflow)?;
                    if v == 0 {
                        row_cols[row].remove(&c2);
                    } else {
                        scratch.push((row, v));
                    }
                    if row != r {
                        heap.push(Reverse((row_cols[row].len(), row)));
                    }
                    i += 1;
                    k += 1;
                }
            }
            cols[c2] = scratch.clone();
        }
        for &(row, _) in &pcol {
            row_cols[row].remove(&pc);
            if row != r && !row_cols[row].is_empty() {
                heap.push(Reverse((row_cols[row].len(), row)));
            }
        }
        debug_assert!(row_cols[r].is_empty());
        row_alive[r] = false;
        units += 1;
    }
    // dense remainder
    let live_rows: Vec<usize> = (0..nrows).filter(|&r| row_alive[r] && !row_cols[r].is_empty()).collect();
    let mut pos = vec![usize::MAX; nrows];
    for (k, &r) in live_rows.iter().enumerate() {
        pos[r] = k;
    }
    let live_cols: Vec<usize> = (0..cols.len()).filter(|&c| !cols[c].is_empty()).collect();
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (k, &c) in live_cols.iter().enumerate() {
        for &(r, v) in &cols[c] {
            dense[pos[r]][k] = BigInt::from(v);
        }
    }
    Ok((units, dense))
}

fn to_dense(m: &SparseMatrix) -> Vec<Vec<BigInt>> {
    let mut d = vec![vec![BigInt::zero(); m.cols()]; m.rows];
    for (i, j, v) in m.triplets() {
        d[i][j] = BigInt::from(v);
    }
    d
}

/// Diagonalizes a dense matrix; returns the nonzero diagonal (absolute values).
fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_nonzero(&a, t, m, t, n) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..n {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let s = &q * &row[t];
                        row[j] -= s;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // bring the smallest entry of row t / column t to the pivot
            let mut best = (a[t][t].abs(), t, t);
            for i in t + 1..m {
                if !a[i][t].is_zero() && a[i][t].abs() < best.0 {
                    best = (a[i][t].abs(), i, t);
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() && a[t][j].abs() < best.0 {
                    best = (a[t][j].abs(), t, j);
                }
            }
            let (_, bi, bj) = best;
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_nonzero(a: &[Vec<BigInt>], r0: usize, r1: usize, c0: usize, c1: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().take(r1).skip(r0) {
        for (j, v) in row.iter().enumerate().take(c1).skip(c0) {
            if v.sign() != Sign::NoSign && best.as_ref().is_none_or(|b| v.abs() < b.0) {
                let one = v.abs().is_one();
                best = Some((v.abs(), i, j));
                if one {
                    return Some((i, j));
                }
            }
        }
    }
    best.map(|b| (b.1, b.2))
}

/// Rewrites a diagonal into divisibility order via (gcd, lcm) exchanges.
fn normalize_chain(d: &mut [BigInt]) {
    d.sort();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if (&d[j] % &d[i]).is_zero() {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
}
