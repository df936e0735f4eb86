//! Enhanced states, the Khovanov boundary, and the extreme complex.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linkdiag::{KauffmanState, LinkDiagram};
use crate::simplicial::{graded_homology, HomologyProfile, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EnhancedState {
    pub state: KauffmanState,
    /// One sign per circle of the smoothing, circles numbered by smallest arc.
    pub signs: Vec<i8>,
    pub i: i64,
    pub j: i64,
}

/// Compact generator: B-set bitmask and plus-circle bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GenId {
    pub state: u64,
    pub signs: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainComplexMatrices {
    pub j: i64,
    /// Consecutive homological degrees from the lowest to the highest occupied one.
    pub degrees: Vec<i64>,
    pub generators: Vec<Vec<GenId>>,
    /// `boundaries[k]` maps degree `degrees[k]` to `degrees[k] + 1`.
    #[serde(skip)]
    pub boundaries: Vec<SparseMatrix>,
}

fn check_cap(d: &LinkDiagram, cap: usize) -> Result<()> {
    let c = d.crossing_count();
    let cap = cap.min(63);
    if c > cap {
        return Err(Error::CapExceeded { what: "crossing count", value: c, cap });
    }
    Ok(())
}

/// Homological degree of a state with B-set `mask`.
fn degree_of(d: &LinkDiagram, mask: u64) -> i64 {
    (d.writhe() - d.crossing_count() as i64) / 2 + mask.count_ones() as i64
}

pub fn j_min_formula(d: &LinkDiagram) -> i64 {
    d.crossing_count() as i64 - 3 * d.negative_count() as i64 - d.circle_count(0) as i64
}

pub fn j_min_bruteforce(d: &LinkDiagram, cap: usize) -> Result<i64> {
    check_cap(d, cap)?;
    let w = d.writhe();
    Ok((0..1u64 << d.crossing_count())
        .map(|m| w + degree_of(d, m) - d.circle_count(m) as i64)
        .min()
        .unwrap())
}

impl EnhancedState {
    pub fn new(d: &LinkDiagram, id: GenId) -> Self {
        let c = d.crossing_count();
        let s = d.circle_count(id.state);
        let signs: Vec<i8> = (0..s).map(|k| if id.signs >> k & 1 == 1 { 1 } else { -1 }).collect();
        let tau: i64 = signs.iter().map(|&x| x as i64).sum();
        let i = degree_of(d, id.state);
        EnhancedState { state: KauffmanState::from_mask(c, id.state), signs, i, j: d.writhe() + i + tau }
    }

    pub fn id(&self) -> GenId {
        let signs = self.signs.iter().enumerate().filter(|(_, &s)| s > 0).fold(0u64, |m, (k, _)| m | 1 << k);
        GenId { state: self.state.mask(), signs }
    }

    pub fn tau(&self) -> i64 {
        self.signs.iter().map(|&x| x as i64).sum()
    }
}

/// Generators with quantum grading `j`, grouped by homological degree and
/// sorted by `(state mask, sign mask)`.
pub fn generators_at(d: &LinkDiagram, j: i64, cap: usize) -> Result<BTreeMap<i64, Vec<GenId>>> {
    check_cap(d, cap)?;
    let w = d.writhe();
    let mut out: BTreeMap<i64, Vec<GenId>> = BTreeMap::new();
    for mask in 0..1u64 << d.crossing_count() {
        let i = degree_of(d, mask);
        let s = d.circle_count(mask) as i64;
        if w + i - s > j || w + i + s < j {
            continue;
        }
        let tau = j - w - i;
        if (tau + s) % 2 != 0 {
            continue;
        }
        let plus = ((tau + s) / 2) as u32;
        let list = out.entry(i).or_default();
        for signs in masks_with_popcount(s as u32, plus) {
            list.push(GenId { state: mask, signs });
        }
    }
    out.retain(|_, v| !v.is_empty());
    Ok(out)
}

/// All `bits`-bit masks with `ones` bits set, increasing.
fn masks_with_popcount(bits: u32, ones: u32) -> Vec<u64> {
    if ones > bits {
        return Vec::new();
    }
    if ones == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut m: u64 = (1u64 << ones) - 1;
    let limit: u64 = if bits == 64 { u64::MAX } else { 1u64 << bits };
    while m < limit {
        out.push(m);
        // Gosper's hack
        let c = m & m.wrapping_neg();
        let r = m + c;
        if r == 0 {
            break;
        }
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

pub fn enhanced_states_at(d: &LinkDiagram, j: i64, cap: usize) -> Result<Vec<EnhancedState>> {
    Ok(generators_at(d, j, cap)?.into_values().flatten().map(|id| EnhancedState::new(d, id)).collect())
}

/// `(S : T)`: ±1 when `T` is adjacent to `S` through one of the six
/// permitted circle transitions, 0 otherwise.
pub fn incidence(d: &LinkDiagram, s: &EnhancedState, t: &EnhancedState) -> Result<i8> {
    let c = d.crossing_count();
    let (ms, mt) = (s.state.mask(), t.state.mask());
    if s.state.labels.len() != c
        || t.state.labels.len() != c
        || s.signs.len() != d.circle_count(ms)
        || t.signs.len() != d.circle_count(mt)
    {
        return Err(Error::DifferentDiagram);
    }
    let diff = ms ^ mt;
    if diff.count_ones() != 1 || ms & diff != 0 {
        return Ok(0);
    }
    if t.i != s.i + 1 || t.j != s.j {
        return Ok(0);
    }
    let x = diff.trailing_zeros() as usize;
    let (_, cs) = d.circle_labels(ms);
    let (_, ct) = d.circle_labels(mt);
    let arcs_of = |circ: &[usize], k: usize| -> BTreeSet<usize> { (1..circ.len()).filter(|&a| circ[a] == k).collect() };
    let xarcs: BTreeSet<usize> = d.crossings()[x].arcs.iter().copied().collect();
    let s_touched: BTreeSet<usize> = xarcs.iter().map(|&a| cs[a]).collect();
    let t_touched: BTreeSet<usize> = xarcs.iter().map(|&a| ct[a]).collect();
    // common circles keep their signs
    for k in 0..t.signs.len() {
        if t_touched.contains(&k) {
            continue;
        }
        let arcs = arcs_of(&ct, k);
        let a = *arcs.iter().next().unwrap();
        if arcs_of(&cs, cs[a]) != arcs || s.signs[cs[a]] != t.signs[k] {
            return Ok(0);
        }
    }
    let before: Vec<i8> = s_touched.iter().map(|&k| s.signs[k]).collect();
    let mut after: Vec<i8> = t_touched.iter().map(|&k| t.signs[k]).collect();
    after.sort_unstable();
    let allowed = match (before.len(), after.len()) {
        (2, 1) => {
            let plus = before.iter().filter(|&&v| v > 0).count();
            (plus == 2 && after[0] == 1) || (plus == 1 && after[0] == -1)
        }
        (1, 2) => (before[0] == 1 && after == [-1, 1]) || (before[0] == -1 && after == [-1, -1]),
        _ => false,
    };
    if !allowed {
        return Ok(0);
    }
    Ok(boundary_sign(d, ms, x))
}

/// `(−1)^k`, `k` = B-labelled crossings of the source state after `x`.
fn boundary_sign(d: &LinkDiagram, mask: u64, x: usize) -> i8 {
    let rx = d.rank_of(x);
    let k = (0..d.crossing_count()).filter(|&y| mask >> y & 1 == 1 && d.rank_of(y) > rx).count();
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

struct CircleInfo {
    circle_of: Vec<usize>,
    count: usize,
}

pub fn complex_at_j(d: &LinkDiagram, j: i64, cap: usize) -> Result<ChainComplexMatrices> {
    let by_deg = generators_at(d, j, cap)?;
    let (lo, hi) = match (by_deg.keys().next(), by_deg.keys().last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Ok(ChainComplexMatrices { j, degrees: Vec::new(), generators: Vec::new(), boundaries: Vec::new() }),
    };
    let degrees: Vec<i64> = (lo..=hi).collect();
    let generators: Vec<Vec<GenId>> = degrees.iter().map(|i| by_deg.get(i).cloned().unwrap_or_default()).collect();
    let index: Vec<HashMap<GenId, usize>> =
        generators.iter().map(|g| g.iter().enumerate().map(|(k, &id)| (id, k)).collect()).collect();
    let mut cache: HashMap<u64, CircleInfo> = HashMap::new();
    let load = |cache: &mut HashMap<u64, CircleInfo>, m: u64| {
        cache.entry(m).or_insert_with(|| {
            let (count, circle_of) = d.circle_labels(m);
            CircleInfo { circle_of, count }
        });
    };
    let c = d.crossing_count();
    let mut boundaries = Vec::with_capacity(degrees.len());
    for k in 0..degrees.len() {
        let rows = generators.get(k + 1).map_or(0, |g| g.len());
        let mut trip = Vec::new();
        for (col, g) in generators[k].iter().enumerate() {
            for x in 0..c {
                if g.state >> x & 1 == 1 {
                    continue;
                }
                let tmask = g.state | 1 << x;
                load(&mut cache, g.state);
                load(&mut cache, tmask);
                let (si, ti) = (&cache[&g.state], &cache[&tmask]);
                let xarcs = d.crossings()[x].arcs;
                let s_t: BTreeSet<usize> = xarcs.iter().map(|&a| si.circle_of[a]).collect();
                let t_t: BTreeSet<usize> = xarcs.iter().map(|&a| ti.circle_of[a]).collect();
                // signs of untouched target circles come from the matching source circle
                let mut base = 0u64;
                let mut rep = vec![usize::MAX; ti.count];
                for a in 1..ti.circle_of.len() {
                    let t = ti.circle_of[a];
                    if rep[t] == usize::MAX {
                        rep[t] = a;
                    }
                }
                for (t, &a) in rep.iter().enumerate() {
                    if !t_t.contains(&t) && g.signs >> si.circle_of[a] & 1 == 1 {
                        base |= 1 << t;
                    }
                }
                let sb: Vec<bool> = s_t.iter().map(|&k| g.signs >> k & 1 == 1).collect();
                let tt: Vec<usize> = t_t.iter().copied().collect();
                let mut targets: Vec<u64> = Vec::new();
                match (sb.len(), tt.len()) {
                    (2, 1) => match (sb[0], sb[1]) {
                        (true, true) => targets.push(base | 1 << tt[0]),
                        (false, false) => {}
                        _ => targets.push(base),
                    },
                    (1, 2) => {
                        if sb[0] {
                            targets.push(base | 1 << tt[0]);
                            targets.push(base | 1 << tt[1]);
                        } else {
                            targets.push(base);
                        }
                    }
                    _ => unreachable!("one flip changes the circle count by one"),
                }
                let sign = boundary_sign(d, g.state, x) as i64;
                for signs in targets {
                    let id = GenId { state: tmask, signs };
                    let row = index.get(k + 1).and_then(|ix| ix.get(&id)).copied();
                    let row = row.expect("adjacent generator has the same quantum grading");
                    trip.push((row, col, sign));
                }
            }
        }
        boundaries.push(SparseMatrix::from_triplets(rows, generators[k].len(), &trip));
    }
    Ok(ChainComplexMatrices { j, degrees, generators, boundaries })
}

pub fn extreme_complex(d: &LinkDiagram, cap: usize) -> Result<ChainComplexMatrices> {
    complex_at_j(d, j_min_formula(d), cap)
}

impl ChainComplexMatrices {
    pub fn check_d_squared(&self) -> Result<()> {
        for k in 0..self.boundaries.len().saturating_sub(1) {
            if !self.boundaries[k + 1].mul(&self.boundaries[k]).is_zero() {
                return Err(Error::NotAComplex(self.degrees[k] + 1, self.degrees[k]));
            }
        }
        Ok(())
    }

    pub fn homology(&self) -> Result<HomologyProfile> {
        self.check_d_squared()?;
        let sizes: BTreeMap<i64, usize> = self.degrees.iter().zip(&self.generators).map(|(&i, g)| (i, g.len())).collect();
        let maps: Vec<(i64, i64, &SparseMatrix)> =
            self.degrees.iter().zip(&self.boundaries).map(|(&i, m)| (i, i + 1, m)).collect();
        Ok(graded_homology(&sizes, &maps))
    }

    pub fn generator_count(&self) -> usize {
        self.generators.iter().map(|g| g.len()).sum()
    }

    /// `(degree, triplet text)` per boundary matrix.
    pub fn dump(&self) -> Vec<(i64, String)> {
        self.degrees.iter().zip(&self.boundaries).map(|(&i, m)| (i, m.to_triplet_text())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::parse_pd;

    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

    #[test]
    fn trefoil_extreme() {
        let d = parse_pd(TREFOIL, false).unwrap();
        assert_eq!(j_min_formula(&d), -9);
        assert_eq!(j_min_bruteforce(&d, 16).unwrap(), -9);
        let h = extreme_complex(&d, 16).unwrap().homology().unwrap();
        assert_eq!(h.betti_numbers(), vec![(-3, 1)]);
        assert!(h.is_torsion_free());
    }

    #[test]
    fn unknot_states() {
        let u = LinkDiagram::unknot();
        let lo = enhanced_states_at(&u, -1, 16).unwrap();
        assert_eq!(lo.len(), 1);
        assert_eq!(lo[0].signs, vec![-1]);
        let hi = enhanced_states_at(&u, 1, 16).unwrap();
        assert_eq!(hi[0].signs, vec![1]);
        assert_eq!(j_min_formula(&u), -1);
        let cx = extreme_complex(&u, 16).unwrap();
        assert_eq!(cx.degrees, vec![0]);
        assert_eq!(cx.homology().unwrap().betti_numbers(), vec![(0, 1)]);
    }

    #[test]
    fn matrix_agrees_with_incidence() {
        let d = parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]", false).unwrap();
        for j in [-5, -3, -1, 1, 3, 5] {
            let cx = complex_at_j(&d, j, 16).unwrap();
            for k in 0..cx.degrees.len().saturating_sub(1) {
                for (col, &s) in cx.generators[k].iter().enumerate() {
                    for (row, &t) in cx.generators[k + 1].iter().enumerate() {
                        let es = EnhancedState::new(&d, s);
                        let et = EnhancedState::new(&d, t);
                        assert_eq!(incidence(&d, &es, &et).unwrap() as i64, cx.boundaries[k].get(row, col));
                    }
                }
            }
            cx.check_d_squared().unwrap();
        }
    }

    #[test]
    fn incidence_trivial_cases() {
        let d = parse_pd(TREFOIL, false).unwrap();
        let s = EnhancedState::new(&d, GenId { state: 0, signs: 0 });
        assert_eq!(incidence(&d, &s, &s).unwrap(), 0);
        let far = EnhancedState::new(&d, GenId { state: 0b011, signs: 0 });
        assert_eq!(incidence(&d, &s, &far).unwrap(), 0);
        let other = EnhancedState { signs: vec![1], ..s.clone() };
        assert_eq!(incidence(&d, &other, &s), Err(Error::DifferentDiagram));
    }

    #[test]
    fn gosper() {
        assert_eq!(masks_with_popcount(4, 2), vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(masks_with_popcount(3, 0), vec![0]);
        assert_eq!(masks_with_popcount(2, 3), Vec::<u64>::new());
    }
}
