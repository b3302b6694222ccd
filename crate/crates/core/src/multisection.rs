//! The pieces `X_r` as sets of unit subcubes, their cover and disjointness,
//! the closed formula for the intersections `X_I`, and a brute-force face
//! oracle for those intersections.

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::perm::for_each_distinct_permutation;
use crate::torus::{Face, SubcubeWord, TorusParams};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashSet};

/// The unit subcubes forming one piece `X_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceSet {
    pub r: u32,
    pub cubes: BTreeSet<SubcubeWord>,
}

impl PieceSet {
    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }
}

/// Whether the word (already translated by `-r`) belongs to `X_0`.
fn in_base_piece(params: &TorusParams, w: &[u8]) -> bool {
    let count_le = |s: u8| w.iter().filter(|&&c| c <= s).count();
    if params.is_odd() {
        (0..params.k as u8 - 1).all(|s| count_le(s) >= 2 * s as usize + 2)
    } else {
        count_le(0) >= 2 && count_le(1) >= 3
    }
}

/// The piece `X_r`: words with at least `2s+2` letters `<= r+s` (relative to
/// `r`) for `s = 0..k-2`. For `T^4` the hand-listed trisection is used.
pub fn build_piece(params: &TorusParams, r: u32) -> Result<PieceSet> {
    check_supported(params)?;
    let k = params.k;
    let total = (k as usize).pow(params.n as u32);
    let cubes = (0..total)
        .map(|idx| SubcubeWord::from_index(idx, k, params.n))
        .filter(|w| in_base_piece(params, &w.translate(k, k - r % k).w))
        .collect();
    Ok(PieceSet { r: r % k, cubes })
}

fn check_supported(params: &TorusParams) -> Result<()> {
    if params.is_odd() || *params == TorusParams::four() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("no pieces for n = {}, k = {}", params.n, params.k)))
    }
}

/// Label of every unit subcube (dense index) with the piece containing it.
/// Fails if some cube lies in zero or several pieces.
pub fn piece_labels(params: &TorusParams) -> Result<CubeLabels> {
    let report = verify_cover(params)?;
    if !report.ok() {
        return Err(Error::Consistency(format!(
            "pieces do not partition the cubes: {} uncovered, {} repeated",
            report.uncovered.len(),
            report.repeated.len()
        )));
    }
    Ok(report.labels)
}

/// Piece membership of each subcube of a cubical torus `(R/kZ)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeLabels {
    pub n: usize,
    pub k: u32,
    pub labels: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub sizes: Vec<usize>,
    pub uncovered: Vec<SubcubeWord>,
    pub repeated: Vec<SubcubeWord>,
    pub labels: CubeLabels,
}

impl CoverReport {
    pub fn ok(&self) -> bool {
        self.uncovered.is_empty() && self.repeated.is_empty()
    }
}

/// Checks that the pieces cover every subcube exactly once.
pub fn verify_cover(params: &TorusParams) -> Result<CoverReport> {
    check_supported(params)?;
    let k = params.k;
    let total = (k as usize).pow(params.n as u32);
    let mut owners = vec![0u8; total];
    let mut labels = vec![u8::MAX; total];
    let mut sizes = Vec::new();
    for r in 0..k {
        let piece = build_piece(params, r)?;
        sizes.push(piece.len());
        for w in &piece.cubes {
            let idx = w.index(k);
            owners[idx] += 1;
            labels[idx] = r as u8;
        }
    }
    let mut uncovered = Vec::new();
    let mut repeated = Vec::new();
    for (idx, &c) in owners.iter().enumerate() {
        match c {
            0 => uncovered.push(SubcubeWord::from_index(idx, k, params.n)),
            1 => {}
            _ => repeated.push(SubcubeWord::from_index(idx, k, params.n)),
        }
    }
    Ok(CoverReport { sizes, uncovered, repeated, labels: CubeLabels { n: params.n, k, labels } })
}

/// A set of closed unit faces, all of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    pub n: usize,
    pub dim: usize,
    pub faces: HashSet<u64>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, f: &Face) -> bool {
        self.faces.contains(&f.key())
    }

    /// Faces in sorted order.
    pub fn sorted(&self) -> Vec<Face> {
        let mut keys: Vec<u64> = self.faces.iter().copied().collect();
        keys.sort_unstable();
        keys.into_iter().map(|key| Face::from_key(key, self.n)).collect()
    }

    /// Elements of `self` not in `other`.
    pub fn difference(&self, other: &FaceSet) -> Vec<Face> {
        let mut keys: Vec<u64> = self.faces.difference(&other.faces).copied().collect();
        keys.sort_unstable();
        keys.into_iter().map(|key| Face::from_key(key, self.n)).collect()
    }
}

/// A product of integer singletons `(v, v)` and integer intervals `(lo, hi)`.
pub type UnitTerm = Vec<(i32, i32)>;

/// The terms `C_{I,s}` (one per `s`) whose orbits make up `X_I`.
pub fn formula_terms(params: &TorusParams, set: &IndexSet) -> Result<Vec<UnitTerm>> {
    params.require_odd()?;
    if set.k != params.k {
        return Err(Error::InvalidIndexSet(format!("index set lives in Z_{}, torus has k = {}", set.k, params.k)));
    }
    if !set.is_simple() {
        return Err(Error::InvalidIndexSet(format!("{set} is not simple; canonicalize first")));
    }
    let k = params.k as i32;
    let idx: Vec<i32> = set.elements.iter().map(|&e| e as i32).collect();
    let ell = idx.len();
    let next = |t: usize| if t + 1 < ell { idx[t + 1] } else { idx[0] + k };
    let mut terms = Vec::with_capacity(ell);
    for s in 0..ell {
        let mut term = Vec::with_capacity(params.n);
        for (t, &i) in idx.iter().enumerate() {
            if t != s {
                term.push((i, i));
            }
            let upper = next(t);
            for j in 1..upper - i {
                term.push((i, i + j));
                term.push((i, i + j));
            }
            term.push((i, upper));
        }
        debug_assert_eq!(term.len(), params.n);
        terms.push(term);
    }
    Ok(terms)
}

/// The hand-listed intersections for the trisection of `T^4`.
pub fn t4_terms(set: &IndexSet) -> Result<Vec<UnitTerm>> {
    let pt = |v: i32| (v, v);
    let iv = |a: i32, b: i32| (a, b);
    match set.elements.as_slice() {
        [0] => Ok(vec![vec![iv(0, 1), iv(0, 1), iv(0, 2), iv(0, 3)]]),
        [0, 1] => Ok(vec![
            vec![iv(0, 1), pt(1), iv(1, 2), iv(1, 3)],
            vec![pt(0), iv(0, 1), iv(1, 2), iv(1, 2)],
        ]),
        [0, 1, 2] => Ok(vec![
            vec![iv(0, 1), iv(1, 2), pt(0), pt(2)],
            vec![iv(0, 1), iv(2, 3), pt(1), pt(2)],
            vec![iv(1, 2), iv(2, 3), pt(0), pt(1)],
        ]),
        _ => Err(Error::Unsupported(format!("no T^4 data for {set}"))),
    }
}

/// Materializes the orbits of `terms` as a set of unit faces.
pub fn expand_terms(n: usize, k: u32, terms: &[UnitTerm]) -> Result<FaceSet> {
    let mut faces = HashSet::new();
    let mut dim = None;
    for term in terms {
        let d = term.iter().filter(|(lo, hi)| hi > lo).count();
        if *dim.get_or_insert(d) != d {
            return Err(Error::Consistency("terms of different dimensions".into()));
        }
        // Every choice of unit sub-interval per factor, then every distinct
        // rearrangement of the resulting codes.
        let mut choices: Vec<Vec<u8>> = vec![Vec::new()];
        for &(lo, hi) in term {
            let opts: Vec<u8> = if lo == hi {
                vec![2 * lo.rem_euclid(k as i32) as u8]
            } else {
                (lo..hi).map(|v| 2 * v.rem_euclid(k as i32) as u8 + 1).collect()
            };
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    opts.iter().map(move |&o| {
                        let mut c = c.clone();
                        c.push(o);
                        c
                    })
                })
                .collect();
        }
        let sorted: BTreeSet<Vec<u8>> = choices
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        for codes in sorted {
            for_each_distinct_permutation(&codes, |p| {
                faces.insert(Face { codes: p.to_vec() }.key());
            });
        }
    }
    Ok(FaceSet { n, dim: dim.unwrap_or(0), faces })
}

/// `X_I` from the closed formula, as unit faces of dimension `n + 1 - |I|`
/// (for the full index set, the faces of the central `k`-manifold).
pub fn formula_xi(params: &TorusParams, set: &IndexSet) -> Result<FaceSet> {
    let terms = if params.is_odd() { formula_terms(params, set)? } else { t4_terms(set)? };
    expand_terms(params.n, params.k, &terms)
}

impl CubeLabels {
    /// Whether the closed face lies in some cube carrying `label`.
    pub fn face_in(&self, codes: &[u8], label: u8) -> bool {
        let k = self.k as usize;
        let points: Vec<usize> = (0..self.n).filter(|&i| codes[i].is_multiple_of(2)).collect();
        let base: Vec<usize> = codes.iter().map(|&c| (c / 2) as usize).collect();
        for side in 0u32..(1 << points.len()) {
            let mut idx = 0usize;
            for (i, &b) in base.iter().enumerate() {
                let v = match points.iter().position(|&p| p == i) {
                    Some(bit) if side & (1 << bit) != 0 => (b + k - 1) % k,
                    _ => b,
                };
                idx = idx * k + v;
            }
            if self.labels[idx] == label {
                return true;
            }
        }
        false
    }

    /// All `d`-faces of the grid lying in every piece of `labels`.
    pub fn common_faces(&self, labels: &[u8], d: usize) -> FaceSet {
        let n = self.n;
        let k = self.k as usize;
        let total = k.pow(n as u32);
        let masks: Vec<u32> = (0u32..(1 << n)).filter(|m| m.count_ones() as usize == d).collect();
        let faces: HashSet<u64> = (0..total)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let word = SubcubeWord::from_index(idx, self.k, n);
                let mut found = Vec::new();
                for &mask in &masks {
                    let codes: Vec<u8> = (0..n)
                        .map(|i| if mask & (1 << i) != 0 { 2 * word.w[i] + 1 } else { 2 * word.w[i] })
                        .collect();
                    if labels.iter().all(|&l| self.face_in(&codes, l)) {
                        found.push(Face { codes }.key());
                    }
                }
                found
            })
            .collect();
        FaceSet { n, dim: d, faces }
    }

    /// Largest dimension of a face common to all the given pieces.
    pub fn intersection_dim(&self, labels: &[u8]) -> Option<usize> {
        (0..=self.n).rev().find(|&d| !self.common_faces(labels, d).is_empty())
    }
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub faces: FaceSet,
    /// No face of dimension one higher lies in every piece.
    pub next_dim_empty: bool,
}

/// `X_I` by brute force: the `(n+1-|I|)`-faces lying in every `X_i`.
pub fn oracle_xi(params: &TorusParams, set: &IndexSet) -> Result<OracleReport> {
    let labels = piece_labels(params)?;
    let d = params.n + 1 - set.len().min(params.n + 1);
    let picked: Vec<u8> = set.elements.iter().map(|&e| e as u8).collect();
    let faces = labels.common_faces(&picked, d);
    let next_dim_empty = d + 1 > params.n || labels.common_faces(&picked, d + 1).is_empty();
    Ok(OracleReport { faces, next_dim_empty })
}

/// Dimension of `X_0 ∩ X_{k-1}` for the failed construction on `(R/2Z)^n`
/// where `X_i` consists of the cubes with `2i` or `2i+1` coordinates in
/// `[1,2]`.
pub fn negative_handle_partition(n: usize) -> Result<Option<usize>> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::InvalidParams(format!("needs odd n >= 3, got {n}")));
    }
    let k = n.div_ceil(2);
    let labels: Vec<u8> = (0..1usize << n)
        .map(|idx| (idx.count_ones() / 2) as u8)
        .collect();
    let cubes = CubeLabels { n, k: 2, labels };
    Ok(cubes.intersection_dim(&[0, (k - 1) as u8]))
}

/// Dimension of `X_a ∩ X_b` for the slabs `5i <= x_1 + ... + x_5 <= 5(i+1)`
/// of the cube `[0,3]^5` with opposite faces identified.
///
/// A point whose coordinates equal `0 ≡ 3` in `q` places and lie strictly
/// inside `(0,3)` elsewhere has sums `s + 3j`, `0 <= j <= q`, where `s` is the
/// sum of its interior coordinates.
pub fn negative_sum_decomposition(a: u32, b: u32) -> Result<Option<usize>> {
    const N: i64 = 5;
    const K: i64 = 3;
    if a >= 3 || b >= 3 {
        return Err(Error::InvalidParams("slab indices lie in 0..3".into()));
    }
    let slab = |i: u32| (N * i as i64, N * (i as i64 + 1));
    let mut best: Option<usize> = None;
    for q in 0..=N {
        let free = N - q;
        let (s_lo, s_hi) = (0, K * free);
        for j in 0..=q {
            for jj in 0..=q {
                let (a_lo, a_hi) = slab(a);
                let (b_lo, b_hi) = slab(b);
                let lo = (a_lo - K * j).max(b_lo - K * jj);
                let hi = (a_hi - K * j).min(b_hi - K * jj);
                let dim = if free == 0 {
                    (lo <= 0 && 0 <= hi).then_some(0)
                } else if lo.max(s_lo) < hi.min(s_hi) {
                    Some(free as usize)
                } else if lo == hi && s_lo < lo && lo < s_hi {
                    Some(free as usize - 1)
                } else {
                    None
                };
                if let Some(d) = dim {
                    best = Some(best.map_or(d, |x: usize| x.max(d)));
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t3_piece_is_four_cubes() {
        let t3 = TorusParams::odd(2).unwrap();
        let x0 = build_piece(&t3, 0).unwrap();
        let words: Vec<Vec<u8>> = x0.cubes.iter().map(|c| c.w.clone()).collect();
        assert_eq!(words, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }

    #[test]
    fn t5_formula_for_pair() {
        let t5 = TorusParams::odd(3).unwrap();
        let set = IndexSet::new(3, [0, 1]).unwrap();
        let terms = formula_terms(&t5, &set).unwrap();
        assert_eq!(terms[0], vec![(0, 1), (1, 1), (1, 2), (1, 2), (1, 3)]);
        assert_eq!(terms[1], vec![(0, 0), (0, 1), (1, 2), (1, 2), (1, 3)]);
    }

    #[test]
    fn t4_data_partitions() {
        let report = verify_cover(&TorusParams::four()).unwrap();
        assert!(report.ok());
        assert_eq!(report.sizes, vec![27, 27, 27]);
    }

    #[test]
    fn sum_slabs() {
        assert_eq!(negative_sum_decomposition(0, 2).unwrap(), Some(3));
        assert_eq!(negative_sum_decomposition(0, 1).unwrap(), Some(4));
    }
}
