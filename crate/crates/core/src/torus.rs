//! Exact coordinates on the torus `(R/kZ)^n`.
//!
//! Every coordinate is an integer number of sixths, reduced modulo `6k`.
//! Intervals are arcs of the circle `R/kZ`, stored as a start point and a
//! length so that arcs passing through `0 = k` need no special casing.

use crate::error::{Error, Result};
use crate::matching::{has_perfect_matching, max_weight_assignment};
use std::fmt;

/// Number of lattice steps per unit length.
pub const SCALE: i32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusParams {
    pub k: u32,
    pub n: usize,
}

impl TorusParams {
    /// The odd-dimensional torus `T^{2k-1}` carved into `k` pieces.
    pub fn odd(k: u32) -> Result<Self> {
        if !(2..=8).contains(&k) {
            return Err(Error::InvalidParams(format!("k must lie in 2..=8, got {k}")));
        }
        Ok(Self { k, n: 2 * k as usize - 1 })
    }

    /// Parameters from the dimension of the torus. Odd `n` gives the general
    /// case; `n = 4` gives the hand-listed trisection of `T^4`.
    pub fn from_dim(n: usize) -> Result<Self> {
        match n {
            4 => Ok(Self::four()),
            n if n % 2 == 1 && n >= 3 => Self::odd(n.div_ceil(2) as u32),
            _ => Err(Error::InvalidParams(format!("unsupported dimension {n}"))),
        }
    }

    /// `T^4 = (R/3Z)^4`, trisected.
    pub fn four() -> Self {
        Self { k: 3, n: 4 }
    }

    pub fn new(k: u32, n: usize) -> Result<Self> {
        if (k, n) == (3, 4) {
            return Ok(Self::four());
        }
        let p = Self::odd(k)?;
        if p.n != n {
            return Err(Error::InvalidParams(format!("n = {n} does not match k = {k}")));
        }
        Ok(p)
    }

    pub fn is_odd(&self) -> bool {
        self.n == 2 * self.k as usize - 1
    }

    /// Circumference of each circle factor in lattice steps.
    pub fn modulus(&self) -> i32 {
        SCALE * self.k as i32
    }

    pub fn require_odd(&self) -> Result<()> {
        if self.is_odd() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("operation needs n = 2k-1, got n = {}, k = {}", self.n, self.k)))
        }
    }
}

/// A point of `T^n` in sixths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScaledPoint {
    pub coords: Vec<i32>,
}

impl ScaledPoint {
    pub fn new(params: &TorusParams, coords: Vec<i32>) -> Result<Self> {
        if coords.len() != params.n {
            return Err(Error::InvalidParams(format!(
                "point has {} coordinates, expected {}",
                coords.len(),
                params.n
            )));
        }
        let m = params.modulus();
        Ok(Self { coords: coords.into_iter().map(|c| c.rem_euclid(m)).collect() })
    }

    pub fn is_diagonal(&self) -> bool {
        self.coords.windows(2).all(|w| w[0] == w[1])
    }

    /// Adds `t` whole units to every coordinate.
    pub fn translate(&self, params: &TorusParams, t: i32) -> Self {
        let m = params.modulus();
        Self { coords: self.coords.iter().map(|c| (c + SCALE * t).rem_euclid(m)).collect() }
    }
}

/// Sorted form of a point together with the permutation used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monotone {
    pub point: ScaledPoint,
    /// `point.coords[j] == input.coords[perm[j]]`.
    pub perm: Vec<usize>,
    pub diagonal: bool,
}

/// Stable sort of the reduced coordinates. Representatives lie in `[0, 6k)`,
/// so the output satisfies `x_1 <= ... <= x_n <= x_1 + k`.
pub fn monotonic_sort(x: &ScaledPoint) -> Monotone {
    let mut perm: Vec<usize> = (0..x.coords.len()).collect();
    perm.sort_by_key(|&i| (x.coords[i], i));
    let point = ScaledPoint { coords: perm.iter().map(|&i| x.coords[i]).collect() };
    let diagonal = point.is_diagonal();
    Monotone { point, perm, diagonal }
}

/// `x_index` of the periodic extension `x_{i+n} = x_i + k` (1-based indices,
/// result in sixths, unreduced).
pub fn periodic_extend(params: &TorusParams, x: &Monotone, index: i64) -> Result<i64> {
    if x.diagonal {
        return Err(Error::DiagonalPoint);
    }
    let n = x.point.coords.len() as i64;
    let shifted = index - 1;
    let wraps = shifted.div_euclid(n);
    let pos = shifted.rem_euclid(n) as usize;
    Ok(x.point.coords[pos] as i64 + wraps * params.modulus() as i64)
}

/// Cutoff indices `(a_r, b_r)`: `a_r` is the least `a` with `x_{a+1} >= r`,
/// `b_r` the least `b` with `x_{b+1} > r`.
pub fn cutoff_indices(params: &TorusParams, x: &Monotone, r: i64) -> Result<(i64, i64)> {
    if x.diagonal {
        return Err(Error::DiagonalPoint);
    }
    let n = x.point.coords.len() as i64;
    let m = params.modulus() as i64;
    let target = SCALE as i64 * r;
    let wraps = target.div_euclid(m);
    let t = target.rem_euclid(m);
    let below = x.point.coords.iter().filter(|&&c| (c as i64) < t).count() as i64;
    let at_most = x.point.coords.iter().filter(|&&c| (c as i64) <= t).count() as i64;
    Ok((wraps * n + below, wraps * n + at_most))
}

/// Membership in the piece `X_r` via cutoff indices.
pub fn in_piece(params: &TorusParams, x: &ScaledPoint, r: i64) -> Result<bool> {
    params.require_odd()?;
    let mono = monotonic_sort(x);
    let m = params.modulus() as i64;
    if mono.diagonal {
        let offset = (mono.point.coords[0] as i64 - SCALE as i64 * r).rem_euclid(m);
        return Ok(offset <= SCALE as i64);
    }
    let (a_r, _) = cutoff_indices(params, &mono, r)?;
    for s in 0..params.k as i64 {
        let (_, b) = cutoff_indices(params, &mono, r + s)?;
        if b < a_r + 2 * s {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Factors of the orbit box describing `X_r` (a single group).
pub fn piece_factors(params: &TorusParams, r: i64) -> Vec<Factor> {
    let r = r as i32;
    let mut out = Vec::with_capacity(params.n);
    if params.is_odd() {
        for j in 1..params.k as i32 {
            out.push(Factor::units(r, r + j));
            out.push(Factor::units(r, r + j));
        }
        out.push(Factor::units(r, r + params.k as i32));
    } else {
        out.push(Factor::units(r, r + 1));
        out.push(Factor::units(r, r + 1));
        out.push(Factor::units(r, r + 2));
        out.push(Factor::units(r, r + 3));
    }
    out.into_iter().map(|f| f.reduced(params)).collect()
}

/// Membership in `X_r` by matching coordinates against its box factors.
pub fn in_piece_box(params: &TorusParams, x: &ScaledPoint, r: i64) -> bool {
    let factors = piece_factors(params, r);
    point_in_orbit(params, &x.coords, &factors)
}

/// Whether some permutation of `coords` lies in the product of `factors`.
pub fn point_in_orbit(params: &TorusParams, coords: &[i32], factors: &[Factor]) -> bool {
    let m = params.modulus();
    let adj: Vec<u64> = factors
        .iter()
        .map(|f| {
            coords
                .iter()
                .enumerate()
                .filter(|(_, &c)| f.contains_value(c, m))
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    has_perfect_matching(&adj)
}

/// The first piece on which cutoff membership and box membership disagree.
pub fn membership_disagreement(params: &TorusParams, coords: &[i32]) -> Result<Option<i64>> {
    let x = ScaledPoint::new(params, coords.to_vec())?;
    for r in 0..params.k as i64 {
        if in_piece(params, &x, r)? != in_piece_box(params, &x, r) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Lattice points of `T^n` (in sixths) where the two membership tests
/// disagree, over the whole lattice. At most `limit` are returned.
pub fn sweep_membership(params: &TorusParams, limit: usize) -> Result<(u64, Vec<Vec<i32>>)> {
    use rayon::prelude::*;
    let m = params.modulus() as u64;
    let total = m
        .checked_pow(params.n as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::Unsupported(format!("lattice of T^{} is too large to sweep", params.n)))?;
    let bad: Vec<Vec<i32>> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut coords = vec![0i32; params.n];
            for c in coords.iter_mut().rev() {
                *c = (idx % m) as i32;
                idx /= m;
            }
            match membership_disagreement(params, &coords) {
                Ok(None) => None,
                _ => Some(coords),
            }
        })
        .collect();
    Ok((total, bad.into_iter().take(limit).collect()))
}

/// A closed arc of the circle `R/kZ`: a single point when `len == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub lo: i32,
    pub len: i32,
}

impl Factor {
    pub fn point(v: i32) -> Self {
        Self { lo: v, len: 0 }
    }

    /// The arc from `lo` to `hi` (sixths, `lo < hi`).
    pub fn interval(lo: i32, hi: i32) -> Self {
        debug_assert!(hi > lo);
        Self { lo, len: hi - lo }
    }

    /// The arc between two whole-unit endpoints.
    pub fn units(lo: i32, hi: i32) -> Self {
        Self::interval(SCALE * lo, SCALE * hi)
    }

    pub fn unit_point(v: i32) -> Self {
        Self::point(SCALE * v)
    }

    pub fn reduced(self, params: &TorusParams) -> Self {
        let m = params.modulus();
        Self { lo: self.lo.rem_euclid(m), len: self.len.min(m) }
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.len
    }

    pub fn is_point(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        usize::from(self.len > 0)
    }

    pub fn contains_value(&self, v: i32, m: i32) -> bool {
        self.len >= m || (v - self.lo).rem_euclid(m) <= self.len
    }

    /// Arc containment on the circle of circumference `m`.
    pub fn contains(&self, other: &Factor, m: i32) -> bool {
        if self.len >= m {
            return true;
        }
        if other.len > self.len {
            return false;
        }
        (other.lo - self.lo).rem_euclid(m) + other.len <= self.len
    }

    /// Dimension of the intersection of two arcs, `None` when disjoint.
    pub fn meet_dim(&self, other: &Factor, m: i32) -> Option<usize> {
        let a_lo = self.lo.rem_euclid(m);
        let b_lo = other.lo.rem_euclid(m);
        let mut best: Option<i32> = None;
        for shift in [-m, 0, m] {
            let lo = a_lo.max(b_lo + shift);
            let hi = (a_lo + self.len).min(b_lo + shift + other.len);
            if lo <= hi {
                best = Some(best.map_or(hi - lo, |b| b.max(hi - lo)));
            }
        }
        best.map(|len| usize::from(len > 0))
    }
}

/// One group of an orbit box: the positions it occupies and one factor per
/// position. Its points are all permutations, within those positions, of
/// points of the product of the factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    pub positions: Vec<usize>,
    pub factors: Vec<Factor>,
}

impl Group {
    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    pub fn size(&self) -> usize {
        self.factors.len()
    }
}

/// A product of groups over a partition of the coordinate positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitBox {
    pub n: usize,
    pub groups: Vec<Group>,
}

impl OrbitBox {
    /// The one-group box, i.e. the full orbit of the product of `factors`.
    pub fn single(factors: Vec<Factor>) -> Self {
        let n = factors.len();
        Self { n, groups: vec![Group { positions: (0..n).collect(), factors }] }
    }

    pub fn new(n: usize, groups: Vec<Group>) -> Result<Self> {
        let mut seen = vec![false; n];
        for g in &groups {
            if g.positions.len() != g.factors.len() {
                return Err(Error::InvalidParams("group positions and factors differ in length".into()));
            }
            for &p in &g.positions {
                if p >= n || seen[p] {
                    return Err(Error::InvalidParams(format!("position {p} repeated or out of range")));
                }
                seen[p] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParams("groups do not cover every position".into()));
        }
        Ok(Self { n, groups })
    }

    pub fn dim(&self) -> usize {
        self.groups.iter().map(Group::dim).sum()
    }

    pub fn all_factors(&self) -> Vec<Factor> {
        self.groups.iter().flat_map(|g| g.factors.iter().copied()).collect()
    }

    /// Whether a concrete point lies in the box.
    pub fn contains_point(&self, params: &TorusParams, coords: &[i32]) -> bool {
        self.groups.iter().all(|g| {
            let sub: Vec<i32> = g.positions.iter().map(|&p| coords[p]).collect();
            point_in_orbit(params, &sub, &g.factors)
        })
    }
}

/// Largest dimension of `a ∩ b` over all pairs of concrete boxes of the two
/// orbit unions, or `None` if they are disjoint.
pub fn orbit_intersection(params: &TorusParams, a: &OrbitBox, b: &OrbitBox) -> Result<Option<usize>> {
    if a.n != b.n {
        return Err(Error::InvalidParams(format!("dimension mismatch {} vs {}", a.n, b.n)));
    }
    let m = params.modulus();
    if a.groups.len() == 1 || b.groups.len() == 1 {
        return Ok(assignment_dim(&a.all_factors(), &b.all_factors(), m));
    }
    // Distribute the factors of each group of `a` over the groups of `b`
    // according to how their positions overlap, then solve one assignment
    // problem per group of `b`.
    let mut slots: Vec<Vec<Vec<usize>>> = Vec::new(); // [a group][b group] -> count placeholder
    for ga in &a.groups {
        let row: Vec<Vec<usize>> = b
            .groups
            .iter()
            .map(|gb| ga.positions.iter().filter(|p| gb.positions.contains(p)).copied().collect())
            .collect();
        slots.push(row);
    }
    let mut buckets: Vec<Vec<Factor>> = vec![Vec::new(); b.groups.len()];
    let mut best = None;
    distribute(a, b, &slots, 0, &mut buckets, m, &mut best);
    Ok(best)
}

fn distribute(
    a: &OrbitBox,
    b: &OrbitBox,
    slots: &[Vec<Vec<usize>>],
    ga: usize,
    buckets: &mut Vec<Vec<Factor>>,
    m: i32,
    best: &mut Option<usize>,
) {
    if ga == a.groups.len() {
        let mut total = 0;
        for (gb, bucket) in b.groups.iter().zip(buckets.iter()) {
            match assignment_dim(bucket, &gb.factors, m) {
                Some(d) => total += d,
                None => return,
            }
        }
        *best = Some(best.map_or(total, |b: usize| b.max(total)));
        return;
    }
    let counts: Vec<usize> = slots[ga].iter().map(Vec::len).collect();
    let factors = &a.groups[ga].factors;
    let mut labels = vec![0usize; factors.len()];
    assign_labels(factors, &counts, 0, &mut vec![0; counts.len()], &mut labels, &mut |labels| {
        let before: Vec<usize> = buckets.iter().map(Vec::len).collect();
        for (f, &l) in factors.iter().zip(labels.iter()) {
            buckets[l].push(*f);
        }
        distribute(a, b, slots, ga + 1, buckets, m, best);
        for (bucket, len) in buckets.iter_mut().zip(before) {
            bucket.truncate(len);
        }
    });
}

fn assign_labels(
    factors: &[Factor],
    counts: &[usize],
    idx: usize,
    used: &mut Vec<usize>,
    labels: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if idx == factors.len() {
        visit(labels);
        return;
    }
    for g in 0..counts.len() {
        if used[g] < counts[g] {
            // Identical consecutive factors are interchangeable; keep their
            // labels non-decreasing to skip duplicate distributions.
            if idx > 0 && factors[idx] == factors[idx - 1] && g < labels[idx - 1] {
                continue;
            }
            used[g] += 1;
            labels[idx] = g;
            assign_labels(factors, counts, idx + 1, used, labels, visit);
            used[g] -= 1;
        }
    }
}

/// Best dimension of `∏ xs ∩ ∏ ys` over bijections between the two factor
/// lists.
fn assignment_dim(xs: &[Factor], ys: &[Factor], m: i32) -> Option<usize> {
    let weights: Vec<Vec<Option<i64>>> = xs
        .iter()
        .map(|x| ys.iter().map(|y| x.meet_dim(y, m).map(|d| d as i64)).collect())
        .collect();
    max_weight_assignment(&weights).map(|d| d as usize)
}

/// A unit subcube `∏ [w_r, w_r + 1]` of `T^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubcubeWord {
    pub w: Vec<u8>,
}

impl SubcubeWord {
    pub fn new(w: Vec<u8>) -> Self {
        Self { w }
    }

    /// Combinatorial type: the word sorted ascending.
    pub fn sorted(&self) -> Self {
        let mut w = self.w.clone();
        w.sort_unstable();
        Self { w }
    }

    pub fn translate(&self, k: u32, t: u32) -> Self {
        Self { w: self.w.iter().map(|&c| ((c as u32 + t) % k) as u8).collect() }
    }

    /// Dense index in `0..k^n`.
    pub fn index(&self, k: u32) -> usize {
        self.w.iter().fold(0usize, |acc, &c| acc * k as usize + c as usize)
    }

    pub fn from_index(mut idx: usize, k: u32, n: usize) -> Self {
        let mut w = vec![0u8; n];
        for slot in w.iter_mut().rev() {
            *slot = (idx % k as usize) as u8;
            idx /= k as usize;
        }
        Self { w }
    }

    /// Encoded as a top-dimensional face.
    pub fn as_face(&self) -> Face {
        Face { codes: self.w.iter().map(|&c| 2 * c + 1).collect() }
    }
}

/// A closed unit face of the integer grid: per coordinate either a point `v`
/// (code `2v`) or a unit interval `[v, v+1]` (code `2v+1`), `v` mod `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub codes: Vec<u8>,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.codes.iter().filter(|&&c| c % 2 == 1).count()
    }

    /// Packs the face into a `u64`, four bits per coordinate.
    pub fn key(&self) -> u64 {
        self.codes.iter().fold(0u64, |acc, &c| (acc << 4) | c as u64)
    }

    pub fn from_key(mut key: u64, n: usize) -> Self {
        let mut codes = vec![0u8; n];
        for c in codes.iter_mut().rev() {
            *c = (key & 0xf) as u8;
            key >>= 4;
        }
        Self { codes }
    }

    /// All closed faces of this face, itself included.
    pub fn closure(&self, k: u32) -> Vec<Face> {
        let mut out = vec![Face { codes: Vec::with_capacity(self.codes.len()) }];
        for &c in &self.codes {
            let opts: Vec<u8> = if c % 2 == 1 {
                let v = c / 2;
                vec![c, 2 * v, 2 * ((v as u32 + 1) % k) as u8]
            } else {
                vec![c]
            };
            out = out
                .into_iter()
                .flat_map(|f| {
                    opts.iter().map(move |&o| {
                        let mut g = f.clone();
                        g.codes.push(o);
                        g
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .codes
            .iter()
            .map(|&c| if c % 2 == 0 { format!("{}", c / 2) } else { format!("[{},{}]", c / 2, c / 2 + 1) })
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// All closed `d`-faces of the unit cube `c`.
pub fn faces(k: u32, c: &SubcubeWord, d: usize) -> Vec<Face> {
    let n = c.w.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != d {
            continue;
        }
        let fixed: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
        for side in 0u32..(1 << fixed.len()) {
            let mut codes: Vec<u8> = c.w.iter().map(|&v| 2 * v + 1).collect();
            for (bit, &i) in fixed.iter().enumerate() {
                let v = if side & (1 << bit) == 0 { c.w[i] as u32 } else { (c.w[i] as u32 + 1) % k };
                codes[i] = 2 * v as u8;
            }
            out.push(Face { codes });
        }
    }
    out
}
