//! Piece descriptors `(J, i*, V-, U°, U-)` and their enumeration order.

use crate::error::{Error, Result};
use crate::index_set::{Block, IndexSet};
use serde::{Deserialize, Serialize};

/// Which third of `[i-1, i]` an index `i ∈ U` selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UState {
    Circ,
    Minus,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PieceDescriptor {
    pub j: Vec<u32>,
    pub i_star: u32,
    pub u: Vec<u32>,
    pub v: Vec<u32>,
    pub v_minus: Vec<u32>,
    pub u_circ: Vec<u32>,
    pub u_minus: Vec<u32>,
}

impl PieceDescriptor {
    pub fn in_j(&self, i: u32) -> bool {
        self.j.contains(&i)
    }

    pub fn v_plus(&self) -> Vec<u32> {
        self.v.iter().copied().filter(|i| !self.v_minus.contains(i)).collect()
    }

    pub fn u_plus(&self) -> Vec<u32> {
        self.u
            .iter()
            .copied()
            .filter(|i| !self.u_circ.contains(i) && !self.u_minus.contains(i))
            .collect()
    }

    pub fn u_state(&self, i: u32) -> Option<UState> {
        if !self.u.contains(&i) {
            None
        } else if self.u_circ.contains(&i) {
            Some(UState::Circ)
        } else if self.u_minus.contains(&i) {
            Some(UState::Minus)
        } else {
            Some(UState::Plus)
        }
    }

    pub fn in_v_minus(&self, i: u32) -> bool {
        self.v_minus.contains(&i)
    }

    pub fn in_v_plus(&self, i: u32) -> bool {
        self.v.contains(&i) && !self.v_minus.contains(&i)
    }

    /// Copy with `i` toggled in or out of `V-`.
    pub fn with_flipped(&self, i: u32) -> Self {
        let mut out = self.clone();
        if let Some(pos) = out.v_minus.iter().position(|&x| x == i) {
            out.v_minus.remove(pos);
        } else {
            out.v_minus.push(i);
            out.v_minus.sort_unstable();
        }
        out
    }
}

/// The sets `U_r, V_r` of one block.
fn block_uv(block: &Block, in_j: bool, i_star: u32) -> (Vec<u32>, Vec<u32>) {
    let (a, b) = (block.min, block.max);
    let all: Vec<u32> = block.elements().collect();
    let without = |drop: &[u32]| -> Vec<u32> { all.iter().copied().filter(|i| !drop.contains(i)).collect() };
    if !block.contains(i_star) {
        if !in_j {
            (Vec::new(), without(&[a]))
        } else if a == b {
            (Vec::new(), vec![a])
        } else {
            (without(&[a, b]), vec![b])
        }
    } else if i_star + 2 <= b {
        (without(&[a, i_star, i_star + 1, b]), vec![i_star + 1, b])
    } else {
        (without(&[a, i_star, b]), Vec::new())
    }
}

/// `U` and `V` for the given `J` and `i*`, assembled blockwise.
pub fn uv_sets(set: &IndexSet, j: &[u32], i_star: u32) -> Result<(Vec<u32>, Vec<u32>)> {
    if !set.contains(i_star) {
        return Err(Error::InvalidIndexSet(format!("i* = {i_star} is not in {set}")));
    }
    let minima = set.block_minima();
    if let Some(bad) = j.iter().find(|x| !minima.contains(x)) {
        return Err(Error::InvalidIndexSet(format!("{bad} is not a block minimum of {set}")));
    }
    let mut u = Vec::new();
    let mut v = Vec::new();
    for block in set.blocks() {
        let (bu, bv) = block_uv(&block, j.contains(&block.min), i_star);
        u.extend(bu);
        v.extend(bv);
    }
    Ok((u, v))
}

/// Explicit enumeration orders for `J` and `i*`; `None` uses the default
/// order (by size then lexicographic for `J`, by offset inside the block then
/// value for `i*`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationOrder {
    pub j_order: Option<Vec<Vec<u32>>>,
    pub istar_order: Option<Vec<u32>>,
}

pub fn default_j_order(set: &IndexSet) -> Vec<Vec<u32>> {
    let minima = set.block_minima();
    let mut out: Vec<Vec<u32>> = (0u32..1 << minima.len())
        .map(|mask| {
            minima
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &m)| m)
                .collect()
        })
        .collect();
    out.sort_by(|a: &Vec<u32>, b: &Vec<u32>| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

pub fn default_istar_order(set: &IndexSet) -> Vec<u32> {
    let blocks = set.blocks();
    let mut out = set.elements.clone();
    out.sort_by_key(|&i| {
        let block = blocks.iter().find(|b| b.contains(i)).expect("element lies in a block");
        (i - block.min, i)
    });
    out
}

impl EnumerationOrder {
    fn resolve(&self, set: &IndexSet) -> Result<(Vec<Vec<u32>>, Vec<u32>)> {
        let j_default = default_j_order(set);
        let j_order = match &self.j_order {
            Some(order) => {
                let mut given: Vec<Vec<u32>> = order
                    .iter()
                    .map(|s| {
                        let mut s = s.clone();
                        s.sort_unstable();
                        s
                    })
                    .collect();
                let resolved = given.clone();
                given.sort();
                let mut expected = j_default.clone();
                expected.sort();
                if given != expected {
                    return Err(Error::InvalidParams("J order is not a permutation of the subsets of T".into()));
                }
                resolved
            }
            None => j_default,
        };
        let istar_order = match &self.istar_order {
            Some(order) => {
                let mut sorted = order.clone();
                sorted.sort_unstable();
                if sorted != set.elements {
                    return Err(Error::InvalidParams("i* order is not a permutation of I".into()));
                }
                order.clone()
            }
            None => default_istar_order(set),
        };
        Ok((j_order, istar_order))
    }
}

/// Rank of `subset` in the recursive order on subsets of `elements`
/// (ascending): compare maxima first, and for equal maxima compare the
/// remainders in reverse.
pub fn recursive_rank(elements: &[u32], subset: &[u32]) -> u64 {
    let max = elements.iter().enumerate().rev().find(|(_, e)| subset.contains(e));
    match max {
        None => 0,
        Some((pos, &e)) => {
            // Subsets with this maximum occupy ranks [2^pos, 2^(pos+1)),
            // their remainders taken in reverse.
            let rest: Vec<u32> = subset.iter().copied().filter(|&x| x != e).collect();
            let half = 1u64 << pos;
            half + (half - 1 - recursive_rank(&elements[..pos], &rest))
        }
    }
}

/// All subsets of `0..size` in the recursive order.
pub fn recursive_order(size: u32) -> Vec<Vec<u32>> {
    let elements: Vec<u32> = (0..size).collect();
    let mut subsets: Vec<Vec<u32>> = (0u32..1 << size)
        .map(|m| elements.iter().copied().filter(|&e| m & (1 << e) != 0).collect())
        .collect();
    subsets.sort_by_key(|s| recursive_rank(&elements, s));
    subsets
}

/// Pairs `(S, i)` with `i ∈ S ⊂ 0..size` where removing `i` moves `S` earlier
/// in the recursive order but `|S ∩ {i+1, ..., size-1}|` is odd, or the
/// other way round.
pub fn removal_parity_violations(size: u32) -> Vec<(Vec<u32>, u32)> {
    let elements: Vec<u32> = (0..size).collect();
    let mut out = Vec::new();
    for s in recursive_order(size) {
        for &i in &s {
            let without: Vec<u32> = s.iter().copied().filter(|&x| x != i).collect();
            let earlier = recursive_rank(&elements, &without) < recursive_rank(&elements, &s);
            let above = s.iter().filter(|&&x| x > i).count();
            if earlier != (above % 2 == 0) {
                out.push((s.clone(), i));
            }
        }
    }
    out
}

/// Rank of the trace of `V-` on one block in that block's order.
pub fn block_v_rank(block: &Block, v_block: &[u32], v_minus: &[u32], i_star: u32) -> u64 {
    let trace: Vec<u32> = v_block.iter().copied().filter(|i| v_minus.contains(i)).collect();
    if block.contains(i_star) {
        if v_block.is_empty() {
            return 0;
        }
        let first = trace.contains(&(i_star + 1));
        let last = trace.contains(&block.max);
        match (first, last) {
            (true, false) => 0,
            (false, false) => 1,
            (true, true) => 2,
            (false, true) => 3,
        }
    } else {
        recursive_rank(v_block, &trace)
    }
}

/// Sort key of `V-`: per-block ranks, first block most significant.
pub fn v_key(set: &IndexSet, d: &PieceDescriptor) -> Vec<u64> {
    set.blocks()
        .iter()
        .map(|block| {
            let v_block: Vec<u32> = d.v.iter().copied().filter(|&i| block.contains(i)).collect();
            block_v_rank(block, &v_block, &d.v_minus, d.i_star)
        })
        .collect()
}

/// Sort key of the `U` states: highest index most significant; inside the
/// block of `i*` the states run `°, -, +`, elsewhere `°, +, -`.
pub fn u_key(set: &IndexSet, d: &PieceDescriptor) -> Vec<u8> {
    let star_block = set.blocks().into_iter().find(|b| b.contains(d.i_star)).expect("i* in I");
    d.u.iter()
        .rev()
        .map(|&i| {
            let state = d.u_state(i).expect("i in U");
            match (star_block.contains(i), state) {
                (_, UState::Circ) => 0,
                (true, UState::Minus) | (false, UState::Plus) => 1,
                _ => 2,
            }
        })
        .collect()
}

/// Whether toggling `i` in `V-` gives a descriptor earlier in the order.
pub fn flip_is_earlier(set: &IndexSet, d: &PieceDescriptor, i: u32) -> bool {
    v_key(set, &d.with_flipped(i)) < v_key(set, d)
}

/// All descriptors of pieces of `X_I`, in order.
pub fn enumerate_pieces(set: &IndexSet, order: &EnumerationOrder) -> Result<Vec<PieceDescriptor>> {
    set.require_simple_proper()?;
    let (j_order, istar_order) = order.resolve(set)?;
    let mut out = Vec::new();
    for j in &j_order {
        for &i_star in &istar_order {
            let (u, v) = uv_sets(set, j, i_star)?;
            let mut batch = Vec::new();
            for vmask in 0u32..1 << v.len() {
                let v_minus: Vec<u32> =
                    v.iter().enumerate().filter(|(b, _)| vmask & (1 << b) != 0).map(|(_, &i)| i).collect();
                let states = 3usize.pow(u.len() as u32);
                for code in 0..states {
                    let mut rest = code;
                    let mut u_circ = Vec::new();
                    let mut u_minus = Vec::new();
                    for &i in &u {
                        match rest % 3 {
                            0 => u_circ.push(i),
                            1 => u_minus.push(i),
                            _ => {}
                        }
                        rest /= 3;
                    }
                    batch.push(PieceDescriptor {
                        j: j.clone(),
                        i_star,
                        u: u.clone(),
                        v: v.clone(),
                        v_minus: v_minus.clone(),
                        u_circ,
                        u_minus,
                    });
                }
            }
            batch.sort_by_cached_key(|d| (v_key(set, d), u_key(set, d)));
            out.extend(batch);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(k: u32, e: &[u32]) -> IndexSet {
        IndexSet::new(k, e.iter().copied()).unwrap()
    }

    #[test]
    fn uv_examples() {
        let s = set(4, &[0, 2]);
        assert_eq!(uv_sets(&s, &[], 0).unwrap(), (vec![], vec![]));
        assert_eq!(uv_sets(&s, &[2], 0).unwrap(), (vec![], vec![2]));
        let s9 = set(5, &[0, 1, 2, 3]);
        assert_eq!(uv_sets(&s9, &[], 0).unwrap(), (vec![2], vec![1, 3]));
        assert_eq!(uv_sets(&s9, &[], 3).unwrap(), (vec![1, 2], vec![]));
    }

    #[test]
    fn recursive_order_for_three_bits() {
        let subsets = recursive_order(3);
        let expected: Vec<Vec<u32>> =
            vec![vec![], vec![0], vec![0, 1], vec![1], vec![1, 2], vec![0, 1, 2], vec![0, 2], vec![2]];
        assert_eq!(subsets, expected);
    }

    #[test]
    fn removing_an_element_follows_the_parity_rule() {
        for size in 1..=5 {
            assert!(removal_parity_violations(size).is_empty(), "size {size}");
        }
    }

    #[test]
    fn t5_pair_order() {
        let s = set(3, &[0, 1]);
        let pieces = enumerate_pieces(&s, &EnumerationOrder::default()).unwrap();
        let heads: Vec<(Vec<u32>, u32)> = pieces.iter().map(|d| (d.j.clone(), d.i_star)).collect();
        assert_eq!(heads, vec![(vec![], 0), (vec![], 1), (vec![0], 0), (vec![0], 1)]);
    }
}
