//! Subsets of `Z_k` indexing intersections of pieces.

use crate::error::{Error, Result};
use std::fmt;

/// A maximal run of consecutive indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub min: u32,
    pub max: u32,
}

impl Block {
    pub fn contains(&self, i: u32) -> bool {
        (self.min..=self.max).contains(&i)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        self.min..=self.max
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    pub k: u32,
    pub elements: Vec<u32>,
}

impl IndexSet {
    pub fn new(k: u32, elements: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut elements: Vec<u32> = elements.into_iter().collect();
        if let Some(&bad) = elements.iter().find(|&&e| e >= k) {
            return Err(Error::InvalidIndexSet(format!("{bad} is not a residue mod {k}")));
        }
        elements.sort_unstable();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::InvalidIndexSet("index set is empty".into()));
        }
        Ok(Self { k, elements })
    }

    /// Parses a comma-separated list such as `0,2`.
    pub fn parse(k: u32, text: &str) -> Result<Self> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let v: u32 = part
                .parse()
                .map_err(|_| Error::InvalidIndexSet(format!("`{part}` is not an index")))?;
            out.push(v);
        }
        Self::new(k, out)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.elements.len() == self.k as usize
    }

    pub fn contains(&self, i: u32) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    /// Cyclic translate by `t`.
    pub fn shifted(&self, t: u32) -> Self {
        let elements = self.elements.iter().map(|&e| (e + t) % self.k).collect::<Vec<_>>();
        Self::new(self.k, elements).expect("translate of a valid set")
    }

    /// The cyclic translates sharing an element with 0, i.e. `I - i` for
    /// `i ∈ I`.
    fn translates(&self) -> impl Iterator<Item = (Self, u32)> + '_ {
        self.elements.iter().map(move |&i| (self.shifted(self.k - i), i))
    }

    /// Simple sets are lexicographically least among their translates.
    pub fn is_simple(&self) -> bool {
        self.translates().all(|(t, _)| self.elements <= t.elements)
    }

    /// Least translate and the shift `t` with `self = canonical + t`.
    pub fn canonicalize_simple(&self) -> (Self, u32) {
        self.translates()
            .min_by(|a, b| a.0.elements.cmp(&b.0.elements).then(a.1.cmp(&b.1)))
            .expect("nonempty")
    }

    /// Maximal runs of consecutive elements. Only meaningful for proper
    /// simple sets, where no run wraps around `k - 1 -> 0`.
    pub fn blocks(&self) -> Vec<Block> {
        let mut out: Vec<Block> = Vec::new();
        for &e in &self.elements {
            match out.last_mut() {
                Some(b) if b.max + 1 == e => b.max = e,
                _ => out.push(Block { min: e, max: e }),
            }
        }
        out
    }

    /// Index of the block containing `i`.
    pub fn block_of(&self, i: u32) -> Option<usize> {
        self.blocks().iter().position(|b| b.contains(i))
    }

    /// The block minima.
    pub fn block_minima(&self) -> Vec<u32> {
        self.blocks().iter().map(|b| b.min).collect()
    }

    /// Checks the preconditions of the handle pipeline.
    pub fn require_simple_proper(&self) -> Result<()> {
        if self.is_full() {
            return Err(Error::InvalidIndexSet("index set is all of Z_k".into()));
        }
        if !self.is_simple() {
            return Err(Error::InvalidIndexSet(format!("{self} is not simple")));
        }
        Ok(())
    }

    /// All simple proper nonempty subsets of `Z_k`, in lexicographic order.
    pub fn all_simple_proper(k: u32) -> Vec<Self> {
        let mut out: Vec<Self> = (1u32..(1 << k) - 1)
            .map(|mask| Self::new(k, (0..k).filter(|i| mask & (1 << i) != 0)).unwrap())
            .filter(Self::is_simple)
            .collect();
        out.sort_by(|a, b| a.elements.cmp(&b.elements));
        out
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        let (c, s) = IndexSet::new(3, [1, 2]).unwrap().canonicalize_simple();
        assert_eq!((c.elements, s), (vec![0, 1], 1));
        let (c, s) = IndexSet::new(4, [0, 2]).unwrap().canonicalize_simple();
        assert_eq!((c.elements, s), (vec![0, 2], 0));
        assert!(IndexSet::new(3, [0, 1]).unwrap().is_simple());
        assert!(!IndexSet::new(3, [0, 2]).unwrap().is_simple());
    }

    #[test]
    fn simple_proper_subsets_of_z3() {
        let all: Vec<Vec<u32>> = IndexSet::all_simple_proper(3).into_iter().map(|s| s.elements).collect();
        assert_eq!(all, vec![vec![0], vec![0, 1]]);
        let all4: Vec<Vec<u32>> = IndexSet::all_simple_proper(4).into_iter().map(|s| s.elements).collect();
        assert_eq!(all4, vec![vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 2]]);
    }

    #[test]
    fn blocks_of_sets() {
        let s = IndexSet::new(7, [0, 1, 2, 3, 5]).unwrap();
        assert_eq!(s.blocks(), vec![Block { min: 0, max: 3 }, Block { min: 5, max: 5 }]);
        assert_eq!(s.block_minima(), vec![0, 5]);
    }
}
