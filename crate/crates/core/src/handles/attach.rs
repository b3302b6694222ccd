//! Exact attachment certificates on the cell grid cut out by every breakpoint
//! of the pieces.
//!
//! Each circle factor is cut at the breakpoints `b_0 < ... < b_{B-1}`; cell
//! `2j` is the point `b_j` and cell `2j+1` the open arc after it. A product
//! cell of `T^n` is a tuple of circle cells, and each closed factor is a set
//! of circle cells, so every question about `Y_z^*` and the earlier pieces
//! reduces to finitely many bipartite matchings.

use crate::error::{Error, Result};
use crate::matching::has_perfect_matching;
use crate::torus::{Factor, TorusParams};
use rayon::prelude::*;
use std::collections::{HashMap, HashSet};

/// One piece: its factor list (by position) and the position classes of
/// `Y_z^*`.
#[derive(Clone, Debug)]
pub struct PieceCells {
    pub factors: Vec<Factor>,
    pub groups: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Grid {
    breakpoints: Vec<i32>,
    modulus: i32,
}

impl Grid {
    pub fn new(params: &TorusParams, pieces: &[PieceCells]) -> Result<Self> {
        let m = params.modulus();
        let mut breakpoints: Vec<i32> = pieces
            .iter()
            .flat_map(|p| p.factors.iter())
            .flat_map(|f| {
                if f.len == m {
                    vec![]
                } else {
                    vec![f.lo.rem_euclid(m), (f.lo + f.len).rem_euclid(m)]
                }
            })
            .collect();
        breakpoints.push(0);
        breakpoints.sort_unstable();
        breakpoints.dedup();
        if 2 * breakpoints.len() > 64 {
            return Err(Error::Unsupported(format!("{} breakpoints exceed the cell budget", breakpoints.len())));
        }
        Ok(Self { breakpoints, modulus: m })
    }

    pub fn cell_count(&self) -> usize {
        2 * self.breakpoints.len()
    }

    fn point_cell(&self, v: i32) -> u8 {
        let j = self.breakpoints.binary_search(&v.rem_euclid(self.modulus)).expect("breakpoint");
        (2 * j) as u8
    }

    /// The circle cells covered by a closed factor.
    pub fn mask(&self, f: &Factor) -> u64 {
        let cells = self.cell_count() as u8;
        if f.len == self.modulus {
            return if cells == 64 { u64::MAX } else { (1u64 << cells) - 1 };
        }
        let start = self.point_cell(f.lo);
        let end = self.point_cell(f.lo + f.len);
        let mut mask = 0u64;
        let mut c = start;
        loop {
            mask |= 1 << c;
            if c == end {
                break;
            }
            c = (c + 1) % cells;
        }
        mask
    }

    fn neighbours(&self, c: u8) -> [u8; 2] {
        let cells = self.cell_count() as u8;
        [(c + cells - 1) % cells, (c + 1) % cells]
    }
}

fn key(cells: &[u8]) -> u64 {
    let mut sorted = cells.to_vec();
    sorted.sort_unstable();
    sorted.iter().fold(0u64, |acc, &c| (acc << 6) | c as u64)
}

fn cell_dim(cells: &[u8]) -> usize {
    cells.iter().filter(|&&c| c % 2 == 1).count()
}

fn matchable(cells: &[u8], masks: &[u64]) -> bool {
    let adj: Vec<u64> = cells
        .iter()
        .map(|&c| masks.iter().enumerate().filter(|(_, m)| *m & (1 << c) != 0).fold(0u64, |a, (q, _)| a | 1 << q))
        .collect();
    adj.iter().all(|&a| a != 0) && has_perfect_matching(&adj)
}

/// Cell structure of one group `ξ` of `Y_z^*`.
struct GroupCells {
    positions: Vec<usize>,
    dim: usize,
    tuples: Vec<Vec<u8>>,
    boundary: HashSet<u64>,
}

fn group_cells(grid: &Grid, factors: &[Factor], positions: &[usize]) -> Result<GroupCells> {
    let masks: Vec<u64> = positions.iter().map(|&p| grid.mask(&factors[p])).collect();
    let union = masks.iter().fold(0u64, |a, m| a | m);
    let dim: usize = positions.iter().map(|&p| factors[p].dim()).sum();
    let choices: Vec<u8> = (0..grid.cell_count() as u8).filter(|c| union & (1 << c) != 0).collect();
    let s = positions.len();
    let mut tuples = Vec::new();
    let mut cur = vec![0u8; s];
    fn rec(depth: usize, choices: &[u8], masks: &[u64], cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if depth == cur.len() {
            if matchable(cur, masks) {
                out.push(cur.clone());
            }
            return;
        }
        for &c in choices {
            cur[depth] = c;
            rec(depth + 1, choices, masks, cur, out);
        }
    }
    rec(0, &choices, &masks, &mut cur, &mut tuples);
    let members: HashSet<u64> = tuples.iter().map(|t| key(t)).collect();
    let top: HashSet<u64> = tuples.iter().filter(|t| cell_dim(t) == dim).map(|t| key(t)).collect();
    let mut boundary = HashSet::new();
    if dim > 0 {
        for t in tuples.iter().filter(|t| cell_dim(t) + 1 == dim) {
            let mut cofaces = 0;
            for p in 0..s {
                if t[p] % 2 == 1 {
                    continue;
                }
                for nb in grid.neighbours(t[p]) {
                    let mut up = t.clone();
                    up[p] = nb;
                    if top.contains(&key(&up)) {
                        cofaces += 1;
                    }
                }
            }
            match cofaces {
                1 => close_into(grid, t, &mut boundary),
                2 => {}
                other => {
                    return Err(Error::Consistency(format!(
                        "face {t:?} of group at {positions:?} has {other} cofaces"
                    )))
                }
            }
        }
    }
    debug_assert!(boundary.iter().all(|b| members.contains(b)));
    Ok(GroupCells { positions: positions.to_vec(), dim, tuples, boundary })
}

fn close_into(grid: &Grid, face: &[u8], out: &mut HashSet<u64>) {
    let odd: Vec<usize> = (0..face.len()).filter(|&p| face[p] % 2 == 1).collect();
    let cells = grid.cell_count() as u8;
    for code in 0..3usize.pow(odd.len() as u32) {
        let mut sub = face.to_vec();
        let mut rest = code;
        for &p in &odd {
            match rest % 3 {
                1 => sub[p] = (face[p] + cells - 1) % cells,
                2 => sub[p] = (face[p] + 1) % cells,
                _ => {}
            }
            rest /= 3;
        }
        out.insert(key(&sub));
    }
}

/// Per-piece outcome of the exhaustive cell sweep.
#[derive(Clone, Debug, Default)]
pub struct Certificate {
    pub z: usize,
    pub cells: u64,
    /// Groups (by index) of positive dimension whose boundary lies in the
    /// earlier pieces.
    pub attaching_groups: Vec<usize>,
    pub group_dims: Vec<usize>,
    /// Failures of the two containments, with a witness cell each.
    pub violations: Vec<String>,
}

impl Certificate {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn handle_index(&self) -> usize {
        self.attaching_groups.iter().map(|&g| self.group_dims[g]).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct CellKind {
    boundary_groups: u32,
    earlier: bool,
    other_copy: bool,
}

/// Sweeps every cell of every `Y_z^*`. With `rule` given (one flag per group
/// of each piece), the attaching groups must coincide with the flagged ones;
/// without it the attaching groups are derived from the geometry alone.
pub fn certify(params: &TorusParams, pieces: &[PieceCells], rule: Option<&[Vec<bool>]>) -> Result<Vec<Certificate>> {
    let grid = Grid::new(params, pieces)?;
    let all_masks: Vec<Vec<u64>> = pieces.iter().map(|p| p.factors.iter().map(|f| grid.mask(f)).collect()).collect();
    let mut out = Vec::with_capacity(pieces.len());
    for (zi, piece) in pieces.iter().enumerate() {
        let groups: Vec<GroupCells> =
            piece.groups.iter().map(|g| group_cells(&grid, &piece.factors, g)).collect::<Result<_>>()?;
        let n = piece.factors.len();
        let own_masks = &all_masks[zi];
        let group_of: Vec<usize> = {
            let mut v = vec![0; n];
            for (gi, g) in piece.groups.iter().enumerate() {
                for &p in g {
                    v[p] = gi;
                }
            }
            v
        };
        let radix: Vec<usize> = groups.iter().map(|g| g.tuples.len()).collect();
        let total: usize = radix.iter().product();
        let earlier = &all_masks[..zi];
        let histogram: HashMap<CellKind, (u64, Vec<u8>)> = (0..total)
            .into_par_iter()
            .fold(HashMap::new, |mut acc: HashMap<CellKind, (u64, Vec<u8>)>, mut idx| {
                let mut x = vec![0u8; n];
                for (g, &r) in groups.iter().zip(&radix) {
                    let t = &g.tuples[idx % r];
                    idx /= r;
                    for (slot, &p) in g.positions.iter().enumerate() {
                        x[p] = t[slot];
                    }
                }
                let mut boundary_groups = 0u32;
                for (gi, g) in groups.iter().enumerate() {
                    let sub: Vec<u8> = g.positions.iter().map(|&p| x[p]).collect();
                    if g.boundary.contains(&key(&sub)) {
                        boundary_groups |= 1 << gi;
                    }
                }
                let in_earlier = earlier.iter().any(|masks| matchable(&x, masks));
                let other_copy = in_other_copy(&x, own_masks, &group_of);
                let kind = CellKind { boundary_groups, earlier: in_earlier, other_copy };
                acc.entry(kind).or_insert_with(|| (0, x.clone())).0 += 1;
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, (c, w)) in b {
                    a.entry(k).or_insert((0, w)).0 += c;
                }
                a
            });
        let group_dims: Vec<usize> = groups.iter().map(|g| g.dim).collect();
        let attaching: Vec<usize> = (0..groups.len())
            .filter(|&g| group_dims[g] > 0)
            .filter(|&g| !histogram.keys().any(|k| k.boundary_groups & (1 << g) != 0 && !k.earlier))
            .collect();
        let mut violations = Vec::new();
        let chosen: Vec<usize> = match rule {
            Some(rule) => {
                let flagged: Vec<usize> =
                    (0..groups.len()).filter(|&g| rule[zi][g] && group_dims[g] > 0).collect();
                if flagged != attaching {
                    violations.push(format!("rule groups {flagged:?} but geometric groups {attaching:?}"));
                }
                flagged
            }
            None => attaching.clone(),
        };
        let s_mask = chosen.iter().fold(0u32, |a, &g| a | 1 << g);
        for (k, (count, witness)) in &histogram {
            let on_attaching = k.boundary_groups & s_mask != 0;
            if k.earlier != on_attaching {
                violations.push(format!(
                    "{count} cells with earlier={} attaching={on_attaching}, e.g. {witness:?}",
                    k.earlier
                ));
            }
            if k.other_copy && !on_attaching {
                violations.push(format!("{count} cells meet another copy off the attaching region, e.g. {witness:?}"));
            }
        }
        violations.sort();
        out.push(Certificate {
            z: zi + 1,
            cells: total as u64,
            attaching_groups: attaching,
            group_dims,
            violations,
        });
    }
    Ok(out)
}

/// Whether `x` lies in an image of `Y_z^*` under a coordinate permutation
/// that does not preserve its groups.
fn in_other_copy(x: &[u8], masks: &[u64], group_of: &[usize]) -> bool {
    let n = x.len();
    let adj: Vec<u64> = x
        .iter()
        .map(|&c| (0..n).filter(|&q| masks[q] & (1 << c) != 0).fold(0u64, |a, q| a | 1 << q))
        .collect();
    for p in 0..n {
        for s in 0..n {
            if group_of[s] == group_of[p] || adj[p] & (1 << s) == 0 {
                continue;
            }
            let forced: Vec<u64> =
                (0..n).map(|r| if r == p { 1 << s } else { adj[r] & !(1u64 << s) }).collect();
            if forced.iter().all(|&a| a != 0) && has_perfect_matching(&forced) {
                return true;
            }
        }
    }
    false
}
