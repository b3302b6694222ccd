//! The torus multisection pulled back to each cube of a directed cube
//! complex and glued along the identifications.

use super::quotient::{homology, Quotient};
use super::DirectedCubeComplex;
use crate::error::{Error, Result};
use crate::multisection::{piece_labels, CubeLabels};
use crate::torus::TorusParams;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    pub n: usize,
    pub k: u32,
    pub cubes: usize,
    /// Cells of the subdivided quotient per dimension.
    pub cell_counts: Vec<usize>,
    /// Euler characteristic of each lifted piece.
    pub piece_euler: Vec<i64>,
    pub piece_components: Vec<usize>,
    /// `1 - χ` for each connected piece.
    pub piece_genus: Vec<Option<i64>>,
    /// Euler characteristic of the common intersection of all pieces.
    pub central_euler: i64,
    /// Genus of the common intersection when it is a closed surface.
    pub central_genus: Option<i64>,
    /// `n` times the number of cubes.
    pub cube_count_genus: usize,
    /// Whether the top integral homology is `Z`.
    pub orientable: bool,
    /// Identified faces whose torus piece memberships differ.
    pub mismatches: Vec<String>,
}

impl LiftReport {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub const MAX_LIFT_DIM: usize = 5;

/// Lifts the multisection of `T^n` to the complex: each cube is a copy of
/// the fundamental domain `[0, k]^n` and a face of the quotient lies in a
/// piece when some subcube of that piece, in any cube, contains it.
pub fn lift_multisection(c: &DirectedCubeComplex) -> Result<LiftReport> {
    if c.n > MAX_LIFT_DIM {
        return Err(Error::Unsupported(format!("lifting is limited to n <= {MAX_LIFT_DIM}, got {}", c.n)));
    }
    let report = c.validate();
    if !report.ok() {
        return Err(Error::InvalidComplex(report.violations.join("; ")));
    }
    let params = TorusParams::from_dim(c.n)?;
    let labels = piece_labels(&params)?;
    let k = params.k;
    let q = Quotient::new(c, k as usize)?;
    let pieces = labels.labels.iter().copied().max().map_or(0, |m| m as usize + 1);

    // Per quotient cell: pieces met by the lifted subcubes, and the torus
    // membership seen from each representative.
    let mut lifted: HashMap<usize, u32> = HashMap::new();
    let mut torus_view: HashMap<usize, (u32, usize)> = HashMap::new();
    let mut mismatches = Vec::new();
    let mut codes = vec![0u8; c.n];
    for face in 0..q.face_count() {
        q.decode_into(face % per_cube(&q), &mut codes);
        let (root, _) = q.find(face);
        let own = own_cube_pieces(&labels, &codes);
        *lifted.entry(root).or_default() |= own;
        let reduced: Vec<u8> = codes.iter().map(|&x| x % (2 * k as u8)).collect();
        let seen = (0..pieces as u8).fold(0u32, |acc, r| if labels.face_in(&reduced, r) { acc | 1 << r } else { acc });
        match torus_view.get(&root) {
            None => {
                torus_view.insert(root, (seen, face));
            }
            Some(&(prev, first)) if prev != seen && mismatches.len() < 20 => {
                let (ca, fa) = q.decode(first);
                mismatches.push(format!("cube {ca} face {fa:?} and cube {} face {codes:?} lie in different pieces", face / per_cube(&q)));
            }
            _ => {}
        }
    }
    for (root, &mask) in &lifted {
        if torus_view[root].0 != mask && mismatches.len() < 20 {
            let (cube, f) = q.decode(*root);
            mismatches.push(format!("cube {cube} face {f:?}: lifted pieces {mask:b}, torus pieces {:b}", torus_view[root].0));
        }
    }

    let cells = q.cells();
    let cell_counts: Vec<usize> = cells.iter().map(Vec::len).collect();
    let mut piece_euler = Vec::new();
    let mut piece_components = Vec::new();
    let mut piece_genus = Vec::new();
    for r in 0..pieces {
        let member = |f: usize| lifted[&f] & (1 << r) != 0;
        let chi = euler(&cells, member);
        let comps = components(&q, &cells, member);
        piece_euler.push(chi);
        piece_components.push(comps);
        piece_genus.push((comps == 1).then_some(1 - chi));
    }
    let all = (1u32 << pieces) - 1;
    let central = |f: usize| lifted[&f] & all == all;
    let central_euler = euler(&cells, central);
    let central_dim = (0..=c.n).rev().find(|&d| cells[d].iter().any(|&f| central(f)));
    let coarse = Quotient::new(c, 1)?;
    let orientable = coarse.reversed_cells.is_empty()
        && homology(&coarse.chain_complex()?).last().is_some_and(|h| h.rank == 1 && h.torsion.is_empty());
    let central_genus = (central_dim == Some(2) && central_euler % 2 == 0).then_some((2 - central_euler) / 2);
    Ok(LiftReport {
        n: c.n,
        k,
        cubes: c.cubes,
        cell_counts,
        piece_euler,
        piece_components,
        piece_genus,
        central_euler,
        central_genus,
        cube_count_genus: c.n * c.cubes,
        orientable,
        mismatches,
    })
}

fn per_cube(q: &Quotient) -> usize {
    (2 * q.s + 1).pow(q.n as u32)
}

/// Pieces of the subcubes of the same cube that contain the face.
fn own_cube_pieces(labels: &CubeLabels, codes: &[u8]) -> u32 {
    let k = labels.k as usize;
    let mut words: Vec<usize> = vec![0];
    for &code in codes {
        let v = (code / 2) as usize;
        let options: Vec<usize> = if code % 2 == 1 {
            vec![v]
        } else {
            [v.checked_sub(1), (v < k).then_some(v)].into_iter().flatten().collect()
        };
        words = words.iter().flat_map(|&w| options.iter().map(move |&o| w * k + o)).collect();
    }
    words.into_iter().fold(0u32, |acc, idx| acc | 1 << labels.labels[idx])
}

fn euler(cells: &[Vec<usize>], member: impl Fn(usize) -> bool) -> i64 {
    cells
        .iter()
        .enumerate()
        .map(|(d, cs)| {
            let count = cs.iter().filter(|&&f| member(f)).count() as i64;
            if d % 2 == 0 {
                count
            } else {
                -count
            }
        })
        .sum()
}

fn components(q: &Quotient, cells: &[Vec<usize>], member: impl Fn(usize) -> bool) -> usize {
    let vertices: Vec<usize> = cells[0].iter().copied().filter(|&f| member(f)).collect();
    let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    if let Some(edges) = cells.get(1) {
        for &e in edges.iter().filter(|&&e| member(e)) {
            let ends: Vec<usize> = q.face_boundary(e).into_iter().map(|(f, _)| pos[&q.find(f).0]).collect();
            let (a, b) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
            parent[a] = b;
        }
    }
    (0..vertices.len()).filter(|&i| find(&mut parent, i) == i).count()
}
