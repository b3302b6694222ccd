//! Euler characteristics of `X_I` computed twice: from the handle counts of a
//! decomposition and from the unit-face cell structure.

use super::Decomposition;
use crate::error::{Error, Result};
use crate::multisection::{formula_xi, FaceSet};
use crate::torus::Face;
use num_bigint::{BigInt, BigUint};
use num_traits::{CheckedSub, ToPrimitive, Zero};
use std::collections::{HashMap, HashSet};

/// Cells of the closure of a face set, grouped by dimension.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub n: usize,
    pub k: u32,
    pub cells: Vec<HashSet<u64>>,
}

impl CellComplex {
    pub fn closure_of(faces: &FaceSet, k: u32) -> Self {
        let mut cells = vec![HashSet::new(); faces.dim + 1];
        for &key in &faces.faces {
            for f in Face::from_key(key, faces.n).closure(k) {
                cells[f.dim()].insert(f.key());
            }
        }
        Self { n: faces.n, k, cells }
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(HashSet::len).collect()
    }

    pub fn euler(&self) -> i64 {
        self.cells.iter().enumerate().map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }

    /// Connected components, via the vertices and edges.
    pub fn components(&self) -> usize {
        let verts: Vec<u64> = self.cells.first().map(|c| c.iter().copied().collect()).unwrap_or_default();
        let index: HashMap<u64, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        if let Some(edges) = self.cells.get(1) {
            for &e in edges {
                let ends: Vec<usize> = Face::from_key(e, self.n)
                    .closure(self.k)
                    .into_iter()
                    .filter(|f| f.dim() == 0)
                    .map(|f| index[&f.key()])
                    .collect();
                let (a, b) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
                parent[a] = b;
            }
        }
        (0..verts.len()).filter(|&v| find(&mut parent, v) == v).count()
    }
}

/// Faces of dimension `dim - 1` lying in exactly one face of `faces`.
pub fn boundary(faces: &FaceSet, k: u32) -> FaceSet {
    let mut cofaces: HashMap<u64, usize> = HashMap::new();
    for &key in &faces.faces {
        for f in Face::from_key(key, faces.n).closure(k) {
            if f.dim() + 1 == faces.dim {
                *cofaces.entry(f.key()).or_default() += 1;
            }
        }
    }
    FaceSet {
        n: faces.n,
        dim: faces.dim.saturating_sub(1),
        faces: cofaces.into_iter().filter(|&(_, c)| c == 1).map(|(f, _)| f).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct EulerReport {
    /// Number of `h`-handles, indexed by `h`.
    pub handle_counts: Vec<BigUint>,
    pub chi_handles: BigInt,
    pub cell_counts: Vec<usize>,
    pub chi_cells: i64,
    pub components: usize,
    /// `c_1 - c_0 + 1` for a connected handlebody (`|I| = 1` only).
    pub genus: Option<usize>,
}

impl EulerReport {
    pub fn consistent(&self) -> bool {
        self.chi_handles == BigInt::from(self.chi_cells) && self.components == 1
    }
}

pub fn handle_counts(d: &Decomposition) -> Vec<BigUint> {
    let mut counts = vec![BigUint::zero(); d.max_h() + 1];
    for r in &d.records {
        counts[r.h] += &r.copies;
    }
    counts
}

pub fn chi_handles(counts: &[BigUint]) -> BigInt {
    counts
        .iter()
        .enumerate()
        .map(|(h, c)| if h % 2 == 0 { BigInt::from(c.clone()) } else { -BigInt::from(c.clone()) })
        .sum()
}

/// Both Euler characteristics of `X_I`, the component count, and the genus
/// when `|I| = 1`.
pub fn euler_genus_report(d: &Decomposition) -> Result<EulerReport> {
    let faces = formula_xi(&d.params, &d.set)?;
    let complex = CellComplex::closure_of(&faces, d.params.k);
    let counts = handle_counts(d);
    let components = complex.components();
    let genus = if d.set.len() == 1 && components == 1 {
        let c0 = counts.first().cloned().unwrap_or_default();
        let c1 = counts.get(1).cloned().unwrap_or_default();
        (c1 + 1u32).checked_sub(&c0).and_then(|g| g.to_usize())
    } else {
        None
    };
    Ok(EulerReport {
        chi_handles: chi_handles(&counts),
        handle_counts: counts,
        cell_counts: complex.counts(),
        chi_cells: complex.euler(),
        components,
        genus,
    })
}

/// Genus of a closed connected orientable surface from its Euler
/// characteristic.
pub fn surface_genus(chi: i64) -> Result<usize> {
    if chi > 2 || (2 - chi) % 2 != 0 {
        return Err(Error::Consistency(format!("no closed orientable surface has chi = {chi}")));
    }
    Ok(((2 - chi) / 2) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handles::{decompose, decompose_t4, descriptor::EnumerationOrder};
    use crate::index_set::IndexSet;
    use crate::torus::TorusParams;

    #[test]
    fn t3_and_t5_handlebodies() {
        for (k, genus) in [(2, 3), (3, 5)] {
            let params = TorusParams::odd(k).unwrap();
            let set = IndexSet::new(k, [0]).unwrap();
            let d = decompose(&params, &set, &EnumerationOrder::default(), None).unwrap();
            let r = euler_genus_report(&d).unwrap();
            assert!(r.consistent(), "{r:?}");
            assert_eq!(r.genus, Some(genus));
        }
    }

    #[test]
    fn t3_heegaard_surface() {
        let params = TorusParams::odd(2).unwrap();
        let set = IndexSet::new(2, [0, 1]).unwrap();
        let faces = formula_xi(&params, &set).unwrap();
        assert_eq!(faces.len(), 12);
        let c = CellComplex::closure_of(&faces, 2);
        assert_eq!(c.euler(), -4);
        assert_eq!(surface_genus(c.euler()).unwrap(), 3);
    }

    #[test]
    fn t4_pair_has_ten_one_handles_and_genus_ten_boundary() {
        let set = IndexSet::new(3, [0, 1]).unwrap();
        let d = decompose_t4(&set).unwrap();
        let r = euler_genus_report(&d).unwrap();
        assert_eq!(r.handle_counts, vec![BigUint::from(1u32), BigUint::from(10u32)]);
        assert!(r.consistent());
        let x01 = formula_xi(&d.params, &set).unwrap();
        let x012 = formula_xi(&d.params, &IndexSet::new(3, [0, 1, 2]).unwrap()).unwrap();
        assert_eq!(boundary(&x01, 3), x012);
        let surface = CellComplex::closure_of(&x012, 3);
        assert_eq!(surface.components(), 1);
        assert_eq!(surface_genus(surface.euler()).unwrap(), 10);
    }
}
