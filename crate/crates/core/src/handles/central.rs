//! The handle decomposition of the central manifold `X_{Z_k}` built from
//! thirds and sixths of the unit intervals, and the pseudomanifold check of
//! its unit-face cell structure.

use super::attach::{certify, PieceCells};
use super::euler::{chi_handles, CellComplex};
use super::orbit_copies;
use super::rep::{grouped_box, render_box};
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::multisection::{formula_xi, FaceSet};
use crate::torus::{Factor, Face, OrbitBox, TorusParams};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CentralPieceDescriptor {
    pub i_star: u32,
    pub u_circ: Vec<u32>,
    pub u_minus: Vec<u32>,
    pub u_star: Vec<u32>,
}

impl CentralPieceDescriptor {
    pub fn handle_index(&self, k: u32) -> usize {
        k as usize - self.u_circ.len() - self.u_star.len()
    }

    /// The sub-arc of `[i-1, i]` used for the index `i`, in sixths.
    pub fn arc(&self, k: u32, i: u32) -> Factor {
        let star = self.i_star;
        let next = (star + 1) % k;
        let top = 6 * i as i32;
        let (lo, hi) = if self.u_circ.contains(&i) {
            (top - 4, top - 2)
        } else if self.u_minus.contains(&i) {
            if i != next {
                (top - 6, top - 4)
            } else if self.u_star.contains(&i) {
                (top - 6, top - 5)
            } else {
                (top - 5, top - 4)
            }
        } else if i != star {
            (top - 2, top)
        } else if self.u_star.contains(&i) {
            (top - 1, top)
        } else {
            (top - 2, top - 1)
        };
        Factor::interval(lo, hi)
    }

    /// `∏_{i ≠ i*} ρ_i × {i}` times `ρ_{i*}`, as a factor list.
    pub fn factors(&self, params: &TorusParams) -> Vec<Factor> {
        let k = params.k;
        let mut out = Vec::with_capacity(params.n);
        for i in 0..k {
            out.push(self.arc(k, i).reduced(params));
            if i != self.i_star {
                out.push(Factor::unit_point(i as i32).reduced(params));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct CentralRecord {
    pub z: usize,
    pub descriptor: CentralPieceDescriptor,
    pub factors: Vec<Factor>,
    pub groups: Vec<Vec<usize>>,
    pub rep: OrbitBox,
    pub rep_text: String,
    pub h: usize,
    pub copies: BigUint,
}

fn subsets(items: &[u32]) -> Vec<Vec<u32>> {
    (0u32..1 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &v)| v).collect())
        .collect()
}

/// Every admissible `(i*, U°, U-, U*)`.
pub fn central_descriptors(k: u32) -> Vec<CentralPieceDescriptor> {
    let all: Vec<u32> = (0..k).collect();
    let mut out = Vec::new();
    for i_star in 0..k {
        let next = (i_star + 1) % k;
        for u_circ in subsets(&all) {
            let rest: Vec<u32> = all.iter().copied().filter(|i| !u_circ.contains(i)).collect();
            for u_minus in subsets(&rest) {
                let mut star_choices = Vec::new();
                if u_minus.contains(&next) {
                    star_choices.push(next);
                }
                if !u_circ.contains(&i_star) && !u_minus.contains(&i_star) {
                    star_choices.push(i_star);
                }
                star_choices.sort_unstable();
                for u_star in subsets(&star_choices) {
                    out.push(CentralPieceDescriptor {
                        i_star,
                        u_circ: u_circ.clone(),
                        u_minus: u_minus.clone(),
                        u_star,
                    });
                }
            }
        }
    }
    out
}

/// Order: `U°` by reverse inclusion (so the `k` pieces with `U° = Z_k` come
/// first), then `U*` by reverse inclusion, then `i*`, then `U-`; inclusion
/// orders are completed by size and then lexicographically.
pub fn central_order_key(d: &CentralPieceDescriptor) -> impl Ord {
    (
        std::cmp::Reverse(d.u_circ.len()),
        std::cmp::Reverse(d.u_circ.clone()),
        std::cmp::Reverse(d.u_star.len()),
        d.i_star,
        d.u_minus.clone(),
        d.u_star.clone(),
    )
}

/// The ordered pieces of `X_{Z_k}` with their handle indices and copy counts.
pub fn central_decomposition(params: &TorusParams) -> Result<Vec<CentralRecord>> {
    params.require_odd()?;
    let mut descriptors = central_descriptors(params.k);
    descriptors.sort_by_cached_key(central_order_key);
    Ok(descriptors
        .into_iter()
        .enumerate()
        .map(|(idx, d)| {
            let factors = d.factors(params);
            let (rep, groups) = grouped_box(params, &factors);
            CentralRecord {
                z: idx + 1,
                h: d.handle_index(params.k),
                rep_text: render_box(params, &rep),
                copies: orbit_copies(&rep),
                descriptor: d,
                factors,
                groups,
                rep,
            }
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct CentralReport {
    pub pieces: usize,
    pub zero_handles: usize,
    pub handle_counts: Vec<BigUint>,
    pub chi_handles: BigInt,
    pub chi_cells: i64,
    /// Pieces whose geometric attaching index differs from `k - |U°| - |U*|`
    /// or whose attachment certificate fails.
    pub failures: Vec<String>,
}

impl CentralReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.chi_handles == BigInt::from(self.chi_cells)
    }
}

/// Checks the central decomposition: handle counts against the cell Euler
/// characteristic and, when `certify_pieces` is set, every attachment
/// geometrically.
pub fn check_central(params: &TorusParams, certify_pieces: bool) -> Result<CentralReport> {
    let records = central_decomposition(params)?;
    let max_h = records.iter().map(|r| r.h).max().unwrap_or(0);
    let mut handle_counts = vec![BigUint::zero(); max_h + 1];
    for r in &records {
        handle_counts[r.h] += &r.copies;
    }
    let full = IndexSet::new(params.k, 0..params.k)?;
    let chi_cells = CellComplex::closure_of(&formula_xi(params, &full)?, params.k).euler();
    let mut failures = Vec::new();
    let k = params.k as usize;
    for r in records.iter().take(k) {
        if r.descriptor.u_circ.len() != k || r.h != 0 {
            failures.push(format!("piece {} is not a central 0-handle", r.z));
        }
    }
    if certify_pieces {
        let pieces: Vec<PieceCells> =
            records.iter().map(|r| PieceCells { factors: r.factors.clone(), groups: r.groups.clone() }).collect();
        for cert in certify(params, &pieces, None)? {
            let expected = records[cert.z - 1].h;
            if !cert.ok() || cert.handle_index() != expected {
                failures.push(format!(
                    "piece {}: attaching index {} (expected {expected}) {:?}",
                    cert.z,
                    cert.handle_index(),
                    cert.violations
                ));
            }
        }
    }
    Ok(CentralReport {
        pieces: records.len(),
        zero_handles: records.iter().filter(|r| r.h == 0).count(),
        chi_handles: chi_handles(&handle_counts),
        handle_counts,
        chi_cells,
        failures,
    })
}

/// `(k-1)`-faces of a `k`-dimensional face set lying in other than exactly
/// two of its `k`-faces, with their incidence counts.
pub fn odd_incidences(faces: &FaceSet, k: u32) -> Vec<(Face, usize)> {
    let mut count: HashMap<u64, usize> = HashMap::new();
    for &key in &faces.faces {
        for f in Face::from_key(key, faces.n).closure(k) {
            if f.dim() + 1 == faces.dim {
                *count.entry(f.key()).or_default() += 1;
            }
        }
    }
    let mut bad: Vec<(Face, usize)> =
        count.into_iter().filter(|&(_, c)| c != 2).map(|(f, c)| (Face::from_key(f, faces.n), c)).collect();
    bad.sort();
    bad
}

/// Every `(k-1)`-face of the central `k`-cell complex lies in exactly two
/// `k`-cells.
pub fn pseudomanifold_check(params: &TorusParams) -> Result<Vec<(Face, usize)>> {
    params.require_odd()?;
    if params.k > 4 {
        return Err(Error::Unsupported(format!("pseudomanifold check is limited to k <= 4, got {}", params.k)));
    }
    let full = IndexSet::new(params.k, 0..params.k)?;
    Ok(odd_incidences(&formula_xi(params, &full)?, params.k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_pieces_are_the_zero_handles() {
        let params = TorusParams::odd(3).unwrap();
        let records = central_decomposition(&params).unwrap();
        let firsts: Vec<u32> = records.iter().take(3).map(|r| r.descriptor.i_star).collect();
        assert_eq!(firsts, vec![0, 1, 2]);
        assert!(records.iter().take(3).all(|r| r.h == 0 && r.descriptor.u_circ.len() == 3));
    }

    #[test]
    fn central_cells_form_a_pseudomanifold() {
        for k in 2..=4 {
            assert!(pseudomanifold_check(&TorusParams::odd(k).unwrap()).unwrap().is_empty());
        }
    }

    #[test]
    fn dropping_a_cell_is_detected() {
        let params = TorusParams::odd(3).unwrap();
        let mut faces = formula_xi(&params, &IndexSet::new(3, 0..3).unwrap()).unwrap();
        let victim = *faces.faces.iter().min().unwrap();
        faces.faces.remove(&victim);
        let bad = odd_incidences(&faces, 3);
        assert_eq!(bad.len(), 2 * 3);
        assert!(bad.iter().all(|(_, c)| *c == 1));
    }

    #[test]
    fn handle_counts_disagree_with_the_cell_euler_characteristic() {
        let r2 = check_central(&TorusParams::odd(2).unwrap(), true).unwrap();
        assert_eq!((r2.chi_handles.clone(), r2.chi_cells), (BigInt::from(2), -4));
        assert!(!r2.failures.is_empty());
        let r3 = check_central(&TorusParams::odd(3).unwrap(), false).unwrap();
        assert_eq!((r3.chi_handles.clone(), r3.chi_cells), (BigInt::from(-30), 0));
    }

    #[test]
    fn arcs_tile_each_unit_interval() {
        let params = TorusParams::odd(3).unwrap();
        for d in central_descriptors(3) {
            for i in 0..3 {
                let a = d.arc(3, i);
                let top = 6 * i as i32;
                assert!(a.lo >= top - 6 && a.lo + a.len <= top, "{d:?} {i}");
            }
            assert_eq!(d.factors(&params).len(), 5);
        }
    }
}
