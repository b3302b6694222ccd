//! Handle decompositions of the intersections `X_I`.

pub mod attach;
pub mod central;
pub mod classify;
pub mod descriptor;
pub mod euler;
pub mod rep;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::torus::{orbit_intersection, Factor, OrbitBox, TorusParams};
use classify::{classify_groups, handle_index, GroupInfo};
use descriptor::{enumerate_pieces, EnumerationOrder, PieceDescriptor};
use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use rep::{grouped_box, piece_factors, render_box, TaggedFactor};

#[derive(Clone, Debug)]
pub struct HandleRecord {
    /// 1-based position in the order.
    pub z: usize,
    /// Absent for the hand-listed pieces of `T^4`.
    pub descriptor: Option<PieceDescriptor>,
    pub factors: Vec<TaggedFactor>,
    pub rep: OrbitBox,
    pub rep_text: String,
    pub groups: Vec<GroupInfo>,
    pub h: usize,
    /// Number of distinct coordinate permutations of `Y_z^*`, i.e. the number
    /// of `h`-handles attached at this step.
    pub copies: BigUint,
    pub glue_to: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub params: TorusParams,
    pub set: IndexSet,
    pub records: Vec<HandleRecord>,
}

impl Decomposition {
    pub fn max_h(&self) -> usize {
        self.records.iter().map(|r| r.h).max().unwrap_or(0)
    }

    /// `(z, h, glue_to)` lines, one per record.
    pub fn summary_lines(&self) -> Vec<String> {
        self.records.iter().map(|r| summary_line(r.z, r.h, &r.glue_to)).collect()
    }
}

pub fn summary_line(z: usize, h: usize, glue_to: &[usize]) -> String {
    let glue: Vec<String> = glue_to.iter().map(usize::to_string).collect();
    format!("{z} {h} {}", glue.join(","))
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `n! / (∏ |R_r|! · ∏ (multiplicity of identical groups)!)`.
pub fn orbit_copies(rep: &OrbitBox) -> BigUint {
    let mut denom = BigUint::one();
    let mut keys: Vec<Vec<Factor>> = rep
        .groups
        .iter()
        .map(|g| {
            let mut f = g.factors.clone();
            f.sort_by_key(|x| (x.lo, x.len));
            f
        })
        .collect();
    for g in &rep.groups {
        denom *= factorial(g.factors.len());
    }
    keys.sort_by_key(|f| f.iter().map(|x| (x.lo, x.len)).collect::<Vec<_>>());
    let mut i = 0;
    while i < keys.len() {
        let mut j = i + 1;
        while j < keys.len() && keys[j] == keys[i] {
            j += 1;
        }
        denom *= factorial(j - i);
        i = j;
    }
    factorial(rep.n) / denom
}

/// Builds the records (without gluing) for the given descriptors.
fn build_records(params: &TorusParams, set: &IndexSet, pieces: Vec<PieceDescriptor>) -> Result<Vec<HandleRecord>> {
    pieces
        .into_par_iter()
        .enumerate()
        .map(|(idx, d)| {
            let factors = piece_factors(params, set, &d)?;
            let plain: Vec<Factor> = factors.iter().map(|t| t.factor).collect();
            let (rep, classes) = grouped_box(params, &plain);
            let groups = classify_groups(set, &d, &factors, &classes)?;
            let h = handle_index(&groups);
            Ok(HandleRecord {
                z: idx + 1,
                rep_text: render_box(params, &rep),
                copies: orbit_copies(&rep),
                descriptor: Some(d),
                factors,
                rep,
                groups,
                h,
                glue_to: Vec::new(),
            })
        })
        .collect()
}

/// Fills `glue_to`: `w < z` is listed when `Y_z^*` meets the orbit of `Y_w`
/// in codimension one inside the pieces.
pub fn compute_glue(params: &TorusParams, records: &mut [HandleRecord], target_dim: usize) -> Result<()> {
    let orbits: Vec<OrbitBox> = records.iter().map(|r| OrbitBox::single(r.rep.all_factors())).collect();
    let glue: Vec<Vec<usize>> = records
        .par_iter()
        .enumerate()
        .map(|(zi, rec)| {
            let mut out = Vec::new();
            for (wi, orbit) in orbits.iter().enumerate().take(zi) {
                if orbit_intersection(params, &rec.rep, orbit)? == Some(target_dim) {
                    out.push(wi + 1);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    for (rec, g) in records.iter_mut().zip(glue) {
        rec.glue_to = g;
    }
    Ok(())
}

/// The handle decomposition of `X_I` for a simple proper `I`, truncated to
/// the first `limit` pieces if given.
pub fn decompose(
    params: &TorusParams,
    set: &IndexSet,
    order: &EnumerationOrder,
    limit: Option<usize>,
) -> Result<Decomposition> {
    params.require_odd()?;
    if set.k != params.k {
        return Err(Error::InvalidParams(format!("index set lives in Z_{} but k = {}", set.k, params.k)));
    }
    let mut pieces = enumerate_pieces(set, order)?;
    if let Some(limit) = limit {
        pieces.truncate(limit);
    }
    let mut records = build_records(params, set, pieces)?;
    compute_glue(params, &mut records, params.n - set.len())?;
    Ok(Decomposition { params: *params, set: set.clone(), records })
}

/// The hand-listed decomposition of `X_0` or `X_0 ∩ X_1` for the trisection
/// of `T^4`; classes come from the exhaustive attachment certificate.
pub fn decompose_t4(set: &IndexSet) -> Result<Decomposition> {
    let params = TorusParams::four();
    let iv = |a: i32, b: i32| Factor::units(a, b);
    let pt = Factor::unit_point;
    let lists: Vec<Vec<Factor>> = match set.elements.as_slice() {
        [0] => vec![
            vec![iv(0, 1), iv(0, 1), iv(0, 2), iv(0, 2)],
            vec![iv(0, 1), iv(0, 1), iv(0, 2), iv(2, 3)],
        ],
        [0, 1] => vec![
            vec![iv(0, 1), pt(1), iv(1, 2), iv(1, 2)],
            vec![pt(0), iv(0, 1), iv(1, 2), iv(1, 2)],
            vec![iv(0, 1), pt(1), iv(1, 2), iv(2, 3)],
        ],
        _ => return Err(Error::Unsupported(format!("no T^4 decomposition for {set}"))),
    };
    let mut pieces = Vec::new();
    let mut boxes = Vec::new();
    for list in &lists {
        let factors: Vec<Factor> = list.iter().map(|f| f.reduced(&params)).collect();
        let (rep, classes) = grouped_box(&params, &factors);
        pieces.push(attach::PieceCells { factors: factors.clone(), groups: classes.clone() });
        boxes.push((factors, rep, classes));
    }
    let certs = attach::certify(&params, &pieces, None)?;
    let mut records = Vec::new();
    for (idx, ((factors, rep, classes), cert)) in boxes.into_iter().zip(certs).enumerate() {
        if !cert.ok() {
            return Err(Error::Consistency(format!("T^4 piece {} fails: {:?}", idx + 1, cert.violations)));
        }
        let groups: Vec<GroupInfo> = classes
            .iter()
            .enumerate()
            .map(|(gi, positions)| GroupInfo {
                positions: positions.clone(),
                dim: cert.group_dims[gi],
                class: if cert.attaching_groups.contains(&gi) { classify::GroupClass::A } else { classify::GroupClass::B },
                row: None,
            })
            .collect();
        records.push(HandleRecord {
            z: idx + 1,
            descriptor: None,
            factors: factors.iter().map(|&factor| TaggedFactor { factor, kind: rep::FactorKind::Plain }).collect(),
            rep_text: render_box(&params, &rep),
            copies: orbit_copies(&rep),
            h: cert.handle_index(),
            rep,
            groups,
            glue_to: Vec::new(),
        });
    }
    compute_glue(&params, &mut records, params.n - set.len())?;
    Ok(Decomposition { params, set: set.clone(), records })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BoundReport {
    pub observed_max: usize,
    pub bound: usize,
    /// Pieces whose index exceeds `|I|`.
    pub violations: Vec<usize>,
}

impl BoundReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every handle index is at most `|I|`.
pub fn bound_check(d: &Decomposition) -> BoundReport {
    let bound = d.set.len();
    BoundReport {
        observed_max: d.max_h(),
        bound,
        violations: d.records.iter().filter(|r| r.h > bound).map(|r| r.z).collect(),
    }
}

/// Exhaustive attachment certificates for every piece of `d`, requiring the
/// geometric attaching groups to be exactly the class-(A) groups.
pub fn certify_decomposition(d: &Decomposition) -> Result<Vec<attach::Certificate>> {
    let pieces: Vec<attach::PieceCells> = d
        .records
        .iter()
        .map(|r| attach::PieceCells { factors: r.factors.iter().map(|t| t.factor).collect(), groups: r.groups.iter().map(|g| g.positions.clone()).collect() })
        .collect();
    let rule: Vec<Vec<bool>> =
        d.records.iter().map(|r| r.groups.iter().map(|g| g.class == classify::GroupClass::A).collect()).collect();
    attach::certify(&d.params, &pieces, Some(&rule))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(k: u32, elems: &[u32]) -> Decomposition {
        let params = TorusParams::odd(k).unwrap();
        let set = IndexSet::new(k, elems.iter().copied()).unwrap();
        decompose(&params, &set, &EnumerationOrder::default(), None).unwrap()
    }

    #[test]
    fn t3_single_piece_is_genus_three_handlebody() {
        let d = run(2, &[0]);
        assert_eq!(d.summary_lines(), vec!["1 0 ", "2 1 1"]);
        assert_eq!(d.records[1].copies, BigUint::from(3u32));
    }

    #[test]
    fn t5_pair() {
        let d = run(3, &[0, 1]);
        assert_eq!(d.records.len(), 4);
        assert_eq!(d.records[3].h, 2);
        assert_eq!(d.records[3].glue_to, vec![2, 3]);
    }

    #[test]
    fn handle_indices_reach_the_bound() {
        for (k, elems, max) in [(2, vec![0], 1), (4, vec![0, 1, 2], 3), (3, vec![0], 1)] {
            let r = bound_check(&run(k, &elems));
            assert!(r.ok());
            assert_eq!((r.observed_max, r.bound), (max, elems.len()));
        }
    }
}
