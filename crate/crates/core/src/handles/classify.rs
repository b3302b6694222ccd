//! Class (A)/(B) of each group of `Y_z^*`, checked against the catalogue of
//! admissible group shapes.

use super::descriptor::{flip_is_earlier, PieceDescriptor};
use super::rep::{FactorKind, RhoKind, TaggedFactor};
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupClass {
    A,
    B,
}

/// The catalogue row a group matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ShapeRow {
    /// `[i*-1, i*]` with `i* ∈ J`.
    FullAtStar,
    /// `[i-1, i-1/2]` with `i ∈ J ∩ V-`.
    LowerHalfInJ,
    /// `[i*, i*+1/2]`.
    HalfAfterStar,
    /// `[i-2/3, i-1/3]`.
    MiddleThird,
    /// `∏[i*, j]^2` with or without the closing interval.
    HatsAtStar,
    /// `{i}` with half intervals on one or both sides.
    HalvesAroundPoint,
    /// `{i}` with optional full, third or half neighbours.
    PointWithNeighbours,
    /// `{b}` followed by the squared intervals of its gap.
    PointWithHats,
}

impl ShapeRow {
    /// The class fixed by the row, if it does not depend on the `V-` order.
    pub fn fixed_class(self) -> Option<GroupClass> {
        match self {
            ShapeRow::FullAtStar | ShapeRow::LowerHalfInJ | ShapeRow::PointWithNeighbours => Some(GroupClass::A),
            ShapeRow::HalfAfterStar | ShapeRow::MiddleThird | ShapeRow::HatsAtStar | ShapeRow::PointWithHats => {
                Some(GroupClass::B)
            }
            ShapeRow::HalvesAroundPoint => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupInfo {
    pub positions: Vec<usize>,
    pub dim: usize,
    pub class: GroupClass,
    /// Catalogue row; absent for hand-listed pieces.
    pub row: Option<ShapeRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Left {
    None,
    Full,
    Half,
    Third,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Right {
    None,
    Full,
    Half,
    Third,
}

struct Memberships<'a> {
    set: &'a IndexSet,
    d: &'a PieceDescriptor,
}

impl Memberships<'_> {
    fn t_not_j(&self, i: u32) -> bool {
        self.set.block_minima().contains(&i) && !self.d.in_j(i)
    }
    fn u_minus(&self, i: u32) -> bool {
        self.d.u_minus.contains(&i)
    }
    fn u_circ(&self, i: u32) -> bool {
        self.d.u_circ.contains(&i)
    }
    fn u_plus(&self, i: u32) -> bool {
        self.d.u_plus().contains(&i)
    }
    fn v_minus(&self, i: u32) -> bool {
        self.d.in_v_minus(i)
    }
    fn v_plus(&self, i: u32) -> bool {
        self.d.in_v_plus(i)
    }
    /// `i+1 ∈ U° ∪ U+ ∪ V+`
    fn right_upper(&self, i: u32) -> bool {
        self.u_circ(i + 1) || self.u_plus(i + 1) || self.v_plus(i + 1)
    }
    /// `i ∈ U- ∪ U° ∪ V-`
    fn left_lower(&self, i: u32) -> bool {
        self.u_minus(i) || self.u_circ(i) || self.v_minus(i)
    }
}

fn bad(msg: String) -> Error {
    Error::Consistency(format!("unlisted group shape: {msg}"))
}

/// Matches one group against the catalogue.
fn match_row(set: &IndexSet, d: &PieceDescriptor, group: &[TaggedFactor]) -> Result<ShapeRow> {
    let m = Memberships { set, d };
    let star = d.i_star;
    let singletons: Vec<u32> = group
        .iter()
        .filter_map(|t| if let FactorKind::Singleton(i) = t.kind { Some(i) } else { None })
        .collect();
    let hats = group.iter().filter(|t| matches!(t.kind, FactorKind::Hat(_) | FactorKind::Tail(_))).count();
    let block_of = |i: u32| set.blocks().into_iter().find(|b| b.contains(i)).expect("index in I");
    match singletons.as_slice() {
        [] => {
            if hats == group.len() {
                let owner = group.iter().find_map(|t| match t.kind {
                    FactorKind::Hat(b) | FactorKind::Tail(b) => Some(b),
                    _ => None,
                });
                return if owner == Some(star) {
                    Ok(ShapeRow::HatsAtStar)
                } else {
                    Err(bad(format!("hats after {owner:?} without a point, i* = {star}")))
                };
            }
            let [only] = group else {
                return Err(bad(format!("{} factors without a point", group.len())));
            };
            match only.kind {
                FactorKind::Rho(i, RhoKind::Full) if i == star && d.in_j(i) => Ok(ShapeRow::FullAtStar),
                FactorKind::Rho(i, RhoKind::VMinus) if d.in_j(i) && !set.contains(i + 1) => {
                    Ok(ShapeRow::LowerHalfInJ)
                }
                FactorKind::Rho(i, RhoKind::VMinus) if i == star + 1 => {
                    let b = block_of(star).max;
                    if star + 2 <= b {
                        Ok(ShapeRow::HalfAfterStar)
                    } else {
                        Err(bad(format!("[i*, i*+1/2] with i* = {star} = max - 1")))
                    }
                }
                FactorKind::Rho(_, RhoKind::UCirc) => Ok(ShapeRow::MiddleThird),
                other => Err(bad(format!("lone factor {other:?}"))),
            }
        }
        [i] => {
            let i = *i;
            let mut left = Left::None;
            let mut right = Right::None;
            for t in group {
                match t.kind {
                    FactorKind::Singleton(_) | FactorKind::Hat(_) | FactorKind::Tail(_) => {}
                    FactorKind::Rho(j, kind) if j == i => {
                        left = match kind {
                            RhoKind::Full => Left::Full,
                            RhoKind::VPlus => Left::Half,
                            RhoKind::UPlus => Left::Third,
                            other => return Err(bad(format!("{other:?} of {i} beside {{{i}}}"))),
                        }
                    }
                    FactorKind::Rho(j, kind) if j == i + 1 => {
                        right = match kind {
                            RhoKind::Full => Right::Full,
                            RhoKind::VMinus => Right::Half,
                            RhoKind::UMinus => Right::Third,
                            other => return Err(bad(format!("{other:?} of {j} beside {{{i}}}"))),
                        }
                    }
                    other => return Err(bad(format!("{other:?} beside {{{i}}}"))),
                }
            }
            let expected_len = 1 + usize::from(left != Left::None) + usize::from(right != Right::None) + hats;
            if expected_len != group.len() {
                return Err(bad(format!("repeated factors beside {{{i}}}")));
            }
            if hats > 0 {
                let block = block_of(i);
                if i != block.max || right != Right::None {
                    return Err(bad(format!("hats after {{{i}}} which is not a block maximum")));
                }
                let ok = match left {
                    Left::Full => star + 1 == i && block.contains(star),
                    Left::Half => m.v_plus(i),
                    Left::None => m.v_minus(i) || (block.min == block.max && m.t_not_j(i)),
                    Left::Third => false,
                };
                return if ok { Ok(ShapeRow::PointWithHats) } else { Err(bad(format!("{left:?} {{{i}}} with hats"))) };
            }
            let left_ok = match left {
                Left::None => m.t_not_j(i) || m.left_lower(i),
                Left::Full => d.in_j(i) || (star + 1 == i && block_of(i).contains(star)),
                Left::Half => m.v_plus(i),
                Left::Third => m.u_plus(i),
            };
            if !left_ok {
                return Err(bad(format!("left side {left:?} of {{{i}}}")));
            }
            let halves_only = matches!(left, Left::None | Left::Half) && matches!(right, Right::None | Right::Half);
            if halves_only && (left == Left::Half || right == Right::Half) {
                let right_ok = match right {
                    Right::Half => m.v_minus(i + 1),
                    _ => m.right_upper(i),
                };
                return if right_ok {
                    Ok(ShapeRow::HalvesAroundPoint)
                } else {
                    Err(bad(format!("half intervals around {{{i}}}")))
                };
            }
            let right_ok = match right {
                Right::None => m.right_upper(i),
                Right::Full => star == i + 1,
                Right::Half => m.v_minus(i + 1),
                Right::Third => m.u_minus(i + 1),
            };
            if !right_ok {
                return Err(bad(format!("right side {right:?} of {{{i}}}")));
            }
            match (left, right) {
                (Left::Full, Right::None) if !d.in_j(i) => Err(bad(format!("[i-1,i]{{{i}}} with {i} outside J"))),
                (Left::Half, Right::Third) if !(i == star + 1 && i < block_of(i).max) => {
                    Err(bad(format!("[i-1/2,i]{{{i}}}[i,i+1/3] away from i*")))
                }
                _ => Ok(ShapeRow::PointWithNeighbours),
            }
        }
        many => Err(bad(format!("several points {many:?} in one group"))),
    }
}

/// Class by the rule: hats, middle thirds and `[i*, i*+1/2]` are (B); a
/// point with half intervals is (B) exactly when flipping the adjacent `V`
/// element does not move earlier in the `V-` order; everything else is (A).
fn rule_class(set: &IndexSet, d: &PieceDescriptor, group: &[TaggedFactor]) -> Result<GroupClass> {
    if group.iter().any(|t| matches!(t.kind, FactorKind::Hat(_) | FactorKind::Tail(_))) {
        return Ok(GroupClass::B);
    }
    let point = group.iter().find_map(|t| if let FactorKind::Singleton(i) = t.kind { Some(i) } else { None });
    match point {
        None => match group {
            [t] => Ok(match t.kind {
                FactorKind::Rho(_, RhoKind::UCirc) => GroupClass::B,
                FactorKind::Rho(i, RhoKind::VMinus) if i == d.i_star + 1 => GroupClass::B,
                _ => GroupClass::A,
            }),
            _ => Err(Error::Consistency("group of intervals without a point".into())),
        },
        Some(i) => {
            let mut flips = Vec::new();
            for t in group {
                match t.kind {
                    FactorKind::Singleton(_) => {}
                    FactorKind::Rho(j, RhoKind::VPlus) if j == i => flips.push(i),
                    FactorKind::Rho(j, RhoKind::VMinus) if j == i + 1 => flips.push(i + 1),
                    _ => return Ok(GroupClass::A),
                }
            }
            if flips.is_empty() {
                return Ok(GroupClass::A);
            }
            let earlier: Vec<bool> = flips.iter().map(|&f| flip_is_earlier(set, d, f)).collect();
            if earlier.iter().any(|&e| e != earlier[0]) {
                return Err(Error::Consistency(format!("flips around {{{i}}} disagree")));
            }
            Ok(if earlier[0] { GroupClass::A } else { GroupClass::B })
        }
    }
}

/// Classifies every group (given as position lists into `tagged`).
pub fn classify_groups(
    set: &IndexSet,
    d: &PieceDescriptor,
    tagged: &[TaggedFactor],
    classes: &[Vec<usize>],
) -> Result<Vec<GroupInfo>> {
    classes
        .iter()
        .map(|positions| {
            let group: Vec<TaggedFactor> = positions.iter().map(|&p| tagged[p]).collect();
            let row = match_row(set, d, &group)?;
            let class = rule_class(set, d, &group)?;
            if let Some(fixed) = row.fixed_class() {
                if fixed != class {
                    return Err(Error::Consistency(format!("row {row:?} is {fixed:?} but rule gives {class:?}")));
                }
            }
            let dim = group.iter().map(|t| t.factor.dim()).sum();
            Ok(GroupInfo { positions: positions.clone(), dim, class, row: Some(row) })
        })
        .collect()
}

/// Handle index: total dimension of the class-(A) groups.
pub fn handle_index(groups: &[GroupInfo]) -> usize {
    groups.iter().filter(|g| g.class == GroupClass::A).map(|g| g.dim).sum()
}
