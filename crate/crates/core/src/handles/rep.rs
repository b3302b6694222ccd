//! Factor lists of pieces `Y_z` and their grouped representatives `Y_z^*`.

use super::descriptor::{PieceDescriptor, UState};
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::torus::{Factor, Group, OrbitBox, TorusParams, SCALE};
use serde::Serialize;

/// Which sub-interval of `[i-1, i]` a factor `ρ_i` is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RhoKind {
    /// `[i-1, i-2/3]`
    UMinus,
    /// `[i-2/3, i-1/3]`
    UCirc,
    /// `[i-1/3, i]`
    UPlus,
    /// `[i-1, i-1/2]`
    VMinus,
    /// `[i-1/2, i]`
    VPlus,
    /// `[i-1, i]`
    Full,
}

/// Where a factor of a piece comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FactorKind {
    /// The point `{i}`.
    Singleton(u32),
    /// `ρ_i` for `i ∈ I`.
    Rho(u32, RhoKind),
    /// One of the squared intervals `[b, j]` after a block with maximum `b`.
    Hat(u32),
    /// The interval `[b, c-1]` closing the gap after a block with maximum
    /// `b` when the next block minimum `c` is not in `J`.
    Tail(u32),
    /// A factor given directly as data.
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TaggedFactor {
    pub factor: Factor,
    pub kind: FactorKind,
}

fn rho(d: &PieceDescriptor, i: u32) -> RhoKind {
    if let Some(state) = d.u_state(i) {
        return match state {
            UState::Minus => RhoKind::UMinus,
            UState::Circ => RhoKind::UCirc,
            UState::Plus => RhoKind::UPlus,
        };
    }
    if d.v.contains(&i) {
        if d.in_v_minus(i) {
            RhoKind::VMinus
        } else {
            RhoKind::VPlus
        }
    } else {
        RhoKind::Full
    }
}

fn rho_factor(i: u32, kind: RhoKind) -> Factor {
    let top = SCALE * i as i32;
    let (lo, hi) = match kind {
        RhoKind::UMinus => (top - 6, top - 4),
        RhoKind::UCirc => (top - 4, top - 2),
        RhoKind::UPlus => (top - 2, top),
        RhoKind::VMinus => (top - 6, top - 3),
        RhoKind::VPlus => (top - 3, top),
        RhoKind::Full => (top - 6, top),
    };
    Factor::interval(lo, hi)
}

/// The `n` factors of the piece with descriptor `d`, in block order.
pub fn piece_factors(params: &TorusParams, set: &IndexSet, d: &PieceDescriptor) -> Result<Vec<TaggedFactor>> {
    params.require_odd()?;
    let k = params.k;
    let blocks = set.blocks();
    let mut out = Vec::with_capacity(params.n);
    let mut push = |factor: Factor, kind: FactorKind| out.push(TaggedFactor { factor: factor.reduced(params), kind });
    for (r, block) in blocks.iter().enumerate() {
        let (a, b) = (block.min, block.max);
        let c = if r + 1 < blocks.len() { blocks[r + 1].min } else { k };
        let c_in_j = d.in_j(c % k);
        if d.in_j(a) {
            let kind = rho(d, a);
            push(rho_factor(a, kind), FactorKind::Rho(a, kind));
            if d.i_star != a {
                push(Factor::unit_point(a as i32), FactorKind::Singleton(a));
            }
        } else if d.i_star != a {
            push(Factor::unit_point(a as i32), FactorKind::Singleton(a));
        }
        for i in a + 1..=b {
            let kind = rho(d, i);
            push(rho_factor(i, kind), FactorKind::Rho(i, kind));
            if i != d.i_star {
                push(Factor::unit_point(i as i32), FactorKind::Singleton(i));
            }
        }
        for j in b + 1..c {
            push(Factor::units(b as i32, j as i32), FactorKind::Hat(b));
            push(Factor::units(b as i32, j as i32), FactorKind::Hat(b));
        }
        if !c_in_j {
            if d.v.contains(&(c % k)) {
                return Err(Error::Consistency(format!("block minimum {c} outside J lies in V")));
            }
            push(Factor::units(b as i32, c as i32 - 1), FactorKind::Tail(b));
        }
    }
    if out.len() != params.n {
        return Err(Error::Consistency(format!("piece has {} factors, expected {}", out.len(), params.n)));
    }
    Ok(out)
}

/// The coarsest partition of positions in which `χ_r ⊂ χ_s` forces `r ~ s`,
/// each class listed in increasing position order, classes ordered by their
/// first position.
pub fn containment_classes(params: &TorusParams, factors: &[Factor]) -> Vec<Vec<usize>> {
    let m = params.modulus();
    let n = factors.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for r in 0..n {
        for s in 0..n {
            if r != s && factors[s].contains(&factors[r], m) {
                let (a, b) = (find(&mut parent, r), find(&mut parent, s));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; n];
    for p in 0..n {
        let root = find(&mut parent, p);
        match root_slot[root] {
            Some(slot) => classes[slot].push(p),
            None => {
                root_slot[root] = Some(classes.len());
                classes.push(vec![p]);
            }
        }
    }
    classes
}

/// `Y_z^*` as an orbit box over the containment classes.
pub fn grouped_box(params: &TorusParams, factors: &[Factor]) -> (OrbitBox, Vec<Vec<usize>>) {
    let classes = containment_classes(params, factors);
    let groups = classes
        .iter()
        .map(|c| Group { positions: c.clone(), factors: c.iter().map(|&p| factors[p]).collect() })
        .collect();
    (OrbitBox { n: factors.len(), groups }, classes)
}

const GREEK: [&str; 16] = ["α", "β", "γ", "δ", "ε", "ζ", "η", "θ", "ι", "κ", "λ", "μ", "ν", "ξ", "ο", "π"];
const SUPERSCRIPT: [&str; 10] = ["⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"];

fn sixths(v: i32) -> String {
    if v % SCALE == 0 {
        return (v / SCALE).to_string();
    }
    let g = num_integer::gcd(v.abs(), SCALE);
    format!("{}/{}", v / g, SCALE / g)
}

/// Name of a factor in the Greek-letter notation (`α = [0,1]`, `β⁻` the
/// lower half of `β`, `γ°₃` the middle third of `γ`).
pub fn factor_name(params: &TorusParams, f: &Factor) -> String {
    let m = params.modulus();
    let lo = f.lo.rem_euclid(m);
    if f.is_point() {
        return sixths(lo);
    }
    let unit = (lo / SCALE) as usize;
    let offset = lo % SCALE;
    let letter = GREEK.get(unit).copied().unwrap_or("?");
    match (offset, f.len) {
        (0, 6) => letter.to_string(),
        (0, 3) => format!("{letter}⁻"),
        (3, 3) => format!("{letter}⁺"),
        (0, 2) => format!("{letter}⁻₃"),
        (2, 2) => format!("{letter}°₃"),
        (4, 2) => format!("{letter}⁺₃"),
        _ => format!("[{},{}]", sixths(lo), sixths(lo + f.len)),
    }
}

fn superscript(p: usize) -> String {
    p.to_string().chars().map(|c| SUPERSCRIPT[c.to_digit(10).unwrap() as usize]).collect()
}

fn render_run(params: &TorusParams, factors: &[Factor]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < factors.len() {
        let mut j = i + 1;
        while j < factors.len() && factors[j] == factors[i] {
            j += 1;
        }
        out.push_str(&factor_name(params, &factors[i]));
        if j - i > 1 {
            out.push_str(&superscript(j - i));
        }
        i = j;
    }
    out
}

/// Renders a grouped box, wrapping groups of two or more factors in `⟪ ⟫`.
pub fn render_box(params: &TorusParams, b: &OrbitBox) -> String {
    let mut groups: Vec<&Group> = b.groups.iter().collect();
    groups.sort_by_key(|g| g.positions.iter().min().copied());
    groups
        .iter()
        .map(|g| {
            let body = render_run(params, &g.factors);
            if g.factors.len() > 1 {
                format!("⟪{body}⟫")
            } else {
                body
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handles::descriptor::{enumerate_pieces, EnumerationOrder};

    #[test]
    fn first_rep_of_t9() {
        let params = TorusParams::odd(5).unwrap();
        let set = IndexSet::new(5, [0, 1, 2, 3]).unwrap();
        let pieces = enumerate_pieces(&set, &EnumerationOrder::default()).unwrap();
        let tagged = piece_factors(&params, &set, &pieces[0]).unwrap();
        let factors: Vec<Factor> = tagged.iter().map(|t| t.factor).collect();
        let (rep, classes) = grouped_box(&params, &factors);
        assert_eq!(render_box(&params, &rep), "α⁻1β°₃2⟪γ⁺3δ³⟫");
        assert_eq!(classes, vec![vec![0], vec![1], vec![2], vec![3], vec![4, 5, 6, 7, 8]]);
        let twelfth = piece_factors(&params, &set, &pieces[11]).unwrap();
        let factors: Vec<Factor> = twelfth.iter().map(|t| t.factor).collect();
        let (rep, _) = grouped_box(&params, &factors);
        assert_eq!(render_box(&params, &rep), "⟪α⁺1⟫⟪β⁺₃2γ⁻⟫⟪3δ³⟫");
    }

    #[test]
    fn second_piece_of_t5_point() {
        let params = TorusParams::odd(3).unwrap();
        let set = IndexSet::new(3, [0]).unwrap();
        let pieces = enumerate_pieces(&set, &EnumerationOrder::default()).unwrap();
        assert_eq!(pieces.len(), 2);
        let render = |d| {
            let f: Vec<Factor> = piece_factors(&params, &set, d).unwrap().iter().map(|t| t.factor).collect();
            render_box(&params, &grouped_box(&params, &f).0)
        };
        assert_eq!(render(&pieces[0]), "⟪α²[0,2]³⟫");
        assert_eq!(render(&pieces[1]), "γ⟪α²[0,2]²⟫");
    }
}
