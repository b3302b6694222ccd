//! Directed cube complexes: cubes glued face-to-face by coordinate
//! permutations, their quotient cell structure, homology, vertex links and
//! the lift of the torus multisection.

mod lift;
mod link;
mod quotient;
pub mod snf;

pub use lift::{lift_multisection, LiftReport, MAX_LIFT_DIM};
pub use link::{vertex_link_check, LinkVerdict};
pub use quotient::{homology, ChainComplex, HomologyGroup, Quotient};

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// `x ∈ face+i` of cube `from` is glued to `y ∈ face-j` of cube `to` with
/// `y_{|perm[r]|} = x_r` (reversed when `perm[r] < 0`) and `y_j = 0`.
/// Coordinates are 1-based, cubes 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub from: usize,
    pub from_sign: Sign,
    pub from_axis: usize,
    pub to: usize,
    pub to_sign: Sign,
    pub to_axis: usize,
    pub perm: Vec<i32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    /// The face `x_i = 1`.
    Plus,
    /// The face `x_i = 0`.
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl Gluing {
    /// Target coordinate (0-based) of source coordinate `r` (0-based) and
    /// whether it is reversed.
    pub fn image(&self, r: usize) -> (usize, bool) {
        let p = self.perm[r];
        (p.unsigned_abs() as usize - 1, p < 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedCubeComplex {
    pub n: usize,
    pub cubes: usize,
    pub gluings: Vec<Gluing>,
}

impl DirectedCubeComplex {
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut gluings = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
            let words: Vec<&str> = line.split_whitespace().collect();
            match header {
                None => {
                    let ["n", n, "cubes", c] = words.as_slice() else {
                        return Err(err("expected `n <dim> cubes <count>`"));
                    };
                    let n: usize = n.parse().map_err(|_| err("bad dimension"))?;
                    let c: usize = c.parse().map_err(|_| err("bad cube count"))?;
                    if n == 0 || n > 8 || c == 0 {
                        return Err(err("dimension must be 1..=8 and the cube count positive"));
                    }
                    header = Some((n, c));
                }
                Some((n, _)) => {
                    let [a, fa, "->", b, fb, "perm", p] = words.as_slice() else {
                        return Err(err("expected `<a> face±i -> <b> face±j perm <p1,...,pn>`"));
                    };
                    let (from_sign, from_axis) = parse_face(fa).ok_or_else(|| err("bad source face"))?;
                    let (to_sign, to_axis) = parse_face(fb).ok_or_else(|| err("bad target face"))?;
                    let perm: Vec<i32> = p
                        .split(',')
                        .map(|s| s.trim().parse::<i32>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| err("bad permutation"))?;
                    if perm.len() != n || perm.iter().any(|&v| v == 0 || v.unsigned_abs() as usize > n) {
                        return Err(err("permutation must list n entries in ±1..=n"));
                    }
                    if from_axis == 0 || from_axis > n || to_axis == 0 || to_axis > n {
                        return Err(err("face coordinate out of range"));
                    }
                    gluings.push(Gluing {
                        from: a.parse().map_err(|_| err("bad cube index"))?,
                        from_sign,
                        from_axis,
                        to: b.parse().map_err(|_| err("bad cube index"))?,
                        to_sign,
                        to_axis,
                        perm,
                    });
                }
            }
        }
        let (n, cubes) = header.ok_or(Error::Parse { line: 0, msg: "empty complex".into() })?;
        if let Some(g) = gluings.iter().find(|g| g.from >= cubes || g.to >= cubes) {
            return Err(Error::InvalidComplex(format!("cube index out of range in {g}")));
        }
        Ok(Self { n, cubes, gluings })
    }

    /// One cube with `face+i` glued to `face-σ(i)` by `y_{σ(r)} = x_r`.
    /// `sigma` is 1-based.
    pub fn from_permutation(sigma: &[usize]) -> Result<Self> {
        let n = sigma.len();
        let mut seen = vec![false; n + 1];
        for &s in sigma {
            if s == 0 || s > n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidParams(format!("{sigma:?} is not a permutation of 1..={n}")));
            }
        }
        let perm: Vec<i32> = sigma.iter().map(|&s| s as i32).collect();
        let gluings = (1..=n)
            .map(|i| Gluing {
                from: 0,
                from_sign: Sign::Plus,
                from_axis: i,
                to: 0,
                to_sign: Sign::Minus,
                to_axis: sigma[i - 1],
                perm: perm.clone(),
            })
            .collect();
        Ok(Self { n, cubes: 1, gluings })
    }

    /// The standard structure on `T^n` glued from `copies` cubes stacked
    /// along the first coordinate.
    pub fn stacked_torus(n: usize, copies: usize) -> Self {
        let id: Vec<i32> = (1..=n as i32).collect();
        let mut gluings = Vec::new();
        for c in 0..copies {
            for i in 1..=n {
                let to = if i == 1 { (c + 1) % copies } else { c };
                gluings.push(Gluing {
                    from: c,
                    from_sign: Sign::Plus,
                    from_axis: i,
                    to,
                    to_sign: Sign::Minus,
                    to_axis: i,
                    perm: id.clone(),
                });
            }
        }
        Self { n, cubes: copies, gluings }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {} cubes {}\n", self.n, self.cubes);
        for g in &self.gluings {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Structural checks: positive-to-negative pairing, permutations sending
    /// the glued axis to the target axis, no reversed coordinates, and every
    /// facet glued exactly once.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut uses: HashMap<(usize, Sign, usize), usize> = HashMap::new();
        for (idx, g) in self.gluings.iter().enumerate() {
            if g.from_sign != Sign::Plus || g.to_sign != Sign::Minus {
                violations.push(format!("gluing {}: `{g}` does not send a face+ to a face-", idx + 1));
            }
            let mut targets: Vec<usize> = g.perm.iter().map(|p| p.unsigned_abs() as usize).collect();
            targets.sort_unstable();
            if targets != (1..=self.n).collect::<Vec<_>>() {
                violations.push(format!("gluing {}: {:?} is not a permutation", idx + 1, g.perm));
            }
            if g.perm[g.from_axis - 1].unsigned_abs() as usize != g.to_axis {
                violations.push(format!("gluing {}: axis {} is not sent to axis {}", idx + 1, g.from_axis, g.to_axis));
            }
            let reversed: Vec<usize> = (0..self.n).filter(|&r| g.perm[r] < 0 && r + 1 != g.from_axis).map(|r| r + 1).collect();
            if !reversed.is_empty() {
                violations.push(format!("gluing {}: reverses the edge orientation of coordinates {reversed:?}", idx + 1));
            }
            *uses.entry((g.from, g.from_sign, g.from_axis)).or_default() += 1;
            *uses.entry((g.to, g.to_sign, g.to_axis)).or_default() += 1;
        }
        for c in 0..self.cubes {
            for i in 1..=self.n {
                for s in [Sign::Plus, Sign::Minus] {
                    let u = uses.get(&(c, s, i)).copied().unwrap_or(0);
                    if u != 1 {
                        violations.push(format!("cube {c} face{s}{i} is glued {u} times"));
                    }
                }
            }
        }
        let cell_counts = if violations.is_empty() { Quotient::new(self, 1).ok().map(|q| q.cell_counts()) } else { None };
        ValidationReport { violations, cell_counts }
    }

    /// Whether the single-cube permutation behind the gluings is even, when
    /// the complex has that form.
    pub fn permutation_parity(&self) -> Option<bool> {
        if self.cubes != 1 {
            return None;
        }
        let perm: Vec<usize> = self.gluings.first()?.perm.iter().map(|p| p.unsigned_abs() as usize - 1).collect();
        let mut seen = vec![false; perm.len()];
        let mut transpositions = 0;
        for start in 0..perm.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        Some(transpositions % 2 == 0)
    }
}

fn parse_face(word: &str) -> Option<(Sign, usize)> {
    let rest = word.strip_prefix("face")?;
    let (sign, axis) = match rest.chars().next()? {
        '+' => (Sign::Plus, &rest[1..]),
        '-' => (Sign::Minus, &rest[1..]),
        _ => return None,
    };
    Some((sign, axis.parse().ok()?))
}

impl fmt::Display for Gluing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm: Vec<String> = self.perm.iter().map(i32::to_string).collect();
        write!(
            f,
            "{} face{}{} -> {} face{}{} perm {}",
            self.from,
            self.from_sign,
            self.from_axis,
            self.to,
            self.to_sign,
            self.to_axis,
            perm.join(",")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    /// Quotient cells per dimension, when the structure is valid.
    pub cell_counts: Option<Vec<usize>>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let c = DirectedCubeComplex::from_permutation(&[2, 3, 1]).unwrap();
        let text = c.to_text();
        assert!(text.starts_with("n 3 cubes 1\n0 face+1 -> 0 face-2 perm 2,3,1\n"));
        assert_eq!(DirectedCubeComplex::parse(&text).unwrap(), c);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = DirectedCubeComplex::parse("n 3 cubes 1\n# comment\n0 face+1 -> 0 face-2 perm 2,3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        assert!(DirectedCubeComplex::parse("cubes 1").is_err());
    }

    #[test]
    fn validation_flags_bad_pairings() {
        let twist = DirectedCubeComplex::from_permutation(&[2, 3, 1]).unwrap();
        let r = twist.validate();
        assert!(r.ok());
        assert_eq!(r.cell_counts, Some(vec![1, 3, 3, 1]));
        assert!(DirectedCubeComplex::stacked_torus(3, 1).validate().ok());

        let mut bad = twist.clone();
        bad.gluings[0].to_sign = Sign::Plus;
        let r = bad.validate();
        assert!(!r.ok());
        assert!(r.violations.iter().any(|v| v.contains("does not send a face+ to a face-")));

        let mut reversed = twist;
        reversed.gluings[0].perm = vec![2, -3, 1];
        assert!(reversed.validate().violations.iter().any(|v| v.contains("reverses")));
    }

    #[test]
    fn parity_of_single_cube_permutations() {
        assert_eq!(DirectedCubeComplex::from_permutation(&[2, 3, 1]).unwrap().permutation_parity(), Some(true));
        assert_eq!(DirectedCubeComplex::from_permutation(&[2, 1, 3]).unwrap().permutation_parity(), Some(false));
    }
}
