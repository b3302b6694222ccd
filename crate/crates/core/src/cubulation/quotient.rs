//! The quotient cell structure of a cube complex whose cubes are subdivided
//! into `s^n` unit subcubes, and its cellular chain complex.

use super::snf::elementary_divisors;
use super::{DirectedCubeComplex, Gluing, Sign};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Faces of the subdivided cubes, identified along the gluings. A face of
/// one cube is a code per coordinate: `2v` for the point `v`, `2v+1` for the
/// interval `[v, v+1]`, with `0 <= v <= s`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub n: usize,
    pub s: usize,
    pub cubes: usize,
    parent: Vec<u32>,
    /// Orientation of a face relative to its parent.
    flip: Vec<bool>,
    /// Faces identified with themselves by an orientation-reversing map.
    pub reversed_cells: Vec<usize>,
}

impl Quotient {
    pub fn new(c: &DirectedCubeComplex, s: usize) -> Result<Self> {
        let base = 2 * s + 1;
        let per_cube = base
            .checked_pow(c.n as u32)
            .filter(|&p| p.saturating_mul(c.cubes) < u32::MAX as usize)
            .ok_or_else(|| Error::Unsupported(format!("{} cubes of dimension {} split {s} ways is too large", c.cubes, c.n)))?;
        let total = per_cube * c.cubes;
        let mut q = Self {
            n: c.n,
            s,
            cubes: c.cubes,
            parent: (0..total as u32).collect(),
            flip: vec![false; total],
            reversed_cells: Vec::new(),
        };
        let mut codes = vec![0u8; c.n];
        for g in &c.gluings {
            for local in 0..per_cube {
                q.decode_into(local, &mut codes);
                if let Some((image, flip)) = glue_image(g, &codes, s) {
                    let a = g.from * per_cube + local;
                    let b = g.to * per_cube + q.encode(&image);
                    q.union(a, b, flip);
                }
            }
        }
        Ok(q)
    }

    fn per_cube(&self) -> usize {
        (2 * self.s + 1).pow(self.n as u32)
    }

    pub fn face_count(&self) -> usize {
        self.parent.len()
    }

    pub fn encode(&self, codes: &[u8]) -> usize {
        let base = 2 * self.s + 1;
        codes.iter().fold(0usize, |acc, &c| acc * base + c as usize)
    }

    pub fn decode_into(&self, mut local: usize, codes: &mut [u8]) {
        let base = 2 * self.s + 1;
        for c in codes.iter_mut().rev() {
            *c = (local % base) as u8;
            local /= base;
        }
    }

    /// `(cube, codes)` of a global face index.
    pub fn decode(&self, face: usize) -> (usize, Vec<u8>) {
        let mut codes = vec![0u8; self.n];
        self.decode_into(face % self.per_cube(), &mut codes);
        (face / self.per_cube(), codes)
    }

    pub fn index(&self, cube: usize, codes: &[u8]) -> usize {
        cube * self.per_cube() + self.encode(codes)
    }

    /// Representative and relative orientation.
    pub fn find(&self, mut x: usize) -> (usize, bool) {
        let mut flip = false;
        while self.parent[x] as usize != x {
            flip ^= self.flip[x];
            x = self.parent[x] as usize;
        }
        (x, flip)
    }

    fn find_compress(&mut self, x: usize) -> (usize, bool) {
        let (root, flip) = self.find(x);
        let mut cur = x;
        let mut acc = flip;
        while self.parent[cur] as usize != cur {
            let next = self.parent[cur] as usize;
            let step = self.flip[cur];
            self.parent[cur] = root as u32;
            self.flip[cur] = acc;
            acc ^= step;
            cur = next;
        }
        (root, flip)
    }

    fn union(&mut self, a: usize, b: usize, flip: bool) {
        let (ra, fa) = self.find_compress(a);
        let (rb, fb) = self.find_compress(b);
        if ra == rb {
            if fa ^ fb != flip {
                self.reversed_cells.push(ra);
            }
            return;
        }
        self.parent[ra] = rb as u32;
        self.flip[ra] = fa ^ fb ^ flip;
    }

    pub fn dim_of(&self, face: usize) -> usize {
        self.decode(face).1.iter().filter(|&&c| c % 2 == 1).count()
    }

    /// Representatives of the quotient cells, grouped by dimension.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n + 1];
        for f in 0..self.face_count() {
            if self.parent[f] as usize == f {
                out[self.dim_of(f)].push(f);
            }
        }
        out
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells().iter().map(Vec::len).collect()
    }

    /// Oriented boundary faces of a face: `(face, +1 | -1)`.
    pub fn face_boundary(&self, face: usize) -> Vec<(usize, i64)> {
        let (cube, codes) = self.decode(face);
        let mut out = Vec::new();
        let mut m = 0;
        for (r, &c) in codes.iter().enumerate() {
            if c % 2 == 0 {
                continue;
            }
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let mut hi = codes.clone();
            hi[r] = c + 1;
            let mut lo = codes.clone();
            lo[r] = c - 1;
            out.push((self.index(cube, &hi), sign));
            out.push((self.index(cube, &lo), -sign));
            m += 1;
        }
        out
    }

    pub fn chain_complex(&self) -> Result<ChainComplex> {
        if !self.reversed_cells.is_empty() {
            return Err(Error::InvalidComplex(format!(
                "{} cells are identified with themselves reversing orientation",
                self.reversed_cells.len()
            )));
        }
        let cells = self.cells();
        let position: std::collections::HashMap<usize, usize> =
            cells.iter().flat_map(|v| v.iter().enumerate().map(|(i, &f)| (f, i))).collect();
        let mut boundaries = Vec::with_capacity(self.n);
        for d in 1..=self.n {
            let mut m = vec![vec![0i64; cells[d].len()]; cells[d - 1].len()];
            for (col, &f) in cells[d].iter().enumerate() {
                for (g, sign) in self.face_boundary(f) {
                    let (root, flip) = self.find(g);
                    let s = if flip { -sign } else { sign };
                    m[position[&root]][col] += s;
                }
            }
            boundaries.push(m);
        }
        Ok(ChainComplex { sizes: cells.iter().map(Vec::len).collect(), boundaries })
    }
}

/// Image of a face of cube `g.from` under the gluing, with whether the
/// orientation flips; `None` when the face is not on the glued facet.
pub(super) fn glue_image(g: &Gluing, codes: &[u8], s: usize) -> Option<(Vec<u8>, bool)> {
    let top = 2 * s as u8;
    let fixed = |sign: Sign| if sign == Sign::Plus { top } else { 0 };
    let from_axis = g.from_axis - 1;
    if codes[from_axis] != fixed(g.from_sign) {
        return None;
    }
    let mut image = vec![0u8; codes.len()];
    let mut targets = Vec::new();
    let mut reversals = 0;
    for (r, &code) in codes.iter().enumerate() {
        if r == from_axis {
            continue;
        }
        let (t, rev) = g.image(r);
        image[t] = if rev { top - code } else { code };
        if code % 2 == 1 {
            targets.push(t);
            reversals += usize::from(rev);
        }
    }
    image[g.to_axis - 1] = fixed(g.to_sign);
    Some((image, (inversions(&targets) + reversals) % 2 == 1))
}

fn inversions(v: &[usize]) -> usize {
    (0..v.len()).map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count()).sum()
}

/// `boundaries[d - 1]` is the matrix of `C_d -> C_{d-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub sizes: Vec<usize>,
    pub boundaries: Vec<Vec<Vec<i64>>>,
}

impl ChainComplex {
    /// Whether every composite `C_{d+1} -> C_d -> C_{d-1}` vanishes.
    pub fn is_complex(&self) -> bool {
        self.boundaries.windows(2).all(|w| {
            let (lower, upper) = (&w[0], &w[1]);
            lower.iter().all(|row| {
                (0..upper.first().map_or(0, Vec::len))
                    .all(|c| row.iter().zip(upper.iter()).map(|(&a, r)| a * r[c]).sum::<i64>() == 0)
            })
        })
    }
}

/// `Z^rank ⊕ Z_{t_1} ⊕ ...`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Integral homology in every dimension.
pub fn homology(cc: &ChainComplex) -> Vec<HomologyGroup> {
    let divisors: Vec<Vec<i64>> = cc.boundaries.iter().map(|m| elementary_divisors(m)).collect();
    (0..cc.sizes.len())
        .map(|q| {
            let rank_out = if q == 0 { 0 } else { divisors[q - 1].len() };
            let incoming = divisors.get(q);
            let rank_in = incoming.map_or(0, Vec::len);
            HomologyGroup {
                rank: cc.sizes[q] - rank_out - rank_in,
                torsion: incoming.map(|d| d.iter().copied().filter(|&x| x > 1).collect()).unwrap_or_default(),
            }
        })
        .collect()
}
