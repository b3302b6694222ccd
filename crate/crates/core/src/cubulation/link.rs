//! Vertex links of three-dimensional cube complexes.

use super::quotient::{glue_image, Quotient};
use super::DirectedCubeComplex;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkVerdict {
    /// Representative corner `(cube, corner codes)` of the vertex.
    pub cube: usize,
    pub corner: Vec<u8>,
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub euler: i64,
    pub connected: bool,
    /// Link edges lying in other than two triangles.
    pub bad_edges: usize,
}

impl LinkVerdict {
    pub fn is_sphere(&self) -> bool {
        self.connected && self.bad_edges == 0 && self.euler == 2
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Each cube corner contributes a triangle to the link of its vertex; the
/// link vertices and edges are the corner incidences of edges and squares,
/// identified along the gluings.
pub fn vertex_link_check(c: &DirectedCubeComplex) -> Result<Vec<LinkVerdict>> {
    if c.n != 3 {
        return Err(Error::Unsupported(format!("vertex links are only checked for n = 3, got {}", c.n)));
    }
    let q = Quotient::new(c, 1)?;
    // Incidence `(cube, face, corner)` for faces of dimension 1 and 2.
    let mut ids: HashMap<(usize, Vec<u8>, Vec<u8>), usize> = HashMap::new();
    let mut keys = Vec::new();
    for cube in 0..c.cubes {
        for local in 0..27 {
            let mut face = vec![0u8; 3];
            q.decode_into(local, &mut face);
            let dim = face.iter().filter(|&&x| x == 1).count();
            if dim == 0 || dim == 3 {
                continue;
            }
            for corner in corners_of(&face) {
                ids.insert((cube, face.clone(), corner.clone()), keys.len());
                keys.push((cube, face.clone(), corner));
            }
        }
    }
    let mut dsu = Dsu((0..keys.len()).collect());
    for g in &c.gluings {
        for (cube, face, corner) in keys.clone() {
            if cube != g.from {
                continue;
            }
            if let (Some((f2, _)), Some((c2, _))) = (glue_image(g, &face, 1), glue_image(g, &corner, 1)) {
                let a = ids[&(cube, face.clone(), corner.clone())];
                let b = ids[&(g.to, f2, c2)];
                dsu.union(a, b);
            }
        }
    }
    // Group triangles by the quotient vertex of their corner.
    let mut by_vertex: HashMap<usize, Vec<(usize, Vec<u8>)>> = HashMap::new();
    for cube in 0..c.cubes {
        for corner in corners_of(&[1, 1, 1]) {
            let (root, _) = q.find(q.index(cube, &corner));
            by_vertex.entry(root).or_default().push((cube, corner));
        }
    }
    let mut roots: Vec<usize> = by_vertex.keys().copied().collect();
    roots.sort_unstable();
    let mut out = Vec::new();
    for root in roots {
        let triangles = &by_vertex[&root];
        let mut edge_use: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut link_vertices = std::collections::HashSet::new();
        for (t, (cube, corner)) in triangles.iter().enumerate() {
            for axis in 0..3 {
                let mut edge = corner.clone();
                edge[axis] = 1;
                link_vertices.insert(dsu.find(ids[&(*cube, edge, corner.clone())]));
                let mut square = vec![1u8; 3];
                square[axis] = corner[axis];
                edge_use.entry(dsu.find(ids[&(*cube, square, corner.clone())])).or_default().push(t);
            }
        }
        let mut tri = Dsu((0..triangles.len()).collect());
        for ts in edge_use.values() {
            for w in ts.windows(2) {
                tri.union(w[0], w[1]);
            }
        }
        let components = (0..triangles.len()).filter(|&t| tri.find(t) == t).count();
        let (cube, corner) = triangles[0].clone();
        out.push(LinkVerdict {
            cube,
            corner,
            vertices: link_vertices.len(),
            edges: edge_use.len(),
            triangles: triangles.len(),
            euler: link_vertices.len() as i64 - edge_use.len() as i64 + triangles.len() as i64,
            connected: components == 1,
            bad_edges: edge_use.values().filter(|ts| ts.len() != 2).count(),
        });
    }
    Ok(out)
}

/// Corner codes (each 0 or 2) of a face given by codes in `{0, 1, 2}`.
fn corners_of(face: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for &c in face {
        let opts: Vec<u8> = if c == 1 { vec![0, 2] } else { vec![c] };
        out = out
            .into_iter()
            .flat_map(|p: Vec<u8>| {
                opts.iter().map(move |&o| {
                    let mut p = p.clone();
                    p.push(o);
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twisted_cube_and_torus_links_are_spheres() {
        for c in [DirectedCubeComplex::from_permutation(&[2, 3, 1]).unwrap(), DirectedCubeComplex::stacked_torus(3, 1)] {
            let links = vertex_link_check(&c).unwrap();
            assert_eq!(links.len(), 1);
            assert!(links[0].is_sphere(), "{links:?}");
            assert_eq!((links[0].vertices, links[0].edges, links[0].triangles), (6, 12, 8));
        }
    }

    #[test]
    fn reversed_gluings_give_singular_links() {
        let projective = "n 3 cubes 1\n0 face+1 -> 0 face-1 perm 1,2,-3\n0 face+2 -> 0 face-2 perm 1,2,3\n0 face+3 -> 0 face-3 perm -1,-2,3\n";
        let links = vertex_link_check(&DirectedCubeComplex::parse(projective).unwrap()).unwrap();
        assert_eq!(links.len(), 2);
        assert!(links.iter().all(|l| l.euler == 1 && l.bad_edges == 0 && !l.is_sphere()));

        let toral = "n 3 cubes 1\n0 face+1 -> 0 face-1 perm 1,3,2\n0 face+2 -> 0 face-2 perm 1,2,3\n0 face+3 -> 0 face-3 perm -1,2,3\n";
        let links = vertex_link_check(&DirectedCubeComplex::parse(toral).unwrap()).unwrap();
        assert_eq!(links.iter().map(|l| l.euler).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn only_three_dimensional_links() {
        assert!(vertex_link_check(&DirectedCubeComplex::stacked_torus(2, 1)).is_err());
    }
}
