use std::collections::BTreeSet;

use super::{LatticePolytope, PolytopeError};
use crate::linalg;

/// A face of a [`LatticePolytope`], identified by the parent vertices it
/// contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertex_indices: Vec<usize>,
    pub vertices: Vec<Vec<i64>>,
    /// Indices of the parent facets containing the face.
    pub tight_facets: Vec<usize>,
    pub lattice_points: Vec<Vec<i64>>,
}

impl Face {
    pub fn contains(&self, x: &[i64]) -> bool {
        self.lattice_points.iter().any(|p| p == x)
    }

    pub fn to_polytope(&self) -> LatticePolytope {
        super::convex_hull(&self.vertices).expect("face vertices form a polytope")
    }
}

fn affine_dim(points: &[&Vec<i64>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0].iter()).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank(&diffs)
}

impl LatticePolytope {
    /// Vertex-index sets of all nonempty faces, the polytope itself included.
    pub(crate) fn face_vertex_sets(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let facet_sets: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| all.iter().copied().filter(|&i| f.slack(&self.vertices[i]) == 0).collect())
            .collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(all);
        let mut work: Vec<Vec<usize>> = Vec::new();
        for s in &facet_sets {
            if seen.insert(s.clone()) {
                work.push(s.clone());
            }
        }
        while let Some(s) = work.pop() {
            for f in &facet_sets {
                let inter: Vec<usize> = s.iter().copied().filter(|i| f.contains(i)).collect();
                if !inter.is_empty() && seen.insert(inter.clone()) {
                    work.push(inter);
                }
            }
        }
        seen.into_iter().collect()
    }

    fn build_face(&self, idx: Vec<usize>, points: &[Vec<i64>]) -> Face {
        let vertices: Vec<Vec<i64>> = idx.iter().map(|&i| self.vertices[i].clone()).collect();
        let tight_facets: Vec<usize> = (0..self.facets.len())
            .filter(|&f| vertices.iter().all(|v| self.facets[f].slack(v) == 0))
            .collect();
        let lattice_points = points
            .iter()
            .filter(|p| tight_facets.iter().all(|&f| self.facets[f].slack(p) == 0))
            .cloned()
            .collect();
        let refs: Vec<&Vec<i64>> = vertices.iter().collect();
        Face { dim: affine_dim(&refs), vertex_indices: idx, vertices, tight_facets, lattice_points }
    }

    /// All faces of dimension `d`.
    pub fn faces(&self, d: i64) -> Result<Vec<Face>, PolytopeError> {
        if d < 0 || d as usize > self.dim {
            return Err(PolytopeError::InvalidDimension { requested: d, dim: self.dim });
        }
        Ok(self.all_faces().into_iter().filter(|f| f.dim == d as usize).collect())
    }

    /// Every nonempty face, ordered by dimension and then by vertex indices.
    pub fn all_faces(&self) -> Vec<Face> {
        let points = self.lattice_points();
        let mut faces: Vec<Face> = self
            .face_vertex_sets()
            .into_iter()
            .map(|idx| self.build_face(idx, &points))
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertex_indices).cmp(&(b.dim, &b.vertex_indices)));
        faces
    }

    pub fn edges(&self) -> Vec<Face> {
        if self.dim == 0 {
            return Vec::new();
        }
        self.faces(1).expect("dimension is at least one")
    }

    /// The polytope itself as a face.
    pub fn as_face(&self) -> Face {
        let points = self.lattice_points();
        self.build_face((0..self.vertices.len()).collect(), &points)
    }
}

/// Number of unit lattice segments on an edge.
pub fn edge_lattice_length(edge: &Face) -> Result<i64, PolytopeError> {
    if edge.dim != 1 || edge.vertices.len() != 2 {
        return Err(PolytopeError::InvalidDimension { requested: 1, dim: edge.dim });
    }
    let d: Vec<i64> =
        edge.vertices[1].iter().zip(&edge.vertices[0]).map(|(a, b)| a - b).collect();
    Ok(linalg::gcd_slice(&d))
}

#[cfg(test)]
mod tests {
    use super::super::convex_hull;
    use super::*;

    #[test]
    fn unit_square_edges() {
        let sq = convex_hull(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let edges = sq.edges();
        assert_eq!(edges.len(), 4);
        for e in &edges {
            assert_eq!(edge_lattice_length(e).unwrap(), 1);
        }
        assert_eq!(sq.faces(0).unwrap().len(), 4);
        assert_eq!(sq.faces(2).unwrap().len(), 1);
        assert!(matches!(sq.faces(3), Err(PolytopeError::InvalidDimension { .. })));
        assert!(matches!(sq.faces(-1), Err(PolytopeError::InvalidDimension { .. })));
    }

    #[test]
    fn diagonal_edge_length() {
        let seg = convex_hull(&[vec![0, 0], vec![2, 2]]).unwrap();
        let e = seg.as_face();
        assert_eq!(edge_lattice_length(&e).unwrap(), 2);
        assert_eq!(e.lattice_points.len(), 3);
    }

    #[test]
    fn tetrahedron_face_counts() {
        let t = convex_hull(&[vec![1, -1, -1], vec![-1, -1, -1], vec![0, 1, 0], vec![0, 0, 1]])
            .unwrap();
        assert_eq!(t.faces(0).unwrap().len(), 4);
        assert_eq!(t.faces(1).unwrap().len(), 6);
        assert_eq!(t.faces(2).unwrap().len(), 4);
        let long: Vec<i64> = t
            .edges()
            .iter()
            .map(|e| edge_lattice_length(e).unwrap())
            .collect();
        assert_eq!(long.iter().filter(|&&l| l == 2).count(), 1);
    }
}
