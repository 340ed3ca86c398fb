//! Exact lattice polytopes.
//!
//! A [`LatticePolytope`] stores its vertices (sorted lexicographically), the
//! facet inequalities `normal·x ≤ offset` with primitive integer normals, and
//! the equations of its affine hull when it is not full-dimensional. Hulls
//! are computed by double description in the coordinates of the affine span.

mod dd;
mod decompose;
mod equivalence;
mod faces;
mod rational;

use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exec::{self, Execution};
use crate::laurent::LaurentPoly;
use crate::linalg;

pub use decompose::{polygon_minkowski_decompositions, MAX_EDGE_SLOTS};
pub use equivalence::{lattice_equivalences, lattice_equivalent, AffineMap};
pub use faces::{edge_lattice_length, Face};
pub use rational::RationalPolytope;

pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("empty point set")]
    EmptyInput,
    #[error("ambient dimension {0} exceeds the supported maximum of 6")]
    DimensionTooLarge(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid face dimension {requested} for a polytope of dimension {dim}")]
    InvalidDimension { requested: i64, dim: usize },
    #[error("the zero polynomial has no Newton polytope")]
    ZeroPolynomial,
    #[error("expected a polygon or segment, got a polytope of dimension {0}")]
    NotTwoDimensional(usize),
    #[error("{slots} primitive edge slots exceed the decomposition limit of {limit}")]
    ComplexityLimit { slots: usize, limit: usize },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

/// `normal·x ≤ offset` (or `=` when used as an equation).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inequality {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Inequality {
    pub fn eval(&self, x: &[i64]) -> i64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn slack(&self, x: &[i64]) -> i64 {
        self.offset - self.eval(x)
    }
}

#[derive(Debug, Clone)]
pub struct LatticePolytope {
    dim_ambient: usize,
    dim: usize,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Inequality>,
    equations: Vec<Inequality>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim_ambient == other.dim_ambient && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl PartialOrd for LatticePolytope {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticePolytope {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim_ambient, &self.vertices).cmp(&(other.dim_ambient, &other.vertices))
    }
}

impl std::hash::Hash for LatticePolytope {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dim_ambient.hash(state);
        self.vertices.hash(state);
    }
}

/// Convex hull of a finite set of integer points.
pub fn convex_hull(points: &[Vec<i64>]) -> Result<LatticePolytope, PolytopeError> {
    let first = points.first().ok_or(PolytopeError::EmptyInput)?;
    let n = first.len();
    if n > MAX_DIM {
        return Err(PolytopeError::DimensionTooLarge(n));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != n) {
        return Err(PolytopeError::DimensionMismatch(n, bad.len()));
    }
    let pts: Vec<Vec<i64>> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let p0 = pts[0].clone();
    let diffs: Vec<Vec<i64>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(&p0).map(|(a, b)| a - b).collect())
        .collect();
    let coords = if diffs.is_empty() { Vec::new() } else { linalg::pivot_columns(&diffs) };
    let k = coords.len();

    let equations: Vec<Inequality> = if k == n {
        Vec::new()
    } else {
        let ker = if diffs.is_empty() {
            linalg::identity(n)
        } else {
            linalg::integer_nullspace(&diffs, n)
        };
        ker.into_iter()
            .map(|normal| {
                let offset = normal.iter().zip(&p0).map(|(a, b)| a * b).sum();
                Inequality { normal, offset }
            })
            .collect()
    };

    if k == 0 {
        return Ok(LatticePolytope {
            dim_ambient: n,
            dim: 0,
            vertices: vec![p0],
            facets: Vec::new(),
            equations,
        });
    }

    let projected: Vec<Vec<i64>> =
        pts.iter().map(|p| coords.iter().map(|&c| p[c]).collect()).collect();
    let raw = dd::facets(&projected)?;
    let facets: Vec<Inequality> = raw
        .iter()
        .map(|(a, b)| {
            let mut normal = vec![0; n];
            for (&c, &v) in coords.iter().zip(a) {
                normal[c] = v;
            }
            Inequality { normal, offset: *b }
        })
        .collect();

    let mut vertices = Vec::new();
    for (p, q) in pts.iter().zip(&projected) {
        let tight: Vec<Vec<i64>> = raw
            .iter()
            .filter(|(a, b)| a.iter().zip(q).map(|(x, y)| x * y).sum::<i64>() == *b)
            .map(|(a, _)| a.clone())
            .collect();
        if !tight.is_empty() && linalg::rank(&tight) == k {
            vertices.push(p.clone());
        }
    }
    Ok(LatticePolytope { dim_ambient: n, dim: k, vertices, facets, equations })
}

/// Newton polytope: hull of the support.
pub fn newton_polytope(p: &LaurentPoly) -> Result<LatticePolytope, PolytopeError> {
    if p.is_zero() {
        return Err(PolytopeError::ZeroPolynomial);
    }
    let pts: Vec<Vec<i64>> = p.terms().map(|(e, _)| e.to_vec()).collect();
    convex_hull(&pts)
}

pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope, PolytopeError> {
    if p.dim_ambient != q.dim_ambient {
        return Err(PolytopeError::DimensionMismatch(p.dim_ambient, q.dim_ambient));
    }
    let mut pts = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    convex_hull(&pts)
}

impl LatticePolytope {
    pub fn dim_ambient(&self) -> usize {
        self.dim_ambient
    }

    /// Dimension of the affine span.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Inequality] {
        &self.facets
    }

    pub fn equations(&self) -> &[Inequality] {
        &self.equations
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.dim_ambient
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim_ambient
            && self.equations.iter().all(|eq| eq.eval(x) == eq.offset)
            && self.facets.iter().all(|f| f.slack(x) >= 0)
    }

    /// Whether `x` lies in the relative interior.
    pub fn contains_in_interior(&self, x: &[i64]) -> bool {
        self.contains(x) && self.facets.iter().all(|f| f.slack(x) > 0)
    }

    pub fn contains_origin_strictly(&self) -> bool {
        self.is_full_dimensional() && self.contains_in_interior(&vec![0; self.dim_ambient])
    }

    /// Every vertex is a primitive lattice vector.
    pub fn is_primitive(&self) -> bool {
        self.vertices.iter().all(|v| linalg::is_primitive_vector(v))
    }

    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        self.lattice_points_with(Execution::default())
    }

    /// Bounding-box scan filtered by the facet inequalities and equations.
    pub fn lattice_points_with(&self, exec: Execution) -> Vec<Vec<i64>> {
        let n = self.dim_ambient;
        if n == 0 {
            return vec![Vec::new()];
        }
        let lo: Vec<i64> = (0..n).map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..n).map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap()).collect();
        let first: Vec<i64> = (lo[0]..=hi[0]).collect();
        let slabs = exec::map_collect(exec, &first, |&x0| {
            let mut out = Vec::new();
            let mut cur = lo.clone();
            cur[0] = x0;
            loop {
                if self.contains(&cur) {
                    out.push(cur.clone());
                }
                let mut i = 1;
                loop {
                    if i == n {
                        return out;
                    }
                    if cur[i] < hi[i] {
                        cur[i] += 1;
                        break;
                    }
                    cur[i] = lo[i];
                    i += 1;
                }
            }
        });
        slabs.into_iter().flatten().collect()
    }

    pub fn translate(&self, t: &[i64]) -> LatticePolytope {
        let shift = |v: &Vec<i64>| -> Vec<i64> { v.iter().zip(t).map(|(a, b)| a + b).collect() };
        let moved = |ineq: &Inequality| Inequality {
            normal: ineq.normal.clone(),
            offset: ineq.offset + ineq.eval(t),
        };
        LatticePolytope {
            dim_ambient: self.dim_ambient,
            dim: self.dim,
            vertices: self.vertices.iter().map(shift).collect(),
            facets: self.facets.iter().map(moved).collect(),
            equations: self.equations.iter().map(moved).collect(),
        }
    }

    /// Translate of `self` whose lexicographically smallest vertex is the
    /// origin; used to compare polytopes up to translation.
    pub fn canonical(&self) -> LatticePolytope {
        let neg: Vec<i64> = self.vertices[0].iter().map(|x| -x).collect();
        self.translate(&neg)
    }

    pub fn equal_up_to_translation(&self, other: &LatticePolytope) -> bool {
        self.canonical() == other.canonical()
    }

    /// Image under `x ↦ A·x + t` for a unimodular `A`.
    pub fn image(&self, map: &AffineMap) -> Result<LatticePolytope, PolytopeError> {
        let pts: Vec<Vec<i64>> = self.vertices.iter().map(|v| map.apply(v)).collect();
        convex_hull(&pts)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polytope serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    vertices: Vec<Vec<i64>>,
}

impl Serialize for LatticePolytope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolytopeJson { dim: self.dim_ambient, vertices: self.vertices.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PolytopeJson::deserialize(d)?;
        if raw.vertices.iter().any(|v| v.len() != raw.dim) {
            return Err(D::Error::custom("vertex length differs from `dim`"));
        }
        convex_hull(&raw.vertices).map_err(D::Error::custom)
    }
}
