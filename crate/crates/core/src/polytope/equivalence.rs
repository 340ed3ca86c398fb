use serde::{Deserialize, Serialize};

use super::LatticePolytope;
use crate::laurent::Rational;
use crate::linalg::{self, IntMatrix};

/// The map `x ↦ A·x + t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(rename = "A")]
    pub matrix: IntMatrix,
    pub shift: Vec<i64>,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap { matrix: linalg::identity(n), shift: vec![0; n] }
    }

    pub fn translation(t: Vec<i64>) -> Self {
        AffineMap { matrix: linalg::identity(t.len()), shift: t }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        linalg::mat_vec(&self.matrix, v).iter().zip(&self.shift).map(|(a, b)| a + b).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            matrix: linalg::mat_mul(&self.matrix, &other.matrix),
            shift: self.apply(&other.shift),
        }
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        let inv = linalg::unimodular_inverse(&self.matrix)?;
        let shift = linalg::mat_vec(&inv, &self.shift).iter().map(|x| -x).collect();
        Some(AffineMap { matrix: inv, shift })
    }
}

/// Vertex indices `i0, i1, …, in` of `p` whose differences form a basis.
fn affine_basis(p: &LatticePolytope) -> Vec<usize> {
    let v = p.vertices();
    let mut chosen = vec![0usize];
    let mut diffs: Vec<Vec<i64>> = Vec::new();
    for i in 1..v.len() {
        let d: Vec<i64> = v[i].iter().zip(&v[0]).map(|(a, b)| a - b).collect();
        diffs.push(d);
        if linalg::rank(&diffs) == diffs.len() {
            chosen.push(i);
        } else {
            diffs.pop();
        }
        if chosen.len() == p.dim() + 1 {
            break;
        }
    }
    chosen
}

fn next_tuple(t: &mut [usize], m: usize) -> bool {
    for i in (0..t.len()).rev() {
        if t[i] + 1 < m {
            t[i] += 1;
            for x in t[i + 1..].iter_mut() {
                *x = 0;
            }
            return true;
        }
    }
    false
}

fn maps_onto(p: &LatticePolytope, q: &LatticePolytope, map: &AffineMap) -> bool {
    let mut img: Vec<Vec<i64>> = p.vertices().iter().map(|v| map.apply(v)).collect();
    img.sort();
    img == q.vertices()
}

/// All unimodular affine maps sending `p` onto `q`, the identity first when
/// it qualifies and then in lexicographic order of the images of a fixed
/// affine basis of vertices.
///
/// For lower-dimensional polytopes the linear part is not determined by the
/// vertices; only translations are searched.
pub fn lattice_equivalences(p: &LatticePolytope, q: &LatticePolytope) -> Vec<AffineMap> {
    let n = p.dim_ambient();
    if n != q.dim_ambient() || p.dim() != q.dim() || p.vertices().len() != q.vertices().len() {
        return Vec::new();
    }
    if !p.is_full_dimensional() {
        let t: Vec<i64> = q.vertices()[0].iter().zip(&p.vertices()[0]).map(|(a, b)| a - b).collect();
        let map = AffineMap::translation(t);
        return if maps_onto(p, q, &map) { vec![map] } else { Vec::new() };
    }
    let basis = affine_basis(p);
    let pv = p.vertices();
    let qv = q.vertices();
    let v0 = &pv[basis[0]];
    // Columns are the basis differences.
    let cols: Vec<Vec<i64>> = basis[1..]
        .iter()
        .map(|&i| pv[i].iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    let vinv = linalg::rational_inverse(&linalg::transpose(&cols)).expect("affine basis");

    let mut out = Vec::new();
    let identity = AffineMap::identity(n);
    if p == q {
        out.push(identity.clone());
    }
    let m = qv.len();
    let mut tuple = vec![0usize; n + 1];
    loop {
        let injective = (0..tuple.len()).all(|i| !tuple[..i].contains(&tuple[i]));
        if injective {
            if let Some(map) = solve(&tuple, qv, &vinv, v0) {
                if map != identity && maps_onto(p, q, &map) {
                    out.push(map);
                }
            }
        }
        if !next_tuple(&mut tuple, m) {
            break;
        }
    }
    out
}

fn solve(tuple: &[usize], qv: &[Vec<i64>], vinv: &[Vec<Rational>], v0: &[i64]) -> Option<AffineMap> {
    let n = v0.len();
    let w0 = &qv[tuple[0]];
    let wcols: Vec<Vec<i64>> = tuple[1..]
        .iter()
        .map(|&j| qv[j].iter().zip(w0).map(|(a, b)| a - b).collect())
        .collect();
    let mut a = vec![vec![0i64; n]; n];
    for (r, row) in a.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            let mut s = Rational::from_integer(0.into());
            for (k, wc) in wcols.iter().enumerate() {
                s += Rational::from_integer(wc[r].into()) * &vinv[k][c];
            }
            *entry = linalg::rational_to_i64(&s)?;
        }
    }
    if !linalg::is_unimodular(&a) {
        return None;
    }
    let av0 = linalg::mat_vec(&a, v0);
    let shift = w0.iter().zip(&av0).map(|(w, x)| w - x).collect();
    Some(AffineMap { matrix: a, shift })
}

/// First map of [`lattice_equivalences`], if any.
pub fn lattice_equivalent(p: &LatticePolytope, q: &LatticePolytope) -> Option<AffineMap> {
    lattice_equivalences(p, q).into_iter().next()
}
