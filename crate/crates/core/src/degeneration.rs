//! Polytope mutation by slicing the cone over a polytope, and its
//! polynomial counterpart.
//!
//! For `Δ ⊂ Z^n` with the origin in its interior, `C` is the cone over
//! `(Δ, 1)` in `N' = Z^{n+1}`. A covector `r = (r0, 0)` and a retraction
//! `s: N' → L_r = ker r` cut `C` into slices `C^± = s({p ∈ C : ⟨p,r⟩ = ±1})`.
//! These are polyhedra sharing the tail cone `s(C ∩ r^⊥)`; [`slice`] returns
//! their compact parts. Given `C^+ = C1 + C2`, the cone `D ⊂ L_r ⊕ Z`
//! generated by `(C^-, 0)`, `(C1, 1)` and `(C2, -1)` is cut at grading one to
//! obtain the new polytope.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentPoly, Rational};
use crate::linalg::{self, IntMatrix};
use crate::mutation::{apply_cluster, ClusterChange, MutationError};
use crate::polytope::{LatticePolytope, PolytopeError, RationalPolytope};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DegenerationError {
    #[error("the origin is not in the interior of the polytope")]
    OriginNotInterior,
    #[error("the slice has no bounded part")]
    UnboundedSlice,
    #[error("invalid cosection: {0}")]
    InvalidCosection(String),
    #[error("result is not a lattice polytope: {0}")]
    NotLattice(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("the pivot coefficient is not the product of the given factors")]
    BadFactorization,
    #[error("pivot degrees range over [{lo}, {hi}], expected [-1, 1]")]
    PivotDegreeOutOfRange { lo: i64, hi: i64 },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Mutation(#[from] MutationError),
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn qvec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| q(x)).collect()
}

fn dot_q(a: &[i64], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + q(*x) * y)
}

fn mat_vec_q(m: &[Vec<i64>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot_q(row, v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedralCone {
    pub generators: Vec<Vec<Rational>>,
    pub dim: usize,
}

/// The cone generated by the vertices of `Δ` at height one.
pub fn cone_over(delta: &LatticePolytope) -> Result<PolyhedralCone, DegenerationError> {
    if !delta.contains_origin_strictly() {
        return Err(DegenerationError::OriginNotInterior);
    }
    let generators = delta
        .vertices()
        .iter()
        .map(|v| {
            let mut g = qvec(v);
            g.push(Rational::one());
            g
        })
        .collect();
    Ok(PolyhedralCone { generators, dim: delta.dim_ambient() + 1 })
}

/// A covector `r` on `N'` and a retraction `s` of `ker r ⊂ N'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cosection {
    pub r: Vec<i64>,
    #[serde(rename = "s_matrix")]
    pub s: IntMatrix,
}

impl Cosection {
    /// Checks that `r` is primitive with last entry zero and that `s` maps
    /// a lattice basis of `ker r` onto a basis of `Z^n`.
    pub fn new(r: Vec<i64>, s: IntMatrix) -> Result<Self, DegenerationError> {
        let c = Cosection { r, s };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), DegenerationError> {
        let bad = |m: &str| Err(DegenerationError::InvalidCosection(m.to_string()));
        let m = self.r.len();
        if m < 2 {
            return bad("r must have at least two entries");
        }
        if !linalg::is_primitive_vector(&self.r) {
            return bad("r is not primitive");
        }
        if self.r[m - 1] != 0 {
            return bad("r must vanish on the height coordinate");
        }
        if self.s.len() != m - 1 || self.s.iter().any(|row| row.len() != m) {
            return bad("s must be an (n)×(n+1) matrix");
        }
        if !linalg::is_unimodular(&linalg::mat_mul(&self.s, &self.kernel_basis())) {
            return bad("s restricted to ker r is not an isomorphism onto Z^n");
        }
        Ok(())
    }

    /// Columns form a lattice basis of `ker r`.
    fn kernel_basis(&self) -> IntMatrix {
        let w = linalg::complete_to_unimodular(&self.r).expect("r is primitive");
        let inv = linalg::unimodular_inverse(&w).expect("unimodular");
        inv.iter().map(|row| row[1..].to_vec()).collect()
    }

    /// The inclusion `i: L_r → N'` with `s ∘ i = id`.
    pub fn inclusion(&self) -> IntMatrix {
        let k = self.kernel_basis();
        let sk_inv = linalg::unimodular_inverse(&linalg::mat_mul(&self.s, &k)).expect("validated");
        linalg::mat_mul(&k, &sk_inv)
    }

    pub fn apply(&self, p: &[Rational]) -> Vec<Rational> {
        mat_vec_q(&self.s, p)
    }
}

/// Compact part and tail cone of a slice of `C`, in `L_r` coordinates.
#[derive(Debug, Clone)]
pub struct Slice {
    pub polytope: RationalPolytope,
    pub tail: Vec<Vec<Rational>>,
}

/// Compact part of `C^{level}`.
pub fn slice(
    c: &PolyhedralCone,
    cos: &Cosection,
    level: i64,
) -> Result<RationalPolytope, DegenerationError> {
    Ok(slice_with_tail(c, cos, level)?.polytope)
}

pub fn slice_with_tail(
    c: &PolyhedralCone,
    cos: &Cosection,
    level: i64,
) -> Result<Slice, DegenerationError> {
    cos.validate()?;
    if cos.r.len() != c.dim {
        return Err(DegenerationError::InvalidCosection("r has the wrong length".into()));
    }
    if level != 1 && level != -1 {
        return Err(DegenerationError::InvalidCosection("level must be ±1".into()));
    }
    let values: Vec<Rational> = c.generators.iter().map(|g| dot_q(&cos.r, g)).collect();
    let lv = q(level);
    let mut pts = Vec::new();
    for (g, v) in c.generators.iter().zip(&values) {
        if (v * &lv).is_positive() {
            let p: Vec<Rational> = g.iter().map(|x| x * &lv / v).collect();
            pts.push(cos.apply(&p));
        }
    }
    if pts.is_empty() {
        return Err(DegenerationError::UnboundedSlice);
    }
    let mut tail = Vec::new();
    for (i, gi) in c.generators.iter().enumerate() {
        if values[i].is_zero() {
            tail.push(cos.apply(gi));
        }
        for (j, gj) in c.generators.iter().enumerate() {
            if values[i].is_positive() && values[j].is_negative() {
                let ray: Vec<Rational> = gi
                    .iter()
                    .zip(gj)
                    .map(|(a, b)| b * &values[i] - a * &values[j])
                    .collect();
                tail.push(cos.apply(&ray));
            }
        }
    }
    Ok(Slice { polytope: RationalPolytope::new(&pts)?, tail })
}

/// `C^+ = C1 + C2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceDecomposition {
    #[serde(rename = "C1")]
    pub c1: RationalPolytope,
    #[serde(rename = "C2")]
    pub c2: RationalPolytope,
}

impl SliceDecomposition {
    pub fn new(c1: RationalPolytope, c2: RationalPolytope) -> Self {
        SliceDecomposition { c1, c2 }
    }

    /// `C1 = C^+ − v`, `C2 = {v}` with `v` the image of the height vector;
    /// reassembling gives back `Δ`.
    pub fn trivial(c_plus: &RationalPolytope, cos: &Cosection) -> Result<Self, DegenerationError> {
        let m = cos.r.len();
        let mut e = vec![Rational::zero(); m];
        e[m - 1] = Rational::one();
        let v = cos.apply(&e);
        let neg: Vec<Rational> = v.iter().map(|x| -x).collect();
        Ok(SliceDecomposition { c1: c_plus.translate(&neg)?, c2: RationalPolytope::new(&[v])? })
    }

    /// The summands add up to `C^+` exactly and every vertex of `C^+` splits
    /// into vertices of which at least one is a lattice point.
    pub fn validate(&self, c_plus: &RationalPolytope) -> Result<(), DegenerationError> {
        let bad = |m: String| Err(DegenerationError::InvalidDecomposition(m));
        if self.c1.dim_ambient() != c_plus.dim_ambient() || self.c2.dim_ambient() != c_plus.dim_ambient() {
            return bad("summands live in the wrong dimension".into());
        }
        let sum = self.c1.minkowski_sum(&self.c2)?;
        if sum != *c_plus {
            return bad("C1 + C2 differs from C+".into());
        }
        let lattice = |v: &[Rational]| v.iter().all(|x| x.is_integer());
        for w in c_plus.vertices() {
            let ok = self.c1.vertices().iter().any(|a| {
                self.c2.vertices().iter().any(|b| {
                    a.iter().zip(b).zip(w).all(|((x, y), z)| &(x + y) == z) && (lattice(a) || lattice(b))
                })
            });
            if !ok {
                let shown: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                return bad(format!("vertex ({}) of C+ has no split with a lattice part", shown.join(", ")));
            }
        }
        Ok(())
    }
}

/// Coordinates on the grading-one hyperplane of `L_r ⊕ Z`.
fn hyperplane_coordinates(grading: &[i64]) -> Result<IntMatrix, DegenerationError> {
    if let Some(k) = grading.iter().position(|&x| x != 0) {
        if grading[k] == 1 && grading.iter().filter(|&&x| x != 0).count() == 1 {
            let m = grading.len();
            return Ok((0..m)
                .filter(|&i| i != k)
                .map(|i| (0..m).map(|j| i64::from(i == j)).collect())
                .collect());
        }
    }
    let w = linalg::complete_to_unimodular(grading)
        .ok_or_else(|| DegenerationError::InvalidCosection("grading is not primitive".into()))?;
    Ok(w[1..].to_vec())
}

/// The polytope cut from `D` at grading one.
pub fn mutate_polytope(
    delta: &LatticePolytope,
    cos: &Cosection,
    dec: &SliceDecomposition,
) -> Result<LatticePolytope, DegenerationError> {
    let cone = cone_over(delta)?;
    let plus = slice_with_tail(&cone, cos, 1)?;
    let minus = slice_with_tail(&cone, cos, -1)?;
    dec.validate(&plus.polytope)?;
    let apex = match minus.polytope.vertices() {
        [v] if v.iter().all(|x| x.is_integer()) => v.clone(),
        _ => {
            return Err(DegenerationError::InvalidCosection(
                "C- must be a cone over a single lattice vertex".into(),
            ))
        }
    };

    let lift = |v: &[Rational], h: i64| -> Vec<Rational> {
        let mut w = v.to_vec();
        w.push(q(h));
        w
    };
    let mut gens: Vec<Vec<Rational>> = Vec::new();
    gens.push(lift(&apex, 0));
    gens.extend(minus.tail.iter().chain(&plus.tail).map(|t| lift(t, 0)));
    gens.extend(dec.c1.vertices().iter().map(|v| lift(v, 1)));
    gens.extend(dec.c2.vertices().iter().map(|v| lift(v, -1)));

    let inc = cos.inclusion();
    let m = inc.len();
    let mut grading: Vec<i64> = inc[m - 1].clone();
    grading.push(0);
    let coords = hyperplane_coordinates(&grading)?;

    let mut rat_pts: Vec<Vec<Rational>> = Vec::new();
    for g in &gens {
        if g.iter().all(Zero::is_zero) {
            continue;
        }
        let deg = dot_q(&grading, g);
        if !deg.is_positive() {
            return Err(DegenerationError::UnboundedSlice);
        }
        let p: Vec<Rational> = g.iter().map(|x| x / &deg).collect();
        rat_pts.push(mat_vec_q(&coords, &p));
    }
    let hull = RationalPolytope::new(&rat_pts)?;
    hull.to_lattice().ok_or_else(|| {
        let shown: Vec<String> = hull
            .vertices()
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        DegenerationError::NotLattice(shown.join(" "))
    })
}

/// `f = f₊·x0 + f0 + f₋/x0` with `f₊ = f1·f2` becomes
/// `f1·x0 + f0 + f₋·f2/x0`, the change `x0 ↦ x0/f2`.
pub fn factor_mutation(
    f: &LaurentPoly,
    pivot: usize,
    f1: &LaurentPoly,
    f2: &LaurentPoly,
) -> Result<LaurentPoly, DegenerationError> {
    if pivot >= f.nvars() {
        return Err(MutationError::InvalidChange(format!("pivot {pivot} out of range")).into());
    }
    let (lo, hi) = f.degree_range(pivot).unwrap_or((0, 0));
    if lo != -1 || hi != 1 {
        return Err(DegenerationError::PivotDegreeOutOfRange { lo, hi });
    }
    if f1.involves(pivot) || f2.involves(pivot) {
        return Err(DegenerationError::BadFactorization);
    }
    let plus = f.coefficients_in(pivot).remove(&1).expect("degree one present");
    let prod = f1.mul(f2).map_err(|_| DegenerationError::BadFactorization)?;
    if !prod.same_terms(&plus) {
        return Err(DegenerationError::BadFactorization);
    }
    let change = ClusterChange::new(pivot, 1, f2.clone())?;
    Ok(apply_cluster(f, &change)?)
}
