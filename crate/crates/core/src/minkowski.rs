//! Minkowski polynomials: face restrictions, edge binomials and Minkowski
//! presentations of Newton polytopes.
//!
//! A presentation assigns to every proper face of dimension one or two a
//! list of irreducible lattice summands (stored up to translation). For a
//! face `F' ⊂ F`, each summand of `F` restricted to the direction cutting
//! out `F'` must be a sum of a share of the summands of `F'`. Faces of
//! dimension three and more are not decomposed; polytopes of dimension four
//! and more are handled in partial mode, which the reports flag.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Execution};
use crate::laurent::{ExponentVector, LaurentPoly, Rational};
use crate::polytope::{
    convex_hull, edge_lattice_length, minkowski_sum, newton_polytope, polygon_minkowski_decompositions, Face,
    LatticePolytope, PolytopeError,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MinkowskiError {
    #[error("the zero polynomial has no Newton polytope")]
    ZeroPolynomial,
    #[error("the face does not belong to the Newton polytope")]
    FaceMismatch,
    #[error("presentation does not match the Newton polytope: {0}")]
    ShapeMismatch(String),
    #[error("face search exceeds complexity limit: {0}")]
    ComplexityLimit(String),
    #[error(transparent)]
    Polytope(PolytopeError),
}

impl From<PolytopeError> for MinkowskiError {
    fn from(e: PolytopeError) -> Self {
        match e {
            PolytopeError::ZeroPolynomial => MinkowskiError::ZeroPolynomial,
            PolytopeError::ComplexityLimit { .. } => MinkowskiError::ComplexityLimit(e.to_string()),
            other => MinkowskiError::Polytope(other),
        }
    }
}

/// Sum of the terms of `f` whose exponents lie in `face`.
pub fn face_restriction(f: &LaurentPoly, face: &Face) -> Result<LaurentPoly, MinkowskiError> {
    let delta = newton_polytope(f)?;
    if !delta.all_faces().iter().any(|g| g.vertices == face.vertices) {
        return Err(MinkowskiError::FaceMismatch);
    }
    Ok(restrict(f, face))
}

fn restrict(f: &LaurentPoly, face: &Face) -> LaurentPoly {
    f.retain_terms(|e| face.contains(e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeViolation {
    pub edge: Vec<Vec<i64>>,
    pub point: Vec<i64>,
    pub index: i64,
    #[serde(with = "rational_string")]
    pub expected: Rational,
    #[serde(with = "rational_string")]
    pub found: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub ok: bool,
    pub violations: Vec<EdgeViolation>,
}

mod rational_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::laurent::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        use serde::de::Error;
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
    }
}

fn binomial(n: i64, k: i64) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * Rational::new((n - i).into(), (i + 1).into()))
}

/// Checks that every edge of lattice length `n` carries the coefficients
/// `C(n, i)` at its lattice points, vertices included.
pub fn edge_binomials_ok(f: &LaurentPoly) -> Result<EdgeReport, MinkowskiError> {
    let delta = newton_polytope(f)?;
    let mut violations = Vec::new();
    let coeff = |p: &[i64]| f.coefficient_at(&ExponentVector::new(p.to_vec()));
    if delta.dim() == 0 {
        let v = &delta.vertices()[0];
        if coeff(v) != Rational::one() {
            violations.push(EdgeViolation {
                edge: vec![v.clone()],
                point: v.clone(),
                index: 0,
                expected: Rational::one(),
                found: coeff(v),
            });
        }
    }
    for edge in delta.edges() {
        let n = edge_lattice_length(&edge)?;
        let (a, b) = (&edge.vertices[0], &edge.vertices[1]);
        for i in 0..=n {
            let p: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + (y - x) / n * i).collect();
            let want = binomial(n, i);
            let got = coeff(&p);
            if got != want {
                violations.push(EdgeViolation { edge: edge.vertices.clone(), point: p, index: i, expected: want, found: got });
            }
        }
    }
    Ok(EdgeReport { ok: violations.is_empty(), violations })
}

/// Summands of one face, each stored with its smallest vertex at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePresentation {
    pub face: Vec<Vec<i64>>,
    pub summands: Vec<LatticePolytope>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinkowskiPresentation {
    pub faces: Vec<FacePresentation>,
    #[serde(default)]
    pub partial: bool,
}

impl MinkowskiPresentation {
    pub fn summands_of(&self, face: &[Vec<i64>]) -> Option<&[LatticePolytope]> {
        self.faces.iter().find(|p| p.face == face).map(|p| p.summands.as_slice())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("presentation serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceStatus {
    pub face: Vec<Vec<i64>>,
    pub dim: usize,
    /// `ok`, `unchecked`, or `failed: <reason>`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<String>,
}

impl FaceStatus {
    pub fn passed(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationReport {
    pub ok: bool,
    pub partial: bool,
    pub faces: Vec<FaceStatus>,
    pub first_failure: Option<usize>,
}

impl PresentationReport {
    /// JSON object keyed by face, e.g. `{"[[0,1],[1,0]]": "ok"}`.
    pub fn face_map(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .faces
            .iter()
            .map(|s| (serde_json::to_string(&s.face).expect("face"), serde_json::Value::String(s.status.clone())))
            .collect();
        serde_json::Value::Object(map)
    }
}

/// Proper faces that carry a presentation, and whether higher faces are
/// skipped.
fn required_faces(delta: &LatticePolytope) -> (Vec<Face>, Vec<Face>, bool) {
    let d = delta.dim();
    let top = d.saturating_sub(1);
    let mut checked = Vec::new();
    let mut skipped = Vec::new();
    for f in delta.all_faces() {
        if f.dim == 0 || f.dim > top {
            continue;
        }
        if f.dim <= 2 {
            checked.push(f);
        } else {
            skipped.push(f);
        }
    }
    (checked, skipped, d >= 4)
}

fn is_irreducible(s: &LatticePolytope) -> Result<bool, MinkowskiError> {
    if s.dim() == 0 || s.dim() > 2 {
        return Ok(false);
    }
    let decs = polygon_minkowski_decompositions(s)?;
    Ok(decs.len() == 1 && decs[0].len() == 1)
}

fn sum_all(summands: &[LatticePolytope]) -> Result<LatticePolytope, PolytopeError> {
    let mut it = summands.iter();
    let first = it.next().ok_or(PolytopeError::EmptyInput)?.clone();
    it.try_fold(first, |acc, s| minkowski_sum(&acc, s))
}

/// Translates the first summand so that the summands add up to `face`.
fn position(face: &LatticePolytope, summands: &[LatticePolytope]) -> Option<Vec<LatticePolytope>> {
    let total = sum_all(summands).ok()?;
    if !total.equal_up_to_translation(face) {
        return None;
    }
    let t: Vec<i64> = face.vertices()[0].iter().zip(&total.vertices()[0]).map(|(a, b)| a - b).collect();
    let mut out = summands.to_vec();
    out[0] = out[0].translate(&t);
    Some(out)
}

fn vertex_poly(vars: &[String], s: &LatticePolytope) -> LaurentPoly {
    LaurentPoly::from_terms(
        vars.to_vec(),
        s.vertices().iter().map(|v| (ExponentVector::new(v.clone()), Rational::one())),
    )
}

/// Factors `f_face` over positioned summands with vertex coefficients one.
///
/// Summands without non-vertex lattice points have a forced factor; at most
/// one summand may carry free coefficients, recovered by exact division.
fn factor_face(f_face: &LaurentPoly, summands: &[LatticePolytope]) -> Result<Vec<LaurentPoly>, String> {
    let vars = f_face.var_names();
    let mut known = LaurentPoly::one(vars.to_vec());
    let mut free = Vec::new();
    let mut factors: Vec<Option<LaurentPoly>> = Vec::new();
    for (i, s) in summands.iter().enumerate() {
        if s.lattice_points().len() == s.vertices().len() {
            let g = vertex_poly(vars, s);
            known = known.mul(&g).expect("same variables");
            factors.push(Some(g));
        } else {
            free.push(i);
            factors.push(None);
        }
    }
    match free.as_slice() {
        [] => {
            if !known.same_terms(f_face) {
                return Err("product of the summand polynomials differs from the face polynomial".into());
            }
        }
        [i] => {
            let g = f_face
                .exact_divide(&known)
                .map_err(|_| "face polynomial is not divisible by the forced factors".to_string())?;
            let s = &summands[*i];
            let pts = s.lattice_points();
            if g.terms().any(|(e, _)| !pts.iter().any(|p| p.as_slice() == &e[..])) {
                return Err("a factor leaves its summand".into());
            }
            if s.vertices().iter().any(|v| g.coefficient_at(&ExponentVector::new(v.clone())) != Rational::one()) {
                return Err("a factor has a vertex coefficient other than 1".into());
            }
            factors[*i] = Some(g);
        }
        _ => return Err("more than one summand with free coefficients".into()),
    }
    Ok(factors.into_iter().map(|g| g.expect("filled")).collect())
}

/// Face of `s` on which `u` is maximal.
fn supporting_face(s: &LatticePolytope, u: &[i64]) -> LatticePolytope {
    let val = |v: &[i64]| -> i64 { v.iter().zip(u).map(|(a, b)| a * b).sum() };
    let best = s.vertices().iter().map(|v| val(v)).max().expect("nonempty");
    let pts: Vec<Vec<i64>> = s.vertices().iter().filter(|v| val(v) == best).cloned().collect();
    convex_hull(&pts).expect("vertices")
}

/// A direction whose maximal face on the Newton polytope is `face`.
fn face_direction(delta: &LatticePolytope, face: &Face) -> Vec<i64> {
    let mut u = vec![0i64; delta.dim_ambient()];
    for &i in &face.tight_facets {
        for (a, b) in u.iter_mut().zip(&delta.facets()[i].normal) {
            *a += b;
        }
    }
    u
}

/// Whether `parts` can be split into groups, one per target, each adding
/// up to its target up to translation.
fn splits_into(targets: &[LatticePolytope], parts: &[LatticePolytope]) -> bool {
    fn go(targets: &[LatticePolytope], parts: &[LatticePolytope], used: &mut Vec<bool>) -> bool {
        let Some((t, rest)) = targets.split_first() else {
            return used.iter().all(|&u| u);
        };
        let free: Vec<usize> = (0..parts.len()).filter(|&i| !used[i]).collect();
        for mask in 1u32..(1u32 << free.len()) {
            let group: Vec<usize> =
                free.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &i)| i).collect();
            let chosen: Vec<LatticePolytope> = group.iter().map(|&i| parts[i].clone()).collect();
            let Ok(s) = sum_all(&chosen) else { continue };
            if !s.equal_up_to_translation(t) {
                continue;
            }
            for &i in &group {
                used[i] = true;
            }
            if go(rest, parts, used) {
                return true;
            }
            for &i in &group {
                used[i] = false;
            }
        }
        false
    }
    if parts.len() > 20 {
        return false;
    }
    go(targets, parts, &mut vec![false; parts.len()])
}

/// Summands of `F` restricted to the subface cut out by `u`, points dropped.
fn restrictions(summands: &[LatticePolytope], u: &[i64]) -> Vec<LatticePolytope> {
    summands.iter().map(|s| supporting_face(s, u)).filter(|r| r.dim() > 0).collect()
}

/// Local checks on one face: irreducible summands adding up to the face
/// and a factorisation of the face polynomial.
fn check_face(f: &LaurentPoly, face: &Face, summands: &[LatticePolytope]) -> Result<Vec<LaurentPoly>, String> {
    if summands.is_empty() {
        return Err("no summands".into());
    }
    if summands.iter().any(|s| s.dim_ambient() != f.nvars()) {
        return Err("summand in the wrong dimension".into());
    }
    for s in summands {
        match is_irreducible(s) {
            Ok(true) => {}
            Ok(false) => return Err("a summand is not irreducible".into()),
            Err(e) => return Err(e.to_string()),
        }
    }
    let poly = face.to_polytope();
    let placed = position(&poly, summands).ok_or_else(|| "summands do not add up to the face".to_string())?;
    factor_face(&restrict(f, face), &placed)
}

/// Checks a presentation against `f` face by face.
pub fn verify_presentation(
    f: &LaurentPoly,
    pres: &MinkowskiPresentation,
) -> Result<PresentationReport, MinkowskiError> {
    verify_presentation_with(f, pres, Execution::default())
}

pub fn verify_presentation_with(
    f: &LaurentPoly,
    pres: &MinkowskiPresentation,
    exec: Execution,
) -> Result<PresentationReport, MinkowskiError> {
    let delta = newton_polytope(f)?;
    let (checked, skipped, partial) = required_faces(&delta);
    let by_face: BTreeMap<&Vec<Vec<i64>>, &[LatticePolytope]> =
        pres.faces.iter().map(|p| (&p.face, p.summands.as_slice())).collect();
    if by_face.len() != pres.faces.len() {
        return Err(MinkowskiError::ShapeMismatch("a face is listed twice".into()));
    }
    for face in &checked {
        if !by_face.contains_key(&face.vertices) {
            return Err(MinkowskiError::ShapeMismatch(format!("missing face {:?}", face.vertices)));
        }
    }
    if by_face.len() != checked.len() {
        return Err(MinkowskiError::ShapeMismatch("presentation lists faces that need none".into()));
    }

    let local = exec::map_collect(exec, &checked, |face| check_face(f, face, by_face[&face.vertices]));
    let mut statuses: Vec<FaceStatus> = checked
        .iter()
        .zip(local)
        .map(|(face, r)| match r {
            Ok(gs) => FaceStatus {
                face: face.vertices.clone(),
                dim: face.dim,
                status: "ok".into(),
                factors: gs.iter().map(|g| g.to_string()).collect(),
            },
            Err(msg) => FaceStatus { face: face.vertices.clone(), dim: face.dim, status: format!("failed: {msg}"), factors: Vec::new() },
        })
        .collect();

    for (i, big) in checked.iter().enumerate() {
        if !statuses[i].passed() {
            continue;
        }
        for small in &checked {
            let inside = small.dim < big.dim && small.vertex_indices.iter().all(|v| big.vertex_indices.contains(v));
            if !inside {
                continue;
            }
            let u = face_direction(&delta, small);
            let parts = restrictions(by_face[&big.vertices], &u);
            if !splits_into(&parts, by_face[&small.vertices]) {
                statuses[i].status = format!("failed: summands do not restrict to the presentation of {:?}", small.vertices);
                statuses[i].factors.clear();
                break;
            }
        }
    }
    statuses.extend(skipped.iter().map(|face| FaceStatus {
        face: face.vertices.clone(),
        dim: face.dim,
        status: "unchecked".into(),
        factors: Vec::new(),
    }));
    let first_failure = statuses.iter().position(|s| s.status.starts_with("failed"));
    Ok(PresentationReport { ok: first_failure.is_none(), partial, faces: statuses, first_failure })
}

/// Searches for a presentation under which `f` is a Minkowski polynomial.
pub fn find_presentation(f: &LaurentPoly) -> Result<Option<MinkowskiPresentation>, MinkowskiError> {
    find_presentation_with(f, Execution::default())
}

pub fn find_presentation_with(
    f: &LaurentPoly,
    exec: Execution,
) -> Result<Option<MinkowskiPresentation>, MinkowskiError> {
    let delta = newton_polytope(f)?;
    if !edge_binomials_ok(f)?.ok {
        return Ok(None);
    }
    let (checked, _, partial) = required_faces(&delta);
    let mut edge_summands: BTreeMap<Vec<Vec<i64>>, Vec<LatticePolytope>> = BTreeMap::new();
    for e in checked.iter().filter(|e| e.dim == 1) {
        let n = edge_lattice_length(e)?;
        let step: Vec<i64> = e.vertices[1].iter().zip(&e.vertices[0]).map(|(a, b)| (a - b) / n).collect();
        let unit = convex_hull(&[vec![0; step.len()], step])?.canonical();
        edge_summands.insert(e.vertices.clone(), vec![unit; n as usize]);
    }

    let polygons: Vec<&Face> = checked.iter().filter(|p| p.dim == 2).collect();
    let choices = exec::map_collect(exec, &polygons, |face| -> Result<Option<Vec<LatticePolytope>>, MinkowskiError> {
        let candidates = polygon_minkowski_decompositions(&face.to_polytope())?;
        for cand in candidates {
            if check_face(f, face, &cand).is_err() {
                continue;
            }
            let compatible = checked.iter().filter(|e| e.dim == 1).all(|e| {
                if !e.vertex_indices.iter().all(|v| face.vertex_indices.contains(v)) {
                    return true;
                }
                let u = face_direction(&delta, e);
                splits_into(&restrictions(&cand, &u), &edge_summands[&e.vertices])
            });
            if compatible {
                return Ok(Some(cand));
            }
        }
        Ok(None)
    });

    let mut faces: Vec<FacePresentation> = edge_summands
        .into_iter()
        .map(|(face, summands)| FacePresentation { face, summands })
        .collect();
    for (face, choice) in polygons.iter().zip(choices) {
        match choice? {
            Some(summands) => faces.push(FacePresentation { face: face.vertices.clone(), summands }),
            None => return Ok(None),
        }
    }
    let order: BTreeMap<&Vec<Vec<i64>>, usize> = checked.iter().enumerate().map(|(i, f)| (&f.vertices, i)).collect();
    faces.sort_by_key(|p| order[&p.face]);
    Ok(Some(MinkowskiPresentation { faces, partial }))
}
