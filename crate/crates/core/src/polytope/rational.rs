use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{convex_hull, LatticePolytope, PolytopeError};
use crate::laurent::{parse_rational, Rational};

/// A polytope with rational vertices, stored as a lattice polytope scaled by
/// a common denominator.
#[derive(Debug, Clone)]
pub struct RationalPolytope {
    scaled: LatticePolytope,
    denom: BigInt,
    vertices: Vec<Vec<Rational>>,
}

impl PartialEq for RationalPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for RationalPolytope {}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl RationalPolytope {
    pub fn new(points: &[Vec<Rational>]) -> Result<Self, PolytopeError> {
        if points.is_empty() {
            return Err(PolytopeError::EmptyInput);
        }
        let mut denom = BigInt::one();
        for x in points.iter().flatten() {
            denom = denom.lcm(x.denom());
        }
        let d = Rational::from_integer(denom.clone());
        let ints: Vec<Vec<i64>> = points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|x| (x * &d).to_integer().to_i64().ok_or(PolytopeError::Overflow))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let scaled = convex_hull(&ints)?;
        Ok(Self::from_scaled(scaled, denom))
    }

    fn from_scaled(scaled: LatticePolytope, denom: BigInt) -> Self {
        let d = Rational::from_integer(denom.clone());
        let vertices = scaled
            .vertices()
            .iter()
            .map(|v| v.iter().map(|&x| q(x) / &d).collect())
            .collect();
        RationalPolytope { scaled, denom, vertices }
    }

    pub fn from_lattice(p: &LatticePolytope) -> Self {
        Self::from_scaled(p.clone(), BigInt::one())
    }

    pub fn dim_ambient(&self) -> usize {
        self.scaled.dim_ambient()
    }

    pub fn dim(&self) -> usize {
        self.scaled.dim()
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    /// Facets as `normal·x ≤ offset`.
    pub fn facets(&self) -> Vec<(Vec<i64>, Rational)> {
        let d = Rational::from_integer(self.denom.clone());
        self.scaled.facets().iter().map(|f| (f.normal.clone(), q(f.offset) / &d)).collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        if x.len() != self.dim_ambient() {
            return false;
        }
        let d = Rational::from_integer(self.denom.clone());
        let dot = |n: &[i64]| -> Rational {
            n.iter().zip(x).fold(Rational::zero(), |acc, (a, b)| acc + q(*a) * b) * &d
        };
        self.scaled.equations().iter().all(|e| dot(&e.normal) == q(e.offset))
            && self.scaled.facets().iter().all(|f| dot(&f.normal) <= q(f.offset))
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().flatten().all(|x| x.is_integer())
    }

    pub fn to_lattice(&self) -> Option<LatticePolytope> {
        if !self.is_lattice() {
            return None;
        }
        let pts: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x.to_integer().to_i64()).collect::<Option<Vec<_>>>())
            .collect::<Option<_>>()?;
        convex_hull(&pts).ok()
    }

    pub fn minkowski_sum(&self, other: &RationalPolytope) -> Result<RationalPolytope, PolytopeError> {
        if self.dim_ambient() != other.dim_ambient() {
            return Err(PolytopeError::DimensionMismatch(self.dim_ambient(), other.dim_ambient()));
        }
        let mut pts = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        RationalPolytope::new(&pts)
    }

    pub fn translate(&self, t: &[Rational]) -> Result<RationalPolytope, PolytopeError> {
        let pts: Vec<Vec<Rational>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
            .collect();
        RationalPolytope::new(&pts)
    }

    pub fn equal_up_to_translation(&self, other: &RationalPolytope) -> bool {
        if self.vertices.len() != other.vertices.len() || self.dim_ambient() != other.dim_ambient() {
            return false;
        }
        let t: Vec<Rational> =
            other.vertices[0].iter().zip(&self.vertices[0]).map(|(a, b)| a - b).collect();
        self.vertices
            .iter()
            .zip(&other.vertices)
            .all(|(a, b)| a.iter().zip(b).zip(&t).all(|((x, y), s)| &(x + s) == y))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coord {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    dim: usize,
    vertices: Vec<Vec<Coord>>,
}

impl Serialize for RationalPolytope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| Coord::Text(x.to_string())).collect())
            .collect();
        RationalJson { dim: self.dim_ambient(), vertices }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RationalJson::deserialize(d)?;
        let mut pts = Vec::new();
        for v in raw.vertices {
            if v.len() != raw.dim {
                return Err(D::Error::custom("vertex length differs from `dim`"));
            }
            let row = v
                .into_iter()
                .map(|c| match c {
                    Coord::Int(n) => Ok(q(n)),
                    Coord::Text(s) => {
                        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            pts.push(row);
        }
        RationalPolytope::new(&pts).map_err(D::Error::custom)
    }
}
