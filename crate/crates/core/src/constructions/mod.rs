//! Named constructions: Hori–Vafa models, Markov triples, the mutation chain
//! of the P² model and the catalog of worked examples.

mod catalog;
mod galkin;

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{ExponentVector, LaurentPoly};
use crate::mutation::MutationError;

pub use catalog::{
    catalog, catalog_poly, p112_data, p114_data, run_all, run_example, CheckResult, ExampleReport, IltenData, EXAMPLES,
    PERIOD_N,
};
pub use galkin::{galkin_mutate, galkin_template, p2_chain, weighted_triangle_check, ChainStep};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("not Fano: index {0} < 1")]
    NotFano(i64),
    #[error("invalid complete intersection: {0}")]
    InvalidSpec(String),
    #[error("({0}, {1}, {2}) is not a Markov triple")]
    NotMarkov(String, String, String),
    #[error("Newton polytope is not a weighted triangle for P({0})")]
    NotWeightedTriangle(String),
    #[error("no toric coordinates put the polynomial in template form")]
    CoordinateSearchFailed,
    #[error("Markov entries too large for exponent arithmetic")]
    Overflow,
    #[error(transparent)]
    Mutation(#[from] MutationError),
}

/// A complete intersection of hypersurfaces of the given degrees in P^N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteIntersectionSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub degrees: Vec<usize>,
}

impl CompleteIntersectionSpec {
    pub fn new(n: usize, degrees: Vec<usize>) -> Self {
        CompleteIntersectionSpec { n, degrees }
    }

    /// Fano index `N + 1 - Σ d_j`.
    pub fn index(&self) -> i64 {
        self.n as i64 + 1 - self.degrees.iter().map(|&d| d as i64).sum::<i64>()
    }

    pub fn dim(&self) -> i64 {
        self.n as i64 - self.degrees.len() as i64
    }
}

/// `x, y, z, t, u, v, w` for up to seven variables, `x1..xn` beyond.
pub fn standard_var_names(n: usize) -> Vec<String> {
    const SHORT: [&str; 7] = ["x", "y", "z", "t", "u", "v", "w"];
    if n <= SHORT.len() {
        SHORT[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// `∏_j (x_{j,1} + … + x_{j,d_j-1} + 1)^{d_j} / ∏ x_{ij} + x_{0,1} + … + x_{0,d_0-1}`.
///
/// Variables are numbered hypersurface by hypersurface, then the free ones.
pub fn hori_vafa(spec: &CompleteIntersectionSpec) -> Result<LaurentPoly, ConstructionError> {
    if let Some(&d) = spec.degrees.iter().find(|&&d| d < 2) {
        return Err(ConstructionError::InvalidSpec(format!("degree {d} is below 2")));
    }
    let d0 = spec.index();
    if d0 < 1 {
        return Err(ConstructionError::NotFano(d0));
    }
    if spec.dim() < 1 {
        return Err(ConstructionError::InvalidSpec(format!(
            "{} hypersurfaces in P^{} leave no positive dimension",
            spec.degrees.len(),
            spec.n
        )));
    }
    let n = spec.dim() as usize;
    let names = standard_var_names(n);
    let all_neg = ExponentVector::new(vec![-1; n]);
    let mut numerator = LaurentPoly::one(names.clone());
    let mut next = 0;
    for &d in &spec.degrees {
        let mut linear = LaurentPoly::one(names.clone());
        for _ in 0..d - 1 {
            linear = linear.add(&LaurentPoly::var(names.clone(), next)).expect("same variables");
            next += 1;
        }
        numerator = numerator.mul(&linear.pow(d as u32)).expect("same variables");
    }
    let mut f = numerator.shift(&all_neg);
    while next < n {
        f = f.add(&LaurentPoly::var(names.clone(), next)).expect("same variables");
        next += 1;
    }
    Ok(f)
}

/// A solution of `a² + b² + c² = 3abc`, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkovTriple {
    entries: [BigUint; 3],
}

impl MarkovTriple {
    pub fn new(a: BigUint, b: BigUint, c: BigUint) -> Result<Self, ConstructionError> {
        let mut e = [a, b, c];
        e.sort();
        let [a, b, c] = &e;
        let zero = BigUint::from(0u32);
        if *a == zero || a * a + b * b + c * c != BigUint::from(3u32) * a * b * c {
            return Err(ConstructionError::NotMarkov(a.to_string(), b.to_string(), c.to_string()));
        }
        Ok(MarkovTriple { entries: e })
    }

    pub fn from_u64(a: u64, b: u64, c: u64) -> Result<Self, ConstructionError> {
        Self::new(a.into(), b.into(), c.into())
    }

    pub fn basic() -> Self {
        MarkovTriple { entries: [BigUint::one(), BigUint::one(), BigUint::one()] }
    }

    pub fn entries(&self) -> &[BigUint; 3] {
        &self.entries
    }

    pub fn to_u64(&self) -> Option<[u64; 3]> {
        Some([self.entries[0].to_u64()?, self.entries[1].to_u64()?, self.entries[2].to_u64()?])
    }

    /// Replaces entry `slot` of the sorted triple by `3·(product of the
    /// others) − entry`.
    pub fn mutate(&self, slot: usize) -> MarkovTriple {
        assert!(slot < 3, "slot must be 0, 1 or 2");
        let e = &self.entries;
        let others: Vec<&BigUint> = (0..3).filter(|&i| i != slot).map(|i| &e[i]).collect();
        let new = BigUint::from(3u32) * others[0] * others[1] - &e[slot];
        MarkovTriple::new(others[0].clone(), others[1].clone(), new)
            .expect("elementary transform keeps the equation")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|x| match x.to_u64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::String(x.to_string()),
                })
                .collect(),
        )
    }
}

impl std::fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c] = &self.entries;
        write!(f, "({a},{b},{c})")
    }
}

/// Triples one elementary transform away, excluding `t` itself.
pub fn markov_children(t: &MarkovTriple) -> BTreeSet<MarkovTriple> {
    (0..3).map(|s| t.mutate(s)).filter(|c| c != t).collect()
}

/// All triples within `depth` transforms of `(1,1,1)`.
pub fn markov_tree(depth: usize) -> BTreeSet<MarkovTriple> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(MarkovTriple::basic());
    queue.push_back((MarkovTriple::basic(), 0usize));
    while let Some((t, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for c in markov_children(&t) {
            if seen.insert(c.clone()) {
                queue.push_back((c, d + 1));
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_with_vars;

    fn hv(n: usize, d: &[usize]) -> LaurentPoly {
        hori_vafa(&CompleteIntersectionSpec::new(n, d.to_vec())).unwrap()
    }

    #[test]
    fn hori_vafa_examples() {
        assert_eq!(hv(4, &[2]), parse_with_vars("(x+1)^2/(x*y*z)+y+z", &["x", "y", "z"]).unwrap());
        assert_eq!(hv(4, &[3]), parse_with_vars("(x+y+1)^3/(x*y*z)+z", &["x", "y", "z"]).unwrap());
        assert_eq!(
            hv(5, &[3]),
            parse_with_vars("(x+y+1)^3/(x*y*z*t)+z+t", &["x", "y", "z", "t"]).unwrap()
        );
        assert_eq!(hv(3, &[]).to_string(), "x + y + z + x^-1*y^-1*z^-1");
        assert_eq!(hv(9, &[2, 2]).nvars(), 7);
        assert_eq!(hv(10, &[2]).var_names()[0], "x1");
    }

    #[test]
    fn hori_vafa_errors() {
        let bad = |n, d: &[usize]| hori_vafa(&CompleteIntersectionSpec::new(n, d.to_vec()));
        assert_eq!(bad(4, &[5]), Err(ConstructionError::NotFano(0)));
        assert!(matches!(bad(4, &[1]), Err(ConstructionError::InvalidSpec(_))));
        assert!(matches!(bad(2, &[2, 2]), Err(ConstructionError::NotFano(_)) | Err(ConstructionError::InvalidSpec(_))));
    }

    #[test]
    fn markov_children_examples() {
        let t = |a, b, c| MarkovTriple::from_u64(a, b, c).unwrap();
        assert_eq!(markov_children(&t(1, 1, 1)), [t(1, 1, 2)].into_iter().collect());
        assert_eq!(markov_children(&t(1, 1, 2)), [t(1, 1, 1), t(1, 2, 5)].into_iter().collect());
        assert_eq!(
            markov_children(&t(1, 2, 5)),
            [t(1, 1, 2), t(1, 5, 13), t(2, 5, 29)].into_iter().collect()
        );
        assert!(MarkovTriple::from_u64(1, 2, 3).is_err());
    }

    #[test]
    fn markov_tree_depths() {
        let t = |a, b, c| MarkovTriple::from_u64(a, b, c).unwrap();
        assert_eq!(markov_tree(0), [t(1, 1, 1)].into_iter().collect());
        assert_eq!(markov_tree(2), [t(1, 1, 1), t(1, 1, 2), t(1, 2, 5)].into_iter().collect());
        let six = markov_tree(6);
        for x in [t(1, 2, 5), t(1, 5, 13), t(2, 5, 29)] {
            assert!(six.contains(&x));
        }
        for x in &six {
            for s in 0..3 {
                let child = x.mutate(s);
                let new = BigUint::from(3u32) * &x.entries()[(s + 1) % 3] * &x.entries()[(s + 2) % 3]
                    - &x.entries()[s];
                let k = child.entries().iter().position(|v| *v == new).unwrap();
                assert_eq!(child.mutate(k), *x);
            }
        }
    }
}
