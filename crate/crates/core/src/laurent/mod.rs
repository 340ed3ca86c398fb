//! Sparse Laurent polynomials with exact rational coefficients.
//!
//! A [`LaurentPoly`] is a map from exponent vectors to nonzero rationals in a
//! fixed list of named variables. Terms are kept in lexicographic order of
//! exponents, which is also the order used by the division routine and (in
//! reverse) by the printer.

mod divide;
mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exec::Execution;
use crate::linalg;

pub use parse::{parse, parse_with_vars};

pub type Rational = BigRational;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("not a Laurent polynomial at position {pos}: {msg}")]
    NotLaurent { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("variable count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("division is not exact")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent matrix is not unimodular")]
    NotUnimodular,
    #[error("invalid change of variables: {0}")]
    InvalidChange(String),
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
}

/// Exponents of one monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, k: i64) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }
}

impl Deref for ExponentVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

impl From<&[i64]> for ExponentVector {
    fn from(v: &[i64]) -> Self {
        ExponentVector(v.to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub exponent: ExponentVector,
}

/// Term-count threshold above which [`Execution::Parallel`] splits a product.
const PARALLEL_MUL_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<ExponentVector, Rational>,
}

pub fn default_var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

impl LaurentPoly {
    pub fn zero(vars: Vec<String>) -> Self {
        LaurentPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vec<String>, c: Rational) -> Self {
        let n = vars.len();
        Self::monomial(vars, ExponentVector::zero(n), c)
    }

    pub fn one(vars: Vec<String>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn monomial(vars: Vec<String>, exponent: ExponentVector, c: Rational) -> Self {
        assert_eq!(exponent.len(), vars.len(), "exponent length must match variable count");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        LaurentPoly { vars, terms }
    }

    /// The variable with index `i`.
    pub fn var(vars: Vec<String>, i: usize) -> Self {
        let n = vars.len();
        Self::monomial(vars, ExponentVector::unit(n, i), Rational::one())
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut p = LaurentPoly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.nvars(), "exponent length must match variable count");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: ExponentVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    /// Same terms under different variable names.
    pub fn with_var_names(mut self, vars: Vec<String>) -> Result<Self, LaurentError> {
        if vars.len() != self.vars.len() {
            return Err(LaurentError::DimensionMismatch {
                left: self.vars.len(),
                right: vars.len(),
            });
        }
        self.vars = vars;
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn term_list(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(e, c)| Term { coeff: c.clone(), exponent: e.clone() })
            .collect()
    }

    /// Equality of term maps, ignoring variable names.
    pub fn same_terms(&self, other: &LaurentPoly) -> bool {
        self.terms == other.terms
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient_at(&ExponentVector::zero(self.nvars()))
    }

    pub fn coefficient_at(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> BTreeSet<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn leading_term(&self) -> Option<(&ExponentVector, &Rational)> {
        self.terms.iter().next_back()
    }

    fn check_dims(&self, other: &LaurentPoly) -> Result<(), LaurentError> {
        if self.nvars() != other.nvars() {
            return Err(LaurentError::DimensionMismatch {
                left: self.nvars(),
                right: other.nvars(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> LaurentPoly {
        if k.is_zero() {
            return LaurentPoly::zero(self.vars.clone());
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &ExponentVector) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.add(shift), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.mul_with(other, Execution::default())
    }

    pub fn mul_with(&self, other: &LaurentPoly, exec: Execution) -> Result<LaurentPoly, LaurentError> {
        self.check_dims(other)?;
        let work = self.len().saturating_mul(other.len());
        let acc = if exec.is_parallel() && work >= PARALLEL_MUL_THRESHOLD {
            mul_parallel(&self.terms, &other.terms)
        } else {
            let mut acc = HashMap::with_capacity(self.len().max(other.len()));
            mul_accumulate(self.terms.iter(), &other.terms, &mut acc);
            acc
        };
        Ok(LaurentPoly {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// `self^k` by repeated squaring; `p^0 = 1`.
    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one(self.vars.clone());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("same variables");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same variables");
            }
        }
        result
    }

    /// Exact quotient `self / q` in the Laurent ring.
    pub fn exact_divide(&self, q: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_dims(q)?;
        divide::exact_divide(self, q)
    }

    /// Applies the monomial change `x^e ↦ (∏ scaleᵢ^{eᵢ}) · x^{A·e + shift}`.
    pub fn monomial_substitute(
        &self,
        matrix: &[Vec<i64>],
        shift: &ExponentVector,
        scale: &[Rational],
    ) -> Result<LaurentPoly, LaurentError> {
        let n = self.nvars();
        if matrix.len() != n || shift.len() != n || scale.len() != n {
            return Err(LaurentError::InvalidChange(format!(
                "change of variables must be {n}-dimensional"
            )));
        }
        if !linalg::is_unimodular(matrix) {
            return Err(LaurentError::NotUnimodular);
        }
        if scale.iter().any(Zero::is_zero) {
            return Err(LaurentError::InvalidChange("zero scaling factor".into()));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let image: Vec<i64> = linalg::mat_vec(matrix, e)
                .into_iter()
                .zip(shift.iter())
                .map(|(a, s)| a + s)
                .collect();
            let mut coeff = c.clone();
            for (s, &k) in scale.iter().zip(e.iter()) {
                if k != 0 {
                    coeff *= s.pow(k as i32);
                }
            }
            terms.insert(ExponentVector(image), coeff);
        }
        Ok(LaurentPoly { vars: self.vars.clone(), terms })
    }

    /// Writes `self = Σ_k c_k · x_var^k` and returns the `c_k` keyed by `k`.
    pub fn coefficients_in(&self, var: usize) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.0.clone();
            let k = rest[var];
            rest[var] = 0;
            out.entry(k)
                .or_insert_with(|| LaurentPoly::zero(self.vars.clone()))
                .terms
                .insert(ExponentVector(rest), c.clone());
        }
        out
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn retain_terms(&self, mut keep: impl FnMut(&ExponentVector) -> bool) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Whether variable `var` occurs with nonzero exponent in some term.
    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] != 0)
    }

    /// Minimum and maximum exponent of `var`, `None` for the zero polynomial.
    pub fn degree_range(&self, var: usize) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|e| e[var]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), k| (lo.min(k), hi.max(k))))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polynomial serializes")
    }
}

fn mul_accumulate<'a, I>(
    left: I,
    right: &BTreeMap<ExponentVector, Rational>,
    acc: &mut HashMap<ExponentVector, Rational>,
) where
    I: Iterator<Item = (&'a ExponentVector, &'a Rational)>,
{
    for (e1, c1) in left {
        for (e2, c2) in right {
            let e = e1.add(e2);
            let c = c1 * c2;
            match acc.get_mut(&e) {
                Some(v) => *v += c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
    }
}

#[cfg(feature = "parallel")]
fn mul_parallel(
    left: &BTreeMap<ExponentVector, Rational>,
    right: &BTreeMap<ExponentVector, Rational>,
) -> HashMap<ExponentVector, Rational> {
    use rayon::prelude::*;
    let items: Vec<(&ExponentVector, &Rational)> = left.iter().collect();
    let chunk = items.len().div_ceil(rayon::current_num_threads() * 4).max(1);
    items
        .par_chunks(chunk)
        .map(|part| {
            let mut acc = HashMap::new();
            mul_accumulate(part.iter().copied(), right, &mut acc);
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            if a.len() < b.len() {
                return merge_into(b, a);
            }
            for (e, c) in b {
                match a.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        a.insert(e, c);
                    }
                }
            }
            a
        })
}

#[cfg(feature = "parallel")]
fn merge_into(
    mut big: HashMap<ExponentVector, Rational>,
    small: HashMap<ExponentVector, Rational>,
) -> HashMap<ExponentVector, Rational> {
    for (e, c) in small {
        match big.get_mut(&e) {
            Some(v) => *v += c,
            None => {
                big.insert(e, c);
            }
        }
    }
    big
}

#[cfg(not(feature = "parallel"))]
fn mul_parallel(
    left: &BTreeMap<ExponentVector, Rational>,
    right: &BTreeMap<ExponentVector, Rational>,
) -> HashMap<ExponentVector, Rational> {
    let mut acc = HashMap::new();
    mul_accumulate(left.iter(), right, &mut acc);
    acc
}

fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_monomial(vars: &[String], e: &[i64]) -> String {
    e.iter()
        .zip(vars)
        .filter(|(&k, _)| k != 0)
        .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical text form: terms in descending lexicographic exponent order,
/// `"0"` for the zero polynomial.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c } else { c.clone() };
            let mono = format_monomial(&self.vars, e);
            let body = if mono.is_empty() {
                format_rational(&abs)
            } else if abs.is_one() {
                mono
            } else {
                format!("{}*{}", format_rational(&abs), mono)
            };
            match (i, negative) {
                (0, false) => f.write_str(&body)?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

pub fn format(p: &LaurentPoly) -> String {
    p.to_string()
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    e: Vec<i64>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    vars: Vec<String>,
    terms: Vec<JsonTerm>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        JsonPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| JsonTerm { e: e.0.clone(), c: format_rational(c) })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = JsonPoly::deserialize(deserializer)?;
        let n = raw.vars.len();
        let mut p = LaurentPoly::zero(raw.vars);
        for t in raw.terms {
            if t.e.len() != n {
                return Err(D::Error::custom(format!(
                    "exponent {:?} does not have {n} entries",
                    t.e
                )));
            }
            let c = parse_rational(&t.c)
                .ok_or_else(|| D::Error::custom(format!("bad rational `{}`", t.c)))?;
            p.add_term(ExponentVector(t.e), c);
        }
        Ok(p)
    }
}
