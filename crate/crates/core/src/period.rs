//! Period sequences: `a_i` is the constant term of `f^i`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Execution};
use crate::laurent::{ExponentVector, LaurentPoly, Rational};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PeriodError {
    #[error("the zero polynomial has no period sequence")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSequence {
    #[serde(with = "rational_strings")]
    pub values: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_id: Option<String>,
}

impl PeriodSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn with_source(mut self, id: impl Into<String>) -> Self {
        self.source_id = Some(id.into());
        self
    }

    /// Values as a JSON array of rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.values.iter().map(|v| serde_json::Value::String(v.to_string())).collect(),
        )
    }
}

mod rational_strings {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::laurent::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        use serde::de::Error;
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`"))))
            .collect()
    }
}

/// Per-coordinate extent of the support of `f`.
struct Reach {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Reach {
    fn of(f: &LaurentPoly) -> Self {
        let n = f.nvars();
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for (e, _) in f.terms() {
            for c in 0..n {
                lo[c] = lo[c].min(e[c]);
                hi[c] = hi[c].max(e[c]);
            }
        }
        Reach { lo, hi }
    }

    /// Whether `-e` could be a sum of `k` support vectors for some
    /// `k ≤ steps`, judged coordinate by coordinate.
    fn can_cancel(&self, e: &ExponentVector, steps: i64) -> bool {
        (0..=steps).any(|k| {
            e.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (lo, hi))| k * lo <= -x && -x <= k * hi)
        })
    }
}

pub fn period_sequence(f: &LaurentPoly, n: usize) -> Result<PeriodSequence, PeriodError> {
    period_sequence_with(f, n, Execution::default(), true)
}

/// Computes `a_0..a_n` from the chain `f^i = f^{i-1}·f`.
///
/// With `prune`, terms of `f^i` that no product with at most `n - i` further
/// factors can bring to the origin are dropped; the values are unchanged.
pub fn period_sequence_with(
    f: &LaurentPoly,
    n: usize,
    exec: Execution,
    prune: bool,
) -> Result<PeriodSequence, PeriodError> {
    if f.is_zero() {
        return Err(PeriodError::ZeroPolynomial);
    }
    let reach = Reach::of(f);
    let mut values = Vec::with_capacity(n + 1);
    let mut power = LaurentPoly::one(f.var_names().to_vec());
    values.push(power.constant_term());
    for i in 1..=n {
        power = power.mul_with(f, exec).expect("same variables");
        if prune {
            let steps = (n - i) as i64;
            power = power.retain_terms(|e| reach.can_cancel(e, steps));
        }
        values.push(power.constant_term());
    }
    Ok(PeriodSequence { values, source_id: None })
}

/// Period sequences of several polynomials, computed independently.
pub fn period_sequences(
    fs: &[LaurentPoly],
    n: usize,
    exec: Execution,
) -> Vec<Result<PeriodSequence, PeriodError>> {
    exec::map_collect(exec, fs, |f| period_sequence_with(f, n, Execution::Sequential, true))
}

/// Reference computation: each `f^i` is expanded from scratch by `i`
/// sequential multiplications, with no caching and no pruning.
pub fn period_oracle(f: &LaurentPoly, n: usize) -> Result<PeriodSequence, PeriodError> {
    if f.is_zero() {
        return Err(PeriodError::ZeroPolynomial);
    }
    let values = (0..=n)
        .map(|i| {
            let mut p = LaurentPoly::one(f.var_names().to_vec());
            for _ in 0..i {
                p = p.mul_with(f, Execution::Sequential).expect("same variables");
            }
            p.constant_term()
        })
        .collect();
    Ok(PeriodSequence { values, source_id: None })
}

/// Exact comparison of the first `n + 1` period values; false if either
/// polynomial is zero.
pub fn periods_equal(f: &LaurentPoly, g: &LaurentPoly, n: usize) -> bool {
    match (period_sequence(f, n), period_sequence(g, n)) {
        (Ok(a), Ok(b)) => a.values == b.values,
        _ => false,
    }
}
