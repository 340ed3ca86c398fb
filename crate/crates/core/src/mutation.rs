//! Cluster-type and toric changes of variables.
//!
//! A [`ClusterChange`] with pivot `x0`, sign `s` and factor `h` introduces
//! the new variable `y0 = x0·h^s`; applying it to `f` substitutes
//! `x0 = y0·h^{-s}`. With `s = -1` and `h = x + 1` this is the change written
//! `y/(x+1) ↦ y`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::laurent::{parse, parse_rational, ExponentVector, LaurentError, LaurentPoly, Rational};
use crate::linalg::{self, IntMatrix};
use crate::polytope::{lattice_equivalences, newton_polytope, AffineMap};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MutationError {
    #[error("result is not a Laurent polynomial: {0}")]
    NotLaurent(String),
    #[error("invalid change of variables: {0}")]
    InvalidChange(String),
    #[error("exponent matrix is not unimodular")]
    NotUnimodular,
    #[error("step {index} failed: {source}")]
    StepFailed {
        index: usize,
        #[source]
        source: Box<MutationError>,
    },
    #[error("invalid trace: {0}")]
    Trace(String),
}

impl From<LaurentError> for MutationError {
    fn from(e: LaurentError) -> Self {
        match e {
            LaurentError::NotUnimodular => MutationError::NotUnimodular,
            LaurentError::NotDivisible | LaurentError::NotLaurent { .. } => {
                MutationError::NotLaurent(e.to_string())
            }
            other => MutationError::InvalidChange(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterChange {
    pub pivot: usize,
    pub sign: i8,
    pub factor: LaurentPoly,
}

impl ClusterChange {
    pub fn new(pivot: usize, sign: i8, factor: LaurentPoly) -> Result<Self, MutationError> {
        if sign != 1 && sign != -1 {
            return Err(MutationError::InvalidChange(format!("sign must be ±1, got {sign}")));
        }
        if pivot >= factor.nvars() {
            return Err(MutationError::InvalidChange(format!(
                "pivot {pivot} out of range for {} variables",
                factor.nvars()
            )));
        }
        if factor.is_zero() {
            return Err(MutationError::InvalidChange("factor is zero".into()));
        }
        if factor.involves(pivot) {
            return Err(MutationError::InvalidChange("factor involves the pivot variable".into()));
        }
        Ok(ClusterChange { pivot, sign, factor })
    }

    /// The same change with the opposite sign.
    pub fn inverse(&self) -> ClusterChange {
        ClusterChange { pivot: self.pivot, sign: -self.sign, factor: self.factor.clone() }
    }
}

/// `x0 ↦ x0·(v1 + … + vk + 1)^sign` on the listed variables.
pub fn elementary_cluster(
    var_names: &[String],
    pivot: usize,
    vars: &[usize],
    sign: i8,
) -> Result<ClusterChange, MutationError> {
    if vars.contains(&pivot) {
        return Err(MutationError::InvalidChange("pivot among the factor variables".into()));
    }
    let mut factor = LaurentPoly::one(var_names.to_vec());
    for &v in vars {
        if v >= var_names.len() {
            return Err(MutationError::InvalidChange(format!("variable {v} out of range")));
        }
        factor = factor.add(&LaurentPoly::var(var_names.to_vec(), v))?;
    }
    ClusterChange::new(pivot, sign, factor)
}

/// Writes `f = Σ c_k·x0^k` and returns `Σ c_k·h^{-sign·k}·x0^k`.
pub fn apply_cluster(f: &LaurentPoly, c: &ClusterChange) -> Result<LaurentPoly, MutationError> {
    if c.factor.nvars() != f.nvars() {
        return Err(MutationError::InvalidChange(format!(
            "factor has {} variables, polynomial has {}",
            c.factor.nvars(),
            f.nvars()
        )));
    }
    let factor = c.factor.clone().with_var_names(f.var_names().to_vec())?;
    let unit = ExponentVector::unit(f.nvars(), c.pivot);
    let mut out = LaurentPoly::zero(f.var_names().to_vec());
    for (k, ck) in f.coefficients_in(c.pivot) {
        let m = -i64::from(c.sign) * k;
        let power = factor.pow(m.unsigned_abs() as u32);
        let coeff = if m >= 0 {
            ck.mul(&power)?
        } else {
            ck.exact_divide(&power).map_err(|_| {
                MutationError::NotLaurent(format!(
                    "coefficient of x{}^{k} is not divisible by ({})^{}",
                    c.pivot,
                    factor,
                    -m
                ))
            })?
        };
        out = out.add(&coeff.shift(&unit.scaled(k)))?;
    }
    Ok(out)
}

/// Monomial change `c·x^e ↦ c·∏scaleᵢ^{eᵢ}·x^{A·e + shift}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricChange {
    pub matrix: IntMatrix,
    pub shift: ExponentVector,
    pub scale: Vec<Rational>,
}

fn product_power(base: &[Rational], e: &[i64]) -> Rational {
    base.iter().zip(e).fold(Rational::one(), |acc, (b, &k)| acc * b.pow(k as i32))
}

impl ToricChange {
    pub fn new(matrix: IntMatrix, shift: ExponentVector, scale: Vec<Rational>) -> Result<Self, MutationError> {
        let n = matrix.len();
        if !linalg::is_square(&matrix) || shift.len() != n || scale.len() != n {
            return Err(MutationError::InvalidChange("toric change has inconsistent sizes".into()));
        }
        if !linalg::is_unimodular(&matrix) {
            return Err(MutationError::NotUnimodular);
        }
        if scale.iter().any(Zero::is_zero) {
            return Err(MutationError::InvalidChange("zero scaling factor".into()));
        }
        Ok(ToricChange { matrix, shift, scale })
    }

    pub fn identity(n: usize) -> Self {
        ToricChange {
            matrix: linalg::identity(n),
            shift: ExponentVector::zero(n),
            scale: vec![Rational::one(); n],
        }
    }

    pub fn from_affine(map: &AffineMap) -> Self {
        let n = map.shift.len();
        ToricChange {
            matrix: map.matrix.clone(),
            shift: ExponentVector::new(map.shift.clone()),
            scale: vec![Rational::one(); n],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == ToricChange::identity(self.matrix.len())
    }

    pub fn apply(&self, f: &LaurentPoly) -> Result<LaurentPoly, MutationError> {
        Ok(f.monomial_substitute(&self.matrix, &self.shift, &self.scale)?)
    }

    /// The change applying `self` and then `then`.
    ///
    /// Fails when the result would need a global constant factor, which
    /// happens only if `self` shifts and `then` scales non-trivially.
    pub fn then(&self, then: &ToricChange) -> Result<ToricChange, MutationError> {
        let n = self.matrix.len();
        if then.matrix.len() != n {
            return Err(MutationError::InvalidChange("toric changes differ in size".into()));
        }
        if !product_power(&then.scale, &self.shift).is_one() {
            return Err(MutationError::InvalidChange(
                "composition needs a constant factor".into(),
            ));
        }
        let matrix = linalg::mat_mul(&then.matrix, &self.matrix);
        let shift: Vec<i64> = linalg::mat_vec(&then.matrix, &self.shift)
            .iter()
            .zip(then.shift.iter())
            .map(|(a, b)| a + b)
            .collect();
        let at = linalg::transpose(&self.matrix);
        let scale = (0..n).map(|j| &self.scale[j] * product_power(&then.scale, &at[j])).collect();
        Ok(ToricChange { matrix, shift: ExponentVector::new(shift), scale })
    }

    pub fn inverse(&self) -> Result<ToricChange, MutationError> {
        let inv = linalg::unimodular_inverse(&self.matrix).ok_or(MutationError::NotUnimodular)?;
        let back: Vec<i64> = linalg::mat_vec(&inv, &self.shift).iter().map(|x| -x).collect();
        if !product_power(&self.scale, &back).is_one() {
            return Err(MutationError::InvalidChange("inverse needs a constant factor".into()));
        }
        let it = linalg::transpose(&inv);
        let scale = it.iter().map(|col| product_power(&self.scale, col).recip()).collect();
        Ok(ToricChange { matrix: inv, shift: ExponentVector::new(back), scale })
    }
}

pub fn apply_toric(f: &LaurentPoly, t: &ToricChange) -> Result<LaurentPoly, MutationError> {
    t.apply(f)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Cluster(ClusterChange),
    Toric(ToricChange),
}

impl Step {
    pub fn apply(&self, f: &LaurentPoly) -> Result<LaurentPoly, MutationError> {
        match self {
            Step::Cluster(c) => apply_cluster(f, c),
            Step::Toric(t) => t.apply(f),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Step::Cluster(c) => json!({
                "type": "cluster",
                "pivot": c.pivot,
                "sign": c.sign,
                "factor": c.factor.to_string(),
            }),
            Step::Toric(t) => json!({
                "type": "toric",
                "A": t.matrix,
                "shift": t.shift.to_vec(),
                "scale": t.scale.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            }),
        }
    }

    /// Reads a step; factor expressions are parsed in `vars`.
    pub fn from_json(v: &Value, vars: &[String]) -> Result<Step, MutationError> {
        let bad = |msg: &str| MutationError::Trace(msg.to_string());
        match v.get("type").and_then(Value::as_str) {
            Some("cluster") => {
                let pivot = v.get("pivot").and_then(Value::as_u64).ok_or_else(|| bad("cluster step needs `pivot`"))?;
                let sign = v.get("sign").and_then(Value::as_i64).ok_or_else(|| bad("cluster step needs `sign`"))?;
                let text = v.get("factor").and_then(Value::as_str).ok_or_else(|| bad("cluster step needs `factor`"))?;
                let factor = parse(text, Some(vars)).map_err(|e| MutationError::Trace(e.to_string()))?;
                let sign = i8::try_from(sign).map_err(|_| bad("sign must be ±1"))?;
                Ok(Step::Cluster(ClusterChange::new(pivot as usize, sign, factor)?))
            }
            Some("toric") => {
                let matrix: IntMatrix = v
                    .get("A")
                    .cloned()
                    .and_then(|a| serde_json::from_value(a).ok())
                    .ok_or_else(|| bad("toric step needs integer matrix `A`"))?;
                let n = matrix.len();
                let shift: Vec<i64> = match v.get("shift") {
                    Some(s) => serde_json::from_value(s.clone()).map_err(|_| bad("bad `shift`"))?,
                    None => vec![0; n],
                };
                let scale = match v.get("scale") {
                    Some(Value::Array(items)) => items
                        .iter()
                        .map(|x| match x {
                            Value::String(s) => parse_rational(s),
                            Value::Number(k) => k.as_i64().map(|k| Rational::from_integer(k.into())),
                            _ => None,
                        })
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| bad("bad `scale`"))?,
                    None => vec![Rational::one(); n],
                    _ => return Err(bad("bad `scale`")),
                };
                Ok(Step::Toric(ToricChange::new(matrix, ExponentVector::new(shift), scale)?))
            }
            _ => Err(bad("step `type` must be \"cluster\" or \"toric\"")),
        }
    }
}

pub fn steps_to_json(steps: &[Step]) -> Value {
    Value::Array(steps.iter().map(Step::to_json).collect())
}

pub fn steps_from_json(v: &Value, vars: &[String]) -> Result<Vec<Step>, MutationError> {
    let items = v.as_array().ok_or_else(|| MutationError::Trace("trace must be a JSON list".into()))?;
    items
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Step::from_json(s, vars)
                .map_err(|e| MutationError::StepFailed { index: i, source: Box::new(e) })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationTrace {
    pub start: LaurentPoly,
    pub steps: Vec<Step>,
    pub end: LaurentPoly,
}

impl MutationTrace {
    /// Runs `steps` from `start` and records the end polynomial.
    pub fn record(start: LaurentPoly, steps: Vec<Step>) -> Result<Self, MutationError> {
        let inter = replay_steps(&start, &steps)?;
        let end = inter.last().cloned().unwrap_or_else(|| start.clone());
        Ok(MutationTrace { start, steps, end })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "start": self.start.to_string(),
            "steps": steps_to_json(&self.steps),
            "end": self.end.to_string(),
        })
    }
}

/// Every polynomial along the trace, starting with `start`.
pub fn replay_steps(start: &LaurentPoly, steps: &[Step]) -> Result<Vec<LaurentPoly>, MutationError> {
    let mut out = vec![start.clone()];
    for (index, s) in steps.iter().enumerate() {
        let next = s
            .apply(out.last().expect("nonempty"))
            .map_err(|e| MutationError::StepFailed { index, source: Box::new(e) })?;
        out.push(next);
    }
    Ok(out)
}

/// End polynomial of the trace's steps replayed from its start.
pub fn replay(trace: &MutationTrace) -> Result<LaurentPoly, MutationError> {
    Ok(replay_steps(&trace.start, &trace.steps)?.pop().expect("nonempty"))
}

/// Exact `d`-th roots of `x`, both signs when `d` is even.
fn rational_roots(x: &Rational, d: u32) -> Vec<Rational> {
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(d);
        (num_traits::pow(r.clone(), d as usize) == *n).then_some(r)
    };
    if x.is_zero() {
        return Vec::new();
    }
    if d.is_multiple_of(2) && x.is_negative() {
        return Vec::new();
    }
    let (num, den) = (x.numer().abs(), x.denom().clone());
    let (Some(a), Some(b)) = (root(&num), root(&den)) else {
        return Vec::new();
    };
    let r = Rational::new(a, b);
    if d.is_multiple_of(2) {
        vec![r.clone(), -r]
    } else if x.is_negative() {
        vec![-r]
    } else {
        vec![r]
    }
}

/// Scalings making `map` send `f` onto `g` term for term.
fn solve_scaling(f: &LaurentPoly, g: &LaurentPoly, map: &AffineMap) -> Option<ToricChange> {
    let n = f.nvars();
    if f.len() != g.len() {
        return None;
    }
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut ratios: Vec<Rational> = Vec::new();
    for (e, c) in f.terms() {
        let img = ExponentVector::new(map.apply(e));
        let d = g.coefficient_at(&img);
        if d.is_zero() {
            return None;
        }
        if rows.len() < n {
            rows.push(e.to_vec());
            if linalg::rank(&rows) == rows.len() {
                ratios.push(d / c);
            } else {
                rows.pop();
            }
        }
    }
    for i in 0..n {
        if rows.len() == n {
            break;
        }
        rows.push(ExponentVector::unit(n, i).into_vec());
        if linalg::rank(&rows) == rows.len() {
            ratios.push(Rational::one());
        } else {
            rows.pop();
        }
    }
    let det = linalg::det(&rows).to_i64()?;
    let inv = linalg::rational_inverse(&rows)?;
    // λ_j^det = ∏_i ratio_i^{adj_ji}
    let mut choices: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut target = Rational::one();
        for (i, r) in ratios.iter().enumerate() {
            let adj = &inv[j][i] * Rational::from_integer(det.into());
            let k = linalg::rational_to_i64(&adj)? as i32;
            target *= r.pow(k);
        }
        if det < 0 {
            target = target.recip();
        }
        let roots = rational_roots(&target, det.unsigned_abs() as u32);
        if roots.is_empty() {
            return None;
        }
        choices.push(roots);
    }
    let mut idx = vec![0usize; n];
    loop {
        let scale: Vec<Rational> = (0..n).map(|j| choices[j][idx[j]].clone()).collect();
        let t = ToricChange {
            matrix: map.matrix.clone(),
            shift: ExponentVector::new(map.shift.clone()),
            scale,
        };
        if t.apply(f).is_ok_and(|h| h.same_terms(g)) {
            return Some(t);
        }
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// A toric change sending `f` to `g` term for term, if one exists.
///
/// Candidates are the lattice equivalences between the Newton polytopes,
/// the identity first; scalings are restricted to rationals.
pub fn equivalent_up_to_toric(f: &LaurentPoly, g: &LaurentPoly) -> Option<ToricChange> {
    if f.nvars() != g.nvars() {
        return None;
    }
    if f.is_zero() || g.is_zero() {
        return (f.is_zero() && g.is_zero()).then(|| ToricChange::identity(f.nvars()));
    }
    let p = newton_polytope(f).ok()?;
    let q = newton_polytope(g).ok()?;
    lattice_equivalences(&p, &q).iter().find_map(|m| solve_scaling(f, g, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_with_vars;

    fn p(s: &str, vars: &[&str]) -> LaurentPoly {
        parse_with_vars(s, vars).unwrap()
    }

    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn quadric_example() {
        let f0 = p("(x+1)^2/(x*y*z)+y+z", &XYZ);
        let c = ClusterChange::new(1, -1, p("x+1", &XYZ)).unwrap();
        let f1 = apply_cluster(&f0, &c).unwrap();
        assert_eq!(f1, p("(x+1)/(x*y*z)+y*(x+1)+z", &XYZ));
        assert_eq!(apply_cluster(&f1, &c.inverse()).unwrap(), f0);
        let twice = apply_cluster(&f1, &c).unwrap();
        let w = equivalent_up_to_toric(&twice, &f0).unwrap();
        assert!(w.apply(&twice).unwrap().same_terms(&f0));
    }

    #[test]
    fn cubic_example() {
        let f0 = p("(x+y+1)^3/(x*y*z)+z", &XYZ);
        let names: Vec<String> = XYZ.iter().map(|s| s.to_string()).collect();
        let c = elementary_cluster(&names, 2, &[0, 1], -1).unwrap();
        assert_eq!(c.factor, p("x+y+1", &XYZ));
        let f1 = apply_cluster(&f0, &c).unwrap();
        assert_eq!(f1, p("(x+y+1)^2/(x*y*z)+z*(x+y+1)", &XYZ));
        let f2 = apply_cluster(&f1, &c).unwrap();
        assert!(equivalent_up_to_toric(&f2, &f1).is_some());
        let f3 = apply_cluster(&f2, &c).unwrap();
        assert!(equivalent_up_to_toric(&f3, &f0).is_some());
        assert!(equivalent_up_to_toric(&f1, &f0).is_none());
    }

    #[test]
    fn inexact_cluster_change_fails() {
        let f = p("y+x", &["x", "y"]);
        let c = ClusterChange::new(1, 1, p("x+1", &["x", "y"])).unwrap();
        assert!(matches!(apply_cluster(&f, &c), Err(MutationError::NotLaurent(_))));
    }

    #[test]
    fn change_validation() {
        let vars = ["x", "y"];
        assert!(ClusterChange::new(0, 1, p("x+1", &vars)).is_err());
        assert!(ClusterChange::new(0, 2, p("y+1", &vars)).is_err());
        assert!(ClusterChange::new(0, 1, p("0", &vars)).is_err());
        let names = vec!["x".to_string(), "y".to_string()];
        assert!(elementary_cluster(&names, 0, &[0], 1).is_err());
        let id = elementary_cluster(&names, 0, &[], 1).unwrap();
        let f = p("x+y+1/(x*y)", &vars);
        assert_eq!(apply_cluster(&f, &id).unwrap(), f);
        assert_eq!(
            ToricChange::new(vec![vec![2, 0], vec![0, 1]], ExponentVector::zero(2), vec![Rational::one(); 2]),
            Err(MutationError::NotUnimodular)
        );
    }

    #[test]
    fn toric_group_laws() {
        let vars = ["x", "y"];
        let f = p("2*x+y/3+1/(x*y)", &vars);
        let half = Rational::new(1.into(), 2.into());
        let t = ToricChange::new(vec![vec![1, 1], vec![0, 1]], ExponentVector::zero(2), vec![half.clone(), -Rational::one()])
            .unwrap();
        let u = ToricChange::new(vec![vec![0, -1], vec![1, 0]], ExponentVector::new(vec![1, 0]), vec![Rational::one(); 2])
            .unwrap();
        let g = t.apply(&f).unwrap();
        assert_eq!(t.inverse().unwrap().apply(&g).unwrap(), f);
        assert_eq!(g.constant_term(), f.constant_term());
        let both = t.then(&u).unwrap();
        assert_eq!(both.apply(&f).unwrap(), u.apply(&g).unwrap());
        let w = equivalent_up_to_toric(&f, &g).unwrap();
        assert!(w.apply(&f).unwrap().same_terms(&g));
        assert!(u.then(&t).is_err());
    }

    #[test]
    fn trace_json_roundtrip() {
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let text = r#"[{"type":"cluster","pivot":1,"sign":-1,"factor":"x + 1"},
                       {"type":"toric","A":[[1,0,0],[0,0,1],[0,1,0]],"shift":[0,0,0],"scale":["1","1","-1/2"]}]"#;
        let v: Value = serde_json::from_str(text).unwrap();
        let steps = steps_from_json(&v, &vars).unwrap();
        assert_eq!(steps.len(), 2);
        let again = steps_from_json(&steps_to_json(&steps), &vars).unwrap();
        assert_eq!(again, steps);
        let f0 = p("(x+1)^2/(x*y*z)+y+z", &XYZ);
        let trace = MutationTrace::record(f0.clone(), steps).unwrap();
        assert_eq!(replay(&trace).unwrap(), trace.end);
        let empty = MutationTrace::record(f0.clone(), Vec::new()).unwrap();
        assert_eq!(empty.end, f0);
    }

    #[test]
    fn replay_reports_failing_step() {
        let vars = ["x", "y"];
        let f = p("x+y+1/(x*y)", &vars);
        let ok = Step::Toric(ToricChange::identity(2));
        let bad = Step::Cluster(ClusterChange::new(1, -1, p("x+1", &vars)).unwrap());
        let err = replay_steps(&f, &[ok, bad]).unwrap_err();
        assert!(matches!(err, MutationError::StepFailed { index: 1, .. }));
    }
}
