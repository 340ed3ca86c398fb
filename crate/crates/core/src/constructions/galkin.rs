use num_traits::ToPrimitive;
use serde_json::json;

use super::{ConstructionError, MarkovTriple};
use crate::laurent::{parse_with_vars, LaurentPoly};
use crate::linalg;
use crate::mutation::{apply_cluster, ClusterChange, MutationError, ToricChange};
use crate::polytope::{convex_hull, lattice_equivalences, newton_polytope, LatticePolytope};

fn det2(u: &[i64], v: &[i64]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Whether `p` is a triangle with primitive vertices whose positive linear
/// relation has weights `{a², b², c²}`.
pub fn weighted_triangle_check(p: &LatticePolytope, t: &MarkovTriple) -> bool {
    let v = p.vertices();
    if p.dim_ambient() != 2 || p.dim() != 2 || v.len() != 3 || !p.is_primitive() {
        return false;
    }
    let w = [det2(&v[1], &v[2]), det2(&v[2], &v[0]), det2(&v[0], &v[1])];
    let sign = w[0].signum();
    if sign == 0 || w.iter().any(|x| x.signum() != sign) {
        return false;
    }
    let g = linalg::gcd_slice(&w);
    let mut w: Vec<u128> = w.iter().map(|x| (x / g).unsigned_abs() as u128).collect();
    w.sort();
    let Some(e) = t.to_u64() else { return false };
    let mut sq: Vec<u128> = e.iter().map(|&x| (x as u128) * (x as u128)).collect();
    sq.sort();
    w == sq
}

/// Smallest `d ≥ c` with `3ad ≡ b (mod c)` and the vertices
/// `(d, c)`, `(d − c, c)`, `(−(d(3ab − c) − b²)/c, −(3ab − c))`.
pub fn galkin_template(a: i64, b: i64, c: i64) -> Option<(i64, [Vec<i64>; 3])> {
    let d = (c..c + c.max(1)).find(|d| (3 * a * d - b).rem_euclid(c) == 0)?;
    let m = 3 * a * b - c;
    let num = d * m - b * b;
    if num % c != 0 {
        return None;
    }
    Some((d, [vec![d, c], vec![d - c, c], vec![-num / c, -m]]))
}

/// One elementary mutation of a P²-type model, replacing entry `slot` of
/// the triple.
///
/// The polynomial is first moved by a linear toric change so that its
/// Newton polygon is the template for the triple; then `y ↦ y·(x + 1)` is
/// applied.
pub fn galkin_mutate(
    f: &LaurentPoly,
    triple: &MarkovTriple,
    slot: usize,
) -> Result<(LaurentPoly, MarkovTriple), ConstructionError> {
    let not_triangle = || ConstructionError::NotWeightedTriangle(triple.to_string());
    if f.nvars() != 2 || slot > 2 {
        return Err(not_triangle());
    }
    let p = newton_polytope(f).map_err(|_| not_triangle())?;
    if !weighted_triangle_check(&p, triple) {
        return Err(not_triangle());
    }
    let e = triple.to_u64().ok_or(ConstructionError::Overflow)?;
    let to_i = |x: u64| i64::try_from(x).map_err(|_| ConstructionError::Overflow);
    let c = to_i(e[slot])?;
    let rest: Vec<i64> =
        (0..3).filter(|&i| i != slot).map(|i| to_i(e[i])).collect::<Result<_, _>>()?;
    let mut orders = vec![(rest[0], rest[1])];
    if rest[0] != rest[1] {
        orders.push((rest[1], rest[0]));
    }
    let names = f.var_names().to_vec();
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let factor = parse_with_vars(&format!("{} + 1", vars[0]), &vars).expect("linear factor");
    let cluster = ClusterChange::new(1, 1, factor)?;
    let new_triple = triple.mutate(slot);
    for (a, b) in orders {
        let Some((_, verts)) = galkin_template(a, b, c) else { continue };
        let template = convex_hull(&verts).map_err(|_| not_triangle())?;
        let mut maps: Vec<_> = lattice_equivalences(&p, &template)
            .into_iter()
            .filter(|m| m.shift.iter().all(|&x| x == 0))
            .collect();
        maps.sort_by(|x, y| x.matrix.cmp(&y.matrix));
        for m in maps {
            let g = ToricChange::from_affine(&m).apply(f)?;
            match apply_cluster(&g, &cluster) {
                Ok(h) => return Ok((h, new_triple)),
                Err(MutationError::NotLaurent(_)) => continue,
                Err(other) => return Err(other.into()),
            }
        }
    }
    Err(ConstructionError::CoordinateSearchFailed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub triple: MarkovTriple,
    /// Slot mutated to reach this step; `None` for the start.
    pub slot: Option<usize>,
    pub poly: LaurentPoly,
}

impl ChainStep {
    pub fn to_json(&self) -> serde_json::Value {
        let polygon = newton_polytope(&self.poly).map(|p| p.to_json()).unwrap_or_default();
        let weights: Vec<u64> = self
            .triple
            .entries()
            .iter()
            .map(|x| x.to_u64().map_or(0, |v| v * v))
            .collect();
        json!({
            "triple": self.triple.to_json(),
            "weights": weights,
            "slot": self.slot,
            "poly": self.poly.to_string(),
            "newton": polygon,
        })
    }
}

/// Mutation chain from `x + y + 1/(xy)` and `(1,1,1)`, mutating the middle
/// entry of the sorted triple at every step.
pub fn p2_chain(depth: usize) -> Result<Vec<ChainStep>, ConstructionError> {
    let f = parse_with_vars("x + y + 1/(x*y)", &["x", "y"]).expect("P² model");
    let mut out = vec![ChainStep { triple: MarkovTriple::basic(), slot: None, poly: f }];
    for _ in 0..depth {
        let last = out.last().expect("nonempty");
        let (g, t) = galkin_mutate(&last.poly, &last.triple, 1)?;
        out.push(ChainStep { triple: t, slot: Some(1), poly: g });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::period::periods_equal;

    fn t(a: u64, b: u64, c: u64) -> MarkovTriple {
        MarkovTriple::from_u64(a, b, c).unwrap()
    }

    #[test]
    fn templates_have_markov_weights() {
        for (a, b, c) in [(1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 5, 2), (2, 5, 1), (5, 13, 1)] {
            let (d, v) = galkin_template(a, b, c).unwrap();
            assert!(d >= c);
            let p = convex_hull(&v).unwrap();
            let mut e = [a as u64, b as u64, c as u64];
            e.sort();
            assert!(weighted_triangle_check(&p, &t(e[0], e[1], e[2])), "{a} {b} {c}");
        }
    }

    #[test]
    fn first_step_gives_p114() {
        let f = parse_with_vars("x+y+1/(x*y)", &["x", "y"]).unwrap();
        let (g, nt) = galkin_mutate(&f, &MarkovTriple::basic(), 2).unwrap();
        assert_eq!(nt, t(1, 1, 2));
        assert!(weighted_triangle_check(&newton_polytope(&g).unwrap(), &nt));
        assert!(periods_equal(&f, &g, 9));
    }

    #[test]
    fn chain_to_depth_three() {
        let chain = p2_chain(3).unwrap();
        let triples: Vec<_> = chain.iter().map(|s| s.triple.clone()).collect();
        assert_eq!(triples, vec![t(1, 1, 1), t(1, 1, 2), t(1, 2, 5), t(1, 5, 13)]);
        for s in &chain {
            assert!(weighted_triangle_check(&newton_polytope(&s.poly).unwrap(), &s.triple));
            assert!(periods_equal(&chain[0].poly, &s.poly, 9));
        }
    }

    #[test]
    fn side_branch() {
        let chain = p2_chain(2).unwrap();
        let (g, nt) = galkin_mutate(&chain[2].poly, &chain[2].triple, 0).unwrap();
        assert_eq!(nt, t(2, 5, 29));
        assert!(weighted_triangle_check(&newton_polytope(&g).unwrap(), &nt));
        assert!(periods_equal(&chain[0].poly, &g, 6));
    }

    #[test]
    fn rejects_wrong_triangle() {
        let f = parse_with_vars("x+y+1/(x*y)", &["x", "y"]).unwrap();
        assert!(matches!(
            galkin_mutate(&f, &t(1, 1, 2), 1),
            Err(ConstructionError::NotWeightedTriangle(_))
        ));
    }
}
