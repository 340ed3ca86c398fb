use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{p2_chain, weighted_triangle_check};
use crate::degeneration::{factor_mutation, mutate_polytope, Cosection, SliceDecomposition};
use crate::degeneration::{cone_over, slice};
use crate::exec::{self, Execution};
use crate::laurent::{parse_with_vars, LaurentPoly, Rational};
use crate::mutation::{apply_cluster, equivalent_up_to_toric, ClusterChange};
use crate::period::{period_sequence, periods_equal};
use crate::polytope::{convex_hull, lattice_equivalent, newton_polytope, LatticePolytope, RationalPolytope};

/// Period length used for the invariance checks.
pub const PERIOD_N: usize = 8;

const XY: &[&str] = &["x", "y"];
const XYZ: &[&str] = &["x", "y", "z"];
const XYZT: &[&str] = &["x", "y", "z", "t"];

const SOURCES: &[(&str, &str, &[&str])] = &[
    ("quadric3.f0", "(x+1)^2/(x*y*z) + y + z", XYZ),
    ("quadric3.f1", "(x+1)/(x*y*z) + y*(x+1) + z", XYZ),
    ("cubic3.f0", "(x+y+1)^3/(x*y*z) + z", XYZ),
    ("cubic3.f1", "(x+y+1)^2/(x*y*z) + z*(x+y+1)", XYZ),
    ("cubic4.f00", "(x+y+1)^3/(x*y*z*t) + z + t", XYZT),
    ("cubic4.f10", "(x+y+1)^2/(x*y*z*t) + z*(x+y+1) + t", XYZT),
    ("cubic4.f11", "(x+y+1)/(x*y*z*t) + z*(x+y+1) + t*(x+y+1)", XYZT),
    ("p3.f1", "x + y + z + 1/(x*y*z)", XYZ),
    ("p3.f2", "x + y/x + z/x + 1/(x*y) + 1/(x*z)", XYZ),
    ("p3.f3", "(x+1)^2/(x*y*z) + y/z + z", XYZ),
    ("p3.f1p", "z*(x+1) + y + 1/(x*y*z^2)", XYZ),
    ("p3.f1pp", "z*(x+1) + y/z + 1/(x*y*z)", XYZ),
    ("p112.f", "(x+1)^2*y/x + 1/y", XY),
    ("p112.fp", "(x+1)*y/x + (x+1)/y", XY),
    ("p114.f", "(x+1)^2*y^2/x + 1/y", XY),
    ("p2", "x + y + 1/(x*y)", XY),
];

/// Worked examples keyed by name, e.g. `cubic4.f11`.
pub fn catalog() -> BTreeMap<&'static str, LaurentPoly> {
    SOURCES
        .iter()
        .map(|(name, text, vars)| (*name, parse_with_vars(text, vars).expect("catalog entry parses")))
        .collect()
}

pub fn catalog_poly(name: &str) -> Option<LaurentPoly> {
    SOURCES
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, text, vars)| parse_with_vars(text, vars).expect("catalog entry parses"))
}

/// Polytope data for a slice-and-reassemble example.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IltenData {
    pub delta: LatticePolytope,
    pub cosection: Cosection,
    pub decomposition: SliceDecomposition,
    pub expected: LatticePolytope,
}

fn rq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn rpoly(pts: &[&[(i64, i64)]]) -> RationalPolytope {
    let v: Vec<Vec<Rational>> = pts.iter().map(|p| p.iter().map(|&(n, d)| rq(n, d)).collect()).collect();
    RationalPolytope::new(&v).expect("example polytope")
}

fn hull(pts: &[&[i64]]) -> LatticePolytope {
    convex_hull(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).expect("example polytope")
}

fn standard_cosection() -> Cosection {
    Cosection::new(vec![0, 1, 0], vec![vec![1, 0, 0], vec![0, 1, 1]]).expect("valid cosection")
}

/// The P(1,1,4) triangle degenerating to the P² fan polytope.
pub fn p114_data() -> IltenData {
    IltenData {
        delta: hull(&[&[-1, 2], &[1, 2], &[0, -1]]),
        cosection: standard_cosection(),
        decomposition: SliceDecomposition::new(
            rpoly(&[&[(-1, 1), (1, 1)], &[(0, 1), (1, 1)]]),
            rpoly(&[&[(1, 2), (1, 2)]]),
        ),
        expected: hull(&[&[-1, 1], &[0, 1], &[1, -2]]),
    }
}

/// The quadratic cone and the smooth quadric.
pub fn p112_data() -> IltenData {
    IltenData {
        delta: hull(&[&[-1, 1], &[1, 1], &[0, -1]]),
        cosection: standard_cosection(),
        decomposition: SliceDecomposition::new(
            rpoly(&[&[(-1, 1), (1, 1)], &[(0, 1), (1, 1)]]),
            rpoly(&[&[(0, 1), (1, 1)], &[(1, 1), (1, 1)]]),
        ),
        expected: hull(&[&[-1, 1], &[0, 1], &[1, -1], &[0, -1]]),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub name: String,
    pub checks: Vec<CheckResult>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub const EXAMPLES: &[&str] = &["quadric3", "cubic3", "cubic4", "p3", "p112", "p114", "p2"];

struct Checks {
    out: Vec<CheckResult>,
}

impl Checks {
    fn push(&mut self, label: &str, passed: bool, detail: impl Into<String>) {
        self.out.push(CheckResult { label: label.to_string(), passed, detail: detail.into() });
    }

    fn equal(&mut self, label: &str, got: &LaurentPoly, want: &LaurentPoly) {
        let ok = got.same_terms(want);
        self.push(label, ok, if ok { got.to_string() } else { format!("got {got}, expected {want}") });
    }

    fn equivalent(&mut self, label: &str, got: &LaurentPoly, want: &LaurentPoly) {
        match equivalent_up_to_toric(got, want) {
            Some(t) => {
                let ok = t.apply(got).map(|h| h.same_terms(want)).unwrap_or(false);
                self.push(label, ok, format!("{got} ≡ {want} via A = {:?}", t.matrix));
            }
            None => self.push(label, false, format!("no toric change takes {got} to {want}")),
        }
    }

    fn periods(&mut self, label: &str, polys: &[&LaurentPoly]) {
        let seqs: Vec<_> = polys.iter().map(|f| period_sequence(f, PERIOD_N)).collect();
        let ok = seqs.iter().all(|s| s.is_ok() && s == &seqs[0]);
        let detail = match &seqs[0] {
            Ok(s) => format!(
                "N = {PERIOD_N}: [{}]",
                s.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
            ),
            Err(e) => e.to_string(),
        };
        self.push(label, ok, detail);
    }

    fn step(&mut self, label: &str, f: &LaurentPoly, c: &ClusterChange) -> Option<LaurentPoly> {
        match apply_cluster(f, c) {
            Ok(g) => Some(g),
            Err(e) => {
                self.push(label, false, e.to_string());
                None
            }
        }
    }
}

fn poly(name: &str) -> LaurentPoly {
    catalog_poly(name).expect("known entry")
}

fn change(pivot: usize, sign: i8, factor: &str, vars: &[&str]) -> ClusterChange {
    ClusterChange::new(pivot, sign, parse_with_vars(factor, vars).expect("factor")).expect("valid change")
}

fn quadric3(c: &mut Checks) {
    let (f0, f1) = (poly("quadric3.f0"), poly("quadric3.f1"));
    let y = change(1, -1, "x+1", XYZ);
    if let Some(g) = c.step("f0 -> f1", &f0, &y) {
        c.equal("f0 -> f1", &g, &f1);
    }
    if let Some(g) = c.step("f1 -> f0", &f1, &y) {
        c.equivalent("second application is f0", &g, &f0);
    }
    c.periods("periods f0, f1", &[&f0, &f1]);
}

fn cubic3(c: &mut Checks) {
    let (f0, f1) = (poly("cubic3.f0"), poly("cubic3.f1"));
    let z = change(2, -1, "x+y+1", XYZ);
    let Some(g1) = c.step("f0 -> f1", &f0, &z) else { return };
    c.equal("f0 -> f1", &g1, &f1);
    let Some(g2) = c.step("second application", &g1, &z) else { return };
    c.equivalent("second application is f1", &g2, &f1);
    let Some(g3) = c.step("third application", &g2, &z) else { return };
    c.equivalent("third application is f0", &g3, &f0);
    c.periods("periods f0, f1", &[&f0, &f1]);
}

fn cubic4(c: &mut Checks) {
    let (f00, f10, f11) = (poly("cubic4.f00"), poly("cubic4.f10"), poly("cubic4.f11"));
    let z = change(2, -1, "x+y+1", XYZT);
    let t = change(3, -1, "x+y+1", XYZT);
    if let Some(g) = c.step("f00 -> f10", &f00, &z) {
        c.equal("f00 -> f10", &g, &f10);
    }
    if let Some(g) = c.step("f10 -> f11", &f10, &t) {
        c.equal("f10 -> f11", &g, &f11);
    }
    if let Some(g2) = c.step("first change on f10", &f10, &z) {
        c.equivalent("first change on f10 is f10", &g2, &f10);
        if let Some(g3) = c.step("first change once more", &g2, &z) {
            c.equivalent("first change once more is f00", &g3, &f00);
        }
    }
    if let Some(g) = c.step("first change on f11", &f11, &z) {
        c.equivalent("first change on f11 is f10", &g, &f10);
    }
    if let Some(g) = c.step("second change on f11", &f11, &t) {
        c.equivalent("second change on f11 is f10", &g, &f10);
    }
    c.periods("periods f00, f10, f11", &[&f00, &f10, &f11]);
}

fn p3(c: &mut Checks) {
    let (f1, f2, f3) = (poly("p3.f1"), poly("p3.f2"), poly("p3.f3"));
    let (f1p, f1pp) = (poly("p3.f1p"), poly("p3.f1pp"));
    c.equivalent("f1' is f1", &f1p, &f1);
    c.equivalent("f1'' is f1", &f1pp, &f1);
    let z = change(2, 1, "x+1", XYZ);
    let y = change(1, 1, "x+1", XYZ);
    if let Some(g) = c.step("f1' -> f3", &f1p, &z) {
        c.equivalent("f1' mutates to f3", &g, &f3);
    }
    if let Some(g) = c.step("f1'' -> f2", &f1pp, &z) {
        let printed = parse_with_vars("z + (x+1)*y/z + (x+1)/(x*y*z)", XYZ).expect("intermediate");
        c.equal("f1'' mutates to the printed intermediate", &g, &printed);
        c.equivalent("intermediate is f2", &g, &f2);
        if let Some(h) = c.step("intermediate -> f3", &g, &y) {
            c.equal("intermediate mutates to f3", &h, &f3);
        }
    }
    c.periods("periods f1, f2, f3", &[&f1, &f2, &f3, &f1p, &f1pp]);
}

fn polytope_check(c: &mut Checks, label: &str, data: &IltenData) {
    match mutate_polytope(&data.delta, &data.cosection, &data.decomposition) {
        Ok(p) => {
            let ok = p == data.expected;
            c.push(label, ok, format!("{:?}", p.vertices()));
        }
        Err(e) => c.push(label, false, e.to_string()),
    }
}

fn p112(c: &mut Checks) {
    let (f, fp) = (poly("p112.f"), poly("p112.fp"));
    let data = p112_data();
    let f1 = parse_with_vars("(x+1)/x", XY).expect("factor");
    let f2 = parse_with_vars("x+1", XY).expect("factor");
    match factor_mutation(&f, 1, &f1, &f2) {
        Ok(g) => c.equal("factor mutation", &g, &fp),
        Err(e) => c.push("factor mutation", false, e.to_string()),
    }
    if let Some(g) = c.step("y -> y/(x+1)", &f, &change(1, 1, "x+1", XY)) {
        c.equal("y -> y/(x+1)", &g, &fp);
    }
    let ok = newton_polytope(&f).ok() == Some(data.delta.clone());
    c.push("Newton polytope of f", ok, format!("{:?}", data.delta.vertices()));
    let ok = newton_polytope(&fp).ok() == Some(data.expected.clone());
    c.push("Newton polytope of f'", ok, format!("{:?}", data.expected.vertices()));
    polytope_check(c, "polytope mutation", &data);
    c.periods("periods f, f'", &[&f, &fp]);
}

fn p114(c: &mut Checks) {
    let data = p114_data();
    polytope_check(c, "polytope mutation", &data);
    let p2 = hull(&[&[1, 0], &[0, 1], &[-1, -1]]);
    let ok = lattice_equivalent(&data.expected, &p2).is_some();
    c.push("result is the P² fan polytope", ok, "");
    let trivial = cone_over(&data.delta)
        .and_then(|cone| slice(&cone, &data.cosection, 1))
        .and_then(|plus| SliceDecomposition::trivial(&plus, &data.cosection))
        .and_then(|dec| mutate_polytope(&data.delta, &data.cosection, &dec));
    match trivial {
        Ok(p) => c.push("trivial decomposition gives back the triangle", p == data.delta, format!("{:?}", p.vertices())),
        Err(e) => c.push("trivial decomposition gives back the triangle", false, e.to_string()),
    }
    let f = poly("p114.f");
    let ok = newton_polytope(&f).ok() == Some(data.delta.clone());
    c.push("Newton polytope of f", ok, f.to_string());
    if let Some(g) = c.step("y -> y/(x+1)", &f, &change(1, 1, "x+1", XY)) {
        let same_shape = newton_polytope(&g).map(|q| lattice_equivalent(&q, &data.expected).is_some()).unwrap_or(false);
        c.push("mutated polynomial has the new polytope", same_shape, g.to_string());
        c.periods("periods f, f'", &[&f, &g]);
    }
}

fn p2(c: &mut Checks) {
    let f = poly("p2");
    match period_sequence(&f, 6) {
        Ok(s) => {
            let want: Vec<Rational> = [1, 0, 0, 6, 0, 0, 90].iter().map(|&k| rq(k, 1)).collect();
            c.push("periods to 6", s.values == want, format!("{:?}", s.values.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
        }
        Err(e) => c.push("periods to 6", false, e.to_string()),
    }
    match p2_chain(3) {
        Ok(chain) => {
            let triples: Vec<String> = chain.iter().map(|s| s.triple.to_string()).collect();
            let tri = chain
                .iter()
                .all(|s| newton_polytope(&s.poly).map(|p| weighted_triangle_check(&p, &s.triple)).unwrap_or(false));
            c.push("chain polytopes are weighted triangles", tri, triples.join(" -> "));
            let per = chain.iter().all(|s| periods_equal(&f, &s.poly, 9));
            c.push("chain preserves periods to 9", per, "");
        }
        Err(e) => c.push("chain to depth 3", false, e.to_string()),
    }
}

/// Runs the checks of one example; `None` for an unknown name.
pub fn run_example(name: &str) -> Option<ExampleReport> {
    let mut c = Checks { out: Vec::new() };
    match name {
        "quadric3" => quadric3(&mut c),
        "cubic3" => cubic3(&mut c),
        "cubic4" => cubic4(&mut c),
        "p3" => p3(&mut c),
        "p112" => p112(&mut c),
        "p114" => p114(&mut c),
        "p2" => p2(&mut c),
        _ => return None,
    }
    Some(ExampleReport { name: name.to_string(), checks: c.out })
}

pub fn run_all(exec: Execution) -> Vec<ExampleReport> {
    exec::map_collect(exec, EXAMPLES, |name| run_example(name).expect("listed example"))
}
