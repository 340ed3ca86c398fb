use std::io::Read;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use toric_lg::constructions::{
    self, catalog_poly, hori_vafa as build_hori_vafa, markov_tree, p112_data, p114_data, run_all, run_example,
    CompleteIntersectionSpec, ConstructionError, IltenData, EXAMPLES,
};
use toric_lg::degeneration::{self, mutate_polytope, Cosection, DegenerationError, SliceDecomposition};
use toric_lg::laurent::parse;
use toric_lg::minkowski::{edge_binomials_ok, find_presentation, verify_presentation, MinkowskiError, MinkowskiPresentation};
use toric_lg::mutation::{equivalent_up_to_toric, replay_steps, steps_from_json, steps_to_json, MutationError, Step};
use toric_lg::period::{period_oracle, period_sequence, PeriodError};
use toric_lg::polytope::{edge_lattice_length, lattice_equivalent, newton_polytope};
use toric_lg::{Execution, LaurentError, LaurentPoly, LatticePolytope, PolytopeError, Rational, RationalPolytope};

use crate::output::{exit, CommandResult, Status};
use crate::Global;

type Outcome<T> = Result<T, CommandResult>;

fn laurent_err(e: LaurentError) -> CommandResult {
    CommandResult::error(exit::DOMAIN, e.to_string())
}

fn polytope_err(e: PolytopeError) -> CommandResult {
    let code = match e {
        PolytopeError::ComplexityLimit { .. } => exit::COMPLEXITY,
        _ => exit::DOMAIN,
    };
    CommandResult::error(code, e.to_string())
}

fn mutation_err(e: MutationError) -> CommandResult {
    CommandResult::error(exit::MUTATION, e.to_string())
}

fn period_err(e: PeriodError) -> CommandResult {
    CommandResult::error(exit::DOMAIN, e.to_string())
}

fn construction_err(e: ConstructionError) -> CommandResult {
    let code = match e {
        ConstructionError::CoordinateSearchFailed | ConstructionError::Mutation(_) => exit::MUTATION,
        ConstructionError::Overflow => exit::COMPLEXITY,
        _ => exit::DOMAIN,
    };
    CommandResult::error(code, e.to_string())
}

fn degeneration_err(e: DegenerationError) -> CommandResult {
    let code = match e {
        DegenerationError::Mutation(_) => exit::MUTATION,
        DegenerationError::Polytope(PolytopeError::ComplexityLimit { .. }) => exit::COMPLEXITY,
        _ => exit::DOMAIN,
    };
    CommandResult::error(code, e.to_string())
}

fn minkowski_err(e: MinkowskiError) -> CommandResult {
    let code = match e {
        MinkowskiError::ComplexityLimit(_) => exit::COMPLEXITY,
        _ => exit::DOMAIN,
    };
    CommandResult::error(code, e.to_string())
}

fn usage(msg: impl Into<String>) -> CommandResult {
    CommandResult::error(exit::USAGE, msg)
}

const SHORT: [&str; 7] = ["x", "y", "z", "t", "u", "v", "w"];

/// Standard names go in their usual order; anything else keeps the order
/// of first appearance.
fn order_vars(mut names: Vec<String>) -> Vec<String> {
    if names.iter().all(|n| SHORT.contains(&n.as_str())) {
        names.sort_by_key(|n| SHORT.iter().position(|s| s == n));
    } else if let Some(idx) = names
        .iter()
        .map(|n| n.strip_prefix('x').and_then(|k| k.parse::<u32>().ok()))
        .collect::<Option<Vec<_>>>()
    {
        let mut pairs: Vec<(u32, String)> = idx.into_iter().zip(names).collect();
        pairs.sort();
        names = pairs.into_iter().map(|(_, n)| n).collect();
    }
    names
}

fn read_text(arg: Option<String>) -> Outcome<String> {
    match arg.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("cannot read stdin: {e}")))?;
            Ok(s.trim().to_string())
        }
        Some(s) => Ok(s.to_string()),
    }
}

pub fn parse_poly(g: &Global, text: &str) -> Outcome<LaurentPoly> {
    let vars = match &g.vars {
        Some(v) => v.clone(),
        None => {
            let guessed = parse(text, None).map_err(laurent_err)?;
            order_vars(guessed.var_names().to_vec())
        }
    };
    parse(text, Some(&vars)).map_err(laurent_err)
}

fn read_poly(g: &Global, arg: Option<String>) -> Outcome<LaurentPoly> {
    parse_poly(g, &read_text(arg)?)
}

fn read_json(path: &str) -> Outcome<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{path} is not valid JSON: {e}")))
}

fn rational_strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn floats(values: &[Rational]) -> Vec<f64> {
    values.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
}

pub fn period(g: &Global, poly: Option<String>, n: usize, oracle: bool) -> CommandResult {
    let go = || -> Outcome<CommandResult> {
        let f = read_poly(g, poly)?;
        let seq = if oracle { period_oracle(&f, n) } else { period_sequence(&f, n) }.map_err(period_err)?;
        let values = rational_strings(&seq.values);
        let mut payload = json!({ "poly": f.to_string(), "vars": f.var_names(), "n": n, "sequence": values });
        if g.float {
            payload["float"] = json!(floats(&seq.values));
        }
        Ok(CommandResult::ok(payload, format!("[{}]", values.join(", "))))
    };
    go().unwrap_or_else(|e| e)
}

fn load_steps(path: &str, vars: &[String]) -> Outcome<Vec<Step>> {
    let v = read_json(path)?;
    let list = match v.get("steps") {
        Some(s) => s.clone(),
        None => v,
    };
    steps_from_json(&list, vars).map_err(mutation_err)
}

pub fn mutate(g: &Global, poly: Option<String>, trace: &str, n: usize) -> CommandResult {
    let go = || -> Outcome<CommandResult> {
        let f = read_poly(g, poly)?;
        let steps = load_steps(trace, f.var_names())?;
        let chain = replay_steps(&f, &steps).map_err(mutation_err)?;
        let end = chain.last().expect("nonempty").clone();
        let start_seq = period_sequence(&f, n).map_err(period_err)?;
        let end_seq = period_sequence(&end, n).map_err(period_err)?;
        let invariant = start_seq.values == end_seq.values;
        let payload = json!({
            "start": f.to_string(),
            "steps": steps_to_json(&steps),
            "intermediates": chain.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "result": end.to_string(),
            "periods_equal": invariant,
            "n": n,
        });
        let mut text: Vec<String> = chain.iter().enumerate().map(|(i, p)| format!("{i}: {p}")).collect();
        text.push(format!("periods agree to N={n}: {invariant}"));
        let mut out = CommandResult::ok(payload, text.join("\n"));
        if !invariant {
            out = out.note("period sequences differ; the trace contains a change that is not period preserving");
        }
        Ok(out)
    };
    go().unwrap_or_else(|e| e)
}

pub fn catalog(name: Option<String>, all: bool, list: bool) -> CommandResult {
    if list {
        let cat = constructions::catalog();
        let payload: serde_json::Map<String, Value> =
            cat.iter().map(|(k, p)| (k.to_string(), Value::String(p.to_string()))).collect();
        let text = cat.iter().map(|(k, p)| format!("{k}: {p}")).collect::<Vec<_>>().join("\n");
        return CommandResult::ok(Value::Object(payload), text);
    }
    let reports = match (name, all) {
        (Some(_), true) => return usage("give an example name or --all, not both"),
        (None, false) => return usage(format!("give an example name ({}) or --all", EXAMPLES.join(", "))),
        (None, true) => run_all(Execution::Parallel),
        (Some(n), false) => match run_example(&n) {
            Some(r) => vec![r],
            None => {
                if let Some(p) = catalog_poly(&n) {
                    return CommandResult::ok(json!({ "name": n, "poly": p.to_string() }), p.to_string());
                }
                return usage(format!("unknown example `{n}`; known: {}", EXAMPLES.join(", ")));
            }
        },
    };
    let passed = reports.iter().all(|r| r.passed());
    let mut lines = Vec::new();
    for r in &reports {
        lines.push(format!("{}: {}", r.name, if r.passed() { "pass" } else { "FAIL" }));
        for c in &r.checks {
            let mark = if c.passed { "ok" } else { "FAIL" };
            if c.detail.is_empty() {
                lines.push(format!("  [{mark}] {}", c.label));
            } else {
                lines.push(format!("  [{mark}] {}: {}", c.label, c.detail));
            }
        }
    }
    let payload = serde_json::to_value(&reports).expect("reports");
    if passed {
        CommandResult::ok(payload, lines.join("\n"))
    } else {
        CommandResult::fail(exit::DOMAIN, payload, lines.join("\n")).note("some catalog checks failed")
    }
}

fn vertex_text(p: &LatticePolytope) -> String {
    p.vertices()
        .iter()
        .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn newton(g: &Global, poly: Option<String>, faces: bool) -> CommandResult {
    let go = || -> Outcome<CommandResult> {
        let f = read_poly(g, poly)?;
        let p = newton_polytope(&f).map_err(polytope_err)?;
        let facets: Vec<Value> =
            p.facets().iter().map(|h| json!({ "normal": h.normal, "offset": h.offset })).collect();
        let edges: Vec<Value> = p
            .edges()
            .iter()
            .map(|e| json!({ "vertices": e.vertices, "length": edge_lattice_length(e).unwrap_or(0) }))
            .collect();
        let mut payload = json!({
            "polytope": p.to_json(),
            "dim": p.dim(),
            "facets": facets,
            "edges": edges,
            "lattice_points": p.lattice_points().len(),
            "origin_interior": p.contains_origin_strictly(),
            "primitive": p.is_primitive(),
        });
        if faces {
            payload["faces"] = json!(p
                .all_faces()
                .iter()
                .map(|f| json!({ "dim": f.dim, "vertices": f.vertices }))
                .collect::<Vec<_>>());
        }
        Ok(CommandResult::ok(payload, vertex_text(&p)))
    };
    go().unwrap_or_else(|e| e)
}

fn read_polytope(path: &str) -> Outcome<LatticePolytope> {
    serde_json::from_value(read_json(path)?).map_err(|e| CommandResult::error(exit::DOMAIN, format!("{path}: {e}")))
}

pub fn equiv(g: &Global, left: &str, right: &str, polytope: bool) -> CommandResult {
    let go = || -> Outcome<CommandResult> {
        if polytope {
            let (p, q) = (read_polytope(left)?, read_polytope(right)?);
            return Ok(match lattice_equivalent(&p, &q) {
                Some(m) => CommandResult::ok(
                    json!({ "equivalent": true, "witness": m }),
                    format!("equivalent: A = {:?}, shift = {:?}", m.matrix, m.shift),
                ),
                None => CommandResult::fail(exit::MUTATION, json!({ "equivalent": false }), "not equivalent"),
            });
        }
        let f = parse_poly(g, left)?;
        let h = match &g.vars {
            Some(_) => parse_poly(g, right)?,
            None => parse(right, Some(f.var_names())).map_err(laurent_err)?,
        };
        if f.nvars() != h.nvars() {
            return Err(CommandResult::error(exit::DOMAIN, "the polynomials have different numbers of variables"));
        }
        Ok(match equivalent_up_to_toric(&f, &h) {
            Some(t) => {
                let w = Step::Toric(t.clone()).to_json();
                let text = if t.is_identity() { "equivalent: identity".to_string() } else { format!("equivalent: {w}") };
                CommandResult::ok(json!({ "equivalent": true, "identity": t.is_identity(), "witness": w }), text)
            }
            None => CommandResult::fail(exit::MUTATION, json!({ "equivalent": false }), "not equivalent"),
        })
    };
    go().unwrap_or_else(|e| e)
}

pub fn hori_vafa(n: usize, degrees: Vec<usize>) -> CommandResult {
    let spec = CompleteIntersectionSpec::new(n, degrees);
    match build_hori_vafa(&spec) {
        Ok(f) => {
            let mut payload = json!({
                "spec": spec,
                "index": spec.index(),
                "poly": f.to_string(),
                "vars": f.var_names(),
                "terms": f.to_json(),
            });
            if let Ok(p) = newton_polytope(&f) {
                payload["newton"] = p.to_json();
            }
            CommandResult::ok(payload, f.to_string())
        }
        Err(e) => construction_err(e),
    }
}

pub fn markov(depth: usize) -> CommandResult {
    let tree = markov_tree(depth);
    let payload: Vec<Value> = tree.iter().map(|t| t.to_json()).collect();
    let text = tree.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("\n");
    CommandResult::ok(Value::Array(payload), text)
}

pub fn p2_chain(depth: usize) -> CommandResult {
    match constructions::p2_chain(depth) {
        Ok(chain) => {
            let payload: Vec<Value> = chain.iter().map(|s| s.to_json()).collect();
            let text = chain.iter().map(|s| format!("{}: {}", s.triple, s.poly)).collect::<Vec<_>>().join("\n");
            CommandResult::ok(Value::Array(payload), text)
        }
        Err(e) => construction_err(e),
    }
}

fn rational_floats(p: &RationalPolytope) -> Vec<Vec<f64>> {
    p.vertices().iter().map(|v| floats(v)).collect()
}

fn field<T: serde::de::DeserializeOwned>(v: &Value, key: &str) -> Outcome<T> {
    let x = v.get(key).ok_or_else(|| usage(format!("input needs `{key}`")))?;
    serde_json::from_value(x.clone()).map_err(|e| CommandResult::error(exit::DOMAIN, format!("`{key}`: {e}")))
}

fn load_ilten(v: &Value) -> Outcome<(LatticePolytope, Cosection, Option<SliceDecomposition>, Option<LatticePolytope>)> {
    let delta: LatticePolytope = field(v, "polytope")?;
    let r: Vec<i64> = field(v, "r")?;
    let s: Vec<Vec<i64>> = field(v, "s_matrix")?;
    let cos = Cosection::new(r, s).map_err(degeneration_err)?;
    let dec = match (v.get("C1"), v.get("C2")) {
        (Some(_), Some(_)) => Some(SliceDecomposition::new(field(v, "C1")?, field(v, "C2")?)),
        (None, None) => None,
        _ => return Err(usage("give both C1 and C2 or neither")),
    };
    let expected = match v.get("expected") {
        Some(_) => Some(field(v, "expected")?),
        None => None,
    };
    Ok((delta, cos, dec, expected))
}

pub fn iv_mutate(g: &Global, file: Option<String>, example: Option<String>) -> CommandResult {
    let go = || -> Outcome<CommandResult> {
        let (delta, cos, dec, expected) = match (file, example.as_deref()) {
            (_, Some(name)) => {
                let d: IltenData = match name {
                    "p114" => p114_data(),
                    "p112" => p112_data(),
                    other => return Err(usage(format!("unknown example `{other}`; known: p114, p112"))),
                };
                (d.delta, d.cosection, Some(d.decomposition), Some(d.expected))
            }
            (Some(path), None) if path != "-" => load_ilten(&read_json(&path)?)?,
            (_, None) => {
                let text = read_text(None)?;
                let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("input is not valid JSON: {e}")))?;
                load_ilten(&v)?
            }
        };
        let cone = degeneration::cone_over(&delta).map_err(degeneration_err)?;
        let plus = degeneration::slice(&cone, &cos, 1).map_err(degeneration_err)?;
        let minus = degeneration::slice(&cone, &cos, -1).map_err(degeneration_err)?;
        let dec = match dec {
            Some(d) => d,
            None => SliceDecomposition::trivial(&plus, &cos).map_err(degeneration_err)?,
        };
        let out = mutate_polytope(&delta, &cos, &dec).map_err(degeneration_err)?;
        let mut payload = json!({
            "polytope": out.to_json(),
            "C+": plus,
            "C-": minus,
            "C1": dec.c1,
            "C2": dec.c2,
        });
        if g.float {
            payload["C+_float"] = json!(rational_floats(&plus));
        }
        let mut text = vertex_text(&out);
        let mut result_ok = true;
        if let Some(e) = expected {
            let equal = out == e;
            let equiv = lattice_equivalent(&out, &e);
            payload["expected"] = e.to_json();
            payload["equal_to_expected"] = json!(equal);
            payload["lattice_equivalent"] = json!(equiv.is_some());
            if let Some(m) = equiv {
                payload["witness"] = json!(m);
            }
            text.push_str(&format!("\nequal to expected: {equal}"));
            result_ok = payload["lattice_equivalent"] == json!(true);
        }
        Ok(if result_ok {
            CommandResult::ok(payload, text)
        } else {
            CommandResult::fail(exit::DOMAIN, payload, text).note("result is not lattice equivalent to the expected polytope")
        })
    };
    go().unwrap_or_else(|e| e)
}

pub fn verify_minkowski(g: &Global, poly: &str, presentation: Option<String>, partial_ok: bool) -> CommandResult {
    let go = || -> Outcome<CommandResult> {
        let f = parse_poly(g, poly)?;
        let edges = edge_binomials_ok(&f).map_err(minkowski_err)?;
        let pres: Option<MinkowskiPresentation> = match presentation {
            Some(path) => Some(
                serde_json::from_value(read_json(&path)?)
                    .map_err(|e| CommandResult::error(exit::DOMAIN, format!("{path}: {e}")))?,
            ),
            None => find_presentation(&f).map_err(minkowski_err)?,
        };
        let Some(pres) = pres else {
            let payload = json!({ "edge_binomials": edges, "presentation": Value::Null, "faces": {} });
            return Ok(CommandResult::fail(exit::DOMAIN, payload, "no Minkowski presentation found"));
        };
        let report = verify_presentation(&f, &pres).map_err(minkowski_err)?;
        let payload = json!({
            "edge_binomials": edges,
            "presentation": pres.to_json(),
            "faces": report.face_map(),
            "partial": report.partial,
            "report": report,
        });
        let text = report
            .faces
            .iter()
            .map(|s| format!("{:?}: {}", s.face, s.status))
            .collect::<Vec<_>>()
            .join("\n");
        Ok(if !report.ok {
            CommandResult::fail(exit::DOMAIN, payload, text)
        } else if report.partial && !partial_ok {
            let mut r = CommandResult::ok(payload, text).note("only the 2-skeleton was checked; pass --partial-ok to accept");
            r.status = Status::Partial;
            r.code = exit::COMPLEXITY;
            r
        } else if report.partial {
            CommandResult::ok(payload, text).note("partial check: faces of dimension three and more are unchecked")
        } else {
            CommandResult::ok(payload, text)
        })
    };
    go().unwrap_or_else(|e| e)
}
