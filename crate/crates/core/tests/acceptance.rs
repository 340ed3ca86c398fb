use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_lg::constructions::{
    catalog, catalog_poly, hori_vafa, markov_tree, p112_data, p2_chain, run_example, weighted_triangle_check,
    CompleteIntersectionSpec, MarkovTriple,
};
use toric_lg::degeneration::{factor_mutation, mutate_polytope};
use toric_lg::laurent::{parse, parse_with_vars, rational, LaurentError};
use toric_lg::minkowski::{edge_binomials_ok, find_presentation, verify_presentation};
use toric_lg::mutation::{apply_cluster, equivalent_up_to_toric, ClusterChange};
use toric_lg::period::{period_oracle, period_sequence};
use toric_lg::polytope::{convex_hull, lattice_equivalent, minkowski_sum, newton_polytope};
use toric_lg::{ExponentVector, LaurentPoly, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn poly(name: &str) -> LaurentPoly {
    catalog_poly(name).expect("catalog entry")
}

fn seq(f: &LaurentPoly, n: usize) -> Result<Vec<Rational>, String> {
    period_sequence(f, n).map(|s| s.values).map_err(|e| e.to_string())
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&k| rational(k)).collect()
}

fn periods_invariant() -> Outcome {
    let groups: &[&[&str]] = &[
        &["quadric3.f0", "quadric3.f1"],
        &["cubic3.f0", "cubic3.f1"],
        &["cubic4.f00", "cubic4.f10", "cubic4.f11"],
        &["p3.f1", "p3.f2", "p3.f3"],
    ];
    let n = 8;
    for g in groups {
        let first = seq(&poly(g[0]), n)?;
        for name in &g[1..] {
            ensure(seq(&poly(name), n)? == first, format!("{name} differs from {}", g[0]))?;
        }
    }
    Ok(format!("4 families agree to N = {n}"))
}

fn pinned_periods() -> Outcome {
    ensure(seq(&poly("p2"), 6)? == ints(&[1, 0, 0, 6, 0, 0, 90]), "P² periods")?;
    for name in ["quadric3.f0", "quadric3.f1"] {
        let f = poly(name);
        let a3 = seq(&f, 3)?[3].clone();
        let oracle = period_oracle(&f, 3).map_err(|e| e.to_string())?.values[3].clone();
        ensure(a3 == rational(12) && oracle == a3, format!("{name}: a_3 = {a3}"))?;
    }
    Ok("P² [1,0,0,6,0,0,90], quadric a_3 = 12 for f0 and f1".into())
}

fn round_trips() -> Outcome {
    let mut count = 0;
    for name in ["quadric3", "cubic3", "cubic4", "p3"] {
        let report = run_example(name).expect("example");
        for c in &report.checks {
            ensure(c.passed, format!("{name}: {} ({})", c.label, c.detail))?;
            count += 1;
        }
    }
    let xyz = ["x", "y", "z"];
    let f1 = parse_with_vars("(x+1)/(x*y*z) + y*(x+1) + z", &xyz).unwrap();
    let c = ClusterChange::new(1, -1, parse_with_vars("x+1", &xyz).unwrap()).unwrap();
    let back = apply_cluster(&f1, &c).map_err(|e| e.to_string())?;
    let w = equivalent_up_to_toric(&back, &poly("quadric3.f0")).ok_or("quadric round trip")?;
    ensure(w.apply(&back).unwrap().same_terms(&poly("quadric3.f0")), "quadric witness")?;
    Ok(format!("{count} chain checks with verified toric witnesses"))
}

fn ilten_example() -> Outcome {
    let data = toric_lg::constructions::p114_data();
    let delta = convex_hull(&[vec![-1, 2], vec![1, 2], vec![0, -1]]).unwrap();
    ensure(data.delta == delta, "stored triangle")?;
    let out = mutate_polytope(&data.delta, &data.cosection, &data.decomposition).map_err(|e| e.to_string())?;
    let want = convex_hull(&[vec![-1, 1], vec![0, 1], vec![1, -2]]).unwrap();
    ensure(out == want, format!("got {:?}", out.vertices()))?;
    let p2 = convex_hull(&[vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap();
    let m = lattice_equivalent(&out, &p2).ok_or("not equivalent to P²")?;
    ensure(out.image(&m).unwrap() == p2, "equivalence witness")?;
    Ok(format!("result {:?}, equivalent to P² via A = {:?}", out.vertices(), m.matrix))
}

fn markov_and_galkin() -> Outcome {
    let tree = markov_tree(6);
    for (a, b, c) in [(1, 2, 5), (1, 5, 13), (2, 5, 29)] {
        ensure(tree.contains(&MarkovTriple::from_u64(a, b, c).unwrap()), format!("missing ({a},{b},{c})"))?;
    }
    for t in &tree {
        let [a, b, c] = t.entries().clone();
        ensure(&a * &a + &b * &b + &c * &c == &a * &b * &c * 3u32, format!("{t} fails the equation"))?;
    }
    let chain = p2_chain(3).map_err(|e| e.to_string())?;
    let base = seq(&chain[0].poly, 9)?;
    for step in &chain {
        ensure(seq(&step.poly, 9)? == base, format!("periods change at {}", step.triple))?;
        let p = newton_polytope(&step.poly).map_err(|e| e.to_string())?;
        ensure(weighted_triangle_check(&p, &step.triple), format!("weighted triangle fails at {}", step.triple))?;
    }
    let triples: Vec<String> = chain.iter().map(|s| s.triple.to_string()).collect();
    Ok(format!("{} triples to depth 6; chain {} keeps periods to N = 9", tree.len(), triples.join(" -> ")))
}

fn minkowski() -> Outcome {
    for spec in [(3, vec![]), (4, vec![2]), (4, vec![3]), (5, vec![3]), (5, vec![2, 2]), (2, vec![])] {
        let spec = CompleteIntersectionSpec::new(spec.0, spec.1);
        let f = hori_vafa(&spec).map_err(|e| e.to_string())?;
        let r = edge_binomials_ok(&f).map_err(|e| e.to_string())?;
        ensure(r.ok, format!("edge binomials fail for {spec:?}"))?;
    }
    let mut notes = Vec::new();
    for (name, partial) in [("quadric3.f0", false), ("cubic3.f0", false), ("cubic4.f00", true)] {
        let f = poly(name);
        let pres = find_presentation(&f).map_err(|e| e.to_string())?.ok_or(format!("{name}: no presentation"))?;
        ensure(pres.partial == partial, format!("{name}: partial flag {}", pres.partial))?;
        let report = verify_presentation(&f, &pres).map_err(|e| e.to_string())?;
        ensure(report.ok && report.partial == partial, format!("{name}: witness rejected"))?;
        notes.push(format!("{name} {}", if partial { "partial" } else { "full" }));
    }
    Ok(format!("edge binomials on 6 models; witnesses verified: {}", notes.join(", ")))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> LaurentPoly {
    let names: Vec<String> = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
    let k = rng.gen_range(1..=terms);
    LaurentPoly::from_terms(
        names,
        (0..k).map(|_| {
            let e: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            let mut p: i64 = rng.gen_range(-4..=4);
            if p == 0 {
                p = 1;
            }
            (ExponentVector::new(e), Rational::new(p.into(), rng.gen_range(1i64..=3).into()))
        }),
    )
}

fn nonzero(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> LaurentPoly {
    loop {
        let f = random_poly(rng, n, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

fn oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..50 {
        let n = rng.gen_range(2..=3);
        let f = nonzero(&mut rng, n, 4);
        let len = if n == 2 { 8 } else { 6 };
        let a = period_sequence(&f, len).map_err(|e| e.to_string())?;
        let b = period_oracle(&f, len).map_err(|e| e.to_string())?;
        ensure(a.values == b.values, format!("instance {i}: {f}"))?;
    }
    for i in 0..100 {
        let n = rng.gen_range(2..=3);
        let g = random_poly(&mut rng, n, 5);
        let h = nonzero(&mut rng, n, 4);
        let q = g.mul(&h).unwrap().exact_divide(&h).map_err(|e| format!("pair {i}: {e}"))?;
        ensure(q == g, format!("pair {i}: ({g}) * ({h}) / ({h}) = {q}"))?;
    }
    for i in 0..100 {
        let n = rng.gen_range(2..=3);
        let f = nonzero(&mut rng, n, 4);
        let g = nonzero(&mut rng, n, 4);
        let lhs = newton_polytope(&f.mul(&g).unwrap()).unwrap();
        let rhs = minkowski_sum(&newton_polytope(&f).unwrap(), &newton_polytope(&g).unwrap()).unwrap();
        ensure(lhs == rhs, format!("pair {i}: {f} and {g}"))?;
    }
    Ok("50 period instances (N = 8 in 2 vars, 6 in 3), 100 divisions, 100 Newton products".into())
}

fn hori_vafa_matches() -> Outcome {
    for (n, degrees, name) in [(4, vec![2], "quadric3.f0"), (4, vec![3], "cubic3.f0"), (5, vec![3], "cubic4.f00")] {
        let f = hori_vafa(&CompleteIntersectionSpec::new(n, degrees.clone())).map_err(|e| e.to_string())?;
        let want = poly(name);
        let renamed = f.clone().with_var_names(want.var_names().to_vec()).map_err(|e| e.to_string())?;
        ensure(renamed == want, format!("P^{n} {degrees:?}: {f} vs {want}"))?;
    }
    Ok("(4,[2]), (4,[3]), (5,[3]) reproduce the stored models".into())
}

fn weighted_plane() -> Outcome {
    let xy = ["x", "y"];
    let f = parse_with_vars("(x+1)^2*y/x + 1/y", &xy).unwrap();
    let want = parse_with_vars("(x+1)*y/x + (x+1)/y", &xy).unwrap();
    let f1 = parse_with_vars("(x+1)/x", &xy).unwrap();
    let f2 = parse_with_vars("x+1", &xy).unwrap();
    let g = factor_mutation(&f, 1, &f1, &f2).map_err(|e| e.to_string())?;
    ensure(g.same_terms(&want), format!("got {g}"))?;
    let quad = convex_hull(&[vec![-1, 1], vec![0, 1], vec![1, -1], vec![0, -1]]).unwrap();
    let p = newton_polytope(&g).unwrap();
    ensure(p == quad, format!("Newton polytope {:?}", p.vertices()))?;
    let data = p112_data();
    ensure(newton_polytope(&f).unwrap() == data.delta, "Newton polytope of f")?;
    let q = mutate_polytope(&data.delta, &data.cosection, &data.decomposition).map_err(|e| e.to_string())?;
    ensure(q == p, format!("polytope mutation gives {:?}", q.vertices()))?;
    Ok(format!("{g}; polytope {:?} from both routes", p.vertices()))
}

fn error_pos(e: &LaurentError) -> Option<usize> {
    match e {
        LaurentError::Syntax { pos, .. }
        | LaurentError::NotLaurent { pos, .. }
        | LaurentError::UnknownVariable { pos, .. } => Some(*pos),
        _ => None,
    }
}

fn parser() -> Outcome {
    let mut checked = 0;
    for (name, f) in catalog() {
        ensure(parse(&f.to_string(), Some(f.var_names())).ok() == Some(f.clone()), format!("{name} round trip"))?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..200 {
        let n = rng.gen_range(2..=3);
        let f = random_poly(&mut rng, n, 6);
        let back = parse(&f.to_string(), Some(f.var_names())).map_err(|e| format!("random {i}: {e}"))?;
        ensure(back == f, format!("random {i}: {f}"))?;
        checked += 1;
    }
    let vars: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
    let malformed: &[(&str, usize)] = &[
        ("x+", 2),
        ("x**y", 2),
        ("(x+y", 4),
        ("x+y)", 3),
        ("x^y", 2),
        ("3x", 1),
        ("x^1.5", 3),
        ("*x", 0),
        ("1/(x+1)", 1),
        ("x+q", 2),
    ];
    for (text, want) in malformed {
        match parse(text, Some(&vars)) {
            Ok(p) => return Err(format!("`{text}` parsed as {p}")),
            Err(e) => ensure(error_pos(&e) == Some(*want), format!("`{text}`: {e}"))?,
        }
    }
    Ok(format!("{checked} round trips, {} malformed inputs located", malformed.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("periods invariant under mutation", periods_invariant),
        ("pinned period values", pinned_periods),
        ("mutation round trips", round_trips),
        ("polytope mutation of the triangle", ilten_example),
        ("Markov triples and the P² chain", markov_and_galkin),
        ("Minkowski checks", minkowski),
        ("oracle equivalences", oracles),
        ("Hori-Vafa models", hori_vafa_matches),
        ("weighted projective plane example", weighted_plane),
        ("parser and printer", parser),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {label} [{secs:.1}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {label} [{secs:.1}s]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
