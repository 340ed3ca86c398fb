//! Minkowski decompositions of lattice polygons and segments.
//!
//! Walking the boundary of a polygon gives its edge vectors; each edge of
//! lattice length `n` contributes its primitive direction `n` times. Up to
//! translation, the lattice summands of the polygon correspond to
//! sub-multisets of these directions summing to zero, and irreducible
//! summands to the minimal such sub-multisets.

use std::collections::BTreeSet;

use super::{convex_hull, LatticePolytope, PolytopeError};
use crate::linalg;

/// Largest number of primitive edge directions (with multiplicity) searched.
pub const MAX_EDGE_SLOTS: usize = 12;

/// Oriented boundary edge vectors of a polygon (or both orientations of a
/// segment), in cyclic order.
fn boundary_edges(p: &LatticePolytope) -> Vec<Vec<i64>> {
    let verts = p.vertices();
    if p.dim() == 1 {
        let d: Vec<i64> = verts[1].iter().zip(&verts[0]).map(|(a, b)| a - b).collect();
        let back = d.iter().map(|x| -x).collect();
        return vec![d, back];
    }
    let edges = p.edges();
    let m = verts.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for e in &edges {
        let (a, b) = (e.vertex_indices[0], e.vertex_indices[1]);
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut order = vec![0usize];
    let mut prev = usize::MAX;
    let mut cur = 0usize;
    while order.len() < m {
        let next = *adj[cur].iter().find(|&&v| v != prev && !order.contains(&v)).expect("cycle");
        order.push(next);
        prev = cur;
        cur = next;
    }
    (0..m)
        .map(|i| {
            let a = &verts[order[i]];
            let b = &verts[order[(i + 1) % m]];
            b.iter().zip(a).map(|(x, y)| x - y).collect()
        })
        .collect()
}

fn summand_from_counts(dirs: &[Vec<i64>], counts: &[u32]) -> LatticePolytope {
    let n = dirs[0].len();
    let mut cur = vec![0i64; n];
    let mut pts = vec![cur.clone()];
    for (d, &k) in dirs.iter().zip(counts) {
        for (c, x) in cur.iter_mut().zip(d) {
            *c += x * i64::from(k);
        }
        pts.push(cur.clone());
    }
    convex_hull(&pts).expect("summand points").canonical()
}

fn zero_sum(dirs: &[Vec<i64>], counts: &[u32]) -> bool {
    (0..dirs[0].len()).all(|c| {
        dirs.iter().zip(counts).map(|(d, &k)| d[c] * i64::from(k)).sum::<i64>() == 0
    })
}

fn dominated(small: &[u32], big: &[u32]) -> bool {
    small.iter().zip(big).all(|(a, b)| a <= b)
}

/// All decompositions of `p` into irreducible lattice summands.
///
/// Each decomposition is a sorted list of summands translated so that their
/// lexicographically smallest vertex is the origin. An irreducible `p` yields
/// the single decomposition `[p]`.
pub fn polygon_minkowski_decompositions(
    p: &LatticePolytope,
) -> Result<Vec<Vec<LatticePolytope>>, PolytopeError> {
    if p.dim() == 0 || p.dim() > 2 {
        return Err(PolytopeError::NotTwoDimensional(p.dim()));
    }
    let edges = boundary_edges(p);
    let mut dirs = Vec::new();
    let mut mult = Vec::new();
    for e in &edges {
        let g = linalg::gcd_slice(e);
        dirs.push(e.iter().map(|x| x / g).collect::<Vec<i64>>());
        mult.push(g as u32);
    }
    let slots: usize = mult.iter().map(|&m| m as usize).sum();
    if slots > MAX_EDGE_SLOTS {
        return Err(PolytopeError::ComplexityLimit { slots, limit: MAX_EDGE_SLOTS });
    }

    // Enumerate every nonzero zero-sum count vector.
    let mut zero_sums: Vec<Vec<u32>> = Vec::new();
    let mut counts = vec![0u32; dirs.len()];
    loop {
        let mut i = 0;
        loop {
            if i == counts.len() {
                break;
            }
            if counts[i] < mult[i] {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
        if zero_sum(&dirs, &counts) {
            zero_sums.push(counts.clone());
        }
    }
    let minimal: Vec<Vec<u32>> = zero_sums
        .iter()
        .filter(|z| !zero_sums.iter().any(|w| w != *z && dominated(w, z)))
        .cloned()
        .collect();

    let mut results: BTreeSet<Vec<LatticePolytope>> = BTreeSet::new();
    let mut stack: Vec<usize> = Vec::new();
    collect_partitions(&minimal, &mult, 0, &mut stack, &mut |parts| {
        let mut summands: Vec<LatticePolytope> =
            parts.iter().map(|&i| summand_from_counts(&dirs, &minimal[i])).collect();
        summands.sort();
        results.insert(summands);
    });
    let mut out: Vec<Vec<LatticePolytope>> = results.into_iter().collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

fn collect_partitions(
    minimal: &[Vec<u32>],
    remaining: &[u32],
    start: usize,
    stack: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if remaining.iter().all(|&r| r == 0) {
        emit(stack);
        return;
    }
    for i in start..minimal.len() {
        if dominated(&minimal[i], remaining) {
            let rest: Vec<u32> = remaining.iter().zip(&minimal[i]).map(|(r, m)| r - m).collect();
            stack.push(i);
            collect_partitions(minimal, &rest, i, stack, emit);
            stack.pop();
        }
    }
}
