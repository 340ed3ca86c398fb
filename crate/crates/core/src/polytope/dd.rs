//! Double-description enumeration of facets for full-dimensional hulls.
//!
//! The inequalities `a·x ≤ b` valid on a point set form the cone
//! `{(b, a) : b − a·p ≥ 0 for every p}`. For a full-dimensional point set this
//! cone is pointed and its extreme rays are exactly the facets. Rays are kept
//! as primitive integer vectors and adjacency is decided combinatorially from
//! the sets of constraints they make tight.

use num_integer::Integer;

use super::PolytopeError;
use crate::linalg;

type Bits = Vec<u64>;

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bits_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &Bits) -> u32 {
    a.iter().map(|x| x.count_ones()).sum()
}

struct Ray {
    coords: Vec<i128>,
    zeros: Bits,
}

fn dot(row: &[i128], y: &[i128]) -> Result<i128, PolytopeError> {
    row.iter().zip(y).try_fold(0i128, |acc, (a, b)| {
        a.checked_mul(*b)
            .and_then(|p| acc.checked_add(p))
            .ok_or(PolytopeError::Overflow)
    })
}

fn normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

/// Facet inequalities `(normal, offset)` meaning `normal·x ≤ offset`, for a
/// set of integer points affinely spanning `Z^k`, `k ≥ 1`.
pub(crate) fn facets(points: &[Vec<i64>]) -> Result<Vec<(Vec<i64>, i64)>, PolytopeError> {
    let k = points[0].len();
    let d = k + 1;
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|p| {
            let mut r = Vec::with_capacity(d);
            r.push(1i128);
            r.extend(p.iter().map(|&x| -(x as i128)));
            r
        })
        .collect();
    let m = rows.len();
    let words = m.div_ceil(64);

    // Greedy choice of d affinely independent points.
    let mut basis: Vec<usize> = Vec::with_capacity(d);
    let mut basis_rows: Vec<Vec<i64>> = Vec::with_capacity(d);
    for (i, p) in points.iter().enumerate() {
        let mut row = vec![1i64];
        row.extend_from_slice(p);
        basis_rows.push(row);
        if linalg::rank(&basis_rows) == basis_rows.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        } else {
            basis_rows.pop();
        }
    }
    debug_assert_eq!(basis.len(), d, "points must be full-dimensional");

    let square: Vec<Vec<i64>> = basis
        .iter()
        .map(|&i| rows[i].iter().map(|&x| x as i64).collect())
        .collect();
    let inv = linalg::rational_inverse(&square).expect("independent rows");
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let col: Vec<_> = inv.iter().map(|row| row[j].clone()).collect();
            let coords: Vec<i128> = linalg::primitive_from_rational(&col)
                .into_iter()
                .map(i128::from)
                .collect();
            let mut zeros = vec![0u64; words];
            for (bi, &row_idx) in basis.iter().enumerate() {
                if bi != j {
                    bit_set(&mut zeros, row_idx);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    let mut in_basis = vec![false; m];
    for &i in &basis {
        in_basis[i] = true;
    }

    for h in 0..m {
        if in_basis[h] {
            continue;
        }
        let row = &rows[h];
        let values: Vec<i128> = rays.iter().map(|r| dot(row, &r.coords)).collect::<Result<_, _>>()?;
        if values.iter().all(|&v| v >= 0) {
            for (r, &v) in rays.iter_mut().zip(&values) {
                if v == 0 {
                    bit_set(&mut r.zeros, h);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i] < 0).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = bits_and(&rays[p].zeros, &rays[n].zeros);
                if (popcount(&common) as usize) + 2 < d {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(i, r)| {
                    i != p && i != n && bits_subset(&common, &r.zeros)
                });
                if blocked {
                    continue;
                }
                let (vp, vn) = (values[p], -values[n]);
                let mut coords = Vec::with_capacity(d);
                for (a, b) in rays[n].coords.iter().zip(&rays[p].coords) {
                    let c = vp
                        .checked_mul(*a)
                        .and_then(|x| vn.checked_mul(*b).and_then(|y| x.checked_add(y)))
                        .ok_or(PolytopeError::Overflow)?;
                    coords.push(c);
                }
                normalize(&mut coords);
                let mut zeros = common;
                bit_set(&mut zeros, h);
                fresh.push(Ray { coords, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (r, &v) in rays.into_iter().zip(&values) {
            if v >= 0 {
                let mut r = r;
                if v == 0 {
                    bit_set(&mut r.zeros, h);
                }
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }

    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let normal: Vec<i128> = r.coords[1..].to_vec();
        let g = normal.iter().fold(0i128, |acc, x| acc.gcd(x));
        if g == 0 {
            continue;
        }
        let normal: Vec<i64> = normal
            .iter()
            .map(|x| i64::try_from(x / g).map_err(|_| PolytopeError::Overflow))
            .collect::<Result<_, _>>()?;
        let offset = i64::try_from(r.coords[0] / g).map_err(|_| PolytopeError::Overflow)?;
        out.push((normal, offset));
    }
    out.sort();
    out.dedup();
    Ok(out)
}
