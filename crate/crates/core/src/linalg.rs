//! Small exact linear-algebra helpers over the integers and rationals.
//!
//! Matrices are row-major `Vec<Vec<i64>>`; everything here is sized for the
//! low-dimensional problems of the rest of the crate (dimension ≤ 7).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::laurent::Rational;

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn is_square(m: &[Vec<i64>]) -> bool {
    m.iter().all(|row| row.len() == m.len())
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn is_unimodular(m: &[Vec<i64>]) -> bool {
    is_square(m) && det(m).abs().is_one()
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<i64>]) -> IntMatrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

fn to_rational(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|row| row.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect()
}

/// Inverse over the rationals, `None` when singular.
pub fn rational_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Rational>>> {
    rational_inverse_q(&to_rational(m))
}

pub fn rational_inverse_q(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &factor * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Integer inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Option<IntMatrix> {
    if !is_unimodular(m) {
        return None;
    }
    rational_inverse(m)?
        .into_iter()
        .map(|row| row.into_iter().map(|x| rational_to_i64(&x)).collect())
        .collect()
}

pub fn rational_to_i64(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Reduced row echelon form over the rationals; returns (rref, pivot columns).
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in c..ncols {
                    let sub = &factor * &a[r][j];
                    a[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    rref(&to_rational(rows)).1.len()
}

/// Pivot columns of the integer row space, which index a coordinate subset
/// on which the rows stay independent.
pub fn pivot_columns(rows: &[Vec<i64>]) -> Vec<usize> {
    rref(&to_rational(rows)).1
}

/// A basis of the rational null space `{x : rows·x = 0}`, each vector scaled
/// to a primitive integer vector.
pub fn integer_nullspace(rows: &[Vec<i64>], ncols: usize) -> IntMatrix {
    let (red, pivots) = rref(&to_rational(rows));
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            primitive_from_rational(&v)
        })
        .collect()
}

/// Clears denominators and divides by the content.
pub fn primitive_from_rational(v: &[Rational]) -> Vec<i64> {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| {
            if g.is_zero() {
                0
            } else {
                (x / &g).to_i64().expect("coordinate fits in i64")
            }
        })
        .collect()
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, &x| acc.gcd(&x))
}

pub fn is_primitive_vector(v: &[i64]) -> bool {
    gcd_slice(v) == 1
}

/// Unimodular matrix whose first row is the primitive vector `v`.
pub fn complete_to_unimodular(v: &[i64]) -> Option<IntMatrix> {
    let n = v.len();
    if n == 0 || !is_primitive_vector(v) {
        return None;
    }
    // Column operations reduce v·U to (±1, 0, …, 0).
    let mut r = v.to_vec();
    let mut u = identity(n);
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| r[i] != 0).collect();
        if nonzero.len() == 1 {
            let i = nonzero[0];
            if i != 0 {
                r.swap(0, i);
                for row in u.iter_mut() {
                    row.swap(0, i);
                }
            }
            break;
        }
        let &piv = nonzero.iter().min_by_key(|&&i| r[i].abs()).unwrap();
        for &j in &nonzero {
            if j != piv {
                let q = r[j].div_euclid(r[piv]);
                r[j] -= q * r[piv];
                for row in u.iter_mut() {
                    row[j] -= q * row[piv];
                }
            }
        }
    }
    if r[0] < 0 {
        for row in u.iter_mut() {
            row[0] = -row[0];
        }
    }
    unimodular_inverse(&u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(det(&identity(4)), BigInt::one());
        assert_eq!(det(&[vec![1, 2], vec![3, 4]]), BigInt::from(-2));
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(
            det(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]),
            BigInt::from(2 + (1 - 3))
        );
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let m = vec![vec![1, 2, 0], vec![0, 1, 0], vec![3, 7, 1]];
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(3));
        assert!(unimodular_inverse(&[vec![2, 0], vec![0, 1]]).is_none());
    }

    #[test]
    fn nullspace_of_covector() {
        let ker = integer_nullspace(&[vec![0, 1, 0]], 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert_eq!(v[1], 0);
        }
    }

    #[test]
    fn completion_has_requested_first_row() {
        for v in [vec![0, 1, 0], vec![2, 3], vec![6, 10, 15], vec![-1, 4]] {
            let w = complete_to_unimodular(&v).unwrap();
            assert_eq!(w[0], v);
            assert!(is_unimodular(&w));
        }
        assert!(complete_to_unimodular(&[2, 4]).is_none());
    }
}
