//! Exact linear algebra: fraction-free (Bareiss) elimination over the
//! integers, with an `i128` fast path that falls back to big integers on
//! overflow, and Gauss-Jordan over the rationals for small systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::lattice::Rational;

fn to_i128_matrix(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<i128>>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>()).collect()
}

/// Rank by `i128` Bareiss elimination; `None` on overflow.
pub fn rank_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev: i128 = 1;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col];
        let (top, below) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank][col + 1..];
        for row in below {
            let factor = row[col];
            for (x, &y) in row[col + 1..].iter_mut().zip(pivot_row) {
                *x = x.checked_mul(pivot)?.checked_sub(factor.checked_mul(y)?)? / prev;
            }
            row[col] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_rank_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        let (top, below) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank][col + 1..];
        for row in below {
            let factor = std::mem::take(&mut row[col]);
            for (x, y) in row[col + 1..].iter_mut().zip(pivot_row) {
                let mut v = &*x * &pivot;
                if !factor.is_zero() {
                    v -= &factor * y;
                }
                *x = v / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Rank over the rationals of an integer matrix given by rows.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    if let Some(small) = to_i128_matrix(rows) {
        if let Some(r) = rank_i128(small) {
            return r;
        }
    }
    bareiss_rank_big(rows.to_vec())
}

/// Exact determinant of a square integer matrix.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(k, p);
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

pub fn determinant_i64(m: &[Vec<i64>]) -> BigInt {
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    determinant(&big)
}

/// Inverse over the rationals, `None` when singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let pivot = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves the square system `m x = b`, `None` when singular.
pub fn solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let inv = inverse(m)?;
    Some(inv.iter().map(|row| row.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)).collect())
}

fn normalize_row(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Basis of the left kernel `{y : y^T rows = 0}` as integer vectors.
///
/// Elimination runs on `[rows | I]`; rows whose left part vanishes carry
/// kernel vectors in their right part.
pub fn left_kernel(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        for i in rank + 1..m {
            if a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            let (head, tail) = a.split_at_mut(i);
            let prow = &head[rank];
            for (x, y) in tail[0].iter_mut().zip(prow) {
                *x = &*x * &pivot - &f * y;
            }
            normalize_row(&mut tail[0]);
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    a.into_iter().skip(rank).map(|r| r[n..].to_vec()).collect()
}

/// Echelon basis of the row space, rows gcd-normalised.
pub fn row_basis(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        normalize_row(&mut a[rank]);
        let pivot = a[rank][col].clone();
        for i in rank + 1..m {
            if a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            let (head, tail) = a.split_at_mut(i);
            for (x, y) in tail[0].iter_mut().zip(&head[rank]) {
                *x = &*x * &pivot - &f * y;
            }
            normalize_row(&mut tail[0]);
        }
        rank += 1;
    }
    a.truncate(rank);
    a
}

/// Integer combination `sum_i y_i rows_i`.
pub fn combine(y: &[BigInt], rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut out = vec![BigInt::zero(); n];
    for (c, r) in y.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(r) {
            *o += c * x;
        }
    }
    out
}

/// Generalised cross product: a vector orthogonal to the `d - 1` given
/// vectors in `Z^d`, zero iff they are linearly dependent.
pub fn cross(vectors: &[Vec<i64>], dim: usize) -> Vec<BigInt> {
    debug_assert_eq!(vectors.len() + 1, dim);
    (0..dim)
        .map(|k| {
            let minor: Vec<Vec<i64>> = vectors
                .iter()
                .map(|v| v.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &x)| x).collect())
                .collect();
            let d = determinant_i64(&minor);
            if k % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// gcd of all maximal minors of the `k x d` matrix with the given rows; this
/// is the index of the row lattice inside its saturation, i.e. the
/// normalised volume of the simplex spanned by the rows.
pub fn gcd_of_maximal_minors(vectors: &[Vec<i64>], dim: usize) -> BigInt {
    let k = vectors.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut g = BigInt::zero();
    for cols in combinations(dim, k) {
        let minor: Vec<Vec<i64>> = vectors.iter().map(|v| cols.iter().map(|&c| v[c]).collect()).collect();
        g = g.gcd(&determinant_i64(&minor));
    }
    g.abs()
}

/// Rank of the differences `p_i - p_0`.
pub fn affine_rank(points: &[Vec<i64>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Vec<BigInt>> =
        points[1..].iter().map(|p| p.iter().zip(&points[0]).map(|(a, b)| BigInt::from(a - b)).collect()).collect();
    rank(&diffs)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&big(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])), 2);
        assert_eq!(rank(&big(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&big(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]])), 3);
        let huge: BigInt = BigInt::from(i128::MAX) * 4;
        let m = vec![vec![huge.clone(), BigInt::from(1)], vec![huge.clone() * 2, BigInt::from(2)]];
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn big_fallback_matches_fast_path() {
        let m = big(&[&[3, 1, 4, 1], &[5, 9, 2, 6], &[5, 3, 5, 8], &[8, 12, 6, 7]]);
        let fast = rank_i128(to_i128_matrix(&m).unwrap()).unwrap();
        assert_eq!(fast, bareiss_rank_big(m.clone()));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant_i64(&[vec![-3, 0, 1], vec![0, -2, 1], vec![1, 1, -1]]), BigInt::from(-1));
        assert_eq!(determinant_i64(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(determinant_i64(&[vec![2, 4], vec![1, 2]]), BigInt::from(0));
    }

    #[test]
    fn inverse_and_solve() {
        let r = |x: i64| Rational::from_integer(x.into());
        let m = vec![vec![r(-2), r(1)], vec![r(1), r(-1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![r(-1), r(-1)], vec![r(-1), r(-2)]]);
        assert_eq!(solve(&m, &[r(1), r(0)]).unwrap(), vec![r(-1), r(-1)]);
        assert!(inverse(&[vec![r(1), r(2)], vec![r(2), r(4)]]).is_none());
    }

    #[test]
    fn kernels() {
        let rows = big(&[&[1, 1], &[2, 2], &[0, 1]]);
        let k = left_kernel(&rows);
        assert_eq!(k.len(), 1);
        assert!(combine(&k[0], &rows).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn echelon_rows() {
        let rows = big(&[&[2, 4, 0], &[1, 2, 0], &[0, 3, 3]]);
        let b = row_basis(&rows);
        assert_eq!(b.len(), 2);
        assert_eq!(b[0], vec![BigInt::from(1), BigInt::from(2), BigInt::from(0)]);
        let mut both = rows.clone();
        both.extend(b.iter().cloned());
        assert_eq!(rank(&both), 2);
    }

    #[test]
    fn cross_and_minors() {
        let n = cross(&[vec![-2, 3]], 2);
        assert_eq!(n, vec![BigInt::from(3), BigInt::from(2)]);
        let n = cross(&[vec![1, 0, 0], vec![0, 1, 0]], 3);
        assert_eq!(n, vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)]);
        assert_eq!(gcd_of_maximal_minors(&[vec![-2, 2]], 2), BigInt::from(2));
        assert_eq!(gcd_of_maximal_minors(&[vec![-2, 3]], 2), BigInt::from(1));
        assert_eq!(gcd_of_maximal_minors(&[vec![2, 0, 0], vec![0, 2, 0]], 3), BigInt::from(4));
    }

    #[test]
    fn subsets() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(affine_rank(&[vec![0, 0], vec![1, 1], vec![2, 2]]), 1);
    }
}
