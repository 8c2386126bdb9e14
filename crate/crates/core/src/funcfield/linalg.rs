//! Linear algebra over K and over rational function fields.

use rand::Rng;

use super::{FuncError, MultiPoly, RatFunc};
use crate::scalars::{FieldExt, Scalar};

/// Row echelon form over K; returns (echelon rows, pivot columns).
pub fn row_echelon(rows: &[Vec<Scalar>]) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut m = rows.to_vec();
    let pivots = reduce_rows(&mut m, ncols);
    m.truncate(pivots.len());
    (m, pivots)
}

/// Gauss-Jordan elimination pivoting only in the first `pivot_cols`
/// columns; zero rows are moved below the pivot rows.
fn reduce_rows(m: &mut [Vec<Scalar>], pivot_cols: usize) -> Vec<usize> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    if m[r][j].is_zero() {
                        continue;
                    }
                    let d = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    row_echelon(rows).1.len()
}

/// Determinant over K by elimination.
pub fn scalar_determinant(rows: &[Vec<Scalar>]) -> Option<Scalar> {
    let n = rows.len();
    let field = rows.first()?.first()?.field().clone();
    let mut m = rows.to_vec();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Some(field.zero()) };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().ok()?;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] = &m[i][j] - &d;
            }
        }
    }
    Some(det)
}

/// Solves x·A = b for a row vector x (A given by rows), if solvable.
pub fn solve_left(a_rows: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    solve_left_many(a_rows, std::slice::from_ref(&b.to_vec())).pop().flatten()
}

/// [`solve_left`] for several right-hand sides with a single elimination.
pub fn solve_left_many(a_rows: &[Vec<Scalar>], bs: &[Vec<Scalar>]) -> Vec<Option<Vec<Scalar>>> {
    let n = a_rows.len();
    let Some(m) = bs.first().map(Vec::len) else { return Vec::new() };
    let Some(field) = bs[0].first().map(|c| c.field().clone()) else { return vec![None; bs.len()] };
    // transpose: Aᵀ xᵀ = bᵀ, one augmented column per right-hand side
    let mut aug: Vec<Vec<Scalar>> = (0..m)
        .map(|j| {
            let mut row: Vec<Scalar> = (0..n).map(|i| a_rows[i][j].clone()).collect();
            row.extend(bs.iter().map(|b| b[j].clone()));
            row
        })
        .collect();
    let piv = reduce_rows(&mut aug, n);
    (0..bs.len())
        .map(|k| {
            if aug[piv.len()..].iter().any(|row| !row[n + k].is_zero()) {
                return None;
            }
            let mut x = vec![field.zero(); n];
            for (row, &c) in aug.iter().zip(&piv) {
                x[c] = row[n + k].clone();
            }
            Some(x)
        })
        .collect()
}

/// Basis of {v : A v = 0}.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let field = rows[0][0].field().clone();
    let (ech, piv) = row_echelon(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (row, &p) in ech.iter().zip(&piv) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Fraction-free determinant of a matrix of rational functions: rows are
/// cleared of denominators, then Bareiss elimination runs on polynomials
/// with exact divisions.
pub fn determinant(m: &[Vec<RatFunc>]) -> Result<RatFunc, FuncError> {
    let n = m.len();
    if n == 0 {
        return Err(FuncError::Arity { expected: 1, found: 0 });
    }
    let field = m[0][0].field().clone();
    let vars = m[0][0].vars().clone();
    let mut scale = MultiPoly::one(&field, &vars);
    let mut a: Vec<Vec<MultiPoly>> = Vec::with_capacity(n);
    for row in m {
        if row.len() != n {
            return Err(FuncError::Arity { expected: n, found: row.len() });
        }
        let mut common = MultiPoly::one(&field, &vars);
        for e in row {
            if !e.den().is_one() && common.div_exact(e.den())?.is_none() {
                common = common.mul(e.den())?;
            }
        }
        let mut prow = Vec::with_capacity(n);
        for e in row {
            let q = common.div_exact(e.den())?.expect("common multiple of row denominators");
            prow.push(e.num().mul(&q)?);
        }
        scale = scale.mul(&common)?;
        a.push(prow);
    }
    let mut sign = false;
    let mut prev = MultiPoly::one(&field, &vars);
    let mut prev_inv = field.one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(RatFunc::zero(&field, &vars));
            };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].mul(&a[k][k])?.sub(&a[i][k].mul(&a[k][j])?)?;
                a[i][j] = t.div_exact_by(&prev, &prev_inv)?.ok_or(FuncError::Internal("inexact Bareiss division".into()))?;
            }
            a[i][k] = MultiPoly::zero(&field, &vars);
        }
        prev = a[k][k].clone();
        prev_inv = prev.terms()[0].1.inv()?;
    }
    let mut det = a[n - 1][n - 1].clone();
    if sign {
        det = det.neg();
    }
    RatFunc::new(det, scale)
}

/// Certifies det ≠ 0 by finding a point where every entry is defined and the
/// evaluated determinant is nonzero; falls back to exact elimination.
pub fn determinant_is_nonzero<R: Rng>(m: &[Vec<RatFunc>], rng: &mut R, attempts: usize) -> Result<bool, FuncError> {
    if m.is_empty() {
        return Ok(true);
    }
    let field = m[0][0].field().clone();
    let nvars = m[0][0].vars().len();
    for _ in 0..attempts {
        let point: Vec<Scalar> = (0..nvars).map(|_| field.random_element(rng)).collect();
        let mut rows = Vec::with_capacity(m.len());
        let mut defined = true;
        for row in m {
            let mut r = Vec::with_capacity(row.len());
            for e in row {
                match e.eval(&point) {
                    Some(v) => r.push(v),
                    None => {
                        defined = false;
                        break;
                    }
                }
            }
            if !defined {
                break;
            }
            rows.push(r);
        }
        if defined && scalar_determinant(&rows).is_some_and(|d| !d.is_zero()) {
            return Ok(true);
        }
    }
    Ok(!determinant(m)?.is_zero())
}

/// Matrix product over rational functions.
pub fn mat_mul(a: &[Vec<RatFunc>], b: &[Vec<RatFunc>]) -> Result<Vec<Vec<RatFunc>>, FuncError> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let field = a[0][0].field().clone();
    let vars = a[0][0].vars().clone();
    let mut out = vec![vec![RatFunc::zero(&field, &vars); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = RatFunc::zero(&field, &vars);
            for l in 0..k {
                if a[i][l].is_zero() || b[l][j].is_zero() {
                    continue;
                }
                acc = acc.add(&a[i][l].mul(&b[l][j])?)?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}
