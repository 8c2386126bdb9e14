//! Row Hermite normal form over ℤ and kernel lattices of congruence systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(entries: Vec<Vec<BigInt>>) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        assert!(entries.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64(entries: &[Vec<i64>]) -> Self {
        Self::new(entries.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let entries = (0..self.rows)
            .map(|i| {
                (0..other.cols)
                    .map(|j| (0..self.cols).map(|k| &self.entries[i][k] * &other.entries[k][j]).sum())
                    .collect()
            })
            .collect();
        IntMatrix { rows: self.rows, cols: other.cols, entries }
    }

    /// Determinant by fraction-free elimination (square matrices).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|v| i64::try_from(v).ok()).collect())
            .collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect()
    }
}

/// Row HNF: returns (H, U) with H = U·M, H in echelon form with positive
/// pivots, entries above each pivot reduced into [0, pivot), zero rows last,
/// and U unimodular.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows, m.cols);
    let mut h = m.entries.clone();
    let mut u = IntMatrix::identity(rows).entries;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let nonzero: Vec<usize> = (r..rows).filter(|&i| !h[i][c].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let p = *nonzero.iter().min_by(|&&a, &&b| h[a][c].abs().cmp(&h[b][c].abs())).unwrap();
            h.swap(r, p);
            u.swap(r, p);
            if nonzero.len() == 1 {
                break;
            }
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                row_sub(&mut h, i, r, &q);
                row_sub(&mut u, i, r, &q);
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for v in h[r].iter_mut().chain(u[r].iter_mut()) {
                *v = -v.clone();
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                row_sub(&mut h, i, r, &q);
                row_sub(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (IntMatrix::new(h), IntMatrix::new(u))
}

fn row_sub(m: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    let (a, b) = if target < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x -= q * y;
    }
}

/// Basis (rows, in HNF) of {v ∈ ℤⁿ : M·v ≡ 0 (mod moduli) componentwise}
/// together with its index in ℤⁿ.
pub fn kernel_lattice(m: &IntMatrix, moduli: &[BigInt]) -> (IntMatrix, BigInt) {
    let (r, n) = (m.rows, m.cols);
    assert_eq!(moduli.len(), r, "one modulus per row");
    // rows [Mᵀ | I_n] and [D | 0]; vectors whose first r coordinates vanish
    // are exactly (0, v) with M·v ∈ D·ℤʳ
    let mut rows = Vec::with_capacity(n + r);
    for j in 0..n {
        let mut row: Vec<BigInt> = (0..r).map(|i| m.entries[i][j].clone()).collect();
        row.extend((0..n).map(|k| BigInt::from((k == j) as i64)));
        rows.push(row);
    }
    for (i, d) in moduli.iter().enumerate() {
        let mut row = vec![BigInt::zero(); r + n];
        row[i] = d.clone();
        rows.push(row);
    }
    let (h, _) = hnf(&IntMatrix::new(rows));
    let basis: Vec<Vec<BigInt>> = h
        .entries
        .iter()
        .filter(|row| row[..r].iter().all(|v| v.is_zero()) && row[r..].iter().any(|v| !v.is_zero()))
        .map(|row| row[r..].to_vec())
        .collect();
    let basis = IntMatrix::new(basis);
    let index = basis.determinant().abs();
    (basis, index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(v)
    }

    #[test]
    fn diagonal_is_fixed() {
        let (h, u) = hnf(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(h, m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn permutation_case() {
        let (h, u) = hnf(&m(&[vec![0, 2], vec![3, 0]]));
        assert_eq!(h, m(&[vec![3, 0], vec![0, 2]]));
        assert_eq!(u.determinant().abs(), BigInt::one());
    }

    #[test]
    fn euclidean_reduction_is_canonical() {
        let a = m(&[vec![2, 4], vec![1, 3]]);
        let (h, u) = hnf(&a);
        // rows (1,3),(0,2) span the lattice; reducing 3 modulo the pivot 2
        // gives the canonical form
        assert_eq!(h, m(&[vec![1, 1], vec![0, 2]]));
        assert_eq!(u.mul(&a), h);
        assert_eq!(hnf(&h).0, h);
    }

    #[test]
    fn kernel_examples() {
        let (b, idx) = kernel_lattice(&m(&[vec![0, 0]]), &[BigInt::from(5)]);
        assert_eq!(b, IntMatrix::identity(2));
        assert_eq!(idx, BigInt::one());
        let (b, idx) = kernel_lattice(&m(&[vec![0, 1]]), &[BigInt::from(2)]);
        assert_eq!(b, m(&[vec![1, 0], vec![0, 2]]));
        assert_eq!(idx, BigInt::from(2));
        let (b, idx) = kernel_lattice(&m(&[vec![0, 1, 2]]), &[BigInt::from(3)]);
        assert_eq!(idx, BigInt::from(3));
        assert_eq!(b, m(&[vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 3]]));
    }

    #[test]
    fn rank_deficient_input() {
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 0]]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a), h);
        assert_eq!(h.entries[1], vec![BigInt::zero(); 3]);
        assert_eq!(u.determinant().abs(), BigInt::one());
    }
}
