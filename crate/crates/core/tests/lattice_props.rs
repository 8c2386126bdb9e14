use noether_core::oracle::{hnf, kernel_lattice, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(move |(r, c)| prop::collection::vec(prop::collection::vec(-bound..=bound, c), r))
}

fn pivot(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|v| !v.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hnf_is_unimodular_and_canonical(m in matrix(4, 4, 9)) {
        let a = IntMatrix::from_i64(&m);
        let (h, u) = hnf(&a);
        prop_assert_eq!(&u.mul(&a), &h);
        prop_assert_eq!(u.determinant().abs(), BigInt::from(1));

        let mut last: Option<usize> = None;
        let mut seen_zero = false;
        for (i, row) in h.entries.iter().enumerate() {
            match pivot(row) {
                None => seen_zero = true,
                Some(c) => {
                    prop_assert!(!seen_zero, "nonzero row below a zero row");
                    prop_assert!(last.map_or(true, |l| c > l), "pivots not strictly increasing");
                    prop_assert!(row[c].is_positive());
                    for above in &h.entries[..i] {
                        prop_assert!(!above[c].is_negative() && above[c] < row[c]);
                    }
                    last = Some(c);
                }
            }
        }
    }

    #[test]
    fn hnf_is_idempotent(m in matrix(4, 4, 9)) {
        let (h, _) = hnf(&IntMatrix::from_i64(&m));
        prop_assert_eq!(hnf(&h).0, h);
    }

    #[test]
    fn kernel_lattice_matches_brute_force(
        m in matrix(2, 3, 5),
        mods in prop::collection::vec(2i64..=4, 2),
    ) {
        let a = IntMatrix::from_i64(&m);
        let moduli: Vec<BigInt> = mods[..a.rows].iter().map(|&d| BigInt::from(d)).collect();
        let (basis, index) = kernel_lattice(&a, &moduli);

        prop_assert_eq!(basis.rows, a.cols);
        prop_assert_eq!(basis.determinant().abs(), index.clone());
        for v in &basis.entries {
            for (row, d) in a.entries.iter().zip(&moduli) {
                let s: BigInt = row.iter().zip(v).map(|(x, y)| x * y).sum();
                prop_assert!(s.mod_floor(d).is_zero());
            }
        }

        // the kernel contains L·ℤⁿ, so its index is Lⁿ / #solutions mod L
        let l = mods[..a.rows].iter().fold(1i64, |acc, &d| acc.lcm(&d));
        let n = a.cols as u32;
        let mut solutions = 0i64;
        for code in 0..l.pow(n) {
            let v: Vec<i64> = (0..n).map(|k| code / l.pow(k) % l).collect();
            let ok = m.iter().zip(&mods).all(|(row, &d)| row.iter().zip(&v).map(|(x, y)| x * y).sum::<i64>().rem_euclid(d) == 0);
            solutions += ok as i64;
        }
        prop_assert_eq!(index, BigInt::from(l.pow(n) / solutions));
    }
}
