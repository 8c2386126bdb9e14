//! Dense univariate polynomials, coefficients stored low-to-high.
//!
//! Only what the coefficient fields need: cyclotomic polynomials over the
//! integers, and Euclid / Berlekamp over the prime fields.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) trait BaseRing {
    type E: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
}

pub(crate) struct Rationals;

impl BaseRing for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// The prime field of order `self.0`.
pub(crate) struct Zp(pub u64);

impl Zp {
    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.0 as i64) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u128) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

impl BaseRing for Zp {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.0 as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.0 as u128 - *b as u128) % self.0 as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if (*a).is_multiple_of(self.0) {
            return None;
        }
        // Fermat: a^(p-2)
        Some(self.pow(*a, self.0 as u128 - 2))
    }
}

pub(crate) fn trim<R: BaseRing>(r: &R, v: &mut Vec<R::E>) {
    while v.last().is_some_and(|c| r.is_zero(c)) {
        v.pop();
    }
}

pub(crate) fn mul<R: BaseRing>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    trim(r, &mut out);
    out
}

fn sub_poly<R: BaseRing>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| r.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| r.zero());
        out.push(r.sub(&x, &y));
    }
    trim(r, &mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero (trimmed).
pub(crate) fn divrem<R: BaseRing>(r: &R, a: &[R::E], b: &[R::E]) -> (Vec<R::E>, Vec<R::E>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem: Vec<R::E> = a.to_vec();
    trim(r, &mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = r.inv(b.last().unwrap()).expect("leading coefficient invertible");
    let mut quot = vec![r.zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let coef = r.mul(rem.last().unwrap(), &lead_inv);
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] = r.sub(&rem[shift + i], &r.mul(&coef, bc));
        }
        quot[shift] = coef;
        rem.pop();
        trim(r, &mut rem);
    }
    trim(r, &mut quot);
    (quot, rem)
}

fn make_monic<R: BaseRing>(r: &R, a: &[R::E]) -> (Vec<R::E>, R::E) {
    let lead = a.last().cloned().unwrap_or_else(|| r.one());
    let inv = r.inv(&lead).expect("nonzero leading coefficient");
    (a.iter().map(|c| r.mul(c, &inv)).collect(), inv)
}

/// Returns `(g, s)` with `g = gcd(a, b)` monic and `s·a ≡ g (mod b)`.
pub(crate) fn xgcd_left<R: BaseRing>(r: &R, a: &[R::E], b: &[R::E]) -> (Vec<R::E>, Vec<R::E>) {
    let mut old_r = a.to_vec();
    trim(r, &mut old_r);
    let mut cur_r = b.to_vec();
    trim(r, &mut cur_r);
    let mut old_s = vec![r.one()];
    let mut cur_s: Vec<R::E> = Vec::new();
    while !cur_r.is_empty() {
        let (q, rem) = divrem(r, &old_r, &cur_r);
        old_r = std::mem::replace(&mut cur_r, rem);
        let next_s = sub_poly(r, &old_s, &mul(r, &q, &cur_s));
        old_s = std::mem::replace(&mut cur_s, next_s);
    }
    if old_r.is_empty() {
        return (old_r, old_s);
    }
    let (g, inv) = make_monic(r, &old_r);
    let s = old_s.iter().map(|c| r.mul(c, &inv)).collect();
    (g, s)
}

pub(crate) fn gcd<R: BaseRing>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    xgcd_left(r, a, b).0
}

/// `base^exp mod modulus` over 𝔽_p.
pub(crate) fn powmod(zp: &Zp, base: &[u64], mut exp: u128, modulus: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = divrem(zp, base, modulus).1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = divrem(zp, &mul(zp, &acc, &b), modulus).1;
        }
        b = divrem(zp, &mul(zp, &b, &b), modulus).1;
        exp >>= 1;
    }
    acc
}

/// Berlekamp factorisation of a monic squarefree polynomial over 𝔽_p.
///
/// Deterministic: splitting runs over the null-space basis and the residues
/// `0..p` in order.
pub(crate) fn berlekamp(zp: &Zp, f: &[u64]) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let p = zp.0;
    // Row i of q: coefficients of x^(p·i) mod f.
    let xp = powmod(zp, &[0, 1], p as u128, f);
    let mut q = Vec::with_capacity(n);
    let mut cur = vec![1u64];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        q.push(row);
        cur = divrem(zp, &mul(zp, &cur, &xp), f).1;
    }
    // Solve (Q^T - I) g = 0.
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let v = q[i][j];
                    if i == j {
                        zp.sub(&v, &1)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let basis = nullspace_mod(zp, &mut m, n);
    let k = basis.len();
    let mut factors = vec![f.to_vec()];
    if k == 1 {
        return factors;
    }
    'outer: for v in basis.iter() {
        let mut vp = v.clone();
        trim(zp, &mut vp);
        if vp.len() <= 1 {
            continue;
        }
        for s in 0..p {
            let mut shifted = vp.clone();
            shifted[0] = zp.sub(&shifted[0], &s);
            trim(zp, &mut shifted);
            let mut next = Vec::new();
            for h in factors.drain(..) {
                if h.len() <= 2 {
                    next.push(h);
                    continue;
                }
                let g = gcd(zp, &h, &shifted);
                if g.len() > 1 && g.len() < h.len() {
                    let (other, _) = divrem(zp, &h, &g);
                    next.push(g);
                    next.push(make_monic(zp, &other).0);
                } else {
                    next.push(h);
                }
            }
            factors = next;
            if factors.len() == k {
                break 'outer;
            }
        }
    }
    factors
}

fn nullspace_mod(zp: &Zp, m: &mut [Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let rows = m.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = zp.inv(&m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = zp.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in 0..n {
                    let t = zp.mul(&factor, &m[r][j]);
                    m[i][j] = zp.sub(&m[i][j], &t);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = zp.sub(&0, &m[ri][fc]);
            }
            v
        })
        .collect()
}

/// Φ_m over the integers, low-to-high, via Φ_m = (x^m − 1) / ∏_{d | m, d < m} Φ_d.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic polynomial index must be positive");
    let mut memo = BTreeMap::new();
    cyclotomic_memo(m, &mut memo)
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient fits in i64"))
        .collect()
}

fn cyclotomic_memo(m: u64, memo: &mut BTreeMap<u64, Vec<i128>>) -> Vec<i128> {
    if let Some(v) = memo.get(&m) {
        return v.clone();
    }
    let mut num = vec![0i128; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic_memo(d, memo);
            num = int_exact_div_monic(&num, &phi_d);
        }
    }
    memo.insert(m, num.clone());
    num
}

fn int_exact_div_monic(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut quot = vec![0i128; a.len() - db];
    for shift in (0..quot.len()).rev() {
        let coef = rem[shift + db];
        quot[shift] = coef;
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= coef * bc;
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0), "inexact cyclotomic division");
    quot
}
