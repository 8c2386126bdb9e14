//! Exact arithmetic in ℚ(ζ_m) and 𝔽_p(ζ_m).
//!
//! A [`FieldSpec`] fixes the characteristic, the order `m` of the adjoined
//! root of unity and the monic modulus polynomial; a [`Scalar`] is a dense
//! coefficient vector in the power basis of the class of the indeterminate.
//! Nothing here ever touches floating point.

mod upoly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use upoly::cyclotomic_polynomial;
use upoly::{BaseRing, Rationals, Zp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("hypothesis violation: characteristic {p} divides the root-of-unity order {m}")]
    CharDividesOrder { p: u64, m: u64 },
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("root-of-unity order must be positive")]
    ZeroOrder,
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("operands belong to different coefficient fields")]
    MixedFields,
    #[error("the field has no element of multiplicative order {0}")]
    NoPrimitiveRoot(u64),
    #[error("malformed scalar: {0}")]
    Parse(String),
}

/// Serialized form used in certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpecJson {
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub zeta_order: u64,
    pub modulus: Vec<i64>,
}

/// The coefficient field K: ℚ(ζ_m) in characteristic 0, 𝔽_p(ζ_m) otherwise.
#[derive(Debug)]
pub struct FieldSpec {
    characteristic: u64,
    zeta_order: u64,
    modulus: Vec<i64>,
    degree: usize,
    // x^(degree + k) mod modulus, k = 0..degree-1
    overflow: Vec<Vec<i64>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.characteristic == other.characteristic
            && self.zeta_order == other.zeta_order
            && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds K containing a primitive m-th root of unity.
///
/// Characteristic 0 uses Φ_m as modulus. In characteristic p the modulus is
/// the least monic irreducible factor of Φ_m mod p, where factors are ordered
/// by the coefficient vector of the factor with its roots negated, constant
/// term first (for linear factors `x − r` this picks the least root `r`).
pub fn field_with_root_of_unity(characteristic: u64, m: u64) -> Result<Arc<FieldSpec>, ScalarError> {
    FieldSpec::new(characteristic, m).map(Arc::new)
}

impl FieldSpec {
    pub fn new(characteristic: u64, m: u64) -> Result<Self, ScalarError> {
        if m == 0 {
            return Err(ScalarError::ZeroOrder);
        }
        let phi = cyclotomic_polynomial(m);
        let modulus = if characteristic == 0 {
            phi
        } else {
            if !is_prime(characteristic) {
                return Err(ScalarError::NotPrime(characteristic));
            }
            if m.is_multiple_of(characteristic) {
                return Err(ScalarError::CharDividesOrder { p: characteristic, m });
            }
            let zp = Zp(characteristic);
            let reduced: Vec<u64> = phi.iter().map(|&c| zp.reduce_i64(c)).collect();
            let factors = upoly::berlekamp(&zp, &reduced);
            let key = |f: &Vec<u64>| -> Vec<u64> {
                let deg = f.len() - 1;
                f.iter()
                    .enumerate()
                    .map(|(i, &c)| if (deg - i) % 2 == 1 { zp.sub(&0, &c) } else { c })
                    .collect()
            };
            let min_deg = factors.iter().map(|f| f.len()).min().unwrap();
            let best = factors
                .into_iter()
                .filter(|f| f.len() == min_deg)
                .min_by_key(|f| key(f))
                .unwrap();
            best.into_iter().map(|c| c as i64).collect()
        };
        let degree = modulus.len() - 1;
        let mut spec = FieldSpec {
            characteristic,
            zeta_order: m,
            modulus,
            degree,
            overflow: Vec::new(),
        };
        spec.overflow = spec.build_overflow();
        Ok(spec)
    }

    fn build_overflow(&self) -> Vec<Vec<i64>> {
        let d = self.degree;
        let mut table = Vec::new();
        if d == 0 {
            return table;
        }
        // x^d ≡ -(m_0 + ... + m_{d-1} x^{d-1})
        let mut cur: Vec<i64> = self.modulus[..d].iter().map(|c| self.norm_int(-c)).collect();
        for _ in 0..d.saturating_sub(1) {
            table.push(cur.clone());
            // multiply by x
            let top = cur[d - 1];
            let mut next = vec![0i64; d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..d {
                next[i] = self.norm_int(next[i] - top * self.modulus[i]);
            }
            cur = next;
        }
        table
    }

    fn norm_int(&self, v: i64) -> i64 {
        if self.characteristic == 0 {
            v
        } else {
            v.rem_euclid(self.characteristic as i64)
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn zeta_order(&self) -> u64 {
        self.zeta_order
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// Degree of the modulus, i.e. the dimension over the prime field.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn to_json(&self) -> FieldSpecJson {
        FieldSpecJson {
            characteristic: self.characteristic,
            zeta_order: self.zeta_order,
            modulus: self.modulus.clone(),
        }
    }

    pub fn from_json(json: &FieldSpecJson) -> Result<Arc<FieldSpec>, ScalarError> {
        let spec = field_with_root_of_unity(json.characteristic, json.zeta_order)?;
        if spec.modulus != json.modulus {
            return Err(ScalarError::Parse(format!(
                "modulus {:?} does not match the canonical {:?}",
                json.modulus, spec.modulus
            )));
        }
        Ok(spec)
    }

    /// Short human-readable name such as `Q(zeta:4)` or `Fp:7(zeta:3)`.
    pub fn label(&self) -> String {
        let base = if self.characteristic == 0 {
            "Q".to_string()
        } else {
            format!("Fp:{}", self.characteristic)
        };
        if self.zeta_order <= 1 {
            base
        } else {
            format!("{base}(zeta:{})", self.zeta_order)
        }
    }

    /// Parses a selector in the format produced by [`FieldSpec::label`]:
    /// `Q`, `Q(zeta:4)`, `Fp:2`, `Fp:7(zeta:3)`.
    pub fn parse(selector: &str) -> Result<Arc<FieldSpec>, ScalarError> {
        let bad = || ScalarError::Parse(format!("field selector {selector:?}; expected Q, Q(zeta:m), Fp:p or Fp:p(zeta:m)"));
        let s = selector.trim();
        let (base, m) = match s.find('(') {
            Some(i) => {
                let inner = s[i..].strip_prefix("(zeta:").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
                (&s[..i], inner.trim().parse::<u64>().map_err(|_| bad())?)
            }
            None => (s, 1),
        };
        let characteristic = match base.trim() {
            "Q" => 0,
            b => b.strip_prefix("Fp:").and_then(|p| p.trim().parse::<u64>().ok()).ok_or_else(bad)?,
        };
        field_with_root_of_unity(characteristic, m)
    }

    /// Number of elements, for finite fields.
    pub fn size(&self) -> Option<u128> {
        (self.characteristic > 0).then(|| (self.characteristic as u128).pow(self.degree as u32))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Q(Vec<BigRational>),
    P(Vec<u64>),
}

/// An exact element of a [`FieldSpec`].
#[derive(Clone)]
pub struct Scalar {
    field: Arc<FieldSpec>,
    repr: Repr,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.repr == other.repr
    }
}

impl Eq for Scalar {}

fn same_field(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Convenience constructors living on the shared field handle.
pub trait FieldExt {
    fn zero(&self) -> Scalar;
    fn one(&self) -> Scalar;
    fn from_i64(&self, v: i64) -> Scalar;
    fn from_ratio(&self, num: i64, den: i64) -> Scalar;
    fn from_rational(&self, v: &BigRational) -> Scalar;
    /// The class of the indeterminate, a primitive m-th root of unity.
    fn zeta(&self) -> Scalar;
    fn from_coeff_strings(&self, coeffs: &[String]) -> Result<Scalar, ScalarError>;
    /// Small integer in {-2,…,2}, the sampling range of the randomised
    /// constructions.
    fn random_small<R: Rng>(&self, rng: &mut R) -> Scalar;
    /// An arbitrary element, for evaluation witnesses.
    fn random_element<R: Rng>(&self, rng: &mut R) -> Scalar;
}

impl FieldExt for Arc<FieldSpec> {
    fn zero(&self) -> Scalar {
        Scalar::zero_in(self)
    }

    fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    fn from_i64(&self, v: i64) -> Scalar {
        let mut s = Scalar::zero_in(self);
        match &mut s.repr {
            Repr::Q(c) => c[0] = BigRational::from_integer(BigInt::from(v)),
            Repr::P(c) => c[0] = Zp(self.characteristic).reduce_i64(v),
        }
        s
    }

    fn from_ratio(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        n.checked_mul(&d.inv().expect("denominator invertible in K"))
            .expect("same field")
    }

    fn from_rational(&self, v: &BigRational) -> Scalar {
        match self.characteristic {
            0 => {
                let mut s = Scalar::zero_in(self);
                if let Repr::Q(c) = &mut s.repr {
                    c[0] = v.clone();
                }
                s
            }
            p => {
                let pi = BigInt::from(p);
                let n = ((v.numer() % &pi + &pi) % &pi).to_i64().unwrap();
                let d = ((v.denom() % &pi + &pi) % &pi).to_i64().unwrap();
                self.from_ratio(n, d)
            }
        }
    }

    fn zeta(&self) -> Scalar {
        let d = self.degree;
        if d == 1 {
            // x ≡ -m_0
            let v = -self.modulus[0];
            return self.from_i64(v);
        }
        let mut s = Scalar::zero_in(self);
        match &mut s.repr {
            Repr::Q(c) => c[1] = BigRational::one(),
            Repr::P(c) => c[1] = 1,
        }
        s
    }

    fn from_coeff_strings(&self, coeffs: &[String]) -> Result<Scalar, ScalarError> {
        if coeffs.len() != self.degree {
            return Err(ScalarError::Parse(format!(
                "expected {} coefficients, found {}",
                self.degree,
                coeffs.len()
            )));
        }
        let mut s = Scalar::zero_in(self);
        match &mut s.repr {
            Repr::Q(c) => {
                for (slot, text) in c.iter_mut().zip(coeffs) {
                    *slot = parse_rational(text)?;
                }
            }
            Repr::P(c) => {
                let p = self.characteristic;
                for (slot, text) in c.iter_mut().zip(coeffs) {
                    let v: u64 = text
                        .trim()
                        .parse()
                        .map_err(|_| ScalarError::Parse(format!("bad residue {text:?}")))?;
                    if v >= p {
                        return Err(ScalarError::Parse(format!("residue {v} not reduced mod {p}")));
                    }
                    *slot = v;
                }
            }
        }
        Ok(s)
    }

    fn random_small<R: Rng>(&self, rng: &mut R) -> Scalar {
        self.from_i64(rng.gen_range(-2..=2))
    }

    fn random_element<R: Rng>(&self, rng: &mut R) -> Scalar {
        let mut s = Scalar::zero_in(self);
        match &mut s.repr {
            Repr::Q(c) => {
                for slot in c.iter_mut() {
                    *slot = BigRational::from_integer(BigInt::from(rng.gen_range(-97i64..=97)));
                }
            }
            Repr::P(c) => {
                let p = self.characteristic;
                for slot in c.iter_mut() {
                    *slot = rng.gen_range(0..p);
                }
            }
        }
        s
    }
}

fn parse_rational(text: &str) -> Result<BigRational, ScalarError> {
    let text = text.trim();
    let bad = || ScalarError::Parse(format!("bad rational {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

impl Scalar {
    fn zero_in(field: &Arc<FieldSpec>) -> Scalar {
        let d = field.degree;
        let repr = if field.characteristic == 0 {
            Repr::Q(vec![BigRational::zero(); d])
        } else {
            Repr::P(vec![0; d])
        };
        Scalar { field: field.clone(), repr }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Q(c) => c.iter().all(|x| x.is_zero()),
            Repr::P(c) => c.iter().all(|x| *x == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Q(c) => c[0].is_one() && c[1..].iter().all(|x| x.is_zero()),
            Repr::P(c) => c[0] == 1 && c[1..].iter().all(|x| *x == 0),
        }
    }

    /// True when the element lies in the prime field (only the constant
    /// coordinate is nonzero).
    pub fn is_rational(&self) -> bool {
        match &self.repr {
            Repr::Q(c) => c[1..].iter().all(|x| x.is_zero()),
            Repr::P(c) => c[1..].iter().all(|x| *x == 0),
        }
    }

    /// The constant coordinate as a rational, when the scalar is rational
    /// and the characteristic is 0.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Q(c) if self.is_rational() => Some(c[0].clone()),
            _ => None,
        }
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        match &self.repr {
            Repr::Q(c) => c.iter().map(|x| x.to_string()).collect(),
            Repr::P(c) => c.iter().map(|x| x.to_string()).collect(),
        }
    }

    fn check_field(&self, other: &Scalar) -> Result<(), ScalarError> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(ScalarError::MixedFields)
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check_field(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            (Repr::P(a), Repr::P(b)) => {
                let zp = Zp(self.field.characteristic);
                Repr::P(a.iter().zip(b).map(|(x, y)| zp.add(x, y)).collect())
            }
            _ => return Err(ScalarError::MixedFields),
        };
        Ok(Scalar { field: self.field.clone(), repr })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Scalar {
        let repr = match &self.repr {
            Repr::Q(a) => Repr::Q(a.iter().map(|x| -x).collect()),
            Repr::P(a) => {
                let zp = Zp(self.field.characteristic);
                Repr::P(a.iter().map(|x| zp.sub(&0, x)).collect())
            }
        };
        Scalar { field: self.field.clone(), repr }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check_field(other)?;
        let d = self.field.degree;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Q(a), Repr::Q(b)) => {
                if d == 1 {
                    Repr::Q(vec![&a[0] * &b[0]])
                } else {
                    Repr::Q(self.mul_rational(a, b))
                }
            }
            (Repr::P(a), Repr::P(b)) => {
                let zp = Zp(self.field.characteristic);
                if d == 1 {
                    Repr::P(vec![zp.mul(&a[0], &b[0])])
                } else {
                    let prod = schoolbook(&zp, a, b);
                    Repr::P(self.fold(&zp, prod, |v| v as u64))
                }
            }
            _ => return Err(ScalarError::MixedFields),
        };
        Ok(Scalar { field: self.field.clone(), repr })
    }

    /// Product over ℤ with one common denominator, normalized once per
    /// coefficient.
    fn mul_rational(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let (na, da) = integral(a);
        let (nb, db) = integral(b);
        let d = self.field.degree;
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in na.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in nb.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        for k in (0..prod.len().saturating_sub(d)).rev() {
            let c = std::mem::take(&mut prod[d + k]);
            if c.is_zero() {
                continue;
            }
            for (i, &v) in self.field.overflow[k].iter().enumerate() {
                if v != 0 {
                    prod[i] += &c * v;
                }
            }
        }
        prod.truncate(d);
        let den = da * db;
        prod.into_iter().map(|n| BigRational::new(n, den.clone())).collect()
    }

    fn fold<R: BaseRing>(&self, r: &R, mut prod: Vec<R::E>, lift: impl Fn(i64) -> R::E) -> Vec<R::E> {
        let d = self.field.degree;
        for k in (0..prod.len().saturating_sub(d)).rev() {
            let c = prod[d + k].clone();
            if r.is_zero(&c) {
                continue;
            }
            for (i, v) in self.field.overflow[k].iter().enumerate() {
                if *v != 0 {
                    prod[i] = r.add(&prod[i], &r.mul(&c, &lift(*v)));
                }
            }
        }
        prod.truncate(d);
        prod
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let d = self.field.degree;
        let repr = match &self.repr {
            Repr::Q(a) => {
                if a[1..].iter().all(|c| c.is_zero()) {
                    let mut s = vec![BigRational::zero(); d];
                    s[0] = a[0].recip();
                    Repr::Q(s)
                } else {
                    let r = Rationals;
                    let m: Vec<BigRational> = self
                        .field
                        .modulus
                        .iter()
                        .map(|&c| BigRational::from_integer(BigInt::from(c)))
                        .collect();
                    let mut s = upoly::xgcd_left(&r, a, &m).1;
                    s.resize(d, BigRational::zero());
                    Repr::Q(s)
                }
            }
            Repr::P(a) => {
                let zp = Zp(self.field.characteristic);
                if a[1..].iter().all(|&c| c == 0) {
                    let mut s = vec![0; d];
                    s[0] = zp.inv(&a[0]).unwrap();
                    Repr::P(s)
                } else {
                    let m: Vec<u64> = self.field.modulus.iter().map(|&c| c as u64).collect();
                    let mut s = upoly::xgcd_left(&zp, a, &m).1;
                    s.resize(d, 0);
                    Repr::P(s)
                }
            }
        };
        Ok(Scalar { field: self.field.clone(), repr })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_mul(&other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Result<Scalar, ScalarError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow_u(exp.unsigned_abs() as u128))
    }

    pub fn pow_u(&self, mut exp: u128) -> Scalar {
        let mut acc = self.field.one();
        let mut b = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &b;
            }
            exp >>= 1;
            if exp > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Multiplicative order, searched up to `bound`.
    pub fn multiplicative_order(&self, bound: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let one = self.field.one();
        let mut cur = self.clone();
        for k in 1..=bound {
            if cur == one {
                return Some(k);
            }
            cur = &cur * self;
        }
        None
    }

    /// Frobenius-free "sign" used by normalisation: for ℚ the sign of the
    /// first nonzero coordinate.
    pub fn leading_sign_negative(&self) -> bool {
        match &self.repr {
            Repr::Q(c) => c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()),
            Repr::P(_) => false,
        }
    }
}

/// Integer numerators over the least common denominator.
fn integral(a: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = a.iter().fold(BigInt::one(), |l, c| if c.denom().is_one() { l } else { l.lcm(c.denom()) });
    let nums = a
        .iter()
        .map(|c| if c.denom() == &den { c.numer().clone() } else { c.numer() * (&den / c.denom()) })
        .collect();
    (nums, den)
}

fn schoolbook<R: BaseRing>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if r.is_zero(y) {
                continue;
            }
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    out
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar operands from different fields")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar operands from different fields")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar operands from different fields")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeff_strings();
        let mut parts = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            if c == "0" {
                continue;
            }
            parts.push(match i {
                0 => c.clone(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(" + "))
        }
    }
}

/// An element of multiplicative order exactly `n`.
///
/// Uses ζ_m^{m/n} when n | m; otherwise searches the field's roots of unity
/// (ℚ(ζ_m) holds the roots of order dividing lcm(2, m); 𝔽_q holds those of
/// order dividing q − 1).
pub fn primitive_root(field: &Arc<FieldSpec>, n: u64) -> Result<Scalar, ScalarError> {
    if n == 0 {
        return Err(ScalarError::ZeroOrder);
    }
    let m = field.zeta_order;
    let candidate = if m.is_multiple_of(n) {
        Some(field.zeta().pow_u((m / n) as u128))
    } else if field.characteristic == 0 {
        let big = if m % 2 == 1 { 2 * m } else { m };
        if big % n == 0 {
            let root = if m % 2 == 1 { -field.zeta() } else { field.zeta() };
            Some(root.pow_u((big / n) as u128))
        } else {
            None
        }
    } else {
        search_finite_root(field, n)
    };
    let root = candidate.ok_or(ScalarError::NoPrimitiveRoot(n))?;
    if has_exact_order(&root, n) {
        Ok(root)
    } else {
        Err(ScalarError::NoPrimitiveRoot(n))
    }
}

fn has_exact_order(x: &Scalar, n: u64) -> bool {
    if !x.pow_u(n as u128).is_one() {
        return false;
    }
    prime_factors(n).into_iter().all(|l| !x.pow_u((n / l) as u128).is_one())
}

fn search_finite_root(field: &Arc<FieldSpec>, n: u64) -> Option<Scalar> {
    let q = field.size()?;
    if (q - 1) % n as u128 != 0 {
        return None;
    }
    let cofactor = (q - 1) / n as u128;
    let p = field.characteristic;
    let d = field.degree;
    // enumerate elements in lexicographic order of coordinates
    let mut coords = vec![0u64; d];
    loop {
        // advance
        let mut i = 0;
        loop {
            if i == d {
                return None;
            }
            coords[i] += 1;
            if coords[i] < p {
                break;
            }
            coords[i] = 0;
            i += 1;
        }
        let s = Scalar { field: field.clone(), repr: Repr::P(coords.clone()) };
        let c = s.pow_u(cofactor);
        if has_exact_order(&c, n) {
            return Some(c);
        }
    }
}
