//! Rational functions as normalized (numerator, denominator) pairs.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::poly::{Mono, MultiPoly, TermJson};
use super::{FuncError, VarSet};
use crate::scalars::{FieldExt, FieldSpec, Scalar};

// Opportunistic exact division is attempted only below these sizes.
const DIVISION_NUM_LIMIT: usize = 4096;
const DIVISION_DEN_LIMIT: usize = 64;

/// `num / den` with den ≠ 0 and den's leading graded-lex coefficient 1.
/// Common monomial factors are cancelled; no gcd is taken.
#[derive(Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFuncJson {
    pub num: Vec<TermJson>,
    pub den: Vec<TermJson>,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<RatFunc, FuncError> {
        num.compatible(&den)?;
        if den.is_zero() {
            return Err(FuncError::DivisionByZero);
        }
        normalize(num, den)
    }

    pub fn from_poly(p: MultiPoly) -> RatFunc {
        let den = MultiPoly::one(p.field(), p.vars());
        RatFunc { num: p, den }
    }

    pub fn zero(field: &Arc<FieldSpec>, vars: &VarSet) -> RatFunc {
        Self::from_poly(MultiPoly::zero(field, vars))
    }

    pub fn one(field: &Arc<FieldSpec>, vars: &VarSet) -> RatFunc {
        Self::from_poly(MultiPoly::one(field, vars))
    }

    pub fn constant(field: &Arc<FieldSpec>, vars: &VarSet, c: Scalar) -> RatFunc {
        Self::from_poly(MultiPoly::constant(field, vars, c))
    }

    pub fn var(field: &Arc<FieldSpec>, vars: &VarSet, i: usize) -> RatFunc {
        Self::from_poly(MultiPoly::var(field, vars, i))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.num.field()
    }

    pub fn vars(&self) -> &VarSet {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Total number of stored terms.
    pub fn size(&self) -> usize {
        self.num.nterms() + self.den.nterms()
    }

    /// Normalizes again; a no-op on already normalized values.
    pub fn normalized(&self) -> Result<RatFunc, FuncError> {
        normalize(self.num.clone(), self.den.clone())
    }

    pub fn add(&self, other: &RatFunc) -> Result<RatFunc, FuncError> {
        self.num.compatible(&other.num)?;
        if self.den == other.den {
            return normalize(self.num.add(&other.num)?, self.den.clone());
        }
        if other.is_polynomial() {
            return normalize(self.num.add(&other.num.mul(&self.den)?)?, self.den.clone());
        }
        if self.is_polynomial() {
            return normalize(other.num.add(&self.num.mul(&other.den)?)?, other.den.clone());
        }
        let n = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        normalize(n, self.den.mul(&other.den)?)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> Result<RatFunc, FuncError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> RatFunc {
        if s.is_zero() {
            return Self::zero(self.field(), self.vars());
        }
        RatFunc { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> Result<RatFunc, FuncError> {
        self.num.compatible(&other.num)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field(), self.vars()));
        }
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (other.num.clone(), other.den.clone());
        cross_cancel(&mut n1, &mut d2)?;
        cross_cancel(&mut n2, &mut d1)?;
        normalize(n1.mul(&n2)?, d1.mul(&d2)?)
    }

    pub fn inv(&self) -> Result<RatFunc, FuncError> {
        if self.is_zero() {
            return Err(FuncError::DivisionByZero);
        }
        normalize(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, FuncError> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc, FuncError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = u32::try_from(e.unsigned_abs()).map_err(|_| FuncError::TermCap { terms: usize::MAX, cap: 0 })?;
        Ok(RatFunc { num: base.num.pow(k)?, den: base.den.pow(k)? })
    }

    /// Exact equality: a.num·b.den = b.num·a.den. Evaluation at a couple of
    /// fixed pseudo-random points is used first to reject quickly.
    pub fn equals(&self, other: &RatFunc) -> Result<bool, FuncError> {
        self.num.compatible(&other.num)?;
        if self.num == other.num && self.den == other.den {
            return Ok(true);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9);
        let n = self.vars().len();
        for _ in 0..2 {
            let point: Vec<Scalar> = (0..n).map(|_| self.field().random_element(&mut rng)).collect();
            if let (Some(a), Some(b)) = (self.eval(&point), other.eval(&point)) {
                if a != b {
                    return Ok(false);
                }
            }
        }
        Ok(self.num.mul(&other.den)? == other.num.mul(&self.den)?)
    }

    /// Value at a point, or `None` when the denominator vanishes there.
    pub fn eval(&self, point: &[Scalar]) -> Option<Scalar> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(point) * &d.inv().ok()?)
    }

    /// Substitutes `images[i]` for variable i; the images live over `target`.
    pub fn substitute(&self, images: &[RatFunc], target: &VarSet) -> Result<RatFunc, FuncError> {
        if images.len() != self.vars().len() {
            return Err(FuncError::Arity { expected: self.vars().len(), found: images.len() });
        }
        if images.iter().all(|im| im.is_polynomial()) {
            let polys: Vec<MultiPoly> = images.iter().map(|im| im.num.clone()).collect();
            let n = self.num.substitute(&polys, target)?;
            let d = if self.den.is_one() {
                MultiPoly::one(self.field(), target)
            } else {
                self.den.substitute(&polys, target)?
            };
            if d.is_zero() {
                return Err(FuncError::ZeroDenominator);
            }
            return normalize(n, d);
        }
        let nvars = self.vars().len();
        let num_deg: Vec<u32> = (0..nvars).map(|i| self.num.degree_in(i)).collect();
        let den_deg: Vec<u32> = (0..nvars).map(|i| self.den.degree_in(i)).collect();
        let mut cache = PowerCache::new(images);
        let mut n = homogenized_substitute(&self.num, &num_deg, &mut cache, target)?;
        let mut d = homogenized_substitute(&self.den, &den_deg, &mut cache, target)?;
        for i in 0..nvars {
            if images[i].is_polynomial() {
                continue;
            }
            match num_deg[i].cmp(&den_deg[i]) {
                std::cmp::Ordering::Less => n = n.mul(cache.den_pow(i, den_deg[i] - num_deg[i])?)?,
                std::cmp::Ordering::Greater => d = d.mul(cache.den_pow(i, num_deg[i] - den_deg[i])?)?,
                std::cmp::Ordering::Equal => {}
            }
        }
        if d.is_zero() {
            return Err(FuncError::ZeroDenominator);
        }
        normalize(n, d)
    }

    /// Re-expresses the function over a larger varset whose variables start
    /// at `offset`.
    pub fn embed(&self, target: &VarSet, offset: usize) -> RatFunc {
        RatFunc { num: self.num.embed(target, offset), den: self.den.embed(target, offset) }
    }

    pub fn to_json(&self) -> RatFuncJson {
        RatFuncJson { num: self.num.to_json(), den: self.den.to_json() }
    }

    pub fn from_json(field: &Arc<FieldSpec>, vars: &VarSet, json: &RatFuncJson) -> Result<RatFunc, FuncError> {
        let num = MultiPoly::from_json(field, vars, &json.num)?;
        let den = MultiPoly::from_json(field, vars, &json.den)?;
        RatFunc::new(num, den)
    }
}

fn normalize(num: MultiPoly, den: MultiPoly) -> Result<RatFunc, FuncError> {
    if den.is_zero() {
        return Err(FuncError::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(RatFunc::zero(num.field(), num.vars()));
    }
    let (mut num, mut den) = (num, den);
    let g = num.monomial_content().gcd(&den.monomial_content());
    if !g.is_one() {
        num = num.div_monomial(&g);
        den = den.div_monomial(&g);
    }
    let lc = den.leading().unwrap().1.clone();
    if !lc.is_one() {
        let inv = lc.inv()?;
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    if !den.is_constant()
        && den.nterms() <= DIVISION_DEN_LIMIT
        && num.nterms() <= DIVISION_NUM_LIMIT
        && num.total_degree() >= den.total_degree()
    {
        if let Some(q) = num.div_exact(&den)? {
            return Ok(RatFunc::from_poly(q));
        }
    }
    Ok(RatFunc { num, den })
}

/// Cancels `d` against `n` when d divides n exactly.
fn cross_cancel(n: &mut MultiPoly, d: &mut MultiPoly) -> Result<(), FuncError> {
    if d.is_constant() || d.nterms() > DIVISION_DEN_LIMIT || n.nterms() > DIVISION_NUM_LIMIT {
        return Ok(());
    }
    if n == d {
        *n = MultiPoly::one(n.field(), n.vars());
        *d = n.clone();
        return Ok(());
    }
    if n.total_degree() >= d.total_degree() {
        if let Some(q) = n.div_exact(d)? {
            *n = q;
            *d = MultiPoly::one(d.field(), d.vars());
        }
    }
    Ok(())
}

struct PowerCache<'a> {
    images: &'a [RatFunc],
    num: Vec<Vec<MultiPoly>>,
    den: Vec<Vec<MultiPoly>>,
}

impl<'a> PowerCache<'a> {
    fn new(images: &'a [RatFunc]) -> Self {
        let n = images.len();
        PowerCache { images, num: vec![Vec::new(); n], den: vec![Vec::new(); n] }
    }

    fn grow(list: &mut Vec<MultiPoly>, base: &MultiPoly, e: u32) -> Result<(), FuncError> {
        if list.is_empty() {
            list.push(MultiPoly::one(base.field(), base.vars()));
        }
        while list.len() <= e as usize {
            let next = list.last().unwrap().mul(base)?;
            list.push(next);
        }
        Ok(())
    }

    fn num_pow(&mut self, i: usize, e: u32) -> Result<&MultiPoly, FuncError> {
        Self::grow(&mut self.num[i], &self.images[i].num, e)?;
        Ok(&self.num[i][e as usize])
    }

    fn den_pow(&mut self, i: usize, e: u32) -> Result<&MultiPoly, FuncError> {
        Self::grow(&mut self.den[i], &self.images[i].den, e)?;
        Ok(&self.den[i][e as usize])
    }
}

/// Σ c_m ∏ numᵢ^{mᵢ} denᵢ^{Dᵢ−mᵢ}, i.e. p(images)·∏ denᵢ^{Dᵢ}.
fn homogenized_substitute(
    p: &MultiPoly,
    degs: &[u32],
    cache: &mut PowerCache<'_>,
    target: &VarSet,
) -> Result<MultiPoly, FuncError> {
    let field = p.field().clone();
    let mut acc = MultiPoly::zero(&field, target);
    for (m, c) in p.terms() {
        let mut t = MultiPoly::constant(&field, target, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(cache.num_pow(i, e)?)?;
            }
            if !cache.images[i].is_polynomial() && degs[i] > e {
                t = t.mul(cache.den_pow(i, degs[i] - e)?)?;
            }
        }
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Helper used by tests and parsers: the monomial x^e as a rational function.
pub fn monomial(field: &Arc<FieldSpec>, vars: &VarSet, exps: Vec<u32>) -> RatFunc {
    RatFunc::from_poly(MultiPoly::monomial(field, vars, Mono(exps), field.one()))
}
