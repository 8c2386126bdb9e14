//! Sparse multivariate polynomials with dense exponent vectors.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FuncError, VarSet};
use crate::scalars::{FieldExt, FieldSpec, Scalar};

/// Default bound on the number of terms of any intermediate polynomial.
pub const DEFAULT_TERM_CAP: usize = 200_000;

thread_local! {
    static TERM_CAP: Cell<usize> = const { Cell::new(DEFAULT_TERM_CAP) };
}

pub fn term_cap() -> usize {
    TERM_CAP.with(|c| c.get())
}

/// Sets the term cap for the current thread and returns the previous value.
pub fn set_term_cap(cap: usize) -> usize {
    TERM_CAP.with(|c| c.replace(cap.max(1)))
}

fn check_cap(terms: usize) -> Result<(), FuncError> {
    let cap = term_cap();
    if terms > cap {
        Err(FuncError::TermCap { terms, cap })
    } else {
        Ok(())
    }
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn gcd(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial over K in the variables of a [`VarSet`]; terms are kept
/// sorted in decreasing graded-lex order with no zero coefficients.
#[derive(Clone)]
pub struct MultiPoly {
    field: Arc<FieldSpec>,
    vars: VarSet,
    terms: Vec<(Mono, Scalar)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: Vec<String>,
    pub exps: Vec<u32>,
}

impl MultiPoly {
    pub fn zero(field: &Arc<FieldSpec>, vars: &VarSet) -> Self {
        MultiPoly { field: field.clone(), vars: vars.clone(), terms: Vec::new() }
    }

    pub fn constant(field: &Arc<FieldSpec>, vars: &VarSet, c: Scalar) -> Self {
        let mut p = Self::zero(field, vars);
        if !c.is_zero() {
            p.terms.push((Mono::one(vars.len()), c));
        }
        p
    }

    pub fn one(field: &Arc<FieldSpec>, vars: &VarSet) -> Self {
        Self::constant(field, vars, field.one())
    }

    pub fn var(field: &Arc<FieldSpec>, vars: &VarSet, i: usize) -> Self {
        MultiPoly { field: field.clone(), vars: vars.clone(), terms: vec![(Mono::var(vars.len(), i), field.one())] }
    }

    pub fn monomial(field: &Arc<FieldSpec>, vars: &VarSet, exps: Mono, c: Scalar) -> Self {
        let mut p = Self::zero(field, vars);
        if !c.is_zero() {
            p.terms.push((exps, c));
        }
        p
    }

    /// Builds from arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(field: &Arc<FieldSpec>, vars: &VarSet, terms: Vec<(Mono, Scalar)>) -> Self {
        let mut map: HashMap<Mono, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(acc) => *acc = &*acc + &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::from_map(field, vars, map)
    }

    fn from_map(field: &Arc<FieldSpec>, vars: &VarSet, map: HashMap<Mono, Scalar>) -> Self {
        let mut terms: Vec<(Mono, Scalar)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { field: field.clone(), vars: vars.clone(), terms }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> &[(Mono, Scalar)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(self.field.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Mono, Scalar)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[i]).max().unwrap_or(0)
    }

    /// Variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.terms.iter().any(|(m, _)| m.0[i] > 0)).collect()
    }

    pub(crate) fn compatible(&self, other: &MultiPoly) -> Result<(), FuncError> {
        if self.vars != other.vars {
            return Err(FuncError::MixedVarSets(self.vars.name().into(), other.vars.name().into()));
        }
        if *self.field != *other.field {
            return Err(FuncError::Scalar(crate::scalars::ScalarError::MixedFields));
        }
        Ok(())
    }

    fn merge(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &self.terms[i].1 - &other.terms[j].1
                    } else {
                        &self.terms[i].1 + &other.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MultiPoly { field: self.field.clone(), vars: self.vars.clone(), terms: out }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, FuncError> {
        self.compatible(other)?;
        let r = self.merge(other, false);
        check_cap(r.nterms())?;
        Ok(r)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, FuncError> {
        self.compatible(other)?;
        let r = self.merge(other, true);
        check_cap(r.nterms())?;
        Ok(r)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        if s.is_zero() {
            return Self::zero(&self.field, &self.vars);
        }
        MultiPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Multiplies by the monomial `c·x^m`.
    pub fn mul_term(&self, m: &Mono, c: &Scalar) -> MultiPoly {
        MultiPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, FuncError> {
        self.compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field, &self.vars));
        }
        if other.terms.len() == 1 {
            return Ok(self.mul_term(&other.terms[0].0, &other.terms[0].1));
        }
        if self.terms.len() == 1 {
            return Ok(other.mul_term(&self.terms[0].0, &self.terms[0].1));
        }
        let bound = self.terms.len().saturating_mul(other.terms.len());
        let mut map: HashMap<Mono, Scalar> = HashMap::with_capacity(bound.min(1 << 16));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match map.get_mut(&m) {
                    Some(acc) => *acc = &*acc + &c,
                    None => {
                        map.insert(m, c);
                    }
                }
            }
            check_cap(map.len())?;
        }
        Ok(Self::from_map(&self.field, &self.vars, map))
    }

    pub fn pow(&self, mut e: u32) -> Result<MultiPoly, FuncError> {
        if self.is_monomial() {
            let (m, c) = &self.terms[0];
            let exps = Mono(m.0.iter().map(|v| v * e).collect());
            return Ok(Self::monomial(&self.field, &self.vars, exps, c.pow_u(e as u128)));
        }
        let mut acc = Self::one(&self.field, &self.vars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact quotient `self / d` when d divides self, else `None`.
    pub fn div_exact(&self, d: &MultiPoly) -> Result<Option<MultiPoly>, FuncError> {
        self.compatible(d)?;
        if d.is_zero() {
            return Err(FuncError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Some(Self::zero(&self.field, &self.vars)));
        }
        let dc_inv = d.terms[0].1.inv()?;
        self.div_exact_by(d, &dc_inv)
    }

    /// [`MultiPoly::div_exact`] with the inverse of `d`'s leading coefficient supplied.
    pub(crate) fn div_exact_by(&self, d: &MultiPoly, dc_inv: &Scalar) -> Result<Option<MultiPoly>, FuncError> {
        if self.is_zero() {
            return Ok(Some(Self::zero(&self.field, &self.vars)));
        }
        let dm = d.terms[0].0.clone();
        if d.terms.len() == 1 {
            if !self.terms.iter().all(|(m, _)| dm.divides(m)) {
                return Ok(None);
            }
            let terms = self.terms.iter().map(|(m, c)| (dm.quotient_of(m), c * dc_inv)).collect();
            return Ok(Some(MultiPoly { field: self.field.clone(), vars: self.vars.clone(), terms }));
        }
        if self.total_degree() < d.total_degree() {
            return Ok(None);
        }
        let mut rem: BTreeMap<Mono, Scalar> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !dm.divides(&m) {
                return Ok(None);
            }
            let qm = dm.quotient_of(&m);
            let qc = &c * dc_inv;
            for (tm, tc) in &d.terms[1..] {
                let key = tm.mul(&qm);
                let delta = tc * &qc;
                match rem.get_mut(&key) {
                    Some(v) => {
                        let nv = &*v - &delta;
                        if nv.is_zero() {
                            rem.remove(&key);
                        } else {
                            *v = nv;
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.push((qm, qc));
            check_cap(rem.len() + quot.len())?;
        }
        Ok(Some(MultiPoly { field: self.field.clone(), vars: self.vars.clone(), terms: quot }))
    }

    /// Largest monomial dividing every term (the unit monomial for zero).
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.iter();
        match it.next() {
            None => Mono::one(self.vars.len()),
            Some((m, _)) => it.fold(m.clone(), |acc, (t, _)| acc.gcd(t)),
        }
    }

    pub fn div_monomial(&self, m: &Mono) -> MultiPoly {
        MultiPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, c)| (m.quotient_of(t), c.clone())).collect(),
        }
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        let n = self.vars.len();
        let mut powers: Vec<Vec<Scalar>> = vec![Vec::new(); n];
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                if pw.is_empty() {
                    pw.push(self.field.one());
                }
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &point[i];
                    pw.push(next);
                }
                t = &t * &pw[e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes polynomial images (over a common target varset) for the
    /// variables.
    pub fn substitute(&self, images: &[MultiPoly], target: &VarSet) -> Result<MultiPoly, FuncError> {
        if images.len() != self.vars.len() {
            return Err(FuncError::Arity { expected: self.vars.len(), found: images.len() });
        }
        if images.iter().all(|p| p.terms.len() <= 1) {
            return self.substitute_monomial(images, target);
        }
        let n = self.vars.len();
        let mut cache: Vec<Vec<MultiPoly>> = vec![Vec::new(); n];
        let mut acc: HashMap<Mono, Scalar> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&self.field, target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut cache[i];
                if pw.is_empty() {
                    pw.push(MultiPoly::one(&self.field, target));
                }
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap().mul(&images[i])?;
                    pw.push(next);
                }
                t = t.mul(&pw[e as usize])?;
                if t.is_zero() {
                    break;
                }
            }
            for (tm, tc) in t.terms {
                match acc.get_mut(&tm) {
                    Some(v) => *v = &*v + &tc,
                    None => {
                        acc.insert(tm, tc);
                    }
                }
            }
            check_cap(acc.len())?;
        }
        Ok(Self::from_map(&self.field, target, acc))
    }

    fn substitute_monomial(&self, images: &[MultiPoly], target: &VarSet) -> Result<MultiPoly, FuncError> {
        let nt = target.len();
        let mut terms = Vec::with_capacity(self.terms.len());
        'outer: for (m, c) in &self.terms {
            let mut exps = vec![0u32; nt];
            let mut coeff = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match images[i].terms.first() {
                    None => continue 'outer,
                    Some((im, ic)) => {
                        for (slot, v) in exps.iter_mut().zip(&im.0) {
                            *slot += v * e;
                        }
                        if !ic.is_one() {
                            coeff = &coeff * &ic.pow_u(e as u128);
                        }
                    }
                }
            }
            terms.push((Mono(exps), coeff));
        }
        Ok(Self::from_terms(&self.field, target, terms))
    }

    /// Reinterprets the polynomial over a varset whose first variables are
    /// this one's (in order).
    pub fn embed(&self, target: &VarSet, offset: usize) -> MultiPoly {
        let nt = target.len();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; nt];
                e[offset..offset + m.0.len()].copy_from_slice(&m.0);
                (Mono(e), c.clone())
            })
            .collect::<Vec<_>>();
        let mut p = MultiPoly { field: self.field.clone(), vars: target.clone(), terms };
        p.terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        p
    }

    /// When the polynomial is affine in the variables `xs` (degree ≤ 1 jointly),
    /// returns the coefficient polynomials of each x and the x-free part.
    pub fn split_affine(&self, xs: &[usize]) -> Option<(Vec<MultiPoly>, MultiPoly)> {
        let mut coeffs: Vec<Vec<(Mono, Scalar)>> = vec![Vec::new(); xs.len()];
        let mut rest = Vec::new();
        for (m, c) in &self.terms {
            let xdeg: u32 = xs.iter().map(|&i| m.0[i]).sum();
            match xdeg {
                0 => rest.push((m.clone(), c.clone())),
                1 => {
                    let k = xs.iter().position(|&i| m.0[i] == 1).unwrap();
                    let mut e = m.clone();
                    e.0[xs[k]] = 0;
                    coeffs[k].push((e, c.clone()));
                }
                _ => return None,
            }
        }
        let build = |t: Vec<(Mono, Scalar)>| MultiPoly::from_terms(&self.field, &self.vars, t);
        Some((coeffs.into_iter().map(build).collect(), build(rest)))
    }

    /// Coefficients of a homogeneous linear form, one per variable.
    pub fn linear_coeffs(&self) -> Option<Vec<Scalar>> {
        let mut out = vec![self.field.zero(); self.vars.len()];
        for (m, c) in &self.terms {
            if m.degree() != 1 {
                return None;
            }
            let i = m.0.iter().position(|&e| e == 1).unwrap();
            out[i] = c.clone();
        }
        Some(out)
    }

    /// The linear form Σ cᵢ xᵢ.
    pub fn linear_form(field: &Arc<FieldSpec>, vars: &VarSet, coeffs: &[Scalar]) -> MultiPoly {
        let n = vars.len();
        let mut terms: Vec<(Mono, Scalar)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Mono::var(n, i), c.clone()))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { field: field.clone(), vars: vars.clone(), terms }
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson { coeff: c.coeff_strings(), exps: m.0.clone() })
            .collect()
    }

    pub fn from_json(field: &Arc<FieldSpec>, vars: &VarSet, terms: &[TermJson]) -> Result<MultiPoly, FuncError> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            if t.exps.len() != vars.len() {
                return Err(FuncError::Parse(format!(
                    "exponent vector of length {} for {} variables",
                    t.exps.len(),
                    vars.len()
                )));
            }
            out.push((Mono(t.exps.clone()), field.from_coeff_strings(&t.coeff)?));
        }
        Ok(Self::from_terms(field, vars, out))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut factors = Vec::new();
                for (i, &e) in m.0.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(self.vars.label(i).to_string()),
                        _ => factors.push(format!("{}^{e}", self.vars.label(i))),
                    }
                }
                if factors.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    factors.join("*")
                } else {
                    format!("{c}*{}", factors.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
