//! Invariants of semi-affine actions σ(x) = A(σ)x + B(σ) over a field L on
//! which the group also acts: cocycle trivialization producing invariant
//! coordinates z = Px + q, trace-one elements, and least-degree invariants
//! in a single variable.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::funcfield::{linalg, monomial, FuncError, GroupAction, MultiPoly, RatFunc, VarSet};
use crate::groups::FiniteGroup;
use crate::oracle::{self, OracleError};
use crate::scalars::{FieldExt, FieldSpec};

pub const DEFAULT_MAX_RETRIES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescentError {
    #[error("the action on L is not faithful (kernel of order {0})")]
    NotFaithful(usize),
    #[error("retry cap {cap} exhausted (seed {seed})")]
    RetriesExhausted { seed: u64, cap: usize },
    #[error("action on variable {0} is not semi-affine over L")]
    NotSemiAffine(String),
    #[error("cocycle condition fails for ({0},{1})")]
    Cocycle(usize, usize),
    #[error("A({0}) is singular")]
    Singular(usize),
    #[error("expected exactly one x variable, found {0}")]
    NotOneVariable(usize),
    #[error("invariant check failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl DescentError {
    pub fn is_resource(&self) -> bool {
        match self {
            DescentError::Func(e) => e.is_resource(),
            DescentError::Oracle(OracleError::Func(e)) => e.is_resource(),
            _ => false,
        }
    }
}

/// A group acting on L(x₁…xₙ) with L = K(l-variables) stable and
/// σ(x) = A(σ)x + B(σ), A(σ) ∈ GLₙ(L), B(σ) ∈ Lⁿ.
#[derive(Clone, Debug)]
pub struct SemiAffineSetup {
    action: GroupAction,
    l_indices: Vec<usize>,
    x_indices: Vec<usize>,
    a: Vec<Vec<Vec<RatFunc>>>,
    b: Vec<Vec<RatFunc>>,
}

impl SemiAffineSetup {
    /// Extracts A and B from a verified action and checks
    /// A(στ) = σ(A(τ))·A(σ), B(στ) = σ(A(τ))·B(σ) + σ(B(τ)) on all pairs.
    pub fn from_action(action: GroupAction, l_indices: &[usize], x_indices: &[usize]) -> Result<Self, DescentError> {
        let nv = action.vars().len();
        let mut seen = vec![false; nv];
        for &i in l_indices.iter().chain(x_indices) {
            if i >= nv || seen[i] {
                return Err(DescentError::NotSemiAffine("index sets must partition the variables".into()));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(DescentError::NotSemiAffine("index sets must partition the variables".into()));
        }
        let free_of_x = |f: &RatFunc| x_indices.iter().all(|&x| f.num().degree_in(x) == 0 && f.den().degree_in(x) == 0);
        let mut a = Vec::with_capacity(action.group().order());
        let mut b = Vec::with_capacity(action.group().order());
        for s in action.group().elements() {
            let imgs = action.images(s);
            for &l in l_indices {
                if !free_of_x(&imgs[l]) {
                    return Err(DescentError::NotSemiAffine(action.vars().label(l).to_string()));
                }
            }
            let lin = oracle::affine_linear_part(&x_indices.iter().map(|&x| imgs[x].clone()).collect::<Vec<_>>(), x_indices)
                .map_err(|_| DescentError::NotSemiAffine(format!("image under element {s}")))?;
            let mut bs = Vec::with_capacity(x_indices.len());
            for (row, &x) in x_indices.iter().enumerate() {
                let mut rest = imgs[x].clone();
                for (col, &xc) in x_indices.iter().enumerate() {
                    rest = rest.sub(&lin[row][col].mul(&RatFunc::var(action.field(), action.vars(), xc))?)?;
                }
                if lin[row].iter().any(|c| !free_of_x(c)) || !free_of_x(&rest) {
                    return Err(DescentError::NotSemiAffine(action.vars().label(x).to_string()));
                }
                bs.push(rest);
            }
            if !x_indices.is_empty() && linalg::determinant(&lin)?.is_zero() {
                return Err(DescentError::Singular(s));
            }
            a.push(lin);
            b.push(bs);
        }
        let setup = SemiAffineSetup { action, l_indices: l_indices.to_vec(), x_indices: x_indices.to_vec(), a, b };
        setup.check_cocycle()?;
        Ok(setup)
    }

    /// Builds the action from per-generator data (A, B, images of the
    /// L-variables in order of `l_indices`) and extracts the setup.
    #[allow(clippy::type_complexity)]
    pub fn from_generators(
        group: &FiniteGroup,
        field: &Arc<FieldSpec>,
        vars: &VarSet,
        l_indices: &[usize],
        x_indices: &[usize],
        gens: &[(usize, Vec<Vec<RatFunc>>, Vec<RatFunc>, Vec<RatFunc>)],
    ) -> Result<Self, DescentError> {
        let mut full = Vec::with_capacity(gens.len());
        for (g, a, b, l_images) in gens {
            let mut base: Vec<RatFunc> = (0..vars.len()).map(|i| RatFunc::var(field, vars, i)).collect();
            if l_images.len() != l_indices.len() {
                return Err(FuncError::Arity { expected: l_indices.len(), found: l_images.len() }.into());
            }
            for (&l, img) in l_indices.iter().zip(l_images) {
                base[l] = img.clone();
            }
            full.push((*g, a.clone(), b.clone(), base));
        }
        let action = GroupAction::linear_from_matrices(group, field, vars, x_indices, &full)?;
        Self::from_action(action, l_indices, x_indices)
    }

    fn check_cocycle(&self) -> Result<(), DescentError> {
        if self.n() == 0 {
            return Ok(());
        }
        let g = self.action.group();
        for s in g.elements() {
            for t in g.elements() {
                let st = g.mul(s, t);
                let sat = self.act_matrix(s, &self.a[t])?;
                let lhs = linalg::mat_mul(&sat, &self.a[s])?;
                let bsum = mat_vec(&sat, &self.b[s])?;
                for i in 0..self.n() {
                    for j in 0..self.n() {
                        if !lhs[i][j].equals(&self.a[st][i][j])? {
                            return Err(DescentError::Cocycle(s, t));
                        }
                    }
                    let rhs = bsum[i].add(&self.action.act(s, &self.b[t][i])?)?;
                    if !rhs.equals(&self.b[st][i])? {
                        return Err(DescentError::Cocycle(s, t));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.action.field()
    }

    pub fn vars(&self) -> &VarSet {
        self.action.vars()
    }

    pub fn l_indices(&self) -> &[usize] {
        &self.l_indices
    }

    pub fn x_indices(&self) -> &[usize] {
        &self.x_indices
    }

    pub fn n(&self) -> usize {
        self.x_indices.len()
    }

    pub fn a(&self, sigma: usize) -> &[Vec<RatFunc>] {
        &self.a[sigma]
    }

    pub fn b(&self, sigma: usize) -> &[RatFunc] {
        &self.b[sigma]
    }

    /// Elements acting trivially on every L-variable.
    pub fn base_kernel(&self) -> Result<Vec<usize>, DescentError> {
        let mut out = Vec::new();
        'elems: for s in self.group().elements() {
            for &l in &self.l_indices {
                if !self.action.images(s)[l].equals(&self.var(l))? {
                    continue 'elems;
                }
            }
            out.push(s);
        }
        Ok(out)
    }

    fn var(&self, i: usize) -> RatFunc {
        RatFunc::var(self.field(), self.vars(), i)
    }

    fn act_matrix(&self, s: usize, m: &[Vec<RatFunc>]) -> Result<Vec<Vec<RatFunc>>, DescentError> {
        m.iter()
            .map(|row| row.iter().map(|e| self.action.act(s, e).map_err(Into::into)).collect())
            .collect()
    }

    fn require_faithful(&self) -> Result<(), DescentError> {
        let k = self.base_kernel()?;
        if k.len() != 1 {
            return Err(DescentError::NotFaithful(k.len()));
        }
        Ok(())
    }

    /// Random element c₁m₁ + c₂m₂ with nonzero cᵢ ∈ {±1,±2} and mᵢ
    /// L-monomials of degree at most `max_deg`.
    fn random_entry(&self, rng: &mut ChaCha8Rng, max_deg: u32) -> RatFunc {
        let mut acc = RatFunc::zero(self.field(), self.vars());
        for _ in 0..2 {
            let c = loop {
                let c = self.field().random_small(rng);
                if !c.is_zero() {
                    break c;
                }
            };
            let mono = random_l_monomial(self.field(), self.vars(), &self.l_indices, rng, max_deg);
            acc = acc.add(&mono.scale(&c)).expect("same variable set");
        }
        acc
    }
}

fn random_l_monomial(
    field: &Arc<FieldSpec>,
    vars: &VarSet,
    l_indices: &[usize],
    rng: &mut ChaCha8Rng,
    max_deg: u32,
) -> RatFunc {
    let mut exps = vec![0u32; vars.len()];
    if !l_indices.is_empty() {
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            exps[l_indices[rng.gen_range(0..l_indices.len())]] += 1;
        }
    }
    monomial(field, vars, exps)
}

fn mat_vec(m: &[Vec<RatFunc>], v: &[RatFunc]) -> Result<Vec<RatFunc>, FuncError> {
    m.iter()
        .map(|row| {
            let mut acc = RatFunc::zero(v[0].field(), v[0].vars());
            for (a, x) in row.iter().zip(v) {
                if !a.is_zero() && !x.is_zero() {
                    acc = acc.add(&a.mul(x)?)?;
                }
            }
            Ok(acc)
        })
        .collect()
}

fn degree_cap(attempt: usize, order: usize) -> u32 {
    (1 + attempt / 4).min(order.max(1)) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrivializationMethod {
    /// P = Σ τ(R)A(τ), q = Σ τ(R)B(τ).
    Averaging,
    /// P as above, then q = Σ τ(θ)·τ(P)B(τ) with Σ σ(θ) = 1.
    TraceOne,
}

/// Invariant coordinates z = Px + q with L(z) = L(x).
#[derive(Clone, Debug)]
pub struct Trivialization {
    pub z: Vec<RatFunc>,
    /// [[P, q], [0, 1]].
    pub p: Vec<Vec<RatFunc>>,
    pub theta: Option<RatFunc>,
    pub method: TrivializationMethod,
    pub seed: u64,
    pub retries: usize,
}

/// Finds z₁…zₙ, affine in x over L, fixed by every group element.
pub fn trivialize_action(setup: &SemiAffineSetup, seed: u64, max_retries: usize) -> Result<Trivialization, DescentError> {
    setup.require_faithful()?;
    let n = setup.n();
    let field = setup.field().clone();
    let vars = setup.vars().clone();
    let order = setup.group().order();
    let char_divides = field.characteristic() != 0 && (order as u64).is_multiple_of(field.characteristic());
    let method = if char_divides { TrivializationMethod::TraceOne } else { TrivializationMethod::Averaging };
    let zero = RatFunc::zero(&field, &vars);
    if n == 0 {
        return Ok(Trivialization {
            z: Vec::new(),
            p: vec![vec![RatFunc::one(&field, &vars)]],
            theta: None,
            method,
            seed,
            retries: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut det_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bd1_e995);
    for attempt in 0..max_retries {
        let max_deg = degree_cap(attempt, order);
        let r: Vec<Vec<RatFunc>> = if attempt == 0 {
            (0..n).map(|i| (0..n).map(|j| if i == j { RatFunc::one(&field, &vars) } else { zero.clone() }).collect()).collect()
        } else {
            (0..n).map(|_| (0..n).map(|_| setup.random_entry(&mut rng, max_deg)).collect()).collect()
        };
        let mut p = vec![vec![zero.clone(); n]; n];
        let mut q = vec![zero.clone(); n];
        for t in setup.group().elements() {
            let tr = setup.act_matrix(t, &r)?;
            let tra = linalg::mat_mul(&tr, setup.a(t))?;
            let trb = mat_vec(&tr, setup.b(t))?;
            for i in 0..n {
                for j in 0..n {
                    p[i][j] = p[i][j].add(&tra[i][j])?;
                }
                q[i] = q[i].add(&trb[i])?;
            }
        }
        if !linalg::determinant_is_nonzero(&p, &mut det_rng, 4)? {
            continue;
        }
        let mut theta = None;
        if method == TrivializationMethod::TraceOne {
            let th = trace_one_element(setup.action(), setup.l_indices(), seed, max_retries)?;
            q = vec![zero.clone(); n];
            for t in setup.group().elements() {
                let tp = setup.act_matrix(t, &p)?;
                let bprime = mat_vec(&tp, setup.b(t))?;
                let tth = setup.action().act(t, &th)?;
                for i in 0..n {
                    q[i] = q[i].add(&tth.mul(&bprime[i])?)?;
                }
            }
            theta = Some(th);
        }
        let mut z = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = q[i].clone();
            for (j, &x) in setup.x_indices().iter().enumerate() {
                if !p[i][j].is_zero() {
                    acc = acc.add(&p[i][j].mul(&setup.var(x))?)?;
                }
            }
            z.push(acc);
        }
        for (i, zi) in z.iter().enumerate() {
            if !oracle::check_invariant(zi, setup.action())? {
                return Err(DescentError::Verification(format!("z[{i}] is not invariant")));
            }
        }
        if !oracle::check_generates_affine(&z, setup.x_indices())? {
            continue;
        }
        let mut ptilde: Vec<Vec<RatFunc>> = p
            .into_iter()
            .zip(q)
            .map(|(mut row, qi)| {
                row.push(qi);
                row
            })
            .collect();
        let mut last = vec![zero.clone(); n];
        last.push(RatFunc::one(&field, &vars));
        ptilde.push(last);
        return Ok(Trivialization { z, p: ptilde, theta, method, seed, retries: attempt });
    }
    Err(DescentError::RetriesExhausted { seed, cap: max_retries })
}

/// θ/s for s = Σ σ(θ) when s ≠ 0.
pub fn normalize_trace(action: &GroupAction, theta0: &RatFunc) -> Result<Option<RatFunc>, DescentError> {
    let mut s = RatFunc::zero(action.field(), action.vars());
    for g in action.group().elements() {
        s = s.add(&action.act(g, theta0)?)?;
    }
    if s.is_zero() {
        return Ok(None);
    }
    Ok(Some(theta0.div(&s)?))
}

/// θ in L with Σ_σ σ(θ) = 1; candidates are 1 followed by random
/// L-monomials of growing degree.
pub fn trace_one_element(
    action: &GroupAction,
    l_indices: &[usize],
    seed: u64,
    max_retries: usize,
) -> Result<RatFunc, DescentError> {
    let field = action.field();
    let vars = action.vars();
    let mut kernel = 0;
    for s in action.group().elements() {
        let mut fixes = true;
        for &l in l_indices {
            if !action.images(s)[l].equals(&RatFunc::var(field, vars, l))? {
                fixes = false;
                break;
            }
        }
        kernel += fixes as usize;
    }
    if kernel != 1 {
        return Err(DescentError::NotFaithful(kernel));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7f4a_7c15);
    let order = action.group().order();
    for attempt in 0..max_retries {
        let theta0 = if attempt == 0 {
            RatFunc::one(field, vars)
        } else {
            let m = random_l_monomial(field, vars, l_indices, &mut rng, degree_cap(attempt, order));
            if m.as_constant().is_some() {
                continue;
            }
            m
        };
        if let Some(theta) = normalize_trace(action, &theta0)? {
            return Ok(theta);
        }
    }
    Err(DescentError::RetriesExhausted { seed, cap: max_retries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelStrategy {
    /// The kernel acts trivially on x: y = x.
    Trivial,
    /// The kernel acts by a character of order d: y = x^d.
    Character,
    /// General affine kernel action: y = product of the distinct images of x.
    OrbitProduct,
}

/// A G-invariant f ∈ L[x] of least possible x-degree.
#[derive(Clone, Debug)]
pub struct MinimalInvariant {
    pub f: RatFunc,
    pub degree: u32,
    pub minimality_certified: bool,
    /// Elements acting trivially on L.
    pub kernel: Vec<usize>,
    /// Number of distinct affine maps induced on x by the kernel.
    pub kernel_effective: usize,
    pub strategy: KernelStrategy,
    pub seed: u64,
    pub retries: usize,
}

/// Least-degree invariant polynomial in the single x-variable of `setup`.
///
/// With N the kernel of the action on L and d the number of distinct
/// affine maps N induces on x, L(x)^N = L(y) for an N-invariant y of
/// x-degree d, so every G-invariant has degree divisible by d. Summing
/// σ(r·y) over coset representatives of G/N gives an invariant whose
/// degree is exactly d for suitable r ∈ L.
pub fn minimal_invariant(setup: &SemiAffineSetup, seed: u64, max_retries: usize) -> Result<MinimalInvariant, DescentError> {
    if setup.n() != 1 {
        return Err(DescentError::NotOneVariable(setup.n()));
    }
    let x = setup.x_indices()[0];
    let group = setup.group().clone();
    let kernel = setup.base_kernel()?;
    let mut distinct: Vec<(RatFunc, RatFunc)> = Vec::new();
    for &nu in &kernel {
        let pair = (setup.a(nu)[0][0].clone(), setup.b(nu)[0].clone());
        let mut seen = false;
        for (a, b) in &distinct {
            if a.equals(&pair.0)? && b.equals(&pair.1)? {
                seen = true;
                break;
            }
        }
        if !seen {
            distinct.push(pair);
        }
    }
    let d = distinct.len();
    let xv = setup.var(x);
    let (y, strategy) = if d == 1 {
        (xv.clone(), KernelStrategy::Trivial)
    } else if distinct.iter().all(|(_, b)| b.is_zero()) {
        (xv.pow(d as i64)?, KernelStrategy::Character)
    } else {
        let mut prod = RatFunc::one(setup.field(), setup.vars());
        for (a, b) in &distinct {
            prod = prod.mul(&a.mul(&xv)?.add(b)?)?;
        }
        (prod, KernelStrategy::OrbitProduct)
    };
    let mut reps = Vec::new();
    let mut covered = vec![false; group.order()];
    for s in group.elements() {
        if covered[s] {
            continue;
        }
        reps.push(s);
        for &nu in &kernel {
            covered[group.mul(s, nu)] = true;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..max_retries {
        let r = if attempt == 0 {
            RatFunc::one(setup.field(), setup.vars())
        } else {
            setup.random_entry(&mut rng, degree_cap(attempt, reps.len()))
        };
        if r.is_zero() {
            continue;
        }
        let ry = r.mul(&y)?;
        let mut f = RatFunc::zero(setup.field(), setup.vars());
        for &s in &reps {
            f = f.add(&setup.action().act(s, &ry)?)?;
        }
        if x_degree(&f, x) != d as i64 {
            continue;
        }
        if !oracle::check_invariant(&f, setup.action())? {
            return Err(DescentError::Verification("averaged element is not invariant".into()));
        }
        return Ok(MinimalInvariant {
            f,
            degree: d as u32,
            minimality_certified: true,
            kernel,
            kernel_effective: d,
            strategy,
            seed,
            retries: attempt,
        });
    }
    Err(DescentError::RetriesExhausted { seed, cap: max_retries })
}

/// Degree in variable x of a function whose denominator is free of x
/// (−1 when the denominator involves x, i.e. not a polynomial in x).
pub fn x_degree(f: &RatFunc, x: usize) -> i64 {
    if f.den().degree_in(x) > 0 {
        return -1;
    }
    if f.is_zero() {
        return -1;
    }
    f.num().degree_in(x) as i64
}

/// Coefficients of f as a polynomial in x, lowest degree first.
pub fn x_coefficients(f: &RatFunc, x: usize) -> Result<Vec<RatFunc>, DescentError> {
    let deg = x_degree(f, x);
    if deg < 0 {
        return Err(DescentError::NotSemiAffine("not a polynomial in x".into()));
    }
    let den = RatFunc::from_poly(f.den().clone());
    let mut buckets = vec![Vec::new(); deg as usize + 1];
    for (m, c) in f.num().terms() {
        let k = m.0[x] as usize;
        let mut e = m.clone();
        e.0[x] = 0;
        buckets[k].push((e, c.clone()));
    }
    buckets
        .into_iter()
        .map(|t| Ok(RatFunc::from_poly(MultiPoly::from_terms(f.field(), f.vars(), t)).div(&den)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, direct_product};
    use crate::scalars::field_with_root_of_unity;

    fn one_var_setup(
        k: &Arc<FieldSpec>,
        order: usize,
        t_image: impl Fn(&RatFunc) -> RatFunc,
        a: i64,
        b_is_one: bool,
    ) -> SemiAffineSetup {
        let g = cyclic(order);
        let v = VarSet::new("tx", vec!["t".into(), "x".into()]);
        let t = RatFunc::var(k, &v, 0);
        let av = vec![vec![RatFunc::constant(k, &v, k.from_i64(a))]];
        let bv = vec![if b_is_one { RatFunc::one(k, &v) } else { RatFunc::zero(k, &v) }];
        let gen = usize::from(order > 1);
        SemiAffineSetup::from_generators(&g, k, &v, &[0], &[1], &[(gen, av, bv, vec![t_image(&t)])]).unwrap()
    }

    #[test]
    fn identity_cocycle() {
        let k = field_with_root_of_unity(0, 1).unwrap();
        let s = one_var_setup(&k, 2, |t| t.neg(), 1, false);
        let tr = trivialize_action(&s, 0, DEFAULT_MAX_RETRIES).unwrap();
        assert!(tr.z[0].equals(&RatFunc::var(&k, s.vars(), 1).scale(&k.from_i64(2))).unwrap());
    }

    #[test]
    fn sign_cocycle() {
        let k = field_with_root_of_unity(0, 1).unwrap();
        let s = one_var_setup(&k, 2, |t| t.neg(), -1, false);
        let x = RatFunc::var(&k, s.vars(), 1);
        let t = RatFunc::var(&k, s.vars(), 0);
        assert!(oracle::check_invariant(&x.div(&t).unwrap(), s.action()).unwrap());
        let tr = trivialize_action(&s, 0, DEFAULT_MAX_RETRIES).unwrap();
        assert!(oracle::check_invariant(&tr.z[0], s.action()).unwrap());
        assert!(oracle::check_generates_affine(&tr.z, &[1]).unwrap());
        assert_eq!(tr.method, TrivializationMethod::Averaging);
    }

    #[test]
    fn char2_translation() {
        let k = field_with_root_of_unity(2, 1).unwrap();
        let s = one_var_setup(&k, 2, |t| t.add(&RatFunc::one(t.field(), t.vars())).unwrap(), 1, true);
        let x = RatFunc::var(&k, s.vars(), 1);
        let t = RatFunc::var(&k, s.vars(), 0);
        assert!(oracle::check_invariant(&x.add(&t).unwrap(), s.action()).unwrap());
        let tr = trivialize_action(&s, 0, DEFAULT_MAX_RETRIES).unwrap();
        assert_eq!(tr.method, TrivializationMethod::TraceOne);
        assert!(oracle::check_invariant(&tr.z[0], s.action()).unwrap());
        assert!(oracle::check_generates_affine(&tr.z, &[1]).unwrap());
        let again = trivialize_action(&s, 0, DEFAULT_MAX_RETRIES).unwrap();
        assert!(again.z[0].equals(&tr.z[0]).unwrap() && again.retries == tr.retries);
    }

    #[test]
    fn c4_needs_quadratic_entries() {
        // t ↦ i·t with a(σᵏ) = (−1)ᵏ: the only invariant direction is t²·x
        let k = field_with_root_of_unity(0, 4).unwrap();
        let s = one_var_setup(&k, 4, |t| t.scale(&k.zeta()), -1, false);
        let tr = trivialize_action(&s, 0, DEFAULT_MAX_RETRIES).unwrap();
        assert!(oracle::check_invariant(&tr.z[0], s.action()).unwrap());
        assert!(oracle::check_generates_affine(&tr.z, &[1]).unwrap());
    }

    #[test]
    fn rejects_unfaithful_base() {
        let k = field_with_root_of_unity(0, 1).unwrap();
        let s = one_var_setup(&k, 2, |t| t.clone(), -1, false);
        assert_eq!(trivialize_action(&s, 0, 4).unwrap_err(), DescentError::NotFaithful(2));
    }

    #[test]
    fn rejects_broken_cocycle() {
        let k = field_with_root_of_unity(0, 1).unwrap();
        let g = cyclic(2);
        let v = VarSet::new("tx", vec!["t".into(), "x".into()]);
        let t = RatFunc::var(&k, &v, 0);
        let x = RatFunc::var(&k, &v, 1);
        // σ(x) = 2x does not square to the identity
        let imgs = vec![vec![t.clone(), x.clone()], vec![t.neg(), x.scale(&k.from_i64(2))]];
        assert!(GroupAction::from_all_images(&g, &k, &v, imgs).is_err());
    }

    #[test]
    fn trace_one_examples() {
        let q = field_with_root_of_unity(0, 1).unwrap();
        let s = one_var_setup(&q, 3, |t| t.clone(), 1, false);
        let g3 = cyclic(3);
        let reg = GroupAction::regular(&g3, &q, "t", "t");
        let th = trace_one_element(&reg, &[0, 1, 2], 0, 8).unwrap();
        assert_eq!(th.as_constant(), Some(q.from_ratio(1, 3)));
        drop(s);

        let f2 = field_with_root_of_unity(2, 1).unwrap();
        let s = one_var_setup(&f2, 2, |t| t.add(&RatFunc::one(t.field(), t.vars())).unwrap(), 1, true);
        let t = RatFunc::var(&f2, s.vars(), 0);
        assert!(normalize_trace(s.action(), &RatFunc::one(&f2, s.vars())).unwrap().is_none());
        assert!(normalize_trace(s.action(), &t).unwrap().unwrap().equals(&t).unwrap());
        let t2 = t.pow(2).unwrap();
        assert!(normalize_trace(s.action(), &t2).unwrap().unwrap().equals(&t2).unwrap());
        let th = trace_one_element(s.action(), &[0], 0, 32).unwrap();
        let mut sum = RatFunc::zero(&f2, s.vars());
        for g in s.group().elements() {
            sum = sum.add(&s.action().act(g, &th).unwrap()).unwrap();
        }
        assert!(sum.equals(&RatFunc::one(&f2, s.vars())).unwrap());
    }

    #[test]
    fn minimal_invariant_trivial_group() {
        let k = field_with_root_of_unity(0, 1).unwrap();
        let s = one_var_setup(&k, 1, |t| t.clone(), 1, false);
        let mi = minimal_invariant(&s, 0, 32).unwrap();
        assert_eq!(mi.degree, 1);
        assert!(mi.f.equals(&RatFunc::var(&k, s.vars(), 1)).unwrap());
        assert!(mi.minimality_certified);
    }

    #[test]
    fn minimal_invariant_faithful_degree_one() {
        let k = field_with_root_of_unity(0, 4).unwrap();
        for seed in 0..5 {
            let s = one_var_setup(&k, 4, |t| t.scale(&k.zeta()), -1, false);
            let mi = minimal_invariant(&s, seed, 32).unwrap();
            assert_eq!(mi.degree, 1);
            assert_eq!(mi.strategy, KernelStrategy::Trivial);
        }
    }

    #[test]
    fn minimal_invariant_character_kernel() {
        // H × G = C2 × C2 on z(1), z(g) over ℚ: the c-part scales by −1
        let k = field_with_root_of_unity(0, 2).unwrap();
        let hg = direct_product(&cyclic(2), &cyclic(2));
        let g = hg.group.clone();
        let v = VarSet::new("tz", vec!["t".into(), "z".into()]);
        let t = RatFunc::var(&k, &v, 0);
        let z = RatFunc::var(&k, &v, 1);
        let c = hg.pair(1, 0);
        let h = hg.pair(0, 1);
        // c: z ↦ −z; h: t ↦ 1/t, z ↦ t·z
        let gens = vec![(c, vec![t.clone(), z.neg()]), (h, vec![t.inv().unwrap(), t.mul(&z).unwrap()])];
        let act = GroupAction::from_generators(&g, &k, &v, &gens).unwrap();
        let s = SemiAffineSetup::from_action(act, &[0], &[1]).unwrap();
        let mi = minimal_invariant(&s, 0, 32).unwrap();
        assert_eq!(mi.degree, 2);
        assert_eq!(mi.strategy, KernelStrategy::Character);
        assert_eq!(mi.kernel.len(), 2);
        let expected = z.pow(2).unwrap().add(&t.mul(&z).unwrap().pow(2).unwrap()).unwrap();
        assert!(mi.f.equals(&expected).unwrap());
    }

    #[test]
    fn minimal_invariant_translation_kernel() {
        let f2 = field_with_root_of_unity(2, 1).unwrap();
        let s = one_var_setup(&f2, 2, |t| t.clone(), 1, true);
        let mi = minimal_invariant(&s, 0, 32).unwrap();
        assert_eq!(mi.degree, 2);
        assert_eq!(mi.strategy, KernelStrategy::OrbitProduct);
        let x = RatFunc::var(&f2, s.vars(), 1);
        assert!(mi.f.equals(&x.mul(&x.add(&RatFunc::one(&f2, s.vars())).unwrap()).unwrap()).unwrap());
    }
}
