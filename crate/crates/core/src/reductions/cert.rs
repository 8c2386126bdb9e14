//! Certificates: named groups, actions and elements together with
//! declarative checks. The same evaluator runs the checks when a
//! certificate is built and when a serialized one is re-verified.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descent::x_degree;
use crate::funcfield::{linalg, FuncError, GroupAction, RatFunc, RatFuncJson, VarSet};
use crate::groups::{CentralExtensionData, FiniteGroup, GroupError, Homomorphism};
use crate::oracle::{self, kernel_lattice, IntMatrix, OracleError};
use crate::scalars::{FieldExt, FieldSpec, FieldSpecJson, ScalarError};

pub const SCHEMA: &str = "noether-cert/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("element `{element}` belongs to context `{found}`, not `{expected}`")]
    ContextMismatch { element: String, expected: String, found: String },
    #[error("group element {0} out of range")]
    ElementRange(usize),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl CertError {
    pub fn is_resource(&self) -> bool {
        match self {
            CertError::Func(e) => e.is_resource(),
            CertError::Oracle(OracleError::Func(e)) => e.is_resource(),
            _ => false,
        }
    }
}

/// Expression over the variables and named elements of one context.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expr {
    El(String),
    Var(String),
    Int(i64),
    Scalar(Vec<String>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// σ·e for the group element with the given index.
    Act(usize, Box<Expr>),
}

impl Expr {
    pub fn el(name: impl Into<String>) -> Expr {
        Expr::El(name.into())
    }

    pub fn var(label: impl Into<String>) -> Expr {
        Expr::Var(label.into())
    }

    pub fn act(sigma: usize, e: Expr) -> Expr {
        Expr::Act(sigma, Box::new(e))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, e: i64) -> Expr {
        Expr::Pow(Box::new(a), e)
    }
}

/// A verifiable claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    /// lhs = rhs in the context.
    Equal { ctx: String, lhs: Expr, rhs: Expr },
    /// σ·e = e for every σ (or for every σ in `under`).
    Invariant {
        ctx: String,
        expr: Expr,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        under: Option<Vec<usize>>,
    },
    /// The elements fixing every expression are exactly `expected`.
    Kernel { ctx: String, exprs: Vec<Expr>, expected: Vec<usize> },
    /// The family is affine in the variables `x` with invertible linear part.
    GeneratesAffine { ctx: String, exprs: Vec<Expr>, x: Vec<String> },
    /// Rank over K of a family of linear forms.
    Rank { ctx: String, exprs: Vec<Expr>, expected: usize },
    /// Degree in one variable of a function polynomial in that variable.
    Degree { ctx: String, expr: Expr, var: String, expected: i64 },
    /// Multiplicative order of a scalar.
    ScalarOrder { value: Vec<String>, expected: u64 },
    /// The action of `target` is the one induced on the forms (source-context
    /// expressions, one per target variable): for every σ of the target
    /// group, substituting the forms into σ·vᵢ gives hom(σ)·formᵢ.
    Induced {
        source: String,
        target: String,
        forms: Vec<Expr>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hom: Option<Vec<usize>>,
    },
    /// For each σ in the group of `b`, renaming `a_vars` to `b_vars` carries
    /// hom(σ)·aₖ (computed in `a`) to σ·bₖ (computed in `b`).
    Intertwine { a: String, a_vars: Vec<String>, b: String, b_vars: Vec<String>, hom: Vec<usize> },
    /// σ·X_e = X_{σe} with variables indexed by group elements.
    Regular { ctx: String },
    /// ρ(στ) = ρ(σ)∘ρ(τ) for every pair.
    ActionLaw { ctx: String },
    /// A bijective homomorphism between two named groups.
    Isomorphism { source: String, target: String, map: Vec<usize> },
    /// Extension data of total → quotient with kernel ⟨c⟩, recomputed from
    /// the tables and compared entry by entry.
    Extension {
        total: String,
        quotient: String,
        c: usize,
        pi: Vec<usize>,
        section: Vec<usize>,
        factor_set: Vec<Vec<u64>>,
        conj_exp: Vec<u64>,
    },
    /// Kernel lattice {v : M·v ≡ 0 mod moduli}: basis (HNF) and index,
    /// optionally required to equal the order of a group.
    Lattice {
        matrix: Vec<Vec<String>>,
        moduli: Vec<String>,
        basis: Vec<Vec<String>>,
        index: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        index_is_order_of: Option<String>,
    },
    /// Each expression is the monic monomial with the given exponent row
    /// (variables in context order).
    Monomials { ctx: String, exprs: Vec<Expr>, exponents: Vec<Vec<String>> },
    /// The elements fixing every `l` variable induce exactly `expected`
    /// distinct maps on `x`; this is the least degree in x of an invariant
    /// polynomial outside K(l).
    KernelOrbit { ctx: String, l: Vec<String>, x: String, expected: usize },
    /// Number of expressions equals the product of the group orders plus
    /// the offset.
    Count { exprs: Vec<Expr>, groups: Vec<String>, offset: i64 },
    /// Each listed group element moves `exprs[i]` to `exprs[images[k][i]]`.
    Permutes { ctx: String, exprs: Vec<Expr>, elements: Vec<usize>, images: Vec<Vec<usize>> },
    /// Sub-certificate `index` re-verifies with every claim true.
    SubOk { index: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub ok: bool,
    pub check: Check,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenImages {
    pub g: usize,
    pub images: Vec<RatFuncJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenPerm {
    pub g: usize,
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionJson {
    /// σ·vᵢ = v_{perm[i]} on generators.
    Permutation { gens: Vec<GenPerm> },
    /// Explicit generator images.
    Images { gens: Vec<GenImages> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContextJson {
    pub group: String,
    pub vars: Vec<String>,
    pub action: ActionJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub ctx: String,
    pub value: RatFuncJson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub theorem: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub inputs: serde_json::Value,
    pub field: FieldSpecJson,
    pub seed: u64,
    pub retries: u64,
    pub groups: BTreeMap<String, GroupJson>,
    pub contexts: BTreeMap<String, ContextJson>,
    pub elements: BTreeMap<String, ElementJson>,
    pub claims: Vec<Claim>,
    /// Conclusions that follow from the verified claims but are not
    /// themselves machine-checked, and skipped steps.
    pub notes: Vec<String>,
    pub sub: Vec<Certificate>,
}

impl Certificate {
    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }

    /// Rebuilds the groups, contexts and elements of this certificate
    /// (not its sub-certificates).
    pub fn env(&self) -> Result<Env, CertError> {
        let field = FieldSpec::from_json(&self.field)?;
        let mut env = Env::new(&field);
        for (name, g) in &self.groups {
            if g.table.len() != g.order {
                return Err(CertError::Schema(format!("group {name}: order does not match table")));
            }
            env.insert_group(name, FiniteGroup::from_table(g.table.clone(), None, false)?);
        }
        for (name, c) in &self.contexts {
            let ctx = env.load_context(c).map_err(|e| match e {
                CertError::Func(FuncError::ActionLaw(msg)) => CertError::Func(FuncError::ActionLaw(format!("{name}: {msg}"))),
                e => e,
            })?;
            env.insert_context(name, ctx);
        }
        for (name, el) in &self.elements {
            let ctx = env.context(&el.ctx)?;
            let value = RatFunc::from_json(&field, ctx.action.vars(), &el.value)?;
            env.insert_element(name, &el.ctx, value);
        }
        Ok(env)
    }

    /// Total number of claims, including sub-certificates.
    pub fn claim_count(&self) -> usize {
        self.claims.len() + self.sub.iter().map(Certificate::claim_count).sum::<usize>()
    }

    /// Names of failed claims, prefixed by their certificate path.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.claims.iter().filter(|c| !c.ok).map(|c| format!("{}: {}", self.theorem, c.name)).collect();
        for s in &self.sub {
            out.extend(s.failures());
        }
        out
    }

    pub fn depth_first(&self) -> Vec<&Certificate> {
        let mut out = vec![self];
        for s in &self.sub {
            out.extend(s.depth_first());
        }
        out
    }
}

/// A context: a group action on named variables.
#[derive(Clone, Debug)]
pub struct Context {
    pub group_name: String,
    pub action: GroupAction,
}

/// Runtime state shared by construction and verification.
#[derive(Clone, Debug)]
pub struct Env {
    pub field: Arc<FieldSpec>,
    groups: BTreeMap<String, FiniteGroup>,
    contexts: BTreeMap<String, Context>,
    elements: BTreeMap<String, (String, RatFunc)>,
}

impl Env {
    pub fn new(field: &Arc<FieldSpec>) -> Self {
        Env { field: field.clone(), groups: BTreeMap::new(), contexts: BTreeMap::new(), elements: BTreeMap::new() }
    }

    pub fn group(&self, name: &str) -> Result<&FiniteGroup, CertError> {
        self.groups.get(name).ok_or_else(|| CertError::Unknown { kind: "group", name: name.into() })
    }

    pub fn context(&self, name: &str) -> Result<&Context, CertError> {
        self.contexts.get(name).ok_or_else(|| CertError::Unknown { kind: "context", name: name.into() })
    }

    pub fn element(&self, name: &str) -> Result<&(String, RatFunc), CertError> {
        self.elements.get(name).ok_or_else(|| CertError::Unknown { kind: "element", name: name.into() })
    }

    pub fn insert_group(&mut self, name: &str, g: FiniteGroup) {
        self.groups.insert(name.into(), g);
    }

    pub fn insert_context(&mut self, name: &str, ctx: Context) {
        self.contexts.insert(name.into(), ctx);
    }

    pub fn insert_element(&mut self, name: &str, ctx: &str, value: RatFunc) {
        self.elements.insert(name.into(), (ctx.into(), value));
    }

    /// Rebuilds a context from JSON; the action law is checked on every
    /// (generator, element) pair while extending the generators.
    pub fn load_context(&self, json: &ContextJson) -> Result<Context, CertError> {
        let group = self.group(&json.group)?.clone();
        let vars = VarSet::new("ctx", json.vars.clone());
        let field = &self.field;
        let gens: Vec<(usize, Vec<RatFunc>)> = match &json.action {
            ActionJson::Permutation { gens } => gens
                .iter()
                .map(|gp| {
                    if gp.perm.len() != vars.len() || gp.perm.iter().any(|&j| j >= vars.len()) {
                        return Err(CertError::Schema("permutation of the wrong size".into()));
                    }
                    Ok((gp.g, gp.perm.iter().map(|&j| RatFunc::var(field, &vars, j)).collect()))
                })
                .collect::<Result<_, _>>()?,
            ActionJson::Images { gens } => gens
                .iter()
                .map(|gi| {
                    let imgs = gi
                        .images
                        .iter()
                        .map(|r| RatFunc::from_json(field, &vars, r))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok((gi.g, imgs))
                })
                .collect::<Result<_, CertError>>()?,
        };
        for (g, _) in &gens {
            if *g >= group.order() {
                return Err(CertError::ElementRange(*g));
            }
        }
        let action = GroupAction::from_generators(&group, field, &vars, &gens)?;
        Ok(Context { group_name: json.group.clone(), action })
    }

    fn var_index(&self, ctx: &Context, label: &str) -> Result<usize, CertError> {
        ctx.action
            .vars()
            .index_of(label)
            .ok_or_else(|| CertError::Unknown { kind: "variable", name: label.into() })
    }

    /// Evaluates an expression in a context.
    pub fn eval(&self, ctx_name: &str, e: &Expr) -> Result<RatFunc, CertError> {
        let ctx = self.context(ctx_name)?;
        let field = &self.field;
        let vars = ctx.action.vars();
        Ok(match e {
            Expr::El(name) => {
                let (c, v) = self.element(name)?;
                if c != ctx_name {
                    return Err(CertError::ContextMismatch {
                        element: name.clone(),
                        expected: ctx_name.into(),
                        found: c.clone(),
                    });
                }
                v.clone()
            }
            Expr::Var(label) => RatFunc::var(field, vars, self.var_index(ctx, label)?),
            Expr::Int(v) => RatFunc::constant(field, vars, field.from_i64(*v)),
            Expr::Scalar(c) => RatFunc::constant(field, vars, field.from_coeff_strings(c)?),
            Expr::Add(items) => {
                let mut acc = RatFunc::zero(field, vars);
                for it in items {
                    acc = acc.add(&self.eval(ctx_name, it)?)?;
                }
                acc
            }
            Expr::Mul(items) => {
                let mut acc = RatFunc::one(field, vars);
                for it in items {
                    acc = acc.mul(&self.eval(ctx_name, it)?)?;
                }
                acc
            }
            Expr::Neg(a) => self.eval(ctx_name, a)?.neg(),
            Expr::Sub(a, b) => self.eval(ctx_name, a)?.sub(&self.eval(ctx_name, b)?)?,
            Expr::Div(a, b) => self.eval(ctx_name, a)?.div(&self.eval(ctx_name, b)?)?,
            Expr::Pow(a, k) => self.eval(ctx_name, a)?.pow(*k)?,
            Expr::Act(s, a) => {
                if *s >= ctx.action.group().order() {
                    return Err(CertError::ElementRange(*s));
                }
                ctx.action.act(*s, &self.eval(ctx_name, a)?)?
            }
        })
    }

    fn eval_all(&self, ctx: &str, es: &[Expr]) -> Result<Vec<RatFunc>, CertError> {
        es.iter().map(|e| self.eval(ctx, e)).collect()
    }

    /// Runs one check. `subs` holds the verdicts of sub-certificates.
    pub fn run(&self, check: &Check, subs: &[bool]) -> Result<bool, CertError> {
        match check {
            Check::Equal { ctx, lhs, rhs } => Ok(self.eval(ctx, lhs)?.equals(&self.eval(ctx, rhs)?)?),
            Check::Invariant { ctx, expr, under } => {
                let c = self.context(ctx)?;
                let f = self.eval(ctx, expr)?;
                match under {
                    None => Ok(oracle::check_invariant(&f, &c.action)?),
                    Some(list) => {
                        for &s in list {
                            if s >= c.action.group().order() {
                                return Err(CertError::ElementRange(s));
                            }
                            if !c.action.act(s, &f)?.equals(&f)? {
                                return Ok(false);
                            }
                        }
                        Ok(true)
                    }
                }
            }
            Check::Kernel { ctx, exprs, expected } => {
                let c = self.context(ctx)?;
                let fs = self.eval_all(ctx, exprs)?;
                let mut kernel = Vec::new();
                'elems: for s in c.action.group().elements() {
                    for f in &fs {
                        if !c.action.act(s, f)?.equals(f)? {
                            continue 'elems;
                        }
                    }
                    kernel.push(s);
                }
                Ok(&kernel == expected)
            }
            Check::GeneratesAffine { ctx, exprs, x } => {
                let c = self.context(ctx)?;
                let fs = self.eval_all(ctx, exprs)?;
                let xs = x.iter().map(|l| self.var_index(c, l)).collect::<Result<Vec<_>, _>>()?;
                match oracle::check_generates_affine(&fs, &xs) {
                    Ok(v) => Ok(v),
                    Err(OracleError::NotAffine { .. }) => Ok(false),
                    Err(e) => Err(e.into()),
                }
            }
            Check::Rank { ctx, exprs, expected } => {
                let fs = self.eval_all(ctx, exprs)?;
                let mut rows = Vec::with_capacity(fs.len());
                for f in &fs {
                    match f.as_poly().and_then(|p| p.linear_coeffs()) {
                        Some(r) => rows.push(r),
                        None => return Ok(false),
                    }
                }
                Ok(linalg::rank(&rows) == *expected)
            }
            Check::Degree { ctx, expr, var, expected } => {
                let c = self.context(ctx)?;
                let f = self.eval(ctx, expr)?;
                Ok(x_degree(&f, self.var_index(c, var)?) == *expected)
            }
            Check::ScalarOrder { value, expected } => {
                let v = self.field.from_coeff_strings(value)?;
                Ok(v.multiplicative_order(*expected) == Some(*expected))
            }
            Check::Induced { source, target, forms, hom } => {
                let src = self.context(source)?;
                let tgt = self.context(target)?;
                if forms.len() != tgt.action.vars().len() {
                    return Ok(false);
                }
                let fs = self.eval_all(source, forms)?;
                let order = tgt.action.group().order();
                if hom.as_ref().is_some_and(|h| h.len() != order) {
                    return Ok(false);
                }
                if hom.is_none() && src.action.group() != tgt.action.group() {
                    return Ok(false);
                }
                for s in 0..order {
                    let hs = hom.as_ref().map_or(s, |h| h[s]);
                    if hs >= src.action.group().order() {
                        return Err(CertError::ElementRange(hs));
                    }
                    for (i, f) in fs.iter().enumerate() {
                        let lhs = tgt.action.images(s)[i].substitute(&fs, src.action.vars())?;
                        let rhs = src.action.act(hs, f)?;
                        if !lhs.equals(&rhs)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Check::Intertwine { a, a_vars, b, b_vars, hom } => {
                let ca = self.context(a)?;
                let cb = self.context(b)?;
                if a_vars.len() != b_vars.len() || hom.len() != cb.action.group().order() {
                    return Ok(false);
                }
                let ai = a_vars.iter().map(|l| self.var_index(ca, l)).collect::<Result<Vec<_>, _>>()?;
                let bi = b_vars.iter().map(|l| self.var_index(cb, l)).collect::<Result<Vec<_>, _>>()?;
                let field = &self.field;
                let bvars = cb.action.vars();
                let mut rename = vec![RatFunc::one(field, bvars); ca.action.vars().len()];
                for (&x, &y) in ai.iter().zip(&bi) {
                    rename[x] = RatFunc::var(field, bvars, y);
                }
                for s in cb.action.group().elements() {
                    let hs = hom[s];
                    if hs >= ca.action.group().order() {
                        return Err(CertError::ElementRange(hs));
                    }
                    for (&x, &y) in ai.iter().zip(&bi) {
                        let img = &ca.action.images(hs)[x];
                        let support_ok = (0..ca.action.vars().len())
                            .filter(|v| !ai.contains(v))
                            .all(|v| img.num().degree_in(v) == 0 && img.den().degree_in(v) == 0);
                        if !support_ok {
                            return Ok(false);
                        }
                        let moved = img.substitute(&rename, bvars)?;
                        if !moved.equals(&cb.action.images(s)[y])? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Check::Regular { ctx } => {
                let c = self.context(ctx)?;
                let g = c.action.group();
                if c.action.vars().len() != g.order() {
                    return Ok(false);
                }
                for s in g.elements() {
                    for e in g.elements() {
                        let expect = RatFunc::var(&self.field, c.action.vars(), g.mul(s, e));
                        if !c.action.images(s)[e].equals(&expect)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Check::ActionLaw { ctx } => match self.context(ctx)?.action.check_law_all_pairs() {
                Ok(()) => Ok(true),
                Err(FuncError::ActionLaw(_)) => Ok(false),
                Err(e) => Err(e.into()),
            },
            Check::Isomorphism { source, target, map } => {
                match Homomorphism::new(self.group(source)?, self.group(target)?, map.clone()) {
                    Ok(h) => Ok(h.is_bijective()),
                    Err(_) => Ok(false),
                }
            }
            Check::Extension { total, quotient, c, pi, section, factor_set, conj_exp } => {
                let t = self.group(total)?;
                let q = self.group(quotient)?;
                let Ok(hom) = Homomorphism::new(t, q, pi.clone()) else { return Ok(false) };
                match CentralExtensionData::with_projection(t, *c, hom) {
                    Ok(ext) => Ok(&ext.section == section && &ext.factor_set == factor_set && &ext.conj_exp == conj_exp),
                    Err(_) => Ok(false),
                }
            }
            Check::Lattice { matrix, moduli, basis, index, index_is_order_of } => {
                if let Some(g) = index_is_order_of {
                    if self.group(g)?.order().to_string() != *index {
                        return Ok(false);
                    }
                }
                let parse = |s: &String| {
                    s.parse::<BigInt>().map_err(|_| CertError::Schema(format!("bad integer {s}")))
                };
                let m = matrix.iter().map(|r| r.iter().map(parse).collect()).collect::<Result<Vec<Vec<_>>, _>>()?;
                let cols = m.first().map_or(basis.first().map_or(0, |b| b.len()), |r: &Vec<BigInt>| r.len());
                let m = if m.is_empty() { IntMatrix { rows: 0, cols, entries: vec![] } } else { IntMatrix::new(m) };
                let moduli = moduli.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
                if moduli.len() != m.rows || moduli.iter().any(|d| d < &BigInt::from(1)) {
                    return Ok(false);
                }
                let (b, idx) = kernel_lattice(&m, &moduli);
                Ok(&b.to_strings() == basis && &idx.to_string() == index)
            }
            Check::Monomials { ctx, exprs, exponents } => {
                if exprs.len() != exponents.len() {
                    return Ok(false);
                }
                for (e, row) in exprs.iter().zip(exponents) {
                    let f = self.eval(ctx, e)?;
                    let Some(p) = f.as_poly() else { return Ok(false) };
                    if p.nterms() != 1 || !p.terms()[0].1.is_one() {
                        return Ok(false);
                    }
                    let exps: Vec<String> = p.terms()[0].0 .0.iter().map(u32::to_string).collect();
                    if &exps != row {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Check::KernelOrbit { ctx, l, x, expected } => {
                let c = self.context(ctx)?;
                let li = l.iter().map(|v| self.var_index(c, v)).collect::<Result<Vec<_>, _>>()?;
                let xi = self.var_index(c, x)?;
                let vars = c.action.vars();
                let mut maps: Vec<RatFunc> = Vec::new();
                for s in c.action.group().elements() {
                    let imgs = c.action.images(s);
                    let mut fixes = true;
                    for &i in &li {
                        if !imgs[i].equals(&RatFunc::var(&self.field, vars, i))? {
                            fixes = false;
                            break;
                        }
                    }
                    if !fixes {
                        continue;
                    }
                    let mut seen = false;
                    for m in &maps {
                        if m.equals(&imgs[xi])? {
                            seen = true;
                            break;
                        }
                    }
                    if !seen {
                        maps.push(imgs[xi].clone());
                    }
                }
                Ok(maps.len() == *expected)
            }
            Check::Count { exprs, groups, offset } => {
                let mut total = 1i64;
                for g in groups {
                    total *= self.group(g)?.order() as i64;
                }
                Ok(exprs.len() as i64 == total + offset)
            }
            Check::Permutes { ctx, exprs, elements, images } => {
                let c = self.context(ctx)?;
                if elements.len() != images.len() || images.iter().any(|r| r.len() != exprs.len()) {
                    return Ok(false);
                }
                let fs = self.eval_all(ctx, exprs)?;
                for (&s, row) in elements.iter().zip(images) {
                    if s >= c.action.group().order() {
                        return Err(CertError::ElementRange(s));
                    }
                    for (f, &j) in fs.iter().zip(row) {
                        let Some(target) = fs.get(j) else { return Ok(false) };
                        if !c.action.act(s, f)?.equals(target)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Check::SubOk { index } => Ok(subs.get(*index).copied().unwrap_or(false)),
        }
    }
}

/// Incrementally assembles a certificate, evaluating each claim as it is
/// added.
pub struct CertBuilder {
    pub env: Env,
    cert: Certificate,
    sub_ok: Vec<bool>,
}

impl CertBuilder {
    pub fn new(theorem: &str, field: &Arc<FieldSpec>, inputs: serde_json::Value, seed: u64) -> Self {
        CertBuilder {
            env: Env::new(field),
            cert: Certificate {
                schema: SCHEMA.into(),
                theorem: theorem.into(),
                status: Status::Ok,
                first_failure: None,
                inputs,
                field: field.to_json(),
                seed,
                retries: 0,
                groups: BTreeMap::new(),
                contexts: BTreeMap::new(),
                elements: BTreeMap::new(),
                claims: Vec::new(),
                notes: Vec::new(),
                sub: Vec::new(),
            },
            sub_ok: Vec::new(),
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.env.field
    }

    pub fn add_group(&mut self, name: &str, g: &FiniteGroup) {
        self.cert.groups.insert(name.into(), GroupJson { order: g.order(), table: g.rows() });
        self.env.insert_group(name, g.clone());
    }

    pub fn group(&self, name: &str) -> &FiniteGroup {
        self.env.group(name).expect("group registered")
    }

    /// Registers a context given by generator images.
    pub fn add_context(&mut self, name: &str, group: &str, labels: Vec<String>, action: ActionJson) -> Result<(), CertError> {
        let json = ContextJson { group: group.into(), vars: labels, action };
        let ctx = self.env.load_context(&json)?;
        self.cert.contexts.insert(name.into(), json);
        self.env.insert_context(name, ctx);
        Ok(())
    }

    /// Context whose generators act by the given images (over the context's
    /// own variables, built by `images`).
    pub fn add_context_images(
        &mut self,
        name: &str,
        group: &str,
        labels: Vec<String>,
        images: impl Fn(&VarSet, usize) -> Result<Vec<RatFunc>, CertError>,
    ) -> Result<(), CertError> {
        let vars = VarSet::new("ctx", labels.clone());
        let g = self.group(group).clone();
        let mut gens = Vec::new();
        for s in g.generators() {
            let imgs = images(&vars, s)?;
            gens.push(GenImages { g: s, images: imgs.iter().map(RatFunc::to_json).collect() });
        }
        self.add_context(name, group, labels, ActionJson::Images { gens })
    }

    /// Context on which generators permute the variables.
    pub fn add_context_perm(
        &mut self,
        name: &str,
        group: &str,
        labels: Vec<String>,
        perm: impl Fn(usize) -> Vec<usize>,
    ) -> Result<(), CertError> {
        let g = self.group(group).clone();
        let gens = g.generators().into_iter().map(|s| GenPerm { g: s, perm: perm(s) }).collect();
        self.add_context(name, group, labels, ActionJson::Permutation { gens })
    }

    pub fn context(&self, name: &str) -> &Context {
        self.env.context(name).expect("context registered")
    }

    pub fn vars(&self, ctx: &str) -> VarSet {
        self.context(ctx).action.vars().clone()
    }

    pub fn var(&self, ctx: &str, label: &str) -> RatFunc {
        let vars = self.vars(ctx);
        let i = vars.index_of(label).unwrap_or_else(|| panic!("variable {label} in {ctx}"));
        RatFunc::var(&self.env.field, &vars, i)
    }

    pub fn add_element(&mut self, name: &str, ctx: &str, value: RatFunc) {
        self.cert.elements.insert(name.into(), ElementJson { ctx: ctx.into(), value: value.to_json() });
        self.env.insert_element(name, ctx, value);
    }

    pub fn element(&self, name: &str) -> &RatFunc {
        &self.env.element(name).expect("element registered").1
    }

    pub fn eval(&self, ctx: &str, e: &Expr) -> Result<RatFunc, CertError> {
        self.env.eval(ctx, e)
    }

    /// Evaluates and records a claim.
    pub fn claim(&mut self, name: impl Into<String>, check: Check) -> Result<bool, CertError> {
        let ok = self.env.run(&check, &self.sub_ok)?;
        let name = name.into();
        if !ok && self.cert.first_failure.is_none() {
            self.cert.first_failure = Some(name.clone());
            self.cert.status = Status::Failed;
        }
        self.cert.claims.push(Claim { name, ok, check });
        Ok(ok)
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.cert.notes.push(text.into());
    }

    pub fn add_retries(&mut self, r: u64) {
        self.cert.retries += r;
    }

    /// Attaches a sub-certificate and claims that it holds.
    pub fn add_sub(&mut self, name: impl Into<String>, sub: Certificate) -> Result<usize, CertError> {
        let index = self.cert.sub.len();
        self.sub_ok.push(sub.is_ok());
        self.cert.sub.push(sub);
        self.claim(name, Check::SubOk { index })?;
        Ok(index)
    }

    pub fn finish(self) -> Certificate {
        self.cert
    }
}

/// Outcome of re-verifying a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub theorem: String,
    /// (claim name, recorded verdict, recomputed verdict).
    pub claims: Vec<(String, bool, bool)>,
    pub sub: Vec<VerifyReport>,
}

impl VerifyReport {
    /// Every claim re-verifies true and agrees with the recorded verdict.
    pub fn all_ok(&self) -> bool {
        self.claims.iter().all(|(_, rec, now)| *rec && *now) && self.sub.iter().all(VerifyReport::all_ok)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .claims
            .iter()
            .filter(|(_, rec, now)| !(*rec && *now))
            .map(|(n, rec, now)| format!("{}: {n} (recorded {rec}, recomputed {now})", self.theorem))
            .collect();
        for s in &self.sub {
            out.extend(s.failures());
        }
        out
    }

    pub fn claim_count(&self) -> usize {
        self.claims.len() + self.sub.iter().map(VerifyReport::claim_count).sum::<usize>()
    }
}

/// Rebuilds everything from the serialized data and re-runs every claim.
pub fn verify_certificate(cert: &Certificate) -> Result<VerifyReport, CertError> {
    if cert.schema != SCHEMA {
        return Err(CertError::Schema(format!("expected {SCHEMA}, found {}", cert.schema)));
    }
    let mut sub_reports = Vec::with_capacity(cert.sub.len());
    for s in &cert.sub {
        sub_reports.push(verify_certificate(s)?);
    }
    let sub_ok: Vec<bool> = sub_reports.iter().map(VerifyReport::all_ok).collect();
    let env = match cert.env() {
        Ok(env) => env,
        Err(CertError::Func(FuncError::ActionLaw(msg))) => {
            return Ok(VerifyReport {
                theorem: cert.theorem.clone(),
                claims: vec![(format!("context action law: {msg}"), true, false)],
                sub: sub_reports,
            })
        }
        Err(e) => return Err(e),
    };
    let mut claims = Vec::with_capacity(cert.claims.len());
    for c in &cert.claims {
        let now = env.run(&c.check, &sub_ok)?;
        claims.push((c.name.clone(), c.ok, now));
    }
    Ok(VerifyReport { theorem: cert.theorem.clone(), claims, sub: sub_reports })
}
