//! Constructive reductions between invariant fields, each emitting a
//! re-verifiable [`Certificate`].

mod cert;
mod central;
mod cyclic;
mod fischer;
mod pipelines;
mod product;
mod wreath;

use std::sync::Arc;

use thiserror::Error;

pub use cert::{
    verify_certificate, ActionJson, CertBuilder, CertError, Certificate, Check, Claim, Context, ContextJson, ElementJson,
    Env, Expr, GenImages, GenPerm, GroupJson, Status, VerifyReport, SCHEMA,
};
pub use central::{theorem14_reduce, theorem16_reduce, theorem17_chain, theorem18_chain};
pub use cyclic::{iterated_cyclic_generators, theorem11_embed};
pub use fischer::{fischer, fischer_witness, RationalityWitness, WitnessKind};
pub use pipelines::{theorem15_pipeline, theorem42_pipeline};
pub use product::theorem19_construct;
pub use wreath::theorem110_construct;

use crate::descent::{trivialize_action, DescentError, SemiAffineSetup, DEFAULT_MAX_RETRIES};
use crate::funcfield::{linalg, FuncError, MultiPoly, RatFunc, VarSet};
use crate::groups::{GroupError, DEFAULT_SIZE_CAP};
use crate::oracle::OracleError;
use crate::scalars::{FieldExt, FieldSpec, ScalarError};

/// Largest number of variables on which the affine descent step is run.
pub const DEFAULT_DESCENT_DIM_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl ReductionError {
    /// Term caps, group size caps and exhausted retry budgets.
    pub fn is_resource(&self) -> bool {
        match self {
            ReductionError::Cert(e) => e.is_resource(),
            ReductionError::Descent(DescentError::RetriesExhausted { .. }) => true,
            ReductionError::Descent(e) => e.is_resource(),
            ReductionError::Group(GroupError::SizeCap { .. }) => true,
            ReductionError::Func(e) => e.is_resource(),
            ReductionError::Oracle(OracleError::Func(e)) => e.is_resource(),
            _ => false,
        }
    }
}

pub(crate) fn hypothesis(msg: impl Into<String>) -> ReductionError {
    ReductionError::Hypothesis(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReduceOptions {
    pub seed: u64,
    pub max_retries: usize,
    pub size_cap: usize,
    pub descent_dim_cap: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            seed: 0,
            max_retries: DEFAULT_MAX_RETRIES,
            size_cap: DEFAULT_SIZE_CAP,
            descent_dim_cap: DEFAULT_DESCENT_DIM_CAP,
        }
    }
}

pub(crate) fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}[{i}]")).collect()
}

/// Sum of variables with optional scalar weights, as an expression.
pub(crate) fn weighted_sum(terms: Vec<(Vec<String>, String)>) -> Expr {
    Expr::Add(
        terms
            .into_iter()
            .map(|(c, v)| {
                if c.len() == 1 && c[0] == "1" {
                    Expr::Var(v)
                } else {
                    Expr::Mul(vec![Expr::Scalar(c), Expr::Var(v)])
                }
            })
            .collect(),
    )
}

pub(crate) fn var_sum(vars: impl IntoIterator<Item = String>) -> Expr {
    Expr::Add(vars.into_iter().map(Expr::Var).collect())
}

/// Registers the regular action of `group` on variables `prefix[e]`.
pub(crate) fn regular_context(b: &mut CertBuilder, name: &str, group: &str, prefix: &str) -> Result<(), ReductionError> {
    let g = b.group(group).clone();
    b.add_context_perm(name, group, labels(prefix, g.order()), |s| g.elements().map(|e| g.mul(s, e)).collect())?;
    Ok(())
}

/// Registers the action induced on a stable span of linear forms of the
/// `source` context (through `hom` from the target group to the source
/// group when given) and records the `Induced` claim.
#[allow(clippy::too_many_arguments)]
pub(crate) fn induced_linear_context(
    b: &mut CertBuilder,
    source: &str,
    name: &str,
    group: &str,
    labels: Vec<String>,
    forms: Vec<Expr>,
    hom: Option<Vec<usize>>,
    claim: &str,
) -> Result<bool, ReductionError> {
    let field = b.field().clone();
    let mut rows = Vec::with_capacity(forms.len());
    let mut values = Vec::with_capacity(forms.len());
    for f in &forms {
        let v = b.eval(source, f)?;
        rows.push(linear_row(&v)?);
        values.push(v);
    }
    let src = b.context(source).action.clone();
    let tg = b.group(group).clone();
    let mut gens = Vec::new();
    for s in tg.generators() {
        let hs = hom.as_ref().map_or(s, |h| h[s]);
        let targets = values.iter().map(|v| linear_row(&src.act(hs, v)?)).collect::<Result<Vec<_>, _>>()?;
        let imgs = linalg::solve_left_many(&rows, &targets)
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| FuncError::Internal(format!("span of {name} is not stable")))?;
        gens.push((s, imgs));
    }
    let vars = VarSet::new(name, labels.clone());
    let mut json = Vec::new();
    for (s, imgs) in gens {
        let images: Vec<RatFunc> =
            imgs.iter().map(|c| RatFunc::from_poly(MultiPoly::linear_form(&field, &vars, c))).collect();
        json.push(GenImages { g: s, images: images.iter().map(RatFunc::to_json).collect() });
    }
    b.add_context(name, group, labels, ActionJson::Images { gens: json })?;
    Ok(b.claim(claim, Check::Induced { source: source.into(), target: name.into(), forms, hom })?)
}

fn linear_row(f: &RatFunc) -> Result<Vec<crate::scalars::Scalar>, ReductionError> {
    f.as_poly()
        .and_then(MultiPoly::linear_coeffs)
        .ok_or_else(|| FuncError::Internal("expected a linear form".into()).into())
}

/// Variables of `ctx` that complete the linear forms to a basis, chosen
/// greedily in label order.
pub(crate) fn complete_basis(b: &CertBuilder, ctx: &str, forms: &[Expr]) -> Result<Vec<String>, ReductionError> {
    let vars = b.context(ctx).action.vars().clone();
    let mut rows = Vec::with_capacity(vars.len());
    for f in forms {
        rows.push(linear_row(&b.eval(ctx, f)?)?);
    }
    let mut chosen = Vec::new();
    for (i, label) in vars.labels().iter().enumerate() {
        let v = linear_row(&RatFunc::var(b.field(), &vars, i))?;
        if linalg::solve_left(&rows, &v).is_none() {
            rows.push(v);
            chosen.push(label.clone());
        }
    }
    Ok(chosen)
}

/// Runs the affine descent on a context whose `l` variables span a stable
/// subfield, recording invariant elements `{prefix}{i}` that generate the
/// whole field over K(l); skipped with a note above the dimension cap.
pub(crate) fn affine_descent_step(
    b: &mut CertBuilder,
    ctx: &str,
    l: &[String],
    x: &[String],
    prefix: &str,
    opts: &ReduceOptions,
) -> Result<bool, ReductionError> {
    let action = b.context(ctx).action.clone();
    let dim = action.vars().len();
    if x.is_empty() {
        b.note(format!("descent on {ctx}: nothing to trivialize, K({ctx}) = K(l)"));
        return Ok(true);
    }
    if dim > opts.descent_dim_cap {
        b.note(format!(
            "skipped claim: affine descent on {ctx} ({dim} variables) exceeds the dimension cap {}",
            opts.descent_dim_cap
        ));
        return Ok(true);
    }
    let vars = action.vars().clone();
    let idx = |ls: &[String]| -> Vec<usize> { ls.iter().map(|v| vars.index_of(v).expect("label in context")).collect() };
    let setup = SemiAffineSetup::from_action(action, &idx(l), &idx(x))?;
    let t = trivialize_action(&setup, opts.seed, opts.max_retries)?;
    b.add_retries(t.retries as u64);
    let mut ok = true;
    let mut exprs = Vec::new();
    for (i, z) in t.z.iter().enumerate() {
        let name = format!("{prefix}{i}");
        b.add_element(&name, ctx, z.clone());
        ok &= b.claim(format!("{name} is invariant"), Check::Invariant { ctx: ctx.into(), expr: Expr::el(&name), under: None })?;
        exprs.push(Expr::el(&name));
    }
    ok &= b.claim(
        format!("{prefix}* generate K({ctx}) over K(l)"),
        Check::GeneratesAffine { ctx: ctx.into(), exprs, x: x.to_vec() },
    )?;
    Ok(ok)
}

/// ζ as coefficient strings, checked to have the given order.
pub(crate) fn root_of_unity(field: &Arc<FieldSpec>, n: u64) -> Result<crate::scalars::Scalar, ReductionError> {
    if n <= 1 {
        return Ok(field.one());
    }
    crate::scalars::primitive_root(field, n)
        .map_err(|_| hypothesis(format!("requires a primitive root of unity of order {n} in K = {}", field.label())))
}
