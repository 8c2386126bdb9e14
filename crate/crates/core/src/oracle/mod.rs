//! Independent verification: integer lattices, monomial invariants and
//! exact invariance, kernel and generation checks over full element loops.

mod hnf;
mod monomial;

use thiserror::Error;

pub use hnf::{hnf, kernel_lattice, IntMatrix};
pub use monomial::{monomial_invariant_generators, MonomialActionSpec, MonomialInvariants};

use crate::funcfield::{linalg, FuncError, GroupAction, MultiPoly, RatFunc};
use crate::scalars::ScalarError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("expression {index} is not affine in the designated variables")]
    NotAffine { index: usize },
    #[error("action is not monomial: {0}")]
    NotMonomial(String),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// σ·f = f for every element σ of the acting group.
pub fn check_invariant(f: &RatFunc, action: &GroupAction) -> Result<bool, OracleError> {
    for s in action.group().elements() {
        let img = f.substitute(action.images(s), action.vars())?;
        if !img.equals(f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Elements acting as the identity on every variable.
pub fn action_kernel(action: &GroupAction) -> Result<Vec<usize>, OracleError> {
    let field = action.field();
    let vars = action.vars();
    let mut out = Vec::new();
    'elems: for s in action.group().elements() {
        for (i, img) in action.images(s).iter().enumerate() {
            if !img.equals(&RatFunc::var(field, vars, i))? {
                continue 'elems;
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// Matrix of x-coefficients of a family of functions affine in the
/// variables `x_indices` (coefficients may involve the other variables).
pub fn affine_linear_part(z_list: &[RatFunc], x_indices: &[usize]) -> Result<Vec<Vec<RatFunc>>, OracleError> {
    let mut rows = Vec::with_capacity(z_list.len());
    for (index, z) in z_list.iter().enumerate() {
        if x_indices.iter().any(|&x| z.den().degree_in(x) > 0) {
            return Err(OracleError::NotAffine { index });
        }
        let (coeffs, _) = z.num().split_affine(x_indices).ok_or(OracleError::NotAffine { index })?;
        let den = RatFunc::from_poly(z.den().clone());
        let row = coeffs
            .into_iter()
            .map(|c: MultiPoly| RatFunc::from_poly(c).div(&den))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// True iff the linear part of the affine family has nonzero determinant,
/// i.e. L(z₁…zₙ) = L(x₁…xₙ).
pub fn check_generates_affine(z_list: &[RatFunc], x_indices: &[usize]) -> Result<bool, OracleError> {
    if z_list.len() != x_indices.len() {
        return Ok(false);
    }
    if z_list.is_empty() {
        return Ok(true);
    }
    let m = affine_linear_part(z_list, x_indices)?;
    Ok(!linalg::determinant(&m)?.is_zero())
}
