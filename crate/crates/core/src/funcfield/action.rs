//! Group actions on rational function fields by variable substitution.
//!
//! Left actions: σ·f = f(σ·x₁, …, σ·xₙ), so the images of στ are obtained by
//! substituting the images of σ into the images of τ.

use std::collections::VecDeque;
use std::sync::Arc;

use super::{FuncError, MultiPoly, RatFunc, VarSet};
use crate::groups::FiniteGroup;
use crate::scalars::FieldSpec;

#[derive(Clone, Debug)]
pub struct GroupAction {
    group: FiniteGroup,
    vars: VarSet,
    field: Arc<FieldSpec>,
    images: Vec<Vec<RatFunc>>,
}

impl GroupAction {
    /// Variables x[g] with h·x[g] = x[hg].
    pub fn regular(group: &FiniteGroup, field: &Arc<FieldSpec>, name: &str, prefix: &str) -> GroupAction {
        let vars = VarSet::new(name, group.elements().map(|g| format!("{prefix}[g{g}]")).collect());
        let images = group
            .elements()
            .map(|h| group.elements().map(|g| RatFunc::var(field, &vars, group.mul(h, g))).collect())
            .collect();
        GroupAction { group: group.clone(), vars, field: field.clone(), images }
    }

    /// The trivial action.
    pub fn trivial(group: &FiniteGroup, field: &Arc<FieldSpec>, vars: &VarSet) -> GroupAction {
        let id: Vec<RatFunc> = (0..vars.len()).map(|i| RatFunc::var(field, vars, i)).collect();
        GroupAction { group: group.clone(), vars: vars.clone(), field: field.clone(), images: vec![id; group.order()] }
    }

    /// Extends generator images to the whole group and verifies the action
    /// law ρ(g·b) = ρ(g)∘ρ(b) for every generator g and every element b,
    /// which together with ρ(1) = id implies the law on all pairs.
    pub fn from_generators(
        group: &FiniteGroup,
        field: &Arc<FieldSpec>,
        vars: &VarSet,
        gens: &[(usize, Vec<RatFunc>)],
    ) -> Result<GroupAction, FuncError> {
        let n = vars.len();
        for (_, img) in gens {
            if img.len() != n {
                return Err(FuncError::Arity { expected: n, found: img.len() });
            }
        }
        let mut images: Vec<Option<Vec<RatFunc>>> = vec![None; group.order()];
        images[0] = Some((0..n).map(|i| RatFunc::var(field, vars, i)).collect());
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            for (g, img) in gens {
                let t = group.mul(*g, s);
                if images[t].is_none() {
                    let composed = compose(images[s].as_ref().unwrap(), img, vars)?;
                    images[t] = Some(composed);
                    queue.push_back(t);
                }
            }
        }
        if images.iter().any(|i| i.is_none()) {
            return Err(FuncError::ActionLaw("generators do not generate the group".into()));
        }
        let images: Vec<Vec<RatFunc>> = images.into_iter().map(Option::unwrap).collect();
        let action = GroupAction { group: group.clone(), vars: vars.clone(), field: field.clone(), images };
        for (g, img) in gens {
            if !vars_equal(&action.images[*g], img)? {
                return Err(FuncError::ActionLaw(format!("generator {g} images inconsistent with relations")));
            }
            for b in group.elements() {
                let lhs = &action.images[group.mul(*g, b)];
                let rhs = compose(&action.images[b], img, vars)?;
                if !vars_equal(lhs, &rhs)? {
                    return Err(FuncError::ActionLaw(format!("law fails for ({g},{b})")));
                }
            }
        }
        Ok(action)
    }

    /// Uses supplied images for every element; checks the law on all pairs.
    pub fn from_all_images(
        group: &FiniteGroup,
        field: &Arc<FieldSpec>,
        vars: &VarSet,
        images: Vec<Vec<RatFunc>>,
    ) -> Result<GroupAction, FuncError> {
        if images.len() != group.order() {
            return Err(FuncError::Arity { expected: group.order(), found: images.len() });
        }
        let action = GroupAction { group: group.clone(), vars: vars.clone(), field: field.clone(), images };
        action.check_law_all_pairs()?;
        Ok(action)
    }

    /// Builds σ(x) = A(σ)x + B(σ) on the variables `x_indices`, with the
    /// remaining variables moved by the base images; inputs are per generator.
    pub fn linear_from_matrices(
        group: &FiniteGroup,
        field: &Arc<FieldSpec>,
        vars: &VarSet,
        x_indices: &[usize],
        gens: &[(usize, Vec<Vec<RatFunc>>, Vec<RatFunc>, Vec<RatFunc>)],
    ) -> Result<GroupAction, FuncError> {
        let mut gen_images = Vec::new();
        for (g, a, b, base) in gens {
            let mut img = base.clone();
            if img.len() != vars.len() {
                return Err(FuncError::Arity { expected: vars.len(), found: img.len() });
            }
            let det = super::linalg::determinant(a)?;
            if det.is_zero() {
                return Err(FuncError::Singular);
            }
            for (row, &xi) in x_indices.iter().enumerate() {
                let mut acc = b[row].clone();
                for (col, &xj) in x_indices.iter().enumerate() {
                    if !a[row][col].is_zero() {
                        acc = acc.add(&a[row][col].mul(&RatFunc::var(field, vars, xj))?)?;
                    }
                }
                img[xi] = acc;
            }
            gen_images.push((*g, img));
        }
        Self::from_generators(group, field, vars, &gen_images)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn images(&self, sigma: usize) -> &[RatFunc] {
        &self.images[sigma]
    }

    pub fn all_images(&self) -> &[Vec<RatFunc>] {
        &self.images
    }

    /// σ·f.
    pub fn act(&self, sigma: usize, f: &RatFunc) -> Result<RatFunc, FuncError> {
        if sigma == 0 {
            return Ok(f.clone());
        }
        f.substitute(&self.images[sigma], &self.vars)
    }

    pub fn act_poly(&self, sigma: usize, f: &MultiPoly) -> Result<RatFunc, FuncError> {
        self.act(sigma, &RatFunc::from_poly(f.clone()))
    }

    pub fn is_invariant(&self, f: &RatFunc) -> Result<bool, FuncError> {
        for s in self.group.elements() {
            if !self.act(s, f)?.equals(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Elements fixing every variable.
    pub fn kernel(&self) -> Result<Vec<usize>, FuncError> {
        let mut out = Vec::new();
        for s in self.group.elements() {
            let mut fixes = true;
            for (i, img) in self.images[s].iter().enumerate() {
                if !img.equals(&RatFunc::var(&self.field, &self.vars, i))? {
                    fixes = false;
                    break;
                }
            }
            if fixes {
                out.push(s);
            }
        }
        Ok(out)
    }

    pub fn is_faithful(&self) -> Result<bool, FuncError> {
        Ok(self.kernel()?.len() == 1)
    }

    /// Checks ρ(ab) = ρ(a)∘ρ(b) for every pair and ρ(1) = id.
    pub fn check_law_all_pairs(&self) -> Result<(), FuncError> {
        let n = self.vars.len();
        for i in 0..n {
            if !self.images[0][i].equals(&RatFunc::var(&self.field, &self.vars, i))? {
                return Err(FuncError::ActionLaw("identity does not act trivially".into()));
            }
        }
        for a in self.group.elements() {
            for b in self.group.elements() {
                let rhs = compose(&self.images[b], &self.images[a], &self.vars)?;
                if !vars_equal(&self.images[self.group.mul(a, b)], &rhs)? {
                    return Err(FuncError::ActionLaw(format!("law fails for ({a},{b})")));
                }
            }
        }
        Ok(())
    }
}

/// Images of the composite "apply `inner` first, then `outer`".
fn compose(inner: &[RatFunc], outer: &[RatFunc], vars: &VarSet) -> Result<Vec<RatFunc>, FuncError> {
    inner.iter().map(|f| f.substitute(outer, vars)).collect()
}

fn vars_equal(a: &[RatFunc], b: &[RatFunc]) -> Result<bool, FuncError> {
    for (x, y) in a.iter().zip(b) {
        if !x.equals(y)? {
            return Ok(false);
        }
    }
    Ok(true)
}
