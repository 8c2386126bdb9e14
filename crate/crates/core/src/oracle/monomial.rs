//! Invariants of monomial actions σ·yᵢ = c_σ,ᵢ · y_{π_σ(i)}.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

use super::{check_invariant, kernel_lattice, IntMatrix, OracleError};
use crate::funcfield::{monomial, GroupAction, RatFunc, VarSet};
use crate::groups::FiniteGroup;
use crate::scalars::{primitive_root, FieldSpec, Scalar};

/// Bound on the multiplicative order searched for multipliers.
const ORDER_BOUND: u64 = 4096;

#[derive(Clone, Debug)]
pub struct MonomialActionSpec {
    pub group: FiniteGroup,
    pub field: Arc<FieldSpec>,
    pub vars: VarSet,
    /// `perms[σ][i]` is the index of the variable yᵢ is sent to.
    pub perms: Vec<Vec<usize>>,
    /// `mults[σ][i]` is the scalar multiplying that variable.
    pub mults: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
pub struct MonomialInvariants {
    pub generators: Vec<RatFunc>,
    /// Exponent vectors of the generators (diagonal case).
    pub exponents: Option<IntMatrix>,
    /// [ℤⁿ : lattice] in the diagonal case.
    pub index: Option<BigInt>,
    pub diagonal: bool,
    /// Exponent e with every multiplier an e-th power of `zeta`.
    pub exponent: Option<u64>,
}

impl MonomialActionSpec {
    /// Diagonal action from per-element multipliers.
    pub fn diagonal(group: &FiniteGroup, field: &Arc<FieldSpec>, vars: &VarSet, mults: Vec<Vec<Scalar>>) -> Self {
        let n = vars.len();
        MonomialActionSpec {
            group: group.clone(),
            field: field.clone(),
            vars: vars.clone(),
            perms: vec![(0..n).collect(); group.order()],
            mults,
        }
    }

    /// Checks shapes, finite multiplier orders and the composition law
    /// (στ)·yᵢ = σ·(τ·yᵢ) over all pairs.
    pub fn validate(&self) -> Result<(), OracleError> {
        let n = self.vars.len();
        let order = self.group.order();
        if self.perms.len() != order || self.mults.len() != order {
            return Err(OracleError::NotMonomial("one entry per group element required".into()));
        }
        for s in 0..order {
            let p = &self.perms[s];
            let mut seen = vec![false; n];
            if p.len() != n || self.mults[s].len() != n {
                return Err(OracleError::NotMonomial(format!("element {s}: wrong arity")));
            }
            for &j in p {
                if j >= n || seen[j] {
                    return Err(OracleError::NotMonomial(format!("element {s}: not a permutation")));
                }
                seen[j] = true;
            }
            for c in &self.mults[s] {
                if c.multiplicative_order(ORDER_BOUND).is_none() {
                    return Err(OracleError::NotMonomial(format!("element {s}: multiplier {c} is not a root of unity")));
                }
            }
        }
        for s in 0..order {
            for t in 0..order {
                let st = self.group.mul(s, t);
                for i in 0..n {
                    let j = self.perms[t][i];
                    let expect_var = self.perms[s][j];
                    let expect_mult = &self.mults[t][i] * &self.mults[s][j];
                    if self.perms[st][i] != expect_var || self.mults[st][i] != expect_mult {
                        return Err(OracleError::NotMonomial(format!("composition law fails for ({s},{t})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_diagonal(&self) -> bool {
        self.perms.iter().all(|p| p.iter().enumerate().all(|(i, &j)| i == j))
    }

    pub fn to_action(&self) -> Result<GroupAction, OracleError> {
        let images = (0..self.group.order())
            .map(|s| {
                (0..self.vars.len())
                    .map(|i| RatFunc::var(&self.field, &self.vars, self.perms[s][i]).scale(&self.mults[s][i]))
                    .collect()
            })
            .collect();
        Ok(GroupAction::from_all_images(&self.group, &self.field, &self.vars, images)?)
    }
}

/// Invariant generators of a monomial action. Diagonal actions use the
/// kernel lattice of the character-exponent matrix; otherwise orbit sums
/// and orbit products are returned, each checked for invariance.
pub fn monomial_invariant_generators(spec: &MonomialActionSpec) -> Result<MonomialInvariants, OracleError> {
    spec.validate()?;
    let action = spec.to_action()?;
    let n = spec.vars.len();
    if spec.is_diagonal() {
        let mut e = 1u64;
        for row in &spec.mults {
            for c in row {
                e = e.lcm(&c.multiplicative_order(ORDER_BOUND).expect("validated"));
            }
        }
        let zeta = primitive_root(&spec.field, e)?;
        let powers: Vec<Scalar> = (0..e).map(|k| zeta.pow_u(k as u128)).collect();
        let mut rows = Vec::with_capacity(spec.group.order());
        for row in &spec.mults {
            let exps = row
                .iter()
                .map(|c| powers.iter().position(|p| p == c).map(|k| BigInt::from(k as u64)))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| OracleError::NotMonomial("multiplier outside ⟨ζ⟩".into()))?;
            rows.push(exps);
        }
        let m = IntMatrix::new(rows);
        let moduli = vec![BigInt::from(e); m.rows];
        let (basis, index) = kernel_lattice(&m, &moduli);
        let mut generators = Vec::with_capacity(basis.rows);
        for v in &basis.entries {
            let exps: Vec<u32> = v.iter().map(|x| u32::try_from(x).expect("nonnegative HNF entry")).collect();
            let g = monomial(&spec.field, &spec.vars, exps);
            if !check_invariant(&g, &action)? {
                return Err(OracleError::NotMonomial("lattice monomial failed invariance".into()));
            }
            generators.push(g);
        }
        return Ok(MonomialInvariants {
            generators,
            exponents: Some(basis),
            index: Some(index),
            diagonal: true,
            exponent: Some(e),
        });
    }
    let mut generators: Vec<RatFunc> = Vec::new();
    let mut covered = vec![false; n];
    for i in 0..n {
        if covered[i] {
            continue;
        }
        for s in spec.group.elements() {
            covered[spec.perms[s][i]] = true;
        }
        let y = RatFunc::var(&spec.field, &spec.vars, i);
        let mut sum = RatFunc::zero(&spec.field, &spec.vars);
        let mut prod = RatFunc::one(&spec.field, &spec.vars);
        for s in spec.group.elements() {
            let img = action.act(s, &y)?;
            sum = sum.add(&img)?;
            prod = prod.mul(&img)?;
        }
        for cand in [sum, prod] {
            if cand.is_zero() || cand.as_constant().is_some() {
                continue;
            }
            let mut dup = false;
            for g in &generators {
                if g.equals(&cand)? {
                    dup = true;
                    break;
                }
            }
            if !dup && check_invariant(&cand, &action)? {
                generators.push(cand);
            }
        }
    }
    Ok(MonomialInvariants { generators, exponents: None, index: None, diagonal: false, exponent: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::cyclic;
    use crate::scalars::{field_with_root_of_unity, FieldExt};

    #[test]
    fn sign_action() {
        let k = field_with_root_of_unity(0, 1).unwrap();
        let g = cyclic(2);
        let v = VarSet::indexed("y", "y", 1);
        let spec = MonomialActionSpec::diagonal(&g, &k, &v, vec![vec![k.one()], vec![k.from_i64(-1)]]);
        let out = monomial_invariant_generators(&spec).unwrap();
        assert_eq!(out.index, Some(BigInt::from(2)));
        assert_eq!(out.generators.len(), 1);
        assert!(out.generators[0].equals(&monomial(&k, &v, vec![2])).unwrap());
    }

    #[test]
    fn cyclic3_characters() {
        let k = field_with_root_of_unity(0, 3).unwrap();
        let z = k.zeta();
        let g = cyclic(3);
        let v = VarSet::indexed("y", "y", 3);
        let mults = (0..3u128).map(|a| (0..3u128).map(|i| z.pow_u(a * i)).collect()).collect();
        let spec = MonomialActionSpec::diagonal(&g, &k, &v, mults);
        let out = monomial_invariant_generators(&spec).unwrap();
        assert_eq!(out.index, Some(BigInt::from(3)));
        let exps = out.exponents.unwrap().to_i64().unwrap();
        assert_eq!(exps, vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 3]]);
    }

    #[test]
    fn swap_uses_orbit_functions() {
        let k = field_with_root_of_unity(0, 1).unwrap();
        let g = cyclic(2);
        let v = VarSet::indexed("ab", "v", 2);
        let spec = MonomialActionSpec {
            group: g,
            field: k.clone(),
            vars: v.clone(),
            perms: vec![vec![0, 1], vec![1, 0]],
            mults: vec![vec![k.one(), k.one()]; 2],
        };
        let out = monomial_invariant_generators(&spec).unwrap();
        assert!(!out.diagonal && out.index.is_none());
        let a = RatFunc::var(&k, &v, 0);
        let b = RatFunc::var(&k, &v, 1);
        assert_eq!(out.generators.len(), 2);
        assert!(out.generators[0].equals(&a.add(&b).unwrap()).unwrap());
        assert!(out.generators[1].equals(&a.mul(&b).unwrap()).unwrap());
    }

    #[test]
    fn rejects_bad_law() {
        let k = field_with_root_of_unity(0, 1).unwrap();
        let g = cyclic(3);
        let v = VarSet::indexed("y", "y", 1);
        let m = vec![vec![k.one()], vec![k.from_i64(-1)], vec![k.from_i64(-1)]];
        let spec = MonomialActionSpec::diagonal(&g, &k, &v, m);
        assert!(matches!(monomial_invariant_generators(&spec), Err(OracleError::NotMonomial(_))));
    }
}
