//! Monomial generators of K(A) for abelian A, via the character basis and
//! the lattice of invariant exponent vectors.

use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::json;

use super::{induced_linear_context, labels, regular_context, root_of_unity, weighted_sum, ReduceOptions, ReductionError};
use super::{hypothesis, CertBuilder, Certificate, Check, Expr};
use crate::funcfield::{GroupAction, RatFunc, VarSet};
use crate::groups::FiniteGroup;
use crate::oracle::{self, kernel_lattice, IntMatrix};
use crate::scalars::{FieldSpec, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Rational,
    /// K(H)(w₁…w_m) is rational, with m extra variables.
    StablyRational { extra: usize },
}

/// Generators of K(H) (or of K(H)(w₁…w_m)) in the regular variables
/// `x[h]` of H, followed by the extra variables `w[j]`.
#[derive(Clone, Debug)]
pub struct RationalityWitness {
    pub group: FiniteGroup,
    pub field: Arc<FieldSpec>,
    pub vars: VarSet,
    pub generators: Vec<RatFunc>,
    pub kind: WitnessKind,
    pub provenance: String,
}

impl RationalityWitness {
    pub fn extra(&self) -> usize {
        match self.kind {
            WitnessKind::Rational => 0,
            WitnessKind::StablyRational { extra } => extra,
        }
    }

    /// H acting regularly on x[h] and trivially on w[j].
    pub fn action(&self) -> Result<GroupAction, ReductionError> {
        let g = &self.group;
        let n = g.order();
        let images = g
            .elements()
            .map(|s| {
                (0..self.vars.len())
                    .map(|i| RatFunc::var(&self.field, &self.vars, if i < n { g.mul(s, i) } else { i }))
                    .collect()
            })
            .collect();
        Ok(GroupAction::from_all_images(g, &self.field, &self.vars, images)?)
    }

    /// Every generator is invariant and the count matches |H| + m.
    pub fn check(&self) -> Result<(), ReductionError> {
        if self.generators.len() != self.group.order() + self.extra() {
            return Err(hypothesis(format!(
                "witness has {} generators, expected {}",
                self.generators.len(),
                self.group.order() + self.extra()
            )));
        }
        let action = self.action()?;
        for (i, f) in self.generators.iter().enumerate() {
            if !oracle::check_invariant(f, &action)? {
                return Err(hypothesis(format!("witness generator {i} is not invariant")));
            }
        }
        Ok(())
    }

    /// The same generators together with m new variables w[j].
    pub fn stabilize(&self, m: usize) -> RationalityWitness {
        let n = self.group.order();
        let base = self.extra();
        let mut names: Vec<String> = self.vars.labels().to_vec();
        names.extend((base..base + m).map(|j| format!("w[{j}]")));
        let vars = VarSet::new("witness", names);
        let mut generators: Vec<RatFunc> = self.generators.iter().map(|f| f.embed(&vars, 0)).collect();
        generators.extend((0..m).map(|j| RatFunc::var(&self.field, &vars, n + base + j)));
        RationalityWitness {
            group: self.group.clone(),
            field: self.field.clone(),
            vars,
            generators,
            kind: WitnessKind::StablyRational { extra: base + m },
            provenance: format!("{}, with {m} added variables", self.provenance),
        }
    }
}

struct CharacterData {
    exponent: u64,
    zeta: Scalar,
    /// eps[b][a]: χ_b(a) = ζ^eps.
    eps: Vec<Vec<u64>>,
}

fn character_data(a: &FiniteGroup, field: &Arc<FieldSpec>) -> Result<CharacterData, ReductionError> {
    if !a.is_abelian() {
        return Err(hypothesis("requires an abelian group"));
    }
    let e = a.exponent() as u64;
    let zeta = root_of_unity(field, e)?;
    let basis = a.abelian_basis()?;
    let coords = a.abelian_coordinates(&basis);
    let orders: Vec<u64> = basis.iter().map(|&b| a.element_order(b) as u64).collect();
    let eps = a
        .elements()
        .map(|b| {
            a.elements()
                .map(|x| {
                    coords[b].iter().zip(&coords[x]).zip(&orders).map(|((&i, &j), &d)| i * j % d * (e / d)).sum::<u64>()
                        % e
                })
                .collect()
        })
        .collect();
    Ok(CharacterData { exponent: e, zeta, eps })
}

/// Character forms y_b = Σ_a χ_b(a)·x[a] in the regular variables `prefix`.
fn character_forms(chars: &CharacterData, prefix: &str) -> Vec<Expr> {
    chars
        .eps
        .iter()
        .map(|row| {
            weighted_sum(
                row.iter()
                    .enumerate()
                    .map(|(a, &k)| (chars.zeta.pow_u(k as u128).coeff_strings(), format!("{prefix}[{a}]")))
                    .collect(),
            )
        })
        .collect()
}

/// Invariant exponent lattice of the character coordinates: rows are
/// basis vectors, plus the index.
fn invariant_lattice(chars: &CharacterData) -> (IntMatrix, BigInt, Vec<Vec<i64>>) {
    let n = chars.eps.len();
    let matrix: Vec<Vec<i64>> = (0..n).map(|a| (0..n).map(|b| chars.eps[b][a] as i64).collect()).collect();
    let m = IntMatrix::from_i64(&matrix);
    let moduli = vec![BigInt::from(chars.exponent); n];
    let (basis, index) = kernel_lattice(&m, &moduli);
    (basis, index, matrix)
}

fn monomial_expr(row: &[i64], prefix: &str) -> Expr {
    let factors: Vec<Expr> = row
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(b, &v)| if v == 1 { Expr::var(format!("{prefix}[{b}]")) } else { Expr::pow(Expr::var(format!("{prefix}[{b}]")), v) })
        .collect();
    Expr::Mul(factors)
}

/// Certificate for K(A) = K(f₁,…,f_|A|) with monomials fᵢ in the character
/// coordinates.
pub fn fischer(a: &FiniteGroup, field: &Arc<FieldSpec>, opts: &ReduceOptions) -> Result<Certificate, ReductionError> {
    let chars = character_data(a, field)?;
    let n = a.order();
    let inputs = json!({ "group": { "order": n, "description": a.describe() }, "field": field.label() });
    let mut b = CertBuilder::new("fischer", field, inputs, opts.seed);
    b.add_group("A", a);
    regular_context(&mut b, "regular", "A", "x")?;
    if chars.exponent > 1 {
        b.claim(
            format!("zeta has order {}", chars.exponent),
            Check::ScalarOrder { value: chars.zeta.coeff_strings(), expected: chars.exponent },
        )?;
    }
    let forms = character_forms(&chars, "x");
    induced_linear_context(&mut b, "regular", "chars", "A", labels("y", n), forms.clone(), None, "a·y_b = χ_b(a)⁻¹·y_b")?;
    b.claim(
        "the character forms are a basis",
        Check::GeneratesAffine { ctx: "regular".into(), exprs: forms, x: labels("x", n) },
    )?;
    let (basis, index, matrix) = invariant_lattice(&chars);
    let to_s = |rows: &[Vec<i64>]| rows.iter().map(|r| r.iter().map(i64::to_string).collect()).collect::<Vec<Vec<String>>>();
    let rows = basis.to_i64().expect("lattice basis entries fit in i64");
    b.claim(
        "invariant exponent lattice has index |A|",
        Check::Lattice {
            matrix: to_s(&matrix),
            moduli: vec![chars.exponent.to_string(); n],
            basis: to_s(&rows),
            index: index.to_string(),
            index_is_order_of: Some("A".into()),
        },
    )?;
    let mut gens = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let name = format!("f{i}");
        let value = b.eval("chars", &monomial_expr(row, "y"))?;
        b.add_element(&name, "chars", value);
        b.claim(format!("{name} is invariant"), Check::Invariant { ctx: "chars".into(), expr: Expr::el(&name), under: None })?;
        gens.push(Expr::el(&name));
    }
    b.claim(
        "generators are the lattice monomials",
        Check::Monomials { ctx: "chars".into(), exprs: gens.clone(), exponents: to_s(&rows) },
    )?;
    b.claim("|A| generators", Check::Count { exprs: gens, groups: vec!["A".into()], offset: 0 })?;
    b.note("invariant monomials of exponent lattice index |A| = [K(y):K(y)^A] generate K(A) = K(y)^A");
    Ok(b.finish())
}

/// The lattice monomials rewritten in the regular variables x[a].
pub fn fischer_witness(a: &FiniteGroup, field: &Arc<FieldSpec>) -> Result<RationalityWitness, ReductionError> {
    let chars = character_data(a, field)?;
    let n = a.order();
    let vars = VarSet::new("witness", labels("x", n));
    let ys: Vec<RatFunc> = chars
        .eps
        .iter()
        .map(|row| {
            let mut acc = RatFunc::zero(field, &vars);
            for (x, &k) in row.iter().enumerate() {
                acc = acc.add(&RatFunc::var(field, &vars, x).scale(&chars.zeta.pow_u(k as u128)))?;
            }
            Ok(acc)
        })
        .collect::<Result<_, ReductionError>>()?;
    let (basis, _, _) = invariant_lattice(&chars);
    let rows = basis.to_i64().expect("lattice basis entries fit in i64");
    let mut generators = Vec::with_capacity(n);
    for row in &rows {
        let mut f = RatFunc::one(field, &vars);
        for (y, &v) in ys.iter().zip(row) {
            if v != 0 {
                f = f.mul(&y.pow(v)?)?;
            }
        }
        generators.push(f);
    }
    let w = RationalityWitness {
        group: a.clone(),
        field: field.clone(),
        vars,
        generators,
        kind: super::WitnessKind::Rational,
        provenance: "lattice monomials in the character coordinates".into(),
    };
    w.check()?;
    Ok(w)
}
