//! K(H × G) over K(H)·K(G) through the subspace Ũ + Ṽ of U ⊗ V.

use std::sync::Arc;

use serde_json::json;

use super::{affine_descent_step, induced_linear_context, labels, regular_context, var_sum};
use super::{hypothesis, ActionJson, CertBuilder, Certificate, Check, Expr, GenPerm, RationalityWitness, ReduceOptions, ReductionError};
use crate::funcfield::RatFunc;
use crate::groups::{direct_product, FiniteGroup};
use crate::scalars::FieldSpec;

/// Registers the witness space of H (regular on x[h], fixed on w[j]) and
/// its generators with invariance and count claims.
pub(crate) fn register_witness(
    b: &mut CertBuilder,
    group: &str,
    witness: &RationalityWitness,
) -> Result<Vec<Expr>, ReductionError> {
    let h = &witness.group;
    let n = h.order();
    let total = witness.vars.len();
    let gens = h
        .generators()
        .into_iter()
        .map(|s| GenPerm { g: s, perm: (0..total).map(|i| if i < n { h.mul(s, i) } else { i }).collect() })
        .collect();
    b.add_context("witness", group, witness.vars.labels().to_vec(), ActionJson::Permutation { gens })?;
    let vars = b.vars("witness");
    let mut exprs = Vec::new();
    for (i, f) in witness.generators.iter().enumerate() {
        let name = format!("witness{i}");
        b.add_element(&name, "witness", f.embed(&vars, 0));
        b.claim(format!("{name} is invariant"), Check::Invariant { ctx: "witness".into(), expr: Expr::el(&name), under: None })?;
        exprs.push(Expr::el(&name));
    }
    b.claim(
        "witness has |H| + m generators",
        Check::Count { exprs: exprs.clone(), groups: vec![group.into()], offset: witness.extra() as i64 },
    )?;
    b.note(format!("witness: {}", witness.provenance));
    Ok(exprs)
}

pub(crate) fn check_witness_group(witness: &RationalityWitness, h: &FiniteGroup) -> Result<(), ReductionError> {
    if witness.group != *h {
        return Err(hypothesis("the witness is for a different group than H"));
    }
    witness.check().map_err(|e| hypothesis(format!("witness invariance check fails: {e}")))
}

/// Certificate for K(H × G) rational over K(Ũ + Ṽ)^{H×G}, which is
/// K-isomorphic to the free composite K(H)·K(G); with a witness for K(H),
/// the witness generators moved into Ũ.
pub fn theorem19_construct(
    h: &FiniteGroup,
    g: &FiniteGroup,
    field: &Arc<FieldSpec>,
    witness: Option<&RationalityWitness>,
    opts: &ReduceOptions,
) -> Result<Certificate, ReductionError> {
    if let Some(w) = witness {
        check_witness_group(w, h)?;
    }
    let dp = direct_product(h, g);
    let (nh, ng) = (h.order(), g.order());
    let inputs = json!({
        "H": { "order": nh, "description": h.describe() },
        "G": { "order": ng, "description": g.describe() },
        "field": field.label(),
        "witness": witness.map(|w| w.provenance.clone()),
    });
    let mut b = CertBuilder::new("1.9", field, inputs, opts.seed);
    b.add_group("HxG", &dp.group);
    b.add_group("H", h);
    b.add_group("G", g);
    // X[(h,g)] = x(h) ⊗ x(g) with (h', g')·(u ⊗ v) = h'u ⊗ g'v
    let dp2 = dp.clone();
    b.add_context_perm("tensor", "HxG", labels("X", dp.group.order()), move |s| {
        let (a, c) = dp2.split(s);
        dp2.group.elements().map(|e| {
            let (x, y) = dp2.split(e);
            dp2.pair(dp2.left.mul(a, x), dp2.right.mul(c, y))
        }).collect()
    })?;
    b.claim("U ⊗ V is the regular representation of H × G", Check::Regular { ctx: "tensor".into() })?;
    regular_context(&mut b, "U", "H", "u")?;
    regular_context(&mut b, "V", "G", "v")?;
    let u0 = b.eval("U", &var_sum(labels("u", nh)))?;
    b.add_element("u0", "U", u0);
    let v0 = b.eval("V", &var_sum(labels("v", ng)))?;
    b.add_element("v0", "V", v0);
    b.claim("u0 is invariant", Check::Invariant { ctx: "U".into(), expr: Expr::el("u0"), under: None })?;
    b.claim("v0 is invariant", Check::Invariant { ctx: "V".into(), expr: Expr::el("v0"), under: None })?;
    let uforms: Vec<Expr> = h.elements().map(|x| var_sum(g.elements().map(|y| format!("X[{}]", dp.pair(x, y))))).collect();
    let vforms: Vec<Expr> = g.elements().map(|y| var_sum(h.elements().map(|x| format!("X[{}]", dp.pair(x, y))))).collect();
    for (x, f) in uforms.iter().enumerate() {
        let v = b.eval("tensor", f)?;
        b.add_element(&format!("Ut{x}"), "tensor", v);
    }
    for (y, f) in vforms.iter().enumerate() {
        let v = b.eval("tensor", f)?;
        b.add_element(&format!("Vt{y}"), "tensor", v);
    }
    let mut all: Vec<Expr> = (0..nh).map(|x| Expr::el(format!("Ut{x}"))).collect();
    all.extend((0..ng).map(|y| Expr::el(format!("Vt{y}"))));
    b.claim(
        "Ũ + Ṽ is a faithful subspace",
        Check::Kernel { ctx: "tensor".into(), exprs: all.clone(), expected: vec![0] },
    )?;
    b.claim("|Ũ| + |Ṽ| = |H| + |G| elements", Check::Count { exprs: all.clone(), groups: vec!["H".into()], offset: ng as i64 })?;
    b.claim(
        "Ũ and Ṽ meet in K·(u0 ⊗ v0): rank |H| + |G| − 1",
        Check::Rank { ctx: "tensor".into(), exprs: all, expected: nh + ng - 1 },
    )?;
    induced_linear_context(&mut b, "tensor", "Ut", "HxG", labels("Ut", nh), uforms.clone(), None, "Ũ carries the induced action")?;
    induced_linear_context(&mut b, "tensor", "Vt", "HxG", labels("Vt", ng), vforms.clone(), None, "Ṽ carries the induced action")?;
    let proj_h: Vec<usize> = dp.group.elements().map(|e| dp.split(e).0).collect();
    let proj_g: Vec<usize> = dp.group.elements().map(|e| dp.split(e).1).collect();
    b.claim(
        "Ũ is H-equivariantly isomorphic to U, with G acting trivially",
        Check::Intertwine { a: "U".into(), a_vars: labels("u", nh), b: "Ut".into(), b_vars: labels("Ut", nh), hom: proj_h.clone() },
    )?;
    b.claim(
        "Ṽ is G-equivariantly isomorphic to V, with H acting trivially",
        Check::Intertwine { a: "V".into(), a_vars: labels("v", ng), b: "Vt".into(), b_vars: labels("Vt", ng), hom: proj_g },
    )?;
    b.note("K(Ũ + Ṽ)^{H×G} = (K(Ũ + Ṽ)^H)^G is K-isomorphic to the free composite K(H)·K(G)");
    // complete Ũ + Ṽ to a basis of U ⊗ V and descend
    let total = dp.group.order();
    if total <= opts.descent_dim_cap {
        let mut forms = uforms.clone();
        let mut bl = labels("Ut", nh);
        forms.extend(vforms.iter().skip(1).cloned());
        bl.extend((1..ng).map(|y| format!("Vt[{y}]")));
        let l = bl.clone();
        let mut x = Vec::new();
        for hx in 1..nh {
            for gy in 1..ng {
                forms.push(Expr::var(format!("X[{}]", dp.pair(hx, gy))));
                let label = format!("R[{hx},{gy}]");
                bl.push(label.clone());
                x.push(label);
            }
        }
        induced_linear_context(&mut b, "tensor", "basis", "HxG", bl, forms.clone(), None, "the completed basis carries the induced action")?;
        b.claim(
            "Ũ + Ṽ completed by the X[h,g], h, g ≠ 1, is a basis",
            Check::GeneratesAffine { ctx: "tensor".into(), exprs: forms, x: labels("X", total) },
        )?;
        affine_descent_step(&mut b, "basis", &l, &x, "w", opts)?;
        b.note("K(H × G) is rational over K(Ũ + Ṽ)^{H×G}");
    } else {
        b.note(format!(
            "skipped claim: affine descent over K(Ũ + Ṽ) ({total} variables) exceeds the dimension cap {}",
            opts.descent_dim_cap
        ));
    }
    if let Some(w) = witness {
        register_witness(&mut b, "H", w)?;
        let m = w.extra();
        // Ũ together with the extra variables, fixed by H × G
        let mut ul = labels("Ut", nh);
        ul.extend((0..m).map(|j| format!("w[{j}]")));
        let dp3 = dp.clone();
        b.add_context_perm("Ut+w", "HxG", ul.clone(), move |s| {
            let a = dp3.split(s).0;
            (0..nh + m).map(|i| if i < nh { dp3.left.mul(a, i) } else { i }).collect()
        })?;
        b.claim(
            "the witness space maps to Ũ ⊕ K(w) through the projection to H",
            Check::Intertwine {
                a: "witness".into(),
                a_vars: w.vars.labels().to_vec(),
                b: "Ut+w".into(),
                b_vars: ul.clone(),
                hom: proj_h,
            },
        )?;
        b.claim(
            "Ũ ⊕ K(w) restricts to the action on Ũ",
            Check::Intertwine {
                a: "Ut".into(),
                a_vars: labels("Ut", nh),
                b: "Ut+w".into(),
                b_vars: labels("Ut", nh),
                hom: dp.group.elements().collect(),
            },
        )?;
        let vars = b.vars("Ut+w");
        let images: Vec<RatFunc> = (0..nh + m).map(|i| RatFunc::var(field, &vars, i)).collect();
        for (i, f) in w.generators.iter().enumerate() {
            let name = format!("moved{i}");
            let value = f.substitute(&images, &vars)?;
            b.add_element(&name, "Ut+w", value);
            b.claim(
                format!("{name} is invariant under H × G"),
                Check::Invariant { ctx: "Ut+w".into(), expr: Expr::el(&name), under: None },
            )?;
        }
        b.note("with the witness, K(H)·K(G) is rational (stably rational) over K(G), hence so is K(H × G)");
    }
    Ok(b.finish())
}
