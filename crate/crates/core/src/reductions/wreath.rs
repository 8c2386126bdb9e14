//! K(H ≀ G) over K(G) through the blocks U_g spanned by u(g;h).

use std::sync::Arc;

use serde_json::json;

use super::product::{check_witness_group, register_witness};
use super::{affine_descent_step, complete_basis, induced_linear_context, regular_context, var_sum};
use super::{CertBuilder, Certificate, Check, Expr, RationalityWitness, ReduceOptions, ReductionError};
use crate::funcfield::RatFunc;
use crate::groups::{wreath_product, FiniteGroup, WreathStructure};
use crate::scalars::FieldSpec;

/// Largest wreath product whose regular representation is materialized.
pub const REGULAR_WREATH_CAP: usize = 128;

fn u_index(ng_h: usize, g: usize, h: usize) -> usize {
    g * ng_h + h
}

/// (x,σ)·u(g';h) = u(σg'; x_{σg'}·h), as a permutation of the u indices.
fn u_perm(w: &WreathStructure, e: usize) -> Vec<usize> {
    let (x, sigma) = w.split(e);
    let coords = w.base_coords(x);
    let nh = w.h.order();
    let mut out = Vec::with_capacity(w.g.order() * nh);
    for g in w.g.elements() {
        let t = w.g.mul(sigma, g);
        for h in w.h.elements() {
            out.push(u_index(nh, t, w.h.mul(coords[t], h)));
        }
    }
    out
}

/// The same permutation extended by (x,σ)·w(g;j) = w(σg;j).
fn uw_perm(w: &WreathStructure, m: usize, e: usize) -> Vec<usize> {
    let mut out = u_perm(w, e);
    let sigma = w.split(e).1;
    let base = w.g.order() * w.h.order();
    for g in w.g.elements() {
        let t = w.g.mul(sigma, g);
        out.extend((0..m).map(|j| base + t * m + j));
    }
    out
}

fn u_labels(w: &WreathStructure) -> Vec<String> {
    w.g.elements().flat_map(|g| w.h.elements().map(move |h| format!("u[{g},{h}]"))).collect()
}

/// Records the block laws for the expressions `exprs` (indexed like the
/// u(g;h)) in context `ctx`.
fn record_laws(b: &mut CertBuilder, w: &WreathStructure, ctx: &str, exprs: &[Expr]) -> Result<bool, ReductionError> {
    let nh = w.h.order();
    let top: Vec<usize> = w.g.elements().map(|s| w.embed_g(s)).collect();
    let mut ok = b.claim(
        format!("{ctx}: g·u(g';h) = u(gg';h)"),
        Check::Permutes {
            ctx: ctx.into(),
            exprs: exprs.to_vec(),
            elements: top.clone(),
            images: top.iter().map(|&e| u_perm(w, e)).collect(),
        },
    )?;
    let coords: Vec<usize> =
        w.g.elements().flat_map(|g| w.h.elements().map(move |h| (g, h))).map(|(g, h)| w.phi(g, h)).collect();
    ok &= b.claim(
        format!("{ctx}: φ_g(h)·u(g;h') = u(g;hh') and φ_g(h)·u(g';h') = u(g';h') for g' ≠ g"),
        Check::Permutes {
            ctx: ctx.into(),
            exprs: exprs.to_vec(),
            elements: coords.clone(),
            images: coords
                .iter()
                .enumerate()
                .map(|(k, _)| {
                    let (g, h) = (k / nh, k % nh);
                    (0..exprs.len())
                        .map(|i| if i / nh == g { u_index(nh, g, w.h.mul(h, i % nh)) } else { i })
                        .collect()
                })
                .collect(),
        },
    )?;
    let all: Vec<usize> = w.total.elements().collect();
    ok &= b.claim(
        format!("{ctx}: (x,σ)·u(g';h) = u(σg'; x_{{σg'}}·h) for every element"),
        Check::Permutes {
            ctx: ctx.into(),
            exprs: exprs.to_vec(),
            elements: all.clone(),
            images: all.iter().map(|&e| u_perm(w, e)).collect(),
        },
    )?;
    Ok(ok)
}

/// Certificate for K(H ≀ G) rational (or stably rational) over K(G)
/// given a rationality witness for K(H).
pub fn theorem110_construct(
    h: &FiniteGroup,
    g: &FiniteGroup,
    field: &Arc<FieldSpec>,
    witness: &RationalityWitness,
    opts: &ReduceOptions,
) -> Result<Certificate, ReductionError> {
    check_witness_group(witness, h)?;
    let w = wreath_product(h, g, opts.size_cap)?;
    let (nh, ng, order) = (h.order(), g.order(), w.total.order());
    let m = witness.extra();
    let inputs = json!({
        "H": { "order": nh, "description": h.describe() },
        "G": { "order": ng, "description": g.describe() },
        "field": field.label(),
        "witness": witness.provenance,
        "extra": m,
    });
    let mut b = CertBuilder::new("1.10", field, inputs, opts.seed);
    b.add_group("wreath", &w.total);
    b.add_group("H", h);
    b.add_group("G", g);
    let ulabels = u_labels(&w);
    let uvars: Vec<Expr> = ulabels.iter().cloned().map(Expr::Var).collect();

    let regular = order <= REGULAR_WREATH_CAP;
    if regular {
        regular_context(&mut b, "regular", "wreath", "X")?;
        let msub = w.m_subgroup();
        let u0 = b.eval("regular", &var_sum(msub.iter().map(|&x| format!("X[{x}]"))))?;
        b.add_element("u0", "regular", u0);
        b.claim(
            "x·u0 = u0 for every x in M",
            Check::Invariant { ctx: "regular".into(), expr: Expr::el("u0"), under: Some(msub.clone()) },
        )?;
        let mut forms = Vec::with_capacity(ng * nh);
        let mut els = Vec::with_capacity(ng * nh);
        for gg in g.elements() {
            for hh in h.elements() {
                let s = w.total.mul(w.embed_g(gg), w.phi(0, hh));
                let form = var_sum(msub.iter().map(|&x| format!("X[{}]", w.total.mul(s, x))));
                let name = format!("u{gg}_{hh}");
                let value = b.eval("regular", &Expr::act(s, Expr::el("u0")))?;
                b.add_element(&name, "regular", value);
                b.claim(
                    format!("{name} = (g·φ_1(h))·u0"),
                    Check::Equal { ctx: "regular".into(), lhs: Expr::el(&name), rhs: form.clone() },
                )?;
                forms.push(form);
                els.push(Expr::el(&name));
            }
        }
        record_laws(&mut b, &w, "regular", &els)?;
        b.claim(
            "Ũ is a faithful subspace of the regular representation",
            Check::Kernel { ctx: "regular".into(), exprs: els.clone(), expected: vec![0] },
        )?;
        b.claim(
            "the u(g;h) are linearly independent",
            Check::Rank { ctx: "regular".into(), exprs: els.clone(), expected: ng * nh },
        )?;
        induced_linear_context(&mut b, "regular", "Ut", "wreath", ulabels.clone(), forms.clone(), None, "Ũ carries the induced action")?;
        if order <= opts.descent_dim_cap {
            let x = complete_basis(&b, "regular", &forms)?;
            let mut bforms = forms.clone();
            let mut blabels = ulabels.clone();
            for label in &x {
                bforms.push(Expr::var(label.clone()));
                blabels.push(format!("R{label}"));
            }
            let rx: Vec<String> = x.iter().map(|l| format!("R{l}")).collect();
            induced_linear_context(&mut b, "regular", "basis", "wreath", blabels, bforms.clone(), None, "the completed basis carries the induced action")?;
            b.claim(
                "Ũ completed by regular variables is a basis",
                Check::GeneratesAffine { ctx: "regular".into(), exprs: bforms, x: (0..order).map(|i| format!("X[{i}]")).collect() },
            )?;
            affine_descent_step(&mut b, "basis", &ulabels, &rx, "r", opts)?;
            b.note("K(H ≀ G) is rational over K(Ũ)^{H≀G}");
        } else {
            b.note(format!(
                "skipped claim: affine descent over K(Ũ) ({order} variables) exceeds the dimension cap {}",
                opts.descent_dim_cap
            ));
        }
    } else {
        let w2 = w.clone();
        b.add_context_perm("Ut", "wreath", ulabels.clone(), move |e| u_perm(&w2, e))?;
        b.note(format!(
            "regular representation of order {order} not materialized; Ũ is built from the coordinate action"
        ));
    }
    record_laws(&mut b, &w, "Ut", &uvars)?;
    b.claim(
        "Ũ is a faithful H ≀ G-space",
        Check::Kernel { ctx: "Ut".into(), exprs: uvars.clone(), expected: vec![0] },
    )?;

    // Ũ ⊕ Ṽ with g·w(g';j) = w(gg';j) and N acting trivially on Ṽ
    if m > 0 {
        let mut labels = ulabels.clone();
        labels.extend(g.elements().flat_map(|gg| (0..m).map(move |j| format!("w[{gg},{j}]"))));
        let w3 = w.clone();
        b.add_context_perm("UV", "wreath", labels.clone(), move |e| uw_perm(&w3, m, e))?;
        b.claim(
            "Ũ ⊕ Ṽ restricts to the action on Ũ",
            Check::Intertwine {
                a: "Ut".into(),
                a_vars: ulabels.clone(),
                b: "UV".into(),
                b_vars: ulabels.clone(),
                hom: w.total.elements().collect(),
            },
        )?;
        let wvars: Vec<Expr> = labels[ng * nh..].iter().cloned().map(Expr::Var).collect();
        let top: Vec<usize> = g.elements().map(|s| w.embed_g(s)).collect();
        b.claim(
            "g·w(g';j) = w(gg';j)",
            Check::Permutes {
                ctx: "UV".into(),
                exprs: wvars.clone(),
                elements: top.clone(),
                images: top
                    .iter()
                    .map(|&e| {
                        let s = w.split(e).1;
                        (0..ng * m).map(|k| g.mul(s, k / m) * m + k % m).collect()
                    })
                    .collect(),
            },
        )?;
        let base = w.base_elements();
        b.claim(
            "x·w(g;j) = w(g;j) for x in N",
            Check::Permutes {
                ctx: "UV".into(),
                exprs: wvars,
                elements: base.clone(),
                images: vec![(0..ng * m).collect(); base.len()],
            },
        )?;
        let all: Vec<Expr> = labels.iter().cloned().map(Expr::Var).collect();
        b.claim(
            "Ũ ⊕ Ṽ is a faithful H ≀ G-space",
            Check::Kernel { ctx: "UV".into(), exprs: all, expected: vec![0] },
        )?;
    }
    let uv_ctx = if m > 0 { "UV" } else { "Ut" };

    // the witness relocated into U_1 ⊕ K(w(1;j))
    register_witness(&mut b, "H", witness)?;
    let mut l1: Vec<String> = h.elements().map(|hh| format!("u[0,{hh}]")).collect();
    l1.extend((0..m).map(|j| format!("w[0,{j}]")));
    let forms1: Vec<Expr> = l1.iter().cloned().map(Expr::Var).collect();
    let phi1: Vec<usize> = h.elements().map(|hh| w.phi(0, hh)).collect();
    induced_linear_context(&mut b, uv_ctx, "U1", "H", l1.clone(), forms1, Some(phi1), "H_1 acts on U_1 ⊕ K(w(1;·)) through φ_1")?;
    b.claim(
        "the witness space is H-isomorphic to U_1 ⊕ K(w(1;·))",
        Check::Intertwine {
            a: "witness".into(),
            a_vars: witness.vars.labels().to_vec(),
            b: "U1".into(),
            b_vars: l1.clone(),
            hom: h.elements().collect(),
        },
    )?;
    let uvset = b.vars(uv_ctx);
    let d = witness.generators.len();
    let mut vexprs = Vec::with_capacity(ng * d);
    for gg in g.elements() {
        // x[h] ↦ u(g;h), w[j] ↦ w(g;j)
        let images: Vec<RatFunc> = (0..nh + m)
            .map(|i| {
                let label = if i < nh { format!("u[{gg},{i}]") } else { format!("w[{gg},{}]", i - nh) };
                RatFunc::var(field, &uvset, uvset.index_of(&label).expect("block label"))
            })
            .collect();
        for (i, f) in witness.generators.iter().enumerate() {
            let name = format!("v{gg}_{i}");
            let value = f.substitute(&images, &uvset)?;
            b.add_element(&name, uv_ctx, value);
            vexprs.push(Expr::el(&name));
        }
    }
    b.claim(
        "v(g;i) are invariant under N",
        Check::Permutes {
            ctx: uv_ctx.into(),
            exprs: vexprs.clone(),
            elements: w.base_elements(),
            images: vec![(0..vexprs.len()).collect(); w.base_order()],
        },
    )?;
    let top: Vec<usize> = g.elements().map(|s| w.embed_g(s)).collect();
    b.claim(
        "g·v(g';i) = v(gg';i): G permutes each {v(g;i)}_g regularly",
        Check::Permutes {
            ctx: uv_ctx.into(),
            exprs: vexprs.clone(),
            elements: top.clone(),
            images: g.elements().map(|s| (0..ng * d).map(|k| g.mul(s, k / d) * d + k % d).collect()).collect(),
        },
    )?;
    b.claim(
        "|G|·(|H| + m) transported generators",
        Check::Count { exprs: vexprs, groups: vec!["G".into(), "H".into()], offset: (ng * m) as i64 },
    )?;
    b.note("K(Ũ ⊕ Ṽ)^N = K(v(g;i)), permuted by G; K(v(g;i))^G is rational over K(v(g;1))^G ≅ K(G)");
    Ok(b.finish())
}
