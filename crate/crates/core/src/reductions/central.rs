//! Reductions along extensions by ℤ/p in characteristic p, and the chains
//! built from them.

use std::sync::Arc;

use serde_json::json;

use super::{affine_descent_step, induced_linear_context, labels, regular_context, weighted_sum};
use super::{hypothesis, theorem11_embed, CertBuilder, CertError, Certificate, Check, Expr, ReduceOptions, ReductionError};
use crate::descent::{minimal_invariant, SemiAffineSetup};
use crate::funcfield::RatFunc;
use crate::groups::{cyclic, direct_product, find_central_order_p, quotient, CentralExtensionData, FiniteGroup, Homomorphism};
use crate::scalars::{FieldExt, FieldSpec, Scalar};

fn coeff(field: &Arc<FieldSpec>, num: i64, den: i64) -> Result<Scalar, ReductionError> {
    Ok(field.from_i64(num).checked_div(&field.from_i64(den))?)
}

/// Certificate that K(G̃) is rational over a field K-isomorphic to K(G)
/// for 1 → ℤ/p → G̃ → G → 1 and char K = p.
pub fn theorem16_reduce(
    ext: &CentralExtensionData,
    field: &Arc<FieldSpec>,
    opts: &ReduceOptions,
) -> Result<Certificate, ReductionError> {
    if field.characteristic() != ext.p {
        return Err(hypothesis(format!("requires char K = p = {}, got char K = {}", ext.p, field.characteristic())));
    }
    ext.verify()?;
    let p = ext.p as usize;
    let q = &ext.quotient;
    let m = q.order();
    let tilde = &ext.total;
    let inputs = json!({
        "total": { "order": tilde.order(), "description": tilde.describe() },
        "c": ext.c,
        "p": p,
        "field": field.label(),
    });
    let mut b = CertBuilder::new("1.6", field, inputs, opts.seed);
    b.add_group("tilde", tilde);
    b.add_group("G", q);
    b.claim(
        "extension data (section, factor set, conjugation exponents) match the tables",
        Check::Extension {
            total: "tilde".into(),
            quotient: "G".into(),
            c: ext.c,
            pi: ext.pi.map.clone(),
            section: ext.section.clone(),
            factor_set: ext.factor_set.clone(),
            conj_exp: ext.conj_exp.clone(),
        },
    )?;
    regular_context(&mut b, "regular", "tilde", "x")?;
    let ix = |i: usize, g: usize| format!("x[{}]", ext.element(i as u64, g));
    for g in q.elements() {
        let y = b.eval("regular", &Expr::Add((0..p).map(|i| Expr::var(ix(i, g))).collect()))?;
        b.add_element(&format!("y{g}"), "regular", y);
        let z = b.eval(
            "regular",
            &weighted_sum((1..p).map(|i| (field.from_i64(i as i64).coeff_strings(), ix(i, g))).collect()),
        )?;
        b.add_element(&format!("zg{g}"), "regular", z);
    }
    let z = b.eval("regular", &Expr::Add(q.elements().map(|g| Expr::el(format!("zg{g}"))).collect()))?;
    b.add_element("z", "regular", z);
    let c = ext.c;
    for g in q.elements() {
        b.claim(
            format!("c·y(g) = y(g) for g = {g}"),
            Check::Invariant { ctx: "regular".into(), expr: Expr::el(format!("y{g}")), under: Some(vec![c]) },
        )?;
        b.claim(
            format!("c·z(g) = z(g) − y(g) for g = {g}"),
            Check::Equal {
                ctx: "regular".into(),
                lhs: Expr::act(c, Expr::el(format!("zg{g}"))),
                rhs: Expr::sub(Expr::el(format!("zg{g}")), Expr::el(format!("y{g}"))),
            },
        )?;
    }
    for h in q.elements() {
        let n = ext.conj_exp[h] as i64;
        let u = ext.section[h];
        for g in q.elements() {
            let mm = ext.factor_set[h][g] as i64;
            let hg = q.mul(h, g);
            b.claim(
                format!("u(h)·z(g) = (1/n)z(hg) − (m/n)y(hg) for h = {h}, g = {g}"),
                Check::Equal {
                    ctx: "regular".into(),
                    lhs: Expr::act(u, Expr::el(format!("zg{g}"))),
                    rhs: Expr::Add(vec![
                        Expr::Mul(vec![Expr::Scalar(coeff(field, 1, n)?.coeff_strings()), Expr::el(format!("zg{hg}"))]),
                        Expr::Mul(vec![Expr::Scalar(coeff(field, -mm, n)?.coeff_strings()), Expr::el(format!("y{hg}"))]),
                    ]),
                },
            )?;
        }
        let mut rhs = vec![Expr::Mul(vec![Expr::Scalar(coeff(field, 1, n)?.coeff_strings()), Expr::el("z")])];
        for g in q.elements() {
            let mm = ext.factor_set[h][g] as i64;
            if mm % p as i64 != 0 {
                rhs.push(Expr::Mul(vec![
                    Expr::Scalar(coeff(field, -mm, n)?.coeff_strings()),
                    Expr::el(format!("y{}", q.mul(h, g))),
                ]));
            }
        }
        b.claim(
            format!("u(h)·z = (1/n)z − Σ_g (m(g)/n)·y(hg) for h = {h}"),
            Check::Equal { ctx: "regular".into(), lhs: Expr::act(u, Expr::el("z")), rhs: Expr::Add(rhs) },
        )?;
    }
    let mut wforms: Vec<Expr> = q.elements().map(|g| Expr::el(format!("y{g}"))).collect();
    wforms.push(Expr::el("z"));
    b.claim(
        "the action on W ⊕ K·z is faithful",
        Check::Kernel { ctx: "regular".into(), exprs: wforms.clone(), expected: vec![0] },
    )?;
    // the affine law on (y(g), z) for every element, from the extension data
    let mut wl = labels("Y", m);
    wl.push("Z".into());
    let ext2 = ext.clone();
    let f2 = field.clone();
    b.add_context_images("w", "tilde", wl.clone(), move |vars, s| {
        let (i, h) = ext2.decompose(s);
        let q = &ext2.quotient;
        let n = ext2.conj_exp[h] as i64;
        let inv_n = coeff(&f2, 1, n).map_err(|e| CertError::Schema(e.to_string()))?;
        let mut out: Vec<RatFunc> = q.elements().map(|g| RatFunc::var(&f2, vars, q.mul(h, g))).collect();
        let mut zimg = RatFunc::var(&f2, vars, m);
        for g in q.elements() {
            let y = RatFunc::var(&f2, vars, g);
            zimg = zimg.sub(&y.scale(&f2.from_i64(i as i64)))?;
            let mm = ext2.factor_set[h][g] as i64;
            zimg = zimg.sub(&RatFunc::var(&f2, vars, q.mul(h, g)).scale(&f2.from_i64(mm)))?;
        }
        out.push(zimg.scale(&inv_n));
        Ok(out)
    })?;
    b.claim(
        "the affine law of z over K(W) matches direct substitution for every element",
        Check::Induced { source: "regular".into(), target: "w".into(), forms: wforms, hom: None },
    )?;
    regular_context(&mut b, "G-regular", "G", "v")?;
    b.claim(
        "W is G-equivariantly isomorphic to the regular representation of G",
        Check::Intertwine {
            a: "G-regular".into(),
            a_vars: labels("v", m),
            b: "w".into(),
            b_vars: labels("Y", m),
            hom: ext.pi.map.clone(),
        },
    )?;
    let action = b.context("w").action.clone();
    let l: Vec<usize> = (0..m).collect();
    let setup = SemiAffineSetup::from_action(action, &l, &[m])?;
    let mi = minimal_invariant(&setup, opts.seed, opts.max_retries)?;
    b.add_retries(mi.retries as u64);
    let d = mi.degree as usize;
    b.add_element("t0", "w", mi.f.clone());
    b.claim("t0 is invariant", Check::Invariant { ctx: "w".into(), expr: Expr::el("t0"), under: None })?;
    b.claim(
        format!("t0 has degree {d} in z"),
        Check::Degree { ctx: "w".into(), expr: Expr::el("t0"), var: "Z".into(), expected: d as i64 },
    )?;
    b.claim(
        format!("every invariant polynomial in z outside K(W) has degree ≥ {d}"),
        Check::KernelOrbit { ctx: "w".into(), l: labels("Y", m), x: "Z".into(), expected: d },
    )?;
    b.note("K(W ⊕ K·z)^{tilde} = K(W)^{tilde}(t0), and K(W)^{tilde} = K(W)^G is K-isomorphic to K(G)");
    // complete (y, z) to a basis of the regular representation and descend
    let total = tilde.order();
    if total <= opts.descent_dim_cap {
        let mut forms: Vec<Expr> = (0..m).map(|g| Expr::el(format!("y{g}"))).collect();
        forms.push(Expr::el("z"));
        let mut bl = wl.clone();
        let mut x = Vec::new();
        for k in 1..p {
            for g in q.elements() {
                if k == 1 && g == 0 {
                    continue;
                }
                let pw = |i: usize| field.from_i64(i as i64).pow_u(k as u128);
                forms.push(weighted_sum(
                    (0..p).filter(|&i| !pw(i).is_zero()).map(|i| (pw(i).coeff_strings(), ix(i, g))).collect(),
                ));
                let label = format!("B[{k},{g}]");
                bl.push(label.clone());
                x.push(label);
            }
        }
        induced_linear_context(&mut b, "regular", "basis", "tilde", bl, forms.clone(), None, "the completed basis carries the induced action")?;
        b.claim(
            "y(g), z and the power sums form a basis",
            Check::GeneratesAffine { ctx: "regular".into(), exprs: forms, x: labels("x", total) },
        )?;
        affine_descent_step(&mut b, "basis", &wl, &x, "w", opts)?;
        b.note("K(tilde) is rational over K(W ⊕ K·z)^{tilde}");
    } else {
        b.note(format!(
            "skipped claim: affine descent over K(W ⊕ K·z) ({total} variables) exceeds the dimension cap {}",
            opts.descent_dim_cap
        ));
    }
    Ok(b.finish())
}

fn chain_links(b: &mut CertBuilder, steps: &[CentralExtensionData]) -> Result<(), ReductionError> {
    for (k, e) in steps.iter().enumerate() {
        b.add_group(&format!("step{k}.total"), &e.total);
        b.add_group(&format!("step{k}.quotient"), &e.quotient);
    }
    for k in 1..steps.len() {
        let id: Vec<usize> = steps[k].total.elements().collect();
        b.claim(
            format!("step {} starts from the quotient of step {}", k, k - 1),
            Check::Isomorphism { source: format!("step{}.quotient", k - 1), target: format!("step{k}.total"), map: id },
        )?;
    }
    Ok(())
}

/// Chain of ℤ/p reductions from K(H × G) down to K(G) for a p-group H in
/// characteristic p, quotienting by a central element of order p each time.
pub fn theorem17_chain(
    h: &FiniteGroup,
    g: &FiniteGroup,
    field: &Arc<FieldSpec>,
    opts: &ReduceOptions,
) -> Result<Certificate, ReductionError> {
    let p = field.characteristic();
    if p == 0 {
        return Err(hypothesis("requires char K = p > 0"));
    }
    if !h.is_trivial() && !h.is_p_group(p) {
        return Err(hypothesis(format!("requires H to be a {p}-group, got order {}", h.order())));
    }
    let inputs = json!({
        "H": { "order": h.order(), "description": h.describe() },
        "G": { "order": g.order(), "description": g.describe() },
        "field": field.label(),
    });
    let mut b = CertBuilder::new("1.7", field, inputs, opts.seed);
    let mut steps = Vec::new();
    let mut cur = h.clone();
    while cur.order() > 1 {
        let sigma = find_central_order_p(&cur, p)?;
        let tilde = direct_product(&cur, g);
        let (hq, pih) = quotient(&cur, &cur.subgroup_generated(&[sigma]))?;
        let next = direct_product(&hq, g);
        let map = tilde
            .group
            .elements()
            .map(|e| {
                let (x, y) = tilde.split(e);
                next.pair(pih.apply(x), y)
            })
            .collect();
        let pi = Homomorphism::new(&tilde.group, &next.group, map)?;
        steps.push(CentralExtensionData::with_projection(&tilde.group, tilde.pair(sigma, 0), pi)?);
        cur = hq;
    }
    finish_chain(&mut b, &steps, g, field, opts)?;
    Ok(b.finish())
}

fn finish_chain(
    b: &mut CertBuilder,
    steps: &[CentralExtensionData],
    g: &FiniteGroup,
    field: &Arc<FieldSpec>,
    opts: &ReduceOptions,
) -> Result<(), ReductionError> {
    b.add_group("G", g);
    chain_links(b, steps)?;
    if let Some(last) = steps.last() {
        if let Some(iso) = crate::groups::find_isomorphism(&last.quotient, g) {
            b.claim(
                "the last quotient is isomorphic to G",
                Check::Isomorphism { source: format!("step{}.quotient", steps.len() - 1), target: "G".into(), map: iso.map },
            )?;
        } else if last.quotient.order() == g.order() {
            b.note("the last quotient has the order of G; isomorphism search skipped above order 64");
        }
    } else {
        b.note("H is trivial: the chain is empty and the certificate is the identity");
    }
    for (k, e) in steps.iter().enumerate() {
        let sub = theorem16_reduce(e, field, opts)?;
        b.add_retries(sub.retries);
        b.add_sub(format!("step {k} reduces K(step{k}.total) to K(step{k}.quotient)"), sub)?;
    }
    b.note(format!("chain of length {}", steps.len()));
    Ok(())
}

/// Chain for G̃ with a normal p-subgroup H that is cyclic or central and
/// abelian, quotienting by an order-p subgroup of H at each step.
pub fn theorem18_chain(
    total: &FiniteGroup,
    h: &[usize],
    field: &Arc<FieldSpec>,
    opts: &ReduceOptions,
) -> Result<Certificate, ReductionError> {
    let p = field.characteristic();
    if p == 0 {
        return Err(hypothesis("requires char K = p > 0"));
    }
    let mut hset = total.subgroup_generated(h);
    hset.sort_unstable();
    if !total.is_normal(&hset) {
        return Err(hypothesis("requires H normal in the total group"));
    }
    let size = hset.len() as u64;
    let mut k = size;
    while k.is_multiple_of(p) {
        k /= p;
    }
    if k != 1 {
        return Err(hypothesis(format!("requires H to be a {p}-group, got order {size}")));
    }
    let is_cyclic = hset.iter().any(|&a| total.element_order(a) as u64 == size);
    let center = total.center();
    let central_abelian = hset.iter().all(|a| center.contains(a));
    if !is_cyclic && !central_abelian {
        return Err(hypothesis("requires H cyclic or an abelian subgroup of the center"));
    }
    let inputs = json!({
        "total": { "order": total.order(), "description": total.describe() },
        "H": hset.clone(),
        "field": field.label(),
    });
    let mut b = CertBuilder::new("1.8", field, inputs, opts.seed);
    let mut steps: Vec<CentralExtensionData> = Vec::new();
    let mut cur = total.clone();
    while hset.len() > 1 {
        let c = *hset.iter().find(|&&a| cur.element_order(a) as u64 == p).expect("p-group has an element of order p");
        let ext = CentralExtensionData::new(&cur, c)?;
        let mut image: Vec<usize> = hset.iter().map(|&a| ext.pi.apply(a)).collect();
        image.sort_unstable();
        image.dedup();
        hset = image;
        cur = ext.quotient.clone();
        steps.push(ext);
    }
    let g = cur.clone();
    finish_chain(&mut b, &steps, &g, field, opts)?;
    Ok(b.finish())
}

/// K((ℤ/2) × G) over K(G): the cyclic-layer embedding with ζ₂ = −1 away
/// from characteristic 2, the ℤ/p reduction of the split extension in
/// characteristic 2.
pub fn theorem14_reduce(g: &FiniteGroup, field: &Arc<FieldSpec>, opts: &ReduceOptions) -> Result<Certificate, ReductionError> {
    let inputs = json!({ "G": { "order": g.order(), "description": g.describe() }, "field": field.label() });
    let mut b = CertBuilder::new("1.4", field, inputs, opts.seed);
    let sub = if field.characteristic() == 2 {
        let dp = direct_product(&cyclic(2), g);
        let ext = CentralExtensionData::with_projection(&dp.group, dp.pair(1, 0), dp.project_right())?;
        b.note("char K = 2: split extension ℤ/2 × G → G");
        theorem16_reduce(&ext, field, opts)?
    } else {
        b.note("char K ≠ 2: ζ₂ = −1 lies in K, cyclic layer with H = ℤ/2");
        theorem11_embed(&cyclic(2), g, field, opts)?
    };
    b.add_retries(sub.retries);
    b.add_sub("K(ℤ/2 × G) is rational over a field isomorphic to K(G)", sub)?;
    Ok(b.finish())
}
