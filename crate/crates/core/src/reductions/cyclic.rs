//! Embedding K(H × G) over K(G) for abelian H with enough roots of unity,
//! one cyclic factor at a time.

use std::sync::Arc;

use serde_json::json;

use super::{affine_descent_step, induced_linear_context, labels, regular_context, root_of_unity, weighted_sum};
use super::{hypothesis, CertBuilder, Certificate, Check, Expr, ReduceOptions, ReductionError};
use crate::descent::{minimal_invariant, SemiAffineSetup};
use crate::funcfield::{RatFunc, VarSet};
use crate::groups::{cyclic, direct_product, FiniteGroup, Homomorphism};
use crate::scalars::{FieldExt, FieldSpec, Scalar};

/// Cyclic factors of H, largest first, with the generating elements.
fn peel(h: &FiniteGroup) -> Result<Vec<(usize, usize)>, ReductionError> {
    let basis = h.abelian_basis()?;
    let mut layers: Vec<(usize, usize)> = basis.iter().map(|&b| (b, h.element_order(b))).collect();
    layers.sort_by(|a, b| b.1.cmp(&a.1));
    Ok(layers)
}

/// Nested products C_{d₁} × (C_{d₂} × (… × G)), innermost last, and the
/// isomorphism H × G → outermost.
fn layered(h: &FiniteGroup, g: &FiniteGroup) -> Result<(Vec<(usize, FiniteGroup)>, FiniteGroup, Homomorphism), ReductionError> {
    let layers = peel(h)?;
    let hg = direct_product(h, g);
    let basis: Vec<usize> = layers.iter().map(|l| l.0).collect();
    let coords = h.abelian_coordinates(&basis);
    // groups[k] = C_{d_k} × groups[k+1], groups[len] = G
    let mut groups = vec![g.clone()];
    let mut prods = Vec::new();
    for &(_, d) in layers.iter().rev() {
        let dp = direct_product(&cyclic(d), groups.last().unwrap());
        groups.push(dp.group.clone());
        prods.push(dp);
    }
    prods.reverse();
    groups.reverse();
    let map = hg
        .group
        .elements()
        .map(|e| {
            let (x, y) = hg.split(e);
            let mut idx = y;
            for (k, dp) in prods.iter().enumerate().rev() {
                idx = dp.pair(coords[x][k] as usize, idx);
            }
            idx
        })
        .collect();
    let iso = Homomorphism::new(&hg.group, &groups[0], map)?;
    let out = layers.iter().map(|l| l.1).zip(groups.iter().skip(1).cloned()).collect();
    Ok((out, hg.group, iso))
}

/// Certificate that K(H × G) is rational over a field K-isomorphic to K(G)
/// (when ζ_e ∈ K, e = exp H), built as a chain of cyclic layers.
pub fn theorem11_embed(
    h: &FiniteGroup,
    g: &FiniteGroup,
    field: &Arc<FieldSpec>,
    opts: &ReduceOptions,
) -> Result<Certificate, ReductionError> {
    if !h.is_abelian() {
        return Err(hypothesis("requires H abelian"));
    }
    let e = h.exponent() as u64;
    root_of_unity(field, e)?;
    let inputs = json!({
        "H": { "order": h.order(), "description": h.describe() },
        "G": { "order": g.order(), "description": g.describe() },
        "field": field.label(),
    });
    let mut b = CertBuilder::new("1.1", field, inputs, opts.seed);
    let (layers, hg, iso) = layered(h, g)?;
    b.add_group("HxG", &hg);
    b.add_group("layered", &iso.target);
    b.claim(
        "H × G is isomorphic to the product of its cyclic layers with G",
        Check::Isomorphism { source: "HxG".into(), target: "layered".into(), map: iso.map.clone() },
    )?;
    if layers.is_empty() {
        b.note("H is trivial: the embedding is the identity on K(G)");
    }
    for (k, (n, inner)) in layers.iter().enumerate() {
        let sub = cyclic_layer(*n, inner, field, opts)?;
        b.add_retries(sub.retries);
        b.add_sub(format!("layer {k}: C{n} × G{k} reduces to G{k}"), sub)?;
    }
    b.note("each layer: K(C_n × G') is rational over K(z)^{C_n × G'} = K(t)^{G'}(t0), and K(t)^{G'}(t0) is K-isomorphic to K(s)^{G'}(s0) = K(G')");
    Ok(b.finish())
}

fn zeta_pow(zeta: &Scalar, n: usize, k: i64) -> Scalar {
    zeta.pow_u(k.rem_euclid(n as i64) as u128)
}

/// z(g) = Σᵢ ζⁱ x[cⁱg] in the regular variables of C_n × G.
fn z_form(zeta: &Scalar, n: usize, gsize: usize, g: usize, prefix: &str) -> Expr {
    weighted_sum((0..n).map(|i| (zeta_pow(zeta, n, i as i64).coeff_strings(), format!("{prefix}[{}]", i * gsize + g))).collect())
}

/// Quotient coordinates q(h), h ≠ 1, and a last coordinate r: the action of
/// (cⁱ, g) is q(h) ↦ q(gh)/q(g), r ↦ ζ⁻ⁱ q(g) r with q(1) = 1.
fn ratio_images(
    field: &Arc<FieldSpec>,
    vars: &VarSet,
    g: &FiniteGroup,
    gi: usize,
    scale: Scalar,
) -> Result<Vec<RatFunc>, ReductionError> {
    let m = g.order();
    let q = |x: usize| if x == 0 { RatFunc::one(field, vars) } else { RatFunc::var(field, vars, x - 1) };
    let mut out = Vec::with_capacity(m);
    for h in 1..m {
        out.push(q(g.mul(gi, h)).div(&q(gi))?);
    }
    out.push(q(gi).mul(&RatFunc::var(field, vars, m - 1))?.scale(&scale));
    Ok(out)
}

/// q(a)/q(b) with q(1) = 1.
fn ratio_expr(a: usize, b: usize, prefix: &str) -> Expr {
    let num = if a == 0 { Expr::Int(1) } else { Expr::el(format!("{prefix}{a}")) };
    if b == 0 {
        num
    } else {
        Expr::div(num, Expr::el(format!("{prefix}{b}")))
    }
}

/// One cyclic layer: G̃ = ⟨c⟩ × G with c of order n.
pub(crate) fn cyclic_layer(
    n: usize,
    g: &FiniteGroup,
    field: &Arc<FieldSpec>,
    opts: &ReduceOptions,
) -> Result<Certificate, ReductionError> {
    let zeta = root_of_unity(field, n as u64)?;
    let dp = direct_product(&cyclic(n), g);
    let m = g.order();
    let inputs = json!({ "n": n, "G": { "order": m, "description": g.describe() }, "field": field.label() });
    let mut b = CertBuilder::new("1.1/cyclic-layer", field, inputs, opts.seed);
    b.add_group("tilde", &dp.group);
    b.add_group("G", g);
    regular_context(&mut b, "regular", "tilde", "x")?;
    if n > 1 {
        b.claim(format!("zeta has order {n}"), Check::ScalarOrder { value: zeta.coeff_strings(), expected: n as u64 })?;
    }
    let c = dp.pair(1 % n, 0);
    let zinv = zeta_pow(&zeta, n, -1);
    for x in g.elements() {
        let v = b.eval("regular", &z_form(&zeta, n, m, x, "x"))?;
        b.add_element(&format!("z{x}"), "regular", v);
    }
    let zs: Vec<Expr> = g.elements().map(|x| Expr::el(format!("z{x}"))).collect();
    b.claim(
        "the action on the span of the z(g) is faithful",
        Check::Kernel { ctx: "regular".into(), exprs: zs.clone(), expected: vec![0] },
    )?;
    for x in 1..m {
        let v = b.eval("regular", &Expr::div(Expr::el(format!("z{x}")), Expr::el("z0")))?;
        b.add_element(&format!("t{x}"), "regular", v);
    }
    // laws for z(1) and t(h)
    for x in 1..m {
        b.claim(
            format!("g·z(1) = t(g)·z(1) for g = {x}"),
            Check::Equal {
                ctx: "regular".into(),
                lhs: Expr::act(dp.pair(0, x), Expr::el("z0")),
                rhs: Expr::Mul(vec![Expr::el(format!("t{x}")), Expr::el("z0")]),
            },
        )?;
    }
    b.claim(
        "c·z(1) = ζ⁻¹·z(1)",
        Check::Equal {
            ctx: "regular".into(),
            lhs: Expr::act(c, Expr::el("z0")),
            rhs: Expr::Mul(vec![Expr::Scalar(zinv.coeff_strings()), Expr::el("z0")]),
        },
    )?;
    for x in 1..m {
        for y in 1..m {
            b.claim(
                format!("g·t(h) = t(gh)/t(g) for g = {x}, h = {y}"),
                Check::Equal {
                    ctx: "regular".into(),
                    lhs: Expr::act(dp.pair(0, x), Expr::el(format!("t{y}"))),
                    rhs: ratio_expr(g.mul(x, y), x, "t"),
                },
            )?;
        }
        b.claim(
            format!("c·t(h) = t(h) for h = {x}"),
            Check::Invariant { ctx: "regular".into(), expr: Expr::el(format!("t{x}")), under: Some(vec![c]) },
        )?;
    }
    // the quotient coordinates (t(h), z(1)) with the action of every element
    let mut tl: Vec<String> = (1..m).map(|x| format!("t[{x}]")).collect();
    tl.push("z1".into());
    let (gg, f2) = (g.clone(), field.clone());
    let dp2 = dp.clone();
    let z2 = zeta.clone();
    b.add_context_images("t", "tilde", tl.clone(), move |vars, s| {
        let (i, x) = dp2.split(s);
        ratio_images(&f2, vars, &gg, x, zeta_pow(&z2, n, -(i as i64))).map_err(|e| match e {
            ReductionError::Func(f) => f.into(),
            ReductionError::Cert(c) => c,
            other => super::CertError::Schema(other.to_string()),
        })
    })?;
    let mut forms: Vec<Expr> = (1..m).map(|x| Expr::el(format!("t{x}"))).collect();
    forms.push(Expr::el("z0"));
    b.claim(
        "the action on (t(h), z(1)) is the one induced from the regular action, for every element",
        Check::Induced { source: "regular".into(), target: "t".into(), forms, hom: None },
    )?;
    // t0 = Σ_g z(g)ⁿ = z(1)ⁿ (1 + Σ_h t(h)ⁿ)
    let mut sum: Vec<Expr> = vec![Expr::Int(1)];
    sum.extend((1..m).map(|x| Expr::pow(Expr::var(format!("t[{x}]")), n as i64)));
    let t0 = b.eval("t", &Expr::Mul(vec![Expr::pow(Expr::var("z1"), n as i64), Expr::Add(sum)]))?;
    b.add_element("t0", "t", t0);
    b.claim("t0 is invariant", Check::Invariant { ctx: "t".into(), expr: Expr::el("t0"), under: None })?;
    b.claim(
        format!("t0 has degree {n} in z(1)"),
        Check::Degree { ctx: "t".into(), expr: Expr::el("t0"), var: "z1".into(), expected: n as i64 },
    )?;
    b.claim(
        format!("every invariant polynomial in z(1) outside K(t) has degree ≥ {n}"),
        Check::KernelOrbit { ctx: "t".into(), l: tl[..m - 1].to_vec(), x: "z1".into(), expected: n },
    )?;
    b.note("t0 = Σ_g z(g)^n");
    if m == 1 {
        b.note(format!("G is trivial: K(z(1))^C{n} = K(z(1)^{n}) is rational over K"));
    } else {
        s_side(&mut b, g, &dp, opts)?;
    }
    b.note("c fixes every t(h), so K(t)^{tilde} = K(t)^G");
    // basis change to character coordinates and the affine descent
    if n > 1 {
        if dp.group.order() <= opts.descent_dim_cap {
            let mut forms = Vec::new();
            let mut ys = Vec::new();
            let mut l = Vec::new();
            let mut x = Vec::new();
            for j in 0..n {
                let zj = zeta.pow_u(j as u128);
                for y in g.elements() {
                    forms.push(z_form(&zj, n, m, y, "x"));
                    let label = format!("Y[{j},{y}]");
                    if j == 1 {
                        l.push(label.clone());
                    } else {
                        x.push(label.clone());
                    }
                    ys.push(label);
                }
            }
            induced_linear_context(&mut b, "regular", "chars", "tilde", ys, forms.clone(), None, "character coordinates carry the induced action")?;
            b.claim(
                "the character coordinates are a basis",
                Check::GeneratesAffine { ctx: "regular".into(), exprs: forms, x: labels("x", dp.group.order()) },
            )?;
            affine_descent_step(&mut b, "chars", &l, &x, "w", opts)?;
            b.note("K(tilde) = K(z)^{tilde}(w…) with invariant w generating over K(z)");
        } else {
            b.note(format!(
                "skipped claim: affine descent over K(z) ({} variables) exceeds the dimension cap {}",
                dp.group.order(),
                opts.descent_dim_cap
            ));
        }
    }
    Ok(b.finish())
}

/// K(G) = K(s)^G(s0) with s(h) = x(h)/x(1), and the s ↔ t correspondence.
fn s_side(
    b: &mut CertBuilder,
    g: &FiniteGroup,
    dp: &crate::groups::DirectProduct,
    opts: &ReduceOptions,
) -> Result<(), ReductionError> {
    let m = g.order();
    let field = b.field().clone();
    regular_context(b, "G-regular", "G", "v")?;
    for x in 1..m {
        let v = b.eval("G-regular", &Expr::div(Expr::var(format!("v[{x}]")), Expr::var("v[0]")))?;
        b.add_element(&format!("s{x}"), "G-regular", v);
    }
    for x in 1..m {
        b.claim(
            format!("g·x(1) = s(g)·x(1) for g = {x}"),
            Check::Equal {
                ctx: "G-regular".into(),
                lhs: Expr::act(x, Expr::var("v[0]")),
                rhs: Expr::Mul(vec![Expr::el(format!("s{x}")), Expr::var("v[0]")]),
            },
        )?;
        for y in 1..m {
            b.claim(
                format!("g·s(h) = s(gh)/s(g) for g = {x}, h = {y}"),
                Check::Equal {
                    ctx: "G-regular".into(),
                    lhs: Expr::act(x, Expr::el(format!("s{y}"))),
                    rhs: ratio_expr(g.mul(x, y), x, "s"),
                },
            )?;
        }
    }
    let mut sl: Vec<String> = (1..m).map(|x| format!("s[{x}]")).collect();
    sl.push("x1".into());
    let (gg, f2) = (g.clone(), field.clone());
    let one = field.one();
    b.add_context_images("s", "G", sl.clone(), move |vars, s| {
        ratio_images(&f2, vars, &gg, s, one.clone()).map_err(|e| match e {
            ReductionError::Func(f) => f.into(),
            ReductionError::Cert(c) => c,
            other => super::CertError::Schema(other.to_string()),
        })
    })?;
    let mut forms: Vec<Expr> = (1..m).map(|x| Expr::el(format!("s{x}"))).collect();
    forms.push(Expr::var("v[0]"));
    b.claim(
        "the action on (s(h), x(1)) is the one induced from the regular action, for every element",
        Check::Induced { source: "G-regular".into(), target: "s".into(), forms, hom: None },
    )?;
    let action = b.context("s").action.clone();
    let l: Vec<usize> = (0..m - 1).collect();
    let setup = SemiAffineSetup::from_action(action, &l, &[m - 1])?;
    let mi = minimal_invariant(&setup, opts.seed, opts.max_retries)?;
    b.add_retries(mi.retries as u64);
    let d = mi.degree as usize;
    b.add_element("s0", "s", mi.f.clone());
    b.claim("s0 is invariant", Check::Invariant { ctx: "s".into(), expr: Expr::el("s0"), under: None })?;
    b.claim(
        format!("s0 has degree {d} in x(1)"),
        Check::Degree { ctx: "s".into(), expr: Expr::el("s0"), var: "x1".into(), expected: d as i64 },
    )?;
    b.claim(
        format!("every invariant polynomial in x(1) outside K(s) has degree ≥ {d}"),
        Check::KernelOrbit { ctx: "s".into(), l: sl[..m - 1].to_vec(), x: "x1".into(), expected: d },
    )?;
    let proj: Vec<usize> = dp.group.elements().map(|e| dp.split(e).1).collect();
    b.claim(
        "s(h) ↦ t(h) intertwines the actions of G and of tilde through the projection",
        Check::Intertwine {
            a: "s".into(),
            a_vars: sl[..m - 1].to_vec(),
            b: "t".into(),
            b_vars: (1..m).map(|x| format!("t[{x}]")).collect(),
            hom: proj,
        },
    )?;
    b.note("K(G) = K(s)^G(s0)");
    Ok(())
}

/// Invariants of an abelian A produced by iterating the cyclic layers with
/// G trivial: t0 of the outer layer and the degree-0 quotients of the
/// inner invariants moved to the z-coordinates, in the variables x[a].
pub fn iterated_cyclic_generators(
    a: &FiniteGroup,
    field: &Arc<FieldSpec>,
) -> Result<(VarSet, Vec<RatFunc>), ReductionError> {
    if !a.is_abelian() {
        return Err(hypothesis("requires an abelian group"));
    }
    root_of_unity(field, a.exponent() as u64)?;
    let (layers, _, iso) = layered(a, &FiniteGroup::trivial())?;
    let dims: Vec<usize> = layers.iter().map(|l| l.0).collect();
    let (tvars, gens) = iterate_layers(&dims, field)?;
    // relabel: x_A[a] ↔ x_T[iso(a)]
    let vars = VarSet::new("regular", labels("x", a.order()));
    let mut images = vec![RatFunc::zero(field, &vars); tvars.len()];
    for e in a.elements() {
        images[iso.apply(e)] = RatFunc::var(field, &vars, e);
    }
    let gens = gens.iter().map(|f| f.substitute(&images, &vars)).collect::<Result<Vec<_>, _>>()?;
    Ok((vars, gens))
}

fn homogeneous_degree(f: &RatFunc) -> i64 {
    f.num().total_degree() as i64 - f.den().total_degree() as i64
}

fn iterate_layers(dims: &[usize], field: &Arc<FieldSpec>) -> Result<(VarSet, Vec<RatFunc>), ReductionError> {
    if dims.is_empty() {
        let vars = VarSet::new("regular", labels("x", 1));
        return Ok((vars.clone(), vec![RatFunc::var(field, &vars, 0)]));
    }
    let n = dims[0];
    let (ivars, igens) = iterate_layers(&dims[1..], field)?;
    let m = ivars.len();
    let vars = VarSet::new("regular", labels("x", n * m));
    let zeta = root_of_unity(field, n as u64)?;
    let z: Vec<RatFunc> = (0..m)
        .map(|g| {
            let mut acc = RatFunc::zero(field, &vars);
            for i in 0..n {
                acc = acc.add(&RatFunc::var(field, &vars, i * m + g).scale(&zeta_pow(&zeta, n, i as i64)))?;
            }
            Ok(acc)
        })
        .collect::<Result<_, ReductionError>>()?;
    let mut t0 = RatFunc::zero(field, &vars);
    let mut s0 = RatFunc::zero(field, &vars);
    for zg in &z {
        t0 = t0.add(&zg.pow(n as i64)?)?;
        s0 = s0.add(zg)?;
    }
    let mut out = vec![t0];
    for f in &igens {
        let fz = f.substitute(&z, &vars)?;
        let q = fz.div(&s0.pow(homogeneous_degree(f))?)?;
        if q.as_constant().is_none() {
            out.push(q);
        }
    }
    Ok((vars, out))
}
