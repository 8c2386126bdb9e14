//! Acceptance suite: runs criteria 1–10 and prints one PASS/FAIL line each.
//!
//! Expected values are recomputed here from group tables and direct
//! substitution, independently of the constructions under test.

use std::fmt::Display;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;

use noether_core::descent::{trivialize_action, SemiAffineSetup};
use noether_core::funcfield::{GroupAction, RatFunc, VarSet};
use noether_core::groups::{
    abelian, cyclic, d2n_split, dihedral, direct_product, phi_wreath_dihedral, wreath_product, CentralExtensionData,
    FiniteGroup, DEFAULT_SIZE_CAP,
};
use noether_core::oracle::{check_generates_affine, check_invariant};
use noether_core::reductions::{
    fischer, fischer_witness, iterated_cyclic_generators, theorem110_construct, theorem11_embed, theorem16_reduce,
    theorem17_chain, theorem42_pipeline, verify_certificate, Certificate, RationalityWitness, ReduceOptions,
};
use noether_core::scalars::{field_with_root_of_unity, primitive_root, FieldExt, FieldSpec, Scalar};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn lift<T, E: Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn opts() -> ReduceOptions {
    ReduceOptions { seed: 0, max_retries: 32, ..ReduceOptions::default() }
}

fn field(p: u64, e: usize) -> Result<Arc<FieldSpec>, String> {
    lift(field_with_root_of_unity(p, e as u64), "field")
}

/// h·x[g] = x[hg] on variables x[0..|G|).
fn regular_action(g: &FiniteGroup, k: &Arc<FieldSpec>) -> Result<(VarSet, GroupAction), String> {
    let vars = VarSet::new("x", (0..g.order()).map(|i| format!("x[{i}]")).collect());
    let images = g.elements().map(|s| g.elements().map(|e| RatFunc::var(k, &vars, g.mul(s, e))).collect()).collect();
    let action = lift(GroupAction::from_all_images(g, k, &vars, images), "regular action")?;
    Ok((vars, action))
}

/// Renames the variables of f positionally into `target`.
fn to_vars(f: &RatFunc, target: &VarSet) -> Result<RatFunc, String> {
    let images: Vec<RatFunc> = (0..target.len()).map(|i| RatFunc::var(f.field(), target, i)).collect();
    lift(f.substitute(&images, target), "substitute")
}

fn same(a: &RatFunc, b: &RatFunc) -> Result<bool, String> {
    lift(a.equals(b), "compare")
}

fn ratio(k: &Arc<FieldSpec>, num: i64, den: i64) -> Result<Scalar, String> {
    lift(k.from_i64(num).checked_div(&k.from_i64(den)), "scalar")
}

/// Serializes, parses back and re-runs every claim.
fn round_trip(cert: &Certificate) -> Result<usize, String> {
    ensure!(cert.is_ok(), "{} failed: {:?}", cert.theorem, cert.failures());
    let parsed: Certificate = lift(serde_json::from_str(&cert.to_json_string()), "parse certificate")?;
    ensure!(&parsed == cert, "{}: JSON round trip changed the certificate", cert.theorem);
    let report = lift(verify_certificate(&parsed), "verify")?;
    ensure!(report.all_ok(), "{}: re-verification failed: {:?}", cert.theorem, report.failures());
    Ok(report.claim_count())
}

fn element(env: &noether_core::reductions::Env, name: &str) -> Result<RatFunc, String> {
    Ok(lift(env.element(name), "element")?.1.clone())
}

/// Fraction-free elimination.
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let zero = BigInt::from(0);
    let mut prev = BigInt::from(1);
    let mut sign = BigInt::from(1);
    for k in 0..n {
        if m[k][k] == zero {
            match (k + 1..n).find(|&r| m[r][k] != zero) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        BigInt::from(1)
    } else {
        sign * &m[n - 1][n - 1]
    }
}

fn named_group(factors: &[u64]) -> Result<FiniteGroup, String> {
    if factors == [1] {
        Ok(cyclic(1))
    } else {
        lift(abelian(factors), "abelian group")
    }
}

// Criterion 1

const ABELIAN_UP_TO_16: [&[u64]; 25] = [
    &[1],
    &[2],
    &[3],
    &[4],
    &[2, 2],
    &[5],
    &[6],
    &[7],
    &[8],
    &[2, 4],
    &[2, 2, 2],
    &[9],
    &[3, 3],
    &[10],
    &[11],
    &[12],
    &[2, 6],
    &[13],
    &[14],
    &[15],
    &[16],
    &[2, 8],
    &[4, 4],
    &[2, 2, 4],
    &[2, 2, 2, 2],
];

fn fischer_cases() -> Result<Vec<(String, FiniteGroup, Arc<FieldSpec>)>, String> {
    let mut out = Vec::new();
    for factors in ABELIAN_UP_TO_16 {
        let a = named_group(factors)?;
        let e = a.exponent();
        out.push((format!("{factors:?}/Q"), a.clone(), field(0, e)?));
        for p in [2u64, 3, 7] {
            if !(e as u64).is_multiple_of(p) {
                out.push((format!("{factors:?}/F{p}"), a.clone(), field(p, e)?));
            }
        }
    }
    Ok(out)
}

fn criterion_fischer() -> Outcome {
    let cases = fischer_cases()?;
    for (name, a, k) in &cases {
        let n = a.order();
        let cert = lift(fischer(a, k, &opts()), name)?;
        round_trip(&cert).map_err(|e| format!("{name}: {e}"))?;
        let env = lift(cert.env(), name)?;
        let mut rows = Vec::new();
        while let Ok((_, f)) = env.element(&format!("f{}", rows.len())) {
            ensure!(f.num().nterms() == 1 && f.den().nterms() == 1, "{name}: f{} is not a monomial", rows.len());
            let up = &f.num().terms()[0].0 .0;
            let down = &f.den().terms()[0].0 .0;
            rows.push(up.iter().zip(down).map(|(&u, &d)| BigInt::from(i64::from(u) - i64::from(d))).collect::<Vec<_>>());
        }
        ensure!(rows.len() == n, "{name}: {} generators, expected {n}", rows.len());
        let index = determinant(rows);
        ensure!(index == BigInt::from(n) || index == -BigInt::from(n), "{name}: lattice index {index}, expected {n}");

        // the character action: every element scales every y by a root of
        // unity, and the |A| coordinates carry |A| distinct characters
        let chars = &lift(env.context("chars"), name)?.action;
        let yv = chars.vars().clone();
        ensure!(yv.len() == n, "{name}: {} character coordinates", yv.len());
        let mut table = vec![Vec::new(); n];
        for s in a.elements() {
            for (b, img) in chars.images(s).iter().enumerate() {
                let y = RatFunc::var(k, &yv, b);
                let c = lift(img.div(&y), name)?.as_constant().ok_or(format!("{name}: {s}·y{b} is not a multiple of y{b}"))?;
                ensure!(lift(c.pow(n as i64), name)?.is_one(), "{name}: {s}·y{b} scales by a non-root of unity");
                table[b].push(c);
            }
        }
        for b in 0..n {
            ensure!(!table[..b].contains(&table[b]), "{name}: coordinate {b} repeats a character");
        }
        for i in 0..n {
            let f = element(&env, &format!("f{i}"))?;
            ensure!(lift(check_invariant(&f, chars), name)?, "{name}: f{i} is not invariant");
        }
    }
    Ok(format!("{} group/field pairs", cases.len()))
}

// Criterion 2

fn t11_pairs() -> Result<Vec<(String, FiniteGroup, FiniteGroup)>, String> {
    let mut hs: Vec<(String, FiniteGroup)> = (2..=16).map(|n| (format!("C{n}"), cyclic(n))).collect();
    hs.push(("V4".into(), named_group(&[2, 2])?));
    let mut gs: Vec<(String, FiniteGroup)> = (1..=8).map(|n| (format!("C{n}"), cyclic(n))).collect();
    gs.push(("V4".into(), named_group(&[2, 2])?));
    gs.push(("D3".into(), lift(dihedral(3), "D3")?));
    gs.push(("D4".into(), lift(dihedral(4), "D4")?));
    let mut out = Vec::new();
    for (hn, h) in &hs {
        for (gn, g) in &gs {
            if h.order() * g.order() <= 16 {
                out.push((format!("{hn}x{gn}"), h.clone(), g.clone()));
            }
        }
    }
    Ok(out)
}

fn t11_laws(name: &str, h: &FiniteGroup, g: &FiniteGroup, k: &Arc<FieldSpec>) -> Result<(), String> {
    let prod = direct_product(h, g);
    let t = &prod.group;
    let basis = lift(h.abelian_basis(), name)?;
    let ch = *basis.iter().max_by_key(|&&b| h.element_order(b)).expect("nontrivial H");
    let n = h.element_order(ch);
    let others: Vec<usize> = basis.iter().copied().filter(|&b| b != ch).collect();
    let complement = h.subgroup_generated(&others);
    let reps: Vec<usize> = complement.iter().flat_map(|&a| g.elements().map(move |b| (a, b))).map(|(a, b)| prod.pair(a, b)).collect();
    let c = prod.pair(ch, 0);
    // σ = c^i·r
    let mut split = vec![None; t.order()];
    for i in 0..n {
        for (ri, &r) in reps.iter().enumerate() {
            split[t.mul(t.pow(c, i as i64), r)] = Some((i, ri));
        }
    }
    ensure!(split.iter().all(Option::is_some), "{name}: ⟨c⟩·R does not cover H×G");
    let split: Vec<(usize, usize)> = split.into_iter().map(Option::unwrap).collect();
    let zeta = lift(primitive_root(k, n as u64), name)?;
    let zpow = |i: i64| lift(zeta.pow(i), "scalar");

    let (xv, action) = regular_action(t, k)?;
    let mut z = Vec::new();
    for &r in &reps {
        let mut acc = RatFunc::zero(k, &xv);
        for i in 0..n {
            let x = RatFunc::var(k, &xv, t.mul(t.pow(c, i as i64), r));
            acc = lift(acc.add(&x.scale(&zpow(i as i64)?)), name)?;
        }
        z.push(acc);
    }
    let zv = VarSet::new("z", (0..reps.len()).map(|i| format!("z[{i}]")).collect());
    let mut zimages = Vec::new();
    for s in t.elements() {
        let (i, ri) = split[s];
        let mut moved_all = true;
        let mut row = Vec::new();
        for (r0, zr) in z.iter().enumerate() {
            let (j, target) = split[t.mul(reps[ri], reps[r0])];
            ensure!(j == 0, "{name}: R is not closed");
            let lhs = lift(action.act(s, zr), name)?;
            let rhs = z[target].scale(&zpow(-(i as i64))?);
            ensure!(same(&lhs, &rhs)?, "{name}: law fails for element {s} on z({r0})");
            moved_all &= same(&lhs, zr)?;
            row.push(RatFunc::var(k, &zv, target).scale(&zpow(-(i as i64))?));
        }
        ensure!(s == 0 || !moved_all, "{name}: element {s} acts trivially on the z-span");
        zimages.push(row);
    }
    let zaction = lift(GroupAction::from_all_images(t, k, &zv, zimages), name)?;
    let mut t0 = RatFunc::zero(k, &zv);
    for i in 0..reps.len() {
        t0 = lift(t0.add(&lift(RatFunc::var(k, &zv, i).pow(n as i64), name)?), name)?;
    }
    ensure!(lift(check_invariant(&t0, &zaction), name)?, "{name}: t0 is not invariant");
    Ok(())
}

fn criterion_t11() -> Outcome {
    let pairs = t11_pairs()?;
    let mut claims = 0;
    for (name, h, g) in &pairs {
        let k = field(0, h.exponent())?;
        let cert = lift(theorem11_embed(h, g, &k, &opts()), name)?;
        claims += round_trip(&cert).map_err(|e| format!("{name}: {e}"))?;
        t11_laws(name, h, g, &k)?;
    }
    Ok(format!("{} pairs, {claims} certificate claims re-verified", pairs.len()))
}

// Criterion 3

fn t16_cases() -> Result<Vec<(String, CentralExtensionData)>, String> {
    let c2x = |g: FiniteGroup| {
        let d = direct_product(&cyclic(2), &g);
        let c = d.pair(1, 0);
        (d.group, c)
    };
    let list = vec![
        ("C4/C2".to_string(), (cyclic(4), 2)),
        ("D4/V4".to_string(), (lift(dihedral(4), "D4")?, 2)),
        ("C9/C3".to_string(), (cyclic(9), 3)),
        ("C2xC3".to_string(), c2x(cyclic(3))),
        ("C2xD3".to_string(), c2x(lift(dihedral(3), "D3")?)),
    ];
    list.into_iter().map(|(n, (g, c))| Ok((n.clone(), lift(CentralExtensionData::new(&g, c), &n)?))).collect()
}

fn t16_laws(name: &str, ext: &CentralExtensionData, cert: &Certificate, k: &Arc<FieldSpec>) -> Result<(), String> {
    let total = &ext.total;
    let q = &ext.quotient;
    let p = total.element_order(ext.c);
    let cp = |i: usize| total.pow(ext.c, i as i64);
    let u = &ext.section;
    ensure!(u.iter().enumerate().all(|(g, &s)| ext.pi.apply(s) == g), "{name}: section is not a section");
    let exp_in_c = |a: usize| (0..p).find(|&i| cp(i) == a);
    // u(h) c u(h)⁻¹ = cⁿ and u(h)u(g) = c^m u(hg)
    let conj: Vec<usize> = q
        .elements()
        .map(|h| {
            let a = total.mul(total.mul(u[h], ext.c), total.inv(u[h]));
            exp_in_c(a).ok_or(format!("{name}: ⟨c⟩ not normal"))
        })
        .collect::<Result<_, _>>()?;
    let fs = |h: usize, g: usize| {
        let a = total.mul(total.mul(u[h], u[g]), total.inv(u[q.mul(h, g)]));
        exp_in_c(a).expect("factor set lies in ⟨c⟩")
    };

    let (xv, action) = regular_action(total, k)?;
    let x = |i: usize, g: usize| RatFunc::var(k, &xv, total.mul(cp(i), u[g]));
    let mut y = Vec::new();
    let mut zg = Vec::new();
    for g in q.elements() {
        let mut ya = RatFunc::zero(k, &xv);
        let mut za = RatFunc::zero(k, &xv);
        for i in 0..p {
            ya = lift(ya.add(&x(i, g)), name)?;
            za = lift(za.add(&x(i, g).scale(&k.from_i64(i as i64))), name)?;
        }
        y.push(ya);
        zg.push(za);
    }
    let mut z = RatFunc::zero(k, &xv);
    for f in &zg {
        z = lift(z.add(f), name)?;
    }
    let ysum = y.iter().try_fold(RatFunc::zero(k, &xv), |acc, f| lift(acc.add(f), name))?;

    let env = lift(cert.env(), name)?;
    for g in q.elements() {
        ensure!(same(&to_vars(&element(&env, &format!("y{g}"))?, &xv)?, &y[g])?, "{name}: y({g}) differs");
        ensure!(same(&to_vars(&element(&env, &format!("zg{g}"))?, &xv)?, &zg[g])?, "{name}: z({g}) differs");
        ensure!(same(&lift(action.act(ext.c, &y[g]), name)?, &y[g])?, "{name}: c·y({g}) ≠ y({g})");
        let cz = lift(action.act(ext.c, &zg[g]), name)?;
        ensure!(same(&cz, &lift(zg[g].sub(&y[g]), name)?)?, "{name}: c·z({g}) ≠ z({g}) − y({g})");
    }
    for s in total.elements() {
        let h = ext.pi.apply(s);
        let i = (0..p).find(|&i| total.mul(cp(i), u[h]) == s).ok_or(format!("{name}: no decomposition of {s}"))?;
        let n = conj[h] as i64;
        let inv_n = ratio(k, 1, n)?;
        let ik = k.from_i64(i as i64);
        let mut rhs_z = lift(z.sub(&ysum.scale(&ik)), name)?.scale(&inv_n);
        for g in q.elements() {
            let hg = q.mul(h, g);
            let m = fs(h, g) as i64;
            let mut rhs = lift(zg[hg].sub(&y[hg].scale(&ik)), name)?.scale(&inv_n);
            rhs = lift(rhs.sub(&y[hg].scale(&ratio(k, m, n)?)), name)?;
            ensure!(same(&lift(action.act(s, &zg[g]), name)?, &rhs)?, "{name}: law fails for {s} on z({g})");
            rhs_z = lift(rhs_z.sub(&y[hg].scale(&ratio(k, m, n)?)), name)?;
        }
        ensure!(same(&lift(action.act(s, &z), name)?, &rhs_z)?, "{name}: law fails for {s} on z");
    }
    let t0 = element(&env, "t0")?;
    let mut images = y.clone();
    images.push(z.clone());
    let t0x = lift(t0.substitute(&images, &xv), name)?;
    ensure!(t0.num().degree_in(q.order()) > 0, "{name}: t0 does not involve z");
    ensure!(lift(check_invariant(&t0x, &action), name)?, "{name}: t0 is not invariant");
    Ok(())
}

fn criterion_t16() -> Outcome {
    let cases = t16_cases()?;
    for (name, ext) in &cases {
        let k = field(ext.p, 1)?;
        let cert = lift(theorem16_reduce(ext, &k, &opts()), name)?;
        round_trip(&cert).map_err(|e| format!("{name}: {e}"))?;
        t16_laws(name, ext, &cert, &k)?;
    }
    Ok(format!("{} extensions, laws checked on every element", cases.len()))
}

// Criterion 4

fn t17_cases() -> Result<Vec<(String, FiniteGroup, u64)>, String> {
    Ok(vec![
        ("C4".into(), cyclic(4), 2),
        ("V4".into(), named_group(&[2, 2])?, 2),
        ("C8".into(), cyclic(8), 2),
        ("D4".into(), lift(dihedral(4), "D4")?, 2),
        ("C9".into(), cyclic(9), 3),
    ])
}

fn criterion_t17() -> Outcome {
    let cases = t17_cases()?;
    let mut lengths = Vec::new();
    for (name, h, p) in &cases {
        let k = field(*p, 1)?;
        let cert = lift(theorem17_chain(h, &cyclic(1), &k, &opts()), name)?;
        round_trip(&cert).map_err(|e| format!("{name}: {e}"))?;
        let mut expected = 0;
        let mut rest = h.order();
        while rest > 1 {
            ensure!(rest % *p as usize == 0, "{name}: not a {p}-group");
            rest /= *p as usize;
            expected += 1;
        }
        let links: Vec<&Certificate> = cert.sub.iter().filter(|s| s.theorem == "1.6").collect();
        ensure!(links.len() == expected, "{name}: chain length {}, expected {expected}", links.len());
        for link in links {
            let report = lift(verify_certificate(link), name)?;
            ensure!(report.all_ok(), "{name}: link fails: {:?}", report.failures());
        }
        lengths.push(format!("{name}:{expected}"));
    }
    Ok(format!("chain lengths {}", lengths.join(" ")))
}

// Criterion 5

struct DescentCase {
    name: String,
    setup: SemiAffineSetup,
}

type GenData = (usize, Vec<Vec<RatFunc>>, Vec<RatFunc>, Vec<RatFunc>);

fn scalar_matrix(k: &Arc<FieldSpec>, v: &VarSet, m: &[Vec<Scalar>]) -> Vec<Vec<RatFunc>> {
    m.iter().map(|r| r.iter().map(|s| RatFunc::constant(k, v, s.clone())).collect()).collect()
}

fn block_diag(blocks: &[Vec<Vec<Scalar>>], k: &Arc<FieldSpec>) -> Vec<Vec<Scalar>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec![k.zero(); n]; n];
    let mut at = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                out[at + i][at + j] = s.clone();
            }
        }
        at += b.len();
    }
    out
}

/// Multisets of `count` block types out of `types`, each block with a size.
fn multisets(sizes: &[usize], n: usize, from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let used: usize = acc.iter().map(|&t| sizes[t]).sum();
    if used == n {
        out.push(acc.clone());
        return;
    }
    for t in from..sizes.len() {
        if used + sizes[t] <= n {
            acc.push(t);
            multisets(sizes, n, t, acc, out);
            acc.pop();
        }
    }
}

/// A k-cycle on the basis with holonomy λ: e_j ↦ e_{j+1}, e_{k−1} ↦ λ·e_0.
fn cycle_block(k: &Arc<FieldSpec>, len: usize, lambda: Scalar) -> Vec<Vec<Scalar>> {
    let mut m = vec![vec![k.zero(); len]; len];
    for j in 0..len - 1 {
        m[j + 1][j] = k.one();
    }
    m[0][len - 1] = lambda;
    m
}

fn setup_from(
    name: String,
    group: &FiniteGroup,
    k: &Arc<FieldSpec>,
    l_count: usize,
    n: usize,
    gens: impl Fn(&VarSet) -> Vec<GenData>,
) -> Result<DescentCase, String> {
    let mut labels: Vec<String> = (0..l_count).map(|i| format!("t[{i}]")).collect();
    labels.extend((0..n).map(|i| format!("x[{i}]")));
    let v = VarSet::new("tx", labels);
    let l: Vec<usize> = (0..l_count).collect();
    let x: Vec<usize> = (l_count..l_count + n).collect();
    let setup = lift(SemiAffineSetup::from_generators(group, k, &v, &l, &x, &gens(&v)), &name)?;
    Ok(DescentCase { name, setup })
}

fn monomial_cases(k: &Arc<FieldSpec>) -> Result<Vec<DescentCase>, String> {
    let i4 = k.zeta();
    let mut out = Vec::new();
    // cyclic groups: L = K(t) with t ↦ ζ_m·t, or the regular permutation of three t's for m = 3
    for m in 1..=4usize {
        let g = cyclic(m);
        let mut types: Vec<(usize, Scalar)> = Vec::new();
        for len in (1..=4).filter(|l| m % l == 0) {
            for e in 0..4u32 {
                if (e as usize * (m / len)).is_multiple_of(4) {
                    types.push((len, lift(i4.pow(i64::from(e)), "scalar")?));
                }
            }
        }
        let sizes: Vec<usize> = types.iter().map(|t| t.0).collect();
        for n in 1..=4 {
            let mut choices = Vec::new();
            multisets(&sizes, n, 0, &mut Vec::new(), &mut choices);
            for choice in choices {
                let blocks: Vec<Vec<Vec<Scalar>>> = choice.iter().map(|&t| cycle_block(k, types[t].0, types[t].1.clone())).collect();
                let a = block_diag(&blocks, k);
                let l_count = if m == 3 { 3 } else { 1 };
                let root = if m == 3 { k.one() } else { lift(primitive_root(k, m as u64), "root")? };
                let name = format!("C{m} n={n} blocks {choice:?}");
                out.push(setup_from(name, &g, k, l_count, n, |v| {
                    if m == 1 {
                        return Vec::new();
                    }
                    let l_images = if m == 3 {
                        (0..3).map(|i| RatFunc::var(k, v, (i + 1) % 3)).collect()
                    } else {
                        vec![RatFunc::var(k, v, 0).scale(&root)]
                    };
                    vec![(1, scalar_matrix(k, v, &a), vec![RatFunc::zero(k, v); n], l_images)]
                })?);
            }
        }
    }
    // Klein four: L = K(t0, t1) with a: t0 ↦ −t0, b: t1 ↦ −t1
    let v4 = named_group(&[2, 2])?;
    let basis = lift(v4.abelian_basis(), "V4 basis")?;
    let (ga, gb) = (basis[0], basis[1]);
    let one = k.one();
    let neg = k.from_i64(-1);
    let sgn = |b: bool| if b { neg.clone() } else { one.clone() };
    let swap = |s: &Scalar| vec![vec![k.zero(), s.clone()], vec![s.clone(), k.zero()]];
    let diag = |s: &Scalar| vec![vec![s.clone(), k.zero()], vec![k.zero(), s.clone()]];
    let perm4 = |p: [usize; 4]| {
        let mut m = vec![vec![k.zero(); 4]; 4];
        for (j, &i) in p.iter().enumerate() {
            m[i][j] = k.one();
        }
        m
    };
    let mut types: Vec<(Vec<Vec<Scalar>>, Vec<Vec<Scalar>>)> = Vec::new();
    for ea in [false, true] {
        for eb in [false, true] {
            types.push((vec![vec![sgn(ea)]], vec![vec![sgn(eb)]]));
        }
    }
    for psi in [one.clone(), neg.clone()] {
        types.push((diag(&psi), swap(&one)));
        types.push((swap(&one), diag(&psi)));
        types.push((swap(&one), swap(&psi)));
    }
    types.push((perm4([2, 3, 0, 1]), perm4([1, 0, 3, 2])));
    let sizes: Vec<usize> = types.iter().map(|t| t.0.len()).collect();
    for n in 1..=4 {
        let mut choices = Vec::new();
        multisets(&sizes, n, 0, &mut Vec::new(), &mut choices);
        for choice in choices {
            let ma = block_diag(&choice.iter().map(|&t| types[t].0.clone()).collect::<Vec<_>>(), k);
            let mb = block_diag(&choice.iter().map(|&t| types[t].1.clone()).collect::<Vec<_>>(), k);
            let name = format!("V4 n={n} blocks {choice:?}");
            out.push(setup_from(name, &v4, k, 2, n, |v| {
                let t0 = RatFunc::var(k, v, 0);
                let t1 = RatFunc::var(k, v, 1);
                vec![
                    (ga, scalar_matrix(k, v, &ma), vec![RatFunc::zero(k, v); n], vec![t0.neg(), t1.clone()]),
                    (gb, scalar_matrix(k, v, &mb), vec![RatFunc::zero(k, v); n], vec![t0.clone(), t1.neg()]),
                ]
            })?);
        }
    }
    Ok(out)
}

fn worked_examples() -> Result<Vec<DescentCase>, String> {
    let q = field(0, 1)?;
    let f2 = field(2, 1)?;
    let c2 = cyclic(2);
    let mut out = Vec::new();
    out.push(setup_from("identity A, B = 0".into(), &c2, &q, 1, 2, |v| {
        let id = scalar_matrix(&q, v, &[vec![q.one(), q.zero()], vec![q.zero(), q.one()]]);
        vec![(1, id, vec![RatFunc::zero(&q, v); 2], vec![RatFunc::var(&q, v, 0).neg()])]
    })?);
    out.push(setup_from("t ↦ −t, x ↦ −x".into(), &c2, &q, 1, 1, |v| {
        vec![(1, scalar_matrix(&q, v, &[vec![q.from_i64(-1)]]), vec![RatFunc::zero(&q, v)], vec![RatFunc::var(&q, v, 0).neg()])]
    })?);
    out.push(setup_from("char 2: t ↦ t+1, x ↦ x+1".into(), &c2, &f2, 1, 1, |v| {
        let t = RatFunc::var(&f2, v, 0);
        let t1 = t.add(&RatFunc::one(&f2, v)).expect("sum");
        vec![(1, scalar_matrix(&f2, v, &[vec![f2.one()]]), vec![RatFunc::one(&f2, v)], vec![t1])]
    })?);
    Ok(out)
}

fn criterion_descent() -> Outcome {
    let k = field(0, 4)?;
    let mut cases = worked_examples()?;
    let worked = cases.len();
    cases.extend(monomial_cases(&k)?);
    let mut worst = 0;
    for case in &cases {
        let s = &case.setup;
        let tr = lift(trivialize_action(s, 0, 32), &case.name)?;
        worst = worst.max(tr.retries);
        ensure!(tr.z.len() == s.n(), "{}: {} outputs for n = {}", case.name, tr.z.len(), s.n());
        for (i, z) in tr.z.iter().enumerate() {
            for sigma in s.group().elements() {
                let moved = lift(s.action().act(sigma, z), &case.name)?;
                ensure!(same(&moved, z)?, "{}: σ = {sigma} moves z{i}", case.name);
            }
        }
        ensure!(lift(check_generates_affine(&tr.z, s.x_indices()), &case.name)?, "{}: z does not generate", case.name);
    }
    Ok(format!("{worked} worked examples + {} monomial setups, at most {worst} retries", cases.len() - worked))
}

// Criterion 6

fn t110_cases() -> Result<Vec<(String, FiniteGroup, Arc<FieldSpec>, RationalityWitness)>, String> {
    let q = field(0, 1)?;
    let q3 = field(0, 3)?;
    let w2 = lift(fischer_witness(&cyclic(2), &q), "witness")?;
    let w3 = lift(fischer_witness(&cyclic(3), &q3), "witness")?;
    let stable = w3.stabilize(2);
    Ok(vec![
        ("C2 wr C2".into(), cyclic(2), q, w2),
        ("C3 wr C2".into(), cyclic(3), q3.clone(), w3),
        ("C3 wr C2, m = 2".into(), cyclic(3), q3, stable),
    ])
}

fn parse_pair(label: &str) -> Option<(char, usize, usize)> {
    let kind = label.chars().next()?;
    let inner = label.get(2..label.len() - 1)?;
    let (a, b) = inner.split_once(',')?;
    Some((kind, a.parse().ok()?, b.parse().ok()?))
}

fn criterion_wreath() -> Outcome {
    let g = cyclic(2);
    let cases = t110_cases()?;
    for (name, h, k, witness) in &cases {
        let cert = lift(theorem110_construct(h, &g, k, witness, &opts()), name)?;
        round_trip(&cert).map_err(|e| format!("{name}: {e}"))?;
        let env = lift(cert.env(), name)?;
        let w = lift(wreath_product(h, &g, DEFAULT_SIZE_CAP), name)?;
        let total = &w.total;
        let (xv, action) = regular_action(total, k)?;

        // u(1;1) = Σ X over base elements with trivial coordinate 1
        let mut u0 = RatFunc::zero(k, &xv);
        for x in 0..w.base_order() {
            if w.base_coords(x)[0] == 0 {
                u0 = lift(u0.add(&RatFunc::var(k, &xv, x)), name)?;
            }
        }
        let mut u = vec![Vec::new(); g.order()];
        for gg in g.elements() {
            for hh in h.elements() {
                u[gg].push(to_vars(&element(&env, &format!("u{gg}_{hh}"))?, &xv)?);
            }
        }
        ensure!(same(&u[0][0], &u0)?, "{name}: u(1;1) differs");
        for e in total.elements() {
            let (xi, sigma) = w.split(e);
            let coords = w.base_coords(xi);
            let mut moves = false;
            for gg in g.elements() {
                for hh in h.elements() {
                    let g2 = g.mul(sigma, gg);
                    let h2 = h.mul(coords[g2], hh);
                    let lhs = lift(action.act(e, &u[gg][hh]), name)?;
                    ensure!(same(&lhs, &u[g2][h2])?, "{name}: law fails for element {e} on u({gg};{hh})");
                    moves |= !same(&lhs, &u[gg][hh])?;
                }
            }
            ensure!(e == 0 || moves, "{name}: element {e} acts trivially on Ũ");
        }

        let m = witness.extra();
        let ctx = lift(env.context(if m > 0 { "UV" } else { "Ut" }), name)?;
        let vars = ctx.action.vars().clone();
        let mut images = Vec::new();
        for e in total.elements() {
            let (xi, sigma) = w.split(e);
            let coords = w.base_coords(xi);
            let mut row = Vec::new();
            for label in vars.labels() {
                let (kind, a, b) = parse_pair(label).ok_or(format!("{name}: label {label}"))?;
                let g2 = g.mul(sigma, a);
                let image = if kind == 'u' { format!("u[{g2},{}]", h.mul(coords[g2], b)) } else { format!("w[{g2},{b}]") };
                let idx = vars.index_of(&image).ok_or(format!("{name}: no variable {image}"))?;
                row.push(RatFunc::var(k, &vars, idx));
            }
            images.push(row);
        }
        let uv = lift(GroupAction::from_all_images(total, k, &vars, images), name)?;
        let per = h.order() + m;
        for gg in g.elements() {
            for i in 0..per {
                let v = element(&env, &format!("v{gg}_{i}"))?;
                for x in w.base_elements() {
                    ensure!(same(&lift(uv.act(x, &v), name)?, &v)?, "{name}: base element {x} moves v({gg};{i})");
                }
                for s in g.elements() {
                    let target = element(&env, &format!("v{}_{i}", g.mul(s, gg)))?;
                    let moved = lift(uv.act(w.embed_g(s), &v), name)?;
                    ensure!(same(&moved, &target)?, "{name}: {s}·v({gg};{i}) ≠ v({};{i})", g.mul(s, gg));
                }
            }
        }
    }
    Ok(format!("{} constructions, laws checked on every wreath element", cases.len()))
}

// Criterion 7

fn check_iso(name: &str, a: &FiniteGroup, b: &FiniteGroup, map: &[usize]) -> Result<usize, String> {
    ensure!(map.len() == a.order() && a.order() == b.order(), "{name}: orders differ");
    let mut seen = vec![false; b.order()];
    for &y in map {
        ensure!(y < b.order() && !seen[y], "{name}: map is not a bijection");
        seen[y] = true;
    }
    for x in a.elements() {
        for y in a.elements() {
            ensure!(map[a.mul(x, y)] == b.mul(map[x], map[y]), "{name}: φ({x}·{y}) ≠ φ({x})·φ({y})");
        }
    }
    Ok(a.order() * a.order())
}

fn criterion_iso() -> Outcome {
    let mut products = 0;
    for n in [1, 3, 5, 7] {
        let name = format!("Φ n={n}");
        let (ws, target, phi) = lift(phi_wreath_dihedral(n), &name)?;
        let wr = lift(wreath_product(&cyclic(n), &cyclic(2), DEFAULT_SIZE_CAP), &name)?;
        let cd = direct_product(&cyclic(n), &lift(dihedral(n), &name)?);
        ensure!(ws.total.rows() == wr.total.rows(), "{name}: source is not ℤ/n ≀ ℤ/2");
        ensure!(target.group.rows() == cd.group.rows(), "{name}: target is not ℤ/n × Dₙ");
        products += check_iso(&name, &wr.total, &cd.group, &phi.map)?;
    }
    for n in [1, 3, 5, 7, 9] {
        let name = format!("D2n split n={n}");
        let s = lift(d2n_split(n), &name)?;
        let d2n = lift(dihedral(2 * n), &name)?;
        let dc = direct_product(&lift(dihedral(n), &name)?, &cyclic(2));
        ensure!(s.source.rows() == d2n.rows(), "{name}: source is not D₂ₙ");
        ensure!(s.product.group.rows() == dc.group.rows(), "{name}: target is not Dₙ × ℤ/2");
        products += check_iso(&name, &d2n, &dc.group, &s.iso.map)?;
    }
    Ok(format!("{products} products checked"))
}

// Criterion 8

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir.join(name)
}

fn criterion_pipeline() -> Outcome {
    let mut claims = Vec::new();
    for n in [3usize, 5] {
        let name = format!("n={n}");
        let k = field(0, n)?;
        let cert = lift(theorem42_pipeline(n, &k, None, &opts()), &name)?;
        ensure!(cert.failures().is_empty(), "{name}: failed claims {:?}", cert.failures());
        let subs: Vec<&str> = cert.sub.iter().map(|s| s.theorem.as_str()).collect();
        ensure!(subs == ["1.10", "1.9", "1.5"], "{name}: sub-certificates {subs:?}");
        ensure!(cert.claims.iter().any(|c| c.ok && c.name.starts_with("Φ")), "{name}: no isomorphism claim");
        round_trip(&cert)?;
        let path = scratch(&format!("pipeline{n}.json"));
        lift(std::fs::write(&path, cert.to_json_string()), "write")?;
        let out = lift(Command::new(env!("CARGO_BIN_EXE_noether")).arg("verify").arg(&path).output(), "run verify")?;
        ensure!(out.status.code() == Some(0), "{name}: verify exited {:?}", out.status.code());
        claims.push(format!("n={n}: {} claims", cert.claim_count()));
    }
    Ok(claims.join(", "))
}

// Criterion 9

fn criterion_cross() -> Outcome {
    let groups: [&[u64]; 11] = [&[1], &[2], &[3], &[4], &[5], &[6], &[7], &[8], &[2, 2], &[2, 4], &[2, 2, 2]];
    for factors in groups {
        let name = format!("{factors:?}");
        let a = named_group(factors)?;
        let k = field(0, a.exponent())?;
        let (_, iterated) = lift(iterated_cyclic_generators(&a, &k), &name)?;
        let lattice = lift(fischer_witness(&a, &k), &name)?.generators;
        ensure!(lattice.len() == a.order(), "{name}: {} lattice generators", lattice.len());
        ensure!(!iterated.is_empty() && iterated.len() <= a.order(), "{name}: {} iterated generators", iterated.len());
        let (vars, action) = regular_action(&a, &k)?;
        for (label, set) in [("iterated", &iterated), ("lattice", &lattice)] {
            for (i, f) in set.iter().enumerate() {
                let f = to_vars(f, &vars)?;
                ensure!(f.as_constant().is_none(), "{name}: {label} generator {i} is constant");
                ensure!(lift(check_invariant(&f, &action), &name)?, "{name}: {label} generator {i} is not invariant");
            }
        }
    }
    Ok(format!("{} groups", groups.len()))
}

// Criterion 10

fn catalogue(seed: u64) -> Result<Vec<(String, String)>, String> {
    let o = ReduceOptions { seed, ..opts() };
    let mut out = Vec::new();
    for (name, a, k) in fischer_cases()? {
        out.push((format!("fischer {name}"), lift(fischer(&a, &k, &o), &name)?.to_json_string()));
    }
    for (name, h, g) in t11_pairs()? {
        let k = field(0, h.exponent())?;
        out.push((format!("1.1 {name}"), lift(theorem11_embed(&h, &g, &k, &o), &name)?.to_json_string()));
    }
    for (name, ext) in t16_cases()? {
        let k = field(ext.p, 1)?;
        out.push((format!("1.6 {name}"), lift(theorem16_reduce(&ext, &k, &o), &name)?.to_json_string()));
    }
    for (name, h, p) in t17_cases()? {
        let k = field(p, 1)?;
        out.push((format!("1.7 {name}"), lift(theorem17_chain(&h, &cyclic(1), &k, &o), &name)?.to_json_string()));
    }
    for (name, h, k, w) in t110_cases()? {
        out.push((format!("1.10 {name}"), lift(theorem110_construct(&h, &cyclic(2), &k, &w, &o), &name)?.to_json_string()));
    }
    for n in [3usize, 5] {
        let k = field(0, n)?;
        out.push((format!("4.2 n={n}"), lift(theorem42_pipeline(n, &k, None, &o), "4.2")?.to_json_string()));
    }
    Ok(out)
}

fn criterion_determinism() -> Outcome {
    let mut count = 0;
    for seed in [0, 7] {
        let first = catalogue(seed)?;
        let second = catalogue(seed)?;
        for ((name, a), (_, b)) in first.iter().zip(&second) {
            ensure!(a == b, "{name} (seed {seed}) differs between runs");
        }
        count += first.len();
    }
    let args = ["reduce", "--theorem", "4.2", "--n", "3", "--seed", "7"];
    let run = || Command::new(env!("CARGO_BIN_EXE_noether")).args(args).output();
    let (a, b) = (lift(run(), "run")?, lift(run(), "run")?);
    ensure!(a.status.success() && a.stdout == b.stdout, "command-line output differs between runs");
    Ok(format!("{count} certificates and the command-line output are byte-identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("Fischer suite", criterion_fischer, 5),
        ("cyclic-layer law suite", criterion_t11, 30),
        ("ℤ/p extension suite", criterion_t16, 30),
        ("p-group chains", criterion_t17, 60),
        ("descent suite", criterion_descent, 60),
        ("wreath suite", criterion_wreath, 30),
        ("isomorphism suite", criterion_iso, 20),
        ("dihedral pipeline", criterion_pipeline, 120),
        ("cross-oracle agreement", criterion_cross, 60),
        ("determinism", criterion_determinism, 240),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let label = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.ends_with(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("{label} ({name}): PASS: {detail} [{secs:.1} s, budget {budget} s]"),
            Err(reason) => {
                failed += 1;
                println!("{label} ({name}): FAIL: {reason} [{secs:.1} s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
