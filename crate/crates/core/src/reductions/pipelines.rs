//! Composite reductions for dihedral groups.

use std::sync::Arc;

use serde_json::json;

use super::{fischer_witness, theorem110_construct, theorem14_reduce, theorem19_construct};
use super::{hypothesis, CertBuilder, Certificate, Check, RationalityWitness, ReduceOptions, ReductionError};
use crate::groups::{cyclic, d2n_split, dihedral, direct_product, phi_wreath_dihedral};
use crate::scalars::FieldSpec;

fn require_odd(n: usize) -> Result<(), ReductionError> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(hypothesis(format!("requires odd n, got {n}")));
    }
    Ok(())
}

/// K(D₂ₙ) for odd n: D₂ₙ ≅ ℤ/2 × Dₙ, then the ℤ/2 factor is removed.
pub fn theorem15_pipeline(n: usize, field: &Arc<FieldSpec>, opts: &ReduceOptions) -> Result<Certificate, ReductionError> {
    require_odd(n)?;
    let split = d2n_split(n)?;
    let dn = dihedral(n)?;
    let swapped = direct_product(&cyclic(2), &dn);
    let inputs = json!({ "n": n, "field": field.label() });
    let mut b = CertBuilder::new("1.5", field, inputs, opts.seed);
    b.add_group("D2n", &split.source);
    b.add_group("DnxC2", &split.product.group);
    b.add_group("C2xDn", &swapped.group);
    b.claim(
        "D₂ₙ ≅ Dₙ × ℤ/2",
        Check::Isomorphism { source: "D2n".into(), target: "DnxC2".into(), map: split.iso.map.clone() },
    )?;
    let swap: Vec<usize> = split
        .product
        .group
        .elements()
        .map(|e| {
            let (d, c) = split.product.split(e);
            swapped.pair(c, d)
        })
        .collect();
    b.claim("Dₙ × ℤ/2 ≅ ℤ/2 × Dₙ", Check::Isomorphism { source: "DnxC2".into(), target: "C2xDn".into(), map: swap })?;
    let sub = theorem14_reduce(&dn, field, opts)?;
    b.add_retries(sub.retries);
    b.add_sub("K(ℤ/2 × Dₙ) is rational over K(Dₙ)", sub)?;
    b.note("K(D₂ₙ) is rational over K(Dₙ)");
    Ok(b.finish())
}

/// K(ℤ/n ≀ ℤ/2) for odd n through ℤ/n ≀ ℤ/2 ≅ ℤ/n × Dₙ, with a witness
/// for K(ℤ/n) (lattice monomials by default).
pub fn theorem42_pipeline(
    n: usize,
    field: &Arc<FieldSpec>,
    witness: Option<&RationalityWitness>,
    opts: &ReduceOptions,
) -> Result<Certificate, ReductionError> {
    require_odd(n)?;
    let cn = cyclic(n);
    let owned;
    let witness = match witness {
        Some(w) => w,
        None => {
            owned = fischer_witness(&cn, field)?;
            &owned
        }
    };
    let (ws, target, phi) = phi_wreath_dihedral(n)?;
    let inputs = json!({ "n": n, "field": field.label(), "witness": witness.provenance });
    let mut b = CertBuilder::new("4.2", field, inputs, opts.seed);
    b.add_group("wreath", &ws.total);
    b.add_group("CnxDn", &target.group);
    b.claim(
        "Φ: ℤ/n ≀ ℤ/2 → ℤ/n × Dₙ is an isomorphism",
        Check::Isomorphism { source: "wreath".into(), target: "CnxDn".into(), map: phi.map.clone() },
    )?;
    let dn = dihedral(n)?;
    let wreath = theorem110_construct(&cn, &cyclic(2), field, witness, opts)?;
    b.add_retries(wreath.retries);
    b.add_sub("K(ℤ/n ≀ ℤ/2) is rational over K(ℤ/2)", wreath)?;
    let product = theorem19_construct(&cn, &dn, field, Some(witness), opts)?;
    b.add_retries(product.retries);
    b.add_sub("K(ℤ/n × Dₙ) is rational over K(Dₙ)", product)?;
    let d2n = theorem15_pipeline(n, field, opts)?;
    b.add_retries(d2n.retries);
    b.add_sub("K(D₂ₙ) is rational over K(Dₙ)", d2n)?;
    b.note("K(ℤ/n × Dₙ) ≅ K(ℤ/n ≀ ℤ/2) is rational over both K(ℤ/2) and K(Dₙ)");
    Ok(b.finish())
}
