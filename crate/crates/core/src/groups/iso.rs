//! Explicit isomorphisms D₂ₙ ≅ Dₙ × ℤ/2 and (ℤ/n) ≀ (ℤ/2) ≅ ℤ/n × Dₙ for odd
//! n, plus a brute-force isomorphism search for small groups.

use std::collections::VecDeque;

use super::{cyclic, dihedral, direct_product, wreath_product, DirectProduct, FiniteGroup, GroupError, Homomorphism};

/// The splitting D₂ₙ = ⟨σ², τ⟩ × ⟨σⁿ⟩.
#[derive(Clone, Debug)]
pub struct D2nSplit {
    pub source: FiniteGroup,
    pub product: DirectProduct,
    pub iso: Homomorphism,
}

/// For odd n, sends σ^a τ^e ∈ D₂ₙ to (σ'^k τ'^e, j) ∈ Dₙ × ℤ/2 with
/// j ≡ a (mod 2) and k ≡ (a − nj)/2 (mod n). Verified to be a bijective
/// homomorphism on every pair.
pub fn d2n_split(n: usize) -> Result<D2nSplit, GroupError> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(GroupError::InvalidParameter(format!("d2n_split needs odd n, got {n}")));
    }
    let source = dihedral(2 * n)?;
    let product = direct_product(&dihedral(n)?, &cyclic(2));
    let two_n = 2 * n as i64;
    let map = source
        .elements()
        .map(|x| {
            let (a, e) = ((x % (2 * n)) as i64, x / (2 * n));
            let j = a.rem_euclid(2);
            let k = ((a - n as i64 * j) / 2).rem_euclid(n as i64) as usize;
            debug_assert!((a - n as i64 * j) % 2 == 0 && a < two_n);
            product.pair(k + n * e, j as usize)
        })
        .collect();
    let iso = Homomorphism::new(&source, &product.group, map)?;
    if !iso.is_bijective() {
        return Err(GroupError::NotHomomorphism("d2n splitting is not bijective".into()));
    }
    Ok(D2nSplit { source, product, iso })
}

/// Φ: (ℤ/n) ≀ (ℤ/2) → ℤ/n × Dₙ, Φ(2a, 2b, ε) = (a + b, σ^{a−b} τ^ε) where
/// (2a, 2b) are the coordinates at the identity and at the generator of ℤ/2.
/// Returns the map together with the wreath structure and the product.
pub fn phi_wreath_dihedral(n: usize) -> Result<(super::WreathStructure, DirectProduct, Homomorphism), GroupError> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(GroupError::InvalidParameter(format!("phi_wreath_dihedral needs odd n, got {n}")));
    }
    let ws = wreath_product(&cyclic(n), &cyclic(2), usize::MAX)?;
    let target = direct_product(&cyclic(n), &dihedral(n)?);
    let half = n.div_ceil(2); // 2⁻¹ mod n
    let map = ws
        .total
        .elements()
        .map(|e| {
            let (x, eps) = ws.split(e);
            let coords = ws.base_coords(x);
            let a = coords[0] * half % n;
            let b = coords[1] * half % n;
            let rot = (a + n - b) % n;
            target.pair((a + b) % n, rot + n * eps)
        })
        .collect();
    let phi = Homomorphism::new(&ws.total, &target.group, map)?;
    if !phi.is_bijective() {
        return Err(GroupError::NotHomomorphism("Φ is not bijective".into()));
    }
    Ok((ws, target, phi))
}

/// Exhaustive search for an isomorphism a → b by assigning images to a
/// generating set. Limited to order 64.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Homomorphism> {
    if a.order() != b.order() || a.order() > super::ASSOCIATIVITY_CHECK_LIMIT {
        return None;
    }
    let gens = a.generators();
    let mut images = Vec::with_capacity(gens.len());
    search(a, b, &gens, &mut images)
}

fn search(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &mut Vec<usize>) -> Option<Homomorphism> {
    if images.len() == gens.len() {
        let map = extend(a, b, gens, images)?;
        let hom = Homomorphism::new(a, b, map).ok()?;
        return hom.is_bijective().then_some(hom);
    }
    let target_order = a.element_order(gens[images.len()]);
    for cand in b.elements() {
        if b.element_order(cand) != target_order {
            continue;
        }
        images.push(cand);
        if let Some(h) = search(a, b, gens, images) {
            return Some(h);
        }
        images.pop();
    }
    None
}

fn extend(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (g, &img) in gens.iter().zip(images) {
            let y = a.mul(x, *g);
            let fy = b.mul(map[x], img);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}
