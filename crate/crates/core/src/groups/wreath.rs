//! Wreath products H ≀ G = N ⋊ G with N = ⊕_{g∈G} H_g.

use super::{FiniteGroup, GroupError, Homomorphism};

/// Default bound on |H|^{|G|}·|G|.
pub const DEFAULT_SIZE_CAP: usize = 4096;

/// H ≀ G with its coordinate bookkeeping.
///
/// A base element x = (x_g)_{g∈G} has index Σ x_g·|H|^g (little-endian
/// mixed radix over G's element indices); the pair (x, σ) has index
/// `x_index + |N|·σ`. Multiplication is (x,σ)(y,τ) = (x·ᵠy, στ) with
/// (ᵠy)_g = y_{σ⁻¹g} for ᵠ = σ.
#[derive(Clone, Debug)]
pub struct WreathStructure {
    pub h: FiniteGroup,
    pub g: FiniteGroup,
    pub total: FiniteGroup,
    base_order: usize,
}

pub fn wreath_product(h: &FiniteGroup, g: &FiniteGroup, size_cap: usize) -> Result<WreathStructure, GroupError> {
    let (nh, ng) = (h.order(), g.order());
    let base_order = u32::try_from(ng)
        .ok()
        .and_then(|e| nh.checked_pow(e))
        .ok_or(GroupError::SizeCap { order: usize::MAX, cap: size_cap })?;
    let order = base_order
        .checked_mul(ng)
        .ok_or(GroupError::SizeCap { order: usize::MAX, cap: size_cap })?;
    if order > size_cap {
        return Err(GroupError::SizeCap { order, cap: size_cap });
    }
    let decode = |mut x: usize| {
        (0..ng)
            .map(|_| {
                let v = x % nh;
                x /= nh;
                v
            })
            .collect::<Vec<_>>()
    };
    let encode = |coords: &[usize]| coords.iter().rev().fold(0, |acc, &v| acc * nh + v);
    let coords: Vec<Vec<usize>> = (0..base_order).map(decode).collect();
    let mul = |a: usize, b: usize| {
        let (xa, sa) = (a % base_order, a / base_order);
        let (xb, sb) = (b % base_order, b / base_order);
        let sa_inv = g.inv(sa);
        let prod: Vec<usize> = (0..ng)
            .map(|gi| h.mul(coords[xa][gi], coords[xb][g.mul(sa_inv, gi)]))
            .collect();
        encode(&prod) + base_order * g.mul(sa, sb)
    };
    let names = (0..order)
        .map(|i| {
            let (x, s) = (i % base_order, i / base_order);
            let parts: Vec<&str> = coords[x].iter().map(|&v| h.name(v)).collect();
            format!("([{}],{})", parts.join(","), g.name(s))
        })
        .collect();
    let total = FiniteGroup::from_mul(order, names, mul);
    Ok(WreathStructure { h: h.clone(), g: g.clone(), total, base_order })
}

impl WreathStructure {
    /// |N| = |H|^{|G|}.
    pub fn base_order(&self) -> usize {
        self.base_order
    }

    /// The coordinates (x_g)_g of a base element index.
    pub fn base_coords(&self, x_index: usize) -> Vec<usize> {
        let nh = self.h.order();
        let mut x = x_index;
        (0..self.g.order())
            .map(|_| {
                let v = x % nh;
                x /= nh;
                v
            })
            .collect()
    }

    pub fn base_index(&self, coords: &[usize]) -> usize {
        let nh = self.h.order();
        coords.iter().rev().fold(0, |acc, &v| acc * nh + v)
    }

    /// Index of the pair (x, σ).
    pub fn element(&self, coords: &[usize], sigma: usize) -> usize {
        self.base_index(coords) + self.base_order * sigma
    }

    /// (x_index, σ) of a total-group element.
    pub fn split(&self, e: usize) -> (usize, usize) {
        (e % self.base_order, e / self.base_order)
    }

    /// φ_g(h): the base element supported at coordinate g with value h.
    pub fn phi(&self, g: usize, h: usize) -> usize {
        let mut coords = vec![0; self.g.order()];
        coords[g] = h;
        self.element(&coords, 0)
    }

    /// G embedded as (1, σ).
    pub fn embed_g(&self, sigma: usize) -> usize {
        self.base_order * sigma
    }

    pub fn phi_hom(&self, g: usize) -> Homomorphism {
        let map = self.h.elements().map(|h| self.phi(g, h)).collect();
        Homomorphism::new(&self.h, &self.total, map).expect("coordinate embedding")
    }

    pub fn embed_g_hom(&self) -> Homomorphism {
        let map = self.g.elements().map(|s| self.embed_g(s)).collect();
        Homomorphism::new(&self.g, &self.total, map).expect("top-group embedding")
    }

    /// Elements of N.
    pub fn base_elements(&self) -> Vec<usize> {
        (0..self.base_order).collect()
    }

    /// M = ⊕_{g≠1} H_g: base elements whose identity coordinate is trivial.
    pub fn m_subgroup(&self) -> Vec<usize> {
        (0..self.base_order).filter(|&x| self.base_coords(x)[0] == 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic, dihedral, find_isomorphism};
    use super::*;

    #[test]
    fn orders() {
        let w = wreath_product(&cyclic(3), &cyclic(2), DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(w.total.order(), 18);
        let w = wreath_product(&cyclic(1), &dihedral(3).unwrap(), DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(w.total, dihedral(3).unwrap());
        assert!(matches!(
            wreath_product(&cyclic(4), &cyclic(6), DEFAULT_SIZE_CAP),
            Err(GroupError::SizeCap { .. })
        ));
    }

    #[test]
    fn two_wreath_two_is_dihedral_four() {
        let w = wreath_product(&cyclic(2), &cyclic(2), DEFAULT_SIZE_CAP).unwrap();
        assert!(find_isomorphism(&w.total, &dihedral(4).unwrap()).is_some());
    }

    #[test]
    fn coordinate_copies_commute() {
        let w = wreath_product(&cyclic(3), &cyclic(2), DEFAULT_SIZE_CAP).unwrap();
        for h in 0..3 {
            for k in 0..3 {
                let (a, b) = (w.phi(0, h), w.phi(1, k));
                assert_eq!(w.total.mul(a, b), w.total.mul(b, a));
            }
        }
        // σ φ_1(h) σ⁻¹ = φ_σ(h)
        let s = w.embed_g(1);
        assert_eq!(w.total.conjugate(s, w.phi(0, 1)), w.phi(1, 1));
        assert_eq!(w.m_subgroup().len(), 3);
    }

    #[test]
    fn equivalent_multiplication_rule() {
        // (σx)(τy) = (στ)(^{τ⁻¹}x · y)
        let w = wreath_product(&cyclic(2), &cyclic(3), DEFAULT_SIZE_CAP).unwrap();
        let t = &w.total;
        for x in 0..w.base_order() {
            for y in 0..w.base_order() {
                for s in 0..3 {
                    for tau in 0..3 {
                        let lhs = t.mul(t.mul(w.embed_g(s), x), t.mul(w.embed_g(tau), y));
                        let xc = w.base_coords(x);
                        let yc = w.base_coords(y);
                        let ti = w.g.inv(tau);
                        // (^{τ⁻¹}x)_g = x_{τ g}
                        let moved: Vec<usize> =
                            (0..3).map(|g| w.h.mul(xc[w.g.mul(w.g.inv(ti), g)], yc[g])).collect();
                        let rhs = t.mul(w.embed_g(w.g.mul(s, tau)), w.base_index(&moved));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
