//! Extensions 1 → ⟨c⟩ → G̃ → G → 1 with ⟨c⟩ of prime order.

use super::{quotient, FiniteGroup, GroupError, Homomorphism};

/// Section, factor set and conjugation exponents of an extension by a
/// normal subgroup ⟨c⟩ ≅ ℤ/p.
///
/// `section[g]` is the least-index element of the fiber over g, so the
/// identity coset maps to the identity. `factor_set[h][g] = m` with
/// u(h)u(g) = c^m u(hg) and `conj_exp[h] = n` with u(h) c u(h)⁻¹ = cⁿ.
#[derive(Clone, Debug)]
pub struct CentralExtensionData {
    pub total: FiniteGroup,
    pub p: u64,
    pub c: usize,
    pub quotient: FiniteGroup,
    pub pi: Homomorphism,
    pub section: Vec<usize>,
    pub factor_set: Vec<Vec<u64>>,
    pub conj_exp: Vec<u64>,
    c_exponent: Vec<Option<u64>>,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl CentralExtensionData {
    /// Extension data for G̃ → G̃/⟨c⟩.
    pub fn new(total: &FiniteGroup, c: usize) -> Result<Self, GroupError> {
        if c >= total.order() || !is_prime(total.element_order(c)) {
            return Err(GroupError::NotPrimeOrder(c));
        }
        let sub = total.subgroup_generated(&[c]);
        let (_, pi) = quotient(total, &sub)?;
        Self::with_projection(total, c, pi)
    }

    /// Extension data for a supplied surjection whose kernel is ⟨c⟩.
    pub fn with_projection(total: &FiniteGroup, c: usize, pi: Homomorphism) -> Result<Self, GroupError> {
        let p = total.element_order(c);
        if !is_prime(p) {
            return Err(GroupError::NotPrimeOrder(c));
        }
        if pi.source != *total {
            return Err(GroupError::InvalidExtension("projection has the wrong source".into()));
        }
        let sub = total.subgroup_generated(&[c]);
        if pi.kernel() != sub {
            return Err(GroupError::InvalidExtension("kernel of the projection is not ⟨c⟩".into()));
        }
        if !pi.is_surjective() {
            return Err(GroupError::InvalidExtension("projection is not surjective".into()));
        }
        if !total.is_normal(&sub) {
            return Err(GroupError::NotNormal);
        }
        let q = pi.target.clone();
        let mut section = vec![usize::MAX; q.order()];
        for a in total.elements() {
            let img = pi.apply(a);
            if section[img] == usize::MAX {
                section[img] = a;
            }
        }
        let mut c_exponent = vec![None; total.order()];
        let mut cur = 0;
        for i in 0..p {
            c_exponent[cur] = Some(i as u64);
            cur = total.mul(cur, c);
        }
        let exp_of = |a: usize| c_exponent[a].expect("element lies in ⟨c⟩");
        let factor_set = q
            .elements()
            .map(|h| {
                q.elements()
                    .map(|g| {
                        let lhs = total.mul(section[h], section[g]);
                        exp_of(total.mul(lhs, total.inv(section[q.mul(h, g)])))
                    })
                    .collect()
            })
            .collect();
        let conj_exp = q.elements().map(|h| exp_of(total.conjugate(section[h], c))).collect();
        let data = CentralExtensionData {
            total: total.clone(),
            p: p as u64,
            c,
            quotient: q,
            pi,
            section,
            factor_set,
            conj_exp,
            c_exponent,
        };
        data.verify()?;
        Ok(data)
    }

    /// The exponent i with a = cⁱ, for a ∈ ⟨c⟩.
    pub fn c_exponent(&self, a: usize) -> Option<u64> {
        self.c_exponent[a]
    }

    /// Index of cⁱ·u(g).
    pub fn element(&self, i: u64, g: usize) -> usize {
        self.total.mul(self.total.pow(self.c, i as i64), self.section[g])
    }

    /// (i, g) with a = cⁱ u(g).
    pub fn decompose(&self, a: usize) -> (u64, usize) {
        let g = self.pi.apply(a);
        let i = self.c_exponent[self.total.mul(a, self.total.inv(self.section[g]))].unwrap();
        (i, g)
    }

    /// True when c is central.
    pub fn is_central(&self) -> bool {
        self.conj_exp.iter().all(|&n| n == 1)
    }

    /// Rebuilds the multiplication of G̃ from (G, m, n, p) and compares it
    /// with the Cayley table on every pair:
    /// (cⁱu(h))(cʲu(g)) = c^{i + n(h)j + m(h,g)} u(hg).
    pub fn verify(&self) -> Result<(), GroupError> {
        let p = self.p;
        if self.section[0] != 0 {
            return Err(GroupError::InvalidExtension("section does not fix the identity".into()));
        }
        for h in self.quotient.elements() {
            if self.pi.apply(self.section[h]) != h {
                return Err(GroupError::InvalidExtension("π∘u ≠ id".into()));
            }
            if self.conj_exp[h].is_multiple_of(p) {
                return Err(GroupError::InvalidExtension("conjugation exponent not invertible".into()));
            }
        }
        for i in 0..p {
            for h in self.quotient.elements() {
                let a = self.element(i, h);
                for j in 0..p {
                    for g in self.quotient.elements() {
                        let b = self.element(j, g);
                        let k = (i + self.conj_exp[h] * j + self.factor_set[h][g]) % p;
                        let rebuilt = self.element(k, self.quotient.mul(h, g));
                        if rebuilt != self.total.mul(a, b) {
                            return Err(GroupError::InvalidExtension(format!(
                                "reconstruction differs at ({a},{b})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The least-index central element of order exactly p in a nontrivial
/// p-group.
pub fn find_central_order_p(h: &FiniteGroup, p: u64) -> Result<usize, GroupError> {
    if h.order() == 1 || !h.is_p_group(p) || !is_prime(p as usize) {
        return Err(GroupError::NotPGroup { order: h.order(), p });
    }
    h.center()
        .into_iter()
        .find(|&a| h.element_order(a) as u64 == p)
        .ok_or(GroupError::NotPGroup { order: h.order(), p })
}
