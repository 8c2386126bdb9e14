//! Finite groups stored as Cayley tables.
//!
//! Every group keeps its identity at index 0. Constructors fix a concrete
//! element numbering, documented on each function, which downstream code uses
//! to name variables.

mod extension;
mod iso;
pub mod spec;
mod wreath;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use extension::{find_central_order_p, CentralExtensionData};
pub use iso::{d2n_split, find_isomorphism, phi_wreath_dihedral, D2nSplit};
pub use wreath::{wreath_product, WreathStructure, DEFAULT_SIZE_CAP};

/// Tables at most this large are checked for associativity exhaustively.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("invalid invariant factor chain {0:?}")]
    InvalidFactors(Vec<u64>),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("element {0} does not have prime order")]
    NotPrimeOrder(usize),
    #[error("group of order {order} is not a nontrivial {p}-group")]
    NotPGroup { order: usize, p: u64 },
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("group order {order} exceeds the size cap {cap}")]
    SizeCap { order: usize, cap: usize },
    #[error("invalid extension data: {0}")]
    InvalidExtension(String),
}

struct GroupData {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    names: Vec<String>,
}

/// A finite group given by its multiplication table.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.table == other.0.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order())
    }
}

impl FiniteGroup {
    /// Validates a row-major table. The identity is moved to index 0 if
    /// necessary. Associativity is checked for orders up to
    /// [`ASSOCIATIVITY_CHECK_LIMIT`]; larger tables need `trusted`.
    pub fn from_table(
        rows: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
        trusted: bool,
    ) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::InvalidTable("table is not square".into()));
        }
        let mut table: Vec<usize> = rows.into_iter().flatten().collect();
        if table.iter().any(|&v| v >= n) {
            return Err(GroupError::InvalidTable("entry out of range".into()));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|a| table[e * n + a] == a && table[a * n + e] == a))
            .ok_or_else(|| GroupError::InvalidTable("no identity element".into()))?;
        let mut names = names.unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        if names.len() != n {
            return Err(GroupError::InvalidTable("name count differs from order".into()));
        }
        if e != 0 {
            let swap = |v: usize| if v == e { 0 } else if v == 0 { e } else { v };
            let mut relabeled = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    relabeled[swap(a) * n + swap(b)] = swap(table[a * n + b]);
                }
            }
            table = relabeled;
            names.swap(0, e);
        }
        for a in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for b in 0..n {
                let r = table[a * n + b];
                let c = table[b * n + a];
                if seen_row[r] || seen_col[c] {
                    return Err(GroupError::InvalidTable(format!("row or column {a} repeats an entry")));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        if n <= ASSOCIATIVITY_CHECK_LIMIT || !trusted {
            if n > 4 * ASSOCIATIVITY_CHECK_LIMIT {
                return Err(GroupError::InvalidTable(format!(
                    "order {n} too large to check associativity"
                )));
            }
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a * n + b];
                    for c in 0..n {
                        if table[ab * n + c] != table[a * n + table[b * n + c]] {
                            return Err(GroupError::InvalidTable(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a * n + b] == 0).unwrap())
            .collect();
        Ok(FiniteGroup(Arc::new(GroupData { order: n, table, inverse, names })))
    }

    fn from_mul(n: usize, names: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Self {
        let rows = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        Self::from_table(rows, Some(names), true).expect("constructor produced a valid group")
    }

    pub fn trivial() -> Self {
        cyclic(1)
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.table[a * self.0.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.0.inverse[a]
    }

    /// `a · b · a⁻¹`.
    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut cur = a;
        while cur != 0 {
            cur = self.mul(cur, a);
            k += 1;
        }
        k
    }

    pub fn name(&self, a: usize) -> &str {
        &self.0.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|a| self.0.table[a * n..(a + 1) * n].to_vec()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a))
            .fold(1, num_integer::lcm)
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([0usize]);
        let mut frontier = vec![0usize];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = self.mul(a, g);
                if set.insert(b) {
                    frontier.push(b);
                }
            }
        }
        set.into_iter().collect()
    }

    /// A generating set chosen greedily by least index.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for a in self.elements() {
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let members: BTreeSet<usize> = set.iter().copied().collect();
        members.contains(&0)
            && members.iter().all(|&a| a < self.order())
            && members.iter().all(|&a| members.iter().all(|&b| members.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        let members: BTreeSet<usize> = set.iter().copied().collect();
        self.elements().all(|g| members.iter().all(|&a| members.contains(&self.conjugate(g, a))))
    }

    /// True when the order is a power of `p` (the trivial group counts).
    pub fn is_p_group(&self, p: u64) -> bool {
        let mut n = self.order() as u64;
        while n.is_multiple_of(p) {
            n /= p;
        }
        n == 1
    }

    /// The invariant factors d₁ | d₂ | … of an abelian group, computed from
    /// the counts of elements of each prime-power order.
    pub fn invariant_factors(&self) -> Result<Vec<u64>, GroupError> {
        if !self.is_abelian() {
            return Err(GroupError::NotAbelian);
        }
        let orders: Vec<u64> = self.elements().map(|a| self.element_order(a) as u64).collect();
        let mut per_prime: Vec<Vec<u64>> = Vec::new();
        for p in crate::scalars::prime_factors(self.order() as u64) {
            // count[j] = #{a : ord(a) | p^j} = p^{Σ min(j, e_i)}
            let mut sylow = 1u64;
            while (self.order() as u64).is_multiple_of(sylow * p) {
                sylow *= p;
            }
            let mut exps = Vec::new();
            let mut prev_log = 0u32;
            let mut j = 1u32;
            loop {
                let pj = p.pow(j);
                let count = orders.iter().filter(|&&o| pj % o == 0).count() as u64;
                let log = count.ilog(p);
                let cyclic_factors_at_least_j = log - prev_log;
                exps.push(cyclic_factors_at_least_j);
                prev_log = log;
                if count == sylow {
                    break;
                }
                j += 1;
            }
            // exps[j-1] = number of cyclic p-factors of exponent ≥ j
            let mut powers = Vec::new();
            for (idx, &cnt) in exps.iter().enumerate() {
                let next = exps.get(idx + 1).copied().unwrap_or(0);
                for _ in 0..cnt - next {
                    powers.push(p.pow(idx as u32 + 1));
                }
            }
            powers.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push(powers);
        }
        let k = per_prime.iter().map(|v| v.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; k];
        for powers in per_prime {
            for (i, q) in powers.into_iter().enumerate() {
                factors[k - 1 - i] *= q;
            }
        }
        Ok(factors)
    }

    /// Elements b₁,…,b_k of orders d₁,…,d_k (the invariant factors) with
    /// A = ⟨b₁⟩ × … × ⟨b_k⟩, found by backtracking from the largest factor.
    pub fn abelian_basis(&self) -> Result<Vec<usize>, GroupError> {
        let factors = self.invariant_factors()?;
        let mut chosen: Vec<usize> = Vec::new();
        fn search(g: &FiniteGroup, factors: &[u64], chosen: &mut Vec<usize>, span: usize) -> bool {
            let level = chosen.len();
            if level == factors.len() {
                return true;
            }
            let d = factors[factors.len() - 1 - level] as usize;
            for a in g.elements() {
                if g.element_order(a) != d {
                    continue;
                }
                chosen.push(a);
                let size = g.subgroup_generated(chosen).len();
                if size == span * d && search(g, factors, chosen, size) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        if !search(self, &factors, &mut chosen, 1) {
            return Err(GroupError::InvalidTable("abelian basis search failed".into()));
        }
        chosen.reverse();
        Ok(chosen)
    }

    /// Coordinates of every element with respect to `basis`: element a equals
    /// ∏ basis[i]^{coords[a][i]}.
    pub fn abelian_coordinates(&self, basis: &[usize]) -> Vec<Vec<u64>> {
        let orders: Vec<usize> = basis.iter().map(|&b| self.element_order(b)).collect();
        let mut coords = vec![Vec::new(); self.order()];
        let total: usize = orders.iter().product();
        for idx in 0..total {
            let mut rest = idx;
            let mut elt = 0;
            let mut v = Vec::with_capacity(basis.len());
            for (i, &b) in basis.iter().enumerate() {
                let e = rest % orders[i];
                rest /= orders[i];
                elt = self.mul(elt, self.pow(b, e as i64));
                v.push(e as u64);
            }
            coords[elt] = v;
        }
        coords
    }

    /// Human-readable summary line.
    pub fn describe(&self) -> String {
        let mut parts = vec![
            format!("order {}", self.order()),
            if self.is_abelian() { "abelian".into() } else { "nonabelian".into() },
            format!("center order {}", self.center().len()),
            format!("exponent {}", self.exponent()),
        ];
        if let Ok(f) = self.invariant_factors() {
            parts.push(format!("invariant factors {f:?}"));
        }
        parts.join(", ")
    }
}

/// Cyclic group ℤ/n; element i is c^i.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1, "cyclic group order must be positive");
    let names = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "c".to_string(),
            _ => format!("c^{i}"),
        })
        .collect();
    FiniteGroup::from_mul(n, names, |a, b| (a + b) % n)
}

/// ℤ/d₁ × … × ℤ/d_k with d₁ | d₂ | …; element index is the mixed-radix
/// number Σ aᵢ·∏_{j<i} d_j.
pub fn abelian(factors: &[u64]) -> Result<FiniteGroup, GroupError> {
    if factors.iter().any(|&d| d < 2) || factors.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(GroupError::InvalidFactors(factors.to_vec()));
    }
    Ok(product_of_cyclics(factors))
}

fn product_of_cyclics(factors: &[u64]) -> FiniteGroup {
    let dims: Vec<usize> = factors.iter().map(|&d| d as usize).collect();
    let n: usize = dims.iter().product();
    let decode = |mut i: usize| {
        dims.iter()
            .map(|&d| {
                let v = i % d;
                i /= d;
                v
            })
            .collect::<Vec<_>>()
    };
    let encode = |v: &[usize]| {
        let mut idx = 0;
        for (k, &d) in dims.iter().enumerate().rev() {
            idx = idx * d + v[k];
        }
        idx
    };
    let names = (0..n)
        .map(|i| {
            let parts: Vec<String> = decode(i).iter().map(|v| v.to_string()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    FiniteGroup::from_mul(n, names, |a, b| {
        let (va, vb) = (decode(a), decode(b));
        let sum: Vec<usize> = va.iter().zip(&vb).zip(&dims).map(|((x, y), d)| (x + y) % d).collect();
        encode(&sum)
    })
}

/// Dihedral group of order 2n, ⟨σ, τ | σⁿ = τ² = 1, τστ⁻¹ = σ⁻¹⟩; element
/// σ^a τ^e has index a + n·e.
pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidParameter("dihedral order parameter must be ≥ 1".into()));
    }
    let names = (0..2 * n)
        .map(|i| {
            let (a, e) = (i % n, i / n);
            let s = match a {
                0 => String::new(),
                1 => "s".to_string(),
                _ => format!("s^{a}"),
            };
            match (s.is_empty(), e) {
                (true, 0) => "1".to_string(),
                (true, _) => "t".to_string(),
                (false, 0) => s,
                (false, _) => format!("{s}t"),
            }
        })
        .collect();
    Ok(FiniteGroup::from_mul(2 * n, names, |x, y| {
        let (a, e) = (x % n, x / n);
        let (b, f) = (y % n, y / n);
        let b_tw = if e == 1 { (n - b) % n } else { b };
        (a + b_tw) % n + n * ((e + f) % 2)
    }))
}

/// A ×  B with element (a, b) at index a·|B| + b.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    pub group: FiniteGroup,
    pub left: FiniteGroup,
    pub right: FiniteGroup,
}

impl DirectProduct {
    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.right.order() + b
    }

    pub fn split(&self, x: usize) -> (usize, usize) {
        (x / self.right.order(), x % self.right.order())
    }

    pub fn embed_left(&self) -> Homomorphism {
        Homomorphism::new(&self.left, &self.group, self.left.elements().map(|a| self.pair(a, 0)).collect())
            .expect("canonical embedding")
    }

    pub fn embed_right(&self) -> Homomorphism {
        Homomorphism::new(&self.right, &self.group, self.right.elements().map(|b| self.pair(0, b)).collect())
            .expect("canonical embedding")
    }

    pub fn project_left(&self) -> Homomorphism {
        Homomorphism::new(&self.group, &self.left, self.group.elements().map(|x| self.split(x).0).collect())
            .expect("canonical projection")
    }

    pub fn project_right(&self) -> Homomorphism {
        Homomorphism::new(&self.group, &self.right, self.group.elements().map(|x| self.split(x).1).collect())
            .expect("canonical projection")
    }
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> DirectProduct {
    let nb = b.order();
    let names = a
        .elements()
        .flat_map(|x| b.elements().map(move |y| (x, y)))
        .map(|(x, y)| format!("({},{})", a.name(x), b.name(y)))
        .collect();
    let group = FiniteGroup::from_mul(a.order() * nb, names, |x, y| {
        a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
    });
    DirectProduct { group, left: a.clone(), right: b.clone() }
}

/// A group homomorphism, verified on every pair at construction.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, map: Vec<usize>) -> Result<Self, GroupError> {
        if map.len() != source.order() || map.iter().any(|&v| v >= target.order()) {
            return Err(GroupError::NotHomomorphism("map has the wrong shape".into()));
        }
        if map[0] != 0 {
            return Err(GroupError::NotHomomorphism("identity not preserved".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotHomomorphism(format!("fails on ({a},{b})")));
                }
            }
        }
        Ok(Homomorphism { source: source.clone(), target: target.clone(), map })
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source.elements().filter(|&a| self.map[a] == 0).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn is_surjective(&self) -> bool {
        let image: BTreeSet<usize> = self.map.iter().copied().collect();
        image.len() == self.target.order()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism, GroupError> {
        if self.target != other.source {
            return Err(GroupError::NotHomomorphism("composition domains differ".into()));
        }
        let map = self.map.iter().map(|&a| other.map[a]).collect();
        Homomorphism::new(&self.source, &other.target, map)
    }

    pub fn inverse(&self) -> Result<Homomorphism, GroupError> {
        if !self.is_bijective() {
            return Err(GroupError::NotHomomorphism("not bijective".into()));
        }
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        Homomorphism::new(&self.target, &self.source, inv)
    }
}

/// G/N on cosets ordered by their least element; returns the quotient and
/// the projection.
pub fn quotient(g: &FiniteGroup, normal: &[usize]) -> Result<(FiniteGroup, Homomorphism), GroupError> {
    if !g.is_subgroup(normal) {
        return Err(GroupError::NotSubgroup);
    }
    if !g.is_normal(normal) {
        return Err(GroupError::NotNormal);
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for a in g.elements() {
        if coset_of[a] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(a);
        for &n in normal {
            coset_of[g.mul(a, n)] = id;
        }
    }
    let names = reps.iter().map(|&r| format!("[{}]", g.name(r))).collect();
    let q = FiniteGroup::from_mul(reps.len(), names, |x, y| coset_of[g.mul(reps[x], reps[y])]);
    let pi = Homomorphism::new(g, &q, coset_of)?;
    Ok((q, pi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_small_cyclic() {
        let t = cyclic(1);
        assert_eq!(t.order(), 1);
        assert!(t.is_trivial());
        let c6 = cyclic(6);
        assert_eq!(c6.invariant_factors().unwrap(), vec![6]);
        assert_eq!(c6.exponent(), 6);
    }

    #[test]
    fn dihedral_three_is_nonabelian() {
        let d3 = dihedral(3).unwrap();
        assert_eq!(d3.order(), 6);
        let (s, t) = (1, 3);
        assert_ne!(d3.mul(s, t), d3.mul(t, s));
        // τστ⁻¹ = σ⁻¹
        assert_eq!(d3.conjugate(t, s), d3.inv(s));
        assert_eq!(d3.element_order(s), 3);
        assert_eq!(d3.element_order(t), 2);
    }

    #[test]
    fn abelian_round_trip() {
        let a = abelian(&[2, 4]).unwrap();
        assert_eq!(a.order(), 8);
        assert_eq!(a.exponent(), 4);
        assert_eq!(a.invariant_factors().unwrap(), vec![2, 4]);
        assert!(matches!(abelian(&[4, 2]), Err(GroupError::InvalidFactors(_))));
        assert!(matches!(abelian(&[1]), Err(GroupError::InvalidFactors(_))));
        let big = abelian(&[2, 6, 12]).unwrap();
        assert_eq!(big.invariant_factors().unwrap(), vec![2, 6, 12]);
    }

    #[test]
    fn klein_four_factors() {
        let v = direct_product(&cyclic(2), &cyclic(2)).group;
        assert_eq!(v.exponent(), 2);
        assert_eq!(v.invariant_factors().unwrap(), vec![2, 2]);
        // ℤ/2 × ℤ/3 is cyclic
        let c6 = direct_product(&cyclic(2), &cyclic(3)).group;
        assert_eq!(c6.invariant_factors().unwrap(), vec![6]);
    }

    #[test]
    fn product_with_dihedral_has_center_two() {
        let g = direct_product(&cyclic(2), &dihedral(3).unwrap()).group;
        assert_eq!(g.order(), 12);
        assert_eq!(g.center().len(), 2);
        assert!(dihedral(3).unwrap().invariant_factors().is_err());
    }

    #[test]
    fn trivial_factor_is_relabeling() {
        let d3 = dihedral(3).unwrap();
        let p = direct_product(&FiniteGroup::trivial(), &d3);
        assert_eq!(p.group, d3);
    }

    #[test]
    fn quotients() {
        let c4 = cyclic(4);
        let (q, pi) = quotient(&c4, &[0, 2]).unwrap();
        assert_eq!(q, cyclic(2));
        assert_eq!(pi.kernel(), vec![0, 2]);
        let (same, id) = quotient(&c4, &[0]).unwrap();
        assert_eq!(same, c4);
        assert_eq!(id.map, vec![0, 1, 2, 3]);
        let d3 = dihedral(3).unwrap();
        let (q, _) = quotient(&d3, &[0, 1, 2]).unwrap();
        assert_eq!(q, cyclic(2));
        assert_eq!(quotient(&d3, &[0, 3]).unwrap_err(), GroupError::NotNormal);
        assert_eq!(quotient(&d3, &[0, 1]).unwrap_err(), GroupError::NotSubgroup);
    }

    #[test]
    fn from_table_relabels_identity() {
        // ℤ/2 with identity listed second
        let g = FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]], None, false).unwrap();
        assert_eq!(g.rows(), vec![vec![0, 1], vec![1, 0]]);
        let bad = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], None, false);
        assert!(bad.is_err());
    }

    #[test]
    fn basis_generates_as_direct_product() {
        for factors in [vec![2u64, 4], vec![2, 2], vec![3, 3], vec![2, 2, 2], vec![12]] {
            let a = abelian(&factors).unwrap();
            let basis = a.abelian_basis().unwrap();
            let orders: Vec<u64> = basis.iter().map(|&b| a.element_order(b) as u64).collect();
            assert_eq!(orders, factors);
            let coords = a.abelian_coordinates(&basis);
            assert!(coords.iter().all(|c| c.len() == factors.len()));
        }
    }

    #[test]
    fn generated_tables_are_groups() {
        let groups = [cyclic(5), abelian(&[2, 2, 4]).unwrap(), dihedral(4).unwrap(), dihedral(1).unwrap()];
        for g in groups {
            FiniteGroup::from_table(g.rows(), None, false).unwrap();
        }
    }
}
