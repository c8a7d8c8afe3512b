use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use crate::error::{MackeyError, Result};
use crate::linalg::Prime;

use super::PGroup;

/// A subgroup of a fixed parent group, stored as a bitset plus its sorted
/// element list and a generating list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    bits: Vec<u64>,
    elements: Vec<usize>,
    gens: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Larger subgroups first, ties broken by the sorted element lists.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .order()
            .cmp(&self.order())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl Subgroup {
    pub(crate) fn from_sorted(parent_order: usize, elements: Vec<usize>, gens: Vec<usize>) -> Self {
        let mut bits = vec![0u64; parent_order.div_ceil(64)];
        for &x in &elements {
            bits[x / 64] |= 1 << (x % 64);
        }
        Subgroup {
            bits,
            elements,
            gens,
        }
    }

    /// The membership bitset, 64 elements per word.
    pub fn bits(&self) -> &[u64] {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.bits.len() == other.bits.len()
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn index_in(&self, other: &Subgroup) -> usize {
        other.order() / self.order()
    }
}

/// Which subgroups [`PGroup::subgroups`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupKind {
    All,
    Normal,
}

/// Default bound on the number of subgroups enumerated.
pub const DEFAULT_SUBGROUP_CAP: usize = 200_000;

impl PGroup {
    /// All subgroups (or all normal subgroups), by cyclic extension: every
    /// nontrivial subgroup of a p-group is `⟨H, x⟩` for a maximal subgroup `H`,
    /// which is normal of index p.
    /// Sorted with larger subgroups first.
    pub fn subgroups(&self, kind: SubgroupKind, cap: usize) -> Result<Vec<Subgroup>> {
        let mut found: std::collections::HashSet<Subgroup> = std::collections::HashSet::new();
        let mut layer = vec![self.trivial_subgroup()];
        found.insert(self.trivial_subgroup());
        while !layer.is_empty() {
            let mut next = Vec::new();
            for h in &layer {
                let mut covered = vec![false; self.order()];
                for &x in h.elements() {
                    covered[x] = true;
                }
                for x in 0..self.order() {
                    if covered[x] || !h.contains(self.pow(x, self.p() as u64)) {
                        continue;
                    }
                    if !h.gens().iter().all(|&y| h.contains(self.conj(x, y))) {
                        continue;
                    }
                    // |⟨H, x⟩ : H| = p, so every element outside H regenerates it
                    let k = self.extend(h, x);
                    for &y in k.elements() {
                        covered[y] = true;
                    }
                    if !found.contains(&k) {
                        if found.len() >= cap {
                            return Err(MackeyError::CapExceeded {
                                what: "subgroup count".into(),
                                cap,
                            });
                        }
                        found.insert(k.clone());
                        next.push(k);
                    }
                }
            }
            layer = next;
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        if kind == SubgroupKind::Normal {
            all.retain(|h| self.is_normal(h));
        }
        all.sort();
        Ok(all)
    }
}

/// The elementary abelian quotient `G/Φ(G)` with a logarithm onto `F_p^d`.
#[derive(Clone, Debug)]
pub struct ElAb {
    p: Prime,
    rank: usize,
    basis: Vec<usize>,
    frattini: Subgroup,
    log: Vec<u32>,
}

impl ElAb {
    pub(super) fn new(g: &PGroup) -> Self {
        let phi = g.frattini();
        let p = g.prime();
        // greedy lexicographically smallest independent sequence mod Φ
        let mut basis = Vec::new();
        let mut span = phi.clone();
        for x in 0..g.order() {
            if span.order() == g.order() {
                break;
            }
            if !span.contains(x) {
                basis.push(x);
                span = g.extend(&span, x);
            }
        }
        let d = basis.len();
        let mut log = vec![u32::MAX; g.order() * d.max(1)];
        let mut assigned = vec![false; g.order()];
        // enumerate x_1^{a_1}…x_d^{a_d}·φ
        let pp = p.get() as usize;
        let total = pp.pow(d as u32);
        let mut coeffs = vec![0u32; d];
        for code in 0..total {
            let mut c = code;
            for a in coeffs.iter_mut() {
                *a = (c % pp) as u32;
                c /= pp;
            }
            let mut x = 0;
            for (i, &a) in coeffs.iter().enumerate() {
                x = g.mul(x, g.pow(basis[i], a as u64));
            }
            for &f in phi.elements() {
                let y = g.mul(x, f);
                assigned[y] = true;
                if d > 0 {
                    log[y * d..(y + 1) * d].copy_from_slice(&coeffs);
                }
            }
        }
        debug_assert!(assigned.iter().all(|&a| a));
        if d == 0 {
            log.clear();
        }
        ElAb {
            p,
            rank: d,
            basis,
            frattini: phi,
            log,
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Elements whose images form the standard basis of `F_p^d`.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn frattini(&self) -> &Subgroup {
        &self.frattini
    }

    pub fn log(&self, x: usize) -> &[u32] {
        &self.log[x * self.rank..(x + 1) * self.rank]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, elementary_abelian};

    fn two() -> Prime {
        Prime::new(2).unwrap()
    }

    #[test]
    fn subgroup_counts() {
        let c2 = cyclic(two(), 1).unwrap();
        assert_eq!(c2.subgroups(SubgroupKind::All, 100).unwrap().len(), 2);
        assert_eq!(c2.subgroups(SubgroupKind::Normal, 100).unwrap().len(), 2);
        let c4 = cyclic(two(), 2).unwrap();
        assert_eq!(c4.subgroups(SubgroupKind::All, 100).unwrap().len(), 3);
        assert_eq!(c4.subgroups(SubgroupKind::Normal, 100).unwrap().len(), 3);
        let d8 = dihedral(3).unwrap();
        assert_eq!(d8.subgroups(SubgroupKind::All, 100).unwrap().len(), 10);
        assert_eq!(d8.subgroups(SubgroupKind::Normal, 100).unwrap().len(), 6);
        // (C_2)^4 has 1 + 15 + 35 + 15 + 1 subgroups
        let e = elementary_abelian(two(), 4).unwrap();
        assert_eq!(e.subgroups(SubgroupKind::All, 1000).unwrap().len(), 67);
        assert!(matches!(
            e.subgroups(SubgroupKind::All, 10),
            Err(MackeyError::CapExceeded { .. })
        ));
    }

    /// Brute force: every subset closed under the product.
    fn brute_subgroups(g: &PGroup) -> usize {
        let n = g.order();
        assert!(n <= 16);
        (0u32..1 << n)
            .filter(|&mask| {
                mask & 1 == 1
                    && (0..n).all(|a| {
                        mask >> a & 1 == 0
                            || (0..n).all(|b| mask >> b & 1 == 0 || mask >> g.mul(a, b) & 1 == 1)
                    })
            })
            .count()
    }

    #[test]
    fn subgroup_enumeration_matches_brute_force() {
        for g in [
            cyclic(two(), 3).unwrap(),
            dihedral(3).unwrap(),
            crate::group::quaternion(3).unwrap(),
        ] {
            assert_eq!(
                g.subgroups(SubgroupKind::All, 1000).unwrap().len(),
                brute_subgroups(&g)
            );
        }
    }

    #[test]
    fn frattini_examples() {
        let c4 = cyclic(two(), 2).unwrap();
        let e = c4.elab();
        assert_eq!(e.frattini().order(), 2);
        assert_eq!(e.rank(), 1);
        let v4 = elementary_abelian(two(), 2).unwrap();
        assert_eq!(v4.elab().frattini().order(), 1);
        assert_eq!(v4.elab().rank(), 2);
        let d8 = dihedral(3).unwrap();
        let e = d8.elab();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.frattini().order(), 2);
        // Φ(D_8) is the center
        let z = e.frattini().elements()[1];
        assert!((0..8).all(|x| d8.mul(x, z) == d8.mul(z, x)));
    }

    #[test]
    fn log_is_a_homomorphism() {
        let p = two();
        for g in [dihedral(4).unwrap(), crate::group::quaternion(3).unwrap()] {
            let e = g.elab();
            for a in 0..g.order() {
                for b in 0..g.order() {
                    let sum: Vec<u32> = e
                        .log(a)
                        .iter()
                        .zip(e.log(b))
                        .map(|(&x, &y)| p.add(x, y))
                        .collect();
                    assert_eq!(e.log(g.mul(a, b)), sum.as_slice());
                }
            }
        }
    }
}
