use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{MackeyError, Result};
use crate::group::{GroupRef, PGroup, Subgroup, SubgroupKind, DEFAULT_SUBGROUP_CAP};

/// How a Mackey system was requested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemKind {
    All,
    Normal,
    Closure(Vec<Subgroup>),
}

/// A set of subgroups closed under conjugation and pairwise intersection.
///
/// Members are sorted larger-first, so `G` (when present) has index 0 and the
/// unique minimal member comes last.
#[derive(Debug)]
pub struct MackeySystem {
    group: GroupRef,
    members: Vec<Subgroup>,
    index: HashMap<Subgroup, usize>,
    by_bits: HashMap<Vec<u64>, usize>,
    subs: Vec<Vec<usize>>,
    covers: Vec<Vec<usize>>,
    conj: Vec<u32>,
    contains_g: bool,
    contains_trivial: bool,
    normal_only: bool,
}

/// Flags reported alongside a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SystemFlags {
    pub contains_g: bool,
    pub contains_trivial: bool,
    pub normal_only: bool,
}

impl MackeySystem {
    pub fn new(group: GroupRef, kind: SystemKind) -> Result<Arc<Self>> {
        Self::with_cap(group, kind, DEFAULT_SUBGROUP_CAP)
    }

    pub fn with_cap(group: GroupRef, kind: SystemKind, cap: usize) -> Result<Arc<Self>> {
        let members = match kind {
            SystemKind::All => group.subgroups(SubgroupKind::All, cap)?,
            SystemKind::Normal => group.subgroups(SubgroupKind::Normal, cap)?,
            SystemKind::Closure(seeds) => closure(&group, &seeds, cap)?,
        };
        Ok(Arc::new(Self::from_members(group, members)))
    }

    /// All subgroups of `G`.
    pub fn all(group: GroupRef) -> Result<Arc<Self>> {
        Self::new(group, SystemKind::All)
    }

    /// The normal subgroups of `G`.
    pub fn normal(group: GroupRef) -> Result<Arc<Self>> {
        Self::new(group, SystemKind::Normal)
    }

    /// The smallest Mackey system containing `seeds`.
    pub fn closure(group: GroupRef, seeds: &[Subgroup]) -> Result<Arc<Self>> {
        Self::new(group, SystemKind::Closure(seeds.to_vec()))
    }

    /// The members of `self` containing `n`; `n` must be normal in `G`.
    pub fn above(&self, n: &Subgroup) -> Result<Arc<Self>> {
        if !self.group.is_normal(n) {
            return Err(MackeyError::NotNormal(
                "subsystem base must be normal in G".into(),
            ));
        }
        let members: Vec<Subgroup> = self
            .members
            .iter()
            .filter(|u| n.is_subset(u))
            .cloned()
            .collect();
        if members.is_empty() {
            return Err(MackeyError::PreconditionFailed(
                "no member contains the base".into(),
            ));
        }
        Ok(Arc::new(Self::from_members(self.group.clone(), members)))
    }

    fn from_members(group: GroupRef, mut members: Vec<Subgroup>) -> Self {
        members.sort();
        members.dedup();
        let m = members.len();
        let index: HashMap<Subgroup, usize> = members
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, u)| (u, i))
            .collect();
        let by_bits = members
            .iter()
            .enumerate()
            .map(|(i, u)| (u.bits().to_vec(), i))
            .collect();
        let subs: Vec<Vec<usize>> = (0..m)
            .map(|u| {
                (u..m)
                    .filter(|&v| members[v].is_subset(&members[u]))
                    .collect()
            })
            .collect();
        let covers = (0..m)
            .map(|u| {
                let strict: Vec<usize> = subs[u].iter().copied().filter(|&v| v != u).collect();
                let mut maximal: Vec<usize> = Vec::new();
                // `strict` is sorted larger-first, so any strict superset of `v`
                // inside `u` is examined before `v`
                for &v in &strict {
                    if !maximal.iter().any(|&w| members[v].is_subset(&members[w])) {
                        maximal.push(v);
                    }
                }
                maximal
            })
            .collect();
        let order = group.order();
        let mut conj = vec![0u32; order * m];
        for (u, slot) in conj.iter_mut().take(m).enumerate() {
            *slot = u as u32;
        }
        let gens = group.generators().to_vec();
        let gen_conj: Vec<Vec<u32>> = gens
            .iter()
            .map(|&s| {
                members
                    .iter()
                    .map(|u| index[&group.conjugate_subgroup(s, u)] as u32)
                    .collect()
            })
            .collect();
        for g in 1..order {
            let (prev, s) = group.parent(g).expect("non-identity element has a parent");
            for u in 0..m {
                let su = gen_conj[s][u] as usize;
                conj[g * m + u] = conj[prev * m + su];
            }
        }
        let contains_g = members.first().is_some_and(|u| u.order() == order);
        let contains_trivial = members.last().is_some_and(|u| u.is_trivial());
        let normal_only = members.iter().all(|u| group.is_normal(u));
        MackeySystem {
            group,
            members,
            index,
            by_bits,
            subs,
            covers,
            conj,
            contains_g,
            contains_trivial,
            normal_only,
        }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    pub fn member(&self, u: usize) -> &Subgroup {
        &self.members[u]
    }

    pub fn index_of(&self, u: &Subgroup) -> Option<usize> {
        self.index.get(u).copied()
    }

    /// Indices of members contained in `u` (including `u`), larger first.
    pub fn subs(&self, u: usize) -> &[usize] {
        &self.subs[u]
    }

    /// Maximal members strictly contained in `u`.
    pub fn covers(&self, u: usize) -> &[usize] {
        &self.covers[u]
    }

    /// Whether member `v` is contained in member `u`.
    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.members[v].is_subset(&self.members[u])
    }

    /// Index of `gUg⁻¹`.
    pub fn conj(&self, g: usize, u: usize) -> usize {
        self.conj[g * self.members.len() + u] as usize
    }

    /// Index of `U ∩ V`.
    pub fn meet(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.members[u].bits(), self.members[v].bits());
        let w: Vec<u64> = a.iter().zip(b).map(|(x, y)| x & y).collect();
        self.by_bits[&w]
    }

    pub fn flags(&self) -> SystemFlags {
        SystemFlags {
            contains_g: self.contains_g,
            contains_trivial: self.contains_trivial,
            normal_only: self.normal_only,
        }
    }

    pub fn contains_g(&self) -> bool {
        self.contains_g
    }

    pub fn contains_trivial(&self) -> bool {
        self.contains_trivial
    }

    pub fn normal_only(&self) -> bool {
        self.normal_only
    }

    /// Index of `G`, if present.
    pub fn top(&self) -> Option<usize> {
        self.contains_g.then_some(0)
    }

    /// Index of the minimal member (the intersection of all members).
    pub fn bottom(&self) -> usize {
        self.members.len() - 1
    }

    /// Whether `v ⊆ u` with `v` normal in `u`.
    pub fn is_normal_section(&self, u: usize, v: usize) -> bool {
        self.contains(u, v) && self.group.normalizes(&self.members[u], &self.members[v])
    }

    /// All normal sections `(U, V)`, including `U = V`.
    pub fn normal_sections(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            for &v in &self.subs[u] {
                if self.is_normal_section(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Checks (MS₁) and (MS₂).
    pub fn verify(&self) -> bool {
        let g = &self.group;
        let conj_ok = g.generators().iter().all(|&s| {
            self.members
                .iter()
                .all(|u| self.index.contains_key(&g.conjugate_subgroup(s, u)))
        });
        let meet_ok = (0..self.len()).all(|u| {
            (u..self.len()).all(|v| {
                self.index
                    .contains_key(&g.intersection(&self.members[u], &self.members[v]))
            })
        });
        conj_ok && meet_ok
    }
}

fn closure(group: &PGroup, seeds: &[Subgroup], cap: usize) -> Result<Vec<Subgroup>> {
    for s in seeds {
        if s.elements().last().is_some_and(|&x| x >= group.order()) || !s.contains(0) {
            return Err(MackeyError::NotSubgroup(
                "seed is not a subgroup of G".into(),
            ));
        }
    }
    let mut set: BTreeSet<Subgroup> = seeds.iter().cloned().collect();
    let mut frontier: Vec<Subgroup> = set.iter().cloned().collect();
    while let Some(u) = frontier.pop() {
        let mut fresh = Vec::new();
        for &s in group.generators() {
            fresh.push(group.conjugate_subgroup(s, &u));
        }
        for v in &set {
            fresh.push(group.intersection(&u, v));
        }
        for w in fresh {
            if set.insert(w.clone()) {
                if set.len() > cap {
                    return Err(MackeyError::CapExceeded {
                        what: "Mackey system members".into(),
                        cap,
                    });
                }
                frontier.push(w);
            }
        }
    }
    Ok(set.into_iter().collect())
}
