//! Finite-dimensional modules over the group algebra F_p[G].

use std::borrow::Cow;
use std::sync::{Arc, OnceLock};

use crate::error::{MackeyError, Result};
use crate::group::{PGroup, Subgroup};
use crate::linalg::{span, FpMatrix, FpSubquotient, Prime};

/// Entry budget (`|G|·dim²`) below which every element's action is cached.
pub const ACTION_CACHE_BUDGET: usize = 1 << 26;

/// A left F_p[G]-module given by generator action matrices acting on columns.
#[derive(Clone, Debug)]
pub struct FpGModule {
    group: Arc<PGroup>,
    dim: usize,
    action: Vec<FpMatrix>,
    cache: OnceLock<Option<Vec<FpMatrix>>>,
}

impl FpGModule {
    /// Validates invertibility and the group relations, then builds the module.
    pub fn new(group: Arc<PGroup>, dim: usize, action: Vec<FpMatrix>) -> Result<Self> {
        if action.len() != group.generators().len() {
            return Err(MackeyError::InvalidModule(format!(
                "{} action matrices for {} generators",
                action.len(),
                group.generators().len()
            )));
        }
        for (i, a) in action.iter().enumerate() {
            if a.prime() != group.prime() {
                return Err(MackeyError::ModulusMismatch(a.p(), group.p()));
            }
            if a.rows() != dim || a.cols() != dim {
                return Err(MackeyError::InvalidModule(format!(
                    "generator g{i} acts by a {}x{} matrix on a space of dim {dim}",
                    a.rows(),
                    a.cols()
                )));
            }
            if a.rank() != dim {
                return Err(MackeyError::InvalidModule(format!(
                    "generator g{i} acts by a non-invertible matrix"
                )));
            }
        }
        let m = Self::new_unchecked(group, dim, action);
        m.check_relations()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(group: Arc<PGroup>, dim: usize, action: Vec<FpMatrix>) -> Self {
        FpGModule {
            group,
            dim,
            action,
            cache: OnceLock::new(),
        }
    }

    fn check_relations(&self) -> Result<()> {
        let g = &self.group;
        for x in 0..g.order() {
            let rx = self.action(x);
            for (i, &s) in g.generators().iter().enumerate() {
                if rx.mul(&self.action[i]) != *self.action(g.mul(x, s)) {
                    return Err(MackeyError::InvalidModule(format!(
                        "action of g{i} violates the group relations"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(group: Arc<PGroup>) -> Self {
        let p = group.prime();
        let k = group.generators().len();
        Self::new_unchecked(group, 0, vec![FpMatrix::zeros(p, 0, 0); k])
    }

    /// `F_p^n` with trivial action.
    pub fn trivial(group: Arc<PGroup>, n: usize) -> Self {
        let p = group.prime();
        let k = group.generators().len();
        Self::new_unchecked(group, n, vec![FpMatrix::identity(p, n); k])
    }

    /// The regular module F_p[G] with basis the group elements, `s: g ↦ sg`.
    pub fn regular(group: Arc<PGroup>) -> Self {
        let n = group.order();
        let p = group.prime();
        let action = group
            .generators()
            .iter()
            .map(|&s| {
                let mut m = FpMatrix::zeros(p, n, n);
                for g in 0..n {
                    m.set(group.mul(s, g), g, 1);
                }
                m
            })
            .collect();
        Self::new_unchecked(group, n, action)
    }

    /// `F_p[G/U]` on left cosets, ordered by minimal element.
    pub fn permutation(group: Arc<PGroup>, u: &Subgroup) -> Self {
        let cosets = group.left_cosets(u);
        let mut coset_of = vec![0usize; group.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                coset_of[x] = i;
            }
        }
        let n = cosets.len();
        let p = group.prime();
        let action = group
            .generators()
            .iter()
            .map(|&s| {
                let mut m = FpMatrix::zeros(p, n, n);
                for (i, c) in cosets.iter().enumerate() {
                    m.set(coset_of[group.mul(s, c[0])], i, 1);
                }
                m
            })
            .collect();
        Self::new_unchecked(group, n, action)
    }

    pub fn group(&self) -> &Arc<PGroup> {
        &self.group
    }

    pub fn prime(&self) -> Prime {
        self.group.prime()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Action matrices of the generators.
    pub fn generator_actions(&self) -> &[FpMatrix] {
        &self.action
    }

    fn element_cache(&self) -> Option<&Vec<FpMatrix>> {
        self.cache
            .get_or_init(|| {
                let g = &self.group;
                if g.order().saturating_mul(self.dim * self.dim) > ACTION_CACHE_BUDGET {
                    return None;
                }
                let mut mats = Vec::with_capacity(g.order());
                mats.push(FpMatrix::identity(self.prime(), self.dim));
                for x in 1..g.order() {
                    let (prev, s) = g.parent(x).unwrap();
                    let m = mats[prev].mul(&self.action[s]);
                    mats.push(m);
                }
                Some(mats)
            })
            .as_ref()
    }

    /// The matrix by which the element `g` acts.
    pub fn action(&self, g: usize) -> Cow<'_, FpMatrix> {
        if let Some(c) = self.element_cache() {
            return Cow::Borrowed(&c[g]);
        }
        let mut m = FpMatrix::identity(self.prime(), self.dim);
        for s in self.group.word(g) {
            m = m.mul(&self.action[s]);
        }
        Cow::Owned(m)
    }

    pub fn act(&self, g: usize, v: &[u32]) -> Vec<u32> {
        self.action(g).apply(v)
    }

    /// Sum of the actions of the given elements.
    pub fn sum_action(&self, elems: &[usize]) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.prime(), self.dim, self.dim);
        for &g in elems {
            m = m.add(&self.action(g));
        }
        m
    }

    /// The norm `Σ_{g ∈ G} g`.
    pub fn norm(&self) -> FpMatrix {
        self.sum_action(&(0..self.group.order()).collect::<Vec<_>>())
    }

    /// Vectors spanning `ω_U·M` for the subgroup generated by `gens`.
    pub fn augmentation_span(&self, gens: &[usize]) -> FpMatrix {
        let p = self.prime();
        let mut rows = FpMatrix::zeros(p, 0, self.dim);
        for &s in gens {
            let d = self.action(s).sub(&FpMatrix::identity(p, self.dim));
            let img = d.image_basis();
            for r in 0..img.rows() {
                rows.push_row(img.row(r));
            }
        }
        rows.row_space()
    }

    /// Fixed points under the subgroup generated by `gens`, as a row basis.
    pub fn fixed_space(&self, gens: &[usize]) -> FpMatrix {
        let p = self.prime();
        let mut stacked = FpMatrix::zeros(p, 0, self.dim);
        for &s in gens {
            let d = self.action(s).sub(&FpMatrix::identity(p, self.dim));
            for r in 0..d.rows() {
                stacked.push_row(d.row(r));
            }
        }
        stacked.kernel_basis()
    }

    /// `M^G` (the socle, for a p-group).
    pub fn invariants(&self) -> FpSubquotient {
        FpSubquotient::subspace(&self.fixed_space(self.group.generators()))
    }

    /// `M_G = M/ω_G M` (the head, for a p-group).
    pub fn coinvariants(&self) -> FpSubquotient {
        FpSubquotient::quotient(&self.augmentation_span(self.group.generators()))
            .expect("subspace of M")
    }

    /// Projective (equivalently free) iff `dim M = |G|·dim M_G`.
    pub fn is_projective(&self) -> bool {
        self.dim == self.group.order() * self.coinvariants().dim()
    }

    /// Restriction to `U`, as a module over `U` regarded as a group.
    pub fn restrict(&self, u: &Subgroup) -> (FpGModule, Vec<usize>) {
        let (ug, embed) = self.group.subgroup_as_group(u);
        let action = u
            .gens()
            .iter()
            .map(|&s| self.action(s).into_owned())
            .collect();
        (Self::new_unchecked(Arc::new(ug), self.dim, action), embed)
    }

    /// Induction `F_p[G] ⊗_{F_p[H]} N` from `H` (given as a group with its
    /// embedding into `G`). Basis `r_i ⊗ n_k` over the minimal left transversal,
    /// indexed `i·dim N + k`.
    ///
    /// For finite index this is also the coinduced module.
    pub fn induce(
        group: Arc<PGroup>,
        h: &Subgroup,
        n: &FpGModule,
        embed: &[usize],
    ) -> Result<FpGModule> {
        if embed.len() != h.order() || n.group().order() != h.order() {
            return Err(MackeyError::NotSubgroup(
                "module is not over the given subgroup".into(),
            ));
        }
        let mut to_h = vec![usize::MAX; group.order()];
        for (i, &x) in embed.iter().enumerate() {
            if !h.contains(x) {
                return Err(MackeyError::NotSubgroup(
                    "embedding leaves the subgroup".into(),
                ));
            }
            to_h[x] = i;
        }
        let reps = group.left_transversal(&group.whole(), h);
        let mut coset_of = vec![0usize; group.order()];
        for (i, &r) in reps.iter().enumerate() {
            for &x in h.elements() {
                coset_of[group.mul(r, x)] = i;
            }
        }
        let d = n.dim();
        let total = reps.len() * d;
        let p = group.prime();
        let action = group
            .generators()
            .iter()
            .map(|&s| {
                let mut m = FpMatrix::zeros(p, total, total);
                for (i, &r) in reps.iter().enumerate() {
                    let sr = group.mul(s, r);
                    let j = coset_of[sr];
                    let hh = group.mul(group.inv(reps[j]), sr);
                    let a = n.action(to_h[hh]);
                    for row in 0..d {
                        for col in 0..d {
                            m.set(j * d + row, i * d + col, a.get(row, col));
                        }
                    }
                }
                m
            })
            .collect();
        Ok(Self::new_unchecked(group, total, action))
    }

    /// The dual module `M* = Hom(M, F_p)` with `g ↦ ρ(g⁻¹)ᵀ`.
    pub fn contragredient(&self) -> FpGModule {
        let action = self
            .action
            .iter()
            .map(|a| a.inverse().expect("invertible action").transpose())
            .collect();
        Self::new_unchecked(self.group.clone(), self.dim, action)
    }

    pub fn direct_sum(&self, other: &FpGModule) -> FpGModule {
        assert!(Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group);
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Self::new_unchecked(self.group.clone(), self.dim + other.dim, action)
    }

    /// Canonical basis of the submodule generated by the given vectors.
    pub fn generated_submodule(&self, vectors: &[Vec<u32>]) -> FpMatrix {
        let p = self.prime();
        let mut basis = span(p, self.dim, vectors);
        loop {
            let mut vecs = basis.to_rows();
            for a in &self.action {
                for r in 0..basis.rows() {
                    vecs.push(a.apply(basis.row(r)));
                }
            }
            let next = span(p, self.dim, &vecs);
            if next.rows() == basis.rows() {
                return basis;
            }
            basis = next;
        }
    }

    /// Whether the row space of `basis` is stable under the action.
    pub fn is_submodule(&self, basis: &FpMatrix) -> bool {
        let sq = FpSubquotient::subspace(basis);
        self.action
            .iter()
            .all(|a| (0..basis.rows()).all(|r| sq.contains(&a.apply(basis.row(r)))))
    }

    /// The submodule spanned by the rows of `basis`, in the coordinates of
    /// its canonical basis, with the inclusion matrix.
    pub fn submodule(&self, basis: &FpMatrix) -> Result<(FpGModule, FpMatrix)> {
        if !self.is_submodule(basis) {
            return Err(MackeyError::InvalidModule(
                "subspace is not stable under the action".into(),
            ));
        }
        let sq = FpSubquotient::subspace(basis);
        let action = self
            .action
            .iter()
            .map(|a| sq.induced_map(&sq, a))
            .collect::<Result<Vec<_>>>()?;
        let inclusion = sq.reps().transpose();
        Ok((
            Self::new_unchecked(self.group.clone(), sq.dim(), action),
            inclusion,
        ))
    }

    /// `M/S` for a submodule `S`, with the projection matrix.
    pub fn quotient(&self, basis: &FpMatrix) -> Result<(FpGModule, FpMatrix)> {
        if !self.is_submodule(basis) {
            return Err(MackeyError::InvalidModule(
                "subspace is not stable under the action".into(),
            ));
        }
        let sq = FpSubquotient::quotient(basis)?;
        let action = self
            .action
            .iter()
            .map(|a| sq.induced_map(&sq, a))
            .collect::<Result<Vec<_>>>()?;
        let proj = sq.induced_map(&sq, &FpMatrix::identity(self.prime(), self.dim))?;
        Ok((
            Self::new_unchecked(self.group.clone(), sq.dim(), action),
            proj,
        ))
    }

    /// Whether `f: self -> other` (a `dim other × dim self` matrix) is G-linear.
    pub fn is_hom_to(&self, other: &FpGModule, f: &FpMatrix) -> bool {
        f.rows() == other.dim
            && f.cols() == self.dim
            && self
                .action
                .iter()
                .zip(&other.action)
                .all(|(a, b)| b.mul(f) == f.mul(a))
    }

    /// Dimension of `Hom_G(self, other)`: G-fixed points of `Hom(self, other)`.
    pub fn hom_dim(&self, other: &FpGModule) -> usize {
        let p = self.prime();
        let (m, n) = (other.dim, self.dim);
        // X (m×n) ↦ ρ_B(s) X − X ρ_A(s), with X vectorized row-major
        let mut stacked = FpMatrix::zeros(p, 0, m * n);
        for (a, b) in self.action.iter().zip(&other.action) {
            let mut block = FpMatrix::zeros(p, m * n, m * n);
            for r in 0..m {
                for c in 0..n {
                    let out = r * n + c;
                    for k in 0..m {
                        block.add_at(out, k * n + c, b.get(r, k));
                    }
                    for k in 0..n {
                        block.add_at(out, r * n + k, p.neg(a.get(k, c)));
                    }
                }
            }
            stacked = stacked.vstack(&block);
        }
        m * n - stacked.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral};

    fn c(k: u32) -> Arc<PGroup> {
        Arc::new(cyclic(Prime::new(2).unwrap(), k).unwrap())
    }

    #[test]
    fn permutation_module_examples() {
        let g = c(2);
        assert_eq!(FpGModule::permutation(g.clone(), &g.whole()).dim(), 1);
        assert_eq!(
            FpGModule::permutation(g.clone(), &g.trivial_subgroup()).dim(),
            4
        );
        let sub = g.closure(&[g.pow(g.generators()[0], 2)]);
        let m = FpGModule::permutation(g.clone(), &sub);
        assert_eq!(m.dim(), 2);
        let swap = FpMatrix::from_rows(g.prime(), 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.generator_actions()[0], swap);
    }

    #[test]
    fn invariants_and_coinvariants() {
        let g = c(1);
        let t = FpGModule::trivial(g.clone(), 1);
        assert_eq!((t.invariants().dim(), t.coinvariants().dim()), (1, 1));
        let r = FpGModule::regular(g.clone());
        let inv = r.invariants();
        assert_eq!(inv.dim(), 1);
        assert_eq!(inv.sub_basis().row(0), &[1, 1]);
        assert_eq!(r.coinvariants().dim(), 1);
        let z = FpGModule::zero(g);
        assert_eq!((z.invariants().dim(), z.coinvariants().dim()), (0, 0));
    }

    #[test]
    fn projectivity() {
        let g = c(2);
        assert!(FpGModule::regular(g.clone()).is_projective());
        assert!(!FpGModule::trivial(c(1), 1).is_projective());
        let sub = g.closure(&[g.pow(g.generators()[0], 2)]);
        assert!(!FpGModule::permutation(g.clone(), &sub).is_projective());
    }

    #[test]
    fn rejects_non_invertible_action() {
        let g = c(1);
        let err = FpGModule::new(g.clone(), 1, vec![FpMatrix::zeros(g.prime(), 1, 1)]).unwrap_err();
        assert!(err.to_string().contains("g0"));
        // an involution must act with square one
        let bad = FpMatrix::from_rows(g.prime(), 2, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(FpGModule::new(g.clone(), 2, vec![bad]).is_ok());
        let g4 = c(2);
        let three_cycle =
            FpMatrix::from_rows(g.prime(), 3, &[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]])
                .unwrap();
        assert!(FpGModule::new(g4, 3, vec![three_cycle]).is_err());
    }

    #[test]
    fn restriction_and_induction() {
        let g = c(2);
        let m = FpGModule::regular(g.clone());
        let (r, _) = m.restrict(&g.whole());
        assert_eq!(r.dim(), 4);
        let one = g.trivial_subgroup();
        let (ug, embed) = g.subgroup_as_group(&one);
        let ind = FpGModule::induce(
            g.clone(),
            &one,
            &FpGModule::trivial(Arc::new(ug), 1),
            &embed,
        )
        .unwrap();
        assert!(ind.is_projective());
        assert_eq!(ind.dim(), 4);
        let sub = g.closure(&[g.pow(g.generators()[0], 2)]);
        let (sg, embed) = g.subgroup_as_group(&sub);
        let ind = FpGModule::induce(
            g.clone(),
            &sub,
            &FpGModule::trivial(Arc::new(sg), 1),
            &embed,
        )
        .unwrap();
        assert_eq!(
            ind.generator_actions(),
            FpGModule::permutation(g, &sub).generator_actions()
        );
    }

    #[test]
    fn frobenius_reciprocity_dimensions() {
        let g = Arc::new(dihedral(3).unwrap());
        let refl = g.closure(&[g.generators()[1]]);
        let (hg, embed) = g.subgroup_as_group(&refl);
        let hg = Arc::new(hg);
        let n = FpGModule::regular(hg.clone());
        let ind = FpGModule::induce(g.clone(), &refl, &n, &embed).unwrap();
        for m in [
            FpGModule::trivial(g.clone(), 1),
            FpGModule::permutation(g.clone(), &refl),
        ] {
            let (res, _) = m.restrict(&refl);
            assert_eq!(ind.hom_dim(&m), n.hom_dim(&res));
        }
    }

    #[test]
    fn fixed_points_of_transitive_permutation_modules() {
        let g = Arc::new(dihedral(3).unwrap());
        let triv = FpGModule::trivial(g.clone(), 1);
        for h in g.subgroups(crate::group::SubgroupKind::All, 100).unwrap() {
            assert_eq!(triv.hom_dim(&FpGModule::permutation(g.clone(), &h)), 1);
        }
    }
}
