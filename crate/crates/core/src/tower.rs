//! Finite-stage approximations of pro-p groups.
//!
//! Every positive verdict here is sound for the limit once abelianizations
//! have stabilized: injectivity of a finite-stage composite implies
//! injectivity of its first factor. Negative findings are only ever reported
//! as inconclusive.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{MackeyError, Result};
use crate::group::{cyclic, direct_product, PGroup, Subgroup};
use crate::linalg::{FpMatrix, Prime};
use crate::module::FpGModule;

pub const SEMANTICS: &str = "sound-positive: a positive verdict certifies the pro-p statement once abelianizations have stabilized; a negative finding is inconclusive";

/// An inverse system `G_1 <- G_2 <- … <- G_m` of finite p-groups. Stages are
/// numbered from 1.
#[derive(Clone, Debug)]
pub struct Tower {
    name: String,
    stages: Vec<Arc<PGroup>>,
    /// `projections[k]` is the element map `G_{k+2} -> G_{k+1}`.
    projections: Vec<Vec<usize>>,
}

fn eval_word(g: &PGroup, gens: &[usize], word: &[usize]) -> usize {
    word.iter().fold(0, |acc, &s| g.mul(acc, gens[s]))
}

impl Tower {
    /// `images[k][s]` is the image in stage `k + 1` of generator `s` of stage
    /// `k + 2`.
    pub fn new(name: &str, stages: Vec<Arc<PGroup>>, images: &[Vec<usize>]) -> Result<Self> {
        if stages.is_empty() {
            return Err(MackeyError::InvalidGroup(
                "a tower needs at least one stage".into(),
            ));
        }
        if images.len() + 1 != stages.len() {
            return Err(MackeyError::Shape(
                "one projection per consecutive pair of stages".into(),
            ));
        }
        let p = stages[0].prime();
        if let Some(g) = stages.iter().find(|g| g.prime() != p) {
            return Err(MackeyError::ModulusMismatch(p.get(), g.p()));
        }
        let mut projections = Vec::new();
        for (k, imgs) in images.iter().enumerate() {
            let (src, dst) = (&stages[k + 1], &stages[k]);
            if imgs.len() != src.generators().len() || imgs.iter().any(|&x| x >= dst.order()) {
                return Err(MackeyError::NotHomomorphism(k + 1));
            }
            let map = src.extend_map(dst, imgs);
            if !src.is_homomorphism(dst, &map) {
                return Err(MackeyError::NotHomomorphism(k + 1));
            }
            let mut hit = vec![false; dst.order()];
            for &y in &map {
                hit[y] = true;
            }
            if !hit.iter().all(|&b| b) {
                return Err(MackeyError::NotSurjective(k + 1));
            }
            projections.push(map);
        }
        Ok(Tower {
            name: name.to_string(),
            stages,
            projections,
        })
    }

    /// `G, G, …, G` with identity maps.
    pub fn constant(g: Arc<PGroup>, depth: usize) -> Result<Self> {
        let images = vec![g.generators().to_vec(); depth.saturating_sub(1)];
        Self::new(&format!("const({})", g.name()), vec![g; depth], &images)
    }

    /// `C_p <- C_{p^2} <- … <- C_{p^depth}`, approximating `Z_p`.
    pub fn cyclic(p: Prime, depth: usize) -> Result<Self> {
        let stages: Vec<Arc<PGroup>> = (1..=depth)
            .map(|k| cyclic(p, k as u32).map(Arc::new))
            .collect::<Result<_>>()?;
        let images: Vec<Vec<usize>> = stages[..depth.saturating_sub(1)]
            .iter()
            .map(|g| g.generators().to_vec())
            .collect();
        Self::new(&format!("Z{}", p), stages, &images)
    }

    /// Stage-wise direct product of two towers of equal depth.
    pub fn product(a: &Tower, b: &Tower) -> Result<Self> {
        if a.depth() != b.depth() {
            return Err(MackeyError::Shape("towers of different depth".into()));
        }
        let stages: Vec<Arc<PGroup>> = a
            .stages
            .iter()
            .zip(&b.stages)
            .map(|(x, y)| direct_product(x, y).map(Arc::new))
            .collect::<Result<_>>()?;
        let mut images = Vec::new();
        for k in 0..a.depth().saturating_sub(1) {
            let dst = &stages[k];
            let na = a.stages[k].generators().len();
            let (left, right) = dst.generators().split_at(na);
            let mut imgs = Vec::new();
            for &s in a.stages[k + 1].generators() {
                imgs.push(eval_word(dst, left, &a.stages[k].word(a.projections[k][s])));
            }
            for &s in b.stages[k + 1].generators() {
                imgs.push(eval_word(
                    dst,
                    right,
                    &b.stages[k].word(b.projections[k][s]),
                ));
            }
            images.push(imgs);
        }
        Self::new(&format!("{}x{}", a.name, b.name), stages, &images)
    }

    /// Free pro-p towers need a nilpotent quotient algorithm.
    pub fn free(p: Prime, rank: usize, depth: usize) -> Result<Self> {
        match rank {
            0 => Self::constant(Arc::new(PGroup::trivial(p)), depth),
            1 => Self::cyclic(p, depth),
            _ => Err(MackeyError::Unsupported(
                "free pro-p towers of rank >= 2 require nilpotent-quotient algorithms, out of scope".into(),
            )),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn prime(&self) -> Prime {
        self.stages[0].prime()
    }

    pub fn stage(&self, k: usize) -> &Arc<PGroup> {
        &self.stages[k - 1]
    }

    pub fn stages(&self) -> &[Arc<PGroup>] {
        &self.stages
    }

    /// Element map `G_{k+1} -> G_k`.
    pub fn projection(&self, k: usize) -> &[usize] {
        &self.projections[k - 1]
    }

    fn check_stage(&self, m: usize) -> Result<()> {
        if m == 0 || m > self.depth() {
            return Err(MackeyError::StageOutOfRange {
                stage: m,
                max: self.depth(),
            });
        }
        Ok(())
    }

    /// Element map `G_m -> G_j` for `j <= m`.
    pub fn projection_to(&self, m: usize, j: usize) -> Result<Vec<usize>> {
        self.check_stage(m)?;
        self.check_stage(j)?;
        if j > m {
            return Err(MackeyError::StageOutOfRange { stage: j, max: m });
        }
        let mut map: Vec<usize> = (0..self.stage(m).order()).collect();
        for k in (j..m).rev() {
            let step = self.projection(k);
            for x in map.iter_mut() {
                *x = step[*x];
            }
        }
        Ok(map)
    }

    /// `K_{m,j} = ker(G_m -> G_j)`.
    pub fn kernel(&self, m: usize, j: usize) -> Result<Subgroup> {
        let map = self.projection_to(m, j)?;
        let elems: Vec<usize> = (0..map.len()).filter(|&x| map[x] == 0).collect();
        self.stage(m).subgroup_from_elements(&elems)
    }

    pub fn elab_dims(&self) -> Vec<usize> {
        self.stages.iter().map(|g| g.elab().rank()).collect()
    }

    /// Whether `dim G^{ab,el}` agrees at stages `m - 1` and `m`.
    pub fn elab_stable_at(&self, m: usize) -> Option<bool> {
        (m >= 2 && m <= self.depth()).then(|| {
            let d = self.elab_dims();
            d[m - 1] == d[m - 2]
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerReport {
    pub name: String,
    pub p: u32,
    pub depth: usize,
    pub orders: Vec<usize>,
    pub elab_dims: Vec<usize>,
    /// `|ker π_k|` for `k = 1..depth-1`.
    pub projection_kernel_orders: Vec<usize>,
    /// `|K_{m,j}|` for `m = depth`, `j = 1..depth-1`.
    pub top_kernel_orders: Vec<usize>,
    /// First stage from which `dim G_k^{ab,el}` stays constant.
    pub elab_stable_from: usize,
}

/// Summary of an already validated tower.
pub fn tower_validate(t: &Tower) -> Result<TowerReport> {
    let m = t.depth();
    let dims = t.elab_dims();
    let mut stable = m;
    while stable > 1 && dims[stable - 2] == dims[m - 1] {
        stable -= 1;
    }
    Ok(TowerReport {
        name: t.name.clone(),
        p: t.prime().get(),
        depth: m,
        orders: t.stages.iter().map(|g| g.order()).collect(),
        elab_dims: dims,
        projection_kernel_orders: (1..m)
            .map(|k| t.stage(k + 1).order() / t.stage(k).order())
            .collect(),
        top_kernel_orders: (1..m)
            .map(|j| t.kernel(m, j).map(|k| k.order()))
            .collect::<Result<_>>()?,
        elab_stable_from: stable,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    SoundPositive,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeStep {
    pub j: usize,
    pub kernel_order: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub transfer_kernel_dim: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeTestReport {
    pub stage: usize,
    /// `None` at stage 1, where stability cannot be observed.
    pub elab_stable: Option<bool>,
    pub steps: Vec<FreeStep>,
    pub verdict: Verdict,
    pub semantics: &'static str,
}

/// Injectivity of `G_m^{ab,el} -> K_{m,j}^{ab,el}` for every `j < m`.
pub fn free_test(t: &Tower, m: usize) -> Result<FreeTestReport> {
    t.check_stage(m)?;
    let g = t.stage(m);
    let mut steps = Vec::new();
    for j in 1..m {
        let k = t.kernel(m, j)?;
        let tr = g.verlagerung(&k)?;
        let kernel_dim = tr.cols() - tr.rank();
        steps.push(FreeStep {
            j,
            kernel_order: k.order(),
            source_dim: tr.cols(),
            target_dim: tr.rows(),
            transfer_kernel_dim: kernel_dim,
            verdict: if kernel_dim == 0 {
                Verdict::SoundPositive
            } else {
                Verdict::Inconclusive
            },
        });
    }
    let verdict = if steps.iter().all(|s| s.verdict == Verdict::SoundPositive) {
        Verdict::SoundPositive
    } else {
        Verdict::Inconclusive
    };
    Ok(FreeTestReport {
        stage: m,
        elab_stable: t.elab_stable_at(m),
        steps,
        verdict,
        semantics: SEMANTICS,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D1Report {
    pub stage: usize,
    /// `dim G_m^{ab,el}, dim K_{m,1}^{ab,el}, …, dim K_{m,m-1}^{ab,el}`.
    pub dims: Vec<usize>,
    /// Transfers between consecutive members of the chain, as row lists.
    pub transfers: Vec<Vec<Vec<u32>>>,
    pub transfer_ranks: Vec<usize>,
    /// Ranks of the composites starting at `G_m^{ab,el}`.
    pub composite_ranks: Vec<usize>,
    pub all_injective: bool,
    /// The last composite rank, reported as finite-stage evidence for `dim D₁(F_p)`.
    pub certificate: usize,
    pub semantics: &'static str,
}

/// Transfer `A^{ab,el} -> B^{ab,el}` for `B ⊆ A ⊆ G`.
fn relative_transfer(g: &PGroup, a: &Subgroup, b: &Subgroup) -> Result<FpMatrix> {
    let (ag, embed) = g.subgroup_as_group(a);
    let inside: Vec<usize> = (0..ag.order()).filter(|&x| b.contains(embed[x])).collect();
    let bsub = ag.subgroup_from_elements(&inside)?;
    ag.verlagerung(&bsub)
}

pub fn d1_report(t: &Tower, m: usize) -> Result<D1Report> {
    t.check_stage(m)?;
    if m < 2 {
        return Err(MackeyError::StageOutOfRange {
            stage: m,
            max: t.depth(),
        });
    }
    let g = t.stage(m);
    let mut chain = vec![g.whole()];
    for j in 1..m {
        chain.push(t.kernel(m, j)?);
    }
    let mut dims = vec![g.elab().rank()];
    let mut transfers = Vec::new();
    let mut composite: Option<FpMatrix> = None;
    let mut composite_ranks = Vec::new();
    for w in chain.windows(2) {
        let tr = relative_transfer(g, &w[0], &w[1])?;
        dims.push(tr.rows());
        let comp = match composite {
            None => tr.clone(),
            Some(c) => tr.mul(&c),
        };
        composite_ranks.push(comp.rank());
        composite = Some(comp);
        transfers.push(tr);
    }
    let transfer_ranks: Vec<usize> = transfers.iter().map(|m| m.rank()).collect();
    Ok(D1Report {
        stage: m,
        all_injective: transfers.iter().all(|m| m.is_injective()),
        certificate: composite_ranks.last().copied().unwrap_or(0),
        dims,
        transfers: transfers.iter().map(|m| m.to_rows()).collect(),
        transfer_ranks,
        composite_ranks,
        semantics: SEMANTICS,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndsVerdict {
    /// The tower stabilizes, so the limit is finite and `E = 0`.
    Finite,
    /// Consistent with a virtually-`Z_p` limit, `E = 2`.
    ConsistentWithVirtuallyZp,
    /// Only `E >= 1 + b` is supported by the data.
    LowerBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndsReport {
    pub stage: usize,
    pub orders: Vec<usize>,
    pub stabilized: bool,
    pub strictly_growing: bool,
    pub certificate: Option<usize>,
    pub verdict: EndsVerdict,
    #[serde(rename = "E")]
    pub e: Option<usize>,
    #[serde(rename = "E_lower_bound")]
    pub e_lower_bound: usize,
    pub semantics: &'static str,
}

/// Number of `F_p`-ends from stages `1..=m`.
pub fn ends_classify(t: &Tower, m: usize) -> Result<EndsReport> {
    t.check_stage(m)?;
    let orders: Vec<usize> = t.stages[..m].iter().map(|g| g.order()).collect();
    let stabilized = m >= 2 && orders[m - 1] == orders[m - 2];
    let strictly_growing = m >= 2 && orders.windows(2).all(|w| w[1] > w[0]);
    let d1 = if m >= 2 { Some(d1_report(t, m)?) } else { None };
    let certificate = d1.as_ref().map(|r| r.certificate);
    let prev_certificate = if m >= 3 {
        Some(d1_report(t, m - 1)?.certificate)
    } else {
        None
    };
    let b = certificate.unwrap_or(0);
    let (verdict, e, lower) = if stabilized {
        (EndsVerdict::Finite, Some(0), 0)
    } else if strictly_growing
        && b == 1
        && prev_certificate.is_none_or(|c| c == 1)
        && d1.as_ref().is_some_and(|r| r.all_injective)
    {
        (EndsVerdict::ConsistentWithVirtuallyZp, Some(2), 2)
    } else {
        (EndsVerdict::LowerBound, None, 1 + b)
    };
    Ok(EndsReport {
        stage: m,
        orders,
        stabilized,
        strictly_growing,
        certificate,
        verdict,
        e,
        e_lower_bound: lower,
        semantics: SEMANTICS,
    })
}

/// A stage-wise split surjection `τ: G -> Z_p` with section `σ`.
#[derive(Clone, Debug)]
pub struct DirectionWitness {
    tower: Tower,
    /// `tau[k]` is the element map `G_{k+1} -> C_{p^{k+1}}`.
    tau: Vec<Vec<usize>>,
    sigma: Vec<usize>,
    targets: Vec<PGroup>,
}

fn incompatible(msg: String) -> MackeyError {
    MackeyError::IncompatibleWitness(msg)
}

impl DirectionWitness {
    /// `tau[k][s]` is the image in `C_{p^{k+1}}` of generator `s` of stage
    /// `k + 1`; `sigma[k]` is an element of stage `k + 1`.
    pub fn new(tower: Tower, tau: &[Vec<usize>], sigma: &[usize]) -> Result<Self> {
        let m = tower.depth();
        if tau.len() != m || sigma.len() != m {
            return Err(incompatible("one τ and one σ entry per stage".into()));
        }
        let p = tower.prime();
        let targets: Vec<PGroup> = (1..=m)
            .map(|k| cyclic(p, k as u32))
            .collect::<Result<_>>()?;
        let mut maps = Vec::new();
        for k in 0..m {
            let (g, c) = (tower.stage(k + 1), &targets[k]);
            if tau[k].len() != g.generators().len() || tau[k].iter().any(|&x| x >= c.order()) {
                return Err(incompatible(format!(
                    "τ at stage {} has the wrong shape",
                    k + 1
                )));
            }
            let map = g.extend_map(c, &tau[k]);
            if !g.is_homomorphism(c, &map) {
                return Err(incompatible(format!(
                    "τ at stage {} is not a homomorphism",
                    k + 1
                )));
            }
            let mut hit = vec![false; c.order()];
            for &y in &map {
                hit[y] = true;
            }
            if !hit.iter().all(|&b| b) {
                return Err(incompatible(format!(
                    "τ at stage {} is not surjective",
                    k + 1
                )));
            }
            let s = sigma[k];
            if s >= g.order() || g.element_order(s) != c.order() || map[s] != c.generators()[0] {
                return Err(incompatible(format!(
                    "σ at stage {} does not split τ",
                    k + 1
                )));
            }
            maps.push(map);
        }
        for k in 1..m {
            let pi = tower.projection(k);
            let (hi, lo) = (&targets[k], &targets[k - 1]);
            let rho = hi.extend_map(lo, lo.generators());
            let g = tower.stage(k + 1);
            if (0..g.order()).any(|x| maps[k - 1][pi[x]] != rho[maps[k][x]]) {
                return Err(incompatible(format!(
                    "τ does not commute with the projection at stage {k}"
                )));
            }
            if pi[sigma[k]] != sigma[k - 1] {
                return Err(incompatible(format!(
                    "σ does not commute with the projection at stage {k}"
                )));
            }
        }
        Ok(DirectionWitness {
            tower,
            tau: maps,
            sigma: sigma.to_vec(),
            targets,
        })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// `τ_k(x)` as an element of `C_{p^k}`.
    pub fn tau(&self, k: usize, x: usize) -> usize {
        self.tau[k - 1][x]
    }

    pub fn target(&self, k: usize) -> &PGroup {
        &self.targets[k - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JElStep {
    pub j: usize,
    pub image_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NEvidence {
    pub normal_closure_order: usize,
    pub quotient_order: usize,
    pub elab_dim: usize,
    pub head_dim: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionReport {
    pub stage: usize,
    pub splitting_verified: bool,
    pub j_el: Vec<JElStep>,
    pub j_el_nonzero: Verdict,
    pub n_evidence: NEvidence,
    pub semantics: &'static str,
}

/// Conjugation action of `G` on `N^{ab,el}` for `N` normal in `G`.
fn normal_elab_module(g: &Arc<PGroup>, n: &Subgroup) -> Result<FpGModule> {
    let (ng, embed) = g.subgroup_as_group(n);
    let el = ng.elab();
    let mut to_n = vec![usize::MAX; g.order()];
    for (i, &x) in embed.iter().enumerate() {
        to_n[x] = i;
    }
    let p = g.prime();
    let actions = g
        .generators()
        .iter()
        .map(|&s| {
            let cols: Vec<Vec<u32>> = el
                .basis()
                .iter()
                .map(|&b| el.log(to_n[g.conj(s, embed[b])]).to_vec())
                .collect();
            FpMatrix::from_columns(p, el.rank(), &cols)
        })
        .collect();
    FpGModule::new(g.clone(), el.rank(), actions)
}

pub fn direction_check(w: &DirectionWitness, m: usize) -> Result<DirectionReport> {
    let t = &w.tower;
    t.check_stage(m)?;
    let g = t.stage(m);
    let s = w.sigma[m - 1];
    let el = g.elab();
    let log_s = el.log(s).to_vec();
    let mut j_el = Vec::new();
    for j in 1..m {
        let tr = g.verlagerung(&t.kernel(m, j)?)?;
        j_el.push(JElStep {
            j,
            image_nonzero: tr.apply(&log_s).iter().any(|&x| x != 0),
        });
    }
    let j_el_nonzero = if j_el.iter().all(|x| x.image_nonzero) {
        Verdict::SoundPositive
    } else {
        Verdict::Inconclusive
    };
    let n = g.normal_closure(&g.closure(&[s]));
    let module = normal_elab_module(g, &n)?;
    let quotient_order = g.order() / n.order();
    let head_dim = module.coinvariants().dim();
    let agree = module.dim() == quotient_order && head_dim == 1;
    Ok(DirectionReport {
        stage: m,
        splitting_verified: true,
        j_el,
        j_el_nonzero,
        n_evidence: NEvidence {
            normal_closure_order: n.order(),
            quotient_order,
            elab_dim: module.dim(),
            head_dim,
            verdict: if agree {
                Verdict::SoundPositive
            } else {
                Verdict::Inconclusive
            },
        },
        semantics: SEMANTICS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> Prime {
        Prime::new(2).unwrap()
    }

    #[test]
    fn constant_and_cyclic_towers_validate() {
        let c2 = Arc::new(cyclic(two(), 1).unwrap());
        let t = Tower::constant(c2, 3).unwrap();
        let r = tower_validate(&t).unwrap();
        assert_eq!(r.top_kernel_orders, vec![1, 1]);
        let z = Tower::cyclic(two(), 3).unwrap();
        let r = tower_validate(&z).unwrap();
        assert_eq!(r.orders, vec![2, 4, 8]);
        assert_eq!(r.top_kernel_orders, vec![4, 2]);
        assert_eq!(r.elab_stable_from, 1);
    }

    #[test]
    fn bad_projection_is_rejected() {
        let c4 = Arc::new(cyclic(two(), 2).unwrap());
        let c2 = Arc::new(cyclic(two(), 1).unwrap());
        // C2 -> C4 sending the generator to an element of order 4
        let r = Tower::new(
            "bad",
            vec![c4.clone(), c2.clone()],
            &[vec![c4.generators()[0]]],
        );
        assert!(matches!(r, Err(MackeyError::NotHomomorphism(1))));
        let r = Tower::new("bad", vec![c2.clone(), c2.clone()], &[vec![0]]);
        assert!(matches!(r, Err(MackeyError::NotSurjective(1))));
    }

    #[test]
    fn free_test_examples() {
        let z = Tower::cyclic(two(), 3).unwrap();
        let r = free_test(&z, 3).unwrap();
        assert_eq!(r.verdict, Verdict::SoundPositive);
        assert_eq!(r.steps.len(), 2);
        let c = Tower::constant(Arc::new(cyclic(two(), 1).unwrap()), 3).unwrap();
        assert_eq!(free_test(&c, 2).unwrap().verdict, Verdict::Inconclusive);
        let e = Tower::constant(Arc::new(PGroup::trivial(two())), 3).unwrap();
        assert_eq!(free_test(&e, 3).unwrap().verdict, Verdict::SoundPositive);
        assert!(matches!(
            free_test(&z, 4),
            Err(MackeyError::StageOutOfRange { .. })
        ));
    }

    #[test]
    fn d1_examples() {
        let z = Tower::cyclic(two(), 3).unwrap();
        let r = d1_report(&z, 3).unwrap();
        assert_eq!(r.dims, vec![1, 1, 1]);
        assert_eq!(r.composite_ranks, vec![1, 1]);
        assert_eq!(r.certificate, 1);
        let c = Tower::constant(Arc::new(cyclic(two(), 1).unwrap()), 3).unwrap();
        let r = d1_report(&c, 3).unwrap();
        assert_eq!(r.dims, vec![1, 0, 0]);
        assert_eq!(r.certificate, 0);
        let e = Tower::constant(Arc::new(PGroup::trivial(two())), 2).unwrap();
        assert_eq!(d1_report(&e, 2).unwrap().certificate, 0);
    }

    #[test]
    fn ends_examples() {
        let c = Tower::constant(Arc::new(cyclic(two(), 1).unwrap()), 3).unwrap();
        assert_eq!(ends_classify(&c, 3).unwrap().e, Some(0));
        let z = Tower::cyclic(two(), 4).unwrap();
        let r = ends_classify(&z, 4).unwrap();
        assert_eq!(
            (r.e, r.verdict),
            (Some(2), EndsVerdict::ConsistentWithVirtuallyZp)
        );
    }

    #[test]
    fn free_rank_two_is_unsupported() {
        assert!(matches!(
            Tower::free(two(), 2, 3),
            Err(MackeyError::Unsupported(_))
        ));
    }

    #[test]
    fn product_tower_projections() {
        let z = Tower::cyclic(two(), 3).unwrap();
        let c = Tower::constant(Arc::new(cyclic(two(), 1).unwrap()), 3).unwrap();
        let t = Tower::product(&z, &c).unwrap();
        assert_eq!(tower_validate(&t).unwrap().orders, vec![4, 8, 16]);
        assert_eq!(t.kernel(3, 1).unwrap().order(), 4);
    }

    #[test]
    fn direction_examples() {
        let z = Tower::cyclic(two(), 3).unwrap();
        let tau: Vec<Vec<usize>> = z.stages().iter().map(|g| g.generators().to_vec()).collect();
        let sigma: Vec<usize> = z.stages().iter().map(|g| g.generators()[0]).collect();
        let w = DirectionWitness::new(z.clone(), &tau, &sigma).unwrap();
        let r = direction_check(&w, 3).unwrap();
        assert!(r.splitting_verified);
        assert_eq!(r.j_el_nonzero, Verdict::SoundPositive);
        assert_eq!((r.n_evidence.elab_dim, r.n_evidence.quotient_order), (1, 1));
        assert_eq!(r.n_evidence.verdict, Verdict::SoundPositive);

        let bad: Vec<Vec<usize>> = z
            .stages()
            .iter()
            .map(|g| vec![g.mul(g.generators()[0], g.generators()[0])])
            .collect();
        assert!(matches!(
            DirectionWitness::new(z, &bad, &sigma),
            Err(MackeyError::IncompatibleWitness(_))
        ));
    }

    #[test]
    fn direction_on_a_product_tower() {
        let z = Tower::cyclic(two(), 3).unwrap();
        let c = Tower::constant(Arc::new(cyclic(two(), 1).unwrap()), 3).unwrap();
        let t = Tower::product(&z, &c).unwrap();
        let tau: Vec<Vec<usize>> = z
            .stages()
            .iter()
            .map(|g| vec![g.generators()[0], 0])
            .collect();
        let sigma: Vec<usize> = t.stages().iter().map(|g| g.generators()[0]).collect();
        let w = DirectionWitness::new(t, &tau, &sigma).unwrap();
        let r = direction_check(&w, 3).unwrap();
        // the transfer sends (1, 0) to (2^{j+1}, 0), twice a generator of K_{3,j}
        assert!(r.j_el.iter().all(|s| !s.image_nonzero));
        assert_eq!(r.j_el_nonzero, Verdict::Inconclusive);
        assert_eq!(r.n_evidence.normal_closure_order, 8);
        assert_eq!((r.n_evidence.elab_dim, r.n_evidence.quotient_order), (1, 2));
        assert_eq!(r.n_evidence.verdict, Verdict::Inconclusive);
    }
}
