use std::sync::Arc;

use serde::Serialize;

use super::functor::Cmf;
use super::system::MackeySystem;
use crate::error::{MackeyError, Result};
use crate::group::{PGroup, Subgroup};
use crate::homology::{conjugation_chain, projection_chain, transfer_chain, CosetComplex};
use crate::linalg::{FpMatrix, FpSubquotient, Prime};
use crate::module::FpGModule;
use crate::resolution::Resolution;

/// The two constant functors and the two induced families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstantKind {
    /// `i = id`, `t = |U:V|`.
    T,
    /// `t = id`, `i = |U:V|`.
    Upsilon,
}

fn index_mod(sys: &MackeySystem, u: usize, v: usize, p: Prime) -> u32 {
    (sys.member(v).index_in(sys.member(u)) % p.get() as usize) as u32
}

fn same_group(sys: &MackeySystem, g: &Arc<PGroup>) -> Result<()> {
    if Arc::ptr_eq(sys.group(), g) || **sys.group() == **g {
        Ok(())
    } else {
        Err(MackeyError::Shape(
            "module and system are over different groups".into(),
        ))
    }
}

/// `T` or `Υ` with fiber `F_p^n` and trivial conjugations.
pub fn constant(system: Arc<MackeySystem>, n: usize, kind: ConstantKind) -> Cmf {
    let p = system.group().prime();
    let sys = system.clone();
    let scaled = |u: usize, v: usize| Ok(FpMatrix::scalar(p, n, index_mod(&sys, u, v, p)));
    let id = |_: usize, _: usize| Ok(FpMatrix::identity(p, n));
    let dims = vec![n; system.len()];
    match kind {
        ConstantKind::T => Cmf::from_fn(system.clone(), p, dims, id, scaled, id),
        ConstantKind::Upsilon => Cmf::from_fn(system.clone(), p, dims, scaled, id, id),
    }
    .expect("square data of matching size")
}

/// A functor whose spaces are subquotients of a common ambient space, with
/// maps induced by ambient-level matrices.
fn from_subquotients(
    system: Arc<MackeySystem>,
    p: Prime,
    spaces: &[FpSubquotient],
    mut i_amb: impl FnMut(usize, usize) -> FpMatrix,
    mut t_amb: impl FnMut(usize, usize) -> FpMatrix,
    mut c_amb: impl FnMut(usize, usize) -> FpMatrix,
) -> Result<Cmf> {
    let dims = spaces.iter().map(|s| s.dim()).collect();
    let gens = system.group().generators().to_vec();
    let sys = system.clone();
    Cmf::from_fn(
        system,
        p,
        dims,
        |u, v| spaces[u].induced_map(&spaces[v], &i_amb(u, v)),
        |u, v| spaces[v].induced_map(&spaces[u], &t_amb(u, v)),
        |s, u| spaces[u].induced_map(&spaces[sys.conj(gens[s], u)], &c_amb(s, u)),
    )
}

fn inverse_sum(m: &FpGModule, elems: &[usize]) -> FpMatrix {
    let g = m.group();
    let inv: Vec<usize> = elems.iter().map(|&r| g.inv(r)).collect();
    m.sum_action(&inv)
}

/// `h⁰(M)`: `X_U = M^U`, `i` the inclusion, `t_{V,U} = Σ_{r ∈ U/V} r`, `c_g = g`.
pub fn h0_upper(m: &FpGModule, system: Arc<MackeySystem>) -> Result<Cmf> {
    same_group(&system, m.group())?;
    let g = system.group().clone();
    let p = g.prime();
    let spaces: Vec<FpSubquotient> = system
        .members()
        .iter()
        .map(|u| FpSubquotient::subspace(&m.fixed_space(u.gens())))
        .collect();
    let sys = system.clone();
    from_subquotients(
        system,
        p,
        &spaces,
        |_, _| FpMatrix::identity(p, m.dim()),
        |u, v| m.sum_action(&g.left_transversal(sys.member(u), sys.member(v))),
        |s, _| m.action(g.generators()[s]).into_owned(),
    )
}

/// `h₀(Q)`: `X_U = Q/ω_U Q`, `t` the projection, `i_{U,V} = Σ_{r ∈ U/V} r⁻¹`, `c_g = g`.
pub fn h0_lower(q: &FpGModule, system: Arc<MackeySystem>) -> Result<Cmf> {
    same_group(&system, q.group())?;
    let g = system.group().clone();
    let p = g.prime();
    let spaces: Vec<FpSubquotient> = system
        .members()
        .iter()
        .map(|u| FpSubquotient::quotient(&q.augmentation_span(u.gens())).expect("subspace of Q"))
        .collect();
    let sys = system.clone();
    from_subquotients(
        system,
        p,
        &spaces,
        |u, v| inverse_sum(q, &g.left_transversal(sys.member(u), sys.member(v))),
        |_, _| FpMatrix::identity(p, q.dim()),
        |s, _| q.action(g.generators()[s]).into_owned(),
    )
}

/// `h_k(M)`: `X_U = H_k(U, res M)`, computed from one minimal resolution over
/// `G` through the `U`-coinvariant complexes. `i` is the chain-level
/// transfer, `t` the map induced by the coinvariant projections.
pub fn h_lower(m: &FpGModule, k: usize, system: Arc<MackeySystem>, cap: usize) -> Result<Cmf> {
    if k > cap {
        return Err(MackeyError::DegreeOverCap { degree: k, cap });
    }
    same_group(&system, m.group())?;
    let res = Resolution::minimal(m, k + 1)?;
    h_lower_on(&res, k, system)
}

/// `h_k` from a given resolution reaching degree `k + 1` (or terminating).
pub fn h_lower_on(res: &Resolution, k: usize, system: Arc<MackeySystem>) -> Result<Cmf> {
    same_group(&system, res.group())?;
    let g = system.group().clone();
    let p = g.prime();
    let complexes: Vec<CosetComplex> = system
        .members()
        .iter()
        .map(|u| CosetComplex::new(res, u, k + 1))
        .collect();
    let spaces: Vec<FpSubquotient> = complexes.iter().map(|cx| cx.homology(k, p)).collect();
    let rank = res.ranks().get(k).copied().unwrap_or(0);
    let sys = system.clone();
    from_subquotients(
        system,
        p,
        &spaces,
        |u, v| transfer_chain(&g, &complexes[u], &complexes[v], rank),
        |u, v| projection_chain(&g, &complexes[v], &complexes[u], rank),
        |s, u| {
            let x = g.generators()[s];
            conjugation_chain(&g, x, &complexes[u], &complexes[sys.conj(x, u)], rank)
        },
    )
}

/// Double cosets `H\G/U` for every member `U`.
struct DoubleCosetTable {
    reps: Vec<Vec<usize>>,
    class: Vec<Vec<usize>>,
}

impl DoubleCosetTable {
    fn new(g: &PGroup, h: &Subgroup, sys: &MackeySystem) -> Self {
        let whole = g.whole();
        let (reps, class) = sys
            .members()
            .iter()
            .map(|u| {
                g.double_coset_partition(h, &whole, u)
                    .expect("subgroups of G")
            })
            .unzip();
        DoubleCosetTable { reps, class }
    }
}

/// `|H ∩ sUs⁻¹|`.
fn meet_conj_order(g: &PGroup, h: &Subgroup, s: usize, u: &Subgroup) -> usize {
    let si = g.inv(s);
    h.elements()
        .iter()
        .filter(|&&x| u.contains(g.mul(g.mul(si, x), s)))
        .count()
}

/// The functor induced from `T` (resp. `Υ`) on `H`: `X_U = F_p[H\G/U]` with
///
/// * `c_{g,U}(HrU) = H r g⁻¹ (gUg⁻¹)`;
/// * kind `T`: `i_{U,V}(HrU) = Σ_{HxV ⊆ HrU} HxV`,
///   `t_{V,U}(HsV) = |H∩sUs⁻¹ : H∩sVs⁻¹|·HsU`;
/// * kind `Υ`: `i_{U,V}(HrU) = Σ_{HxV ⊆ HrU} |H∩rUr⁻¹ : H∩xVx⁻¹|·HxV`,
///   `t_{V,U}(HsV) = HsU`.
pub fn induced(h: &Subgroup, kind: ConstantKind, system: Arc<MackeySystem>) -> Result<Cmf> {
    let g = system.group().clone();
    if h.elements().last().is_some_and(|&x| x >= g.order()) || !h.contains(0) {
        return Err(MackeyError::NotSubgroup("H is not a subgroup of G".into()));
    }
    let p = g.prime();
    let table = DoubleCosetTable::new(&g, h, &system);
    let dims = table.reps.iter().map(|r| r.len()).collect();
    let sys = system.clone();
    let modp = |n: usize| (n % p.get() as usize) as u32;
    let i_fn = |u: usize, v: usize| {
        let mut m = FpMatrix::zeros(p, table.reps[v].len(), table.reps[u].len());
        for (l, &x) in table.reps[v].iter().enumerate() {
            let k = table.class[u][x];
            let coeff = match kind {
                ConstantKind::T => 1,
                ConstantKind::Upsilon => {
                    let r = table.reps[u][k];
                    let big = meet_conj_order(&g, h, r, sys.member(u));
                    let small = meet_conj_order(&g, h, x, sys.member(v));
                    modp(big / small)
                }
            };
            m.set(l, k, coeff);
        }
        Ok(m)
    };
    let t_fn = |u: usize, v: usize| {
        let mut m = FpMatrix::zeros(p, table.reps[u].len(), table.reps[v].len());
        for (l, &s) in table.reps[v].iter().enumerate() {
            let k = table.class[u][s];
            let coeff = match kind {
                ConstantKind::T => {
                    let big = meet_conj_order(&g, h, s, sys.member(u));
                    let small = meet_conj_order(&g, h, s, sys.member(v));
                    modp(big / small)
                }
                ConstantKind::Upsilon => 1,
            };
            m.set(k, l, coeff);
        }
        Ok(m)
    };
    let c_fn = |s: usize, u: usize| {
        let x = g.generators()[s];
        let xi = g.inv(x);
        let w = sys.conj(x, u);
        let mut m = FpMatrix::zeros(p, table.reps[w].len(), table.reps[u].len());
        for (k, &r) in table.reps[u].iter().enumerate() {
            m.set(table.class[w][g.mul(r, xi)], k, 1);
        }
        Ok(m)
    };
    Cmf::from_fn(system.clone(), p, dims, i_fn, t_fn, c_fn)
}

/// The map `h⁰(f): h⁰(M) -> h⁰(N)` of a module homomorphism.
pub fn h0_upper_map(
    m: &FpGModule,
    n: &FpGModule,
    f: &FpMatrix,
    system: &MackeySystem,
) -> Result<Vec<FpMatrix>> {
    if !m.is_hom_to(n, f) {
        return Err(MackeyError::NotAMorphism(
            "not a module homomorphism".into(),
        ));
    }
    system
        .members()
        .iter()
        .map(|u| {
            let a = FpSubquotient::subspace(&m.fixed_space(u.gens()));
            let b = FpSubquotient::subspace(&n.fixed_space(u.gens()));
            a.induced_map(&b, f)
        })
        .collect()
}

/// The map `h₀(f): h₀(Q) -> h₀(R)` of a module homomorphism.
pub fn h0_lower_map(
    q: &FpGModule,
    r: &FpGModule,
    f: &FpMatrix,
    system: &MackeySystem,
) -> Result<Vec<FpMatrix>> {
    if !q.is_hom_to(r, f) {
        return Err(MackeyError::NotAMorphism(
            "not a module homomorphism".into(),
        ));
    }
    system
        .members()
        .iter()
        .map(|u| {
            let a = FpSubquotient::quotient(&q.augmentation_span(u.gens()))?;
            let b = FpSubquotient::quotient(&r.augmentation_span(u.gens()))?;
            a.induced_map(&b, f)
        })
        .collect()
}
