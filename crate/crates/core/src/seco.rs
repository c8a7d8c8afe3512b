//! Section cohomology `k⁰, k¹, c₀, c₁` of cohomological Mackey functors on
//! normal sections `(U, V)`, the six-term sequence, the long sequences of a
//! short exact sequence, and the structural predicates.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{MackeyError, Result};
use crate::homology::h1_cohomology;
use crate::linalg::{check_exact, FpMatrix, FpSubquotient};
use crate::mackey::{Cmf, CmfMorphism, Ses};
use crate::module::FpGModule;

/// The four section cohomology spaces and the Tate pair of `X_V` over `U/V`.
#[derive(Clone, Debug)]
pub struct SectionCohomology {
    pub u: usize,
    pub v: usize,
    /// `ker i_{U,V}` in `X_U`.
    pub k0: FpSubquotient,
    /// `X_V^{U/V} / im i_{U,V}`.
    pub k1: FpSubquotient,
    /// `X_U / im t_{V,U}`.
    pub c0: FpSubquotient,
    /// `ker t_{V,U} / ω X_V`.
    pub c1: FpSubquotient,
    /// `ker N / ω X_V`.
    pub hm1: FpSubquotient,
    /// `X_V^{U/V} / N X_V`.
    pub h0: FpSubquotient,
    /// `N_{U/V} = Σ_{x ∈ U/V} c_{x,V}`.
    pub norm: FpMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SectionDims {
    pub k0: usize,
    pub k1: usize,
    pub c0: usize,
    pub c1: usize,
    pub hm1: usize,
    pub h0: usize,
}

impl SectionCohomology {
    pub fn dims(&self) -> SectionDims {
        SectionDims {
            k0: self.k0.dim(),
            k1: self.k1.dim(),
            c0: self.c0.dim(),
            c1: self.c1.dim(),
            hm1: self.hm1.dim(),
            h0: self.h0.dim(),
        }
    }
}

fn require_section(x: &Cmf, u: usize, v: usize) -> Result<()> {
    let sys = x.system();
    if u >= sys.len() || v >= sys.len() || !sys.is_normal_section(u, v) {
        return Err(MackeyError::NotNormalSection(format!("({u}, {v})")));
    }
    Ok(())
}

/// `ω X_V` and `X_V^{U/V}` for the conjugation action of `U` on `X_V`.
fn section_action(x: &Cmf, u: usize, v: usize) -> (FpMatrix, FpMatrix) {
    let p = x.prime();
    let n = x.dim(v);
    let mut omega = FpMatrix::zeros(p, 0, n);
    let mut stacked = FpMatrix::zeros(p, 0, n);
    for &s in x.system().member(u).gens() {
        let d = x.c(s, v).sub(&FpMatrix::identity(p, n));
        let img = d.image_basis();
        for r in 0..img.rows() {
            omega.push_row(img.row(r));
        }
        for r in 0..d.rows() {
            stacked.push_row(d.row(r));
        }
    }
    (omega.row_space(), stacked.kernel_basis())
}

pub fn section_cohomology(x: &Cmf, u: usize, v: usize) -> Result<SectionCohomology> {
    require_section(x, u, v)?;
    let sys = x.system();
    let grp = sys.group();
    let p = x.prime();
    let dv = x.dim(v);
    let i = x.i(u, v);
    let t = x.t(v, u);
    let (omega, fixed) = section_action(x, u, v);
    let mut norm = FpMatrix::zeros(p, dv, dv);
    for r in grp.left_transversal(sys.member(u), sys.member(v)) {
        norm = norm.add(&x.c(r, v));
    }
    let sq = |s: &FpMatrix, q: &FpMatrix, n: usize| FpSubquotient::new(n, s, q);
    Ok(SectionCohomology {
        u,
        v,
        k0: FpSubquotient::subspace(&i.kernel_basis()),
        k1: sq(&fixed, &i.image_basis(), dv)?,
        c0: FpSubquotient::quotient(&t.image_basis())?,
        c1: sq(&t.kernel_basis(), &omega, dv)?,
        hm1: sq(&norm.kernel_basis(), &omega, dv)?,
        h0: sq(&fixed, &norm.image_basis(), dv)?,
        norm,
    })
}

/// Exactness of `0 → c₁ → Ĥ⁻¹ → k⁰ → c₀ → Ĥ⁰ → k¹ → 0`, one flag per term
/// (exactness at that term), together with the six dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SixTermReport {
    pub u: usize,
    pub v: usize,
    pub dims: [usize; 6],
    pub exact_at: [bool; 6],
    pub exact: bool,
}

pub fn six_term_check(x: &Cmf, u: usize, v: usize) -> Result<SixTermReport> {
    let s = section_cohomology(x, u, v)?;
    let p = x.prime();
    let (du, dv) = (x.dim(u), x.dim(v));
    let id_v = FpMatrix::identity(p, dv);
    let id_u = FpMatrix::identity(p, du);
    let a = s.c1.induced_map(&s.hm1, &id_v)?;
    let b = s.hm1.induced_map(&s.k0, &x.t(v, u))?;
    let c = s.k0.induced_map(&s.c0, &id_u)?;
    let d = s.c0.induced_map(&s.h0, &x.i(u, v))?;
    let e = s.h0.induced_map(&s.k1, &id_v)?;
    let exact_at = [
        a.is_injective(),
        check_exact(&a, &b)?.exact,
        check_exact(&b, &c)?.exact,
        check_exact(&c, &d)?.exact,
        check_exact(&d, &e)?.exact,
        e.is_surjective(),
    ];
    Ok(SixTermReport {
        u,
        v,
        dims: [
            s.c1.dim(),
            s.hm1.dim(),
            s.k0.dim(),
            s.c0.dim(),
            s.h0.dim(),
            s.k1.dim(),
        ],
        exact_at,
        exact: exact_at.iter().all(|&b| b),
    })
}

/// Exactness data for the two long sequences of a short exact sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LongSequenceReport {
    pub u: usize,
    pub v: usize,
    /// `k⁰(X), k⁰(Y), k⁰(Z), k¹(X), k¹(Y), k¹(Z)`.
    pub k_dims: [usize; 6],
    /// `c₁(X), c₁(Y), c₁(Z), c₀(X), c₀(Y), c₀(Z)`.
    pub c_dims: [usize; 6],
    /// Injectivity of `k⁰(φ)`, then exactness at `k⁰(Y), k⁰(Z), k¹(X), k¹(Y)`.
    pub k_exact: [bool; 5],
    /// Exactness at `c₁(Y), c₁(Z), c₀(X), c₀(Y)`, then surjectivity of `c₀(ψ)`.
    pub c_exact: [bool; 5],
    /// Whether `c₁(φ)` is injective; recorded, not required.
    pub c1_injective: bool,
    pub k_connecting_zero: bool,
    pub c_connecting_zero: bool,
    pub exact: bool,
}

fn solve(m: &FpMatrix, b: &[u32]) -> Result<Vec<u32>> {
    m.solve(b)
        .ok_or_else(|| MackeyError::NotSes("lift does not exist".into()))
}

pub fn long_sequences_check(ses: &Ses, u: usize, v: usize) -> Result<LongSequenceReport> {
    let (x, y, z) = (&*ses.x, &*ses.y, &*ses.z);
    let sx = section_cohomology(x, u, v)?;
    let sy = section_cohomology(y, u, v)?;
    let sz = section_cohomology(z, u, v)?;
    let p = x.prime();
    let (fu, fv) = (ses.f.component(u), ses.f.component(v));
    let (gu, gv) = (ses.g.component(u), ses.g.component(v));

    let k0f = sx.k0.induced_map(&sy.k0, fu)?;
    let k0g = sy.k0.induced_map(&sz.k0, gu)?;
    let k1f = sx.k1.induced_map(&sy.k1, fv)?;
    let k1g = sy.k1.induced_map(&sz.k1, gv)?;
    let iy = y.i(u, v);
    let mut cols = Vec::new();
    for r in 0..sz.k0.dim() {
        let lift = solve(gu, sz.k0.reps().row(r))?;
        let pre = solve(fv, &iy.apply(&lift))?;
        cols.push(sx.k1.reduce(&pre)?);
    }
    let dk = FpMatrix::from_columns(p, sx.k1.dim(), &cols);

    let c1f = sx.c1.induced_map(&sy.c1, fv)?;
    let c1g = sy.c1.induced_map(&sz.c1, gv)?;
    let c0f = sx.c0.induced_map(&sy.c0, fu)?;
    let c0g = sy.c0.induced_map(&sz.c0, gu)?;
    let ty = y.t(v, u);
    let mut cols = Vec::new();
    for r in 0..sz.c1.dim() {
        let lift = solve(gv, sz.c1.reps().row(r))?;
        let pre = solve(fu, &ty.apply(&lift))?;
        cols.push(sx.c0.reduce(&pre)?);
    }
    let dc = FpMatrix::from_columns(p, sx.c0.dim(), &cols);

    let k_exact = [
        k0f.is_injective(),
        check_exact(&k0f, &k0g)?.exact,
        check_exact(&k0g, &dk)?.exact,
        check_exact(&dk, &k1f)?.exact,
        check_exact(&k1f, &k1g)?.exact,
    ];
    let c_exact = [
        check_exact(&c1f, &c1g)?.exact,
        check_exact(&c1g, &dc)?.exact,
        check_exact(&dc, &c0f)?.exact,
        check_exact(&c0f, &c0g)?.exact,
        c0g.is_surjective(),
    ];
    Ok(LongSequenceReport {
        u,
        v,
        k_dims: [
            sx.k0.dim(),
            sy.k0.dim(),
            sz.k0.dim(),
            sx.k1.dim(),
            sy.k1.dim(),
            sz.k1.dim(),
        ],
        c_dims: [
            sx.c1.dim(),
            sy.c1.dim(),
            sz.c1.dim(),
            sx.c0.dim(),
            sy.c0.dim(),
            sz.c0.dim(),
        ],
        k_exact,
        c_exact,
        c1_injective: c1f.is_injective(),
        k_connecting_zero: dk.is_zero(),
        c_connecting_zero: dc.is_zero(),
        exact: k_exact.iter().chain(&c_exact).all(|&b| b),
    })
}

/// `H¹(U/V, X_V)` for the conjugation action.
pub fn section_h1(x: &Cmf, u: usize, v: usize) -> Result<usize> {
    require_section(x, u, v)?;
    if u == v || x.dim(v) == 0 {
        return Ok(0);
    }
    let a = section_module(x, u, v)?;
    h1_cohomology(&a)
}

/// `X_V` as a module over the quotient group `U/V`.
pub fn section_module(x: &Cmf, u: usize, v: usize) -> Result<FpGModule> {
    require_section(x, u, v)?;
    let sys = x.system();
    let g = sys.group();
    let (ug, embed) = g.subgroup_as_group(sys.member(u));
    let vs: Vec<usize> = (0..ug.order())
        .filter(|&y| sys.member(v).contains(embed[y]))
        .collect();
    let vsub = ug.subgroup_from_elements(&vs)?;
    let (q, proj) = ug.quotient(&vsub)?;
    let actions = q
        .generators()
        .iter()
        .map(|&qg| {
            let lift = (0..ug.order())
                .find(|&y| proj[y] == qg)
                .expect("projection is surjective");
            (*x.c(embed[lift], v)).clone()
        })
        .collect();
    FpGModule::new(Arc::new(q), x.dim(v), actions)
}

/// The structural predicates, each computed from its definition (map level)
/// and from its section-cohomology characterization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub i_injective: bool,
    pub t_surjective: bool,
    #[serde(rename = "type_H0")]
    pub type_h0: bool,
    #[serde(rename = "type_H_0")]
    pub type_h_0: bool,
    /// `None` when `G` is not in the system.
    pub terminally_i_injective: Option<bool>,
    #[serde(rename = "terminally_type_H0")]
    pub terminally_type_h0: Option<bool>,
    pub hilbert90: bool,
    /// Whether both computations agreed for every predicate.
    pub coherent: bool,
}

fn same_row_space(a: &FpMatrix, b: &FpMatrix) -> bool {
    a.row_space() == b.row_space()
}

pub fn predicates(x: &Cmf) -> Result<Predicates> {
    let sys = x.system().clone();
    let n = sys.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| sys.subs(u).iter().map(move |&v| (u, v)))
        .collect();
    let sections = sys.normal_sections();
    let secs: Vec<SectionCohomology> = sections
        .iter()
        .map(|&(u, v)| section_cohomology(x, u, v))
        .collect::<Result<_>>()?;

    let i_inj_map = pairs.iter().all(|&(u, v)| x.i(u, v).is_injective());
    let i_inj_sec = secs.iter().all(|s| s.k0.dim() == 0);
    let t_surj_map = pairs.iter().all(|&(u, v)| x.t(v, u).is_surjective());
    let t_surj_sec = secs.iter().all(|s| s.c0.dim() == 0);

    let descent_map = sections.iter().all(|&(u, v)| {
        let (_, fixed) = section_action(x, u, v);
        same_row_space(&x.i(u, v).image_basis(), &fixed)
    });
    let h0_map = i_inj_map && descent_map;
    let h0_sec = secs.iter().all(|s| s.k0.dim() == 0 && s.k1.dim() == 0);

    let codescent_map = sections.iter().all(|&(u, v)| {
        let (omega, _) = section_action(x, u, v);
        same_row_space(&x.t(v, u).kernel_basis(), &omega)
    });
    let h_0_map = t_surj_map && codescent_map;
    let h_0_sec = secs.iter().all(|s| s.c0.dim() == 0 && s.c1.dim() == 0);

    let mut coherent = i_inj_map == i_inj_sec
        && t_surj_map == t_surj_sec
        && h0_map == h0_sec
        && h_0_map == h_0_sec;

    let (terminally_i_injective, terminally_type_h0) = match sys.top() {
        None => (None, None),
        Some(top) => {
            let map = (0..n).all(|u| x.i(top, u).is_injective());
            let via_j = x.j_map()?.is_injective();
            coherent &= map == via_j;
            let normal: Vec<usize> = (0..n).filter(|&u| sys.is_normal_section(top, u)).collect();
            let term_map = i_inj_map
                && normal.iter().all(|&u| {
                    let (_, fixed) = section_action(x, top, u);
                    same_row_space(&x.i(top, u).image_basis(), &fixed)
                });
            let term_sec = i_inj_sec && secs.iter().filter(|s| s.u == top).all(|s| s.k1.dim() == 0);
            coherent &= term_map == term_sec;
            (Some(map), Some(term_map))
        }
    };

    let hilbert90 = h0_map
        && sections
            .iter()
            .map(|&(u, v)| section_h1(x, u, v))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|&d| d == 0);

    Ok(Predicates {
        i_injective: i_inj_map,
        t_surjective: t_surj_map,
        type_h0: h0_map,
        type_h_0: h_0_map,
        terminally_i_injective,
        terminally_type_h0,
        hilbert90,
        coherent,
    })
}

/// For `X` terminally of type H⁰: `im i_{G,U} = X_U^{G}` for every member `U`
/// normal in `G`.
pub fn terminal_socle_check(x: &Cmf) -> Result<bool> {
    let sys = x.system();
    let top = sys
        .top()
        .ok_or_else(|| MackeyError::PreconditionFailed("the system does not contain G".into()))?;
    if predicates(x)?.terminally_type_h0 != Some(true) {
        return Err(MackeyError::PreconditionFailed(
            "not terminally of type H0".into(),
        ));
    }
    Ok((0..sys.len())
        .filter(|&u| sys.is_normal_section(top, u))
        .all(|u| {
            let (_, fixed) = section_action(x, top, u);
            same_row_space(&x.i(top, u).image_basis(), &fixed)
        }))
}

/// Hypotheses and conclusion of the injectivity criterion for a morphism
/// `φ: X -> Y` over a system containing `G`: if `j_Y ∘ φ_G` is injective and
/// `X` is terminally of type H⁰, then every `φ_U` is injective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityVerdict {
    pub j_composite_injective: bool,
    pub source_terminally_type_h0: bool,
    pub all_components_injective: bool,
}

impl InjectivityVerdict {
    /// False only when both hypotheses hold and the conclusion fails.
    pub fn consistent(&self) -> bool {
        !(self.j_composite_injective && self.source_terminally_type_h0)
            || self.all_components_injective
    }
}

pub fn injectivity_criterion(x: &Cmf, y: &Cmf, phi: &CmfMorphism) -> Result<InjectivityVerdict> {
    let top = x
        .system()
        .top()
        .ok_or_else(|| MackeyError::PreconditionFailed("the system does not contain G".into()))?;
    let j = y.j_map()?;
    Ok(InjectivityVerdict {
        j_composite_injective: j.mul(phi.component(top)).is_injective(),
        source_terminally_type_h0: predicates(x)?.terminally_type_h0 == Some(true),
        all_components_injective: phi.is_injective(),
    })
}
