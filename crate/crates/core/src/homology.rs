//! Group homology over F_p, the chain-level transfer, and Tate cohomology.
//!
//! Homology of a subgroup `U` is computed from a resolution over `G` by
//! taking `U`-coinvariants: `(F_p[G]^r)_U` has basis `(j, Ux)` over the right
//! cosets of `U`, so one resolution serves every subgroup at once.

use serde::Serialize;

use crate::error::{MackeyError, Result};
use crate::group::{PGroup, Subgroup};
use crate::linalg::{FpMatrix, FpSubquotient};
use crate::module::FpGModule;
use crate::resolution::{Resolution, RightCosets};

/// The `U`-coinvariant complex of a resolution over `G`, up to a top degree.
#[derive(Clone, Debug)]
pub struct CosetComplex {
    subgroup: Subgroup,
    cosets: RightCosets,
    ranks: Vec<usize>,
    diffs: Vec<FpMatrix>,
}

impl CosetComplex {
    /// Differentials `∂̄_k` for `1 ≤ k ≤ min(top, length)`.
    pub fn new(res: &Resolution, u: &Subgroup, top: usize) -> Self {
        let cosets = RightCosets::new(res.group(), u);
        let len = res.length().min(top);
        let diffs = (1..=len)
            .map(|k| res.coinvariant_differential(k, &cosets))
            .collect();
        CosetComplex {
            subgroup: u.clone(),
            cosets,
            ranks: res.ranks().to_vec(),
            diffs,
        }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn cosets(&self) -> &RightCosets {
        &self.cosets
    }

    /// Dimension of the chain space in degree `k`.
    pub fn chain_dim(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0) * self.cosets.len()
    }

    /// `∂̄_k: C_k -> C_{k-1}`; the zero map where the resolution has no term.
    pub fn differential(&self, k: usize, p: crate::linalg::Prime) -> FpMatrix {
        if k >= 1 && k <= self.diffs.len() {
            return self.diffs[k - 1].clone();
        }
        FpMatrix::zeros(
            p,
            if k == 0 { 0 } else { self.chain_dim(k - 1) },
            self.chain_dim(k),
        )
    }

    /// `H_k = ker ∂̄_k / im ∂̄_{k+1}`; requires differentials through `k + 1`.
    pub fn homology(&self, k: usize, p: crate::linalg::Prime) -> FpSubquotient {
        let n = self.chain_dim(k);
        let cycles = if k == 0 {
            FpMatrix::identity(p, n)
        } else {
            self.differential(k, p).kernel_basis()
        };
        let boundaries = self.differential(k + 1, p).image_basis();
        FpSubquotient::new(n, &cycles, &boundaries).expect("boundaries are cycles")
    }
}

/// The chain-level transfer `C_k(U) -> C_k(V)` for `V ⊆ U`:
/// `(j, Ux) ↦ Σ_{Vy ⊆ Ux} (j, Vy)`.
pub fn transfer_chain(g: &PGroup, from: &CosetComplex, to: &CosetComplex, rank: usize) -> FpMatrix {
    let (a, b) = (from.cosets.len(), to.cosets.len());
    let mut m = FpMatrix::zeros(g.prime(), rank * b, rank * a);
    for (l, &y) in to.cosets.reps.iter().enumerate() {
        let k = from.cosets.coset_of[y];
        for j in 0..rank {
            m.set(j * b + l, j * a + k, 1);
        }
    }
    m
}

/// The canonical surjection `C_k(V) -> C_k(U)` for `V ⊆ U`: `(j, Vy) ↦ (j, Uy)`.
pub fn projection_chain(
    g: &PGroup,
    from: &CosetComplex,
    to: &CosetComplex,
    rank: usize,
) -> FpMatrix {
    transfer_chain(g, to, from, rank).transpose()
}

/// Conjugation `C_k(U) -> C_k(gUg⁻¹)`: `(j, Ux) ↦ (j, gUg⁻¹·gx)`.
pub fn conjugation_chain(
    grp: &PGroup,
    g: usize,
    from: &CosetComplex,
    to: &CosetComplex,
    rank: usize,
) -> FpMatrix {
    let a = from.cosets.len();
    let mut m = FpMatrix::zeros(grp.prime(), rank * a, rank * a);
    for (k, &x) in from.cosets.reps.iter().enumerate() {
        let l = to.cosets.coset_of[grp.mul(g, x)];
        for j in 0..rank {
            m.set(j * a + l, j * a + k, 1);
        }
    }
    m
}

/// Homology in one degree.
#[derive(Clone, Debug)]
pub struct HomologyResult {
    pub k: usize,
    pub space: FpSubquotient,
    pub via_minimal: bool,
    pub dim: usize,
}

fn check_degree(k: usize, cap: usize) -> Result<()> {
    if k > cap {
        return Err(MackeyError::DegreeOverCap { degree: k, cap });
    }
    Ok(())
}

/// `H_k(G, M)` from the minimal resolution.
pub fn homology(m: &FpGModule, k: usize, cap: usize) -> Result<HomologyResult> {
    check_degree(k, cap)?;
    let res = Resolution::minimal(m, k + 1)?;
    let g = res.group().clone();
    let cx = CosetComplex::new(&res, &g.whole(), k + 1);
    let space = cx.homology(k, g.prime());
    let expected = res.ranks().get(k).copied().unwrap_or(0);
    assert_eq!(
        space.dim(),
        expected,
        "minimal resolution has zero differentials"
    );
    Ok(HomologyResult {
        k,
        dim: space.dim(),
        space,
        via_minimal: true,
    })
}

/// `H_k(G, M)` from a deliberately non-minimal resolution.
pub fn homology_non_minimal(m: &FpGModule, k: usize, cap: usize) -> Result<HomologyResult> {
    check_degree(k, cap)?;
    let res = Resolution::padded(m, k + 1)?;
    let g = res.group().clone();
    let space = CosetComplex::new(&res, &g.whole(), k + 1).homology(k, g.prime());
    Ok(HomologyResult {
        k,
        dim: space.dim(),
        space,
        via_minimal: false,
    })
}

/// `dim H_k(G, M)` for `k = 0..=top` (the minimal ranks).
pub fn homology_dims(m: &FpGModule, top: usize, cap: usize) -> Result<Vec<usize>> {
    check_degree(top, cap)?;
    let res = Resolution::minimal(m, top)?;
    Ok((0..=top)
        .map(|k| res.ranks().get(k).copied().unwrap_or(0))
        .collect())
}

/// The corestriction `H_d(G, M) -> H_d(U, M)` with its codomain.
#[derive(Clone, Debug)]
pub struct Corestriction {
    pub matrix: FpMatrix,
    pub source_dim: usize,
    pub target: FpSubquotient,
}

impl Corestriction {
    pub fn is_injective(&self) -> bool {
        self.matrix.is_injective()
    }
}

/// Corestriction computed on a given minimal resolution reaching degree `d + 1`
/// (or terminating earlier).
pub fn corestriction_on(res: &Resolution, u: &Subgroup, d: usize) -> Result<Corestriction> {
    let g = res.group().clone();
    if !u.is_subset(&g.whole()) {
        return Err(MackeyError::NotSubgroup(
            "subgroup of a different group".into(),
        ));
    }
    let p = g.prime();
    let top = d + 1;
    let cg = CosetComplex::new(res, &g.whole(), top);
    let cu = CosetComplex::new(res, u, top);
    // chain-map property in every degree up to d + 1
    for k in 1..=top.min(res.length()) {
        let r = res.ranks()[k];
        let rp = res.ranks()[k - 1];
        let lhs = cu.differential(k, p).mul(&transfer_chain(&g, &cg, &cu, r));
        let rhs = transfer_chain(&g, &cg, &cu, rp).mul(&cg.differential(k, p));
        assert_eq!(lhs, rhs, "transfer is a chain map");
    }
    let source = cg.homology(d, p);
    assert_eq!(
        source.dim(),
        cg.chain_dim(d),
        "minimal resolution has zero differentials"
    );
    let target = cu.homology(d, p);
    let rank = res.ranks().get(d).copied().unwrap_or(0);
    let chain = transfer_chain(&g, &cg, &cu, rank);
    let matrix = source.induced_map(&target, &chain)?;
    Ok(Corestriction {
        matrix,
        source_dim: source.dim(),
        target,
    })
}

/// `cores_{G,U}: H_d(G, M) -> H_d(U, res M)`.
pub fn corestriction(m: &FpGModule, u: &Subgroup, d: usize, cap: usize) -> Result<Corestriction> {
    check_degree(d, cap)?;
    let g = m.group();
    if u.elements().last().is_some_and(|&x| x >= g.order()) || !u.contains(0) {
        return Err(MackeyError::NotSubgroup(
            "subgroup of a different group".into(),
        ));
    }
    let res = Resolution::minimal(m, d + 1)?;
    corestriction_on(&res, u, d)
}

/// The identification `H_1(U, F_p) ≅ U^{ab,el}` for a minimal resolution of
/// the trivial module `F_p`, as a matrix from homology coordinates to
/// logarithm coordinates of `U`.
///
/// A cycle `Σ c_{j,k} (j, Ux_k)` lifts to `Σ c_{j,k} x_k e_j`; its boundary
/// `Σ a_g g ∈ F_p[G]` is sent to `Σ a_g log_U(g x_g⁻¹)`, where `Ux_g` is the
/// coset of `g`.
pub fn h1_to_elab(res: &Resolution, cx: &CosetComplex) -> Result<FpMatrix> {
    let g = res.group();
    let p = g.prime();
    if res.target().dim() != 1 || res.ranks()[0] != 1 {
        return Err(MackeyError::PreconditionFailed(
            "identification requires the trivial module F_p".into(),
        ));
    }
    let u = cx.subgroup();
    let (ug, embed) = g.subgroup_as_group(u);
    let elab = ug.elab();
    let mut to_u = vec![usize::MAX; g.order()];
    for (i, &x) in embed.iter().enumerate() {
        to_u[x] = i;
    }
    let h1 = cx.homology(1, p);
    let ncos = cx.cosets.len();
    let d1 = if res.length() >= 1 {
        Some(res.differential(1))
    } else {
        None
    };
    let mut cols = Vec::with_capacity(h1.dim());
    for r in 0..h1.dim() {
        let z = h1.reps().row(r);
        let mut acc = vec![0u32; elab.rank()];
        let Some(d1) = d1 else {
            cols.push(acc);
            continue;
        };
        for j in 0..d1.cols() {
            for (k, &x) in cx.cosets.reps.iter().enumerate() {
                let c = z[j * ncos + k];
                if c == 0 {
                    continue;
                }
                for (h, &a) in d1.entry(0, j).iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let el = g.mul(x, h);
                    let rep = cx.cosets.reps[cx.cosets.coset_of[el]];
                    let v = g.mul(el, g.inv(rep));
                    let coeff = p.mul(c, a);
                    for (slot, &l) in acc.iter_mut().zip(elab.log(to_u[v])) {
                        *slot = p.add(*slot, p.mul(coeff, l));
                    }
                }
            }
        }
        cols.push(acc);
    }
    Ok(FpMatrix::from_columns(p, elab.rank(), &cols))
}

/// Tate cohomology in degrees −1 and 0.
#[derive(Clone, Debug)]
pub struct TatePair {
    pub hm1: FpSubquotient,
    pub h0: FpSubquotient,
    pub norm: FpMatrix,
}

/// `Ĥ⁻¹ = ker N / ω A` and `Ĥ⁰ = A^Q / N A`.
pub fn tate(a: &FpGModule) -> TatePair {
    let norm = a.norm();
    let n = a.dim();
    let omega = a.augmentation_span(a.group().generators());
    let fixed = a.fixed_space(a.group().generators());
    let hm1 = FpSubquotient::new(n, &norm.kernel_basis(), &omega).expect("ωA ⊆ ker N");
    let h0 = FpSubquotient::new(n, &fixed, &norm.image_basis()).expect("NA ⊆ A^Q");
    TatePair { hm1, h0, norm }
}

/// `dim H¹(Q, A) = dim H_1(Q, A*)`.
pub fn h1_cohomology(a: &FpGModule) -> Result<usize> {
    if a.is_zero() {
        return Ok(0);
    }
    Ok(homology(&a.contragredient(), 1, 1)?.dim)
}

/// Dimensions reported for a Tate computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TateDims {
    pub hm1: usize,
    pub h0: usize,
}

impl TatePair {
    pub fn dims(&self) -> TateDims {
        TateDims {
            hm1: self.hm1.dim(),
            h0: self.h0.dim(),
        }
    }
}
