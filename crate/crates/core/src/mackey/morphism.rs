use std::sync::Arc;

use super::functor::Cmf;
use crate::error::{MackeyError, Result};
use crate::linalg::{check_exact, FpMatrix, FpSubquotient};

/// A family of linear maps `φ_U: X_U -> Y_U` commuting with all `i`, `t`
/// and `c` maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmfMorphism {
    components: Vec<FpMatrix>,
}

fn same_system(x: &Cmf, y: &Cmf) -> Result<()> {
    if Arc::ptr_eq(x.system(), y.system()) {
        Ok(())
    } else {
        Err(MackeyError::NotAMorphism(
            "functors over different systems".into(),
        ))
    }
}

impl CmfMorphism {
    /// Verifies shapes and commutation on covering edges and generator
    /// conjugations (which generate all maps).
    pub fn new(x: &Cmf, y: &Cmf, components: Vec<FpMatrix>) -> Result<Self> {
        same_system(x, y)?;
        let sys = x.system();
        if components.len() != sys.len() {
            return Err(MackeyError::NotAMorphism(
                "one component per member required".into(),
            ));
        }
        for (u, c) in components.iter().enumerate() {
            if c.rows() != y.dim(u) || c.cols() != x.dim(u) || c.prime() != x.prime() {
                return Err(MackeyError::NotAMorphism(format!(
                    "component {u} has the wrong shape"
                )));
            }
        }
        for u in 0..sys.len() {
            for &v in sys.covers(u) {
                let (xi, yi) = (x.i_edge(u, v).unwrap(), y.i_edge(u, v).unwrap());
                if components[v].mul(xi) != yi.mul(&components[u]) {
                    return Err(MackeyError::NotAMorphism(format!(
                        "fails to commute with i on ({u}, {v})"
                    )));
                }
                let (xt, yt) = (x.t_edge(u, v).unwrap(), y.t_edge(u, v).unwrap());
                if components[u].mul(xt) != yt.mul(&components[v]) {
                    return Err(MackeyError::NotAMorphism(format!(
                        "fails to commute with t on ({u}, {v})"
                    )));
                }
            }
            for (s, &g) in sys.group().generators().iter().enumerate() {
                let w = sys.conj(g, u);
                if components[w].mul(x.c_gen(s, u)) != y.c_gen(s, u).mul(&components[u]) {
                    return Err(MackeyError::NotAMorphism(format!(
                        "fails to commute with c for generator {s} at {u}"
                    )));
                }
            }
        }
        Ok(CmfMorphism { components })
    }

    pub fn identity(x: &Cmf) -> Self {
        let p = x.prime();
        CmfMorphism {
            components: x.dims().iter().map(|&d| FpMatrix::identity(p, d)).collect(),
        }
    }

    pub fn zero(x: &Cmf, y: &Cmf) -> Result<Self> {
        same_system(x, y)?;
        let p = x.prime();
        Ok(CmfMorphism {
            components: (0..x.dims().len())
                .map(|u| FpMatrix::zeros(p, y.dim(u), x.dim(u)))
                .collect(),
        })
    }

    pub fn scale(&self, c: u32) -> Self {
        CmfMorphism {
            components: self.components.iter().map(|m| m.scale(c)).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &CmfMorphism) -> Self {
        CmfMorphism {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| b.mul(a))
                .collect(),
        }
    }

    pub fn components(&self) -> &[FpMatrix] {
        &self.components
    }

    pub fn component(&self, u: usize) -> &FpMatrix {
        &self.components[u]
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|m| m.is_injective())
    }

    pub fn is_surjective(&self) -> bool {
        self.components.iter().all(|m| m.is_surjective())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.components
            .iter()
            .all(|m| m.rows() == m.cols() && m.is_injective())
    }
}

/// Subfunctor spanned componentwise by the rows of `bases`, with its inclusion.
pub fn subfunctor(x: &Cmf, bases: &[FpMatrix]) -> Result<(Cmf, CmfMorphism)> {
    let spaces: Vec<FpSubquotient> = bases.iter().map(FpSubquotient::subspace).collect();
    induced_functor(x, &spaces).map(|(f, maps)| {
        let incl = maps.into_iter().map(|m| m.transpose()).collect();
        (f, CmfMorphism { components: incl })
    })
}

/// Quotient of `x` by the subfunctor spanned by `bases`, with the projection.
pub fn quotient_functor(x: &Cmf, bases: &[FpMatrix]) -> Result<(Cmf, CmfMorphism)> {
    let p = x.prime();
    let spaces: Vec<FpSubquotient> = bases
        .iter()
        .map(FpSubquotient::quotient)
        .collect::<Result<_>>()?;
    let (f, _) = induced_functor(x, &spaces)?;
    let proj = spaces
        .iter()
        .enumerate()
        .map(|(u, s)| {
            FpSubquotient::full(p, x.dim(u)).induced_map(s, &FpMatrix::identity(p, x.dim(u)))
        })
        .collect::<Result<_>>()?;
    Ok((f, CmfMorphism { components: proj }))
}

/// The functor on componentwise subquotients, plus the representative
/// bases (rows) of each space.
fn induced_functor(x: &Cmf, spaces: &[FpSubquotient]) -> Result<(Cmf, Vec<FpMatrix>)> {
    let sys = x.system().clone();
    if spaces.len() != sys.len() {
        return Err(MackeyError::Shape(
            "one subspace per member required".into(),
        ));
    }
    for (u, s) in spaces.iter().enumerate() {
        if s.ambient_dim() != x.dim(u) {
            return Err(MackeyError::Shape(format!(
                "subspace {u} lives in the wrong dimension"
            )));
        }
    }
    let gens = sys.group().generators().to_vec();
    let dims = spaces.iter().map(|s| s.dim()).collect();
    let not_stable =
        |e: MackeyError| MackeyError::NotAMorphism(format!("subspaces are not stable: {e}"));
    let f = Cmf::from_fn(
        sys.clone(),
        x.prime(),
        dims,
        |u, v| {
            spaces[u]
                .induced_map(&spaces[v], x.i_edge(u, v).unwrap())
                .map_err(not_stable)
        },
        |u, v| {
            spaces[v]
                .induced_map(&spaces[u], x.t_edge(u, v).unwrap())
                .map_err(not_stable)
        },
        |s, u| {
            let w = sys.conj(gens[s], u);
            spaces[u]
                .induced_map(&spaces[w], x.c_gen(s, u))
                .map_err(not_stable)
        },
    )?;
    Ok((f, spaces.iter().map(|s| s.reps().clone()).collect()))
}

/// `ker φ` with its inclusion into `x`.
pub fn kernel(x: &Cmf, phi: &CmfMorphism) -> Result<(Cmf, CmfMorphism)> {
    let bases: Vec<FpMatrix> = phi.components.iter().map(|m| m.kernel_basis()).collect();
    subfunctor(x, &bases)
}

/// `im φ` with its inclusion into `y`.
pub fn image(y: &Cmf, phi: &CmfMorphism) -> Result<(Cmf, CmfMorphism)> {
    let bases: Vec<FpMatrix> = phi.components.iter().map(|m| m.image_basis()).collect();
    subfunctor(y, &bases)
}

/// `coker φ` with the projection from `y`.
pub fn cokernel(y: &Cmf, phi: &CmfMorphism) -> Result<(Cmf, CmfMorphism)> {
    let bases: Vec<FpMatrix> = phi.components.iter().map(|m| m.image_basis()).collect();
    quotient_functor(y, &bases)
}

/// The canonical map `X -> im φ` (corestriction of `φ` to its image).
pub fn onto_image(x: &Cmf, y: &Cmf, phi: &CmfMorphism) -> Result<(Cmf, CmfMorphism)> {
    let (im, _) = image(y, phi)?;
    let comps = phi
        .components
        .iter()
        .enumerate()
        .map(|(u, m)| {
            let s = FpSubquotient::subspace(&m.image_basis());
            FpSubquotient::full(x.prime(), x.dim(u)).induced_map(&s, m)
        })
        .collect::<Result<_>>()?;
    let onto = CmfMorphism::new(x, &im, comps)?;
    Ok((im, onto))
}

/// A verified short exact sequence `0 -> X -> Y -> Z -> 0`.
#[derive(Clone, Debug)]
pub struct Ses {
    pub x: Arc<Cmf>,
    pub y: Arc<Cmf>,
    pub z: Arc<Cmf>,
    pub f: CmfMorphism,
    pub g: CmfMorphism,
}

impl Ses {
    /// Checks that `f` and `g` are morphisms and that every component
    /// `0 -> X_U -> Y_U -> Z_U -> 0` is exact.
    pub fn new(
        x: Arc<Cmf>,
        y: Arc<Cmf>,
        z: Arc<Cmf>,
        f: CmfMorphism,
        g: CmfMorphism,
    ) -> Result<Self> {
        let f = CmfMorphism::new(&x, &y, f.components)
            .map_err(|e| MackeyError::NotSes(e.to_string()))?;
        let g = CmfMorphism::new(&y, &z, g.components)
            .map_err(|e| MackeyError::NotSes(e.to_string()))?;
        for u in 0..x.dims().len() {
            let (fu, gu) = (f.component(u), g.component(u));
            if !fu.is_injective() {
                return Err(MackeyError::NotSes(format!(
                    "first map not injective at member {u}"
                )));
            }
            if !gu.is_surjective() {
                return Err(MackeyError::NotSes(format!(
                    "second map not surjective at member {u}"
                )));
            }
            if !check_exact(fu, gu)?.exact {
                return Err(MackeyError::NotSes(format!(
                    "not exact in the middle at member {u}"
                )));
            }
        }
        Ok(Ses { x, y, z, f, g })
    }

    /// `0 -> X -> X ⊕ Z -> Z -> 0`.
    pub fn split(x: Arc<Cmf>, z: Arc<Cmf>) -> Result<Self> {
        let y = Arc::new(x.direct_sum(&z)?);
        let p = x.prime();
        let mut fc = Vec::new();
        let mut gc = Vec::new();
        for u in 0..x.dims().len() {
            let (a, c) = (x.dim(u), z.dim(u));
            fc.push(FpMatrix::from_fn(p, a + c, a, |r, k| (r == k) as u32));
            gc.push(FpMatrix::from_fn(p, c, a + c, |r, k| (k == a + r) as u32));
        }
        Self::new(
            x,
            y,
            z,
            CmfMorphism { components: fc },
            CmfMorphism { components: gc },
        )
    }

    /// `0 -> ker φ -> X -> im φ -> 0`.
    pub fn from_kernel(x: Arc<Cmf>, y: &Cmf, phi: &CmfMorphism) -> Result<Self> {
        let (k, incl) = kernel(&x, phi)?;
        let (im, onto) = onto_image(&x, y, phi)?;
        Self::new(Arc::new(k), x, Arc::new(im), incl, onto)
    }

    /// `0 -> im φ -> Y -> coker φ -> 0`.
    pub fn from_cokernel(y: Arc<Cmf>, phi: &CmfMorphism) -> Result<Self> {
        let (im, incl) = image(&y, phi)?;
        let (c, proj) = cokernel(&y, phi)?;
        Self::new(Arc::new(im), y, Arc::new(c), incl, proj)
    }
}
