//! Minimal projective resolutions over F_p[G].
//!
//! A free module `F_p[G]^r` has F_p-basis `g·e_j`, indexed `j·|G| + g`. A map
//! `F_p[G]^a -> F_p[G]^b` is a `b × a` matrix of group-ring elements `a_ij`
//! with `e_j ↦ Σ_i a_ij e_i`; since free modules are left modules and the map
//! is G-linear, `g·e_j ↦ Σ_i (g·a_ij) e_i`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{MackeyError, Result};
use crate::group::{PGroup, Subgroup};
use crate::linalg::{check_exact, FpMatrix, FpSubquotient, Prime};
use crate::module::FpGModule;

/// Default degree cap for resolutions and homology.
pub const DEFAULT_DEGREE_CAP: usize = 8;

/// A matrix with entries in F_p[G], each stored densely by element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMatrix {
    rows: usize,
    cols: usize,
    order: usize,
    entries: Vec<u32>,
}

impl GroupRingMatrix {
    pub fn zeros(rows: usize, cols: usize, order: usize) -> Self {
        GroupRingMatrix {
            rows,
            cols,
            order,
            entries: vec![0; rows * cols * order],
        }
    }

    /// Columns are vectors of `F_p[G]^rows` in the free-module basis.
    pub fn from_columns(rows: usize, order: usize, columns: &FpMatrix) -> Self {
        let cols = columns.rows();
        let mut m = Self::zeros(rows, cols, order);
        for j in 0..cols {
            for i in 0..rows {
                for h in 0..order {
                    m.entries[(i * cols + j) * order + h] = columns.get(j, i * order + h);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Coefficients of the entry `a_ij`.
    pub fn entry(&self, i: usize, j: usize) -> &[u32] {
        let start = (i * self.cols + j) * self.order;
        &self.entries[start..start + self.order]
    }

    /// The F_p-linear map `F_p[G]^cols -> F_p[G]^rows`.
    pub fn expand(&self, g: &PGroup) -> FpMatrix {
        let n = self.order;
        let p = g.prime();
        let mut m = FpMatrix::zeros(p, self.rows * n, self.cols * n);
        for j in 0..self.cols {
            for i in 0..self.rows {
                let a = self.entry(i, j);
                for (h, &c) in a.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for x in 0..n {
                        m.add_at(i * n + g.mul(x, h), j * n + x, c);
                    }
                }
            }
        }
        m
    }

    /// The induced map on `U`-coinvariants, `F_p^{cols·|G:U|} -> F_p^{rows·|G:U|}`,
    /// in the basis `(j, Ux)` of right cosets numbered by `coset_of`.
    pub fn coinvariant_map(
        &self,
        g: &PGroup,
        coset_of: &[usize],
        ncosets: usize,
        reps: &[usize],
    ) -> FpMatrix {
        let p = g.prime();
        let mut m = FpMatrix::zeros(p, self.rows * ncosets, self.cols * ncosets);
        for j in 0..self.cols {
            for i in 0..self.rows {
                let a = self.entry(i, j);
                for (h, &c) in a.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (k, &x) in reps.iter().enumerate() {
                        m.add_at(i * ncosets + coset_of[g.mul(x, h)], j * ncosets + k, c);
                    }
                }
            }
        }
        m
    }

    /// Whether every entry has augmentation zero.
    pub fn is_augmentation_zero(&self, p: Prime) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| self.entry(i, j).iter().fold(0, |acc, &c| p.add(acc, c)) == 0)
        })
    }
}

/// Right cosets `Ux` of `U` in `G`: the coset index of every element and the
/// minimal representative of each coset.
#[derive(Clone, Debug)]
pub struct RightCosets {
    pub coset_of: Vec<usize>,
    pub reps: Vec<usize>,
}

impl RightCosets {
    pub fn new(g: &PGroup, u: &Subgroup) -> Self {
        let cosets = g.right_cosets(u);
        let mut coset_of = vec![0; g.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                coset_of[x] = i;
            }
        }
        RightCosets {
            coset_of,
            reps: cosets.iter().map(|c| c[0]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// A truncated projective resolution `P_L -> … -> P_0 -> M`.
#[derive(Clone, Debug)]
pub struct Resolution {
    group: Arc<PGroup>,
    target: FpGModule,
    ranks: Vec<usize>,
    lifts: FpMatrix,
    differentials: Vec<GroupRingMatrix>,
    truncated: bool,
    cap: usize,
}

/// Exact verification of a resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionCheck {
    pub augmentation_surjective: bool,
    pub composites_zero: bool,
    pub exact: bool,
    pub minimal: bool,
}

impl ResolutionCheck {
    pub fn all_hold(&self) -> bool {
        self.augmentation_surjective && self.composites_zero && self.exact && self.minimal
    }
}

impl Resolution {
    /// Iterated projective covers up to degree `cap`.
    pub fn minimal(m: &FpGModule, cap: usize) -> Result<Self> {
        Self::build(m, cap, false)
    }

    /// A resolution padded at every degree with one superfluous free summand;
    /// used to cross-check homology independently of minimality.
    pub fn padded(m: &FpGModule, cap: usize) -> Result<Self> {
        Self::build(m, cap, true)
    }

    fn build(m: &FpGModule, cap: usize, pad: bool) -> Result<Self> {
        if m.is_zero() {
            return Err(MackeyError::ZeroModule);
        }
        let group = m.group().clone();
        let g = &*group;
        let n = g.order();
        let head = m.coinvariants();
        let mut lifts = head.reps().clone();
        if pad {
            let extra = head.quot_basis();
            let row = if extra.rows() > 0 {
                extra.row(0).to_vec()
            } else {
                vec![0; m.dim()]
            };
            lifts.push_row(&row);
        }
        let r0 = lifts.rows();
        let mut res = Resolution {
            group: group.clone(),
            target: m.clone(),
            ranks: vec![r0],
            lifts,
            differentials: Vec::new(),
            truncated: false,
            cap,
        };
        let mut kernel = res.expanded_augmentation().kernel_basis();
        for k in 1..=cap {
            if kernel.rows() == 0 {
                return Ok(res);
            }
            let rprev = res.ranks[k - 1];
            let omega = free_augmentation_span(g, rprev, &kernel);
            let head = FpSubquotient::new(rprev * n, &kernel, &omega)?;
            let mut cols = head.reps().clone();
            if pad {
                let row = if omega.rows() > 0 {
                    omega.row(0).to_vec()
                } else {
                    vec![0; rprev * n]
                };
                cols.push_row(&row);
            }
            let d = GroupRingMatrix::from_columns(rprev, n, &cols);
            res.ranks.push(cols.rows());
            kernel = d.expand(g).kernel_basis();
            res.differentials.push(d);
        }
        res.truncated = kernel.rows() > 0;
        Ok(res)
    }

    pub fn group(&self) -> &Arc<PGroup> {
        &self.group
    }

    pub fn target(&self) -> &FpGModule {
        &self.target
    }

    /// Free ranks `r_0, …, r_len`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    /// True when the final syzygy is nonzero, so the resolution was cut at the cap.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Rows are the images `ε(e_j)` of the free generators of `P_0`.
    pub fn augmentation_lifts(&self) -> &FpMatrix {
        &self.lifts
    }

    /// `∂_k: P_k -> P_{k-1}` for `1 ≤ k ≤ length`.
    pub fn differential(&self, k: usize) -> &GroupRingMatrix {
        &self.differentials[k - 1]
    }

    /// `ε: P_0 -> M` as an F_p matrix, column `(j, g)` equal to `ρ(g)·m_j`.
    pub fn expanded_augmentation(&self) -> FpMatrix {
        let g = &*self.group;
        let n = g.order();
        let dim = self.target.dim();
        let mut cols = Vec::with_capacity(self.ranks[0] * n);
        for j in 0..self.ranks[0] {
            for x in 0..n {
                cols.push(self.target.act(x, self.lifts.row(j)));
            }
        }
        FpMatrix::from_columns(g.prime(), dim, &cols)
    }

    /// Complex of `U`-coinvariants: `∂̄_k` for `1 ≤ k ≤ length`, in the basis
    /// `(j, Ux)`; `∂̄_0` (to the zero space) is implicit.
    pub fn coinvariant_differential(&self, k: usize, cosets: &RightCosets) -> FpMatrix {
        self.differential(k).coinvariant_map(
            &self.group,
            &cosets.coset_of,
            cosets.len(),
            &cosets.reps,
        )
    }

    /// Verifies surjectivity of ε, `∂² = 0`, exactness, and minimality.
    pub fn verify(&self) -> ResolutionCheck {
        let g = &*self.group;
        let eps = self.expanded_augmentation();
        let augmentation_surjective = eps.is_surjective();
        let mut composites_zero = true;
        let mut exact = true;
        let mut prev = eps;
        for k in 1..=self.length() {
            let d = self.differential(k).expand(g);
            let v = check_exact(&d, &prev).expect("composable differentials");
            composites_zero &= v.composite_zero;
            exact &= v.exact;
            prev = d;
        }
        if !self.truncated {
            // the last map is injective when the resolution terminates
            exact &= prev.is_injective();
        }
        let minimal = self
            .differentials
            .iter()
            .all(|d| d.is_augmentation_zero(g.prime()));
        ResolutionCheck {
            augmentation_surjective,
            composites_zero,
            exact,
            minimal,
        }
    }
}

/// Canonical basis of `ω_G·K` for a subspace `K` of `F_p[G]^r`.
fn free_augmentation_span(g: &PGroup, r: usize, kernel: &FpMatrix) -> FpMatrix {
    let n = g.order();
    let p = g.prime();
    let mut rows = FpMatrix::zeros(p, 0, r * n);
    let mut v = vec![0u32; r * n];
    for &s in g.generators() {
        for k in 0..kernel.rows() {
            let src = kernel.row(k);
            v.iter_mut().for_each(|x| *x = 0);
            for j in 0..r {
                for x in 0..n {
                    let c = src[j * n + x];
                    if c != 0 {
                        let t = j * n + g.mul(s, x);
                        v[t] = p.add(v[t], c);
                        v[j * n + x] = p.sub(v[j * n + x], c);
                    }
                }
            }
            rows.push_row(&v);
        }
    }
    rows.row_space()
}
