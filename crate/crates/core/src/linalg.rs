//! Dense linear algebra over a prime field F_p.
//!
//! Linear maps act on column vectors: a map `F_p^n -> F_p^m` is an `m x n`
//! [`FpMatrix`]. Subspaces are carried as matrices whose rows span them, kept
//! in reduced row echelon form whenever a canonical basis is needed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{MackeyError, Result};

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=(1 << 30)).contains(&p) {
            return Err(MackeyError::NotPrime(p));
        }
        let mut d = 2u32;
        while (d as u64) * (d as u64) <= p as u64 {
            if p.is_multiple_of(d) {
                return Err(MackeyError::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.0), "inverting zero in F_{}", self.0);
        let mut result = 1u32;
        let mut base = a % self.0;
        let mut exp = self.0 - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        result
    }
}

impl TryFrom<u32> for Prime {
    type Error = MackeyError;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A dense matrix over F_p, stored row-major with every entry in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix[F_{}; {}x{}]", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: FpMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(p: Prime, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(p, n, n);
        let c = c % p.get();
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced mod p.
    pub fn from_rows(p: Prime, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(MackeyError::Shape(format!(
                    "row {i} has length {} but {cols} columns expected",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| x % p.get()));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(
        p: Prime,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % p.get());
            }
        }
        FpMatrix {
            p,
            rows,
            cols,
            data,
        }
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (r, &x) in col.iter().enumerate() {
                m.data[r * m.cols + c] = x % p.get();
            }
        }
        m
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p.get()
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p.get();
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = self.p.add(self.data[i], v % self.p.get());
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    fn same_field(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(MackeyError::ModulusMismatch(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    /// `self * other`, checking modulus and shapes.
    pub fn checked_mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(MackeyError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p.get() as u64;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot += a * b as u64;
                }
                // keep the accumulator bounded
                if p > 1 << 15 {
                    acc.iter_mut().for_each(|x| *x %= p);
                }
            }
            for (c, a) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = (a % p) as u32;
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on modulus or shape mismatch.
    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        self.checked_mul(other).expect("matrix product")
    }

    pub fn checked_add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MackeyError::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = self.p.add(*a, b);
        }
        Ok(out)
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        self.checked_add(other).expect("matrix sum")
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        self.add(&other.scale(self.p.get() - 1))
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let c = c % self.p.get();
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.p.mul(*a, c);
        }
        out
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let p = self.p.get() as u64;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for (a, b) in self.row(r).iter().zip(v) {
                    acc = (acc + *a as u64 * *b as u64) % p;
                }
                acc as u32
            })
            .collect()
    }

    /// Stacks rows of `self` above rows of `other`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> FpMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        FpMatrix {
            p: self.p,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row.iter().map(|x| x % self.p.get()));
        self.rows += 1;
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        Rref {
            reduced: m,
            pivots,
            rank,
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    self.data.swap(pr * cols + k, r * cols + k);
                }
            }
            let inv = p.inv(self.data[r * cols + c]);
            if inv != 1 {
                for k in c..cols {
                    let i = r * cols + k;
                    self.data[i] = p.mul(self.data[i], inv);
                }
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [u32]| {
                let f = row[c];
                if f == 0 {
                    return;
                }
                if p.get() == 2 {
                    for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                        *x ^= y;
                    }
                } else {
                    let nf = p.neg(f);
                    for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                        if y != 0 {
                            *x = p.add(*x, p.mul(nf, y));
                        }
                    }
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Nonzero rows of the RREF: the canonical basis of the row space.
    pub fn row_space(&self) -> FpMatrix {
        let Rref { reduced, rank, .. } = self.rref();
        reduced.select_rows(&(0..rank).collect::<Vec<_>>())
    }

    /// Canonical basis (as rows) of the image of the map `self`.
    pub fn image_basis(&self) -> FpMatrix {
        self.transpose().row_space()
    }

    /// Rows form a basis of `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> FpMatrix {
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = FpMatrix::zeros(p, free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis.data[k * self.cols + f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = reduced.get(i, f);
                basis.data[k * self.cols + pc] = p.neg(v);
            }
        }
        // canonical form: RREF of the kernel
        basis.row_space()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    /// Solves `self * x = b`, returning the solution with all free variables zero.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMatrix::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols]
                .copy_from_slice(self.row(r));
            aug.data[r * (self.cols + 1) + self.cols] = b[r] % self.p.get();
        }
        let Rref {
            reduced, pivots, ..
        } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = reduced.get(i, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for r in 0..n {
            aug.data[r * 2 * n..r * 2 * n + n].copy_from_slice(self.row(r));
            aug.data[r * 2 * n + n + r] = 1;
        }
        let Rref {
            reduced, pivots, ..
        } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(FpMatrix::from_fn(self.p, n, n, |r, c| {
            reduced.get(r, n + c)
        }))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, other.p);
        let mut m = FpMatrix::zeros(self.p, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c));
            }
        }
        m
    }
}

/// Canonical basis of the span of the given vectors in F_p^n.
pub fn span(p: Prime, n: usize, vectors: &[Vec<u32>]) -> FpMatrix {
    let mut m = FpMatrix::zeros(p, 0, n);
    for v in vectors {
        m.push_row(v);
    }
    m.row_space()
}

/// Canonical basis of the intersection of two row spaces.
pub fn intersect(a: &FpMatrix, b: &FpMatrix) -> FpMatrix {
    assert_eq!(a.cols(), b.cols());
    let p = a.prime();
    let n = a.cols();
    // x in row(a) ∩ row(b)  <=>  x = u·A = w·B; kernel of [A^T | -B^T]
    let stacked = a.vstack(&b.scale(p.get() - 1));
    let k = stacked.transpose().kernel_basis();
    let mut vecs = Vec::with_capacity(k.rows());
    for r in 0..k.rows() {
        let coeffs = &k.row(r)[..a.rows()];
        let mut v = vec![0u32; n];
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, x) in v.iter_mut().enumerate() {
                *x = p.add(*x, p.mul(c, a.get(i, j)));
            }
        }
        vecs.push(v);
    }
    span(p, n, &vecs)
}

/// Outcome of an exactness check for `A -f-> B -g-> C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExactVerdict {
    pub exact: bool,
    pub composite_zero: bool,
    pub dim_image: usize,
    pub dim_kernel: usize,
}

/// Checks whether `im f = ker g` inside the middle space.
pub fn check_exact(f: &FpMatrix, g: &FpMatrix) -> Result<ExactVerdict> {
    if f.prime() != g.prime() {
        return Err(MackeyError::ModulusMismatch(f.p(), g.p()));
    }
    if g.cols() != f.rows() {
        return Err(MackeyError::Shape(format!(
            "f has codomain of dim {} but g has domain of dim {}",
            f.rows(),
            g.cols()
        )));
    }
    let composite_zero = g.mul(f).is_zero();
    let dim_image = f.rank();
    let dim_kernel = g.cols() - g.rank();
    Ok(ExactVerdict {
        exact: composite_zero && dim_image == dim_kernel,
        composite_zero,
        dim_image,
        dim_kernel,
    })
}

/// A subquotient `S/T` of F_p^n with `T ⊆ S`, together with a canonical
/// basis of coset representatives.
///
/// The representative space `W` is the unique complement of `T` in `S` whose
/// vectors vanish on the pivot columns of `T`'s RREF.
#[derive(Clone, Debug)]
pub struct FpSubquotient {
    ambient_dim: usize,
    sub: FpMatrix,
    quot: FpMatrix,
    quot_pivots: Vec<usize>,
    reps: FpMatrix,
    rep_pivots: Vec<usize>,
}

impl FpSubquotient {
    /// Builds `S/T` from spanning sets (rows) of `S` and `T`.
    pub fn new(ambient_dim: usize, sub: &FpMatrix, quot: &FpMatrix) -> Result<Self> {
        if sub.cols() != ambient_dim || quot.cols() != ambient_dim {
            return Err(MackeyError::Shape(format!(
                "subquotient generators must have {ambient_dim} columns"
            )));
        }
        if sub.prime() != quot.prime() {
            return Err(MackeyError::ModulusMismatch(sub.p(), quot.p()));
        }
        let p = sub.prime();
        let Rref {
            reduced: tq,
            pivots: quot_pivots,
            rank: tr,
        } = quot.rref();
        let quot = tq.select_rows(&(0..tr).collect::<Vec<_>>());
        let s_basis = sub.row_space();
        // reduce rows of S against T
        let mut reduced_rows = FpMatrix::zeros(p, 0, ambient_dim);
        let mut buf = vec![0u32; ambient_dim];
        for r in 0..s_basis.rows() {
            buf.copy_from_slice(s_basis.row(r));
            clear_pivots(p, &mut buf, &quot, &quot_pivots);
            reduced_rows.push_row(&buf);
        }
        let Rref {
            reduced: w,
            pivots: rep_pivots,
            rank: wr,
        } = reduced_rows.rref();
        let reps = w.select_rows(&(0..wr).collect::<Vec<_>>());
        if s_basis.rows() != wr + tr {
            return Err(MackeyError::Containment(
                "quotient space is not contained in the subspace".into(),
            ));
        }
        // every T row must lie in S
        let sq = Self {
            ambient_dim,
            sub: s_basis,
            quot,
            quot_pivots,
            reps,
            rep_pivots,
        };
        for r in 0..sq.quot.rows() {
            if !sq.contains(sq.quot.row(r)) {
                return Err(MackeyError::Containment(
                    "quotient space is not contained in the subspace".into(),
                ));
            }
        }
        Ok(sq)
    }

    /// The whole space F_p^n modulo nothing.
    pub fn full(p: Prime, n: usize) -> Self {
        Self::new(n, &FpMatrix::identity(p, n), &FpMatrix::zeros(p, 0, n)).expect("full space")
    }

    /// A subspace, viewed as a subquotient with trivial denominator.
    pub fn subspace(sub: &FpMatrix) -> Self {
        Self::new(
            sub.cols(),
            sub,
            &FpMatrix::zeros(sub.prime(), 0, sub.cols()),
        )
        .expect("subspace")
    }

    /// `F_p^n / T`.
    pub fn quotient(quot: &FpMatrix) -> Result<Self> {
        Self::new(
            quot.cols(),
            &FpMatrix::identity(quot.prime(), quot.cols()),
            quot,
        )
    }

    pub fn prime(&self) -> Prime {
        self.sub.prime()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.reps.rows()
    }

    /// Canonical basis of `S`.
    pub fn sub_basis(&self) -> &FpMatrix {
        &self.sub
    }

    /// Canonical basis of `T`.
    pub fn quot_basis(&self) -> &FpMatrix {
        &self.quot
    }

    /// Coset representatives, one row per basis vector of `S/T`.
    pub fn reps(&self) -> &FpMatrix {
        &self.reps
    }

    /// Whether `v` lies in `S`.
    pub fn contains(&self, v: &[u32]) -> bool {
        self.try_reduce(v).is_some()
    }

    /// Whether `v` lies in `T`.
    pub fn is_trivial_class(&self, v: &[u32]) -> bool {
        self.try_reduce(v)
            .is_some_and(|c| c.iter().all(|&x| x == 0))
    }

    fn try_reduce(&self, v: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(v.len(), self.ambient_dim);
        let p = self.prime();
        let mut buf = v.to_vec();
        clear_pivots(p, &mut buf, &self.quot, &self.quot_pivots);
        let mut coords = vec![0u32; self.reps.rows()];
        for (i, &c) in self.rep_pivots.iter().enumerate() {
            let f = buf[c];
            if f == 0 {
                continue;
            }
            coords[i] = f;
            let nf = p.neg(f);
            for (x, &y) in buf.iter_mut().zip(self.reps.row(i)) {
                if y != 0 {
                    *x = p.add(*x, p.mul(nf, y));
                }
            }
        }
        buf.iter().all(|&x| x == 0).then_some(coords)
    }

    /// Coordinates of the class of `v ∈ S` in the representative basis.
    pub fn reduce(&self, v: &[u32]) -> Result<Vec<u32>> {
        self.try_reduce(v)
            .ok_or_else(|| MackeyError::Containment("vector does not lie in the subspace".into()))
    }

    /// The representative of a class given by coordinates.
    pub fn lift(&self, coords: &[u32]) -> Vec<u32> {
        assert_eq!(coords.len(), self.dim());
        let p = self.prime();
        let mut v = vec![0u32; self.ambient_dim];
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(self.reps.row(i)) {
                *x = p.add(*x, p.mul(c, y));
            }
        }
        v
    }

    /// The map `self -> target` induced by an ambient-level linear map.
    ///
    /// Fails unless `amb` maps `S` into `S'` and `T` into `T'`.
    pub fn induced_map(&self, target: &FpSubquotient, amb: &FpMatrix) -> Result<FpMatrix> {
        if amb.cols() != self.ambient_dim || amb.rows() != target.ambient_dim {
            return Err(MackeyError::Shape(format!(
                "ambient map is {}x{}, expected {}x{}",
                amb.rows(),
                amb.cols(),
                target.ambient_dim,
                self.ambient_dim
            )));
        }
        for r in 0..self.quot.rows() {
            if !target.is_trivial_class(&amb.apply(self.quot.row(r))) {
                return Err(MackeyError::Containment(
                    "map does not send the denominator into the target denominator".into(),
                ));
            }
        }
        let mut cols = Vec::with_capacity(self.dim());
        for r in 0..self.dim() {
            cols.push(target.reduce(&amb.apply(self.reps.row(r)))?);
        }
        Ok(FpMatrix::from_columns(self.prime(), target.dim(), &cols))
    }
}

fn clear_pivots(p: Prime, v: &mut [u32], basis: &FpMatrix, pivots: &[usize]) {
    for (i, &c) in pivots.iter().enumerate() {
        let f = v[c];
        if f == 0 {
            continue;
        }
        let nf = p.neg(f);
        for (x, &y) in v.iter_mut().zip(basis.row(i)) {
            if y != 0 {
                *x = p.add(*x, p.mul(nf, y));
            }
        }
    }
}
