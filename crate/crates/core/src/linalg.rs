//! Dense linear algebra over a finite field.
//!
//! Vectors are row vectors. A [`Matrix`] is a dense row-major array of
//! elements tied to a [`Field`] context. A [`Subspace`] of `F_q^n` is stored
//! through its unique reduced row echelon basis, which makes equality of
//! subspaces equality of matrices.
//!
//! Subspace enumeration is ordered: pivot column patterns run in
//! lexicographic order, and for a fixed pattern the free entries run through
//! all assignments in counting order with the last free cell (row-major)
//! varying fastest. Several downstream fixtures depend on this order, so it
//! is part of the contract of [`enumerate_subspaces`], not an accident of
//! implementation.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gf::{Fe, Field, GfError};

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix rows must have equal length")]
    RaggedRows,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("matrix is not square")]
    NotSquare,
    #[error("enumeration of {count} subspaces exceeds the cap of {cap}")]
    EnumerationTooLarge { count: BigUint, cap: u64 },
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("vector lies outside the subspace")]
    NotInSpan,
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Dense row-major matrix over a fixed field.
#[derive(Clone)]
pub struct Matrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    entries: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{} over q={})", self.rows, self.cols, self.field.q())
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field.q() == other.field.q()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
    }
}

impl Eq for Matrix {}

impl PartialOrd for Matrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Matrix {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field.q(), self.rows, self.cols, &self.entries).cmp(&(
            other.field.q(),
            other.rows,
            other.cols,
            &other.entries,
        ))
    }
}

impl std::hash::Hash for Matrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.q().hash(state);
        self.rows.hash(state);
        self.cols.hash(state);
        self.entries.hash(state);
    }
}

impl Matrix {
    pub fn zero(field: Arc<Field>, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, entries: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    /// Builds a matrix from explicit rows, which must have equal lengths.
    pub fn from_rows(field: Arc<Field>, rows: Vec<Vec<Fe>>) -> Result<Matrix, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::RaggedRows);
        }
        for row in &rows {
            for &e in row {
                field.element(e.index())?;
            }
        }
        let n = rows.len();
        let entries = rows.into_iter().flatten().collect();
        Ok(Matrix { field, rows: n, cols, entries })
    }

    /// Parses the plain text format: one row per line, entries as
    /// space-separated element indices.
    pub fn from_text(field: Arc<Field>, text: &str) -> Result<Matrix, LinalgError> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<Fe> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| LinalgError::Parse(format!("bad element index {t:?}")))
                        .and_then(|i| field.element(i).map_err(LinalgError::Field))
                })
                .collect::<Result<_, _>>()?;
            rows.push(row);
        }
        Matrix::from_rows(field, rows)
    }

    /// Renders the plain text format accepted by [`Matrix::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let line = self.row(r).iter().map(|e| e.index().to_string()).join(" ");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// The submatrix keeping the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zero(self.field.clone(), self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.field.q() != other.field.q() {
            return Err(LinalgError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zero(self.field.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let t = f.mul(a, other.get(k, c));
                    out.set(r, c, f.add(out.get(r, c), t));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_left(&self, v: &[Fe]) -> Result<Vec<Fe>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "vector of length {} times {}x{}",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                let t = f.mul(a, self.get(r, c));
                out[c] = f.add(out[c], t);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let f = m.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut pr = None;
            for i in r..m.rows {
                if !m.get(i, c).is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(r, j), m.get(pr, j));
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                m.set(r, j, f.mul(inv, m.get(r, j)));
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c);
                for j in 0..m.cols {
                    let t = f.mul(factor, m.get(r, j));
                    let v = f.sub(m.get(i, j), t);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Determinant of a square matrix via elimination with swap sign.
    pub fn det(&self) -> Result<Fe, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Fe::ONE;
        for c in 0..n {
            let mut pr = None;
            for i in c..n {
                if !m.get(i, c).is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { return Ok(Fe::ZERO) };
            if pr != c {
                for j in 0..n {
                    let (a, b) = (m.get(c, j), m.get(pr, j));
                    m.set(c, j, b);
                    m.set(pr, j, a);
                }
                det = f.neg(det);
            }
            det = f.mul(det, m.get(c, c));
            let inv = f.inv(m.get(c, c)).expect("pivot is nonzero");
            for i in (c + 1)..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = f.mul(m.get(i, c), inv);
                for j in c..n {
                    let t = f.mul(factor, m.get(c, j));
                    let v = f.sub(m.get(i, j), t);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Result<Option<Matrix>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.field.clone(), n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, Fe::ONE);
        }
        let (r, pivots) = aug.rref();
        if pivots != (0..n).collect::<Vec<_>>() {
            return Ok(None);
        }
        let mut inv = Matrix::zero(self.field.clone(), n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Ok(Some(inv))
    }

    /// Basis of the right kernel `{x : M x = 0}` as a subspace of `F_q^cols`.
    pub fn kernel(&self) -> Subspace {
        let f = self.field.clone();
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![Fe::ZERO; self.cols];
            v[fc] = Fe::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, fc));
            }
            rows.push(v);
        }
        let m = Matrix::from_rows(f, rows).expect("kernel rows have equal length");
        Subspace::from_rows(&m)
    }
}

/// A subspace of `F_q^n`, stored as its reduced row echelon basis.
///
/// The basis matrix always has full row rank, so two subspaces are equal
/// exactly when their basis matrices are.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The row space of `m`, canonicalized.
    pub fn from_rows(m: &Matrix) -> Subspace {
        let (r, pivots) = m.rref();
        let k = pivots.len();
        let mut basis = Matrix::zero(m.field().clone(), k, m.cols());
        for i in 0..k {
            for j in 0..m.cols() {
                basis.set(i, j, r.get(i, j));
            }
        }
        Subspace { basis, pivots }
    }

    pub fn field(&self) -> &Arc<Field> {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the remainder is zero exactly when
    /// `v` lies in the subspace.
    pub fn contains_vector(&self, v: &[Fe]) -> bool {
        let f = self.basis.field();
        let mut w = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            if w[pc].is_zero() {
                continue;
            }
            let factor = w[pc];
            for j in 0..w.len() {
                let t = f.mul(factor, self.basis.get(r, j));
                w[j] = f.sub(w[j], t);
            }
        }
        w.iter().all(|e| e.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|r| self.contains_vector(other.basis.row(r)))
    }

    /// All `q^dim` vectors of the subspace, in counting order over the
    /// basis coefficients with the last coefficient varying fastest.
    pub fn vectors(&self) -> impl Iterator<Item = Vec<Fe>> + '_ {
        let f = self.basis.field().clone();
        let q = f.q() as u64;
        let k = self.dim();
        let total = q.pow(k as u32);
        (0..total).map(move |idx| {
            let mut v = vec![Fe::ZERO; self.ambient_dim()];
            let mut rem = idx;
            for r in (0..k).rev() {
                let c = Fe((rem % q) as u32);
                rem /= q;
                if c.is_zero() {
                    continue;
                }
                for j in 0..v.len() {
                    let t = f.mul(c, self.basis.get(r, j));
                    v[j] = f.add(v[j], t);
                }
            }
            v
        })
    }

    /// All `j`-dimensional subspaces of this subspace, ordered by the
    /// enumeration of coefficient-space subspaces.
    pub fn subspaces(&self, j: usize) -> Result<Vec<Subspace>, LinalgError> {
        let f = self.basis.field().clone();
        let inner = enumerate_subspaces(&f, self.dim(), j, u64::MAX)?;
        let mut out = Vec::with_capacity(inner.len());
        for s in inner {
            let rows: Vec<Vec<Fe>> = (0..s.dim())
                .map(|r| self.basis.apply_left(s.basis.row(r)).expect("shapes agree"))
                .collect();
            let m = Matrix::from_rows(f.clone(), rows)?;
            out.push(Subspace::from_rows(&m));
        }
        Ok(out)
    }
}

/// The Gaussian binomial coefficient: the number of `k`-dimensional
/// subspaces of an `n`-dimensional space over `F_q`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    let (quot, rem) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(rem.is_zero());
    quot
}

/// Enumerates every `k`-dimensional subspace of `F_q^n` in canonical order:
/// pivot patterns lexicographically, free entries in counting order with the
/// last free cell varying fastest. Fails when the count exceeds `cap`.
pub fn enumerate_subspaces(
    field: &Arc<Field>,
    n: usize,
    k: usize,
    cap: u64,
) -> Result<Vec<Subspace>, LinalgError> {
    let count = gaussian_binomial(n as u64, k as u64, field.q() as u64);
    if count > BigUint::from(cap) {
        return Err(LinalgError::EnumerationTooLarge { count, cap });
    }
    if k > n {
        return Ok(Vec::new());
    }
    let q = field.q() as u64;
    let mut out = Vec::new();
    for pivots in (0..n).combinations(k) {
        // Free cells are the row-major positions right of each pivot that
        // are not themselves pivot columns.
        let mut free = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            for c in (p + 1)..n {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let m = free.len() as u32;
        let total = q.pow(m);
        for fill in 0..total {
            let mut basis = Matrix::zero(field.clone(), k, n);
            for (r, &p) in pivots.iter().enumerate() {
                basis.set(r, p, Fe::ONE);
            }
            let mut rem = fill;
            for &(r, c) in free.iter().rev() {
                basis.set(r, c, Fe((rem % q) as u32));
                rem /= q;
            }
            out.push(Subspace { basis, pivots: pivots.clone() });
        }
    }
    Ok(out)
}

/// Scales `v` so that its first nonzero coordinate is one.
pub fn normalize_projective(field: &Field, v: &mut [Fe]) -> Result<(), LinalgError> {
    let lead = v.iter().position(|e| !e.is_zero()).ok_or(LinalgError::ZeroVector)?;
    let inv = field.inv(v[lead])?;
    if inv != Fe::ONE {
        for e in v.iter_mut() {
            *e = field.mul(inv, *e);
        }
    }
    Ok(())
}

/// Grassmann coordinates of a subspace: the `k x k` minors of its canonical
/// basis over all column `k`-subsets in lexicographic order. The first
/// nonzero coordinate sits at the pivot subset and equals one.
pub fn plucker(s: &Subspace) -> Vec<Fe> {
    let k = s.dim();
    let n = s.ambient_dim();
    let mut out = Vec::new();
    for cols in (0..n).combinations(k) {
        let minor = s.basis().select_columns(&cols);
        out.push(minor.det().expect("minor is square"));
    }
    out
}

/// Dimension of the span of a list of vectors.
pub fn span_dimension(field: &Arc<Field>, points: &[Vec<Fe>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let m = Matrix::from_rows(field.clone(), points.to_vec()).expect("rows agree");
    m.rank()
}
