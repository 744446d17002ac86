//! Exact linear algebra over `F_{p^m}` for `σ^k`-linear maps.
//!
//! A [`TwistedMap`] with matrix `A` and twist `k` is `x ↦ A · x^{(σ^k)}` on
//! column vectors, where the twist acts entrywise. Subspaces are kept in
//! reduced row-echelon form so that equal subspaces have equal bases.

use std::fmt;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gram matrix is singular")]
    SingularGram,
    #[error("gram matrix is not alternating")]
    NotAlternating,
    #[error("linear system is inconsistent")]
    Inconsistent,
}

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows_rendered()).finish()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered = self.to_rows_rendered();
        let width = rendered
            .iter()
            .flatten()
            .map(|s| s.len())
            .max()
            .unwrap_or(1);
        for row in rendered {
            let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "[ {} ]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = ctx.one();
        }
        m
    }

    pub fn from_rows(ctx: &FieldCtx, rows: &[Vec<FieldElem>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_with_cols(ctx, rows, cols)
    }

    /// Same as [`Matrix::from_rows`], keeping the column count for empty input.
    pub fn from_rows_with_cols(ctx: &FieldCtx, rows: &[Vec<FieldElem>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix {
            ctx: ctx.clone(),
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(ctx: &FieldCtx, rows: usize, columns: &[Vec<FieldElem>]) -> Self {
        let mut m = Self::zeros(ctx, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    /// Matrix of integers reduced into the prime field.
    pub fn from_ints(ctx: &FieldCtx, rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<FieldElem>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| ctx.from_int(x)).collect())
            .collect();
        Self::from_rows(ctx, &rows)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows_rendered(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| self.ctx.render(x)).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Entrywise `σ^k`.
    pub fn twist(&self, k: i64) -> Matrix {
        let data = self
            .data
            .iter()
            .map(|&x| self.ctx.frobenius(x, k))
            .collect();
        Matrix {
            data,
            ..self.clone()
        }
    }

    pub fn scale(&self, c: FieldElem) -> Matrix {
        let data = self.data.iter().map(|&x| self.ctx.mul(x, c)).collect();
        Matrix {
            data,
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|&x| self.ctx.neg(x)).collect();
        Matrix {
            data,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.ctx.add(a, b))
            .collect();
        Matrix {
            data,
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let ctx = &self.ctx;
        let mut out = Matrix::zeros(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = ctx.mul_add(a, other[(k, j)], out.data[idx]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.ctx.zero(), |acc, (&a, &b)| self.ctx.mul_add(a, b, acc))
            })
            .collect()
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_block(&self, start: usize, end: usize) -> Matrix {
        let mut m = Matrix::zeros(&self.ctx, self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                m[(i, j - start)] = self[(i, j)];
            }
        }
        m
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> Matrix {
        let rows: Vec<Vec<FieldElem>> = (start..end).map(|i| self.row(i).to_vec()).collect();
        Matrix::from_rows_with_cols(&self.ctx, &rows, self.cols)
    }

    /// Reduced row-echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let ctx = &self.ctx;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = ctx.inv(m[(r, c)]).expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = ctx.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                let neg = ctx.neg(factor);
                for j in c..m.cols {
                    m.data[i * m.cols + j] =
                        ctx.mul_add(neg, m.data[r * m.cols + j], m.data[i * m.cols + j]);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}` as rows, in reduced echelon form.
    pub fn null_space(&self) -> Matrix {
        let ctx = &self.ctx;
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![ctx.zero(); self.cols];
            v[free] = ctx.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(r[(row, free)]);
            }
            basis.push(v);
        }
        let m = Matrix::from_rows_with_cols(ctx, &basis, self.cols);
        echelon_rows(&m)
    }

    /// Some solution `x` of `A x = b`.
    pub fn solve(&self, b: &[FieldElem]) -> Result<Vec<FieldElem>, LinAlgError> {
        if b.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Matrix::zeros(&self.ctx, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(LinAlgError::Inconsistent);
        }
        let mut x = vec![self.ctx.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)];
        }
        Ok(x)
    }

    /// Whether the columns are linearly independent.
    pub fn has_independent_columns(&self) -> bool {
        self.rank() == self.cols
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.data[i * self.cols + j]
    }
}

fn echelon_rows(m: &Matrix) -> Matrix {
    let (r, pivots) = m.rref();
    r.row_block(0, pivots.len())
}

pub fn dot(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    a.iter()
        .zip(b)
        .fold(ctx.zero(), |acc, (&x, &y)| ctx.mul_add(x, y, acc))
}

pub fn twist_vec(ctx: &FieldCtx, v: &[FieldElem], k: i64) -> Vec<FieldElem> {
    v.iter().map(|&x| ctx.frobenius(x, k)).collect()
}

/// A subspace of `k^n` held by its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ctx: &FieldCtx, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(ctx, 0, ambient),
        }
    }

    pub fn full(ctx: &FieldCtx, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ctx, ambient),
        }
    }

    pub fn span(ctx: &FieldCtx, ambient: usize, vectors: &[Vec<FieldElem>]) -> Self {
        let m = Matrix::from_rows_with_cols(ctx, vectors, ambient);
        Subspace {
            ambient,
            basis: echelon_rows(&m),
        }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        Subspace {
            ambient: m.cols(),
            basis: echelon_rows(m),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.basis.ctx()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Echelon basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<FieldElem>> {
        self.basis.to_rows()
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        let mut rows = self.basis.to_rows();
        rows.push(v.to_vec());
        Matrix::from_rows_with_cols(self.ctx(), &rows, self.ambient).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.to_rows();
        rows.extend(other.basis.to_rows());
        Subspace::span(self.ctx(), self.ambient, &rows)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x ∈ U ∩ W iff x annihilated by both annihilators.
        let mut rows = self.annihilator().to_rows();
        rows.extend(other.annihilator().to_rows());
        let m = Matrix::from_rows_with_cols(self.ctx(), &rows, self.ambient);
        Subspace::row_space(&m.null_space())
    }

    /// Rows spanning `{a : a · w = 0 for all w}`.
    pub fn annihilator(&self) -> Matrix {
        self.basis.null_space()
    }

    /// Entrywise `σ^k` applied to the subspace.
    pub fn twist(&self, k: i64) -> Subspace {
        Subspace::row_space(&self.basis.twist(k))
    }

    /// Whether the form `gram` vanishes identically on the subspace.
    pub fn is_isotropic(&self, gram: &Matrix) -> bool {
        let b = &self.basis;
        b.mul(gram).mul(&b.transpose()).is_zero()
    }
}

/// Indices of a maximal linearly independent subset, scanning in order and
/// keeping each vector that raises the rank.
pub fn independent_subset(
    ctx: &FieldCtx,
    ambient: usize,
    vectors: &[Vec<FieldElem>],
) -> Vec<usize> {
    let mut kept: Vec<Vec<FieldElem>> = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        kept.push(v.clone());
        if Matrix::from_rows_with_cols(ctx, &kept, ambient).rank() == kept.len() {
            idx.push(i);
        } else {
            kept.pop();
        }
    }
    idx
}

/// `x ↦ A · x^{(σ^twist)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedMap {
    pub matrix: Matrix,
    pub twist: i64,
}

impl TwistedMap {
    pub fn new(matrix: Matrix, twist: i64) -> Self {
        TwistedMap { matrix, twist }
    }

    pub fn apply(&self, x: &[FieldElem]) -> Vec<FieldElem> {
        let ctx = self.matrix.ctx();
        self.matrix.mul_vec(&twist_vec(ctx, x, self.twist))
    }

    /// Matrix of `self ∘ other`.
    pub fn compose(&self, other: &TwistedMap) -> TwistedMap {
        TwistedMap {
            matrix: self.matrix.mul(&other.matrix.twist(self.twist)),
            twist: self.twist + other.twist,
        }
    }
}

/// `{x : A x^{(σ^k)} = 0}`, the `σ^{-k}` twist of the linear null space.
pub fn twisted_kernel(f: &TwistedMap) -> Subspace {
    Subspace::row_space(&f.matrix.null_space()).twist(-f.twist)
}

pub fn twisted_image(f: &TwistedMap, w: &Subspace) -> Result<Subspace, LinAlgError> {
    if w.ambient() != f.matrix.cols() {
        return Err(LinAlgError::DimensionMismatch {
            expected: f.matrix.cols(),
            got: w.ambient(),
        });
    }
    let images: Vec<Vec<FieldElem>> = w.basis_vectors().iter().map(|b| f.apply(b)).collect();
    Ok(Subspace::span(f.matrix.ctx(), f.matrix.rows(), &images))
}

/// Image of the whole source space.
pub fn twisted_image_full(f: &TwistedMap) -> Subspace {
    let cols = f.matrix.columns();
    Subspace::span(f.matrix.ctx(), f.matrix.rows(), &cols)
}

/// `{x : A x^{(σ^k)} ∈ W}`.
pub fn twisted_preimage(f: &TwistedMap, w: &Subspace) -> Result<Subspace, LinAlgError> {
    if w.ambient() != f.matrix.rows() {
        return Err(LinAlgError::DimensionMismatch {
            expected: f.matrix.rows(),
            got: w.ambient(),
        });
    }
    let ann = w.annihilator();
    let m = ann.mul(&f.matrix);
    let linear = if m.rows() == 0 {
        Subspace::full(f.matrix.ctx(), f.matrix.cols())
    } else {
        Subspace::row_space(&m.null_space())
    };
    Ok(linear.twist(-f.twist))
}

/// `{x : b(x, w) = 0 for all w ∈ W}` for the form `b(x, y) = xᵀ G y`.
pub fn symplectic_perp(w: &Subspace, gram: &Matrix) -> Result<Subspace, LinAlgError> {
    check_gram(gram)?;
    if w.ambient() != gram.rows() {
        return Err(LinAlgError::DimensionMismatch {
            expected: gram.rows(),
            got: w.ambient(),
        });
    }
    let ctx = gram.ctx();
    if w.dim() == 0 {
        return Ok(Subspace::full(ctx, w.ambient()));
    }
    // rows (G w)ᵀ
    let gw = gram.mul(&w.basis().transpose()).transpose();
    Ok(Subspace::row_space(&gw.null_space()))
}

/// Checks that `gram` is square, alternating and invertible.
pub fn check_gram(gram: &Matrix) -> Result<(), LinAlgError> {
    if gram.rows() != gram.cols() {
        return Err(LinAlgError::DimensionMismatch {
            expected: gram.rows(),
            got: gram.cols(),
        });
    }
    let ctx = gram.ctx();
    for i in 0..gram.rows() {
        if !gram[(i, i)].is_zero() {
            return Err(LinAlgError::NotAlternating);
        }
        for j in 0..i {
            if gram[(i, j)] != ctx.neg(gram[(j, i)]) {
                return Err(LinAlgError::NotAlternating);
            }
        }
    }
    if gram.rank() != gram.rows() {
        return Err(LinAlgError::SingularGram);
    }
    Ok(())
}

/// The form `(0 J; -J 0)` on `k^{2g}`, `J` the `g×g` anti-diagonal of ones.
pub fn standard_gram(ctx: &FieldCtx, g: usize) -> Matrix {
    let mut m = Matrix::zeros(ctx, 2 * g, 2 * g);
    for i in 0..g {
        m[(i, 2 * g - 1 - i)] = ctx.one();
        m[(2 * g - 1 - i, i)] = ctx.neg(ctx.one());
    }
    m
}
