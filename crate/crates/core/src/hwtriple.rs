//! Hasse–Witt triples `(Q, Φ, Ψ)` of complete intersection curves.
//!
//! `Q = T(C)_{-d}` with `d = Σ d_i`. Coordinates on `Q` are taken in an
//! echelon basis `q_1..q_g`; for plane curves this is the monomial basis
//! `[m_i^{-1} X^{-1}]`, `m_i` running over the degree-`(d-3)` monomials.
//! Matrices act on column vectors: `Φ(x) = A_phi · x^{(σ)}`.

use std::fmt;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem};
use crate::poly::{t_dimension, t_multiply, GradedPoly, MonomialBasis, PolyError, TClass};
use crate::semilinear::{Matrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HwError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("p = {p} divides the degree {degree}")]
    PDividesDegree { p: u64, degree: u32 },
    #[error("curve is singular")]
    Singular,
    #[error("dim U = {0}, expected 1: curve fails smoothness necessary condition")]
    BadU(usize),
    #[error("dim Q = {got} differs from the genus {genus}")]
    DimQ { got: usize, genus: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<PolyError> for HwError {
    fn from(e: PolyError) -> Self {
        HwError::Internal(e.to_string())
    }
}

/// `C = Z(f_1, ..., f_{n-1}) ⊂ P^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCI {
    ctx: FieldCtx,
    n: usize,
    polys: Vec<GradedPoly>,
}

impl CurveCI {
    pub fn new(ctx: &FieldCtx, n: usize, polys: Vec<GradedPoly>) -> Result<Self, HwError> {
        if n < 2 {
            return Err(HwError::InvalidCurve(format!("ambient dimension {n} < 2")));
        }
        if polys.len() != n - 1 {
            return Err(HwError::InvalidCurve(format!(
                "expected {} equations in P^{n}, got {}",
                n - 1,
                polys.len()
            )));
        }
        for (i, f) in polys.iter().enumerate() {
            if f.ctx() != ctx {
                return Err(HwError::InvalidCurve(format!(
                    "f{} lives over another field",
                    i + 1
                )));
            }
            if f.nvars() != n + 1 {
                return Err(HwError::InvalidCurve(format!(
                    "f{} has {} variables, expected {}",
                    i + 1,
                    f.nvars(),
                    n + 1
                )));
            }
            if f.is_zero() {
                return Err(HwError::InvalidCurve(format!("f{} is zero", i + 1)));
            }
            if f.degree() < 2 {
                return Err(HwError::InvalidCurve(format!(
                    "f{} has degree {} < 2",
                    i + 1,
                    f.degree()
                )));
            }
            if u64::from(f.degree()) % ctx.p() == 0 {
                return Err(HwError::PDividesDegree {
                    p: ctx.p(),
                    degree: f.degree(),
                });
            }
        }
        if n == 2 && polys[0].degree() < 3 {
            return Err(HwError::InvalidCurve(format!(
                "plane curve of degree {} < 3",
                polys[0].degree()
            )));
        }
        Ok(CurveCI {
            ctx: ctx.clone(),
            n,
            polys,
        })
    }

    pub fn plane(f: GradedPoly) -> Result<Self, HwError> {
        let ctx = f.ctx().clone();
        Self::new(&ctx, 2, vec![f])
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    pub fn polys(&self) -> &[GradedPoly] {
        &self.polys
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(|f| f.degree()).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.polys.iter().map(|f| f.degree()).sum()
    }

    pub fn is_plane(&self) -> bool {
        self.n == 2
    }

    fn product(&self) -> Result<GradedPoly, HwError> {
        let mut acc = GradedPoly::constant(&self.ctx, self.nvars(), self.ctx.one());
        for f in &self.polys {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }
}

/// `1 + (∏ d_i)(Σ d_i - n - 1) / 2`; `(d-1)(d-2)/2` for plane curves.
pub fn genus(curve: &CurveCI) -> usize {
    let prod: i64 = curve.degrees().iter().map(|&d| i64::from(d)).product();
    let excess = i64::from(curve.total_degree()) - curve.n as i64 - 1;
    (1 + prod * excess / 2) as usize
}

/// Matrix of `t ↦ s·t` from `T_{src}` to `T_{src + deg s}`.
fn mult_map(s: &GradedPoly, src_degree: i64) -> Result<Matrix, HwError> {
    let ctx = s.ctx();
    let nvars = s.nvars();
    let src_dim = t_dimension(nvars, src_degree);
    let tgt_dim = t_dimension(nvars, src_degree + i64::from(s.degree()));
    let mut cols = Vec::with_capacity(src_dim);
    for i in 0..src_dim {
        let img = t_multiply(s, &TClass::basis_vector(ctx, nvars, src_degree, i))?;
        cols.push(img.coeffs().to_vec());
    }
    let mut m = Matrix::from_columns(ctx, tgt_dim, &cols);
    if src_dim == 0 {
        m = Matrix::zeros(ctx, tgt_dim, 0);
    }
    Ok(m)
}

/// Whether the partials of `f` generate all of `S_{3d-5}`; for `p ∤ d` this
/// holds iff the plane curve `f = 0` is smooth.
pub fn plane_smoothness_check(curve: &CurveCI) -> bool {
    if !curve.is_plane() {
        return false;
    }
    let f = &curve.polys[0];
    let d = i64::from(f.degree());
    let ctx = curve.ctx();
    let src = MonomialBasis::new(3, 2 * d - 4).expect("non-negative degree");
    let target = crate::poly::monomial_count(3, 3 * d - 5);
    let mut rows = Vec::with_capacity(3 * src.len());
    for j in 0..3 {
        let Ok(df) = f.partial_derivative(j) else {
            return false;
        };
        for m in src.iter() {
            let g = GradedPoly::monomial(ctx, m, ctx.one());
            rows.push(g.mul(&df).expect("compatible").coeffs().to_vec());
        }
    }
    Matrix::from_rows_with_cols(ctx, &rows, target).rank() == target
}

/// Echelon basis of `Q = T(C)_{-d}` inside `T(P)_{-d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBasis {
    nvars: usize,
    degree: i64,
    rows: Matrix,
    pivots: Vec<usize>,
}

impl QBasis {
    fn from_echelon(nvars: usize, degree: i64, rows: Matrix) -> Self {
        let (rows, pivots) = rows.rref();
        let rows = rows.row_block(0, pivots.len());
        QBasis {
            nvars,
            degree,
            rows,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.rows()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Basis vectors in `T(P)_{-d}` coordinates, one per row.
    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn class(&self, i: usize) -> TClass {
        TClass::from_coeffs(
            self.rows.ctx(),
            self.nvars,
            self.degree,
            self.rows.row(i).to_vec(),
        )
    }

    /// Coordinates of `t ∈ Q` in this basis.
    pub fn coords(&self, t: &TClass) -> Result<Vec<FieldElem>, HwError> {
        let ctx = self.rows.ctx();
        let x: Vec<FieldElem> = self.pivots.iter().map(|&c| t.coeffs()[c]).collect();
        let back = self.rows.transpose().mul_vec(&x);
        if back != t.coeffs() {
            return Err(HwError::Internal("class does not lie in T(C)".into()));
        }
        let _ = ctx;
        Ok(x)
    }
}

/// `Q = {t ∈ T(P)_{-d} : f_i·t = 0 for all i}`.
pub fn ci_q_basis(curve: &CurveCI) -> Result<QBasis, HwError> {
    let nvars = curve.nvars();
    let degree = -i64::from(curve.total_degree());
    let ctx = curve.ctx();
    let dim = t_dimension(nvars, degree);
    let mut constraints: Vec<Vec<FieldElem>> = Vec::new();
    for f in &curve.polys {
        constraints.extend(mult_map(f, degree)?.to_rows());
    }
    let kernel = if constraints.is_empty() {
        Matrix::identity(ctx, dim)
    } else {
        Matrix::from_rows_with_cols(ctx, &constraints, dim).null_space()
    };
    Ok(QBasis::from_echelon(nvars, degree, kernel))
}

fn checked_q_basis(curve: &CurveCI) -> Result<QBasis, HwError> {
    let q = ci_q_basis(curve)?;
    let g = genus(curve);
    if q.dim() != g {
        return Err(HwError::DimQ {
            got: q.dim(),
            genus: g,
        });
    }
    Ok(q)
}

/// Matrix of `Φ[A] = [(f_1···f_{n-1})^{p-1} · A^p]` on the basis of
/// [`ci_q_basis`].
pub fn hasse_witt_matrix(curve: &CurveCI) -> Result<Matrix, HwError> {
    if curve.is_plane() {
        return plane_hasse_witt(curve);
    }
    let q = checked_q_basis(curve)?;
    general_hasse_witt(curve, &q)
}

/// `A_ij` = coefficient of `m_j^p · X^{p-1} · m_i^{-1}` in `f^{p-1}`.
fn plane_hasse_witt(curve: &CurveCI) -> Result<Matrix, HwError> {
    let ctx = curve.ctx();
    let f = &curve.polys[0];
    let p = ctx.p() as u32;
    let d = i64::from(f.degree());
    let fp = f.pow(i64::from(p) - 1)?;
    let basis = MonomialBasis::new(3, d - 3)?;
    let g = basis.len();
    let mut a = Matrix::zeros(ctx, g, g);
    for i in 0..g {
        let mi = basis.get(i);
        for j in 0..g {
            let mj = basis.get(j);
            let exps: Option<Vec<u32>> = (0..3)
                .map(|k| (p * mj[k] + p - 1).checked_sub(mi[k]))
                .collect();
            if let Some(e) = exps {
                a[(i, j)] = fp.coeff_of(&e)?;
            }
        }
    }
    Ok(a)
}

fn general_hasse_witt(curve: &CurveCI, q: &QBasis) -> Result<Matrix, HwError> {
    let ctx = curve.ctx();
    let big = curve.product()?.pow(ctx.p() as i64 - 1)?;
    let mut cols = Vec::with_capacity(q.dim());
    for j in 0..q.dim() {
        let img = t_multiply(&big, &q.class(j).frobenius_power())?;
        cols.push(q.coords(&img)?);
    }
    Ok(Matrix::from_columns(ctx, q.dim(), &cols))
}

/// A generator `u = (u_ℓ)_ℓ` of the one-dimensional space `U`, with
/// `u_ℓ ∈ T(C)_{n+1-2d-d_ℓ}`; its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UGenerator {
    pub components: Vec<TClass>,
    /// `X^{(shift,...,shift)} · u_ℓ` is a polynomial for every `ℓ`.
    pub shift: u32,
}

impl UGenerator {
    /// `ũ_ℓ = X^{(shift,...,shift)} · u_ℓ`.
    pub fn shifted_polys(&self) -> Vec<GradedPoly> {
        self.components
            .iter()
            .map(|c| {
                c.to_shifted_poly(self.shift)
                    .expect("shift clears all poles")
            })
            .collect()
    }

    pub fn scale(&self, c: FieldElem) -> UGenerator {
        UGenerator {
            components: self.components.iter().map(|t| t.scale(c)).collect(),
            shift: self.shift,
        }
    }
}

/// Splits concatenated coordinates into classes of the given degrees.
fn split_classes(ctx: &FieldCtx, nvars: usize, degrees: &[i64], v: &[FieldElem]) -> Vec<TClass> {
    let mut out = Vec::with_capacity(degrees.len());
    let mut at = 0;
    for &deg in degrees {
        let dim = t_dimension(nvars, deg);
        out.push(TClass::from_coeffs(
            ctx,
            nvars,
            deg,
            v[at..at + dim].to_vec(),
        ));
        at += dim;
    }
    out
}

/// The kernel of `ξ ↦ (Σ_ℓ ∂f_ℓ/∂X_j · ξ_ℓ)_j` on `⊕_ℓ T(C)_{n+1-2d-d_ℓ}`.
pub fn u_generator(curve: &CurveCI) -> Result<UGenerator, HwError> {
    let ctx = curve.ctx();
    let nvars = curve.nvars();
    let n = curve.n as i64;
    let d = i64::from(curve.total_degree());
    let degrees: Vec<i64> = curve
        .degrees()
        .iter()
        .map(|&dl| n + 1 - 2 * d - i64::from(dl))
        .collect();
    let dims: Vec<usize> = degrees.iter().map(|&m| t_dimension(nvars, m)).collect();
    let total: usize = dims.iter().sum();
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    let mut offsets = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &dim in &dims {
        offsets.push(acc);
        acc += dim;
    }
    // f_i · ξ_ℓ = 0 keeps ξ_ℓ in T(C); automatic for plane curves.
    if !curve.is_plane() {
        for (l, &deg) in degrees.iter().enumerate() {
            for f in &curve.polys {
                for r in mult_map(f, deg)?.to_rows() {
                    let mut row = vec![ctx.zero(); total];
                    row[offsets[l]..offsets[l] + dims[l]].copy_from_slice(&r);
                    rows.push(row);
                }
            }
        }
    }
    for j in 0..nvars {
        let blocks: Vec<Matrix> = curve
            .polys
            .iter()
            .zip(&degrees)
            .map(|(f, &deg)| mult_map(&f.partial_derivative(j)?, deg))
            .collect::<Result<_, _>>()?;
        let tgt = blocks[0].rows();
        for r in 0..tgt {
            let mut row = vec![ctx.zero(); total];
            for (l, b) in blocks.iter().enumerate() {
                row[offsets[l]..offsets[l] + dims[l]].copy_from_slice(b.row(r));
            }
            rows.push(row);
        }
    }
    let kernel = Matrix::from_rows_with_cols(ctx, &rows, total).null_space();
    if kernel.rows() != 1 {
        return Err(HwError::BadU(kernel.rows()));
    }
    let mut v = kernel.row(0).to_vec();
    let lead = *v
        .iter()
        .find(|x| !x.is_zero())
        .expect("nonzero kernel vector");
    let inv = ctx.inv(lead).expect("nonzero");
    for x in &mut v {
        *x = ctx.mul(*x, inv);
    }
    let shift = if curve.is_plane() {
        (3 * d - 3) as u32
    } else {
        degrees
            .iter()
            .map(|&m| (-m - nvars as i64 + 1) as u32)
            .max()
            .unwrap_or(0)
    };
    Ok(UGenerator {
        components: split_classes(ctx, nvars, &degrees, &v),
        shift,
    })
}

/// Matrix of `Ψ` on `^τκ_1..^τκ_h`, columns in the dual basis of `Q^∨`.
pub fn psi_matrix(
    curve: &CurveCI,
    a_phi: &Matrix,
    kappa: &Matrix,
    u: &UGenerator,
) -> Result<Matrix, HwError> {
    let g = a_phi.rows();
    if kappa.rows() == 0 {
        return Ok(Matrix::zeros(curve.ctx(), g, 0));
    }
    if curve.is_plane() {
        plane_psi(curve, kappa, u)
    } else {
        let q = checked_q_basis(curve)?;
        general_psi(curve, &q, kappa, u)
    }
}

/// Solves `^t A_psi · B = κ · C` over the degree-`(2d-3)` monomials, where
/// row `j` of `B` is `m_j·u` and row `l` of `C` is `f^{p-2} · e_l^p` in
/// `T_{-2d}` coordinates.
fn plane_psi(curve: &CurveCI, kappa: &Matrix, u: &UGenerator) -> Result<Matrix, HwError> {
    let ctx = curve.ctx();
    let f = &curve.polys[0];
    let d = i64::from(f.degree());
    let p = ctx.p() as i64;
    let m_basis = MonomialBasis::new(3, d - 3)?;
    let g = m_basis.len();
    let u0 = &u.components[0];
    let b_rows: Vec<Vec<FieldElem>> = m_basis
        .iter()
        .map(|m| {
            t_multiply(&GradedPoly::monomial(ctx, m, ctx.one()), u0).map(|t| t.coeffs().to_vec())
        })
        .collect::<Result<_, _>>()?;
    let c_dim = t_dimension(3, -2 * d);
    let b = Matrix::from_rows_with_cols(ctx, &b_rows, c_dim);
    let fp2 = f.pow(p - 2)?;
    let c_classes: Vec<TClass> = (0..g)
        .map(|l| t_multiply(&fp2, &TClass::basis_vector(ctx, 3, -d, l).frobenius_power()))
        .collect::<Result<_, _>>()?;
    let c = Matrix::from_rows_with_cols(
        ctx,
        &c_classes
            .iter()
            .map(|t| t.coeffs().to_vec())
            .collect::<Vec<_>>(),
        c_dim,
    );
    let rhs = kappa.mul(&c);
    let partials: Vec<GradedPoly> = (0..3)
        .map(|j| f.partial_derivative(j))
        .collect::<Result<_, _>>()?;
    let bt = b.transpose();
    let mut cols = Vec::with_capacity(kappa.rows());
    for j in 0..kappa.rows() {
        let xi = TClass::from_coeffs(ctx, 3, -2 * d, rhs.row(j).to_vec());
        for df in &partials {
            if !t_multiply(df, &xi)?.is_zero() {
                return Err(HwError::Internal(
                    "∂f · f^{p-2} A^p does not vanish on Ker Φ".into(),
                ));
            }
        }
        let col = bt
            .solve(rhs.row(j))
            .map_err(|_| HwError::Internal("Ψ system ^tA·B = κ·C is inconsistent".into()))?;
        cols.push(col);
    }
    Ok(Matrix::from_columns(ctx, g, &cols))
}

fn general_psi(
    curve: &CurveCI,
    q: &QBasis,
    kappa: &Matrix,
    u: &UGenerator,
) -> Result<Matrix, HwError> {
    let ctx = curve.ctx();
    let p = ctx.p() as i64;
    let nvars = curve.nvars();
    // coefficient f_ℓ^{p-2} ∏_{i≠ℓ} f_i^{p-1} for each ℓ
    let mut weights = Vec::with_capacity(curve.polys.len());
    for l in 0..curve.polys.len() {
        let mut w = GradedPoly::constant(ctx, nvars, ctx.one());
        for (i, f) in curve.polys.iter().enumerate() {
            w = w.mul(&f.pow(if i == l { p - 2 } else { p - 1 })?)?;
        }
        weights.push(w);
    }
    let frob: Vec<TClass> = (0..q.dim()).map(|l| q.class(l).frobenius_power()).collect();
    let per_basis: Vec<Vec<TClass>> = frob
        .iter()
        .map(|a| {
            weights
                .iter()
                .map(|w| t_multiply(w, a))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let theta = Theta::new(curve, q, u)?;
    let mut cols = Vec::with_capacity(kappa.rows());
    for j in 0..kappa.rows() {
        let mut xi: Vec<TClass> = per_basis[0].iter().map(|t| t.scale(ctx.zero())).collect();
        for (l, comps) in per_basis.iter().enumerate() {
            let c = kappa[(j, l)];
            if c.is_zero() {
                continue;
            }
            for (x, t) in xi.iter_mut().zip(comps) {
                *x = x.add(&t.scale(c))?;
            }
        }
        for jj in 0..nvars {
            let mut sum: Option<TClass> = None;
            for (f, x) in curve.polys.iter().zip(&xi) {
                let term = t_multiply(&f.partial_derivative(jj)?, x)?;
                sum = Some(match sum {
                    None => term,
                    Some(s) => s.add(&term)?,
                });
            }
            if !sum.is_none_or(|s| s.is_zero()) {
                return Err(HwError::Internal("Ψ image violates the U relations".into()));
            }
        }
        cols.push(theta.apply(&xi)?);
    }
    Ok(Matrix::from_columns(ctx, q.dim(), &cols))
}

/// `θ: Q′ → Q^∨`, `g·u ↦ (⟨q_i, g·u⟩)_i = ([X^{-1}] g·q_i)_i`.
struct Theta {
    /// Column `k` is `g_k · u`, concatenated over components.
    gu: Matrix,
    /// `pairing[(i, k)] = [X^{-1}] g_k · q_i`.
    pairing: Matrix,
}

impl Theta {
    fn new(curve: &CurveCI, q: &QBasis, u: &UGenerator) -> Result<Self, HwError> {
        let ctx = curve.ctx();
        let nvars = curve.nvars();
        let deg = i64::from(curve.total_degree()) - nvars as i64;
        let gs = MonomialBasis::new(nvars, deg)?;
        let mut gu_cols = Vec::with_capacity(gs.len());
        let mut pairing = Matrix::zeros(ctx, q.dim(), gs.len());
        for (k, m) in gs.iter().enumerate() {
            let g = GradedPoly::monomial(ctx, m, ctx.one());
            let mut col = Vec::new();
            for c in &u.components {
                col.extend_from_slice(t_multiply(&g, c)?.coeffs());
            }
            gu_cols.push(col);
            for i in 0..q.dim() {
                pairing[(i, k)] = crate::poly::residue_pairing(&g, &q.class(i))?;
            }
        }
        let rows: usize = u
            .components
            .iter()
            .map(|c| t_dimension(nvars, c.degree() + deg))
            .sum();
        if pairing.rank() != q.dim() {
            return Err(HwError::Internal(
                "residue pairing between Q and Q′ is not perfect".into(),
            ));
        }
        Ok(Theta {
            gu: Matrix::from_columns(ctx, rows, &gu_cols),
            pairing,
        })
    }

    fn apply(&self, xi: &[TClass]) -> Result<Vec<FieldElem>, HwError> {
        let target: Vec<FieldElem> = xi.iter().flat_map(|t| t.coeffs().to_vec()).collect();
        let y = self
            .gu
            .solve(&target)
            // Q′ = S·u holds for smooth curves; failure means a singular point
            .map_err(|_| HwError::Singular)?;
        Ok(self.pairing.mul_vec(&y))
    }
}

/// Coordinates of `θ(ξ)` in the dual basis of the [`ci_q_basis`] basis.
pub fn theta_apply(
    curve: &CurveCI,
    u: &UGenerator,
    xi: &[TClass],
) -> Result<Vec<FieldElem>, HwError> {
    let q = checked_q_basis(curve)?;
    Theta::new(curve, &q, u)?.apply(xi)
}

/// The pairing matrix `[X^{-1}] m_j · u ... ` between `Q` and the elements
/// `m_j·u` of `Q′`; the identity for plane curves.
pub fn plane_dual_pairing(curve: &CurveCI) -> Result<Matrix, HwError> {
    let ctx = curve.ctx();
    let d = i64::from(curve.total_degree());
    let m_basis = MonomialBasis::new(3, d - 3)?;
    let g = m_basis.len();
    let mut m = Matrix::zeros(ctx, g, g);
    for (j, mj) in m_basis.iter().enumerate() {
        let gj = GradedPoly::monomial(ctx, mj, ctx.one());
        for i in 0..g {
            m[(i, j)] = crate::poly::residue_pairing(&gj, &TClass::basis_vector(ctx, 3, -d, i))?;
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TripleTag {
    /// `Φ` bijective.
    Ordinary,
    /// `Φ = 0`.
    Superspecial,
    Interesting,
}

impl fmt::Display for TripleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TripleTag::Ordinary => "ordinary",
            TripleTag::Superspecial => "superspecial",
            TripleTag::Interesting => "interesting",
        })
    }
}

/// `(Q, Φ, Ψ)` in coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HwTriple {
    pub g: usize,
    /// `g×g`, `Φ(x) = A_phi · x^{(σ)}`.
    pub a_phi: Matrix,
    /// `h×g` echelon basis of the linear null space of `A_phi`;
    /// `Ker Φ` is spanned by the `τ`-twists of its rows.
    pub kappa: Matrix,
    /// `g×h`, column `j` holds `Ψ(^τκ_j)` in the dual basis of `Q^∨`.
    pub a_psi: Matrix,
    pub tag: TripleTag,
}

impl HwTriple {
    /// Builds a triple from `A_phi` and `A_psi` (columns indexed by the echelon
    /// null-space basis of `A_phi`) and validates it.
    pub fn new(a_phi: Matrix, a_psi: Matrix) -> Result<Self, HwError> {
        let kappa = a_phi.null_space();
        let g = a_phi.rows();
        let tag = if kappa.rows() == 0 {
            TripleTag::Ordinary
        } else if a_phi.is_zero() {
            TripleTag::Superspecial
        } else {
            TripleTag::Interesting
        };
        let t = HwTriple {
            g,
            a_phi,
            kappa,
            a_psi,
            tag,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn h(&self) -> usize {
        self.kappa.rows()
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.a_phi.ctx()
    }

    /// `rank A_psi = h` and every column of `A_psi` kills `Image Φ`.
    pub fn validate(&self) -> Result<(), HwError> {
        let g = self.g;
        let h = self.h();
        if self.a_phi.rows() != g || self.a_phi.cols() != g {
            return Err(HwError::Internal("A_phi is not g×g".into()));
        }
        if self.a_psi.rows() != g || self.a_psi.cols() != h {
            return Err(HwError::Internal(format!(
                "A_psi is {}×{}, expected {g}×{h}",
                self.a_psi.rows(),
                self.a_psi.cols()
            )));
        }
        if self.a_psi.rank() != h {
            return Err(HwError::Internal("Ψ is not injective".into()));
        }
        if !self.a_psi.transpose().mul(&self.a_phi).is_zero() {
            return Err(HwError::Internal("Ψ does not land in Image(Φ)^⊥".into()));
        }
        Ok(())
    }
}

/// Pipeline: `A_phi`, `κ`, `u`, `A_psi`; plane curves take the monomial path.
pub fn hw_triple(curve: &CurveCI) -> Result<HwTriple, HwError> {
    let g = genus(curve);
    if curve.is_plane() {
        let a_phi = plane_hasse_witt(curve)?;
        if a_phi.rows() != g {
            return Err(HwError::DimQ {
                got: a_phi.rows(),
                genus: g,
            });
        }
        finish(curve, a_phi)
    } else {
        hw_triple_general(curve)
    }
}

/// The general complete-intersection path, also usable for plane curves.
pub fn hw_triple_general(curve: &CurveCI) -> Result<HwTriple, HwError> {
    let q = checked_q_basis(curve)?;
    let a_phi = general_hasse_witt(curve, &q)?;
    let kappa = a_phi.null_space();
    let a_psi = if kappa.rows() == 0 {
        Matrix::zeros(curve.ctx(), q.dim(), 0)
    } else {
        let u = u_generator(curve)?;
        general_psi(curve, &q, &kappa, &u)?
    };
    HwTriple::new(a_phi, a_psi)
}

fn finish(curve: &CurveCI, a_phi: Matrix) -> Result<HwTriple, HwError> {
    let kappa = a_phi.null_space();
    let a_psi = if kappa.rows() == 0 {
        Matrix::zeros(curve.ctx(), a_phi.rows(), 0)
    } else {
        let u = u_generator(curve)?;
        psi_matrix(curve, &a_phi, &kappa, &u)?
    };
    HwTriple::new(a_phi, a_psi)
}

/// Subspace of `Q^∨` annihilating `Image Φ`, as rows.
pub fn image_annihilator(a_phi: &Matrix) -> Subspace {
    Subspace::row_space(&a_phi.transpose().null_space())
}
