//! Polarized Dieudonné modules `M = Q ⊕ Q^∨` built from Hasse–Witt triples,
//! their axioms, the inverse construction, and Kraft's standard modules.
//!
//! Basis of `M`: `e_1..e_g, ě_g..ě_1`, so the form is `(0 J; -J 0)` and
//! `b(e_i, ě_i) = 1`. `F(x) = F·x^{(σ)}`, `V(y) = V·y^{(τ)}`.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem};
use crate::hwtriple::{HwError, HwTriple};
use crate::par::{self, Execution};
use crate::semilinear::{
    check_gram, standard_gram, twisted_image_full, twisted_kernel, Matrix, Subspace, TwistedMap,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DmError {
    #[error("matrix shape {rows}×{cols} does not fit a module of dimension {dim}")]
    Shape {
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("Dieudonné axioms violated: {0:?}")]
    Axioms(Vec<Axiom>),
    #[error("coefficient a_{0} is zero")]
    ZeroCoefficient(usize),
    #[error("word length {got} does not match coefficient count {expected}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("bad Kraft word {0:?}")]
    BadWord(String),
    #[error("enumeration bound exceeded: g = {g} > {bound}")]
    BoundExceeded { g: usize, bound: usize },
    #[error(transparent)]
    Triple(#[from] HwError),
}

/// One axiom checked by [`validate_dm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    KerFIsImV,
    KerVIsImF,
    Polarization,
    GramAlternating,
    GramNonDegenerate,
    KerFMaximalIsotropic,
    KerVMaximalIsotropic,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::KerFIsImV => "Ker F = Im V",
            Axiom::KerVIsImF => "Ker V = Im F",
            Axiom::Polarization => "b(Fx, y) = b(x, Vy)^p",
            Axiom::GramAlternating => "b alternating",
            Axiom::GramNonDegenerate => "b non-degenerate",
            Axiom::KerFMaximalIsotropic => "Ker F maximal isotropic",
            Axiom::KerVMaximalIsotropic => "Ker V maximal isotropic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ComplementScan {
    /// `e_g, e_{g-1}, ..., e_1`.
    #[default]
    Descending,
    Ascending,
}

/// `F` restricted to the `Q` block, in the basis convention above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizedDM {
    pub g: usize,
    /// `2g×g`; column `j` is `F(e_j)`.
    pub a_f: Matrix,
    pub gram: Matrix,
}

impl PolarizedDM {
    pub fn new(a_f: Matrix) -> Result<Self, DmError> {
        let g = a_f.cols();
        if a_f.rows() != 2 * g {
            return Err(DmError::Shape {
                rows: a_f.rows(),
                cols: a_f.cols(),
                dim: 2 * g,
            });
        }
        if !a_f.has_independent_columns() {
            return Err(DmError::Axioms(vec![Axiom::KerFIsImV]));
        }
        let gram = standard_gram(a_f.ctx(), g);
        Ok(PolarizedDM { g, a_f, gram })
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.a_f.ctx()
    }

    /// `(F, V)` as `2g×2g` matrices.
    pub fn full_fv(&self) -> (Matrix, Matrix) {
        full_fv_matrices(self)
    }
}

/// Index set `I` of standard vectors complementing `span κ`, in scan order.
pub fn complement_indices(kappa: &Matrix, g: usize, scan: ComplementScan) -> Vec<usize> {
    let ctx = kappa.ctx();
    let mut kept: Vec<Vec<FieldElem>> = kappa.to_rows();
    let base = kept.len();
    let order: Vec<usize> = match scan {
        ComplementScan::Descending => (0..g).rev().collect(),
        ComplementScan::Ascending => (0..g).collect(),
    };
    let mut out = Vec::new();
    for i in order {
        if kept.len() == g {
            break;
        }
        let mut e = vec![ctx.zero(); g];
        e[i] = ctx.one();
        kept.push(e);
        if Matrix::from_rows_with_cols(ctx, &kept, g).rank() == kept.len() {
            out.push(i);
        } else {
            kept.pop();
        }
    }
    debug_assert_eq!(out.len() + base, g);
    out
}

/// `M = Q ⊕ Q^∨` with `F(r_0 + r_1, λ) = (Φ r_0, Ψ r_1)`, `R_1 = Ker Φ`.
pub fn assemble_dm(t: &HwTriple) -> PolarizedDM {
    assemble_dm_with(t, ComplementScan::Descending)
}

pub fn assemble_dm_with(t: &HwTriple, scan: ComplementScan) -> PolarizedDM {
    let ctx = t.ctx();
    let g = t.g;
    let h = t.h();
    let idx = complement_indices(&t.kappa, g, scan);
    // columns: e_I then the κ_ν
    let mut basis_cols: Vec<Vec<FieldElem>> = idx
        .iter()
        .map(|&i| {
            let mut e = vec![ctx.zero(); g];
            e[i] = ctx.one();
            e
        })
        .collect();
    basis_cols.extend(t.kappa.to_rows());
    let change = Matrix::from_columns(ctx, g, &basis_cols);
    let mut a_f = Matrix::zeros(ctx, 2 * g, g);
    for j in 0..g {
        let mut e = vec![ctx.zero(); g];
        e[j] = ctx.one();
        let coef = change.solve(&e).expect("complement spans Q");
        let (a, b) = coef.split_at(idx.len());
        for r in 0..g {
            let mut acc = ctx.zero();
            for (mu, &i) in idx.iter().enumerate() {
                acc = ctx.mul_add(a[mu], t.a_phi[(r, i)], acc);
            }
            a_f[(r, j)] = acc;
        }
        for r in g..2 * g {
            let dual = 2 * g - 1 - r;
            let mut acc = ctx.zero();
            for (nu, &bn) in b.iter().enumerate().take(h) {
                acc = ctx.mul_add(bn, t.a_psi[(dual, nu)], acc);
            }
            a_f[(r, j)] = acc;
        }
    }
    let gram = standard_gram(ctx, g);
    PolarizedDM { g, a_f, gram }
}

/// `F = [A_F | 0]` and `V = τ(G^{-1} Fᵀ G)`, the unique `V` with
/// `b(Fx, y) = b(x, Vy)^p`.
pub fn full_fv_matrices(dm: &PolarizedDM) -> (Matrix, Matrix) {
    let ctx = dm.ctx();
    let g = dm.g;
    let mut f = Matrix::zeros(ctx, 2 * g, 2 * g);
    for i in 0..2 * g {
        for j in 0..g {
            f[(i, j)] = dm.a_f[(i, j)];
        }
    }
    // G^{-1} = -G
    let v = dm.gram.neg().mul(&f.transpose()).mul(&dm.gram).twist(-1);
    (f, v)
}

/// `A†`: reflection in the anti-diagonal.
pub fn dagger(a: &Matrix) -> Matrix {
    let (r, c) = (a.rows(), a.cols());
    let mut out = Matrix::zeros(a.ctx(), c, r);
    for i in 0..r {
        for j in 0..c {
            out[(c - 1 - j, r - 1 - i)] = a[(i, j)];
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DmReport {
    pub violations: Vec<Axiom>,
}

impl DmReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the Dieudonné axioms for `(F, V)`, and the polarization axioms
/// when a form is supplied.
pub fn validate_dm(
    full_f: &Matrix,
    full_v: &Matrix,
    gram: Option<&Matrix>,
) -> Result<DmReport, DmError> {
    let dim = full_f.rows();
    for m in [full_f, full_v] {
        if m.rows() != dim || m.cols() != dim {
            return Err(DmError::Shape {
                rows: m.rows(),
                cols: m.cols(),
                dim,
            });
        }
    }
    let fm = TwistedMap::new(full_f.clone(), 1);
    let vm = TwistedMap::new(full_v.clone(), -1);
    let ker_f = twisted_kernel(&fm);
    let ker_v = twisted_kernel(&vm);
    let mut violations = Vec::new();
    if ker_f != twisted_image_full(&vm) {
        violations.push(Axiom::KerFIsImV);
    }
    if ker_v != twisted_image_full(&fm) {
        violations.push(Axiom::KerVIsImF);
    }
    if let Some(gram) = gram {
        if gram.rows() != dim || gram.cols() != dim {
            return Err(DmError::Shape {
                rows: gram.rows(),
                cols: gram.cols(),
                dim,
            });
        }
        match check_gram(gram) {
            Ok(()) => {}
            Err(crate::semilinear::LinAlgError::SingularGram) => {
                violations.push(Axiom::GramNonDegenerate)
            }
            Err(_) => violations.push(Axiom::GramAlternating),
        }
        // (Fᵀ G)_ij = σ((G V)_ij)
        if full_f.transpose().mul(gram) != gram.mul(full_v).twist(1) {
            violations.push(Axiom::Polarization);
        }
        let half = dim / 2;
        if ker_f.dim() != half || !ker_f.is_isotropic(gram) {
            violations.push(Axiom::KerFMaximalIsotropic);
        }
        if ker_v.dim() != half || !ker_v.is_isotropic(gram) {
            violations.push(Axiom::KerVMaximalIsotropic);
        }
    }
    Ok(DmReport { violations })
}

/// `Q = M / Ker F` with Ψ(x) = b(-, F(x)) on `Ker Φ`.
///
/// The section of `M → Q` is spanned by the standard vectors at the
/// non-pivot positions of the echelon basis of `Ker F`.
pub fn dm_to_hw(full_f: &Matrix, full_v: &Matrix, gram: &Matrix) -> Result<HwTriple, DmError> {
    let report = validate_dm(full_f, full_v, Some(gram))?;
    if !report.ok() {
        return Err(DmError::Axioms(report.violations));
    }
    let ctx = full_f.ctx();
    let dim = full_f.rows();
    let ker_f = twisted_kernel(&TwistedMap::new(full_f.clone(), 1));
    let (_, pivots) = ker_f.basis().rref();
    let section: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let g = section.len();
    // columns: section vectors, then Ker F
    let mut cols: Vec<Vec<FieldElem>> = section
        .iter()
        .map(|&s| {
            let mut e = vec![ctx.zero(); dim];
            e[s] = ctx.one();
            e
        })
        .collect();
    cols.extend(ker_f.basis_vectors());
    let change = Matrix::from_columns(ctx, dim, &cols);
    let mut phi_cols = Vec::with_capacity(g);
    for &s in &section {
        let image = full_f.column(s);
        let coef = change
            .solve(&image)
            .map_err(|_| DmError::Axioms(vec![Axiom::KerFIsImV]))?;
        phi_cols.push(coef[..g].to_vec());
    }
    let a_phi = Matrix::from_columns(ctx, g, &phi_cols);
    let kappa = a_phi.null_space();
    let gf = gram.mul(full_f);
    let mut psi_cols = Vec::with_capacity(kappa.rows());
    for j in 0..kappa.rows() {
        let mut lifted = vec![ctx.zero(); dim];
        for (l, &s) in section.iter().enumerate() {
            lifted[s] = kappa[(j, l)];
        }
        let v = gf.mul_vec(&lifted);
        psi_cols.push(section.iter().map(|&s| v[s]).collect::<Vec<_>>());
    }
    let a_psi = if psi_cols.is_empty() {
        Matrix::zeros(ctx, g, 0)
    } else {
        Matrix::from_columns(ctx, g, &psi_cols)
    };
    Ok(HwTriple::new(a_phi, a_psi)?)
}

/// A triple with uniformly random `Φ` of the given rank.
pub fn random_hw_triple<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    g: usize,
    rank: usize,
    rng: &mut R,
) -> HwTriple {
    assert!(rank <= g);
    loop {
        let l = random_matrix(ctx, g, rank, rng);
        let r = random_matrix(ctx, rank, g, rng);
        let a_phi = l.mul(&r);
        if a_phi.rank() != rank {
            continue;
        }
        let h = g - rank;
        let ann = a_phi.transpose().null_space();
        let mix = loop {
            let m = random_matrix(ctx, h, h, rng);
            if m.rank() == h {
                break m;
            }
        };
        let a_psi = if h == 0 {
            Matrix::zeros(ctx, g, 0)
        } else {
            ann.transpose().mul(&mix)
        };
        return HwTriple::new(a_phi, a_psi).expect("constructed triple is valid");
    }
}

pub fn random_matrix<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix {
    let data: Vec<Vec<FieldElem>> = (0..rows)
        .map(|_| (0..cols).map(|_| ctx.random(rng)).collect())
        .collect();
    Matrix::from_rows_with_cols(ctx, &data, cols)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    F,
    V,
}

impl Letter {
    pub fn dual(self) -> Letter {
        match self {
            Letter::F => Letter::V,
            Letter::V => Letter::F,
        }
    }
}

/// A cyclic word `X: Z/q → {F, V}`, stored as its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KraftWord(Vec<Letter>);

impl KraftWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self, DmError> {
        if letters.is_empty() {
            return Err(DmError::BadWord(String::new()));
        }
        Ok(KraftWord(least_rotation(&letters)))
    }

    pub fn parse(text: &str) -> Result<Self, DmError> {
        let letters: Option<Vec<Letter>> = text
            .chars()
            .filter(|c| !matches!(c, ',' | ' '))
            .map(|c| match c {
                'F' | 'f' => Some(Letter::F),
                'V' | 'v' => Some(Letter::V),
                _ => None,
            })
            .collect();
        Self::new(letters.ok_or_else(|| DmError::BadWord(text.to_string()))?)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `X̌(i) = F ⇔ X(i) = V`.
    pub fn dual(&self) -> KraftWord {
        KraftWord(least_rotation(
            &self.0.iter().map(|l| l.dual()).collect::<Vec<_>>(),
        ))
    }

    /// Not a proper power of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let q = self.0.len();
        (1..q)
            .filter(|s| q.is_multiple_of(*s))
            .all(|s| (0..q).any(|i| self.0[i] != self.0[(i + s) % q]))
    }

    /// `q = 2r` and `X(i + r) = F ⇔ X(i) = V`.
    pub fn is_self_dual(&self) -> bool {
        let q = self.0.len();
        q.is_multiple_of(2) && (0..q).all(|i| self.0[(i + q / 2) % q] == self.0[i].dual())
    }
}

impl fmt::Display for KraftWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::F => "F",
                Letter::V => "V",
            })?;
        }
        Ok(())
    }
}

fn least_rotation(w: &[Letter]) -> Vec<Letter> {
    let q = w.len();
    (0..q)
        .map(|s| (0..q).map(|i| w[(i + s) % q]).collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// `F(e_i) = a_i e_{i+1}` if `X(i) = F`, `V(e_{i+1}) = τ(a_i^{-1}) e_i` if
/// `X(i) = V`, all other images zero.
pub fn standard_module(
    ctx: &FieldCtx,
    word: &KraftWord,
    a: Option<&[FieldElem]>,
) -> Result<(Matrix, Matrix), DmError> {
    let q = word.len();
    let ones = vec![ctx.one(); q];
    let a = a.unwrap_or(&ones);
    if a.len() != q {
        return Err(DmError::CoefficientCount {
            expected: q,
            got: a.len(),
        });
    }
    if let Some(i) = a.iter().position(|x| x.is_zero()) {
        return Err(DmError::ZeroCoefficient(i));
    }
    let mut f = Matrix::zeros(ctx, q, q);
    let mut v = Matrix::zeros(ctx, q, q);
    for (i, l) in word.letters().iter().enumerate() {
        let next = (i + 1) % q;
        match l {
            Letter::F => f[(next, i)] = a[i],
            Letter::V => v[(i, next)] = ctx.frobenius(ctx.inv(a[i]).expect("nonzero"), -1),
        }
    }
    Ok((f, v))
}

/// A summand of a polarized module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KraftBlock {
    /// `M_X` with `X` self-dual.
    SelfDual(KraftWord),
    /// `M_X ⊕ M_X̌`; the stored word is the lesser of `X` and `X̌`.
    DualPair(KraftWord),
}

impl KraftBlock {
    pub fn dim(&self) -> usize {
        match self {
            KraftBlock::SelfDual(w) => w.len(),
            KraftBlock::DualPair(w) => 2 * w.len(),
        }
    }

    pub fn words(&self) -> Vec<KraftWord> {
        match self {
            KraftBlock::SelfDual(w) => vec![w.clone()],
            KraftBlock::DualPair(w) => vec![w.clone(), w.dual()],
        }
    }
}

impl fmt::Display for KraftBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KraftBlock::SelfDual(w) => write!(f, "({w})"),
            KraftBlock::DualPair(w) => write!(f, "({w}|{})", w.dual()),
        }
    }
}

/// A module in the oracle enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedModule {
    pub blocks: Vec<KraftBlock>,
    pub full_f: Matrix,
    pub full_v: Matrix,
}

impl EnumeratedModule {
    pub fn label(&self) -> String {
        self.blocks
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

pub const DEFAULT_ENUMERATION_BOUND: usize = 4;

/// All primitive cyclic words of length `q`, least rotations, sorted.
pub fn primitive_words(q: usize) -> Vec<KraftWord> {
    let mut out = BTreeSet::new();
    for bits in 0u64..(1u64 << q) {
        let letters: Vec<Letter> = (0..q)
            .map(|i| {
                if bits >> i & 1 == 0 {
                    Letter::F
                } else {
                    Letter::V
                }
            })
            .collect();
        let w = KraftWord::new(letters).expect("nonempty");
        if w.is_primitive() {
            out.insert(w);
        }
    }
    out.into_iter().collect()
}

/// Every block of dimension `dim`.
pub fn blocks_of_dim(dim: usize) -> Vec<KraftBlock> {
    let mut out = BTreeSet::new();
    if dim.is_multiple_of(2) {
        for w in primitive_words(dim) {
            if w.is_self_dual() {
                out.insert(KraftBlock::SelfDual(w));
            }
        }
        for w in primitive_words(dim / 2) {
            let d = w.dual();
            // d a rotation of w makes w self-dual, handled above
            if d != w {
                out.insert(KraftBlock::DualPair(w.min(d)));
            }
        }
    }
    out.into_iter().collect()
}

/// All polarized modules of dimension `2g` up to isomorphism, as direct sums
/// of Kraft blocks with `a_i = 1`.
pub fn enumerate_polarized_dms(
    ctx: &FieldCtx,
    g: usize,
    bound: usize,
    exec: Execution,
) -> Result<Vec<EnumeratedModule>, DmError> {
    if g > bound {
        return Err(DmError::BoundExceeded { g, bound });
    }
    let catalog: Vec<KraftBlock> = (1..=g).flat_map(|h| blocks_of_dim(2 * h)).collect();
    let mut multisets = Vec::new();
    let mut current = Vec::new();
    collect_multisets(&catalog, 0, 2 * g, &mut current, &mut multisets);
    par::map(exec, multisets, |blocks| {
        let (full_f, full_v) = direct_sum(ctx, &blocks)?;
        Ok(EnumeratedModule {
            blocks,
            full_f,
            full_v,
        })
    })
    .into_iter()
    .collect()
}

fn collect_multisets(
    catalog: &[KraftBlock],
    start: usize,
    remaining: usize,
    current: &mut Vec<KraftBlock>,
    out: &mut Vec<Vec<KraftBlock>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for i in start..catalog.len() {
        let d = catalog[i].dim();
        if d <= remaining {
            current.push(catalog[i].clone());
            collect_multisets(catalog, i, remaining - d, current, out);
            current.pop();
        }
    }
}

/// Block-diagonal `(F, V)` of the given summands.
pub fn direct_sum(ctx: &FieldCtx, blocks: &[KraftBlock]) -> Result<(Matrix, Matrix), DmError> {
    let words: Vec<KraftWord> = blocks.iter().flat_map(|b| b.words()).collect();
    let dim: usize = words.iter().map(|w| w.len()).sum();
    let mut f = Matrix::zeros(ctx, dim, dim);
    let mut v = Matrix::zeros(ctx, dim, dim);
    let mut at = 0;
    for w in &words {
        let (bf, bv) = standard_module(ctx, w, None)?;
        for i in 0..w.len() {
            for j in 0..w.len() {
                f[(at + i, at + j)] = bf[(i, j)];
                v[(at + i, at + j)] = bv[(i, j)];
            }
        }
        at += w.len();
    }
    Ok((f, v))
}

/// Subspaces `Ker F` and `Im F` of a module, for inspection.
pub fn kernel_and_image(full_f: &Matrix) -> (Subspace, Subspace) {
    let fm = TwistedMap::new(full_f.clone(), 1);
    (twisted_kernel(&fm), twisted_image_full(&fm))
}
