//! Ekedahl–Oort classification: canonical flag, final type, the minimal
//! representative `ẇ` of the coset in `W_X \ W`, and the derived invariants.
//!
//! `W ⊂ S_{2g}` is the Weyl group of `Sp_{2g}`, permutations with
//! `w(i) + w(2g+1-i) = 2g+1`; `W_X ≅ S_g` acts on values. Permutations are
//! one-line lists of 1-based values.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::dieudonne::{assemble_dm, DmError, PolarizedDM};
use crate::gf::FieldElem;
use crate::hwtriple::{hw_triple, CurveCI, HwError, HwTriple, TripleTag};
use crate::par::{self, Execution};
use crate::semilinear::{
    independent_subset, symplectic_perp, twisted_image, twisted_preimage, Matrix, Subspace,
    TwistedMap,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EoError {
    #[error("invalid Dieudonné data: {0}")]
    InvalidDieudonne(String),
    #[error("invalid final type {0:?}: {1}")]
    InvalidFinalType(Vec<usize>, String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Triple(#[from] HwError),
    #[error(transparent)]
    Module(#[from] DmError),
}

/// `f(0..=2g)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinalType(pub Vec<usize>);

impl FinalType {
    pub fn g(&self) -> usize {
        self.0.len() / 2
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn ordinary(g: usize) -> Self {
        FinalType((0..=2 * g).map(|i| i.min(g)).collect())
    }

    pub fn superspecial(g: usize) -> Self {
        FinalType((0..=2 * g).map(|i| i.saturating_sub(g)).collect())
    }

    /// Monotone with steps 0 or 1, `f(0) = 0`, `f(2g) = g`, and
    /// `f(2g-i) = f(i) + g - i`.
    pub fn validate(&self) -> Result<(), EoError> {
        let f = &self.0;
        let bad = |why: &str| Err(EoError::InvalidFinalType(f.clone(), why.to_string()));
        if f.len().is_multiple_of(2) {
            return bad("length is not 2g+1");
        }
        let g = self.g();
        if f[0] != 0 || f[2 * g] != g {
            return bad("endpoints");
        }
        if f.windows(2).any(|w| w[1] < w[0] || w[1] > w[0] + 1) {
            return bad("steps must be 0 or 1");
        }
        if (0..=2 * g).any(|i| f[2 * g - i] + i != f[i] + g) {
            return bad("duality f(2g-i) = f(i) + g - i");
        }
        Ok(())
    }
}

impl fmt::Display for FinalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The minimal-length representative of a coset in `W_X \ W`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylCoset {
    pub one_line: Vec<usize>,
}

impl WeylCoset {
    pub fn g(&self) -> usize {
        self.one_line.len() / 2
    }

    pub fn identity(g: usize) -> Self {
        WeylCoset {
            one_line: (1..=2 * g).collect(),
        }
    }

    /// `w(i) + w(2g+1-i) = 2g+1`.
    pub fn in_weyl_group(&self) -> bool {
        let w = &self.one_line;
        let n = w.len();
        let mut seen = vec![false; n + 1];
        for &x in w {
            if x == 0 || x > n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        (0..n).all(|i| w[i] + w[n - 1 - i] == n + 1)
    }

    /// Values `1..g` and `g+1..2g` each occur in increasing position order.
    pub fn is_minimal_shape(&self) -> bool {
        let g = self.g();
        let low: Vec<usize> = self.one_line.iter().copied().filter(|&x| x <= g).collect();
        let high: Vec<usize> = self.one_line.iter().copied().filter(|&x| x > g).collect();
        low.windows(2).all(|p| p[0] < p[1]) && high.windows(2).all(|p| p[0] < p[1])
    }

    pub fn validate(&self) -> Result<(), EoError> {
        if !self.one_line.len().is_multiple_of(2) || !self.in_weyl_group() {
            return Err(EoError::Internal(format!(
                "{:?} is not in W",
                self.one_line
            )));
        }
        if !self.is_minimal_shape() {
            return Err(EoError::Internal(format!(
                "{:?} is not a minimal representative",
                self.one_line
            )));
        }
        Ok(())
    }

    /// `f(i) = #{k ≤ i : w(k) > g}`.
    pub fn final_type(&self) -> FinalType {
        let g = self.g();
        let mut f = vec![0usize; 2 * g + 1];
        for i in 1..=2 * g {
            f[i] = f[i - 1] + usize::from(self.one_line[i - 1] > g);
        }
        FinalType(f)
    }

    /// `w ∘ s_i`, with `s_i = (i i+1)(2g-i 2g-i+1)` for `i < g` and
    /// `s_g = (g g+1)`.
    pub fn times_simple(&self, i: usize) -> WeylCoset {
        let g = self.g();
        let mut w = self.one_line.clone();
        w.swap(i - 1, i);
        if i < g {
            w.swap(2 * g - i - 1, 2 * g - i);
        }
        WeylCoset { one_line: w }
    }

    /// `w = s_{i_1} ∘ ... ∘ s_{i_ℓ}`, found by peeling right descents that
    /// stay minimal representatives; the identity gives an empty list.
    pub fn simple_word(&self) -> Vec<usize> {
        let g = self.g();
        let mut w = self.clone();
        let mut peeled = Vec::new();
        let mut len = stratum_dim(&w.final_type());
        while len > 0 {
            let next = (1..=g).find_map(|i| {
                let c = w.times_simple(i);
                (c.is_minimal_shape() && stratum_dim(&c.final_type()) + 1 == len).then_some((i, c))
            });
            let Some((i, c)) = next else { break };
            peeled.push(i);
            w = c;
            len -= 1;
        }
        peeled.reverse();
        peeled
    }

    /// E.g. `s3*s2`; `id` for the identity.
    pub fn word_string(&self) -> String {
        let word = self.simple_word();
        if word.is_empty() {
            return "id".to_string();
        }
        word.iter()
            .map(|i| format!("s{i}"))
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for WeylCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EoResult {
    pub weyl: WeylCoset,
    pub final_type: FinalType,
    pub p_rank: usize,
    pub a_number: usize,
    pub stratum_dim: usize,
    pub fast_tag: TripleTag,
}

impl EoResult {
    pub fn from_final_type(f: FinalType) -> Result<Self, EoError> {
        f.validate()?;
        let weyl = weyl_from_final_type(&f)?;
        let g = f.g();
        let (p_rank, a_number, stratum_dim) = invariants_from_weyl(&weyl);
        let fast_tag = if p_rank == g {
            TripleTag::Ordinary
        } else if a_number == g {
            TripleTag::Superspecial
        } else {
            TripleTag::Interesting
        };
        let r = EoResult {
            weyl,
            final_type: f,
            p_rank,
            a_number,
            stratum_dim,
            fast_tag,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn g(&self) -> usize {
        self.final_type.g()
    }

    /// Mutual consistency of all fields.
    pub fn validate(&self) -> Result<(), EoError> {
        self.final_type.validate()?;
        self.weyl.validate()?;
        let g = self.g();
        if self.weyl.final_type() != self.final_type {
            return Err(EoError::Internal("w does not reproduce f".into()));
        }
        if self.a_number != g - self.final_type.0[g] {
            return Err(EoError::Internal("a-number differs from g - f(g)".into()));
        }
        if self.stratum_dim != stratum_dim(&self.final_type) {
            return Err(EoError::Internal(
                "stratum dimension differs from Σ f(i)".into(),
            ));
        }
        Ok(())
    }
}

/// `Σ_{i=1}^g f(i)`.
pub fn stratum_dim(f: &FinalType) -> usize {
    let g = f.g();
    f.0[1..=g].iter().sum()
}

/// With `j_1 < ... < j_g` the indices where `f(j) = f(j-1)` and
/// `i_1 < ... < i_g` the others, `w(j_m) = m` and `w(i_m) = g + m`.
pub fn weyl_from_final_type(f: &FinalType) -> Result<WeylCoset, EoError> {
    let g = f.g();
    let flat: Vec<usize> = (1..=2 * g).filter(|&j| f.0[j] == f.0[j - 1]).collect();
    if flat.len() != g {
        return Err(EoError::InvalidFinalType(
            f.0.clone(),
            format!("{} flat steps, expected {g}", flat.len()),
        ));
    }
    let mut w = vec![0usize; 2 * g];
    let (mut lo, mut hi) = (0, 0);
    for j in 1..=2 * g {
        if flat.contains(&j) {
            lo += 1;
            w[j - 1] = lo;
        } else {
            hi += 1;
            w[j - 1] = g + hi;
        }
    }
    Ok(WeylCoset { one_line: w })
}

/// `(p-rank, a-number, stratum dimension)`.
pub fn invariants_from_weyl(w: &WeylCoset) -> (usize, usize, usize) {
    let g = w.g();
    let p_rank = (1..=g).filter(|&i| w.one_line[i - 1] == i + g).count();
    let a_number = (1..=g).filter(|&i| w.one_line[i - 1] <= g).count();
    (p_rank, a_number, stratum_dim(&w.final_type()))
}

/// Fills gaps between known values: constant, or rising by one per step.
/// Anything else on a valid module is an internal error, not bad input.
fn interpolate(known: &BTreeMap<usize, usize>, len: usize) -> Result<Vec<usize>, EoError> {
    let mut f = vec![0usize; len];
    let pts: Vec<(usize, usize)> = known.iter().map(|(&a, &b)| (a, b)).collect();
    for w in pts.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        let step = if fa == fb {
            0
        } else if fb == fa + (b - a) {
            1
        } else {
            return Err(EoError::Internal(format!(
                "f({a}) = {fa} and f({b}) = {fb} admit no interpolation"
            )));
        };
        for (off, slot) in f[a..=b].iter_mut().enumerate() {
            *slot = fa + step * off;
        }
    }
    Ok(f)
}

/// The table algorithm on `A_F`: images under `F` and perpendiculars, from
/// `Basis(0) = ∅`, `Basis(g) = columns of A_F`, `Basis(2g) = k^{2g}`.
pub fn final_type_from_af(a_f: &Matrix, gram: &Matrix) -> Result<FinalType, EoError> {
    let ctx = a_f.ctx();
    let g = a_f.cols();
    let n = 2 * g;
    if a_f.rows() != n {
        return Err(EoError::InvalidDieudonne(format!(
            "A_F is {}×{g}",
            a_f.rows()
        )));
    }
    if !a_f.has_independent_columns() {
        return Err(EoError::InvalidDieudonne(
            "columns of A_F are dependent".into(),
        ));
    }
    let mut basis: Vec<Option<Vec<Vec<FieldElem>>>> = vec![None; n + 1];
    let mut f: Vec<Option<usize>> = vec![None; n + 1];
    basis[0] = Some(Vec::new());
    f[0] = Some(0);
    basis[g] = Some(a_f.columns());
    basis[n] = Some(Matrix::identity(ctx, n).to_rows());
    f[n] = Some(g);
    while let Some(i) = (0..=n).find(|&i| basis[i].is_some() && f[i].is_none()) {
        let images: Vec<Vec<FieldElem>> = basis[i]
            .as_ref()
            .expect("defined")
            .iter()
            .map(|b| {
                let top: Vec<FieldElem> = b[..g].iter().map(|&x| ctx.frobenius(x, 1)).collect();
                a_f.mul_vec(&top)
            })
            .collect();
        let keep = independent_subset(ctx, n, &images);
        let fi = keep.len();
        f[i] = Some(fi);
        let span = Subspace::span(ctx, n, &images);
        match &basis[fi] {
            Some(existing) => {
                if Subspace::span(ctx, n, existing) != span {
                    return Err(EoError::InvalidDieudonne(format!(
                        "two different subspaces of dimension {fi} in the flag"
                    )));
                }
            }
            None => {
                let perp = symplectic_perp(&span, gram)
                    .map_err(|e| EoError::InvalidDieudonne(e.to_string()))?;
                basis[fi] = Some(keep.iter().map(|&k| images[k].clone()).collect());
                match &basis[n - fi] {
                    Some(existing) if Subspace::span(ctx, n, existing) != perp => {
                        return Err(EoError::InvalidDieudonne("flag is not self-dual".into()));
                    }
                    Some(_) => {}
                    None => basis[n - fi] = Some(perp.basis_vectors()),
                }
            }
        }
    }
    let known: BTreeMap<usize, usize> = f
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .collect();
    let ft = FinalType(interpolate(&known, n + 1)?);
    ft.validate()
        .map_err(|e| EoError::InvalidDieudonne(e.to_string()))?;
    Ok(ft)
}

/// Saturates `{0, M}` under `F` and `V^{-1}`; `f(dim W) = dim F(W)` on the
/// resulting chain.
pub fn final_type_from_fv(full_f: &Matrix, full_v: &Matrix) -> Result<FinalType, EoError> {
    let ctx = full_f.ctx();
    let n = full_f.rows();
    if !n.is_multiple_of(2) || full_f.cols() != n || full_v.rows() != n || full_v.cols() != n {
        return Err(EoError::InvalidDieudonne(
            "F and V must be square of even size".into(),
        ));
    }
    let g = n / 2;
    let fm = TwistedMap::new(full_f.clone(), 1);
    let vm = TwistedMap::new(full_v.clone(), -1);
    let mut flag: BTreeMap<usize, Subspace> = BTreeMap::new();
    flag.insert(0, Subspace::zero(ctx, n));
    flag.insert(n, Subspace::full(ctx, n));
    let mut stable = false;
    for _ in 0..4 * g.max(1) {
        let mut added = false;
        let members: Vec<Subspace> = flag.values().cloned().collect();
        for w in &members {
            let img = twisted_image(&fm, w).map_err(|e| EoError::Internal(e.to_string()))?;
            let pre = twisted_preimage(&vm, w).map_err(|e| EoError::Internal(e.to_string()))?;
            for s in [img, pre] {
                match flag.get(&s.dim()) {
                    Some(existing) if *existing != s => {
                        return Err(EoError::InvalidDieudonne(
                            "F, V^{-1} orbit is not a flag".into(),
                        ));
                    }
                    Some(_) => {}
                    None => {
                        flag.insert(s.dim(), s);
                        added = true;
                    }
                }
            }
        }
        if !added {
            stable = true;
            break;
        }
    }
    if !stable {
        return Err(EoError::Internal(
            "canonical flag did not stabilise within 4g rounds".into(),
        ));
    }
    let chain: Vec<&Subspace> = flag.values().collect();
    if chain.windows(2).any(|p| !p[1].contains_subspace(p[0])) {
        return Err(EoError::InvalidDieudonne(
            "F, V^{-1} orbit is not nested".into(),
        ));
    }
    let mut known = BTreeMap::new();
    for (&d, w) in &flag {
        let img = twisted_image(&fm, w).map_err(|e| EoError::Internal(e.to_string()))?;
        known.insert(d, img.dim());
    }
    let ft = FinalType(interpolate(&known, n + 1)?);
    ft.validate()
        .map_err(|e| EoError::InvalidDieudonne(e.to_string()))?;
    Ok(ft)
}

/// Rank of `Φ^g`, the stable rank of `Φ`.
pub fn stable_rank(a_phi: &Matrix) -> usize {
    let g = a_phi.rows();
    let phi = TwistedMap::new(a_phi.clone(), 1);
    let mut acc = TwistedMap::new(Matrix::identity(a_phi.ctx(), g), 0);
    for _ in 0..g {
        acc = phi.compose(&acc);
    }
    acc.matrix.rank()
}

pub fn classify_dm(dm: &PolarizedDM) -> Result<EoResult, EoError> {
    EoResult::from_final_type(final_type_from_af(&dm.a_f, &dm.gram)?)
}

pub fn classify_fv(full_f: &Matrix, full_v: &Matrix) -> Result<EoResult, EoError> {
    EoResult::from_final_type(final_type_from_fv(full_f, full_v)?)
}

/// Ordinary and superspecial triples skip the module construction; the
/// result is checked against `dim Ker Φ` and the stable rank of `Φ`.
pub fn classify_triple(t: &HwTriple) -> Result<EoResult, EoError> {
    let g = t.g;
    let r = match t.tag {
        TripleTag::Ordinary => EoResult::from_final_type(FinalType::ordinary(g))?,
        TripleTag::Superspecial => EoResult::from_final_type(FinalType::superspecial(g))?,
        TripleTag::Interesting => classify_dm(&assemble_dm(t))?,
    };
    if r.a_number != t.h() {
        return Err(EoError::Internal(format!(
            "a-number {} but dim Ker Φ = {}",
            r.a_number,
            t.h()
        )));
    }
    let sr = stable_rank(&t.a_phi);
    if r.p_rank != sr {
        return Err(EoError::Internal(format!(
            "p-rank {} but stable rank of Φ = {sr}",
            r.p_rank
        )));
    }
    Ok(r)
}

pub fn classify_curve(curve: &CurveCI) -> Result<(HwTriple, EoResult), EoError> {
    let t = hw_triple(curve)?;
    let r = classify_triple(&t)?;
    Ok((t, r))
}

pub fn classify_triples(triples: Vec<HwTriple>, exec: Execution) -> Vec<Result<EoResult, EoError>> {
    par::map(exec, triples, |t| classify_triple(&t))
}
