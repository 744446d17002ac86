//! Dense homogeneous polynomials over `F_{p^m}` and classes in the
//! negatively graded module `T = k[X^{±1}] / L`, where `L` is spanned by the
//! Laurent monomials having at least one non-negative exponent.
//!
//! Monomials of a fixed degree are ordered descending-lexicographically on
//! exponent tuples (`X_0 > X_1 > ... > X_n`). A class in `T` of degree `m` is
//! a combination of monomials `X^e` with all `e_i <= -1`; it is stored through
//! the bijection `e -> -e - 1` as a dense vector over ordinary monomials of
//! degree `-m - nvars`.

use std::fmt;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("negative degree {0}")]
    NegativeDegree(i64),
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("operands live over different fields or variable sets")]
    Mismatch,
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("exponent tuple has degree {got}, expected {expected}")]
    DegreeMismatch { expected: i64, got: i64 },
    #[error("derivative of a constant")]
    ConstantDerivative,
}

/// `binomial(n, k)` with `binomial(n, k) = 0` for `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of monomials of degree `degree` in `nvars` variables.
#[inline]
pub fn monomial_count(nvars: usize, degree: i64) -> usize {
    if degree < 0 || nvars == 0 {
        return usize::from(degree == 0 && nvars == 0);
    }
    binomial(degree as u64 + nvars as u64 - 1, nvars as u64 - 1) as usize
}

/// Position of an exponent tuple inside its degree's monomial list.
pub fn monomial_rank(exps: &[u32]) -> usize {
    let nvars = exps.len();
    let mut remaining: i64 = exps.iter().map(|&e| e as i64).sum();
    let mut rank = 0usize;
    for (i, &e) in exps.iter().enumerate().take(nvars.saturating_sub(1)) {
        // Tuples sharing the prefix whose i-th exponent exceeds e.
        let slack = remaining - e as i64 - 1;
        if slack >= 0 {
            rank += monomial_count(nvars - i, slack);
        }
        remaining -= e as i64;
    }
    rank
}

/// All exponent tuples of a given total degree, in descending lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    degree: u32,
    monomials: Vec<Vec<u32>>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: i64) -> Result<Self, PolyError> {
        if degree < 0 {
            return Err(PolyError::NegativeDegree(degree));
        }
        let mut monomials = Vec::with_capacity(monomial_count(nvars, degree));
        let mut current = vec![0u32; nvars];
        fill_monomials(&mut current, 0, degree as u32, &mut monomials);
        Ok(MonomialBasis {
            nvars,
            degree: degree as u32,
            monomials,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.monomials.iter().map(|m| m.as_slice())
    }
}

fn fill_monomials(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    let nvars = current.len();
    if nvars == 0 {
        if remaining == 0 {
            out.push(vec![]);
        }
        return;
    }
    if pos == nvars - 1 {
        current[pos] = remaining;
        out.push(current.clone());
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill_monomials(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

/// Homogeneous polynomial with a dense coefficient vector in basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoly {
    ctx: FieldCtx,
    nvars: usize,
    degree: u32,
    coeffs: Vec<FieldElem>,
}

impl GradedPoly {
    pub fn zero(ctx: &FieldCtx, nvars: usize, degree: u32) -> Self {
        GradedPoly {
            ctx: ctx.clone(),
            nvars,
            degree,
            coeffs: vec![FieldElem::ZERO; monomial_count(nvars, degree as i64)],
        }
    }

    pub fn constant(ctx: &FieldCtx, nvars: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(ctx, nvars, 0);
        p.coeffs[0] = c;
        p
    }

    pub fn monomial(ctx: &FieldCtx, exps: &[u32], c: FieldElem) -> Self {
        let degree = exps.iter().sum();
        let mut p = Self::zero(ctx, exps.len(), degree);
        p.coeffs[monomial_rank(exps)] = c;
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` terms; like terms add.
    pub fn from_terms(
        ctx: &FieldCtx,
        nvars: usize,
        degree: u32,
        terms: &[(FieldElem, Vec<u32>)],
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(ctx, nvars, degree);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(PolyError::Mismatch);
            }
            let d: u32 = e.iter().sum();
            if d != degree {
                return Err(PolyError::DegreeMismatch {
                    expected: degree as i64,
                    got: d as i64,
                });
            }
            let r = monomial_rank(e);
            p.coeffs[r] = ctx.add(p.coeffs[r], *c);
        }
        Ok(p)
    }

    pub fn from_coeffs(ctx: &FieldCtx, nvars: usize, degree: u32, coeffs: Vec<FieldElem>) -> Self {
        assert_eq!(coeffs.len(), monomial_count(nvars, degree as i64));
        GradedPoly {
            ctx: ctx.clone(),
            nvars,
            degree,
            coeffs,
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> Vec<(FieldElem, Vec<u32>)> {
        let basis = MonomialBasis::new(self.nvars, self.degree as i64).unwrap();
        self.coeffs
            .iter()
            .zip(basis.iter())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, e)| (*c, e.to_vec()))
            .collect()
    }

    fn check_compatible(&self, other: &GradedPoly) -> Result<(), PolyError> {
        if self.ctx != other.ctx || self.nvars != other.nvars {
            return Err(PolyError::Mismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedPoly) -> Result<GradedPoly, PolyError> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(PolyError::DegreeMismatch {
                expected: self.degree as i64,
                got: other.degree as i64,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ctx.add(a, b))
            .collect();
        Ok(GradedPoly {
            coeffs,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: FieldElem) -> GradedPoly {
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect();
        GradedPoly {
            coeffs,
            ..self.clone()
        }
    }

    /// Dense convolution of two homogeneous polynomials.
    pub fn mul(&self, other: &GradedPoly) -> Result<GradedPoly, PolyError> {
        self.check_compatible(other)?;
        let ctx = &self.ctx;
        let degree = self.degree + other.degree;
        let mut out = vec![FieldElem::ZERO; monomial_count(self.nvars, degree as i64)];
        let a_terms = self.terms();
        let b_terms = other.terms();
        let mut exps = vec![0u32; self.nvars];
        for (ca, ea) in &a_terms {
            for (cb, eb) in &b_terms {
                for i in 0..self.nvars {
                    exps[i] = ea[i] + eb[i];
                }
                let r = monomial_rank(&exps);
                out[r] = ctx.mul_add(*ca, *cb, out[r]);
            }
        }
        Ok(GradedPoly {
            ctx: ctx.clone(),
            nvars: self.nvars,
            degree,
            coeffs: out,
        })
    }

    /// `self^e` by square-and-multiply.
    pub fn pow(&self, e: i64) -> Result<GradedPoly, PolyError> {
        if e < 0 {
            return Err(PolyError::NegativeExponent(e));
        }
        let mut acc = GradedPoly::constant(&self.ctx, self.nvars, self.ctx.one());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, j: usize) -> Result<GradedPoly, PolyError> {
        if j >= self.nvars {
            return Err(PolyError::VariableOutOfRange {
                index: j,
                nvars: self.nvars,
            });
        }
        if self.degree == 0 {
            return Err(PolyError::ConstantDerivative);
        }
        let ctx = &self.ctx;
        let mut out = GradedPoly::zero(ctx, self.nvars, self.degree - 1);
        for (c, mut e) in self.terms() {
            if e[j] == 0 {
                continue;
            }
            let factor = ctx.from_int((e[j] as u64 % ctx.p()) as i64);
            e[j] -= 1;
            let r = monomial_rank(&e);
            out.coeffs[r] = ctx.mul_add(c, factor, out.coeffs[r]);
        }
        Ok(out)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> Result<FieldElem, PolyError> {
        if exps.len() != self.nvars {
            return Err(PolyError::Mismatch);
        }
        let d: u32 = exps.iter().sum();
        if d != self.degree {
            return Err(PolyError::DegreeMismatch {
                expected: self.degree as i64,
                got: d as i64,
            });
        }
        Ok(self.coeffs[monomial_rank(exps)])
    }

    /// Applies `σ^k` to every coefficient.
    pub fn twist(&self, k: i64) -> GradedPoly {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| self.ctx.frobenius(c, k))
            .collect();
        GradedPoly {
            coeffs,
            ..self.clone()
        }
    }

    /// Canonical text form, e.g. `X0^4+3*X1*X2^3`, accepted back by the parser.
    pub fn render(&self) -> String {
        let terms = self.terms();
        if terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(c, e)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| {
                        if x == 1 {
                            format!("X{i}")
                        } else {
                            format!("X{i}^{x}")
                        }
                    })
                    .collect();
                let coef = self.ctx.render(*c);
                match (mono.is_empty(), coef.as_str()) {
                    (true, _) => render_coef(&coef),
                    (false, "1") => mono.join("*"),
                    (false, _) => format!("{}*{}", render_coef(&coef), mono.join("*")),
                }
            })
            .collect();
        parts.join("+")
    }
}

fn render_coef(c: &str) -> String {
    if c.contains(',') {
        format!("({c})")
    } else {
        c.to_string()
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A class in `T` of degree `degree <= -nvars`, in shifted storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TClass {
    ctx: FieldCtx,
    nvars: usize,
    degree: i64,
    coeffs: Vec<FieldElem>,
}

/// Shifted degree `-m - nvars` of the degree-`m` piece of `T`.
#[inline]
pub fn t_shifted_degree(nvars: usize, degree: i64) -> i64 {
    -degree - nvars as i64
}

/// Dimension of the degree-`m` piece of `T`.
pub fn t_dimension(nvars: usize, degree: i64) -> usize {
    monomial_count(nvars, t_shifted_degree(nvars, degree))
}

impl TClass {
    pub fn zero(ctx: &FieldCtx, nvars: usize, degree: i64) -> Self {
        TClass {
            ctx: ctx.clone(),
            nvars,
            degree,
            coeffs: vec![FieldElem::ZERO; t_dimension(nvars, degree)],
        }
    }

    /// The class of the Laurent monomial `c · X^e`; zero if some `e_i >= 0`.
    pub fn laurent_monomial(ctx: &FieldCtx, exps: &[i64], c: FieldElem) -> Self {
        let degree = exps.iter().sum();
        let mut t = TClass::zero(ctx, exps.len(), degree);
        if exps.iter().all(|&e| e <= -1) {
            let shifted: Vec<u32> = exps.iter().map(|&e| (-e - 1) as u32).collect();
            t.coeffs[monomial_rank(&shifted)] = c;
        }
        t
    }

    /// The basis vector with the given shifted index.
    pub fn basis_vector(ctx: &FieldCtx, nvars: usize, degree: i64, index: usize) -> Self {
        let mut t = TClass::zero(ctx, nvars, degree);
        t.coeffs[index] = ctx.one();
        t
    }

    pub fn from_coeffs(ctx: &FieldCtx, nvars: usize, degree: i64, coeffs: Vec<FieldElem>) -> Self {
        assert_eq!(coeffs.len(), t_dimension(nvars, degree));
        TClass {
            ctx: ctx.clone(),
            nvars,
            degree,
            coeffs,
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Nonzero terms as `(coefficient, Laurent exponents)`.
    pub fn terms(&self) -> Vec<(FieldElem, Vec<i64>)> {
        let sd = t_shifted_degree(self.nvars, self.degree);
        if sd < 0 {
            return vec![];
        }
        let basis = MonomialBasis::new(self.nvars, sd).unwrap();
        self.coeffs
            .iter()
            .zip(basis.iter())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, s)| (*c, s.iter().map(|&x| -(x as i64) - 1).collect()))
            .collect()
    }

    /// Coefficient of the Laurent monomial `X^e` (zero when it lies in `L`).
    pub fn coeff_of(&self, exps: &[i64]) -> Result<FieldElem, PolyError> {
        if exps.len() != self.nvars {
            return Err(PolyError::Mismatch);
        }
        let d: i64 = exps.iter().sum();
        if d != self.degree {
            return Err(PolyError::DegreeMismatch {
                expected: self.degree,
                got: d,
            });
        }
        if exps.iter().any(|&e| e >= 0) {
            return Ok(FieldElem::ZERO);
        }
        let shifted: Vec<u32> = exps.iter().map(|&e| (-e - 1) as u32).collect();
        Ok(self.coeffs[monomial_rank(&shifted)])
    }

    pub fn add(&self, other: &TClass) -> Result<TClass, PolyError> {
        if self.ctx != other.ctx || self.nvars != other.nvars {
            return Err(PolyError::Mismatch);
        }
        if self.degree != other.degree {
            return Err(PolyError::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ctx.add(a, b))
            .collect();
        Ok(TClass {
            coeffs,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: FieldElem) -> TClass {
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect();
        TClass {
            coeffs,
            ..self.clone()
        }
    }

    /// The class of `A^p` for a representative `A`: exponents times `p`,
    /// coefficients raised to the `p`-th power.
    pub fn frobenius_power(&self) -> TClass {
        let ctx = &self.ctx;
        let p = ctx.p() as i64;
        let mut out = TClass::zero(ctx, self.nvars, self.degree * p);
        for (c, e) in self.terms() {
            let pe: Vec<u32> = e.iter().map(|&x| (-(x * p) - 1) as u32).collect();
            out.coeffs[monomial_rank(&pe)] = ctx.frobenius(c, 1);
        }
        out
    }

    /// `X^{(shift,...,shift)} · self` as an ordinary polynomial; `None` when
    /// some surviving monomial would keep a negative exponent.
    pub fn to_shifted_poly(&self, shift: u32) -> Option<GradedPoly> {
        let degree = self.degree + (shift as i64) * self.nvars as i64;
        if degree < 0 {
            return None;
        }
        let mut terms = Vec::new();
        for (c, e) in self.terms() {
            let shifted: Option<Vec<u32>> = e
                .iter()
                .map(|&x| u32::try_from(x + shift as i64).ok())
                .collect();
            terms.push((c, shifted?));
        }
        GradedPoly::from_terms(&self.ctx, self.nvars, degree as u32, &terms).ok()
    }
}

/// `s · t` in `T`: convolve, dropping every monomial with an exponent `>= 0`.
///
/// In shifted storage a monomial `X^a` of `s` sends the shifted monomial `b`
/// of `t` to `b - a`, and the product survives iff `b >= a` componentwise.
pub fn t_multiply(s: &GradedPoly, t: &TClass) -> Result<TClass, PolyError> {
    if s.ctx() != t.ctx() || s.nvars() != t.nvars() {
        return Err(PolyError::Mismatch);
    }
    let ctx = t.ctx();
    let nvars = t.nvars();
    let degree = t.degree() + s.degree() as i64;
    let mut out = TClass::zero(ctx, nvars, degree);
    if out.coeffs.is_empty() {
        return Ok(out);
    }
    let sd = t_shifted_degree(nvars, t.degree());
    let t_basis = MonomialBasis::new(nvars, sd).map_err(|_| PolyError::Mismatch)?;
    let s_terms = s.terms();
    let mut exps = vec![0u32; nvars];
    for (cb, b) in t.coeffs.iter().zip(t_basis.iter()) {
        if cb.is_zero() {
            continue;
        }
        'terms: for (ca, a) in &s_terms {
            for i in 0..nvars {
                if b[i] < a[i] {
                    continue 'terms;
                }
                exps[i] = b[i] - a[i];
            }
            let r = monomial_rank(&exps);
            out.coeffs[r] = ctx.mul_add(*ca, *cb, out.coeffs[r]);
        }
    }
    Ok(out)
}

/// The coefficient of `X^{-1} = X_0^{-1} ... X_n^{-1}` in `g · t`, the
/// residue pairing between `S_j` and `T_{-j-nvars}`.
pub fn residue_pairing(g: &GradedPoly, t: &TClass) -> Result<FieldElem, PolyError> {
    let prod = t_multiply(g, t)?;
    if prod.degree() != -(t.nvars() as i64) {
        return Err(PolyError::DegreeMismatch {
            expected: -(t.nvars() as i64),
            got: prod.degree(),
        });
    }
    Ok(prod.coeffs[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldCtx {
        FieldCtx::prime(5).unwrap()
    }

    /// X0^4+X1^4+X2^4+X0^3X1+X0X1^2X2-X1^2X2^2+3X1X2^3 over F_5.
    fn example_f() -> GradedPoly {
        let k = f5();
        let t = |c: i64, e: [u32; 3]| (k.from_int(c), e.to_vec());
        GradedPoly::from_terms(
            &k,
            3,
            4,
            &[
                t(1, [4, 0, 0]),
                t(1, [0, 4, 0]),
                t(1, [0, 0, 4]),
                t(1, [3, 1, 0]),
                t(1, [1, 2, 1]),
                t(-1, [0, 2, 2]),
                t(3, [0, 1, 3]),
            ],
        )
        .unwrap()
    }

    /// Coefficient of `X^target` in `f^e` by enumerating multinomial choices
    /// over the terms of `f` with exact integer arithmetic.
    fn multinomial_coefficient(terms: &[(i64, [u32; 3])], e: u32, target: [u32; 3]) -> i128 {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            terms: &[(i64, [u32; 3])],
            idx: usize,
            left: u32,
            acc_exp: [u32; 3],
            target: [u32; 3],
            counts: &mut Vec<u32>,
            total: u32,
            sum: &mut i128,
        ) {
            if idx == terms.len() {
                if left == 0 && acc_exp == target {
                    let mut mult: i128 = (1..=total as i128).product();
                    for &c in counts.iter() {
                        mult /= (1..=c as i128).product::<i128>();
                    }
                    let mut coef: i128 = 1;
                    for (t, &c) in terms.iter().zip(counts.iter()) {
                        coef *= (t.0 as i128).pow(c);
                    }
                    *sum += mult * coef;
                }
                return;
            }
            for c in 0..=left {
                let mut next = acc_exp;
                for (n, &t) in next.iter_mut().zip(&terms[idx].1) {
                    *n += t * c;
                }
                if next.iter().zip(target.iter()).any(|(a, b)| a > b) {
                    break;
                }
                counts.push(c);
                rec(terms, idx + 1, left - c, next, target, counts, total, sum);
                counts.pop();
            }
        }
        let mut sum = 0;
        rec(terms, 0, e, [0; 3], target, &mut vec![], e, &mut sum);
        sum
    }

    const EXAMPLE_TERMS: [(i64, [u32; 3]); 7] = [
        (1, [4, 0, 0]),
        (1, [0, 4, 0]),
        (1, [0, 0, 4]),
        (1, [3, 1, 0]),
        (1, [1, 2, 1]),
        (-1, [0, 2, 2]),
        (3, [0, 1, 3]),
    ];

    #[test]
    fn multinomial_oracle_counts() {
        assert_eq!(multinomial_coefficient(&EXAMPLE_TERMS, 4, [8, 4, 4]), 90);
        assert_eq!(multinomial_coefficient(&EXAMPLE_TERMS, 4, [3, 9, 4]), 24);
    }

    #[test]
    fn monomial_basis_order() {
        let b = MonomialBasis::new(3, 1).unwrap();
        assert_eq!(
            b.iter().collect::<Vec<_>>(),
            vec![&[1, 0, 0][..], &[0, 1, 0], &[0, 0, 1]]
        );
        let b = MonomialBasis::new(3, 2).unwrap();
        let expected: Vec<&[u32]> = vec![
            &[2, 0, 0],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 2, 0],
            &[0, 1, 1],
            &[0, 0, 2],
        ];
        assert_eq!(b.iter().collect::<Vec<_>>(), expected);
        assert_eq!(MonomialBasis::new(3, 1).unwrap().len(), 3);
        assert!(MonomialBasis::new(3, -1).is_err());
        for nvars in 1..5 {
            for d in 0..7 {
                let b = MonomialBasis::new(nvars, d).unwrap();
                assert_eq!(b.len(), monomial_count(nvars, d));
                for (i, m) in b.iter().enumerate() {
                    assert_eq!(monomial_rank(m), i);
                }
            }
        }
    }

    #[test]
    fn products_and_powers() {
        let k = f5();
        let x0 = GradedPoly::monomial(&k, &[1, 0, 0], k.one());
        let x1 = GradedPoly::monomial(&k, &[0, 1, 0], k.one());
        assert_eq!(
            x0.mul(&x1).unwrap(),
            GradedPoly::monomial(&k, &[1, 1, 0], k.one())
        );
        let sum = x0.add(&x1).unwrap();
        let diff = x0.add(&x1.scale(k.from_int(-1))).unwrap();
        let expected = GradedPoly::monomial(&k, &[2, 0, 0], k.one())
            .add(&GradedPoly::monomial(&k, &[0, 2, 0], k.from_int(-1)))
            .unwrap();
        assert_eq!(sum.mul(&diff).unwrap(), expected);

        let f = example_f();
        assert_eq!(f.pow(0).unwrap(), GradedPoly::constant(&k, 3, k.one()));
        assert_eq!(f.mul(&f.pow(3).unwrap()).unwrap(), f.pow(4).unwrap());
        assert!(f.pow(-1).is_err());

        let f2 = FieldCtx::prime(2).unwrap();
        let s =
            GradedPoly::from_terms(&f2, 2, 1, &[(f2.one(), vec![1, 0]), (f2.one(), vec![0, 1])])
                .unwrap();
        let sq =
            GradedPoly::from_terms(&f2, 2, 2, &[(f2.one(), vec![2, 0]), (f2.one(), vec![0, 2])])
                .unwrap();
        assert_eq!(s.pow(2).unwrap(), sq);
    }

    #[test]
    fn coefficients_of_example_power_match_multinomial_oracle() {
        let k = f5();
        let f4 = example_f().pow(4).unwrap();
        let c1 = multinomial_coefficient(&EXAMPLE_TERMS, 4, [8, 4, 4]);
        let c2 = multinomial_coefficient(&EXAMPLE_TERMS, 4, [3, 9, 4]);
        assert_eq!(
            f4.coeff_of(&[8, 4, 4]).unwrap(),
            k.from_int((c1 % 5) as i64)
        );
        assert_eq!(
            f4.coeff_of(&[3, 9, 4]).unwrap(),
            k.from_int((c2 % 5) as i64)
        );
        assert_eq!(f4.coeff_of(&[8, 4, 4]).unwrap(), k.zero());
        assert_eq!(f4.coeff_of(&[3, 9, 4]).unwrap(), k.from_int(4));
        // Exhaustive comparison on every monomial of degree 16.
        for e in MonomialBasis::new(3, 16).unwrap().iter() {
            let c = multinomial_coefficient(&EXAMPLE_TERMS, 4, [e[0], e[1], e[2]]);
            assert_eq!(
                f4.coeff_of(e).unwrap(),
                k.from_int((c.rem_euclid(5)) as i64)
            );
        }
        assert!(f4.coeff_of(&[1, 1, 1]).is_err());
        let m = GradedPoly::monomial(&k, &[1, 1, 1], k.one());
        assert_eq!(m.coeff_of(&[1, 1, 1]).unwrap(), k.one());
    }

    #[test]
    fn derivatives() {
        let k = f5();
        let x4 = GradedPoly::monomial(&k, &[4, 0, 0], k.one());
        assert_eq!(
            x4.partial_derivative(0).unwrap(),
            GradedPoly::monomial(&k, &[3, 0, 0], k.from_int(4))
        );
        let x5 = GradedPoly::monomial(&k, &[5, 0, 0], k.one());
        assert!(x5.partial_derivative(0).unwrap().is_zero());
        assert!(x4.partial_derivative(3).is_err());

        let t = |c: i64, e: [u32; 3]| (k.from_int(c), e.to_vec());
        let expected = GradedPoly::from_terms(
            &k,
            3,
            3,
            &[
                t(1, [3, 0, 0]),
                t(2, [1, 1, 1]),
                t(4, [0, 3, 0]),
                t(3, [0, 1, 2]),
                t(3, [0, 0, 3]),
            ],
        )
        .unwrap();
        assert_eq!(example_f().partial_derivative(1).unwrap(), expected);
    }

    #[test]
    fn t_module_action() {
        let k = f5();
        let t = TClass::laurent_monomial(&k, &[-2, -1, -1], k.one());
        let x0 = GradedPoly::monomial(&k, &[1, 0, 0], k.one());
        let x1 = GradedPoly::monomial(&k, &[0, 1, 0], k.one());
        assert_eq!(
            t_multiply(&x0, &t).unwrap(),
            TClass::laurent_monomial(&k, &[-1, -1, -1], k.one())
        );
        assert!(t_multiply(&x1, &t).unwrap().is_zero());
        assert_eq!(t_dimension(3, -4), 3);
        assert_eq!(t_dimension(3, -3), 1);
        assert_eq!(t_dimension(3, -2), 0);
        for nvars in 1..5usize {
            for m in -(nvars as i64 + 6)..0 {
                let expected = if -m > 0 {
                    binomial((-m - 1) as u64, nvars as u64 - 1)
                } else {
                    0
                };
                assert_eq!(t_dimension(nvars, m) as u64, expected);
            }
        }
    }

    #[test]
    fn shifted_poly_and_frobenius_power() {
        let k = f5();
        let t = TClass::laurent_monomial(&k, &[-2, -1, -1], k.from_int(2));
        let tp = t.frobenius_power();
        assert_eq!(
            tp,
            TClass::laurent_monomial(&k, &[-10, -5, -5], k.from_int(2))
        );
        let poly = tp.to_shifted_poly(10).unwrap();
        assert_eq!(poly, GradedPoly::monomial(&k, &[0, 5, 5], k.from_int(2)));
        assert!(tp.to_shifted_poly(4).is_none());
    }

    #[test]
    fn render_round_trip_basic() {
        let f = example_f();
        assert_eq!(
            f.render(),
            "X0^4+X0^3*X1+X0*X1^2*X2+X1^4+4*X1^2*X2^2+3*X1*X2^3+X2^4"
        );
    }
}
