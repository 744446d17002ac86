#![allow(dead_code)]

use eotype::gf::FieldCtx;
use eotype::hwtriple::{ci_q_basis, genus, plane_smoothness_check, CurveCI};
use eotype::poly::{residue_pairing, GradedPoly, MonomialBasis};
use eotype::semilinear::Matrix;
use rand::Rng;

pub const EXAMPLE: &str = "X0^4+X1^4+X2^4+X0^3*X1+X0*X1^2*X2-X1^2*X2^2+3*X1*X2^3";

pub fn random_form<R: Rng>(ctx: &FieldCtx, nvars: usize, d: u32, rng: &mut R) -> GradedPoly {
    let len = eotype::poly::monomial_count(nvars, i64::from(d));
    GradedPoly::from_coeffs(ctx, nvars, d, (0..len).map(|_| ctx.random(rng)).collect())
}

/// Rejection-samples a smooth plane curve of degree `d`.
pub fn random_smooth_plane<R: Rng>(ctx: &FieldCtx, d: u32, rng: &mut R) -> CurveCI {
    loop {
        let f = random_form(ctx, 3, d, rng);
        if f.is_zero() {
            continue;
        }
        let c = CurveCI::plane(f).expect("valid degree");
        if plane_smoothness_check(&c) {
            return c;
        }
    }
}

/// `[g_k · q_i]` over monomials `g_k` of degree `Σd - n - 1` and the `Q`
/// basis; perfect exactly when its rank is the genus.
pub fn q_pairing(curve: &CurveCI) -> Matrix {
    let ctx = curve.ctx();
    let q = ci_q_basis(curve).unwrap();
    let deg = i64::from(curve.total_degree()) - curve.nvars() as i64;
    let mons = MonomialBasis::new(curve.nvars(), deg).unwrap();
    let mut m = Matrix::zeros(ctx, q.dim(), mons.len());
    for (k, e) in mons.iter().enumerate() {
        let g = GradedPoly::monomial(ctx, e, ctx.one());
        for i in 0..q.dim() {
            m[(i, k)] = residue_pairing(&g, &q.class(i)).unwrap();
        }
    }
    m
}

pub fn q_dim_and_pairing_ok(curve: &CurveCI) -> Result<(), String> {
    let g = genus(curve);
    let q = ci_q_basis(curve).map_err(|e| e.to_string())?;
    if q.dim() != g {
        return Err(format!("dim Q = {} but genus {g}", q.dim()));
    }
    let r = q_pairing(curve).rank();
    if r != g {
        return Err(format!("pairing rank {r} < genus {g}"));
    }
    Ok(())
}

fn eval(k: &FieldCtx, f: &GradedPoly, x: &[eotype::gf::FieldElem]) -> eotype::gf::FieldElem {
    f.terms().into_iter().fold(k.zero(), |acc, (c, e)| {
        let t = x
            .iter()
            .zip(&e)
            .fold(c, |t, (&xi, &ei)| k.mul(t, k.pow(xi, u64::from(ei))));
        k.add(acc, t)
    })
}

/// Brute-force search for a point of `P^n(F_{p^m})` on the curve where the
/// Jacobian of the defining forms drops rank; prime-field curves only.
pub fn has_singular_point_over(curve: &CurveCI, m: i64) -> bool {
    let base = curve.ctx();
    let k = FieldCtx::new(base.p(), m, None).unwrap();
    let nv = curve.nvars();
    let lift = |f: &GradedPoly| {
        let cs = f
            .coeffs()
            .iter()
            .map(|c| k.from_int(i64::from(c.packed())))
            .collect();
        GradedPoly::from_coeffs(&k, nv, f.degree(), cs)
    };
    let polys: Vec<GradedPoly> = curve.polys().iter().map(lift).collect();
    let jac: Vec<Vec<GradedPoly>> = polys
        .iter()
        .map(|f| (0..nv).map(|j| f.partial_derivative(j).unwrap()).collect())
        .collect();
    let elems: Vec<_> = k.elements().collect();
    let q = elems.len();
    for lead in 0..nv {
        for code in 0..q.pow((nv - 1 - lead) as u32) {
            let mut x = vec![k.zero(); nv];
            x[lead] = k.one();
            let mut c = code;
            for xj in x.iter_mut().skip(lead + 1) {
                *xj = elems[c % q];
                c /= q;
            }
            if polys.iter().any(|f| !eval(&k, f, &x).is_zero()) {
                continue;
            }
            let rows: Vec<Vec<_>> = jac
                .iter()
                .map(|r| r.iter().map(|d| eval(&k, d, &x)).collect())
                .collect();
            if Matrix::from_rows(&k, &rows).rank() < polys.len() {
                return true;
            }
        }
    }
    false
}
