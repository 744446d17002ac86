//! End-to-end check of the worked plane quartic over `F_5` and the oracle
//! enumeration for `g ≤ 3`.

use std::collections::HashSet;
use std::fmt::Debug;
use std::io::{self, Write};

use crate::cli::parse::parse_poly;
use crate::dieudonne::{
    assemble_dm, enumerate_polarized_dms, validate_dm, DEFAULT_ENUMERATION_BOUND,
};
use crate::eoclass::{classify_fv, classify_triple, final_type_from_fv};
use crate::gf::FieldCtx;
use crate::hwtriple::{hw_triple, hw_triple_general, CurveCI};
use crate::par::Execution;
use crate::semilinear::Matrix;

/// Expected values; integer matrices are reduced mod `p`.
#[derive(Clone, Debug)]
pub struct Fixtures {
    pub p: u64,
    pub curve: String,
    pub hasse_witt: Vec<Vec<i64>>,
    /// Echelon rows spanning `Ker Φ`.
    pub kernel: Vec<Vec<i64>>,
    /// `Ψ` of each kernel row, in the dual basis.
    pub psi_images: Vec<Vec<i64>>,
    pub a_f: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub final_type: Vec<usize>,
    pub weyl: Vec<usize>,
    pub weyl_word: String,
    pub p_rank: usize,
    pub a_number: usize,
    pub stratum_dim: usize,
    /// `(g, number of distinct classes)`.
    pub enumeration: Vec<(usize, usize)>,
    /// Kraft label and its expected `w`.
    pub kraft_pictures: Vec<(String, Vec<usize>)>,
}

impl Fixtures {
    pub fn example() -> Self {
        Fixtures {
            p: 5,
            curve: "X0^4+X1^4+X2^4+X0^3*X1+X0*X1^2*X2-X1^2*X2^2+3*X1*X2^3".into(),
            hasse_witt: vec![vec![0, 4, 1], vec![0, 2, 3], vec![0, 2, 3]],
            kernel: vec![vec![1, 0, 0], vec![0, 1, 1]],
            psi_images: vec![vec![3, 1, 3], vec![3, 3, 1]],
            a_f: vec![
                vec![0, -1, 1],
                vec![0, -3, 3],
                vec![0, -3, 3],
                vec![3, 1, 0],
                vec![1, 3, 0],
                vec![3, 3, 0],
            ],
            v: vec![
                vec![0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 3, 3, 1],
                vec![-3, -3, -1, -3, -3, -1],
                vec![-3, -1, -3, 0, 0, 0],
            ],
            final_type: vec![0, 0, 1, 1, 2, 2, 3],
            weyl: vec![1, 4, 2, 5, 3, 6],
            weyl_word: "s3*s2".into(),
            p_rank: 0,
            a_number: 2,
            stratum_dim: 2,
            enumeration: vec![(1, 2), (2, 4), (3, 8)],
            kraft_pictures: vec![
                ("(FFV|FVV)".into(), vec![1, 4, 2, 5, 3, 6]),
                ("(FV)+(FFVV)".into(), vec![1, 2, 4, 3, 5, 6]),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestOutcome {
    pub checks: usize,
    pub first_failure: Option<String>,
}

impl SelftestOutcome {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

struct Checker<'a> {
    out: &'a mut dyn Write,
    checks: usize,
    first_failure: Option<String>,
}

impl Checker<'_> {
    fn check<T: PartialEq + Debug>(&mut self, name: &str, expected: &T, got: &T) -> io::Result<()> {
        self.checks += 1;
        if expected == got {
            writeln!(self.out, "PASS {name}")
        } else {
            self.first_failure.get_or_insert_with(|| name.to_string());
            writeln!(self.out, "FAIL {name}: expected {expected:?}, got {got:?}")
        }
    }

    fn fail(&mut self, name: &str, why: impl std::fmt::Display) -> io::Result<()> {
        self.checks += 1;
        self.first_failure.get_or_insert_with(|| name.to_string());
        writeln!(self.out, "FAIL {name}: {why}")
    }
}

fn ints(ctx: &FieldCtx, rows: &[Vec<i64>]) -> Matrix {
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Matrix::from_ints(ctx, &refs)
}

/// Stops early only when a stage cannot produce input for the next.
pub fn run_selftest(fx: &Fixtures, out: &mut dyn Write) -> io::Result<SelftestOutcome> {
    let mut c = Checker {
        out,
        checks: 0,
        first_failure: None,
    };
    let result = run_checks(fx, &mut c);
    let outcome = SelftestOutcome {
        checks: c.checks,
        first_failure: c.first_failure.clone(),
    };
    result?;
    match &outcome.first_failure {
        None => writeln!(c.out, "selftest: PASS ({} checks)", outcome.checks)?,
        Some(name) => writeln!(c.out, "selftest: FAIL (first mismatch: {name})")?,
    }
    Ok(outcome)
}

fn run_checks(fx: &Fixtures, c: &mut Checker<'_>) -> io::Result<()> {
    let k = match FieldCtx::prime(fx.p) {
        Ok(k) => k,
        Err(e) => return c.fail("field", e),
    };
    let curve = match parse_poly(&fx.curve, 3, &k)
        .map_err(|e| e.to_string())
        .and_then(|f| CurveCI::plane(f).map_err(|e| e.to_string()))
    {
        Ok(curve) => curve,
        Err(e) => return c.fail("curve", e),
    };
    let t = match hw_triple(&curve) {
        Ok(t) => t,
        Err(e) => return c.fail("hasse_witt", e),
    };
    c.check("hasse_witt", &ints(&k, &fx.hasse_witt), &t.a_phi)?;
    c.check("ker_phi", &ints(&k, &fx.kernel), &t.kappa)?;
    let psi_cols = if fx.psi_images.is_empty() {
        Matrix::zeros(&k, t.g, 0)
    } else {
        ints(&k, &fx.psi_images).transpose()
    };
    c.check("psi", &psi_cols, &t.a_psi)?;
    match hw_triple_general(&curve) {
        Ok(g) => c.check("general_path_triple", &t, &g)?,
        Err(e) => c.fail("general_path_triple", e)?,
    }
    let dm = assemble_dm(&t);
    c.check("a_f", &ints(&k, &fx.a_f), &dm.a_f)?;
    let (full_f, full_v) = dm.full_fv();
    c.check("v", &ints(&k, &fx.v), &full_v)?;
    match validate_dm(&full_f, &full_v, Some(&dm.gram)) {
        Ok(rep) => c.check(
            "dm_axioms",
            &Vec::<String>::new(),
            &rep.violations.iter().map(|a| a.to_string()).collect(),
        )?,
        Err(e) => c.fail("dm_axioms", e)?,
    }
    let r = match classify_triple(&t) {
        Ok(r) => r,
        Err(e) => return c.fail("final_type", e),
    };
    c.check("final_type", &fx.final_type, &r.final_type.0)?;
    match final_type_from_fv(&full_f, &full_v) {
        Ok(f) => c.check("final_type_fv", &fx.final_type, &f.0)?,
        Err(e) => c.fail("final_type_fv", e)?,
    }
    c.check("weyl_one_line", &fx.weyl, &r.weyl.one_line)?;
    c.check("weyl_word", &fx.weyl_word, &r.weyl.word_string())?;
    c.check("p_rank", &fx.p_rank, &r.p_rank)?;
    c.check("a_number", &fx.a_number, &r.a_number)?;
    c.check("stratum_dim", &fx.stratum_dim, &r.stratum_dim)?;
    for &(g, expected) in &fx.enumeration {
        let name = format!("enumeration_g{g}");
        let mods =
            match enumerate_polarized_dms(&k, g, DEFAULT_ENUMERATION_BOUND, Execution::default()) {
                Ok(m) => m,
                Err(e) => {
                    c.fail(&name, e)?;
                    continue;
                }
            };
        let mut classes = HashSet::new();
        for m in &mods {
            match classify_fv(&m.full_f, &m.full_v) {
                Ok(r) => {
                    classes.insert(r.weyl.one_line);
                }
                Err(e) => {
                    c.fail(&name, format!("{}: {e}", m.label()))?;
                }
            }
            if g == 3 {
                for (label, w) in &fx.kraft_pictures {
                    if &m.label() == label {
                        let got = classify_fv(&m.full_f, &m.full_v)
                            .map(|r| r.weyl.one_line)
                            .unwrap_or_default();
                        c.check(&format!("kraft {label}"), w, &got)?;
                    }
                }
            }
        }
        c.check(&name, &expected, &classes.len())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_pass() {
        let mut buf = Vec::new();
        let o = run_selftest(&Fixtures::example(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(o.passed(), "{text}");
        assert!(text.contains("PASS kraft (FFV|FVV)"));
        assert!(text.contains("PASS kraft (FV)+(FFVV)"));
        assert!(text.ends_with(&format!("selftest: PASS ({} checks)\n", o.checks)));
    }

    #[test]
    fn corrupted_fixture_names_first_mismatch() {
        let mut fx = Fixtures::example();
        fx.psi_images[1][2] = 2;
        fx.stratum_dim = 3;
        let mut buf = Vec::new();
        let o = run_selftest(&fx, &mut buf).unwrap();
        assert_eq!(o.first_failure.as_deref(), Some("psi"));
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("FAIL psi"));
        assert!(text.contains("FAIL stratum_dim"));
        assert!(text.ends_with("selftest: FAIL (first mismatch: psi)\n"));
    }
}
