//! Machine-readable and text reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::eoclass::EoResult;
use crate::gf::{FieldCtx, FieldElem};
use crate::hwtriple::{CurveCI, HwTriple};
use crate::semilinear::Matrix;

/// An integer for prime fields, a coefficient vector otherwise.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum ElemJson {
    Int(u64),
    Coeffs(Vec<u64>),
}

impl ElemJson {
    pub fn from_elem(ctx: &FieldCtx, x: FieldElem) -> Self {
        if ctx.is_prime_field() {
            ElemJson::Int(u64::from(x.packed()))
        } else {
            ElemJson::Coeffs(ctx.coeffs(x))
        }
    }

    pub fn to_elem(&self, ctx: &FieldCtx) -> FieldElem {
        match self {
            ElemJson::Int(v) => ctx.from_int((*v % ctx.p()) as i64),
            ElemJson::Coeffs(v) => {
                ctx.from_coeffs(&v.iter().map(|&c| c as i64).collect::<Vec<_>>())
            }
        }
    }
}

pub fn matrix_json(m: &Matrix) -> Vec<Vec<ElemJson>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|&x| ElemJson::from_elem(m.ctx(), x)).collect())
        .collect()
}

/// Microseconds.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq, Default)]
pub struct Timings {
    pub hw_us: u64,
    pub classify_us: u64,
    pub total_us: u64,
}

/// The classification fields shared by every report.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub a_number: usize,
    pub p_rank: usize,
    pub final_type: Vec<usize>,
    pub weyl_one_line: Vec<usize>,
    pub weyl_word: String,
    pub stratum_dim: usize,
    pub fast_tag: String,
}

impl Classification {
    pub fn new(r: &EoResult) -> Self {
        Classification {
            a_number: r.a_number,
            p_rank: r.p_rank,
            final_type: r.final_type.0.clone(),
            weyl_one_line: r.weyl.one_line.clone(),
            weyl_word: r.weyl.word_string(),
            stratum_dim: r.stratum_dim,
            fast_tag: r.fast_tag.to_string(),
        }
    }

    fn text_lines(&self) -> Vec<String> {
        vec![
            format!("fast tag    : {}", self.fast_tag),
            format!("final type  : {}", list("(", &self.final_type, ")")),
            format!(
                "w           : {} = {}",
                list("[", &self.weyl_one_line, "]"),
                self.weyl_word
            ),
            format!("p-rank      : {}", self.p_rank),
            format!("a-number    : {}", self.a_number),
            format!("EO stratum  : dimension {}", self.stratum_dim),
        ]
    }
}

fn list(open: &str, v: &[usize], close: &str) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{open}{}{close}", parts.join(","))
}

fn matrix_lines(m: &Matrix) -> Vec<String> {
    if m.rows() == 0 || m.cols() == 0 {
        return vec![format!("  ({}×{})", m.rows(), m.cols())];
    }
    let cells: Vec<Vec<String>> = m.to_rows_rendered();
    let width = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| {
            let row: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            format!("  [{}]", row.join(" "))
        })
        .collect()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct EoReport {
    pub p: u64,
    pub ext_degree: usize,
    pub n: usize,
    pub degrees: Vec<u32>,
    pub genus: usize,
    /// Row-major.
    pub hasse_witt: Vec<Vec<ElemJson>>,
    #[serde(flatten)]
    pub classification: Classification,
    pub timings: Timings,
}

impl EoReport {
    pub fn new(curve: &CurveCI, t: &HwTriple, r: &EoResult, timings: Timings) -> Self {
        let ctx = curve.ctx();
        EoReport {
            p: ctx.p(),
            ext_degree: ctx.degree(),
            n: curve.n(),
            degrees: curve.degrees(),
            genus: t.g,
            hasse_witt: matrix_json(&t.a_phi),
            classification: Classification::new(r),
            timings,
        }
    }

    pub fn render_text(&self, a_phi: &Matrix) -> String {
        let mut out = vec![format!(
            "curve       : P^{} over F_{}, degrees {:?}, genus {}",
            self.n,
            field_name(self.p, self.ext_degree),
            self.degrees,
            self.genus
        )];
        out.push("Hasse-Witt  :".to_string());
        out.extend(matrix_lines(a_phi));
        out.extend(self.classification.text_lines());
        out.push(format!(
            "timings     : hw {} us, classify {} us, total {} us",
            self.timings.hw_us, self.timings.classify_us, self.timings.total_us
        ));
        out.join("\n") + "\n"
    }
}

/// Output of `hw`: the triple and the assembled module.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct HwReport {
    pub p: u64,
    pub ext_degree: usize,
    pub n: usize,
    pub degrees: Vec<u32>,
    pub genus: usize,
    pub hasse_witt: Vec<Vec<ElemJson>>,
    /// Rows span the linear null space of the Hasse–Witt matrix.
    pub kernel_basis: Vec<Vec<ElemJson>>,
    /// Column `j` is `Ψ` of kernel vector `j` in the dual basis.
    pub psi: Vec<Vec<ElemJson>>,
    pub a_f: Vec<Vec<ElemJson>>,
    pub v: Vec<Vec<ElemJson>>,
    pub fast_tag: String,
}

impl HwReport {
    pub fn new(curve: &CurveCI, t: &HwTriple, a_f: &Matrix, v: &Matrix) -> Self {
        let ctx = curve.ctx();
        HwReport {
            p: ctx.p(),
            ext_degree: ctx.degree(),
            n: curve.n(),
            degrees: curve.degrees(),
            genus: t.g,
            hasse_witt: matrix_json(&t.a_phi),
            kernel_basis: matrix_json(&t.kappa),
            psi: matrix_json(&t.a_psi),
            a_f: matrix_json(a_f),
            v: matrix_json(v),
            fast_tag: t.tag.to_string(),
        }
    }

    pub fn render_text(t: &HwTriple, a_f: &Matrix, v: &Matrix) -> String {
        let mut out = vec![
            format!("genus       : {}", t.g),
            "Hasse-Witt  :".to_string(),
        ];
        out.extend(matrix_lines(&t.a_phi));
        out.push("Ker Phi     : rows".to_string());
        out.extend(matrix_lines(&t.kappa));
        out.push("Psi         : columns".to_string());
        out.extend(matrix_lines(&t.a_psi));
        out.push("A_F         :".to_string());
        out.extend(matrix_lines(a_f));
        out.push("V           :".to_string());
        out.extend(matrix_lines(v));
        out.push(format!("fast tag    : {}", t.tag));
        out.join("\n") + "\n"
    }
}

/// Output of `classify-dm`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DmTypeReport {
    pub p: u64,
    pub ext_degree: usize,
    pub g: usize,
    #[serde(flatten)]
    pub classification: Classification,
}

impl DmTypeReport {
    pub fn render_text(&self) -> String {
        let mut out = vec![format!(
            "module      : dimension {} over F_{}",
            2 * self.g,
            field_name(self.p, self.ext_degree)
        )];
        out.extend(self.classification.text_lines());
        out.join("\n") + "\n"
    }
}

fn field_name(p: u64, m: usize) -> String {
    if m == 1 {
        p.to_string()
    } else {
        format!("{p}^{m}")
    }
}

/// Structural check of a serialized [`EoReport`].
pub fn check_report_schema(v: &Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("report is not an object")?;
    let uint = |k: &str| -> Result<u64, String> {
        obj.get(k)
            .and_then(Value::as_u64)
            .ok_or(format!("`{k}` missing or not an unsigned integer"))
    };
    let uint_list = |k: &str| -> Result<Vec<u64>, String> {
        obj.get(k)
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(Value::as_u64).collect::<Option<Vec<_>>>())
            .ok_or(format!("`{k}` missing or not a list of unsigned integers"))
    };
    let p = uint("p")?;
    let m = uint("ext_degree")?;
    let n = uint("n")?;
    let degrees = uint_list("degrees")?;
    if degrees.len() as u64 + 1 != n {
        return Err(format!("{} degrees for P^{n}", degrees.len()));
    }
    let g = uint("genus")? as usize;
    for k in ["a_number", "p_rank", "stratum_dim"] {
        if uint(k)? as usize
            > if k == "stratum_dim" {
                g * (g + 1) / 2
            } else {
                g
            }
        {
            return Err(format!("`{k}` out of range"));
        }
    }
    let f = uint_list("final_type")?;
    if f.len() != 2 * g + 1 {
        return Err(format!(
            "final_type has length {}, expected {}",
            f.len(),
            2 * g + 1
        ));
    }
    let w = uint_list("weyl_one_line")?;
    if w.len() != 2 * g {
        return Err(format!(
            "weyl_one_line has length {}, expected {}",
            w.len(),
            2 * g
        ));
    }
    for k in ["weyl_word", "fast_tag"] {
        obj.get(k)
            .and_then(Value::as_str)
            .ok_or(format!("`{k}` missing or not a string"))?;
    }
    let hw = obj
        .get("hasse_witt")
        .and_then(Value::as_array)
        .ok_or("`hasse_witt` missing")?;
    if hw.len() != g {
        return Err(format!("hasse_witt has {} rows, expected {g}", hw.len()));
    }
    for row in hw {
        let row = row.as_array().ok_or("hasse_witt row is not a list")?;
        if row.len() != g {
            return Err("hasse_witt is not square".into());
        }
        for e in row {
            let ok = match e {
                Value::Number(x) => m == 1 && x.as_u64().is_some_and(|x| x < p),
                Value::Array(cs) => {
                    m > 1
                        && cs.len() as u64 == m
                        && cs.iter().all(|c| c.as_u64().is_some_and(|c| c < p))
                }
                _ => false,
            };
            if !ok {
                return Err(format!("bad field element {e}"));
            }
        }
    }
    let t = obj
        .get("timings")
        .and_then(Value::as_object)
        .ok_or("`timings` missing")?;
    for k in ["hw_us", "classify_us", "total_us"] {
        t.get(k)
            .and_then(Value::as_u64)
            .ok_or(format!("timings.{k} missing"))?;
    }
    Ok(())
}
