//! Seeded census of random smooth plane curves.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eoclass::{classify_curve, EoError, EoResult, WeylCoset};
use crate::gf::FieldCtx;
use crate::hwtriple::{plane_smoothness_check, CurveCI, HwError};
use crate::par::{self, Execution};
use crate::poly::{monomial_count, GradedPoly};

/// All coefficients drawn uniformly from `F_q`, in monomial order, from one
/// stream; sample `i` is the same no matter how many follow it.
pub fn sample_plane_forms(ctx: &FieldCtx, d: u32, count: usize, seed: u64) -> Vec<GradedPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = monomial_count(3, i64::from(d));
    (0..count)
        .map(|_| {
            let coeffs = (0..len).map(|_| ctx.random(&mut rng)).collect();
            GradedPoly::from_coeffs(ctx, 3, d, coeffs)
        })
        .collect()
}

enum Outcome {
    Smooth(Box<EoResult>),
    Singular,
    Failed(EoError),
}

fn classify_sample(f: GradedPoly) -> Outcome {
    let curve = match CurveCI::plane(f) {
        Ok(c) => c,
        Err(HwError::InvalidCurve(_)) => return Outcome::Singular,
        Err(e) => return Outcome::Failed(e.into()),
    };
    if !plane_smoothness_check(&curve) {
        return Outcome::Singular;
    }
    match classify_curve(&curve) {
        Ok((_, r)) => Outcome::Smooth(Box::new(r)),
        Err(e) => Outcome::Failed(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub weyl_one_line: Vec<usize>,
    pub final_type: Vec<usize>,
    pub p_rank: usize,
    pub a_number: usize,
    pub stratum_dim: usize,
    pub count: usize,
}

/// Rows are sorted by one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub rows: Vec<ScanRow>,
    pub singular: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanFailure {
    pub index: usize,
    pub error: EoError,
}

pub fn run_scan(
    ctx: &FieldCtx,
    d: u32,
    count: usize,
    seed: u64,
    exec: Execution,
) -> Result<ScanSummary, ScanFailure> {
    let forms = sample_plane_forms(ctx, d, count, seed);
    let outcomes = par::map(exec, forms, classify_sample);
    let mut hist: BTreeMap<WeylCoset, (EoResult, usize)> = BTreeMap::new();
    let mut singular = 0;
    for (index, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Smooth(r) => hist.entry(r.weyl.clone()).or_insert((*r, 0)).1 += 1,
            Outcome::Singular => singular += 1,
            Outcome::Failed(error) => return Err(ScanFailure { index, error }),
        }
    }
    let rows = hist
        .into_values()
        .map(|(r, count)| ScanRow {
            weyl_one_line: r.weyl.one_line,
            final_type: r.final_type.0,
            p_rank: r.p_rank,
            a_number: r.a_number,
            stratum_dim: r.stratum_dim,
            count,
        })
        .collect();
    Ok(ScanSummary {
        rows,
        singular,
        total: count,
    })
}

fn spaced(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl ScanSummary {
    pub fn smooth(&self) -> usize {
        self.rows.iter().map(|r| r.count).sum()
    }

    /// Header, one row per class, then `singular` and `total` rows carrying
    /// only a count. Lists are space separated; lines end in LF.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let write = |w: &mut csv::Writer<Vec<u8>>, rec: [String; 6]| {
            w.write_record(rec).expect("in-memory write")
        };
        write(
            &mut w,
            [
                "weyl_one_line",
                "final_type",
                "p_rank",
                "a_number",
                "stratum_dim",
                "count",
            ]
            .map(String::from),
        );
        for r in &self.rows {
            write(
                &mut w,
                [
                    spaced(&r.weyl_one_line),
                    spaced(&r.final_type),
                    r.p_rank.to_string(),
                    r.a_number.to_string(),
                    r.stratum_dim.to_string(),
                    r.count.to_string(),
                ],
            );
        }
        for (label, n) in [("singular", self.singular), ("total", self.total)] {
            write(
                &mut w,
                [
                    label.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    n.to_string(),
                ],
            );
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
    }
}
