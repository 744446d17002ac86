//! Command-line surface. Exit codes: 2 parse error, 3 constraint violation,
//! 4 singular curve, 5 internal invariant violation.

pub mod parse;
pub mod report;
pub mod scan;
pub mod selftest;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::dieudonne::assemble_dm;
use crate::dieudonne::{validate_dm, DmError, PolarizedDM};
use crate::eoclass::{classify_dm, classify_fv, classify_triple, EoError};
use crate::gf::{FieldCtx, FieldError};
use crate::hwtriple::{hw_triple, plane_smoothness_check, CurveCI, HwError};
use crate::par::Execution;
use crate::semilinear::Matrix;

use self::parse::parse_poly;
use self::report::{Classification, DmTypeReport, EoReport, HwReport, Timings};
use self::scan::run_scan;
use self::selftest::{run_selftest, Fixtures};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("singular: {0}")]
    Singular(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Constraint(_) => 3,
            CliError::Singular(_) => 4,
            CliError::Internal(_) => 5,
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Parse(_) => CliError::Parse(e.to_string()),
            _ => CliError::Constraint(e.to_string()),
        }
    }
}

impl From<HwError> for CliError {
    fn from(e: HwError) -> Self {
        match e {
            HwError::InvalidCurve(_) | HwError::PDividesDegree { .. } => {
                CliError::Constraint(e.to_string())
            }
            HwError::Singular | HwError::BadU(_) | HwError::DimQ { .. } => {
                CliError::Singular(e.to_string())
            }
            HwError::Internal(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<EoError> for CliError {
    fn from(e: EoError) -> Self {
        match e {
            EoError::Triple(h) => h.into(),
            EoError::Module(DmError::Triple(h)) => h.into(),
            EoError::InvalidDieudonne(_) | EoError::Module(_) => {
                CliError::Constraint(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<DmError> for CliError {
    fn from(e: DmError) -> Self {
        EoError::from(e).into()
    }
}

fn io_err(e: io::Error) -> CliError {
    CliError::Internal(format!("i/o: {e}"))
}

#[derive(Parser, Debug)]
#[command(
    name = "eotype",
    version,
    about = "Ekedahl–Oort types of complete intersection curves over finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u64,
    /// Extension degree m of F_{p^m}.
    #[arg(long, default_value_t = 1)]
    pub ext: i64,
    /// Monic modulus coefficients "c0,c1,...,1", lowest first.
    #[arg(long, allow_hyphen_values = true)]
    pub modulus: Option<String>,
}

impl FieldArgs {
    pub fn field(&self) -> Result<FieldCtx, CliError> {
        let modulus = self.modulus.as_deref().map(parse_int_list).transpose()?;
        Ok(FieldCtx::new(self.p, self.ext, modulus.as_deref())?)
    }
}

fn parse_int_list(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Parse(format!("bad integer {s:?} in {text:?}")))
        })
        .collect()
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Ambient projective dimension; the curve is cut out by n-1 forms.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Defining form; repeat for complete intersections.
    #[arg(long = "f", required = true, allow_hyphen_values = true)]
    pub f: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub f2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub f3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub f4: Option<String>,
    /// Skip the exact smoothness check for plane curves.
    #[arg(long)]
    pub skip_smoothness: bool,
}

impl CurveArgs {
    pub fn curve(&self) -> Result<CurveCI, CliError> {
        let ctx = self.field.field()?;
        let texts: Vec<&String> = self
            .f
            .iter()
            .chain(&self.f2)
            .chain(&self.f3)
            .chain(&self.f4)
            .collect();
        let mut polys = Vec::new();
        for (i, t) in texts.iter().enumerate() {
            let f = parse_poly(t, self.n + 1, &ctx)
                .map_err(|e| CliError::Parse(format!("form {}: {e}", i + 1)))?;
            polys.push(f);
        }
        let curve = CurveCI::new(&ctx, self.n, polys)?;
        if curve.is_plane() && !self.skip_smoothness && !plane_smoothness_check(&curve) {
            return Err(CliError::Singular(
                "the plane curve has a singular point".into(),
            ));
        }
        Ok(curve)
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long)]
    pub json: bool,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a curve.
    Eotype {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the Hasse–Witt triple and the assembled Dieudonné module.
    Hw {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classify a module given by A_F: first line "g p m", then 2g rows of g entries.
    ClassifyDm {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        modulus: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Histogram of EO types of random plane curves.
    Scan {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Classify on one thread.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the built-in worked example and the small-genus enumeration.
    Selftest,
}

fn emit(output: &OutputArgs, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(io_err),
        None => stdout.write_all(text.as_bytes()).map_err(io_err),
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Eotype { curve, output } => cmd_eotype(&curve, &output, stdout),
        Command::Hw { curve, output } => cmd_hw(&curve, &output, stdout),
        Command::ClassifyDm {
            file,
            modulus,
            output,
        } => cmd_classify_dm(&file, modulus.as_deref(), &output, stdout),
        Command::Scan {
            field,
            d,
            count,
            seed,
            sequential,
            output,
        } => {
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            cmd_scan(&field, d, count, seed, exec, &output, stdout)
        }
        Command::Selftest => cmd_selftest(stdout),
    }
}

/// Curve to report, timing each stage.
pub fn eotype_report(curve: &CurveCI) -> Result<(EoReport, Matrix), CliError> {
    let t0 = Instant::now();
    let t = hw_triple(curve)?;
    let hw_us = t0.elapsed().as_micros() as u64;
    let t1 = Instant::now();
    let r = classify_triple(&t)?;
    let classify_us = t1.elapsed().as_micros() as u64;
    let timings = Timings {
        hw_us,
        classify_us,
        total_us: t0.elapsed().as_micros() as u64,
    };
    Ok((EoReport::new(curve, &t, &r, timings), t.a_phi))
}

fn cmd_eotype(
    args: &CurveArgs,
    output: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let curve = args.curve()?;
    let (rep, a_phi) = eotype_report(&curve)?;
    let text = if output.json {
        json(&rep)?
    } else {
        rep.render_text(&a_phi)
    };
    emit(output, &text, stdout)
}

fn cmd_hw(args: &CurveArgs, output: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let curve = args.curve()?;
    let t = hw_triple(&curve)?;
    let dm = assemble_dm(&t);
    let (_, v) = dm.full_fv();
    let text = if output.json {
        json(&HwReport::new(&curve, &t, &dm.a_f, &v))?
    } else {
        HwReport::render_text(&t, &dm.a_f, &v)
    };
    emit(output, &text, stdout)
}

/// Reads the `classify-dm` input format.
pub fn parse_dm_file(text: &str, modulus: Option<&str>) -> Result<PolarizedDM, CliError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or(CliError::Parse("empty module file".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [g, p, m] = head[..] else {
        return Err(CliError::Parse(format!(
            "header {header:?} is not \"g p m\""
        )));
    };
    let num = |s: &str| {
        s.parse::<i64>()
            .map_err(|_| CliError::Parse(format!("bad header entry {s:?}")))
    };
    let (g, p, m) = (num(g)?, num(p)?, num(m)?);
    if g < 1 || p < 2 {
        return Err(CliError::Constraint(format!(
            "need g ≥ 1 and p ≥ 2, got g = {g}, p = {p}"
        )));
    }
    let modulus = modulus.map(parse_int_list).transpose()?;
    let ctx = FieldCtx::new(p as u64, m, modulus.as_deref())?;
    let g = g as usize;
    let mut rows = Vec::with_capacity(2 * g);
    for (i, line) in lines.enumerate() {
        let row = line
            .split_whitespace()
            .map(|s| ctx.parse_elem(s))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != g {
            return Err(CliError::Parse(format!(
                "row {} has {} entries, expected {g}",
                i + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != 2 * g {
        return Err(CliError::Parse(format!(
            "{} rows, expected {}",
            rows.len(),
            2 * g
        )));
    }
    Ok(PolarizedDM::new(Matrix::from_rows(&ctx, &rows))?)
}

/// Validates the module, classifies it along both paths and compares.
pub fn classify_dm_report(dm: &PolarizedDM) -> Result<DmTypeReport, CliError> {
    let (f, v) = dm.full_fv();
    let rep = validate_dm(&f, &v, Some(&dm.gram))?;
    if !rep.ok() {
        let names: Vec<String> = rep.violations.iter().map(|a| a.to_string()).collect();
        return Err(CliError::Constraint(format!(
            "not a polarized Dieudonné module: {}",
            names.join("; ")
        )));
    }
    let r = classify_dm(dm)?;
    if classify_fv(&f, &v)? != r {
        return Err(CliError::Internal("table and flag paths disagree".into()));
    }
    let ctx = dm.ctx();
    Ok(DmTypeReport {
        p: ctx.p(),
        ext_degree: ctx.degree(),
        g: dm.g,
        classification: Classification::new(&r),
    })
}

fn cmd_classify_dm(
    file: &PathBuf,
    modulus: Option<&str>,
    output: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let text = fs::read_to_string(file)
        .map_err(|e| CliError::Parse(format!("{}: {e}", file.display())))?;
    let rep = classify_dm_report(&parse_dm_file(&text, modulus)?)?;
    let text = if output.json {
        json(&rep)?
    } else {
        rep.render_text()
    };
    emit(output, &text, stdout)
}

fn cmd_scan(
    field: &FieldArgs,
    d: u32,
    count: usize,
    seed: u64,
    exec: Execution,
    output: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let ctx = field.field()?;
    if d < 3 {
        return Err(CliError::Constraint(format!(
            "plane curves need degree ≥ 3, got {d}"
        )));
    }
    if u64::from(d) % ctx.p() == 0 {
        return Err(HwError::PDividesDegree {
            p: ctx.p(),
            degree: d,
        }
        .into());
    }
    let summary = run_scan(&ctx, d, count, seed, exec).map_err(|f| {
        CliError::Internal(format!("sample {} (seed {seed}): {}", f.index, f.error))
    })?;
    let text = if output.json {
        json(&summary)?
    } else {
        summary.to_csv()
    };
    emit(output, &text, stdout)
}

fn cmd_selftest(stdout: &mut dyn Write) -> Result<(), CliError> {
    let outcome = run_selftest(&Fixtures::example(), stdout).map_err(io_err)?;
    match outcome.first_failure {
        None => Ok(()),
        Some(name) => Err(CliError::Internal(format!("selftest mismatch in {name}"))),
    }
}
