use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde_json::json;

use super::{out_path, write_json, CliError, Session};
use crate::cli::Check;
use crate::exactalg::{check_super_antisymmetry, check_super_jacobi, Parity, Scope, SuperAlgebra};
use crate::graded::{build_graded, build_graded_with, psi_root_set, r_root_set, verify_coordinate_axioms, CoordinateData, DataJson, GradedAlgebra, Sector};
use crate::osp::build_context;

pub const BUILTINS: [&str; 7] = ["trivial", "laurent", "laurent-hermitian", "laurent-central", "exchange", "matrix-transpose", "broken-involution"];

#[derive(Subcommand, Debug)]
pub enum GradedCmd {
    /// Write one of the built-in coordinate data sets as JSON.
    EmitData {
        /// One of trivial, laurent, laurent-hermitian, laurent-central, exchange, matrix-transpose, broken-involution.
        #[arg(long)]
        name: String,
        #[arg(short = 'm', default_value_t = 1)]
        m: u32,
        #[arg(short = 'n', default_value_t = 1)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the conditions on coordinate data.
    VerifyData {
        #[command(flatten)]
        a: DataArgs,
    },
    /// Build the graded algebra and report its shape.
    Build {
        #[command(flatten)]
        a: DataArgs,
    },
    /// Super-Jacobi identity on basis triples of the built algebra.
    Jacobi {
        #[command(flatten)]
        a: DataArgs,
    },
    /// Check root grading, fineness and the predivision property.
    CheckRg {
        #[command(flatten)]
        a: DataArgs,
    },
}

#[derive(Args, Debug)]
pub struct DataArgs {
    /// Coordinate data JSON file, or the name of a built-in data set.
    #[arg(long)]
    data: String,
    #[arg(short = 'm')]
    m: u32,
    #[arg(short = 'n')]
    n: u32,
    /// Grading pair (m0,n0) when it differs from (m,n).
    #[arg(long, value_delimiter = ',', num_args = 2, value_name = "M0,N0")]
    grading: Option<Vec<u32>>,
}

fn builtin(name: &str, window: i64, m: u32, n: u32) -> Result<CoordinateData, CliError> {
    Ok(match name {
        "trivial" => CoordinateData::trivial(),
        "laurent" => CoordinateData::laurent(window),
        "laurent-hermitian" => CoordinateData::laurent_hermitian(window),
        "laurent-central" => CoordinateData::laurent_central(window),
        "exchange" => CoordinateData::exchange(),
        "matrix-transpose" => CoordinateData::matrix_transpose(m, n)?,
        "broken-involution" => CoordinateData::broken_involution(),
        other => return Err(CliError::Usage(format!("unknown data set {other:?}; expected a file or one of {}", BUILTINS.join(", ")))),
    })
}

/// A file if one exists at `src`, otherwise a built-in name.
pub(crate) fn load_data(src: &str, m: u32, n: u32, s: &mut Session) -> Result<CoordinateData, CliError> {
    let path = PathBuf::from(src);
    if path.exists() {
        let j: DataJson = s.read_json(&path)?;
        return CoordinateData::from_json(&j).map_err(|e| CliError::Input { path: src.into(), msg: e.to_string() });
    }
    builtin(src, s.global.window.unwrap_or(2), m, n)
}

fn build(a: &DataArgs, data: &CoordinateData) -> Result<GradedAlgebra, CliError> {
    let ctx = build_context(a.m, a.n)?;
    Ok(match a.grading.as_deref() {
        None => build_graded(&ctx, data)?,
        Some([m0, n0]) => build_graded_with(&ctx, data, *m0, *n0)?,
        Some(_) => return Err(CliError::Usage("--grading takes two values".into())),
    })
}

pub fn run(cmd: GradedCmd, s: &mut Session) -> Result<(), CliError> {
    match cmd {
        GradedCmd::EmitData { name, m, n, out } => {
            let data = builtin(&name, s.global.window.unwrap_or(2), m, n)?;
            match out_path(&out) {
                Some(p) => {
                    write_json(p, &data.to_json())?;
                    s.result("written", p.display().to_string());
                }
                None => s.result("data", data.to_json()),
            }
            s.result("dims", json!({"a": data.dim_a(), "c": data.dim_c(), "d": data.dim_d()}));
        }
        GradedCmd::VerifyData { a } => {
            let data = load_data(&a.data, a.m, a.n, s)?;
            let rep = verify_coordinate_axioms(&data, a.m, a.n)?;
            for c in &rep.checks {
                s.check(Check::new(&c.label, c.passed).checked(c.checked).inconclusive(c.skipped_out_of_window).witnesses(c.witness.iter().cloned().collect()));
            }
            s.result("data", rep.data.clone());
        }
        GradedCmd::Build { a } => {
            let data = load_data(&a.data, a.m, a.n, s)?;
            let l = build(&a, &data)?;
            let all: Vec<usize> = (0..l.dim()).collect();
            let anti = check_super_antisymmetry(&l, &all)?;
            s.check(Check::from_witnesses("super-antisymmetry", anti.map(|(i, j)| format!("({}, {})", l.label(i), l.label(j))).into_iter().collect()));
            let sectors: serde_json::Map<String, serde_json::Value> = [Sector::G, Sector::S, Sector::U, Sector::D]
                .iter()
                .map(|&sec| (format!("{sec:?}"), json!(l.sector_indices(sec).len())))
                .collect();
            let odd = (0..l.dim()).filter(|&i| l.parity(i) == Parity::Odd).count();
            s.result("algebra", l.name.clone());
            s.result("dim", l.dim());
            s.result("odd_dim", odd);
            s.result("sectors", sectors);
            s.result("degrees", json!([l.degrees().iter().min(), l.degrees().iter().max()]));
        }
        GradedCmd::Jacobi { a } => {
            let data = load_data(&a.data, a.m, a.n, s)?;
            let l = build(&a, &data)?;
            let scope = s.global.scope(Scope::Exhaustive);
            let rep = check_super_jacobi(&l, None, scope, s.global.seed)?;
            let w = rep.violation.iter().map(|v| format!("[{}, {}, {}]", v[0], v[1], v[2])).collect();
            s.check(Check::new("super-Jacobi", rep.passed()).checked(rep.checked).inconclusive(rep.skipped_out_of_window).witnesses(w));
            s.result("algebra", l.name.clone());
            s.result("dim", l.dim());
            s.result("scope", rep.scope);
        }
        GradedCmd::CheckRg { a } => {
            if a.grading.is_some() {
                return Err(CliError::Usage("check-rg grades by (m,n); drop --grading".into()));
            }
            let data = load_data(&a.data, a.m, a.n, s)?;
            let l = build(&a, &data)?;
            let phi = r_root_set(a.m, a.n);
            let r = if data.dim_c() == 0 { phi.clone() } else { psi_root_set(a.m, a.n) };
            let rep = crate::graded::verify_root_graded(&l, &r, &phi)?;
            s.check(Check::from_witnesses("weights lie in R", rep.outside_r.clone()));
            s.check(Check::new("Φ is a full subsystem of R containing 0", rep.phi_contains_zero && rep.phi_inside_r));
            s.check(Check::new("compatible with the weight grading", rep.compatible).witnesses(rep.compatibility_witness.iter().cloned().collect()));
            s.check(Check::new("L^0 = Σ [L^α, L^−α]", rep.zero_space_generated == rep.zero_space_dim));
            s.check(Check::from_witnesses("toral elements at the roots of Φ", rep.toral_missing.clone()));
            s.check(Check::new("root-graded", rep.root_graded));
            s.check(Check::new("fine", rep.fine).witnesses(rep.fine_witness.iter().cloned().collect()));
            s.check(Check::new("predivision", rep.predivision).witnesses(rep.predivision_missing.clone()).inconclusive(rep.skipped_out_of_window));
            s.result("algebra", rep.algebra.clone());
            s.result("R", r.tag.clone());
            s.result("dim", rep.dim);
            s.result("support", rep.support.len());
        }
    }
    Ok(())
}
