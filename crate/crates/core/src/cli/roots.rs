use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde_json::json;

use super::{out_path, write_json, CliError, Session};
use crate::cli::Check;
use crate::exactalg::scalar;
use crate::roots::{check_ears, gen_locally_finite, gen_supersystem, project_radical, EarsReport, FiniteType, RootSet, RootSetJson, SuperRow, Weight};

#[derive(Subcommand, Debug)]
pub enum RootsCmd {
    /// Generate a root system or supersystem.
    Gen {
        #[command(flatten)]
        src: Source,
        /// Write the root set JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the axioms S1–S5.
    Check {
        #[command(flatten)]
        src: Source,
    },
    /// Split off the radical of the form and check the fiber inclusions.
    Project {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Args, Debug)]
pub struct Source {
    /// Finite type: A, B, C, D, BC or G2.
    #[arg(long = "type", value_name = "TYPE")]
    kind: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    /// Supersystem row such as "B(T,T')" or "dotA(0,T)".
    #[arg(long)]
    row: Option<String>,
    /// Index-set sizes for --row, comma separated.
    #[arg(long, value_delimiter = ',')]
    ranks: Vec<usize>,
    /// Parameter of the D(2,1,λ) row, as p/q.
    #[arg(long)]
    lambda: Option<String>,
    /// Root set JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn load(src: &Source, s: &mut Session) -> Result<RootSet, CliError> {
    match (&src.kind, &src.row, &src.input) {
        (Some(k), None, None) => {
            let kind: FiniteType = k.parse()?;
            let rank = src.rank.ok_or_else(|| CliError::Usage("--type needs --rank".into()))?;
            Ok(gen_locally_finite(kind, rank)?)
        }
        (None, Some(row), None) => {
            let lambda = src.lambda.as_deref().map(scalar::parse).transpose()?;
            Ok(gen_supersystem(&SuperRow::parse(row, &src.ranks, lambda)?)?)
        }
        (None, None, Some(path)) => {
            let j: RootSetJson = s.read_json(path)?;
            RootSet::from_json(&j).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })
        }
        _ => Err(CliError::Usage("give exactly one of --type, --row or --input".into())),
    }
}

fn labels<'a>(ws: impl IntoIterator<Item = &'a Weight>) -> Vec<String> {
    ws.into_iter().map(Weight::label).collect()
}

fn axiom_checks(rep: &EarsReport, prefix: &str, s: &mut Session) {
    for a in &rep.axioms {
        s.check(Check::from_witnesses(format!("{prefix}{}", a.axiom), a.witnesses.clone()));
    }
}

fn summary(r: &RootSet, rep: &EarsReport, s: &mut Session) {
    s.result("tag", r.tag.clone());
    s.result("nonzero_roots", r.len_nonzero());
    s.result("real", rep.real.len());
    s.result("imaginary", rep.imaginary.len());
    s.result("radical_roots", rep.radical_roots.clone());
    s.result("nondegenerate", rep.nondegenerate);
    s.result("irreducible", rep.irreducible);
    s.result("real_type", rep.real_type);
}

pub fn run(cmd: RootsCmd, s: &mut Session) -> Result<(), CliError> {
    match cmd {
        RootsCmd::Gen { src, out } => {
            let r = load(&src, s)?;
            let rep = check_ears(&[], &r);
            summary(&r, &rep, s);
            match out_path(&out) {
                Some(p) => {
                    write_json(p, &r.to_json())?;
                    s.result("written", p.display().to_string());
                }
                None => s.result("root_set", r.to_json()),
            }
        }
        RootsCmd::Check { src } => {
            let r = load(&src, s)?;
            let rep = check_ears(&[], &r);
            axiom_checks(&rep, "", s);
            summary(&r, &rep, s);
        }
        RootsCmd::Project { src } => {
            let r = load(&src, s)?;
            let d = project_radical(&r);
            s.check(Check::new("projection reconstructs R", d.reconstructs));
            axiom_checks(&d.projected_report, "projected: ", s);
            if let Some(inc) = &d.inclusions {
                let w = inc.witnesses.clone();
                let n = inc.checked as u64;
                let out = inc.outside_window as u64;
                s.check(Check::new("S−2S ⊆ S", inc.s_minus_2s).checked(n).inconclusive(out).witnesses(w.clone()));
                s.check(Check::new("S+F ⊆ S", inc.s_plus_f).checked(n).inconclusive(out).witnesses(w.clone()));
                s.check(Check::new("2S+F ⊆ F", inc.two_s_plus_f).checked(n).inconclusive(out).witnesses(w));
            }
            s.result("radical", labels(&d.radical));
            s.result("dot_roots", labels(&d.dot_roots.roots));
            let fibers: BTreeMap<String, Vec<String>> = d.fibers.iter().map(|(k, v)| (k.label(), labels(v))).collect();
            s.result("fibers", fibers);
            s.result("S", d.s.as_ref().map(labels));
            s.result("F", d.f.as_ref().map(labels));
            s.result("dot_summary", json!({"real": d.projected_report.real.len(), "imaginary": d.projected_report.imaginary.len()}));
        }
    }
    Ok(())
}
