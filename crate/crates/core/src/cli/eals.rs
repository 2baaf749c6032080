use std::path::{Path, PathBuf};

use clap::Subcommand;
use serde::{Deserialize, Serialize};

use super::{out_path, write_json, CliError, Session};
use crate::cli::Check;
use crate::eals::{affinize, center_of, check_eals, core, loop_form, round_trip, verify_core_graded, AffinizedAlgebra, EalsError, SuperToralTriple, TripleJson, Verdict};
use crate::eals::combo_label;
use crate::exactalg::{SparseVec, SuperAlgebra};
use crate::graded::{build_graded, psi_root_set, r_root_set, CoordinateData, DataJson, GradedAlgebra};
use crate::osp::build_context;
use crate::roots::{check_ears, Weight};

#[derive(Subcommand, Debug)]
pub enum EalsCmd {
    /// Check the hypotheses on a graded base algebra and build g ⊕ V ⊕ V†.
    Affinize {
        /// Base description: {"m": M, "n": N, "data": <coordinate data, optional>}.
        #[arg(long)]
        base: PathBuf,
        /// Degree window of the default Laurent data.
        #[arg(long, value_name = "K")]
        lambda_window: Option<i64>,
        /// Write the affinized algebra JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the extended affine axioms.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Core, its center and the radical projection of the root set.
    Core {
        #[arg(long)]
        input: PathBuf,
        /// Base the input was built from; enables the comparison core/Z(core) ≅ base.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, value_name = "K")]
        lambda_window: Option<i64>,
    },
}

/// `{m, n, data}`; without `data` the base is the Laurent loop algebra.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseJson {
    pub m: u32,
    pub n: u32,
    #[serde(default)]
    pub data: Option<DataJson>,
}

fn push_verdicts(vs: &[Verdict], s: &mut Session) {
    for v in vs {
        s.check(Check::new(&v.axiom, v.pass).checked(v.checked).inconclusive(v.inconclusive).witnesses(v.witnesses.clone()));
    }
}

fn load_triple(path: &Path, s: &mut Session) -> Result<SuperToralTriple, CliError> {
    let j: TripleJson = s.read_json(path)?;
    SuperToralTriple::from_json(&j).map_err(|e| match e {
        EalsError::Shape(msg) => CliError::Input { path: path.display().to_string(), msg },
        other => other.into(),
    })
}

struct Built {
    base: GradedAlgebra,
    m: u32,
    n: u32,
    aff: Result<AffinizedAlgebra, EalsError>,
}

fn build(base: &Path, window: Option<i64>, s: &mut Session) -> Result<Built, CliError> {
    let j: BaseJson = s.read_json(base)?;
    let ctx = build_context(j.m, j.n)?;
    let data = match &j.data {
        Some(d) => CoordinateData::from_json(d).map_err(|e| CliError::Input { path: base.display().to_string(), msg: e.to_string() })?,
        None => {
            let k = window.or(s.global.window).ok_or_else(|| CliError::Usage("give --lambda-window for the default loop base".into()))?;
            CoordinateData::laurent(k)
        }
    };
    let l = build_graded(&ctx, &data)?;
    let form = loop_form(&ctx, &l, &data)?;
    let phi = r_root_set(j.m, j.n);
    let r = if data.dim_c() == 0 { phi.clone() } else { psi_root_set(j.m, j.n) };
    let aff = affinize(&l, &form, &r, &phi);
    Ok(Built { base: l, m: j.m, n: j.n, aff })
}

pub fn run(cmd: EalsCmd, s: &mut Session) -> Result<(), CliError> {
    match cmd {
        EalsCmd::Affinize { base, lambda_window, out } => {
            let b = build(&base, lambda_window, s)?;
            let aff = match b.aff {
                Ok(a) => a,
                Err(EalsError::Hypothesis { label, witnesses }) => {
                    s.check(Check::fail(label, witnesses));
                    return Ok(());
                }
                Err(e) => return Err(e.into()),
            };
            push_verdicts(&aff.hypotheses, s);
            let t = &aff.triple;
            s.result("algebra", t.name.clone());
            s.result("base_dim", aff.base_dim);
            s.result("dim", t.dim());
            s.result("cartan_dim", t.cartan().len());
            s.result("toral_elements", aff.toral.len());
            if let Some(p) = out_path(&out) {
                write_json(p, &t.to_json())?;
                s.result("written", p.display().to_string());
            }
        }
        EalsCmd::Check { input } => {
            let t = load_triple(&input, s)?;
            let rep = check_eals(&t)?;
            push_verdicts(&rep.verdicts, s);
            s.result("algebra", rep.algebra.clone());
            s.result("dim", rep.dim);
            s.result("roots", rep.roots);
            s.result("real_roots", rep.real_roots);
        }
        EalsCmd::Core { input, base, lambda_window } => {
            let t = load_triple(&input, s)?;
            let c = core(&t)?;
            let z = center_of(&c);
            let (cg, dec) = verify_core_graded(&t)?;
            push_verdicts(&cg.verdicts, s);
            s.check(Check::new("R irreducible", cg.irreducible));
            let dot = &dec.dot_roots;
            let dot_rep = check_ears(&[], dot);
            for a in &dot_rep.axioms {
                s.check(Check::from_witnesses(format!("Ṙ: {}", a.axiom), a.witnesses.clone()));
            }
            if let Some(inc) = &dec.inclusions {
                let (n, out) = (inc.checked as u64, inc.outside_window as u64);
                s.check(Check::new("S−2S ⊆ S", inc.s_minus_2s).checked(n).inconclusive(out));
                s.check(Check::new("S+F ⊆ S", inc.s_plus_f).checked(n).inconclusive(out));
                s.check(Check::new("2S+F ⊆ F", inc.two_s_plus_f).checked(n).inconclusive(out).witnesses(inc.witnesses.clone()));
            }
            if let Some(bp) = base {
                let b = build(&bp, lambda_window, s)?;
                let aff = b.aff?;
                let same = aff.triple.to_json() == t.to_json();
                s.check(Check::new("input is the affinization of the base", same));
                let rt = round_trip(&aff, &b.base)?;
                s.check(Check::new("Π maps the core onto the base", rt.surjective));
                s.check(Check::new("core ⊆ g ⊕ V", rt.core_inside_g_plus_v));
                s.check(Check::new("Z(core) = ker Π", rt.center_is_kernel));
                s.check(Check::from_witnesses("core/Z(core) has the structure constants of the base", rt.mismatches.clone()).checked(rt.checked).inconclusive(rt.skipped_out_of_window));
                let want = r_root_set(b.m, b.n);
                s.check(Check::new(format!("Ṙ = {}", want.tag.clone().unwrap_or_default()), dot.roots == want.roots));
            }
            s.result("core_dim", c.dim());
            let center: Vec<String> = z
                .iter()
                .map(|v| {
                    let mut amb = SparseVec::new();
                    for (i, a) in v.iter() {
                        amb.add_scaled(a, &c.basis[i]);
                    }
                    combo_label(&amb, |i| t.label(i))
                })
                .collect();
            s.result("center", center);
            s.result("radical_rank", cg.radical_rank);
            s.result("dot_roots", dot.roots.iter().map(Weight::label).collect::<Vec<_>>());
            s.result("S", dec.s.as_ref().map(|x| x.iter().map(Weight::label).collect::<Vec<_>>()));
            s.result("F", dec.f.as_ref().map(|x| x.iter().map(Weight::label).collect::<Vec<_>>()));
        }
    }
    Ok(())
}
