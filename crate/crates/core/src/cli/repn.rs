use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Subcommand;

use super::{out_path, write_json, CliError, Session};
use crate::cli::Check;
use crate::osp::{build_context, OspContext};
use crate::repn::{hom_space, shuffled_sum, Decomposer, GModule, ModuleJson, Over, Tag};

#[derive(Subcommand, Debug)]
pub enum RepnCmd {
    /// Decompose a module into copies of g, s, u and the trivial module (needs n ≥ 2).
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
    },
    /// Dimension of the space of module maps X → Y.
    Hom {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// g0 (even part) or g.
        #[arg(long, default_value = "g0")]
        over: String,
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
        /// Fail unless the dimension equals D.
        #[arg(long, value_name = "D")]
        expect_dim: Option<usize>,
    },
    /// Draw a block-shuffled direct sum from the seed and decompose it.
    Sample {
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
        /// Largest number of constituents.
        #[arg(long, default_value_t = 6)]
        parts: usize,
        /// Write the module JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path, ctx: &OspContext, s: &mut Session) -> Result<GModule, CliError> {
    let j: ModuleJson = s.read_json(path)?;
    GModule::from_json(&j, ctx).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })
}

fn tag_counts(tags: &BTreeMap<Tag, usize>) -> BTreeMap<String, usize> {
    tags.iter().map(|(t, c)| (t.to_string(), *c)).collect()
}

fn decompose_into(module: &GModule, ctx: &OspContext, s: &mut Session) -> Result<BTreeMap<Tag, usize>, CliError> {
    let violation = module.homomorphism_violation(ctx)?;
    s.check(Check::from_witnesses(
        "ρ([x,y]) = [ρ(x),ρ(y)]",
        violation.map(|(i, j)| format!("({}, {})", ctx.g.elements[i].label, ctx.g.elements[j].label)).into_iter().collect(),
    ));
    let rep = Decomposer::new(ctx)?.decompose(module)?;
    let bad: Vec<String> = rep.constituents.iter().filter(|c| !(c.injective && c.equivariant)).map(|c| c.tag.to_string()).collect();
    s.check(Check::from_witnesses("constituent maps are injective module maps", bad));
    s.check(Check::new("images form a direct sum", rep.direct));
    s.check(Check::from_witnesses("images exhaust the module", rep.residual_witness.map(|i| format!("basis vector {i}")).into_iter().collect()));
    s.result("dim", rep.dim);
    s.result("constituents", tag_counts(&rep.tags()));
    Ok(rep.tags())
}

pub fn run(cmd: RepnCmd, s: &mut Session) -> Result<(), CliError> {
    match cmd {
        RepnCmd::Decompose { input, m, n } => {
            let ctx = build_context(m, n)?;
            let module = load(&input, &ctx, s)?;
            decompose_into(&module, &ctx, s)?;
        }
        RepnCmd::Hom { x, y, over, m, n, expect_dim } => {
            let ctx = build_context(m, n)?;
            let over: Over = over.parse()?;
            let mx = load(&x, &ctx, s)?;
            let my = load(&y, &ctx, s)?;
            let h = hom_space(&mx, &my, over, &ctx)?;
            if let Some(d) = expect_dim {
                let w = if h.dim == d { Vec::new() } else { vec![format!("dimension {}", h.dim)] };
                s.check(Check::from_witnesses(format!("dim hom_{over}(X, Y) = {d}"), w));
            }
            s.result("over", over.to_string());
            s.result("unknowns", h.unknowns);
            s.result("dim", h.dim);
        }
        RepnCmd::Sample { m, n, parts, out } => {
            if parts == 0 {
                return Err(CliError::Usage("--parts must be positive".into()));
            }
            let ctx = build_context(m, n)?;
            let (module, tags) = shuffled_sum(&ctx, s.global.seed, parts)?;
            let mut want = BTreeMap::new();
            for t in &tags {
                *want.entry(*t).or_insert(0usize) += 1;
            }
            if let Some(p) = out_path(&out) {
                write_json(p, &module.to_json(&ctx))?;
                s.result("written", p.display().to_string());
            }
            let got = decompose_into(&module, &ctx, s)?;
            let w = if got == want { Vec::new() } else { vec![format!("drew {:?}", tag_counts(&want))] };
            s.check(Check::from_witnesses("decomposition recovers the drawn constituents", w));
            s.result("drawn", tag_counts(&want));
        }
    }
    Ok(())
}
