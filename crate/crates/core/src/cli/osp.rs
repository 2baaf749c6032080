use clap::{Subcommand, ValueEnum};
use serde_json::json;

use super::{CliError, Session};
use crate::cli::Check;
use crate::exactalg::{check_super_jacobi, scalar, Scope};
use crate::osp::{build_context, casimir, expected_s_weights, expected_u_weights, root_set_r, trace_form_invariant, verify_span_table, weight_decompose, Carrier};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModuleArg {
    G,
    S,
    U,
}

#[derive(Subcommand, Debug)]
pub enum OspCmd {
    /// Build g, s and u and check dimensions and weights.
    Build {
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
    },
    /// Compare the printed spanning vectors of the weight spaces with the computed ones.
    Table {
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
    },
    /// Casimir scalars on g, s and u.
    Casimir {
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
        /// Restrict to one module.
        #[arg(long, value_enum)]
        module: Option<ModuleArg>,
    },
    /// Super-Jacobi identity on basis triples of g.
    Jacobi {
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
    },
}

/// `(carrier, expected scalar, formula)`.
fn casimir_expectation(c: Carrier, m: u32, n: u32) -> (i64, &'static str) {
    let d = n as i64 - m as i64;
    match c {
        Carrier::U => (-2 * d, "−2(n−m)"),
        Carrier::G => (-2 - 4 * d, "−2−4(n−m)"),
        Carrier::S => (2 - 4 * d, "2−4(n−m)"),
    }
}

pub fn run(cmd: OspCmd, s: &mut Session) -> Result<(), CliError> {
    match cmd {
        OspCmd::Build { m, n } => {
            let ctx = build_context(m, n)?;
            let mut dims = serde_json::Map::new();
            for c in [Carrier::G, Carrier::S, Carrier::U] {
                dims.insert(c.to_string(), json!(ctx.dim(c)));
            }
            s.check(Check::new("dim g = m(2m+1)+n(2n+1)+2n(2m+1)", ctx.dim(Carrier::G) == ctx.expected_g_dim()));
            let g = weight_decompose(&ctx, Carrier::G)?;
            s.check(Check::new("nonzero weight spaces of g are 1-dimensional", g.nonzero_spaces_one_dimensional()).checked(g.weights().len() as u64));
            s.check(Check::new("weights of g = R ∪ {0}", g.weights() == root_set_r(m, n)));
            s.check(Check::new("weights of s = Δ_s ∪ {0}", weight_decompose(&ctx, Carrier::S)?.weights() == expected_s_weights(m, n)));
            s.check(Check::new("weights of u", weight_decompose(&ctx, Carrier::U)?.weights() == expected_u_weights(m, n)));
            s.check(Check::new("½str is invariant", trace_form_invariant(&ctx)?));
            s.result("m", m);
            s.result("n", n);
            s.result("dims", dims);
        }
        OspCmd::Table { m, n } => {
            let ctx = build_context(m, n)?;
            let rep = verify_span_table(&ctx);
            for r in &rep.rows {
                let mut c = Check::new(format!("row {} (γ={:+})", r.row, r.gamma), r.status.agrees() && !r.printed_degenerate).checked(r.instances as u64);
                if !c.pass {
                    c.witnesses = vec![format!("{:?}: printed {}; derived {}", r.status, r.printed, r.derived.join(" | "))];
                }
                s.check(c);
            }
            s.result("rows", rep.rows.len());
            s.result("discrepancies", rep.discrepancies().map(|r| format!("{} (γ={:+})", r.row, r.gamma)).collect::<Vec<_>>());
            s.result("table", &rep);
        }
        OspCmd::Casimir { m, n, module } => {
            let ctx = build_context(m, n)?;
            let cas = casimir(&ctx)?;
            let carriers = match module {
                None => vec![Carrier::U, Carrier::G, Carrier::S],
                Some(ModuleArg::G) => vec![Carrier::G],
                Some(ModuleArg::S) => vec![Carrier::S],
                Some(ModuleArg::U) => vec![Carrier::U],
            };
            let mut values = serde_json::Map::new();
            for c in carriers {
                let (want, formula) = casimir_expectation(c, m, n);
                let got = cas.scalar_on(&ctx, c)?;
                let label = format!("Casimir on {c} = {formula} = {want}");
                let check = match &got {
                    Some(v) if *v == scalar::int(want) => Check::new(label, true),
                    Some(v) => Check::fail(label, vec![format!("acts by {}", scalar::format(v))]),
                    None => Check::fail(label, vec!["not a scalar".into()]),
                };
                s.check(check);
                values.insert(c.to_string(), json!(got.as_ref().map(scalar::format)));
            }
            s.result("scalars", values);
            s.result("odd_signed", cas.odd_signed);
        }
        OspCmd::Jacobi { m, n } => {
            let ctx = build_context(m, n)?;
            let scope = s.global.scope(Scope::Exhaustive);
            let rep = check_super_jacobi(ctx.g_table()?, None, scope, s.global.seed)?;
            let w = rep.violation.iter().map(|v| format!("[{}, {}, {}]", v[0], v[1], v[2])).collect();
            s.check(Check::new("super-Jacobi on g", rep.passed()).checked(rep.checked).inconclusive(rep.skipped_out_of_window).witnesses(w));
            s.result("scope", rep.scope);
            s.result("dim", ctx.dim(Carrier::G));
        }
    }
    Ok(())
}
