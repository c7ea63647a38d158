//! Command-line front end for the exact graded Poisson checks.
//!
//! Exit codes: 0 all checks pass, 1 at least one check fails, 2 the
//! input could not be loaded or parsed.

mod input;
mod registry;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use psigma_core::worldsheet::{
    action_value, pair_observable, stokes_check, worldsheet_vars, Superchain,
};
use psigma_core::{
    build_operation_context, parse_expression, parse_super_expression, verify_action,
    verify_lie_algebra, Bivector, CheckReport, ModelBundle, OperationContext, Result,
};

#[derive(Parser)]
#[command(name = "psigma", version, about = "Exact checks for graded Poisson models")]
struct Cli {
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum BivectorArg {
    Varpi,
    Theta,
    Pi,
}

impl From<BivectorArg> for Bivector {
    fn from(b: BivectorArg) -> Bivector {
        match b {
            BivectorArg::Varpi => Bivector::Varpi,
            BivectorArg::Theta => Bivector::Theta,
            BivectorArg::Pi => Bivector::Pi,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate bivector structure, Lie algebra and symmetry action.
    Check {
        /// Model file path or bundled model name.
        model: String,
    },
    /// Verify the defining relations of the derivation algebra.
    Cartan {
        model: String,
        /// Build the operation context even if validation fails.
        #[arg(long)]
        allow_invalid: bool,
    },
    /// Print the Lagrangian element and verify its class identities.
    Lagrangian {
        model: String,
        #[arg(long)]
        allow_invalid: bool,
    },
    /// Print the per-coordinate integrability obstruction.
    Obstruction {
        model: String,
        #[arg(long)]
        allow_invalid: bool,
    },
    /// Casimir verification and search.
    Casimir {
        #[command(subcommand)]
        sub: CasimirCmd,
    },
    /// Classify an element and run its class and observable checks.
    Observable {
        model: String,
        /// Element over the generator algebra, e.g. "x1*Xt2 + y3".
        #[arg(long)]
        expr: String,
        #[arg(long)]
        allow_invalid: bool,
    },
    /// Superfield integration over chains.
    Worldsheet {
        #[command(subcommand)]
        sub: WorldsheetCmd,
    },
    /// Bundled example models.
    Examples {
        #[command(subcommand)]
        sub: ExamplesCmd,
    },
}

#[derive(Subcommand)]
enum CasimirCmd {
    /// Check that an expression is a Casimir of the chosen bivector.
    Verify {
        model: String,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value = "pi")]
        bivector: BivectorArg,
    },
    /// Basis of polynomial Casimirs up to the given degree.
    Search {
        model: String,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        #[arg(long, value_enum, default_value = "pi")]
        bivector: BivectorArg,
    },
}

#[derive(Subcommand)]
enum WorldsheetCmd {
    /// Verify the boundary formula for a superfield over a chain.
    Stokes {
        /// Chain file; defaults to the unit square.
        chain: Option<PathBuf>,
        /// Superfield components "p0 ; p1_1 ; p1_2 ; p2" in z1, z2.
        #[arg(long, default_value = "z1*z2 ; z2^2 ; z1 - z2 ; z1")]
        field: String,
        #[arg(long, default_value_t = 1)]
        degree: i64,
    },
    /// Integrate the realized Lagrangian over a surface chain.
    Action {
        model: String,
        /// Field configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Surface chain file; defaults to the unit square.
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long)]
        allow_invalid: bool,
    },
    /// Pair a realized element with a supercycle.
    Pair {
        model: String,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        config: PathBuf,
        /// Cycle chain file; defaults to the boundary of the square.
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long)]
        allow_invalid: bool,
    },
}

#[derive(Subcommand)]
enum ExamplesCmd {
    /// Names of the bundled models.
    List,
    /// Write a bundled model as a file, or to stdout without --out.
    Export {
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Export every bundled model into the --out directory.
        #[arg(long)]
        all: bool,
    },
}

struct Output {
    json: bool,
    reports: Vec<CheckReport>,
    extras: serde_json::Map<String, serde_json::Value>,
    lines: Vec<String>,
}

impl Output {
    fn new(json: bool) -> Self {
        Output {
            json,
            reports: Vec::new(),
            extras: serde_json::Map::new(),
            lines: Vec::new(),
        }
    }

    fn report(&mut self, r: CheckReport) {
        self.reports.push(r);
    }

    fn note(&mut self, key: &str, text: String) {
        self.lines.push(format!("{key}: {text}"));
        self.extras
            .insert(key.to_string(), serde_json::Value::String(text));
    }

    fn note_list(&mut self, key: &str, items: Vec<String>) {
        self.lines.push(format!("{key}:"));
        for item in &items {
            self.lines.push(format!("  {item}"));
        }
        self.extras.insert(
            key.to_string(),
            serde_json::Value::Array(
                items.into_iter().map(serde_json::Value::String).collect(),
            ),
        );
    }

    fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }

    fn finish(self) -> ExitCode {
        let passed = self.passed();
        if self.json {
            let mut doc = serde_json::Map::new();
            doc.insert("passed".into(), serde_json::Value::Bool(passed));
            doc.insert(
                "reports".into(),
                serde_json::to_value(&self.reports).expect("report serialization"),
            );
            for (k, v) in self.extras {
                doc.insert(k, v);
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Object(doc)).unwrap()
            );
        } else {
            for line in &self.lines {
                println!("{line}");
            }
            for r in &self.reports {
                println!("{r}");
            }
        }
        if passed {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

fn context(bundle: &ModelBundle, allow_invalid: bool) -> Result<OperationContext> {
    build_operation_context(&bundle.model, &bundle.liealg, &bundle.action, allow_invalid)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut out = Output::new(cli.json);
    match cli.cmd {
        Cmd::Check { model } => {
            let b = registry::resolve(&model)?;
            out.report(b.model.model_structure_check()?);
            out.report(verify_lie_algebra(&b.liealg));
            out.report(verify_action(&b.model, &b.liealg, &b.action)?);
        }
        Cmd::Cartan {
            model,
            allow_invalid,
        } => {
            let b = registry::resolve(&model)?;
            let ctx = context(&b, allow_invalid)?;
            out.report(ctx.cartan_check()?);
            out.report(ctx.auxiliary_relations_check()?);
            out.report(ctx.shift_consistency_check()?);
        }
        Cmd::Lagrangian {
            model,
            allow_invalid,
        } => {
            let b = registry::resolve(&model)?;
            let ctx = context(&b, allow_invalid)?;
            out.note("lagrangian", ctx.lagrangian_element()?.to_string());
            out.report(ctx.lagrangian_class_check()?);
        }
        Cmd::Obstruction {
            model,
            allow_invalid,
        } => {
            let b = registry::resolve(&model)?;
            let ctx = context(&b, allow_invalid)?;
            let obs = ctx.integrability_obstruction()?;
            let items = ctx
                .model()
                .coords()
                .iter()
                .zip(&obs)
                .map(|(c, o)| format!("{c}: {o}"))
                .collect();
            out.note_list("obstruction", items);
        }
        Cmd::Casimir { sub } => match sub {
            CasimirCmd::Verify {
                model,
                expr,
                bivector,
            } => {
                let b = registry::resolve(&model)?;
                let f = parse_expression(&expr, b.model.vars())?;
                out.report(b.model.verify_casimir(&f, bivector.into())?);
            }
            CasimirCmd::Search {
                model,
                max_degree,
                bivector,
            } => {
                let b = registry::resolve(&model)?;
                let basis = b.model.casimir_search(bivector.into(), max_degree)?;
                out.note("dimension", basis.len().to_string());
                out.note_list(
                    "basis",
                    basis.iter().map(|p| p.to_string()).collect(),
                );
            }
        },
        Cmd::Observable {
            model,
            expr,
            allow_invalid,
        } => {
            let b = registry::resolve(&model)?;
            let ctx = context(&b, allow_invalid)?;
            let elem = parse_super_expression(&expr, ctx.table())?;
            let kind = ctx.classify(&elem)?;
            out.note("kind", format!("{kind:?}").to_lowercase());
            out.report(ctx.equivariant_class_check(&elem)?);
            if ctx.w_pi_derivation().is_ok() {
                out.report(ctx.bv_observable_check(&elem)?);
            } else {
                out.note(
                    "observable",
                    "skipped: requires a Hamilton action".to_string(),
                );
            }
        }
        Cmd::Worldsheet { sub } => match sub {
            WorldsheetCmd::Stokes {
                chain,
                field,
                degree,
            } => {
                let chain = match chain {
                    Some(p) => input::load_chain(&p)?,
                    None => Superchain::unit_square(),
                };
                let psi = input::parse_superfield(&field, degree, &worldsheet_vars())?;
                out.report(stokes_check(&psi, &chain)?);
            }
            WorldsheetCmd::Action {
                model,
                config,
                chain,
                allow_invalid,
            } => {
                let b = registry::resolve(&model)?;
                let ctx = context(&b, allow_invalid)?;
                let cfg = input::load_config(&config, &ctx)?;
                let chain = match chain {
                    Some(p) => input::load_chain(&p)?,
                    None => Superchain::unit_square(),
                };
                let value = action_value(&ctx, &cfg, &chain)?;
                out.note("action", value.to_string());
            }
            WorldsheetCmd::Pair {
                model,
                expr,
                config,
                chain,
                allow_invalid,
            } => {
                let b = registry::resolve(&model)?;
                let ctx = context(&b, allow_invalid)?;
                let elem = parse_super_expression(&expr, ctx.table())?;
                let cfg = input::load_config(&config, &ctx)?;
                let chain = match chain {
                    Some(p) => input::load_chain(&p)?,
                    None => Superchain::unit_square().boundary(),
                };
                let value = pair_observable(&ctx, &elem, &cfg, &chain)?;
                out.note("pairing", value.to_string());
            }
        },
        Cmd::Examples { sub } => match sub {
            ExamplesCmd::List => {
                out.note_list(
                    "models",
                    registry::NAMES.iter().map(|s| s.to_string()).collect(),
                );
            }
            ExamplesCmd::Export { name, out: dest, all } => {
                if all {
                    let dir = dest.ok_or_else(|| {
                        psigma_core::Error::Io("--all requires --out <dir>".into())
                    })?;
                    std::fs::create_dir_all(&dir)
                        .map_err(|e| psigma_core::Error::Io(e.to_string()))?;
                    for n in registry::NAMES {
                        let text = registry::export(n).unwrap();
                        std::fs::write(dir.join(format!("{n}.psm")), text)
                            .map_err(|e| psigma_core::Error::Io(e.to_string()))?;
                        out.note(n, "exported".to_string());
                    }
                } else {
                    let name = name.ok_or_else(|| {
                        psigma_core::Error::Io("give a model name or --all".into())
                    })?;
                    let text = registry::export(&name).ok_or_else(|| {
                        psigma_core::Error::Io(format!("no bundled model `{name}`"))
                    })?;
                    match dest {
                        Some(p) => {
                            std::fs::write(&p, text)
                                .map_err(|e| psigma_core::Error::Io(e.to_string()))?;
                            out.note(&name, format!("exported to {}", p.display()));
                        }
                        None => out.note(&name, format!("\n{text}")),
                    }
                }
            }
        },
    }
    Ok(out.finish())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            if json {
                eprintln!("{}", serde_json::json!({ "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
