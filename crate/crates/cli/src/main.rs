// SPDX-License-Identifier: Apache-2.0

//! `carbon3d`: embodied and operational carbon of 2D, 2.5D and 3D ICs.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid input, 3 a crossing
//! was required (`--require-crossing`) but none was found.

mod plot;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use carbon3d_core::explorer::{
    apply_axis, gamma_pareto, sweep, switching_point, Crossing, SweepAxis, SweepOptions, DEFAULT_REL_TOL,
    DEFAULT_SWEEP_CAP,
};
use carbon3d_core::report::{self, ReportDocument};
use carbon3d_core::{evaluate, load_config, Config, EvalOptions, GammaBasis, Registry};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const EXIT_RUNTIME: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NO_CROSSING: u8 = 3;

#[derive(Parser)]
#[command(
    name = "carbon3d",
    version,
    about = "Carbon footprint of 2D, 2.5D and 3D integrated circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one design.
    Estimate {
        #[arg(short, long)]
        config: PathBuf,
        /// Per-die and per-component rows instead of one summary row.
        #[arg(long)]
        breakdown: bool,
        #[command(flatten)]
        gamma: GammaArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the cartesian product of one or more parameter axes.
    Sweep {
        #[arg(short, long)]
        config: PathBuf,
        /// `path=v1,v2,...`; the last axis varies fastest.
        #[arg(short, long = "axis", required = true)]
        axes: Vec<String>,
        /// Also evaluate the 2D equivalent of every row and report where the
        /// design crosses it along the last axis.
        #[arg(long)]
        baseline: bool,
        /// Exit with code 3 when no crossing is found (implies --baseline).
        #[arg(long)]
        require_crossing: bool,
        #[arg(long, default_value_t = DEFAULT_SWEEP_CAP)]
        max_rows: usize,
        #[command(flatten)]
        gamma: GammaArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Smallest gate count at which a design beats its 2D equivalent.
    Switch {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        integration: Option<String>,
        #[arg(long)]
        node: Option<String>,
        #[arg(long)]
        dies: Option<usize>,
        /// Gate-count search range `lo,hi`.
        #[arg(long, default_value = "1e5,1e11")]
        range: String,
        #[arg(long, default_value_t = DEFAULT_REL_TOL)]
        rel_tol: f64,
        /// Exit with code 3 when the design is always or never cheaper.
        #[arg(long)]
        require_crossing: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// tCDP of several designs over a range of γ, normalized to a reference
    /// design at γ = 1.
    Pareto {
        #[arg(short, long = "config", required = true)]
        configs: Vec<PathBuf>,
        #[arg(long, default_value = "0,0.1,0.5,1,2")]
        gammas: String,
        /// Index of the reference design among the configs.
        #[arg(long, default_value_t = 0)]
        reference: usize,
        #[arg(long, value_enum, default_value_t = Basis::Amortized)]
        gamma_basis: Basis,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Inspect the parameter fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    /// List nodes and bonding/packaging profiles.
    List,
}

#[derive(Args)]
struct GammaArgs {
    /// Weight of embodied carbon in the total.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = Basis::Amortized)]
    gamma_basis: Basis,
}

impl GammaArgs {
    fn options(&self) -> EvalOptions {
        EvalOptions {
            gamma: self.gamma,
            basis: self.gamma_basis.into(),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(short, long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Write plot data (CSV) here.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Amortized,
    Overall,
}

impl From<Basis> for GammaBasis {
    fn from(b: Basis) -> Self {
        match b {
            Basis::Amortized => GammaBasis::Amortized,
            Basis::Overall => GammaBasis::Overall,
        }
    }
}

impl Basis {
    fn name(self) -> &'static str {
        match self {
            Basis::Amortized => "amortized",
            Basis::Overall => "overall",
        }
    }
}

fn read_document(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        carbon3d_core::Error::InvalidValue {
            path: path.display().to_string(),
            message: e.to_string(),
        }
        .into()
    })
}

fn parse_list(text: &str, what: &str) -> anyhow::Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| {
                carbon3d_core::Error::InvalidValue {
                    path: what.to_string(),
                    message: format!("not a number: {s:?}"),
                }
                .into()
            })
        })
        .collect()
}

fn emit(doc: &ReportDocument, output: &OutputArgs) -> anyhow::Result<()> {
    let bytes = match output.format {
        Format::Table => table::render(doc).into_bytes(),
        Format::Json => doc.to_json()?,
        Format::Csv => doc.to_csv()?,
    };
    if matches!(output.format, Format::Table) {
        for w in &doc.warnings {
            eprintln!("warning: {w}");
        }
    }
    match &output.out {
        Some(path) => {
            report::write_atomic(path, &bytes)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
    }
    Ok(())
}

fn emit_plot(doc: ReportDocument, output: &OutputArgs) -> anyhow::Result<()> {
    if let Some(path) = &output.plot {
        report::write_atomic(path, &doc.to_csv()?)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// Runs the command and returns the exit code for a successful run.
fn run(cli: Cli, registry: &Registry) -> anyhow::Result<u8> {
    match cli.command {
        Command::Estimate {
            config,
            breakdown,
            gamma,
            output,
        } => {
            let cfg = load_config(&read_document(&config)?, registry)?;
            let opts = gamma.options();
            let ev = evaluate(&cfg.design, &cfg.environment, &opts)?;
            let digest = report::inputs_digest(
                &[&cfg],
                &json!({"gamma": opts.gamma, "gamma_basis": gamma.gamma_basis.name(), "breakdown": breakdown}),
            );
            let doc = if breakdown {
                report::breakdown_report(&ev, digest)
            } else {
                report::estimate_report(&cfg, &ev, digest)
            };
            emit(&doc, &output)?;
            Ok(0)
        }
        Command::Sweep {
            config,
            axes,
            baseline,
            require_crossing,
            max_rows,
            gamma,
            output,
        } => {
            let template = read_document(&config)?;
            let cfg = load_config(&template, registry)?;
            let axes: Vec<SweepAxis> = axes.iter().map(|a| SweepAxis::parse(a)).collect::<Result<_, _>>()?;
            let opts = SweepOptions {
                eval: gamma.options(),
                cap: max_rows,
                baseline: baseline || require_crossing,
            };
            let result = sweep(&template, registry, &axes, &opts)?;
            let digest = report::inputs_digest(
                &[&cfg],
                &json!({
                    "axes": axes,
                    "gamma": opts.eval.gamma,
                    "gamma_basis": gamma.gamma_basis.name(),
                    "baseline": opts.baseline,
                }),
            );
            emit(&report::sweep_report(&result, digest.clone()), &output)?;
            emit_plot(plot::sweep(&result, &axes, digest), &output)?;
            if require_crossing && result.switching_points.is_empty() {
                eprintln!(
                    "no crossing against the 2D baseline along {}",
                    axes.last().unwrap().path
                );
                return Ok(EXIT_NO_CROSSING);
            }
            Ok(0)
        }
        Command::Switch {
            config,
            integration,
            node,
            dies,
            range,
            rel_tol,
            require_crossing,
            output,
        } => {
            let mut doc = read_document(&config)?;
            if let Some(i) = integration {
                apply_axis(&mut doc, "integration", &json!(i))?;
            }
            if let Some(n) = node {
                apply_axis(&mut doc, "technology", &json!(n))?;
            }
            if let Some(n) = dies {
                apply_axis(&mut doc, "n_dies", &json!(n))?;
            }
            let cfg = load_config(&doc, registry)?;
            let bounds = parse_list(&range, "range")?;
            let [lo, hi] = bounds[..] else {
                bail!(carbon3d_core::Error::InvalidValue {
                    path: "range".into(),
                    message: "expected lo,hi".into(),
                });
            };
            let point = switching_point(&cfg.design, &cfg.environment, (lo, hi), rel_tol)?;
            let digest = report::inputs_digest(&[&cfg], &json!({"range": [lo, hi], "rel_tol": rel_tol}));
            emit(&report::switch_report(&point, digest.clone()), &output)?;
            emit_plot(plot::switch(&point, digest), &output)?;
            if require_crossing && !matches!(point.crossing, Crossing::At(_)) {
                eprintln!("no crossing in [{lo}, {hi}]");
                return Ok(EXIT_NO_CROSSING);
            }
            Ok(0)
        }
        Command::Pareto {
            configs,
            gammas,
            reference,
            gamma_basis,
            output,
        } => {
            let gammas = parse_list(&gammas, "gammas")?;
            let mut designs: Vec<(String, Config)> = Vec::new();
            for path in &configs {
                let cfg = load_config(&read_document(path)?, registry)?;
                let stem = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let mut label = stem.clone();
                let mut k = 2;
                while designs.iter().any(|(l, _)| *l == label) {
                    label = format!("{stem}#{k}");
                    k += 1;
                }
                designs.push((label, cfg));
            }
            let rows = gamma_pareto(&designs, &gammas, reference, gamma_basis.into())?;
            let cfgs: Vec<&Config> = designs.iter().map(|(_, c)| c).collect();
            let digest = report::inputs_digest(
                &cfgs,
                &json!({"gammas": gammas, "reference": reference, "gamma_basis": gamma_basis.name()}),
            );
            emit(&report::pareto_report(&rows, digest.clone()), &output)?;
            let labels: Vec<String> = designs.into_iter().map(|(l, _)| l).collect();
            emit_plot(plot::pareto(&rows, &labels, &gammas, digest), &output)?;
            Ok(0)
        }
        Command::Fixtures {
            action: FixturesAction::List,
        } => {
            match registry.source() {
                Some(dir) => println!("source: {}", dir.display()),
                None => println!("source: bundled"),
            }
            println!("nodes:");
            for name in registry.node_names() {
                let t = registry.resolve_technology(name)?;
                println!(
                    "  {name:<8} max_beol_layers={} d0={} 1/cm2",
                    t.max_beol_layers, t.defect_density_d0
                );
            }
            println!("bonding: {}", registry.bonding_names().collect::<Vec<_>>().join(", "));
            println!(
                "packaging: {}",
                registry.packaging_names().collect::<Vec<_>>().join(", ")
            );
            for v in registry.survey_violations() {
                eprintln!("warning: {v}");
            }
            Ok(0)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<carbon3d_core::Error>() {
        Some(e) if e.is_validation() => EXIT_VALIDATION,
        _ => EXIT_RUNTIME,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = Registry::from_env()
        .map_err(anyhow::Error::from)
        .and_then(|registry| run(cli, &registry));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
