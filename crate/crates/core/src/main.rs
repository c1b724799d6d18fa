use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fdcran::cli::{emit_csv, emit_svg, run_sweep, verify_table, PlotSpec, SweepSpec};
use fdcran::rates::{evaluate, CranSetup};
use fdcran::{Error, Quadrature, Result, SchemeId};

#[derive(Debug, Parser)]
#[command(
    version,
    about = "Equal per-cell rates of half/full-duplex SCP and C-RAN on the Wyner model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate schemes at the base point of a config and print the results as JSON
    Compute {
        #[command(flatten)]
        source: Source,
        /// Comma-separated scheme names (default: the config's scheme list)
        #[arg(long, value_delimiter = ',')]
        schemes: Vec<String>,
        #[command(flatten)]
        numerics: Overrides,
    },
    /// Run a parameter sweep and write CSV (and optionally SVG)
    Sweep {
        #[command(flatten)]
        source: Source,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Optional SVG chart path
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Append oracle columns and fail (exit 4) on disagreement
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        numerics: Overrides,
    },
    /// Print a built-in preset (fig2, fig3) as a config file
    Preset { name: String },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Config file (TOML)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in preset: fig2 or fig3
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Debug, Args)]
struct Overrides {
    /// Quadrature panels on [0, 1] (multiple of 4)
    #[arg(long)]
    panels: Option<usize>,
    /// Coarse power grid points per axis
    #[arg(long)]
    grid: Option<usize>,
    /// Operate full-duplex schemes at full power instead of optimizing
    #[arg(long)]
    full_power: bool,
}

fn load(source: &Source, overrides: &Overrides) -> Result<SweepSpec> {
    let mut spec = match (&source.config, &source.preset) {
        (Some(path), _) => SweepSpec::load(path)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => unreachable!("clap enforces a source"),
    };
    if let Some(p) = overrides.panels {
        spec.numerics.panels = p;
    }
    if let Some(g) = overrides.grid {
        spec.numerics.grid = g;
    }
    spec.numerics.full_power |= overrides.full_power;
    spec.validate()?;
    Ok(spec)
}

fn preset(name: &str) -> Result<SweepSpec> {
    SweepSpec::preset(name).ok_or_else(|| Error::Config {
        location: "--preset".into(),
        message: format!("unknown preset {name:?} (expected fig2 or fig3)"),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Preset { name } => {
            print!("{}", preset(&name)?.to_toml());
        }
        Command::Compute {
            source,
            schemes,
            numerics,
        } => {
            let spec = load(&source, &numerics)?;
            let schemes = if schemes.is_empty() {
                spec.schemes.clone()
            } else {
                schemes
                    .iter()
                    .map(|s| {
                        SchemeId::from_name(s).ok_or_else(|| Error::Config {
                            location: "--schemes".into(),
                            message: format!("unknown scheme {s:?}"),
                        })
                    })
                    .collect::<Result<_>>()?
            };
            let params = spec.system.to_params();
            let setup = if schemes.iter().any(|s| s.is_cran()) {
                let quad = Quadrature::new(spec.numerics.panels)?;
                Some(CranSetup::zero_forcing(params.alpha, &quad)?)
            } else {
                None
            };
            let search = spec.numerics.power_search();
            let mut out = BTreeMap::new();
            for scheme in schemes {
                out.insert(
                    scheme.name(),
                    evaluate(scheme, &params, setup.as_ref(), &search)?,
                );
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("results serialize")
            );
        }
        Command::Sweep {
            source,
            out,
            svg,
            verify,
            numerics,
        } => {
            let mut spec = load(&source, &numerics)?;
            spec.numerics.verify |= verify;
            let table = run_sweep(&spec)?;
            emit_csv(&table, &out)?;
            if let Some(path) = svg {
                emit_svg(&table, &path, &PlotSpec::for_table(&table))?;
            }
            log::info!("wrote {} rows to {}", table.rows.len(), out.display());
            if spec.numerics.verify {
                verify_table(&table)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
