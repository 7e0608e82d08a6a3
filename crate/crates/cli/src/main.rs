//! Command-line frontend: scenario presets, the measurement matrix, the
//! statistics pipeline, plot data and the analytic model checks.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use pqshake::algorithms::{full_matrix_algorithms, parse_algorithms};
use pqshake::analyze::analyze_tree;
use pqshake::checks::check_models;
use pqshake::plot::{plot_data, Grouping};
use pqshake::runconfig::RunnerConfig;
use pqshake::runner::run_matrix;
use pqshake::scenario::{parse_scenario, write_presets};
use pqshake_core::kem::{Catalog, CostModel};

#[derive(Parser)]
#[command(name = "pqshake", version, about = "Deterministic post-quantum TLS 1.3 handshake benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the measurement matrix of one scenario file.
    Run {
        /// Scenario CSV (14 columns, or 15 with extended_scenario_format).
        #[arg(long)]
        scenario: PathBuf,
        /// Algorithms CSV: class label plus algorithm ids per row.
        #[arg(long)]
        algorithms: PathBuf,
        /// Run configuration (key = value lines); defaults apply if omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output root; results land under <out>/results/.
        #[arg(long)]
        out: PathBuf,
        /// Operation cost model file (overrides the config's cost_file).
        #[arg(long)]
        costs: Option<PathBuf>,
        /// Extra catalog entries (overrides the config's catalog_file).
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Write the preset scenario files and a full-matrix algorithms CSV.
    Presets {
        #[arg(long)]
        out: PathBuf,
    },
    /// Catalog inspection.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Summarize a results tree into an analyzed tree.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit long-format plot data from an analyzed tree.
    PlotData {
        #[arg(long = "in")]
        input: PathBuf,
        /// per-algorithm, by-level or hybrid-vs-pqonly.
        #[arg(long)]
        group: Grouping,
        #[arg(long)]
        out: PathBuf,
        /// Restrict to one statistic (average, std_dev, median, q75, q95).
        #[arg(long)]
        stat: Option<String>,
    },
    /// Fit the analytic duration models against analyzed preset curves.
    CheckModels {
        #[arg(long)]
        analyzed: PathBuf,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List every algorithm with sizes and hybrid ids.
    List {
        /// Extra catalog entries file.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

fn load_catalog(extra: Option<&PathBuf>) -> Result<Catalog> {
    let mut catalog = Catalog::shipped();
    if let Some(path) = extra {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading catalog file {}", path.display()))?;
        catalog
            .extend_from_text(&text)
            .with_context(|| format!("parsing catalog file {}", path.display()))?;
    }
    Ok(catalog)
}

fn load_costs(path: Option<&PathBuf>) -> Result<CostModel> {
    match path {
        None => Ok(CostModel::zeros()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading cost file {}", p.display()))?;
            let label = p.display().to_string();
            CostModel::parse(&text, &label)
                .with_context(|| format!("parsing cost file {}", p.display()))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            scenario,
            algorithms,
            config,
            out,
            costs,
            catalog,
        } => {
            let cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading config {}", path.display()))?;
                    RunnerConfig::parse(&text)
                        .with_context(|| format!("parsing config {}", path.display()))?
                }
                None => RunnerConfig::default(),
            };
            let catalog = load_catalog(catalog.as_ref().or(cfg.catalog_file.as_ref()))?;
            let costs = load_costs(costs.as_ref().or(cfg.cost_file.as_ref()))?;
            let scenario_text = std::fs::read_to_string(&scenario)
                .with_context(|| format!("reading scenario {}", scenario.display()))?;
            let rows = parse_scenario(&scenario_text, cfg.extended_scenario_format)
                .with_context(|| format!("parsing scenario {}", scenario.display()))?;
            let algo_text = std::fs::read_to_string(&algorithms)
                .with_context(|| format!("reading algorithms {}", algorithms.display()))?;
            let algos = parse_algorithms(&algo_text, &catalog)
                .with_context(|| format!("parsing algorithms {}", algorithms.display()))?;
            let name = scenario
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "scenario".to_string());
            let cells = run_matrix(&name, &rows, &algos, &cfg, &catalog, &costs, &out)?;
            println!(
                "wrote {cells} cells x {} measurements under {}",
                cfg.n_measurements(),
                out.join("results").display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Presets { out } => {
            let paths = write_presets(&out)?;
            let catalog = Catalog::shipped();
            let algo_path = out.join("algorithms.csv");
            std::fs::write(&algo_path, full_matrix_algorithms(&catalog))?;
            for p in paths {
                println!("{}", p.display());
            }
            println!("{}", algo_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog { command } => match command {
            CatalogCommand::List { catalog } => {
                let catalog = load_catalog(catalog.as_ref())?;
                println!("{:<22} {:>5} {:>9} {:>9} {:>9}  {:<12} hybrid id", "id", "level", "pk", "ct", "sk", "role");
                for spec in catalog.entries() {
                    let hybrid = catalog
                        .make_hybrid(&spec.id)
                        .map(|h| h.id)
                        .unwrap_or_else(|_| "-".to_string());
                    println!(
                        "{:<22} {:>5} {:>9} {:>9} {:>9}  {:<12} {}",
                        spec.id,
                        spec.nist_level,
                        spec.pk_bytes,
                        spec.ct_bytes,
                        spec.sk_bytes,
                        format!("{:?}", spec.role),
                        hybrid
                    );
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Analyze { input, out } => {
            let n = analyze_tree(&input, &out)?;
            println!("analyzed {n} cells into {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::PlotData {
            input,
            group,
            out,
            stat,
        } => {
            if let Some(s) = stat.as_deref() {
                if !["average", "std_dev", "median", "q75", "q95"].contains(&s) {
                    bail!("unknown statistic `{s}`");
                }
            }
            let catalog = Catalog::shipped();
            let csv = plot_data(&input, group, stat.as_deref(), &catalog)?;
            std::fs::write(&out, csv)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckModels { analyzed } => {
            let lines = check_models(&analyzed)?;
            if lines.is_empty() {
                bail!("no delay or rate curves found under {}", analyzed.display());
            }
            let mut all_ok = true;
            for l in &lines {
                println!(
                    "[{}] {}/{}: {}",
                    if l.passed { "PASS" } else { "FAIL" },
                    l.scenario,
                    l.algorithm,
                    l.description
                );
                all_ok &= l.passed;
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
