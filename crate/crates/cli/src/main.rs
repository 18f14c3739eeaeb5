use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qlsync::output::{emit_csv, emit_json, emit_svg};
use qlsync::scenario::{run_scenario_with_workers, sweep_coupling, GraphSummary};
use qlsync::spectrum::{spectral_gap, spectrum};
use qlsync::{BiasedGraph, QlError, Result, ScenarioConfig};

const SEED_VAR: &str = "QLSYNC_SEED";

#[derive(Parser)]
#[command(
    name = "qlsync",
    version,
    about = "Quantum-like states from synchronizing oscillator networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an ensemble and write CSV/JSON (and optionally SVG) artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Directory for the output files; relative output paths in the
        /// config are resolved against it.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Final order parameter and purity for a list of couplings.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "K", value_delimiter = ',', required = true)]
        couplings: Vec<f64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Spectral summary of a graph file or of a scenario's product graph.
    Graph {
        #[arg(long)]
        spec: PathBuf,
        /// Print the full spectrum instead of the summary.
        #[arg(long)]
        dump: bool,
    },
}

fn exit_code(err: &QlError) -> u8 {
    match err {
        QlError::Config { .. } | QlError::Parameter(_) | QlError::Json(_) => 2,
        QlError::Contract(_) | QlError::Divergence { .. } | QlError::Numeric(_) => 3,
        QlError::Io { .. } => 4,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| QlError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let mut config: ScenarioConfig = serde_json::from_str(&read(path)?)?;
    seed_override(&mut config)?;
    Ok(config)
}

/// Apply the seed override, then validate.
fn seed_override(config: &mut ScenarioConfig) -> Result<()> {
    if let Ok(seed) = std::env::var(SEED_VAR) {
        config.ensemble.base_seed = seed.trim().parse().map_err(|_| QlError::Config {
            field: SEED_VAR.into(),
            reason: format!("not an unsigned integer: {seed:?}"),
        })?;
    }
    config.validate()
}

fn resolve(out_dir: Option<&Path>, path: &Path) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn run(config: PathBuf, out_dir: Option<PathBuf>, svg: bool, workers: Option<usize>) -> Result<()> {
    let mut config = load_config(&config)?;
    config.outputs.svg |= svg;
    let result = run_scenario_with_workers(&config, workers)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    let csv = resolve(out_dir.as_deref(), &config.outputs.csv);
    let json = resolve(out_dir.as_deref(), &config.outputs.json);
    emit_csv(&result.records, &csv)?;
    emit_json(&result, &json)?;
    println!("wrote {}", csv.display());
    println!("wrote {}", json.display());
    if config.outputs.svg {
        let path = csv.with_extension("svg");
        emit_svg(&result.records, &path)?;
        println!("wrote {}", path.display());
    }
    let last = result.last();
    println!(
        "final t = {:.3} periods: order_mod = {:.6}, purity = {:.6}",
        last.t, last.order_mod, last.purity
    );
    Ok(())
}

fn sweep(config: PathBuf, couplings: Vec<f64>, workers: Option<usize>) -> Result<()> {
    let config = load_config(&config)?;
    let rows = sweep_coupling(&config, &couplings, workers)?;
    println!("K,final_order_re,final_order_mod,final_purity");
    for r in rows {
        println!(
            "{},{:.11e},{:.11e},{:.11e}",
            r.coupling, r.final_order_re, r.final_order_mod, r.final_purity
        );
    }
    Ok(())
}

/// A graph file has an `edges` array; anything else is read as a scenario
/// config whose product graph is built.
fn load_graph(path: &Path) -> Result<BiasedGraph> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("edges").is_some() {
        BiasedGraph::from_json(&text)
    } else {
        let mut config: ScenarioConfig = serde_json::from_value(value)?;
        seed_override(&mut config)?;
        config.build_graph(config.graph_seed())
    }
}

fn graph(spec: PathBuf, dump: bool) -> Result<()> {
    let g = load_graph(&spec)?;
    let out = if dump {
        let s = spectrum(&g);
        let gap = if s.len() >= 2 {
            Some(spectral_gap(&s))
        } else {
            None
        };
        serde_json::json!({
            "n": g.n(),
            "edges": g.edges().len(),
            "blocks": g.blocks().into_iter().map(|(k, v)| (k, v.len())).collect::<std::collections::BTreeMap<_, _>>(),
            "eigenvalues": s.eigenvalues,
            "spectral_gap": gap,
        })
    } else {
        serde_json::to_value(GraphSummary::of(&g))?
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out_dir,
            svg,
            workers,
        } => run(config, out_dir, svg, workers),
        Command::Sweep {
            config,
            couplings,
            workers,
        } => sweep(config, couplings, workers),
        Command::Graph { spec, dump } => graph(spec, dump),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
