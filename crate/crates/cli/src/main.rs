use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hhqi::harness::experiment::{render_text, run_experiment, ExperimentConfig};
use hhqi::harness::export::{export_mesh_svg, export_mesh_text, import_mesh_text, read_file, write_artifacts};
use hhqi::harness::tables::{compare_tables, default_tolerances, reference_table, Table, REFERENCE_TABLES};

/// Hierarchical Hermite quasi-interpolation experiments.
#[derive(Parser)]
#[command(name = "hhqi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a config file and/or flags.
    Run(RunArgs),
    /// Mesh utilities.
    #[command(subcommand)]
    Mesh(MeshCommand),
    /// Table utilities.
    #[command(subcommand)]
    Tables(TablesCommand),
}

#[derive(Args)]
struct RunArgs {
    /// Config file with `key = value` lines (flags override it).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Test function: f1 or f2.
    #[arg(long)]
    function: Option<String>,
    /// Bi-degree, e.g. `3,3`.
    #[arg(long)]
    degrees: Option<String>,
    /// Number of levels K.
    #[arg(long)]
    levels: Option<String>,
    /// Operator: tensor, hier, that, that-hier, fd, fd-hier.
    #[arg(long)]
    qi: Option<String>,
    /// Finite-difference orders, e.g. `3,3`.
    #[arg(long = "fd-order")]
    fd_order: Option<String>,
    /// Tolerance factor applied to the finest tensor error.
    #[arg(long = "eps-factor")]
    eps_factor: Option<String>,
    /// Base grid cells per direction, e.g. `8,8`.
    #[arg(long)]
    base: Option<String>,
    /// Output directory for tables and meshes.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Convert a mesh text file to SVG and/or text.
    Export {
        input: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        text: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TablesCommand {
    /// Compare a produced CSV against expected values (a path or `ref:<name>`).
    Compare {
        produced: PathBuf,
        expected: String,
        /// Relative tolerance per column, e.g. `err_sup=0.01`; repeatable.
        #[arg(long = "tol")]
        tol: Vec<String>,
    },
    /// List the built-in reference tables.
    List,
}

fn run(args: RunArgs) -> Result<()> {
    let text = match &args.config {
        Some(p) => read_file(p)?,
        None => String::new(),
    };
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').with_context(|| format!("config line {}: expected `key = value`", n + 1))?;
        pairs.push((k.trim().into(), v.trim().into()));
    }
    let flags = [
        ("function", &args.function),
        ("degrees", &args.degrees),
        ("levels", &args.levels),
        ("qi", &args.qi),
        ("fd-order", &args.fd_order),
        ("eps-factor", &args.eps_factor),
        ("base", &args.base),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            pairs.push((k.into(), v.clone()));
        }
    }
    if let Some(out) = &args.out {
        pairs.push(("out".into(), out.display().to_string()));
    }
    if pairs.is_empty() {
        bail!("nothing to run: pass --config FILE or at least --function (see `hhqi run --help`)");
    }
    let cfg = ExperimentConfig::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))?;
    let report = run_experiment(&cfg)?;
    print!("{}", render_text(&report));
    if let Some(dir) = &cfg.out {
        for p in write_artifacts(&report, dir)? {
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn compare(produced: PathBuf, expected: String, tol: Vec<String>) -> Result<bool> {
    let got = Table::parse(&read_file(&produced)?)?;
    let want = match expected.strip_prefix("ref:") {
        Some(name) => reference_table(name).with_context(|| format!("no reference table `{name}`"))?,
        None => Table::parse(&read_file(&PathBuf::from(&expected))?)?,
    };
    let mut tols = default_tolerances();
    for t in tol {
        let (k, v) = t.split_once('=').with_context(|| format!("bad tolerance `{t}` (expected column=value)"))?;
        tols.insert(k.trim().into(), v.trim().parse().with_context(|| format!("bad tolerance value in `{t}`"))?);
    }
    let mismatches = compare_tables(&got, &want, &tols);
    for m in &mismatches {
        let p = m.produced.map(|v| format!("{v:.4e}")).unwrap_or_else(|| "missing".into());
        println!("M={} {}: produced {} expected {:.4e} (rel {:.2e})", m.key, m.column, p, m.expected, m.rel);
    }
    println!("{} mismatching cells", mismatches.len());
    Ok(mismatches.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Run(args) => run(args).map(|_| true),
        Command::Mesh(MeshCommand::Export { input, svg, text }) => (|| {
            if svg.is_none() && text.is_none() {
                bail!("nothing to export: pass --svg and/or --text");
            }
            let mesh = import_mesh_text(&input)?;
            if let Some(p) = svg {
                export_mesh_svg(&mesh, &p)?;
            }
            if let Some(p) = text {
                export_mesh_text(&mesh, &p)?;
            }
            Ok(true)
        })(),
        Command::Tables(TablesCommand::Compare { produced, expected, tol }) => compare(produced, expected, tol),
        Command::Tables(TablesCommand::List) => {
            for (name, _) in REFERENCE_TABLES {
                println!("{name}");
            }
            Ok(true)
        }
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
