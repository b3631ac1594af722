use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mollicol::mesh::write_mesh;
use mollicol::problems::CaseKind;
use mollicol::study::{level_basis, level_mesh, run_level, run_study, StudyConfig};
use mollicol::Result;

/// Collocation with mollified piecewise polynomial bases.
#[derive(Parser)]
#[command(name = "mollicol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence study and write study.csv and rates.txt.
    Run(StudyArgs),
    /// Write the padded mesh of one level.
    ExportMesh(LevelArgs),
    /// Write the collocation points of one level as CSV.
    ExportPoints(LevelArgs),
    /// Assemble and solve one level and write C, s and u as triplets.
    DumpSystem(LevelArgs),
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// Key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    rp: Option<String>,
    #[arg(long)]
    mollifier: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    replicates: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Level count (`4`) or list (`1,2,3`).
    #[arg(long)]
    levels: Option<String>,
    /// Extra `key=value` settings, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct StudyArgs {
    #[command(flatten)]
    overrides: Overrides,
    /// Output directory; without it the CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LevelArgs {
    #[command(flatten)]
    overrides: Overrides,
    #[arg(long, default_value_t = 0)]
    level: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(o: &Overrides) -> Result<StudyConfig> {
    let mut cfg = match (&o.config, &o.case) {
        (Some(path), case) => {
            let mut c = StudyConfig::from_file(path)?;
            if let Some(case) = case {
                let kind: CaseKind = case.parse()?;
                if kind != c.case {
                    // A different case on the command line resets the defaults.
                    c = StudyConfig::for_case(kind);
                }
            }
            c
        }
        (None, Some(case)) => StudyConfig::for_case(case.parse()?),
        (None, None) => return Err(mollicol::Error::Config("give --case or --config".into())),
    };
    let pairs = [
        ("rp", &o.rp),
        ("mollifier", &o.mollifier),
        ("kappa", &o.kappa),
        ("scheme", &o.scheme),
        ("beta", &o.beta),
        ("gamma", &o.gamma),
        ("sigma", &o.sigma),
        ("replicates", &o.replicates),
        ("seed", &o.seed),
        ("levels", &o.levels),
    ];
    for (k, v) in pairs {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    for kv in &o.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| mollicol::Error::Config(format!("expected KEY=VALUE, got {kv:?}")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    Ok(cfg)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let mut cfg = config(&args.overrides)?;
            if args.out.is_some() {
                cfg.out = args.out;
            }
            let result = run_study(&cfg)?;
            match &cfg.out {
                Some(dir) => {
                    print!("{}", result.rates_summary());
                    println!("wrote {}", dir.join("study.csv").display());
                }
                None => {
                    print!("{}", result.to_csv());
                    eprint!("{}", result.rates_summary());
                }
            }
        }
        Command::ExportMesh(args) => {
            let cfg = config(&args.overrides)?;
            let mesh = level_mesh(&cfg, args.level)?;
            let padded = mesh.pad_ghost(mesh.mollifier_width(cfg.kappa))?;
            let mut w = output(&args.out)?;
            write_mesh(&padded, &mut w)?;
            w.flush()?;
        }
        Command::ExportPoints(args) => {
            let cfg = config(&args.overrides)?;
            let problem = mollicol::ProblemCase64::new(cfg.case);
            let basis = level_basis(&cfg, args.level)?;
            let (points, ..) = mollicol::study::run_replicate(&cfg, &problem, &basis, 0)?;
            let mut w = output(&args.out)?;
            points.write_csv(&mut w)?;
            w.flush()?;
        }
        Command::DumpSystem(args) => {
            let cfg = config(&args.overrides)?;
            let run = run_level(&cfg, args.level)?;
            let mut w = output(&args.out)?;
            run.system.write_triplets(Some(&run.solution.coeffs), &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
