//! CLI entry point. Exit status: 0 when every enabled assertion passes,
//! 2 on assertion failure, 1 on usage or config errors.

use clap::{Args, Parser, Subcommand};
use plancklab::config::{self, ConfigError, Overrides};
use plancklab::{acceptance, plotdata, runner};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "plancklab", version, about = "Planck-scale mass statistics of Laplacian eigenfunctions on model manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment pipeline and emit reports
    Run(RunArgs),
    /// Project a JSON report into a small plot-ready CSV
    Plotdata(PlotArgs),
    /// Run the acceptance suite and emit its artifacts
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct RunArgs {
    /// green|pack|smallmass|sweep|largevalue|hwexample|mvi|weyl
    experiment: Option<String>,
    /// TOML config file; flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    manifold: Option<String>,
    /// Family spec, repeatable (e.g. "cos:k=20", "zonal:l=20")
    #[arg(long = "family")]
    families: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
    /// Comma-separated artifact formats (json,csv)
    #[arg(long)]
    emit: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    /// Sets both eps_frac and eps_mass (and the largevalue ε)
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    eps_frac: Option<f64>,
    #[arg(long)]
    eps_mass: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Comma-separated decreasing list for sweep
    #[arg(long)]
    delta_list: Option<String>,
    #[arg(long)]
    gamma_list: Option<String>,
    #[arg(long)]
    k_list: Option<String>,
    /// equator|pole
    #[arg(long)]
    hw_mode: Option<String>,
    #[arg(long)]
    hw_delta: Option<f64>,
    #[arg(long)]
    r_pole: Option<f64>,
    #[arg(long)]
    nodal_tol: Option<f64>,
    #[arg(long)]
    radial_order: Option<u32>,
    #[arg(long)]
    angular_order: Option<u32>,
    #[arg(long)]
    global_order_factor: Option<u32>,
    /// quantile|fixed
    #[arg(long)]
    threshold: Option<String>,
    #[arg(long)]
    c2_fixed: Option<f64>,
    /// Chart coordinates of the large-value center, comma-separated
    #[arg(long)]
    center: Option<String>,
}

#[derive(Args)]
struct PlotArgs {
    /// JSON report artifact
    #[arg(long)]
    report: PathBuf,
    /// rho_vs_delta|rho_histogram|ratio_vs_k
    #[arg(long)]
    kind: String,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version go to stdout with success
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match cli.command {
        Command::Run(args) => match run_cmd(args) {
            Ok(passed) => {
                if passed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(2)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Plotdata(args) => match plot_cmd(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Selftest(args) => {
            let out_dir = args
                .out
                .or_else(|| std::env::var("PLANCKLAB_OUT_DIR").ok().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("reports/selftest"));
            match acceptance::run_all(&out_dir, args.seed) {
                Ok(outcomes) => {
                    let mut all = true;
                    for c in &outcomes {
                        println!("{c}");
                        all &= c.passed;
                    }
                    println!(
                        "selftest: {}/{} criteria passed",
                        outcomes.iter().filter(|c| c.passed).count(),
                        outcomes.len()
                    );
                    if all {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(2)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}

fn run_cmd(args: RunArgs) -> Result<bool, Box<dyn std::error::Error>> {
    let file = match &args.config {
        Some(path) => config::load_file(path)?,
        None => config::FileConfig::default(),
    };
    let ov = Overrides {
        experiment: args.experiment,
        manifold: args.manifold,
        families: args.families,
        seed: args.seed,
        out_dir: args.out,
        emit: args.emit,
        threads: args.threads,
        a: args.a,
        eps: args.eps,
        eps_frac: args.eps_frac,
        eps_mass: args.eps_mass,
        delta: args.delta,
        delta_list: args.delta_list,
        gamma_list: args.gamma_list,
        k_list: args.k_list,
        hw_mode: args.hw_mode,
        hw_delta: args.hw_delta,
        r_pole: args.r_pole,
        nodal_tol: args.nodal_tol,
        radial_order: args.radial_order,
        angular_order: args.angular_order,
        global_order_factor: args.global_order_factor,
        threshold: args.threshold,
        c2_fixed: args.c2_fixed,
        center: args.center,
    };
    let (cfg, specs) = config::resolve(file, ov)?;
    // pipeline precondition failures after this point are still config
    // mistakes; map core errors to status 1 via the error return
    let outcome = runner::run(&cfg, &specs).map_err(|e| ConfigError(format!("{e:#}")))?;
    runner::print_summary(&cfg, &outcome);
    Ok(outcome.all_passed())
}

fn plot_cmd(args: PlotArgs) -> Result<(), Box<dyn std::error::Error>> {
    let kind = plotdata::PlotKind::parse(&args.kind)?;
    let report = plotdata::load_report(&args.report)?;
    let csv = plotdata::render(&report, kind)?;
    match args.out {
        Some(path) => std::fs::write(&path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
