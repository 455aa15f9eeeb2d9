use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uwoc_core::config::{ExperimentConfig, Preset, PAPER_TRIALS};
use uwoc_core::experiments::{
    cmd_cdf, cmd_curve, cmd_diversity, format_checks, format_diversity_table, run_validation, CommandSummary,
    OutputOptions,
};
use uwoc_core::UwocError;

#[derive(Parser)]
#[command(
    name = "uwoc",
    version,
    about = "Outage probability of multi-aperture underwater optical links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outage probability against transmit power (analytic, asymptotic, Monte Carlo).
    Curve(Common),
    /// CDF of the MRC bound variable against average SNR.
    Cdf(Common),
    /// Oracle checks; exits 1 if any fails.
    Validate(Common),
    /// Analytic diversity orders and fitted slopes.
    Diversity(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// fig2, fig3a, fig3b or fig4.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write an SVG chart.
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Skip Monte Carlo curves.
    #[arg(long)]
    no_mc: bool,
    /// 10^7 trials per point.
    #[arg(long, conflicts_with = "trials")]
    paper_scale: bool,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig, UwocError> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(name)) => Preset::parse(name)
                .ok_or_else(|| UwocError::Usage(format!("unknown preset '{name}' (fig2, fig3a, fig3b, fig4)")))?
                .config(),
            (None, None) => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.mc.seed = seed;
        }
        if let Some(trials) = self.trials {
            cfg.mc.trials = trials;
        }
        if self.paper_scale {
            cfg.mc.trials = PAPER_TRIALS;
        }
        if let Some(w) = self.workers {
            cfg.mc.workers = w;
        }
        if self.no_mc {
            cfg.mc.enabled = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn output(&self) -> OutputOptions {
        OutputOptions {
            out_dir: self.out.clone(),
            svg: self.svg,
        }
    }
}

fn report(summary: &CommandSummary) -> Result<(), UwocError> {
    if let Some(conv) = summary.convention {
        println!("convention: {conv}");
    }
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    let failed = summary.failed_points();
    if failed > 0 {
        eprintln!("{failed} of {} points failed to evaluate", summary.total_points());
    }
    if summary.too_many_failures() {
        return Err(UwocError::Validation("more than 10% of points failed".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), UwocError> {
    let common = match &cli.command {
        Command::Curve(c) | Command::Cdf(c) | Command::Validate(c) | Command::Diversity(c) => c,
    };
    let cfg = common.resolve()?;
    if common.dump_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    match &cli.command {
        Command::Curve(_) => report(&cmd_curve(&cfg, &common.output())?),
        Command::Cdf(_) => report(&cmd_cdf(&cfg, &common.output())?),
        Command::Diversity(_) => {
            let (rows, path) = cmd_diversity(&cfg, &common.output())?;
            print!("{}", format_diversity_table(&rows));
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Validate(_) => {
            let checks = run_validation(&cfg)?;
            print!("{}", format_checks(&checks));
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(UwocError::Validation(format!(
                    "{failed} of {} checks failed",
                    checks.len()
                )));
            }
            println!("all {} checks passed", checks.len());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
