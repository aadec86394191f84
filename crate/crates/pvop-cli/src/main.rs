//! Command-line front end for the pvop toolkit.

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use pvop_cli::instance::Instance;
use pvop_cli::runner::{self, SolveArgs, StabilityMode};
use pvop_core::regularity::AnalyzerOptions;

#[derive(Parser)]
#[command(
    name = "pvop",
    about = "Regularity analysis, Pareto search, grid oracles, and stability probes for polynomial vector optimization instances"
)]
struct Cli {
    /// Seed for all randomized machinery (sampling, starts, perturbations).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sign-test dead zone for base values of the leading forms.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    /// Base-sample resolution on the asymptotic cone.
    #[arg(long, global = true, default_value_t = 360)]
    samples: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArg {
    /// Path to an instance file, or `fixture:<name>` for a bundled one.
    instance: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide regularity of an instance and run the complementarity check.
    Check {
        #[command(flatten)]
        instance: InstanceArg,
        /// Also cross-check a declared asymptotic cone (heuristic).
        #[arg(long)]
        validate_cone: bool,
    },
    /// Search for a Pareto efficient point by scalarized descent.
    Solve {
        #[command(flatten)]
        instance: InstanceArg,
        /// Comma-separated positive weights, e.g. "1,2".
        #[arg(long)]
        lambda: Option<String>,
        /// Comma-separated start point, e.g. "2,2".
        #[arg(long)]
        x0: Option<String>,
        /// Extra random starts.
        #[arg(long, default_value_t = 3)]
        starts: usize,
        /// Escape radius for the unbounded-descent verdict.
        #[arg(long, default_value_t = 1e6)]
        rmax: f64,
        /// Certify the returned point against the instance's grid window.
        #[arg(long)]
        oracle_check: bool,
    },
    /// Enumerate the grid fronts on the instance window and emit CSV.
    Oracle {
        #[command(flatten)]
        instance: InstanceArg,
        /// Override the window resolution.
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Perturbation experiments; emits one CSV row per trial.
    Stability {
        #[command(flatten)]
        instance: InstanceArg,
        /// lower-degree | small-norm | local-bound | closed-graph
        #[arg(long, default_value = "lower-degree")]
        mode: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Radius for small-norm and local-bound modes.
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
    },
    /// Run the bundled regression fixtures and print PASS/FAIL per fixture.
    Examples,
}

fn parse_numbers(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("invalid number `{s}`"))
        })
        .collect()
}

fn load_instance(spec: &str) -> Result<Instance> {
    let text = if let Some(name) = spec.strip_prefix("fixture:") {
        pvop_cli::fixtures::by_name(name)
            .ok_or_else(|| anyhow!("unknown bundled fixture `{name}`"))?
            .to_string()
    } else {
        fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?
    };
    Instance::from_json(&text)
}

fn run(cli: Cli) -> Result<i32> {
    let opts = AnalyzerOptions {
        samples: cli.samples,
        seed: cli.seed,
        tol_pos: cli.tol,
        ..Default::default()
    };
    match cli.command {
        Command::Check {
            instance,
            validate_cone,
        } => {
            let inst = load_instance(&instance.instance)?;
            let (out, code) = runner::run_check(&inst, &opts, validate_cone);
            print!("{out}");
            Ok(code)
        }
        Command::Solve {
            instance,
            lambda,
            x0,
            starts,
            rmax,
            oracle_check,
        } => {
            let inst = load_instance(&instance.instance)?;
            let args = SolveArgs {
                lambda: lambda.as_deref().map(parse_numbers).transpose()?,
                x0: x0.as_deref().map(parse_numbers).transpose()?,
                starts,
                r_max: rmax,
                seed: cli.seed,
                oracle_check,
            };
            let (out, code) = runner::run_solve(&inst, &opts, &args)?;
            print!("{out}");
            Ok(code)
        }
        Command::Oracle {
            instance,
            resolution,
        } => {
            let inst = load_instance(&instance.instance)?;
            let (csv, code) = runner::run_oracle(&inst, resolution)?;
            print!("{csv}");
            Ok(code)
        }
        Command::Stability {
            instance,
            mode,
            trials,
            delta,
        } => {
            let inst = load_instance(&instance.instance)?;
            let mode = match mode.as_str() {
                "lower-degree" => StabilityMode::LowerDegree,
                "small-norm" => StabilityMode::SmallNorm { epsilon: delta },
                "local-bound" => StabilityMode::LocalBound { delta },
                "closed-graph" => StabilityMode::ClosedGraph,
                other => return Err(anyhow!("unknown stability mode `{other}`")),
            };
            let (csv, summary, code) = runner::run_stability(&inst, &opts, mode, trials, cli.seed)?;
            print!("{csv}");
            eprint!("{summary}");
            Ok(code)
        }
        Command::Examples => {
            let (out, code) = runner::run_examples(&opts);
            print!("{out}");
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
