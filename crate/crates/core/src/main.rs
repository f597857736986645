use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use evobench::algo::AlgorithmKind;
use evobench::harness::{self, BenchmarkReport, BenchmarkSpec};
use evobench::presets::Presets;
use evobench::problems::ProblemKind;
use evobench::rng::RngStream;
use evobench::Error;

#[derive(Parser)]
#[command(name = "evobench", version, about = "Seeded benchmarks of DE, SADE, RASA and IASA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PresetArgs {
    /// Preset file overriding the built-in parameters.
    #[arg(long)]
    preset: Option<PathBuf>,
    /// Override one parameter, e.g. `--set iasa.puc.CR=0.9`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl PresetArgs {
    fn load(&self) -> Result<Presets, Error> {
        let mut p = match &self.preset {
            Some(path) => Presets::from_file(path)?,
            None => Presets::default(),
        };
        p.apply_overrides(&self.overrides)?;
        Ok(p)
    }
}

#[derive(Subcommand)]
enum Command {
    /// One optimization run; prints its record as JSON.
    Run {
        #[arg(long)]
        problem: ProblemKind,
        #[arg(long)]
        algo: AlgorithmKind,
        /// Dimension (type-0 only; the other problems fix their own).
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        presets: PresetArgs,
    },
    /// Repeated runs per algorithm; writes report.csv, runs.csv and report.json.
    Bench {
        /// Problem id or `all`.
        #[arg(long)]
        problem: String,
        /// Algorithm id or `all`.
        #[arg(long, default_value = "all")]
        algo: String,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value_t = harness::DEFAULT_RUNS)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, env = harness::WORKERS_ENV)]
        workers: Option<usize>,
        /// Output directory; the report goes to stdout only when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        presets: PresetArgs,
    },
    /// Type-0 scaling study over several dimensions.
    Scale {
        #[arg(long)]
        algo: AlgorithmKind,
        #[arg(long, value_delimiter = ',', default_values_t = [10, 30, 50, 100])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = harness::DEFAULT_RUNS)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, env = harness::WORKERS_ENV)]
        workers: Option<usize>,
        /// Output directory for scale.csv, runs.csv, report.json and scale.dat.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        presets: PresetArgs,
    },
    /// Prints the parameter presets as an editable file.
    Presets {
        #[arg(long)]
        algo: Option<AlgorithmKind>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        presets: PresetArgs,
    },
}

enum Failure {
    Usage(String),
    Campaign(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Campaign(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn parse_list<T: std::str::FromStr<Err = Error> + Copy>(text: &str, all: &[T]) -> Result<Vec<T>, Failure> {
    if text.eq_ignore_ascii_case("all") {
        return Ok(all.to_vec());
    }
    text.split(',').map(|s| s.trim().parse::<T>().map_err(Failure::from)).collect()
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Campaign(format!("{}: {e}", path.display())))
}

fn summarize(reports: &[BenchmarkReport]) {
    for r in reports {
        eprintln!(
            "{:<9} {:<4} dim {:>3}: {:>3}/{} successes, avg calls {} ({:.1} s)",
            r.problem,
            r.algorithm,
            r.dim,
            r.successes,
            r.runs,
            r.avg_calls_text(),
            r.wall_time.as_secs_f64()
        );
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            problem,
            algo,
            dim,
            seed,
            presets,
        } => {
            let presets = presets.load()?;
            let setup = presets.problem_setup(problem, dim)?;
            let cfg = presets.algorithm(algo, problem, setup.dim)?;
            let mut rng = RngStream::new(seed);
            let instance = setup.instance(&mut rng)?;
            let t = setup.termination;
            let record = evobench::algo::run(instance.as_ref(), &cfg, t.max_calls, t.threshold, &mut rng)?;
            println!("{}", serde_json::to_string_pretty(&record).expect("record serializes"));
        }
        Command::Bench {
            problem,
            algo,
            dim,
            runs,
            seed,
            workers,
            out,
            presets,
        } => {
            let presets = presets.load()?;
            let problems = parse_list(&problem, &ProblemKind::ALL)?;
            let algos = parse_list(&algo, &AlgorithmKind::ALL)?;
            let specs = problems
                .iter()
                .flat_map(|&p| algos.iter().map(move |&a| (p, a)))
                .map(|(p, a)| BenchmarkSpec::from_presets(&presets, p, a, dim, runs, seed))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Campaign(format!("{}: {e}", dir.display())))?;
            }
            let workers = workers.unwrap_or_else(harness::default_workers);
            let mut reports = Vec::with_capacity(specs.len());
            for spec in &specs {
                let report = harness::run_benchmark(spec, workers)?;
                summarize(std::slice::from_ref(&report));
                reports.push(report);
            }
            if let Some(dir) = &out {
                harness::write_reports(dir, &reports)?;
            }
            print!("{}", harness::report_csv(&reports));
        }
        Command::Scale {
            algo,
            dims,
            runs,
            seed,
            workers,
            out,
            presets,
        } => {
            let presets = presets.load()?;
            let mut dims = dims;
            dims.sort_unstable();
            dims.dedup();
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Campaign(format!("{}: {e}", dir.display())))?;
            }
            let workers = workers.unwrap_or_else(harness::default_workers);
            let reports = harness::scaling_study(&presets, algo, &dims, runs, seed, workers)?;
            summarize(&reports);
            if let Some(dir) = &out {
                harness::write_reports(dir, &reports)?;
                write_file(&dir.join("scale.csv"), &harness::report_csv(&reports))?;
                harness::write_plot_data(&dir.join("scale.dat"), &reports)?;
            }
            print!("{}", harness::plot_data(&reports));
        }
        Command::Presets { algo, out, presets } => {
            let text = presets.load()?.dump(algo);
            match out {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Campaign(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
