//! Command-line front end: complexity bounds, sample-size plans, sampling,
//! exact and approximate mining, guarantee verification, and the bound
//! comparison grid, all deterministic given flags and seed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use vcmine::approx::{self, ApproxResult, PhiPolicy};
use vcmine::bounds::{self, Constants, Mode, TaskSpec};
use vcmine::complexity;
use vcmine::corpus::{self, Dataset};
use vcmine::error::{Error, Result};
use vcmine::miner::{self, PatternCollection, PatternKind};
use vcmine::sampler;
use vcmine::verify;

#[derive(Parser)]
#[command(name = "vcmine", version, about = "Sampling-based market basket mining with VC-dimension sample bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Fi,
    Topk,
    Ar,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Abs,
    Rel,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Abs => Mode::Absolute,
            ModeArg::Rel => Mode::Relative,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the single-pass d-index upper bound of a FIMI file (q=...),
    /// and with --exact also the exact d-index (d=...)
    Dindex {
        file: PathBuf,
        #[arg(long)]
        exact: bool,
    },
    /// Evaluate a sample-size plan and print it as key=value lines
    Bound {
        #[arg(long, value_enum)]
        task: TaskArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = 0.5)]
        cprime: f64,
        /// Clamp sizes to this population; omit for unclamped values
        #[arg(long)]
        population: Option<u64>,
    },
    /// Draw a uniform with-replacement sample and write it in FIMI format
    Sample {
        file: PathBuf,
        #[arg(long)]
        size: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output path; stdout when omitted
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Mine a FIMI file exactly and print patterns, one per line
    Mine {
        file: PathBuf,
        #[arg(long, value_enum)]
        task: TaskArg,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Mine from a sample sized for the requested guarantee
    Approx {
        file: PathBuf,
        #[arg(long, value_enum)]
        task: TaskArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Override the d-index bound; computed from the file by default
        #[arg(long)]
        d: Option<usize>,
        /// Relative top-K first-stage oversampling factor
        #[arg(long, default_value_t = 4.0)]
        phi_factor: f64,
        /// Independent repetitions with seeds seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        runs: usize,
        /// Pattern output path (suffixed .run<i> when runs > 1)
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = 0.5)]
        cprime: f64,
        /// Also time exact mining of the full file and print a timing CSV
        #[arg(long)]
        timing: bool,
    },
    /// Check an approximate pattern file against exact mining; exit 0 iff
    /// every property holds
    Verify {
        file: PathBuf,
        #[arg(long)]
        approx: PathBuf,
        #[arg(long, value_enum)]
        task: TaskArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        epsilon: f64,
        /// Print the report as a CSV row instead of key=value lines
        #[arg(long)]
        csv: bool,
    },
    /// CSV of our sample sizes against prior work over a parameter grid
    CompareBounds {
        #[arg(long)]
        d: usize,
        #[arg(long = "Delta")]
        delta_len: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = TaskArg::Fi)]
        task: TaskArg,
        /// Fixed epsilon for the theta grid
        #[arg(long)]
        epsilon: Option<f64>,
        /// Fixed theta for the epsilon grid
        #[arg(long)]
        theta: Option<f64>,
        /// start:end:count
        #[arg(long)]
        theta_grid: Option<String>,
        /// start:end:count
        #[arg(long)]
        epsilon_grid: Option<String>,
    },
    /// Generate a dataset with VC-dimension exactly d in FIMI format
    Gen {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("vcmine: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Dindex { file, exact } => {
            let dataset = Dataset::load_fimi(&file)?;
            let profile = complexity::ComplexityProfile::compute(&dataset, exact, None)?;
            println!("q={}", profile.dindex_upper_bound);
            if let Some(d) = profile.dindex_exact {
                println!("d={d}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound {
            task,
            mode,
            epsilon,
            delta,
            theta,
            gamma,
            k,
            d,
            c,
            cprime,
            population,
        } => {
            let spec = build_spec(task, mode.into(), theta, gamma, k, epsilon, delta)?;
            let constants = Constants { c, c_prime: cprime };
            let plan = bounds::sample_size(&spec, d, &constants, population.unwrap_or(u64::MAX))?;
            print!("{}", plan.to_kv());
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample {
            file,
            size,
            seed,
            output,
        } => {
            let dataset = Dataset::load_fimi(&file)?;
            let sample = sampler::draw(&dataset, size, seed)?;
            let as_dataset = Dataset::new(sample.transactions().to_vec())?;
            write_text(output.as_deref(), &as_dataset.to_fimi_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Mine {
            file,
            task,
            theta,
            gamma,
            k,
            output,
        } => {
            let dataset = Dataset::load_fimi(&file)?;
            let collection = match task {
                TaskArg::Fi => miner::mine_fi(dataset.transactions(), require(theta, "--theta")?)?,
                TaskArg::Ar => miner::mine_ar(
                    dataset.transactions(),
                    require(theta, "--theta")?,
                    require(gamma, "--gamma")?,
                )?,
                TaskArg::Topk => {
                    let top = miner::mine_topk(dataset.transactions(), require(k, "--k")?)?;
                    eprintln!("fk={}", miner::format_sig10(top.fk));
                    top.collection
                }
            };
            write_text(output.as_deref(), &collection.to_lines())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Approx {
            file,
            task,
            mode,
            theta,
            gamma,
            k,
            epsilon,
            delta,
            seed,
            d,
            phi_factor,
            runs,
            output,
            c,
            cprime,
            timing,
        } => {
            if runs == 0 {
                return Err(Error::InvalidParameter("--runs must be >= 1".into()));
            }
            if runs > 1 && output.is_none() {
                return Err(Error::InvalidParameter(
                    "--output is required when --runs > 1".into(),
                ));
            }
            let dataset = Dataset::load_fimi(&file)?;
            let constants = Constants { c, c_prime: cprime };
            let mode: Mode = mode.into();
            let phi = PhiPolicy {
                initial_factor: phi_factor,
                max_retries: 3,
            };
            let run_one = |run_seed: u64| -> Result<(ApproxResult, u128)> {
                let started = Instant::now();
                let result = match task {
                    TaskArg::Fi => approx::approx_fi(
                        &dataset,
                        require(theta, "--theta")?,
                        epsilon,
                        delta,
                        mode,
                        &constants,
                        d,
                        run_seed,
                    )?,
                    TaskArg::Topk => approx::approx_topk(
                        &dataset,
                        require(k, "--k")?,
                        epsilon,
                        delta,
                        mode,
                        &constants,
                        phi,
                        d,
                        run_seed,
                    )?,
                    TaskArg::Ar => approx::approx_ar(
                        &dataset,
                        require(theta, "--theta")?,
                        require(gamma, "--gamma")?,
                        epsilon,
                        delta,
                        mode,
                        &constants,
                        d,
                        run_seed,
                    )?,
                };
                Ok((result, started.elapsed().as_millis()))
            };
            let outcomes: Vec<Result<(ApproxResult, u128)>> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..runs)
                    .map(|i| scope.spawn(move || run_one(seed + i as u64)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("run thread panicked"))
                    .collect()
            });
            let mut sample_millis_first = 0u128;
            for (i, outcome) in outcomes.into_iter().enumerate() {
                let (result, millis) = outcome?;
                if i == 0 {
                    sample_millis_first = millis;
                }
                println!("run={i}");
                println!("seed={}", seed + i as u64);
                print!("{}", result.plan.to_kv());
                println!("patterns={}", result.collection.len());
                println!("millis={millis}");
                match &output {
                    Some(path) => {
                        let target = if runs == 1 {
                            path.clone()
                        } else {
                            suffixed(path, &format!(".run{i}"))
                        };
                        write_text(Some(&target), &result.collection.to_lines())?;
                        println!("output={}", target.display());
                    }
                    None => print!("{}", result.collection.to_lines()),
                }
            }
            if timing {
                let started = Instant::now();
                match task {
                    TaskArg::Fi => {
                        miner::mine_fi(dataset.transactions(), require(theta, "--theta")?)?;
                    }
                    TaskArg::Topk => {
                        miner::mine_topk(dataset.transactions(), require(k, "--k")?)?;
                    }
                    TaskArg::Ar => {
                        miner::mine_ar(
                            dataset.transactions(),
                            require(theta, "--theta")?,
                            require(gamma, "--gamma")?,
                        )?;
                    }
                }
                let full = started.elapsed().as_millis();
                println!("phase,millis");
                println!("sample_and_mine,{sample_millis_first}");
                println!("full_mine,{full}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            file,
            approx,
            task,
            mode,
            theta,
            gamma,
            k,
            epsilon,
            csv,
        } => {
            let dataset = Dataset::load_fimi(&file)?;
            let text = std::fs::read_to_string(&approx).map_err(|source| Error::Io {
                path: approx.clone(),
                source,
            })?;
            let mode: Mode = mode.into();
            let report = match task {
                TaskArg::Fi => {
                    let theta = require(theta, "--theta")?;
                    let approx = PatternCollection::parse(&text, PatternKind::Itemsets)?;
                    let exact = miner::mine_fi(dataset.transactions(), theta)?;
                    verify::check_fi(&dataset, &exact, &approx, theta, epsilon, mode)?
                }
                TaskArg::Topk => {
                    let k = require(k, "--k")?;
                    let approx = PatternCollection::parse(&text, PatternKind::Itemsets)?;
                    let top = miner::mine_topk(dataset.transactions(), k)?;
                    verify::check_fi(&dataset, &top.collection, &approx, top.fk, epsilon, mode)?
                }
                TaskArg::Ar => {
                    let theta = require(theta, "--theta")?;
                    let gamma = require(gamma, "--gamma")?;
                    let approx = PatternCollection::parse(&text, PatternKind::Rules)?;
                    let exact = miner::mine_ar(dataset.transactions(), theta, gamma)?;
                    verify::check_ar(&dataset, &exact, &approx, theta, gamma, epsilon, mode)?
                }
            };
            if csv {
                println!("{}", verify::VerificationReport::csv_header());
                println!("{}", report.to_csv_row());
            } else {
                print!("{}", report.to_kv());
            }
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::CompareBounds {
            d,
            delta_len,
            delta,
            task,
            epsilon,
            theta,
            theta_grid,
            epsilon_grid,
        } => {
            if theta_grid.is_none() && epsilon_grid.is_none() {
                return Err(Error::InvalidParameter(
                    "provide --theta-grid and/or --epsilon-grid".into(),
                ));
            }
            let spec_for = |theta: f64, epsilon: f64| -> Result<TaskSpec> {
                match task {
                    TaskArg::Fi => Ok(TaskSpec::fi(Mode::Relative, theta, epsilon, delta)),
                    TaskArg::Ar => Ok(TaskSpec::ar(
                        Mode::Relative,
                        theta,
                        gamma_for_comparison(),
                        epsilon,
                        delta,
                    )),
                    TaskArg::Topk => Err(Error::UnsupportedPriorWork),
                }
            };
            let constants = Constants::default();
            println!("theta,epsilon,delta,d,Delta,ours,prior");
            let emit = |theta: f64, epsilon: f64| -> Result<()> {
                let spec = spec_for(theta, epsilon)?;
                let ours = bounds::sample_size(&spec, d, &constants, u64::MAX)?.sample_size;
                let prior = bounds::prior_work_size(&spec, delta_len)?;
                println!("{theta},{epsilon},{delta},{d},{delta_len},{ours},{prior}");
                Ok(())
            };
            if let Some(grid) = theta_grid {
                let eps = require(epsilon, "--epsilon")?;
                for theta in parse_grid(&grid)? {
                    emit(theta, eps)?;
                }
            }
            if let Some(grid) = epsilon_grid {
                let theta = require(theta, "--theta")?;
                for eps in parse_grid(&grid)? {
                    emit(theta, eps)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen {
            d,
            extra,
            seed,
            output,
        } => {
            let dataset = corpus::generate_adversarial(d, extra, seed)?;
            write_text(output.as_deref(), &dataset.to_fimi_string())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Confidence used when comparing AR bounds; the prior-work formula does not
/// depend on it.
fn gamma_for_comparison() -> f64 {
    0.5
}

fn build_spec(
    task: TaskArg,
    mode: Mode,
    theta: Option<f64>,
    gamma: Option<f64>,
    k: Option<usize>,
    epsilon: f64,
    delta: f64,
) -> Result<TaskSpec> {
    Ok(match task {
        TaskArg::Fi => TaskSpec::fi(mode, require(theta, "--theta")?, epsilon, delta),
        TaskArg::Topk => TaskSpec::topk(mode, require(k, "--k")?, epsilon, delta),
        TaskArg::Ar => TaskSpec::ar(
            mode,
            require(theta, "--theta")?,
            require(gamma, "--gamma")?,
            epsilon,
            delta,
        ),
    })
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("{flag} is required for this task")))
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `start:end:count` into `count` evenly spaced values, inclusive.
fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidParameter(format!(
            "grid must be start:end:count, got {spec:?}"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad grid start {:?}", parts[0])))?;
    let end: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad grid end {:?}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad grid count {:?}", parts[2])))?;
    if count == 0 {
        return Err(Error::InvalidParameter("grid count must be >= 1".into()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (end - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}
