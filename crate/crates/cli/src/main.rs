//! Command-line front end: parses a config, dispatches to the library,
//! and writes CSV/JSON artifacts with a reproducibility manifest next to
//! every output file.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use halfline_core::environment::{sample_environment, Environment};
use halfline_core::experiments::{
    oracle_grid, run_experiment, run_oracle_suite, ExperimentConfig, ExperimentOutput, Mode,
};
use halfline_core::lerrw::{simulate, write_trajectories_csv, Schedule};
use halfline_core::resistance::{build_resistance_profile, check_bounds, WeightSequence};
use halfline_core::rng::stream_rng;
use halfline_core::specialfn::MomentTable;
use halfline_core::weights::{Verdict, WeightProfile};
use halfline_core::Error as CoreError;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "halfline",
    version,
    about = "Reinforced random walks on the half-line: simulation, oracles, experiments"
)]
struct Cli {
    /// Worker threads for parallel ensembles (0 = one per CPU).
    /// Outputs are identical at any thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Output directory; overrides the HALFLINE_OUT_DIR environment
    /// variable. Relative --out paths are resolved against it.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ProfileArgs {
    /// Weight family: "logpoly" (x^alpha ln^beta x) or "takei" (x^alpha).
    #[arg(long, default_value = "logpoly")]
    family: String,

    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,

    /// Required for the logpoly family; must be omitted or 0 for takei.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,

    /// Reinforcement increment per traversal (0 = un-reinforced walk).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    delta: f64,
}

impl ProfileArgs {
    fn build(&self) -> Result<WeightProfile, CoreError> {
        match self.family.as_str() {
            "logpoly" => {
                let beta = self.beta.ok_or_else(|| {
                    CoreError::Config("--beta is required for --family logpoly".into())
                })?;
                WeightProfile::log_poly(self.alpha, beta, self.delta)
            }
            "takei" => {
                if let Some(b) = self.beta {
                    if b != 0.0 {
                        return Err(CoreError::Config(
                            "--beta must be omitted or 0 for --family takei".into(),
                        ));
                    }
                }
                WeightProfile::takei(self.alpha, self.delta)
            }
            other => Err(CoreError::Config(format!(
                "--family must be \"logpoly\" or \"takei\", got {other:?}"
            ))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the analytic recurrence/transience verdict for a profile.
    Classify {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Truncation for the diagnostic partial sum of 1/w0.
        #[arg(long, default_value_t = 10_000)]
        phi0_truncation: u64,
    },
    /// Write the initial-weight table as CSV (x,w).
    Weights {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        x_max: usize,
        #[arg(long, default_value = "weights.csv")]
        out: PathBuf,
    },
    /// Build the resistance profile of a weight sequence and export it as
    /// CSV (x,log_gamma,h,pi,t).
    Resistance {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        x_max: Option<usize>,
        /// Read weights from a CSV (x,w) instead of the profile.
        #[arg(long, conflicts_with = "x_max")]
        weights_csv: Option<PathBuf>,
        /// Certified upper bound for the total reversing mass; enables the
        /// mass-bound check.
        #[arg(long)]
        z_upper: Option<f64>,
        /// Evaluate the comparison inequalities; violations exit 3.
        #[arg(long)]
        check_bounds: bool,
        #[arg(long, default_value = "resistance.csv")]
        out: PathBuf,
    },
    /// Closed-form moment table of the environment log-resistance
    /// (x,mean_s,var_s,predictor_mean,predictor_var).
    Moments {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Comma-separated list of sites.
        #[arg(long, value_delimiter = ',')]
        xs: Vec<u64>,
        #[arg(long, default_value = "moments.csv")]
        out: PathBuf,
    },
    /// Exhaustive reinforced-vs-annealed equivalence suite on the
    /// reference grid; exits 3 on any mismatch.
    Oracle {
        #[arg(long, default_value_t = 12)]
        max_len: u32,
        #[arg(long, default_value = "oracle.csv")]
        out: PathBuf,
    },
    /// Simulate reinforced-walk replicas and dump trajectory checkpoints
    /// as CSV (replica,n,max_position,position).
    Simulate {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        n_steps: u64,
        #[arg(long, default_value_t = 1)]
        replicas: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Checkpoint schedule: "pow2" or "decades".
        #[arg(long, default_value = "pow2")]
        checkpoints: String,
        /// Comma-separated levels whose first-entrance times are recorded.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        hit_levels: Vec<u64>,
        #[arg(long, default_value = "trajectories.csv")]
        out: PathBuf,
    },
    /// Sample a Beta random environment and export it as CSV (i,p,s).
    Environment {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        x_max: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "environment.csv")]
        out: PathBuf,
    },
    /// Run an experiment from a JSON config (flags override fields).
    Experiment {
        /// JSON file with an experiment configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        n_steps: Option<u64>,
        #[arg(long)]
        replicas: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Profile override as JSON, e.g.
        /// '{"family":"logpoly","alpha":0,"beta":-1,"delta":1}'.
        #[arg(long)]
        profile: Option<String>,
        /// Exit 3 when the experiment's verdict fails.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value = "experiment.csv")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: failed to configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("HALFLINE_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    match run(cli, &out_dir) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err.downcast_ref::<CoreError>() {
                Some(CoreError::Config(_)) | Some(CoreError::InvalidProfile(_)) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

struct Manifest {
    command: String,
    config: serde_json::Value,
    master_seed: Option<u64>,
    output_paths: Vec<PathBuf>,
    started: Instant,
}

impl Manifest {
    fn new(config: serde_json::Value, master_seed: Option<u64>) -> Self {
        Self {
            command: std::env::args().collect::<Vec<_>>().join(" "),
            config,
            master_seed,
            output_paths: Vec::new(),
            started: Instant::now(),
        }
    }

    fn write(&self, primary_out: &Path) -> anyhow::Result<()> {
        let manifest_path = sibling(primary_out, "manifest.json");
        let doc = json!({
            "command": self.command,
            "config": self.config,
            "master_seed": self.master_seed,
            "output_paths": self.output_paths,
            "tool_version": VERSION,
            "wall_time_secs": self.started.elapsed().as_secs_f64(),
            "schema_version": 1,
        });
        let mut f = BufWriter::new(File::create(&manifest_path)?);
        serde_json::to_writer_pretty(&mut f, &doc)?;
        f.write_all(b"\n")?;
        Ok(())
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn resolve(out_dir: &Path, out: &Path) -> PathBuf {
    if out.is_absolute() {
        out.to_path_buf()
    } else {
        out_dir.join(out)
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn run(cli: Cli, out_dir: &Path) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Classify { profile, phi0_truncation } => {
            let p = profile.build()?;
            let verdict = p.classify_recurrence_with(phi0_truncation);
            match verdict.verdict {
                Verdict::Recurrent => println!("recurrent"),
                Verdict::Transient => println!("transient"),
            }
            eprintln!(
                "phi0 partial sum up to {}: {:.6e}",
                verdict.truncation, verdict.phi0_partial
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Weights { profile, x_max, out } => {
            let p = profile.build()?;
            let out = resolve(out_dir, &out);
            let mut manifest = Manifest::new(json!({"profile": p, "x_max": x_max}), None);
            let w = WeightSequence::from_profile(&p, x_max);
            w.write_csv(create(&out)?)?;
            manifest.output_paths.push(out.clone());
            manifest.write(&out)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Resistance {
            profile,
            x_max,
            weights_csv,
            z_upper,
            check_bounds: do_check,
            out,
        } => {
            let w = match (&weights_csv, x_max) {
                (Some(path), _) => WeightSequence::read_csv(BufReader::new(File::open(path)?))?,
                (None, Some(n)) => WeightSequence::from_profile(&profile.build()?, n),
                (None, None) => {
                    return Err(CoreError::Config(
                        "pass either --x-max (profile weights) or --weights-csv".into(),
                    )
                    .into())
                }
            };
            let out = resolve(out_dir, &out);
            let mut manifest = Manifest::new(
                json!({"x_max": w.x_max(), "z_upper": z_upper, "weights_csv": weights_csv}),
                None,
            );
            let prof = build_resistance_profile(&w)?;
            prof.write_csv(create(&out)?)?;
            manifest.output_paths.push(out.clone());
            manifest.write(&out)?;
            println!("wrote {}", out.display());
            if do_check {
                let report = check_bounds(&prof, z_upper, 1e-10);
                for c in &report.checks {
                    println!(
                        "bound {:<16} min slack {:.6e} at x = {} ({} violations)",
                        c.bound.label(),
                        c.min_slack,
                        c.argmin_x,
                        c.violations
                    );
                }
                if !report.pass() {
                    return Ok(ExitCode::from(3));
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Moments { profile, xs, out } => {
            let p = profile.build()?;
            if xs.is_empty() {
                return Err(CoreError::Config("--xs must list at least one site".into()).into());
            }
            let mut xs = xs;
            xs.sort_unstable();
            xs.dedup();
            let out = resolve(out_dir, &out);
            let mut manifest = Manifest::new(json!({"profile": p, "xs": xs}), None);
            let table = MomentTable::build(&p, &xs)?;
            table.write_csv(create(&out)?)?;
            manifest.output_paths.push(out.clone());
            manifest.write(&out)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Oracle { max_len, out } => {
            let out = resolve(out_dir, &out);
            let mut manifest = Manifest::new(json!({"max_len": max_len, "grid": "default"}), None);
            let report = run_oracle_suite(max_len, &oracle_grid())?;
            report.write_csv(create(&out)?)?;
            manifest.output_paths.push(out.clone());
            manifest.write(&out)?;
            let worst = report
                .rows
                .iter()
                .map(|r| r.max_rel_err)
                .fold(0.0f64, f64::max);
            println!(
                "oracle suite: {} profiles, paths up to length {}, max rel err {:.3e} -> {}",
                report.rows.len(),
                max_len,
                worst,
                if report.pass() { "pass" } else { "FAIL" }
            );
            if report.pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }

        Command::Simulate {
            profile,
            n_steps,
            replicas,
            seed,
            checkpoints,
            hit_levels,
            out,
        } => {
            let p = profile.build()?;
            let schedule = match checkpoints.as_str() {
                "pow2" => Schedule::PowersOfTwo,
                "decades" => Schedule::Decades,
                other => {
                    return Err(CoreError::Config(format!(
                        "--checkpoints must be \"pow2\" or \"decades\", got {other:?}"
                    ))
                    .into())
                }
            };
            let out = resolve(out_dir, &out);
            let mut manifest = Manifest::new(
                json!({
                    "profile": p, "n_steps": n_steps, "replicas": replicas,
                    "checkpoints": schedule, "hit_levels": hit_levels,
                }),
                Some(seed),
            );
            let stats: Vec<_> = (0..replicas)
                .into_par_iter()
                .map(|r| {
                    let mut rng = stream_rng(seed, r as u64);
                    simulate(&p, n_steps, &schedule, &hit_levels, &mut rng)
                })
                .collect();
            write_trajectories_csv(&stats, create(&out)?)?;
            manifest.output_paths.push(out.clone());
            manifest.write(&out)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Environment { profile, x_max, seed, out } => {
            let p = profile.build()?;
            let out = resolve(out_dir, &out);
            let mut manifest = Manifest::new(json!({"profile": p, "x_max": x_max}), Some(seed));
            let env: Environment = sample_environment(&p, x_max, seed)?;
            env.write_csv(create(&out)?)?;
            manifest.output_paths.push(out.clone());
            manifest.write(&out)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Experiment {
            config,
            mode,
            n_steps,
            replicas,
            seed,
            epsilon,
            profile,
            strict,
            out,
        } => {
            let mut cfg: ExperimentConfig = match &config {
                Some(path) => serde_json::from_reader(BufReader::new(File::open(path)?))
                    .map_err(|e| CoreError::Config(format!("config file: {e}")))?,
                None => {
                    let profile = profile.as_deref().ok_or_else(|| {
                        CoreError::Config("--profile is required without --config".into())
                    })?;
                    let p: WeightProfile = serde_json::from_str(profile)
                        .map_err(|e| CoreError::Config(format!("--profile: {e}")))?;
                    ExperimentConfig::new(p, Mode::ReinforcedScaling, 1_000_000)
                }
            };
            if let Some(p) = &profile {
                if config.is_some() {
                    cfg.profile = serde_json::from_str(p)
                        .map_err(|e| CoreError::Config(format!("--profile: {e}")))?;
                }
            }
            if let Some(m) = &mode {
                cfg.mode = serde_json::from_value(json!(m))
                    .map_err(|e| CoreError::Config(format!("--mode: {e}")))?;
            }
            if let Some(n) = n_steps {
                cfg.n_steps = n;
            }
            if let Some(r) = replicas {
                cfg.n_replicas = r;
            }
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            if let Some(e) = epsilon {
                cfg.epsilon = e;
            }
            cfg.validate()?;

            let out = resolve(out_dir, &out);
            let mut manifest = Manifest::new(serde_json::to_value(&cfg)?, Some(cfg.master_seed));
            let output: ExperimentOutput = run_experiment(&cfg)?;
            output.write_csv(create(&out)?)?;
            let summary_path = sibling(&out, "summary.json");
            {
                let mut f = create(&summary_path)?;
                serde_json::to_writer_pretty(&mut f, &output.summary_json())?;
                f.write_all(b"\n")?;
            }
            manifest.output_paths.push(out.clone());
            manifest.output_paths.push(summary_path);
            manifest.write(&out)?;
            match output.passed() {
                Some(ok) => println!(
                    "wrote {} (verdict: {})",
                    out.display(),
                    if ok { "pass" } else { "fail" }
                ),
                None => println!("wrote {}", out.display()),
            }
            let oracle_fail = matches!(&output, ExperimentOutput::Oracle(r) if !r.pass());
            if oracle_fail || (strict && output.passed() == Some(false)) {
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
