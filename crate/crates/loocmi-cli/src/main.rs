//! Command-line front end: parse an experiment config, dispatch to the
//! measure/verification engines, and emit deterministic JSON or CSV.

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use loocmi::config::{parse_config_named, ExperimentConfig, Mode};
use loocmi::corpus;
use loocmi::experiment::{format_sig, run, sweep, verify_corpus, RunReport, VerifyReport};
use loocmi::num::parse_rat;
use std::io::Write;
use std::path::PathBuf;

const BUDGET_ENV: &str = "LOOCMI_BUDGET";

#[derive(Parser)]
#[command(
    name = "loocmi",
    version,
    about = "Exact leave-one-out conditional-mutual-information measures, \
             one-inclusion graph learning, and their verification suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Mc,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Display summary values in bits instead of nats (formatting only;
    /// serialized reports always carry nats).
    #[arg(long)]
    bits: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and report every measure and check.
    Measure {
        /// Experiment config (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Override the config's mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Monte-carlo sample count override.
        #[arg(long)]
        samples: Option<u64>,
        /// Monte-carlo seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Term-budget override (also via LOOCMI_BUDGET).
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump a one-inclusion graph with its bounded-out-degree orientation.
    Oig {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated point coordinates, e.g. "1,2,3" or "1/2,3/4".
        #[arg(long)]
        points: String,
        /// Out-degree cap (default: the config's cap, else the VC dimension).
        #[arg(long)]
        degree: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the bundled verification corpus (or one config) and exit
    /// nonzero on any failed check.
    Verify {
        /// Verify a single config instead of the bundled corpus.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Expand the config's sweep grid into a CSV table.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The censored-posterior preset: five increasing points labeled
    /// (1,1,1,0,0) under the max-positive-point threshold rule.
    Counterexample {
        /// Five comma-separated integer coordinates.
        #[arg(long, default_value = "1,2,3,4,5")]
        points: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn emit(output: &OutputArgs, text: &str) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn load_config(path: &PathBuf, budget: Option<u64>) -> anyhow::Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "experiment".to_string());
    let mut config = match parse_config_named(&text, &stem) {
        Ok(c) => c,
        Err(loocmi::Error::Config(errors)) => {
            bail!(
                "invalid config {}:\n  - {}",
                path.display(),
                errors.join("\n  - ")
            );
        }
        Err(e) => return Err(e.into()),
    };
    let env_budget = std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse::<u64>().ok());
    if let Some(b) = budget.or(env_budget) {
        config.budget = b;
    }
    Ok(config)
}

fn display_unit(bits: bool) -> (&'static str, f64) {
    if bits {
        ("bits", std::f64::consts::LN_2)
    } else {
        ("nats", 1.0)
    }
}

fn summarize_run(report: &RunReport, bits: bool) {
    let (unit, scale) = display_unit(bits);
    eprintln!(
        "{} [{}], n = {}, {} terms",
        report.name, report.mode, report.n, report.terms
    );
    for m in &report.measures {
        // risk and its relatives are probabilities, not information
        let informational = matches!(
            m.name.as_str(),
            "loo_ecmi" | "mi_l_u" | "mi_yhat_u_given_z" | "mi_hyp_u_given_z" | "mi_hyp_s"
        );
        let (label, s) = if informational { (unit, scale) } else { ("", 1.0) };
        match m.nats {
            Some(v) => {
                let se = m
                    .stderr_nats
                    .map(|e| format!(" +- {}", format_sig(e / s)))
                    .unwrap_or_default();
                eprintln!("  {:<22} {}{se} {label}", m.name, format_sig(v / s));
            }
            None => eprintln!(
                "  {:<22} unavailable ({})",
                m.name,
                m.note.as_deref().unwrap_or("")
            ),
        }
    }
    let failures = report.failures();
    if !report.checks.is_empty() {
        eprintln!(
            "  checks: {}/{} pass",
            report.checks.len() - failures,
            report.checks.len()
        );
    }
}

fn run_report_csv(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str("measure,nats,stderr_nats,note\n");
    for m in &report.measures {
        out.push_str(&format!(
            "{},{},{},{}\n",
            m.name,
            m.nats.map(format_sig).unwrap_or_default(),
            m.stderr_nats.map(format_sig).unwrap_or_default(),
            m.note.as_deref().unwrap_or("").replace(',', ";"),
        ));
    }
    for c in &report.checks {
        out.push_str(&format!(
            "check:{},{},{},pass={}\n",
            c.check,
            format_sig(c.lhs),
            format_sig(c.rhs),
            c.pass
        ));
    }
    out
}

fn verify_report_csv(report: &VerifyReport) -> String {
    let mut out = String::new();
    out.push_str("config,check,kind,lhs,rhs,slack,tolerance,pass\n");
    for cfg in &report.configs {
        for c in &cfg.checks {
            out.push_str(&format!(
                "{},{},{:?},{},{},{},{},{}\n",
                cfg.name,
                c.check,
                c.kind,
                format_sig(c.lhs),
                format_sig(c.rhs),
                format_sig(c.slack),
                format_sig(c.tolerance),
                c.pass
            ));
        }
    }
    out.push_str(&format!(
        "counterexample,censored-posterior,,{},{},,,{}\n",
        format_sig(report.counterexample.posterior_at_censored),
        format_sig(report.counterexample.conditional_entropy_nats),
        report.counterexample.pass
    ));
    out
}

fn cmd_measure(
    config_path: PathBuf,
    mode: Option<ModeArg>,
    samples: Option<u64>,
    seed: Option<u64>,
    budget: Option<u64>,
    output: OutputArgs,
) -> anyhow::Result<i32> {
    let mut config = load_config(&config_path, budget)?;
    match mode {
        Some(ModeArg::Exact) => config.mode = Mode::Exact,
        Some(ModeArg::Mc) => {
            let (s0, d0) = match config.mode {
                Mode::MonteCarlo { samples, seed } => (Some(samples), Some(seed)),
                Mode::Exact => (None, None),
            };
            let samples = samples
                .or(s0)
                .ok_or_else(|| anyhow!("--samples required for monte-carlo mode"))?;
            let seed = seed
                .or(d0)
                .ok_or_else(|| anyhow!("--seed required for monte-carlo mode"))?;
            config.mode = Mode::MonteCarlo { samples, seed };
        }
        None => {
            if let Mode::MonteCarlo {
                samples: s0,
                seed: d0,
            } = config.mode
            {
                config.mode = Mode::MonteCarlo {
                    samples: samples.unwrap_or(s0),
                    seed: seed.unwrap_or(d0),
                };
            }
        }
    }
    let started = std::time::Instant::now();
    let report = run(&config)?;
    eprintln!(
        "completed in {:.1} ms",
        started.elapsed().as_secs_f64() * 1e3
    );
    summarize_run(&report, output.bits);
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Csv => run_report_csv(&report),
    };
    emit(&output, &text)?;
    Ok(if report.failures() == 0 { 0 } else { 1 })
}

fn cmd_oig(
    config_path: PathBuf,
    points: String,
    degree: Option<usize>,
    output: OutputArgs,
) -> anyhow::Result<i32> {
    let config = load_config(&config_path, None)?;
    let coords: Vec<_> = points
        .split(',')
        .map(|p| parse_rat(p.trim()))
        .collect::<Result<_, _>>()?;
    let doc = loocmi::experiment::oig_dump(&config, &coords, degree)?;
    emit(&output, &serde_json::to_string_pretty(&doc)?)?;
    Ok(0)
}

fn verify_single(config: &ExperimentConfig) -> anyhow::Result<VerifyReport> {
    let report = run(config)?;
    let (domain, sample) = corpus::counterexample_preset()?;
    let counterexample =
        loocmi::bounds::counterexample_censored_posterior(&domain, &sample, "preset")?;
    let failures = report.failures() + usize::from(!counterexample.pass);
    Ok(VerifyReport {
        version: loocmi::experiment::VERSION.to_string(),
        total_checks: report.checks.len() + 1,
        configs: vec![loocmi::experiment::ConfigVerification {
            name: report.name.clone(),
            fingerprint: report.fingerprint.clone(),
            interpolating: report.interpolating,
            chain: report.chain.clone(),
            checks: report.checks,
            error: None,
        }],
        counterexample,
        failures,
    })
}

fn cmd_verify(
    config: Option<PathBuf>,
    budget: Option<u64>,
    output: OutputArgs,
) -> anyhow::Result<i32> {
    let report = match config {
        Some(path) => {
            let config = load_config(&path, budget)?;
            verify_single(&config)?
        }
        None => verify_corpus()?,
    };
    let (unit, scale) = display_unit(output.bits);
    for cfg in &report.configs {
        let failed: Vec<&str> = cfg
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.check.as_str())
            .collect();
        match &cfg.error {
            Some(e) => eprintln!("  {:<32} ERROR: {e}", cfg.name),
            None if failed.is_empty() => {
                eprintln!("  {:<32} ok ({} checks)", cfg.name, cfg.checks.len())
            }
            None => eprintln!("  {:<32} FAILED: {}", cfg.name, failed.join(", ")),
        }
    }
    eprintln!(
        "  {:<32} {} (H(U|L=0) = {} {unit})",
        "counterexample",
        if report.counterexample.pass {
            "ok"
        } else {
            "FAILED"
        },
        format_sig(report.counterexample.conditional_entropy_nats / scale),
    );
    eprintln!(
        "verify: {}/{} checks pass",
        report.total_checks - report.failures,
        report.total_checks
    );
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Csv => verify_report_csv(&report),
    };
    emit(&output, &text)?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_sweep(
    config_path: PathBuf,
    budget: Option<u64>,
    out: Option<PathBuf>,
) -> anyhow::Result<i32> {
    let config = load_config(&config_path, budget)?;
    let (csv, cell_errors) = sweep(&config)?;
    match out {
        Some(path) => {
            std::fs::write(&path, &csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{csv}"),
    }
    if cell_errors > 0 {
        eprintln!("sweep: {cell_errors} cell(s) failed");
    }
    Ok(if cell_errors == 0 { 0 } else { 1 })
}

fn cmd_counterexample(points: String, output: OutputArgs) -> anyhow::Result<i32> {
    let coords: Vec<i64> = points
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .context("counterexample points must be integers")?;
    let (domain, sample) = corpus::counterexample_from_coords(&coords)?;
    let report = loocmi::bounds::counterexample_censored_posterior(&domain, &sample, "cli")?;
    let (unit, scale) = display_unit(output.bits);
    eprintln!(
        "posterior over the held-out index given the all-zeros loss profile: {:?}",
        report.posterior
    );
    eprintln!(
        "H(U | L = 0) = {} {unit} < ln 5 = {} {unit}: {}",
        format_sig(report.conditional_entropy_nats / scale),
        format_sig(report.full_entropy_nats / scale),
        report.pass
    );
    emit(&output, &serde_json::to_string_pretty(&report)?)?;
    Ok(if report.pass { 0 } else { 1 })
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Measure {
            config,
            mode,
            samples,
            seed,
            budget,
            output,
        } => cmd_measure(config, mode, samples, seed, budget, output),
        Command::Oig {
            config,
            points,
            degree,
            output,
        } => cmd_oig(config, points, degree, output),
        Command::Verify {
            config,
            budget,
            output,
        } => cmd_verify(config, budget, output),
        Command::Sweep {
            config,
            budget,
            out,
        } => cmd_sweep(config, budget, out),
        Command::Counterexample { points, output } => cmd_counterexample(points, output),
    };
    match code {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
