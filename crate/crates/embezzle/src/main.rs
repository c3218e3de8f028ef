use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use embezzle::config::read_config_file;
use embezzle::{merge_reports, render, run, write_outputs, Experiment, ExperimentConfig, Format, RunError, RunResult};

/// Self-embezzlement experiments.
///
/// Exit codes: 0 all verdicts pass, 2 a verdict failed, 3 configuration
/// error, 4 resource cap exceeded. No environment variables are read.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embezzlement fidelity of van Dam-Hayden catalysts, n = 2^k
    #[command(name = "e1-vdh")]
    E1(RunArgs),
    /// Self-embezzlement no-go over catalyst families
    #[command(name = "e2-nogo")]
    E2(RunArgs),
    /// Rearrangement lemma scan with brute-force oracle
    #[command(name = "e3-lemma")]
    E3(RunArgs),
    /// Exact self-embezzlement in the CAR algebra
    #[command(name = "e4-car")]
    E4(RunArgs),
    /// Channel no-go and the purification proposition
    #[command(name = "e5-channel")]
    E5(RunArgs),
    /// Run the experiment named by --experiment or the config file
    Run(RunArgs),
    /// Merge JSON reports, re-checking every verdict from its rows
    Report(ReportArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// Flat `key = value` file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// `1/N` or a decimal
    #[arg(long = "grid-step")]
    grid_step: Option<String>,
    #[arg(long = "max-support")]
    max_support: Option<String>,
    /// Comma-separated window half-widths
    #[arg(long)]
    window: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long = "max-k")]
    max_k: Option<String>,
    #[arg(long = "max-weight")]
    max_weight: Option<String>,
    #[arg(long)]
    pairs: Option<String>,
    #[arg(long)]
    epsilon0: Option<String>,
    /// Generator file checked in addition to the sweep (e4-car)
    #[arg(long = "extra-generators")]
    extra_generators: Option<String>,
    /// Output directory; without it the first format goes to stdout
    #[arg(long)]
    out: Option<String>,
    /// Comma-separated list of csv, json, svg
    #[arg(long)]
    format: Option<String>,
    /// Record wall-clock duration in the report
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// JSON reports to merge
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Write the merged summary here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn flags(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let opts: [(&'static str, &Option<String>); 13] = [
            ("experiment", &self.experiment),
            ("seed", &self.seed),
            ("grid-step", &self.grid_step),
            ("max-support", &self.max_support),
            ("window", &self.window),
            ("samples", &self.samples),
            ("max-k", &self.max_k),
            ("max-weight", &self.max_weight),
            ("pairs", &self.pairs),
            ("epsilon0", &self.epsilon0),
            ("extra-generators", &self.extra_generators),
            ("out", &self.out),
            ("format", &self.format),
        ];
        for (k, v) in opts {
            if let Some(v) = v {
                out.push((k, v.clone()));
            }
        }
        if self.timing {
            out.push(("timing", "true".into()));
        }
        out
    }

    /// Config file first, then flags; a subcommand fixes the experiment
    /// unless a flag or the file names a different one, which is an error.
    fn config(&self, fixed: Option<Experiment>) -> RunResult<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(fixed.unwrap_or(Experiment::E1));
        let mut named = None;
        let file = match &self.config {
            Some(p) => read_config_file(p)?,
            None => Vec::new(),
        };
        let flags = self.flags();
        for (k, v) in file.iter().map(|(k, v)| (k.as_str(), v.as_str())).chain(flags.iter().map(|(k, v)| (*k, v.as_str()))) {
            if k == "experiment" {
                named = Some(v.parse::<Experiment>()?);
            }
            cfg.set(k, v)?;
        }
        match (fixed, named) {
            (Some(f), Some(n)) if f != n => {
                return Err(RunError::Config(format!("subcommand {f} conflicts with experiment {n}")));
            }
            (None, None) => return Err(RunError::Config("no experiment given".into())),
            _ => {}
        }
        if let Some(f) = fixed {
            cfg.experiment = f;
        }
        if cfg.formats.is_empty() {
            cfg.formats = vec![Format::Json];
        }
        Ok(cfg)
    }
}

fn execute(args: &RunArgs, fixed: Option<Experiment>) -> RunResult<bool> {
    let cfg = args.config(fixed)?;
    let (out, formats) = (cfg.out.clone(), cfg.formats.clone());
    let report = run(cfg)?;
    match out {
        Some(dir) => {
            for p in write_outputs(&report, &dir, &formats)? {
                eprintln!("wrote {}", p.display());
            }
        }
        None => {
            if let Some(text) = render(&report, formats[0])? {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(|e| RunError::io("<stdout>", e))?;
            }
        }
    }
    for v in &report.verdicts {
        eprintln!("[{}] {} {}", if v.passed { "PASS" } else { "FAIL" }, report.experiment, v.name);
    }
    if let Some(ms) = report.duration_ms {
        eprintln!("duration {ms} ms");
    }
    Ok(report.all_pass)
}

fn merge(args: &ReportArgs) -> RunResult<bool> {
    let merged = merge_reports(&args.inputs)?;
    let mut text = serde_json::to_string_pretty(&merged).expect("merged reports serialize");
    text.push('\n');
    match &args.out {
        Some(p) => std::fs::write(p, text).map_err(|e| RunError::io(p, e))?,
        None => print!("{text}"),
    }
    for e in &merged.reports {
        let state = if !e.consistent { "INCONSISTENT" } else if e.all_pass { "PASS" } else { "FAIL" };
        eprintln!("[{state}] {} ({})", e.experiment, e.source);
    }
    Ok(merged.all_pass)
}

fn main() -> ExitCode {
    // clap reports usage errors with exit code 2, which is reserved for
    // failed verdicts here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::E1(a) => execute(a, Some(Experiment::E1)),
        Command::E2(a) => execute(a, Some(Experiment::E2)),
        Command::E3(a) => execute(a, Some(Experiment::E3)),
        Command::E4(a) => execute(a, Some(Experiment::E4)),
        Command::E5(a) => execute(a, Some(Experiment::E5)),
        Command::Run(a) => execute(a, None),
        Command::Report(a) => merge(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
