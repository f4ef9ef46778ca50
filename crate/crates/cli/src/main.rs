//! `ergolab`: batch experiments over the built-in measure-preserving
//! systems. Every report-emitting command takes its knobs from flags or a
//! JSON config file (flags win), requires a seed, and writes a
//! schema-checked JSON envelope (or plot-ready CSV rows) either to stdout
//! or to `--out`, with relative paths resolved against `ERGOLAB_OUT_DIR`.

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;
use std::sync::OnceLock;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use ergolab::complexity::{folner_profile, max_mean_search};
use ergolab::groups::GroupSpec;
use ergolab::report::Report;
use ergolab::spectrum::{
    cross_validate, default_equicont_n_max, default_orbit_windows, default_profile_windows,
    equicontinuity_in_mean_test, mean_equicontinuity_test, orbit_net_profile, CrossValidateOptions,
    ValidationOutcome,
};
use ergolab::systems::{list_systems, parse_system, DynamicalSystem};
use ergolab_cli::config::{resolve_out, with_tag, Format, RunConfig};
use ergolab_cli::schema;

#[derive(Parser)]
#[command(name = "ergolab", version, about = "Mean-metric complexity laboratory")]
struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<std::path::PathBuf>,
    /// RNG seed; required by every randomized command.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report path; relative paths land in $ERGOLAB_OUT_DIR when set.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    /// Report format (cross-validate is JSON only).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for the compute kernels (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List built-in systems with groups and ground-truth labels.
    ListSystems {
        /// Emit a JSON report instead of the text table.
        #[arg(long)]
        json: bool,
    },
    /// Covering-count profile along a Følner window sequence.
    Profile(ProfileArgs),
    /// Tempering constant of a window family.
    Tempered(TemperedArgs),
    /// Worst covering count over translated and thinned group measures.
    Maxmean(MaxmeanArgs),
    /// Orbit-net sizes for a dictionary of test functions.
    Spectrum(SpectrumArgs),
    /// Mean-equicontinuity test across a delta grid.
    Equicont(EquicontArgs),
    /// Run all four diagnostics and compare against the ground truth.
    CrossValidate(CrossArgs),
}

#[derive(Args)]
struct ProfileArgs {
    /// System spec, e.g. `rotation` or `bernoulli-shift:Z,L=12`.
    #[arg(long)]
    system: Option<String>,
    /// Window family (defaults to the group's first family).
    #[arg(long)]
    family: Option<String>,
    /// Ball radius in (0, 1); repeat for a sweep (needs --out).
    #[arg(long)]
    epsilon: Vec<f64>,
    /// Window indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<u32>,
    /// Sampled points per estimate.
    #[arg(long)]
    sample_size: Option<usize>,
    /// Override the sequence-window truncation of the system.
    #[arg(long)]
    truncation: Option<u32>,
}

#[derive(Args)]
struct TemperedArgs {
    /// Group name: Z, Z^2, heis3, lamplighter, R-flow.
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    family: Option<String>,
    /// Largest window index to enumerate.
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Args)]
struct MaxmeanArgs {
    #[arg(long)]
    system: Option<String>,
    /// Ball radius in (0, 1).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Candidate group measures to try.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    truncation: Option<u32>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    family: Option<String>,
    /// Net radius in empirical L2 distance.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<u32>,
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    truncation: Option<u32>,
}

#[derive(Args)]
struct EquicontArgs {
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    family: Option<String>,
    /// Escape threshold in (0, 0.5).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Largest window index of the ladder.
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    sample_size: Option<usize>,
    /// Which windows must stay close: the tail (mean) or all (in-the-mean).
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    truncation: Option<u32>,
}

#[derive(Args)]
struct CrossArgs {
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Profile window indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<u32>,
    /// Orbit-net window indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    orbit_windows: Vec<u32>,
    #[arg(long)]
    orbit_epsilon: Option<f64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    n_max: Option<u32>,
    /// Overrides the sample size of all four diagnostics at once.
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    truncation: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Mean,
    InTheMean,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let _ = err.print();
            return if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let file_cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut flags = flag_config(&cli.command);
    flags.seed = cli.seed;
    flags.out = cli.out.clone();
    flags.format = cli.format;
    flags.threads = cli.threads;
    let cfg = flags.over(file_cfg);
    init_threads(cfg.threads);
    let sink = Sink {
        out: cfg.out.clone(),
        format: cfg.format.unwrap_or(Format::Json),
    };
    match &cli.command {
        Cmd::ListSystems { json } => run_list_systems(*json, &cfg, &sink),
        Cmd::Profile(_) => run_profile(&cfg, &sink),
        Cmd::Tempered(_) => run_tempered(&cfg, &sink),
        Cmd::Maxmean(_) => run_maxmean(&cfg, &sink),
        Cmd::Spectrum(_) => run_spectrum(&cfg, &sink),
        Cmd::Equicont(_) => run_equicont(&cfg, &sink),
        Cmd::CrossValidate(_) => run_cross_validate(&cfg, &sink),
    }
}

/// Lift the subcommand's flags into the shared config shape.
fn flag_config(cmd: &Cmd) -> RunConfig {
    let mut cfg = RunConfig::default();
    match cmd {
        Cmd::ListSystems { .. } => {}
        Cmd::Profile(a) => {
            cfg.system = a.system.clone();
            cfg.family = a.family.clone();
            cfg.epsilon = non_empty(a.epsilon.clone());
            cfg.n_list = non_empty(a.n_list.clone());
            cfg.sample_size = a.sample_size;
            cfg.truncation = a.truncation;
        }
        Cmd::Tempered(a) => {
            cfg.group = a.group.clone();
            cfg.family = a.family.clone();
            cfg.n_max = a.n_max;
        }
        Cmd::Maxmean(a) => {
            cfg.system = a.system.clone();
            cfg.epsilon = a.epsilon.map(|e| vec![e]);
            cfg.budget = a.budget;
            cfg.sample_size = a.sample_size;
            cfg.truncation = a.truncation;
        }
        Cmd::Spectrum(a) => {
            cfg.system = a.system.clone();
            cfg.family = a.family.clone();
            cfg.epsilon = a.epsilon.map(|e| vec![e]);
            cfg.n_list = non_empty(a.n_list.clone());
            cfg.sample_size = a.sample_size;
            cfg.truncation = a.truncation;
        }
        Cmd::Equicont(a) => {
            cfg.system = a.system.clone();
            cfg.family = a.family.clone();
            cfg.epsilon = a.epsilon.map(|e| vec![e]);
            cfg.n_max = a.n_max;
            cfg.sample_size = a.sample_size;
            cfg.mode = a.mode.map(|m| {
                match m {
                    Mode::Mean => "mean",
                    Mode::InTheMean => "in-the-mean",
                }
                .to_string()
            });
            cfg.truncation = a.truncation;
        }
        Cmd::CrossValidate(a) => {
            cfg.system = a.system.clone();
            cfg.family = a.family.clone();
            cfg.epsilon = a.epsilon.map(|e| vec![e]);
            cfg.n_list = non_empty(a.n_list.clone());
            cfg.orbit_windows = non_empty(a.orbit_windows.clone());
            cfg.orbit_epsilon = a.orbit_epsilon;
            cfg.budget = a.budget;
            cfg.n_max = a.n_max;
            cfg.sample_size = a.sample_size;
            cfg.truncation = a.truncation;
        }
    }
    cfg
}

fn non_empty<T>(v: Vec<T>) -> Option<Vec<T>> {
    if v.is_empty() {
        None
    } else {
        Some(v)
    }
}

#[cfg(feature = "parallel")]
fn init_threads(threads: Option<usize>) {
    if let Some(n) = threads.filter(|&n| n > 0) {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn init_threads(_threads: Option<usize>) {}

struct Sink {
    out: Option<String>,
    format: Format,
}

fn report_schema() -> &'static Value {
    static SCHEMA: OnceLock<Value> = OnceLock::new();
    SCHEMA.get_or_init(|| {
        serde_json::from_str(include_str!("../../../schema/report.schema.json"))
            .expect("embedded schema parses")
    })
}

/// Check the envelope against the shipped schema and write it (or the CSV
/// rows) to `--out` or stdout. `tag` distinguishes files in epsilon sweeps.
fn emit<T: Serialize>(
    command: String,
    seed: u64,
    payload: &T,
    csv: Option<String>,
    summary: &str,
    sink: &Sink,
    tag: Option<&str>,
) -> Result<()> {
    let report = Report::new(command, seed, payload);
    let json = report.to_json();
    let value: Value = serde_json::from_str(&json).expect("report is valid JSON");
    if let Err(errs) = schema::validate(report_schema(), &value) {
        bail!("internal: report fails its own schema: {}", errs.join("; "));
    }
    let text = match sink.format {
        Format::Json => json,
        Format::Csv => {
            csv.ok_or_else(|| anyhow!("this command emits JSON only; drop --format csv"))?
        }
    };
    match &sink.out {
        Some(path) => {
            let mut path = resolve_out(path);
            if let Some(tag) = tag {
                path = with_tag(&path, tag);
            }
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => write_stdout(&text)?,
    }
    eprintln!("{summary}");
    Ok(())
}

/// Reports are routinely piped into `head` or `jq`; a closed pipe is a
/// normal end of output, not a crash.
fn write_stdout(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(err) if err.kind() == io::ErrorKind::BrokenPipe => std::process::exit(0),
        other => other.context("writing to stdout"),
    }
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("{e}"))?;
    Ok(String::from_utf8(bytes)?)
}

fn require_system(cfg: &RunConfig) -> Result<DynamicalSystem> {
    let spec = cfg
        .system
        .as_deref()
        .ok_or_else(|| anyhow!("--system is required (flag or config)"))?;
    let spec = match cfg.truncation {
        None => spec.to_string(),
        Some(l) => {
            if spec.contains("L=") {
                bail!("truncation given both in the system spec and via --truncation");
            }
            let sep = if spec.contains(':') { ',' } else { ':' };
            format!("{spec}{sep}L={l}")
        }
    };
    Ok(parse_system(&spec)?)
}

fn require_seed(cfg: &RunConfig) -> Result<u64> {
    cfg.seed
        .ok_or_else(|| anyhow!("--seed is required (flag or config)"))
}

fn one_epsilon(cfg: &RunConfig, default: f64) -> Result<f64> {
    match cfg.epsilon.as_deref() {
        None => Ok(default),
        Some([e]) => Ok(*e),
        Some(_) => bail!("this command takes a single --epsilon"),
    }
}

fn join_u32(xs: &[u32]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn run_list_systems(json: bool, cfg: &RunConfig, sink: &Sink) -> Result<u8> {
    let rows = list_systems();
    if json {
        let summary = format!("{} systems", rows.len());
        emit(
            "list-systems".to_string(),
            cfg.seed.unwrap_or(0),
            &rows,
            None,
            &summary,
            sink,
            None,
        )?;
        return Ok(0);
    }
    let mut table = format!(
        "{:<28} {:<12} {:<20} {:<10} PARAMETERS\n",
        "NAME", "GROUP", "GROUND TRUTH", "ISOMETRIC"
    );
    for row in &rows {
        table.push_str(&format!(
            "{:<28} {:<12} {:<20} {:<10} {}\n",
            row.name,
            row.group,
            format!("{:?}", row.ground_truth),
            if row.isometric { "yes" } else { "no" },
            row.parameters,
        ));
    }
    write_stdout(&table)?;
    Ok(0)
}

fn run_profile(cfg: &RunConfig, sink: &Sink) -> Result<u8> {
    let sys = require_system(cfg)?;
    let seed = require_seed(cfg)?;
    let eps_list = cfg.epsilon.clone().unwrap_or_else(|| vec![0.1]);
    let windows = cfg
        .n_list
        .clone()
        .unwrap_or_else(|| default_profile_windows(sys.group.kind));
    let sample = cfg.sample_size.unwrap_or(2000);
    if eps_list.len() > 1 && sink.out.is_none() {
        bail!("an epsilon sweep needs --out so each report gets its own file");
    }
    for (i, &eps) in eps_list.iter().enumerate() {
        let profile = folner_profile(&sys, cfg.family.as_deref(), &windows, eps, sample, seed)?;
        let command = format!(
            "profile --system {} --family {} --epsilon {} --n-list {} --sample-size {} --seed {}",
            profile.system,
            profile.family,
            eps,
            join_u32(&windows),
            sample,
            seed
        );
        let csv = csv_table(
            &[
                "epsilon",
                "window_index",
                "window_size",
                "support_size",
                "thinned",
                "upper_count",
                "lower_count",
                "covered_fraction",
                "saturated",
            ],
            profile
                .rows
                .iter()
                .map(|r| {
                    vec![
                        eps.to_string(),
                        r.window_index.to_string(),
                        r.window_size.to_string(),
                        r.support_size.to_string(),
                        r.thinned.to_string(),
                        r.upper_count.to_string(),
                        r.lower_count.to_string(),
                        r.covered_fraction.to_string(),
                        r.saturated.to_string(),
                    ]
                })
                .collect(),
        )?;
        let summary = format!(
            "profile {} eps={} verdict={:?} counts={:?}",
            profile.system,
            eps,
            profile.verdict,
            profile.counts()
        );
        let tag = (eps_list.len() > 1).then(|| format!("e{i}"));
        emit(
            command,
            seed,
            &profile,
            Some(csv),
            &summary,
            sink,
            tag.as_deref(),
        )?;
    }
    Ok(0)
}

fn run_tempered(cfg: &RunConfig, sink: &Sink) -> Result<u8> {
    let name = cfg
        .group
        .as_deref()
        .ok_or_else(|| anyhow!("--group is required (flag or config)"))?;
    let group = GroupSpec::from_stable_name(name)?;
    let family = cfg
        .family
        .clone()
        .unwrap_or_else(|| group.default_family().to_string());
    let n_max = cfg.n_max.unwrap_or(10);
    let report = group.shulman_report(&family, n_max)?;
    let seed = cfg.seed.unwrap_or(0);
    let command = format!(
        "tempered --group {} --family {} --n-max {} --seed {}",
        report.group, report.family, n_max, seed
    );
    let csv = csv_table(
        &["n", "ratio"],
        report
            .rows
            .iter()
            .map(|r| vec![r.n.to_string(), r.ratio.to_string()])
            .collect(),
    )?;
    let summary = format!(
        "tempered {}/{} constant={} analytic={}",
        report.group, report.family, report.constant, report.analytic
    );
    emit(command, seed, &report, Some(csv), &summary, sink, None)?;
    Ok(0)
}

fn run_maxmean(cfg: &RunConfig, sink: &Sink) -> Result<u8> {
    let sys = require_system(cfg)?;
    let seed = require_seed(cfg)?;
    let eps = one_epsilon(cfg, 0.1)?;
    let budget = cfg.budget.unwrap_or(40);
    let sample = cfg.sample_size.unwrap_or(600);
    let report = max_mean_search(&sys, eps, budget, sample, seed)?;
    let command = format!(
        "maxmean --system {} --epsilon {} --budget {} --sample-size {} --seed {}",
        report.system, eps, budget, sample, seed
    );
    let csv = csv_table(
        &["label", "support_size", "upper_count"],
        report
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.label.clone(),
                    r.support_size.to_string(),
                    r.upper_count.to_string(),
                ]
            })
            .collect(),
    )?;
    let summary = format!(
        "maxmean {} static={} worst={} ({}) verdict={:?}",
        report.system, report.static_count, report.worst_count, report.worst_label, report.verdict
    );
    emit(command, seed, &report, Some(csv), &summary, sink, None)?;
    Ok(0)
}

fn run_spectrum(cfg: &RunConfig, sink: &Sink) -> Result<u8> {
    let sys = require_system(cfg)?;
    let seed = require_seed(cfg)?;
    let eps = one_epsilon(cfg, 0.5)?;
    let windows = cfg
        .n_list
        .clone()
        .unwrap_or_else(|| default_orbit_windows(sys.group.kind));
    let sample = cfg.sample_size.unwrap_or(400);
    let profile = orbit_net_profile(&sys, cfg.family.as_deref(), &windows, eps, sample, seed)?;
    let command = format!(
        "spectrum --system {} --family {} --epsilon {} --n-list {} --sample-size {} --seed {}",
        profile.system,
        profile.family,
        eps,
        join_u32(&windows),
        sample,
        seed
    );
    let csv = csv_table(
        &[
            "window_index",
            "window_size",
            "candidates",
            "truncated",
            "net_size",
        ],
        profile
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.window_index.to_string(),
                    r.window_size.to_string(),
                    r.candidates.to_string(),
                    r.truncated.to_string(),
                    r.net_size.to_string(),
                ]
            })
            .collect(),
    )?;
    let summary = format!(
        "spectrum {} eps={} verdict={:?} nets={:?}",
        profile.system,
        eps,
        profile.verdict,
        profile.counts()
    );
    emit(command, seed, &profile, Some(csv), &summary, sink, None)?;
    Ok(0)
}

fn run_equicont(cfg: &RunConfig, sink: &Sink) -> Result<u8> {
    let sys = require_system(cfg)?;
    let seed = require_seed(cfg)?;
    let eps = one_epsilon(cfg, 0.1)?;
    let n_max = cfg
        .n_max
        .unwrap_or_else(|| default_equicont_n_max(sys.group.kind));
    let sample = cfg.sample_size.unwrap_or(400);
    let mode = match cfg.mode.as_deref() {
        None | Some("mean") => Mode::Mean,
        Some("in-the-mean") => Mode::InTheMean,
        Some(other) => bail!("unknown mode `{other}` (expected mean or in-the-mean)"),
    };
    let report = match mode {
        Mode::Mean => {
            mean_equicontinuity_test(&sys, cfg.family.as_deref(), eps, n_max, sample, seed)?
        }
        Mode::InTheMean => {
            equicontinuity_in_mean_test(&sys, cfg.family.as_deref(), eps, n_max, sample, seed)?
        }
    };
    let mode_name = match mode {
        Mode::Mean => "mean",
        Mode::InTheMean => "in-the-mean",
    };
    let command = format!(
        "equicont --system {} --family {} --epsilon {} --n-max {} --sample-size {} --mode {} --seed {}",
        report.system, report.family, eps, n_max, sample, mode_name, seed
    );
    let csv = csv_table(
        &[
            "delta",
            "attempts",
            "pairs",
            "starved",
            "failing_fraction",
            "accepted",
        ],
        report
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.delta.to_string(),
                    r.attempts.to_string(),
                    r.pairs.to_string(),
                    r.starved.to_string(),
                    r.failing_fraction.to_string(),
                    r.accepted.to_string(),
                ]
            })
            .collect(),
    )?;
    let summary = format!(
        "equicont {} mode={} eps={} verdict={:?}",
        report.system, mode_name, eps, report.verdict
    );
    emit(command, seed, &report, Some(csv), &summary, sink, None)?;
    Ok(0)
}

fn run_cross_validate(cfg: &RunConfig, sink: &Sink) -> Result<u8> {
    let sys = require_system(cfg)?;
    let seed = require_seed(cfg)?;
    let mut opts = CrossValidateOptions::quick(seed);
    opts.epsilon = one_epsilon(cfg, opts.epsilon)?;
    opts.family = cfg.family.clone();
    opts.profile_windows = cfg.n_list.clone();
    opts.orbit_windows = cfg.orbit_windows.clone();
    if let Some(e) = cfg.orbit_epsilon {
        opts.orbit_epsilon = e;
    }
    if let Some(b) = cfg.budget {
        opts.maxmean_budget = b;
    }
    opts.equicont_n_max = cfg.n_max;
    if let Some(s) = cfg.sample_size {
        opts.profile_sample = s;
        opts.orbit_sample = s;
        opts.maxmean_sample = s;
        opts.equicont_sample = s;
    }
    let report = cross_validate(&sys, &opts)?;
    let mut command = format!(
        "cross-validate --system {} --epsilon {} --orbit-epsilon {} --budget {}",
        report.system, opts.epsilon, opts.orbit_epsilon, opts.maxmean_budget
    );
    if let Some(ws) = &opts.profile_windows {
        command.push_str(&format!(" --n-list {}", join_u32(ws)));
    }
    if let Some(ws) = &opts.orbit_windows {
        command.push_str(&format!(" --orbit-windows {}", join_u32(ws)));
    }
    command.push_str(&format!(" --seed {seed}"));
    let summary = format!(
        "cross-validate {} truth={:?} outcome={:?} [profile={:?} maxmean={:?} orbit={:?} equicont={:?}]",
        report.system,
        report.ground_truth,
        report.outcome,
        report.profile.verdict,
        report.maxmean.verdict,
        report.orbit_net.verdict,
        report.equicont.verdict,
    );
    emit(command, seed, &report, None, &summary, sink, None)?;
    Ok(if report.outcome == ValidationOutcome::Inconsistent {
        1
    } else {
        0
    })
}
