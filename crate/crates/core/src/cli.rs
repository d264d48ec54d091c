//! Command-line front end: `verify`, `sample` and `efficiency`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::metrics::{protocol_efficiency, protocol_input};
use crate::protocols::{verify_protocol, BranchVerification, ProtocolKind};
use crate::runtime::{encode_outcome, payload_bits, random_params, sample_with_loss, SampleStats};
use crate::state::{Pol, StateVector, TargetParams, STATE_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hyperrsp",
    version,
    about = "Remote preparation of single-photon two-DoF states: verify, sample, efficiency"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate every detection branch, apply the correction table and check fidelities.
    Verify(RunArgs),
    /// Monte Carlo runs with finite detector efficiency and post-selection.
    Sample(SampleArgs),
    /// Exact efficiency q_s / (q_u + b_t) of both protocols.
    Efficiency(OutputArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Protocol: pf (polarization-frequency) or tb (polarization-time-bin).
    #[arg(long, value_enum)]
    protocol: ProtocolArg,
    /// Target coefficients: `α0 β0 x y` for the protocol's two DoFs, all six
    /// `α0 β0 α1 β1 α2 β2`, or `random`.
    #[arg(long, num_args = 1..=6, allow_negative_numbers = true, default_value = "random")]
    params: Vec<String>,
    /// Seed for random parameters and sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Number of protocol rounds.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Single-photon detector efficiency in [0, 1].
    #[arg(long = "eta-d", default_value_t = 1.0)]
    eta_d: f64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProtocolArg {
    Pf,
    Tb,
}

impl From<ProtocolArg> for ProtocolKind {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Pf => ProtocolKind::Pf,
            ProtocolArg::Tb => ProtocolKind::Tb,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Resolved settings of one `verify` or `sample` invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub protocol: ProtocolKind,
    pub params: TargetParams,
    pub seed: u64,
    pub trials: u64,
    pub eta_d: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// Parses `--params` values for `kind`.
pub fn parse_params(
    kind: ProtocolKind,
    values: &[String],
    seed: u64,
) -> Result<TargetParams, Error> {
    if let [one] = values {
        if one.eq_ignore_ascii_case("random") {
            return Ok(random_params(seed));
        }
    }
    let nums = values
        .iter()
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("`{v}` is not a number")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    match nums.as_slice() {
        [a0, b0, a, b] => TargetParams::for_protocol(kind, (*a0, *b0), (*a, *b)),
        [a0, b0, a1, b1, a2, b2] => TargetParams::new(*a0, *b0, *a1, *b1, *a2, *b2),
        _ => Err(Error::InvalidArgument(format!(
            "--params takes 4 or 6 numbers or `random`, got {}",
            nums.len()
        ))),
    }
}

impl RunConfig {
    fn from_run(run: &RunArgs) -> Result<Self, Error> {
        let protocol = ProtocolKind::from(run.protocol);
        Ok(RunConfig {
            protocol,
            params: parse_params(protocol, &run.params, run.seed)?,
            seed: run.seed,
            trials: 0,
            eta_d: 1.0,
            format: run.output.format,
            output: run.output.output.clone(),
        })
    }

    fn from_sample(s: &SampleArgs) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&s.eta_d) {
            return Err(Error::InvalidArgument(format!(
                "--eta-d {} outside [0, 1]",
                s.eta_d
            )));
        }
        Ok(RunConfig {
            trials: s.trials,
            eta_d: s.eta_d,
            ..Self::from_run(&s.run)?
        })
    }
}

/// JSON report: `{protocol, params, branches[], stats?, efficiency?, passed}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub protocol: Option<ProtocolKind>,
    pub params: Option<TargetParams>,
    pub branches: Vec<BranchRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<SampleStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<Vec<EfficiencyRow>>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRow {
    /// `"<pol>,<path>"`, e.g. `"H,a1"`.
    pub outcome: String,
    pub polarization: Pol,
    pub path: String,
    /// Channel code sent to Bob.
    pub code: u8,
    pub probability: f64,
    /// Tabulated correction.
    pub correction: String,
    /// Every correction the exhaustive search accepts.
    pub derived_corrections: Vec<String>,
    pub table_matches_search: bool,
    pub fidelity: Option<f64>,
    pub state_pre: Vec<Amplitude>,
    pub state_post: Vec<Amplitude>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub label: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfficiencyRow {
    pub protocol: ProtocolKind,
    pub numerator: u64,
    pub denominator: u64,
    pub q_s: u64,
    pub q_u: u64,
    pub b_t: u64,
    /// Payload width of the channel codec, equal to b_t.
    pub payload_bits: u32,
}

fn amplitudes(s: Option<&StateVector>) -> Vec<Amplitude> {
    s.map(|s| {
        s.format_amplitudes()
            .into_iter()
            .map(|(label, a)| Amplitude {
                label,
                re: a.re,
                im: a.im,
            })
            .collect()
    })
    .unwrap_or_default()
}

fn branch_row(kind: ProtocolKind, v: &BranchVerification) -> Result<BranchRow, Error> {
    let r = &v.report;
    Ok(BranchRow {
        outcome: kind.outcome_name(r.outcome),
        polarization: r.outcome.polarization,
        path: kind.registry().name(r.outcome.path).to_string(),
        code: encode_outcome(kind, r.outcome)?.outcome_code,
        probability: r.probability,
        correction: r.correction.to_string(),
        derived_corrections: v
            .search
            .as_ref()
            .map(|s| s.successes.iter().map(ToString::to_string).collect())
            .unwrap_or_default(),
        table_matches_search: v.table_matches_search(),
        fidelity: r.fidelity_post,
        state_pre: amplitudes(r.bob_state_pre.as_ref()),
        state_post: amplitudes(r.bob_state_post.as_ref()),
        passed: v.passed(),
    })
}

pub fn verify_report(cfg: &RunConfig) -> Result<Report, Error> {
    let kind = cfg.protocol;
    let rows = verify_protocol(kind, &cfg.params)?
        .iter()
        .map(|v| branch_row(kind, v))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = rows.iter().all(|r| r.passed);
    Ok(Report {
        protocol: Some(kind),
        params: Some(cfg.params),
        branches: rows,
        stats: None,
        efficiency: None,
        passed,
    })
}

pub fn sample_report(cfg: &RunConfig) -> Result<Report, Error> {
    let stats = sample_with_loss(cfg.protocol, &cfg.params, cfg.eta_d, cfg.trials, cfg.seed)?;
    let passed = stats
        .min_fidelity_on_detected
        .is_none_or(|f| f > 1.0 - STATE_TOL);
    Ok(Report {
        protocol: Some(cfg.protocol),
        params: Some(cfg.params),
        branches: Vec::new(),
        stats: Some(stats),
        efficiency: None,
        passed,
    })
}

pub fn efficiency_report() -> Report {
    let rows: Vec<EfficiencyRow> = ProtocolKind::ALL
        .iter()
        .map(|&kind| {
            let input = protocol_input(kind);
            let eta = protocol_efficiency(kind);
            EfficiencyRow {
                protocol: kind,
                numerator: *eta.numer(),
                denominator: *eta.denom(),
                q_s: input.q_s,
                q_u: input.q_u,
                b_t: input.b_t,
                payload_bits: payload_bits(kind),
            }
        })
        .collect();
    let passed = rows.iter().all(|r| u64::from(r.payload_bits) == r.b_t);
    Report {
        protocol: None,
        params: None,
        branches: Vec::new(),
        stats: None,
        efficiency: Some(rows),
        passed,
    }
}

/// 12 significant digits, `-0` printed as `0`.
pub fn sig12(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn fmt_state(amps: &[Amplitude]) -> String {
    amps.iter()
        .map(|a| format!("{}:({}, {})", a.label, sig12(a.re), sig12(a.im)))
        .collect::<Vec<_>>()
        .join("; ")
}

fn fmt_params(p: &TargetParams) -> String {
    format!(
        "alpha0={} beta0={} alpha1={} beta1={} alpha2={} beta2={}",
        sig12(p.alpha0),
        sig12(p.beta0),
        sig12(p.alpha1),
        sig12(p.beta1),
        sig12(p.alpha2),
        sig12(p.beta2)
    )
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), sig12)
}

pub fn render(report: &Report, format: Format) -> io::Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(io::Error::other)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => render_csv(report),
        Format::Table => Ok(render_table(report)),
    }
}

fn render_csv(report: &Report) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(rows) = &report.efficiency {
        w.write_record(["protocol", "numerator", "denominator", "q_s", "q_u", "b_t"])?;
        for r in rows {
            w.write_record([
                r.protocol.name().to_string(),
                r.numerator.to_string(),
                r.denominator.to_string(),
                r.q_s.to_string(),
                r.q_u.to_string(),
                r.b_t.to_string(),
            ])?;
        }
    } else if let Some(s) = &report.stats {
        let protocol = report.protocol.map_or("", ProtocolKind::name);
        w.write_record([
            "protocol",
            "trials",
            "detected",
            "success_rate",
            "mean_fidelity_on_detected",
            "min_fidelity_on_detected",
            "eta_d",
            "seed",
        ])?;
        w.write_record([
            protocol.to_string(),
            s.trials.to_string(),
            s.detected.to_string(),
            sig12(s.success_rate),
            opt(s.mean_fidelity_on_detected),
            opt(s.min_fidelity_on_detected),
            sig12(s.eta_d),
            s.seed.to_string(),
        ])?;
    } else {
        w.write_record([
            "outcome",
            "code",
            "probability",
            "correction",
            "derived_corrections",
            "table_matches_search",
            "fidelity",
            "state_pre",
            "state_post",
            "passed",
        ])?;
        for b in &report.branches {
            w.write_record([
                b.outcome.clone(),
                b.code.to_string(),
                sig12(b.probability),
                b.correction.clone(),
                b.derived_corrections.join(" "),
                b.table_matches_search.to_string(),
                opt(b.fidelity),
                fmt_state(&b.state_pre),
                fmt_state(&b.state_post),
                b.passed.to_string(),
            ])?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(io::Error::other)
}

fn render_table(report: &Report) -> String {
    let mut out = String::new();
    if let Some(rows) = &report.efficiency {
        for r in rows {
            out += &format!(
                "{} {}/{}  (q_s={} q_u={} b_t={})\n",
                r.protocol, r.numerator, r.denominator, r.q_s, r.q_u, r.b_t
            );
        }
        return out;
    }
    if let (Some(kind), Some(params)) = (report.protocol, &report.params) {
        out += &format!("protocol {kind}\nparams {}\n", fmt_params(params));
    }
    if let Some(s) = &report.stats {
        out += &format!(
            "trials {}\ndetected {}\nsuccess_rate {}\neta_d^2 {}\nmean_fidelity_on_detected {}\nmin_fidelity_on_detected {}\nseed {}\n",
            s.trials,
            s.detected,
            sig12(s.success_rate),
            sig12(s.eta_d * s.eta_d),
            opt(s.mean_fidelity_on_detected),
            opt(s.min_fidelity_on_detected),
            s.seed
        );
    }
    if !report.branches.is_empty() {
        out += &format!(
            "{:<8}{:<6}{:<20}{:<16}{:<20}{}\n",
            "outcome", "code", "probability", "correction", "fidelity", "search"
        );
        for b in &report.branches {
            let search = if b.table_matches_search {
                format!("ok ({} match)", b.derived_corrections.len())
            } else {
                format!("MISMATCH [{}]", b.derived_corrections.join(" "))
            };
            out += &format!(
                "{:<8}{:<6}{:<20}{:<16}{:<20}{}\n  pre:  {}\n  post: {}\n",
                b.outcome,
                b.code,
                sig12(b.probability),
                b.correction,
                opt(b.fidelity),
                search,
                fmt_state(&b.state_pre),
                fmt_state(&b.state_post)
            );
        }
    }
    out += if report.passed {
        "result PASS\n"
    } else {
        "result FAIL\n"
    };
    out
}

fn emit(
    report: &Report,
    format: Format,
    path: Option<&PathBuf>,
    stdout: &mut dyn Write,
) -> io::Result<()> {
    let text = render(report, format)?;
    match path {
        Some(p) => File::create(p)?.write_all(text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    }
}

fn first_failure(report: &Report) -> Option<String> {
    if let Some(b) = report.branches.iter().find(|b| !b.passed) {
        return Some(format!(
            "branch {} (code {}): fidelity {}, table correction {} {} search result [{}]",
            b.outcome,
            b.code,
            opt(b.fidelity),
            b.correction,
            if b.table_matches_search {
                "within"
            } else {
                "not within"
            },
            b.derived_corrections.join(" ")
        ));
    }
    if let Some(s) = &report.stats {
        if !report.passed {
            return Some(format!(
                "conditional fidelity dropped to {}",
                opt(s.min_fidelity_on_detected)
            ));
        }
    }
    (!report.passed).then(|| "efficiency accounting inconsistent with channel codec".to_string())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (report, format, path) = match &cli.command {
        Command::Verify(args) => {
            match RunConfig::from_run(args).and_then(|c| Ok((verify_report(&c)?, c))) {
                Ok((r, c)) => (r, c.format, c.output),
                Err(e) => return usage(stderr, &e),
            }
        }
        Command::Sample(args) => {
            match RunConfig::from_sample(args).and_then(|c| Ok((sample_report(&c)?, c))) {
                Ok((r, c)) => (r, c.format, c.output),
                Err(e) => return usage(stderr, &e),
            }
        }
        Command::Efficiency(o) => (efficiency_report(), o.format, o.output.clone()),
    };
    if let Err(e) = emit(&report, format, path.as_ref(), stdout) {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    match first_failure(&report) {
        None => EXIT_OK,
        Some(msg) => {
            let _ = writeln!(stderr, "verification failed: {msg}");
            EXIT_FAILED
        }
    }
}

fn usage(stderr: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    EXIT_USAGE
}
