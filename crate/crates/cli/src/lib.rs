//! The `valuscope` command-line front end.
//!
//! Every subcommand reads one CSV, runs one analysis stage and writes
//! `<command>.json` (always available), plus `<command>.csv` and SVG charts
//! where the stage has a tabular or graphical form. Each JSON report embeds
//! a [`RunManifest`](report::RunManifest) naming the command, its resolved
//! parameters, the SHA-256 of the input and the tool version.
//!
//! Exit codes: 0 on success, 1 for usage and parameter errors, 2 for data
//! errors.

pub mod args;
pub mod commands;
pub mod report;
pub mod svg;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;
use valuscope::market_data::ingest_reader;
use valuscope::{DailySeries, Error, IngestConfig};

use args::{Cli, Command, Format, Io, *};
use commands::Output;
use report::{render_json, RunManifest};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameter values.
    Usage(String),
    /// The input cannot support the analysis.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::InvalidQ(_) | Error::InvalidRange { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<svg::UnsupportedKind> for CliError {
    fn from(e: svg::UnsupportedKind) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

struct Input {
    bytes: Vec<u8>,
    series: DailySeries,
}

fn load(io: &Io) -> Result<Input, CliError> {
    let bytes = fs::read(&io.input)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", io.input.display())))?;
    let series = ingest_reader(bytes.as_slice(), IngestConfig { from: io.from, to: io.to })?;
    Ok(Input { bytes, series })
}

fn manifest(io: &Io, input: &Input, out: &Output) -> RunManifest {
    let mut parameters: BTreeMap<String, Value> = match &out.parameters {
        Value::Object(m) => m.clone().into_iter().collect(),
        _ => BTreeMap::new(),
    };
    parameters.insert("from".into(), serde_json::to_value(io.from).expect("dates serialize"));
    parameters.insert("to".into(), serde_json::to_value(io.to).expect("dates serialize"));
    RunManifest::new(out.name, parameters, &input.bytes)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

/// Writes the requested format, or every available one when `format` is `None`.
fn write_output(io: &Io, input: &Input, out: &Output, format: Option<Format>) -> Result<(), CliError> {
    fs::create_dir_all(&io.out)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", io.out.display())))?;
    let all = format.is_none();
    if all || format == Some(Format::Json) {
        let text = render_json(&manifest(io, input, out), out.report.clone());
        write_file(&io.out, &format!("{}.json", out.name), &text)?;
    }
    if all || format == Some(Format::Csv) {
        match &out.csv {
            Some(csv) => write_file(&io.out, &format!("{}.csv", out.name), csv)?,
            None if !all => return Err(CliError::Usage(format!("{} has no CSV form", out.name))),
            None => {}
        }
    }
    if all || format == Some(Format::Svg) {
        if out.svgs.is_empty() && !all {
            return Err(CliError::Usage(format!("{} has no SVG form", out.name)));
        }
        for (stem, svg) in &out.svgs {
            write_file(&io.out, &format!("{stem}.svg"), svg)?;
        }
    }
    Ok(())
}

fn single(io: &Io, stage: impl FnOnce(&DailySeries) -> Result<Output, CliError>) -> Result<(), CliError> {
    let input = load(io)?;
    let out = stage(&input.series)?;
    write_output(io, &input, &out, Some(io.format))
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::IngestCheck { io } => single(&io, commands::ingest_check),
        Command::Returns { io, args } => single(&io, |s| commands::returns(s, &args)),
        Command::Cagr { io, args } => single(&io, |s| commands::cagr(s, &args)),
        Command::Pmf { io, args } => single(&io, |s| commands::pmf(s, &args)),
        Command::PePmf { io } => single(&io, commands::pe_pmf),
        Command::PeMonthly { io } => single(&io, commands::pe_monthly),
        Command::Entropy { io, args } => single(&io, |s| commands::entropy(s, &args)),
        Command::Hurst { io, args } => single(&io, |s| commands::hurst(s, &args)),
        Command::Lyapunov { io, args } => single(&io, |s| commands::lyapunov(s, &args)),
        Command::Profile { io, ladder, embedding } => {
            single(&io, |s| commands::profile(s, &ladder, &embedding))
        }
        Command::Mi { io } => single(&io, commands::mi),
        Command::Nmi { io, args } => single(&io, |s| commands::nmi(s, &args)),
        Command::Te { io, args } => single(&io, |s| commands::te(s, &args)),
        Command::Conditional { io, args } => single(&io, |s| commands::conditional(s, &args)),
        Command::ReportAll { io, args } => report_all(&io, &args),
    }
}

type Stage<'a> = Box<dyn Fn(&DailySeries) -> Result<Output, CliError> + 'a>;

/// Runs every stage, writing all formats of each. A failing stage is
/// reported and skipped; the exit code reflects the worst failure.
fn report_all(io: &Io, a: &ReportAllArgs) -> Result<(), CliError> {
    let input = load(io)?;
    commands::parse_orders(&a.q)?;
    valuscope::horizons::parse_ladder(&a.ladder.horizons)?;
    let years = YearsArgs { max_years: a.max_years };
    let pmf = PmfArgs { horizons: "1y".into() };
    let entropy = EntropyArgs {
        series: SeriesKind::Pe,
        tsallis_q: vec![0.1, 2.0],
        m: a.m,
        r: a.r,
        order: a.order,
        delay: 1,
    };
    let hurst = HurstArgs { series: SeriesKind::Pe, q: a.q.clone() };
    let lyapunov = LyapunovArgs { series: SeriesKind::Pe, embedding: a.embedding.clone() };
    let nmi = NmiArgs { max_lag: a.max_lag };
    let te = TeArgs { k: a.k, both: true };
    let conditional = ConditionalArgs { max_years: 7 };
    let stages: Vec<(&str, Stage)> = vec![
        ("ingest-check", Box::new(commands::ingest_check)),
        ("returns", Box::new(|s| commands::returns(s, &a.ladder))),
        ("cagr", Box::new(|s| commands::cagr(s, &years))),
        ("pmf", Box::new(|s| commands::pmf(s, &pmf))),
        ("profile", Box::new(|s| commands::profile(s, &a.ladder, &a.embedding))),
        ("pe-pmf", Box::new(commands::pe_pmf)),
        ("pe-monthly", Box::new(commands::pe_monthly)),
        ("entropy", Box::new(|s| commands::entropy(s, &entropy))),
        ("hurst", Box::new(|s| commands::hurst(s, &hurst))),
        ("lyapunov", Box::new(|s| commands::lyapunov(s, &lyapunov))),
        ("nmi", Box::new(|s| commands::nmi(s, &nmi))),
        ("mi", Box::new(commands::mi)),
        ("te", Box::new(|s| commands::te(s, &te))),
        ("conditional", Box::new(|s| commands::conditional(s, &conditional))),
    ];
    let mut worst: Option<CliError> = None;
    for (name, stage) in stages {
        let result = stage(&input.series).and_then(|out| write_output(io, &input, &out, None));
        if let Err(e) = result {
            eprintln!("{name}: {e}");
            if worst.as_ref().is_none_or(|w| e.exit_code() > w.exit_code()) {
                worst = Some(e);
            }
        }
    }
    match worst {
        None => Ok(()),
        Some(e) => Err(CliError::Data(format!("report-all incomplete: {e}"))),
    }
}
