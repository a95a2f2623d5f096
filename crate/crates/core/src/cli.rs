//! The `fsl` command line: single-knot checks, cone diagnostics and census runs.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::alexander::HfkTop;
use crate::cone::{
    build_surgery_cone, build_zero_surgery_cone, slice_zero_surgery_halves, surgery_d, zero_surgery_inequality,
    ConeError, Slope,
};
use crate::knotdata::{
    build_model, read_table, validate_record, ExplicitData, KnotRecord, RecordFormat, Tier, ValidatedKnot,
};
use crate::obstruct::{sf_window, verdict_at, GlobalVerdict, ObstructionReport, Orientation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;
pub const EXIT_EXCLUDED: i32 = 10;

#[derive(Debug, Parser)]
#[command(name = "fsl", version, about = "Heegaard Floer obstructions to Seifert fibered surgeries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether one slope and orientation is ruled out.
    Check {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
        #[arg(long, value_enum)]
        orientation: Orientation,
    },
    /// Compute the surgery mapping cone and print its homology summary.
    Cone {
        #[command(flatten)]
        knot: KnotArgs,
        /// `p/q` with `p > 0`, or `0` for zero surgery.
        #[arg(long)]
        slope: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        spinc: i64,
        /// JSON file with explicit V/H and reduced data.
        #[arg(long)]
        vh: Option<PathBuf>,
    },
    /// Run every obstruction over a knot table.
    Census {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = CensusFilter::All)]
        filter: CensusFilter,
        #[arg(long, value_enum, default_value_t = RecordFormat::Json)]
        format: RecordFormat,
        /// Format of the input table; guessed from the extension when absent.
        #[arg(long, value_enum)]
        input_format: Option<RecordFormat>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct KnotArgs {
    /// Half-vector `a0;a1;...;ad` of the symmetrized Alexander polynomial.
    #[arg(long, allow_hyphen_values = true)]
    pub alexander: Option<String>,
    #[arg(long)]
    pub genus: Option<u32>,
    #[arg(long)]
    pub slice_genus: Option<u32>,
    #[arg(long)]
    pub slice: bool,
    #[arg(long)]
    pub alternating: bool,
    /// Top knot Floer ranks as `even:odd`.
    #[arg(long)]
    pub hfk_top: Option<String>,
    /// Look the knot up by name in `--input`.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CensusFilter {
    AlternatingSlice,
    NonalternatingSlice,
    All,
}

impl CensusFilter {
    pub fn accepts(self, rec: &KnotRecord) -> bool {
        match self {
            CensusFilter::AlternatingSlice => rec.is_slice && rec.is_alternating,
            CensusFilter::NonalternatingSlice => rec.is_slice && !rec.is_alternating,
            CensusFilter::All => true,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Engine(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Engine(_) => EXIT_FAILURE,
        }
    }
}

impl From<ConeError> for CliError {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::BadSlope(_)
            | ConeError::NonPositiveSlope(_)
            | ConeError::SpincOutOfRange { .. }
            | ConeError::BadDepthMargin(_)
            | ConeError::NotSlice
            | ConeError::Vh(_) => CliError::Input(e.to_string()),
            other => CliError::Engine(other.to_string()),
        }
    }
}

fn input_format_for(path: &Path, explicit: Option<RecordFormat>) -> RecordFormat {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("json") | Some("jsonl") | Some("ndjson") => RecordFormat::Json,
        _ => RecordFormat::Csv,
    })
}

/// Reads a table and keeps every line's outcome.
pub fn load_table(
    path: &Path,
    format: Option<RecordFormat>,
) -> Result<Vec<(usize, Result<KnotRecord, String>)>, CliError> {
    let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let rows = read_table(BufReader::new(file), input_format_for(path, format))
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(rows.into_iter().map(|(line, r)| (line, r.map_err(|e| e.to_string()))).collect())
}

fn validated(rec: &KnotRecord) -> Result<ValidatedKnot, String> {
    validate_record(rec).map_err(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
}

fn knot_from_args(args: &KnotArgs) -> Result<ValidatedKnot, CliError> {
    let rec = match (&args.name, &args.alexander) {
        (Some(name), _) => {
            let path = args.input.as_ref().ok_or_else(|| CliError::Input("--name needs --input".into()))?;
            load_table(path, None)?
                .into_iter()
                .filter_map(|(_, r)| r.ok())
                .find(|r| &r.name == name)
                .ok_or_else(|| CliError::Input(format!("unknown knot `{name}`")))?
        }
        (None, Some(alexander)) => {
            let genus = args.genus.ok_or_else(|| CliError::Input("--genus is required".into()))?;
            let alexander = alexander
                .split(';')
                .map(|a| a.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Input(format!("--alexander: {e}")))?;
            let hfk_top = args
                .hfk_top
                .as_deref()
                .map(|s| {
                    let (e, o) = s.split_once(':').ok_or_else(|| CliError::Input("--hfk-top expects even:odd".into()))?;
                    let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| CliError::Input(format!("--hfk-top: {e}")));
                    Ok::<_, CliError>(HfkTop { even: parse(e)?, odd: parse(o)? })
                })
                .transpose()?;
            KnotRecord {
                name: "input".into(),
                alexander,
                genus,
                slice_genus: args.slice_genus,
                is_slice: args.slice,
                is_alternating: args.alternating,
                hfk_top,
            }
        }
        (None, None) => return Err(CliError::Input("give --alexander/--genus or --name/--input".into())),
    };
    validated(&rec).map_err(CliError::Input)
}

fn parse_slope(raw: &str) -> Result<Slope, CliError> {
    raw.parse::<Slope>().map_err(|e| CliError::Input(e.to_string()))
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize to JSON") + "\n"
}

fn cmd_check(knot: &KnotArgs, slope: &str, orientation: Orientation, out: &mut dyn Write) -> Result<i32, CliError> {
    let slope = parse_slope(slope)?;
    let knot = knot_from_args(knot)?;
    let verdict = verdict_at(&knot, slope, orientation);
    write_out(out, &to_json_line(&verdict))?;
    Ok(if verdict.is_excluded() { EXIT_EXCLUDED } else { EXIT_OK })
}

fn cmd_cone(
    knot: &KnotArgs,
    slope: &str,
    spinc: i64,
    vh: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let knot = knot_from_args(knot)?;
    let explicit = vh
        .map(|path| {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            ExplicitData::from_json(&text).map_err(|e| CliError::Input(e.to_string()))
        })
        .transpose()?;
    let tier = if explicit.is_some() { Tier::ExplicitTier } else { Tier::LSpaceTier };
    let model = build_model(&knot, tier, explicit).map_err(|e| CliError::Input(e.to_string()))?;

    let report = if slope.trim() == "0" || slope.trim() == "0/1" {
        let dump = build_zero_surgery_cone(&model, spinc)?.homology_dump()?;
        let mut report = json!({ "summary": dump.summary, "surgery_d": null, "dump": dump });
        if spinc == 0 {
            report["spinc_zero_bound"] = serde_json::to_value(zero_surgery_inequality(&model)?).expect("serializable");
            if knot.is_slice() {
                let (plus, minus) = slice_zero_surgery_halves(&model)?;
                report["d_half"] = json!([plus.to_string(), minus.to_string()]);
            }
        }
        report
    } else {
        let slope = parse_slope(slope)?;
        let cone = build_surgery_cone(&model, slope, spinc)?;
        let dump = cone.homology_dump()?;
        log::info!("stability check passed at window {:?}, depth {}", dump.s_window, dump.depth);
        let d = surgery_d(&model, slope, spinc)?;
        json!({ "summary": dump.summary, "surgery_d": d.to_string(), "dump": dump })
    };
    write_out(out, &to_json_line(&report))?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub total: usize,
    pub excluded: usize,
    pub not_excluded: usize,
}

impl ClassCounts {
    fn add(&mut self, excluded: bool) {
        self.total += 1;
        if excluded {
            self.excluded += 1;
        } else {
            self.not_excluded += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Survivor {
    pub name: String,
    pub global: GlobalVerdict,
    pub windows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExcludedKnot {
    pub name: String,
    pub theorems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub filter: CensusFilter,
    pub total: usize,
    pub alternating_slice: ClassCounts,
    pub nonalternating_slice: ClassCounts,
    pub other: ClassCounts,
    pub not_excluded: Vec<Survivor>,
    pub excluded: Vec<ExcludedKnot>,
    pub errors: Vec<LineError>,
}

/// Runs [`sf_window`] on every accepted record, in parallel, and sorts by name.
pub fn census(rows: Vec<(usize, Result<KnotRecord, String>)>, filter: CensusFilter) -> CensusReport {
    let outcomes: Vec<(usize, Result<(KnotRecord, ObstructionReport), String>)> = rows
        .into_par_iter()
        .filter(|(_, r)| r.as_ref().map_or(true, |rec| filter.accepts(rec)))
        .map(|(line, r)| {
            let outcome = r.and_then(|rec| validated(&rec).map(|k| (rec, sf_window(&k))));
            (line, outcome)
        })
        .collect();

    let mut report = CensusReport {
        filter,
        total: 0,
        alternating_slice: ClassCounts::default(),
        nonalternating_slice: ClassCounts::default(),
        other: ClassCounts::default(),
        not_excluded: Vec::new(),
        excluded: Vec::new(),
        errors: Vec::new(),
    };
    for (line, outcome) in outcomes {
        let (rec, window) = match outcome {
            Ok(x) => x,
            Err(message) => {
                report.errors.push(LineError { line, message });
                continue;
            }
        };
        let excluded = window.global == GlobalVerdict::NoSFSurgeryPossible;
        report.total += 1;
        match (rec.is_slice, rec.is_alternating) {
            (true, true) => report.alternating_slice.add(excluded),
            (true, false) => report.nonalternating_slice.add(excluded),
            _ => report.other.add(excluded),
        }
        if excluded {
            let mut theorems: Vec<String> = window
                .global_reasons
                .iter()
                .chain(window.cells.iter().flat_map(|c| &c.reasons))
                .map(|r| r.theorem.clone())
                .collect();
            theorems.sort();
            theorems.dedup();
            report.excluded.push(ExcludedKnot { name: window.name, theorems });
        } else {
            report.not_excluded.push(Survivor {
                windows: window.surviving_windows(),
                name: window.name,
                global: window.global,
            });
        }
    }
    report.not_excluded.sort_by(|a, b| a.name.cmp(&b.name));
    report.excluded.sort_by(|a, b| a.name.cmp(&b.name));
    report.errors.sort_by_key(|e| e.line);
    report
}

impl CensusReport {
    pub fn to_json(&self) -> String {
        to_json_line(self)
    }

    /// One row per knot: `name,status,details`, survivors first, then exclusions.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let mut write = |fields: [&str; 3]| w.write_record(fields).expect("writing to a Vec cannot fail");
        write(["name", "status", "details"]);
        for s in &self.not_excluded {
            let status = match s.global {
                GlobalVerdict::Unconstrained => "unconstrained",
                _ => "constrained",
            };
            write([&s.name, status, &s.windows.join("; ")]);
        }
        for e in &self.excluded {
            write([&e.name, "excluded", &e.theorems.join("; ")]);
        }
        for e in &self.errors {
            write([&format!("line {}", e.line), "error", &e.message]);
        }
        String::from_utf8(w.into_inner().expect("flush to a Vec cannot fail")).expect("csv output is utf-8")
    }
}

fn cmd_census(
    input: &Path,
    filter: CensusFilter,
    format: RecordFormat,
    input_format: Option<RecordFormat>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let report = census(load_table(input, input_format)?, filter);
    let text = match format {
        RecordFormat::Json => report.to_json(),
        RecordFormat::Csv => report.to_csv(),
    };
    write_out(out, &text)?;
    for e in &report.errors {
        let _ = writeln!(err, "line {}: {}", e.line, e.message);
    }
    Ok(if report.errors.is_empty() { EXIT_OK } else { EXIT_PARTIAL })
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Engine(format!("write failed: {e}")))
}

/// Parses arguments, runs one command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Check { knot, slope, orientation } => cmd_check(knot, slope, *orientation, out),
        Command::Cone { knot, slope, spinc, vh } => cmd_cone(knot, slope, *spinc, vh.as_deref(), out),
        Command::Census { input, filter, format, input_format } => {
            cmd_census(input, *filter, *format, *input_format, out, err)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
