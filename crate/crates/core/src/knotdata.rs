//! Knot table records: parsing, validation and construction of knot models.
//!
//! CSV rows follow the header
//! `name,alexander,genus,slice_genus,is_slice,is_alternating,hfk_top`, where
//! `alexander` is `a0;a1;...;ad` and `hfk_top` is `even:odd` or empty.
//! JSON lines carry the same field names.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::alexander::{hfk_consistency, value_at_one, AlexanderPolynomial, HfkTop, TorsionProfile};
use crate::graded::{GradedError, Parity, ReducedSummand};
use crate::vh::{self, lspace_vh, validate_vh, VhError, VhInput, VhSequence, VhViolation};

pub const COLUMNS: [&str; 7] =
    ["name", "alexander", "genus", "slice_genus", "is_slice", "is_alternating", "hfk_top"];
const OPTIONAL: [&str; 2] = ["slice_genus", "hfk_top"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RecordFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("column `{column}`: {message}")]
    Parse { column: &'static str, message: String },
    #[error("missing mandatory column `{0}`")]
    Schema(&'static str),
    #[error("malformed line: {0}")]
    Malformed(String),
}

fn parse_err(column: &'static str, message: impl Into<String>) -> RecordError {
    RecordError::Parse { column, message: message.into() }
}

/// One row of a knot table, exactly as read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotRecord {
    pub name: String,
    pub alexander: Vec<i64>,
    pub genus: u32,
    pub slice_genus: Option<u32>,
    pub is_slice: bool,
    pub is_alternating: bool,
    pub hfk_top: Option<HfkTop>,
}

fn parse_alexander(s: &str) -> Result<Vec<i64>, RecordError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(parse_err("alexander", "empty coefficient list"));
    }
    s.split(';')
        .map(|a| a.trim().parse::<i64>().map_err(|e| parse_err("alexander", format!("`{a}`: {e}"))))
        .collect()
}

fn parse_u32(column: &'static str, s: &str) -> Result<u32, RecordError> {
    s.trim().parse().map_err(|e| parse_err(column, format!("`{s}`: {e}")))
}

fn parse_bool(column: &'static str, s: &str) -> Result<bool, RecordError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(parse_err(column, format!("`{other}` is not true/false"))),
    }
}

fn parse_hfk(s: &str) -> Result<Option<HfkTop>, RecordError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(None);
    }
    let (even, odd) = s
        .split_once(':')
        .ok_or_else(|| parse_err("hfk_top", format!("`{s}` is not even:odd")))?;
    Ok(Some(HfkTop { even: parse_u32("hfk_top", even)? as u64, odd: parse_u32("hfk_top", odd)? as u64 }))
}

fn fmt_hfk(h: &Option<HfkTop>) -> String {
    h.map(|h| format!("{}:{}", h.even, h.odd)).unwrap_or_default()
}

impl KnotRecord {
    fn from_fields(get: impl Fn(&'static str) -> Option<String>) -> Result<Self, RecordError> {
        let required = |c: &'static str| get(c).ok_or(RecordError::Schema(c));
        let name = required("name")?.trim().to_string();
        if name.is_empty() {
            return Err(parse_err("name", "empty name"));
        }
        let slice_genus = match get("slice_genus") {
            Some(s) if !s.trim().is_empty() => Some(parse_u32("slice_genus", &s)?),
            _ => None,
        };
        Ok(Self {
            name,
            alexander: parse_alexander(&required("alexander")?)?,
            genus: parse_u32("genus", &required("genus")?)?,
            slice_genus,
            is_slice: parse_bool("is_slice", &required("is_slice")?)?,
            is_alternating: parse_bool("is_alternating", &required("is_alternating")?)?,
            hfk_top: get("hfk_top").map(|s| parse_hfk(&s)).transpose()?.flatten(),
        })
    }

    pub fn to_csv_line(&self) -> String {
        let alexander: Vec<String> = self.alexander.iter().map(i64::to_string).collect();
        let mut w = csv::WriterBuilder::new().has_headers(false).terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        w.write_record([
            self.name.clone(),
            alexander.join(";"),
            self.genus.to_string(),
            self.slice_genus.map(|g| g.to_string()).unwrap_or_default(),
            self.is_slice.to_string(),
            self.is_alternating.to_string(),
            fmt_hfk(&self.hfk_top),
        ])
        .expect("writing to a Vec cannot fail");
        let bytes = w.into_inner().expect("flush to a Vec cannot fail");
        String::from_utf8(bytes).expect("csv output is utf-8").trim_end_matches('\n').to_string()
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::json!({
            "name": self.name,
            "alexander": self.alexander,
            "genus": self.genus,
            "slice_genus": self.slice_genus,
            "is_slice": self.is_slice,
            "is_alternating": self.is_alternating,
            "hfk_top": self.hfk_top.map(|h| format!("{}:{}", h.even, h.odd)),
        })
    }

    pub fn to_json_line(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn serialize(&self, format: RecordFormat) -> String {
        match format {
            RecordFormat::Csv => self.to_csv_line(),
            RecordFormat::Json => self.to_json_line(),
        }
    }
}

/// Maps column names to positions in a CSV row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvLayout {
    positions: BTreeMap<&'static str, usize>,
}

impl Default for CsvLayout {
    fn default() -> Self {
        Self { positions: COLUMNS.iter().enumerate().map(|(i, c)| (*c, i)).collect() }
    }
}

impl CsvLayout {
    pub fn from_header(header: &str) -> Result<Self, RecordError> {
        let fields = split_csv(header)?;
        let mut positions = BTreeMap::new();
        for (i, f) in fields.iter().enumerate() {
            match COLUMNS.iter().find(|c| **c == f.trim()) {
                Some(c) => {
                    positions.insert(*c, i);
                }
                None => return Err(RecordError::Malformed(format!("unknown column `{}`", f.trim()))),
            }
        }
        for c in COLUMNS {
            if !positions.contains_key(c) && !OPTIONAL.contains(&c) {
                return Err(RecordError::Schema(c));
            }
        }
        Ok(Self { positions })
    }

    fn parse(&self, line: &str) -> Result<KnotRecord, RecordError> {
        let fields = split_csv(line)?;
        let width = self.positions.values().max().map_or(0, |m| m + 1);
        if fields.len() > width {
            return Err(RecordError::Malformed(format!("expected {width} columns, found {}", fields.len())));
        }
        KnotRecord::from_fields(|c| self.positions.get(c).and_then(|&i| fields.get(i).cloned()))
    }
}

fn split_csv(line: &str) -> Result<Vec<String>, RecordError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(line.as_bytes());
    match reader.records().next() {
        None => Ok(Vec::new()),
        Some(Ok(rec)) => Ok(rec.iter().map(str::to_string).collect()),
        Some(Err(e)) => Err(RecordError::Malformed(e.to_string())),
    }
}

fn json_field(obj: &Map<String, Value>, column: &'static str) -> Result<Option<String>, RecordError> {
    let value = match obj.get(column) {
        None | Some(Value::Null) => return Ok(None),
        Some(v) => v,
    };
    let text = match (column, value) {
        (_, Value::String(s)) => s.clone(),
        ("alexander", Value::Array(items)) => {
            let coeffs: Result<Vec<String>, _> = items
                .iter()
                .map(|v| v.as_i64().map(|a| a.to_string()).ok_or_else(|| parse_err(column, format!("`{v}` is not an integer"))))
                .collect();
            coeffs?.join(";")
        }
        ("hfk_top", Value::Object(h)) => {
            let part = |k: &str| h.get(k).and_then(Value::as_u64).ok_or_else(|| parse_err(column, format!("missing `{k}`")));
            format!("{}:{}", part("even")?, part("odd")?)
        }
        (_, Value::Number(n)) => n.to_string(),
        (_, Value::Bool(b)) => b.to_string(),
        (_, other) => return Err(parse_err(column, format!("unexpected value `{other}`"))),
    };
    Ok(Some(text))
}

/// Parses one data line (no header) in the canonical column order.
pub fn parse_knot_record(line: &str, format: RecordFormat) -> Result<KnotRecord, RecordError> {
    match format {
        RecordFormat::Csv => CsvLayout::default().parse(line),
        RecordFormat::Json => {
            let value: Value = serde_json::from_str(line).map_err(|e| RecordError::Malformed(e.to_string()))?;
            let obj = value.as_object().ok_or_else(|| RecordError::Malformed("expected a JSON object".into()))?;
            let mut fields = BTreeMap::new();
            for c in COLUMNS {
                fields.insert(c, json_field(obj, c)?);
            }
            KnotRecord::from_fields(|c| fields.get(c).cloned().flatten())
        }
    }
}

/// One parsed line of a table, with its 1-based line number.
pub type TableLine = (usize, Result<KnotRecord, RecordError>);

/// Reads a whole table. CSV input must start with a header line.
pub fn read_table(reader: impl BufRead, format: RecordFormat) -> Result<Vec<TableLine>, RecordError> {
    let mut lines = reader.lines().enumerate();
    let layout = match format {
        RecordFormat::Csv => {
            let header = loop {
                match lines.next() {
                    None => return Err(RecordError::Schema("name")),
                    Some((_, Err(e))) => return Err(RecordError::Malformed(e.to_string())),
                    Some((_, Ok(l))) if l.trim().is_empty() => continue,
                    Some((_, Ok(l))) => break l,
                }
            };
            Some(CsvLayout::from_header(&header)?)
        }
        RecordFormat::Json => None,
    };
    let mut out = Vec::new();
    for (i, line) in lines {
        let parsed = match line {
            Err(e) => Err(RecordError::Malformed(e.to_string())),
            Ok(l) if l.trim().is_empty() => continue,
            Ok(l) => match &layout {
                Some(layout) => layout.parse(&l),
                None => parse_knot_record(&l, RecordFormat::Json),
            },
        };
        out.push((i + 1, parsed));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RecordViolation {
    SliceGenusExceedsGenus { slice_genus: u32, genus: u32 },
    SliceWithPositiveSliceGenus(u32),
    BadNormalization(i64),
    EmptyAlexander,
    DegreeExceedsGenus { degree: usize, genus: u32 },
    Hfk(String),
}

impl fmt::Display for RecordViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordViolation::SliceGenusExceedsGenus { slice_genus, genus } => {
                write!(f, "slice_genus exceeds genus ({slice_genus} > {genus})")
            }
            RecordViolation::SliceWithPositiveSliceGenus(g) => {
                write!(f, "slice knot must have slice_genus 0, found {g}")
            }
            RecordViolation::BadNormalization(v) => {
                write!(f, "Alexander polynomial not ±1 at T=1 (value {v})")
            }
            RecordViolation::EmptyAlexander => f.write_str("Alexander polynomial has no coefficients"),
            RecordViolation::DegreeExceedsGenus { degree, genus } => {
                write!(f, "Alexander degree {degree} exceeds genus {genus}")
            }
            RecordViolation::Hfk(msg) => f.write_str(msg),
        }
    }
}

/// A record that passed every consistency check, with its normalized `Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedKnot {
    record: KnotRecord,
    alexander: AlexanderPolynomial,
}

impl ValidatedKnot {
    pub fn record(&self) -> &KnotRecord {
        &self.record
    }

    pub fn name(&self) -> &str {
        &self.record.name
    }

    pub fn alexander(&self) -> &AlexanderPolynomial {
        &self.alexander
    }

    pub fn genus(&self) -> u32 {
        self.record.genus
    }

    /// `g*`, taking a slice knot's to be 0 when the column is empty.
    pub fn slice_genus(&self) -> Option<u32> {
        self.record.slice_genus.or(self.record.is_slice.then_some(0))
    }

    pub fn is_slice(&self) -> bool {
        self.record.is_slice
    }

    pub fn hfk_top(&self) -> Option<HfkTop> {
        self.record.hfk_top
    }

    pub fn torsion(&self) -> TorsionProfile {
        self.alexander.torsion_profile()
    }
}

/// Checks every record invariant; total, never panics.
pub fn validate_record(rec: &KnotRecord) -> Result<ValidatedKnot, Vec<RecordViolation>> {
    let mut violations = Vec::new();
    if let Some(gs) = rec.slice_genus {
        if gs > rec.genus {
            violations.push(RecordViolation::SliceGenusExceedsGenus { slice_genus: gs, genus: rec.genus });
        }
        if rec.is_slice && gs != 0 {
            violations.push(RecordViolation::SliceWithPositiveSliceGenus(gs));
        }
    }
    if rec.alexander.is_empty() {
        violations.push(RecordViolation::EmptyAlexander);
        return Err(violations);
    }
    let mut trimmed = rec.alexander.clone();
    while trimmed.len() > 1 && trimmed.last() == Some(&0) {
        trimmed.pop();
    }
    let degree = trimmed.len() - 1;
    if degree > rec.genus as usize {
        violations.push(RecordViolation::DegreeExceedsGenus { degree, genus: rec.genus });
    }
    let at_one = value_at_one(&trimmed);
    let alexander = match AlexanderPolynomial::normalize(&trimmed) {
        Ok(p) => Some(p),
        Err(_) => {
            violations.push(RecordViolation::BadNormalization(at_one));
            None
        }
    };
    if let (Some(p), Some(top)) = (&alexander, rec.hfk_top) {
        if degree <= rec.genus as usize {
            violations.extend(hfk_consistency(p, rec.genus, top).into_iter().map(RecordViolation::Hfk));
        }
    }
    match alexander {
        Some(alexander) if violations.is_empty() => Ok(ValidatedKnot { record: rec.clone(), alexander }),
        _ => Err(violations),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tier {
    /// Bare towers everywhere; `V`/`H` come from the torsion coefficients.
    LSpaceTier,
    /// `V`/`H` and reduced summands supplied by the caller.
    ExplicitTier,
}

/// Caller-supplied homology-level data for [`Tier::ExplicitTier`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitData {
    pub vh: VhSequence,
    /// Reduced summands of `H_*(A_k^+)` keyed by `k`.
    pub reduced: BTreeMap<i64, Vec<ReducedSummand>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ReducedEntry {
    k: i64,
    #[serde(flatten)]
    summand: ReducedSummand,
}

/// JSON form of [`ExplicitData`]: the `V`/`H` object plus an optional
/// `"reduced"` list of `{"k", "rank", "parity", "u_order", "v_image", "h_image"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitInput {
    pub window: [i64; 2],
    #[serde(rename = "V")]
    pub v: BTreeMap<i64, u64>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<BTreeMap<i64, u64>>,
    #[serde(default)]
    reduced: Vec<ReducedEntry>,
}

impl TryFrom<ExplicitInput> for ExplicitData {
    type Error = VhError;

    fn try_from(input: ExplicitInput) -> Result<Self, VhError> {
        let vh = VhSequence::try_from(VhInput { window: input.window, v: input.v, h: input.h })?;
        let mut reduced: BTreeMap<i64, Vec<ReducedSummand>> = BTreeMap::new();
        for entry in input.reduced {
            reduced.entry(entry.k).or_default().push(entry.summand);
        }
        Ok(Self { vh, reduced })
    }
}

impl ExplicitData {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let input: ExplicitInput = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        Ok(Self::try_from(input)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the L-space tier takes no explicit data")]
    UnexpectedExplicitData,
    #[error("the explicit tier needs V/H and reduced data")]
    MissingExplicitData,
    #[error(transparent)]
    Vh(#[from] VhError),
    #[error("V/H data fails validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidVh(Vec<VhViolation>),
    #[error("window half-width {got} is narrower than the required {needed}")]
    WindowTooNarrow { needed: i64, got: i64 },
    #[error("reduced summand at k={k} lies outside (-g, g)")]
    ReducedOutOfRange { k: i64 },
    #[error("reduced summand at k={k}: {source}")]
    Reduced { k: i64, source: GradedError },
    #[error("odd reduced summand at k={k} cannot map onto the even tower")]
    OddImage { k: i64 },
    #[error("bad explicit data: {0}")]
    Json(String),
}

/// Homology-level data of a knot, as consumed by the mapping cone engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotModel {
    pub knot: ValidatedKnot,
    pub tier: Tier,
    pub vh: VhSequence,
    pub reduced: BTreeMap<i64, Vec<ReducedSummand>>,
}

impl KnotModel {
    pub fn reduced_at(&self, k: i64) -> &[ReducedSummand] {
        self.reduced.get(&k).map_or(&[], Vec::as_slice)
    }

    /// Largest `|k| + 1` carrying a reduced summand, or 0.
    pub fn reduced_extent(&self) -> i64 {
        self.reduced
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(k, _)| k.abs() + 1)
            .max()
            .unwrap_or(0)
    }
}

pub fn build_model(
    knot: &ValidatedKnot,
    tier: Tier,
    explicit: Option<ExplicitData>,
) -> Result<KnotModel, ModelError> {
    let genus = knot.genus() as i64;
    let g_star = knot.slice_genus();
    let (vh, reduced) = match (tier, explicit) {
        (Tier::LSpaceTier, Some(_)) => return Err(ModelError::UnexpectedExplicitData),
        (Tier::LSpaceTier, None) => {
            let half = vh::default_half_width(g_star.unwrap_or(0).max(knot.genus()));
            (lspace_vh(knot.alexander(), half)?, BTreeMap::new())
        }
        (Tier::ExplicitTier, None) => return Err(ModelError::MissingExplicitData),
        (Tier::ExplicitTier, Some(data)) => {
            let (_, k_max) = data.vh.window();
            let needed = genus.max(2);
            if k_max < needed {
                return Err(ModelError::WindowTooNarrow { needed, got: k_max });
            }
            for (&k, summands) in &data.reduced {
                if !summands.is_empty() && k.abs() >= genus {
                    return Err(ModelError::ReducedOutOfRange { k });
                }
                for s in summands {
                    s.check().map_err(|source| ModelError::Reduced { k, source })?;
                    let maps_nontrivially = !s.v_image.is_zero() || !s.h_image.is_zero();
                    if maps_nontrivially && s.parity == Parity::Odd {
                        return Err(ModelError::OddImage { k });
                    }
                }
            }
            (data.vh, data.reduced)
        }
    };
    let violations = validate_vh(&vh, g_star);
    if !violations.is_empty() {
        return Err(ModelError::InvalidVh(violations));
    }
    Ok(KnotModel { knot: knot.clone(), tier, vh, reduced })
}
