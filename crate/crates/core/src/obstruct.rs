//! One-directional tests ruling out Seifert fibered surgeries, and their
//! composition into per-knot slope reports.
//!
//! Negative slopes reduce to positive ones through `S^3_r(K) = -S^3_{-r}(mK)`.
//! Every input used here (torsion coefficients, genera, parity of the top knot
//! Floer group) is the same for `K` and its mirror, so a cell `(orientation,
//! r < 0)` is the opposite orientation's check at `|r|`.

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cone::Slope;
use crate::knotdata::ValidatedKnot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
pub enum Orientation {
    #[value(name = "pos")]
    PositiveSF,
    #[value(name = "neg")]
    NegativeSF,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::PositiveSF => Orientation::NegativeSF,
            Orientation::NegativeSF => Orientation::PositiveSF,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Excluded,
    NotExcluded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub theorem: String,
    pub detail: String,
}

impl Reason {
    fn new(theorem: &str, detail: impl Into<String>) -> Self {
        Self { theorem: theorem.to_string(), detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub reasons: Vec<Reason>,
    /// Checks that could not run for lack of data.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    fn from_reasons(reasons: Vec<Reason>) -> Self {
        let status = if reasons.is_empty() { Status::NotExcluded } else { Status::Excluded };
        Self { status, reasons, skipped: Vec::new(), notes: Vec::new() }
    }

    pub fn is_excluded(&self) -> bool {
        self.status == Status::Excluded
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructError {
    #[error("knot is not flagged slice")]
    NotSlice,
}

fn fmt_ratio(r: &Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn serialize_ratio<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&fmt_ratio(r))
}

/// Which slopes of one sign a cell rules out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Exclusion {
    All,
    /// Every `|r|` strictly below the bound.
    Below {
        #[serde(serialize_with = "serialize_ratio")]
        bound: Ratio<i64>,
    },
    None,
}

impl Exclusion {
    pub fn excludes(&self, r: Ratio<i64>) -> bool {
        match self {
            Exclusion::All => true,
            Exclusion::Below { bound } => r < *bound,
            Exclusion::None => false,
        }
    }

    fn join(self, other: Exclusion) -> Exclusion {
        match (self, other) {
            (Exclusion::All, _) | (_, Exclusion::All) => Exclusion::All,
            (Exclusion::Below { bound: a }, Exclusion::Below { bound: b }) => Exclusion::Below { bound: a.max(b) },
            (Exclusion::Below { bound }, Exclusion::None) | (Exclusion::None, Exclusion::Below { bound }) => {
                Exclusion::Below { bound }
            }
            (Exclusion::None, Exclusion::None) => Exclusion::None,
        }
    }
}

/// One clause: its exclusion set for `r > 0` and the reason if it fires.
struct Clause {
    exclusion: Exclusion,
    reason: Reason,
}

fn positive_clauses(knot: &ValidatedKnot) -> Vec<Clause> {
    let mut out = Vec::new();
    let torsion = knot.torsion();
    if let Some((i, t)) = torsion.values.iter().enumerate().find(|(_, &t)| t < 0) {
        out.push(Clause {
            exclusion: Exclusion::All,
            reason: Reason::new("nonnegative-torsion", format!("t_{i} = {t} < 0, but positive Seifert surgeries need every t_i >= 0")),
        });
    }
    if let Some(top) = knot.hfk_top() {
        if top.odd > 0 || top.even == 0 {
            out.push(Clause {
                exclusion: Exclusion::All,
                reason: Reason::new(
                    "hfk-top-parity",
                    format!("top knot Floer group has even rank {} and odd rank {}; positive Seifert surgeries need it supported in even degrees", top.even, top.odd),
                ),
            });
        }
    }
    let degree = knot.alexander().degree();
    if degree < knot.genus() as usize {
        out.push(Clause {
            exclusion: Exclusion::All,
            reason: Reason::new(
                "alexander-degree-deficit",
                format!("deg Δ = {degree} < g = {}, so the top knot Floer group has equal even and odd ranks", knot.genus()),
            ),
        });
    }
    out
}

/// Clauses for negatively oriented surgeries at `r > 0`, plus the names of skipped checks.
fn negative_clauses(knot: &ValidatedKnot) -> (Vec<Clause>, Vec<String>) {
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    let torsion = knot.torsion();
    let positive_above_zero: Vec<(i64, i64)> = torsion
        .values
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &t)| t > 0)
        .map(|(i, &t)| (i as i64, t))
        .collect();

    if let Some(&(i, t)) = positive_above_zero.first() {
        out.push(Clause {
            exclusion: Exclusion::Below { bound: Ratio::from_integer(3) },
            reason: Reason::new("nonpositive-torsion", format!("t_{i} = {t} > 0, but negative Seifert surgeries with r < 3 need t_i <= 0 for i > 0")),
        });
    }
    if let Some(&(i, t)) = positive_above_zero.iter().max_by_key(|(i, t)| 2 * (i + t) - 1) {
        let bound = 2 * (i + t) - 1;
        out.push(Clause {
            exclusion: Exclusion::Below { bound: Ratio::from_integer(bound) },
            reason: Reason::new(
                "surgery-size",
                format!("t_{i} = {t} exceeds max(m - {i}, 0) for m = {}, which forces r >= {bound}", i + t - 1),
            ),
        });
    }
    match knot.slice_genus() {
        Some(gs) => {
            let gs = gs as i64;
            if let Some(&(i, t)) = positive_above_zero.iter().find(|(i, t)| *t > (gs - i).max(0)) {
                out.push(Clause {
                    exclusion: Exclusion::All,
                    reason: Reason::new(
                        "four-ball-genus-torsion-bound",
                        format!("t_{i} = {t} > max(g* - {i}, 0) = {}", (gs - i).max(0)),
                    ),
                });
            }
        }
        None => skipped.push("four-ball-genus-torsion-bound: slice genus unknown".to_string()),
    }
    let genus = knot.genus() as i64;
    if genus > 1 {
        let bound = Ratio::from_integer(2 * genus - 1);
        let degree = knot.alexander().degree() as i64;
        let mut fired = None;
        if degree < genus {
            fired = Some(format!("deg Δ = {degree} < g = {genus} forces nonzero even rank at the top grading"));
        } else if let Some(top) = knot.hfk_top() {
            if top.even > 0 || top.odd == 0 {
                fired = Some(format!(
                    "top knot Floer group has even rank {} and odd rank {}; negative Seifert surgeries below 2g - 1 need it supported in odd degrees",
                    top.even, top.odd
                ));
            }
        } else {
            skipped.push("hfk-top-parity: top knot Floer ranks unknown".to_string());
        }
        if let Some(detail) = fired {
            out.push(Clause { exclusion: Exclusion::Below { bound }, reason: Reason::new("hfk-top-parity", detail) });
        }
    }
    (out, skipped)
}

fn boundary_note(knot: &ValidatedKnot, r: Ratio<i64>) -> Option<String> {
    let genus = knot.genus() as i64;
    (genus > 1 && r == Ratio::from_integer(2 * genus - 1))
        .then(|| format!("r = {} sits on the boundary 2g - 1 and is not excluded by the top-grading parity test", fmt_ratio(&r)))
}

fn verdict_from(clauses: Vec<Clause>, r: Ratio<i64>) -> Verdict {
    Verdict::from_reasons(clauses.into_iter().filter(|c| c.exclusion.excludes(r)).map(|c| c.reason).collect())
}

/// Can `S^3_r(K)`, `r > 0`, be a positively oriented Seifert fibered space?
pub fn check_positive_sf(knot: &ValidatedKnot, r: Slope) -> Verdict {
    debug_assert!(r.is_positive());
    verdict_from(positive_clauses(knot), r.abs().to_ratio())
}

/// Can `S^3_r(K)`, `r > 0`, be a negatively oriented Seifert fibered space?
pub fn check_negative_sf(knot: &ValidatedKnot, r: Slope) -> Verdict {
    debug_assert!(r.is_positive());
    let r = r.abs().to_ratio();
    let (clauses, skipped) = negative_clauses(knot);
    let mut verdict = verdict_from(clauses, r);
    verdict.skipped = skipped;
    verdict.notes.extend(boundary_note(knot, r));
    verdict
}

/// Slice knots whose torsion coefficients take both signs have no Seifert fibered surgery.
pub fn slice_obstruction(knot: &ValidatedKnot) -> Result<Verdict, ObstructError> {
    if !knot.is_slice() {
        return Err(ObstructError::NotSlice);
    }
    let torsion = knot.torsion();
    if !torsion.mixed_signs() {
        return Ok(Verdict::from_reasons(Vec::new()));
    }
    let pos = torsion.values.iter().position(|&t| t > 0).expect("mixed signs");
    let neg = torsion.values.iter().position(|&t| t < 0).expect("mixed signs");
    Ok(Verdict::from_reasons(vec![Reason::new(
        "slice-mixed-torsion",
        format!(
            "slice knot with t_{pos} = {} > 0 and t_{neg} = {} < 0: positive orientations need all t_i >= 0, negative ones all t_i <= 0",
            torsion.values[pos], torsion.values[neg]
        ),
    )]))
}

/// Knots with `g > 1`, `deg Δ < g` and `g* < g` have no Seifert fibered surgery.
pub fn four_ball_genus_obstruction(knot: &ValidatedKnot) -> Verdict {
    let genus = knot.genus();
    let degree = knot.alexander().degree();
    let mut verdict = match knot.slice_genus() {
        Some(gs) if genus > 1 && degree < genus as usize && gs < genus => {
            Verdict::from_reasons(vec![Reason::new(
                "four-ball-genus",
                format!("g = {genus} > 1, deg Δ = {degree} < g and g* = {gs} < g"),
            )])
        }
        _ => Verdict::from_reasons(Vec::new()),
    };
    if knot.slice_genus().is_none() {
        verdict.skipped.push("four-ball-genus: slice genus unknown".to_string());
    }
    verdict
}

fn global_reasons(knot: &ValidatedKnot) -> Vec<Reason> {
    let mut reasons = four_ball_genus_obstruction(knot).reasons;
    if let Ok(v) = slice_obstruction(knot) {
        reasons.extend(v.reasons);
    }
    reasons
}

/// Full verdict for one slope (of either sign) and orientation.
pub fn verdict_at(knot: &ValidatedKnot, slope: Slope, orientation: Orientation) -> Verdict {
    let native = if slope.is_positive() { orientation } else { orientation.reversed() };
    let mut verdict = match native {
        Orientation::PositiveSF => check_positive_sf(knot, slope.abs()),
        Orientation::NegativeSF => check_negative_sf(knot, slope.abs()),
    };
    verdict.reasons.extend(global_reasons(knot));
    if !verdict.reasons.is_empty() {
        verdict.status = Status::Excluded;
    }
    if !slope.is_positive() {
        verdict.notes.push("negative slope handled on the mirror, which reverses the orientation".to_string());
    }
    verdict
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeSign {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub orientation: Orientation,
    pub slope_sign: SlopeSign,
    pub exclusion: Exclusion,
    pub reasons: Vec<Reason>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GlobalVerdict {
    NoSFSurgeryPossible,
    Constrained,
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub name: String,
    pub cells: Vec<CellReport>,
    pub global: GlobalVerdict,
    pub global_reasons: Vec<Reason>,
    /// Surgeries with `|r|` above this are hyperbolic when `K` is (printed arithmetic only).
    pub hyperbolic_bound: f64,
    /// Range of `|r|` where a lens space surgery could occur, if nonempty.
    pub lens_window: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl ObstructionReport {
    pub fn cell(&self, orientation: Orientation, sign: SlopeSign) -> &CellReport {
        self.cells
            .iter()
            .find(|c| c.orientation == orientation && c.slope_sign == sign)
            .expect("all four cells are present")
    }

    /// Tightest surviving range of `|r|` per cell, as text.
    pub fn surviving_windows(&self) -> Vec<String> {
        self.cells
            .iter()
            .filter_map(|c| {
                let sign = match c.slope_sign {
                    SlopeSign::Positive => "r",
                    SlopeSign::Negative => "-r",
                };
                let name = match c.orientation {
                    Orientation::PositiveSF => "PositiveSF",
                    Orientation::NegativeSF => "NegativeSF",
                };
                match c.exclusion {
                    Exclusion::All => None,
                    Exclusion::Below { bound } => Some(format!("{name}: {sign} >= {}", fmt_ratio(&bound))),
                    Exclusion::None => Some(format!("{name}: {sign} > 0")),
                }
            })
            .collect()
    }
}

fn cell_from(clauses: Vec<Clause>) -> (Exclusion, Vec<Reason>) {
    clauses.into_iter().fold((Exclusion::None, Vec::new()), |(ex, mut reasons), c| {
        reasons.push(c.reason);
        (ex.join(c.exclusion), reasons)
    })
}

/// Composes every check over both slope signs and both orientations.
pub fn sf_window(knot: &ValidatedKnot) -> ObstructionReport {
    let global_reasons = global_reasons(knot);
    let (pos_ex, pos_reasons) = cell_from(positive_clauses(knot));
    let (neg_clauses, mut skipped) = negative_clauses(knot);
    let (neg_ex, neg_reasons) = cell_from(neg_clauses);
    skipped.extend(four_ball_genus_obstruction(knot).skipped);

    let globally = |ex: Exclusion| if global_reasons.is_empty() { ex } else { Exclusion::All };
    let cell = |orientation, slope_sign, native: Orientation| {
        let (ex, reasons) = match native {
            Orientation::PositiveSF => (pos_ex, pos_reasons.clone()),
            Orientation::NegativeSF => (neg_ex, neg_reasons.clone()),
        };
        CellReport { orientation, slope_sign, exclusion: globally(ex), reasons }
    };
    let cells = vec![
        cell(Orientation::PositiveSF, SlopeSign::Positive, Orientation::PositiveSF),
        cell(Orientation::PositiveSF, SlopeSign::Negative, Orientation::NegativeSF),
        cell(Orientation::NegativeSF, SlopeSign::Positive, Orientation::NegativeSF),
        cell(Orientation::NegativeSF, SlopeSign::Negative, Orientation::PositiveSF),
    ];
    let global = if cells.iter().all(|c| c.exclusion == Exclusion::All) {
        GlobalVerdict::NoSFSurgeryPossible
    } else if cells.iter().all(|c| c.exclusion == Exclusion::None) {
        GlobalVerdict::Unconstrained
    } else {
        GlobalVerdict::Constrained
    };
    let genus = knot.genus() as i64;
    ObstructionReport {
        name: knot.name().to_string(),
        cells,
        global,
        global_reasons,
        hyperbolic_bound: 3.0 * 2f64.powf(1.75) * genus as f64,
        lens_window: (2 * genus + 8 <= 4 * genus - 1).then_some([2 * genus + 8, 4 * genus - 1]),
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotdata::{parse_knot_record, validate_record, RecordFormat};

    fn knot(line: &str) -> ValidatedKnot {
        validate_record(&parse_knot_record(line, RecordFormat::Csv).unwrap()).unwrap()
    }

    fn slope(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    const FIG8: &str = "4_1,3;-1,1,1,false,true,0:1";
    const TREFOIL: &str = "3_1,-1;1,1,1,false,true,1:0";
    const KT: &str = "KT,1,2,0,true,false,";
    const SIX_ONE: &str = "6_1,5;-2,1,0,true,true,0:2";

    #[test]
    fn positive_examples() {
        let v = check_positive_sf(&knot(FIG8), slope(4, 1));
        assert!(v.is_excluded());
        assert!(v.reasons.iter().any(|r| r.theorem == "nonnegative-torsion"));
        assert!(!check_positive_sf(&knot(TREFOIL), slope(5, 1)).is_excluded());
        let v = check_positive_sf(&knot(KT), slope(1, 1));
        assert!(v.reasons.iter().any(|r| r.theorem == "alexander-degree-deficit"));
    }

    #[test]
    fn negative_examples() {
        assert!(!check_negative_sf(&knot(TREFOIL), slope(1, 1)).is_excluded());
        // t_1 = 2 with g* = 0
        let k = knot("k,5;-4;2,2,0,true,false,");
        assert_eq!(k.torsion().values, vec![0, 2]);
        let v = check_negative_sf(&k, slope(100, 1));
        assert!(v.reasons.iter().any(|r| r.theorem == "four-ball-genus-torsion-bound"));

        // t_2 = 1, g* large
        let k = knot("k,1;0;-1;1,3,3,false,false,");
        assert_eq!(k.torsion().values, vec![1, 1, 1]);
        assert!(check_negative_sf(&k, slope(49, 10)).is_excluded());
        let v = check_negative_sf(&k, slope(5, 1));
        assert!(!v.is_excluded());
        assert!(!v.notes.is_empty());
        assert!(!check_negative_sf(&k, slope(6, 1)).is_excluded());
        let report = sf_window(&k);
        assert_eq!(
            report.cell(Orientation::NegativeSF, SlopeSign::Positive).exclusion,
            Exclusion::Below { bound: Ratio::from_integer(5) }
        );
    }

    #[test]
    fn missing_slice_genus_is_reported() {
        let v = check_negative_sf(&knot("k,-1;1,1,,false,true,"), slope(1, 1));
        assert!(v.skipped.iter().any(|s| s.starts_with("four-ball-genus-torsion-bound")));
    }

    #[test]
    fn slice_examples() {
        // t = (2, 1, -1): a_3 = -1, a_2 = 3, a_1 = -1 with a_0 fixing Δ(1) = 1
        let k = knot("k,-1;-1;3;-1,3,0,true,false,");
        assert_eq!(&k.torsion().values[1..], &[1, -1]);
        assert!(slice_obstruction(&k).unwrap().is_excluded());
        assert!(!slice_obstruction(&knot(SIX_ONE)).unwrap().is_excluded());
        assert!(!slice_obstruction(&knot("u,1,0,0,true,true,")).unwrap().is_excluded());
        assert_eq!(slice_obstruction(&knot(TREFOIL)), Err(ObstructError::NotSlice));
    }

    #[test]
    fn four_ball_examples() {
        assert!(four_ball_genus_obstruction(&knot(KT)).is_excluded());
        assert!(!four_ball_genus_obstruction(&knot(TREFOIL)).is_excluded());
        assert!(!four_ball_genus_obstruction(&knot("T2_5,1;-1;1,2,2,false,true,1:0")).is_excluded());
    }

    #[test]
    fn window_examples() {
        assert_eq!(sf_window(&knot(KT)).global, GlobalVerdict::NoSFSurgeryPossible);
        assert_eq!(sf_window(&knot("u,1,0,0,true,true,")).global, GlobalVerdict::Unconstrained);
        assert_eq!(sf_window(&knot(TREFOIL)).global, GlobalVerdict::Unconstrained);

        let fig8 = sf_window(&knot(FIG8));
        assert_eq!(fig8.global, GlobalVerdict::Constrained);
        assert_eq!(fig8.cell(Orientation::PositiveSF, SlopeSign::Positive).exclusion, Exclusion::All);
        assert_eq!(fig8.cell(Orientation::NegativeSF, SlopeSign::Negative).exclusion, Exclusion::All);
        assert_eq!(fig8.cell(Orientation::NegativeSF, SlopeSign::Positive).exclusion, Exclusion::None);
        assert_eq!(fig8.cell(Orientation::PositiveSF, SlopeSign::Negative).exclusion, Exclusion::None);

        let six_one = sf_window(&knot(SIX_ONE));
        assert_ne!(six_one.global, GlobalVerdict::NoSFSurgeryPossible);
    }

    #[test]
    fn verdicts_agree_with_cells() {
        for line in [FIG8, TREFOIL, KT, SIX_ONE, "T2_5,1;-1;1,2,2,false,true,1:0"] {
            let k = knot(line);
            let report = sf_window(&k);
            for p in [-7i64, -3, -2, -1, 1, 2, 3, 7] {
                for q in [1, 2, 5] {
                    let Ok(s) = Slope::new(p, q) else { continue };
                    for o in [Orientation::PositiveSF, Orientation::NegativeSF] {
                        let sign = if p > 0 { SlopeSign::Positive } else { SlopeSign::Negative };
                        let cell = report.cell(o, sign);
                        assert_eq!(verdict_at(&k, s, o).is_excluded(), cell.exclusion.excludes(s.abs().to_ratio()), "{line} {s} {o:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn json_field_names() {
        let v = verdict_at(&knot(FIG8), slope(4, 1), Orientation::PositiveSF);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["status"], "Excluded");
        assert!(json["reasons"][0]["theorem"].is_string());
        let report = serde_json::to_value(sf_window(&knot("T2_5,1;-1;1,2,2,false,true,1:0"))).unwrap();
        assert_eq!(report["cells"][2]["exclusion"]["bound"], "3/1");
    }

    #[test]
    fn informational_windows() {
        let r = sf_window(&knot("T2_5,1;-1;1,2,2,false,true,1:0"));
        assert!((r.hyperbolic_bound - 20.18).abs() < 0.01);
        assert_eq!(r.lens_window, None);
        let big = sf_window(&knot("k,1,9,,false,false,"));
        assert_eq!(big.lens_window, Some([26, 35]));
    }
}
