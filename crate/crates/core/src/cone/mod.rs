//! Truncated mapping cones for rational and zero surgery, their homology with
//! Z/2 parity, the tower surjectivity witness and closed-form d-invariants.
//!
//! A cone has A-blocks `A_s = H_*(A_{k(s)}^+)` and tower B-blocks `B_s`, with
//! `D(a_s) = v(a_s) + h(a_s)` landing in `B_s` and `B_{s+1}`. Only finitely
//! many blocks are kept: past the window every `v` (above) or `h` (below) is an
//! isomorphism of towers, so the discarded blocks form acyclic subcomplexes.
//!
//! Homology is read off by depth counting. Restricting `D` to the part killed
//! by `U^N` gives `ker(U^N)` on `ker D`, of dimension `N * towers + rank HF_red`
//! once `N` exceeds every reduced U-order. Two depths separate the two terms.

mod dinv;
mod surjectivity;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::f2::BitMatrix;
use crate::graded::{
    parity_ranks, BlockMap, GradedError, GradedModule, Parity, ParityRanks, Piece, PieceKind,
    ReducedSummand,
};
use crate::knotdata::KnotModel;
use crate::vh::{VhError, VhSequence};

pub use dinv::{lens_d, slice_zero_surgery_halves, surgery_d, zero_surgery_inequality, ZeroSurgeryBound};
pub use surjectivity::{check_dt_surjective, surjectivity_witness, SurjectivityReport, TowerChain};

/// Default extra truncation depth; `FSL_DEPTH_MARGIN` overrides it.
pub const DEFAULT_DEPTH_MARGIN: usize = 4;
const DEPTH_STEP: usize = 4;
const WINDOW_STEP: i64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("invalid slope `{0}`")]
    BadSlope(String),
    #[error("surgery coefficient must be positive, got {0}")]
    NonPositiveSlope(Slope),
    #[error("Spin^c index {i} outside [0, {p})")]
    SpincOutOfRange { i: i64, p: i64 },
    #[error(transparent)]
    Vh(#[from] VhError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("truncation unstable: {first:?} at window {first_window}/depth {first_depth}, {second:?} at window {second_window}/depth {second_depth}; enlarge the window")]
    Unstable {
        first: Box<HFPlusSummary>,
        first_window: i64,
        first_depth: usize,
        second: Box<HFPlusSummary>,
        second_window: i64,
        second_depth: usize,
    },
    #[error("kernel dimensions {low} -> {high} over {step} extra levels do not fit towers plus a finite part")]
    DepthCount { low: usize, high: usize, step: usize },
    #[error("FSL_DEPTH_MARGIN must be a non-negative integer, got `{0}`")]
    BadDepthMargin(String),
    #[error("surjectivity witness failed: {0}")]
    Surjectivity(String),
    #[error("knot is not flagged slice")]
    NotSlice,
    #[error("slice knot must have V_0 = 0, found {0}")]
    SliceV0(u64),
}

/// A surgery coefficient `p/q` in lowest terms with `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self, ConeError> {
        if p == 0 || q <= 0 || p.gcd(&q) != 1 {
            return Err(ConeError::BadSlope(format!("{p}/{q}")));
        }
        Ok(Self { p, q })
    }

    pub fn integer(p: i64) -> Result<Self, ConeError> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_positive(&self) -> bool {
        self.p > 0
    }

    pub fn abs(&self) -> Self {
        Self { p: self.p.abs(), q: self.q }
    }

    pub fn negated(&self) -> Self {
        Self { p: -self.p, q: self.q }
    }

    pub fn to_ratio(&self) -> Ratio<i64> {
        Ratio::new(self.p, self.q)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = ConeError;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, ConeError> {
        let bad = || ConeError::BadSlope(s.to_string());
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Self::new(p, q).map_err(|_| bad())
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `k(s) = floor((i + p s) / q)`, rounding toward negative infinity (`q > 0`, so Euclidean division is floor division).
pub fn spinc_level(i: i64, slope: Slope, s: i64) -> i64 {
    (i + slope.p * s).div_euclid(slope.q)
}

pub(crate) fn depth_margin() -> Result<usize, ConeError> {
    match std::env::var("FSL_DEPTH_MARGIN") {
        Err(_) => Ok(DEFAULT_DEPTH_MARGIN),
        Ok(raw) => raw.trim().parse().map_err(|_| ConeError::BadDepthMargin(raw)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeKind {
    /// `p/q` surgery with `p > 0` in Spin^c structure `i`.
    Rational { slope: Slope, spinc: i64 },
    /// The two-term complex `v + h : A_i -> B` computing zero surgery.
    Zero { spinc: i64 },
}

/// One A-block with the powers of its tower maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ABlock {
    pub s: i64,
    pub k: i64,
    pub v_power: u64,
    pub h_power: u64,
    /// `None` when the edge leaves the truncation window.
    pub v_target: Option<i64>,
    pub h_target: Option<i64>,
    pub reduced: Vec<ReducedSummand>,
}

/// Recipe for a truncated mapping cone: blocks `s` in `[-b, b]` at tower depth `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingCone {
    kind: ConeKind,
    genus: u32,
    vh: VhSequence,
    reduced: BTreeMap<i64, Vec<ReducedSummand>>,
    half_window: i64,
    depth: usize,
}

/// `HF^+ = T^+ ⊕ ... ⊕ HF_red` reduced to ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HFPlusSummary {
    pub tower_count: usize,
    pub reduced_even: usize,
    pub reduced_odd: usize,
    pub euler_char_red: i64,
}

impl HFPlusSummary {
    pub fn reduced_rank(&self) -> usize {
        self.reduced_even + self.reduced_odd
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankRecord {
    pub half_window: i64,
    pub depth: usize,
    #[serde(flatten)]
    pub ranks: ParityRanks,
}

/// Everything behind one [`HFPlusSummary`], for inspection and debugging.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeDump {
    #[serde(flatten)]
    pub kind: ConeKind,
    pub s_window: [i64; 2],
    pub depth: usize,
    pub blocks: Vec<ABlock>,
    pub ranks: Vec<RankRecord>,
    pub summary: HFPlusSummary,
}

fn reduced_extent(reduced: &BTreeMap<i64, Vec<ReducedSummand>>) -> i64 {
    reduced.iter().filter(|(_, s)| !s.is_empty()).map(|(k, _)| k.abs() + 1).max().unwrap_or(0)
}

fn max_u_order(reduced: &BTreeMap<i64, Vec<ReducedSummand>>) -> usize {
    reduced.values().flatten().map(|s| s.u_order).max().unwrap_or(0)
}

/// Builds the truncated cone for `p/q` surgery, `p > 0`, in Spin^c structure `i`.
pub fn build_surgery_cone(model: &KnotModel, slope: Slope, i: i64) -> Result<MappingCone, ConeError> {
    if !slope.is_positive() {
        return Err(ConeError::NonPositiveSlope(slope));
    }
    if !(0..slope.p).contains(&i) {
        return Err(ConeError::SpincOutOfRange { i, p: slope.p });
    }
    let kappa = model
        .vh
        .v_vanishing_level()
        .max(model.vh.h_vanishing_level())
        .max(reduced_extent(&model.reduced))
        .max(model.knot.genus() as i64 + 1);
    let mut b = 0;
    while spinc_level(i, slope, b + 1) < kappa || spinc_level(i, slope, -b - 1) > -kappa {
        b += 1;
    }
    let mut cone = MappingCone {
        kind: ConeKind::Rational { slope, spinc: i },
        genus: model.knot.genus(),
        vh: model.vh.clone(),
        reduced: model.reduced.clone(),
        half_window: b,
        depth: 0,
    };
    cone.depth = cone.default_depth()?;
    Ok(cone)
}

/// Builds the zero-surgery complex `v_i + h_i : A_i -> B`.
pub fn build_zero_surgery_cone(model: &KnotModel, i: i64) -> Result<MappingCone, ConeError> {
    let mut cone = MappingCone {
        kind: ConeKind::Zero { spinc: i },
        genus: model.knot.genus(),
        vh: model.vh.clone(),
        reduced: model.reduced.clone(),
        half_window: 0,
        depth: 0,
    };
    cone.depth = cone.default_depth()?;
    Ok(cone)
}

impl MappingCone {
    pub fn kind(&self) -> ConeKind {
        self.kind
    }

    pub fn s_window(&self) -> [i64; 2] {
        [-self.half_window, self.half_window]
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The same cone with `extra_window` more blocks on each side and deeper towers.
    pub fn enlarged(&self, extra_window: i64, extra_depth: usize) -> Self {
        let half_window = match self.kind {
            ConeKind::Rational { .. } => self.half_window + extra_window,
            ConeKind::Zero { .. } => 0,
        };
        Self { half_window, depth: self.depth + extra_depth, ..self.clone() }
    }

    fn default_depth(&self) -> Result<usize, ConeError> {
        let top = self
            .blocks()?
            .iter()
            .map(|b| b.v_power.max(b.h_power))
            .max()
            .unwrap_or(0) as usize;
        let depth = 2 * top + self.genus as usize + depth_margin()?;
        Ok(depth.max(max_u_order(&self.reduced)).max(1))
    }

    pub fn blocks(&self) -> Result<Vec<ABlock>, ConeError> {
        let reduced_at = |k: i64| self.reduced.get(&k).cloned().unwrap_or_default();
        match self.kind {
            ConeKind::Rational { slope, spinc } => {
                let b = self.half_window;
                (-b..=b)
                    .map(|s| {
                        let k = spinc_level(spinc, slope, s);
                        Ok(ABlock {
                            s,
                            k,
                            v_power: self.vh.v(k)?,
                            h_power: self.vh.h(k)?,
                            v_target: (s > -b).then_some(s),
                            h_target: (s < b).then_some(s + 1),
                            reduced: reduced_at(k),
                        })
                    })
                    .collect()
            }
            ConeKind::Zero { spinc } => Ok(vec![ABlock {
                s: 0,
                k: spinc,
                v_power: self.vh.v(spinc)?,
                h_power: self.vh.h(spinc)?,
                v_target: Some(0),
                h_target: Some(0),
                reduced: reduced_at(spinc),
            }]),
        }
    }

    fn b_blocks(&self) -> Vec<i64> {
        match self.kind {
            ConeKind::Rational { .. } => (-self.half_window + 1..=self.half_window).collect(),
            ConeKind::Zero { .. } => vec![0],
        }
    }

    /// The differential restricted to the part killed by `U^depth`.
    pub fn boundary_map(&self) -> Result<BlockMap, ConeError> {
        let n = self.depth;
        let blocks = self.blocks()?;

        let mut target = GradedModule::new();
        let mut b_piece = BTreeMap::new();
        for s in self.b_blocks() {
            let idx = target.push(Piece { kind: PieceKind::Tower, block: s, len: n, parity: Parity::Even });
            b_piece.insert(s, idx);
        }

        let mut source = GradedModule::new();
        // (piece index, power or image, target block) for every A piece
        let mut tower_pieces = Vec::new();
        let mut reduced_pieces = Vec::new();
        for block in &blocks {
            let idx = source.push(Piece { kind: PieceKind::Tower, block: block.s, len: n, parity: Parity::Even });
            tower_pieces.push((idx, block));
            for summand in &block.reduced {
                for _ in 0..summand.rank {
                    let len = summand.u_order.min(n);
                    let idx =
                        source.push(Piece { kind: PieceKind::Reduced, block: block.s, len, parity: summand.parity });
                    reduced_pieces.push((idx, block, summand));
                }
            }
        }

        let mut matrix = BitMatrix::zeros(target.dim(), source.dim());
        for (idx, block) in tower_pieces {
            let edges = [(block.v_target, block.v_power), (block.h_target, block.h_power)];
            for (t, power) in edges {
                let Some(&t) = t.and_then(|s| b_piece.get(&s)) else { continue };
                let power = power as usize;
                for j in power..n {
                    matrix.flip(target.basis_index(t, j - power), source.basis_index(idx, j));
                }
            }
        }
        for (idx, block, summand) in reduced_pieces {
            let top = summand.u_order - 1;
            let edges = [(block.v_target, &summand.v_image), (block.h_target, &summand.h_image)];
            for (t, image) in edges {
                let Some(&t) = t.and_then(|s| b_piece.get(&s)) else { continue };
                for j in 0..source.pieces()[idx].len {
                    for &r in image.lower((top - j) as u64).indices() {
                        if r < n {
                            matrix.flip(target.basis_index(t, r), source.basis_index(idx, j));
                        }
                    }
                }
            }
        }
        Ok(BlockMap { source, target, matrix })
    }

    pub fn ranks(&self) -> Result<RankRecord, ConeError> {
        let ranks = parity_ranks(&self.boundary_map()?)?;
        Ok(RankRecord { half_window: self.half_window, depth: self.depth, ranks })
    }

    /// Summary from this depth and `DEPTH_STEP` deeper.
    fn summary_pair(&self) -> Result<(HFPlusSummary, [RankRecord; 2]), ConeError> {
        let low = self.ranks()?;
        let high = self.enlarged(0, DEPTH_STEP).ranks()?;
        let summary = self.summarize(&low, &high)?;
        Ok((summary, [low, high]))
    }

    fn summarize(&self, low: &RankRecord, high: &RankRecord) -> Result<HFPlusSummary, ConeError> {
        let step = high.depth - low.depth;
        // (towers, finite part) from dimensions at two depths
        let split = |lo: usize, hi: usize, keep_constant: bool| -> Result<(usize, usize), ConeError> {
            let err = ConeError::DepthCount { low: lo, high: hi, step };
            if hi < lo || (hi - lo) % step != 0 {
                return Err(err);
            }
            let towers = (hi - lo) / step;
            let constant = lo.checked_sub(towers * low.depth).ok_or(err)?;
            Ok((towers, if keep_constant { constant } else { 0 }))
        };
        let (lo, hi) = (&low.ranks, &high.ranks);
        let (tk_even, k_even) = split(lo.kernel_even, hi.kernel_even, true)?;
        let (tk_odd, k_odd) = split(lo.kernel_odd, hi.kernel_odd, true)?;
        let (tc_even, _) = split(lo.cokernel_even, hi.cokernel_even, false)?;
        let (tc_odd, _) = split(lo.cokernel_odd, hi.cokernel_odd, false)?;

        // rational surgery keeps the A parity, zero surgery reverses it
        let (reduced_even, reduced_odd) = match self.kind {
            ConeKind::Rational { .. } => (k_even, k_odd),
            ConeKind::Zero { .. } => (k_odd, k_even),
        };
        Ok(HFPlusSummary {
            tower_count: tk_even + tk_odd + tc_even + tc_odd,
            reduced_even,
            reduced_odd,
            euler_char_red: reduced_even as i64 - reduced_odd as i64,
        })
    }

    /// Homology with the full diagnostic record, including the stability rerun.
    pub fn homology_dump(&self) -> Result<ConeDump, ConeError> {
        let (first, first_ranks) = self.summary_pair()?;
        let wider = self.enlarged(WINDOW_STEP, DEPTH_STEP);
        let (second, second_ranks) = wider.summary_pair()?;
        if first != second {
            return Err(ConeError::Unstable {
                first: Box::new(first),
                first_window: self.half_window,
                first_depth: self.depth,
                second: Box::new(second),
                second_window: wider.half_window,
                second_depth: wider.depth,
            });
        }
        log::debug!("cone {:?}: {:?}", self.kind, first);
        Ok(ConeDump {
            kind: self.kind,
            s_window: self.s_window(),
            depth: self.depth,
            blocks: self.blocks()?,
            ranks: first_ranks.into_iter().chain(second_ranks).collect(),
            summary: first,
        })
    }
}

/// Ranks and parities of the cone's homology.
pub fn cone_homology(cone: &MappingCone) -> Result<HFPlusSummary, ConeError> {
    cone.homology_dump().map(|d| d.summary)
}

/// `HF^+` of zero surgery in Spin^c structure `i`.
///
/// For `i = 0` this reports two towers; see [`zero_surgery_inequality`] for
/// the constraint available there.
pub fn zero_surgery_homology(model: &KnotModel, i: i64) -> Result<HFPlusSummary, ConeError> {
    cone_homology(&build_zero_surgery_cone(model, i)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::TowerElement;
    use crate::knotdata::{build_model, parse_knot_record, validate_record, ExplicitData, RecordFormat, Tier};

    pub(crate) fn lspace_model(line: &str) -> KnotModel {
        let rec = parse_knot_record(line, RecordFormat::Csv).unwrap();
        build_model(&validate_record(&rec).unwrap(), Tier::LSpaceTier, None).unwrap()
    }

    pub(crate) fn unknot() -> KnotModel {
        lspace_model("unknot,1,0,0,true,true,")
    }

    pub(crate) fn trefoil() -> KnotModel {
        lspace_model("3_1,-1;1,1,1,false,true,1:0")
    }

    fn t25() -> KnotModel {
        lspace_model("T2_5,1;-1;1,2,2,false,true,1:0")
    }

    fn slope(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn slope_parsing() {
        assert_eq!("5/2".parse::<Slope>().unwrap(), slope(5, 2));
        assert_eq!("-3".parse::<Slope>().unwrap(), slope(-3, 1));
        for bad in ["0", "0/1", "2/4", "1/0", "1/-2", "x", "1/2/3"] {
            assert!(bad.parse::<Slope>().is_err(), "{bad}");
        }
        assert_eq!(slope(-3, 2).to_string(), "-3/2");
    }

    #[test]
    fn spinc_level_examples() {
        assert_eq!(spinc_level(0, slope(1, 1), 3), 3);
        assert_eq!(spinc_level(1, slope(5, 2), -1), -2);
        assert_eq!(spinc_level(2, slope(3, 2), -1), -1);
    }

    #[test]
    fn trefoil_blocks_follow_vh() {
        let cone = build_surgery_cone(&trefoil(), slope(1, 1), 0).unwrap();
        for block in cone.blocks().unwrap() {
            assert_eq!(block.k, block.s);
            assert_eq!(block.v_power, trefoil().vh.v(block.s).unwrap());
            assert_eq!(block.h_power, trefoil().vh.h(block.s).unwrap());
        }
        let cone = build_surgery_cone(&trefoil(), slope(5, 2), 1).unwrap();
        for block in cone.blocks().unwrap() {
            assert_eq!(block.k, (1 + 5 * block.s).div_euclid(2));
        }
    }

    #[test]
    fn unknot_cones_have_flat_powers_at_the_edges() {
        for i in 0..3 {
            let cone = build_surgery_cone(&unknot(), slope(3, 1), i).unwrap();
            for block in cone.blocks().unwrap() {
                if block.k >= 0 {
                    assert_eq!(block.v_power, 0);
                }
                if block.k <= 0 {
                    assert_eq!(block.h_power, 0);
                }
            }
        }
    }

    #[test]
    fn boundary_map_is_equivariant() {
        let cone = build_surgery_cone(&t25(), slope(3, 2), 1).unwrap();
        assert!(cone.boundary_map().unwrap().is_u_equivariant());
    }

    #[test]
    fn unknot_gives_lens_spaces() {
        for (p, q) in [(1, 1), (2, 1), (3, 1), (5, 2), (7, 3)] {
            for i in 0..p {
                let s = cone_homology(&build_surgery_cone(&unknot(), slope(p, q), i).unwrap()).unwrap();
                assert_eq!(s, HFPlusSummary { tower_count: 1, reduced_even: 0, reduced_odd: 0, euler_char_red: 0 });
            }
        }
    }

    #[test]
    fn trefoil_surgeries_are_l_spaces() {
        // +1 surgery is the Poincaré sphere; p >= 2g - 1 = 1 gives L-spaces
        let s = cone_homology(&build_surgery_cone(&trefoil(), slope(1, 1), 0).unwrap()).unwrap();
        assert_eq!((s.tower_count, s.reduced_rank()), (1, 0));
        for i in 0..5 {
            let s = cone_homology(&build_surgery_cone(&trefoil(), slope(5, 1), i).unwrap()).unwrap();
            assert_eq!((s.tower_count, s.reduced_rank()), (1, 0));
        }
    }

    #[test]
    fn t25_small_surgery_has_even_reduced_part() {
        // +1 surgery on T(2,5) is -Σ(2,5,9)... with V_0 = V_1 = 1 the cone has rank-2 HF_red
        let s = cone_homology(&build_surgery_cone(&t25(), slope(1, 1), 0).unwrap()).unwrap();
        assert_eq!(s, HFPlusSummary { tower_count: 1, reduced_even: 2, reduced_odd: 0, euler_char_red: 2 });
        let s = cone_homology(&build_surgery_cone(&t25(), slope(3, 1), 0).unwrap()).unwrap();
        assert_eq!(s.reduced_rank(), 0);
    }

    #[test]
    fn zero_surgery_examples() {
        let trefoil = trefoil();
        let s = zero_surgery_homology(&trefoil, 1).unwrap();
        assert_eq!(s, HFPlusSummary { tower_count: 0, reduced_even: 0, reduced_odd: 0, euler_char_red: 0 });
        assert_eq!(zero_surgery_homology(&unknot(), 1).unwrap().reduced_rank(), 0);
        let s = zero_surgery_homology(&trefoil, 0).unwrap();
        assert_eq!(s.tower_count, 2);

        // T(2,7): t = (2, 1, 1)
        let t27 = lspace_model("T2_7,-1;1;-1;1,3,3,false,true,1:0");
        for i in [1, 2, -2] {
            let s = zero_surgery_homology(&t27, i).unwrap();
            assert_eq!(s.tower_count, 0);
            assert_eq!(s.euler_char_red, -t27.knot.alexander().torsion_coefficient(i));
        }
        let s = zero_surgery_homology(&t27, 2).unwrap();
        assert_eq!((s.reduced_even, s.reduced_odd), (0, 1));
    }

    #[test]
    fn reduced_summand_in_kernel_keeps_parity() {
        let fig8 = validate_record(&parse_knot_record("4_1,3;-1,1,1,false,true,0:1", RecordFormat::Csv).unwrap()).unwrap();
        let json = r#"{"window":[-3,3],"V":{"-3":3,"-2":2,"-1":1,"0":0,"1":0,"2":0,"3":0},
            "reduced":[{"k":0,"rank":1,"parity":"odd","u_order":1}]}"#;
        let model = build_model(&fig8, Tier::ExplicitTier, Some(ExplicitData::from_json(json).unwrap())).unwrap();
        let s = cone_homology(&build_surgery_cone(&model, slope(1, 1), 0).unwrap()).unwrap();
        assert_eq!((s.tower_count, s.reduced_even, s.reduced_odd), (1, 0, 1));
        let s = zero_surgery_homology(&model, 0).unwrap();
        assert_eq!((s.tower_count, s.reduced_even, s.reduced_odd), (2, 1, 0));

        // an even summand whose top maps to the tower bottom under v
        let mut even = model.clone();
        let mut summand = ReducedSummand::new(1, Parity::Even, 2);
        summand.v_image = TowerElement::from_indices([0]);
        even.reduced.insert(0, vec![summand]);
        let s = cone_homology(&build_surgery_cone(&even, slope(1, 1), 0).unwrap()).unwrap();
        assert_eq!(s.tower_count, 1);
        assert_eq!(s.reduced_odd, 0);
    }

    #[test]
    fn enlargement_preserves_summary() {
        let cone = build_surgery_cone(&t25(), slope(2, 3), 1).unwrap();
        let wider = cone.enlarged(2, 4);
        assert_eq!(cone_homology(&cone).unwrap(), cone_homology(&wider).unwrap());
        let dump = cone.homology_dump().unwrap();
        assert_eq!(dump.ranks.len(), 4);
        let json = serde_json::to_value(&dump).unwrap();
        assert_eq!(json["kind"], "rational");
        assert_eq!(json["slope"], "2/3");
    }

    #[test]
    fn invalid_requests() {
        assert!(matches!(build_surgery_cone(&unknot(), slope(-1, 1), 0), Err(ConeError::NonPositiveSlope(_))));
        assert!(matches!(
            build_surgery_cone(&unknot(), slope(3, 1), 3),
            Err(ConeError::SpincOutOfRange { i: 3, p: 3 })
        ));
    }
}
