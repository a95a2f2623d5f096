//! Exact Heegaard Floer surgery invariants and obstructions to Seifert fibered
//! surgeries on knots in the 3-sphere.
//!
//! Everything is integer or rational arithmetic over `F_2` matrices; nothing
//! is approximated.

pub mod alexander;
pub mod cli;
pub mod cone;
pub mod f2;
pub mod graded;
pub mod knotdata;
pub mod obstruct;
pub mod vh;

pub use alexander::{AlexanderPolynomial, HfkTop, TorsionProfile};
pub use cone::{
    build_surgery_cone, build_zero_surgery_cone, check_dt_surjective, cone_homology, lens_d, slice_zero_surgery_halves,
    spinc_level, surgery_d, zero_surgery_homology, ConeError, HFPlusSummary, MappingCone, Slope,
};
pub use knotdata::{
    build_model, parse_knot_record, validate_record, ExplicitData, KnotModel, KnotRecord, RecordFormat, Tier,
    ValidatedKnot,
};
pub use obstruct::{
    check_negative_sf, check_positive_sf, four_ball_genus_obstruction, sf_window, slice_obstruction, verdict_at,
    Exclusion, GlobalVerdict, ObstructionReport, Orientation, Verdict,
};
pub use vh::{lspace_vh, validate_vh, VhSequence};
