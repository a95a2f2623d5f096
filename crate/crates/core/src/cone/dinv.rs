//! Correction terms from closed formulas.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use super::{zero_surgery_homology, ConeError, Slope};
use crate::knotdata::KnotModel;

/// `d(L(p,q), i)` by the reciprocity recursion, ending at `d(L(1,0), 0) = 0`.
///
/// `q` may exceed `p`; the recursion handles it without reduction.
pub fn lens_d(p: i64, q: i64, i: i64) -> Result<Ratio<i64>, ConeError> {
    if p <= 0 || q < 0 || p.gcd(&q) != 1 {
        return Err(ConeError::BadSlope(format!("{p}/{q}")));
    }
    if !(0..p).contains(&i) {
        return Err(ConeError::SpincOutOfRange { i, p });
    }
    Ok(lens_d_unchecked(p, q, i))
}

fn lens_d_unchecked(p: i64, q: i64, i: i64) -> Ratio<i64> {
    if p == 1 {
        return Ratio::from_integer(0);
    }
    let c = 2 * i + 1 - p - q;
    Ratio::new(c * c - p * q, 4 * p * q) - lens_d_unchecked(q, p % q, i % q)
}

/// `d(S^3_{p/q}(K), i) = d(L(p,q), i) - 2 max(V_{floor(i/q)}, H_{floor((i-p)/q)})`.
pub fn surgery_d(model: &KnotModel, slope: Slope, i: i64) -> Result<Ratio<i64>, ConeError> {
    if !slope.is_positive() {
        return Err(ConeError::NonPositiveSlope(slope));
    }
    let (p, q) = (slope.p(), slope.q());
    let lens = lens_d(p, q, i)?;
    let v = model.vh.v(i.div_euclid(q))?;
    let h = model.vh.h((i - p).div_euclid(q))?;
    Ok(lens - Ratio::from_integer(2 * v.max(h) as i64))
}

/// `(d_{1/2}, d_{-1/2})` of zero surgery on a slice knot.
///
/// Both equal their values for `S^1 x S^2` once `V_0 = 0`.
pub fn slice_zero_surgery_halves(model: &KnotModel) -> Result<(Ratio<i64>, Ratio<i64>), ConeError> {
    if !model.knot.is_slice() {
        return Err(ConeError::NotSlice);
    }
    let v0 = model.vh.v(0)?;
    if v0 != 0 {
        return Err(ConeError::SliceV0(v0));
    }
    let plus = Ratio::new(1, 2);
    let minus = Ratio::new(-1, 2);
    assert!(plus - 1 <= minus, "d_1/2 - 1 <= d_-1/2 must hold");
    Ok((plus, minus))
}

/// The Spin^c-zero constraint `χ(HF_red(S^3_0, 0)) >= -t_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ZeroSurgeryBound {
    pub euler_char_red: i64,
    pub lower_bound: i64,
    pub holds: bool,
}

pub fn zero_surgery_inequality(model: &KnotModel) -> Result<ZeroSurgeryBound, ConeError> {
    let summary = zero_surgery_homology(model, 0)?;
    let lower_bound = -model.knot.alexander().torsion_coefficient(0);
    Ok(ZeroSurgeryBound {
        euler_char_red: summary.euler_char_red,
        lower_bound,
        holds: summary.euler_char_red >= lower_bound,
    })
}
