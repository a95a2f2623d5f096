//! Explicit preimages under the tower part `D^T` of the surgery differential.
//!
//! Towers here are untruncated: an element of `T^+` is a finite set of levels,
//! and `U^{-n}` is the canonical lift that shifts every level up by `n`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{build_surgery_cone, spinc_level, ConeError, Slope};
use crate::graded::TowerElement;
use crate::knotdata::KnotModel;
use crate::vh::VhSequence;

/// A finitely supported element of `⊕_s T^+`, keyed by `s`.
pub type TowerChain = BTreeMap<i64, TowerElement>;

const MAX_STEPS: i64 = 1 << 16;

fn add_into(chain: &mut TowerChain, s: i64, x: &TowerElement) {
    if x.is_zero() {
        return;
    }
    let sum = chain.get(&s).map_or_else(|| x.clone(), |y| y.add(x));
    if sum.is_zero() {
        chain.remove(&s);
    } else {
        chain.insert(s, sum);
    }
}

/// `D^T(ξ)`: each `ξ_s` contributes `U^{V_k(s)} ξ_s` to `B_s` and `U^{H_k(s)} ξ_s` to `B_{s+1}`.
pub fn apply_tower_differential(
    vh: &VhSequence,
    slope: Slope,
    i: i64,
    xi: &TowerChain,
) -> Result<TowerChain, ConeError> {
    let mut out = TowerChain::new();
    for (&s, x) in xi {
        let k = spinc_level(i, slope, s);
        add_into(&mut out, s, &x.lower(vh.v(k)?));
        add_into(&mut out, s + 1, &x.lower(vh.h(k)?));
    }
    Ok(out)
}

/// Solves `D^T(ξ) = η` by the two-sided recursion starting from `ξ_0 = 0`.
///
/// Going down, `ξ_{s} = U^{-H_k(s)}(η_{s+1} + U^{V_k(s+1)} ξ_{s+1})`; going up,
/// `ξ_s = U^{-V_k(s)}(η_s + U^{H_k(s-1)} ξ_{s-1})`. Both sides die out because
/// the powers grow without bound away from the middle.
pub fn surjectivity_witness(
    vh: &VhSequence,
    slope: Slope,
    i: i64,
    eta: &TowerChain,
) -> Result<TowerChain, ConeError> {
    if !slope.is_positive() {
        return Err(ConeError::NonPositiveSlope(slope));
    }
    let eta: TowerChain = eta.iter().filter(|(_, x)| !x.is_zero()).map(|(s, x)| (*s, x.clone())).collect();
    let (Some(&lo), Some(&hi)) = (eta.keys().next(), eta.keys().next_back()) else {
        return Ok(TowerChain::new());
    };
    let at = |s: i64| eta.get(&s).cloned().unwrap_or_default();
    let level = |s: i64| spinc_level(i, slope, s);
    let mut xi = TowerChain::new();

    // downward from ξ_0 = 0
    let mut prev = TowerElement::zero();
    let mut s = -1;
    loop {
        let x = at(s + 1).add(&prev.lower(vh.v(level(s + 1))?)).raise(vh.h(level(s))?);
        if x.is_zero() && s < lo {
            break;
        }
        add_into(&mut xi, s, &x);
        prev = x;
        s -= 1;
        if s < lo - MAX_STEPS {
            return Err(ConeError::Surjectivity(format!("downward recursion still alive at s = {s}")));
        }
    }

    let mut prev = TowerElement::zero();
    let mut s = 1;
    loop {
        let x = at(s).add(&prev.lower(vh.h(level(s - 1))?)).raise(vh.v(level(s))?);
        if x.is_zero() && s > hi {
            break;
        }
        add_into(&mut xi, s, &x);
        prev = x;
        s += 1;
        if s > hi + MAX_STEPS {
            return Err(ConeError::Surjectivity(format!("upward recursion still alive at s = {s}")));
        }
    }

    let image = apply_tower_differential(vh, slope, i, &xi)?;
    if image != eta {
        return Err(ConeError::Surjectivity(format!("D(ξ) = {image:?} differs from η = {eta:?}")));
    }
    Ok(xi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    /// Basis elements of the truncated B-side that were hit exactly.
    pub checked: usize,
    /// Largest `|s|` in the support of any witness.
    pub max_support: i64,
}

/// Finds and verifies a preimage for every basis element of the B-blocks the
/// truncated cone touches, `B_{-b} ..= B_{b+1}`.
pub fn check_dt_surjective(model: &KnotModel, slope: Slope, i: i64) -> Result<SurjectivityReport, ConeError> {
    let cone = build_surgery_cone(model, slope, i)?;
    let [lo, hi] = cone.s_window();
    let mut report = SurjectivityReport { checked: 0, max_support: 0 };
    for s in lo..=hi + 1 {
        for j in 0..cone.depth() {
            let eta = TowerChain::from([(s, TowerElement::from_indices([j]))]);
            let xi = surjectivity_witness(&model.vh, slope, i, &eta)?;
            report.checked += 1;
            let support = xi.keys().map(|s| s.abs()).max().unwrap_or(0);
            report.max_support = report.max_support.max(support);
        }
    }
    Ok(report)
}
