//! The `V_k` / `H_k` sequences measuring how the vertical and horizontal maps
//! act on the tower part of `H_*(A_k^+)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alexander::AlexanderPolynomial;

/// Extra levels kept on each side of `[-g*, g*]`.
pub const WINDOW_MARGIN: i64 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VhError {
    #[error("window [{0}, {1}] must be nonempty and symmetric about 0")]
    BadWindow(i64, i64),
    #[error("expected {expected} values for the window, got {got}")]
    Length { expected: usize, got: usize },
    #[error("V is missing level {0}")]
    MissingLevel(i64),
    #[error("torsion coefficient t_{i} = {value} is negative")]
    NegativeTorsion { i: usize, value: i64 },
    #[error("torsion coefficients do not form a staircase: t_{i} - t_{next} = {step}", next = i + 1)]
    NotStaircase { i: usize, step: i64 },
    #[error("level {0} lies outside the window and the data cannot be auto-extended")]
    NotExtendable(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum VhViolation {
    Symmetry { k: i64 },
    Monotonicity { k: i64 },
    SliceBound { k: i64, bound: i64 },
    CenterMismatch,
    Ordering { k: i64 },
    Vanishing { k: i64 },
    Window,
}

impl fmt::Display for VhViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VhViolation::Symmetry { k } => write!(f, "H_{k} != V_{}", -k),
            VhViolation::Monotonicity { k } => {
                write!(f, "monotonicity fails at k={k}: need V_{k} <= V_{} <= V_{k} + 1", k - 1)
            }
            VhViolation::SliceBound { k, bound } => {
                write!(f, "V_{k} exceeds max(0, g* - k) = {bound}")
            }
            VhViolation::CenterMismatch => f.write_str("V_0 != H_0"),
            VhViolation::Ordering { k } if *k < 0 => write!(f, "need V_{k} > H_{k}"),
            VhViolation::Ordering { k } => write!(f, "need V_{k} < H_{k}"),
            VhViolation::Vanishing { k } if *k >= 0 => write!(f, "V_{k} must vanish for k >= g*"),
            VhViolation::Vanishing { k } => write!(f, "H_{k} must vanish for k <= -g*"),
            VhViolation::Window => f.write_str("window must be nonempty and symmetric about 0"),
        }
    }
}

/// `V_k` and `H_k` over a finite window `[k_min, k_max]`.
///
/// Outside the window the sequences continue with `V_k = 0` above and unit
/// growth below (and the mirror statement for `H`). That continuation is only
/// offered when the window edges already sit in that regime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VhSequence {
    k_min: i64,
    k_max: i64,
    v: Vec<u64>,
    h: Vec<u64>,
}

impl VhSequence {
    pub fn new(k_min: i64, k_max: i64, v: Vec<u64>, h: Vec<u64>) -> Result<Self, VhError> {
        if k_min > k_max {
            return Err(VhError::BadWindow(k_min, k_max));
        }
        let expected = (k_max - k_min + 1) as usize;
        for got in [v.len(), h.len()] {
            if got != expected {
                return Err(VhError::Length { expected, got });
            }
        }
        Ok(Self { k_min, k_max, v, h })
    }

    /// Builds the sequence from `V` on a symmetric window, completing `H_k = V_{-k}`.
    pub fn from_v(half_width: i64, v: Vec<u64>) -> Result<Self, VhError> {
        let h = v.iter().rev().copied().collect();
        Self::new(-half_width, half_width, v, h)
    }

    /// The sequences of the unknot, `V_k = max(0, -k)` and `H_k = max(0, k)`.
    pub fn trivial(half_width: i64) -> Self {
        let v = (-half_width..=half_width).map(|k| (-k).max(0) as u64).collect();
        Self::from_v(half_width, v).expect("window is symmetric")
    }

    pub fn window(&self) -> (i64, i64) {
        (self.k_min, self.k_max)
    }

    pub fn contains(&self, k: i64) -> bool {
        (self.k_min..=self.k_max).contains(&k)
    }

    fn index(&self, k: i64) -> usize {
        (k - self.k_min) as usize
    }

    /// `V_k` inside the window.
    pub fn v_in_window(&self, k: i64) -> Option<u64> {
        self.contains(k).then(|| self.v[self.index(k)])
    }

    pub fn h_in_window(&self, k: i64) -> Option<u64> {
        self.contains(k).then(|| self.h[self.index(k)])
    }

    fn extendable_above(&self) -> bool {
        let top = self.v.len() - 1;
        self.v[top] == 0 && top >= 1 && self.h[top] == self.h[top - 1] + 1
    }

    fn extendable_below(&self) -> bool {
        self.h[0] == 0 && self.v.len() >= 2 && self.v[0] == self.v[1] + 1
    }

    /// `V_k` for any level, continuing past the window when that is sound.
    pub fn v(&self, k: i64) -> Result<u64, VhError> {
        if let Some(v) = self.v_in_window(k) {
            Ok(v)
        } else if k > self.k_max && self.extendable_above() {
            Ok(0)
        } else if k < self.k_min && self.extendable_below() {
            Ok(self.v[0] + (self.k_min - k) as u64)
        } else {
            Err(VhError::NotExtendable(k))
        }
    }

    /// `H_k` for any level, continuing past the window when that is sound.
    pub fn h(&self, k: i64) -> Result<u64, VhError> {
        let top = self.h.len() - 1;
        if let Some(h) = self.h_in_window(k) {
            Ok(h)
        } else if k < self.k_min && self.extendable_below() {
            Ok(0)
        } else if k > self.k_max && self.extendable_above() {
            Ok(self.h[top] + (k - self.k_max) as u64)
        } else {
            Err(VhError::NotExtendable(k))
        }
    }

    /// Smallest `n >= 0` with `V_k = 0` for every `k >= n`.
    pub fn v_vanishing_level(&self) -> i64 {
        (0..=self.k_max)
            .rev()
            .find(|&k| self.v_in_window(k) != Some(0))
            .map_or(0, |k| k + 1)
    }

    /// Smallest `n >= 0` with `H_k = 0` for every `k <= -n`.
    pub fn h_vanishing_level(&self) -> i64 {
        (self.k_min..=0)
            .find(|&k| self.h_in_window(k) != Some(0))
            .map_or(0, |k| -k + 1)
    }

    /// Recomputes `H` from `V` by `H_k = V_{-k}`. Requires a symmetric window.
    pub fn mirror_completed(&self) -> Self {
        let h = self.v.iter().rev().copied().collect();
        Self { h, ..self.clone() }
    }

    /// Same data on a wider symmetric window, filled by the continuation rule.
    pub fn widened(&self, half_width: i64) -> Result<Self, VhError> {
        if half_width <= self.k_max {
            return Ok(self.clone());
        }
        let v = (-half_width..=half_width).map(|k| self.v(k)).collect::<Result<_, _>>()?;
        let h = (-half_width..=half_width).map(|k| self.h(k)).collect::<Result<_, _>>()?;
        Self::new(-half_width, half_width, v, h)
    }

    pub fn to_input(&self) -> VhInput {
        let levels = self.k_min..=self.k_max;
        VhInput {
            window: [self.k_min, self.k_max],
            v: levels.clone().zip(self.v.iter().copied()).collect(),
            h: Some(levels.zip(self.h.iter().copied()).collect()),
        }
    }
}

/// JSON form: `{"window":[kmin,kmax],"V":{"-1":1,...},"H":{...}}` with `H` optional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VhInput {
    pub window: [i64; 2],
    #[serde(rename = "V")]
    pub v: BTreeMap<i64, u64>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<BTreeMap<i64, u64>>,
}

impl TryFrom<VhInput> for VhSequence {
    type Error = VhError;

    fn try_from(input: VhInput) -> Result<Self, VhError> {
        let [k_min, k_max] = input.window;
        if k_min > k_max || k_min != -k_max {
            return Err(VhError::BadWindow(k_min, k_max));
        }
        let lookup = |map: &BTreeMap<i64, u64>, k: i64| map.get(&k).copied().ok_or(VhError::MissingLevel(k));
        let v: Vec<u64> = (k_min..=k_max).map(|k| lookup(&input.v, k)).collect::<Result<_, _>>()?;
        let h = match &input.h {
            Some(h) => (k_min..=k_max).map(|k| lookup(h, k)).collect::<Result<_, _>>()?,
            None => v.iter().rev().copied().collect(),
        };
        VhSequence::new(k_min, k_max, v, h)
    }
}

/// Checks every structural property of `V`/`H` and returns the full violation list.
pub fn validate_vh(seq: &VhSequence, g_star: Option<u32>) -> Vec<VhViolation> {
    let mut out = Vec::new();
    let (k_min, k_max) = seq.window();
    if k_min != -k_max {
        out.push(VhViolation::Window);
        return out;
    }
    let v = |k| seq.v_in_window(k).unwrap() as i64;
    let h = |k| seq.h_in_window(k).unwrap() as i64;

    for k in k_min..=k_max {
        if h(k) != v(-k) {
            out.push(VhViolation::Symmetry { k });
        }
    }
    for k in 1..=k_max {
        if !(v(k) <= v(k - 1) && v(k - 1) <= v(k) + 1) {
            out.push(VhViolation::Monotonicity { k });
        }
    }
    if v(0) != h(0) {
        out.push(VhViolation::CenterMismatch);
    }
    for k in k_min..=k_max {
        if (k < 0 && v(k) <= h(k)) || (k > 0 && v(k) >= h(k)) {
            out.push(VhViolation::Ordering { k });
        }
    }
    if let Some(g) = g_star {
        let g = g as i64;
        for k in k_min..=k_max {
            let bound = (g - k).max(0);
            if v(k) > bound {
                out.push(VhViolation::SliceBound { k, bound });
            }
        }
        for k in k_min..=k_max {
            if k >= g && v(k) != 0 {
                out.push(VhViolation::Vanishing { k });
            }
            if k <= -g && k < 0 && h(k) != 0 {
                out.push(VhViolation::Vanishing { k });
            }
        }
    }
    out
}

/// Default half-width of the `V`/`H` window for slice genus `g*`.
pub fn default_half_width(g_star: u32) -> i64 {
    (g_star as i64 + WINDOW_MARGIN).max(2)
}

/// `V`/`H` of an L-space knot with Alexander polynomial `delta`.
///
/// Uses `V_k = t_k` and `H_k = V_k + k` for `k >= 0`, then `H_{-k} = V_k`
/// and `V_{-k} = H_k`. The torsion coefficients must be non-negative and
/// drop by at most one per step.
pub fn lspace_vh(delta: &AlexanderPolynomial, half_width: i64) -> Result<VhSequence, VhError> {
    let profile = delta.torsion_profile();
    if let Some((i, &value)) = profile.values.iter().enumerate().find(|(_, &t)| t < 0) {
        return Err(VhError::NegativeTorsion { i, value });
    }
    for i in 0..profile.values.len() {
        let step = profile.get(i as i64) - profile.get(i as i64 + 1);
        if !(0..=1).contains(&step) {
            return Err(VhError::NotStaircase { i, step });
        }
    }
    let half_width = half_width.max(delta.degree() as i64 + 1).max(2);
    let v_nonneg = |k: i64| profile.get(k) as u64;
    let v = (-half_width..=half_width)
        .map(|k| if k >= 0 { v_nonneg(k) } else { v_nonneg(-k) + (-k) as u64 })
        .collect();
    VhSequence::from_v(half_width, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(half: i64, v: &[u64]) -> VhSequence {
        VhSequence::from_v(half, v.to_vec()).unwrap()
    }

    #[test]
    fn unknot_passes() {
        let s = VhSequence::trivial(3);
        assert!(validate_vh(&s, Some(0)).is_empty());
        assert_eq!(s.v(-10).unwrap(), 10);
        assert_eq!(s.h(10).unwrap(), 10);
        assert_eq!(s.v(10).unwrap(), 0);
    }

    #[test]
    fn trefoil_passes() {
        let s = seq(2, &[2, 1, 1, 0, 0]);
        assert!(validate_vh(&s, Some(1)).is_empty());
        assert_eq!(s.h_in_window(1), Some(1));
        assert_eq!(s.v_in_window(-1), Some(1));
    }

    #[test]
    fn monotonicity_violation() {
        // V_0 = 0, V_1 = 1
        let s = seq(1, &[1, 0, 1]);
        let v = validate_vh(&s, None);
        assert!(v.contains(&VhViolation::Monotonicity { k: 1 }));
    }

    #[test]
    fn slice_bound_and_vanishing() {
        let s = seq(2, &[2, 1, 1, 0, 0]);
        let v = validate_vh(&s, Some(0));
        assert!(v.contains(&VhViolation::SliceBound { k: 0, bound: 0 }));
        assert!(v.contains(&VhViolation::Vanishing { k: 0 }));
        let s = seq(2, &[3, 2, 1, 1, 0]);
        assert!(validate_vh(&s, Some(1)).contains(&VhViolation::Vanishing { k: -1 }));
    }

    #[test]
    fn explicit_h_symmetry_checked() {
        let s = VhSequence::new(-1, 1, vec![1, 0, 0], vec![0, 0, 0]).unwrap();
        let v = validate_vh(&s, None);
        assert!(v.contains(&VhViolation::Symmetry { k: 1 }));
        assert!(v.contains(&VhViolation::Ordering { k: 1 }));
    }

    #[test]
    fn asymmetric_window_rejected() {
        let s = VhSequence::new(-1, 2, vec![1, 0, 0, 0], vec![0, 0, 1, 2]).unwrap();
        assert_eq!(validate_vh(&s, None), vec![VhViolation::Window]);
    }

    #[test]
    fn lspace_examples() {
        let trefoil = AlexanderPolynomial::normalize(&[-1, 1]).unwrap();
        let s = lspace_vh(&trefoil, 5).unwrap();
        assert_eq!(s.v(0).unwrap(), 1);
        assert_eq!(s.v(1).unwrap(), 0);
        assert_eq!(s.h(1).unwrap(), 1);
        assert_eq!(s.v(-1).unwrap(), 1);

        let s = lspace_vh(&AlexanderPolynomial::unknot(), 3).unwrap();
        assert_eq!(s, VhSequence::trivial(3));

        let t25 = AlexanderPolynomial::normalize(&[1, -1, 1]).unwrap();
        let s = lspace_vh(&t25, 6).unwrap();
        assert_eq!((s.v(0).unwrap(), s.v(1).unwrap(), s.v(2).unwrap()), (1, 1, 0));
        assert!(validate_vh(&s, Some(2)).is_empty());
    }

    #[test]
    fn lspace_rejects_negative_and_non_staircase() {
        let fig8 = AlexanderPolynomial::normalize(&[3, -1]).unwrap();
        assert!(matches!(lspace_vh(&fig8, 5), Err(VhError::NegativeTorsion { i: 0, value: -1 })));
        // t = (2, 0): drops by two
        let p = AlexanderPolynomial::normalize(&[-3, 2]).unwrap();
        assert!(matches!(lspace_vh(&p, 5), Err(VhError::NotStaircase { .. })));
    }

    #[test]
    fn mirror_completion_is_involutive() {
        let s = seq(2, &[2, 1, 1, 0, 0]);
        assert_eq!(s.mirror_completed().mirror_completed(), s.mirror_completed());
        assert_eq!(s.mirror_completed(), s);
    }

    #[test]
    fn extension_refused_at_ragged_edge() {
        // V_1 = 1 at the top of the window: cannot assume vanishing beyond
        let s = seq(1, &[2, 1, 1]);
        assert_eq!(s.v(2), Err(VhError::NotExtendable(2)));
    }

    #[test]
    fn widen_matches_direct_construction() {
        let t25 = AlexanderPolynomial::normalize(&[1, -1, 1]).unwrap();
        let narrow = lspace_vh(&t25, 3).unwrap();
        let wide = lspace_vh(&t25, 9).unwrap();
        assert_eq!(narrow.widened(9).unwrap(), wide);
        assert_eq!(narrow.v_vanishing_level(), 2);
        assert_eq!(narrow.h_vanishing_level(), 2);
    }

    #[test]
    fn json_input_completes_h() {
        let input: VhInput =
            serde_json::from_str(r#"{"window":[-2,2],"V":{"-2":2,"-1":1,"0":1,"1":0,"2":0}}"#).unwrap();
        let s = VhSequence::try_from(input).unwrap();
        assert_eq!(s, seq(2, &[2, 1, 1, 0, 0]));
        let back = VhSequence::try_from(s.to_input()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn strict_growth_below_slice_genus() {
        let t25 = AlexanderPolynomial::normalize(&[1, -1, 1]).unwrap();
        let s = lspace_vh(&t25, 6).unwrap();
        for k in -6..=-2 {
            assert!(s.v(k - 1).unwrap() > s.v(k).unwrap());
        }
    }
}
