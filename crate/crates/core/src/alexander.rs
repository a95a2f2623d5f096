//! Symmetrized Alexander polynomials and their torsion coefficients.
//!
//! A symmetric Laurent polynomial `a_0 + sum_{i>0} a_i (T^i + T^-i)` is stored
//! as the half-vector `[a_0, a_1, ..., a_d]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlexanderError {
    #[error("Alexander polynomial has no coefficients")]
    Empty,
    #[error("Alexander polynomial not ±1 at T=1 (value {0})")]
    BadNormalization(i64),
}

/// Symmetrized Alexander polynomial normalized so that `Δ(1) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlexanderPolynomial {
    coeffs: Vec<i64>,
}

/// Evaluates the symmetric half-vector at `T = 1`.
pub fn value_at_one(raw: &[i64]) -> i64 {
    match raw.split_first() {
        None => 0,
        Some((a0, rest)) => a0 + 2 * rest.iter().sum::<i64>(),
    }
}

impl AlexanderPolynomial {
    /// Strips trailing zeros and fixes the overall sign so that `Δ(1) = 1`.
    pub fn normalize(raw: &[i64]) -> Result<Self, AlexanderError> {
        if raw.is_empty() {
            return Err(AlexanderError::Empty);
        }
        let mut coeffs = raw.to_vec();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        match value_at_one(&coeffs) {
            1 => {}
            -1 => coeffs.iter_mut().for_each(|a| *a = -*a),
            v => return Err(AlexanderError::BadNormalization(v)),
        }
        Ok(Self { coeffs })
    }

    pub fn unknot() -> Self {
        Self { coeffs: vec![1] }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `T^i` (and of `T^-i`).
    pub fn coeff(&self, i: i64) -> i64 {
        self.coeffs.get(i.unsigned_abs() as usize).copied().unwrap_or(0)
    }

    /// The full Laurent coefficient list for `T^-d ..= T^d`.
    pub fn laurent(&self) -> Vec<i64> {
        let d = self.degree() as i64;
        (-d..=d).map(|i| self.coeff(i)).collect()
    }

    pub fn eval_at_one(&self) -> i64 {
        value_at_one(&self.coeffs)
    }

    /// `t_i = sum_{j>=1} j * a_{|i|+j}`.
    pub fn torsion_coefficient(&self, i: i64) -> i64 {
        let i = i.unsigned_abs() as usize;
        if i >= self.degree() {
            return 0;
        }
        self.torsion_values()[i]
    }

    /// `t_0 ..= t_{d-1}` in one reverse pass.
    ///
    /// Uses `t_{i-1} - t_i = sum_{j>=i} a_j`, so a running suffix sum of the
    /// coefficients gives each step.
    fn torsion_values(&self) -> Vec<i64> {
        let d = self.degree();
        let mut values = vec![0i64; d];
        let mut suffix = 0i64;
        let mut t = 0i64;
        for i in (1..=d).rev() {
            suffix += self.coeffs[i];
            t += suffix;
            values[i - 1] = t;
        }
        values
    }

    pub fn torsion_profile(&self) -> TorsionProfile {
        let values = self.torsion_values();
        TorsionProfile {
            has_positive: values.iter().any(|&t| t > 0),
            has_negative: values.iter().any(|&t| t < 0),
            values,
        }
    }
}

impl fmt::Display for AlexanderPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(";"))
    }
}

/// Torsion coefficients `t_0 ..= t_{d-1}`; all higher ones vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionProfile {
    pub values: Vec<i64>,
    pub has_positive: bool,
    pub has_negative: bool,
}

impl TorsionProfile {
    pub fn get(&self, i: i64) -> i64 {
        self.values
            .get(i.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0)
    }

    pub fn mixed_signs(&self) -> bool {
        self.has_positive && self.has_negative
    }
}

/// Ranks of knot Floer homology in the top Alexander grading, split by the
/// parity of the Maslov grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HfkTop {
    pub even: u64,
    pub odd: u64,
}

impl HfkTop {
    pub fn euler_characteristic(&self) -> i64 {
        self.even as i64 - self.odd as i64
    }

    pub fn is_trivial(&self) -> bool {
        self.even == 0 && self.odd == 0
    }
}

/// Checks top-grading knot Floer data against the genus and `Δ`.
///
/// The top group must be nonzero, and its Euler characteristic must equal the
/// coefficient `a_g` (which is zero when `deg Δ < g`).
pub fn hfk_consistency(delta: &AlexanderPolynomial, genus: u32, top: HfkTop) -> Vec<String> {
    let mut violations = Vec::new();
    if top.is_trivial() {
        violations.push("HFK at top grading must be nontrivial".to_string());
    }
    let degree = delta.degree();
    if degree <= genus as usize {
        let expected = delta.coeff(genus as i64);
        let chi = top.euler_characteristic();
        if chi != expected {
            violations.push(format!(
                "HFK Euler characteristic at top grading is {chi}, expected a_{genus} = {expected}"
            ));
        }
    }
    violations
}
