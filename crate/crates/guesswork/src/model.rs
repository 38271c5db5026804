//! Core domain types: Bloch vectors, channels, priors, cost functions,
//! numberings and numbering-valued measurements.
//!
//! Everything here is immutable after construction and validated on
//! construction; invalid inputs are rejected, never repaired. A qubit state is
//! stored as its Bloch vector `r` (the density operator is `(1 + r·s)/2`), so
//! every operator computation in the crate reduces to Euclidean 3-vector
//! arithmetic: the operator norm of `a·1 + v·s` is `|a| + |v|`, and
//! `Tr[(c0·1 + c·s)(1 + r·s)/2] = c0 + c·r`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Per-value validation slack (norms, sums, balance checks).
pub const COORD_TOL: f64 = 1e-12;
/// Slack for aggregate checks such as measurement completeness.
pub const SUM_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("Bloch vector of `{label}` has norm {norm} > 1")]
    BlochNormExceeded { label: String, norm: f64 },
    #[error("{labels} labels but {vectors} vectors")]
    LengthMismatch { labels: usize, vectors: usize },
    #[error("a channel needs at least 2 states, got {0}")]
    TooFewStates(usize),
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
    #[error("invalid cost function: {0}")]
    InvalidCost(String),
    #[error("invalid numbering: {0}")]
    InvalidNumbering(String),
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
}

/// A point of the (closed) Bloch ball, `x² + y² + z² ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ZERO: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &BlochVector) -> BlochVector {
        BlochVector::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    /// Unit vector in the same direction, or `None` for (numerically) zero.
    pub fn normalized(&self) -> Option<BlochVector> {
        let n = self.norm();
        if n <= COORD_TOL {
            None
        } else {
            Some(*self * (1.0 / n))
        }
    }

    /// Componentwise comparison within `tol`.
    pub fn approx_eq(&self, other: &BlochVector, tol: f64) -> bool {
        (self.x - other.x).abs() <= tol
            && (self.y - other.y).abs() <= tol
            && (self.z - other.z).abs() <= tol
    }
}

impl Add for BlochVector {
    type Output = BlochVector;
    fn add(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = BlochVector;
    fn mul(self, rhs: f64) -> BlochVector {
        BlochVector::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

impl Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        BlochVector::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A labeled set of qubit states: the map from alphabet symbols to Bloch
/// vectors. Labels are opaque; all computation uses their positions.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitCqChannel {
    labels: Vec<String>,
    bloch: Vec<BlochVector>,
}

/// Validates raw label and vector lists into a channel.
///
/// Rejects duplicate labels, fewer than two states, mismatched lengths and
/// vectors outside the Bloch ball (norm > 1 + 1e-12).
pub fn validate_channel(
    labels: Vec<String>,
    bloch: Vec<BlochVector>,
) -> Result<QubitCqChannel, ModelError> {
    if labels.len() != bloch.len() {
        return Err(ModelError::LengthMismatch { labels: labels.len(), vectors: bloch.len() });
    }
    if labels.len() < 2 {
        return Err(ModelError::TooFewStates(labels.len()));
    }
    for (i, a) in labels.iter().enumerate() {
        if labels[..i].contains(a) {
            return Err(ModelError::DuplicateLabel(a.clone()));
        }
    }
    for (label, r) in labels.iter().zip(&bloch) {
        let norm = r.norm();
        // !(…) also rejects NaN coordinates.
        if !(norm <= 1.0 + COORD_TOL) {
            return Err(ModelError::BlochNormExceeded { label: label.clone(), norm });
        }
    }
    Ok(QubitCqChannel { labels, bloch })
}

impl QubitCqChannel {
    /// See [`validate_channel`].
    pub fn new(labels: Vec<String>, bloch: Vec<BlochVector>) -> Result<Self, ModelError> {
        validate_channel(labels, bloch)
    }

    /// Alphabet size `|M|`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bloch(&self) -> &[BlochVector] {
        &self.bloch
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The same constellation with every vector replaced by `map(r)`.
    /// Fails if the images leave the Bloch ball.
    pub fn map_bloch(
        &self,
        map: impl FnMut(&BlochVector) -> BlochVector,
    ) -> Result<QubitCqChannel, ModelError> {
        validate_channel(self.labels.clone(), self.bloch.iter().map(map).collect())
    }
}

/// A probability distribution over the channel alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Prior {
    weights: Vec<f64>,
}

impl Prior {
    /// Weights must lie in `[0, 1]` and sum to 1 within 1e-12.
    pub fn new(weights: Vec<f64>) -> Result<Self, ModelError> {
        if weights.is_empty() {
            return Err(ModelError::InvalidPrior("empty weight list".into()));
        }
        for &w in &weights {
            if !w.is_finite() || !(-COORD_TOL..=1.0 + COORD_TOL).contains(&w) {
                return Err(ModelError::InvalidPrior(format!("weight {w} outside [0, 1]")));
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > COORD_TOL {
            return Err(ModelError::InvalidPrior(format!("weights sum to {total}, not 1")));
        }
        Ok(Prior { weights })
    }

    pub fn uniform(size: usize) -> Self {
        Prior { weights: vec![1.0 / size as f64; size] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// The cost of guessing correctly on the `t`-th query, `t = 1..=|M|`,
/// together with its derived quantities: the mean, the centered (null-average)
/// form, and the nonincreasing rearrangement.
#[derive(Debug, Clone, PartialEq)]
pub struct CostFunction {
    values: Vec<f64>,
    mean: f64,
}

impl CostFunction {
    pub fn new(values: Vec<f64>) -> Result<Self, ModelError> {
        if values.is_empty() {
            return Err(ModelError::InvalidCost("empty cost list".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(ModelError::InvalidCost(format!("non-finite cost {bad}")));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Ok(CostFunction { values, mean })
    }

    /// The identity cost `γ(t) = t`: pay the number of queries used.
    pub fn identity(size: usize) -> Self {
        CostFunction::new((1..=size).map(|t| t as f64).collect()).expect("size >= 1")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Centered values `γ(t) − γ̄` in the original query order.
    pub fn centered(&self) -> Vec<f64> {
        self.values.iter().map(|v| v - self.mean).collect()
    }

    /// Positions sorted by nonincreasing cost (stable: ties keep query order).
    /// `rearrangement()[i]` is the original 0-based position placed at rank `i`.
    pub fn rearrangement(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| {
            self.values[b].partial_cmp(&self.values[a]).unwrap().then(a.cmp(&b))
        });
        order
    }

    /// The values in nonincreasing order.
    pub fn rearranged(&self) -> Vec<f64> {
        self.rearrangement().into_iter().map(|i| self.values[i]).collect()
    }

    /// A cost is balanced when its nonincreasing rearrangement `c` satisfies
    /// `c(t) + c(|M|+1−t) = 2·mean` for every `t`, within 1e-12. The identity
    /// cost is balanced; balance is what lets the front and mirror weights of
    /// an antipodal pair collapse into a single term.
    pub fn is_balanced(&self) -> bool {
        let sorted = self.rearranged();
        let n = sorted.len();
        (0..n).all(|t| (sorted[t] + sorted[n - 1 - t] - 2.0 * self.mean).abs() <= COORD_TOL)
    }
}

/// A query order: position `t` (0-based) holds the label index queried at
/// attempt `t + 1`. Always a bijection.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Numbering {
    order: Vec<usize>,
}

impl Numbering {
    pub fn new(order: Vec<usize>) -> Result<Self, ModelError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &m in &order {
            if m >= n || seen[m] {
                return Err(ModelError::InvalidNumbering(format!(
                    "{order:?} is not a permutation of 0..{n}"
                )));
            }
            seen[m] = true;
        }
        Ok(Numbering { order })
    }

    pub fn identity(size: usize) -> Self {
        Numbering { order: (0..size).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Label queried at 0-based position `t`.
    pub fn label_at(&self, t: usize) -> usize {
        self.order[t]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// The reverse query order, `t ↦ n(|M|+1−t)`.
    pub fn reversed(&self) -> Numbering {
        Numbering { order: self.order.iter().rev().copied().collect() }
    }

    /// 0-based position at which `label` is queried.
    pub fn position_of(&self, label: usize) -> usize {
        self.order.iter().position(|&m| m == label).expect("label in numbering")
    }

    /// Positions of all labels at once: `inverse()[label] = position`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.order.len()];
        for (t, &m) in self.order.iter().enumerate() {
            inv[m] = t;
        }
        inv
    }
}

/// A measurement effect `c0·1 + c·s` in Bloch form. Its eigenvalues are
/// `c0 ± |c|`; validity (as part of a measurement) requires both in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Effect {
    /// Coefficient of the identity.
    pub weight: f64,
    /// Bloch part.
    pub bloch: BlochVector,
}

impl Effect {
    pub fn new(weight: f64, bloch: BlochVector) -> Self {
        Effect { weight, bloch }
    }

    /// Outcome probability on the state with Bloch vector `r`:
    /// `Tr[(c0·1 + c·s)(1 + r·s)/2] = c0 + c·r`.
    pub fn probability_on(&self, r: &BlochVector) -> f64 {
        self.weight + self.bloch.dot(r)
    }

    fn is_valid(&self) -> bool {
        let c = self.bloch.norm();
        self.weight - c >= -COORD_TOL && self.weight + c <= 1.0 + COORD_TOL
    }
}

/// A measurement whose outcomes are query orders: measuring tells the
/// guesser in which order to query. Effects must be positive, bounded by the
/// identity, and sum to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberingMeasurement {
    outcomes: Vec<(Numbering, Effect)>,
}

impl NumberingMeasurement {
    pub fn new(outcomes: Vec<(Numbering, Effect)>) -> Result<Self, ModelError> {
        if outcomes.is_empty() {
            return Err(ModelError::InvalidMeasurement("no outcomes".into()));
        }
        let n = outcomes[0].0.len();
        let mut weight_sum = 0.0;
        let mut bloch_sum = BlochVector::ZERO;
        for (numbering, effect) in &outcomes {
            if numbering.len() != n {
                return Err(ModelError::InvalidMeasurement(
                    "outcomes over numberings of different lengths".into(),
                ));
            }
            if !effect.is_valid() {
                return Err(ModelError::InvalidMeasurement(format!(
                    "effect ({}, {}) has an eigenvalue outside [0, 1]",
                    effect.weight, effect.bloch
                )));
            }
            weight_sum += effect.weight;
            bloch_sum = bloch_sum + effect.bloch;
        }
        if (weight_sum - 1.0).abs() > SUM_TOL || bloch_sum.norm() > SUM_TOL {
            return Err(ModelError::InvalidMeasurement(format!(
                "effects sum to ({weight_sum}, {bloch_sum}) instead of the identity"
            )));
        }
        Ok(NumberingMeasurement { outcomes })
    }

    /// Construction without the completeness/positivity checks, for tests
    /// that need to plant deliberately corrupt effects.
    #[cfg(test)]
    pub(crate) fn new_unchecked(outcomes: Vec<(Numbering, Effect)>) -> Self {
        NumberingMeasurement { outcomes }
    }

    /// The single-outcome measurement with effect `1`: measure nothing and
    /// query in the given fixed order.
    pub fn blind(numbering: Numbering) -> Self {
        NumberingMeasurement { outcomes: vec![(numbering, Effect::new(1.0, BlochVector::ZERO))] }
    }

    pub fn outcomes(&self) -> &[(Numbering, Effect)] {
        &self.outcomes
    }

    /// Alphabet size of the numberings.
    pub fn alphabet_len(&self) -> usize {
        self.outcomes[0].0.len()
    }
}
