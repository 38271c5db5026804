//! The objective of the search and everything derived from it.
//!
//! For a null-average weight sequence `w` and a numbering `n`, the score of
//! `n` is the Euclidean norm of the weighted Bloch sum
//! `v(n) = Σ_t w(t)·r_{n(t)}`; the operator whose norm this computes is
//! `(1/|M|)·v(n)·s`, so the operator norm is `|v(n)|/|M|` ([`e_norm`]).
//! For a balanced cost `γ` at the uniform prior, the minimum guesswork over
//! all numbering-valued measurements is
//!
//! ```text
//! G = γ̄ − max_n |v(n)| / |M|
//! ```
//!
//! attained by a two-outcome measurement built from any maximizing numbering
//! ([`build_optimal_measurement`]): for every measurement
//! `G = γ̄ + (1/|M|)·Σ_k c_k·v(n_k)` with `Σ_k |c_k| ≤ Σ_k c0_k = 1`, which is
//! bounded below by `γ̄ − max_n |v(n)|/|M|` and met with equality by effects
//! `(1 ∓ v̂·s)/2` paired with a maximizer and its reverse.
//!
//! [`weighted_vector_sum`] is the single evaluator of `v(n)` shared by the
//! branch-and-bound solver and the brute-force oracle, summing terms in query
//! order, so both sides see bit-identical floating-point values and ties are
//! broken identically.

use crate::model::{
    BlochVector, CostFunction, Effect, Numbering, NumberingMeasurement, Prior, QubitCqChannel,
};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScoreError {
    #[error("cost function is not balanced")]
    NotBalanced,
    #[error("measurement is over an alphabet of {measurement} labels, channel has {channel}")]
    AlphabetMismatch { measurement: usize, channel: usize },
}

/// A cost function reduced to the form the search consumes: the mean, the
/// centered weights in nonincreasing order, and the map back to query order.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedCost {
    /// Mean cost `γ̄`.
    pub mean: f64,
    /// `γ(σ(i)) − γ̄`, nonincreasing in `i`.
    pub weights: Vec<f64>,
    /// `rearrangement[i]` = 0-based query position of internal rank `i`.
    pub rearrangement: Vec<usize>,
    /// Whether the rearranged cost is balanced.
    pub balanced: bool,
}

impl NormalizedCost {
    /// Express a numbering over internal ranks in query order:
    /// rank `i` of `internal` lands at query position `rearrangement[i]`.
    pub fn to_query_order(&self, internal: &Numbering) -> Numbering {
        let mut order = vec![0; internal.len()];
        for (rank, &pos) in self.rearrangement.iter().enumerate() {
            order[pos] = internal.label_at(rank);
        }
        Numbering::new(order).expect("permutation of a permutation")
    }
}

/// Mean, centered nonincreasing weights, and the rearrangement of a cost.
pub fn normalize_cost(cost: &CostFunction) -> NormalizedCost {
    let rearrangement = cost.rearrangement();
    let mean = cost.mean();
    let weights = rearrangement.iter().map(|&p| cost.values()[p] - mean).collect();
    NormalizedCost { mean, weights, rearrangement, balanced: cost.is_balanced() }
}

/// Running weighted sum of Bloch vectors, the search's partial objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSum {
    v: BlochVector,
}

impl WeightedSum {
    pub fn new() -> Self {
        WeightedSum { v: BlochVector::ZERO }
    }

    pub fn add(&self, weight: f64, r: &BlochVector) -> WeightedSum {
        WeightedSum { v: self.v + *r * weight }
    }

    pub fn vector(&self) -> BlochVector {
        self.v
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }
}

impl Default for WeightedSum {
    fn default() -> Self {
        WeightedSum::new()
    }
}

/// `v(n) = Σ_t w(t)·r_{n(t)}`, summed in increasing `t`.
///
/// `weights` and `numbering` must share an indexing (both in query order, or
/// both in internal rank order); the caller owns that convention.
pub fn weighted_vector_sum(
    bloch: &[BlochVector],
    weights: &[f64],
    numbering: &Numbering,
) -> BlochVector {
    debug_assert_eq!(weights.len(), numbering.len());
    let mut sum = WeightedSum::new();
    for (t, &w) in weights.iter().enumerate() {
        sum = sum.add(w, &bloch[numbering.label_at(t)]);
    }
    sum.vector()
}

/// Operator norm of the score operator for numbering `n`: `|v(n)| / |M|`.
/// `weights` must have null average.
pub fn e_norm(channel: &QubitCqChannel, weights: &[f64], numbering: &Numbering) -> f64 {
    weighted_vector_sum(channel.bloch(), weights, numbering).norm() / channel.len() as f64
}

/// Guesswork at the uniform prior from the maximal score norm:
/// `G = γ̄ − best_norm`, where `best_norm` is `max_n e_norm(n)`.
/// Only balanced costs admit this closed form.
pub fn guesswork_value(
    _channel: &QubitCqChannel,
    cost: &CostFunction,
    best_norm: f64,
) -> Result<f64, ScoreError> {
    if !cost.is_balanced() {
        return Err(ScoreError::NotBalanced);
    }
    Ok(cost.mean() - best_norm)
}

/// Full evaluation of a measurement: the guesswork value, the joint
/// distribution over (outcome, query position), and its position marginal.
#[derive(Debug, Clone)]
pub struct MeasurementGuesswork {
    /// `G = Σ_{k,t} joint[k][t]·γ(t)`.
    pub value: f64,
    /// `joint[k][t] = p(n_k(t))·Tr[π(n_k)·σ(n_k(t))]`.
    pub joint: Vec<Vec<f64>>,
    /// Probability that the `t`-th query is the correct one.
    pub marginal: Vec<f64>,
}

/// Guesswork of an arbitrary numbering-valued measurement under an arbitrary
/// prior and cost (no balance requirement).
pub fn guesswork_of_numbering_measurement(
    channel: &QubitCqChannel,
    prior: &Prior,
    cost: &CostFunction,
    measurement: &NumberingMeasurement,
) -> Result<MeasurementGuesswork, ScoreError> {
    let n = channel.len();
    if measurement.alphabet_len() != n || prior.len() != n || cost.len() != n {
        return Err(ScoreError::AlphabetMismatch {
            measurement: measurement.alphabet_len(),
            channel: n,
        });
    }
    let mut joint = Vec::with_capacity(measurement.outcomes().len());
    let mut marginal = vec![0.0; n];
    let mut value = 0.0;
    for (numbering, effect) in measurement.outcomes() {
        let row: Vec<f64> = numbering
            .order()
            .iter()
            .map(|&m| prior.weights()[m] * effect.probability_on(&channel.bloch()[m]))
            .collect();
        for ((q, &g), &p) in marginal.iter_mut().zip(cost.values()).zip(&row) {
            *q += p;
            value += p * g;
        }
        joint.push(row);
    }
    Ok(MeasurementGuesswork { value, joint, marginal })
}

/// The optimal two-outcome measurement for a balanced cost at the uniform
/// prior, given a numbering `n*` that maximizes the score norm.
///
/// Outcome `n*` carries the effect `(1 − v̂·s)/2` and the reversed numbering
/// carries `(1 + v̂·s)/2`, where `v = Σ_t (γ(t) − γ̄)·r_{n*(t)}`. Evaluating it
/// at the uniform prior gives `γ̄ − |v|/|M|`. When `v = 0` the side
/// information is worthless and the blind measurement (query in the order
/// `n*`, effect `1`) is returned instead.
pub fn build_optimal_measurement(
    channel: &QubitCqChannel,
    cost: &CostFunction,
    best: &Numbering,
) -> Result<NumberingMeasurement, ScoreError> {
    if !cost.is_balanced() {
        return Err(ScoreError::NotBalanced);
    }
    let centered = cost.centered();
    let v = weighted_vector_sum(channel.bloch(), &centered, best);
    match v.normalized() {
        None => Ok(NumberingMeasurement::blind(best.clone())),
        Some(direction) => {
            let minus = Effect::new(0.5, -direction * 0.5);
            let plus = Effect::new(0.5, direction * 0.5);
            Ok(NumberingMeasurement::new(vec![
                (best.clone(), minus),
                (best.reversed(), plus),
            ])
            .expect("projective pair is complete"))
        }
    }
}

/// Convenience check used by tests: `|a − b| ≤ tol`.
pub fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
