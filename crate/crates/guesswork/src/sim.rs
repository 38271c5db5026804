//! Monte Carlo guessing games and game-theoretic checks.
//!
//! [`simulate_game`] replaces hardware execution: outcome probabilities are
//! computed exactly from the Born rule (`c0 + c·r`) and sampled with the
//! documented generator, so the only deviation from the closed form is
//! statistical. [`max_over_priors`] exploits linearity of the guesswork in
//! the prior — the maximum over the simplex sits at a vertex — and, combined
//! with [`covariantize_measurement`], verifies numerically that maximin and
//! minimax coincide at transitive channels: the covariant average of an
//! optimal measurement has the same guesswork at every vertex prior.
//! [`bayes_order_check`] audits that a measurement queries along nonincreasing
//! posterior rows, and repairs one that does not by coarse-graining.

use crate::model::{
    BlochVector, CostFunction, Effect, Numbering, NumberingMeasurement, Prior, QubitCqChannel,
};
use crate::rng::{mix, SplitMix64};
use crate::score::{self, ScoreError};
use crate::symmetry::SymmetryInfo;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Probabilities below this are treated as corrupt effects, not noise.
const PROBABILITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("outcome {outcome} has probability {probability} on state `{label}`")]
    NegativeProbability { outcome: usize, label: String, probability: f64 },
    #[error("covariantized effects do not sum to the identity: {0}")]
    EffectSumMismatch(String),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("need at least one shot per state")]
    NoShots,
}

/// Aggregated outcome of a simulated guessing game.
#[derive(Debug, Clone, Serialize)]
pub struct SimReport {
    pub shots_per_state: u64,
    /// Prior-weighted mean of the per-shot costs.
    pub empirical_guesswork: f64,
    /// Standard error of `empirical_guesswork` under stratified sampling:
    /// `sqrt(Σ_m p(m)²·s²_m / shots)` with `s²_m` the per-state sample
    /// variance of the shot costs.
    pub standard_error: f64,
    pub per_state_mean_cost: Vec<f64>,
    /// Empirical probability that the `t`-th query is the correct one.
    pub q_histogram: Vec<f64>,
}

/// Play `shots_per_state` rounds for every state: sample an outcome from the
/// exact Born probabilities, then pay the cost of the position at which the
/// outcome's numbering queries the sent state.
///
/// State `m` draws from an independent substream seeded `mix(seed, m)`, so
/// the report does not depend on how states are sharded across workers.
pub fn simulate_game(
    channel: &QubitCqChannel,
    prior: &Prior,
    cost: &CostFunction,
    measurement: &NumberingMeasurement,
    shots_per_state: u64,
    seed: u64,
) -> Result<SimReport, SimError> {
    let n = channel.len();
    if measurement.alphabet_len() != n || prior.len() != n || cost.len() != n {
        return Err(ScoreError::AlphabetMismatch {
            measurement: measurement.alphabet_len(),
            channel: n,
        }
        .into());
    }
    if shots_per_state == 0 {
        return Err(SimError::NoShots);
    }

    // Position of each label within each outcome's numbering.
    let positions: Vec<Vec<usize>> =
        measurement.outcomes().iter().map(|(numbering, _)| numbering.inverse()).collect();

    let mut per_state_mean = Vec::with_capacity(n);
    let mut per_state_variance = Vec::with_capacity(n);
    let mut q_histogram = vec![0.0; n];

    for (m, state) in channel.bloch().iter().enumerate() {
        let mut cdf = Vec::with_capacity(measurement.outcomes().len());
        let mut total = 0.0;
        for (k, (_, effect)) in measurement.outcomes().iter().enumerate() {
            let p = effect.probability_on(state);
            if p < -PROBABILITY_TOL {
                return Err(SimError::NegativeProbability {
                    outcome: k,
                    label: channel.labels()[m].clone(),
                    probability: p,
                });
            }
            total += p.max(0.0);
            cdf.push(total);
        }

        let mut rng = SplitMix64::new(mix(seed, m as u64));
        let mut sum = 0.0;
        let mut sum_squares = 0.0;
        for _ in 0..shots_per_state {
            let u = rng.next_f64() * total;
            let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            let position = positions[k][m];
            let c = cost.values()[position];
            sum += c;
            sum_squares += c * c;
            q_histogram[position] += prior.weights()[m];
        }
        let shots = shots_per_state as f64;
        let mean = sum / shots;
        let variance = if shots_per_state > 1 {
            ((sum_squares - shots * mean * mean) / (shots - 1.0)).max(0.0)
        } else {
            0.0
        };
        per_state_mean.push(mean);
        per_state_variance.push(variance);
    }

    let shots = shots_per_state as f64;
    let empirical = prior
        .weights()
        .iter()
        .zip(&per_state_mean)
        .map(|(p, mean)| p * mean)
        .sum();
    let variance: f64 = prior
        .weights()
        .iter()
        .zip(&per_state_variance)
        .map(|(p, var)| p * p * var / shots)
        .sum();
    for q in &mut q_histogram {
        *q /= shots;
    }

    Ok(SimReport {
        shots_per_state,
        empirical_guesswork: empirical,
        standard_error: variance.sqrt(),
        per_state_mean_cost: per_state_mean,
        q_histogram,
    })
}

/// Worst-case prior of a fixed measurement. The guesswork is linear in the
/// prior, so the maximum over the simplex is a vertex: the returned value is
/// `max_m Σ_k Tr[π(n_k)·σ(m)]·γ(position of m in n_k)` with the attaining
/// label (smallest index on ties).
pub fn max_over_priors(
    channel: &QubitCqChannel,
    cost: &CostFunction,
    measurement: &NumberingMeasurement,
) -> Result<(f64, usize), SimError> {
    let n = channel.len();
    if measurement.alphabet_len() != n || cost.len() != n {
        return Err(ScoreError::AlphabetMismatch {
            measurement: measurement.alphabet_len(),
            channel: n,
        }
        .into());
    }
    let positions: Vec<Vec<usize>> =
        measurement.outcomes().iter().map(|(numbering, _)| numbering.inverse()).collect();
    let mut best: Option<(f64, usize)> = None;
    for m in 0..n {
        let state = &channel.bloch()[m];
        let value: f64 = measurement
            .outcomes()
            .iter()
            .zip(&positions)
            .map(|((_, effect), pos)| effect.probability_on(state) * cost.values()[pos[m]])
            .sum();
        if best.is_none_or(|(b, _)| value > b) {
            best = Some((value, m));
        }
    }
    Ok(best.expect("channel has states"))
}

/// Group-average a measurement over the channel's symmetry group:
/// `τ(n) = |G|⁻¹ Σ_g R_g⁻¹·π(g∘n)`. Outcomes landing on the same numbering
/// are merged by summing effects; the result is checked to still resolve the
/// identity.
///
/// For a transitive channel the average of an optimal measurement has the
/// same guesswork at every vertex prior, which is what makes
/// `max_over_priors(covariantize(optimal)) = solver value` a saddle-point
/// certificate.
pub fn covariantize_measurement(
    channel: &QubitCqChannel,
    info: &SymmetryInfo,
    measurement: &NumberingMeasurement,
) -> Result<NumberingMeasurement, SimError> {
    let n = channel.len();
    if info.group.len() <= 1 {
        return Ok(measurement.clone());
    }
    let scale = 1.0 / info.group.len() as f64;
    let mut merged: BTreeMap<Vec<usize>, (f64, BlochVector)> = BTreeMap::new();
    for element in &info.group {
        let mut inverse_perm = vec![0; n];
        for (i, &j) in element.perm.iter().enumerate() {
            inverse_perm[j] = i;
        }
        let rotate_back = element.realization.transpose();
        for (numbering, effect) in measurement.outcomes() {
            let key: Vec<usize> =
                numbering.order().iter().map(|&m| inverse_perm[m]).collect();
            let entry = merged.entry(key).or_insert((0.0, BlochVector::ZERO));
            entry.0 += effect.weight * scale;
            entry.1 = entry.1 + rotate_back.apply(&effect.bloch) * scale;
        }
    }

    let mut weight_sum = 0.0;
    let mut bloch_sum = BlochVector::ZERO;
    let mut outcomes = Vec::with_capacity(merged.len());
    for (order, (weight, bloch)) in merged {
        weight_sum += weight;
        bloch_sum = bloch_sum + bloch;
        let numbering =
            Numbering::new(order).expect("permuted numbering is a permutation");
        outcomes.push((numbering, Effect::new(weight, bloch)));
    }
    if (weight_sum - 1.0).abs() > 1e-9 || bloch_sum.norm() > 1e-9 {
        return Err(SimError::EffectSumMismatch(format!(
            "weights {weight_sum}, residual Bloch norm {}",
            bloch_sum.norm()
        )));
    }
    NumberingMeasurement::new(outcomes)
        .map_err(|e| SimError::EffectSumMismatch(e.to_string()))
}

/// Outcome of a query-order audit.
#[derive(Debug, Clone)]
pub struct BayesOrderReport {
    /// Whether every outcome's joint row is nonincreasing in the query
    /// position.
    pub monotone: bool,
    /// First violating (outcome, position), when not monotone.
    pub witness: Option<(usize, usize)>,
    /// The measurement with every outcome re-sorted along its posterior and
    /// coinciding numberings merged.
    pub reordered: NumberingMeasurement,
    pub original_value: f64,
    pub reordered_value: f64,
}

/// Check that each outcome queries along a nonincreasing posterior row
/// `p(n(t))·Tr[π(n)·σ(n(t))]`, and build the repaired measurement that does
/// (never worse for a nondecreasing cost).
pub fn bayes_order_check(
    channel: &QubitCqChannel,
    prior: &Prior,
    cost: &CostFunction,
    measurement: &NumberingMeasurement,
) -> Result<BayesOrderReport, SimError> {
    let n = channel.len();
    let evaluation = score::guesswork_of_numbering_measurement(channel, prior, cost, measurement)?;

    let mut monotone = true;
    let mut witness = None;
    let mut merged: BTreeMap<Vec<usize>, (f64, BlochVector)> = BTreeMap::new();
    for (k, ((numbering, effect), row)) in
        measurement.outcomes().iter().zip(&evaluation.joint).enumerate()
    {
        for t in 0..n.saturating_sub(1) {
            if row[t + 1] > row[t] + 1e-12 {
                monotone = false;
                if witness.is_none() {
                    witness = Some((k, t + 1));
                }
                break;
            }
        }
        // Stable sort: descending row value, original position on ties.
        let mut by_posterior: Vec<usize> = (0..n).collect();
        by_posterior.sort_by(|&a, &b| row[b].partial_cmp(&row[a]).unwrap().then(a.cmp(&b)));
        let reordered: Vec<usize> =
            by_posterior.iter().map(|&t| numbering.label_at(t)).collect();
        let entry = merged.entry(reordered).or_insert((0.0, BlochVector::ZERO));
        entry.0 += effect.weight;
        entry.1 = entry.1 + effect.bloch;
    }

    let outcomes: Vec<(Numbering, Effect)> = merged
        .into_iter()
        .map(|(order, (weight, bloch))| {
            (Numbering::new(order).expect("permutation"), Effect::new(weight, bloch))
        })
        .collect();
    let reordered = NumberingMeasurement::new(outcomes)
        .map_err(|e| SimError::EffectSumMismatch(e.to_string()))?;
    let reordered_value =
        score::guesswork_of_numbering_measurement(channel, prior, cost, &reordered)?.value;

    Ok(BayesOrderReport {
        monotone,
        witness,
        reordered,
        original_value: evaluation.value,
        reordered_value,
    })
}
