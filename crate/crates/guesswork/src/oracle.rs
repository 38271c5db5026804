//! Brute-force reference implementations, independent of the solver.
//!
//! [`brute_force_norm`] enumerates the regime's numbering set by plain
//! recursive generation in position order with no bounding, shares nothing
//! with the solver beyond the canonical score evaluator in [`crate::score`],
//! and even recomputes the antipodal pairing from scratch. Enumeration order
//! is lexicographic, so keeping only strict improvements makes the reported
//! argmax the lexicographically smallest maximizer — the same tie-break rule
//! the solver applies.
//!
//! [`random_channel`] produces seeded test channels from the documented
//! generator in [`crate::rng`].

use crate::model::{ModelError, Numbering, QubitCqChannel};
use crate::rng::SplitMix64;
use crate::score;
use crate::solver::Regime;
use thiserror::Error;

/// Default leaf cap: enumeration refuses regimes bigger than this.
pub const DEFAULT_CAP: u64 = 2_000_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("regime has {leaves} leaves, above the cap of {cap}")]
    CapExceeded { leaves: u128, cap: u64 },
    #[error("regime `{0}` needs symmetry the channel does not have")]
    RegimeUnavailable(Regime),
}

/// Result of a full enumeration: the exact maximal score norm `max_n |v(n)|`
/// and its lexicographically smallest maximizer (in the weight indexing).
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub norm: f64,
    pub numbering: Numbering,
    pub leaves: u64,
}

struct Enumerator<'a> {
    channel: &'a QubitCqChannel,
    weights: &'a [f64],
    antipode: Option<Vec<usize>>,
    fronts: usize,
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<(f64, Vec<usize>)>,
    leaves: u64,
}

impl Enumerator<'_> {
    fn run(&mut self, t: usize) {
        let n = self.channel.len();
        if t == self.fronts {
            self.leaves += 1;
            let numbering = Numbering::new(self.order.clone()).expect("permutation");
            let norm =
                score::weighted_vector_sum(self.channel.bloch(), self.weights, &numbering)
                    .norm();
            if self.best.as_ref().is_none_or(|(b, _)| norm > *b) {
                self.best = Some((norm, self.order.clone()));
            }
            return;
        }
        for m in 0..n {
            if self.used[m] {
                continue;
            }
            self.order[t] = m;
            self.used[m] = true;
            let pair = self.antipode.as_ref().map(|a| a[m]);
            if let Some(p) = pair {
                self.order[n - 1 - t] = p;
                self.used[p] = true;
            }
            self.run(t + 1);
            self.used[m] = false;
            if let Some(p) = pair {
                self.used[p] = false;
            }
        }
    }
}

/// Fixed-point-free negation pairing, recomputed here so the oracle does not
/// depend on the symmetry module.
fn negation_pairing(channel: &QubitCqChannel) -> Option<Vec<usize>> {
    let bloch = channel.bloch();
    let n = bloch.len();
    if !n.is_multiple_of(2) {
        return None;
    }
    let mut antipode = vec![usize::MAX; n];
    for m in 0..n {
        if antipode[m] != usize::MAX {
            continue;
        }
        let negated = -bloch[m];
        let partner = (0..n)
            .find(|&j| j != m && antipode[j] == usize::MAX && bloch[j].approx_eq(&negated, 1e-9))?;
        antipode[m] = partner;
        antipode[partner] = m;
    }
    Some(antipode)
}

/// Exhaustively maximize `|v(n)| = |Σ_t w(t)·r_{n(t)}|` over the regime's
/// numbering set. `weights` and the returned numbering share an indexing.
///
/// Transitive regimes pin label 0 at position 0; paired regimes force
/// position `|M|+1−t` to hold the antipode of position `t`.
pub fn brute_force_norm(
    channel: &QubitCqChannel,
    weights: &[f64],
    regime: Regime,
    cap: u64,
) -> Result<BruteForceResult, OracleError> {
    let n = channel.len();
    assert_eq!(weights.len(), n, "weights must match the alphabet");
    let leaves = regime.leaf_count(n);
    if leaves > cap as u128 {
        return Err(OracleError::CapExceeded { leaves, cap });
    }
    let antipode = if regime.requires_cs() {
        Some(negation_pairing(channel).ok_or(OracleError::RegimeUnavailable(regime))?)
    } else {
        None
    };
    let fronts = if antipode.is_some() { n / 2 } else { n };
    let mut enumerator = Enumerator {
        channel,
        weights,
        antipode,
        fronts,
        order: vec![0; n],
        used: vec![false; n],
        best: None,
        leaves: 0,
    };
    if regime.requires_transitive() {
        enumerator.order[0] = 0;
        enumerator.used[0] = true;
        if let Some(pair) = enumerator.antipode.as_ref().map(|a| a[0]) {
            enumerator.order[n - 1] = pair;
            enumerator.used[pair] = true;
        }
        enumerator.run(1);
    } else {
        enumerator.run(0);
    }
    let (norm, order) = enumerator.best.expect("at least one numbering");
    Ok(BruteForceResult {
        norm,
        numbering: Numbering::new(order).expect("permutation"),
        leaves: enumerator.leaves,
    })
}

/// Seeded random channel: `size` states labeled `s00`, `s01`, ... with
/// uniformly random unit Bloch vectors (`surface_only`), or directions with
/// an independent uniformly random radius in `[0, 1)`.
///
/// Stream layout per state: two draws for the direction, then one draw for
/// the radius when `surface_only` is false.
pub fn random_channel(
    size: usize,
    seed: u64,
    surface_only: bool,
) -> Result<QubitCqChannel, ModelError> {
    let mut rng = SplitMix64::new(seed);
    let mut bloch = Vec::with_capacity(size);
    for _ in 0..size {
        let direction = rng.unit_vector();
        if surface_only {
            bloch.push(direction);
        } else {
            bloch.push(direction * rng.next_f64());
        }
    }
    let labels = (0..size).map(|i| format!("s{i:02}")).collect();
    crate::model::validate_channel(labels, bloch)
}
