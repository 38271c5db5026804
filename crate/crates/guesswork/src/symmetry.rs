//! Symmetry structure of a channel: the group of label permutations that
//! preserve the Gram matrix of the Bloch vectors, realized as orthogonal maps
//! of Bloch space, plus the two flags the search regimes key on —
//! transitivity (one orbit) and central symmetry (antipodal closure).
//!
//! A permutation `g` preserves all pairwise dots iff there is an orthogonal
//! `R_g` with `R_g·r_m = r_{g(m)}` for every `m`. Detection enumerates
//! Gram-preserving permutations by backtracking (pruned by sorted-row
//! signatures and partial-row checks), then solves for each realization on an
//! orthonormalized frame of the spanned subspace, extended by the identity on
//! the complement. Improper realizations (determinant −1, e.g. the inversion
//! of a centrally symmetric constellation) are kept: on Bloch vectors they
//! act like any other orthogonal map, and probabilities transform
//! consistently.
//!
//! Central symmetry is detected geometrically as a fixed-point-free pairing
//! `m ↔ m̄` with `r_m̄ = −r_m`; only even alphabets can be paired completely.

use crate::model::{BlochVector, QubitCqChannel};
use thiserror::Error;

/// Tolerance for Gram comparisons, equivariance and orthogonality checks.
pub const SYM_TOL: f64 = 1e-9;

/// Backtracking node budget; beyond it detection falls back to the trivial
/// group, which is always sound (the search just loses its shortcuts).
const NODE_BUDGET: u64 = 2_000_000;

/// Groups larger than this skip the O(|G|²) closure audit; the enumeration
/// returns every Gram-preserving permutation, which is closed by definition.
const CLOSURE_AUDIT_LIMIT: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("channel is not centrally symmetric")]
    NotCentrallySymmetric,
}

/// Column-major free 3×3 matrix, enough linear algebra for Bloch space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    /// `m[row][col]`.
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const IDENTITY: Mat3 =
        Mat3 { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] };

    pub fn from_columns(c0: BlochVector, c1: BlochVector, c2: BlochVector) -> Mat3 {
        Mat3 { m: [[c0.x, c1.x, c2.x], [c0.y, c1.y, c2.y], [c0.z, c1.z, c2.z]] }
    }

    pub fn apply(&self, v: &BlochVector) -> BlochVector {
        BlochVector::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y + self.m[0][2] * v.z,
            self.m[1][0] * v.x + self.m[1][1] * v.y + self.m[1][2] * v.z,
            self.m[2][0] * v.x + self.m[2][1] * v.y + self.m[2][2] * v.z,
        )
    }

    pub fn transpose(&self) -> Mat3 {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in self.m.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                t[j][i] = x;
            }
        }
        Mat3 { m: t }
    }

    pub fn matmul(&self, other: &Mat3) -> Mat3 {
        let mut p = [[0.0; 3]; 3];
        for (i, row) in p.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Mat3 { m: p }
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn approx_eq(&self, other: &Mat3, tol: f64) -> bool {
        self.m
            .iter()
            .zip(&other.m)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol))
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        self.transpose().matmul(self).approx_eq(&Mat3::IDENTITY, tol)
    }
}

/// One symmetry: a label permutation together with the orthogonal Bloch map
/// realizing it, `realization·r_m = r_{perm[m]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryElement {
    pub perm: Vec<usize>,
    pub realization: Mat3,
}

impl SymmetryElement {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Full symmetry report of a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryInfo {
    /// All Gram-preserving permutations with their realizations, in
    /// lexicographic permutation order (so the identity comes first).
    pub group: Vec<SymmetryElement>,
    /// Whether the group action on labels has a single orbit.
    pub transitive: bool,
    /// Whether the Bloch set is closed under negation with a complete
    /// fixed-point-free pairing.
    pub centrally_symmetric: bool,
    /// `antipode[m] = m̄` with `r_m̄ = −r_m`, when centrally symmetric.
    pub antipode: Option<Vec<usize>>,
}

impl SymmetryInfo {
    pub fn order(&self) -> usize {
        self.group.len()
    }
}

/// Partition the labels of a centrally symmetric channel into antipodal
/// pairs `(m, m̄)`, each listed once with `m < m̄`.
pub fn antipodal_pairing(
    info: &SymmetryInfo,
    channel: &QubitCqChannel,
) -> Result<Vec<(usize, usize)>, SymmetryError> {
    let antipode = info.antipode.as_ref().ok_or(SymmetryError::NotCentrallySymmetric)?;
    debug_assert_eq!(antipode.len(), channel.len());
    Ok((0..channel.len()).filter(|&m| m < antipode[m]).map(|m| (m, antipode[m])).collect())
}

fn gram_matrix(bloch: &[BlochVector]) -> Vec<Vec<f64>> {
    bloch.iter().map(|a| bloch.iter().map(|b| a.dot(b)).collect()).collect()
}

fn row_signature(row: &[f64]) -> Vec<f64> {
    let mut s = row.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s
}

fn signatures_match(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= SYM_TOL)
}

struct PermSearch<'a> {
    gram: &'a [Vec<f64>],
    candidates: &'a [Vec<usize>],
    n: usize,
    perm: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    nodes: u64,
    exhausted: bool,
}

impl PermSearch<'_> {
    fn run(&mut self, depth: usize) {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            self.exhausted = true;
            return;
        }
        if depth == self.n {
            self.found.push(self.perm.clone());
            return;
        }
        for &j in &self.candidates[depth] {
            if self.used[j] {
                continue;
            }
            // Partial Gram consistency against everything already mapped.
            let consistent = (self.gram[depth][depth] - self.gram[j][j]).abs() <= SYM_TOL
                && (0..depth).all(|k| {
                    (self.gram[depth][k] - self.gram[j][self.perm[k]]).abs() <= SYM_TOL
                });
            if !consistent {
                continue;
            }
            self.perm[depth] = j;
            self.used[j] = true;
            self.run(depth + 1);
            self.used[j] = false;
            if self.exhausted {
                return;
            }
        }
    }
}

/// Orthonormal frame spanning the channel vectors, with the indices of the
/// vectors it was built from.
fn spanning_frame(bloch: &[BlochVector]) -> (Vec<usize>, Vec<BlochVector>) {
    let mut indices = Vec::new();
    let mut frame: Vec<BlochVector> = Vec::new();
    for (i, r) in bloch.iter().enumerate() {
        if frame.len() == 3 {
            break;
        }
        let mut residual = *r;
        for u in &frame {
            residual = residual - *u * u.dot(r);
        }
        if residual.norm() > 1e-6 {
            indices.push(i);
            frame.push(residual.normalized().expect("norm checked"));
        }
    }
    (indices, frame)
}

/// Orthonormalize the images of the frame vectors under `perm`; returns
/// `None` when the images fail to reproduce the frame's geometry.
fn image_frame(
    bloch: &[BlochVector],
    perm: &[usize],
    indices: &[usize],
) -> Option<Vec<BlochVector>> {
    let mut frame: Vec<BlochVector> = Vec::new();
    for &i in indices {
        let r = bloch[perm[i]];
        let mut residual = r;
        for u in &frame {
            residual = residual - *u * u.dot(&r);
        }
        frame.push(residual.normalized()?);
    }
    Some(frame)
}

/// Solve for the orthogonal realization of `perm`, verifying equivariance on
/// every vector to `SYM_TOL` per coordinate.
fn realize(bloch: &[BlochVector], perm: &[usize], indices: &[usize], frame: &[BlochVector]) -> Option<Mat3> {
    let rotation = match frame.len() {
        0 => Mat3::IDENTITY,
        1 => {
            // Map u ↦ w by a Householder reflection when they differ.
            let u = frame[0];
            let w = bloch[perm[indices[0]]].normalized()?;
            if u.approx_eq(&w, SYM_TOL) {
                Mat3::IDENTITY
            } else {
                // Reflection through the plane orthogonal to u − w swaps
                // u and w: H = I − 2qqᵀ with q = (u − w)/|u − w|.
                let q = (u - w).normalized()?;
                let qv = [q.x, q.y, q.z];
                let mut m = [[0.0; 3]; 3];
                for (i, row) in m.iter_mut().enumerate() {
                    for (j, x) in row.iter_mut().enumerate() {
                        *x = f64::from(u8::from(i == j)) - 2.0 * qv[i] * qv[j];
                    }
                }
                Mat3 { m }
            }
        }
        2 => {
            let images = image_frame(bloch, perm, indices)?;
            let u3 = frame[0].cross(&frame[1]);
            let w3 = images[0].cross(&images[1]);
            frame_map(&[frame[0], frame[1], u3], &[images[0], images[1], w3])
        }
        _ => {
            let images = image_frame(bloch, perm, indices)?;
            frame_map(
                &[frame[0], frame[1], frame[2]],
                &[images[0], images[1], images[2]],
            )
        }
    };
    if !rotation.is_orthogonal(SYM_TOL) {
        return None;
    }
    for (m, r) in bloch.iter().enumerate() {
        if !rotation.apply(r).approx_eq(&bloch[perm[m]], SYM_TOL) {
            return None;
        }
    }
    Some(rotation)
}

/// The orthogonal map sending orthonormal frame `u` to orthonormal frame `w`:
/// `R = W·Uᵀ`.
fn frame_map(u: &[BlochVector; 3], w: &[BlochVector; 3]) -> Mat3 {
    let wu = Mat3::from_columns(w[0], w[1], w[2]);
    let ut = Mat3::from_columns(u[0], u[1], u[2]).transpose();
    wu.matmul(&ut)
}

fn orbit_is_all(perms: &[Vec<usize>], n: usize) -> bool {
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut frontier = vec![0];
    while let Some(m) = frontier.pop() {
        for p in perms {
            if !reached[p[m]] {
                reached[p[m]] = true;
                frontier.push(p[m]);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// Greedy fixed-point-free pairing `m ↔ m̄` with `r_m̄ = −r_m`; `None` when
/// the constellation is not closed under negation (or `|M|` is odd).
fn negation_pairing(bloch: &[BlochVector]) -> Option<Vec<usize>> {
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
            .find(|&j| j != m && antipode[j] == usize::MAX && bloch[j].approx_eq(&negated, SYM_TOL))?;
        antipode[m] = partner;
        antipode[partner] = m;
    }
    Some(antipode)
}

/// Detect the full Gram-preserving permutation group of a channel, its
/// orthogonal realizations, and the transitivity / central-symmetry flags.
///
/// Every channel admits at least the trivial group, so this cannot fail; if
/// the backtracking budget is exhausted (pathological constellations with
/// enormous symmetry, e.g. many coincident vectors) the group degrades to
/// `{identity}` while the geometric central-symmetry flag is still computed.
pub fn detect_symmetries(channel: &QubitCqChannel) -> SymmetryInfo {
    let bloch = channel.bloch();
    let n = channel.len();
    let gram = gram_matrix(bloch);
    let signatures: Vec<Vec<f64>> = gram.iter().map(|row| row_signature(row)).collect();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| signatures_match(&signatures[i], &signatures[j])).collect())
        .collect();

    let mut search = PermSearch {
        gram: &gram,
        candidates: &candidates,
        n,
        perm: vec![0; n],
        used: vec![false; n],
        found: Vec::new(),
        nodes: 0,
        exhausted: false,
    };
    search.run(0);

    let antipode = negation_pairing(bloch);
    let (indices, frame) = spanning_frame(bloch);

    let mut group: Vec<SymmetryElement> = Vec::new();
    if search.exhausted {
        group.push(SymmetryElement { perm: (0..n).collect(), realization: Mat3::IDENTITY });
    } else {
        for perm in search.found {
            if let Some(realization) = realize(bloch, &perm, &indices, &frame) {
                group.push(SymmetryElement { perm, realization });
            }
        }
        if !closure_holds(&group) {
            group = vec![SymmetryElement { perm: (0..n).collect(), realization: Mat3::IDENTITY }];
        }
    }

    let transitive = orbit_is_all(
        &group.iter().map(|e| e.perm.clone()).collect::<Vec<_>>(),
        n,
    );

    SymmetryInfo { group, transitive, centrally_symmetric: antipode.is_some(), antipode }
}

/// Audit closure under composition and inverse, including the realizations:
/// `R_g·R_h` must equal `R_{g∘h}` within tolerance.
fn closure_holds(group: &[SymmetryElement]) -> bool {
    if group.len() > CLOSURE_AUDIT_LIMIT {
        return true;
    }
    use std::collections::HashMap;
    let index: HashMap<&[usize], usize> =
        group.iter().enumerate().map(|(i, e)| (e.perm.as_slice(), i)).collect();
    for g in group {
        // Inverse permutation must be present.
        let mut inv = vec![0; g.perm.len()];
        for (i, &j) in g.perm.iter().enumerate() {
            inv[j] = i;
        }
        if !index.contains_key(inv.as_slice()) {
            return false;
        }
        for h in group {
            // (g ∘ h)(m) = g(h(m)).
            let composed: Vec<usize> = h.perm.iter().map(|&m| g.perm[m]).collect();
            match index.get(composed.as_slice()) {
                None => return false,
                Some(&k) => {
                    let product = g.realization.matmul(&h.realization);
                    if !product.approx_eq(&group[k].realization, SYM_TOL) {
                        return false;
                    }
                }
            }
        }
    }
    true
}
